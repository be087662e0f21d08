"""
tcqeve

Quantum resource estimation for transcorrelated electronic Hamiltonians:
Jordan-Wigner Pauli LCUs, dense spectral oracles, T-gate and qubit cost
models for qubitization and QEVE, and a desk-scale QEVE simulator.
"""

__version__ = "0.1.0"
