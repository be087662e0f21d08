"""
reference_data.py

Published resource-estimate tables for the second-row atoms Li through Ne:
- one-norms and Pauli term counts per basis (conventional and transcorrelated)
- Jordan condition numbers of the transcorrelated STO-6G Hamiltonians
- T-gate and logical-qubit counts for QROM and gate-optimal QROAM
- ground-state energies of Li and Be

Bases are keyed "STO-6G", "cc-pVDZ", "cc-pVTZ", "cc-pVQZ" and "TC-STO-6G";
the transcorrelated rows are costed with QEVE, every other row with
qubitization.
"""

from typing import Dict, Tuple

ATOMS = ("Li", "Be", "B", "C", "N", "O", "F", "Ne")
BASES = ("STO-6G", "cc-pVDZ", "cc-pVTZ", "cc-pVQZ", "TC-STO-6G")
COSTED_BASES = ("cc-pVDZ", "cc-pVTZ", "cc-pVQZ", "TC-STO-6G")
MODES = ("QROM", "QROAM")

TC_BASIS = "TC-STO-6G"
PUBLISHED_EPSILON = 0.0016   # Hartree


# ══════════════════════════════════════════════════════════════════════
# SYSTEM SIZES
# ══════════════════════════════════════════════════════════════════════

SPIN_ORBITALS: Dict[str, int] = {
    "STO-6G":    10,
    "cc-pVDZ":   28,
    "cc-pVTZ":   60,
    "cc-pVQZ":  110,
    "TC-STO-6G": 10,
}


# ══════════════════════════════════════════════════════════════════════
# ONE-NORMS (Hartree)
# ══════════════════════════════════════════════════════════════════════

ONE_NORMS: Dict[str, Tuple[float, ...]] = {
    #               Li      Be      B       C       N       O       F       Ne
    "STO-6G":    (8.2,   12.0,   17.4,   26.0,   36.2,   48.4,   62.3,   78.2),
    "cc-pVDZ":   (67.4,  112.5,  121.7,  154.5,  202.8,  203.6,  242.0,  293.7),
    "cc-pVTZ":   (583.0, 839.0,  891.0,  1100.0, 1630.0, 1530.0, 1760.0, 2390.0),
    "cc-pVQZ":   (2800.0, 4320.0, 4000.0, 5200.0, 8170.0, 7000.0, 8060.0, 12000.0),
    "TC-STO-6G": (6.0,   12.0,   18.1,   27.0,   49.1,   76.3,   94.6,   106.5),
}


# ══════════════════════════════════════════════════════════════════════
# PAULI TERM COUNTS
# ══════════════════════════════════════════════════════════════════════

TERM_COUNTS: Dict[str, Tuple[int, ...]] = {
    "STO-6G":    (154, 154, 154, 154, 154, 154, 154, 154),
    "cc-pVDZ":   (12700, 22500, 11000, 11000, 23000, 11000, 11000, 23000),
    "cc-pVTZ":   (502000, 537000, 239000, 239000, 547000, 239000, 239000, 548000),
    "cc-pVQZ":   (6100000, 6230000, 2620000, 2620000, 6390000, 2610000, 2620000, 6390000),
    "TC-STO-6G": (934, 958, 958, 910, 958, 958, 910, 910),
}


# ══════════════════════════════════════════════════════════════════════
# JORDAN CONDITION NUMBERS (TC, STO-6G)
# ══════════════════════════════════════════════════════════════════════

KAPPA_S: Tuple[float, ...] = (3.1, 10.0, 7.7, 7.1, 13.89, 4.43, 37.8, 5.06)

# Observed spread over Jastrow realizations
KAPPA_S_RANGE = {
    "Li": (3.1, 25.7),
    "Be": (4.1, 10.1),
}


# ══════════════════════════════════════════════════════════════════════
# T-GATE COUNTS
# ══════════════════════════════════════════════════════════════════════

T_COUNTS: Dict[Tuple[str, str], Tuple[float, ...]] = {
    ("cc-pVDZ", "QROM"):    (6.4e11, 1.1e12, 5.5e11, 1.1e12, 2.3e12, 1.1e12, 1.1e12, 4.6e12),
    ("cc-pVDZ", "QROAM"):   (2.6e11, 4.5e11, 2.3e11, 4.7e11, 9.2e11, 4.7e11, 4.6e11, 1.8e12),
    ("cc-pVTZ", "QROM"):    (2.0e14, 2.2e14, 9.6e13, 1.9e14, 4.4e14, 1.9e14, 1.9e14, 8.8e14),
    ("cc-pVTZ", "QROAM"):   (7.0e13, 7.5e13, 3.4e13, 6.8e13, 1.5e14, 6.8e13, 6.8e13, 3.1e14),
    ("cc-pVQZ", "QROM"):    (9.8e15, 2.0e16, 4.2e15, 8.4e15, 2.1e16, 8.4e15, 8.4e15, 4.1e16),
    ("cc-pVQZ", "QROAM"):   (3.3e15, 6.8e15, 1.4e15, 2.9e15, 7.0e15, 2.9e15, 2.9e15, 1.4e16),
    ("TC-STO-6G", "QROM"):  (7.2e14, 2.4e15, 3.7e15, 3.3e15, 1.4e16, 8.8e15, 7.2e16, 9.6e15),
    ("TC-STO-6G", "QROAM"): (4.7e14, 1.5e15, 2.4e15, 2.2e15, 9.1e15, 5.9e15, 5.0e16, 6.6e15),
}


# ══════════════════════════════════════════════════════════════════════
# LOGICAL QUBIT COUNTS
# ══════════════════════════════════════════════════════════════════════

QUBIT_COUNTS: Dict[Tuple[str, str], Tuple[int, ...]] = {
    ("cc-pVDZ", "QROM"):    (136, 142, 137, 138, 144, 139, 139, 145),
    ("cc-pVDZ", "QROAM"):   (1032, 1098, 1063, 1064, 1130, 1095, 1095, 1131),
    ("cc-pVTZ", "QROM"):    (200, 205, 195, 197, 207, 197, 197, 208),
    ("cc-pVTZ", "QROAM"):   (10099, 10358, 4977, 5105, 10614, 5105, 5105, 10615),
    ("cc-pVQZ", "QROM"):    (274, 275, 269, 270, 276, 271, 271, 278),
    ("cc-pVQZ", "QROAM"):   (23216, 23217, 22701, 22702, 23728, 23213, 23213, 24240),
    ("TC-STO-6G", "QROM"):  (94, 97, 98, 98, 101, 101, 104, 102),
    ("TC-STO-6G", "QROAM"): (242, 263, 264, 264, 279, 273, 294, 280),
}


# ══════════════════════════════════════════════════════════════════════
# GROUND-STATE ENERGIES (Hartree)
# ══════════════════════════════════════════════════════════════════════

REFERENCE_ENERGIES = {
    "Li": {
        "experiment": -7.47806,
        "FCI/cc-pVDZ": -7.43264,
        "FCI/cc-pVTZ": -7.44607,
        "FCI/cc-pVQZ": -7.44983,
        "TC-FCI/STO-6G": (-7.471, 0.001),
    },
    "Be": {
        "experiment": -14.66736,
        "FCI/cc-pVDZ": -14.61741,
        "FCI/cc-pVTZ": -14.62381,
        "FCI/cc-pVQZ": -14.64001,   # DMRG+SCI estimate
        "TC-FCI/STO-6G": (-14.667, 0.004),
    },
}


def lookup(table: Dict, key, atom: str):
    """Entry of a per-atom row, e.g. lookup(ONE_NORMS, "cc-pVDZ", "Li")."""
    return table[key][ATOMS.index(atom)]
