"""
spectral_oracle.py

Dense desk-scale linear algebra on Pauli LCUs: explicit matrices, full
eigendecompositions with Jordan condition numbers, one-norm rescaling for
QEVE, and truncation perturbation experiments.

Eigenvalues are always sorted by real part, then imaginary part, so a report
is reproducible for a fixed input.
"""

import json
import math
import warnings
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.sparse

from .config import resolve_max_qubits
from .errors import (
    BoundViolationError,
    CapacityError,
    NearDefectiveWarning,
    NoRealSpectrumError,
    ValidationError,
)
from .pauli_algebra import PauliLCU, popcount_array, truncate

# ==================== NUMERIC CONVENTIONS ====================
REALITY_TOLERANCE = 1e-8          # times max(1, ||H||)
HERMITIAN_TOLERANCE = 1e-12       # times max(1, ||H||)
DEFECTIVE_CONDITION = 1e12
NEAR_DEFECTIVE_CONDITION = 1e6
LEAK_TOLERANCE = 1e-10
BOUND_SLACK = 1e-10

_I_POWERS = np.array([1.0, 1.0j, -1.0, -1.0j])


@dataclass(frozen=True, eq=False)
class SpectralReport:
    eigenvalues: np.ndarray
    ground_energy: float
    kappa_S: float
    max_imag: float
    spectral_norm: float
    shifted_norm: float
    diagonalizable: bool
    near_defective: bool
    hermitian: bool
    dimension: int
    b0: complex = 0.0
    sector: Optional[int] = None
    ground_state: np.ndarray = field(default=None, repr=False)

    @property
    def eigenvector_condition(self) -> float:
        return self.kappa_S

    def to_dict(self) -> Dict[str, object]:
        return {
            "eigenvalues": [[float(w.real), float(w.imag)] for w in self.eigenvalues],
            "ground_energy": self.ground_energy,
            "kappa_S": self.kappa_S,
            "max_imag": self.max_imag,
            "spectral_norm": self.spectral_norm,
            "shifted_norm": self.shifted_norm,
            "diagonalizable": self.diagonalizable,
            "near_defective": self.near_defective,
            "eigenvector_condition": self.kappa_S,
            "hermitian": self.hermitian,
            "dimension": self.dimension,
            "b0": [float(complex(self.b0).real), float(complex(self.b0).imag)],
            "sector": self.sector,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


# ============================================================================
# DENSE MATRICES
# ============================================================================

def sector_basis(n_qubits: int, n_electrons: int) -> np.ndarray:
    """Basis indices with exactly n_electrons set bits, ascending."""
    if not 0 <= n_electrons <= n_qubits:
        raise ValidationError(f"sector {n_electrons} impossible on {n_qubits} qubits")
    full = np.arange(1 << n_qubits, dtype=np.int64)
    return full[popcount_array(full) == n_electrons]


def dense_matrix(
    lcu: PauliLCU,
    particle_sector: Optional[int] = None,
    max_qubits: Optional[int] = None,
    config: Optional[Dict] = None,
) -> np.ndarray:
    """
    b0 * I + sum_j b_j U_j as a dense matrix.

    Parameters:
    -----------
    lcu : PauliLCU
    particle_sector : int, optional
        Restrict to basis states with this many set bits. The LCU must not
        couple the sector to the rest of the space.
    max_qubits : int, optional
        Cap override; defaults come from config / TCQEVE_MAX_QUBITS

    Returns:
    --------
    np.ndarray of shape (2^n, 2^n), or the sector block
    """
    n = lcu.n_qubits
    cap = max_qubits if max_qubits is not None else resolve_max_qubits(
        None, config, sector=particle_sector is not None
    )
    if n > cap:
        raise CapacityError(
            f"{n} qubits exceeds the dense-oracle cap of {cap}; "
            "use --sector, --max-qubits or TCQEVE_MAX_QUBITS"
        )

    if particle_sector is None:
        basis = np.arange(1 << n, dtype=np.int64)
        lookup = None
    else:
        basis = sector_basis(n, particle_sector)
        lookup = np.full(1 << n, -1, dtype=np.int64)
        lookup[basis] = np.arange(len(basis))

    dim = len(basis)
    matrix = np.zeros((dim, dim), dtype=complex)
    leaked = None
    x, z, c = lcu.arrays()
    cols = np.arange(dim, dtype=np.int64)
    chunk = max(1, (1 << 22) // max(dim, 1))

    for start in range(0, len(c), chunk):
        xs, zs, cs = x[start:start + chunk], z[start:start + chunk], c[start:start + chunk]
        rows = basis[None, :] ^ xs[:, None]
        signs = 1 - 2 * (popcount_array(basis[None, :] & zs[:, None]) & 1)
        values = (cs * _I_POWERS[popcount_array(xs & zs) % 4])[:, None] * signs
        columns = np.broadcast_to(cols, rows.shape)
        if lookup is None:
            np.add.at(matrix, (rows, columns), values)
            continue
        local = lookup[rows]
        inside = local >= 0
        np.add.at(matrix, (local[inside], columns[inside]), values[inside])
        if np.any(~inside):
            block = scipy.sparse.coo_matrix(
                (values[~inside], (rows[~inside], columns[~inside])), shape=(1 << n, dim)
            ).tocsr()
            leaked = block if leaked is None else leaked + block

    if leaked is not None:
        leaked.sum_duplicates()
        worst = float(np.max(np.abs(leaked.data))) if leaked.nnz else 0.0
        if worst > LEAK_TOLERANCE * max(1.0, lcu.alpha):
            raise ValidationError(
                f"operator leaves the {particle_sector}-electron sector "
                f"(leaked amplitude {worst:.3e}); particle number is not conserved"
            )

    matrix[np.diag_indices(dim)] += lcu.b0
    return matrix


# ============================================================================
# EIGENDECOMPOSITION
# ============================================================================

def analyze_matrix(matrix: np.ndarray, b0: complex = 0.0, sector: Optional[int] = None) -> SpectralReport:
    """Full eigendecomposition H = S D S^-1 with unit-norm columns of S."""
    H = np.asarray(matrix, dtype=complex)
    dim = H.shape[0]
    if dim == 0 or H.shape != (dim, dim):
        raise ValidationError(f"cannot analyze a matrix of shape {H.shape}")

    spectral_norm = float(scipy.linalg.norm(H, 2))
    shifted_norm = float(scipy.linalg.norm(H - b0 * np.eye(dim), 2))
    scale = max(1.0, spectral_norm)
    hermitian = bool(np.max(np.abs(H - H.conj().T)) <= HERMITIAN_TOLERANCE * scale)

    if hermitian:
        w, S = scipy.linalg.eigh(0.5 * (H + H.conj().T))
        w = w.astype(complex)
    else:
        w, S = scipy.linalg.eig(H)
    S = S / np.linalg.norm(S, axis=0)

    order = np.lexsort((w.imag, w.real))
    w, S = w[order], S[:, order]

    kappa = float(np.linalg.cond(S, 2))
    if not math.isfinite(kappa):
        kappa = math.inf
    kappa = max(1.0, kappa)

    tol = REALITY_TOLERANCE * scale
    real = np.abs(w.imag) <= tol
    if not np.any(real):
        raise NoRealSpectrumError(
            f"all {dim} eigenvalues have |Im| > {tol:.1e} Ha; "
            "this transcorrelated realization has no usable real spectrum"
        )
    candidates = np.flatnonzero(real)
    ground_index = candidates[np.argmin(w.real[candidates])]

    diagonalizable = kappa <= DEFECTIVE_CONDITION
    near_defective = kappa >= NEAR_DEFECTIVE_CONDITION
    if not diagonalizable:
        warnings.warn(
            f"eigenvector matrix condition {kappa:.3e} exceeds {DEFECTIVE_CONDITION:.0e}; "
            "treating the operator as non-diagonalizable",
            NearDefectiveWarning,
            stacklevel=2,
        )
    elif near_defective:
        warnings.warn(
            f"eigenvector matrix condition {kappa:.3e}: operator is close to defective",
            NearDefectiveWarning,
            stacklevel=2,
        )

    ground_state = S[:, ground_index].copy()
    w.setflags(write=False)
    ground_state.setflags(write=False)
    return SpectralReport(
        eigenvalues=w,
        ground_energy=float(w[ground_index].real),
        kappa_S=kappa,
        max_imag=float(np.max(np.abs(w.imag))),
        spectral_norm=spectral_norm,
        shifted_norm=shifted_norm,
        diagonalizable=diagonalizable,
        near_defective=near_defective,
        hermitian=hermitian,
        dimension=dim,
        b0=complex(b0),
        sector=sector,
        ground_state=ground_state,
    )


def analyze(
    lcu: PauliLCU,
    particle_sector: Optional[int] = None,
    max_qubits: Optional[int] = None,
    config: Optional[Dict] = None,
) -> SpectralReport:
    """Spectral report of the LCU, optionally within a particle-number sector."""
    matrix = dense_matrix(lcu, particle_sector, max_qubits, config)
    report = analyze_matrix(matrix, lcu.b0, particle_sector)
    if report.shifted_norm > lcu.alpha * (1 + 1e-9) + 1e-12:
        raise BoundViolationError(
            f"||H - b0|| = {report.shifted_norm:.6g} exceeds alpha = {lcu.alpha:.6g}"
        )
    return report


def effective_alpha(
    lcu: PauliLCU,
    report: Optional[SpectralReport] = None,
    norm_estimate: Optional[float] = None,
) -> float:
    """
    One-norm used to scale H for QEVE so that ||(H - b0)/alpha_eff|| <= 1/2.

    With a dense report this is max(alpha, 2 ||H - b0||). Without one, the
    user estimate of ||H - b0|| stands in, defaulting to alpha (giving 2 alpha).
    """
    if report is not None:
        return max(lcu.alpha, 2.0 * report.shifted_norm)
    estimate = lcu.alpha if norm_estimate is None else norm_estimate
    return max(lcu.alpha, 2.0 * estimate)


# ============================================================================
# PERTURBATION EXPERIMENTS
# ============================================================================

def _eigenvalue_shift(original: np.ndarray, perturbed: np.ndarray, hermitian: bool) -> float:
    if hermitian:
        return float(np.max(np.abs(np.sort(original.real) - np.sort(perturbed.real)), initial=0.0))
    distances = np.abs(perturbed[:, None] - original[None, :])
    return float(np.max(np.min(distances, axis=1), initial=0.0))


def perturbation_experiment(
    lcu: PauliLCU,
    mu_range: Iterable[int],
    report: Optional[SpectralReport] = None,
    max_qubits: Optional[int] = None,
) -> pd.DataFrame:
    """
    Eigenvalue displacement caused by coefficient truncation.

    Parameters:
    -----------
    lcu : PauliLCU
        Desk-scale operator (full Fock space)
    mu_range : iterable of int
        Keep-register widths to test
    report : SpectralReport, optional
        Precomputed report of the untruncated operator

    Returns:
    --------
    pd.DataFrame with columns mu, terms_kept, dropped_weight, shift, bound,
    weight_bound, holds. Hermitian shifts compare sorted eigenvalues (Weyl);
    non-Hermitian shifts are the largest distance from a perturbed eigenvalue
    to the original spectrum (Bauer-Fike), and bounds carry a kappa_S factor.
    """
    if report is None:
        report = analyze(lcu, max_qubits=max_qubits)
    if report.sector is not None:
        raise ValidationError("perturbation experiments run on the full Fock space, not a sector")
    factor = 1.0 if report.hermitian else report.kappa_S
    slack = BOUND_SLACK * max(1.0, report.spectral_norm)

    rows = []
    for mu in mu_range:
        truncated = truncate(lcu, mu)
        matrix = dense_matrix(truncated.lcu, max_qubits=lcu.n_qubits)
        if report.hermitian:
            perturbed = scipy.linalg.eigvalsh(0.5 * (matrix + matrix.conj().T)).astype(complex)
        else:
            perturbed = scipy.linalg.eigvals(matrix)
        shift = _eigenvalue_shift(np.asarray(report.eigenvalues), perturbed, report.hermitian)
        bound = factor * lcu.K * math.ldexp(lcu.alpha, -mu)
        rows.append({
            "mu": mu,
            "terms_kept": truncated.lcu.K,
            "dropped_weight": truncated.dropped_weight,
            "shift": shift,
            "bound": bound,
            "weight_bound": factor * truncated.dropped_weight,
            "holds": shift <= bound + slack,
        })

    table = pd.DataFrame(rows, columns=["mu", "terms_kept", "dropped_weight", "shift", "bound", "weight_bound", "holds"])
    if not table.empty and not table["holds"].all():
        failed = table.loc[~table["holds"], "mu"].tolist()
        raise BoundViolationError(f"truncation shift exceeds its bound at mu={failed}", table)
    return table
