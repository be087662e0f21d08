"""
qeve_sim.py

Desk-scale numerical model of quantum eigenvalue estimation (QEVE) for
non-Hermitian operators with real spectra.

With h = (H - b0)/alpha_eff and ||h|| <= 1/2, the Chebyshev history state

    |Phi> = sum_{l<N} |l> T_l(h) |psi0>

equals C^-1 (1 - L (x) h)(|0> (x) |psi0>) for the lower shift L and the
denominator C = 1 - 2 L (x) h + L^2 (x) 1. A Fourier transform over the
ancilla index l puts peaks at the angles arccos(lambda_j / alpha_eff).

The linear solve is done classically with a sparse LU factorization; no
quantum solver is simulated.
"""

import json
import math
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np
import pandas as pd
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .cost_model import qeve_degree
from .errors import BoundViolationError, CapacityError, LinearSolveError, RescaleRequiredError, ValidationError
from .spectral_oracle import SpectralReport, analyze_matrix

# ==================== SIMULATION CONFIGURATION ====================
SCALED_NORM_LIMIT = 0.5
NORM_SLACK = 1e-12
PHI_WINDOW = (1.0 / 6.0, 1.0 / 3.0)
PEAK_WINDOW_BINS = 5
U_NORM_CONSTANT = math.sqrt(8.0 / 3.0)
DEFAULT_MAX_DEGREE = 4096
DENSE_NORM_CAP = 2048
IDENTITY_MAX_DEGREE = 32


# ============================================================================
# CHEBYSHEV POLYNOMIALS
# ============================================================================

def _check_domain(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + 1e-12):
        raise ValidationError("Chebyshev evaluation needs |x| <= 1")
    return x


def chebyshev_eval(ell: int, x):
    """T_ell(x) by the three-term recursion T_{l+1} = 2x T_l - T_{l-1}."""
    if ell < 0:
        raise ValidationError(f"degree must be nonnegative, got {ell}")
    x = _check_domain(x)
    previous, current = np.ones_like(x), x.copy()
    if ell == 0:
        current = previous
    for _ in range(ell - 1):
        previous, current = current, 2.0 * x * current - previous
    return float(current) if current.ndim == 0 else current


def chebyshev_u_eval(ell: int, x):
    """U_ell(x), second kind; U_{-1} = 0."""
    if ell < -1:
        raise ValidationError(f"degree must be >= -1, got {ell}")
    x = _check_domain(x)
    if ell == -1:
        result = np.zeros_like(x)
        return float(result) if result.ndim == 0 else result
    previous, current = np.ones_like(x), 2.0 * x
    if ell == 0:
        current = previous
    for _ in range(ell - 1):
        previous, current = current, 2.0 * x * current - previous
    return float(current) if current.ndim == 0 else current


# ============================================================================
# LINEAR SYSTEM
# ============================================================================

@dataclass(frozen=True, eq=False)
class ChebyshevSystem:
    n_degrees: int
    h_scaled: np.ndarray
    shift: np.ndarray
    denominator: scipy.sparse.csc_matrix
    scaled_norm: float
    norm_upper_bound: float
    norm_lower_certificate: float

    @property
    def dim(self) -> int:
        return self.h_scaled.shape[0]


def lower_shift(N: int) -> np.ndarray:
    return np.eye(N, k=-1)


def build_system(h_scaled: np.ndarray, N: int) -> ChebyshevSystem:
    """
    Assemble C = 1 - 2 L (x) h + L^2 (x) 1.

    ||C|| <= 1 + 2||h|| + 1 certifies ||C/4|| <= 3/4; applying C to |0>|v>
    with v the top singular vector of h certifies ||C|| >= sqrt(2 + 4||h||^2)
    once N >= 3.
    """
    h = np.asarray(h_scaled, dtype=complex)
    d = h.shape[0]
    if h.shape != (d, d) or d == 0:
        raise ValidationError(f"h_scaled must be square, got shape {h.shape}")
    if N < 1 or N & (N - 1):
        raise ValidationError(f"N must be a power of two, got {N}")

    _, singular_values, vh = scipy.linalg.svd(h)
    scaled_norm = float(singular_values[0])
    if scaled_norm > SCALED_NORM_LIMIT + NORM_SLACK:
        raise RescaleRequiredError(
            f"||H/alpha|| = {scaled_norm:.6f} > 1/2; rescale with effective_alpha"
        )

    L = scipy.sparse.eye(N, k=-1, format="csr", dtype=complex)
    C = (
        scipy.sparse.identity(N * d, dtype=complex, format="csr")
        - 2.0 * scipy.sparse.kron(L, scipy.sparse.csr_matrix(h), format="csr")
        + scipy.sparse.kron(L @ L, scipy.sparse.identity(d, dtype=complex), format="csr")
    ).tocsc()

    power = L.copy()
    for _ in range(N.bit_length() - 1):
        power = power @ power
    power.eliminate_zeros()
    if power.nnz:
        raise BoundViolationError("lower shift is not nilpotent of order N")

    upper = 1.0 + (2.0 * scaled_norm if N > 1 else 0.0) + (1.0 if N > 2 else 0.0)
    if upper / 4.0 > 0.75 + NORM_SLACK:
        raise BoundViolationError(f"||C/4|| bound {upper / 4:.6f} exceeds 3/4")

    trial = np.zeros(N * d, dtype=complex)
    trial[:d] = vh[0].conj()
    lower = float(np.linalg.norm(C @ trial))
    if N > 2 and lower < math.sqrt(2.0) - NORM_SLACK:
        raise BoundViolationError(f"||C|| certificate {lower:.6f} below sqrt(2)")

    return ChebyshevSystem(
        n_degrees=N,
        h_scaled=h,
        shift=lower_shift(N),
        denominator=C,
        scaled_norm=scaled_norm,
        norm_upper_bound=upper,
        norm_lower_certificate=lower,
    )


def _condition_estimate(C: scipy.sparse.csc_matrix, lu=None) -> float:
    if lu is None:
        return math.inf
    inverse = scipy.sparse.linalg.LinearOperator(
        C.shape, matvec=lu.solve, rmatvec=lambda v: lu.solve(v, trans="H"), dtype=C.dtype
    )
    return float(scipy.sparse.linalg.onenormest(C) * scipy.sparse.linalg.onenormest(inverse))


def denominator_norms(system: ChebyshevSystem) -> Tuple[float, float]:
    """Dense (||C||, ||C^-1||) for desk-scale systems."""
    size = system.denominator.shape[0]
    if size > DENSE_NORM_CAP:
        raise CapacityError(f"dense norms limited to {DENSE_NORM_CAP} rows, system has {size}")
    singular_values = scipy.linalg.svdvals(system.denominator.toarray())
    return float(singular_values[0]), float(1.0 / singular_values[-1])


# ============================================================================
# HISTORY STATES
# ============================================================================

@dataclass(frozen=True, eq=False)
class HistoryState:
    amplitudes: np.ndarray
    n_degrees: int
    dim: int
    fourier_distribution: Optional[np.ndarray] = None
    estimated_angle: Optional[float] = None
    estimated_energy: Optional[float] = None

    def blocks(self) -> np.ndarray:
        return self.amplitudes.reshape(self.n_degrees, self.dim)

    def block(self, ell: int) -> np.ndarray:
        return self.blocks()[ell]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def _check_state(h: np.ndarray, psi0) -> np.ndarray:
    psi = np.asarray(psi0, dtype=complex).reshape(-1)
    if psi.shape[0] != h.shape[0]:
        raise ValidationError(f"psi0 has length {psi.shape[0]}, operator acts on {h.shape[0]}")
    if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
        raise ValidationError("psi0 must be a unit vector")
    return psi


def history_state_direct(h_scaled: np.ndarray, psi0, N: int) -> HistoryState:
    """Blocks T_l(h)|psi0> from the matrix recursion."""
    h = np.asarray(h_scaled, dtype=complex)
    psi = _check_state(h, psi0)
    d = h.shape[0]
    blocks = np.zeros((N, d), dtype=complex)
    blocks[0] = psi
    if N > 1:
        blocks[1] = h @ psi
    for ell in range(2, N):
        blocks[ell] = 2.0 * (h @ blocks[ell - 1]) - blocks[ell - 2]
    return HistoryState(blocks.reshape(-1), N, d)


def history_state_via_inverse(system: ChebyshevSystem, psi0) -> HistoryState:
    """C^-1 (1 - L (x) h)(e0 (x) psi0) by sparse LU."""
    h, N, d = system.h_scaled, system.n_degrees, system.dim
    psi = _check_state(h, psi0)

    rhs = np.zeros(N * d, dtype=complex)
    rhs[:d] = psi
    if N > 1:
        rhs[d:2 * d] = -(h @ psi)

    C = system.denominator
    try:
        lu = scipy.sparse.linalg.splu(C)
    except RuntimeError as e:
        raise LinearSolveError(f"denominator factorization failed: {e}", _condition_estimate(C)) from e

    solution = lu.solve(rhs)
    residual = np.linalg.norm(C @ solution - rhs)
    if not np.all(np.isfinite(solution)) or residual > 1e-8 * max(1.0, np.linalg.norm(rhs)):
        raise LinearSolveError("denominator solve lost precision", _condition_estimate(C, lu))
    return HistoryState(solution, N, d)


# ============================================================================
# MEASUREMENT STATISTICS
# ============================================================================

def measure_distribution(hs: HistoryState) -> np.ndarray:
    """
    Angle-bin probabilities after a unitary DFT over the ancilla index.

    The joint vector is normalized first. Bin y stands for theta = 2 pi y / N;
    bins y and N - y are averaged since cos is even.
    """
    norm = hs.norm
    if norm == 0:
        raise ValidationError("history state is zero")
    amplitudes = hs.blocks() / norm
    transformed = np.fft.fft(amplitudes, axis=0) / math.sqrt(hs.n_degrees)
    probabilities = np.sum(np.abs(transformed) ** 2, axis=1)
    mirror = (-np.arange(hs.n_degrees)) % hs.n_degrees
    symmetric = 0.5 * (probabilities + probabilities[mirror])
    return symmetric / symmetric.sum()


def _folded_phi(N: int) -> np.ndarray:
    y = np.arange(N)
    return np.minimum(y, N - y) / N


def modal_angle(dist: np.ndarray, window: Tuple[float, float] = PHI_WINDOW) -> float:
    """phi = y/N of the most probable alias-merged bin with phi inside the window."""
    dist = np.asarray(dist, dtype=float)
    N = len(dist)
    lo = math.ceil(window[0] * N - 1e-9)
    hi = math.floor(window[1] * N + 1e-9)
    if hi < lo:
        raise ValidationError(f"N = {N} has no angle bin with phi in [{window[0]:.4f}, {window[1]:.4f}]")
    candidates = np.arange(lo, hi + 1)
    merged = dist[candidates] + np.where(
        (candidates % N != 0) & (2 * candidates != N), dist[(N - candidates) % N], 0.0
    )
    return float(candidates[int(np.argmax(merged))] / N)


def estimate_energy(dist: np.ndarray, alpha_eff: float) -> float:
    """alpha_eff * cos(2 pi phi) for the modal phi in [1/6, 1/3]; add b0 for the total energy."""
    return alpha_eff * math.cos(2.0 * math.pi * modal_angle(dist))


def mass_near_angle(dist: np.ndarray, phi: float, window: int = PEAK_WINDOW_BINS) -> float:
    """Probability within window/N of phi, counting both aliases."""
    dist = np.asarray(dist, dtype=float)
    N = len(dist)
    mask = np.abs(_folded_phi(N) - phi) <= window / N + 1e-12
    return float(dist[mask].sum())


def measure(hs: HistoryState, alpha_eff: float) -> HistoryState:
    dist = measure_distribution(hs)
    return replace(
        hs,
        fourier_distribution=dist,
        estimated_angle=modal_angle(dist),
        estimated_energy=estimate_energy(dist, alpha_eff),
    )


def default_initial_state(report: SpectralReport) -> np.ndarray:
    """Computational basis state with the largest ground-state overlap."""
    ground = np.asarray(report.ground_state)
    psi = np.zeros(report.dimension, dtype=complex)
    psi[int(np.argmax(np.abs(ground)))] = 1.0
    return psi


def walk_phase_distribution(h_scaled: np.ndarray, psi0, n_ancilla: int) -> np.ndarray:
    """
    Textbook phase-estimation statistics on a qubitization walk.

    For Hermitian h with ||h|| <= 1 the walk has eigenphases +-arccos(lambda_j)
    with weight |<lambda_j|psi0>|^2 split evenly; returns probabilities over
    the 2^n_ancilla outcomes.
    """
    h = np.asarray(h_scaled, dtype=complex)
    if np.max(np.abs(h - h.conj().T)) > 1e-12:
        raise ValidationError("walk statistics need a Hermitian operator")
    psi = _check_state(h, psi0)
    eigenvalues, vectors = scipy.linalg.eigh(h)
    if np.max(np.abs(eigenvalues)) > 1.0 + 1e-12:
        raise RescaleRequiredError("walk statistics need ||h|| <= 1")
    weights = np.abs(vectors.conj().T @ psi) ** 2

    M = 1 << n_ancilla
    outcomes = np.arange(M) / M
    steps = np.arange(M)
    phases = np.arccos(np.clip(eigenvalues, -1.0, 1.0)) / (2.0 * math.pi)
    probabilities = np.zeros(M)
    for weight, phase in zip(weights, phases):
        for sign in (1.0, -1.0):
            delta = sign * phase - outcomes
            amplitude = np.exp(2j * math.pi * np.outer(delta, steps)).sum(axis=1) / M
            probabilities += 0.5 * weight * np.abs(amplitude) ** 2
    return probabilities / probabilities.sum()


# ============================================================================
# BOUND CHECKS
# ============================================================================

def verify_bounds(
    system: ChebyshevSystem,
    report: SpectralReport,
    grid_points: int = 1000,
    identity_tolerance: float = 1e-12,
) -> pd.DataFrame:
    """
    Numerically check the norm bounds behind the QEVE query count.

    Returns:
    --------
    pd.DataFrame with columns check, measured, bound, holds; raises
    BoundViolationError when any row fails.
    """
    N, h = system.n_degrees, system.h_scaled
    kappa = report.kappa_S
    rows = []

    grid = np.linspace(-1.0, 1.0, grid_points)
    residual = 0.0
    for n in range(1, min(N, IDENTITY_MAX_DEGREE) + 1):
        t = chebyshev_eval(n, grid)
        u = chebyshev_u_eval(n - 1, grid)
        residual = max(residual, float(np.max(np.abs(t * t - (grid * grid - 1.0) * u * u - 1.0))))
    rows.append(("chebyshev_identity_residual", residual, identity_tolerance, residual <= identity_tolerance))

    identity = np.eye(system.dim, dtype=complex)
    previous, current = identity, 2.0 * h
    largest = 1.0
    for j in range(1, N):
        largest = max(largest, float(scipy.linalg.norm(current, 2)))
        previous, current = current, 2.0 * (h @ current) - previous
    u_bound = U_NORM_CONSTANT * kappa
    rows.append(("max_U_j_norm", largest, u_bound, largest <= u_bound * (1 + 1e-9)))

    c_norm, c_inverse_norm = denominator_norms(system)
    rows.append(("C_norm_over_4", c_norm / 4.0, 0.75, c_norm / 4.0 <= 0.75 + NORM_SLACK))
    if N > 2:
        rows.append(("C_norm_lower", c_norm, math.sqrt(2.0), c_norm >= math.sqrt(2.0) - NORM_SLACK))
    inverse_bound = N * U_NORM_CONSTANT * kappa
    rows.append(("C_inverse_norm", c_inverse_norm, inverse_bound, c_inverse_norm <= inverse_bound * (1 + 1e-9)))

    table = pd.DataFrame(rows, columns=["check", "measured", "bound", "holds"])
    if not table["holds"].all():
        failed = table.loc[~table["holds"], "check"].tolist()
        raise BoundViolationError(f"bound checks failed: {failed}", table)
    return table


# ============================================================================
# EXPERIMENTS
# ============================================================================

@dataclass(frozen=True)
class QeveExperiment:
    N: int
    alpha_eff: float
    kappa_S: float
    angle_error: float
    energy_error: float
    mass_within_5_over_N: float
    estimated_energy: float
    reference_energy: float

    def to_dict(self) -> Dict[str, float]:
        return {
            "N": self.N,
            "alpha_eff": self.alpha_eff,
            "kappa_S": self.kappa_S,
            "angle_error": self.angle_error,
            "energy_error": self.energy_error,
            "mass_within_5_over_N": self.mass_within_5_over_N,
            "estimated_energy": self.estimated_energy,
            "reference_energy": self.reference_energy,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def run_experiment(
    matrix: np.ndarray,
    epsilon: float,
    b0: complex = 0.0,
    alpha: Optional[float] = None,
    psi0=None,
    report: Optional[SpectralReport] = None,
    max_degree: int = DEFAULT_MAX_DEGREE,
    method: str = "inverse",
) -> QeveExperiment:
    """
    Full desk pipeline: rescale, pick N, build the history state, measure.

    Parameters:
    -----------
    matrix : np.ndarray
        Dense operator H (b0 included)
    epsilon : float
        Target energy tolerance, Hartree; sets N = next power of two >= 10 pi alpha_eff / epsilon
    alpha : float, optional
        LCU one-norm; alpha_eff = max(alpha, 2 ||H - b0||)
    method : str
        "inverse" (generating-function solve) or "direct" (recursion)
    """
    if epsilon <= 0:
        raise ValidationError("epsilon must be positive")
    if report is None:
        report = analyze_matrix(matrix, b0)
    alpha_eff = max(alpha or 0.0, 2.0 * report.shifted_norm)
    if alpha_eff == 0:
        raise ValidationError("operator is a multiple of the identity; nothing to estimate")

    N, _ = qeve_degree(alpha_eff, epsilon)
    if N > max_degree:
        raise CapacityError(
            f"Chebyshev degree {N} exceeds the desk cap {max_degree}; raise epsilon or --max-degree"
        )

    d = report.dimension
    h = (np.asarray(matrix, dtype=complex) - b0 * np.eye(d)) / alpha_eff
    psi = default_initial_state(report) if psi0 is None else psi0

    if method == "inverse":
        hs = history_state_via_inverse(build_system(h, N), psi)
    elif method == "direct":
        hs = history_state_direct(h, psi, N)
    else:
        raise ValidationError(f"unknown method {method!r}")
    hs = measure(hs, alpha_eff)

    reference = report.ground_energy
    shift = complex(b0).real
    phi_true = math.acos(max(-1.0, min(1.0, (reference - shift) / alpha_eff))) / (2.0 * math.pi)
    estimated = shift + hs.estimated_energy
    return QeveExperiment(
        N=N,
        alpha_eff=alpha_eff,
        kappa_S=report.kappa_S,
        angle_error=abs(hs.estimated_angle - phi_true),
        energy_error=abs(estimated - reference),
        mass_within_5_over_N=mass_near_angle(hs.fourier_distribution, phi_true),
        estimated_energy=estimated,
        reference_energy=reference,
    )
