"""
cost_model.py

Fault-tolerant T-gate and logical-qubit costs for two block-encoding
pipelines on a Pauli LCU:

- qubitization: quantum phase estimation on the qubitization walk
- qeve: quantum eigenvalue estimation through a Chebyshev history state
  prepared by a quantum linear-system solver

Walk costs are exact integers (1 Toffoli = 4 T). Only the linear-solver call
count of QEVE is real valued.
"""

import json
import math
from dataclasses import asdict, dataclass, fields, replace
from functools import partial
from typing import Callable, Dict, Optional, Tuple, Union

import pandas as pd

from .errors import ConfigurationError, ValidationError
from .pauli_algebra import PauliLCU, truncate
from .spectral_oracle import SpectralReport, effective_alpha

# ==================== COST MODEL CONFIGURATION ====================
TOFFOLI_T = 4
SOLVER_CONSTANT = 2305                    # average solver queries per unit condition number
U_NORM_CONSTANT = math.sqrt(8.0 / 3.0)    # max |U_j(x)| for |x| <= 1/2
DEGREE_FACTOR = 10.0 * math.pi            # N ~ 10 pi alpha / epsilon

METHODS = ("qubitization", "qeve")
QROAM_MODES = ("qrom", "optimize-gates", "optimize-qubits", "fixed-q")
DEGREE_ROUNDINGS = ("power-of-two", "exact")
QUBIT_ACCOUNTINGS = ("registers", "compact")


# ============================================================================
# BUDGET
# ============================================================================

@dataclass(frozen=True)
class BudgetConfig:
    epsilon_total: float = 0.0016
    split: float = 0.5
    p_fail: float = 0.25
    repetition_factor: float = 2.0
    qroam_mode: str = "optimize-gates"
    q_fixed: Optional[int] = None
    t_ceiling: Optional[float] = None
    degree_rounding: str = "power-of-two"
    qubit_accounting: str = "registers"

    def __post_init__(self):
        if not self.epsilon_total > 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon_total}")
        if not 0 < self.split < 1:
            raise ValidationError(f"split must lie in (0, 1), got {self.split}")
        if not 0 < self.p_fail < 0.5:
            raise ValidationError(f"p_fail must lie in (0, 1/2), got {self.p_fail}")
        if not self.repetition_factor >= 1:
            raise ValidationError(f"repetition_factor must be >= 1, got {self.repetition_factor}")
        if self.qroam_mode not in QROAM_MODES:
            raise ConfigurationError(f"unknown QROAM mode {self.qroam_mode!r}; choose from {QROAM_MODES}")
        if self.qroam_mode == "fixed-q" and not _is_power_of_two(self.q_fixed):
            raise ConfigurationError(f"fixed-q mode needs a power-of-two q, got {self.q_fixed}")
        if self.qroam_mode == "optimize-qubits" and not (self.t_ceiling and self.t_ceiling > 0):
            raise ConfigurationError("optimize-qubits mode needs a positive t_ceiling")
        if self.degree_rounding not in DEGREE_ROUNDINGS:
            raise ConfigurationError(f"degree_rounding must be one of {DEGREE_ROUNDINGS}")
        if self.qubit_accounting not in QUBIT_ACCOUNTINGS:
            raise ConfigurationError(f"qubit_accounting must be one of {QUBIT_ACCOUNTINGS}")

    @property
    def epsilon_phase(self) -> float:
        """Share of the budget for phase (qubitization) or degree (QEVE) error."""
        return self.split * self.epsilon_total

    @property
    def epsilon_truncation(self) -> float:
        return (1.0 - self.split) * self.epsilon_total

    @classmethod
    def from_config(cls, config: Dict) -> "BudgetConfig":
        section = dict((config or {}).get("budget") or {})
        known = {f.name for f in fields(cls)}
        unknown = set(section) - known
        if unknown:
            raise ConfigurationError(f"unknown budget keys: {sorted(unknown)}")
        return cls(**section)

    def with_overrides(self, **overrides) -> "BudgetConfig":
        """Replace fields whose override is not None."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})

    def to_dict(self) -> Dict[str, object]:
        return asdict(self)


def parse_qroam_mode(text: str) -> Tuple[str, Optional[int]]:
    """'qrom', 'optimize-gates', 'optimize-qubits' or 'q=<2^k>' -> (mode, q_fixed)."""
    text = text.strip().lower()
    if text.startswith("q="):
        try:
            q = int(text[2:])
        except ValueError:
            raise ConfigurationError(f"cannot read QROAM parameter from {text!r}") from None
        if not _is_power_of_two(q):
            raise ConfigurationError(f"QROAM q must be a power of two, got {q}")
        return "fixed-q", q
    if text not in QROAM_MODES or text == "fixed-q":
        raise ConfigurationError(f"unknown QROAM mode {text!r}")
    return text, None


# ============================================================================
# ARITHMETIC HELPERS
# ============================================================================

def _is_power_of_two(value) -> bool:
    return isinstance(value, int) and value >= 1 and value & (value - 1) == 0


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def ceil_log2(x: Union[int, float]) -> int:
    """Exact ceil(log2 x); integers by bit length, floats by their binary exponent."""
    if isinstance(x, bool):
        raise ValidationError("ceil_log2 needs a number")
    if isinstance(x, int):
        if x <= 0:
            raise ValidationError(f"ceil_log2 needs a positive argument, got {x}")
        return (x - 1).bit_length()
    x = float(x)
    if not (x > 0 and math.isfinite(x)):
        raise ValidationError(f"ceil_log2 needs a positive finite argument, got {x}")
    mantissa, exponent = math.frexp(x)
    return exponent - 1 if mantissa == 0.5 else exponent


def _check_walk_inputs(K: int, mu: int, q: int) -> int:
    if K < 2:
        raise ValidationError(f"walk costs need at least two terms, got K = {K}")
    if mu < 1:
        raise ValidationError(f"mu must be >= 1, got {mu}")
    if not _is_power_of_two(q) or q >= K:
        raise ValidationError(f"q must be a power of two with 1 <= q < K, got q = {q}, K = {K}")
    return ceil_log2(K)


# ============================================================================
# QUBITIZATION
# ============================================================================

def mu_qubitization(alpha: float, K: int, epsilon: float, split: float = 0.5) -> int:
    """Keep-register width ceil(log2(alpha K / eps_trunc)), clamped to >= 1."""
    if alpha <= 0 or K <= 0 or epsilon <= 0:
        raise ValidationError("mu needs positive alpha, K and epsilon")
    return max(1, ceil_log2(alpha * K / ((1.0 - split) * epsilon)))


def qpe_ancillas(alpha: float, epsilon_qpe: float, p_fail: float = 0.25) -> int:
    if alpha <= 0 or epsilon_qpe <= 0:
        raise ValidationError("QPE ancillas need positive alpha and epsilon")
    if not 0 < p_fail < 0.5:
        raise ValidationError(f"p_fail must lie in (0, 1/2), got {p_fail}")
    return ceil_log2(2.0 * math.pi * alpha / epsilon_qpe) + ceil_log2(2.0 + 1.0 / (2.0 * p_fail))


def walk_calls_qpe(alpha: float, epsilon_qpe: float, p_fail: float = 0.25) -> int:
    """2^n_a - 1; equals 4 * 2^ceil(log2(2 pi alpha / eps_qpe)) - 1 for p_fail in [1/4, 1/2)."""
    return (1 << qpe_ancillas(alpha, epsilon_qpe, p_fail)) - 1


def qroam_toffolis(K: int, mu: int, q: int) -> int:
    """Toffolis of one QROAM lookup of (mu + ceil(log2 K))-bit words."""
    lk = _check_walk_inputs(K, mu, q)
    return _ceil_div(K, q) + (mu + lk) * (q - 1)


def qroam_ancillas(K: int, mu: int, q: int) -> int:
    lk = _check_walk_inputs(K, mu, q)
    if q == 1:
        return 0
    return (mu + lk) * (q - 1) + ceil_log2(_ceil_div(K, q))


def prep_cost(K: int, mu: int, q: int = 1) -> int:
    """T gates for coherent alias sampling PREP with a QROAM of parameter q."""
    lk = _check_walk_inputs(K, mu, q)
    return TOFFOLI_T * qroam_toffolis(K, mu, q) + 4 * mu + 12 * lk


def sel_cost(K: int) -> int:
    if K < 2:
        raise ValidationError(f"SELECT needs at least two terms, got K = {K}")
    return 4 * K - 4


def reflection_cost(K: int) -> int:
    if K < 2:
        raise ValidationError(f"reflection needs at least two terms, got K = {K}")
    return 4 * (ceil_log2(K) - 1)


def walk_cost_qubitization(K: int, mu: int, q: int = 1) -> int:
    """One controlled walk: SELECT, PREP and its inverse at equal cost, reflection."""
    lk = _check_walk_inputs(K, mu, q)
    return 4 * K + 8 * mu + 8 * (q - 1) * (mu + lk) + 8 * _ceil_div(K, q) + 28 * lk - 8


# ============================================================================
# QEVE
# ============================================================================

def qeve_degree(alpha_eff: float, epsilon_qeve: float, rounding: str = "power-of-two") -> Tuple[int, int]:
    """
    Chebyshev degree N >= 10 pi alpha_eff / eps_qeve and its register width n.

    "power-of-two" rounds N up to 2^n; "exact" keeps ceil(10 pi alpha/eps).
    """
    if alpha_eff <= 0 or epsilon_qeve <= 0:
        raise ValidationError("QEVE degree needs positive alpha_eff and epsilon")
    target = DEGREE_FACTOR * alpha_eff / epsilon_qeve
    n = max(0, ceil_log2(target))
    if rounding == "power-of-two":
        return 1 << n, n
    if rounding == "exact":
        return max(1, math.ceil(target)), n
    raise ConfigurationError(f"degree_rounding must be one of {DEGREE_ROUNDINGS}")


def mu_qeve(alpha: float, K: int, kappa_S: float, epsilon: float, split: float = 0.5) -> int:
    if kappa_S < 1:
        raise ValidationError(f"kappa_S must be >= 1, got {kappa_S}")
    if alpha <= 0 or K <= 0 or epsilon <= 0:
        raise ValidationError("mu needs positive alpha, K and epsilon")
    return max(1, ceil_log2(alpha * K * kappa_S / ((1.0 - split) * epsilon)))


def linear_solver_calls(kappa: float) -> float:
    """Average block-encoding calls of the linear solver at error 1/sqrt(2)."""
    return 2 * SOLVER_CONSTANT * math.sqrt(2.0) * kappa


def denominator_condition_bound(N: int, kappa_S: float) -> float:
    """kappa(C) <= ||C|| ||C^-1|| <= 3 * N * sqrt(8/3) * kappa_S."""
    return 3.0 * N * U_NORM_CONSTANT * kappa_S


def qeve_walk_calls(N: int, kappa_S: float, repetition_factor: float = 1.0) -> float:
    """18440 sqrt(3) N kappa_S walk calls, times repetition_factor."""
    return linear_solver_calls(denominator_condition_bound(N, kappa_S)) * repetition_factor


def qeve_walk_calls_closed_form(alpha_eff: float, kappa_S: float, epsilon_qeve: float) -> float:
    return 184400.0 * math.sqrt(3.0) * math.pi * alpha_eff * kappa_S / epsilon_qeve


def be_cost_qeve(K: int, mu: int, q: int = 1) -> int:
    """Block encoding of H: SELECT plus PREP and its inverse."""
    return sel_cost(K) + 2 * prep_cost(K, mu, q)


def shift_cost(n: int) -> int:
    """Controlled increment of the n-qubit Chebyshev index."""
    if n < 0:
        raise ValidationError(f"register width must be nonnegative, got {n}")
    return 2 * n * (n - 1)


def denominator_cost(K: int, mu: int, q: int, n: int) -> int:
    return be_cost_qeve(K, mu, q) + 3 * shift_cost(n)


def qeve_reflection_cost(K: int) -> int:
    """Reflection on the index register plus the two LCU-of-C qubits."""
    if K < 2:
        raise ValidationError(f"reflection needs at least two terms, got K = {K}")
    return 4 * (ceil_log2(K) + 1)


def walk_cost_qeve(K: int, mu: int, q: int, n: int) -> int:
    return denominator_cost(K, mu, q, n) + qeve_reflection_cost(K)


# ============================================================================
# QROAM OPTIMIZATION AND QUBITS
# ============================================================================

def _qroam_candidates(K: int):
    q = 1
    while q < K:
        yield q
        q <<= 1


def optimize_qroam(K: int, mu: int, cost_fn: Callable[[int, int, int], int] = walk_cost_qubitization) -> int:
    """Power-of-two q minimizing cost_fn(K, mu, q); ties go to the smaller q."""
    best_q, best_cost = 1, cost_fn(K, mu, 1)
    for q in _qroam_candidates(K):
        cost = cost_fn(K, mu, q)
        if cost < best_cost:
            best_q, best_cost = q, cost
    return best_q


def optimize_qroam_qubits(
    K: int,
    mu: int,
    cost_fn: Callable[[int, int, int], int],
    t_ceiling: float,
    walk_calls: float,
) -> int:
    """Fewest QROAM ancillas whose total T count stays under t_ceiling."""
    feasible = [q for q in _qroam_candidates(K) if walk_calls * cost_fn(K, mu, q) <= t_ceiling]
    if not feasible:
        best = min(walk_calls * cost_fn(K, mu, q) for q in _qroam_candidates(K))
        raise ConfigurationError(
            f"no QROAM setting reaches the T ceiling {t_ceiling:.3g}; best achievable is {best:.3g}"
        )
    return min(feasible, key=lambda q: (qroam_ancillas(K, mu, q), q))


def qubit_count(
    method: str,
    K: int,
    mu: int,
    q: int,
    n_or_na: int,
    n_system: int,
    accounting: str = "registers",
) -> int:
    """
    Logical qubits of one estimation circuit.

    "registers" counts index and alternate-index registers of width
    ceil(log2 K), keep and sigma registers of width mu, then the phase
    register n_a (qubitization) or n + 3 (Chebyshev index, two LCU-of-C
    qubits, doubling qubit). "compact" counts 4 ceil(log2 K) + mu + n_a|n.
    QROAM ancillas are added when q > 1.
    """
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}")
    lk = ceil_log2(K)
    extra = qroam_ancillas(K, mu, q)
    if accounting == "registers":
        phase = n_or_na if method == "qubitization" else n_or_na + 3
        return n_system + 2 * lk + 2 * mu + phase + extra
    if accounting == "compact":
        return n_system + 4 * lk + mu + n_or_na + extra
    raise ConfigurationError(f"qubit accounting must be one of {QUBIT_ACCOUNTINGS}")


# ============================================================================
# REPORTS
# ============================================================================

@dataclass(frozen=True)
class CostReport:
    method: str
    K: int
    alpha: float
    mu: int
    q: int
    n_a: int
    walk_calls: float
    t_per_call: int
    t_total: float
    logical_qubits: int
    epsilon: float
    n_system: int
    budget: BudgetConfig
    alpha_eff: Optional[float] = None
    kappa_S: Optional[float] = None
    truncated_weight: float = 0.0

    def to_dict(self) -> Dict[str, object]:
        data = asdict(self)
        data["budget"] = self.budget.to_dict()
        return data

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _select_q(K: int, mu: int, cost_fn, cfg: BudgetConfig, calls: float) -> int:
    if cfg.qroam_mode == "qrom":
        return 1
    if cfg.qroam_mode == "fixed-q":
        if cfg.q_fixed >= K:
            raise ValidationError(f"q = {cfg.q_fixed} must be below K = {K}")
        return cfg.q_fixed
    if cfg.qroam_mode == "optimize-gates":
        return optimize_qroam(K, mu, cost_fn)
    return optimize_qroam_qubits(K, mu, cost_fn, cfg.t_ceiling, calls)


def _assemble(
    method: str,
    alpha: float,
    K: int,
    mu: int,
    cfg: BudgetConfig,
    kappa_S: Optional[float],
    alpha_eff: Optional[float],
    n_system: int,
    truncated_weight: float,
) -> CostReport:
    if K < 2:
        raise ValidationError(f"cost estimates need at least two Pauli terms, got K = {K}")

    if method == "qubitization":
        n_a = qpe_ancillas(alpha, cfg.epsilon_phase, cfg.p_fail)
        calls = (1 << n_a) - 1
        cost_fn = walk_cost_qubitization
        repeat = 1
    else:
        N, n_a = qeve_degree(alpha_eff, cfg.epsilon_phase, cfg.degree_rounding)
        calls = qeve_walk_calls(N, kappa_S)
        cost_fn = partial(walk_cost_qeve, n=n_a)
        repeat = cfg.repetition_factor

    q = _select_q(K, mu, cost_fn, cfg, calls * repeat)
    t_per_call = cost_fn(K, mu, q)
    return CostReport(
        method=method,
        K=K,
        alpha=alpha,
        mu=mu,
        q=q,
        n_a=n_a,
        walk_calls=calls,
        t_per_call=t_per_call,
        t_total=calls * t_per_call * repeat,
        logical_qubits=qubit_count(method, K, mu, q, n_a, n_system, cfg.qubit_accounting),
        epsilon=cfg.epsilon_total,
        n_system=n_system,
        budget=cfg,
        alpha_eff=alpha_eff if method == "qeve" else None,
        kappa_S=kappa_S if method == "qeve" else None,
        truncated_weight=truncated_weight,
    )


def _check_method(method: str, kappa_S: Optional[float]) -> None:
    if method not in METHODS:
        raise ValidationError(f"unknown method {method!r}; choose from {METHODS}")
    if method == "qeve" and kappa_S is None:
        raise ConfigurationError(
            "QEVE costs need the Jordan condition number: pass --kappa-s or run a dense analysis"
        )
    if kappa_S is not None and kappa_S < 1:
        raise ValidationError(f"kappa_S must be >= 1, got {kappa_S}")


def estimate_from_parameters(
    alpha: float,
    K: int,
    cfg: Optional[BudgetConfig] = None,
    method: str = "qubitization",
    kappa_S: Optional[float] = None,
    alpha_eff: Optional[float] = None,
    n_system: int = 0,
) -> CostReport:
    """
    Cost from a published (alpha, K, kappa_S) triple without an LCU in hand.

    No truncation is applied; for QEVE alpha_eff defaults to alpha.
    """
    cfg = cfg or BudgetConfig()
    _check_method(method, kappa_S)
    if alpha <= 0:
        raise ValidationError(f"alpha must be positive, got {alpha}")
    if method == "qubitization":
        mu = mu_qubitization(alpha, K, cfg.epsilon_total, cfg.split)
    else:
        mu = mu_qeve(alpha, K, kappa_S, cfg.epsilon_total, cfg.split)
        alpha_eff = alpha if alpha_eff is None else alpha_eff
    return _assemble(method, alpha, K, mu, cfg, kappa_S, alpha_eff, n_system, 0.0)


def estimate(
    lcu: PauliLCU,
    report: Optional[SpectralReport] = None,
    cfg: Optional[BudgetConfig] = None,
    method: str = "qubitization",
    kappa_s: Optional[float] = None,
    alpha_eff: Optional[float] = None,
    n_system: Optional[int] = None,
    norm_estimate: Optional[float] = None,
) -> CostReport:
    """
    Full pipeline on an LCU.

    Parameters:
    -----------
    lcu : PauliLCU
        Operator to cost
    report : SpectralReport, optional
        Dense analysis supplying kappa_S and ||H - b0||
    kappa_s : float, optional
        Overrides report.kappa_S
    alpha_eff : float, optional
        Overrides the max(alpha, 2 ||H - b0||) rescaling rule

    Returns:
    --------
    CostReport; K is the term count after truncating at alpha * 2^-mu.
    """
    cfg = cfg or BudgetConfig()
    kappa = kappa_s if kappa_s is not None else (report.kappa_S if report is not None else None)
    _check_method(method, kappa)
    if lcu.K < 2:
        raise ValidationError(f"cost estimates need at least two Pauli terms, got K = {lcu.K}")

    alpha = lcu.alpha
    if method == "qubitization":
        mu = mu_qubitization(alpha, lcu.K, cfg.epsilon_total, cfg.split)
    else:
        mu = mu_qeve(alpha, lcu.K, kappa, cfg.epsilon_total, cfg.split)
        if alpha_eff is None:
            alpha_eff = effective_alpha(lcu, report, norm_estimate)

    kept = truncate(lcu, mu)
    return _assemble(
        method,
        alpha,
        kept.lcu.K,
        mu,
        cfg,
        kappa,
        alpha_eff,
        lcu.n_qubits if n_system is None else n_system,
        kept.dropped_weight,
    )


def qeve_sensitivity(
    alpha: float,
    K: int,
    kappa_S: float,
    cfg: Optional[BudgetConfig] = None,
    n_system: int = 0,
) -> pd.DataFrame:
    """QEVE totals over repetition_factor in {1, 2} and alpha_eff in {alpha, 2 alpha}."""
    cfg = cfg or BudgetConfig()
    rows = []
    for repetition in (1.0, 2.0):
        for scale in (1.0, 2.0):
            report = estimate_from_parameters(
                alpha,
                K,
                replace(cfg, repetition_factor=repetition),
                method="qeve",
                kappa_S=kappa_S,
                alpha_eff=scale * alpha,
                n_system=n_system,
            )
            rows.append({
                "repetition_factor": repetition,
                "alpha_eff": report.alpha_eff,
                "n": report.n_a,
                "walk_calls": report.walk_calls,
                "t_per_call": report.t_per_call,
                "t_total": report.t_total,
                "logical_qubits": report.logical_qubits,
            })
    return pd.DataFrame(rows)
