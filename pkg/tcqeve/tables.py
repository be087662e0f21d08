"""
tables.py

Batch reproduction of the published resource tables.

A manifest lists one system per row (label, alpha, K, kappa_S, n_system and
an optional integral file path). Each row is costed in QROM and gate-optimal
QROAM mode and set side by side with the published T and qubit counts. A bad
row is flagged in the status column; the rest of the batch still runs.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from .cost_model import BudgetConfig, estimate, estimate_from_parameters
from .errors import ConfigurationError, ReproductionDriftWarning, TcqeveError
from .integrals import load_hamiltonian
from .pauli_algebra import jordan_wigner
from .reference_data import (
    ATOMS,
    COSTED_BASES,
    KAPPA_S,
    MODES,
    ONE_NORMS,
    QUBIT_COUNTS,
    SPIN_ORBITALS,
    TC_BASIS,
    TERM_COUNTS,
    T_COUNTS,
)

# ==================== REPRODUCTION CONFIGURATION ====================
MANIFEST_COLUMNS = ["label", "alpha", "K", "kappa_S", "n_system", "path"]
REQUIRED_COLUMNS = ["label", "alpha", "K"]
MODE_SETTINGS = {"QROM": "qrom", "QROAM": "optimize-gates"}
T_DRIFT_TOLERANCE = 0.15
DEFAULT_WORKERS = 4

RESULT_COLUMNS = [
    "label", "atom", "basis", "method", "mode", "alpha", "K", "kappa_S", "n_system",
    "mu", "q", "t_total", "t_reference", "t_deviation", "t_matches_2sf",
    "logical_qubits", "qubits_reference", "qubit_deviation", "status",
]


# ============================================================================
# MANIFESTS
# ============================================================================

def reference_manifest(bases: Iterable[str] = COSTED_BASES) -> pd.DataFrame:
    """Published (alpha, K, kappa_S) triples, one row per atom and basis."""
    rows = []
    for basis in bases:
        for i, atom in enumerate(ATOMS):
            rows.append({
                "label": f"{atom}/{basis}",
                "alpha": ONE_NORMS[basis][i],
                "K": TERM_COUNTS[basis][i],
                "kappa_S": KAPPA_S[i] if basis == TC_BASIS else np.nan,
                "n_system": SPIN_ORBITALS[basis],
                "path": "",
            })
    return pd.DataFrame(rows, columns=MANIFEST_COLUMNS)


def read_manifest(path: str) -> pd.DataFrame:
    """Load a manifest CSV; row contents are checked later, one row at a time."""
    try:
        manifest = pd.read_csv(path, dtype={"label": str, "path": str}, skipinitialspace=True)
    except (OSError, pd.errors.ParserError) as e:
        raise ConfigurationError(f"cannot read manifest {path}: {e}") from e
    except pd.errors.EmptyDataError:
        return pd.DataFrame(columns=MANIFEST_COLUMNS)

    missing = [c for c in REQUIRED_COLUMNS if c not in manifest.columns]
    if missing:
        raise ConfigurationError(f"manifest {path} lacks columns {missing}")
    for column in MANIFEST_COLUMNS:
        if column not in manifest.columns:
            manifest[column] = np.nan if column != "path" else ""
    manifest["path"] = manifest["path"].fillna("")

    base = os.path.dirname(os.path.abspath(path))
    manifest["path"] = [
        p if not p or os.path.isabs(p) else os.path.join(base, p) for p in manifest["path"]
    ]
    return manifest[MANIFEST_COLUMNS]


# ============================================================================
# ROW EVALUATION
# ============================================================================

def _split_label(label: str) -> Tuple[str, str]:
    atom, _, basis = str(label).partition("/")
    return atom.strip(), basis.strip()


def _reference(table: Dict, atom: str, basis: str, mode: str) -> float:
    row = table.get((basis, mode))
    if row is None or atom not in ATOMS:
        return math.nan
    return float(row[ATOMS.index(atom)])


def _number(value, name: str, minimum: float) -> float:
    try:
        number = float(value)
    except (TypeError, ValueError):
        raise ConfigurationError(f"{name} is not a number: {value!r}") from None
    if not math.isfinite(number) or number < minimum:
        raise ConfigurationError(f"{name} = {value!r} is out of range")
    return number


def _optional(value) -> Optional[float]:
    if value is None or (isinstance(value, float) and math.isnan(value)) or value == "":
        return None
    return float(value)


def _evaluate(row: Dict, mode: str, cfg: BudgetConfig) -> Dict:
    label = row.get("label")
    atom, basis = _split_label(label)
    result = {
        "label": label, "atom": atom, "basis": basis, "mode": mode,
        "alpha": row.get("alpha"), "K": row.get("K"), "kappa_S": row.get("kappa_S"),
        "n_system": row.get("n_system"),
        "t_reference": _reference(T_COUNTS, atom, basis, mode),
        "qubits_reference": _reference(QUBIT_COUNTS, atom, basis, mode),
    }
    try:
        if not isinstance(label, str) or not label.strip():
            raise ConfigurationError("row has no label")
        kappa = _optional(row.get("kappa_S"))
        method = "qeve" if kappa is not None else "qubitization"
        mode_cfg = cfg.with_overrides(qroam_mode=MODE_SETTINGS[mode])
        n_system = _optional(row.get("n_system"))
        path = row.get("path") or ""

        if path:
            if not os.path.exists(path):
                raise ConfigurationError(f"integral file not found: {path}")
            fmt = "fcidump-tc" if path.endswith(".fcidump-tc") else "fcidump"
            lcu = jordan_wigner(load_hamiltonian(path, format=fmt))
            report = estimate(
                lcu, cfg=mode_cfg, method=method, kappa_s=kappa,
                n_system=None if n_system is None else int(n_system),
            )
        else:
            alpha = _number(row.get("alpha"), "alpha", 0.0)
            K = int(_number(row.get("K"), "K", 2.0))
            report = estimate_from_parameters(
                alpha, K, mode_cfg, method=method, kappa_S=kappa,
                n_system=0 if n_system is None else int(n_system),
            )
    except (TcqeveError, ValueError, OSError, KeyError) as e:
        result.update({"method": None, "status": f"error: {e}"})
        return result

    result.update({
        "method": method,
        "alpha": report.alpha,
        "K": report.K,
        "n_system": report.n_system,
        "mu": report.mu,
        "q": report.q,
        "t_total": float(report.t_total),
        "logical_qubits": report.logical_qubits,
        "status": "ok",
    })
    result["t_deviation"] = result["t_total"] / result["t_reference"] - 1.0
    result["t_matches_2sf"] = bool(float(f"{result['t_total']:.1e}") == result["t_reference"])
    result["qubit_deviation"] = result["logical_qubits"] / result["qubits_reference"] - 1.0
    return result


def reproduce_tables(
    manifest: pd.DataFrame,
    cfg: Optional[BudgetConfig] = None,
    modes: Iterable[str] = MODES,
    workers: int = DEFAULT_WORKERS,
) -> pd.DataFrame:
    """
    Cost every manifest row in each mode and compare against the published tables.

    Returns:
    --------
    pd.DataFrame in long format, one row per (label, mode) in manifest order.
    Deviations are computed / published - 1 (NaN without a published entry).
    """
    cfg = cfg or BudgetConfig()
    modes = list(modes)
    unknown = [m for m in modes if m not in MODE_SETTINGS]
    if unknown:
        raise ConfigurationError(f"unknown table modes {unknown}; choose from {list(MODE_SETTINGS)}")

    tasks = [(row, mode) for row in manifest.to_dict("records") for mode in modes]
    if not tasks:
        return pd.DataFrame(columns=RESULT_COLUMNS)

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        rows: List[Dict] = list(pool.map(lambda task: _evaluate(task[0], task[1], cfg), tasks))

    results = pd.DataFrame(rows).reindex(columns=RESULT_COLUMNS)
    drifted = results[(results["status"] == "ok") & (results["t_deviation"].abs() > T_DRIFT_TOLERANCE)]
    for _, row in drifted.iterrows():
        warnings.warn(
            f"{row['label']} {row['mode']}: T count {row['t_total']:.2e} vs published "
            f"{row['t_reference']:.1e} ({row['t_deviation']:+.0%})",
            ReproductionDriftWarning,
            stacklevel=2,
        )
    return results


# ============================================================================
# LAYOUT AND REPORTS
# ============================================================================

def layout_table(results: pd.DataFrame, value: str = "t_total") -> pd.DataFrame:
    """Rows (basis, mode), one column per atom, as in the published tables."""
    ok = results[results["status"] == "ok"]
    if ok.empty:
        return pd.DataFrame(columns=list(ATOMS))
    table = ok.pivot_table(index=["basis", "mode"], columns="atom", values=value, aggfunc="first")
    bases = [b for b in COSTED_BASES if b in table.index.get_level_values(0)]
    bases += [b for b in table.index.get_level_values(0).unique() if b not in bases]
    order = [(b, m) for b in bases for m in MODES if (b, m) in table.index]
    atoms = [a for a in ATOMS if a in table.columns] + [a for a in table.columns if a not in ATOMS]
    return table.reindex(index=order, columns=atoms)


def generate_report(results: pd.DataFrame) -> str:
    """Plain-text summary of a reproduction run."""
    lines = ["=" * 80, "RESOURCE TABLE REPRODUCTION REPORT", "=" * 80, ""]
    total = len(results)
    failed = results[results["status"] != "ok"]
    lines.append(f"Rows costed: {total - len(failed)} of {total}")

    for method in ("qubitization", "qeve"):
        subset = results[(results["method"] == method) & results["t_deviation"].notna()]
        if subset.empty:
            continue
        deviation = subset["t_deviation"].abs()
        lines.append("")
        lines.append(f"{method.upper()} T COUNTS:")
        lines.append(f"- median |deviation| {deviation.median():.1%}, worst {deviation.max():.1%}")
        lines.append(f"- {(deviation <= 0.05).sum()} of {len(subset)} entries within 5%")
        matches = subset["t_matches_2sf"].astype(bool)
        lines.append(f"- {matches.sum()} of {len(subset)} entries match to 2 significant figures")
        worst = subset.loc[deviation.idxmax()]
        lines.append(f"- largest drift: {worst['label']} {worst['mode']} ({worst['t_deviation']:+.1%})")

    qrom = results[(results["mode"] == "QROM") & results["qubit_deviation"].notna()]
    if not qrom.empty:
        deviation = qrom["qubit_deviation"].abs()
        lines.append("")
        lines.append("LOGICAL QUBITS (QROM):")
        lines.append(f"- {(deviation <= 0.05).sum()} of {len(qrom)} entries within 5%, worst {deviation.max():.1%}")

    if not failed.empty:
        lines.append("")
        lines.append("FLAGGED ROWS:")
        for _, row in failed.iterrows():
            lines.append(f"- {row['label']} {row['mode']}: {row['status']}")
    lines.append("")
    return "\n".join(lines)
