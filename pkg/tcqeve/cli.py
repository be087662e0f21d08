"""
cli.py

Command-line front end: python -m tcqeve <command> [options]

Commands:
  inspect           summarize an integral file
  map               Jordan-Wigner map to a Pauli LCU
  diagonalize       dense spectral report (desk scale)
  estimate          T-gate and qubit costs for qubitization or QEVE
  simulate-qeve     numerical QEVE experiment on a desk-scale operator
  reproduce-tables  cost a manifest and compare with the published tables

Exit codes: 0 success, 1 internal error, 2 user or validation error.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from . import __version__
from .config import jw_qubit_cap, load_config
from .console import section, status
from .cost_model import BudgetConfig, estimate, estimate_from_parameters, parse_qroam_mode
from .errors import ConfigurationError, USER_ERRORS, TcqeveError, ValidationError
from .integrals import FORMATS, load_hamiltonian, summarize
from .pauli_algebra import classify_reality, dump_lcu, jordan_wigner
from .qeve_sim import DEFAULT_MAX_DEGREE, run_experiment
from .spectral_oracle import analyze, analyze_matrix, dense_matrix, effective_alpha
from .tables import generate_report, layout_table, read_manifest, reference_manifest, reproduce_tables

OUTPUT_FORMATS = ("json", "csv", "text-table")
COMMANDS = ("inspect", "map", "diagonalize", "estimate", "simulate-qeve", "reproduce-tables")
SIM_EPSILON_FRACTION = 0.05   # desk QEVE tolerance as a fraction of alpha_eff


# ============================================================================
# RUN CONFIGURATION
# ============================================================================

@dataclass(frozen=True)
class RunConfig:
    command: str
    inputs: List[str] = field(default_factory=list)
    method: str = "qubitization"
    budget: BudgetConfig = field(default_factory=BudgetConfig)
    output_format: str = "text-table"
    out: Optional[str] = None
    max_qubits: Optional[int] = None
    sector: Optional[str] = None
    seed: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown command {self.command!r}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(f"output format must be one of {OUTPUT_FORMATS}")
        missing = [p for p in self.inputs if p and not os.path.exists(p)]
        if missing:
            raise ConfigurationError(f"input file(s) not found: {', '.join(missing)}")

    @classmethod
    def from_args(cls, args: argparse.Namespace, config: Dict) -> "RunConfig":
        inputs = [p for p in (getattr(args, "input", None), getattr(args, "manifest", None)) if p]
        return cls(
            command=args.command,
            inputs=inputs,
            method=getattr(args, "method", "qubitization"),
            budget=_budget(args, config),
            output_format=args.format or config.get("output", {}).get("format", "text-table"),
            out=getattr(args, "out", None),
            max_qubits=getattr(args, "max_qubits", None),
            sector=getattr(args, "sector", None),
            seed=getattr(args, "seed", None),
        )


def _budget(args: argparse.Namespace, config: Dict) -> BudgetConfig:
    mode, q_fixed = (None, None)
    if getattr(args, "qroam", None):
        mode, q_fixed = parse_qroam_mode(args.qroam)
    return BudgetConfig.from_config(config).with_overrides(
        epsilon_total=getattr(args, "epsilon", None),
        split=getattr(args, "split", None),
        p_fail=getattr(args, "p_fail", None),
        repetition_factor=getattr(args, "repetition_factor", None),
        qroam_mode=mode,
        q_fixed=q_fixed,
        t_ceiling=getattr(args, "t_ceiling", None),
        degree_rounding=getattr(args, "degree_rounding", None),
        qubit_accounting=getattr(args, "qubit_accounting", None),
    )


# ============================================================================
# OUTPUT
# ============================================================================

def _emit(data, run: RunConfig) -> None:
    """Write a dict or DataFrame in the requested format to --out or stdout."""
    if run.output_format == "json":
        if isinstance(data, pd.DataFrame):
            text = data.to_json(orient="records", indent=2)
        else:
            text = json.dumps(data, indent=2, default=str)
    elif run.output_format == "csv":
        frame = data if isinstance(data, pd.DataFrame) else pd.DataFrame([data])
        text = frame.to_csv(index=False)
    else:
        if isinstance(data, pd.DataFrame):
            text = data.to_string()
        else:
            width = max((len(k) for k in data), default=0)
            text = "\n".join(f"  {k:<{width}} : {v}" for k, v in data.items())

    if run.out:
        directory = os.path.dirname(os.path.abspath(run.out))
        os.makedirs(directory, exist_ok=True)
        with open(run.out, "w") as file:
            file.write(text if text.endswith("\n") else text + "\n")
        status(f"Saved: {run.out}", "pass")
    else:
        print(text)


def _load(args: argparse.Namespace, config: Dict):
    ham = load_hamiltonian(args.input, format=args.format_in)
    return ham, jordan_wigner(ham, qubit_cap=jw_qubit_cap(config))


def _sector(args: argparse.Namespace, ham) -> Optional[int]:
    if args.sector == "none":
        return None
    if args.sector is None:
        return ham.n_electrons
    try:
        return int(args.sector)
    except ValueError:
        raise ValidationError(f"--sector must be an electron count or 'none', got {args.sector!r}") from None


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_inspect(args, config, run: RunConfig) -> int:
    ham = load_hamiltonian(args.input, format=args.format_in)
    _emit(summarize(ham), run)
    return 0


def cmd_map(args, config, run: RunConfig) -> int:
    _, lcu = _load(args, config)
    verdict = classify_reality(lcu)
    summary = {
        "n_qubits": lcu.n_qubits,
        "K": lcu.K,
        "alpha": lcu.alpha,
        "b0_real": lcu.b0.real,
        "b0_imag": lcu.b0.imag,
        "reality": verdict.verdict,
    }
    if args.dump_lcu:
        dump_lcu(lcu, args.dump_lcu)
        status(f"LCU written to {args.dump_lcu}", "pass")
    _emit(summary, run)
    return 0


def cmd_diagonalize(args, config, run: RunConfig) -> int:
    ham, lcu = _load(args, config)
    report = analyze(lcu, particle_sector=_sector(args, ham), max_qubits=args.max_qubits, config=config)
    if report.near_defective:
        status(f"eigenvector condition {report.kappa_S:.3e}: close to defective", "warning")
    _emit(report.to_dict(), run)
    return 0


def cmd_estimate(args, config, run: RunConfig) -> int:
    if args.input:
        ham, lcu = _load(args, config)
        report = None
        if args.method == "qeve" and args.kappa_s is None:
            if not args.analyze:
                raise ConfigurationError(
                    "QEVE needs kappa_S: pass --kappa-s, or --analyze to diagonalize a desk-scale input"
                )
            report = analyze(lcu, particle_sector=_sector(args, ham), max_qubits=args.max_qubits, config=config)
        cost = estimate(
            lcu, report, run.budget, method=args.method, kappa_s=args.kappa_s,
            alpha_eff=args.alpha_eff, n_system=args.n_system,
        )
    else:
        if args.alpha is None or args.terms is None:
            raise ConfigurationError("give an integral file, or both --alpha and --terms")
        cost = estimate_from_parameters(
            args.alpha, args.terms, run.budget, method=args.method, kappa_S=args.kappa_s,
            alpha_eff=args.alpha_eff, n_system=args.n_system or 0,
        )

    if run.output_format == "json":
        _emit(cost.to_dict(), run)
    else:
        data = cost.to_dict()
        data.pop("budget")
        _emit(data, run)
    return 0


def _initial_state(report, overlap: Optional[float], seed: Optional[int]) -> Optional[np.ndarray]:
    """sqrt(overlap) ground + sqrt(1 - overlap) random, orthogonal to the ground state."""
    if overlap is None:
        return None
    if not 0 < overlap <= 1:
        raise ValidationError(f"--overlap must lie in (0, 1], got {overlap}")
    ground = np.asarray(report.ground_state, dtype=complex)
    ground = ground / np.linalg.norm(ground)
    rng = np.random.default_rng(seed)
    noise = rng.normal(size=ground.shape) + 1j * rng.normal(size=ground.shape)
    noise -= (ground.conj() @ noise) * ground
    if np.linalg.norm(noise) == 0 or overlap == 1:
        return ground
    noise /= np.linalg.norm(noise)
    psi = math.sqrt(overlap) * ground + math.sqrt(1.0 - overlap) * noise
    return psi / np.linalg.norm(psi)


def cmd_simulate_qeve(args, config, run: RunConfig) -> int:
    ham, lcu = _load(args, config)
    sector = _sector(args, ham)
    matrix = dense_matrix(lcu, sector, args.max_qubits, config)
    report = analyze_matrix(matrix, lcu.b0, sector)
    alpha_eff = args.alpha_eff if args.alpha_eff is not None else effective_alpha(lcu, report)
    epsilon = args.sim_epsilon if args.sim_epsilon is not None else SIM_EPSILON_FRACTION * alpha_eff
    max_degree = args.max_degree or config.get("limits", {}).get("max_degree", DEFAULT_MAX_DEGREE)

    experiment = run_experiment(
        matrix,
        epsilon,
        b0=lcu.b0,
        alpha=alpha_eff,
        psi0=_initial_state(report, args.overlap, args.seed),
        report=report,
        max_degree=max_degree,
    )
    _emit(experiment.to_dict(), run)
    return 0


def cmd_reproduce_tables(args, config, run: RunConfig) -> int:
    manifest = read_manifest(args.manifest) if args.manifest else reference_manifest()
    workers = args.workers or config.get("output", {}).get("workers", 4)
    results = reproduce_tables(manifest, run.budget, workers=workers)

    out_dir = run.out or config.get("output", {}).get("directory", "results")
    os.makedirs(out_dir, exist_ok=True)
    results.to_csv(os.path.join(out_dir, "reproduction.csv"), index=False)
    layout_table(results, "t_total").to_csv(os.path.join(out_dir, "t_counts.csv"))
    layout_table(results, "logical_qubits").to_csv(os.path.join(out_dir, "qubit_counts.csv"))
    report = generate_report(results)
    with open(os.path.join(out_dir, "reproduction_report.txt"), "w") as file:
        file.write(report)

    if run.output_format == "text-table" and not results.empty:
        section("T GATE COUNTS")
        print(layout_table(results, "t_total").to_string(float_format=lambda v: f"{v:.2e}"))
        section("LOGICAL QUBITS")
        print(layout_table(results, "logical_qubits").to_string(float_format=lambda v: f"{v:.0f}"))
    print(report)
    flagged = int((results["status"] != "ok").sum()) if not results.empty else 0
    if flagged:
        status(f"{flagged} row(s) flagged; see {out_dir}/reproduction.csv", "warning")
    status(f"Tables written to {out_dir}/", "pass")
    return 0


# ============================================================================
# PARSER
# ============================================================================

def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="YAML file merged over the packaged defaults")
    parser.add_argument("--format", choices=OUTPUT_FORMATS, help="output format (default text-table)")
    parser.add_argument("--out", help="output file (directory for reproduce-tables)")


def _add_input(parser: argparse.ArgumentParser, optional: bool = False) -> None:
    if optional:
        parser.add_argument("input", nargs="?", help="integral file")
    else:
        parser.add_argument("input", help="integral file")
    parser.add_argument("--format-in", choices=FORMATS, default="fcidump-tc", help="integral file format")


def _add_dense(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sector", help="electron count of the particle sector, or 'none' (default NELEC)")
    parser.add_argument("--max-qubits", type=int, help="dense-oracle cap (env TCQEVE_MAX_QUBITS)")


def _add_budget(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--method", choices=("qubitization", "qeve"), default="qubitization")
    parser.add_argument("--epsilon", type=float, help="total error budget, Hartree")
    parser.add_argument("--split", type=float, help="fraction of epsilon for phase / degree error")
    parser.add_argument("--p-fail", type=float, help="QPE failure bound (< 1/2)")
    parser.add_argument("--qroam", help="qrom | optimize-gates | optimize-qubits | q=<2^k>")
    parser.add_argument("--t-ceiling", type=float, help="T-count ceiling for optimize-qubits")
    parser.add_argument("--repetition-factor", type=float, help="multiplier on QEVE walk calls")
    parser.add_argument("--degree-rounding", choices=("power-of-two", "exact"))
    parser.add_argument("--qubit-accounting", choices=("registers", "compact"))
    parser.add_argument("--kappa-s", type=float, help="Jordan condition number for QEVE")
    parser.add_argument("--alpha-eff", type=float, help="QEVE rescaling one-norm")
    parser.add_argument("--n-system", type=int, help="system qubits (default: LCU width)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tcqeve",
        description="Resource estimates and desk-scale simulation for transcorrelated Hamiltonians",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("inspect", help="summarize an integral file")
    _add_input(p)
    _add_common(p)
    p.set_defaults(func=cmd_inspect)

    p = commands.add_parser("map", help="Jordan-Wigner map to a Pauli LCU")
    _add_input(p)
    _add_common(p)
    p.add_argument("--dump-lcu", metavar="PATH", help="write the LCU in text form")
    p.set_defaults(func=cmd_map)

    p = commands.add_parser("diagonalize", help="dense spectral report")
    _add_input(p)
    _add_common(p)
    _add_dense(p)
    p.set_defaults(func=cmd_diagonalize)

    p = commands.add_parser("estimate", help="T-gate and qubit costs")
    _add_input(p, optional=True)
    _add_common(p)
    _add_budget(p)
    _add_dense(p)
    p.add_argument("--alpha", type=float, help="one-norm, when no integral file is given")
    p.add_argument("--terms", type=int, help="Pauli term count K, when no integral file is given")
    p.add_argument("--analyze", action="store_true", help="take kappa_S from a dense analysis")
    p.set_defaults(func=cmd_estimate)

    p = commands.add_parser("simulate-qeve", help="numerical QEVE experiment")
    _add_input(p)
    _add_common(p)
    _add_dense(p)
    p.add_argument("--sim-epsilon", type=float, help="energy tolerance, Hartree (default 0.05 alpha_eff)")
    p.add_argument("--alpha-eff", type=float, help="override max(alpha, 2 ||H - b0||)")
    p.add_argument("--overlap", type=float, help="ground-state weight of a seeded random input state")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-degree", type=int, help=f"Chebyshev degree cap (default {DEFAULT_MAX_DEGREE})")
    p.set_defaults(func=cmd_simulate_qeve)

    p = commands.add_parser("reproduce-tables", help="compare costs with the published tables")
    p.add_argument("manifest", nargs="?", help="manifest CSV (default: published triples)")
    _add_common(p)
    _add_budget(p)
    p.add_argument("--workers", type=int, help="thread pool size")
    p.set_defaults(func=cmd_reproduce_tables)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        run = RunConfig.from_args(args, config)
        return args.func(args, config, run)
    except USER_ERRORS as e:
        status(str(e), "critical")
        return 2
    except TcqeveError as e:
        status(f"numerical failure: {e}", "critical")
        return 1
    except Exception as e:
        status(f"internal error: {type(e).__name__}: {e}", "critical")
        return 1


if __name__ == "__main__":
    sys.exit(main())
