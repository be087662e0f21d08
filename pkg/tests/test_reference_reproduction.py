import pytest

from tcqeve.cost_model import BudgetConfig, estimate_from_parameters
from tcqeve.errors import ReproductionDriftWarning
from tcqeve.reference_data import (
    ATOMS,
    KAPPA_S,
    ONE_NORMS,
    PUBLISHED_EPSILON,
    QUBIT_COUNTS,
    REFERENCE_ENERGIES,
    SPIN_ORBITALS,
    TC_BASIS,
    TERM_COUNTS,
    T_COUNTS,
    lookup,
)
from tcqeve.tables import MODE_SETTINGS, reference_manifest, reproduce_tables

CONVENTIONAL = ("cc-pVDZ", "cc-pVTZ", "cc-pVQZ")
PUBLISHED = BudgetConfig(epsilon_total=PUBLISHED_EPSILON, repetition_factor=1.0, qubit_accounting="compact")


def _qubitization(basis, atom, mode):
    cfg = PUBLISHED.with_overrides(qroam_mode=MODE_SETTINGS[mode])
    return estimate_from_parameters(
        lookup(ONE_NORMS, basis, atom),
        lookup(TERM_COUNTS, basis, atom),
        cfg,
        n_system=SPIN_ORBITALS[basis],
    )


@pytest.mark.parametrize("basis", CONVENTIONAL)
@pytest.mark.parametrize("atom", ATOMS)
@pytest.mark.parametrize("mode", ["QROM", "QROAM"])
def test_qubitization_t_counts(basis, atom, mode):
    report = _qubitization(basis, atom, mode)
    reference = lookup(T_COUNTS, (basis, mode), atom)
    assert report.t_total == pytest.approx(reference, rel=0.05)


ROUNDING_EXCEPTIONS = {
    ("B", "QROM"): "computed 5.56e11 rounds to 5.6e11; published 5.5e11",
    ("F", "QROAM"): "F shares K and register widths with O (4.7e11); published 4.6e11",
}


def _two_figure_cases():
    for basis in CONVENTIONAL:
        for atom in ATOMS:
            for mode in ("QROM", "QROAM"):
                reason = ROUNDING_EXCEPTIONS.get((atom, mode)) if basis == "cc-pVDZ" else None
                marks = [pytest.mark.xfail(strict=True, reason=reason)] if reason else []
                yield pytest.param(basis, atom, mode, marks=marks, id=f"{atom}-{basis}-{mode}")


@pytest.mark.parametrize("basis, atom, mode", list(_two_figure_cases()))
def test_qubitization_two_significant_figures(basis, atom, mode):
    report = _qubitization(basis, atom, mode)
    assert float(f"{report.t_total:.1e}") == lookup(T_COUNTS, (basis, mode), atom)


@pytest.mark.parametrize("basis", CONVENTIONAL)
@pytest.mark.parametrize("atom", ATOMS)
def test_qrom_qubit_counts(basis, atom):
    report = _qubitization(basis, atom, "QROM")
    assert report.logical_qubits == lookup(QUBIT_COUNTS, (basis, "QROM"), atom)


def _qeve(atom, mode):
    cfg = PUBLISHED.with_overrides(qroam_mode=MODE_SETTINGS[mode])
    i = ATOMS.index(atom)
    return estimate_from_parameters(
        ONE_NORMS[TC_BASIS][i], TERM_COUNTS[TC_BASIS][i], cfg,
        method="qeve", kappa_S=KAPPA_S[i], n_system=SPIN_ORBITALS[TC_BASIS],
    )


@pytest.mark.parametrize("mode", ["QROM", "QROAM"])
def test_qeve_t_counts(mode):
    ratios = [_qeve(atom, mode).t_total / lookup(T_COUNTS, (TC_BASIS, mode), atom) for atom in ATOMS]
    assert all(0.4 <= r <= 2.5 for r in ratios)
    assert sum(abs(r - 1.0) <= 0.05 for r in ratios) >= 6


def test_be_transcorrelated_row():
    assert _qeve("Be", "QROM").t_total == pytest.approx(2.4e15, rel=0.03)
    assert _qeve("Be", "QROAM").t_total == pytest.approx(1.5e15, rel=0.05)


@pytest.mark.parametrize("atom", ATOMS)
def test_qeve_qrom_qubit_counts(atom):
    report = _qeve(atom, "QROM")
    assert report.logical_qubits == pytest.approx(lookup(QUBIT_COUNTS, (TC_BASIS, "QROM"), atom), rel=0.05)


def test_batch_reproduction_flags_drift():
    manifest = reference_manifest()
    with pytest.warns(ReproductionDriftWarning):
        results = reproduce_tables(manifest, PUBLISHED)
    assert len(results) == 2 * len(manifest)
    assert (results["status"] == "ok").all()
    qubitization = results[results["method"] == "qubitization"]
    assert qubitization["t_deviation"].abs().max() < 0.05
    qrom = results[results["mode"] == "QROM"]
    assert qrom["qubit_deviation"].abs().max() <= 0.05


@pytest.mark.parametrize("atom", sorted(REFERENCE_ENERGIES))
def test_minimal_basis_tc_beats_quadruple_zeta(atom):
    energies = REFERENCE_ENERGIES[atom]
    tc_energy, tc_error = energies["TC-FCI/STO-6G"]
    experiment = energies["experiment"]
    assert abs(tc_energy - experiment) < abs(energies["FCI/cc-pVQZ"] - experiment)
    assert energies["FCI/cc-pVDZ"] > energies["FCI/cc-pVTZ"] > energies["FCI/cc-pVQZ"]
    assert tc_error > 0
