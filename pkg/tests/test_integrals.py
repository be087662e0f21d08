import numpy as np
import pytest

from tcqeve.errors import HamiltonianParseError, ValidationError
from tcqeve.integrals import (
    SpinOrbitalHamiltonian,
    empty_hamiltonian,
    load_hamiltonian,
    random_hamiltonian,
    save_hamiltonian,
    summarize,
)


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_conventional_fcidump_expands_and_converts(h2_path):
    ham = load_hamiltonian(h2_path, format="fcidump")
    assert ham.n_spatial == 2
    assert ham.n_electrons == 2
    assert ham.is_hermitian
    assert ham.core_energy == pytest.approx(0.714286)
    np.testing.assert_allclose(ham.h, [[-1.252477, 0.0], [0.0, -0.475934]])
    # V_pqrs = 1/2 (pr|qs)
    assert ham.v[0, 0, 0, 0] == pytest.approx(0.5 * 0.674493)
    assert ham.v[0, 1, 0, 1] == pytest.approx(0.5 * 0.663472)
    assert ham.v[0, 0, 1, 1] == pytest.approx(0.5 * 0.181287)
    assert ham.v[0, 1, 1, 0] == pytest.approx(0.5 * 0.181287)


def test_tc_file_keeps_tensors_verbatim(toy_tc_path):
    ham = load_hamiltonian(toy_tc_path)
    assert not ham.is_hermitian
    assert ham.has_three_body
    assert ham.source_label == "toy-tc-h2"
    assert ham.k[0, 1, 0, 1] == pytest.approx(0.01)
    assert ham.k[1, 0, 0, 1] == pytest.approx(-0.004)
    assert ham.k[1, 0, 1, 0] == 0.0
    assert ham.g[0, 0, 1, 0, 0, 1] == pytest.approx(0.002)
    assert np.count_nonzero(ham.g) == 1


def test_round_trip_is_bit_exact(tmp_path):
    ham = random_hamiltonian(3, transcorrelated=True, seed=7, n_electrons=2)
    path = str(tmp_path / "random.fcidump-tc")
    save_hamiltonian(ham, path)
    assert load_hamiltonian(path).same_as(ham)


def test_round_trip_hermitian_without_k(tmp_path):
    ham = random_hamiltonian(2, seed=3)
    path = str(tmp_path / "herm.fcidump-tc")
    save_hamiltonian(ham, path)
    loaded = load_hamiltonian(path)
    assert loaded.k is None and loaded.g is None
    assert loaded.same_as(ham)


def test_duplicate_record_is_rejected(tmp_path):
    path = _write(tmp_path, "dup.fcidump-tc", "&FCI NORB=1\n&END\n0.5 1 1 0 0\n0.5 1 1 0 0\n")
    with pytest.raises(ValidationError, match="duplicate"):
        load_hamiltonian(path)


def test_index_out_of_range(tmp_path):
    path = _write(tmp_path, "bad.fcidump-tc", "&FCI NORB=1\n&END\n0.5 2 1 0 0\n")
    with pytest.raises(ValidationError, match="out of range"):
        load_hamiltonian(path)


def test_malformed_value_reports_line(tmp_path):
    path = _write(tmp_path, "bad.fcidump-tc", "&FCI NORB=1\n&END\nabc 1 1 0 0\n")
    with pytest.raises(HamiltonianParseError) as info:
        load_hamiltonian(path)
    assert info.value.lineno == 3


@pytest.mark.parametrize("key", ["NORB=two", "NELEC=2.5"])
def test_non_integer_header_count(tmp_path, key):
    header = key if key.startswith("NORB") else f"NORB=1 {key}"
    path = _write(tmp_path, "bad.fcidump-tc", f"&FCI {header}\n&END\n0.5 1 1 0 0\n")
    with pytest.raises(HamiltonianParseError, match=key.split("=")[0]) as info:
        load_hamiltonian(path)
    assert info.value.lineno == 1


def test_missing_header(tmp_path):
    path = _write(tmp_path, "bad.fcidump-tc", "0.5 1 1 0 0\n")
    with pytest.raises(HamiltonianParseError):
        load_hamiltonian(path)


def test_conflicting_symmetry_records(tmp_path):
    text = "&FCI NORB=2\n&END\n0.3 1 2 1 1\n0.4 2 1 1 1\n"
    path = _write(tmp_path, "conflict.fcidump", text)
    with pytest.raises(ValidationError, match="conflicts"):
        load_hamiltonian(path, format="fcidump")


def test_broken_hermitian_symmetry_is_rejected():
    h = np.array([[0.0, 1.0], [0.5, 0.0]])
    with pytest.raises(ValidationError, match="symmetric"):
        SpinOrbitalHamiltonian(n_spatial=2, core_energy=0.0, h=h, v=np.zeros((2,) * 4))


def test_wrong_tensor_shape():
    with pytest.raises(ValidationError, match="shape"):
        SpinOrbitalHamiltonian(n_spatial=2, core_energy=0.0, h=np.zeros((2, 2)), v=np.zeros((2, 2, 2)))


def test_tensors_are_read_only():
    ham = random_hamiltonian(2, seed=1)
    with pytest.raises(ValueError):
        ham.h[0, 0] = 1.0


def test_empty_hamiltonian_summary():
    ham = empty_hamiltonian(0)
    info = summarize(ham)
    assert info["n_spin_orbitals"] == 0
    assert info["max_abs_v"] == 0.0


def test_unknown_format(h2_path):
    with pytest.raises(ValidationError):
        load_hamiltonian(h2_path, format="molden")
