import itertools

import numpy as np
import pytest

from oracles import fock_matrix, lcu_matrix, pauli_matrix
from tcqeve.errors import CapacityError, ValidationError
from tcqeve.integrals import SpinOrbitalHamiltonian, empty_hamiltonian, load_hamiltonian, random_hamiltonian
from tcqeve.pauli_algebra import (
    PauliLCU,
    PauliString,
    classify_reality,
    dump_lcu,
    from_dense_matrix,
    jordan_wigner,
    load_lcu,
    one_norm,
    truncate,
)
from tcqeve.spectral_oracle import dense_matrix

WORDS = ["".join(w) for w in itertools.product("IXYZ", repeat=2)]


@pytest.mark.parametrize("left", WORDS)
@pytest.mark.parametrize("right", WORDS)
def test_multiply_matches_matrix_product(left, right):
    phase, product = PauliString.from_word(left).multiply(PauliString.from_word(right))
    expected = pauli_matrix(left) @ pauli_matrix(right)
    np.testing.assert_allclose(phase * pauli_matrix(product.word), expected, atol=1e-15)
    assert phase in (1, -1, 1j, -1j)


def test_single_qubit_products():
    phase, product = PauliString.from_word("X").multiply(PauliString.from_word("Y"))
    assert product.word == "Z" and phase == 1j
    phase, product = PauliString.from_word("Y").multiply(PauliString.from_word("X"))
    assert product.word == "Z" and phase == -1j


@pytest.mark.parametrize("n_qubits", [1, 3, 4])
def test_random_products_close_on_pauli_strings(n_qubits):
    rng = np.random.default_rng(40 + n_qubits)
    for _ in range(60):
        left, right = ("".join(rng.choice(list("IXYZ"), size=n_qubits)) for _ in range(2))
        phase, product = PauliString.from_word(left).multiply(PauliString.from_word(right))
        assert phase in (1, -1, 1j, -1j)
        assert product.n_qubits == n_qubits
        np.testing.assert_allclose(
            phase * pauli_matrix(product.word), pauli_matrix(left) @ pauli_matrix(right), atol=1e-15
        )


def test_word_round_trip_and_weights():
    s = PauliString.from_word("XIZY")
    assert s.word == "XIZY"
    assert s.weight == 3
    assert s.y_count == 1
    assert PauliString.identity(4).is_identity


def test_invalid_letter():
    with pytest.raises(ValidationError):
        PauliString.from_word("XQ")


def test_from_terms_combines_and_moves_identity():
    x = PauliString.from_word("XI")
    lcu = PauliLCU.from_terms(2, 0.5, [(0.25, x), (0.25, x), (1.0, PauliString.identity(2)), (1e-14, PauliString.from_word("ZZ"))])
    assert lcu.b0 == 1.5
    assert lcu.K == 1
    assert lcu.alpha == pytest.approx(0.5)
    assert one_norm(lcu) == pytest.approx(lcu.alpha)


def test_identity_term_rejected():
    with pytest.raises(ValidationError):
        PauliLCU(1, 0.0, ((1.0, PauliString.identity(1)),), 1.0)


def test_single_mode_number_operator():
    # h = [[0.5]] on one spatial orbital: 0.5 (n_up + n_down) = 0.5 - 0.25 (Z_0 + Z_1)
    ham = SpinOrbitalHamiltonian(n_spatial=1, core_energy=0.0, h=np.array([[0.5]]), v=np.zeros((1,) * 4))
    lcu = jordan_wigner(ham)
    assert lcu.b0 == pytest.approx(0.5)
    words = {s.word: c for c, s in lcu.terms}
    assert set(words) == {"ZI", "IZ"}
    assert words["ZI"] == pytest.approx(-0.25)
    assert lcu.alpha == pytest.approx(0.5)


def test_empty_hamiltonian_maps_to_empty_lcu():
    lcu = jordan_wigner(empty_hamiltonian(2))
    assert lcu.K == 0
    assert lcu.alpha == 0.0
    assert lcu.b0 == 0.0


@pytest.mark.parametrize("seed", range(200))
def test_jordan_wigner_matches_fock_space(seed):
    n_spatial = 1 + seed % 3
    ham = random_hamiltonian(n_spatial, transcorrelated=seed % 2 == 1, seed=seed)
    lcu = jordan_wigner(ham)
    np.testing.assert_allclose(dense_matrix(lcu, max_qubits=6), fock_matrix(ham), atol=1e-10)


def test_hermitian_input_is_all_real(h2_path):
    lcu = jordan_wigner(load_hamiltonian(h2_path, format="fcidump"))
    verdict = classify_reality(lcu)
    assert verdict.verdict == "consistent, all-real"


def test_tc_input_is_consistent(toy_tc_path):
    lcu = jordan_wigner(load_hamiltonian(toy_tc_path))
    assert classify_reality(lcu).consistent


def test_mixed_coefficient_is_inconsistent():
    lcu = PauliLCU.from_terms(1, 0.0, [(1.0 + 1.0j, PauliString.from_word("X"))])
    verdict = classify_reality(lcu)
    assert verdict.verdict == "inconsistent"
    assert verdict.tags == ("mixed",)


def test_jordan_wigner_qubit_cap():
    with pytest.raises(CapacityError):
        jordan_wigner(random_hamiltonian(3, seed=1), qubit_cap=4)


def test_truncation_threshold():
    terms = [(0.5, PauliString.from_word("XI")), (0.25, PauliString.from_word("IZ")), (0.01, PauliString.from_word("YY"))]
    lcu = PauliLCU.from_terms(2, 0.0, terms)
    kept = truncate(lcu, 2)  # threshold 0.76 / 4 = 0.19
    assert kept.lcu.K == 2
    assert kept.dropped_weight == pytest.approx(0.01)
    assert kept.lcu.alpha == pytest.approx(0.75)


def test_truncation_keeps_the_two_largest():
    terms = [(0.5, PauliString.from_word("XI")), (0.25, PauliString.from_word("IZ")), (0.125, PauliString.from_word("YY"))]
    kept = truncate(PauliLCU.from_terms(2, 0.0, terms), 2)  # threshold 0.875 / 4
    assert sorted(abs(c) for c, _ in kept.lcu.terms) == [0.25, 0.5]
    assert kept.dropped_weight == pytest.approx(0.125)


def test_zero_width_truncation_of_equal_terms():
    single = PauliLCU.from_terms(1, 0.0, [(0.3, PauliString.from_word("X"))])
    assert truncate(single, 0).lcu.K == 1
    pair = PauliLCU.from_terms(1, 0.0, [(0.3, PauliString.from_word("X")), (0.3, PauliString.from_word("Z"))])
    dropped = truncate(pair, 0)
    assert dropped.lcu.K == 0
    assert dropped.dropped_weight == pytest.approx(0.6)


@pytest.mark.parametrize("seed", range(10))
def test_truncation_is_monotone_and_bounded(seed):
    lcu = jordan_wigner(random_hamiltonian(2, transcorrelated=seed % 2 == 1, seed=seed))
    norms = []
    for mu in range(0, 24):
        truncated = truncate(lcu, mu)
        norms.append(one_norm(truncated.lcu))
        assert truncated.dropped_weight <= lcu.K * lcu.alpha * 2.0 ** -mu
        assert norms[-1] + truncated.dropped_weight == pytest.approx(lcu.alpha)
    assert all(a <= b for a, b in zip(norms, norms[1:]))
    assert norms[-1] <= one_norm(lcu) * (1 + 1e-12)


def test_wide_truncation_is_the_identity():
    lcu = jordan_wigner(random_hamiltonian(2, transcorrelated=True, seed=11))
    truncated = truncate(lcu, 60)
    assert truncated.lcu.terms == lcu.terms
    assert truncated.lcu.b0 == lcu.b0
    assert truncated.dropped_weight == 0.0


def test_dense_decomposition_round_trip(rng):
    matrix = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
    lcu = from_dense_matrix(matrix)
    np.testing.assert_allclose(lcu_matrix(lcu), matrix, atol=1e-12)


def test_lcu_text_dump(tmp_path):
    lcu = jordan_wigner(random_hamiltonian(2, transcorrelated=True, seed=5))
    path = str(tmp_path / "lcu.txt")
    dump_lcu(lcu, path)
    loaded = load_lcu(path)
    assert loaded.K == lcu.K
    assert loaded.b0 == lcu.b0
    assert [s.word for _, s in loaded.terms] == [s.word for _, s in lcu.terms]
    assert [c for c, _ in loaded.terms] == [c for c, _ in lcu.terms]
