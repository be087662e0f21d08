"""
Independent reference builders used by the tests.

None of these share code with the package: Fock-space operators are built
from occupation-number ladder matrices, Pauli strings from explicit
Kronecker products.
"""

from functools import reduce

import numpy as np

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def pauli_matrix(word: str) -> np.ndarray:
    """Letter q acts on bit q of the basis index (qubit 0 least significant)."""
    if not word:
        return np.ones((1, 1), dtype=complex)
    return reduce(np.kron, [_PAULI[letter] for letter in reversed(word)])


def lcu_matrix(lcu) -> np.ndarray:
    dim = 1 << lcu.n_qubits
    matrix = lcu.b0 * np.eye(dim, dtype=complex)
    for c, string in lcu.terms:
        matrix = matrix + c * pauli_matrix(string.word)
    return matrix


def annihilators(n_modes: int) -> np.ndarray:
    """a_j[new, old] = (-1)^(occupied modes below j) when mode j is occupied."""
    dim = 1 << n_modes
    ops = np.zeros((n_modes, dim, dim))
    for j in range(n_modes):
        for state in range(dim):
            if state >> j & 1:
                sign = (-1) ** bin(state & ((1 << j) - 1)).count("1")
                ops[j, state ^ (1 << j), state] = sign
    return ops


def _spin_two_body(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    out = np.zeros((2 * n,) * 4)
    for s in range(2):
        for u in range(2):
            out[s::2, u::2, s::2, u::2] = t
    return out


def _spin_three_body(t: np.ndarray) -> np.ndarray:
    n = t.shape[0]
    out = np.zeros((2 * n,) * 6)
    for s in range(2):
        for u in range(2):
            for w in range(2):
                out[s::2, u::2, w::2, s::2, u::2, w::2] = t
    return out


def fock_matrix(ham) -> np.ndarray:
    """
    core + sum h a+_p a_q + sum (V - K) a+_p a+_q a_s a_r
         + sum G a+_p a+_q a+_r a_v a_u a_s, summed over spins.
    """
    n_modes = 2 * ham.n_spatial
    dim = 1 << n_modes
    matrix = ham.core_energy * np.eye(dim)
    if n_modes == 0:
        return matrix.astype(complex)

    ann = annihilators(n_modes)
    cre = np.transpose(ann, (0, 2, 1))

    h_so = np.kron(ham.h, np.eye(2))
    matrix = matrix + np.einsum("pq,pij,qjk->ik", h_so, cre, ann, optimize=True)

    two = ham.v - ham.k if ham.k is not None else ham.v
    cre2 = np.einsum("pij,qjk->pqik", cre, cre, optimize=True)
    ann2 = np.einsum("sij,rjk->srik", ann, ann, optimize=True)
    matrix = matrix + np.einsum("pqrs,pqij,srjk->ik", _spin_two_body(two), cre2, ann2, optimize=True)

    if ham.g is not None:
        cre3 = np.einsum("pqij,rjk->pqrik", cre2, cre, optimize=True)
        ann3 = np.einsum("vuij,sjk->vusik", ann2, ann, optimize=True)
        matrix = matrix + np.einsum(
            "pqrsuv,pqrij,vusjk->ik", _spin_three_body(ham.g), cre3, ann3, optimize=True
        )
    return matrix.astype(complex)


def random_real_spectrum_matrix(
    rng, d: int, norm: float = 0.495, coupling: float = 0.3, hermitian: bool = False, min_gap: float = 0.0
):
    """S D S^-1 with real D, rescaled to the given spectral norm.

    With min_gap > 0 the eigenvalues of D are drawn at least min_gap apart.
    """
    if min_gap > 0:
        spread = 2.0 - (d - 1) * min_gap
        if spread < 0:
            raise ValueError(f"{d} eigenvalues do not fit in [-1, 1] with gap {min_gap}")
        eigenvalues = -1.0 + np.sort(rng.uniform(0.0, spread, size=d)) + np.arange(d) * min_gap
        rng.shuffle(eigenvalues)
    else:
        eigenvalues = rng.uniform(-1.0, 1.0, size=d)
    if hermitian:
        q, _ = np.linalg.qr(rng.normal(size=(d, d)))
        matrix = q @ np.diag(eigenvalues) @ q.T
    else:
        s = np.eye(d) + coupling * rng.normal(size=(d, d))
        matrix = s @ np.diag(eigenvalues) @ np.linalg.inv(s)
    return matrix * (norm / np.linalg.norm(matrix, 2))


def eigenbasis_mixture(rng, matrix: np.ndarray, weight: float) -> np.ndarray:
    """
    Unit vector S c with S the unit-normalized right eigenvectors of matrix.

    |c_ground|^2 = weight before the final normalization; the other
    coefficients are random and share 1 - weight.
    """
    eigenvalues, s = np.linalg.eig(np.asarray(matrix, dtype=complex))
    s = s / np.linalg.norm(s, axis=0)
    ground = int(np.argmin(eigenvalues.real))
    c = rng.normal(size=len(eigenvalues)) + 1j * rng.normal(size=len(eigenvalues))
    c[ground] = 0.0
    norm = np.linalg.norm(c)
    c = c * (np.sqrt(1.0 - weight) / norm) if norm > 0 else c
    c[ground] = np.sqrt(weight)
    psi = s @ c
    return psi / np.linalg.norm(psi)
