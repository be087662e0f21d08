"""
pauli_algebra.py

Pauli strings in symplectic bit form, Pauli linear combinations of unitaries
(LCU), and the Jordan-Wigner map from integral tensors to an LCU.

Conventions
-----------
A PauliString stores two bit masks x and z over n qubits and stands for

    P(x, z) = i^{|x & z|} X^x Z^z

so a qubit with both bits set carries Y = iXZ. Qubit q is bit q of a basis
index and character q of a Pauli word ("XIZY" has X on qubit 0).

Ladder operators follow a_j = (prod_{q<j} Z_q)(X_j + iY_j)/2 with spin-orbital
index j = 2*spatial + spin.
"""

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from .errors import CapacityError, HamiltonianParseError, ValidationError
from .integrals import SpinOrbitalHamiltonian

# ==================== NUMERIC CONVENTIONS ====================
ZERO_TOLERANCE = 1e-12         # Hartree, combined terms at or below are dropped
REALITY_TOLERANCE = 1e-10      # relative to alpha
DEFAULT_QUBIT_CAP = 63         # masks must fit a signed 64-bit integer
DENSE_DECOMPOSITION_CAP = 10
CHUNK_TERMS = 20000

_PHASES = np.array([1.0, 1.0j, -1.0, -1.0j])
_LETTERS = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}


def popcount(value: int) -> int:
    return bin(value).count("1")


def popcount_array(values: np.ndarray) -> np.ndarray:
    """Bit counts of nonnegative int64 values."""
    v = np.asarray(values).astype(np.uint64)
    v = v - ((v >> np.uint64(1)) & np.uint64(0x5555555555555555))
    v = (v & np.uint64(0x3333333333333333)) + ((v >> np.uint64(2)) & np.uint64(0x3333333333333333))
    v = (v + (v >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return ((v * np.uint64(0x0101010101010101)) >> np.uint64(56)).astype(np.int64)


def product_phase(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent k with P(x1, z1) P(x2, z2) = i^k P(x1 ^ x2, z1 ^ z2)."""
    x, z = x1 ^ x2, z1 ^ z2
    return (popcount(x1 & z1) + popcount(x2 & z2) - popcount(x & z) + 2 * popcount(z1 & x2)) % 4


# ============================================================================
# PAULI STRINGS
# ============================================================================

@dataclass(frozen=True, order=True)
class PauliString:
    n_qubits: int
    x: int
    z: int

    def __post_init__(self):
        limit = 1 << self.n_qubits
        if not (0 <= self.x < limit and 0 <= self.z < limit):
            raise ValidationError(f"Pauli masks exceed {self.n_qubits} qubits")

    @classmethod
    def from_word(cls, word: str) -> "PauliString":
        x = z = 0
        for q, letter in enumerate(word.upper()):
            if letter not in _BITS:
                raise ValidationError(f"invalid Pauli letter {letter!r} in {word!r}")
            bx, bz = _BITS[letter]
            x |= bx << q
            z |= bz << q
        return cls(len(word), x, z)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @property
    def word(self) -> str:
        return "".join(
            _LETTERS[(self.x >> q) & 1, (self.z >> q) & 1] for q in range(self.n_qubits)
        )

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    @property
    def y_count(self) -> int:
        return popcount(self.x & self.z)

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    def multiply(self, other: "PauliString") -> Tuple[complex, "PauliString"]:
        """Product self * other as (phase in {1, i, -1, -i}, PauliString)."""
        if other.n_qubits != self.n_qubits:
            raise ValidationError("Pauli strings act on different qubit counts")
        k = product_phase(self.x, self.z, other.x, other.z)
        return complex(_PHASES[k]), PauliString(self.n_qubits, self.x ^ other.x, self.z ^ other.z)

    def __str__(self) -> str:
        return self.word


# ============================================================================
# LINEAR COMBINATIONS OF UNITARIES
# ============================================================================

@dataclass(frozen=True)
class PauliLCU:
    """b0 * I + sum_j b_j U_j with the identity kept out of the term list."""

    n_qubits: int
    b0: complex
    terms: Tuple[Tuple[complex, PauliString], ...]
    alpha: float

    def __post_init__(self):
        seen = set()
        for coefficient, string in self.terms:
            if string.is_identity:
                raise ValidationError("identity string must live in b0")
            if string.n_qubits != self.n_qubits:
                raise ValidationError("term acts on the wrong qubit count")
            if (string.x, string.z) in seen:
                raise ValidationError(f"duplicate term {string.word}")
            if abs(coefficient) == 0:
                raise ValidationError(f"zero coefficient on {string.word}")
            seen.add((string.x, string.z))
        norm = math.fsum(abs(c) for c, _ in self.terms)
        if abs(norm - self.alpha) > 1e-12 * max(norm, 1.0):
            raise ValidationError(f"alpha {self.alpha} does not match one-norm {norm}")

    @classmethod
    def from_terms(
        cls,
        n_qubits: int,
        b0: complex,
        terms: Iterable[Tuple[complex, PauliString]],
        tol: float = ZERO_TOLERANCE,
    ) -> "PauliLCU":
        """Combine repeated strings, move identity into b0, drop |c| <= tol."""
        accumulator: Dict[Tuple[int, int], complex] = {}
        offset = complex(b0)
        for coefficient, string in terms:
            if string.is_identity:
                offset += coefficient
                continue
            key = (string.x, string.z)
            accumulator[key] = accumulator.get(key, 0.0) + complex(coefficient)
        kept = tuple(
            (c, PauliString(n_qubits, x, z))
            for (x, z), c in sorted(accumulator.items())
            if abs(c) > tol
        )
        return cls(n_qubits, offset, kept, math.fsum(abs(c) for c, _ in kept))

    @classmethod
    def from_arrays(cls, n_qubits: int, b0: complex, x, z, coefficients, tol: float = ZERO_TOLERANCE) -> "PauliLCU":
        """Build from already-combined symplectic arrays."""
        x = np.asarray(x, dtype=np.int64)
        z = np.asarray(z, dtype=np.int64)
        c = np.asarray(coefficients, dtype=complex)
        offset = complex(b0)
        identity = (x == 0) & (z == 0)
        if np.any(identity):
            offset += complex(c[identity].sum())
        keep = ~identity & (np.abs(c) > tol)
        order = np.lexsort((z[keep], x[keep]))
        kept = tuple(
            (complex(ci), PauliString(n_qubits, int(xi), int(zi)))
            for xi, zi, ci in zip(x[keep][order], z[keep][order], c[keep][order])
        )
        return cls(n_qubits, offset, kept, math.fsum(abs(ci) for ci, _ in kept))

    @property
    def K(self) -> int:
        return len(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(x, z, coefficients) as numpy arrays."""
        x = np.array([s.x for _, s in self.terms], dtype=np.int64)
        z = np.array([s.z for _, s in self.terms], dtype=np.int64)
        c = np.array([c for c, _ in self.terms], dtype=complex)
        return x, z, c


def one_norm(lcu: PauliLCU) -> float:
    """Sum of |b_j|, excluding b0."""
    return math.fsum(abs(c) for c, _ in lcu.terms)


class Truncation(NamedTuple):
    lcu: PauliLCU
    dropped_weight: float


def truncate(lcu: PauliLCU, mu: int) -> Truncation:
    """Keep terms with |b_i| >= alpha * 2^-mu; b0 is untouched."""
    if mu < 0:
        raise ValidationError(f"mu must be nonnegative, got {mu}")
    threshold = math.ldexp(lcu.alpha, -mu)
    kept = [(c, s) for c, s in lcu.terms if abs(c) >= threshold]
    dropped = math.fsum(abs(c) for c, s in lcu.terms if abs(c) < threshold)
    return Truncation(
        PauliLCU(lcu.n_qubits, lcu.b0, tuple(kept), math.fsum(abs(c) for c, _ in kept)),
        dropped,
    )


@dataclass(frozen=True)
class RealityClassification:
    consistent: bool
    tags: Tuple[str, ...]
    violations: Tuple[int, ...]

    @property
    def all_real(self) -> bool:
        return all(tag == "real" for tag in self.tags)

    @property
    def verdict(self) -> str:
        if not self.consistent:
            return "inconsistent"
        return "consistent, all-real" if self.all_real else "consistent"


def classify_reality(lcu: PauliLCU, rel_tol: float = REALITY_TOLERANCE) -> RealityClassification:
    """
    Tag each coefficient real / imaginary / mixed.

    The LCU is consistent when strings with an even number of Y factors carry
    real coefficients and strings with an odd number carry imaginary ones,
    which is what a real matrix produces.
    """
    tol = rel_tol * lcu.alpha
    tags: List[str] = []
    violations: List[int] = []
    for index, (c, string) in enumerate(lcu.terms):
        if abs(c.imag) <= tol:
            tags.append("real")
        elif abs(c.real) <= tol:
            tags.append("imaginary")
        else:
            tags.append("mixed")
        if string.y_count % 2 == 0:
            ok = abs(c.imag) <= tol
        else:
            ok = abs(c.real) <= tol
        if not ok:
            violations.append(index)
    return RealityClassification(not violations, tuple(tags), tuple(violations))


# ============================================================================
# JORDAN-WIGNER
# ============================================================================

def _ladder(mode: int, dagger: bool) -> Dict[Tuple[int, int], complex]:
    below = (1 << mode) - 1
    bit = 1 << mode
    return {(bit, below): 0.5, (bit, below | bit): -0.5j if dagger else 0.5j}


def _multiply(left: Dict, right: Dict) -> Dict[Tuple[int, int], complex]:
    out: Dict[Tuple[int, int], complex] = {}
    for (x1, z1), c1 in left.items():
        for (x2, z2), c2 in right.items():
            key = (x1 ^ x2, z1 ^ z2)
            out[key] = out.get(key, 0.0) + c1 * c2 * _PHASES[product_phase(x1, z1, x2, z2)]
    return {key: c for key, c in out.items() if abs(c) > 1e-15}


@lru_cache(maxsize=None)
def _ladder_table(n_modes: int, order: int, dagger: bool):
    """
    Pauli expansions of every ordered product of `order` ladder operators.

    Row i*n^(order-1) + ... holds the product for modes (i, ...), padded with
    zero coefficients to 2^order columns.
    """
    width = 2 ** order
    rows = n_modes ** order
    xs = np.zeros((rows, width), dtype=np.int64)
    zs = np.zeros((rows, width), dtype=np.int64)
    cs = np.zeros((rows, width), dtype=complex)
    for row, modes in enumerate(itertools.product(range(n_modes), repeat=order)):
        if len(set(modes)) < order:
            continue  # a_i a_i = 0
        op = _ladder(modes[0], dagger)
        for mode in modes[1:]:
            op = _multiply(op, _ladder(mode, dagger))
        for col, ((x, z), c) in enumerate(sorted(op.items())):
            xs[row, col], zs[row, col], cs[row, col] = x, z, c
    return xs, zs, cs


def _combine(x: np.ndarray, z: np.ndarray, c: np.ndarray):
    """Sum coefficients of identical (x, z) keys; output sorted by key."""
    if x.size == 0:
        return x, z, c
    keys = np.stack([x, z], axis=1)
    unique, inverse = np.unique(keys, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    total = np.zeros(len(unique), dtype=complex)
    np.add.at(total, inverse, c)
    return unique[:, 0], unique[:, 1], total


class _Accumulator:
    """Running combined (x, z, c) arrays; merge order is the call order."""

    def __init__(self):
        self.x = np.zeros(0, dtype=np.int64)
        self.z = np.zeros(0, dtype=np.int64)
        self.c = np.zeros(0, dtype=complex)

    def add(self, x, z, c):
        self.x, self.z, self.c = _combine(
            np.concatenate([self.x, x]), np.concatenate([self.z, z]), np.concatenate([self.c, c])
        )


def _accumulate_products(acc: _Accumulator, n_modes: int, order: int, cre_ids, ann_ids, weights) -> None:
    """Add sum_t w_t (creation product)(annihilation product) to the accumulator."""
    cre_x, cre_z, cre_c = _ladder_table(n_modes, order, True)
    ann_x, ann_z, ann_c = _ladder_table(n_modes, order, False)
    cre_y = popcount_array(cre_x & cre_z)
    ann_y = popcount_array(ann_x & ann_z)

    for start in range(0, len(weights), CHUNK_TERMS):
        sl = slice(start, start + CHUNK_TERMS)
        ci, ai, w = cre_ids[sl], ann_ids[sl], weights[sl]
        cx, cz, cc, cy = cre_x[ci][:, :, None], cre_z[ci][:, :, None], cre_c[ci][:, :, None], cre_y[ci][:, :, None]
        ax, az, ac, ay = ann_x[ai][:, None, :], ann_z[ai][:, None, :], ann_c[ai][:, None, :], ann_y[ai][:, None, :]

        x = cx ^ ax
        z = cz ^ az
        k = (cy + ay - popcount_array(x & z) + 2 * popcount_array(cz & ax)) % 4
        c = w[:, None, None] * cc * ac * _PHASES[k]

        x, z, c = x.reshape(-1), z.reshape(-1), c.reshape(-1)
        live = c != 0
        acc.add(*_combine(x[live], z[live], c[live]))


def _spin_blocks(tensor: np.ndarray, order: int):
    """
    Creation/annihilation mode ids and weights for one tensor.

    Spatial indices (p, q, r, s, u, v)[:2*order] map to creation modes
    (p, q, r) with spins (a, b, c) and annihilation modes in reversed spin
    order, matching a+_pa a+_qb a+_rc a_vc a_ub a_sa.
    """
    n_modes = 2 * tensor.shape[0]
    idx = np.nonzero(tensor)
    values = tensor[idx]
    cre_spatial = idx[:order]
    ann_spatial = idx[order:][::-1]

    cre_ids, ann_ids, weights = [], [], []
    for spins in itertools.product((0, 1), repeat=order):
        cre = np.zeros(len(values), dtype=np.int64)
        ann = np.zeros(len(values), dtype=np.int64)
        for position, spin in enumerate(spins):
            cre = cre * n_modes + 2 * cre_spatial[position] + spin
        for position, spin in enumerate(reversed(spins)):
            ann = ann * n_modes + 2 * ann_spatial[position] + spin
        cre_ids.append(cre)
        ann_ids.append(ann)
        weights.append(values.astype(complex))
    if not weights:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64), np.zeros(0, dtype=complex)
    return np.concatenate(cre_ids), np.concatenate(ann_ids), np.concatenate(weights)


def jordan_wigner(ham: SpinOrbitalHamiltonian, qubit_cap: Optional[int] = None) -> PauliLCU:
    """
    Map the integral tensors to a Pauli LCU on 2 * n_spatial qubits.

    Parameters:
    -----------
    ham : SpinOrbitalHamiltonian
        Validated integrals (Hermitian or transcorrelated)
    qubit_cap : int, optional
        Largest qubit count accepted (default 63)

    Returns:
    --------
    PauliLCU with core energy and identity contributions folded into b0
    """
    cap = DEFAULT_QUBIT_CAP if qubit_cap is None else qubit_cap
    n_qubits = ham.n_spin_orbitals
    if n_qubits > cap:
        raise CapacityError(f"{n_qubits} qubits exceeds the Jordan-Wigner cap of {cap}")

    acc = _Accumulator()
    if n_qubits:
        two_body = ham.v - ham.k if ham.k is not None else ham.v
        blocks = [(ham.h, 1), (two_body, 2)]
        if ham.g is not None:
            blocks.append((ham.g, 3))
        for tensor, order in blocks:
            cre, ann, w = _spin_blocks(np.asarray(tensor), order)
            if len(w):
                _accumulate_products(acc, n_qubits, order, cre, ann, w)

    return PauliLCU.from_arrays(n_qubits, ham.core_energy, acc.x, acc.z, acc.c)


# ============================================================================
# DENSE DECOMPOSITION AND TEXT DUMP
# ============================================================================

def from_dense_matrix(matrix: np.ndarray, tol: float = ZERO_TOLERANCE) -> PauliLCU:
    """Pauli decomposition c_P = Tr(P^dagger M) / 2^n of a square matrix."""
    matrix = np.asarray(matrix, dtype=complex)
    dim = matrix.shape[0]
    n = dim.bit_length() - 1
    if matrix.shape != (dim, dim) or dim != 1 << n:
        raise ValidationError(f"matrix shape {matrix.shape} is not 2^n x 2^n")
    if n > DENSE_DECOMPOSITION_CAP:
        raise CapacityError(f"dense decomposition limited to {DENSE_DECOMPOSITION_CAP} qubits")

    basis = np.arange(dim, dtype=np.int64)
    masks = np.arange(dim, dtype=np.int64)
    signs = 1 - 2 * (popcount_array(masks[:, None] & basis[None, :]) & 1)

    xs, zs, cs = [], [], []
    for x in range(dim):
        column = matrix[basis ^ x, basis]
        traces = signs @ column / dim
        phases = _PHASES[(-popcount_array(x & masks)) % 4]
        xs.append(np.full(dim, x, dtype=np.int64))
        zs.append(masks)
        cs.append(phases * traces)
    return PauliLCU.from_arrays(n, 0.0, np.concatenate(xs), np.concatenate(zs), np.concatenate(cs), tol)


def dump_lcu(lcu: PauliLCU, path: str) -> None:
    """Header `n_qubits b0_re b0_im`, then `re im WORD` per term."""
    with open(path, "w") as file:
        file.write(f"{lcu.n_qubits} {lcu.b0.real!r} {lcu.b0.imag!r}\n")
        for c, string in lcu.terms:
            file.write(f"{c.real!r} {c.imag!r} {string.word}\n")


def load_lcu(path: str) -> PauliLCU:
    with open(path) as file:
        lines = [line for line in file.read().splitlines() if line.strip()]
    if not lines:
        raise HamiltonianParseError("empty LCU file", 1)
    try:
        n_text, b0_re, b0_im = lines[0].split()
        n_qubits = int(n_text)
        b0 = complex(float(b0_re), float(b0_im))
    except ValueError:
        raise HamiltonianParseError("header must be 'n_qubits b0_re b0_im'", 1) from None

    terms = []
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = line.split()
        if len(tokens) != 3 or len(tokens[2]) != n_qubits:
            raise HamiltonianParseError("expected '<re> <im> <word>' of n_qubits letters", lineno)
        try:
            c = complex(float(tokens[0]), float(tokens[1]))
        except ValueError:
            raise HamiltonianParseError("cannot read coefficient", lineno) from None
        terms.append((c, PauliString.from_word(tokens[2])))
    return PauliLCU.from_terms(n_qubits, b0, terms, tol=0.0)
