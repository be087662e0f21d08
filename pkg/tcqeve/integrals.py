"""
integrals.py

Second-quantized integral data for Hermitian and transcorrelated (TC)
electronic Hamiltonians:

    H = sum h_pq a+_ps a_qs
      + sum (V - K)_pqrs a+_ps a+_qt a_st a_rs
      + sum G_pqrsuv a+_ps a+_qt a+_rk a_vk a_ut a_ss
      + core

Tensors are indexed by spatial orbital; spin is attached when mapping to
qubits. Two file formats are read:

  fcidump     conventional Hermitian FCIDUMP, chemist-notation (pq|rs)
              records listed once per symmetry class
  fcidump-tc  the model tensors verbatim: 4-index records for V, 4-index
              records tagged with K, then an &TC section of 6-index G records

Only fcidump-tc is written.
"""

import math
import re
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import HamiltonianParseError, ValidationError

# ==================== FORMAT CONFIGURATION ====================
FORMATS = ("fcidump", "fcidump-tc")
DEFAULT_FLOAT_FORMAT = "%.17g"
SYMMETRY_TOLERANCE = 1e-10
TC_SENTINEL = "&TC"

# Index permutations under which a real, operator-ordered V_pqrs is invariant.
_V_SYMMETRIES = ("qpsr", "rspq", "srqp", "rqps", "psrq", "spqr", "qrsp")

_HEADER_KEY = re.compile(r"([A-Za-z0-9_]+)\s*=\s*(\"[^\"]*\"|'[^']*'|[^\s,]+)")


@dataclass(frozen=True, eq=False)
class SpinOrbitalHamiltonian:
    """Integral tensors over spatial orbitals, in Hartree."""

    n_spatial: int
    core_energy: float
    h: np.ndarray
    v: np.ndarray
    k: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    source_label: str = ""
    n_electrons: Optional[int] = None

    def __post_init__(self):
        n = self.n_spatial
        if n < 0:
            raise ValidationError(f"n_spatial must be nonnegative, got {n}")
        expected = {"h": 2, "v": 4, "k": 4, "g": 6}
        for name, rank in expected.items():
            tensor = getattr(self, name)
            if tensor is None:
                continue
            tensor = np.array(tensor, dtype=float)
            if tensor.shape != (n,) * rank:
                raise ValidationError(
                    f"{name} has shape {tensor.shape}, expected {(n,) * rank}"
                )
            if not np.all(np.isfinite(tensor)):
                raise ValidationError(f"{name} contains non-finite entries")
            tensor.setflags(write=False)
            object.__setattr__(self, name, tensor)
        if not math.isfinite(self.core_energy):
            raise ValidationError("core_energy is not finite")
        object.__setattr__(self, "core_energy", float(self.core_energy))
        if self.is_hermitian:
            check_hermitian_symmetry(self.h, self.v)

    @property
    def n_spin_orbitals(self) -> int:
        return 2 * self.n_spatial

    @property
    def is_hermitian(self) -> bool:
        return self.k is None and self.g is None

    @property
    def has_three_body(self) -> bool:
        return self.g is not None

    def same_as(self, other: "SpinOrbitalHamiltonian") -> bool:
        """Exact equality of every stored value."""
        if (self.n_spatial, self.core_energy, self.source_label, self.n_electrons) != (
            other.n_spatial, other.core_energy, other.source_label, other.n_electrons,
        ):
            return False
        for name in ("h", "v", "k", "g"):
            a, b = getattr(self, name), getattr(other, name)
            if (a is None) != (b is None):
                return False
            if a is not None and not np.array_equal(a, b):
                return False
        return True


def check_hermitian_symmetry(h: np.ndarray, v: np.ndarray, tol: float = SYMMETRY_TOLERANCE) -> None:
    """Raise ValidationError when h is not symmetric or V breaks the real 8-fold symmetry."""
    if h.size and np.max(np.abs(h - h.T)) > tol:
        raise ValidationError(
            f"h is not symmetric (max violation {np.max(np.abs(h - h.T)):.3e} Ha)"
        )
    if not v.size:
        return
    for target in _V_SYMMETRIES:
        violation = np.max(np.abs(v - np.einsum(f"pqrs->{target}", v)))
        if violation > tol:
            raise ValidationError(
                f"v violates the pqrs->{target} symmetry by {violation:.3e} Ha"
            )


def empty_hamiltonian(n_spatial: int, transcorrelated: bool = False, source_label: str = "") -> SpinOrbitalHamiltonian:
    n = n_spatial
    return SpinOrbitalHamiltonian(
        n_spatial=n,
        core_energy=0.0,
        h=np.zeros((n, n)),
        v=np.zeros((n,) * 4),
        k=np.zeros((n,) * 4) if transcorrelated else None,
        g=np.zeros((n,) * 6) if transcorrelated else None,
        source_label=source_label,
    )


# ============================================================================
# PARSING
# ============================================================================

def _parse_header(lines: List[str]) -> Tuple[Dict[str, str], int]:
    """Namelist header; returns the keys and the index of the first body line."""
    if not lines or not lines[0].strip().upper().startswith("&FCI"):
        raise HamiltonianParseError("file does not start with an &FCI header", 1)

    keys: Dict[str, str] = {}
    index = 0
    while index < len(lines):
        text = lines[index].strip()
        upper = text.upper()
        if index > 0 and _looks_numeric(text):
            break
        body = text[4:] if upper.startswith("&FCI") else text
        for key, value in _HEADER_KEY.findall(body):
            keys[key.upper()] = value.strip("\"'")
        index += 1
        if upper in ("&END", "/", "$END") or upper.endswith("&END") or upper.endswith("/"):
            break
    return keys, index


def _looks_numeric(text: str) -> bool:
    first = text.split(None, 1)[0] if text else ""
    try:
        float(first)
    except ValueError:
        return False
    return True


def _parse_value(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise HamiltonianParseError(f"cannot read value {token!r}", lineno) from None
    if not math.isfinite(value):
        raise ValidationError(f"line {lineno}: non-finite value {token!r}")
    return value


def _parse_indices(tokens: List[str], n: int, lineno: int) -> Tuple[int, ...]:
    try:
        indices = tuple(int(t) for t in tokens)
    except ValueError:
        raise HamiltonianParseError(f"cannot read indices {tokens!r}", lineno) from None
    for index in indices:
        if index < 0 or index > n:
            raise ValidationError(
                f"line {lineno}: index {index} out of range for NORB={n}"
            )
    return indices


def _store(tensor: np.ndarray, seen: set, key: Tuple, value: float, lineno: int, name: str) -> None:
    if (name, key) in seen:
        raise ValidationError(f"line {lineno}: duplicate {name} entry {tuple(i + 1 for i in key)}")
    seen.add((name, key))
    tensor[key] = value


def load_hamiltonian(path: str, format: str = "fcidump-tc") -> SpinOrbitalHamiltonian:
    """
    Read and validate an integral file.

    Parameters:
    -----------
    path : str
        File to read
    format : str
        "fcidump" (conventional Hermitian) or "fcidump-tc"

    Returns:
    --------
    SpinOrbitalHamiltonian
    """
    if format not in FORMATS:
        raise ValidationError(f"unknown format {format!r}; expected one of {FORMATS}")

    with open(path) as file:
        lines = file.read().splitlines()

    keys, body_start = _parse_header(lines)
    if "NORB" not in keys:
        raise HamiltonianParseError("header does not declare NORB", 1)
    try:
        n = int(keys["NORB"])
    except ValueError:
        raise HamiltonianParseError(f"NORB is not an integer: {keys['NORB']!r}", 1) from None

    n_electrons = None
    if "NELEC" in keys:
        try:
            n_electrons = int(keys["NELEC"])
        except ValueError:
            raise HamiltonianParseError(f"NELEC is not an integer: {keys['NELEC']!r}", 1) from None
    label = keys.get("LABEL", "")
    core = _parse_value(keys["CORE"], 1) if "CORE" in keys else None

    if format == "fcidump":
        return _read_conventional(lines, body_start, n, n_electrons, label, core)
    return _read_tc(lines, body_start, n, n_electrons, label, core, "KTERM" in keys)


def _read_tc(lines, body_start, n, n_electrons, label, core, has_k) -> SpinOrbitalHamiltonian:
    h = np.zeros((n, n))
    v = np.zeros((n,) * 4)
    k = np.zeros((n,) * 4) if has_k else None
    g = None
    seen: set = set()
    in_tc = False

    for offset, raw in enumerate(lines[body_start:]):
        lineno = body_start + offset + 1
        text = raw.strip()
        if not text:
            continue
        if text.upper() == TC_SENTINEL:
            if in_tc:
                raise HamiltonianParseError("repeated &TC sentinel", lineno)
            in_tc = True
            g = np.zeros((n,) * 6)
            continue

        tokens = text.split()
        value = _parse_value(tokens[0], lineno)

        if in_tc:
            if len(tokens) != 7:
                raise HamiltonianParseError("expected value and 6 indices after &TC", lineno)
            idx = _parse_indices(tokens[1:], n, lineno)
            if 0 in idx:
                raise ValidationError(f"line {lineno}: zero index in a three-body record")
            _store(g, seen, tuple(i - 1 for i in idx), value, lineno, "g")
            continue

        tagged_k = len(tokens) == 6 and tokens[5].upper() == "K"
        if len(tokens) != 5 and not tagged_k:
            raise HamiltonianParseError("expected '<value> p q r s' or '<value> p q r s K'", lineno)
        p, q, r, s = _parse_indices(tokens[1:5], n, lineno)

        if tagged_k:
            if 0 in (p, q, r, s):
                raise ValidationError(f"line {lineno}: zero index in a K record")
            if k is None:
                k = np.zeros((n,) * 4)
            _store(k, seen, (p - 1, q - 1, r - 1, s - 1), value, lineno, "k")
        elif p == q == r == s == 0:
            if core is not None:
                raise ValidationError(f"line {lineno}: core energy given twice")
            core = value
        elif r == s == 0 and p and q:
            _store(h, seen, (p - 1, q - 1), value, lineno, "h")
        elif p and q and r and s:
            _store(v, seen, (p - 1, q - 1, r - 1, s - 1), value, lineno, "v")
        else:
            raise HamiltonianParseError(f"unsupported index pattern {(p, q, r, s)}", lineno)

    return SpinOrbitalHamiltonian(
        n_spatial=n, core_energy=core if core is not None else 0.0, h=h, v=v, k=k, g=g,
        source_label=label, n_electrons=n_electrons,
    )


def _read_conventional(lines, body_start, n, n_electrons, label, core) -> SpinOrbitalHamiltonian:
    h = np.zeros((n, n))
    chem = np.zeros((n,) * 4)
    h_set = np.zeros((n, n), dtype=bool)
    chem_set = np.zeros((n,) * 4, dtype=bool)

    for offset, raw in enumerate(lines[body_start:]):
        lineno = body_start + offset + 1
        text = raw.strip()
        if not text:
            continue
        tokens = text.split()
        if len(tokens) != 5:
            raise HamiltonianParseError("expected '<value> i j k l'", lineno)
        value = _parse_value(tokens[0], lineno)
        i, j, a, b = _parse_indices(tokens[1:], n, lineno)

        if i == j == a == b == 0:
            if core is not None:
                raise ValidationError(f"line {lineno}: core energy given twice")
            core = value
        elif j == a == b == 0:
            continue  # orbital energy
        elif a == b == 0:
            for key in {(i - 1, j - 1), (j - 1, i - 1)}:
                _expand_into(h, h_set, key, value, lineno)
        elif i and j and a and b:
            i, j, a, b = i - 1, j - 1, a - 1, b - 1
            for key in {(i, j, a, b), (j, i, a, b), (i, j, b, a), (j, i, b, a),
                        (a, b, i, j), (b, a, i, j), (a, b, j, i), (b, a, j, i)}:
                _expand_into(chem, chem_set, key, value, lineno)
        else:
            raise HamiltonianParseError(f"unsupported index pattern {(i, j, a, b)}", lineno)

    # (pr|qs) multiplies a+_p a+_q a_s a_r with a factor 1/2.
    v = 0.5 * np.einsum("prqs->pqrs", chem)
    return SpinOrbitalHamiltonian(
        n_spatial=n, core_energy=core if core is not None else 0.0, h=h, v=v,
        source_label=label, n_electrons=n_electrons,
    )


def _expand_into(tensor, mask, key, value, lineno) -> None:
    if mask[key] and abs(tensor[key] - value) > SYMMETRY_TOLERANCE:
        raise ValidationError(
            f"line {lineno}: entry {tuple(i + 1 for i in key)} conflicts with a "
            f"symmetry-equivalent record ({tensor[key]!r} vs {value!r})"
        )
    tensor[key] = value
    mask[key] = True


# ============================================================================
# WRITING
# ============================================================================

def _format_value(value: float) -> str:
    return DEFAULT_FLOAT_FORMAT % value


def save_hamiltonian(ham: SpinOrbitalHamiltonian, path: str) -> None:
    """Write the fcidump-tc format; zero entries are omitted."""
    n = ham.n_spatial
    header = [f"&FCI NORB={n}", f"CORE={_format_value(ham.core_energy)}"]
    if ham.n_electrons is not None:
        header.append(f"NELEC={ham.n_electrons}")
    if ham.k is not None:
        header.append("KTERM=1")
    if ham.source_label:
        header.append(f'LABEL="{ham.source_label}"')

    body: List[str] = []
    for (p, q), value in _nonzero(ham.h):
        body.append(f"{_format_value(value)} {p + 1:4d} {q + 1:4d}    0    0")
    for idx, value in _nonzero(ham.v):
        body.append(f"{_format_value(value)} " + " ".join(f"{i + 1:4d}" for i in idx))
    if ham.k is not None:
        for idx, value in _nonzero(ham.k):
            body.append(f"{_format_value(value)} " + " ".join(f"{i + 1:4d}" for i in idx) + " K")
    if ham.g is not None:
        body.append(TC_SENTINEL)
        for idx, value in _nonzero(ham.g):
            body.append(f"{_format_value(value)} " + " ".join(f"{i + 1:4d}" for i in idx))

    with open(path, "w") as file:
        file.write(" ".join(header) + "\n&END\n")
        for line in body:
            file.write(line + "\n")


def _nonzero(tensor: np.ndarray):
    for idx in zip(*np.nonzero(tensor)):
        yield tuple(int(i) for i in idx), float(tensor[idx])


# ============================================================================
# GENERATORS AND SUMMARIES
# ============================================================================

def random_hamiltonian(
    n_spatial: int,
    transcorrelated: bool = False,
    seed: Optional[int] = None,
    scale: float = 0.5,
    n_electrons: Optional[int] = None,
) -> SpinOrbitalHamiltonian:
    """
    Seeded random Hamiltonian.

    Hermitian draws have a symmetric h and an 8-fold symmetric V built from a
    symmetrized chemist-notation tensor. TC draws add unstructured K and G
    tensors, with the three-body part scaled down by the orbital count.
    """
    rng = np.random.default_rng(seed)
    n = n_spatial

    h = rng.normal(scale=scale, size=(n, n))
    h = 0.5 * (h + h.T)

    chem = rng.normal(scale=scale, size=(n,) * 4)
    chem = sum(
        np.transpose(chem, axes)
        for axes in [(0, 1, 2, 3), (1, 0, 2, 3), (0, 1, 3, 2), (1, 0, 3, 2),
                     (2, 3, 0, 1), (3, 2, 0, 1), (2, 3, 1, 0), (3, 2, 1, 0)]
    ) / 8.0
    v = 0.5 * np.einsum("prqs->pqrs", chem)

    k = g = None
    if transcorrelated:
        k = rng.normal(scale=0.2 * scale, size=(n,) * 4)
        g = rng.normal(scale=0.05 * scale / max(n, 1), size=(n,) * 6)

    return SpinOrbitalHamiltonian(
        n_spatial=n,
        core_energy=float(rng.normal(scale=scale)),
        h=h, v=v, k=k, g=g,
        source_label=f"random n_spatial={n} seed={seed}" + (" TC" if transcorrelated else ""),
        n_electrons=n_electrons,
    )


def summarize(ham: SpinOrbitalHamiltonian) -> Dict[str, object]:
    def largest(tensor):
        return float(np.max(np.abs(tensor))) if tensor is not None and tensor.size else 0.0

    return {
        "source_label": ham.source_label or "(none)",
        "n_spatial": ham.n_spatial,
        "n_spin_orbitals": ham.n_spin_orbitals,
        "n_electrons": ham.n_electrons,
        "transcorrelated": not ham.is_hermitian,
        "three_body": ham.has_three_body,
        "core_energy": ham.core_energy,
        "max_abs_h": largest(ham.h),
        "max_abs_v": largest(ham.v),
        "max_abs_k": largest(ham.k),
        "max_abs_g": largest(ham.g),
    }
