"""Truncated full Fock space over C^n and the left creation operators.

Basis vectors are indexed by words over {1, ..., n} of length at most d,
ordered by length and then lexicographically.  The empty word is the
vacuum.  The creation operator S_j prepends the letter j; words already
of length d are sent to 0, so every truncated operator is the compression
of its untruncated counterpart and norms computed here are lower bounds
for the norms in the full Hardy algebra.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

Word = tuple[int, ...]

DEFAULT_DEGREE = 6


class DegreeError(ValueError):
    """A polynomial does not fit in the requested truncation."""


@dataclass(frozen=True)
class TruncatedFockBasis:
    n: int
    d: int = DEFAULT_DEGREE

    def __post_init__(self):
        if self.n < 1 or self.d < 0:
            raise ValueError(f"need n >= 1 and d >= 0, got n={self.n}, d={self.d}")

    @property
    def size(self) -> int:
        return sum(self.n**k for k in range(self.d + 1))

    def offset(self, length: int) -> int:
        """Index of the first word of the given length."""
        return sum(self.n**k for k in range(length))

    @cached_property
    def words(self) -> list[Word]:
        out: list[Word] = []
        for k in range(self.d + 1):
            out.extend(itertools.product(range(1, self.n + 1), repeat=k))
        return out

    def index(self, word: Sequence[int]) -> int:
        word = tuple(word)
        if len(word) > self.d:
            raise DegreeError(f"word {word} longer than truncation degree {self.d}")
        pos = 0
        for letter in word:
            if not 1 <= letter <= self.n:
                raise ValueError(f"letter {letter} out of range 1..{self.n}")
            pos = pos * self.n + (letter - 1)
        return self.offset(len(word)) + pos

    def vector(self, word: Sequence[int]) -> np.ndarray:
        e = np.zeros(self.size, dtype=complex)
        e[self.index(word)] = 1.0
        return e

    def projection(self, max_len: int) -> np.ndarray:
        """Orthogonal projection onto words of length <= max_len."""
        diag = np.zeros(self.size)
        diag[: self.offset(max_len + 1)] = 1.0
        return np.diag(diag).astype(complex)


@dataclass(frozen=True, eq=False)
class FockOperator:
    basis: TruncatedFockBasis
    entries: np.ndarray

    def __post_init__(self):
        D = self.basis.size
        if self.entries.shape != (D, D):
            raise ValueError(f"entries shape {self.entries.shape} does not match basis size {D}")

    @property
    def adjoint(self) -> "FockOperator":
        return FockOperator(self.basis, self.entries.conj().T)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.entries @ other.entries)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.entries + other.entries)

    def __sub__(self, other: "FockOperator") -> "FockOperator":
        return FockOperator(self.basis, self.entries - other.entries)

    def to_dict(self) -> dict:
        return {
            "n": self.basis.n,
            "d": self.basis.d,
            "entries": [[[z.real, z.imag] for z in row] for row in self.entries.tolist()],
        }


@dataclass(frozen=True)
class NcPoly:
    """Finitely supported noncommutative polynomial sum_w a_w S_w.

    ``coeffs`` maps words (tuples of 1-based letters) to complex numbers.
    Zero coefficients are dropped on construction.
    """

    coeffs: Mapping[Word, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for w, c in self.coeffs.items():
            w = tuple(int(x) for x in w)
            if any(x < 1 for x in w):
                raise ValueError(f"letters are 1-based, got word {w}")
            c = complex(c)
            if c != 0:
                clean[w] = clean.get(w, 0) + c
        object.__setattr__(self, "coeffs", {w: c for w, c in sorted(clean.items(), key=_word_key) if c != 0})

    @classmethod
    def constant(cls, c: complex = 1.0) -> "NcPoly":
        return cls({(): c})

    @classmethod
    def generator(cls, j: int) -> "NcPoly":
        return cls({(j,): 1.0})

    @classmethod
    def linear(cls, coeffs: Iterable[complex]) -> "NcPoly":
        return cls({(j + 1,): c for j, c in enumerate(coeffs)})

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.coeffs), default=0)

    @property
    def letters(self) -> int:
        """Largest letter used (0 for constants)."""
        return max((max(w) for w in self.coeffs if w), default=0)

    def coefficient_norm(self) -> float:
        """l2 norm of the coefficient vector (the Fock-space norm of p(1))."""
        return float(np.sqrt(sum(abs(c) ** 2 for c in self.coeffs.values())))

    def __add__(self, other: "NcPoly") -> "NcPoly":
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out.get(w, 0) + c
        return NcPoly(out)

    def __neg__(self) -> "NcPoly":
        return NcPoly({w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        return self + (-other)

    def __mul__(self, other) -> "NcPoly":
        if not isinstance(other, NcPoly):
            return NcPoly({w: c * other for w, c in self.coeffs.items()})
        out: dict[Word, complex] = {}
        for u, a in self.coeffs.items():
            for v, b in other.coeffs.items():
                out[u + v] = out.get(u + v, 0) + a * b
        return NcPoly(out)

    __rmul__ = __mul__

    def __call__(self, lam) -> complex:
        return eval_scalar(self, lam)

    def to_list(self) -> list[dict]:
        return [{"word": list(w), "coeff": [c.real, c.imag]} for w, c in self.coeffs.items()]

    @classmethod
    def from_list(cls, items: Iterable[Mapping]) -> "NcPoly":
        coeffs: dict[Word, complex] = {}
        for item in items:
            w = tuple(item["word"])
            c = item["coeff"]
            c = complex(c[0], c[1]) if isinstance(c, (list, tuple)) else complex(c)
            coeffs[w] = coeffs.get(w, 0) + c
        return cls(coeffs)


def _word_key(item):
    return (len(item[0]), item[0])


def creation(j: int, basis: TruncatedFockBasis) -> FockOperator:
    """Left creation operator S_j compressed to the truncation."""
    if not 1 <= j <= basis.n:
        raise ValueError(f"generator index {j} out of range 1..{basis.n}")
    D = basis.size
    S = np.zeros((D, D), dtype=complex)
    # words of length < d occupy the first offset(d) slots
    for col in range(basis.offset(basis.d)):
        w = basis.words[col]
        S[basis.index((j,) + w), col] = 1.0
    return FockOperator(basis, S)


def poly_to_operator(p: NcPoly, basis: TruncatedFockBasis) -> FockOperator:
    if p.degree > basis.d:
        raise DegreeError(f"polynomial degree {p.degree} exceeds truncation degree {basis.d}")
    if p.letters > basis.n:
        raise ValueError(f"polynomial uses letter {p.letters} but basis has n={basis.n}")
    D = basis.size
    T = np.zeros((D, D), dtype=complex)
    for w, c in p.coeffs.items():
        k = len(w)
        for col in range(basis.offset(basis.d - k + 1)):
            T[basis.index(w + basis.words[col]), col] += c
    return FockOperator(basis, T)


def op_norm(T) -> float:
    """Largest singular value."""
    A = T.entries if isinstance(T, FockOperator) else np.asarray(T)
    if A.size == 0:
        return 0.0
    return float(np.linalg.svd(A, compute_uv=False)[0])


def row_norm(ops: Sequence) -> float:
    """Norm of the block row [T_1 ... T_n], i.e. sqrt(||sum T_j T_j*||)."""
    mats = [T.entries if isinstance(T, FockOperator) else np.atleast_2d(np.asarray(T, dtype=complex)) for T in ops]
    if not mats:
        return 0.0
    shape = mats[0].shape
    if any(M.shape != shape for M in mats):
        raise ValueError("row entries must share a shape")
    gram = sum(M @ M.conj().T for M in mats)
    return float(np.sqrt(max(np.linalg.eigvalsh(gram)[-1], 0.0)))


def eval_scalar(p: NcPoly, lam) -> complex:
    """Evaluate p at a point of the ball: S_j -> lam_j."""
    lam = np.asarray(lam, dtype=complex).reshape(-1)
    if p.letters > lam.size:
        raise ValueError(f"polynomial uses letter {p.letters} but point has dimension {lam.size}")
    total = 0j
    for w, c in p.coeffs.items():
        term = c
        for letter in w:
            term *= lam[letter - 1]
        total += term
    return complex(total)


def popescu_apply(p: NcPoly, T: Sequence) -> np.ndarray:
    """Substitute a strict row contraction T = (T_1, ..., T_n) for (S_1, ..., S_n)."""
    mats = [np.atleast_2d(np.asarray(t, dtype=complex)) for t in T]
    if not mats:
        raise ValueError("empty operator tuple")
    k = mats[0].shape[0]
    if any(M.shape != (k, k) for M in mats):
        raise ValueError("tuple entries must be square of equal size")
    if p.letters > len(mats):
        raise ValueError(f"polynomial uses letter {p.letters} but tuple has length {len(mats)}")
    r = row_norm(mats)
    if r >= 1.0:
        raise ValueError(f"row norm {r!r} is not < 1")
    out = np.zeros((k, k), dtype=complex)
    cache: dict[Word, np.ndarray] = {(): np.eye(k, dtype=complex)}
    for w, c in p.coeffs.items():
        out += c * _word_product(w, mats, cache)
    return out


def _word_product(w: Word, mats, cache) -> np.ndarray:
    if w not in cache:
        cache[w] = mats[w[0] - 1] @ _word_product(w[1:], mats, cache)
    return cache[w]
