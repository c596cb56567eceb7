"""Contractive analytic functions on B_n with a certified sup-norm bound.

A :class:`BallFunction` is an expression tree whose leaves are linear
forms sum_j a_j lam_j with sum |a_j|^2 <= 1 (the scalar symbols of the
Fock polynomials sum_j a_j S_j, whose operator norm is exactly the l2 norm
of the coefficients).  Combinators are precomposition with a ball
automorphism, finite products and scalar multiples of modulus <= 1; each
preserves the bound, so every tree evaluates into the closed unit disc.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ball import MoebiusMap, as_point, involution_at, involution_apply
from .fock import NcPoly
from .serialize import map_from_json, map_to_json, point_from_json, point_to_json

BOUND_SLACK = 1e-12


class BallFunction:
    """Base class; subclasses are immutable tree nodes."""

    def __call__(self, lam) -> complex:
        return self.evaluate(as_point(lam))

    def evaluate(self, lam: np.ndarray) -> complex:
        raise NotImplementedError

    def sup_bound(self) -> float:
        """Certified upper bound for sup |f| over the ball."""
        raise NotImplementedError

    def to_dict(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_dict(data: dict) -> "BallFunction":
        kind = data["kind"]
        if kind == "linear":
            return LinearForm(tuple(_c(c) for c in data["coeffs"]))
        if kind == "compose":
            m = map_from_json(data["map"])
            if "center" in data:
                m = involution_at(point_from_json(data["center"], m.dim))
            return Precomposed(BallFunction.from_dict(data["inner"]), m)
        if kind == "product":
            return Product(tuple(BallFunction.from_dict(f) for f in data["factors"]))
        if kind == "scaled":
            return Scaled(_c(data["scalar"]), BallFunction.from_dict(data["inner"]))
        raise ValueError(f"unknown ball function node {kind!r}")

    def __mul__(self, other: "BallFunction") -> "Product":
        return Product((self, other))


def _c(pair) -> complex:
    if isinstance(pair, (list, tuple)):
        return complex(pair[0], pair[1])
    return complex(pair)


def _pair(z: complex) -> list[float]:
    return [z.real, z.imag]


@dataclass(frozen=True)
class LinearForm(BallFunction):
    coeffs: tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(complex(c) for c in self.coeffs))
        if self.sup_bound() > 1.0 + BOUND_SLACK:
            raise ValueError(f"linear form has coefficient norm {self.sup_bound()} > 1")

    def evaluate(self, lam):
        if lam.size != len(self.coeffs):
            raise ValueError(f"dimension mismatch: form on C^{len(self.coeffs)}, point in C^{lam.size}")
        return complex(np.dot(self.coeffs, lam))

    def sup_bound(self):
        return float(np.linalg.norm(self.coeffs))

    def to_poly(self) -> NcPoly:
        return NcPoly.linear(self.coeffs)

    def to_dict(self):
        return {"kind": "linear", "coeffs": [_pair(c) for c in self.coeffs]}


@dataclass(frozen=True, eq=False)
class Precomposed(BallFunction):
    """lam -> inner(m(lam))."""

    inner: BallFunction
    map: MoebiusMap

    def evaluate(self, lam):
        return self.inner.evaluate(self.map(lam))

    def sup_bound(self):
        return self.inner.sup_bound()

    def to_dict(self):
        out = {"kind": "compose", "map": map_to_json(self.map), "inner": self.inner.to_dict()}
        if self.map.center is not None:
            out["center"] = point_to_json(self.map.center)
        return out


@dataclass(frozen=True)
class Product(BallFunction):
    factors: tuple[BallFunction, ...] = ()

    def evaluate(self, lam):
        out = 1.0 + 0j
        for f in self.factors:
            out *= f.evaluate(lam)
        return out

    def sup_bound(self):
        return float(np.prod([f.sup_bound() for f in self.factors])) if self.factors else 1.0

    def to_dict(self):
        return {"kind": "product", "factors": [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class Scaled(BallFunction):
    scalar: complex
    inner: BallFunction

    def __post_init__(self):
        object.__setattr__(self, "scalar", complex(self.scalar))
        if abs(self.scalar) > 1.0 + BOUND_SLACK:
            raise ValueError(f"scalar {self.scalar} has modulus > 1")

    def evaluate(self, lam):
        return self.scalar * self.inner.evaluate(lam)

    def sup_bound(self):
        return abs(self.scalar) * self.inner.sup_bound()

    def to_dict(self):
        return {"kind": "scaled", "scalar": _pair(self.scalar), "inner": self.inner.to_dict()}


def zero_function(n: int) -> LinearForm:
    return LinearForm((0j,) * n)


def extremal_distance(z, w) -> tuple[float, BallFunction]:
    """Attain the pseudohyperbolic distance by a contractive function.

    The witness is the unit linear form conj(u)/|u| composed with the
    involution at ``w``, where u is the image of ``z`` under that
    involution.  It vanishes at ``w`` and has modulus rho(z, w) at ``z``.
    """
    z = as_point(z)
    w = as_point(w, z.size)
    u = involution_apply(w, z)
    r = float(np.linalg.norm(u))
    if r == 0.0:
        return 0.0, zero_function(z.size)
    witness = Precomposed(LinearForm(tuple(np.conj(u) / r)), involution_at(w))
    return abs(witness(z)), witness

