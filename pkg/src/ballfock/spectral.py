"""Vanishing products, spectral-closure membership and orbit certificates.

For a finite set D in the ball and a probe z outside it, the product of
extremal witnesses (one per point of D, all pulled back through the
involution sending z to 0) is a contractive function that vanishes on D
and takes the value prod_j rho(z, lam_j) at z.  A finite set only ever
supplies a partial product of a possibly infinite one, so a small value
at z cannot rule membership out; such probes are reported as undecided.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ball import MoebiusMap, apply, as_point, involution_at, inverse, pseudo_distances
from .functions import BallFunction, Precomposed, Product, extremal_distance
from .groups import (
    GroupElement,
    Orbit,
    StabilizerResult,
    as_evaluator,
    orbit_of_origin,
    stabilizer_check,
)
from .serialize import point_to_json

IN_TOL = 1e-10
OUT_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class VanishingProduct:
    base_map: MoebiusMap
    points: tuple[np.ndarray, ...]
    factors: tuple[BallFunction, ...]
    function: BallFunction
    probe: np.ndarray

    def __call__(self, lam) -> complex:
        return self.function(lam)

    @property
    def value_at_probe(self) -> complex:
        return self.function(self.probe)

    def to_dict(self) -> dict:
        return {
            "probe": point_to_json(self.probe),
            "points": [point_to_json(p) for p in self.points],
            "arity": len(self.factors),
            "function": self.function.to_dict(),
        }


def vanishing_witness(delta: Sequence, z, shells: Sequence[int] | None = None) -> VanishingProduct:
    """Contractive function vanishing on ``delta`` and nonzero at ``z``.

    Factors are ordered by shell (when given), then by distance from 0.
    """
    z = as_point(z)
    pts = [as_point(p, z.size) for p in delta]
    if pts:
        d = pseudo_distances(z, np.array(pts))
        if np.min(d) <= 1e-12:
            raise ValueError("probe lies in the set; no vanishing witness separates it")
    if shells is None:
        shells = [0] * len(pts)
    order = sorted(range(len(pts)), key=lambda i: (shells[i], float(np.linalg.norm(pts[i])), i))
    pts = [pts[i] for i in order]

    base = involution_at(z)
    origin = np.zeros(z.size)
    factors = []
    for p in pts:
        _, f = extremal_distance(origin, apply(base, p))
        factors.append(f)
    fn = Precomposed(Product(tuple(factors)), base)
    return VanishingProduct(base, tuple(pts), tuple(factors), fn, z)


class Membership(str, enum.Enum):
    IN = "In"
    OUT = "Out"
    UNDECIDED = "Undecided"


@dataclass(frozen=True, eq=False)
class MembershipVerdict:
    status: Membership
    witness: VanishingProduct | None
    witness_value: float
    truncation: int
    threshold: float

    def to_dict(self) -> dict:
        return {
            "status": self.status.value,
            "witness_value": self.witness_value,
            "truncation": self.truncation,
            "threshold": self.threshold,
        }


def spectral_membership(delta: Sequence, z, threshold: float = OUT_THRESHOLD,
                        in_tol: float = IN_TOL) -> MembershipVerdict:
    """Classify ``z`` against the spectral closure of a finite truncation ``delta``."""
    z = as_point(z)
    pts = [as_point(p, z.size) for p in delta]
    if pts and float(np.min(pseudo_distances(z, np.array(pts)))) <= in_tol:
        return MembershipVerdict(Membership.IN, None, 0.0, len(pts), threshold)
    w = vanishing_witness(pts, z)
    value = abs(w.value_at_probe)
    status = Membership.OUT if value > threshold else Membership.UNDECIDED
    return MembershipVerdict(status, w, value, len(pts), threshold)


@dataclass(frozen=True)
class ErgodicityReport:
    invariance_defect: float
    constancy_defect: float
    tol: float
    core_size: int
    orbit_size: int

    @property
    def invariant(self) -> bool:
        return self.invariance_defect <= self.tol

    @property
    def constant(self) -> bool:
        return self.constancy_defect <= self.tol

    @property
    def implication_holds(self) -> bool:
        return (not self.invariant) or self.constant

    def to_dict(self) -> dict:
        return {
            "invariance_defect": self.invariance_defect,
            "constancy_defect": self.constancy_defect,
            "invariant": self.invariant,
            "constant": self.constant,
            "implication_holds": self.implication_holds,
            "tol": self.tol,
            "core_size": self.core_size,
            "orbit_size": self.orbit_size,
        }


def ergodicity_certificate(elements: Sequence[GroupElement], f, tol: float = 1e-10,
                           core_radius: float | None = None) -> ErgodicityReport:
    """Measure how far ``f`` is from invariance and from constancy on the orbit of 0.

    invariance defect = max |f(g^{-1} lam) - f(lam)| over enumerated g and
    core orbit points lam; constancy defect = max |f(lam) - f(0)| over the
    whole orbit.  Since 0 is a core point, invariance forces constancy.
    """
    ev = as_evaluator(f)
    orbit = orbit_of_origin(elements)
    if core_radius is None:
        core_radius = orbit.default_core_radius()
    core = [p for p, r in zip(orbit.points, orbit.radii()) if r <= core_radius + 1e-12]
    inverses = [inverse(e.map) for e in elements]
    inv = 0.0
    for lam in core:
        base = ev(lam)
        for gi in inverses:
            inv = max(inv, abs(ev(apply(gi, lam)) - base))
    f0 = ev(orbit.points[0])
    const = max(abs(ev(p) - f0) for p in orbit.points)
    return ErgodicityReport(float(inv), float(const), tol, len(core), len(orbit.points))


def quotient_automorphism_check(g: MoebiusMap, delta: Sequence, tol: float = 1e-8,
                                core_radius: float | None = None) -> StabilizerResult:
    """Finite test that ``g`` maps the set into itself (and so acts on the quotient)."""
    return stabilizer_check(g, Orbit.from_points(delta, dedup_tol=min(tol, 1e-8)), core_radius, tol)


def reduce_dimension(delta: Sequence, tol: float = 1e-10) -> tuple[np.ndarray, int]:
    """Unitary U and k with U(delta) inside C^k x {0}, k = rank of the span."""
    pts = np.array([as_point(p) for p in delta])
    if pts.size == 0:
        raise ValueError("empty set")
    W, s, _ = np.linalg.svd(pts.T)
    k = int(np.sum(s > tol))
    # fix column phases so the largest entry of each column is real positive
    for j in range(W.shape[1]):
        i = int(np.argmax(np.abs(W[:, j])))
        W[:, j] *= np.conj(W[i, j]) / abs(W[i, j])
    return W.conj().T, k

