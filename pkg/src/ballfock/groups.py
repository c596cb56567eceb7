"""Finite truncations of discrete groups of ball automorphisms.

Elements are enumerated breadth-first by word length.  Words use signed
1-based generator indices: ``k`` is the k-th generator and ``-k`` its
inverse.  Distinct words representing the same map (up to a unimodular
scalar on the matrix) are merged, keeping the first word found.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .ball import MoebiusMap, apply, as_point, compose, inverse, pseudo_distances
from .fock import NcPoly

logger = logging.getLogger(__name__)

MATRIX_DEDUP_TOL = 1e-9
ORBIT_DEDUP_TOL = 1e-8
VERDICT_MARGIN = 0.05


@dataclass(frozen=True)
class GroupPresentation:
    n: int
    generators: tuple[MoebiusMap, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        for g in self.generators:
            if g.dim != self.n:
                raise ValueError(f"generator of dimension {g.dim} in a presentation for B_{self.n}")

    def letters(self) -> list[tuple[int, MoebiusMap]]:
        """Generators and their inverses in enumeration order +1, -1, +2, -2, ..."""
        out = []
        for k, g in enumerate(self.generators, start=1):
            out.append((k, g))
            out.append((-k, inverse(g)))
        return out


@dataclass(frozen=True, eq=False)
class GroupElement:
    word: tuple[int, ...]
    map: MoebiusMap

    @property
    def shell(self) -> int:
        return len(self.word)


def _phase_distance(stack: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """min over |w| = 1 of the max-entry distance between each stacked matrix and w*mat."""
    flat = stack.reshape(stack.shape[0], -1)
    v = mat.reshape(-1)
    ip = flat.conj() @ v
    phase = np.where(np.abs(ip) > 0, ip / np.where(np.abs(ip) > 0, np.abs(ip), 1.0), 1.0)
    return np.max(np.abs(flat * phase[:, None] - v[None, :]), axis=1)


class _MatrixIndex:
    """Buckets normalized matrices by |corner entry|, which ignores phase."""

    def __init__(self, tol: float):
        self.tol = tol
        self.buckets: dict[int, list[int]] = {}
        self.mats: list[np.ndarray] = []

    def _key(self, mat: np.ndarray) -> int:
        return int(math.floor(math.log(abs(mat[-1, -1])) * 1e6))

    def find(self, mat: np.ndarray) -> int | None:
        k = self._key(mat)
        idx = [i for kk in (k - 1, k, k + 1) for i in self.buckets.get(kk, ())]
        if not idx:
            return None
        dist = _phase_distance(np.array([self.mats[i] for i in idx]), mat)
        j = int(np.argmin(dist))
        return idx[j] if dist[j] <= self.tol * max(1.0, float(np.max(np.abs(mat)))) else None

    def add(self, mat: np.ndarray) -> int:
        self.mats.append(mat)
        self.buckets.setdefault(self._key(mat), []).append(len(self.mats) - 1)
        return len(self.mats) - 1


def enumerate_elements(g: GroupPresentation, max_len: int, tol: float = MATRIX_DEDUP_TOL) -> list[GroupElement]:
    """All distinct elements given by words of length <= max_len, by shell."""
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    letters = g.letters()
    ident = GroupElement((), MoebiusMap.identity(g.n))
    elements = [ident]
    index = _MatrixIndex(tol)
    index.add(ident.map.mat)
    frontier = [ident]
    collisions = 0
    for _ in range(max_len):
        nxt = []
        for elem in frontier:
            for sym, gen in letters:
                if elem.word and elem.word[-1] == -sym:
                    continue
                m = compose(elem.map, gen)
                if index.find(m.mat) is not None:
                    collisions += 1
                    continue
                index.add(m.mat)
                new = GroupElement(elem.word + (sym,), m)
                elements.append(new)
                nxt.append(new)
        frontier = nxt
        if not frontier:
            break
    if collisions:
        logger.warning("enumeration merged %d words representing known elements", collisions)
    return elements


@dataclass(frozen=True, eq=False)
class Orbit:
    """Deduplicated images of 0, each tagged with the shell where it first appeared."""

    points: tuple[np.ndarray, ...]
    shells: tuple[int, ...]
    witnesses: tuple[GroupElement | None, ...]
    dedup_tol: float = ORBIT_DEDUP_TOL

    @property
    def n(self) -> int:
        return self.points[0].size

    def array(self) -> np.ndarray:
        return np.array(self.points)

    def radii(self) -> np.ndarray:
        return np.linalg.norm(self.array(), axis=1)

    def nearest(self, z) -> tuple[int, float]:
        d = pseudo_distances(z, self.array())
        j = int(np.argmin(d))
        return j, float(d[j])

    def default_core_radius(self) -> float:
        """Radius of the innermost two shells."""
        r = self.radii()
        inner = [ri for ri, s in zip(r, self.shells) if s <= 1]
        return float(max(inner))

    def region_radius(self) -> float:
        """Radius below which the enumeration is taken to be complete.

        This is the smallest radius among points of the outermost shell.
        """
        r = self.radii()
        top = max(self.shells)
        return float(min(ri for ri, s in zip(r, self.shells) if s == top))

    @classmethod
    def from_points(cls, points: Sequence, dedup_tol: float = ORBIT_DEDUP_TOL) -> "Orbit":
        """Treat a finite set as orbit-like: shells are the distinct radius levels.

        The set must contain 0; it is added when absent.
        """
        pts = [as_point(p) for p in points]
        if not pts:
            raise ValueError("empty point set")
        n = pts[0].size
        kept: list[np.ndarray] = []
        for p in [np.zeros(n, dtype=complex)] + pts:
            if kept and np.min(pseudo_distances(p, np.array(kept))) <= dedup_tol:
                continue
            kept.append(p)
        kept.sort(key=lambda p: float(np.linalg.norm(p)))
        shells, levels = [], []
        for p in kept:
            r = float(np.linalg.norm(p))
            if not levels or r - levels[-1] > dedup_tol:
                levels.append(r)
            shells.append(len(levels) - 1)
        return cls(tuple(kept), tuple(shells), (None,) * len(kept), dedup_tol)


def orbit_of_origin(elements: Sequence[GroupElement], dedup_tol: float = ORBIT_DEDUP_TOL) -> Orbit:
    if not elements:
        raise ValueError("no elements")
    n = elements[0].map.dim
    origin = np.zeros(n)
    pts: list[np.ndarray] = []
    shells: list[int] = []
    wit: list[GroupElement] = []
    for elem in elements:
        p = apply(elem.map, origin)
        if pts and np.min(pseudo_distances(p, np.array(pts))) <= dedup_tol:
            continue
        pts.append(p)
        shells.append(elem.shell)
        wit.append(elem)
    return Orbit(tuple(pts), tuple(shells), tuple(wit), dedup_tol)


class Verdict(str, enum.Enum):
    CONVERGENT = "convergent"
    DIVERGENT = "divergent"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class ShellSummary:
    length: int
    count: int
    term_sum: float


@dataclass(frozen=True)
class BlaschkeReport:
    shells: tuple[ShellSummary, ...]
    partial_sums: tuple[float, ...]
    ratio: float | None
    verdict: Verdict
    extrapolated_sum: float | None
    closed: bool = False
    terms: tuple[float, ...] = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {
            "shells": [{"len": s.length, "count": s.count, "term_sum": s.term_sum} for s in self.shells],
            "partial_sums": list(self.partial_sums),
            "ratio": self.ratio,
            "closed": self.closed,
            "verdict": self.verdict.value,
            "extrapolated_sum": self.extrapolated_sum,
        }


def _is_closed(elements: Sequence[GroupElement], tol: float = MATRIX_DEDUP_TOL) -> bool:
    """True when the list is closed under multiplication by its shell-1 elements."""
    index = _MatrixIndex(tol)
    for e in elements:
        index.add(e.map.mat)
    gens = [e for e in elements if e.shell == 1]
    for e in elements:
        for g in gens:
            if index.find(compose(e.map, g.map).mat) is None:
                return False
    return True


def blaschke_report(elements: Sequence[GroupElement], margin: float = VERDICT_MARGIN) -> BlaschkeReport:
    """Sum 1 - |g(0)| over group elements, shell by shell, and judge the tail.

    The verdict is convergent for a finite group (the list is closed), and
    otherwise comes from a least-squares fit of log(shell sum) against the
    shell length over the tail shells: the fitted ratio r = exp(slope) must
    be <= 1 - margin for convergent or >= 1 + margin for divergent.
    """
    if not elements:
        raise ValueError("no elements")
    n = elements[0].map.dim
    origin = np.zeros(n)
    terms = [1.0 - float(np.linalg.norm(apply(e.map, origin))) for e in elements]
    top = max(e.shell for e in elements)
    counts = [0] * (top + 1)
    sums = [0.0] * (top + 1)
    for e, t in zip(elements, terms):
        counts[e.shell] += 1
        sums[e.shell] += t
    shells = tuple(ShellSummary(k, counts[k], sums[k]) for k in range(top + 1))
    partial = tuple(float(x) for x in np.cumsum(sums))

    closed = _is_closed(elements)
    ratio = None
    extrap = None
    if closed:
        verdict = Verdict.CONVERGENT
        extrap = partial[-1]
    else:
        fit_shells = [k for k in range(1, top + 1) if sums[k] > 0]
        fit_shells = fit_shells[-max(3, len(fit_shells) // 2):]
        if len(fit_shells) < 3:
            verdict = Verdict.UNDECIDED
        else:
            slope = np.polyfit(fit_shells, np.log([sums[k] for k in fit_shells]), 1)[0]
            ratio = float(np.exp(slope))
            if ratio <= 1.0 - margin:
                verdict = Verdict.CONVERGENT
                extrap = partial[-1] + sums[top] * ratio / (1.0 - ratio)
            elif ratio >= 1.0 + margin:
                verdict = Verdict.DIVERGENT
            else:
                verdict = Verdict.UNDECIDED
    return BlaschkeReport(shells, partial, ratio, verdict, extrap, closed, tuple(terms))


class Check(str, enum.Enum):
    PASS = "pass"
    FAIL = "fail"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class StabilizerResult:
    status: Check
    core_size: int
    max_mismatch: float
    exits: int

    def to_dict(self) -> dict:
        return {"status": self.status.value, "core_size": self.core_size,
                "max_mismatch": self.max_mismatch, "exits": self.exits}


def stabilizer_check(candidate: MoebiusMap, orbit: Orbit, core_radius: float | None = None,
                     tol: float = 1e-8) -> StabilizerResult:
    """Test whether ``candidate`` maps the core of the orbit into the orbit.

    Core points are orbit points p with rho(0, p) <= core_radius.  An image
    that matches no orbit point within ``tol`` is a failure if it lies
    inside the enumerated region and undecided if it falls outside it.
    """
    if core_radius is None:
        core_radius = orbit.default_core_radius()
    region = orbit.region_radius()
    radii = orbit.radii()
    core = [p for p, r in zip(orbit.points, radii) if r <= core_radius + tol]
    worst = 0.0
    exits = 0
    failed = False
    for p in core:
        img = apply(candidate, p)
        _, dist = orbit.nearest(img)
        if dist <= tol:
            continue
        worst = max(worst, dist)
        if float(np.linalg.norm(img)) > region + tol:
            exits += 1
        else:
            failed = True
    if failed:
        status = Check.FAIL
    elif exits:
        status = Check.UNDECIDED
    else:
        status = Check.PASS
    return StabilizerResult(status, len(core), worst, exits)


def as_evaluator(f) -> Callable[[np.ndarray], complex]:
    if isinstance(f, NcPoly):
        return f.__call__
    return f


def dual_action_eval(g: MoebiusMap, f, lam) -> complex:
    """Evaluate the image of ``f`` under the automorphism induced by ``g``: f(g^{-1}(lam))."""
    lam = as_point(lam, g.dim)
    return complex(as_evaluator(f)(apply(inverse(g), lam)))


def cyclic_example() -> GroupPresentation:
    """The cyclic group generated by z -> (z - 1/2)/(1 - z/2) on the disc."""
    return GroupPresentation(1, (MoebiusMap.from_matrix([[1.0, -0.5], [-0.5, 1.0]]),))


def rotation(angle: float, n: int = 1) -> MoebiusMap:
    """z -> exp(i angle) z."""
    return MoebiusMap.unitary(np.exp(1j * angle) * np.eye(n))


def rotation_group(order: int, n: int = 1) -> GroupPresentation:
    return GroupPresentation(n, (rotation(2 * np.pi / order, n),))


def moebius_1d(a: complex) -> MoebiusMap:
    """z -> (z - a)/(1 - conj(a) z) on the disc."""
    a = complex(a)
    return MoebiusMap.from_matrix([[1.0, -a], [-np.conj(a), 1.0]])
