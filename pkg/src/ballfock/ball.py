"""Points and automorphisms of the open unit ball B_n in C^n.

Automorphisms are stored projectively as (n+1)x(n+1) complex matrices
preserving the Hermitian form J = diag(I_n, -1).  A matrix

    [[A,  b],
     [c*, d]]

acts by z -> (A z + b) / (<z, c> + d).  Every stored matrix is normalized
so that |det M| = 1 and the corner entry d is real and positive, which
makes the representative unique and lets element lists be deduplicated by
plain matrix distance.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

FORM_TOL = 1e-12
DENOM_TOL = 1e-14


class BallError(ValueError):
    """A point that was required to lie in the open ball does not."""


class FormError(ValueError):
    """A matrix does not preserve the signature-(n,1) form."""


def as_point(z, n: int | None = None) -> np.ndarray:
    """Validate ``z`` as a point of B_n and return a read-only complex array.

    Scalars are promoted to points of B_1.
    """
    arr = np.array(z, dtype=complex).reshape(-1)
    if arr.size == 0:
        raise BallError("a point needs at least one coordinate")
    if n is not None and arr.size != n:
        raise BallError(f"expected a point of B_{n}, got dimension {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise BallError("point has non-finite coordinates")
    norm = np.linalg.norm(arr)
    if norm >= 1.0:
        raise BallError(f"point has norm {norm!r} >= 1")
    arr.setflags(write=False)
    return arr


def inner(z: np.ndarray, w: np.ndarray) -> complex:
    """<z, w> = sum_j z_j conj(w_j)."""
    return complex(np.vdot(w, z))


def form_matrix(n: int) -> np.ndarray:
    return np.diag(np.r_[np.ones(n), -1.0]).astype(complex)


def _normalize(mat: np.ndarray) -> np.ndarray:
    m = mat.shape[0]
    det = np.linalg.det(mat)
    if not np.isfinite(det) or abs(det) == 0.0:
        raise FormError("matrix is singular")
    mat = mat / abs(det) ** (1.0 / m)
    d = mat[-1, -1]
    if abs(d) < DENOM_TOL:
        raise FormError("corner entry vanishes; not an automorphism of the ball")
    return mat * (np.conj(d) / abs(d))


def form_defect(mat: np.ndarray) -> float:
    """Largest entry of |M* J M - J|."""
    n = mat.shape[0] - 1
    J = form_matrix(n)
    return float(np.max(np.abs(mat.conj().T @ J @ mat - J)))


@dataclass(frozen=True, eq=False)
class MoebiusMap:
    """Automorphism of B_n held as a normalized projective matrix.

    Build instances with :meth:`from_matrix` (normalizes and validates) or
    the module-level constructors; the raw constructor trusts its input.
    """

    mat: np.ndarray
    # set for involutions; apply() then uses the exact vector formula
    center: np.ndarray | None = None

    @property
    def dim(self) -> int:
        return self.mat.shape[0] - 1

    @classmethod
    def from_matrix(cls, mat, tol: float = FORM_TOL) -> "MoebiusMap":
        mat = np.array(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1] or mat.shape[0] < 2:
            raise FormError(f"expected a square matrix of size >= 2, got {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise FormError("matrix has non-finite entries")
        mat = _normalize(mat)
        # entries grow like 1/sqrt(1 - |g(0)|^2); scale the check with them
        scale = max(1.0, float(np.max(np.abs(mat))) ** 2)
        defect = form_defect(mat)
        if defect > tol * scale:
            raise FormError(f"matrix does not preserve the form (defect {defect:.3e})")
        mat.setflags(write=False)
        return cls(mat)

    @classmethod
    def identity(cls, n: int) -> "MoebiusMap":
        mat = np.eye(n + 1, dtype=complex)
        mat.setflags(write=False)
        return cls(mat)

    @classmethod
    def unitary(cls, U) -> "MoebiusMap":
        """The linear automorphism z -> U z."""
        U = np.asarray(U, dtype=complex)
        n = U.shape[0]
        mat = np.eye(n + 1, dtype=complex)
        mat[:n, :n] = U
        return cls.from_matrix(mat)

    def __call__(self, z) -> np.ndarray:
        return apply(self, z)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"MoebiusMap(dim={self.dim})"


def apply(m: MoebiusMap, z) -> np.ndarray:
    """Image of ``z`` under ``m``."""
    z = as_point(z, m.dim)
    if m.center is not None:
        return as_point(involution_apply(m.center, z))
    n = m.dim
    v = m.mat[:, :n] @ z + m.mat[:, n]
    denom = v[n]
    if abs(denom) < DENOM_TOL:
        raise FormError("vanishing denominator; map is not normalized")
    return as_point(v[:n] / denom)


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """The map z -> m1(m2(z))."""
    if m1.dim != m2.dim:
        raise ValueError(f"dimension mismatch: {m1.dim} vs {m2.dim}")
    return MoebiusMap.from_matrix(m1.mat @ m2.mat)


def inverse(m: MoebiusMap) -> MoebiusMap:
    # M^{-1} = J M* J for form-preserving M; exact up to rounding
    J = form_matrix(m.dim)
    return MoebiusMap.from_matrix(J @ m.mat.conj().T @ J)


def involution_at(a) -> MoebiusMap:
    """The involutive automorphism exchanging ``a`` and 0.

    It acts by z -> (a - P z - s Q z) / (1 - <z, a>) where P projects onto
    span(a), Q = I - P and s = sqrt(1 - |a|^2).  For a = 0 this is z -> -z.
    """
    a = as_point(a)
    n = a.size
    P = _projection(a)
    s = np.sqrt(1.0 - np.vdot(a, a).real)
    mat = np.empty((n + 1, n + 1), dtype=complex)
    mat[:n, :n] = -(P + s * (np.eye(n) - P))
    mat[:n, n] = a
    mat[n, :n] = -a.conj()
    mat[n, n] = 1.0
    return MoebiusMap(MoebiusMap.from_matrix(mat).mat, a)


def _projection(a: np.ndarray) -> np.ndarray:
    r2 = np.vdot(a, a).real
    if r2 == 0.0:
        return np.zeros((a.size, a.size), dtype=complex)
    return np.outer(a, a.conj()) / r2


def involution_apply(a, z) -> np.ndarray:
    """Evaluate the involution at ``a`` on ``z`` without building a matrix.

    Arranged so that the image of ``a`` itself is exactly 0.
    """
    a = np.asarray(a, dtype=complex)
    z = np.asarray(z, dtype=complex)
    r2 = np.vdot(a, a).real
    za = np.vdot(a, z)
    coef = complex(za.real / r2, za.imag / r2) if r2 > 0 else 0j
    s = np.sqrt(1.0 - r2)
    return (a * (1.0 - coef) - s * (z - a * coef)) / (1.0 - za)


def pseudo_distance(z, w) -> float:
    """Pseudohyperbolic distance |phi_w(z)| with phi_w the involution at w."""
    z = as_point(z)
    w = as_point(w, z.size)
    return float(np.linalg.norm(involution_apply(w, z)))


def pseudo_distances(z, points) -> np.ndarray:
    """Distances from ``z`` to each row of ``points`` (vectorized)."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    W = np.asarray(points, dtype=complex).reshape(-1, z.size)
    if W.shape[0] == 0:
        return np.zeros(0)
    r2 = np.einsum("ij,ij->i", W.conj(), W).real
    zw = W.conj() @ z
    safe = np.where(r2 > 0, r2, 1.0)
    coef = np.where(r2 > 0, zw.real / safe + 1j * (zw.imag / safe), 0.0)
    s = np.sqrt(1.0 - r2)
    num = W * (1.0 - coef)[:, None] - s[:, None] * (z[None, :] - W * coef[:, None])
    return np.linalg.norm(num, axis=1) / np.abs(1.0 - zw)


def comparability_factor(a, z) -> float:
    """Factor F with 1 - |phi_a(z)| = F * (1 - |z|), phi_a the involution at a.

    F = (1 - |a|^2)(1 + |z|) / ((1 + |phi_a(z)|) |1 - <z, a>|^2).
    """
    a = as_point(a)
    z = as_point(z, a.size)
    na2 = np.vdot(a, a).real
    nz = np.linalg.norm(z)
    nphi = np.linalg.norm(involution_apply(a, z))
    return float((1.0 - na2) * (1.0 + nz) / ((1.0 + nphi) * abs(1.0 - inner(z, a)) ** 2))


def comparability_bounds(a) -> tuple[float, float]:
    """The enclosure ((1 - |a|^2)/2, 2/(1 - |a|)) for the comparability factor.

    The lower end is only valid for |a| <= sqrt(2) - 1; use
    :func:`sharp_comparability_bounds` for an enclosure that always holds.
    """
    r = float(np.linalg.norm(as_point(a)))
    return (1.0 - r * r) / 2.0, 2.0 / (1.0 - r)


def sharp_comparability_bounds(a) -> tuple[float, float]:
    """Bounds valid for every z: ((1-|a|)/(2(1+|a|)), 2(1+|a|)/(1-|a|))."""
    r = float(np.linalg.norm(as_point(a)))
    return (1.0 - r) / (2.0 * (1.0 + r)), 2.0 * (1.0 + r) / (1.0 - r)


def is_identity_up_to_phase(m: MoebiusMap, tol: float = 1e-9) -> bool:
    n = m.dim
    I = np.eye(n + 1)
    # best unimodular scalar aligning m with I
    tr = np.trace(m.mat)
    phase = tr / abs(tr) if abs(tr) > 0 else 1.0
    return bool(np.max(np.abs(m.mat / phase - I)) <= tol)


def fixes_points(m: MoebiusMap, points: Iterable, tol: float = 1e-9) -> bool:
    return all(np.linalg.norm(apply(m, p) - as_point(p)) <= tol for p in points)


def rigidity_check(m: MoebiusMap, points: Sequence, tol: float = 1e-9) -> str | None:
    """Check that a map fixing 0 and spanning fixed points is the identity.

    Returns None when the hypotheses do not hold (the map moves 0 or one of
    ``points``, or the points fail to span C^n).  Otherwise returns
    ``"identity"`` or ``"violated"``.
    """
    n = m.dim
    if not fixes_points(m, [np.zeros(n)], tol) or not fixes_points(m, points, tol):
        return None
    P = np.array([as_point(p, n) for p in points]).reshape(-1, n)
    if P.shape[0] == 0 or np.linalg.matrix_rank(P, tol=1e-10) < n:
        return None
    return "identity" if is_identity_up_to_phase(m, tol) else "violated"


def random_point(rng: np.random.Generator, n: int, radius: float = 1.0) -> np.ndarray:
    """Uniform sample from the ball of the given radius in C^n."""
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    return as_point(v * radius * rng.uniform() ** (1.0 / (2 * n)))


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_moebius(rng: np.random.Generator, n: int, radius: float = 0.9) -> MoebiusMap:
    """Random automorphism: a unitary followed by an involution."""
    a = random_point(rng, n, radius)
    return compose(involution_at(a), MoebiusMap.unitary(random_unitary(rng, n)))
