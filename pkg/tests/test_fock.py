import itertools

import numpy as np
import pytest

from ballfock.fock import (
    DegreeError,
    NcPoly,
    TruncatedFockBasis,
    creation,
    eval_scalar,
    op_norm,
    poly_to_operator,
    popescu_apply,
    row_norm,
)


def brute_poly_action(p, n, d):
    """Oracle: act on basis words by concatenation with explicit dictionaries."""
    words = [w for k in range(d + 1) for w in itertools.product(range(1, n + 1), repeat=k)]
    pos = {w: i for i, w in enumerate(words)}
    M = np.zeros((len(words), len(words)), dtype=complex)
    for v in words:
        for w, c in p.coeffs.items():
            if len(w) + len(v) <= d:
                M[pos[w + v], pos[v]] += c
    return M


def random_poly(rng, n, deg, terms=6):
    coeffs = {}
    for _ in range(terms):
        k = int(rng.integers(0, deg + 1))
        w = tuple(int(x) for x in rng.integers(1, n + 1, size=k))
        coeffs[w] = rng.normal() + 1j * rng.normal()
    return NcPoly(coeffs)


def test_basis_indexing():
    b = TruncatedFockBasis(2, 2)
    assert b.size == 7
    assert b.words == [(), (1,), (2,), (1, 1), (1, 2), (2, 1), (2, 2)]
    for i, w in enumerate(b.words):
        assert b.index(w) == i
    with pytest.raises(DegreeError):
        b.index((1, 1, 1))


def test_creation_examples():
    b = TruncatedFockBasis(2, 2)
    S1 = creation(1, b).entries
    np.testing.assert_array_equal(S1 @ b.vector(()), b.vector((1,)))
    np.testing.assert_array_equal(S1 @ b.vector((2,)), b.vector((1, 2)))
    np.testing.assert_array_equal(S1 @ b.vector((1, 1)), 0)


def test_poly_operator_matches_brute_force(rng):
    for n, d in [(1, 4), (2, 3), (3, 2)]:
        for _ in range(10):
            p = random_poly(rng, n, d)
            np.testing.assert_allclose(poly_to_operator(p, TruncatedFockBasis(n, d)).entries,
                                       brute_poly_action(p, n, d), atol=1e-15)


def test_poly_one_is_identity():
    b = TruncatedFockBasis(3, 2)
    np.testing.assert_array_equal(poly_to_operator(NcPoly.constant(1), b).entries, np.eye(b.size))


def test_commutator_nonzero():
    b = TruncatedFockBasis(2, 2)
    p = NcPoly({(1, 2): 1, (2, 1): -1})
    T = poly_to_operator(p, b).entries
    assert op_norm(T) > 0
    assert np.linalg.norm(T @ b.vector(()) - (b.vector((1, 2)) - b.vector((2, 1)))) == 0


def test_degree_overflow():
    with pytest.raises(DegreeError):
        poly_to_operator(NcPoly({(1, 1, 1): 1}), TruncatedFockBasis(2, 2))


def test_multiplicative_up_to_truncation(rng):
    b = TruncatedFockBasis(2, 4)
    p, q = random_poly(rng, 2, 2), random_poly(rng, 2, 2)
    lhs = poly_to_operator(p * q, b).entries
    rhs = poly_to_operator(p, b).entries @ poly_to_operator(q, b).entries
    # products agree exactly (both are compressions of left multiplication)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_linear_norm_formula():
    for d in range(1, 6):
        b = TruncatedFockBasis(2, d)
        assert op_norm(poly_to_operator(NcPoly.linear([0.6, 0.8]), b)) == pytest.approx(1.0, abs=1e-12)
        assert op_norm(creation(1, b)) == pytest.approx(1.0, abs=1e-12)
    assert op_norm(np.eye(4)) == 1.0


def test_norm_monotone_in_degree(rng):
    for _ in range(10):
        p = random_poly(rng, 2, 2)
        norms = [op_norm(poly_to_operator(p, TruncatedFockBasis(2, d))) for d in range(2, 6)]
        assert all(a <= b + 1e-12 for a, b in zip(norms, norms[1:]))


def test_row_norm_examples():
    b = TruncatedFockBasis(3, 3)
    assert row_norm([creation(j, b) for j in (1, 2, 3)]) == pytest.approx(1.0, abs=1e-12)
    T = np.array([[0.2, 0.5], [0.1, -0.3j]])
    assert row_norm([T]) == pytest.approx(op_norm(T), abs=1e-12)
    assert row_norm([0.6, 0.8]) == pytest.approx(1.0, abs=1e-15)


def test_eval_scalar_examples():
    lam = np.array([0.3 + 0.2j, -0.4j])
    assert eval_scalar(NcPoly({(1, 2): 1, (2, 1): -1}), lam) == 0
    assert eval_scalar(NcPoly({(): 1, (1,): 2}), [0.5, 0]) == 2
    r = np.linalg.norm(lam)
    assert abs(eval_scalar(NcPoly.linear(np.conj(lam) / r), lam)) == pytest.approx(r, abs=1e-15)


def test_popescu_examples(rng):
    assert popescu_apply(NcPoly.generator(1), [[[0.5]]])[0, 0] == 0.5
    lam = np.array([0.3, 0.1 + 0.2j, -0.2])
    p = random_poly(rng, 3, 3)
    out = popescu_apply(p, [[[c]] for c in lam])
    assert out[0, 0] == pytest.approx(eval_scalar(p, lam), abs=1e-13)


def test_popescu_multiplicative(rng):
    T = [rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(2)]
    scale = 0.9 / row_norm(T)
    T = [scale * t for t in T]
    p, q = random_poly(rng, 2, 2), random_poly(rng, 2, 2)
    np.testing.assert_allclose(popescu_apply(p * q, T), popescu_apply(p, T) @ popescu_apply(q, T), atol=1e-12)
    np.testing.assert_allclose(popescu_apply(NcPoly.constant(1), T), np.eye(3), atol=0)


def test_popescu_rejects_non_contraction():
    with pytest.raises(ValueError):
        popescu_apply(NcPoly.generator(1), [[[0.6]], [[0.8]]])


def test_popescu_contractive_spot_check(rng):
    basis = TruncatedFockBasis(2, 6)
    for _ in range(30):
        p = random_poly(rng, 2, 3)
        k = int(rng.integers(1, 4))
        T = [rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k)) for _ in range(2)]
        scale = rng.uniform(0.1, 0.99) / row_norm(T)
        T = [scale * t for t in T]
        assert op_norm(popescu_apply(p, T)) <= op_norm(poly_to_operator(p, basis)) + 1e-8


def test_ncpoly_serialization_roundtrip(rng):
    p = random_poly(rng, 3, 3)
    assert NcPoly.from_list(p.to_list()) == p
    assert NcPoly({(1,): 0, (): 2}).coeffs == {(): 2}
