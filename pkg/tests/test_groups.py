from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ballfock.ball import (
    MoebiusMap,
    apply,
    comparability_factor,
    compose,
    inverse,
    involution_at,
    random_moebius,
    random_point,
    sharp_comparability_bounds,
)
from ballfock.fock import NcPoly
from ballfock.functions import Precomposed, extremal_distance
from ballfock.groups import (
    Check,
    GroupPresentation,
    Orbit,
    Verdict,
    blaschke_report,
    cyclic_example,
    dual_action_eval,
    enumerate_elements,
    moebius_1d,
    orbit_of_origin,
    rotation,
    rotation_group,
    stabilizer_check,
)


def tanh_k(k):
    """tanh(k artanh(1/2)) = (3^k - 1)/(3^k + 1), exactly."""
    return Fraction(3**k - 1, 3**k + 1)


def test_cyclic_enumeration():
    els = enumerate_elements(cyclic_example(), 3)
    assert len(els) == 7
    assert [e.word for e in els] == [(), (1,), (-1,), (1, 1), (-1, -1), (1, 1, 1), (-1, -1, -1)]


def test_cyclic_powers_match_closed_form():
    els = enumerate_elements(cyclic_example(), 10)
    for e in els:
        k = sum(e.word)
        expected = -float(tanh_k(abs(k))) * np.sign(k)
        assert apply(e.map, [0])[0] == pytest.approx(expected, abs=1e-10)


def test_finite_rotation_group():
    assert len(enumerate_elements(rotation_group(2), 5)) == 2
    assert len(enumerate_elements(rotation_group(5), 6)) == 5


def test_empty_presentation():
    els = enumerate_elements(GroupPresentation(2), 4)
    assert len(els) == 1 and els[0].word == ()


def test_free_group_counts():
    g1 = moebius_1d(0.9)
    g2 = compose(compose(rotation(np.pi / 2), g1), rotation(-np.pi / 2))
    els = enumerate_elements(GroupPresentation(1, (g1, g2)), 3)
    counts = np.bincount([e.shell for e in els])
    assert list(counts) == [1, 4, 12, 36]


def test_enumeration_deterministic():
    pres = GroupPresentation(1, (moebius_1d(0.7), moebius_1d(0.6j)))
    a = enumerate_elements(pres, 3)
    b = enumerate_elements(pres, 3)
    assert [e.word for e in a] == [e.word for e in b]


def test_element_matrix_is_word_product():
    pres = GroupPresentation(2, (involution_at([0.3, 0]), MoebiusMap.unitary(np.diag([1j, 1]))))
    gens = {1: pres.generators[0], -1: inverse(pres.generators[0]),
            2: pres.generators[1], -2: inverse(pres.generators[1])}
    for e in enumerate_elements(pres, 3):
        m = MoebiusMap.identity(2)
        for s in e.word:
            m = compose(m, gens[s])
        z = np.array([0.1, -0.2j])
        np.testing.assert_allclose(apply(m, z), apply(e.map, z), atol=1e-12)


def test_cyclic_orbit():
    orbit = orbit_of_origin(enumerate_elements(cyclic_example(), 3))
    got = sorted(p[0].real for p in orbit.points)
    want = sorted([0.0] + [s * float(tanh_k(k)) for k in (1, 2, 3) for s in (1, -1)])
    np.testing.assert_allclose(got, want, atol=1e-12)
    assert orbit.shells == (0, 1, 1, 2, 2, 3, 3)


def test_rotation_orbits_are_origin():
    assert len(orbit_of_origin(enumerate_elements(rotation_group(2), 5)).points) == 1
    assert len(orbit_of_origin(enumerate_elements(GroupPresentation(1), 5)).points) == 1


def test_blaschke_cyclic_terms():
    rep = blaschke_report(enumerate_elements(cyclic_example(), 8))
    for k in range(1, 9):
        assert rep.shells[k].count == 2
        assert rep.shells[k].term_sum == pytest.approx(2 * float(1 - tanh_k(k)), abs=1e-12)
    assert rep.verdict == Verdict.CONVERGENT
    assert rep.ratio == pytest.approx(1 / 3, abs=0.01)
    # exact limit: 1 + 2 * sum_k 2/(3^k + 1)
    exact = 1 + sum(2 * 2 / (3**k + 1) for k in range(1, 60))
    assert rep.extrapolated_sum == pytest.approx(exact, abs=1e-4)
    assert all(a <= b for a, b in zip(rep.partial_sums, rep.partial_sums[1:]))


def test_blaschke_finite_groups():
    rep = blaschke_report(enumerate_elements(GroupPresentation(1), 4))
    assert rep.verdict == Verdict.CONVERGENT and rep.partial_sums[-1] == 1
    for m in (2, 3, 6):
        rep = blaschke_report(enumerate_elements(rotation_group(m), 8))
        assert rep.verdict == Verdict.CONVERGENT
        assert rep.extrapolated_sum == pytest.approx(m, abs=1e-12)


def test_blaschke_short_enumeration_undecided():
    rep = blaschke_report(enumerate_elements(cyclic_example(), 2))
    assert rep.verdict == Verdict.UNDECIDED


def test_blaschke_divergent_free_group():
    # parabolic-ish generators close to the identity: shell sums grow
    g1 = moebius_1d(0.2)
    g2 = compose(compose(rotation(np.pi / 2), g1), rotation(-np.pi / 2))
    rep = blaschke_report(enumerate_elements(GroupPresentation(1, (g1, g2)), 5))
    assert rep.verdict == Verdict.DIVERGENT


def test_shell_ratios_follow_comparability():
    g = cyclic_example().generators[0]
    a = np.array([0.5])  # -g is the involution at 1/2
    lo, hi = sharp_comparability_bounds(a)
    z = np.zeros(1)
    for _ in range(10):
        nxt = apply(g, z)
        ratio = (1 - abs(nxt[0])) / (1 - abs(z[0]))
        # 1 - |z| loses digits as the iterates approach the boundary
        assert ratio == pytest.approx(comparability_factor(a, z), rel=1e-9)
        assert lo <= ratio <= hi
        z = nxt
    # the ratios approach 1/3, below (1 - |a|^2)/2 = 3/8
    assert ratio < 3 / 8


@pytest.fixture
def cyclic_orbit():
    return orbit_of_origin(enumerate_elements(cyclic_example(), 6))


def test_stabilizer_examples(cyclic_orbit):
    assert stabilizer_check(rotation(np.pi), cyclic_orbit).status == Check.PASS
    assert stabilizer_check(cyclic_example().generators[0], cyclic_orbit).status == Check.PASS
    res = stabilizer_check(rotation(0.7), cyclic_orbit)
    assert res.status == Check.FAIL
    # |e^{0.7i}/2 - 1/2| / |1 - e^{0.7i}/4|
    assert res.max_mismatch == pytest.approx(abs(np.exp(0.7j) - 1) / 2 / abs(1 - np.exp(0.7j) / 4), abs=1e-12)


def test_stabilizer_undecided_when_leaving_region():
    orbit = orbit_of_origin(enumerate_elements(cyclic_example(), 2))
    # g^3 maps 0 beyond the outermost enumerated shell
    g = cyclic_example().generators[0]
    g3 = compose(g, compose(g, g))
    assert stabilizer_check(g3, orbit).status == Check.UNDECIDED


def test_orbit_invariance(cyclic_orbit):
    els = enumerate_elements(cyclic_example(), 6)
    region = cyclic_orbit.region_radius()
    for e in els:
        for p in cyclic_orbit.points:
            img = apply(e.map, p)
            if np.linalg.norm(img) < region:
                assert cyclic_orbit.nearest(img)[1] <= cyclic_orbit.dedup_tol


def test_orbit_from_points_shells():
    pts = [[-0.5], [0.5], [0.8], [-0.8]]
    o = Orbit.from_points(pts)
    assert o.shells == (0, 1, 1, 2, 2)


def test_dual_action_examples():
    lam = np.array([0.3 - 0.2j])
    f = NcPoly.generator(1)
    assert dual_action_eval(MoebiusMap.identity(1), f, lam) == pytest.approx(f(lam))
    sq = NcPoly({(1, 1): 1})
    assert dual_action_eval(rotation(np.pi), sq, lam) == pytest.approx(sq(lam), abs=1e-15)
    assert dual_action_eval(cyclic_example().generators[0], f, [0]) == pytest.approx(0.5, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_dual_action_homomorphism(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 4))
    g1, g2 = random_moebius(rng, n), random_moebius(rng, n)
    _, f = extremal_distance(random_point(rng, n), random_point(rng, n))
    lam = random_point(rng, n, 0.9)
    lhs = dual_action_eval(compose(g1, g2), f, lam)
    rhs = dual_action_eval(g1, Precomposed(f, inverse(g2)), lam)
    assert abs(lhs - rhs) <= 1e-10
