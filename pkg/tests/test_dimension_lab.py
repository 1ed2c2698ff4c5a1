import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geodesic_spectra.dimension_lab import (
    D_STAR, FullSet, InsufficientScales, IntervalUnion, ParamSpaceX, Unsupported, ball_measure,
    box_dim, build_cantor, certify_leaf_z, certify_tree, cf_cylinder_dimension, cf_cylinders,
    circle_gate, covered_fraction, ford_bad_set, hall_ray_experiment, jarnik_eval, leaf_points,
    middle_thirds, power_law_params, prop23_lower_bound, tau_l_empirical,
)
from geodesic_spectra.lattice_collections import GAUSSIAN, ZZ, FamilyKind, ResonantFamily, enumerate_ford

SCALES = range(5, 13)
FORD = enumerate_ford(ZZ, (0, 1), 0.0)
EMPTY = ResonantFamily(FamilyKind.POINT_ORBIT, ZZ, [], 100.0)


# constants and closed-form bounds

def test_power_law_params():
    p = power_law_params(ParamSpaceX.interval())
    assert (p.tau, p.c_l, p.c_u) == (1.0, 1.0, 2.0)
    q = power_law_params(ParamSpaceX.full_boundary(2))
    assert q.tau == 2 and q.c_l == q.c_u == pytest.approx(math.pi)
    r = power_law_params(ParamSpaceX.circle(0j, 0.0, 1.0))
    assert (r.tau, r.c_l, r.c_u) == (1.0, 2.0, math.pi)


def test_prop23_example():
    # tau = 1, c_l = 1, c_u = 2, tau_l = 0, c = 10: 1 - (log 8 + 2 log 3)/10 = 1 - log(72)/10
    assert prop23_lower_bound(1.0, 1.0, 2.0, D_STAR, 0.0, 10.0) == pytest.approx(0.5723334, abs=1e-7)
    with_tau = prop23_lower_bound(1.0, 1.0, 2.0, D_STAR, 0.5, 10.0)
    assert with_tau == pytest.approx(0.5723334 - math.log(2) / 10, abs=1e-7)


def test_prop23_hand_example():
    # equal c_l, c_u and tau_l = 1/2: log 2 + 2 log 3 + log 2 = log 36
    assert prop23_lower_bound(1.0, 1.5, 1.5, D_STAR, 0.5, 10.0) == pytest.approx(1 - math.log(36) / 10)
    assert prop23_lower_bound(1.0, 1.5, 1.5, D_STAR, 0.5, 10.0) == pytest.approx(0.6416481, abs=1e-7)


def test_prop23_limits():
    big = [prop23_lower_bound(1.0, 1.0, 2.0, D_STAR, 0.3, c) for c in (1e2, 1e4, 1e6)]
    assert big[-1] == pytest.approx(1.0, abs=1e-4)
    assert big[0] < big[1] < big[2]
    near_one = [prop23_lower_bound(1.0, 1.0, 2.0, D_STAR, 1 - 10.0 ** -k, 3.0) for k in (2, 8, 15)]
    assert near_one[0] > near_one[1] > near_one[2] and near_one[2] < -10


@pytest.mark.parametrize("tau_l, c", [(1.0, 3.0), (1.5, 3.0), (-0.1, 3.0), (0.2, 0.0)])
def test_prop23_rejects_bad_inputs(tau_l, c):
    with pytest.raises(ValueError):
        prop23_lower_bound(1.0, 1.0, 2.0, D_STAR, tau_l, c)


def test_jarnik_hand_example():
    lower = jarnik_eval(5.0, 1, 1.0, 1.0)["cusp"][0]
    assert lower == pytest.approx(1 - 1 / (5 * math.exp(2.5)), abs=1e-15)
    # the quoted six-digit value 0.983581 is a rounding of 0.9835830
    assert lower == pytest.approx(0.983583, abs=1e-6)


def test_jarnik_eval_example():
    out = jarnik_eval(2.0, 1, 1.0, 1.0)
    assert out["cusp"] == pytest.approx((1 - 1 / (2 * math.e), 1 - 1 / (2 * math.exp(4))))
    assert out["point"] == pytest.approx((1 - abs(math.log(1 - 2 * math.exp(-2))) / 2,
                                          1 - abs(math.log(1 - math.exp(-2))) / (2 + math.log(2))))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_jarnik_eval_zero_constants(n):
    out = jarnik_eval(3.0, n, 0.0, 0.0)
    assert out["cusp"] == (n, n) and out["point"] == (n, n)


@given(st.floats(1.0, 20.0), st.integers(1, 3))
def test_jarnik_eval_below_n(t, n):
    out = jarnik_eval(t, n, 1.0, 1.0)
    assert all(v <= n for v in out["cusp"] + out["point"])


# measures

def test_interval_measure_and_cover():
    sp = ParamSpaceX.interval()
    assert ball_measure(sp, 0.5, 0.1) == pytest.approx(0.2)
    assert ball_measure(sp, 0.05, 0.1) == pytest.approx(0.15)
    assert covered_fraction(sp, 0.5, 0.1, [(0.0, 0.05)]) == pytest.approx(0.5)
    assert covered_fraction(sp, 0.5, 0.1, [(-0.1, 0.05), (0.1, 0.05)]) == pytest.approx(0.5)
    assert covered_fraction(sp, 0.5, 0.1, [(0.0, 1.0)]) == pytest.approx(1.0)


def test_circle_full_and_calibration():
    sp = ParamSpaceX.circle(0j, 0.0, 1.0)
    r = sp.radius
    assert r == pytest.approx(math.exp(-1) / 2)
    assert ball_measure(sp, None, 3 * r, theta=0.3) == pytest.approx(2 * math.pi * r)


@settings(max_examples=200)
@given(st.floats(1e-6, 1.99), st.floats(-math.pi, math.pi))
def test_circle_measure_bracket(frac, theta):
    sp = ParamSpaceX.circle(0j, 0.0, 1.0)
    rho = frac * sp.radius
    m = ball_measure(sp, None, rho, theta=theta)
    assert 2 * rho * (1 - 1e-12) <= m <= math.pi * rho * (1 + 1e-12)
    # closed form: arc of the chord rho on a circle of radius r
    assert m == pytest.approx(4 * sp.radius * math.asin(rho / (2 * sp.radius)), rel=1e-9)


def test_ball_measure_unsupported():
    with pytest.raises(Unsupported):
        ball_measure(ParamSpaceX.full_boundary(2), 0, 0.1)


# tau_l

def test_tau_l_empty_family_is_zero():
    assert tau_l_empirical(ParamSpaceX.interval(), EMPTY, 3.0, [2.0, 3.0], n_random=30) == 0.0


def test_tau_l_grid_family_positive():
    # a fine grid meets every target ball
    from geodesic_spectra.lattice_collections import ResonantPoint
    pts = [ResonantPoint(k / 4000, s, None) for s in (0.5, 1.5, 2.5, 3.5) for k in range(4001)]
    grid = ResonantFamily(FamilyKind.POINT_ORBIT, ZZ, pts, 10.0)
    for t in (3.0, 4.0, 5.0):
        assert tau_l_empirical(ParamSpaceX.interval(), grid, 1.0, [t], n_random=10) > 0


def test_tau_l_decreases_in_c():
    sp = ParamSpaceX.interval()
    taus = [tau_l_empirical(sp, FORD, c, [2.0, 3.0, 4.0, 5.0], n_random=60, seed=1) for c in (2, 3, 5)]
    assert all(0 <= t <= 1 for t in taus)
    assert taus[0] >= taus[1] >= taus[2]
    assert taus[2] < taus[0]


# box counting

def test_box_dim_full_interval_exact():
    d = box_dim(ParamSpaceX.interval(), FullSet(), SCALES)
    assert d.value == pytest.approx(1.0, abs=1e-12)
    assert d.counts == [2 ** k for k in SCALES]


def test_box_dim_middle_thirds():
    d = box_dim(ParamSpaceX.interval(), middle_thirds(14), SCALES)
    assert abs(d.value - math.log(2) / math.log(3)) <= 0.03


def test_box_dim_e2_against_cylinders():
    ref = cf_cylinder_dimension(2)
    # literature value of dim E_2 is 0.5312805...
    assert ref == pytest.approx(0.5312805, abs=1e-6)
    d = box_dim(ParamSpaceX.interval(), cf_cylinders(2, 18), SCALES)
    assert abs(d.value - ref) <= 0.05


def test_box_dim_needs_five_scales():
    with pytest.raises(InsufficientScales):
        box_dim(ParamSpaceX.interval(), FullSet(), [3, 4, 5, 6])


def test_box_dim_empty_set():
    with pytest.raises(InsufficientScales):
        box_dim(ParamSpaceX.interval(), IntervalUnion([], []), SCALES)


def test_box_dim_needs_interval():
    with pytest.raises(Unsupported):
        box_dim(ParamSpaceX.full_boundary(2), FullSet(), SCALES)


@settings(max_examples=100)
@given(st.lists(st.tuples(st.floats(0, 1), st.floats(0, 0.05)), min_size=1, max_size=8),
       st.floats(0, 1), st.floats(1e-6, 0.1))
def test_interval_union_membership(raw, lo, width):
    # build a disjoint sorted union, then compare with a direct overlap test
    ivs = sorted((a, a + w) for a, w in raw)
    merged = []
    for a, b in ivs:
        if merged and a <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(merged[-1][1], b))
        else:
            merged.append((a, b))
    u = IntervalUnion([a for a, _ in merged], [b for _, b in merged])
    hi = lo + width
    want = any(a < hi and b >= lo for a, b in merged)
    assert bool(u(np.array([lo]), np.array([hi]))[0]) == want


@settings(max_examples=200, deadline=None)
@given(st.floats(0.001, 0.999))
def test_ford_bad_set_membership(x):
    c, qmax = 2.0, 60
    kept = ford_bad_set(c, qmax)
    eps = math.exp(-c)
    gaps = [abs(x - round(x * q) / q) * q * q for q in range(1, qmax + 1)]
    margin = min(abs(g - eps) for g in gaps)
    if margin < 1e-9:
        return
    inside = bool(kept(np.array([x]), np.array([x + 1e-13]))[0])
    assert inside == all(g >= eps for g in gaps)


# Cantor trees

def test_cantor_empty_family_full_branching():
    tree = build_cantor(ParamSpaceX.interval(), EMPTY, 3.0, 3, max_nodes=None)
    assert tree.status == "ok"
    # children spaced e^{-3} across [-1/3, 1/3]: floor((2/3) e^3) + 1 = 14 per node
    assert [lv.survivors for lv in tree.levels] == [1, 14, 196, 2744]
    assert tree.dimension_estimate().value == pytest.approx(math.log(14) / 3)


def test_cantor_small_c_prunes():
    tree = build_cantor(ParamSpaceX.interval(), FORD, 0.5, 4)
    assert tree.status == "pruned_empty" and tree.empty_level is not None


def test_cantor_unsupported_space():
    with pytest.raises(Unsupported):
        build_cantor(ParamSpaceX.full_boundary(2), FORD, 3.0, 2)


@pytest.fixture(scope="module")
def ford_tree():
    return build_cantor(ParamSpaceX.interval(), FORD, 3.0, 6, max_nodes=256)


def test_cantor_ford_certified(ford_tree):
    assert ford_tree.status == "ok" and ford_tree.leaves
    rep = certify_tree(ford_tree, FORD, limit=200)
    assert rep["checked"] == 200 and rep["failures"] == []


def test_cantor_ford_leaves_against_exhaustive_search(ford_tree):
    kappa = math.exp(-(2 * ford_tree.c + ford_tree.l_star))
    pts = leaf_points(ford_tree)
    idx = np.linspace(0, len(pts) - 1, 100).round().astype(int)
    with mpmath.workdps(60):
        for i in idx:
            xi = pts[i]
            for q in range(1, 301):
                p = int(mpmath.nint(xi * q))
                assert q * q * abs(xi - mpmath.mpf(p) / q) >= kappa


def test_cantor_levels_are_consistent(ford_tree):
    ts = [lv.t for lv in ford_tree.levels]
    assert np.allclose(np.diff(ts), ford_tree.c)
    assert all(lv.survivors <= lv.children for lv in ford_tree.levels[1:])
    assert 0 < ford_tree.dimension_estimate().value < 1


def test_certify_leaf_z_examples():
    x = (math.sqrt(5) - 1) / 2
    ok, best, where = certify_leaf_z(x, 0.3, 20.0)
    assert ok and where == Fraction(1, 1)
    assert float(best) == pytest.approx((3 - math.sqrt(5)) / 2, abs=1e-12)
    assert not certify_leaf_z(x, 0.4, 20.0)[0]
    with pytest.raises(ValueError):
        certify_leaf_z(x, 0.5, 20.0)


# Hall-ray experiment

def test_hall_small_run():
    rep = hall_ray_experiment("cusp", 0.5, 8.0, 2, max_nodes=4, witness_limit=4)
    assert rep.status in ("nonempty", "empty")
    assert rep.c == pytest.approx((8.0 + math.log(2) - math.log(3)) / 2)
    assert rep.t_star == pytest.approx(0.5 + math.log(math.pi / 2) + math.log(6))
    if rep.status == "nonempty":
        assert rep.witness_failures == []
        assert all(h == pytest.approx(0.5, abs=1e-6) for h in rep.first_heights)
        assert rep.max_other_height <= 8.0


def test_hall_gate_fails_for_small_s0():
    rep = hall_ray_experiment("cusp", 0.5, 0.0, 2)
    assert rep.status == "empty" and rep.reason == "gate_failed"
    assert not circle_gate(0.0, 0.1)
    assert circle_gate(8.0, 3.8)


@pytest.mark.parametrize("kind, ring", [("spiral", GAUSSIAN), ("cusp", ZZ)])
def test_hall_unsupported(kind, ring):
    with pytest.raises(Unsupported):
        hall_ray_experiment(kind, 0.5, 8.0, 1, ring=ring)
