"""Euler characteristics, existence conditions, degree boxes, filtration types."""

import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from parahiggs.errors import UnboundedSearch
from parahiggs.parabolic import (
    ChainType,
    WeightDatum,
    generate_generic_weights,
    par_slope_alpha,
)
from parahiggs.chains import (
    chi_ext_fiber,
    chi_hom_rr,
    chi_par,
    chi_skyscrapers,
    chi_spar,
    enumerate_degree_vectors,
    enumerate_gap_profiles,
    hn_types_at,
    necessary_conditions,
)


def full_flag(ws):
    return WeightDatum.full_flags([list(point) for point in ws])


def random_datum(rng, n, k):
    choices = rng.sample(range(1, 40), n * k)
    pts = []
    for p in range(k):
        pts.append(sorted(Fraction(c, 41) for c in choices[p * n : (p + 1) * n]))
    return full_flag(pts)


# ---------------------------------------------------------------------------
# Euler characteristics


def test_chi_structure_sheaf():
    assert chi_hom_rr(1, 0, 1, 0, 2) == -1


def test_chi_twisted_line_p1():
    assert chi_hom_rr(1, 0, 1, 3, 0) == 4


@settings(max_examples=50, deadline=None)
@given(
    ne=st.integers(1, 4),
    de=st.integers(-5, 5),
    nf=st.integers(1, 4),
    df=st.integers(-5, 5),
    g=st.integers(0, 3),
)
def test_chi_antisymmetry(ne, de, nf, df, g):
    total = chi_hom_rr(ne, de, nf, df, g) + chi_hom_rr(nf, df, ne, de, g)
    assert total == 2 * ne * nf * (1 - g)


def test_skyscraper_equal_weights():
    d1 = WeightDatum((((Fraction(1, 2), 2),),))
    d2 = WeightDatum((((Fraction(1, 2), 3),),))
    assert chi_skyscrapers(d1, d2, strict=False) == 6
    assert chi_skyscrapers(d1, d2, strict=True) == 0


def test_skyscraper_enumeration():
    de = WeightDatum((((Fraction(1, 4), 1), (Fraction(3, 4), 1)),))
    df = WeightDatum((((Fraction(1, 2), 2),),))
    assert chi_skyscrapers(de, df, strict=True) == 2
    assert chi_skyscrapers(de, df, strict=False) == 2


def test_skyscraper_no_points():
    e = WeightDatum.empty(0)
    assert chi_skyscrapers(e, e, strict=True) == 0


def test_ext_fiber_line_bundles():
    e = WeightDatum.empty(0)
    upper = ChainType((1,), (0,), (e,))
    lower = ChainType((1,), (0,), (e,))
    assert chi_ext_fiber(upper, lower, 2, 0) == 1


def test_ext_fiber_length_one():
    # tied zero weights force vanishing at the point, so the strongly
    # parabolic twisted term is chi(Hom) - 1 = 1 and the fiber is -1
    e1 = WeightDatum.trivial_flags(1, 1)
    upper = ChainType((1, 1), (0, 0), (e1, e1))
    lower = ChainType((1, 1), (0, 0), (e1, e1))
    assert chi_ext_fiber(upper, lower, 0, 1) == -1
    # with untied generic weights (upper below lower) nothing is forced and
    # the plain Riemann-Roch arithmetic -(1 + 1 - 2) = 0 applies
    lo = WeightDatum.full_flags([[Fraction(2, 5)]])
    up = WeightDatum.full_flags([[Fraction(1, 5)]])
    upper = ChainType((1, 1), (0, 0), (up, up))
    lower = ChainType((1, 1), (0, 0), (lo, lo))
    assert chi_ext_fiber(upper, lower, 0, 1) == 0


def test_ext_fiber_degree_linearity():
    """Bumping one upper degree moves chi by the lower rank at that index."""
    rng = random.Random(5)
    e = WeightDatum.empty(0)
    for _ in range(10):
        d = [rng.randrange(-4, 5) for _ in range(4)]
        g = rng.randrange(0, 4)
        upper = ChainType((1, 1), (d[0], d[1]), (e, e))
        lower = ChainType((1, 1), (d[2], d[3]), (e, e))
        base = chi_ext_fiber(upper, lower, g, 0)
        for step in (1, 7):
            bumped = ChainType((1, 1), (d[0] + step, d[1]), (e, e))
            assert chi_ext_fiber(bumped, lower, g, 0) - base == step


def test_serre_duality_identity_500():
    """chi_par(E',E) = -chi_spar(E, E' twisted by 2g-2+k), 500 random configs."""
    rng = random.Random(20240810)
    for _ in range(500):
        g = rng.randrange(0, 4)
        k = rng.randrange(1, 3)
        n1 = rng.randrange(1, 4)
        n2 = rng.randrange(1, 4)
        d1 = rng.randrange(-6, 7)
        d2 = rng.randrange(-6, 7)
        de = random_datum(rng, n1, k)
        df = random_datum(rng, n2, k)
        lhs = chi_par(n1, d1, de, n2, d2, df, g)
        rhs = -chi_spar(n2, d2, df, n1, d1 + n1 * (2 * g - 2 + k), de, g)
        assert lhs == rhs


# ---------------------------------------------------------------------------
# the dual chi identity must be read with the twist applied to the source of
# the strongly parabolic side: chi_spar(E, E'(omega(D))) with E' twisted.


def test_serre_duality_identity_direction():
    g, k = 2, 1
    de = full_flag([[Fraction(1, 5)]])
    df = full_flag([[Fraction(2, 5), Fraction(3, 5)]])
    lhs = chi_par(1, 3, de, 2, -1, df, g)
    rhs = -chi_spar(2, -1, df, 1, 3 + 1 * (2 * g - 2 + k), de, g)
    assert lhs == rhs


# ---------------------------------------------------------------------------
# necessary conditions


def alpha_f(*vals):
    return tuple(Fraction(v) for v in vals)


def test_conditions_rank0():
    tau = ChainType((2,), (5,), (WeightDatum.empty(0),))
    assert necessary_conditions(tau, alpha_f(0)) is True


def test_conditions_gap_violation():
    e = WeightDatum.trivial_flags(1, 1)
    tau = ChainType((1, 1), (0, 2), (e, e))
    assert necessary_conditions(tau, alpha_f(0, 2)) is False


def test_conditions_hold():
    e = WeightDatum.trivial_flags(1, 1)
    tau = ChainType((1, 1), (0, 0), (e, e))
    assert necessary_conditions(tau, alpha_f(0, 2)) is True


def test_conditions_gap_toggle_prunes_only():
    e = WeightDatum.trivial_flags(1, 1)
    tau = ChainType((1, 1), (0, 2), (e, e))
    assert necessary_conditions(tau, alpha_f(0, 2), apply_gap_condition=False)


# ---------------------------------------------------------------------------
# degree boxes vs brute force


def brute_force_window(n_vec, total, alpha, weights, k, window=8):
    out = []
    r = len(n_vec) - 1
    for head in itertools.product(range(-window, window + 1), repeat=r):
        last = total - sum(head)
        if abs(last) > window:
            continue
        dvec = tuple(head) + (last,)
        tau = ChainType(n_vec, dvec, weights)
        if necessary_conditions(tau, alpha):
            out.append(dvec)
    return sorted(out)


def box_cases():
    ws4 = generate_generic_weights(4, 4)
    cases = []
    e1 = WeightDatum.trivial_flags(1, 1)
    cases.append(((1, 1), 0, alpha_f(0, 2), (e1, e1), 1))
    cases.append(((1, 1), 1, alpha_f(0, 3), (e1, e1), 1))
    d1 = full_flag([[ws4[0]]])
    d2 = full_flag([[ws4[1]]])
    cases.append(((1, 1), 0, alpha_f(0, 2), (d1, d2), 1))
    d12 = full_flag([[ws4[0], ws4[2]]])
    cases.append(((2, 1), 1, alpha_f(0, 2), (d12, d2), 1))
    cases.append(((1, 2), -1, alpha_f(0, 4), (d2, d12), 1))
    e2 = WeightDatum.trivial_flags(1, 2)
    cases.append(((1, 1, 1), 0, alpha_f(0, 2, 4), (e2, e2, e2), 2))
    dd1 = full_flag([[ws4[0]], [ws4[1]]])
    dd2 = full_flag([[ws4[2]], [ws4[3]]])
    cases.append(((1, 1), 0, alpha_f(0, 1), (dd1, dd2), 2))
    return cases


def test_box_matches_brute_force():
    for n_vec, total, alpha, weights, k in box_cases():
        got = enumerate_degree_vectors(n_vec, total, alpha, weights, k)
        want = brute_force_window(n_vec, total, alpha, weights, k)
        assert sorted(got) == want, (n_vec, total)
        assert all(max(abs(x) for x in v) <= 8 for v in got)


def test_box_rank0():
    tau_weights = (WeightDatum.empty(0),)
    assert enumerate_degree_vectors((2,), 5, alpha_f(0), tau_weights, 0) == [(5,)]


def test_box_example_contents():
    e1 = WeightDatum.trivial_flags(1, 1)
    got = enumerate_degree_vectors((1, 1), 0, alpha_f(0, 2), (e1, e1), 1)
    assert (0, 0) in got
    assert (1, -1) in got
    assert (-2, 2) not in got  # fails the equal-rank gap condition


def test_box_unbounded_for_degenerate_parameter():
    # two equal stability entries at genus >= 2 leave the box unbounded
    e1 = WeightDatum.trivial_flags(1, 1)
    with pytest.raises(UnboundedSearch):
        enumerate_degree_vectors((1, 2), 0, alpha_f(0, 0), (e1, full_flag1()), 1)


def full_flag1():
    ws = generate_generic_weights(2, 2)
    return full_flag([[ws[0], ws[1]]])


def test_gap_profiles_shift_invariant():
    ws = generate_generic_weights(2, 2)
    d1 = full_flag([[ws[0]]])
    d2 = full_flag([[ws[1]]])
    profiles = enumerate_gap_profiles((1, 1), alpha_f(0, 2), (d1, d2), 1)
    assert profiles
    assert all(p[0] == 0 for p in profiles)
    # profiles plus a constant shift pass the conditions at any total
    for p in profiles:
        for c in (-3, 0, 5):
            tau = ChainType((1, 1), (p[0] + c, p[1] + c), (d1, d2))
            assert necessary_conditions(tau, alpha_f(0, 2))


# ---------------------------------------------------------------------------
# filtration-type enumeration


def test_hn_types_rank_one_empty():
    e = WeightDatum.empty(0)
    tau = ChainType((1,), (0,), (e,))
    assert hn_types_at(tau, alpha_f(0), max_abs_part_degree=4) == []


def test_hn_types_bun2_classical():
    e = WeightDatum.empty(0)
    tau = ChainType((2,), (1,), (e,))
    types = hn_types_at(tau, alpha_f(0), max_abs_part_degree=5)
    # classical strata: line-bundle pairs (d1, d2), d1 + d2 = 1, d1 > 1/2
    seen = sorted(t[0].degrees[0] for t in types)
    assert seen == [1, 2, 3, 4, 5]
    for t in types:
        assert len(t) == 2
        assert t[0].degrees[0] + t[1].degrees[0] == 1
        assert t[0].degrees[0] > Fraction(1, 2)


def test_hn_types_wall_filter():
    ws = generate_generic_weights(2, 2)
    a, b = ws
    d1 = full_flag([[a]])
    d2 = full_flag([[b]])
    tau = ChainType((1, 1), (3, 0), (d1, d2))
    alpha = alpha_f(0, 2)
    from parahiggs.walls import Ray, wall_positions

    ray = Ray(alpha, (0, 1), Fraction(6))
    walls = wall_positions(tau, ray, Fraction(0), Fraction(6))
    # genuine wall: the index-0 truncation sub-line reaches the total slope
    t_true = Fraction(3) + a - b - 2
    assert t_true in walls
    on_wall = hn_types_at(tau, ray.at(t_true + 1), equal_slope_at=ray.at(t_true))
    assert on_wall
    off_wall = hn_types_at(
        tau, ray.at(t_true + 1), equal_slope_at=ray.at(t_true + Fraction(1, 7))
    )
    assert off_wall == []
    for parts in on_wall:
        slopes = [par_slope_alpha(p, ray.at(t_true)) for p in parts]
        assert len(set(slopes)) == 1
        ordered = [par_slope_alpha(p, ray.at(t_true + 1)) for p in parts]
        assert ordered == sorted(ordered, reverse=True)
