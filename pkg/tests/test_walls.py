"""Ray selection, wall location and crossing-walk consistency."""

from fractions import Fraction

import pytest

from parahiggs.errors import WallHit
from parahiggs.motive import CurveData
from parahiggs.parabolic import ChainType, WeightDatum, generate_generic_weights
from parahiggs.chains import necessary_conditions
from parahiggs.walls import Ray, choose_ray, cross_ray, is_on_wall, wall_positions
from parahiggs.engine import ChainEngine
from parahiggs.oracles import rank11_chain_oracle


def gen_types(g=2, k=1):
    ws = generate_generic_weights(2, 2)
    a, b = ws
    d1 = WeightDatum.full_flags([[a]])
    d2 = WeightDatum.full_flags([[b]])
    return a, b, d1, d2


def test_ray_direction_validation():
    with pytest.raises(ValueError):
        Ray((Fraction(0), Fraction(2)), (1, 0), Fraction(1))


def test_choose_ray_rank_dip():
    ws = generate_generic_weights(3, 3)
    dd = WeightDatum.full_flags([[ws[0], ws[1]]])
    d2 = WeightDatum.full_flags([[ws[2]]])
    tau = ChainType((2, 1), (0, 0), (dd, d2))
    ray = choose_ray(tau, (Fraction(0), Fraction(2)))
    assert ray.delta == (0, 1)
    assert not necessary_conditions(tau, ray.at(ray.t_max))


def test_choose_ray_rank_rise():
    ws = generate_generic_weights(3, 3)
    dd = WeightDatum.full_flags([[ws[0], ws[1]]])
    d2 = WeightDatum.full_flags([[ws[2]]])
    tau = ChainType((1, 2), (0, 0), (d2, dd))
    ray = choose_ray(tau, (Fraction(0), Fraction(2)))
    assert ray.delta == (-1, 0)
    assert not necessary_conditions(tau, ray.at(ray.t_max))


def test_choose_ray_constant_rank():
    ws = generate_generic_weights(4, 4)
    dd1 = WeightDatum.full_flags([[ws[0], ws[1]]])
    dd2 = WeightDatum.full_flags([[ws[2], ws[3]]])
    tau = ChainType((2, 2), (5, 0), (dd1, dd2))
    alpha = (Fraction(0), Fraction(2))
    ray = choose_ray(tau, alpha)
    assert ray.delta == (0, 1)
    # beyond t_max the Hecke-regime inequality holds
    t = ray.t_max
    assert tau.degrees[0] - tau.degrees[1] + 2 * 2 * 1 < (alpha[1] + t) - alpha[0]


def test_wall_positions_rank1_empty():
    d1 = WeightDatum.full_flags([[Fraction(2, 3)]])
    tau = ChainType((1,), (0,), (d1,))
    ray = Ray((Fraction(0),), (0,), Fraction(5))
    assert wall_positions(tau, ray, Fraction(0), Fraction(5)) == []


def test_wall_positions_explicit_root():
    a, b, d1, d2 = gen_types()
    tau = ChainType((1, 1), (3, 0), (d1, d2))
    ray = Ray((Fraction(0), Fraction(2)), (0, 1), Fraction(8))
    walls = wall_positions(tau, ray, Fraction(0), Fraction(8))
    assert Fraction(3) + a - b - 2 in walls
    assert walls == sorted(walls)
    # sampled midpoints between walls are not on any wall
    for lo, hi in zip([Fraction(0)] + walls, walls):
        mid = (lo + hi) / 2
        assert not is_on_wall(tau, ray.at(mid))


def test_is_on_wall_even_degree_no_points():
    tau = ChainType((2,), (0,), (WeightDatum.empty(0),))
    assert is_on_wall(tau, (Fraction(0),))
    tau_odd = ChainType((2,), (1,), (WeightDatum.empty(0),))
    assert not is_on_wall(tau_odd, (Fraction(0),))


def test_cross_ray_no_walls_keeps_terminal_value():
    a, b, d1, d2 = gen_types()
    curve = CurveData(2, 1)
    eng = ChainEngine(curve)
    # d0 < d1 keeps the type inside the terminal regime for every t >= 0
    tau = ChainType((1, 1), (-2, 0), (d1, d2))
    alpha = (Fraction(0), Fraction(2))
    ray = choose_ray(tau, alpha)
    got = cross_ray(eng, tau, ray)
    assert got == eng.chain_class(tau, ray.at(ray.t_max))


def test_cross_ray_emptiness_propagates():
    ws = generate_generic_weights(3, 3)
    dd = WeightDatum.full_flags([[ws[0], ws[1]]])
    d2 = WeightDatum.full_flags([[ws[2]]])
    curve = CurveData(2, 1)
    eng = ChainEngine(curve)
    # huge degree gap: empty at the terminal end and across every wall
    tau = ChainType((2, 1), (-30, 30), (dd, d2))
    assert eng.chain_class(tau, (Fraction(0), Fraction(2))).is_zero()


def test_chamber_constancy():
    a, b, d1, d2 = gen_types()
    curve = CurveData(2, 1)
    eng = ChainEngine(curve)
    tau = ChainType((1, 1), (3, 0), (d1, d2))
    ray = Ray((Fraction(0), Fraction(2)), (0, 1), Fraction(8))
    walls = wall_positions(tau, ray, Fraction(0), Fraction(8))
    t_true = Fraction(3) + a - b - 2
    assert t_true in walls
    above = [t for t in walls if t > t_true]
    hi = min(above) if above else Fraction(8)
    s1 = t_true + (hi - t_true) / 3
    s2 = t_true + 2 * (hi - t_true) / 3
    assert eng.chain_class(tau, ray.at(s1)) == eng.chain_class(tau, ray.at(s2))


def test_conservation_across_wall():
    """Class at the wall equals above plus its strata; below recovers by
    subtracting the other side, and the walk telescopes in reverse."""
    a, b, d1, d2 = gen_types()
    curve = CurveData(2, 1)
    eng = ChainEngine(curve)
    tau = ChainType((1, 1), (3, 0), (d1, d2))
    ray = Ray((Fraction(0), Fraction(2)), (0, 1), Fraction(8))
    t_true = Fraction(3) + a - b - 2
    plus, np = eng.strata_at_wall(tau, ray, t_true, +1)
    minus, nm = eng.strata_at_wall(tau, ray, t_true, -1)
    assert np >= 1 and nm >= 1
    above = eng.chain_class(tau, ray.at(t_true + Fraction(1, 97)))
    below = eng.chain_class(tau, ray.at(t_true - Fraction(1, 97)))
    assert below == above + plus - minus


def test_ray_independence():
    """Two admissible directions give the same class at the base parameter."""
    a, b, d1, d2 = gen_types()
    curve = CurveData(2, 1)
    alpha = (Fraction(0), Fraction(2))
    for d0, dd1 in ((3, 0), (2, -1), (1, 1)):
        tau = ChainType((1, 1), (d0, dd1), (d1, d2))
        eng1 = ChainEngine(curve)
        got1 = cross_ray(eng1, tau, Ray(alpha, (0, 1), Fraction(12)))
        eng2 = ChainEngine(curve)
        got2 = cross_ray(eng2, tau, Ray(alpha, (0, 2), Fraction(12)))
        assert got1 == got2
        assert got1 == rank11_chain_oracle(2, 1, d0, dd1, [a], [b], alpha)


def test_wall_hit_raises():
    curve = CurveData(2, 0)
    eng = ChainEngine(curve)
    tau = ChainType((2,), (0,), (WeightDatum.empty(0),))
    with pytest.raises(WallHit):
        eng.chain_class(tau, (Fraction(0),))
