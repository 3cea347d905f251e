import random

import pytest

from mixmult.engine import (
    GridSpec,
    Setup,
    br_value,
    compositions,
    fill_table,
    full_slice,
    ideal_t_slice,
    rees_piece,
)
from mixmult.errors import GridTooSmall, LengthNotFinite, ModeMismatch
from mixmult.monomial import BiMonomial, MonomialModule, RingContext
from mixmult.oracle import OracleSetup

MAX2 = [((1, 0), 1), ((0, 1), 1)]
I23 = [((2, 0), 1), ((0, 3), 1)]


def plane(e=None, a=()):
    return Setup.build(2, 1, a, MAX2, [e if e is not None else MAX2])


def test_compositions():
    assert compositions(0, 1) == [(0,)]
    assert set(compositions(2, 2)) == {(0, 2), (1, 1), (2, 0)}
    assert len(compositions(5, 3)) == 21


def test_full_slice():
    ctx = RingContext(2, 2)
    sl = full_slice(ctx, 2)
    assert {g.tpart for g in sl.gens} == {(2, 0), (1, 1), (0, 2)}
    assert all(g.xdegree == 0 for g in sl.gens)


def test_ideal_t_slice():
    ctx = RingContext(2, 1)
    W = MonomialModule.ideal(ctx, [ctx.x_monomial((2, 0)), ctx.term((0, 1), 1)])
    sl = ideal_t_slice(W, 2)
    assert set(sl.gens) == {BiMonomial((2, 0), (2,)), BiMonomial((0, 1), (2,))}


class TestReesPiece:
    def test_two_components(self):
        ctx = RingContext(2, 2)
        E = MonomialModule.slice(ctx, 1, [ctx.term((1, 0), 1), ctx.term((0, 1), 2)])
        got = rees_piece(E, 2)
        assert set(got.gens) == {
            BiMonomial((2, 0), (2, 0)), BiMonomial((1, 1), (1, 1)), BiMonomial((0, 2), (0, 2))
        }

    def test_zeroth(self):
        ctx = RingContext(2, 1)
        E = MonomialModule.slice(ctx, 1, [ctx.term((1, 0), 1)])
        assert rees_piece(E, 0).gens == (ctx.one(),)

    def test_ideal_like(self):
        ctx = RingContext(2, 1)
        E = MonomialModule.slice(ctx, 1, [ctx.term((2, 0), 1), ctx.term((0, 3), 1)])
        got = rees_piece(E, 2)
        assert set(got.gens) == {
            BiMonomial((4, 0), (2,)), BiMonomial((2, 3), (2,)), BiMonomial((0, 6), (2,))
        }

    def test_requires_degree_one(self):
        ctx = RingContext(2, 1)
        with pytest.raises(ModeMismatch):
            rees_piece(full_slice(ctx, 2), 1)


class TestPowerProduct:
    def test_numerator_gens(self):
        s = plane(I23)
        num, _ = s.power_product(0, 0, (1,))
        assert set(num.gens) == {s.ctx.term((2, 0), 1), s.ctx.term((0, 3), 1)}

    def test_zero_quotient(self):
        s = plane()
        num, den = s.power_product(0, 2, (0,))
        assert num == den

    def test_reduction_mod_b(self):
        s = plane(a=[(1, 0)])
        num, den = s.power_product(1, 1, (1,))
        x = s.ctx.x_monomial((1, 0))
        # generators divisible by x are only the B-part itself
        for g in num.gens:
            if x.divides(g):
                assert g.xpart == (1, 0) and g.xpart[1] == 0

    def test_containment_always(self):
        s = plane(I23, a=[(3, 0)])
        for n in range(3):
            for r in range(3):
                num, den = s.power_product(n, 1, (r,))
                assert num.contains_module(den)


class TestHValue:
    def test_staircase(self):
        s = plane()
        for n in range(1, 7):
            assert s.h_value(n, 0, (0,)) == n * (n + 1) // 2

    def test_zero_power(self):
        s = plane(I23)
        for p in range(3):
            for r in range(3):
                assert s.h_value(0, p, (r,)) == 0

    def test_minimal_generator_count(self):
        s = plane(I23)
        assert s.h_value(1, 0, (1,)) == 2
        assert s.h_value(1, 2, (1,)) == 2

    def test_monotone_in_n(self):
        s = plane(I23)
        vals = [s.h_value(n, 1, (2,)) for n in range(6)]
        assert vals == sorted(vals)

    def test_matches_oracle_on_random_small_setups(self):
        rng = random.Random(43)
        for _ in range(12):
            d = rng.randint(1, 2)
            p = rng.randint(1, 2)
            f = [((0,) * i + (1,) + (0,) * (d - 1 - i), c)
                 for i in range(d) for c in range(1, p + 1)]
            e1 = [(tuple(rng.randint(0, 2) for _ in range(d)), rng.randint(1, p))
                  for _ in range(rng.randint(1, 2))]
            a = [tuple(rng.randint(0, 3) for _ in range(d))] if rng.random() < 0.3 else []
            setup = Setup.build(d, p, a, f, [e1])
            oracle = OracleSetup(d, p, a, f, [e1])
            for n in range(3):
                for pd in range(2):
                    for r in range(3):
                        if n + pd + r > 10:
                            continue
                        assert setup.h_value(n, pd, (r,)) == oracle.h(n, pd, (r,))


class TestBrValue:
    def test_plane_pair(self):
        s = Setup.build(2, 1, (), MAX2, [])
        for n in range(1, 6):
            for q in range(3):
                assert br_value(s, n, q) == n * (n + 1) // 2

    def test_rank_two(self):
        f = [((1, 0), 1), ((0, 1), 1), ((1, 0), 2), ((0, 1), 2)]
        s = Setup.build(2, 2, (), f, [])
        for n in range(1, 5):
            for q in range(3):
                assert br_value(s, n, q) == (n + q + 1) * n * (n + 1) // 2

    def test_full_module_is_zero(self):
        s = Setup.build(2, 2, (), [((0, 0), 1), ((0, 0), 2)], [])
        assert all(br_value(s, n, q) == 0 for n in range(4) for q in range(3))

    def test_ideal_case_is_q_independent(self):
        s = Setup.build(2, 1, [(2, 1)], MAX2, [])
        for n in range(1, 5):
            base = br_value(s, n, 0)
            assert all(br_value(s, n, q) == base for q in range(1, 4))

    def test_requires_pair(self):
        with pytest.raises(ModeMismatch):
            br_value(plane(), 1, 1)


def test_colength_check_rejects_thin_module():
    with pytest.raises(LengthNotFinite):
        Setup.build(2, 1, (), [((1, 0), 1)], [])


class TestFillTable:
    def test_single_point(self):
        s = plane()
        t = fill_table(s, GridSpec((3,), (0,), ((0,),)))
        assert t((3, 0, (0,))) == 6

    def test_staircase_grid(self):
        s = plane()
        t = fill_table(s, GridSpec((1, 2, 3, 4), (0,), ((0,),)))
        assert [t((n, 0, (0,))) for n in (1, 2, 3, 4)] == [1, 3, 6, 10]

    def test_empty_grid(self):
        s = plane()
        t = fill_table(s, GridSpec((), (), ((),)))
        assert t.values == {}

    def test_grid_too_small(self):
        s = plane()
        t = fill_table(s, GridSpec((1,), (0,), ((0,),)))
        with pytest.raises(GridTooSmall):
            t((2, 0, (0,)))

    def test_threads_match_sequential(self):
        grid = GridSpec((0, 1, 2, 3), (0, 1), ((0, 1, 2),))
        seq = fill_table(plane(I23), grid, threads=1)
        par = fill_table(plane(I23), grid, threads=4)
        assert seq.values == par.values

    def test_rows_shape(self):
        s = plane()
        t = fill_table(s, GridSpec((1, 2), (0, 1), ((0, 1),)))
        rows = list(t.rows())
        assert len(rows) == 8
        assert all(len(r) == 4 for r in rows)


def test_quotient_and_saturated_setups():
    s = plane()
    xT = s.ctx.term((1, 0), 1)
    quot = s.quotient([xT])
    assert quot.b.contains(xT)
    assert quot.fingerprint != s.fingerprint
    sat = quot.saturated()
    assert sat.b.contains(s.ctx.x_monomial((1, 0)))


def test_fingerprint_stable():
    assert plane().fingerprint == plane().fingerprint
    assert plane().fingerprint != plane(I23).fingerprint
