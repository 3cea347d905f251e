import pytest

from mixmult.engine import Setup
from mixmult.errors import DegreeMismatch, ModeMismatch, TrivialModule
from mixmult.multiplicity import (
    MultiIndex,
    WindowPolicy,
    buchsbaum_rim,
    buchsbaum_rim_vector,
    detect_degree,
    dimension_D,
    finite_difference,
    height_mod_ann,
    height_mod_ann_detail,
    mixed_multiplicity,
    multiplicity_report,
)
from mixmult.corpus import build, corpus_names, load_expected

MAX2 = [((1, 0), 1), ((0, 1), 1)]
I23 = [((2, 0), 1), ((0, 3), 1)]
MAX22 = [((1, 0), 1), ((0, 1), 1), ((1, 0), 2), ((0, 1), 2)]


class TestFiniteDifference:
    def test_quadratic(self):
        f = lambda pt: pt[0] * (pt[0] + 1) // 2
        for base in range(5):
            assert finite_difference(f, (2,), (base,)) == 1

    def test_above_degree_vanishes(self):
        f = lambda pt: pt[0] ** 2 + 3 * pt[0] + 7
        assert finite_difference(f, (3,), (2,)) == 0

    def test_bivariate(self):
        # oracle: the closed form (n+q+1) n(n+1)/2 expanded by hand
        f = lambda pt: (pt[0] + pt[1] + 1) * pt[0] * (pt[0] + 1) // 2
        assert finite_difference(f, (3, 0), (4, 4)) == 3
        assert finite_difference(f, (2, 1), (4, 4)) == 1

    def test_multi_index_form(self):
        f = lambda pt: pt[0] * pt[2]
        assert finite_difference(f, MultiIndex(j=0, k0=1, k=(1,)), (2, 2, 2)) == 1

    def test_axis_mismatch(self):
        with pytest.raises(DegreeMismatch):
            finite_difference(lambda pt: 0, (1, 1), (0,))


class TestDimensionD:
    def test_primary_plane(self):
        s = Setup.build(2, 1, (), MAX2, [I23])
        assert dimension_D(s) == 2

    def test_rank_two(self):
        s = Setup.build(2, 2, (), MAX22, [MAX22])
        assert dimension_D(s) == 3

    def test_quotient_line(self):
        s = Setup.build(2, 1, [(1, 0)], MAX2, [[((0, 1), 1)]])
        assert dimension_D(s) == 1

    def test_trivial(self):
        # the I-module lies inside the annihilator: everything is torsion
        s = Setup.build(2, 1, [(1, 0)], MAX2, [[((1, 0), 1)]])
        with pytest.raises(TrivialModule):
            dimension_D(s)


class TestDetectDegree:
    def test_plane(self):
        assert detect_degree(Setup.build(2, 1, (), MAX2, [MAX2])) == 2

    def test_rank_two_pair(self):
        assert detect_degree(Setup.build(2, 2, (), MAX22, [])) == 3

    def test_zero_table(self):
        s = Setup.build(2, 1, (), [((0, 0), 1)], [])
        assert detect_degree(s) == 0
        rep = multiplicity_report(s)
        assert rep.d_detected == 0
        assert rep.warnings  # formula disagrees and says so

    def test_table_provider_override(self):
        s = Setup.build(2, 1, (), MAX2, [])
        assert detect_degree(s, evaluate=lambda pt: 5) == 0


class TestMixedMultiplicity:
    def test_plane_samuel(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2])
        assert mixed_multiplicity(s, MultiIndex(0, 2, (0,))) == 1

    def test_two_generator_case(self):
        s = Setup.build(2, 1, (), MAX2, [I23])
        assert mixed_multiplicity(s, MultiIndex(0, 2, (0,))) == 1
        assert mixed_multiplicity(s, MultiIndex(0, 1, (1,))) == 2
        assert mixed_multiplicity(s, MultiIndex(0, 0, (2,))) == 0

    def test_top_p_axis_vanishes_for_rank_one(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2])
        assert mixed_multiplicity(s, MultiIndex(2, 0, (0,))) == 0

    def test_degree_mismatch(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2])
        with pytest.raises(DegreeMismatch):
            mixed_multiplicity(s, MultiIndex(0, 1, (0,)))
        with pytest.raises(DegreeMismatch):
            mixed_multiplicity(s, MultiIndex(0, 2, ()))


class TestBuchsbaumRim:
    def test_plane(self):
        s = Setup.build(2, 1, (), MAX2, [])
        assert buchsbaum_rim_vector(s, 2) == [1, 0, 0]

    def test_rank_two(self):
        s = Setup.build(2, 2, (), MAX22, [])
        assert buchsbaum_rim_vector(s, 3) == [3, 1, 0, 0]

    def test_full_module(self):
        s = Setup.build(2, 2, (), [((0, 0), 1), ((0, 0), 2)], [])
        assert buchsbaum_rim_vector(s, 3) == [0, 0, 0, 0]

    def test_needs_pair(self):
        with pytest.raises(ModeMismatch):
            buchsbaum_rim(Setup.build(2, 1, (), MAX2, [MAX2]), 0)


class TestHeight:
    def test_primary_case(self):
        s = Setup.build(2, 1, (), MAX2, [I23])
        assert height_mod_ann(s) == 2

    def test_contained_in_annihilator(self):
        s = Setup.build(2, 1, [(1, 0)], MAX2, [[((1, 0), 1)]])
        assert height_mod_ann(s) == 0

    def test_line_case(self):
        s = Setup.build(2, 1, [(1, 0)], MAX2, [[((0, 1), 1)]])
        assert height_mod_ann(s) == 1

    def test_capped_flag(self):
        # q = 0 makes ical the unit ideal, which covers everything
        s = Setup.build(2, 1, (), MAX2, [])
        value, capped = height_mod_ann_detail(s)
        assert capped and value == 4


class TestCorpus:
    def test_degrees_match_formula_and_oracle(self):
        expected = load_expected()
        for name in corpus_names():
            s = build(name)
            d_formula = dimension_D(s)
            d_detected = detect_degree(s)
            assert d_detected == d_formula == expected["setups"][name]["D"], name

    def test_values_match_oracle(self):
        expected = load_expected()
        for name in corpus_names():
            rep = multiplicity_report(build(name))
            got = {idx.label(): ev.value for idx, ev in rep.entries.items()}
            assert got == expected["setups"][name]["mixed"], name
            assert all(v >= 0 for v in got.values())

    def test_saturation_leaves_entries_unchanged(self):
        for name in ("plane-two-gen", "line-quotient", "fat-line", "curve-torsion"):
            s = build(name)
            rep = multiplicity_report(s)
            rep_sat = multiplicity_report(s.saturated())
            assert {i.label(): e.value for i, e in rep.entries.items()} == {
                i.label(): e.value for i, e in rep_sat.entries.items()
            }, name

    def test_zero_r_types_equal_br_of_saturation(self):
        for name in ("plane-samuel", "plane-two-gen", "line-quotient", "fat-line",
                      "curve-torsion", "rank-two-diagonal"):
            s = build(name)
            rep = multiplicity_report(s)
            pair = s.pair(b=s.b.saturate(s.ical))
            for idx, ev in rep.entries.items():
                if any(idx.k):
                    continue
                assert ev.value == buchsbaum_rim(pair, idx.j), (name, idx.label())


def test_policy_base_override():
    s = Setup.build(2, 1, (), MAX2, [MAX2])
    v = mixed_multiplicity(s, MultiIndex(0, 2, (0,)), WindowPolicy(base=6, span=2))
    assert v == 1
