import random

import pytest

from mixmult.engine import Setup
from mixmult.errors import DegreeMismatch, TrivialModule
from mixmult.monomial import krull_dim
from mixmult.sequences import (
    AssembledFamily,
    Candidate,
    CheckWindow,
    assemble_weak_fc_family,
    check_fc1,
    check_fc2,
    check_fc3,
    check_joint_reduction,
    check_sequence,
    check_superficial,
    check_superficial_sequence,
    default_window,
    find_weak_fc,
)

MAX2 = [((1, 0), 1), ((0, 1), 1)]
SMALL = CheckWindow(threshold=2, span=2, others=(0, 1, 2), p_values=(0, 1))


def plane(e=None, a=()):
    return Setup.build(2, 1, a, MAX2, [e if e is not None else MAX2])


def cand(setup, source, xexps, comp=1):
    return Candidate(source, setup.ctx.term(xexps, comp))


class TestFc1:
    def test_regular_element_passes(self):
        s = plane()
        rep = check_fc1(s, cand(s, 1, (1, 0)))
        assert rep.verdict == "pass"
        assert rep.window["threshold"] >= 1

    def test_dead_candidate_rejected(self):
        s = plane()
        rep = check_fc1(s, Candidate(1, s.ctx.term((2, 0), 1)))
        assert rep.verdict == "fail"
        assert "minimal generator" in rep.witness["reason"]

    def test_interfering_powers_fail_with_witness(self):
        # I_1 = (x^2 T) steals x-powers from I_2 = (xT, yT): the monomial
        # x^{2 r1} y^{r2} lies in the intersection but not in x I^{r-d(2)}
        s = Setup.build(2, 1, (), MAX2, [[((2, 0), 1)], MAX2])
        rep = check_fc1(s, cand(s, 2, (1, 0)), SMALL)
        assert rep.verdict == "fail"
        assert rep.witness["monomial"]
        assert rep.witness["r"][0] >= 0

    def test_interfering_partner_passes(self):
        s = Setup.build(2, 1, (), MAX2, [[((2, 0), 1)], MAX2])
        assert check_fc1(s, cand(s, 2, (0, 1)), SMALL).verdict == "pass"
        assert check_fc1(s, cand(s, 1, (2, 0)), SMALL).verdict == "pass"

    def test_nonreduced_quotient_still_satisfies_intersection(self):
        # the collapsed monomials land in the B-part of both sides, so the
        # displayed equality holds; this candidate fails fc2 instead
        s = plane(a=[(2, 0)])
        assert check_fc1(s, cand(s, 1, (1, 0)), SMALL).verdict == "pass"

    def test_include_j_axis(self):
        s = plane()
        assert check_fc1(s, cand(s, 1, (1, 0)), SMALL, include_j=True).verdict == "pass"
        assert check_fc1(s, Candidate(0, s.ctx.term((0, 1), 1)), SMALL,
                         include_j=True).verdict == "pass"


class TestFc2:
    def test_free_module(self):
        s = plane()
        assert check_fc2(s, cand(s, 1, (1, 0))).verdict == "pass"

    def test_nilpotent_direction_fails(self):
        s = plane(a=[(2, 0)])
        rep = check_fc2(s, cand(s, 1, (1, 0)))
        assert rep.verdict == "fail"
        assert rep.witness["monomial"] == "x"

    def test_clean_direction_passes(self):
        s = plane(a=[(2, 0)])
        assert check_fc2(s, cand(s, 1, (0, 1))).verdict == "pass"


class TestFc3:
    def test_dimension_drops(self):
        s = Setup.build(3, 1, (),
                        [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)],
                        [[((1, 0, 0), 1), ((0, 1, 0), 1)]])
        rep = check_fc3(s, cand(s, 1, (1, 0, 0)))
        assert rep.verdict == "pass"
        assert rep.details == {"dim_before": 4, "dim_after": 3}

    def test_saturated_part_fails(self):
        # x already acts as zero on M = G/(x): no dimension drops
        s = Setup.build(2, 1, [(1, 0)], MAX2, [[((0, 1), 1)]])
        rep = check_fc3(s, Candidate(0, s.ctx.term((1, 0), 1)))
        assert rep.verdict == "fail"
        assert rep.details["dim_before"] == rep.details["dim_after"]

    def test_torsion_quotient_is_trivial(self):
        s = plane()
        s1 = s.quotient([s.ctx.term((1, 0), 1)])
        with pytest.raises(TrivialModule):
            check_fc3(s1, cand(s1, 1, (0, 1)))


class TestSequence:
    def test_weak_pair_passes(self):
        s = plane()
        rep = check_sequence(s, [cand(s, 1, (1, 0)), cand(s, 1, (0, 1))],
                             mode="weak", window=SMALL)
        assert rep.verdict == "pass"
        assert rep.dims[0] == 2 and rep.dims[1] == 1

    def test_fc_pair_hits_torsion_boundary(self):
        # the full-length quotient is entirely ical-torsion, so the
        # dimension-drop condition has nothing left to cut: weak passes,
        # the strict mode fails at the last step
        s = plane()
        rep = check_sequence(s, [cand(s, 1, (1, 0)), cand(s, 1, (0, 1))],
                             mode="fc", window=SMALL)
        assert rep.verdict == "fail"
        assert rep.failed_index == 1
        assert rep.steps[1]["checks"][-1]["condition"] == "fc3"

    def test_fc_single_step(self):
        s = plane()
        rep = check_sequence(s, [cand(s, 1, (1, 0))], mode="fc", window=SMALL)
        assert rep.verdict == "pass"
        assert rep.dims == [2, 1]

    def test_repeated_element_dies(self):
        s = plane()
        rep = check_sequence(s, [cand(s, 1, (1, 0)), cand(s, 1, (1, 0))],
                             mode="weak", window=SMALL)
        assert rep.verdict == "fail"
        assert rep.failed_index == 1

    def test_empty_rejected(self):
        with pytest.raises(DegreeMismatch):
            check_sequence(plane(), [], mode="weak")

    def test_quotient_steps_commute(self):
        s = plane(a=[(3, 0)])
        a, b = cand(s, 1, (0, 1)), cand(s, 1, (1, 0))
        both = check_sequence(s, [a, b], mode="weak", window=SMALL)
        first = check_sequence(s, [a], mode="weak", window=SMALL)
        second = check_sequence(s.quotient([a.element]), [b], mode="weak", window=SMALL)
        assert both.steps[0]["checks"] == first.steps[0]["checks"]
        assert both.steps[1]["checks"] == second.steps[0]["checks"]

    def test_dimension_ledger_matches_fc3_passes(self):
        # weak sequences drop the dimension by at most their length, with
        # equality exactly when every strict step also passes
        s = Setup.build(3, 1, (),
                        [((1, 0, 0), 1), ((0, 1, 0), 1), ((0, 0, 1), 1)],
                        [[((1, 0, 0), 1), ((0, 1, 0), 1)]])
        seq = [cand(s, 1, (1, 0, 0)), cand(s, 1, (0, 1, 0))]
        weak = check_sequence(s, seq, mode="weak", window=SMALL)
        assert weak.verdict == "pass"
        drop = weak.dims[0] - (weak.dims[-1] if weak.dims[-1] is not None else -1)
        assert drop <= len(seq) + 1
        strict = check_sequence(s, seq, mode="fc", window=SMALL)
        if strict.verdict == "pass":
            assert weak.dims[0] - weak.dims[-1] == len(seq)


class TestSuperficial:
    def test_regular(self):
        s = plane()
        assert check_superficial(s, cand(s, 1, (1, 0)), SMALL).verdict == "pass"

    def test_nilpotent_fails_with_witness(self):
        s = plane(a=[(2, 0)])
        rep = check_superficial(s, cand(s, 1, (1, 0)), SMALL)
        assert rep.verdict == "fail"
        assert rep.witness["monomial"]

    def test_second_family_slot(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2, MAX2])
        assert check_superficial(s, cand(s, 2, (0, 1)), SMALL).verdict == "pass"

    def test_sequence_requires_sorted_sources(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2, MAX2])
        with pytest.raises(DegreeMismatch):
            check_superficial_sequence(s, [cand(s, 2, (1, 0)), cand(s, 1, (0, 1))], SMALL)

    def test_sequence_passes(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2, MAX2])
        rep = check_superficial_sequence(s, [cand(s, 1, (1, 0)), cand(s, 2, (0, 1))], SMALL)
        assert rep.verdict == "pass"


class TestJointReduction:
    def test_whole_module(self):
        s = plane()
        fam = [[s.ctx.term((1, 0), 1), s.ctx.term((0, 1), 1)]]
        assert check_joint_reduction(s, fam, SMALL).verdict == "pass"

    def test_proper_subset_fails(self):
        s = plane()
        rep = check_joint_reduction(s, [[s.ctx.term((1, 0), 1)]], SMALL)
        assert rep.verdict == "fail"
        assert "y" in rep.witness["monomial"]

    def test_split_groups(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2, MAX2])
        groups = [[s.ctx.term((1, 0), 1)], [s.ctx.term((0, 1), 1)]]
        assert check_joint_reduction(s, groups, SMALL).verdict == "pass"

    def test_membership_validated(self):
        s = plane([((2, 0), 1), ((0, 3), 1)])
        with pytest.raises(DegreeMismatch):
            check_joint_reduction(s, [[s.ctx.term((1, 0), 1)]], SMALL)


class TestFindWeakFc:
    def test_first_in_order(self):
        s = plane()
        got = find_weak_fc(s, 1, SMALL)
        assert got.element == s.ctx.term((1, 0), 1)

    def test_two_generator_module(self):
        s = plane([((2, 0), 1), ((0, 3), 1)])
        got = find_weak_fc(s, 1, SMALL)
        assert got is not None
        assert got.element in (s.ctx.term((2, 0), 1), s.ctx.term((0, 3), 1))

    def test_not_found_on_torsion_curve(self):
        # over R/(x^2 y) both generators of the maximal ideal fail the
        # filter-regularity condition
        s = plane(a=[(2, 1)])
        assert find_weak_fc(s, 1, SMALL) is None

    def test_assembly_and_joint_reduction(self):
        s = Setup.build(2, 1, (), MAX2, [MAX2, MAX2])
        fam = assemble_weak_fc_family(s, SMALL)
        assert isinstance(fam, AssembledFamily)
        assert all(fam.groups)
        assert check_joint_reduction(s, fam.groups, SMALL).verdict == "pass"

    def test_assembly_empty_on_torsion(self):
        s = plane(a=[(2, 1)])
        fam = assemble_weak_fc_family(s, SMALL)
        assert fam.groups == [[]]
        assert fam.sequence == []


class TestSuperficialImpliesWeak:
    def test_on_random_candidates(self):
        rng = random.Random(47)
        window = SMALL
        checked = 0
        for _ in range(40):
            d = rng.randint(1, 2)
            p = rng.randint(1, 2)
            f = [((0,) * i + (1,) + (0,) * (d - 1 - i), c)
                 for i in range(d) for c in range(1, p + 1)]
            e = [[(tuple(rng.randint(0, 2) for _ in range(d)), rng.randint(1, p))
                  for _ in range(rng.randint(1, 3))]]
            a = [tuple(rng.randint(0, 3) for _ in range(d))] if rng.random() < 0.4 else []
            try:
                s = Setup.build(d, p, a, f, e)
            except Exception:
                continue
            for g in s.e_list[0].gens:
                c = Candidate(1, g)
                if s.b.contains(g):
                    continue
                if check_superficial(s, c, window).verdict == "pass":
                    checked += 1
                    assert check_fc1(s, c, window).verdict == "pass", (a, e, g)
                    assert check_fc2(s, c).verdict == "pass", (a, e, g)
        assert checked >= 20


def test_default_window_uses_formula():
    assert default_window(plane()).threshold == 4
