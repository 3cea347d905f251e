"""Exact verification cases: mixed multiplicities against Buchsbaum-Rim ones.

Each verification computes two integers by independent code paths - a mixed
multiplicity extracted from the full length table, and a Buchsbaum-Rim
multiplicity of a quotient or of a generated submodule - and compares them
exactly.  There is no tolerance anywhere.

Verdicts are a strict trichotomy:

* ``confirmed``  - both sides equal and every hypothesis check passed
  (windowed passes count, and the window is recorded);
* ``conditional`` - a hypothesis check failed or was inconclusive, or a
  generated module lacked finite colength: with monomial candidates the
  hypotheses are simply not met, which never reads as a refutation;
* ``refuted``    - an exact inequality with every hypothesis check passed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from mixmult.engine import Setup, full_slice
from mixmult.errors import (
    ColengthError,
    DegreeMismatch,
    HeightPreconditionFailed,
    LengthNotFinite,
)
from mixmult.monomial import BiMonomial, MonomialModule, krull_dim
from mixmult.multiplicity import (
    MultiIndex,
    WindowPolicy,
    buchsbaum_rim,
    detect_degree,
    dimension_D,
    height_mod_ann,
    mixed_multiplicity,
)
from mixmult.sequences import (
    Candidate,
    CheckWindow,
    check_fc1,
    check_fc2,
    check_fc3,
    check_sequence,
    check_superficial_sequence,
    default_window,
)

TARGET_SATURATED = "saturated-quotient"
TARGET_HEIGHT = "height-quotient"
TARGET_REDUCTION = "generated-reduction"
TARGET_SUPERFICIAL = "superficial-reduction"
TARGET_MODULE_FAMILY = "module-family"


@dataclass
class VerificationCase:
    target: str
    index: dict
    lhs: int | None
    rhs: int | None
    verdict: str
    checks: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    extras: dict = field(default_factory=dict)

    @property
    def confirmed(self) -> bool:
        return self.verdict == "confirmed"

    def payload(self) -> dict:
        return {
            "target": self.target,
            "index": self.index,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "verdict": self.verdict,
            "checks": self.checks,
            "notes": self.notes,
            "extras": self.extras,
        }


def _shape_counts(cs: Sequence[Candidate], q: int) -> tuple[int, ...]:
    counts = [0] * q
    for c in cs:
        if not 1 <= c.source <= q:
            raise DegreeMismatch(f"sequence element drawn from slot {c.source}, expected 1..{q}")
        counts[c.source - 1] += 1
    return tuple(counts)


def _require_shape(cs: Sequence[Candidate], idx: MultiIndex, q: int):
    if len(idx.k) != q:
        raise DegreeMismatch(f"index has {len(idx.k)} r-axes, setup has {q}")
    if _shape_counts(cs, q) != tuple(idx.k):
        raise DegreeMismatch(
            f"sequence shape {_shape_counts(cs, q)} does not match the index type {idx.k}"
        )


def _generated_br(setup: Setup, elements: Sequence[BiMonomial], j: int,
                  policy: WindowPolicy | None) -> int:
    """e^j of the pair (module generated by elements, ambient) against M."""
    gen_mod = MonomialModule.slice(setup.ctx, 1, elements)
    pair = Setup.raw(setup.ctx, setup.b, gen_mod, (), setup.kmax)
    try:
        return buchsbaum_rim(pair, j, policy)
    except LengthNotFinite as exc:
        raise ColengthError(
            "the generated submodule does not have finite colength over M"
        ) from exc


def verify_saturated_quotient(setup: Setup, cs: Sequence[Candidate], idx: MultiIndex,
                              window: CheckWindow | None = None,
                              policy: WindowPolicy | None = None) -> VerificationCase:
    """Mixed multiplicity of type idx against the BR multiplicity e^j of the
    ical-saturated quotient by the sequence.  Empty cs is the base identity
    (zero powers on every r-axis)."""
    window = window or default_window(setup)
    _require_shape(cs, idx, setup.q)
    case = VerificationCase(TARGET_SATURATED, {"index": idx.label()}, None, None, "conditional")
    if cs:
        seq = check_sequence(setup, cs, mode="fc", window=window, include_j=True)
        case.checks.append(seq.payload())
        hypotheses_ok = seq.passed
    else:
        case.notes.append("empty sequence: base identity over the saturated module")
        hypotheses_ok = True

    case.lhs = mixed_multiplicity(setup, idx, policy)
    b_quot = MonomialModule.ideal(setup.ctx, setup.b.gens + tuple(c.element for c in cs))
    b_sat = b_quot.saturate(setup.ical)
    pair = Setup.raw(setup.ctx, b_sat, setup.f, (), setup.kmax)
    pair_deg = detect_degree(pair, policy)
    case.extras["quotient_degree"] = pair_deg
    case.rhs = buchsbaum_rim(pair, idx.j, policy)
    if pair_deg != idx.j + idx.k0:
        case.notes.append(
            f"quotient degree {pair_deg} differs from expected {idx.j + idx.k0};"
            " the sequence did not cut the dimension as an FC sequence would"
        )
        hypotheses_ok = False
    if not hypotheses_ok:
        case.verdict = "conditional"
    elif case.lhs == case.rhs:
        case.verdict = "confirmed"
    else:
        case.verdict = "refuted"
    return case


def verify_height_quotient(setup: Setup, cs: Sequence[Candidate], idx: MultiIndex,
                           window: CheckWindow | None = None,
                           policy: WindowPolicy | None = None) -> VerificationCase:
    """Unsaturated variant: valid when t = |k| stays below the height of ical
    on the support of M; also cross-checks that saturating the quotient does
    not change the extracted value."""
    window = window or default_window(setup)
    _require_shape(cs, idx, setup.q)
    if idx.k0 == 0:
        raise DegreeMismatch("the unsaturated identity needs a positive n-axis power")
    t = sum(idx.k)
    ht = height_mod_ann(setup)
    if ht <= t:
        raise HeightPreconditionFailed(f"height {ht} must exceed the sequence length {t}")
    case = VerificationCase(TARGET_HEIGHT, {"index": idx.label()}, None, None, "conditional",
                            extras={"height": ht, "t": t})
    hypotheses_ok = True
    if cs:
        seq = check_sequence(setup, cs, mode="fc", window=window, include_j=True)
        case.checks.append(seq.payload())
        hypotheses_ok = seq.passed

    case.lhs = mixed_multiplicity(setup, idx, policy)
    b_quot = MonomialModule.ideal(setup.ctx, setup.b.gens + tuple(c.element for c in cs))
    pair_plain = Setup.raw(setup.ctx, b_quot, setup.f, (), setup.kmax)
    pair_sat = Setup.raw(setup.ctx, b_quot.saturate(setup.ical), setup.f, (), setup.kmax)
    case.rhs = buchsbaum_rim(pair_plain, idx.j, policy)
    rhs_sat = buchsbaum_rim(pair_sat, idx.j, policy)
    case.extras["rhs_saturated"] = rhs_sat
    if rhs_sat != case.rhs:
        case.notes.append("saturated and unsaturated quotients disagree under the height bound")
        hypotheses_ok = False
    if not hypotheses_ok:
        case.verdict = "conditional"
    elif case.lhs == case.rhs:
        case.verdict = "confirmed"
    else:
        case.verdict = "refuted"
    return case


def verify_generated_reduction(setup: Setup, ys: Sequence[BiMonomial],
                               xs: Sequence[Candidate], idx: MultiIndex,
                               g1s: Sequence[BiMonomial] = (),
                               window: CheckWindow | None = None,
                               policy: WindowPolicy | None = None) -> VerificationCase:
    """e^j of type idx against the plain BR multiplicity of the submodule
    generated by the whole sequence (g1s from the full degree-one slice,
    ys from J, xs from the I_i)."""
    window = window or default_window(setup)
    _require_shape(xs, idx, setup.q)
    if len(g1s) != idx.j:
        raise DegreeMismatch(f"need {idx.j} ambient degree-one elements, got {len(g1s)}")
    if len(ys) != idx.k0:
        raise DegreeMismatch(f"need {idx.k0} elements of the distinguished module, got {len(ys)}")
    ctx = setup.ctx
    g1_mod = full_slice(ctx, 1)
    family = [g1_mod, setup.f] + list(setup.e_list)

    case = VerificationCase(TARGET_REDUCTION, {"index": idx.label()}, None, None, "conditional")
    hypotheses_ok = True
    # The I-part must satisfy the full conditions (it peels the r-axes);
    # the reduction part only needs the weak ones to generate a reduction
    # over the quotient, and its final step lands on an ical-torsion module
    # where the dimension-drop condition has nothing left to cut.
    if xs:
        seq_fc = check_sequence(setup, xs, mode="fc", window=window,
                                family=family, positions=[1 + c.source for c in xs])
        case.checks.append(seq_fc.payload())
        hypotheses_ok = hypotheses_ok and seq_fc.passed
    reducers = [Candidate(0, m) for m in g1s] + [Candidate(0, m) for m in ys]
    if reducers:
        after = setup.quotient([c.element for c in xs]) if xs else setup
        seq_weak = check_sequence(after, reducers, mode="weak", window=window,
                                  family=family,
                                  positions=[0] * len(g1s) + [1] * len(ys))
        case.checks.append(seq_weak.payload())
        hypotheses_ok = hypotheses_ok and seq_weak.passed

    case.lhs = mixed_multiplicity(setup, idx, policy)
    elements = list(g1s) + list(ys) + [c.element for c in xs]
    try:
        case.rhs = _generated_br(setup, elements, 0, policy)
    except ColengthError as exc:
        case.notes.append(str(exc))
        case.verdict = "conditional"
        return case
    if not hypotheses_ok:
        case.verdict = "conditional"
    elif case.lhs == case.rhs:
        case.verdict = "confirmed"
    else:
        case.verdict = "refuted"
    return case


def verify_superficial_reduction(setup: Setup, cs: Sequence[Candidate], idx: MultiIndex,
                                 window: CheckWindow | None = None,
                                 policy: WindowPolicy | None = None) -> VerificationCase:
    """Superficial-sequence version.

    idx is the full extraction type (total = D, j = 0, k0 >= 1).  The
    criterion is two-sided: the multiplicity is nonzero exactly when the
    saturated quotient by the generated ideal has the expected dimension,
    and in that case it equals the BR multiplicity of that quotient.
    """
    window = window or default_window(setup)
    _require_shape(cs, idx, setup.q)
    if idx.j != 0:
        raise DegreeMismatch("the superficial identity extracts a j=0 type")
    if idx.k0 < 1:
        raise DegreeMismatch("the superficial identity needs a positive n-axis power")
    case = VerificationCase(TARGET_SUPERFICIAL, {"index": idx.label()}, None, None, "conditional")
    hypotheses_ok = True
    if cs:
        seq = check_superficial_sequence(setup, cs, window)
        case.checks.append(seq.payload())
        hypotheses_ok = seq.passed

    case.lhs = mixed_multiplicity(setup, idx, policy)
    b_q = MonomialModule.ideal(setup.ctx, setup.b.gens + tuple(c.element for c in cs))
    b_sat = b_q.saturate(setup.ical)
    dim_q = None if b_sat.is_unit else krull_dim(b_sat) - 1
    case.extras["quotient_dim"] = dim_q
    case.extras["expected_dim"] = idx.k0
    if not hypotheses_ok:
        case.verdict = "conditional"
        return case
    if case.lhs != 0:
        if dim_q != idx.k0:
            case.notes.append("nonzero multiplicity but unexpected quotient dimension")
            case.verdict = "refuted"
            return case
        pair = Setup.raw(setup.ctx, b_sat, setup.f, (), setup.kmax)
        case.rhs = buchsbaum_rim(pair, 0, policy)
        case.verdict = "confirmed" if case.lhs == case.rhs else "refuted"
    else:
        # contrapositive branch: zero multiplicity must mean a dimension defect
        case.verdict = "confirmed" if dim_q != idx.k0 else "refuted"
        if case.verdict == "confirmed":
            case.notes.append("zero multiplicity matched by the dimension criterion")
    return case


def verify_module_family(d: int, p: int, e_term_lists: Sequence[Sequence[tuple]],
                         sequence: Sequence[tuple[int, Sequence[int], int]], j: int,
                         window: CheckWindow | None = None,
                         policy: WindowPolicy | None = None,
                         kmax: int = 64) -> VerificationCase:
    """Finite-colength family identity over N = R.

    ``sequence`` entries are (source, x-exponents, component) with source 0
    meaning the full free module and source i meaning E_i.  The element
    counts give the type: j from the free module, k_i from E_i, with
    j + |k| = d + p - 1.  The mixed multiplicity is realized by promoting
    the first E_i with k_i > 0 into the finite-colength slot of the length
    function; the other side is the plain BR multiplicity of the submodule
    generated by the sequence.
    """
    q = len(e_term_lists)
    counts = [0] * q
    g1_count = 0
    for src, _, _ in sequence:
        if src == 0:
            g1_count += 1
        elif 1 <= src <= q:
            counts[src - 1] += 1
        else:
            raise DegreeMismatch(f"sequence source {src} out of range 0..{q}")
    if g1_count != j:
        raise DegreeMismatch(f"sequence carries {g1_count} free-module elements, expected j={j}")
    if j + sum(counts) != d + p - 1:
        raise DegreeMismatch(
            f"type (j={j}, k={tuple(counts)}) must total d+p-1 = {d + p - 1}"
        )
    promoted = next((i for i, c in enumerate(counts) if c > 0), None)
    if promoted is None:
        raise DegreeMismatch("at least one element must come from the E_i")

    check_setup = Setup.build(d, p, (), e_term_lists[promoted], e_term_lists, kmax=kmax)
    ctx = check_setup.ctx
    window = window or default_window(check_setup)
    family = [full_slice(ctx, 1)] + list(check_setup.e_list)
    candidates = []
    positions = []
    for src, xexps, comp in sequence:
        candidates.append(Candidate(src, ctx.term(xexps, comp)))
        positions.append(src)

    case = VerificationCase(
        TARGET_MODULE_FAMILY,
        {"j": j, "k": counts, "promoted": promoted + 1},
        None, None, "conditional",
    )
    seq = check_sequence(check_setup, candidates, mode="weak", window=window,
                         family=family, positions=positions)
    case.checks.append(seq.payload())
    hypotheses_ok = seq.passed

    h_setup = Setup.build(
        d, p, (), e_term_lists[promoted],
        [terms for i, terms in enumerate(e_term_lists) if i != promoted],
        kmax=kmax,
    )
    idx = MultiIndex(j=j, k0=counts[promoted],
                     k=tuple(c for i, c in enumerate(counts) if i != promoted))
    case.lhs = mixed_multiplicity(h_setup, idx, policy)
    try:
        case.rhs = _generated_br(check_setup, [c.element for c in candidates], 0, policy)
    except ColengthError as exc:
        case.notes.append(str(exc))
        case.verdict = "conditional"
        return case
    if not hypotheses_ok:
        case.verdict = "conditional"
    elif case.lhs == case.rhs:
        case.verdict = "confirmed"
    else:
        case.verdict = "refuted"
    return case


def find_fc_sequence(setup: Setup, k: Sequence[int], window: CheckWindow | None = None,
                     include_j: bool = True) -> list[Candidate] | None:
    """Assemble an FC-checked sequence with k_i elements of I_i, or None.

    The search is restricted to minimal monomial generators, so None does
    not contradict existence for generic elements.
    """
    window = window or default_window(setup)
    cur = setup
    out: list[Candidate] = []
    for i, need in enumerate(k, start=1):
        for _ in range(need):
            found = None
            fam_mods = ([cur.f] if include_j else []) + list(cur.e_list)
            pos = i if include_j else i - 1
            for g in fam_mods[pos].gens:
                if cur.b.contains(g):
                    continue
                cand = Candidate(i, g)
                if not check_fc1(cur, cand, window, family=fam_mods, position=pos).passed:
                    continue
                if not check_fc2(cur, cand).passed:
                    continue
                try:
                    if not check_fc3(cur, cand).passed:
                        continue
                except Exception:
                    continue
                found = cand
                break
            if found is None:
                return None
            out.append(found)
            cur = cur.quotient([found.element])
    return out
