"""Window-certified checks for sequence conditions on monomial candidates.

The three element conditions are decided on explicit sampling windows:

* fc1 - the intersection condition I^r M_p n x M_{|r|+p-1} = x I^{r-d(i)} M_p
  for all sampled r with r_i at least a recorded threshold;
* fc2 - filter-regularity (B : x) inside (B : ical^inf), which for cyclic
  monomial M is a complete ideal computation, no window needed;
* fc3 - the dimension drop dim(B+(x) : ical^inf) = dim(B : ical^inf) - 1.

A *fail* verdict is definitive and carries a witness monomial; a *pass* on
a windowed check certifies exactly the sampled window, which is recorded in
the report.  Sequence checks quotient the setup step by step (monomial
quotients only grow the ideal B).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from typing import Sequence

from mixmult.engine import Setup, full_slice
from mixmult.errors import DegreeMismatch, TrivialModule
from mixmult.monomial import BiMonomial, MonomialModule, krull_dim
from mixmult.multiplicity import dimension_D


@dataclass(frozen=True)
class Candidate:
    """A degree-one monomial element together with the slot it was drawn from.

    Slot 0 is the distinguished finite-colength submodule (when a check
    includes it); slots 1..q are the I_i.  The element must be a minimal
    generator of its slot's module and stay nonzero in the current quotient.
    """

    source: int
    element: BiMonomial


@dataclass(frozen=True)
class CheckWindow:
    """Sampled ranges for windowed checks.

    The distinguished r-axis runs over [threshold, threshold+span); the
    remaining r-axes take the values in ``others``; the module-degree axis
    takes ``p_values``.
    """

    threshold: int
    span: int = 3
    others: tuple[int, ...] = (0, 1, 2)
    p_values: tuple[int, ...] = (0, 1, 2)

    def payload(self) -> dict:
        return {
            "threshold": self.threshold,
            "span": self.span,
            "others": list(self.others),
            "p_values": list(self.p_values),
        }


def default_window(setup: Setup) -> CheckWindow:
    try:
        base = dimension_D(setup) + 2
    except TrivialModule:
        base = 3
    return CheckWindow(threshold=max(1, base))


@dataclass
class CheckReport:
    verdict: str  # pass | fail | inconclusive
    condition: str
    window: dict = field(default_factory=dict)
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def payload(self) -> dict:
        out = {"verdict": self.verdict, "condition": self.condition, "window": self.window}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        return out


def _family(setup: Setup, include_j: bool) -> list[MonomialModule]:
    return ([setup.f] if include_j else []) + list(setup.e_list)


def _position(setup: Setup, source: int, include_j: bool) -> int:
    if include_j:
        if not 0 <= source <= setup.q:
            raise DegreeMismatch(f"candidate source {source} out of range 0..{setup.q}")
        return source
    if not 1 <= source <= setup.q:
        raise DegreeMismatch(f"candidate source {source} out of range 1..{setup.q}")
    return source - 1


def candidate_alive(setup: Setup, cand: Candidate, include_j: bool = False,
                    family: Sequence[MonomialModule] | None = None,
                    position: int | None = None) -> bool:
    """Minimal generator of its slot, nonzero in the current quotient."""
    if family is None:
        family = _family(setup, include_j)
        position = _position(setup, cand.source, include_j)
    mod = family[position]
    return cand.element in mod.gens and not setup.b.contains(cand.element)


def _family_product(setup: Setup, family: Sequence[MonomialModule],
                    r: tuple[int, ...], pdeg: int) -> MonomialModule:
    """The slice I^r M_p + B-part in degree |r| + p, memoized on the setup."""
    key = (tuple((m.slice_deg, m.gens) for m in family), r, pdeg)
    cached = setup._fam_memo.get(key)
    if cached is not None:
        return cached
    s = sum(r) + pdeg
    out = MonomialModule(setup.ctx, 0, (setup.ctx.one(),))
    for mod, ri in zip(family, r):
        out = out.product(setup.module_power(mod, ri))
    out = out.product(full_slice(setup.ctx, pdeg)).sum(setup.b_slice(s))
    setup._fam_memo[key] = out
    return out


def _first_difference(ctx, lhs: MonomialModule, rhs: MonomialModule) -> dict:
    for g in lhs.gens:
        if not rhs.contains(g):
            return {"monomial": g.render(ctx), "side": "left-only"}
    for g in rhs.gens:
        if not lhs.contains(g):
            return {"monomial": g.render(ctx), "side": "right-only"}
    return {"monomial": "?", "side": "?"}


def _r_grid(nfam: int, pos: int, window: CheckWindow):
    axes = []
    for a in range(nfam):
        if a == pos:
            axes.append(range(max(1, window.threshold), max(1, window.threshold) + window.span))
        else:
            axes.append(window.others)
    return iproduct(*axes)


def check_fc1(setup: Setup, cand: Candidate, window: CheckWindow | None = None,
              include_j: bool = False,
              family: Sequence[MonomialModule] | None = None,
              position: int | None = None) -> CheckReport:
    """The intersection condition over the sampled window."""
    window = window or default_window(setup)
    if family is None:
        family = _family(setup, include_j)
        position = _position(setup, cand.source, include_j)
    if not candidate_alive(setup, cand, family=family, position=position):
        return CheckReport("fail", "fc1", window.payload(),
                           witness={"reason": "not a minimal generator in the quotient",
                                    "monomial": cand.element.render(setup.ctx)})
    ctx = setup.ctx
    elt_mod = MonomialModule.slice(ctx, 1, [cand.element])
    for r in _r_grid(len(family), position, window):
        r = tuple(r)
        rd = tuple(v - (1 if a == position else 0) for a, v in enumerate(r))
        for pdeg in window.p_values:
            s = sum(r) + pdeg
            left = _family_product(setup, family, r, pdeg)
            xm = elt_mod.product(full_slice(ctx, s - 1)).sum(setup.b_slice(s))
            lhs = left.intersect(xm)
            rhs = elt_mod.product(_family_product(setup, family, rd, pdeg)).sum(setup.b_slice(s))
            if lhs != rhs:
                wit = _first_difference(ctx, lhs, rhs)
                wit.update({"r": list(r), "p": pdeg,
                            "lhs": lhs.render(), "rhs": rhs.render()})
                return CheckReport("fail", "fc1", window.payload(), witness=wit)
    return CheckReport("pass", "fc1", window.payload())


def check_fc2(setup: Setup, cand: Candidate, degree_bound: int | None = None) -> CheckReport:
    """Filter-regularity: complete (windowless) for cyclic monomial modules.

    ``degree_bound`` is reserved for a future non-cyclic coefficient module.
    """
    del degree_bound
    bx = setup.b.colon(cand.element)
    sat = setup.b.saturate(setup.ical)
    if sat.contains_module(bx):
        return CheckReport("pass", "fc2", {"complete": True})
    for g in bx.gens:
        if not sat.contains(g):
            return CheckReport("fail", "fc2", {"complete": True},
                               witness={"monomial": g.render(setup.ctx),
                                        "reason": "annihilated by the element but not by ical"})
    raise AssertionError("unreachable")


def check_fc3(setup: Setup, cand: Candidate) -> CheckReport:
    """Dimension-drop condition; exact (windowless)."""
    sat_b = setup.b.saturate(setup.ical)
    if sat_b.is_unit:
        raise TrivialModule("the module is already ical-torsion; no dimension to drop")
    sat_q = setup.b.sum(MonomialModule.ideal(setup.ctx, [cand.element])).saturate(setup.ical)
    if sat_q.is_unit:
        raise TrivialModule("the quotient saturates to the unit ideal")
    before = krull_dim(sat_b)
    after = krull_dim(sat_q)
    details = {"dim_before": before, "dim_after": after}
    if after == before - 1:
        return CheckReport("pass", "fc3", {"complete": True}, details=details)
    return CheckReport("fail", "fc3", {"complete": True},
                       witness={"reason": f"dimension went {before} -> {after}, expected drop of 1"},
                       details=details)


@dataclass
class SequenceReport:
    verdict: str
    mode: str
    steps: list[dict] = field(default_factory=list)
    dims: list[int | None] = field(default_factory=list)
    failed_index: int | None = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def dimension_drop(self) -> int | None:
        if self.dims and self.dims[0] is not None and self.dims[-1] is not None:
            return self.dims[0] - self.dims[-1]
        return None

    def payload(self) -> dict:
        return {
            "verdict": self.verdict,
            "mode": self.mode,
            "steps": self.steps,
            "dims": self.dims,
            "failed_index": self.failed_index,
        }


def _proj_dim(setup: Setup) -> int | None:
    sat = setup.b.saturate(setup.ical)
    if sat.is_unit:
        return None  # zero module
    return krull_dim(sat) - 1


def check_sequence(setup: Setup, cs: Sequence[Candidate], mode: str = "weak",
                   window: CheckWindow | None = None, include_j: bool = False,
                   family: Sequence[MonomialModule] | None = None,
                   positions: Sequence[int] | None = None) -> SequenceReport:
    """Check a candidate sequence step by step in successive quotients.

    mode "weak" runs fc1+fc2 per step; mode "fc" adds fc3.  The per-step
    dimensions of the saturated quotients are recorded: a weak sequence of
    length t drops the dimension by at most t, with equality exactly when
    every fc3 step passes.
    """
    if not cs:
        raise DegreeMismatch("empty candidate sequence")
    if mode not in ("weak", "fc"):
        raise DegreeMismatch(f"unknown sequence mode {mode!r}")
    window = window or default_window(setup)
    report = SequenceReport("pass", mode)
    cur = setup
    report.dims.append(_proj_dim(cur))
    for i, cand in enumerate(cs):
        if family is not None:
            pos = positions[i]
            fam = family
        else:
            fam = _family(cur, include_j)
            pos = _position(cur, cand.source, include_j)
        step: dict = {"index": i, "element": cand.element.render(setup.ctx), "source": cand.source}
        checks = [check_fc1(cur, cand, window, family=fam, position=pos)]
        if checks[-1].passed:
            checks.append(check_fc2(cur, cand))
        if mode == "fc" and all(c.passed for c in checks):
            try:
                checks.append(check_fc3(cur, cand))
            except TrivialModule as exc:
                checks.append(CheckReport("fail", "fc3", {"complete": True},
                                          witness={"reason": str(exc)}))
        step["checks"] = [c.payload() for c in checks]
        report.steps.append(step)
        if not all(c.passed for c in checks):
            report.verdict = "fail"
            report.failed_index = i
            return report
        cur = cur.quotient([cand.element])
        # the quotient keeps the same modules; checks re-read them through B
        if family is not None:
            fam = family
        report.dims.append(_proj_dim(cur))
    return report


def check_superficial(setup: Setup, cand: Candidate, window: CheckWindow | None = None) -> CheckReport:
    """The colon-intersection form of superficiality over the sampled window:
    (I^{r+1+d(eps)} M_p : x) n I^r M_{p+q} = I^{r+1} M_p for sampled large r."""
    if setup.q == 0:
        raise DegreeMismatch("superficiality needs at least one I module")
    window = window or default_window(setup)
    family = list(setup.e_list)
    pos = _position(setup, cand.source, include_j=False)
    if not candidate_alive(setup, cand, family=family, position=pos):
        return CheckReport("fail", "superficial", window.payload(),
                           witness={"reason": "not a minimal generator in the quotient",
                                    "monomial": cand.element.render(setup.ctx)})
    ctx = setup.ctx
    qn = setup.q
    thr = max(0, window.threshold)
    for r in iproduct(range(thr, thr + window.span), repeat=qn):
        r1 = tuple(v + 1 for v in r)
        r1d = tuple(v + (1 if a == pos else 0) for a, v in enumerate(r1))
        for pdeg in window.p_values:
            lhs = _family_product(setup, family, r1d, pdeg).colon(cand.element).intersect(
                _family_product(setup, family, r, pdeg + qn)
            )
            rhs = _family_product(setup, family, r1, pdeg)
            if lhs != rhs:
                wit = _first_difference(ctx, lhs, rhs)
                wit.update({"r": list(r), "p": pdeg,
                            "lhs": lhs.render(), "rhs": rhs.render()})
                return CheckReport("fail", "superficial", window.payload(), witness=wit)
    return CheckReport("pass", "superficial", window.payload())


def check_superficial_sequence(setup: Setup, cs: Sequence[Candidate],
                               window: CheckWindow | None = None) -> SequenceReport:
    """Each element superficial in the successive quotient; sources must be nondecreasing."""
    if not cs:
        raise DegreeMismatch("empty candidate sequence")
    if list(c.source for c in cs) != sorted(c.source for c in cs):
        raise DegreeMismatch("superficial sequences take their sources in nondecreasing order")
    window = window or default_window(setup)
    report = SequenceReport("pass", "superficial")
    cur = setup
    report.dims.append(_proj_dim(cur))
    for i, cand in enumerate(cs):
        check = check_superficial(cur, cand, window)
        report.steps.append({"index": i, "element": cand.element.render(setup.ctx),
                             "source": cand.source, "checks": [check.payload()]})
        if not check.passed:
            report.verdict = "fail"
            report.failed_index = i
            return report
        cur = cur.quotient([cand.element])
        report.dims.append(_proj_dim(cur))
    return report


def check_joint_reduction(setup: Setup, groups: Sequence[Sequence[BiMonomial]],
                          window: CheckWindow | None = None) -> CheckReport:
    """Slice equality I^r M_p = sum_j (group_j) I^{r-d(j)} M_p over the window."""
    window = window or default_window(setup)
    t = len(groups)
    if t == 0 or t > setup.q:
        raise DegreeMismatch(f"need between 1 and {setup.q} groups, got {t}")
    ctx = setup.ctx
    family = list(setup.e_list)
    gmods = []
    for jg, group in enumerate(groups):
        if not group:
            raise DegreeMismatch(f"group {jg + 1} is empty")
        for m in group:
            if not setup.e_list[jg].contains(m):
                raise DegreeMismatch(
                    f"group {jg + 1} element {m.render(ctx)} is not in the corresponding module"
                )
        gmods.append(MonomialModule.slice(ctx, 1, group))
    thr = max(1, window.threshold)
    axes = [range(thr, thr + window.span) if a < t else window.others for a in range(setup.q)]
    for r in iproduct(*axes):
        r = tuple(r)
        for pdeg in window.p_values:
            s = sum(r) + pdeg
            lhs = _family_product(setup, family, r, pdeg)
            rhs = MonomialModule.zero(ctx, s)
            for jg in range(t):
                rd = tuple(v - (1 if a == jg else 0) for a, v in enumerate(r))
                rhs = rhs.sum(gmods[jg].product(_family_product(setup, family, rd, pdeg)))
            rhs = rhs.sum(setup.b_slice(s))
            if lhs != rhs:
                wit = _first_difference(ctx, lhs, rhs)
                wit.update({"r": list(r), "p": pdeg})
                return CheckReport("fail", "joint-reduction", window.payload(), witness=wit)
    return CheckReport("pass", "joint-reduction", window.payload())


def find_weak_fc(setup: Setup, i: int, window: CheckWindow | None = None,
                 include_j: bool = False) -> Candidate | None:
    """First minimal generator of I_i passing fc1 and fc2, or None.

    None is a legitimate outcome: the conditions hold for generic elements,
    which monomial candidates need not realize.
    """
    window = window or default_window(setup)
    fam = _family(setup, include_j)
    pos = _position(setup, i, include_j)
    for g in fam[pos].gens:
        cand = Candidate(i, g)
        if setup.b.contains(g):
            continue
        if not check_fc1(setup, cand, window, family=fam, position=pos).passed:
            continue
        if check_fc2(setup, cand).passed:
            return cand
    return None


@dataclass
class AssembledFamily:
    groups: list[list[BiMonomial]]
    sequence: list[Candidate]
    exhausted: bool


def assemble_weak_fc_family(setup: Setup, window: CheckWindow | None = None) -> AssembledFamily:
    """Greedy maximal weak sequence in the union of the I_i, grouped by source.

    Maximality is relative to the monomial candidate set only: assembly
    stops when no minimal generator of any I_i passes the weak checks in
    the current quotient.
    """
    window = window or default_window(setup)
    cur = setup
    groups: list[list[BiMonomial]] = [[] for _ in range(setup.q)]
    seq: list[Candidate] = []
    progress = True
    while progress:
        progress = False
        for i in range(1, setup.q + 1):
            cand = find_weak_fc(cur, i, window)
            if cand is not None:
                groups[i - 1].append(cand.element)
                seq.append(cand)
                cur = cur.quotient([cand.element])
                progress = True
    return AssembledFamily(groups, seq, exhausted=True)
