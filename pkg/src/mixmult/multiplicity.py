"""Multiplicity extraction by exact multivariate finite differences.

The length function h(n, p, r) of a setup is eventually a polynomial whose
total degree D equals dim(G / (B : ical^inf)) - 1.  Its normalized top
coefficients - the mixed multiplicities e^j of type (k0, k_1..k_q) and, for
pair setups, the Buchsbaum-Rim multiplicities e^j - are iterated forward
differences of h, evaluated at a base point far enough out that they are
constant.  "Far enough" has no effective bound, so every extraction is
certified over an explicit stabilization window (all shifts agree), with
the base doubled a bounded number of times on disagreement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct
from math import comb
from typing import Callable, Sequence

from mixmult.engine import Setup, compositions
from mixmult.errors import (
    DegreeMismatch,
    ModeMismatch,
    TrivialModule,
    UnstableWindow,
)
from mixmult.monomial import BiMonomial, MonomialModule, krull_dim


@dataclass(frozen=True)
class MultiIndex:
    """Extraction type: j on the p-axis, k0 on the n-axis, k on the r-axes."""

    j: int
    k0: int
    k: tuple[int, ...] = ()

    def __post_init__(self):
        if self.j < 0 or self.k0 < 0 or any(ki < 0 for ki in self.k):
            raise DegreeMismatch("multi-index entries must be nonnegative")

    @property
    def total(self) -> int:
        return self.j + self.k0 + sum(self.k)

    def order_vector(self) -> tuple[int, ...]:
        # axis order (n, p, r_1..r_q)
        return (self.k0, self.j) + self.k

    def label(self) -> str:
        ks = ",".join(str(v) for v in self.k)
        return f"j={self.j};k0={self.k0};k=[{ks}]"


@dataclass(frozen=True)
class WindowPolicy:
    """Stabilization policy: base point, shift span, and doubling budget."""

    base: int | None = None
    span: int = 3
    rounds: int = 4


def finite_difference(f: Callable, order, base: Sequence[int]) -> int:
    """Iterated forward difference of f at base.

    ``order`` is a MultiIndex or a raw per-axis order vector aligned with
    the grid points f accepts.  For f a polynomial of total degree equal to
    |order| this is exactly k0! j! k! times the matching top coefficient.
    """
    vec = order.order_vector() if isinstance(order, MultiIndex) else tuple(order)
    if len(vec) != len(base):
        raise DegreeMismatch("order and base have different numbers of axes")
    total = sum(vec)
    acc = 0
    for offs in iproduct(*[range(o + 1) for o in vec]):
        sign = -1 if (total - sum(offs)) % 2 else 1
        coeff = 1
        for o, t in zip(vec, offs):
            coeff *= comb(o, t)
        acc += sign * coeff * f(tuple(b + t for b, t in zip(base, offs)))
    return acc


def _setup_evaluator(setup: Setup) -> Callable:
    def f(point):
        n, p, *r = point
        return setup.h_value(n, p, tuple(r))

    return f


def g_plus(setup: Setup) -> MonomialModule:
    """The irrelevant ideal (T_1..T_p) of the grading."""
    ctx = setup.ctx
    gens = []
    for jvar in range(ctx.p):
        t = [0] * ctx.p
        t[jvar] = 1
        gens.append(BiMonomial((0,) * ctx.d, tuple(t)))
    return MonomialModule.ideal(ctx, gens)


def dimension_D(setup: Setup) -> int:
    """Predicted total degree of h: dim of G/(B : ical^inf), minus one for the grading."""
    sat = setup.b.saturate(setup.ical)
    if sat.is_unit:
        raise TrivialModule("the module saturates to zero; no degree to predict")
    return krull_dim(sat) - 1


def height_mod_ann_detail(setup: Setup) -> tuple[int, bool]:
    """Height of ical on the support of M, measured on grading-relevant components.

    Components inside V(T_1..T_p) are invisible to every length function
    here, so both dimensions are taken after saturating by the irrelevant
    ideal.  When ical covers the whole relevant support the height is
    capped at dim + 1 and flagged.
    """
    gp = g_plus(setup)
    dim_m = krull_dim(setup.b.saturate(gp))
    dim_v = krull_dim(setup.b.sum(setup.ical).saturate(gp))
    if dim_v < 0:
        return dim_m + 1, True
    return dim_m - dim_v, False


def height_mod_ann(setup: Setup) -> int:
    return height_mod_ann_detail(setup)[0]


@dataclass
class Evidence:
    """Stabilization certificate for one extracted value."""

    base: tuple[int, ...]
    span: int
    rounds_used: int
    value: int

    def payload(self) -> dict:
        return {
            "base": list(self.base),
            "span": self.span,
            "rounds_used": self.rounds_used,
            "value": self.value,
        }


def _axes(setup: Setup) -> int:
    return 2 + setup.q


def _default_base(setup: Setup, policy: WindowPolicy) -> int:
    if policy.base is not None:
        return policy.base
    try:
        return dimension_D(setup) + 2
    except TrivialModule:
        return 3


def _stable_difference(
    evaluate: Callable, axes: int, order_vec: tuple[int, ...], base0: int, policy: WindowPolicy
) -> Evidence:
    base = [base0] * axes
    for rnd in range(policy.rounds + 1):
        seen = set()
        for shift in iproduct(range(policy.span), repeat=axes):
            pt = tuple(b + s for b, s in zip(base, shift))
            seen.add(finite_difference(evaluate, order_vec, pt))
            if len(seen) > 1:
                break
        if len(seen) == 1:
            return Evidence(tuple(base), policy.span, rnd, seen.pop())
        base = [2 * b for b in base]
    raise UnstableWindow(
        f"difference of order {order_vec} did not stabilize after {policy.rounds} doublings"
    )


def _orders_of_total(total: int, axes: int) -> list[tuple[int, ...]]:
    return compositions(total, axes)


def detect_degree(
    setup: Setup, policy: WindowPolicy | None = None, evaluate: Callable | None = None
) -> int:
    """Least D' whose order-(D'+1) differences all vanish over the window.

    Cross-checked by callers against :func:`dimension_D`; a disagreement is
    surfaced as a warning, never silently reconciled.
    """
    policy = policy or WindowPolicy()
    evaluate = evaluate or _setup_evaluator(setup)
    axes = _axes(setup)
    d_formula = dimension_D(setup)
    base = _default_base(setup, policy)
    for _ in range(policy.rounds + 1):
        for cand in range(0, d_formula + 3):
            ok = True
            for order_vec in _orders_of_total(cand + 1, axes):
                for shift in iproduct(range(policy.span), repeat=axes):
                    pt = tuple(base + s for s in shift)
                    if finite_difference(evaluate, order_vec, pt) != 0:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                return cand
        base *= 2
    raise UnstableWindow(
        f"no polynomial degree at most {d_formula + 2} stabilizes on the window"
    )


@dataclass
class MultiplicityReport:
    """Extracted multiplicities with their stabilization evidence."""

    d_detected: int
    d_formula: int
    entries: dict[MultiIndex, Evidence] = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)

    def value(self, idx: MultiIndex) -> int:
        return self.entries[idx].value

    def payload(self) -> dict:
        return {
            "d_detected": self.d_detected,
            "d_formula": self.d_formula,
            "entries": {idx.label(): ev.payload() for idx, ev in sorted(
                self.entries.items(), key=lambda kv: kv[0].label())},
            "warnings": list(self.warnings),
        }


def _extract(setup: Setup, idx: MultiIndex, policy: WindowPolicy, degree: int) -> Evidence:
    if len(idx.k) != setup.q:
        raise DegreeMismatch(f"index has {len(idx.k)} r-axes, setup has {setup.q}")
    if idx.total != degree:
        raise DegreeMismatch(f"index of total {idx.total} against detected degree {degree}")
    ev = _stable_difference(
        _setup_evaluator(setup), _axes(setup), idx.order_vector(), _default_base(setup, policy), policy
    )
    if ev.value < 0:
        raise UnstableWindow(
            f"stabilized difference {ev.value} is negative; the window is pre-asymptotic"
        )
    return ev


def mixed_multiplicity(setup: Setup, idx: MultiIndex, policy: WindowPolicy | None = None) -> int:
    """The multiplicity of type idx, certified constant over its window."""
    policy = policy or WindowPolicy()
    return _extract(setup, idx, policy, detect_degree(setup, policy)).value


def multiplicity_report(
    setup: Setup,
    indices: Sequence[MultiIndex] | None = None,
    policy: WindowPolicy | None = None,
) -> MultiplicityReport:
    policy = policy or WindowPolicy()
    d_formula = dimension_D(setup)
    d_detected = detect_degree(setup, policy)
    report = MultiplicityReport(d_detected, d_formula)
    if d_detected != d_formula:
        report.warnings.append(
            f"detected degree {d_detected} disagrees with the dimension formula {d_formula};"
            " extraction follows the table"
        )
    if indices is None:
        indices = [
            MultiIndex(j=vec[1], k0=vec[0], k=vec[2:])
            for vec in _orders_of_total(d_detected, _axes(setup))
        ]
    for idx in indices:
        report.entries[idx] = _extract(setup, idx, policy, d_detected)
    return report


def buchsbaum_rim(pair: Setup, j: int, policy: WindowPolicy | None = None) -> int:
    """e^j of the Buchsbaum-Rim function of a q = 0 setup; 0 above the degree."""
    if pair.q != 0:
        raise ModeMismatch("buchsbaum_rim expects a pair setup (no E modules)")
    policy = policy or WindowPolicy()
    degree = detect_degree(pair, policy)
    if j > degree:
        return 0
    idx = MultiIndex(j=j, k0=degree - j, k=())
    return _extract(pair, idx, policy, degree).value


def buchsbaum_rim_vector(pair: Setup, upto: int, policy: WindowPolicy | None = None) -> list[int]:
    return [buchsbaum_rim(pair, j, policy) for j in range(upto + 1)]
