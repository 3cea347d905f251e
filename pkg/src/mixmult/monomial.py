"""Exact arithmetic on monomials, monomial ideals, and monomial slice modules.

Everything lives in the polynomial ring k[x_1..x_d, T_1..T_p], graded by
total T-degree.  The coefficient field is never materialized: membership,
sums, products, intersections, colons, saturations, Krull dimensions and
lengths of monomial quotients are all characteristic-independent lattice
computations on exponent vectors.

A :class:`MonomialModule` is either

* an *ideal* of the full ring (closed under multiplication by every
  variable), or
* a *slice* of T-degree k (an R-submodule of the degree-k graded piece,
  closed under multiplication by the x-variables only).

Generators are kept as a divisibility antichain in a canonical order, so
module equality is generator-tuple equality.  All values are immutable and
every operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from mixmult.counting import count_staircase_difference, staircase_complement
from mixmult.errors import (
    DegreeMismatch,
    KMaxExceeded,
    LengthInfinite,
    MixedSliceDegrees,
    ModeMismatch,
    NotContained,
)

# Exponents are plain machine ints in practice; fail loudly well before the
# counting kernels could overflow.
EXPONENT_LIMIT = 2**31 - 1

DEFAULT_KMAX = 64


def _default_names(d: int, p: int) -> tuple[str, ...]:
    if d <= 3:
        xs = ["x", "y", "z"][:d]
    else:
        xs = [f"x{i + 1}" for i in range(d)]
    ts = ["T"] if p == 1 else [f"T{j + 1}" for j in range(p)]
    return tuple(xs + ts)


@dataclass(frozen=True)
class RingContext:
    """The ambient ring k[x_1..x_d, T_1..T_p]."""

    d: int
    p: int
    names: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.d < 1 or self.p < 1:
            raise ValueError("need at least one x-variable and one T-variable")
        if not self.names:
            object.__setattr__(self, "names", _default_names(self.d, self.p))
        elif len(self.names) != self.d + self.p:
            raise ValueError("names must label every variable")

    def monomial(self, xpart: Iterable[int], tpart: Iterable[int]) -> "BiMonomial":
        m = BiMonomial(tuple(int(a) for a in xpart), tuple(int(b) for b in tpart))
        if len(m.xpart) != self.d or len(m.tpart) != self.p:
            raise DegreeMismatch(f"exponent arity does not match ring ({self.d}, {self.p})")
        if any(a < 0 or a > EXPONENT_LIMIT for a in m.xpart + m.tpart):
            raise ValueError("exponents must lie in [0, 2^31)")
        return m

    def x_monomial(self, xpart: Iterable[int]) -> "BiMonomial":
        return self.monomial(xpart, (0,) * self.p)

    def term(self, xpart: Iterable[int], component: int) -> "BiMonomial":
        """The monomial image x^a T_j of the term vector x^a e_j of R^p."""
        if not 1 <= component <= self.p:
            raise DegreeMismatch(f"component {component} out of range 1..{self.p}")
        t = [0] * self.p
        t[component - 1] = 1
        return self.monomial(xpart, t)

    def one(self) -> "BiMonomial":
        return BiMonomial((0,) * self.d, (0,) * self.p)


class BiMonomial(NamedTuple):
    """A monomial x^a T^b, stored as its pair of exponent vectors."""

    xpart: tuple[int, ...]
    tpart: tuple[int, ...]

    @property
    def tdegree(self) -> int:
        return sum(self.tpart)

    @property
    def xdegree(self) -> int:
        return sum(self.xpart)

    def times(self, other: "BiMonomial") -> "BiMonomial":
        return BiMonomial(
            tuple(a + b for a, b in zip(self.xpart, other.xpart)),
            tuple(a + b for a, b in zip(self.tpart, other.tpart)),
        )

    def divides(self, other: "BiMonomial") -> bool:
        return all(a <= b for a, b in zip(self.xpart, other.xpart)) and all(
            a <= b for a, b in zip(self.tpart, other.tpart)
        )

    def divides_in_slice(self, other: "BiMonomial") -> bool:
        # within a slice the quotient must be an x-monomial
        return self.tpart == other.tpart and all(
            a <= b for a, b in zip(self.xpart, other.xpart)
        )

    def lcm(self, other: "BiMonomial") -> "BiMonomial":
        return BiMonomial(
            tuple(max(a, b) for a, b in zip(self.xpart, other.xpart)),
            tuple(max(a, b) for a, b in zip(self.tpart, other.tpart)),
        )

    def quotient_by(self, other: "BiMonomial") -> "BiMonomial":
        """self / gcd(self, other): the colon quotient, clamped at zero."""
        return BiMonomial(
            tuple(max(a - b, 0) for a, b in zip(self.xpart, other.xpart)),
            tuple(max(a - b, 0) for a, b in zip(self.tpart, other.tpart)),
        )

    @property
    def combined(self) -> tuple[int, ...]:
        return self.xpart + self.tpart

    def support(self) -> frozenset[int]:
        return frozenset(i for i, e in enumerate(self.combined) if e > 0)

    def render(self, ctx: RingContext) -> str:
        parts = []
        for name, e in zip(ctx.names, self.combined):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"


def _is_antichain_member(m: BiMonomial, others: Iterable[BiMonomial], slice_mode: bool) -> bool:
    if slice_mode:
        return not any(o is not m and o.divides_in_slice(m) for o in others)
    return not any(o is not m and o.divides(m) for o in others)


def minimalize(
    ctx: RingContext, gens: Iterable[BiMonomial], slice_deg: int | None
) -> "MonomialModule":
    """Reduce a generating set to the divisibility antichain and canonicalize."""
    # ascending total degree puts every proper divisor before its multiples
    unique = sorted(set(gens), key=lambda m: (sum(m.combined), m.combined))
    slice_mode = slice_deg is not None
    if slice_mode:
        for m in unique:
            if m.tdegree != slice_deg:
                raise MixedSliceDegrees(
                    f"generator of T-degree {m.tdegree} in a degree-{slice_deg} slice"
                )
    kept: list[BiMonomial] = []
    for m in unique:
        if _is_antichain_member(m, kept, slice_mode):
            kept.append(m)
    kept.sort(key=lambda m: m.combined, reverse=True)
    return MonomialModule(ctx, slice_deg, tuple(kept))


@dataclass(frozen=True)
class MonomialModule:
    """A monomial ideal (slice_deg None) or a monomial slice module of T-degree k.

    ``gens`` is always the canonical minimal antichain; construct through
    :func:`minimalize` or the ``ideal``/``slice`` classmethods.
    """

    ctx: RingContext
    slice_deg: int | None
    gens: tuple[BiMonomial, ...]

    # -- constructors ------------------------------------------------------

    @classmethod
    def ideal(cls, ctx: RingContext, gens: Iterable[BiMonomial]) -> "MonomialModule":
        return minimalize(ctx, gens, None)

    @classmethod
    def slice(cls, ctx: RingContext, k: int, gens: Iterable[BiMonomial]) -> "MonomialModule":
        if k < 0:
            raise DegreeMismatch("slice degree must be nonnegative")
        return minimalize(ctx, gens, k)

    @classmethod
    def zero(cls, ctx: RingContext, slice_deg: int | None = None) -> "MonomialModule":
        return cls(ctx, slice_deg, ())

    @classmethod
    def unit_ideal(cls, ctx: RingContext) -> "MonomialModule":
        return cls(ctx, None, (ctx.one(),))

    # -- predicates --------------------------------------------------------

    @property
    def is_ideal(self) -> bool:
        return self.slice_deg is None

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return self.is_ideal and len(self.gens) == 1 and self.gens[0] == self.ctx.one()

    def contains(self, m: BiMonomial) -> bool:
        if self.is_ideal:
            return any(g.divides(m) for g in self.gens)
        if m.tdegree != self.slice_deg:
            raise DegreeMismatch(
                f"monomial of T-degree {m.tdegree} tested against a degree-{self.slice_deg} slice"
            )
        return any(g.divides_in_slice(m) for g in self.gens)

    def contains_module(self, other: "MonomialModule") -> bool:
        """Generator-wise containment other <= self (same mode required)."""
        self._require_same_mode(other)
        return all(self.contains(g) for g in other.gens)

    # -- arithmetic --------------------------------------------------------

    def _require_same_mode(self, other: "MonomialModule"):
        if self.ctx != other.ctx:
            raise ModeMismatch("modules live over different rings")
        if self.slice_deg != other.slice_deg:
            raise ModeMismatch(
                f"incompatible modes: {self._mode_name()} vs {other._mode_name()}"
            )

    def _mode_name(self) -> str:
        return "ideal" if self.is_ideal else f"slice({self.slice_deg})"

    def sum(self, other: "MonomialModule") -> "MonomialModule":
        self._require_same_mode(other)
        return minimalize(self.ctx, self.gens + other.gens, self.slice_deg)

    def product(self, other: "MonomialModule") -> "MonomialModule":
        """Ideal*ideal -> ideal; slice(a)*slice(b) -> slice(a+b);
        an ideal with T-free generators may multiply a slice."""
        if self.ctx != other.ctx:
            raise ModeMismatch("modules live over different rings")
        if self.is_ideal and other.is_ideal:
            out_deg: int | None = None
        elif not self.is_ideal and not other.is_ideal:
            out_deg = self.slice_deg + other.slice_deg
        else:
            ideal, sl = (self, other) if self.is_ideal else (other, self)
            if any(g.tdegree != 0 for g in ideal.gens):
                raise ModeMismatch("only an x-ideal can multiply a slice module")
            out_deg = sl.slice_deg
        gens = [a.times(b) for a in self.gens for b in other.gens]
        return minimalize(self.ctx, gens, out_deg)

    def power(self, n: int) -> "MonomialModule":
        """n-fold product; the 0th power is the unit ideal / degree-0 slice."""
        if n < 0:
            raise DegreeMismatch("power must be nonnegative")
        unit_deg = None if self.is_ideal else 0
        out = MonomialModule(self.ctx, unit_deg, (self.ctx.one(),))
        for _ in range(n):
            out = out.product(self)
        return out

    def intersect(self, other: "MonomialModule") -> "MonomialModule":
        self._require_same_mode(other)
        gens: list[BiMonomial] = []
        if self.is_ideal:
            gens = [a.lcm(b) for a in self.gens for b in other.gens]
        else:
            for a in self.gens:
                for b in other.gens:
                    if a.tpart == b.tpart:
                        gens.append(a.lcm(b))
        return minimalize(self.ctx, gens, self.slice_deg)

    def colon(self, m: BiMonomial) -> "MonomialModule":
        """{ v : v*m in self }.

        For an ideal this is the usual monomial colon.  For a slice of
        degree k it is the slice of degree k - tdeg(m); only generators
        whose T-part dominates m's contribute.
        """
        if self.is_ideal:
            return minimalize(self.ctx, [g.quotient_by(m) for g in self.gens], None)
        out_deg = self.slice_deg - m.tdegree
        if out_deg < 0:
            raise DegreeMismatch("colon by a monomial of larger T-degree than the slice")
        gens = [
            g.quotient_by(m)
            for g in self.gens
            if all(a >= b for a, b in zip(g.tpart, m.tpart))
        ]
        return minimalize(self.ctx, gens, out_deg)

    def colon_module(self, W: "MonomialModule") -> "MonomialModule":
        """(self : W) = intersection of the colons by W's generators."""
        if W.is_zero:
            return MonomialModule.unit_ideal(self.ctx) if self.is_ideal else self
        out = self.colon(W.gens[0])
        for w in W.gens[1:]:
            out = out.intersect(self.colon(w))
        return out

    def saturate(self, W: "MonomialModule") -> "MonomialModule":
        """(self : W^infinity): iterate the full-ideal colon to its fixed point.

        Terminates because the iterates form an increasing chain of monomial
        antichains.  Requires W in ideal mode; a slice can only be saturated
        by an x-ideal (otherwise the T-degree would drift).
        """
        if not W.is_ideal:
            raise ModeMismatch("saturation requires an ideal on the right")
        if not self.is_ideal and any(g.tdegree != 0 for g in W.gens):
            raise ModeMismatch("a slice can only be saturated by an x-ideal")
        cur = self
        while True:
            nxt = cur.colon_module(W)
            if nxt == cur:
                return cur
            cur = nxt

    # -- display -----------------------------------------------------------

    def render(self) -> str:
        inside = ", ".join(g.render(self.ctx) for g in self.gens) or "0"
        return f"{self._mode_name()}<{inside}>"


def krull_dim(B: MonomialModule) -> int:
    """Krull dimension of k[x,T]/B for a monomial ideal B.

    Computed as the largest coordinate subspace missing every generator's
    support; the unit ideal has dimension -1 by convention.
    """
    if not B.is_ideal:
        raise ModeMismatch("krull_dim is defined for ideals")
    supports = [g.support() for g in B.gens]
    nvars = B.ctx.d + B.ctx.p
    for size in range(nvars, -1, -1):
        for subset in combinations(range(nvars), size):
            chosen = frozenset(subset)
            if all(not (sup <= chosen) for sup in supports):
                return size
    return -1


def _group_by_tpart(mod: MonomialModule) -> dict[tuple[int, ...], list[tuple[int, ...]]]:
    groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for g in mod.gens:
        groups.setdefault(g.tpart, []).append(g.xpart)
    return groups


def _least_absorption(u: tuple[int, ...], vparts: list[tuple[int, ...]]) -> int | None:
    """Least K with u * m^K inside the up-set of vparts, or None if there is none.

    Shift the staircase to u's corner; the complement of the shifted up-set
    is finite exactly when every axis carries a pure-power bound, and the
    least K is one more than the largest coordinate-sum in the complement.
    """
    d = len(u)
    shifted = sorted({tuple(max(v[i] - u[i], 0) for i in range(d)) for v in vparts})
    box = []
    for axis in range(d):
        pure = [w[axis] for w in shifted if all(w[j] == 0 for j in range(d) if j != axis)]
        if not pure:
            return None
        box.append(min(pure))
    _, max_norm = staircase_complement(shifted, box)
    return max_norm + 1


def length_between(V: MonomialModule, U: MonomialModule, kmax: int = DEFAULT_KMAX) -> int:
    """Exact number of monomials in U \\ V for slice modules V <= U.

    Finiteness is certified per generator u of U by the least K with
    u*m^K <= V (m the x-maximal ideal); the monomials of U \\ V then live in
    an explicit box which the counting backend enumerates exactly.

    Raises NotContained if V is not a submodule of U, LengthInfinite when
    the difference provably contains an infinite staircase ray, and
    KMaxExceeded when a certificate exists only above ``kmax``.
    """
    if U.is_ideal or V.is_ideal:
        raise ModeMismatch("length_between counts slice-module quotients")
    U._require_same_mode(V)
    if not U.contains_module(V):
        raise NotContained("the first argument is not contained in the second")
    if U.gens == V.gens:
        return 0

    ugroups = _group_by_tpart(U)
    vgroups = _group_by_tpart(V)
    total = 0
    d = U.ctx.d
    for tpart, uparts in ugroups.items():
        vparts = vgroups.get(tpart, [])
        if not vparts:
            raise LengthInfinite(
                f"no relation bounds the T-part {tpart}; the quotient is infinite"
            )
        absorptions = []
        for u in uparts:
            k_u = _least_absorption(u, vparts)
            if k_u is None:
                raise LengthInfinite(
                    f"a staircase ray above T-part {tpart} escapes the submodule"
                )
            if k_u > kmax:
                raise KMaxExceeded(
                    f"finiteness certificate needs K={k_u} > kmax={kmax} (infinite or unknown)"
                )
            absorptions.append(k_u)
        box = [
            max(u[i] + k for u, k in zip(uparts, absorptions)) for i in range(d)
        ]
        total += count_staircase_difference(uparts, vparts, box)
    return total
