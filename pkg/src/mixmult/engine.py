"""Graded objects over the slice kernel and their exact length functions.

A :class:`Setup` presents the data (d, p, A, F, E_1..E_q): the ring
k[x_1..x_d, T_1..T_p], a quotient ideal B (A extended to the full ring, or
any monomial ideal after quotienting by degree-one elements), the
finite-colength submodule J of the degree-one slice generated by F, and the
submodules I_i generated by the E_i.  The central quantity is

    h(n, p, r) = length of  I^r M_{n+p} / J^n I^r M_p   inside M = G/B,

evaluated exactly as a lattice-point count.  Buchsbaum-Rim length functions
are the q = 0 specialization h(n, q) = length of M_{n+q} / J^n M_q.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from itertools import combinations
from typing import Iterable, Sequence

from mixmult.errors import GridTooSmall, LengthNotFinite, ModeMismatch
from mixmult.monomial import (
    DEFAULT_KMAX,
    BiMonomial,
    MonomialModule,
    RingContext,
    length_between,
)


def compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for bars in combinations(range(total + parts - 1), parts - 1):
        prev = -1
        comp = []
        for b in bars:
            comp.append(b - prev - 1)
            prev = b
        comp.append(total + parts - 2 - prev)
        out.append(tuple(comp))
    return out


def full_slice(ctx: RingContext, s: int) -> MonomialModule:
    """The whole degree-s graded piece: the slice generated by every T^beta."""
    zero_x = (0,) * ctx.d
    return MonomialModule(
        ctx, s, tuple(sorted((BiMonomial(zero_x, b) for b in compositions(s, ctx.p)),
                             key=lambda m: m.combined, reverse=True))
    )


def ideal_t_slice(W: MonomialModule, s: int) -> MonomialModule:
    """The degree-s piece of an ideal W, as a slice module."""
    if not W.is_ideal:
        raise ModeMismatch("ideal_t_slice expects an ideal")
    gens = []
    for g in W.gens:
        rem = s - g.tdegree
        if rem < 0:
            continue
        for beta in compositions(rem, W.ctx.p):
            gens.append(BiMonomial(g.xpart, tuple(a + b for a, b in zip(g.tpart, beta))))
    return MonomialModule.slice(W.ctx, s, gens)


def rees_piece(E: MonomialModule, n: int) -> MonomialModule:
    """Degree-n piece of the algebra generated in degree one by E: all n-fold products."""
    if E.slice_deg != 1:
        raise ModeMismatch("rees_piece expects a degree-one slice module")
    return E.power(n)


def _terms_to_slice(ctx: RingContext, terms: Iterable[tuple[Sequence[int], int]]) -> MonomialModule:
    return MonomialModule.slice(ctx, 1, [ctx.term(x, c) for x, c in terms])


@dataclass(eq=False)
class Setup:
    """Immutable presentation of the graded data, with per-instance memo tables."""

    ctx: RingContext
    b: MonomialModule
    f: MonomialModule
    e_list: tuple[MonomialModule, ...]
    kmax: int = DEFAULT_KMAX
    _ical: MonomialModule | None = field(default=None, repr=False)
    _fingerprint: str | None = field(default=None, repr=False)
    _h_memo: dict = field(default_factory=dict, repr=False)
    _h_source: dict = field(default_factory=dict, repr=False)
    _pow_memo: dict = field(default_factory=dict, repr=False)
    _ir_memo: dict = field(default_factory=dict, repr=False)
    _bslice_memo: dict = field(default_factory=dict, repr=False)
    _fam_memo: dict = field(default_factory=dict, repr=False)
    persistent_cache: object = field(default=None, repr=False)

    # -- construction ------------------------------------------------------

    @classmethod
    def build(
        cls,
        d: int,
        p: int,
        a_terms: Iterable[Sequence[int]] = (),
        f_terms: Iterable[tuple[Sequence[int], int]] = (),
        e_terms: Iterable[Iterable[tuple[Sequence[int], int]]] = (),
        *,
        kmax: int = DEFAULT_KMAX,
        names: tuple[str, ...] = (),
        check: bool = True,
    ) -> "Setup":
        """Build from raw term data.

        ``a_terms`` are x-exponent vectors generating the ideal A of R;
        ``f_terms`` and each entry of ``e_terms`` are term vectors
        (x-exponents, component) describing submodules of R^p.
        """
        ctx = RingContext(d, p, tuple(names))
        b = MonomialModule.ideal(ctx, [ctx.x_monomial(a) for a in a_terms])
        f = _terms_to_slice(ctx, f_terms)
        es = tuple(_terms_to_slice(ctx, terms) for terms in e_terms)
        setup = cls(ctx, b, f, es, kmax=kmax)
        if check:
            setup.check_finite_colength()
        return setup

    @classmethod
    def raw(
        cls,
        ctx: RingContext,
        b: MonomialModule,
        f: MonomialModule,
        e_list: Sequence[MonomialModule],
        kmax: int = DEFAULT_KMAX,
    ) -> "Setup":
        return cls(ctx, b, f, tuple(e_list), kmax=kmax)

    def check_finite_colength(self):
        """Certify length(M_1 / J M_0) finite; the grading then keeps it finite forever."""
        try:
            self.h_value(1, 0, (0,) * self.q)
        except LengthNotFinite as exc:
            raise LengthNotFinite(
                "the distinguished submodule does not have finite colength over M"
            ) from exc

    # -- derived data --------------------------------------------------------

    @property
    def q(self) -> int:
        return len(self.e_list)

    @property
    def ical(self) -> MonomialModule:
        """The ideal generated by the product I_1 ... I_q (unit ideal when q = 0)."""
        if self._ical is None:
            prod = MonomialModule(self.ctx, 0, (self.ctx.one(),))
            for e in self.e_list:
                prod = prod.product(e)
            self._ical = MonomialModule.ideal(self.ctx, prod.gens)
        return self._ical

    @property
    def fingerprint(self) -> str:
        if self._fingerprint is None:
            parts = [f"v1;d={self.ctx.d};p={self.ctx.p}"]
            for tag, mod in [("B", self.b), ("F", self.f)] + [
                (f"E{i + 1}", e) for i, e in enumerate(self.e_list)
            ]:
                gens = ",".join(str(g.combined) for g in mod.gens)
                parts.append(f"{tag}:{gens}")
            blob = "|".join(parts).encode()
            self._fingerprint = hashlib.sha256(blob).hexdigest()[:24]
        return self._fingerprint

    def quotient(self, elements: Iterable[BiMonomial]) -> "Setup":
        """The setup presenting M/(elements)M: the quotient ideal grows."""
        b = MonomialModule.ideal(self.ctx, self.b.gens + tuple(elements))
        return Setup.raw(self.ctx, b, self.f, self.e_list, self.kmax)

    def saturated(self) -> "Setup":
        """The setup presenting M^* = M / (0 : ical^infinity)."""
        return Setup.raw(self.ctx, self.b.saturate(self.ical), self.f, self.e_list, self.kmax)

    def pair(self, new_f: MonomialModule | None = None, b: MonomialModule | None = None) -> "Setup":
        """The q = 0 setup used for Buchsbaum-Rim length functions."""
        return Setup.raw(self.ctx, b if b is not None else self.b,
                         new_f if new_f is not None else self.f, (), self.kmax)

    # -- memoized pieces ----------------------------------------------------

    def module_power(self, mod: MonomialModule, n: int) -> MonomialModule:
        key = (mod.slice_deg, mod.gens)
        chain = self._pow_memo.setdefault(key, [MonomialModule(self.ctx, 0, (self.ctx.one(),))])
        while len(chain) <= n:
            chain.append(chain[-1].product(mod))
        return chain[n]

    def b_slice(self, s: int) -> MonomialModule:
        if s not in self._bslice_memo:
            self._bslice_memo[s] = ideal_t_slice(self.b, s)
        return self._bslice_memo[s]

    def i_power_product(self, r: Sequence[int]) -> MonomialModule:
        r = tuple(r)
        if r not in self._ir_memo:
            out = MonomialModule(self.ctx, 0, (self.ctx.one(),))
            for mod, ri in zip(self.e_list, r):
                out = out.product(self.module_power(mod, ri))
            self._ir_memo[r] = out
        return self._ir_memo[r]

    # -- length functions ----------------------------------------------------

    def power_product(self, n: int, pdeg: int, r: Sequence[int]) -> tuple[MonomialModule, MonomialModule]:
        """(numerator, denominator) = (I^r M_{n+p}, J^n I^r M_p) in degree n+|r|+p.

        Both come back reduced modulo B (the B-part of the degree is summed
        in, which drops any generator lying in B); the denominator is
        contained in the numerator by construction and this is asserted.
        """
        r = tuple(r)
        if len(r) != self.q:
            raise ModeMismatch(f"expected {self.q} power exponents, got {len(r)}")
        s = n + sum(r) + pdeg
        bpart = self.b_slice(s)
        ir = self.i_power_product(r)
        num = ir.product(full_slice(self.ctx, n + pdeg)).sum(bpart)
        den = self.module_power(self.f, n).product(ir).product(full_slice(self.ctx, pdeg)).sum(bpart)
        assert num.contains_module(den), "denominator escaped the numerator"
        return num, den

    def h_value(self, n: int, pdeg: int, r: Sequence[int]) -> int:
        key = (n, pdeg, tuple(r))
        if key in self._h_memo:
            return self._h_memo[key]
        if self.persistent_cache is not None:
            hit = self.persistent_cache.get(self.fingerprint, key)
            if hit is not None:
                self._h_memo[key] = hit
                self._h_source[key] = "cached"
                return hit
        num, den = self.power_product(n, pdeg, r)
        value = length_between(den, num, kmax=self.kmax)
        self._h_memo[key] = value
        self._h_source[key] = "computed"
        if self.persistent_cache is not None:
            self.persistent_cache.put(self.fingerprint, key, value)
        return value


def br_value(pair: Setup, n: int, qdeg: int) -> int:
    """The Buchsbaum-Rim length function of a q = 0 setup."""
    if pair.q != 0:
        raise ModeMismatch("br_value expects a pair setup (no E modules)")
    return pair.h_value(n, qdeg, ())


@dataclass(frozen=True)
class GridSpec:
    """A finite rectangular grid of (n, p, r_1..r_q) evaluation points."""

    n_values: tuple[int, ...]
    p_values: tuple[int, ...]
    r_values: tuple[tuple[int, ...], ...] = ()

    def points(self) -> list[tuple[int, int, tuple[int, ...]]]:
        pts = []
        r_axes = self.r_values if self.r_values else ((),)

        def r_tuples():
            if not self.r_values:
                return [()]
            out = [()]
            for axis in self.r_values:
                out = [prefix + (v,) for prefix in out for v in axis]
            return out

        del r_axes
        for n in self.n_values:
            for p in self.p_values:
                for r in r_tuples():
                    pts.append((n, p, r))
        return pts


@dataclass
class LengthTable:
    """Exact h-values over a finite grid, with per-cell provenance."""

    setup_fingerprint: str
    grid: GridSpec
    values: dict[tuple[int, int, tuple[int, ...]], int]
    provenance: dict = field(default_factory=dict, repr=False)

    def __call__(self, point) -> int:
        n, p, *rest = point
        r = tuple(rest[0]) if rest and isinstance(rest[0], tuple) else tuple(rest)
        key = (n, p, r)
        if key not in self.values:
            raise GridTooSmall(f"point {key} outside the filled grid")
        return self.values[key]

    def rows(self):
        for (n, p, r), v in sorted(self.values.items()):
            yield (n, p) + r + (v,)


def fill_table(setup: Setup, grid: GridSpec, threads: int = 1) -> LengthTable:
    """Evaluate h on every grid point; cells are independent and may run in parallel."""
    points = grid.points()

    def cell(pt):
        n, p, r = pt
        return pt, setup.h_value(n, p, r)

    values = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for pt, v in pool.map(cell, points):
                values[pt] = v
    else:
        for pt in points:
            values[pt] = cell(pt)[1]
    prov = {pt: setup._h_source.get(pt, "computed") for pt in points}
    return LengthTable(setup.fingerprint, grid, values, prov)


def slice_module_from_elements(ctx: RingContext, elements: Iterable[BiMonomial]) -> MonomialModule:
    """The degree-one slice module generated by explicit elements of G_1."""
    return MonomialModule.slice(ctx, 1, elements)


def reduce_product(mods: Sequence[MonomialModule]) -> MonomialModule:
    return reduce(lambda a, b: a.product(b), mods)
