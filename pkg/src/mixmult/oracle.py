"""Independent brute-force oracle.

This module recomputes the length function by direct monomial enumeration:
generating sets of power products are expanded combinatorially, membership
is raw divisibility against those lists, and counting walks every exponent
vector of bounded total degree with an explicit exhaustion certificate.
It shares no code with the production path (antichains, colons, certified
boxes, counting kernels) and exists to pin expected values for the corpus
and the tests.
"""

from __future__ import annotations

import json
from itertools import combinations_with_replacement, product as iproduct
from math import comb
from typing import Sequence


class OracleError(Exception):
    pass


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _vec_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


class OracleSetup:
    """Raw generator data for brute-force evaluation."""

    def __init__(self, d: int, p: int, a_terms=(), f_terms=(), e_terms=()):
        self.d = d
        self.p = p
        self.b_gens = [tuple(int(v) for v in ax) for ax in a_terms]

        def term(xexps, comp):
            t = [0] * p
            t[comp - 1] = 1
            return (tuple(int(v) for v in xexps), tuple(t))

        self.f_gens = [term(x, c) for x, c in f_terms]
        self.e_gens = [[term(x, c) for x, c in terms] for terms in e_terms]
        self.q = len(self.e_gens)
        self._memo: dict = {}

    # -- generator expansion ------------------------------------------------

    def _power_gens(self, gens, n):
        if n == 0:
            return [((0,) * self.d, (0,) * self.p)]
        out = []
        for combo in combinations_with_replacement(range(len(gens)), n):
            x = (0,) * self.d
            t = (0,) * self.p
            for idx in combo:
                gx, gt = gens[idx]
                x = _vec_add(x, gx)
                t = _vec_add(t, gt)
            out.append((x, t))
        return out

    def _cross(self, lists):
        out = [((0,) * self.d, (0,) * self.p)]
        for lst in lists:
            out = [(_vec_add(ax, bx), _vec_add(at, bt)) for ax, at in out for bx, bt in lst]
        return out

    @staticmethod
    def _prune(gens):
        # drop generators dominated (same T-part, larger x-part) by another
        kept = []
        for g in sorted(set(gens)):
            if not any(h[1] == g[1] and _leq(h[0], g[0]) for h in kept):
                kept = [h for h in kept if not (g[1] == h[1] and _leq(g[0], h[0]))]
                kept.append(g)
        return kept

    def _grouped(self, gens):
        groups: dict = {}
        for x, t in self._prune(gens):
            groups.setdefault(t, []).append(x)
        return groups

    def in_b(self, alpha) -> bool:
        return any(_leq(bx, alpha) for bx in self.b_gens)

    # -- the length function -----------------------------------------------

    def h(self, n: int, pdeg: int, r: Sequence[int], cap: int = 256) -> int:
        key = (n, pdeg, tuple(r))
        if key in self._memo:
            return self._memo[key]
        if len(r) != self.q:
            raise OracleError("wrong number of r-axes")
        s = n + sum(r) + pdeg
        i_parts = [self._power_gens(self.e_gens[i], r[i]) for i in range(self.q)]
        slice_hi = [((0,) * self.d, t) for t in _compositions(n + pdeg, self.p)]
        slice_lo = [((0,) * self.d, t) for t in _compositions(pdeg, self.p)]
        num = self._grouped(self._cross(i_parts + [slice_hi]))
        den = self._grouped(
            self._cross([self._power_gens(self.f_gens, n)] + i_parts + [slice_lo])
        )
        max_gen_deg = max((sum(x) for group in num.values() for x in group), default=0)
        bound = max_gen_deg + 4
        while True:
            if bound > cap:
                raise OracleError(f"no exhaustion certificate below degree {cap}")
            count, shell_hit = self._count(num, den, s, bound)
            if not shell_hit:
                self._memo[key] = count
                return count
            bound *= 2

    def _count(self, num, den, s, bound):
        count = 0
        shell_hit = False
        for beta, ugens in num.items():
            vgens = den.get(beta, [])
            for alpha in self._alphas(bound):
                if not any(_leq(u, alpha) for u in ugens):
                    continue
                if self.in_b(alpha):
                    continue
                if any(_leq(v, alpha) for v in vgens):
                    continue
                if sum(alpha) == bound:
                    shell_hit = True
                    break
                count += 1
            if shell_hit:
                break
        return count, shell_hit

    def _alphas(self, bound):
        key = ("alphas", bound)
        if key not in self._memo:
            self._memo[key] = [
                a for a in iproduct(*[range(bound + 1)] * self.d) if sum(a) <= bound
            ]
        return self._memo[key]


def oracle_difference(setup: OracleSetup, order_vec: Sequence[int], base: Sequence[int]) -> int:
    total = sum(order_vec)
    acc = 0
    for offs in iproduct(*[range(o + 1) for o in order_vec]):
        sign = -1 if (total - sum(offs)) % 2 else 1
        coeff = 1
        for o, t in zip(order_vec, offs):
            coeff *= comb(o, t)
        pt = tuple(b + t for b, t in zip(base, offs))
        acc += sign * coeff * setup.h(pt[0], pt[1], pt[2:])
    return acc


def oracle_stable(setup: OracleSetup, order_vec: Sequence[int], base0: int = None,
                  rounds: int = 2) -> int:
    axes = 2 + setup.q
    base0 = base0 if base0 is not None else 3
    base = [base0] * axes
    for _ in range(rounds + 1):
        vals = {
            oracle_difference(setup, order_vec, tuple(b + s for b, s in zip(base, shift)))
            for shift in iproduct(range(2), repeat=axes)
        }
        if len(vals) == 1:
            return vals.pop()
        base = [2 * b for b in base]
    raise OracleError(f"order {order_vec} did not stabilize")


def oracle_degree(setup: OracleSetup, max_degree: int, base0: int = 3) -> int:
    axes = 2 + setup.q
    for cand in range(0, max_degree + 1):
        ok = True
        for order_vec in _compositions(cand + 1, axes):
            if any(
                oracle_difference(setup, order_vec, tuple(base0 + s for s in shift)) != 0
                for shift in iproduct(range(2), repeat=axes)
            ):
                ok = False
                break
        if ok:
            return cand
    raise OracleError("no polynomial degree detected")


def expected_for_spec(spec: dict) -> dict:
    """Oracle-computed degree and top multiplicities for one corpus spec."""
    setup = OracleSetup(spec["d"], spec["p"], spec.get("A", ()), spec["F"], spec.get("E", ()))
    degree = oracle_degree(setup, spec["d"] + spec["p"])
    axes = 2 + setup.q
    mixed = {}
    for order_vec in _compositions(degree, axes):
        k0, j, k = order_vec[0], order_vec[1], order_vec[2:]
        label = f"j={j};k0={k0};k=[{','.join(str(v) for v in k)}]"
        mixed[label] = oracle_stable(setup, order_vec)
    return {"D": degree, "mixed": mixed}


def regenerate_expected(specs: dict, out_path: str | None = None) -> dict:
    out = {"version": 1, "setups": {}}
    for name, spec in specs.items():
        out["setups"][name] = expected_for_spec(spec)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            json.dump(out, fh, indent=2, sort_keys=True)
            fh.write("\n")
    return out
