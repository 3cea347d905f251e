"""Shared brute-force helpers for the test suite.

These are deliberately naive: membership is raw divisibility against
generator lists, counting walks every exponent vector below a bound, and
exhaustion is certified by an empty outermost shell.  They never call the
antichain/colon/box machinery they are used to check.
"""

from __future__ import annotations

import random
from itertools import product as iproduct

from mixmult.monomial import BiMonomial, MonomialModule, RingContext


def monomials_up_to(ctx: RingContext, xdeg: int, tdeg: int):
    """Every monomial with |xpart| <= xdeg and tpart exactly of degree tdeg."""
    for x in iproduct(*[range(xdeg + 1)] * ctx.d):
        if sum(x) > xdeg:
            continue
        for t in iproduct(*[range(tdeg + 1)] * ctx.p):
            if sum(t) == tdeg:
                yield BiMonomial(x, t)


def ideal_monomials_up_to(ctx: RingContext, deg: int):
    for combined in iproduct(*[range(deg + 1)] * (ctx.d + ctx.p)):
        if sum(combined) <= deg:
            yield BiMonomial(combined[: ctx.d], combined[ctx.d:])


def brute_member_slice(m: BiMonomial, gens) -> bool:
    return any(
        g.tpart == m.tpart and all(a <= b for a, b in zip(g.xpart, m.xpart)) for g in gens
    )


def brute_member_ideal(m: BiMonomial, gens) -> bool:
    return any(
        all(a <= b for a, b in zip(g.xpart + g.tpart, m.xpart + m.tpart)) for g in gens
    )


def brute_length(V: MonomialModule, U: MonomialModule, xdeg: int | None = None,
                 cap: int = 96) -> int:
    """Count U \\ V by enumeration, growing the bound until the outermost
    shell is empty (which certifies exhaustion)."""
    gen_deg = max((g.xdegree for g in U.gens + V.gens), default=0)
    xdeg = max(xdeg or 0, gen_deg + 2)
    tparts = {g.tpart for g in U.gens}
    while True:
        if xdeg > cap:
            raise AssertionError("no enumeration bound certifies exhaustion")
        count = 0
        shell = 0
        for tpart in tparts:
            for x in iproduct(*[range(xdeg + 1)] * U.ctx.d):
                if sum(x) > xdeg:
                    continue
                m = BiMonomial(tuple(x), tpart)
                if brute_member_slice(m, U.gens) and not brute_member_slice(m, V.gens):
                    if sum(x) == xdeg:
                        shell += 1
                    else:
                        count += 1
        if shell == 0:
            return count
        xdeg *= 2


def random_ring(rng: random.Random, max_vars: int = 4) -> RingContext:
    d = rng.randint(1, max_vars - 1)
    p = rng.randint(1, max_vars - d)
    return RingContext(d, p)


def random_slice_pair(rng: random.Random, max_exp: int = 4):
    """A random finite-length inclusion V <= U of slice modules."""
    ctx = random_ring(rng)
    k = rng.randint(0, 2)
    tparts = []
    for t in iproduct(*[range(k + 1)] * ctx.p):
        if sum(t) == k:
            tparts.append(t)
    gens = []
    for _ in range(rng.randint(1, 4)):
        x = tuple(rng.randint(0, max_exp) for _ in range(ctx.d))
        gens.append(BiMonomial(x, rng.choice(tparts)))
    U = MonomialModule.slice(ctx, k, gens)
    # multiplying by an x-primary ideal keeps the quotient finite
    w_gens = [ctx.x_monomial(tuple(
        rng.randint(1, max_exp) if i == j else 0 for i in range(ctx.d)))
        for j in range(ctx.d)]
    if rng.random() < 0.5:
        w_gens.append(ctx.x_monomial(tuple(rng.randint(0, 2) for _ in range(ctx.d))))
    W = MonomialModule.ideal(ctx, w_gens)
    V = W.product(U)
    return V, U


def random_ideal(rng: random.Random, ctx: RingContext, max_exp: int = 3,
                 max_gens: int = 4) -> MonomialModule:
    gens = []
    for _ in range(rng.randint(0, max_gens)):
        combined = tuple(rng.randint(0, max_exp) for _ in range(ctx.d + ctx.p))
        gens.append(BiMonomial(combined[: ctx.d], combined[ctx.d:]))
    return MonomialModule.ideal(ctx, gens)
