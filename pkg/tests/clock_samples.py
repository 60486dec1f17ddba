"""Concrete clock-valuation helpers for exercising the region abstraction."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from spe_reach.timed import ClockRegion, region_of


def random_valuation(
    rng: random.Random, n_clocks: int, high: int = 4, denominator: int = 12
) -> tuple[Fraction, ...]:
    return tuple(
        Fraction(rng.randint(0, high * denominator), denominator) for _ in range(n_clocks)
    )


def random_member(r: ClockRegion, rng: random.Random) -> tuple[Fraction, ...]:
    """A random concrete valuation inside the region."""
    denom = 97
    numerators = sorted(rng.sample(range(1, denom), len(r.frac_order)))
    frac_of = {}
    for j, group in enumerate(r.frac_order):
        for c in group:
            frac_of[c] = Fraction(numerators[j], denom)
    out = []
    for c, info in enumerate(r.clipped):
        if info is None:
            out.append(r.maxima[c] + rng.randint(1, 3) + Fraction(rng.randint(0, 4), 5))
        else:
            ip, zero = info
            out.append(Fraction(ip) if zero else ip + frac_of[c])
    return tuple(out)


def _fractional(v: Fraction) -> Fraction:
    return v - (v.numerator // v.denominator)


def immediate_delay(nu: Sequence[Fraction], maxima: Sequence[int]) -> Fraction:
    """A delay moving nu exactly into the next region of its time chain."""
    r = region_of(nu, maxima)
    live = [c for c, info in enumerate(r.clipped) if info is not None]
    if not live:
        return Fraction(1)
    fracs = [_fractional(nu[c]) for c in live]
    if any(f == 0 for f in fracs):
        # open the zero fractions without letting anything cross a boundary
        return min(1 - f for f in fracs) / 2
    return 1 - max(fracs)


def delay_reaching(
    nu: Sequence[Fraction], target: ClockRegion, maxima: Sequence[int]
) -> Fraction:
    """A delay d with region_of(nu + d) == target; target must lie on nu's time chain."""
    total = Fraction(0)
    current = tuple(nu)
    limit = sum(2 * x + 2 for x in maxima) * (len(maxima) + 1) + 4
    for _ in range(limit):
        if region_of(current, maxima) == target:
            return total
        d = immediate_delay(current, maxima)
        current = tuple(v + d for v in current)
        total += d
    raise AssertionError("target region is not on the time-successor chain")
