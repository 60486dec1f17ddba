"""Timed-automaton front end: guards, clock regions, and the region game.

A clock valuation is abstracted by the integer part of each clock clipped at
the largest constant it is compared against, a flag per clock for a zero
fractional part, and the ordering of the nonzero fractional parts. Two
valuations with the same abstraction satisfy the same guards and stay
equivalent under time elapse and resets, so the abstraction is a
time-abstract bisimulation that respects owners and goals. The region game
is the finite quotient of the (uncountable) timed game it induces; solving
on it is equivalent to solving on the timed game itself.
"""

from __future__ import annotations

import operator
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import DeadlockedRegionError, InputError, SizeCapError
from .game import FiniteGame

COMPARATORS = ("le", "lt", "eq", "gt", "ge")

_OP_FN = {
    "le": operator.le,
    "lt": operator.lt,
    "eq": operator.eq,
    "gt": operator.gt,
    "ge": operator.ge,
}


@dataclass(frozen=True)
class GuardAtom:
    """A single comparison ``clock <op> const`` with a natural constant."""

    clock: int
    op: str
    const: int

    def __post_init__(self) -> None:
        if self.op not in COMPARATORS:
            raise ValueError(f"unknown comparator {self.op!r}")
        if not isinstance(self.const, int) or isinstance(self.const, bool) or self.const < 0:
            raise ValueError(f"guard constant must be a natural number, got {self.const!r}")
        if self.clock < 0:
            raise ValueError("clock index must be nonnegative")


Guard = tuple[GuardAtom, ...]


@dataclass(frozen=True)
class Transition:
    source: int
    letter: str
    guard: Guard
    resets: frozenset[int]
    target: int


@dataclass(frozen=True)
class PPTA:
    """Timed automaton whose locations are partitioned among players.

    Each player optionally carries a set of goal locations; the induced
    timed game is then a reachability game.
    """

    n_players: int
    alphabet: tuple[str, ...]
    clock_names: tuple[str, ...]
    location_names: tuple[str, ...]
    owners: tuple[int, ...]
    transitions: tuple[Transition, ...]
    goals: tuple[frozenset[int], ...]
    initial: int

    @property
    def n_clocks(self) -> int:
        return len(self.clock_names)

    @property
    def n_locations(self) -> int:
        return len(self.location_names)

    @cached_property
    def maxima(self) -> tuple[int, ...]:
        """Per clock, the largest guard constant it is compared against (0 if none)."""
        out = [0] * self.n_clocks
        for t in self.transitions:
            for atom in t.guard:
                out[atom.clock] = max(out[atom.clock], atom.const)
        return tuple(out)

    @cached_property
    def transitions_from(self) -> tuple[tuple[Transition, ...], ...]:
        buckets: list[list[Transition]] = [[] for _ in range(self.n_locations)]
        for t in self.transitions:
            buckets[t.source].append(t)
        return tuple(tuple(b) for b in buckets)


def validate_ppta(a: PPTA) -> list[str]:
    """Report structural violations; an empty report means a is well formed."""
    problems: list[str] = []
    nl, nc, n = a.n_locations, a.n_clocks, a.n_players
    if nl == 0:
        return ["automaton has no locations"]
    if len(a.owners) != nl:
        problems.append(f"owner map covers {len(a.owners)} of {nl} locations")
    else:
        for loc, player in enumerate(a.owners):
            if not 0 <= player < n:
                problems.append(
                    f"location '{a.location_names[loc]}': owner {player} out of range"
                )
    if len(a.goals) != n:
        problems.append(f"expected {n} goal sets, got {len(a.goals)}")
    for i, gs in enumerate(a.goals[:n]):
        for loc in sorted(gs):
            if not 0 <= loc < nl:
                problems.append(f"goals[{i}] contains unknown location id {loc}")
    if not 0 <= a.initial < nl:
        problems.append(f"initial location id {a.initial} out of range")
    for k, t in enumerate(a.transitions):
        if not 0 <= t.source < nl or not 0 <= t.target < nl:
            problems.append(f"transition {k} references an unknown location id")
        if t.letter not in a.alphabet:
            problems.append(f"transition {k}: letter '{t.letter}' not in the alphabet")
        for atom in t.guard:
            if not 0 <= atom.clock < nc:
                problems.append(f"transition {k}: guard uses unknown clock id {atom.clock}")
        for c in sorted(t.resets):
            if not 0 <= c < nc:
                problems.append(f"transition {k}: reset uses unknown clock id {c}")
    return problems


ClockValuation = tuple[Fraction, ...]


def _as_valuation(values: Sequence) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(x) for x in values)
    for c, v in enumerate(vals):
        if v < 0:
            raise ValueError(f"clock {c}: value must be nonnegative, got {v}")
    return vals


@dataclass(frozen=True)
class ClockRegion:
    """Canonical cell of the clock abstraction.

    ``clipped[c]`` is None when clock c exceeds its maximum, otherwise an
    (integer part, fraction-is-zero) pair; ``frac_order`` groups the clocks
    with equal nonzero fractional parts, smallest fraction first. Regions
    are value objects: equality of canonical forms is region equivalence.
    """

    maxima: tuple[int, ...]
    clipped: tuple[tuple[int, bool] | None, ...]
    frac_order: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.clipped) != len(self.maxima):
            raise ValueError("clipped entries must match the clock count")
        fractional = set()
        for c, info in enumerate(self.clipped):
            if info is None:
                continue
            ip, zero = info
            if not 0 <= ip <= self.maxima[c]:
                raise ValueError(f"clock {c}: integer part {ip} outside [0, {self.maxima[c]}]")
            if ip == self.maxima[c] and not zero:
                raise ValueError(f"clock {c}: values above the maximum must be Beyond")
            if not zero:
                fractional.add(c)
        listed = [c for group in self.frac_order for c in group]
        if any(not group for group in self.frac_order):
            raise ValueError("fractional order must not contain empty groups")
        if len(listed) != len(set(listed)) or set(listed) != fractional:
            raise ValueError("fractional order must list each nonzero-fraction clock once")

    @classmethod
    def zero(cls, maxima: Sequence[int]) -> "ClockRegion":
        maxima = tuple(maxima)
        return cls(maxima, tuple((0, True) for _ in maxima), ())

    @property
    def all_beyond(self) -> bool:
        return all(info is None for info in self.clipped)


def region_of(valuation: Sequence, maxima: Sequence[int]) -> ClockRegion:
    """The canonical region containing the valuation."""
    maxima = tuple(maxima)
    vals = _as_valuation(valuation)
    if len(vals) != len(maxima):
        raise ValueError("valuation entries must match the clock count")
    clipped: list[tuple[int, bool] | None] = []
    by_fraction: dict[Fraction, list[int]] = {}
    for c, v in enumerate(vals):
        if v > maxima[c]:
            clipped.append(None)
            continue
        ip = v.numerator // v.denominator
        frac = v - ip
        clipped.append((ip, frac == 0))
        if frac != 0:
            by_fraction.setdefault(frac, []).append(c)
    order = tuple(frozenset(by_fraction[f]) for f in sorted(by_fraction))
    return ClockRegion(maxima, tuple(clipped), order)


def region_equiv(nu1: Sequence, nu2: Sequence, maxima: Sequence[int]) -> bool:
    """True iff the two valuations lie in the same region."""
    return region_of(nu1, maxima) == region_of(nu2, maxima)


def _immediate_time_successor(r: ClockRegion) -> ClockRegion | None:
    """The next region hit when time elapses, or None from the absorbing one."""
    live = [c for c, info in enumerate(r.clipped) if info is not None]
    if not live:
        return None
    clipped = list(r.clipped)
    at_integer = [c for c in live if r.clipped[c][1]]  # type: ignore[index]
    if at_integer:
        # any positive delay moves these off the integer; those at the
        # maximum cross into Beyond, the rest open a new smallest-fraction group
        opening = []
        for c in at_integer:
            ip = r.clipped[c][0]  # type: ignore[index]
            if ip == r.maxima[c]:
                clipped[c] = None
            else:
                clipped[c] = (ip, False)
                opening.append(c)
        order = ((frozenset(opening),) + r.frac_order) if opening else r.frac_order
        return ClockRegion(r.maxima, tuple(clipped), order)
    # all fractions nonzero: the largest group is first to reach the next integer
    wrapping = r.frac_order[-1]
    for c in wrapping:
        clipped[c] = (r.clipped[c][0] + 1, True)  # type: ignore[index]
    return ClockRegion(r.maxima, tuple(clipped), r.frac_order[:-1])


def time_successors(r: ClockRegion) -> tuple[ClockRegion, ...]:
    """The chain of regions reached by letting time elapse.

    Starts at r itself (delay 0 is allowed) and ends at the absorbing
    region where every clock has passed its maximum.
    """
    chain = [r]
    while True:
        nxt = _immediate_time_successor(chain[-1])
        if nxt is None:
            return tuple(chain)
        chain.append(nxt)


def _atom_sat_region(atom: GuardAtom, r: ClockRegion) -> bool:
    if not 0 <= atom.clock < len(r.clipped):
        raise ValueError(f"guard uses unknown clock id {atom.clock}")
    if atom.const > r.maxima[atom.clock]:
        raise ValueError(
            f"guard constant {atom.const} exceeds the maximum {r.maxima[atom.clock]} "
            f"of clock {atom.clock}; regions do not refine such constraints"
        )
    info = r.clipped[atom.clock]
    if info is None:
        return atom.op in ("gt", "ge")
    ip, zero = info
    k = atom.const
    if atom.op == "lt":
        return ip < k
    if atom.op == "le":
        return ip < k or (ip == k and zero)
    if atom.op == "eq":
        return ip == k and zero
    if atom.op == "ge":
        return ip >= k
    return ip > k or (ip == k and not zero)


def guard_sat_region(guard: Guard, r: ClockRegion) -> bool:
    """True iff every valuation in r satisfies the guard.

    Well defined because regions refine all comparisons against constants
    up to the per-clock maxima.
    """
    return all(_atom_sat_region(atom, r) for atom in guard)


def guard_sat_valuation(guard: Guard, valuation: Sequence) -> bool:
    """Concrete guard satisfaction, used to cross-check the region version."""
    vals = _as_valuation(valuation)
    return all(_OP_FN[atom.op](vals[atom.clock], atom.const) for atom in guard)


def reset_region(r: ClockRegion, resets: Iterable[int]) -> ClockRegion:
    """Zero the given clocks and drop them from the fractional order."""
    rs = frozenset(resets)
    for c in rs:
        if not 0 <= c < len(r.clipped):
            raise ValueError(f"reset uses unknown clock id {c}")
    if not rs:
        return r
    clipped = list(r.clipped)
    for c in rs:
        clipped[c] = (0, True)
    order = tuple(group - rs for group in r.frac_order if group - rs)
    return ClockRegion(r.maxima, tuple(clipped), order)


def reset_valuation(valuation: Sequence, resets: Iterable[int]) -> tuple[Fraction, ...]:
    vals = list(_as_valuation(valuation))
    for c in resets:
        vals[c] = Fraction(0)
    return tuple(vals)


def region_representative(r: ClockRegion) -> tuple[Fraction, ...]:
    """A concrete valuation inside r.

    Fractional parts are assigned as distinct multiples of 1/(k+1) for k
    clocks, respecting the fractional order; clocks past their maximum get
    the maximum plus one.
    """
    k = len(r.maxima)
    frac_of: dict[int, Fraction] = {}
    for j, group in enumerate(r.frac_order):
        for c in group:
            frac_of[c] = Fraction(j + 1, k + 1)
    out = []
    for c in range(k):
        info = r.clipped[c]
        if info is None:
            out.append(Fraction(r.maxima[c] + 1))
        else:
            ip, zero = info
            out.append(Fraction(ip) if zero else ip + frac_of[c])
    return tuple(out)


def _ordered_partitions(items: frozenset[int]) -> Iterator[tuple[frozenset[int], ...]]:
    if not items:
        yield ()
        return
    elems = sorted(items)
    m = len(elems)
    for pick in range(1, 1 << m):
        first = frozenset(elems[i] for i in range(m) if (pick >> i) & 1)
        for tail in _ordered_partitions(items - first):
            yield (first,) + tail


def all_regions(maxima: Sequence[int]) -> list[ClockRegion]:
    """Every canonical region for the given per-clock maxima."""
    maxima = tuple(maxima)
    options: list[list[tuple[int, bool] | None]] = []
    for x in maxima:
        opts: list[tuple[int, bool] | None] = [None]
        opts.extend((ip, True) for ip in range(x + 1))
        opts.extend((ip, False) for ip in range(x))
        options.append(opts)
    regions = []
    for combo in product(*options):
        fractional = frozenset(
            c for c, info in enumerate(combo) if info is not None and not info[1]
        )
        for order in _ordered_partitions(fractional):
            regions.append(ClockRegion(maxima, tuple(combo), order))
    return regions


def describe_region(r: ClockRegion, clock_names: Sequence[str]) -> str:
    """Human-readable region name, e.g. ``c1=0;c2∈(0,1)``.

    When two or more clocks have nonzero fractions, the ordering of their
    fractional parts is appended (``c1<c2``, ties written with ``=``) since
    it distinguishes otherwise identical cells.
    """
    parts = []
    for c, info in enumerate(r.clipped):
        name = clock_names[c]
        if info is None:
            parts.append(f"{name}>{r.maxima[c]}")
        else:
            ip, zero = info
            parts.append(f"{name}={ip}" if zero else f"{name}∈({ip},{ip + 1})")
    if sum(len(group) for group in r.frac_order) >= 2:
        parts.append(
            "<".join(
                "=".join(clock_names[c] for c in sorted(group))
                for group in r.frac_order
            )
        )
    return ";".join(parts)


@dataclass(frozen=True)
class RegionGame:
    """Finite game over the reachable (location, region) pairs of a PPTA."""

    game: FiniteGame
    origin: tuple[tuple[int, ClockRegion], ...]


def build_region_game(a: PPTA, max_vertices: int | None = None) -> RegionGame:
    """Construct the reachable region game of a.

    From a pair (location, region), one edge exists per transition of the
    location and per time successor of the region satisfying the guard; the
    edge leads to the transition's target paired with the time successor
    after resets. A reachable pair with no edge at all blocks the arena and
    is reported as an error.
    """
    problems = validate_ppta(a)
    if problems:
        raise InputError(problems[0])
    start = (a.initial, ClockRegion.zero(a.maxima))
    order: dict[tuple[int, ClockRegion], int] = {start: 0}
    pairs: list[tuple[int, ClockRegion]] = [start]
    queue: deque[tuple[int, ClockRegion]] = deque([start])
    chains: dict[ClockRegion, tuple[ClockRegion, ...]] = {}
    edges: list[tuple[int, str, int]] = []
    seen_edges: set[tuple[int, str, int]] = set()
    while queue:
        loc, reg = pair = queue.popleft()
        xi = order[pair]
        chain = chains.get(reg)
        if chain is None:
            chain = chains[reg] = time_successors(reg)
        blocked = True
        for elapsed in chain:
            for t in a.transitions_from[loc]:
                if not guard_sat_region(t.guard, elapsed):
                    continue
                succ = (t.target, reset_region(elapsed, t.resets))
                xj = order.get(succ)
                if xj is None:
                    xj = len(order)
                    if max_vertices is not None and xj >= max_vertices:
                        raise SizeCapError(
                            f"region game would exceed the cap of {max_vertices} vertices"
                        )
                    order[succ] = xj
                    pairs.append(succ)
                    queue.append(succ)
                triple = (xi, t.letter, xj)
                if triple not in seen_edges:
                    seen_edges.add(triple)
                    edges.append(triple)
                blocked = False
        if blocked:
            raise DeadlockedRegionError(
                a.location_names[loc], describe_region(reg, a.clock_names)
            )
    names = tuple(
        f"{a.location_names[loc]}|{describe_region(reg, a.clock_names)}"
        if a.n_clocks
        else a.location_names[loc]
        for loc, reg in pairs
    )
    owners = tuple(a.owners[loc] for loc, _ in pairs)
    targets = tuple(
        frozenset(x for x, (loc, _) in enumerate(pairs) if loc in a.goals[i])
        for i in range(a.n_players)
    )
    game = FiniteGame(
        n_players=a.n_players,
        alphabet=a.alphabet,
        vertex_names=names,
        edges=tuple(edges),
        owner=owners,
        targets=targets,
        initial=0,
    )
    return RegionGame(game=game, origin=tuple(pairs))
