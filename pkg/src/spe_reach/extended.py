"""Extended games: vertices remember which players already reached a target.

An extended vertex pairs a base vertex with the set of players whose target
set has been visited on the way there. That set only grows along edges, so
every suffix of an infinite play has the same gain profile as the play
itself; the labeling fixpoint relies on this. Only the fragment reachable
from the initial vertex is materialized, which is usually far smaller than
the full product with all player subsets.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .errors import InputError, SizeCapError
from .game import FiniteGame, LassoPlay, require_valid_lasso, validate_game


def _set_name(mask: int) -> str:
    players = [str(i) for i in range(mask.bit_length()) if (mask >> i) & 1]
    return "{" + ",".join(players) + "}"


@dataclass(frozen=True)
class ExtendedGame:
    """Reachable satisfied-set product of a finite reachability game.

    ``origin[x]`` gives the (base vertex, satisfied players mask) pair behind
    extended vertex x. An extended vertex belongs to player i's target set
    exactly when i is in its satisfied mask.
    """

    base: FiniteGame
    game: FiniteGame
    origin: tuple[tuple[int, int], ...]

    @property
    def x0(self) -> int:
        return self.game.initial

    @cached_property
    def satisfied(self) -> tuple[int, ...]:
        return tuple(mask for _, mask in self.origin)

    @cached_property
    def base_vertex(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.origin)

    @cached_property
    def index(self) -> dict[tuple[int, int], int]:
        return {pair: i for i, pair in enumerate(self.origin)}

    def project(self, rho: LassoPlay) -> LassoPlay:
        """Map a lasso over extended vertices back onto base vertices."""
        bv = self.base_vertex
        return LassoPlay(
            tuple(bv[v] for v in rho.prefix), tuple(bv[v] for v in rho.cycle)
        )


def build_extended_game(g: FiniteGame, max_vertices: int | None = None) -> ExtendedGame:
    """Construct the reachable extended game of g.

    Edges mirror the base edges while accumulating, per target vertex hit,
    the players that are now satisfied; the initial satisfied set already
    accounts for the initial vertex. Plays from the base initial vertex and
    plays from the extended initial vertex correspond one to one.
    """
    problems = validate_game(g)
    if problems:
        raise InputError("cannot extend ill-formed game: " + problems[0])
    tm = g.target_mask
    start = (g.initial, tm[g.initial])
    order: dict[tuple[int, int], int] = {start: 0}
    pairs: list[tuple[int, int]] = [start]
    queue: deque[tuple[int, int]] = deque([start])
    edges: list[tuple[int, str, int]] = []
    while queue:
        v, sat = pair = queue.popleft()
        xi = order[pair]
        for letter, dst in g.out_edges[v]:
            succ = (dst, sat | tm[dst])
            xj = order.get(succ)
            if xj is None:
                xj = len(order)
                if max_vertices is not None and xj >= max_vertices:
                    raise SizeCapError(
                        f"extended game would exceed the cap of {max_vertices} vertices"
                    )
                order[succ] = xj
                pairs.append(succ)
                queue.append(succ)
            edges.append((xi, letter, xj))
    names = tuple(f"{g.vertex_names[v]}|{_set_name(sat)}" for v, sat in pairs)
    owners = tuple(g.owner[v] for v, _ in pairs)
    target_sets = tuple(
        frozenset(x for x, (_, sat) in enumerate(pairs) if (sat >> i) & 1)
        for i in range(g.n_players)
    )
    ext = FiniteGame(
        n_players=g.n_players,
        alphabet=g.alphabet,
        vertex_names=names,
        edges=tuple(edges),
        owner=owners,
        targets=target_sets,
        initial=0,
    )
    return ExtendedGame(base=g, game=ext, origin=tuple(pairs))


def lift_lasso(xg: ExtendedGame, rho: LassoPlay) -> LassoPlay:
    """Lift a base-game lasso starting at the initial vertex into xg.

    The satisfied sets grow monotonically, so the extended trace of the
    infinite play becomes periodic once they stabilize; the result may
    unroll the base cycle into the prefix up to (player count + 1) times
    before the extended cycle closes. The gain profile is preserved.
    """
    g = xg.base
    require_valid_lasso(g, rho)
    if rho.start != g.initial:
        raise InputError(
            f"lasso starts at '{g.vertex_names[rho.start]}', not the initial vertex"
        )
    tm = g.target_mask
    index = xg.index
    sat = xg.satisfied

    def step(x: int, dst: int) -> int:
        return index[(dst, sat[x] | tm[dst])]

    trace = [xg.x0]
    for v in rho.prefix[1:]:
        trace.append(step(trace[-1], v))
    if rho.prefix:
        trace.append(step(trace[-1], rho.cycle[0]))
    # walk the repeated cycle until an (extended vertex, cycle offset) pair
    # recurs; from there the extended trace repeats with the same period
    length = len(rho.cycle)
    seen: dict[tuple[int, int], int] = {}
    pos = len(trace) - 1
    offset = 0
    while True:
        key = (trace[pos], offset)
        j = seen.get(key)
        if j is not None:
            return LassoPlay(tuple(trace[:j]), tuple(trace[j:pos]))
        seen[key] = pos
        offset = (offset + 1) % length
        trace.append(step(trace[pos], rho.cycle[offset]))
        pos += 1
