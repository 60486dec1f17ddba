"""Labeling fixpoint and the constrained-existence decision.

The solver labels every extended vertex with 0 or 1. A 1 on a vertex owned
by player i means: any equilibrium play passing through that vertex must let
player i win from there on. The labels start at all zeros and are raised
step by step; a step raises the label of v to 1 when every choice available
at v leads somewhere from which all plays consistent with the current labels
make the owner win. The fixpoint of this iteration characterizes exactly the
plays that equilibria can produce: a play is an equilibrium outcome iff it is
consistent with the fixpoint labeling. Deciding constrained existence then
reduces to searching for one consistent lasso per admissible gain profile.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache

from .errors import InputError
from .extended import ExtendedGame, build_extended_game
from .game import ConstraintProfile, FiniteGame, GainProfile, LassoPlay, require_valid_lasso, validate_game

Labeling = tuple[int, ...]


def initial_labeling(xg: ExtendedGame) -> Labeling:
    """The all-zero labeling the iteration starts from."""
    return (0,) * xg.game.n_vertices


def is_consistent(xg: ExtendedGame, lam: Labeling, rho: LassoPlay) -> bool:
    """Check the per-position label constraints along a lasso.

    At every position owned by player i, the gain of i on the remaining
    suffix must be at least the label of that vertex. Cycle positions all
    see the same suffix gains (every cycle suffix visits the whole cycle),
    so they are checked once.
    """
    g = xg.game
    if len(lam) != g.n_vertices:
        raise ValueError("labeling must be total over the extended vertices")
    require_valid_lasso(g, rho)
    tm = g.target_mask
    owner = g.owner
    cycle_mask = 0
    for v in rho.cycle:
        cycle_mask |= tm[v]
    for v in rho.cycle:
        if lam[v] and not (cycle_mask >> owner[v]) & 1:
            return False
    seen = cycle_mask
    for v in reversed(rho.prefix):
        seen |= tm[v]
        if lam[v] and not (seen >> owner[v]) & 1:
            return False
    return True


def _surviving(xg: ExtendedGame, lam: Labeling, win_mask: int) -> list[bool]:
    """Vertices usable by a consistent play whose losers are outside win_mask.

    Deletes vertices where a supposed loser is already satisfied, vertices
    owned by a loser but labeled 1, and then iteratively everything left
    without a successor, so any surviving vertex can continue forever.
    """
    g = xg.game
    n = g.n_vertices
    lose_mask = ((1 << g.n_players) - 1) ^ win_mask
    sat = xg.satisfied
    alive = [
        not (sat[v] & lose_mask) and not (lam[v] and (lose_mask >> g.owner[v]) & 1)
        for v in range(n)
    ]
    succ = g.successors
    out = [0] * n
    dead: deque[int] = deque()
    for v in range(n):
        if not alive[v]:
            continue
        out[v] = sum(1 for w in succ[v] if alive[w])
        if out[v] == 0:
            dead.append(v)
    pred = g.predecessors
    while dead:
        v = dead.popleft()
        alive[v] = False
        for u in pred[v]:
            if alive[u]:
                out[u] -= 1
                if out[u] == 0:
                    dead.append(u)
    return alive


def exists_consistent_play(
    xg: ExtendedGame, lam: Labeling, start: int, p: GainProfile
) -> LassoPlay | None:
    """Find a lam-consistent lasso from start with gain profile exactly p.

    Works on the pruned graph of :func:`_surviving`: winners need no check
    beyond reaching a vertex whose satisfied set equals the winner set,
    because suffix gains of a winning player hold at every position; for
    losers the pruning enforces both gain 0 and the label constraint. The
    witness is deterministic: shortest path to the first such vertex, then
    the first cycle along least-index successors.
    """
    g = xg.game
    n = g.n_vertices
    if not 0 <= start < n:
        raise ValueError(f"start vertex {start} is not in the extended game")
    if len(lam) != n:
        raise ValueError("labeling must be total over the extended vertices")
    if p.n != g.n_players:
        raise ValueError("gain profile does not match the player count")
    alive = _surviving(xg, lam, p.mask)
    if not alive[start]:
        return None
    sat = xg.satisfied
    succ = g.successors
    goal: int | None = start if sat[start] == p.mask else None
    parent: dict[int, int | None] = {start: None}
    if goal is None:
        queue: deque[int] = deque([start])
        while queue and goal is None:
            v = queue.popleft()
            for w in succ[v]:
                if alive[w] and w not in parent:
                    parent[w] = v
                    if sat[w] == p.mask:
                        goal = w
                        break
                    queue.append(w)
    if goal is None:
        return None
    path = [goal]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])  # type: ignore[arg-type]
    path.reverse()
    walk = [goal]
    position = {goal: 0}
    while True:
        cur = walk[-1]
        nxt = next(w for w in succ[cur] if alive[w])
        j = position.get(nxt)
        if j is not None:
            return LassoPlay(tuple(path[:-1] + walk[:j]), tuple(walk[j:]))
        position[nxt] = len(walk)
        walk.append(nxt)


def lambda_step(xg: ExtendedGame, lam: Labeling) -> Labeling:
    """One labeling iteration.

    The new label of a vertex owned by player i is the maximum over its
    successors of the minimal gain of i among all lam-consistent plays from
    that successor. The minimum is 0 iff a consistent play with gain profile
    p, for some p with bit i clear, starts there; when no consistent play
    exists at all the minimum over the empty set is taken as 1 (this never
    happens at the fixpoint, since an equilibrium always exists).
    """
    g = xg.game
    n = g.n_vertices
    sat = xg.satisfied
    succ = g.successors
    pred = g.predecessors
    sources_for: dict[int, list[bool]] = {}

    def sources(mask: int) -> list[bool]:
        # vertices from which some lam-consistent play with gain exactly mask starts
        res = sources_for.get(mask)
        if res is None:
            alive = _surviving(xg, lam, mask)
            res = [False] * n
            queue: deque[int] = deque()
            for v in range(n):
                if alive[v] and sat[v] == mask:
                    res[v] = True
                    queue.append(v)
            while queue:
                v = queue.popleft()
                for u in pred[v]:
                    if alive[u] and not res[u]:
                        res[u] = True
                        queue.append(u)
            sources_for[mask] = res
        return res

    new = []
    for v in range(n):
        i = g.owner[v]
        value = 0
        for w in succ[v]:
            minimum = 1
            for mask in range((1 << g.n_players)):
                if (mask >> i) & 1:
                    continue
                if sources(mask)[w]:
                    minimum = 0
                    break
            if minimum:
                value = 1
                break
        new.append(value)
    return tuple(new)


@lru_cache(maxsize=256)
def compute_lambda_star(xg: ExtendedGame) -> tuple[Labeling, int]:
    """Iterate lambda_step from all zeros until two consecutive labelings agree.

    Returns the fixpoint and the first index k with step(lam_k) == lam_k;
    monotonicity bounds k by the number of extended vertices.
    """
    lam = initial_labeling(xg)
    k = 0
    while True:
        nxt = lambda_step(xg, lam)
        if nxt == lam:
            return lam, k
        lam = nxt
        k += 1


@dataclass(frozen=True)
class Witness:
    """A lasso realizing the decided gain profile, in both coordinate systems."""

    gain: GainProfile
    extended: LassoPlay
    base: LassoPlay


@dataclass(frozen=True)
class Decision:
    """Outcome of the constrained-existence decision.

    On a yes answer the witness is present, its gain lies within the
    constraint bounds, and the extended lasso is consistent with the
    fixpoint labeling. The labeling, its iteration count, and the extended
    game are kept for diagnostics.
    """

    answer: bool
    witness: Witness | None
    lambda_star: Labeling
    k_star: int
    extended_game: ExtendedGame


def decide_constrained_existence(
    g: FiniteGame, c: ConstraintProfile, *, max_ext_vertices: int | None = None
) -> Decision:
    """Decide whether an equilibrium with gain between the bounds exists.

    Builds the extended game, computes the fixpoint labeling, and scans the
    admissible gain profiles in ascending numeric order (player 0 at the
    least significant bit) for a consistent lasso from the initial vertex;
    the first hit is returned as the witness.
    """
    problems = validate_game(g)
    if problems:
        raise InputError("; ".join(problems))
    if c.n != g.n_players:
        raise InputError(
            f"constraint covers {c.n} players but the game has {g.n_players}"
        )
    xg = build_extended_game(g, max_vertices=max_ext_vertices)
    lam, k = compute_lambda_star(xg)
    for mask in c.admissible_masks():
        profile = GainProfile(mask, g.n_players)
        found = exists_consistent_play(xg, lam, xg.x0, profile)
        if found is not None:
            witness = Witness(profile, found, xg.project(found))
            return Decision(True, witness, lam, k, xg)
    return Decision(False, None, lam, k, xg)
