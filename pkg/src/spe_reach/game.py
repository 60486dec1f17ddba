"""Finite turn-based games: arenas, lasso plays, gain profiles, validation.

Vertices and players are dense integer indices; display names live in a side
table on the game. Edge letters are part of the data model (they matter for
synchronous products) but play semantics ignore them: a play is a sequence of
vertices, and gains depend only on the vertices visited. All types are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InputError, InvalidLassoError


@dataclass(frozen=True)
class GainProfile:
    """One win/lose bit per player, packed into an integer mask.

    Bit i is 1 when player i wins. Profiles over the same player count are
    partially ordered pointwise via ``<=``.
    """

    mask: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("player count must be nonnegative")
        if not 0 <= self.mask < (1 << self.n):
            raise ValueError(f"mask {self.mask} out of range for {self.n} players")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "GainProfile":
        mask = 0
        count = 0
        for i, b in enumerate(bits):
            if b not in (0, 1):
                raise ValueError(f"gain bit must be 0 or 1, got {b!r}")
            mask |= b << i
            count = i + 1
        return cls(mask, count)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.mask >> i) & 1 for i in range(self.n))

    def wins(self, player: int) -> bool:
        if not 0 <= player < self.n:
            raise ValueError(f"player {player} out of range")
        return bool((self.mask >> player) & 1)

    def __le__(self, other: "GainProfile") -> bool:
        if self.n != other.n:
            raise ValueError("cannot compare profiles over different player counts")
        return self.mask | other.mask == other.mask

    def __str__(self) -> str:
        return "(" + ",".join(str(b) for b in self.bits) + ")"


@dataclass(frozen=True)
class ConstraintProfile:
    """Lower and upper gain bounds for the constrained existence problem."""

    lower: GainProfile
    upper: GainProfile

    def __post_init__(self) -> None:
        if self.lower.n != self.upper.n:
            raise ValueError("constraint bounds must cover the same players")
        if not self.lower <= self.upper:
            raise ValueError("constraint lower bound exceeds upper bound")

    @property
    def n(self) -> int:
        return self.lower.n

    @classmethod
    def from_words(cls, words: Sequence[str]) -> "ConstraintProfile":
        """Build bounds from one of ``win``/``lose``/``any`` per player."""
        lo = up = 0
        for i, word in enumerate(words):
            if word == "win":
                lo |= 1 << i
                up |= 1 << i
            elif word == "any":
                up |= 1 << i
            elif word != "lose":
                raise ValueError(f"player {i}: expected win/lose/any, got {word!r}")
        n = len(words)
        return cls(GainProfile(lo, n), GainProfile(up, n))

    def admits(self, p: GainProfile) -> bool:
        return self.lower <= p and p <= self.upper

    def admissible_masks(self) -> Iterator[int]:
        """Masks m with lower <= m <= upper, ascending, player 0 at bit 0."""
        lo, up = self.lower.mask, self.upper.mask
        for m in range(1 << self.n):
            if lo | m == m and m | up == up:
                yield m


@dataclass(frozen=True)
class FiniteGame:
    """Explicit turn-based arena with per-player reachability targets.

    Every vertex is owned by exactly one player, who chooses the outgoing
    edge whenever a play is there. ``targets[i]`` is the vertex set player i
    wants to visit. A well-formed game is non-blocking: every vertex has at
    least one outgoing edge (see :func:`validate_game`).
    """

    n_players: int
    alphabet: tuple[str, ...]
    vertex_names: tuple[str, ...]
    edges: tuple[tuple[int, str, int], ...]
    owner: tuple[int, ...]
    targets: tuple[frozenset[int], ...]
    initial: int

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_names)

    @cached_property
    def successors(self) -> tuple[tuple[int, ...], ...]:
        """Per-vertex successors with letters collapsed, ascending order."""
        out: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for src, _, dst in self.edges:
            out[src].add(dst)
        return tuple(tuple(sorted(s)) for s in out)

    @cached_property
    def predecessors(self) -> tuple[tuple[int, ...], ...]:
        inc: list[set[int]] = [set() for _ in range(self.n_vertices)]
        for src, _, dst in self.edges:
            inc[dst].add(src)
        return tuple(tuple(sorted(s)) for s in inc)

    @cached_property
    def out_edges(self) -> tuple[tuple[tuple[str, int], ...], ...]:
        """Per-vertex (letter, target) pairs in declaration order, deduplicated."""
        out: list[list[tuple[str, int]]] = [[] for _ in range(self.n_vertices)]
        seen: set[tuple[int, str, int]] = set()
        for edge in self.edges:
            if edge in seen:
                continue
            seen.add(edge)
            src, letter, dst = edge
            out[src].append((letter, dst))
        return tuple(tuple(pairs) for pairs in out)

    @cached_property
    def successor_pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset((src, dst) for src, _, dst in self.edges)

    @cached_property
    def target_mask(self) -> tuple[int, ...]:
        """Per vertex, the mask of players whose target set contains it."""
        masks = [0] * self.n_vertices
        for i, ts in enumerate(self.targets):
            for v in ts:
                masks[v] |= 1 << i
        return tuple(masks)

    @classmethod
    def build(
        cls,
        *,
        vertices: Sequence[str],
        edges: Iterable[tuple[str, str, str]],
        owner: Mapping[str, int],
        targets: Sequence[Iterable[str]],
        initial: str,
        n_players: int | None = None,
        alphabet: Sequence[str] | None = None,
    ) -> "FiniteGame":
        """Construct a game from vertex names, resolving all references.

        Raises :class:`InputError` on duplicate or unknown names, an owner
        outside the player range, or a letter outside the alphabet.
        """
        names = tuple(vertices)
        index: dict[str, int] = {}
        for i, name in enumerate(names):
            if name in index:
                raise InputError(f"duplicate vertex name '{name}'")
            index[name] = i
        n = len(targets) if n_players is None else n_players
        if len(targets) != n:
            raise InputError(f"expected {n} target sets, got {len(targets)}")

        def resolve(name: str, where: str) -> int:
            if name not in index:
                raise InputError(f"{where}: unknown vertex '{name}'")
            return index[name]

        edge_list: list[tuple[int, str, int]] = []
        seen: set[tuple[int, str, int]] = set()
        letters: list[str] = []
        for k, (src, letter, dst) in enumerate(edges):
            triple = (resolve(src, f"edge {k}"), letter, resolve(dst, f"edge {k}"))
            if triple not in seen:
                seen.add(triple)
                edge_list.append(triple)
            letters.append(letter)
        if alphabet is None:
            sigma = tuple(sorted(set(letters)))
        else:
            sigma = tuple(alphabet)
            for letter in letters:
                if letter not in sigma:
                    raise InputError(f"edge letter '{letter}' not in the alphabet")
        owners = []
        for name in names:
            if name not in owner:
                raise InputError(f"vertex '{name}' has no owner")
            player = owner[name]
            if not 0 <= player < n:
                raise InputError(f"vertex '{name}': owner {player} out of range for {n} players")
            owners.append(player)
        target_sets = tuple(
            frozenset(resolve(name, f"targets[{i}]") for name in ts)
            for i, ts in enumerate(targets)
        )
        return cls(
            n_players=n,
            alphabet=sigma,
            vertex_names=names,
            edges=tuple(edge_list),
            owner=tuple(owners),
            targets=target_sets,
            initial=resolve(initial, "initial"),
        )


def validate_game(g: FiniteGame) -> list[str]:
    """Report structural violations; an empty report means g is well formed.

    Checks totality and ranges of the owner map, targets, and edges, and the
    non-blocking condition (every vertex has an outgoing edge).
    """
    problems: list[str] = []
    n, nv = g.n_players, g.n_vertices
    if nv == 0:
        return ["game has no vertices"]
    if len(g.owner) != nv:
        problems.append(f"owner map covers {len(g.owner)} of {nv} vertices")
    else:
        for v, player in enumerate(g.owner):
            if not 0 <= player < n:
                problems.append(
                    f"vertex '{g.vertex_names[v]}': owner {player} out of range for {n} players"
                )
    if len(g.targets) != n:
        problems.append(f"expected {n} target sets, got {len(g.targets)}")
    for i, ts in enumerate(g.targets[:n]):
        for v in sorted(ts):
            if not 0 <= v < nv:
                problems.append(f"targets[{i}] contains unknown vertex id {v}")
    if not 0 <= g.initial < nv:
        problems.append(f"initial vertex id {g.initial} out of range")
    has_edge = [False] * nv
    for k, (src, letter, dst) in enumerate(g.edges):
        if not 0 <= src < nv or not 0 <= dst < nv:
            problems.append(f"edge {k} references an unknown vertex id")
            continue
        if letter not in g.alphabet:
            problems.append(f"edge {k}: letter '{letter}' not in the alphabet")
        has_edge[src] = True
    for v, ok in enumerate(has_edge):
        if not ok:
            problems.append(f"vertex '{g.vertex_names[v]}' has no outgoing edge (blocking)")
    return problems


@dataclass(frozen=True)
class LassoPlay:
    """Finite presentation of the infinite play prefix . cycle^omega.

    The prefix may be empty; the cycle is repeated forever, so the set of
    vertices the play visits is exactly prefix union cycle.
    """

    prefix: tuple[int, ...]
    cycle: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.cycle:
            raise ValueError("lasso cycle must be nonempty")

    @property
    def start(self) -> int:
        return self.prefix[0] if self.prefix else self.cycle[0]

    @property
    def visited(self) -> frozenset[int]:
        return frozenset(self.prefix) | frozenset(self.cycle)

    def steps(self) -> Iterator[tuple[int, int]]:
        """Consecutive vertex pairs, including the cycle's wrap-around."""
        seq = self.prefix + self.cycle
        for a, b in zip(seq, seq[1:]):
            yield a, b
        yield self.cycle[-1], self.cycle[0]


def lasso_violations(g: FiniteGame, rho: LassoPlay) -> list[str]:
    """Report the structural defects of rho as a play of g."""
    nv = g.n_vertices
    for v in rho.prefix + rho.cycle:
        if not 0 <= v < nv:
            return [f"lasso references unknown vertex id {v}"]
    pairs = g.successor_pairs
    return [
        f"no edge from '{g.vertex_names[a]}' to '{g.vertex_names[b]}'"
        for a, b in rho.steps()
        if (a, b) not in pairs
    ]


def require_valid_lasso(g: FiniteGame, rho: LassoPlay) -> None:
    problems = lasso_violations(g, rho)
    if problems:
        raise InvalidLassoError(problems[0])


def gain_of_lasso(g: FiniteGame, rho: LassoPlay) -> GainProfile:
    """Gain profile of the infinite play denoted by rho.

    Player i wins iff some vertex of the prefix or the cycle lies in
    ``targets[i]``.
    """
    require_valid_lasso(g, rho)
    tm = g.target_mask
    mask = 0
    for v in rho.visited:
        mask |= tm[v]
    return GainProfile(mask, g.n_players)
