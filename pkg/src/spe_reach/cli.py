"""Command-line driver.

Subcommands: ``solve`` for explicit finite games, ``solve-timed`` for timed
automata (built into their region game first), ``regions`` to emit a region
game as a finite-game file, and ``oracle-check`` to compare the solver with
the brute-force oracle. Exit codes are a stable contract: 0 means YES,
1 means NO (or, for oracle-check, a disagreement), 2 means bad input, and
3 means the configured size cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from .errors import InputError, SizeCapError
from .fixpoint import Decision, decide_constrained_existence
from .game import ConstraintProfile, FiniteGame
from .jsonio import dump_finite_game, load_finite_game, load_ppta
from .oracle import ORACLE_MAX_EXT_VERTICES, oracle_decide
from .timed import build_region_game

DEFAULT_MAX_EXT_VERTICES = 1 << 22
ENV_MAX_EXT_VERTICES = "SPE_REACH_MAX_EXT_VERTICES"


def _max_ext_vertices() -> int:
    raw = os.environ.get(ENV_MAX_EXT_VERTICES)
    if raw is None:
        return DEFAULT_MAX_EXT_VERTICES
    try:
        cap = int(raw)
    except ValueError as exc:
        raise InputError(f"{ENV_MAX_EXT_VERTICES} must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise InputError(f"{ENV_MAX_EXT_VERTICES} must be positive")
    return cap


def _add_constraint_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--player",
        action="append",
        default=[],
        metavar="I=WIN|LOSE|ANY",
        help="constrain player I (0-based) to win, lose, or any (default any)",
    )


def _parse_constraint(tokens: Sequence[str], n_players: int) -> ConstraintProfile:
    words = ["any"] * n_players
    for token in tokens:
        head, sep, word = token.partition("=")
        if not sep:
            raise InputError(f"--player expects I=win|lose|any, got {token!r}")
        try:
            player = int(head)
        except ValueError as exc:
            raise InputError(f"--player: invalid player index {head!r}") from exc
        if not 0 <= player < n_players:
            raise InputError(f"--player: index {player} out of range for {n_players} players")
        if word not in ("win", "lose", "any"):
            raise InputError(f"--player: expected win|lose|any, got {word!r}")
        words[player] = word
    return ConstraintProfile.from_words(words)


def _print_witness(decision: Decision) -> None:
    assert decision.witness is not None
    xg = decision.extended_game
    names = xg.base.vertex_names
    print(f"witness gain: {decision.witness.gain}")

    def rows(label: str, vertices: tuple[int, ...]) -> None:
        print(f"witness {label}:")
        if not vertices:
            print("  (empty)")
        for x in vertices:
            base, sat = xg.origin[x]
            players = ",".join(str(i) for i in range(xg.game.n_players) if (sat >> i) & 1)
            print(f"  {names[base]}  {{{players}}}")

    rows("prefix", decision.witness.extended.prefix)
    rows("cycle", decision.witness.extended.cycle)


def _print_labeling(decision: Decision) -> None:
    xg = decision.extended_game
    print("labeling fixpoint:")
    for x, name in enumerate(xg.game.vertex_names):
        print(f"  {name}  {decision.lambda_star[x]}")
    print(f"iterations to fixpoint: {decision.k_star}")


def _print_oracle_line(g: FiniteGame, c: ConstraintProfile, decision: Decision) -> None:
    if decision.extended_game.game.n_vertices > ORACLE_MAX_EXT_VERTICES:
        print("oracle: skipped (extended game too large)")
        return
    agreed = oracle_decide(g, c) == decision.answer
    print(f"oracle: {'AGREE' if agreed else 'DISAGREE'}")


def _solve_game(g: FiniteGame, args: argparse.Namespace) -> int:
    c = _parse_constraint(args.player, g.n_players)
    decision = decide_constrained_existence(g, c, max_ext_vertices=_max_ext_vertices())
    print("YES" if decision.answer else "NO")
    if args.witness and decision.answer:
        _print_witness(decision)
    if args.show_lambda:
        _print_labeling(decision)
    if args.oracle:
        _print_oracle_line(g, c, decision)
    return 0 if decision.answer else 1


def _cmd_solve(args: argparse.Namespace) -> int:
    return _solve_game(load_finite_game(args.game), args)


def _cmd_solve_timed(args: argparse.Namespace) -> int:
    automaton = load_ppta(args.automaton)
    rg = build_region_game(automaton, max_vertices=_max_ext_vertices())
    status = _solve_game(rg.game, args)
    if args.regions:
        print("region game:")
        print(json.dumps(dump_finite_game(rg.game), ensure_ascii=False, indent=2))
    return status


def _cmd_regions(args: argparse.Namespace) -> int:
    automaton = load_ppta(args.automaton)
    rg = build_region_game(automaton, max_vertices=_max_ext_vertices())
    text = json.dumps(dump_finite_game(rg.game), ensure_ascii=False, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    return 0


def _cmd_oracle_check(args: argparse.Namespace) -> int:
    g = load_finite_game(args.game)
    c = _parse_constraint(args.player, g.n_players)
    decision = decide_constrained_existence(g, c, max_ext_vertices=_max_ext_vertices())
    if decision.extended_game.game.n_vertices > ORACLE_MAX_EXT_VERTICES:
        raise InputError(
            f"extended game has {decision.extended_game.game.n_vertices} vertices; "
            f"the oracle only handles up to {ORACLE_MAX_EXT_VERTICES}"
        )
    oracle_answer = oracle_decide(g, c)
    print(f"solver: {'YES' if decision.answer else 'NO'}")
    print(f"oracle: {'YES' if oracle_answer else 'NO'}")
    agreed = oracle_answer == decision.answer
    print("AGREE" if agreed else "DISAGREE")
    return 0 if agreed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spe-reach",
        description="Constrained existence of subgame perfect equilibria in "
        "turn-based reachability games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="decide an explicit finite game")
    solve.add_argument("game", help="finite game JSON file")
    _add_constraint_flags(solve)
    solve.add_argument("--witness", action="store_true", help="print a witness lasso")
    solve.add_argument(
        "--lambda", dest="show_lambda", action="store_true", help="print the labeling fixpoint"
    )
    solve.add_argument(
        "--oracle", action="store_true", help="cross-check with the brute-force oracle"
    )
    solve.set_defaults(run=_cmd_solve)

    timed = sub.add_parser("solve-timed", help="decide a timed automaton via its region game")
    timed.add_argument("automaton", help="timed automaton JSON file")
    _add_constraint_flags(timed)
    timed.add_argument("--witness", action="store_true", help="print a witness lasso")
    timed.add_argument(
        "--lambda", dest="show_lambda", action="store_true", help="print the labeling fixpoint"
    )
    timed.add_argument(
        "--oracle", action="store_true", help="cross-check with the brute-force oracle"
    )
    timed.add_argument(
        "--regions", action="store_true", help="also print the region game as JSON"
    )
    timed.set_defaults(run=_cmd_solve_timed)

    regions = sub.add_parser("regions", help="emit the region game of a timed automaton")
    regions.add_argument("automaton", help="timed automaton JSON file")
    regions.add_argument("--output", help="write to this file instead of stdout")
    regions.set_defaults(run=_cmd_regions)

    check = sub.add_parser("oracle-check", help="compare the solver against the oracle")
    check.add_argument("game", help="finite game JSON file")
    _add_constraint_flags(check)
    check.set_defaults(run=_cmd_oracle_check)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except SizeCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    sys.exit(main())
