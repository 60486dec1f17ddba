import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from spe_reach.errors import DeadlockedRegionError, InputError, SizeCapError
from spe_reach.fixpoint import decide_constrained_existence
from spe_reach.game import ConstraintProfile, validate_game
from spe_reach.oracle import oracle_decide
from spe_reach.timed import (
    ClockRegion,
    GuardAtom,
    PPTA,
    Transition,
    all_regions,
    build_region_game,
    describe_region,
    guard_sat_region,
    guard_sat_valuation,
    region_equiv,
    region_of,
    region_representative,
    reset_region,
    reset_valuation,
    time_successors,
    validate_ppta,
)

from clock_samples import delay_reaching, random_member, random_valuation


def _region(maxima, clipped, order=()):
    return ClockRegion(tuple(maxima), tuple(clipped), tuple(map(frozenset, order)))


class TestRegionOf:
    def test_single_clock_fraction(self):
        r = region_of([Fraction(1, 2)], [1])
        assert r == _region([1], [(0, False)], [{0}])

    def test_single_clock_beyond(self):
        assert region_of([Fraction(23, 10)], [1]) == _region([1], [None])

    def test_two_clocks_ordered_fractions(self):
        r = region_of([Fraction(3, 10), Fraction(7, 10)], [1, 1])
        assert r == _region([1, 1], [(0, False), (0, False)], [{0}, {1}])

    def test_equal_fractions_grouped(self):
        r = region_of([Fraction(1, 3), Fraction(4, 3)], [2, 2])
        assert r == _region([2, 2], [(0, False), (1, False)], [{0, 1}])

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            region_of([Fraction(-1, 2)], [1])

    def test_value_at_maximum_not_beyond(self):
        assert region_of([1], [1]) == _region([1], [(1, True)])


class TestRegionEquiv:
    def test_same_cell(self):
        assert region_equiv([Fraction(1, 2)], [Fraction(7, 10)], [1])

    def test_swapped_fraction_order_differs(self):
        assert not region_equiv(
            [Fraction(1, 2), Fraction(7, 10)], [Fraction(7, 10), Fraction(1, 2)], [1, 1]
        )

    def test_both_beyond(self):
        assert region_equiv([Fraction(23, 10)], [Fraction(59, 10)], [1])

    @settings(max_examples=200)
    @given(
        st.lists(st.fractions(min_value=0, max_value=3, max_denominator=8), min_size=1, max_size=3),
        st.data(),
    )
    def test_equivalence_relation(self, values, data):
        k = len(values)
        maxima = data.draw(st.lists(st.integers(0, 2), min_size=k, max_size=k))
        other = data.draw(
            st.lists(st.fractions(min_value=0, max_value=3, max_denominator=8), min_size=k, max_size=k)
        )
        third = data.draw(
            st.lists(st.fractions(min_value=0, max_value=3, max_denominator=8), min_size=k, max_size=k)
        )
        assert region_equiv(values, values, maxima)
        assert region_equiv(values, other, maxima) == region_equiv(other, values, maxima)
        if region_equiv(values, other, maxima) and region_equiv(other, third, maxima):
            assert region_equiv(values, third, maxima)


class TestTimeSuccessors:
    def test_single_clock_chain(self):
        chain = time_successors(ClockRegion.zero([1]))
        assert chain == (
            _region([1], [(0, True)]),
            _region([1], [(0, False)], [{0}]),
            _region([1], [(1, True)]),
            _region([1], [None]),
        )

    def test_all_beyond_absorbing(self):
        beyond = _region([1], [None])
        assert time_successors(beyond) == (beyond,)

    def test_two_zero_clocks_move_together(self):
        chain = time_successors(ClockRegion.zero([1, 1]))
        assert chain[1] == _region([1, 1], [(0, False), (0, False)], [{0, 1}])

    def test_chain_matches_concrete_delays(self):
        rng = random.Random(7)
        maxima = (1, 2)
        for _ in range(50):
            nu = random_valuation(rng, 2, high=3)
            chain = time_successors(region_of(nu, maxima))
            for target in chain:
                d = delay_reaching(nu, target, maxima)
                assert region_of([v + d for v in nu], maxima) == target


class TestGuardSatRegion:
    def test_le_at_boundary(self):
        assert guard_sat_region((GuardAtom(0, "le", 1),), _region([1], [(1, True)]))

    def test_lt_at_boundary(self):
        assert not guard_sat_region((GuardAtom(0, "lt", 1),), _region([1], [(1, True)]))

    def test_gt_beyond(self):
        assert guard_sat_region((GuardAtom(0, "gt", 1),), _region([1], [None]))

    def test_empty_guard_true(self):
        assert guard_sat_region((), ClockRegion.zero([1]))

    def test_constant_above_maximum_rejected(self):
        with pytest.raises(ValueError, match="exceeds"):
            guard_sat_region((GuardAtom(0, "le", 5),), ClockRegion.zero([1]))

    def test_agrees_with_concrete_members(self):
        rng = random.Random(13)
        maxima = (2, 1)
        atoms = [
            GuardAtom(c, op, k)
            for c in (0, 1)
            for op in ("le", "lt", "eq", "gt", "ge")
            for k in range(maxima[c] + 1)
        ]
        for r in all_regions(maxima):
            members = [region_representative(r)] + [random_member(r, rng) for _ in range(2)]
            for atom in atoms:
                expected = guard_sat_region((atom,), r)
                for nu in members:
                    assert guard_sat_valuation((atom,), nu) == expected


class TestResetRegion:
    def test_reset_all_gives_zero(self):
        r = region_of([Fraction(1, 2), Fraction(5, 2)], [1, 1])
        assert reset_region(r, [0, 1]) == ClockRegion.zero([1, 1])

    def test_reset_nothing_identity(self):
        r = region_of([Fraction(1, 2)], [1])
        assert reset_region(r, []) is r

    def test_reset_drops_from_order(self):
        r = _region([1, 1], [(0, False), (0, False)], [{0}, {1}])
        assert reset_region(r, [0]) == _region([1, 1], [(0, True), (0, False)], [{1}])

    def test_matches_concrete_reset(self):
        rng = random.Random(17)
        maxima = (1, 2)
        for _ in range(50):
            nu = random_valuation(rng, 2, high=3)
            for resets in ([], [0], [1], [0, 1]):
                symbolic = reset_region(region_of(nu, maxima), resets)
                concrete = region_of(reset_valuation(nu, resets), maxima)
                assert symbolic == concrete


class TestRegionEnumeration:
    @pytest.mark.parametrize("maxima", [(0,), (1,), (2,), (1, 1), (2, 1)])
    def test_count_within_classical_bound(self, maxima):
        regions = all_regions(maxima)
        k = len(maxima)
        bound = 1
        for x in maxima:
            bound *= 2 * x + 2
        factor = 1
        for i in range(1, k + 1):
            factor *= i
        assert len(regions) == len(set(regions))
        assert len(regions) <= factor * (2 ** k) * bound

    def test_every_region_is_realizable(self):
        for r in all_regions((1, 1)):
            assert region_of(region_representative(r), r.maxima) == r


class TestDescribeRegion:
    def test_mixed_parts(self):
        r = _region([1, 1], [(0, True), (0, False)], [{1}])
        assert describe_region(r, ("c1", "c2")) == "c1=0;c2∈(0,1)"

    def test_fraction_order_suffix(self):
        r = _region([1, 1], [(0, False), (0, False)], [{0}, {1}])
        assert describe_region(r, ("c1", "c2")) == "c1∈(0,1);c2∈(0,1);c1<c2"

    def test_beyond(self):
        assert describe_region(_region([1], [None]), ("c",)) == "c>1"


def one_clock_choice_ppta() -> PPTA:
    """Reach l1 while the clock is at most 1, or l2 strictly later."""
    return PPTA(
        n_players=1,
        alphabet=("a", "b"),
        clock_names=("c",),
        location_names=("l0", "l1", "l2"),
        owners=(0, 0, 0),
        transitions=(
            Transition(0, "a", (GuardAtom(0, "le", 1),), frozenset(), 1),
            Transition(0, "b", (GuardAtom(0, "gt", 1),), frozenset(), 2),
            Transition(1, "a", (), frozenset(), 1),
            Transition(2, "b", (), frozenset(), 2),
        ),
        goals=(frozenset({1}),),
        initial=0,
    )


def two_clock_handover_ppta() -> PPTA:
    """Two players alternating between l0 and l1 under clock pressure."""
    return PPTA(
        n_players=2,
        alphabet=("a", "b", "c"),
        clock_names=("x", "y"),
        location_names=("l0", "l1", "l2"),
        owners=(0, 1, 0),
        transitions=(
            Transition(0, "a", (GuardAtom(0, "le", 2),), frozenset({1}), 1),
            Transition(0, "b", (GuardAtom(0, "gt", 2),), frozenset(), 2),
            Transition(1, "a", (GuardAtom(1, "lt", 1),), frozenset({0}), 0),
            Transition(1, "b", (GuardAtom(1, "ge", 1),), frozenset(), 2),
            Transition(2, "c", (), frozenset(), 2),
        ),
        goals=(frozenset({2}), frozenset({1})),
        initial=0,
    )


def zero_clock_fork_ppta() -> PPTA:
    return PPTA(
        n_players=1,
        alphabet=("a",),
        clock_names=(),
        location_names=("A", "B", "C"),
        owners=(0, 0, 0),
        transitions=(
            Transition(0, "a", (), frozenset(), 1),
            Transition(0, "a", (), frozenset(), 2),
            Transition(1, "a", (), frozenset(), 1),
            Transition(2, "a", (), frozenset(), 2),
        ),
        goals=(frozenset({1}),),
        initial=0,
    )


class TestBuildRegionGame:
    def test_zero_clock_isomorphic_to_location_graph(self):
        rg = build_region_game(zero_clock_fork_ppta())
        assert rg.game.n_vertices == 3
        assert rg.game.vertex_names == ("A", "B", "C")
        assert set(rg.game.edges) == {(0, "a", 1), (0, "a", 2), (1, "a", 1), (2, "a", 2)}

    def test_resetting_self_loop_single_vertex(self):
        a = PPTA(
            n_players=1,
            alphabet=("a",),
            clock_names=("c",),
            location_names=("l",),
            owners=(0,),
            transitions=(Transition(0, "a", (), frozenset({0}), 0),),
            goals=(frozenset(),),
            initial=0,
        )
        rg = build_region_game(a)
        assert rg.game.n_vertices == 1
        assert rg.game.edges == ((0, "a", 0),)

    def test_one_clock_choice_structure(self):
        rg = build_region_game(one_clock_choice_ppta())
        by_location = {}
        for loc, reg in rg.origin:
            by_location.setdefault(loc, []).append(reg)
        assert rg.game.n_vertices == 6
        assert len(rg.game.edges) == 15
        assert len(by_location[0]) == 1  # only the initial zero region
        assert len(by_location[1]) == 4  # all four 1-clock regions
        assert len(by_location[2]) == 1  # only beyond
        assert validate_game(rg.game) == []

    def test_one_clock_choice_decisions(self):
        rg = build_region_game(one_clock_choice_ppta())
        win = ConstraintProfile.from_words(["win"])
        lose = ConstraintProfile.from_words(["lose"])
        assert decide_constrained_existence(rg.game, win).answer
        assert not decide_constrained_existence(rg.game, lose).answer
        assert oracle_decide(rg.game, win)
        assert not oracle_decide(rg.game, lose)

    def test_deadlocked_region_reported(self):
        a = PPTA(
            n_players=1,
            alphabet=("a", "b"),
            clock_names=("c",),
            location_names=("l0", "l1"),
            owners=(0, 0),
            transitions=(
                Transition(0, "a", (GuardAtom(0, "eq", 1),), frozenset(), 1),
                Transition(1, "b", (GuardAtom(0, "eq", 0),), frozenset(), 1),
            ),
            goals=(frozenset(),),
            initial=0,
        )
        with pytest.raises(DeadlockedRegionError) as info:
            build_region_game(a)
        assert info.value.location == "l1"
        assert info.value.region == "c=1"

    def test_size_cap(self):
        with pytest.raises(SizeCapError):
            build_region_game(one_clock_choice_ppta(), max_vertices=3)

    def test_invalid_ppta_rejected(self):
        a = PPTA(
            n_players=1,
            alphabet=("a",),
            clock_names=(),
            location_names=("l",),
            owners=(4,),
            transitions=(Transition(0, "a", (), frozenset(), 0),),
            goals=(frozenset(),),
            initial=0,
        )
        assert validate_ppta(a)
        with pytest.raises(InputError, match="owner"):
            build_region_game(a)

    def test_region_classes_respect_owners_and_goals(self):
        # pair sampled concrete states with their regions and run the
        # quotient-side checkers on the induced finite snapshot
        from spe_reach.game import FiniteGame
        from spe_reach.quotient import (
            EquivalenceMap,
            check_respects_partition,
            check_respects_targets,
        )

        a = two_clock_handover_ppta()
        rng = random.Random(31)
        samples = [
            (rng.randrange(a.n_locations), random_valuation(rng, a.n_clocks, high=4))
            for _ in range(120)
        ]
        class_ids: dict[tuple[int, ClockRegion], int] = {}
        class_of = []
        for loc, nu in samples:
            key = (loc, region_of(nu, a.maxima))
            class_of.append(class_ids.setdefault(key, len(class_ids)))
        snapshot = FiniteGame(
            n_players=a.n_players,
            alphabet=("a",),
            vertex_names=tuple(f"s{k}" for k in range(len(samples))),
            edges=tuple((k, "a", k) for k in range(len(samples))),
            owner=tuple(a.owners[loc] for loc, _ in samples),
            targets=tuple(
                frozenset(k for k, (loc, _) in enumerate(samples) if loc in goal)
                for goal in a.goals
            ),
            initial=0,
        )
        eq = EquivalenceMap(tuple(class_of))
        assert check_respects_partition(snapshot, eq)
        assert check_respects_targets(snapshot, eq)

    def test_region_edges_concretely_realizable(self):
        a = one_clock_choice_ppta()
        rg = build_region_game(a)
        maxima = a.maxima
        rng = random.Random(23)
        for src, letter, dst in rg.game.edges:
            loc, reg = rg.origin[src]
            loc2, reg2 = rg.origin[dst]
            nu = random_member(reg, rng)
            realized = False
            for elapsed in time_successors(reg):
                for t in a.transitions_from[loc]:
                    if t.letter != letter or t.target != loc2:
                        continue
                    if not guard_sat_region(t.guard, elapsed):
                        continue
                    if reset_region(elapsed, t.resets) != reg2:
                        continue
                    d = delay_reaching(nu, elapsed, maxima)
                    shifted = [v + d for v in nu]
                    assert guard_sat_valuation(t.guard, shifted)
                    assert region_of(reset_valuation(shifted, t.resets), maxima) == reg2
                    realized = True
            assert realized
