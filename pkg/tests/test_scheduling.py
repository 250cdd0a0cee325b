"""Distillation scheduling: metrics, planners, and catalog files."""

import itertools
import math

import pytest

from pauliflow.scheduling import (
    Demand,
    EnumerationGuardError,
    InfeasibleScheduleError,
    Protocol,
    brute_force,
    default_catalog,
    dp_schedule,
    effective_latency,
    evaluate,
    greedy_schedule,
    parse_catalog,
    random_baseline,
    success_probability,
)

P15 = Protocol("15-to-1", tiles=11, steps=11, outputs=1, raw_inputs=15,
               error_coeff=35.0, error_exp=3)
P20 = Protocol("20-to-4", tiles=14, steps=17, outputs=4, raw_inputs=20,
               error_coeff=1.0, error_exp=2)
SYNTH = Protocol("7-to-2", tiles=6, steps=9, outputs=2, raw_inputs=7,
                 error_coeff=7.0, error_exp=2)


class TestProtocolMetrics:
    def test_success_probability_at_zero(self):
        assert success_probability(P15, 0.0) == 1.0

    def test_success_probability_15(self):
        assert success_probability(P15, 0.01) == pytest.approx(0.99**15)
        assert success_probability(P15, 0.01) == pytest.approx(
            math.exp(15 * math.log(0.99))
        )

    def test_success_probability_20(self):
        assert success_probability(P20, 0.01) == pytest.approx(0.99**20)

    def test_effective_latency_noiseless(self):
        assert effective_latency(P15, 0.0) == pytest.approx(11.0)
        assert effective_latency(P20, 0.0) == pytest.approx(4.25)

    def test_effective_latency_noisy(self):
        assert effective_latency(P15, 0.01) == pytest.approx(11 / 0.99**15)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            success_probability(P15, 1.0)
        with pytest.raises(ValueError):
            success_probability(P15, -0.1)


class TestEvaluate:
    def test_two_rounds_15(self):
        s = evaluate(["15-to-1", "15-to-1"], [P15, P20], Demand(2))
        assert s.states_delivered == 2
        assert s.total_steps == 22
        assert s.peak_tiles == 11
        assert s.tile_time == 242
        assert s.feasible

    def test_single_20(self):
        s = evaluate(["20-to-4"], [P15, P20], Demand(4))
        assert (s.states_delivered, s.total_steps, s.peak_tiles, s.tile_time) == (
            4, 17, 14, 238,
        )

    def test_empty_infeasible(self):
        assert not evaluate([], [P15], Demand(1)).feasible

    def test_unknown_name(self):
        with pytest.raises(KeyError):
            evaluate(["3-to-1"], [P15], Demand(1))

    def test_pure_recompute(self):
        s = evaluate(["20-to-4", "15-to-1"], [P15, P20], Demand(5, 0.01))
        again = evaluate(s.rounds, [P15, P20], Demand(5, 0.01))
        assert again == s


class TestBruteForce:
    def test_single_protocol_catalog(self):
        s = brute_force([P15], Demand(3), max_rounds=4)
        assert s.rounds == ("15-to-1",) * 3

    def test_latency_prefers_multi_output(self):
        s = brute_force([P15, P20], Demand(4, 0.0), max_rounds=4,
                        objective="latency")
        assert s.rounds == ("20-to-4",)
        assert s.expected_latency == pytest.approx(17.0)

    def test_tiles_prefers_small_block_for_one_state(self):
        s = brute_force([P15, P20], Demand(1), max_rounds=2, objective="tiles")
        assert s.rounds == ("15-to-1",)
        assert s.tile_time == 121

    def test_infeasible_within_budget(self):
        with pytest.raises(InfeasibleScheduleError):
            brute_force([P15], Demand(5), max_rounds=2)

    def test_guard(self):
        catalog = [
            Protocol(f"p{i}", 1, 1, 1, 1, 1.0, 1) for i in range(10)
        ]
        with pytest.raises(EnumerationGuardError):
            brute_force(catalog, Demand(1), max_rounds=8)

    def test_balanced_objective_feasible(self):
        s = brute_force([P15, P20], Demand(4), max_rounds=4,
                        objective="balanced", weight=0.5)
        assert s.feasible

    def test_multiset_search_matches_ordered_enumeration(self):
        # metrics are order independent, so searching round multisets must
        # give the same optimum as enumerating every ordered sequence
        catalog = {p.name: p for p in (P15, P20)}
        for m in range(1, 7):
            demand = Demand(m, 0.01)
            best_tiles = None
            best_latency = None
            for length in range(1, 5):
                for seq in itertools.product(sorted(catalog), repeat=length):
                    s = evaluate(seq, catalog.values(), demand)
                    if not s.feasible:
                        continue
                    if best_tiles is None or (
                        s.tile_time, s.total_steps
                    ) < (best_tiles.tile_time, best_tiles.total_steps):
                        best_tiles = s
                    if best_latency is None or (
                        s.expected_latency, s.tile_time
                    ) < (best_latency.expected_latency, best_latency.tile_time):
                        best_latency = s
            bf_tiles = brute_force(catalog.values(), demand, 4, "tiles")
            bf_latency = brute_force(catalog.values(), demand, 4, "latency")
            assert bf_tiles.tile_time == best_tiles.tile_time
            assert bf_latency.expected_latency == pytest.approx(
                best_latency.expected_latency
            )


class TestDpSchedule:
    def test_single_protocol_matches_brute(self):
        dp = dp_schedule([P15], Demand(3))
        bf = brute_force([P15], Demand(3), max_rounds=4)
        assert dp.tile_time == bf.tile_time

    def test_m4_prefers_20_to_4(self):
        dp = dp_schedule([P15, P20], Demand(4))
        assert dp.tile_time == 238
        assert sorted(dp.rounds) == ["20-to-4"]

    def test_m5_mixes(self):
        dp = dp_schedule([P15, P20], Demand(5))
        assert dp.tile_time == 359
        assert sorted(dp.rounds) == ["15-to-1", "20-to-4"]

    def test_matches_brute_force_on_grid(self):
        protos = [P15, P20, SYNTH]
        for size in (1, 2, 3):
            for catalog in itertools.combinations(protos, size):
                for m in range(1, 9):
                    for rounds in range(1, 7):
                        demand = Demand(m)
                        try:
                            bf = brute_force(catalog, demand, rounds)
                        except InfeasibleScheduleError:
                            with pytest.raises(InfeasibleScheduleError):
                                dp_schedule(catalog, demand, max_rounds=rounds)
                            continue
                        dp = dp_schedule(catalog, demand, max_rounds=rounds)
                        assert dp.tile_time == bf.tile_time

    def test_round_bound_respected(self):
        with pytest.raises(InfeasibleScheduleError):
            dp_schedule([P15], Demand(5), max_rounds=2)


class TestGreedy:
    def test_criterion_selects_20_to_4(self):
        # D/k + S: 11/1 + 11 = 22 vs 14/4 + 17 = 20.5
        s = greedy_schedule([P15, P20], Demand(4))
        assert s.rounds == ("20-to-4",)

    def test_singleton(self):
        s = greedy_schedule([P15], Demand(2))
        assert s.rounds == ("15-to-1", "15-to-1")

    def test_overshoot(self):
        s = greedy_schedule([P15, P20], Demand(5))
        assert s.rounds == ("20-to-4", "20-to-4")
        assert s.states_delivered == 8

    def test_latency_never_beats_brute_force(self):
        for m in range(1, 9):
            bf = brute_force([P15, P20, SYNTH], Demand(m, 0.01), max_rounds=6,
                             objective="latency")
            greedy = greedy_schedule([P15, P20, SYNTH], Demand(m, 0.01))
            assert greedy.expected_latency >= bf.expected_latency - 1e-12

    def test_empty_catalog(self):
        with pytest.raises(ValueError):
            greedy_schedule([], Demand(1))


class TestRandomBaseline:
    def test_reproducible(self):
        a = random_baseline([P15, P20], Demand(6), seed=42)
        b = random_baseline([P15, P20], Demand(6), seed=42)
        assert a == b

    def test_singleton_catalog(self):
        s = random_baseline([P20], Demand(6), seed=0)
        assert s.rounds == ("20-to-4", "20-to-4")

    def test_demand_validation(self):
        with pytest.raises(ValueError):
            Demand(0)


class TestCatalogFiles:
    def test_default_catalog(self):
        catalog = {p.name: p for p in default_catalog()}
        assert catalog["15-to-1"] == P15
        assert catalog["20-to-4"] == P20

    def test_parse_rejects_short_lines(self):
        with pytest.raises(ValueError, match="line 1"):
            parse_catalog("15-to-1 11 11\n")

    def test_parse_with_comments(self):
        catalog = parse_catalog("# c\n15-to-1 11 11 1 15 35 3\n")
        assert catalog[0] == P15

    def test_validation(self):
        with pytest.raises(ValueError):
            Protocol("bad", tiles=0, steps=1, outputs=1, raw_inputs=1,
                     error_coeff=1.0, error_exp=1)
