#!/usr/bin/env python3
"""Compare distillation schedulers across a demand grid.

For every catalog subset and demand, runs brute force (the optimum),
dynamic programming, greedy, and the random baseline, then reports the
mean overhead of each planner against the optimum for both the tile and
latency objectives.

Example:
    python scripts/scheduler_comparison.py --max-demand 8 --max-rounds 6
"""

import argparse
import itertools
import statistics

from pauliflow.scheduling import (
    Demand,
    InfeasibleScheduleError,
    Protocol,
    brute_force,
    default_catalog,
    dp_schedule,
    greedy_schedule,
    load_catalog,
    random_baseline,
)

SYNTH = Protocol("7-to-2", tiles=6, steps=9, outputs=2, raw_inputs=7,
                 error_coeff=7.0, error_exp=2)


def overhead(value, optimum):
    return value / optimum - 1.0


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--catalog", help="protocol file (default: built-in + synthetic)")
    parser.add_argument("--max-demand", type=int, default=8)
    parser.add_argument("--max-rounds", type=int, default=6)
    parser.add_argument("--p-raw", type=float, default=0.01)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if args.catalog:
        protocols = load_catalog(args.catalog)
    else:
        protocols = default_catalog() + [SYNTH]

    tile_dp, tile_greedy, tile_random = [], [], []
    lat_dp, lat_greedy, lat_random = [], [], []
    instances = 0
    for size in range(1, len(protocols) + 1):
        for catalog in itertools.combinations(protocols, size):
            for m in range(1, args.max_demand + 1):
                demand = Demand(m, args.p_raw)
                try:
                    best_tiles = brute_force(
                        catalog, demand, args.max_rounds, objective="tiles"
                    )
                    best_latency = brute_force(
                        catalog, demand, args.max_rounds, objective="latency"
                    )
                except InfeasibleScheduleError:
                    continue
                instances += 1
                dp = dp_schedule(catalog, demand, max_rounds=args.max_rounds)
                greedy = greedy_schedule(catalog, demand)
                rand = random_baseline(catalog, demand, args.seed + instances)

                tile_dp.append(overhead(dp.tile_time, best_tiles.tile_time))
                tile_greedy.append(overhead(greedy.tile_time, best_tiles.tile_time))
                tile_random.append(overhead(rand.tile_time, best_tiles.tile_time))
                lat_dp.append(
                    overhead(dp.expected_latency, best_latency.expected_latency)
                )
                lat_greedy.append(
                    overhead(greedy.expected_latency, best_latency.expected_latency)
                )
                lat_random.append(
                    overhead(rand.expected_latency, best_latency.expected_latency)
                )

    def fmt(values):
        return f"{statistics.mean(values):>8.1%} (max {max(values):.1%})"

    print(f"{instances} feasible instances, p_raw={args.p_raw}")
    print("\nmean overhead vs brute-force optimum")
    print(f"{'planner':>8}  {'tile_time':>22}  {'expected_latency':>22}")
    print(f"{'dp':>8}  {fmt(tile_dp):>22}  {fmt(lat_dp):>22}")
    print(f"{'greedy':>8}  {fmt(tile_greedy):>22}  {fmt(lat_greedy):>22}")
    print(f"{'random':>8}  {fmt(tile_random):>22}  {fmt(lat_random):>22}")


if __name__ == "__main__":
    main()
