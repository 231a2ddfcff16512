"""One-off calibration of the regression floors used by the test suite.

Runs with master seed 1000, which no test uses, and prints the measured
rates together with the floor ``rate - 3 * stderr(100 trials)``.
"""

import math

from kfactor.constructions import construct_cycles
from kfactor.experiments import SweepConfig, exact_recovery_rate
from kfactor.planted import ModelParams, plant, trial_rng

SEED = 1000


def floor(rate: float, trials: int = 100) -> float:
    return rate - 3 * math.sqrt(rate * (1 - rate) / trials)


def empty_core() -> None:
    (row,) = exact_recovery_rate(SweepConfig(((10_000, 2, 0.05),), 1000, master_seed=SEED, workers=4))
    r = row["empty_core_rate"]
    print(f"empty core, n=1e4 k=2 lambda=0.05, 1000 trials: rate={r:.4f} floor(100)={floor(r):.4f}")


def five_edge(n, k, lam, ell, d, gamma, runs: int = 1000) -> None:
    hits = 0
    for t in range(runs):
        rng = trial_rng(SEED, 0, t)
        g, _ = plant(ModelParams(n, k, lam), rng)
        hits += len(construct_cycles(g, ell, d, gamma, rng, max_cycles=50).cycles) > 0
    r = hits / runs
    print(f"five-edge n={n} k={k} lambda={lam} ell={ell} d={d} gamma={gamma}, {runs} runs: rate={r:.4f} floor(100)={floor(r):.4f}")


if __name__ == "__main__":
    empty_core()
    five_edge(20_000, 1, 1.5, 8, 3, 0.03)
    five_edge(5_000, 1, 30.0, 3, 4, 0.08)
