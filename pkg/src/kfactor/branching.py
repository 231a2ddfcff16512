"""Branching-process calculators for the pruning core.

The relevant process alternates a Poisson(lam) number of background
children with exactly k planted grandchildren, so one two-layer step has
generating function ``phi(x) = exp(-lam * (1 - x**k))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

NEAR_CRITICAL = 1.05
MAX_ITER = 1_000_000


class ConvergenceError(ArithmeticError):
    pass


def phi(x: float, lam: float, k: int) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    return math.exp(-lam * (1.0 - x**k))


def phi_n(x: float, lam: float, k: int, m: int, n: int) -> float:
    """Generating function of ``k * Binom(m, lam/n)``."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if lam / n > 1:
        raise ValueError("lam/n must not exceed 1")
    return (1.0 - lam / n * (1.0 - x**k)) ** m


@dataclass
class ExtinctionSolution:
    rho: float
    trajectory: list[float] = field(default_factory=list)
    iterations: int = 0
    residual: float = 0.0


def extinction_recursion(lam: float, k: int, T: int) -> ExtinctionSolution:
    """``rho_0 = 0`` and ``rho_t = phi(rho_{t-1})`` for ``t <= T``."""
    if T < 0:
        raise ValueError("T must be nonnegative")
    traj = [0.0]
    r = 0.0
    for _ in range(T):
        r = phi(r, lam, k)
        traj.append(r)
    return ExtinctionSolution(r, traj, T, abs(phi(r, lam, k) - r))


def _gap(x: float, lam: float, k: int) -> float:
    return phi(x, lam, k) - x


def _bisect(lo: float, hi: float, lam: float, k: int, tol: float, max_iter: int) -> tuple[float, int]:
    # invariant: gap(lo) >= 0 > gap(hi)
    it = 0
    while it < max_iter:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _gap(mid, lam, k) >= 0:
            lo = mid
        else:
            hi = mid
        it += 1
        if hi - lo <= tol * 1e-3 and abs(_gap(lo, lam, k)) <= tol:
            break
    return lo, it


def _upper_bracket(lo: float, lam: float, k: int) -> float:
    for j in range(1, 64):
        hi = 1.0 - (1.0 - lo) * 2.0**-j
        if hi >= 1.0:
            break
        if _gap(hi, lam, k) < 0:
            return hi
    raise ConvergenceError("could not bracket the fixed point below 1")


def extinction_probability(lam: float, k: int, tol: float = 1e-12) -> ExtinctionSolution:
    """Smallest fixed point of ``phi`` in ``[0, 1]``.

    Exactly 1 when ``k * lam <= 1``.  Otherwise fixed-point iteration from 0,
    then bisection polishing; close to criticality (``k*lam < 1.05``) pure
    bisection, since the iteration contracts too slowly there.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    if k * lam <= 1:
        return ExtinctionSolution(1.0, [0.0], 0, 0.0)

    if k * lam < NEAR_CRITICAL:
        lo, it = _bisect(0.0, _upper_bracket(0.0, lam, k), lam, k, tol, 10_000)
        return ExtinctionSolution(lo, [0.0, lo], it, abs(_gap(lo, lam, k)))

    traj = [0.0]
    r = 0.0
    for _ in range(MAX_ITER):
        nxt = phi(r, lam, k)
        traj.append(nxt)
        step = nxt - r
        r = nxt
        if step <= tol:
            break
    else:
        raise ConvergenceError(f"fixed-point iteration did not settle within {MAX_ITER} steps")
    lo = r if _gap(r, lam, k) >= 0 else traj[-2]
    rho, it = _bisect(lo, _upper_bracket(lo, lam, k), lam, k, tol, 200)
    res = abs(_gap(rho, lam, k))
    if res > tol:
        raise ConvergenceError(f"residual {res} above tolerance {tol}")
    return ExtinctionSolution(rho, traj, len(traj) - 1 + it, res)


def core_fraction_prediction(lam: float, k: int) -> float:
    """Limiting probability ``(1 - rho)**2`` that a planted edge survives pruning."""
    return (1.0 - extinction_probability(lam, k).rho) ** 2


def survival_lower_bound(mu: float, sigma2: float) -> float:
    """``(mu^2 - mu) / (mu^2 - mu + sigma^2)`` for a supercritical process."""
    if mu <= 1:
        raise ValueError("bound needs mean offspring > 1")
    if sigma2 < 0:
        raise ValueError("variance must be nonnegative")
    return (mu * mu - mu) / (mu * mu - mu + sigma2)


# ---------------------------------------------------------------------------
# simulation

INVERSION_LIMIT = 30.0
_lgamma = np.vectorize(math.lgamma, otypes=[np.float64])


def _poisson_inversion(u: np.ndarray, mu: np.ndarray) -> np.ndarray:
    out = np.zeros(len(mu), dtype=np.int64)
    p = np.exp(-mu)
    s = p.copy()
    active = u > s
    x = 0
    while active.any() and x < 400:
        x += 1
        p = np.where(active, p * mu / x, p)
        s = np.where(active, s + p, s)
        out[active] = x
        active &= u > s
    return out


def _poisson_ptrs(rng: np.random.Generator, lam: np.ndarray) -> np.ndarray:
    # Hoermann (1993) transformed rejection with squeeze, valid for lam >= 10
    out = np.empty(len(lam), dtype=np.int64)
    todo = np.arange(len(lam))
    slam = np.sqrt(lam)
    loglam = np.log(lam)
    b = 0.931 + 2.53 * slam
    a = -0.059 + 0.02483 * b
    invalpha = 1.1239 + 1.1328 / (b - 3.4)
    vr = 0.9277 - 3.6224 / (b - 2)
    while len(todo):
        u = rng.random(len(todo)) - 0.5
        v = rng.random(len(todo))
        us = 0.5 - np.abs(u)
        aa, bb, ll = a[todo], b[todo], lam[todo]
        kk = np.floor((2 * aa / us + bb) * u + ll + 0.43)
        accept = (us >= 0.07) & (v <= vr[todo])
        maybe = ~accept & (kk >= 0) & ~((us < 0.013) & (v > us))
        if maybe.any():
            i = np.flatnonzero(maybe)
            lhs = np.log(v[i]) + np.log(invalpha[todo][i]) - np.log(aa[i] / (us[i] * us[i]) + bb[i])
            rhs = -ll[i] + kk[i] * loglam[todo][i] - _lgamma(kk[i] + 1)
            accept[i] = lhs <= rhs
        out[todo[accept]] = kk[accept].astype(np.int64)
        todo = todo[~accept]
    return out


def sample_poisson(rng: np.random.Generator, mean) -> np.ndarray:
    """Poisson draws: sequential inversion below mean 30, PTRS rejection above.

    Neither branch uses a normal approximation; both consume only uniforms
    from ``rng``, so a seed fixes the draws.
    """
    mu = np.atleast_1d(np.asarray(mean, dtype=np.float64))
    if np.any(mu < 0):
        raise ValueError("Poisson mean must be nonnegative")
    out = np.empty(len(mu), dtype=np.int64)
    small = mu < INVERSION_LIMIT
    out[small] = _poisson_inversion(rng.random(int(small.sum())), mu[small])
    if not small.all():
        out[~small] = _poisson_ptrs(rng, mu[~small])
    return out


@dataclass(frozen=True)
class Offspring:
    """Offspring law ``k * X`` with X Poisson(lam) or Binom(m, p)."""

    kind: str
    k: int = 1
    lam: float = 0.0
    m: int = 0
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("poisson", "binomial"):
            raise ValueError(f"unknown offspring kind {self.kind!r}")
        if self.k < 0 or self.lam < 0 or self.m < 0 or not 0 <= self.p <= 1:
            raise ValueError("invalid offspring parameters")

    @classmethod
    def poisson(cls, mean: float, k: int = 1) -> "Offspring":
        return cls("poisson", k=k, lam=mean)

    @classmethod
    def binomial(cls, m: int, p: float, k: int = 1) -> "Offspring":
        return cls("binomial", k=k, m=m, p=p)

    @property
    def mean(self) -> float:
        base = self.lam if self.kind == "poisson" else self.m * self.p
        return self.k * base

    @property
    def variance(self) -> float:
        base = self.lam if self.kind == "poisson" else self.m * self.p * (1 - self.p)
        return self.k * self.k * base

    def total(self, rng: np.random.Generator, parents: np.ndarray) -> np.ndarray:
        """Total offspring of ``parents[i]`` individuals, for each i."""
        if self.kind == "poisson":
            x = sample_poisson(rng, self.lam * parents)
        else:
            x = rng.binomial(self.m * parents, self.p)
        return self.k * x


@dataclass
class BranchingRuns:
    survived: np.ndarray  # bool per run
    sizes: np.ndarray  # (runs, max_generations + 1); -1 after truncation
    truncated: np.ndarray  # bool per run

    def survival_rate(self) -> float:
        return float(self.survived.mean())

    def extinct_by(self, t: int) -> np.ndarray:
        return self.sizes[:, t] == 0


def simulate_branching(
    offspring: Offspring,
    max_generations: int,
    rng: np.random.Generator,
    runs: int = 1,
    cap: int = 10_000,
) -> BranchingRuns:
    """Simulate ``runs`` independent processes from a single ancestor.

    A run whose population exceeds ``cap`` is stopped, flagged as truncated,
    and counted as surviving.
    """
    sizes = np.zeros((runs, max_generations + 1), dtype=np.int64)
    sizes[:, 0] = 1
    pop = np.ones(runs, dtype=np.int64)
    truncated = np.zeros(runs, dtype=bool)
    for t in range(1, max_generations + 1):
        live = (pop > 0) & ~truncated
        nxt = np.zeros(runs, dtype=np.int64)
        if live.any():
            nxt[live] = offspring.total(rng, pop[live])
        newly = live & (nxt > cap)
        truncated |= newly
        nxt[truncated] = -1
        sizes[:, t] = nxt
        pop = np.where(truncated, 0, nxt)
    survived = truncated | (sizes[:, -1] > 0)
    return BranchingRuns(survived, sizes, truncated)
