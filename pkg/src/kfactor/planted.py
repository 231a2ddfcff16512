"""Sampling of planted instances: uniform k-factor plus Erdos-Renyi background."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .graph_core import BicoloredGraph, edge_keys

MAX_REJECTION_TRIES = 10_000


class SamplerExhausted(RuntimeError):
    """The configuration model rejected every pairing within the retry budget."""


@dataclass(frozen=True)
class ModelParams:
    n: int
    k: int
    lam: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.k < 1 or self.k >= self.n:
            raise ValueError(f"need 1 <= k < n, got k={self.k}, n={self.n}")
        if (self.n * self.k) % 2:
            raise ValueError("n * k must be even")
        if self.lam < 0 or self.lam > self.n:
            raise ValueError("lambda must satisfy 0 <= lambda <= n")

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        lam = d["lambda"] if "lambda" in d else d["lam"]
        return cls(int(d["n"]), int(d["k"]), float(lam), int(d.get("seed", 0)))

    @classmethod
    def from_json(cls, text: str) -> "ModelParams":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def trial_seed(master_seed: int, grid_index: int, trial_index: int) -> np.random.SeedSequence:
    """Seed for one Monte Carlo trial.

    The rule is ``SeedSequence(entropy=master_seed, spawn_key=(grid_index,
    trial_index))``: numpy's SeedSequence hashes the triple, so a trial's
    stream never depends on which worker runs it or in what order.
    """
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(grid_index), int(trial_index)))


def trial_rng(master_seed: int, grid_index: int, trial_index: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed(master_seed, grid_index, trial_index))


def _canonical_sorted(pairs: np.ndarray, n: int) -> np.ndarray:
    lo = np.minimum(pairs[:, 0], pairs[:, 1])
    hi = np.maximum(pairs[:, 0], pairs[:, 1])
    out = np.stack([lo, hi], axis=1)
    return out[np.argsort(edge_keys(out, n), kind="stable")]


def sample_k_regular(n: int, k: int, rng, max_tries: int = MAX_REJECTION_TRIES) -> np.ndarray:
    """Uniform simple k-regular graph on ``[0, n)`` as sorted canonical edge rows.

    Uniform pairing of the ``n*k`` half-edges, rejecting the whole pairing on
    any self-loop or repeated edge.
    """
    if k < 0 or k >= n:
        raise ValueError(f"need 0 <= k < n, got k={k}, n={n}")
    if (n * k) % 2:
        raise ValueError("n * k must be even")
    rng = make_rng(rng)
    if k == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if k == 1:
        return _canonical_sorted(rng.permutation(n).reshape(-1, 2), n)
    stubs = np.repeat(np.arange(n, dtype=np.int64), k)
    for _ in range(max_tries):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        out = _canonical_sorted(pairs, n)
        keys = edge_keys(out, n)
        if np.any(keys[1:] == keys[:-1]):
            continue
        return out
    raise SamplerExhausted(f"no simple {k}-regular pairing on n={n} after {max_tries} tries")


def pair_index_to_edge(idx: np.ndarray, n: int) -> np.ndarray:
    """Map row-major indices over ``{(u, v): u < v}`` to edge rows."""
    idx = np.asarray(idx, dtype=np.int64)

    def offset(u):
        return u * (2 * n - u - 1) // 2

    b = 2.0 * n - 1.0
    u = np.floor((b - np.sqrt(b * b - 8.0 * idx.astype(np.float64))) / 2.0).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    for _ in range(3):
        u = np.where(offset(u + 1) <= idx, u + 1, u)
        u = np.where(offset(u) > idx, u - 1, u)
    v = idx - offset(u) + u + 1
    return np.stack([u, v], axis=1)


def sample_background(n: int, lam: float, rng) -> np.ndarray:
    """G(n, lam/n) edges by geometric skipping over the pair indices."""
    rng = make_rng(rng)
    p = lam / n
    total = n * (n - 1) // 2
    if p <= 0 or total == 0:
        return np.zeros((0, 2), dtype=np.int64)
    if p >= 1:
        return pair_index_to_edge(np.arange(total), n)
    log_q = math.log1p(-p)
    mean = total * p
    batch = int(mean + 10 * math.sqrt(mean) + 16)
    chunks = []
    pos = -1
    while True:
        # inverse-CDF geometric gaps in floating point, clipped so that a
        # vanishing p cannot overflow the integer cumulative sum
        with np.errstate(over="ignore", divide="ignore"):
            gaps = np.floor(np.log1p(-rng.random(batch)) / log_q) + 1.0
        gaps = np.minimum(gaps, float(total + 1)).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        cut = np.searchsorted(idx, total)
        chunks.append(idx[:cut])
        if cut < batch:
            break
        pos = int(idx[-1])
    return pair_index_to_edge(np.concatenate(chunks), n)


def _overlay(n: int, k: int, h_star: np.ndarray, lam: float, rng) -> BicoloredGraph:
    g0 = sample_background(n, lam, rng)
    if len(g0) and len(h_star):
        g0 = g0[~np.isin(edge_keys(g0, n), edge_keys(h_star, n))]
    return BicoloredGraph.from_arrays(n, k, h_star, g0)


def plant(params: ModelParams, rng=None) -> tuple[BicoloredGraph, np.ndarray]:
    """Draw ``(G, H*)``.  Background pairs that coincide with H* stay red."""
    rng = make_rng(params.seed if rng is None else rng)
    h_star = sample_k_regular(params.n, params.k, rng)
    return _overlay(params.n, params.k, h_star, params.lam, rng), h_star


def plant_hamiltonian(n: int, lam: float, rng) -> tuple[BicoloredGraph, np.ndarray]:
    """Planted model with H* a uniform Hamiltonian cycle."""
    if n < 3:
        raise ValueError("a Hamiltonian cycle needs n >= 3")
    if lam < 0 or lam > n:
        raise ValueError("lambda must satisfy 0 <= lambda <= n")
    rng = make_rng(rng)
    perm = rng.permutation(n)
    h_star = _canonical_sorted(np.stack([perm, np.roll(perm, -1)], axis=1), n)
    return _overlay(n, 2, h_star, lam, rng), h_star
