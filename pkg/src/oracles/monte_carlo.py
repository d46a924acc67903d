"""
Direct ensemble simulation of the Bloch vector under piecewise-constant fields.

Trajectories are split into fixed-size blocks; block j draws from the
substream (seed, j) and blocks are merged in index order, so results are
bit-identical for any worker count.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..noise.distributions import NoiseDistribution
from ..noise.kernels import SeparableKernel
from ..noise.streams import substream
from ..su2.bloch import BlochVector
from ..su2.rotations import adjoint_rotations

logger = logging.getLogger(__name__)


BLOCK_SIZE = 4096


@dataclass(frozen=True, eq=False)
class MonteCarloResult:
    """Sample mean of the Bloch vector with per-component standard errors."""
    mean: BlochVector
    std_error: np.ndarray
    n_trajectories: int
    seed: int

    def deviation(self, expected: BlochVector) -> np.ndarray:
        return np.abs(self.mean.as_array() - expected.as_array())

    def agrees_with(self, expected: BlochVector, n_sigma: float = 3.0, atol: float = 1e-12) -> bool:
        """True when every component lies within n_sigma standard errors (plus atol)."""
        return bool(np.all(self.deviation(expected) <= n_sigma * self.std_error + atol))


@dataclass
class _BlockStats:
    count: int
    mean: np.ndarray
    m2: np.ndarray

    def merge(self, other: _BlockStats) -> _BlockStats:
        total = self.count + other.count
        delta = other.mean - self.mean
        return _BlockStats(
            count=total,
            mean=self.mean + delta * other.count / total,
            m2=self.m2 + other.m2 + delta ** 2 * self.count * other.count / total,
        )


def resolve_workers(workers: int | None) -> int:
    """0 or None means one worker per CPU."""
    if not workers or workers <= 0:
        return os.cpu_count() or 1
    return int(workers)


def _rotate(states: np.ndarray, fields: np.ndarray, B0: float, tau: float) -> np.ndarray:
    rotations = adjoint_rotations(fields + np.array([0.0, 0.0, B0]), tau)
    return np.einsum('kij,kj->ki', rotations, states)


def _stats(states: np.ndarray) -> _BlockStats:
    mean = states.mean(axis=0)
    return _BlockStats(len(states), mean, ((states - mean) ** 2).sum(axis=0))


def _run_blocks(
    simulate: Callable[[np.random.Generator, int], np.ndarray],
    n_traj: int,
    seed: int,
    workers: int | None,
) -> tuple[np.ndarray, np.ndarray]:
    sizes = [BLOCK_SIZE] * (n_traj // BLOCK_SIZE)
    if n_traj % BLOCK_SIZE:
        sizes.append(n_traj % BLOCK_SIZE)

    def run(job: tuple[int, int]) -> _BlockStats:
        index, size = job
        return _stats(simulate(substream(seed, index), size))

    n_workers = min(resolve_workers(workers), len(sizes))
    logger.debug(f"Simulating {n_traj} trajectories in {len(sizes)} blocks on {n_workers} workers")

    with ThreadPoolExecutor(max_workers=n_workers) as pool:
        blocks = list(pool.map(run, enumerate(sizes)))

    total = blocks[0]
    for block in blocks[1:]:
        total = total.merge(block)

    variance = total.m2 / (total.count - 1) if total.count > 1 else np.zeros(3)
    return total.mean, np.sqrt(variance / total.count)


def _result(s0: BlochVector, mean: np.ndarray, se: np.ndarray, n_traj: int, seed: int) -> MonteCarloResult:
    # The mean of unit vectors can exceed norm 1 only by rounding
    norm = np.linalg.norm(mean)
    if norm > 1.0:
        mean = mean / norm
    return MonteCarloResult(BlochVector.from_array(mean), se, n_traj, seed)


def _check_args(m: int, n_traj: int) -> None:
    if m < 0 or int(m) != m:
        raise ValueError(f"Step count must be a non-negative integer, got {m}")
    if n_traj < 1:
        raise ValueError(f"Need at least one trajectory, got {n_traj}")


def monte_carlo_white(
    dist: NoiseDistribution,
    B0: float,
    tau: float,
    m: int,
    s0: BlochVector,
    n_traj: int,
    seed: int,
    workers: int | None = 1,
) -> MonteCarloResult:
    """
    Average the Bloch vector over trajectories with i.i.d. fields per interval.

    Args:
        dist: Noise law for every interval
        B0: Static field along z
        tau: Interval length
        m: Number of intervals
        s0: Initial Bloch vector
        n_traj: Number of trajectories
        seed: Master seed
        workers: Thread count (0 or None = one per CPU)

    Returns:
        MonteCarloResult
    """
    _check_args(m, n_traj)
    if m == 0:
        return MonteCarloResult(s0, np.zeros(3), n_traj, seed)

    def simulate(rng: np.random.Generator, size: int) -> np.ndarray:
        states = np.tile(s0.as_array(), (size, 1))
        for _ in range(m):
            states = _rotate(states, dist.sample_many(rng, size), B0, tau)
        return states

    mean, se = _run_blocks(simulate, n_traj, seed, workers)
    return _result(s0, mean, se, n_traj, seed)


def monte_carlo_correlated(
    kernel: SeparableKernel,
    B0: float,
    tau: float,
    m: int,
    s0: BlochVector,
    n_traj: int,
    seed: int,
    workers: int | None = 1,
) -> MonteCarloResult:
    """
    Average the Bloch vector over Markov-chain field sequences.

    The first field comes from the kernel marginal and each later one from
    the conditional law given its predecessor.
    """
    _check_args(m, n_traj)
    if m == 0:
        return MonteCarloResult(s0, np.zeros(3), n_traj, seed)

    marginal = kernel.marginal()

    def simulate(rng: np.random.Generator, size: int) -> np.ndarray:
        # Reversible chain: sampled from the last interval backwards
        states = np.tile(s0.as_array(), (size, 1))
        fields = marginal.sample_many(rng, size)
        states = _rotate(states, fields, B0, tau)
        for _ in range(m - 1):
            fields = kernel.conditional_sample_many(fields, rng)
            states = _rotate(states, fields, B0, tau)
        return states

    mean, se = _run_blocks(simulate, n_traj, seed, workers)
    return _result(s0, mean, se, n_traj, seed)


def lag_correlation(kernel: SeparableKernel, n_samples: int, seed: int) -> tuple[float, float]:
    """
    Empirical E[cos(phi' - phi)] between successive fields, with its standard error.
    """
    rng = substream(seed, 0)
    first = kernel.marginal().sample_many(rng, n_samples)
    second = kernel.conditional_sample_many(first, rng)
    phi = np.arctan2(first[:, 1], first[:, 0])
    phi_next = np.arctan2(second[:, 1], second[:, 0])
    values = np.cos(phi_next - phi)
    return float(values.mean()), float(values.std(ddof=1) / np.sqrt(n_samples))
