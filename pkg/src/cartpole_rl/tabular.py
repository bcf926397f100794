"""State discretization and the classical Q-table algorithm."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .env import EnvParams, EnvState

_THETA_LIMIT = EnvParams().theta_threshold

DEFAULT_DIMS = (1, 1, 6, 3)
# Clamp ranges per component (x, x_dot, theta, theta_dot). The velocity
# ranges are deliberately tight so the few buckets resolve the region the
# policy actually operates in; theta_dot spans roughly +/-50 deg/s.
DEFAULT_BOUNDS = (
    (-2.4, 2.4),
    (-0.5, 0.5),
    (-_THETA_LIMIT, _THETA_LIMIT),
    (-0.873, 0.873),
)


@dataclass(frozen=True)
class BucketSpec:
    dims: tuple = DEFAULT_DIMS
    bounds: tuple = DEFAULT_BOUNDS

    def __post_init__(self):
        if len(self.dims) != 4 or len(self.bounds) != 4:
            raise ValueError("dims and bounds must each cover the 4 state components")
        if any(n < 1 for n in self.dims):
            raise ValueError("every bucket count must be >= 1")
        if any(low >= high for low, high in self.bounds):
            raise ValueError("every bound must satisfy low < high")


def bucketize(state: EnvState, spec: BucketSpec) -> tuple[int, int, int, int]:
    """Map a continuous state to bucket indices; clamping makes this total."""
    indices = []
    for v, n, (low, high) in zip(
        (state.x, state.x_dot, state.theta, state.theta_dot), spec.dims, spec.bounds
    ):
        if n == 1:
            indices.append(0)
            continue
        v = min(max(v, low), high)
        k = int(math.floor((v - low) / (high - low) * n))
        indices.append(min(max(k, 0), n - 1))
    return tuple(indices)


def make_q_table(spec: BucketSpec, n_actions: int = 2) -> np.ndarray:
    """Dense zero-initialized action-value table of shape dims x n_actions."""
    return np.zeros(tuple(spec.dims) + (n_actions,), dtype=np.float64)


def select_action(table: np.ndarray, ds: tuple, epsilon: float, rng: np.random.Generator) -> int:
    """Epsilon-greedy over the table row; argmax ties break to the lowest index."""
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must be in [0, 1], got {epsilon}")
    if rng.random() < epsilon:
        return int(rng.integers(0, table.shape[-1]))
    return int(np.argmax(table[ds]))


def q_update(
    table: np.ndarray,
    ds: tuple,
    action: int,
    reward: float,
    ds_next: tuple,
    alpha: float,
    gamma: float,
) -> float:
    """In-place update: Q(s,a) += alpha * (r + gamma * max_a' Q(s',a') - Q(s,a)).

    Returns the new entry value; no other entry is touched.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {alpha}")
    if not 0.0 <= gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {gamma}")
    target = reward + gamma * float(np.max(table[ds_next]))
    entry = ds + (action,)
    table[entry] += alpha * (target - table[entry])
    return float(table[entry])


@dataclass(frozen=True)
class DecaySchedule:
    """Logarithmic decay from 1.0 down to a floor as episodes progress."""

    kind: str = "log"
    floor: float = 0.1
    scale: float = 25.0

    def __post_init__(self):
        if self.kind != "log":
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not 0.0 < self.floor <= 1.0:
            raise ValueError("floor must be in (0, 1]")
        if self.scale <= 0:
            raise ValueError("scale must be positive")


def schedule_value(sched: DecaySchedule, t: int) -> float:
    """Value at episode t: max(floor, min(1, 1 - log10((t + 1) / scale)))."""
    if t < 0:
        raise ValueError("episode index must be >= 0")
    return max(sched.floor, min(1.0, 1.0 - math.log10((t + 1) / sched.scale)))
