"""Cart-Pole physics simulator with episode bookkeeping.

A cart slides on a frictionless track with a pole hinged on top. Pushing
the cart left or right is the only control. An episode ends when the pole
tips too far, the cart leaves the track section, or 200 steps elapse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np


class DoneReason(Enum):
    NOT_DONE = "not_done"
    POLE_ANGLE = "pole_angle"
    CART_POSITION = "cart_position"
    STEP_LIMIT = "step_limit"


@dataclass(frozen=True)
class EnvState:
    """Continuous observation: cart position/velocity, pole angle/angular velocity."""

    x: float
    x_dot: float
    theta: float
    theta_dot: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.x_dot, self.theta, self.theta_dot], dtype=np.float64)

    @classmethod
    def from_array(cls, arr) -> "EnvState":
        return cls(float(arr[0]), float(arr[1]), float(arr[2]), float(arr[3]))

    def dump(self) -> str:
        """Debug dump of x, x_dot, theta, theta_dot at 12 significant digits."""
        return " ".join(f"{v:.12g}" for v in (self.x, self.x_dot, self.theta, self.theta_dot))


@dataclass(frozen=True)
class EnvParams:
    gravity: float = 9.8
    cart_mass: float = 1.0
    pole_mass: float = 0.1
    pole_half_length: float = 0.5
    force_magnitude: float = 10.0
    time_step: float = 0.02
    theta_threshold: float = 12 * 2 * math.pi / 360  # 12 degrees, in radians
    x_threshold: float = 2.4
    max_episode_steps: int = 200

    def __post_init__(self):
        positive = (
            self.gravity, self.cart_mass, self.pole_mass, self.pole_half_length,
            self.force_magnitude, self.time_step, self.theta_threshold, self.x_threshold,
        )
        if any(v <= 0 for v in positive):
            raise ValueError("all physical constants must be strictly positive")
        if self.max_episode_steps < 1:
            raise ValueError("max_episode_steps must be >= 1")

    @property
    def total_mass(self) -> float:
        return self.cart_mass + self.pole_mass

    @property
    def polemass_length(self) -> float:
        return self.pole_mass * self.pole_half_length


@dataclass(frozen=True)
class StepResult:
    next_state: EnvState
    reward: float
    done: bool
    done_reason: DoneReason


def euler_step(params: EnvParams, state: EnvState, force: float) -> EnvState:
    """One explicit-Euler integration step of the pendulum-on-cart dynamics.

    temp      = (F + m_p l theta_dot^2 sin) / (m_c + m_p)
    theta_acc = (g sin - cos * temp) / (l (4/3 - m_p cos^2 / (m_c + m_p)))
    x_acc     = temp - m_p l theta_acc cos / (m_c + m_p)
    """
    cos_th = math.cos(state.theta)
    sin_th = math.sin(state.theta)

    temp = (force + params.polemass_length * state.theta_dot ** 2 * sin_th) / params.total_mass
    theta_acc = (params.gravity * sin_th - cos_th * temp) / (
        params.pole_half_length
        * (4.0 / 3.0 - params.pole_mass * cos_th ** 2 / params.total_mass)
    )
    x_acc = temp - params.polemass_length * theta_acc * cos_th / params.total_mass

    tau = params.time_step
    return EnvState(
        x=state.x + tau * state.x_dot,
        x_dot=state.x_dot + tau * x_acc,
        theta=state.theta + tau * state.theta_dot,
        theta_dot=state.theta_dot + tau * theta_acc,
    )


class CartPoleEnv:
    """Deterministic Cart-Pole episode runner.

    Actions: 0 pushes left, 1 pushes right. Reward is 1.0 on every step,
    including the terminating one. A single instance is single-threaded;
    independent instances may run in parallel.
    """

    def __init__(self, params: EnvParams | None = None, rng: np.random.Generator | None = None):
        self.params = params if params is not None else EnvParams()
        self._rng = rng if rng is not None else np.random.default_rng()
        self._state: EnvState | None = None
        self._steps = 0
        self._done = True  # forces reset() before the first step()

    @property
    def state(self) -> EnvState | None:
        return self._state

    @property
    def steps(self) -> int:
        return self._steps

    def reset(self, seed: int | None = None) -> EnvState:
        """Start a new episode: each component uniform in [-0.05, 0.05]."""
        if seed is not None:
            self._rng = np.random.default_rng(seed)
        vals = self._rng.uniform(-0.05, 0.05, size=4)
        self._state = EnvState(*(float(v) for v in vals))
        self._steps = 0
        self._done = False
        return self._state

    def set_state(self, state: EnvState, steps: int = 0) -> None:
        """Force the simulator into a given state (debugging/testing aid)."""
        self._state = state
        self._steps = steps
        self._done = False

    def step(self, action: int) -> StepResult:
        if self._state is None:
            raise RuntimeError("reset() must be called before step()")
        if self._done:
            raise RuntimeError("step() called on a finished episode; call reset()")
        if action not in (0, 1):
            raise ValueError(f"action must be 0 or 1, got {action!r}")

        p = self.params
        force = p.force_magnitude if action == 1 else -p.force_magnitude
        nxt = euler_step(p, self._state, force)
        self._steps += 1

        if abs(nxt.theta) > p.theta_threshold:
            reason = DoneReason.POLE_ANGLE
        elif abs(nxt.x) > p.x_threshold:
            reason = DoneReason.CART_POSITION
        elif self._steps >= p.max_episode_steps:
            reason = DoneReason.STEP_LIMIT
        else:
            reason = DoneReason.NOT_DONE

        done = reason is not DoneReason.NOT_DONE
        self._state = nxt
        self._done = done
        return StepResult(nxt, 1.0, done, reason)


def is_solved(score_history) -> bool:
    """True once the mean of the latest 100 scores reaches 195."""
    if len(score_history) < 100:
        return False
    recent = score_history[-100:]
    return sum(recent) / 100.0 >= 195.0
