"""Dense feed-forward Q-networks: manual forward/backward and an Adam optimizer.

Hidden layers are rectified-linear, the output is linear. A dueling variant
splits the trunk output into a scalar value stream and a per-action advantage
stream, recombined as Q = V + A - max_a A or Q = V + A - mean_a A.
All arithmetic is float64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class Head(Enum):
    PLAIN = "plain"
    DUELING_MAX = "dueling_max"
    DUELING_MEAN = "dueling_mean"


@dataclass(frozen=True)
class NetworkSpec:
    input_dim: int = 4
    hidden_dims: tuple[int, ...] = (24, 24)
    output_dim: int = 2
    head: Head = Head.PLAIN
    # Width feeding the two dueling heads; must equal the last hidden width
    # (the hidden layers form a shared trunk). None resolves to that width.
    dueling_stream_dim: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "hidden_dims", tuple(self.hidden_dims))
        if self.input_dim < 1 or self.output_dim < 1 or any(h < 1 for h in self.hidden_dims):
            raise ValueError("all layer dims must be >= 1")
        if self.head is not Head.PLAIN:
            if not self.hidden_dims:
                raise ValueError("dueling heads require at least one hidden layer")
            if self.dueling_stream_dim is None:
                object.__setattr__(self, "dueling_stream_dim", self.hidden_dims[-1])
            elif self.dueling_stream_dim != self.hidden_dims[-1]:
                raise ValueError("dueling_stream_dim must equal the last hidden width")


@dataclass
class Layer:
    w: np.ndarray  # (out_dim, in_dim)
    b: np.ndarray  # (out_dim,)


@dataclass
class NetworkParams:
    """Plain head: `layers` = hidden layers plus the final linear output layer.

    Dueling heads: `layers` is the shared trunk; `value` (width 1) and
    `advantage` (width output_dim) are single affine heads on the trunk output.
    """

    spec: NetworkSpec
    layers: list[Layer]
    value: Layer | None = None
    advantage: Layer | None = None


@dataclass
class ForwardCache:
    """Intermediates retained for backprop: layer inputs, pre-activations,
    and (dueling only) the raw advantage vector and value output."""

    inputs: list[np.ndarray]
    pre_activations: list[np.ndarray]
    advantage: np.ndarray | None = None
    value: float | None = None


def param_count(spec: NetworkSpec) -> int:
    """Exact number of weights and biases, both dueling streams included."""
    count = 0
    prev = spec.input_dim
    for h in spec.hidden_dims:
        count += prev * h + h
        prev = h
    if spec.head is Head.PLAIN:
        count += prev * spec.output_dim + spec.output_dim
    else:
        count += prev + 1  # value head
        count += prev * spec.output_dim + spec.output_dim  # advantage head
    return count


def build_network(spec: NetworkSpec, seed: int) -> NetworkParams:
    """Weights uniform in +/-sqrt(6 / (fan_in + fan_out)), biases zero."""
    rng = np.random.default_rng(seed)

    def affine(out_dim: int, in_dim: int) -> Layer:
        limit = math.sqrt(6.0 / (in_dim + out_dim))
        w = rng.uniform(-limit, limit, size=(out_dim, in_dim))
        return Layer(w, np.zeros(out_dim, dtype=np.float64))

    layers = []
    prev = spec.input_dim
    for h in spec.hidden_dims:
        layers.append(affine(h, prev))
        prev = h
    if spec.head is Head.PLAIN:
        layers.append(affine(spec.output_dim, prev))
        return NetworkParams(spec, layers)
    return NetworkParams(spec, layers, value=affine(1, prev), advantage=affine(spec.output_dim, prev))


def forward(params: NetworkParams, x) -> tuple[np.ndarray, ForwardCache]:
    """Q-values for one input vector, plus the cache needed by backward()."""
    spec = params.spec
    a = np.asarray(x, dtype=np.float64)
    if a.shape != (spec.input_dim,):
        raise ValueError(f"input must have shape ({spec.input_dim},), got {a.shape}")

    inputs = [a]
    pre = []
    n_hidden = len(spec.hidden_dims)
    for layer in params.layers[:n_hidden]:
        z = layer.w @ a + layer.b
        pre.append(z)
        a = np.maximum(z, 0.0)
        inputs.append(a)

    if spec.head is Head.PLAIN:
        out = params.layers[-1]
        q = out.w @ a + out.b
        return q, ForwardCache(inputs, pre)

    v = float(params.value.w @ a + params.value.b)
    adv = params.advantage.w @ a + params.advantage.b
    if spec.head is Head.DUELING_MEAN:
        q = v + adv - adv.mean()
    else:
        q = v + adv - adv.max()
    return q, ForwardCache(inputs, pre, advantage=adv, value=v)


def backward(params: NetworkParams, cache: ForwardCache, output_error) -> list[np.ndarray]:
    """Gradients of a scalar loss L given dL/dq, flat in declaration order.

    The dueling aggregation routes its correction term through the advantage
    stream: the max head sends -sum(dL/dq) through the first arg-maximal
    advantage unit only; the mean head spreads -sum(dL/dq)/n over all units.
    """
    spec = params.spec
    g = np.asarray(output_error, dtype=np.float64)
    if g.shape != (spec.output_dim,):
        raise ValueError(f"output_error must have shape ({spec.output_dim},), got {g.shape}")

    n_hidden = len(spec.hidden_dims)
    hidden_grads: list[tuple[np.ndarray, np.ndarray]] = [None] * n_hidden
    head_grads: list[np.ndarray] = []

    if spec.head is Head.PLAIN:
        out = params.layers[-1]
        dw_out = np.outer(g, cache.inputs[-1])
        db_out = g.copy()
        da = out.w.T @ g
        tail = [dw_out, db_out]
    else:
        total = float(g.sum())
        if spec.head is Head.DUELING_MEAN:
            d_adv = g - total / spec.output_dim
        else:
            j = int(np.argmax(cache.advantage))
            d_adv = g.copy()
            d_adv[j] -= total
        trunk_out = cache.inputs[-1]
        dw_v = (total * trunk_out).reshape(1, -1)
        db_v = np.array([total])
        dw_a = np.outer(d_adv, trunk_out)
        db_a = d_adv
        da = params.value.w[0] * total + params.advantage.w.T @ d_adv
        tail = [dw_v, db_v, dw_a, db_a]

    for i in range(n_hidden - 1, -1, -1):
        dz = da * (cache.pre_activations[i] > 0)
        hidden_grads[i] = (np.outer(dz, cache.inputs[i]), dz)
        da = params.layers[i].w.T @ dz

    flat: list[np.ndarray] = []
    for dw, db in hidden_grads:
        flat.extend((dw, db))
    flat.extend(tail)
    return flat


def param_arrays(params: NetworkParams) -> list[np.ndarray]:
    """All parameter arrays in declaration order (w, b per layer, then heads)."""
    out = []
    for layer in params.layers:
        out.extend((layer.w, layer.b))
    if params.value is not None:
        out.extend((params.value.w, params.value.b))
        out.extend((params.advantage.w, params.advantage.b))
    return out


def with_arrays(params: NetworkParams, arrays: list[np.ndarray]) -> NetworkParams:
    """New NetworkParams with the same structure but the given arrays."""
    expected = param_arrays(params)
    if len(arrays) != len(expected):
        raise ValueError(f"expected {len(expected)} arrays, got {len(arrays)}")
    for old, new in zip(expected, arrays):
        if old.shape != new.shape:
            raise ValueError(f"array shape mismatch: {old.shape} vs {new.shape}")
    it = iter(arrays)
    layers = [Layer(next(it), next(it)) for _ in params.layers]
    value = advantage = None
    if params.value is not None:
        value = Layer(next(it), next(it))
        advantage = Layer(next(it), next(it))
    return NetworkParams(params.spec, layers, value, advantage)


def clone_params(params: NetworkParams) -> NetworkParams:
    return with_arrays(params, [a.copy() for a in param_arrays(params)])


@dataclass
class OptimizerState:
    """Adam accumulators; shapes mirror the parameter arrays."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    t: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def init_optimizer(params: NetworkParams) -> OptimizerState:
    arrays = param_arrays(params)
    return OptimizerState(
        m=[np.zeros_like(a) for a in arrays],
        v=[np.zeros_like(a) for a in arrays],
    )


def optimizer_step(
    params: NetworkParams,
    grads: list[np.ndarray],
    state: OptimizerState,
    lr: float,
) -> tuple[NetworkParams, OptimizerState]:
    """One Adam update; returns fresh params and state, inputs untouched."""
    if lr <= 0:
        raise ValueError("learning rate must be positive")
    arrays = param_arrays(params)
    if len(grads) != len(arrays):
        raise ValueError(f"expected {len(arrays)} gradient arrays, got {len(grads)}")
    t = state.t + 1
    b1, b2 = state.beta1, state.beta2
    new_m, new_v, new_arrays = [], [], []
    for a, g, m, v in zip(arrays, grads, state.m, state.v):
        if g.shape != a.shape:
            raise ValueError(f"gradient shape mismatch: {g.shape} vs {a.shape}")
        m2 = b1 * m + (1.0 - b1) * g
        v2 = b2 * v + (1.0 - b2) * g * g
        m_hat = m2 / (1.0 - b1 ** t)
        v_hat = v2 / (1.0 - b2 ** t)
        new_arrays.append(a - lr * m_hat / (np.sqrt(v_hat) + state.eps))
        new_m.append(m2)
        new_v.append(v2)
    return with_arrays(params, new_arrays), OptimizerState(new_m, new_v, t, b1, b2, state.eps)
