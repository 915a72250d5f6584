"""GNN-encoded actor-critic policy that builds vertex covers one vertex at a time.

Message passing (mean over neighbours, no self term)::

    H_k = relu(P @ H_{k-1} @ W_k.T + b_k),   P[i, j] = 1/deg(i) for j in N(i)

with ``H_0`` the per-node features ``[in_cover, uncovered_degree/max_degree,
degree/max_degree]``. The graph embedding is the sum of the final node
embeddings.

The actor scores node ``i`` as ``actor . [h_i, x_i]`` and samples from a
softmax restricted to legal vertices (outside the cover, at least one
uncovered edge). The critic is linear in the graph embedding. Gradients are
written out by hand; :func:`gradient_check` compares them against central
finite differences.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .objective import CoverSolution
from .topology import Topology, TopologySpec, generate

N_FEATURES = 3


class NonFiniteGradient(FloatingPointError):
    pass


# -- parameters ----------------------------------------------------------------

@dataclass
class GnosisParams:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    actor: np.ndarray
    critic: np.ndarray

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValueError("need one bias per weight matrix and at least one layer")
        fan_in = N_FEATURES
        for W, b in zip(self.weights, self.biases):
            if W.ndim != 2 or W.shape[1] != fan_in or b.shape != (W.shape[0],):
                raise ValueError("layer dimensions do not chain")
            fan_in = W.shape[0]
        if self.actor.shape != (fan_in + N_FEATURES,) or self.critic.shape != (fan_in,):
            raise ValueError("head dimensions do not match the last layer")

    @property
    def hidden_dim(self) -> int:
        return self.weights[-1].shape[0]

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def copy(self) -> "GnosisParams":
        return GnosisParams([W.copy() for W in self.weights], [b.copy() for b in self.biases],
                            self.actor.copy(), self.critic.copy())

    def flat(self) -> list[np.ndarray]:
        """Every parameter array, trunk first, then actor and critic heads."""
        return [*self.weights, *self.biases, self.actor, self.critic]

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(a)) for a in self.flat())

    def to_dict(self, config: "TrainConfig | None" = None) -> dict:
        return {
            "layers": [
                {"shape": list(W.shape), "weight": W.ravel().tolist(), "bias": b.tolist()}
                for W, b in zip(self.weights, self.biases)
            ],
            "actor": self.actor.tolist(),
            "critic": self.critic.tolist(),
            "config": asdict(config) if config is not None else None,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "GnosisParams":
        try:
            weights = [np.array(L["weight"], dtype=float).reshape(L["shape"]) for L in doc["layers"]]
            biases = [np.array(L["bias"], dtype=float) for L in doc["layers"]]
            return cls(weights, biases, np.array(doc["actor"], dtype=float),
                       np.array(doc["critic"], dtype=float))
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed model document: {exc}") from None

    def save(self, path, config: "TrainConfig | None" = None) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_dict(config), fh)

    @classmethod
    def load(cls, path) -> "GnosisParams":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def init_params(hidden_dim: int = 64, layers: int = 3, seed: int = 0) -> GnosisParams:
    """Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) for every weight and bias."""
    rng = np.random.default_rng(seed)

    def uni(shape, fan_in):
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    weights, biases = [], []
    fan_in = N_FEATURES
    for _ in range(layers):
        weights.append(uni((hidden_dim, fan_in), fan_in))
        biases.append(uni((hidden_dim,), fan_in))
        fan_in = hidden_dim
    actor = uni((hidden_dim + N_FEATURES,), hidden_dim + N_FEATURES)
    critic = uni((hidden_dim,), hidden_dim)
    return GnosisParams(weights, biases, actor, critic)


def zero_params(hidden_dim: int = 8, layers: int = 2) -> GnosisParams:
    p = init_params(hidden_dim, layers)
    for a in p.flat():
        a[...] = 0.0
    return p


# -- state ---------------------------------------------------------------------

def aggregation_matrix(t: Topology) -> np.ndarray:
    """Row-normalised adjacency: neighbour mean, all-zero rows for isolated nodes."""
    P = np.zeros((t.n, t.n))
    if t.num_edges:
        P[t.u, t.v] = 1.0
        P[t.v, t.u] = 1.0
        deg = t.degree.astype(float)
        P[deg > 0] /= deg[deg > 0, None]
    return P


@dataclass
class MvcState:
    topology: Topology
    in_cover: np.ndarray = None
    _P: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.in_cover is None:
            self.in_cover = np.zeros(self.topology.n, dtype=bool)
        else:
            self.in_cover = np.asarray(self.in_cover, dtype=bool).copy()

    @property
    def P(self) -> np.ndarray:
        if self._P is None:
            self._P = aggregation_matrix(self.topology)
        return self._P

    @property
    def uncovered_edges(self) -> np.ndarray:
        t = self.topology
        return np.flatnonzero(~(self.in_cover[t.u] | self.in_cover[t.v]))

    def uncovered_degree(self) -> np.ndarray:
        t = self.topology
        open_ = ~(self.in_cover[t.u] | self.in_cover[t.v])
        return np.bincount(np.concatenate([t.u[open_], t.v[open_]]), minlength=t.n)

    @property
    def features(self) -> np.ndarray:
        t = self.topology
        max_deg = max(int(t.degree.max()) if t.n else 0, 1)
        return np.column_stack([
            self.in_cover.astype(float),
            self.uncovered_degree() / max_deg,
            t.degree / max_deg,
        ]) if t.n else np.zeros((0, N_FEATURES))

    def legal(self) -> np.ndarray:
        return ~self.in_cover & (self.uncovered_degree() > 0)

    def done(self) -> bool:
        return self.uncovered_edges.size == 0

    def apply(self, action: int) -> int:
        """Add ``action`` to the cover; returns how many edges it newly covered."""
        if self.in_cover[action]:
            raise ValueError(f"vertex {action} is already in the cover")
        newly = int(self.uncovered_degree()[action])
        self.in_cover[action] = True
        return newly


# -- forward / backward ----------------------------------------------------------

@dataclass
class _Cache:
    X: np.ndarray
    aggregated: list[np.ndarray]
    pre: list[np.ndarray]
    H: np.ndarray
    h_graph: np.ndarray


def _forward(p: GnosisParams, P: np.ndarray, X: np.ndarray) -> _Cache:
    if X.shape[1] != p.weights[0].shape[1]:
        raise ValueError(f"feature width {X.shape[1]} does not match layer input {p.weights[0].shape[1]}")
    if P.shape != (X.shape[0], X.shape[0]):
        raise ValueError("aggregation matrix does not match node count")
    H = X
    aggregated, pre = [], []
    for W, b in zip(p.weights, p.biases):
        A = P @ H
        Z = A @ W.T + b
        aggregated.append(A)
        pre.append(Z)
        H = np.maximum(Z, 0.0)
    return _Cache(X, aggregated, pre, H, H.sum(axis=0))


def _backward_trunk(p: GnosisParams, P: np.ndarray, cache: _Cache, dH: np.ndarray):
    dW = [None] * p.num_layers
    db = [None] * p.num_layers
    for k in range(p.num_layers - 1, -1, -1):
        dZ = dH * (cache.pre[k] > 0)
        dW[k] = dZ.T @ cache.aggregated[k]
        db[k] = dZ.sum(axis=0)
        if k:
            dH = P.T @ (dZ @ p.weights[k])
    return dW, db


def gnn_forward(p: GnosisParams, t: Topology, state: MvcState | np.ndarray | None = None):
    """Node embeddings ``(n, hidden)`` and graph embedding ``(hidden,)``.

    ``state`` may be an :class:`MvcState` or a raw feature matrix.
    """
    if state is None:
        state = MvcState(t)
    if isinstance(state, MvcState):
        P, X = state.P, state.features
    else:
        P, X = aggregation_matrix(t), np.asarray(state, dtype=float)
    cache = _forward(p, P, X)
    return cache.H, cache.h_graph


def _logits(p: GnosisParams, cache: _Cache) -> np.ndarray:
    h = p.hidden_dim
    return cache.H @ p.actor[:h] + cache.X @ p.actor[h:]


def masked_softmax(logits: np.ndarray, legal: np.ndarray) -> np.ndarray:
    out = np.zeros_like(logits, dtype=float)
    if not legal.any():
        return out
    z = logits[legal]
    z = np.exp(z - z.max())
    out[legal] = z / z.sum()
    return out


def policy(p: GnosisParams, state: MvcState) -> np.ndarray:
    """Action probabilities over all vertices (zero for illegal ones)."""
    cache = _forward(p, state.P, state.features)
    return masked_softmax(_logits(p, cache), state.legal())


def value(p: GnosisParams, state: MvcState) -> float:
    return float(p.critic @ _forward(p, state.P, state.features).h_graph)


@dataclass
class Grads:
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    actor: np.ndarray
    critic: np.ndarray

    def flat(self) -> list[np.ndarray]:
        return [*self.weights, *self.biases, self.actor, self.critic]


def log_policy_grad(p: GnosisParams, state: MvcState, action: int,
                    cache: _Cache | None = None) -> tuple[float, Grads]:
    """``log pi(action | state)`` and its gradient w.r.t. trunk and actor head."""
    legal = state.legal()
    if not legal[action]:
        raise ValueError(f"action {action} is not legal in this state")
    if cache is None:
        cache = _forward(p, state.P, state.features)
    logits = _logits(p, cache)
    probs = masked_softmax(logits, legal)
    dlogit = -probs
    dlogit[action] += 1.0
    h = p.hidden_dim
    d_actor = np.concatenate([cache.H.T @ dlogit, cache.X.T @ dlogit])
    dW, db = _backward_trunk(p, state.P, cache, np.outer(dlogit, p.actor[:h]))
    return float(math.log(probs[action])), Grads(dW, db, d_actor, np.zeros_like(p.critic))


def value_grad(p: GnosisParams, state: MvcState, cache: _Cache | None = None) -> tuple[float, np.ndarray]:
    """``V(state)`` and its gradient w.r.t. the critic head (the graph embedding)."""
    if cache is None:
        cache = _forward(p, state.P, state.features)
    return float(p.critic @ cache.h_graph), cache.h_graph.copy()


# -- actor-critic arithmetic ------------------------------------------------------

def td_error(r: float, gamma: float, v_next: float, v_curr: float) -> float:
    return r + gamma * v_next - v_curr


def advantage(delta: float, gamma: float, v_next: float, v_curr: float) -> float:
    """Advantage with an extra bootstrap term on top of the TD error."""
    return delta + gamma * v_next - v_curr


def critic_update(p: GnosisParams, state: MvcState, delta: float, epsilon: float,
                  cache: _Cache | None = None) -> GnosisParams:
    """Semi-gradient TD(0) step on the critic head, in place; returns ``p``."""
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    _, g = value_grad(p, state, cache)
    with np.errstate(invalid="ignore", over="ignore"):
        step = epsilon * delta * g
    if not np.all(np.isfinite(step)):
        raise NonFiniteGradient("non-finite critic gradient")
    p.critic += step
    return p


def actor_update(p: GnosisParams, state: MvcState, action: int, A: float, beta: float,
                 cache: _Cache | None = None, max_norm: float | None = None) -> GnosisParams:
    """Policy-gradient step ``theta += beta * A * grad log pi(action|state)``, in place.

    ``max_norm`` optionally rescales the step so its global L2 norm stays bounded.
    """
    if not beta > 0:
        raise ValueError("beta must be positive")
    if A == 0:
        return p
    _, g = log_policy_grad(p, state, action, cache)
    arrays = [*g.weights, *g.biases, g.actor]
    scale = beta * A
    if max_norm is not None:
        norm = abs(scale) * math.sqrt(sum(float(np.sum(a * a)) for a in arrays))
        if norm > max_norm:
            scale *= max_norm / norm
    if not all(np.all(np.isfinite(a)) for a in arrays) or not math.isfinite(scale):
        raise NonFiniteGradient("non-finite actor gradient")
    for W, dW in zip(p.weights, g.weights):
        W += scale * dW
    for b, db in zip(p.biases, g.biases):
        b += scale * db
    p.actor += scale * g.actor
    return p


# -- training ---------------------------------------------------------------------

@dataclass(frozen=True)
class TrainConfig:
    gamma: float = 0.99
    actor_lr: float = 3e-3
    critic_lr: float = 0.3
    episodes: int = 2000
    hidden_dim: int = 64
    layers: int = 3
    reward_alpha: float = 2.0
    seed: int = 0
    advantage: str = "extended"
    normalized_critic: bool = True
    max_step_norm: float | None = 1.0

    def __post_init__(self):
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not (self.actor_lr > 0 and self.critic_lr > 0):
            raise ValueError("learning rates must be positive")
        if self.episodes < 0 or self.hidden_dim < 1 or self.layers < 1:
            raise ValueError("episodes, hidden_dim and layers must be non-negative/positive")
        if self.advantage not in ("extended", "standard"):
            raise ValueError("advantage must be 'extended' or 'standard'")


def reward(newly_covered: int, num_edges: int, alpha: float) -> float:
    """-1 per added vertex plus ``alpha`` times the fraction of edges it covered."""
    return -1.0 + alpha * newly_covered / max(num_edges, 1)


def _episode_graphs(source, seed: int):
    if isinstance(source, Topology):
        while True:
            yield source
    rng = np.random.default_rng([seed, 0x6E])
    while True:
        yield generate(source.with_seed(int(rng.integers(2**63))))


def train(source: TopologySpec | Topology, cfg: TrainConfig = TrainConfig(),
          history: list | None = None, params: GnosisParams | None = None) -> GnosisParams:
    """Online actor-critic over episodes of cover construction.

    Each episode draws a fresh graph from ``source`` (or reuses it when a
    fixed :class:`Topology` is given), starts from the empty cover, and adds
    one sampled vertex per step until every edge is covered. Critic and actor
    are updated after every step. Undiscounted episode returns are appended
    to ``history`` when supplied.
    """
    p = params.copy() if params is not None else init_params(cfg.hidden_dim, cfg.layers, cfg.seed)
    act_rng = np.random.default_rng([cfg.seed, 0xAC])
    graphs = _episode_graphs(source, cfg.seed)
    for ep in range(cfg.episodes):
        t = next(graphs)
        state = MvcState(t)
        P = state.P
        m = t.num_edges
        total = 0.0
        try:
            cache = _forward(p, P, state.features)
            while not state.done():
                legal = state.legal()
                probs = masked_softmax(_logits(p, cache), legal)
                if not np.all(np.isfinite(probs)):
                    raise NonFiniteGradient("policy diverged to non-finite probabilities")
                a = int(act_rng.choice(t.n, p=probs))
                before = MvcState(t, state.in_cover, P)
                r = reward(state.apply(a), m, cfg.reward_alpha)
                total += r
                v_curr = float(p.critic @ cache.h_graph)
                if state.done():
                    v_next, next_cache = 0.0, None
                else:
                    next_cache = _forward(p, P, state.features)
                    v_next = float(p.critic @ next_cache.h_graph)
                delta = td_error(r, cfg.gamma, v_next, v_curr)
                if cfg.advantage == "extended":
                    A = advantage(delta, cfg.gamma, v_next, v_curr)
                else:
                    A = delta
                eps = cfg.critic_lr
                if cfg.normalized_critic:
                    eps = cfg.critic_lr / (1.0 + float(cache.h_graph @ cache.h_graph))
                critic_update(p, before, delta, eps, cache)
                actor_update(p, before, a, A, cfg.actor_lr, cache, cfg.max_step_norm)
                if next_cache is not None:
                    cache = _forward(p, P, state.features)
        except NonFiniteGradient as exc:
            raise NonFiniteGradient(f"episode {ep}: {exc}") from None
        if history is not None:
            history.append(total)
    return p


# -- inference ---------------------------------------------------------------------

def infer_cover(p: GnosisParams, t: Topology) -> CoverSolution:
    """Greedy decoding: add the most probable legal vertex until every edge is covered."""
    state = MvcState(t)
    members = []
    while not state.done():
        cache = _forward(p, state.P, state.features)
        logits = _logits(p, cache)
        logits = np.where(state.legal(), logits, -np.inf)
        a = int(np.argmax(logits))
        state.apply(a)
        members.append(a)
    return CoverSolution(tuple(members), "gnosis", 0)


# -- gradient check ------------------------------------------------------------------

@dataclass
class GradCheckReport:
    actor_rel_err: float
    critic_rel_err: float
    tol: float

    @property
    def max_rel_err(self) -> float:
        return max(self.actor_rel_err, self.critic_rel_err)

    @property
    def passed(self) -> bool:
        return self.max_rel_err < self.tol


def _rel_err(analytic: np.ndarray, numeric: np.ndarray, floor: float = 1e-6) -> float:
    den = np.maximum(np.maximum(np.abs(analytic), np.abs(numeric)), floor)
    return float(np.max(np.abs(analytic - numeric) / den)) if analytic.size else 0.0


def numeric_grads(p: GnosisParams, state: MvcState, action: int, step: float = 1e-5):
    """Central finite differences of ``log pi(action|state)`` and ``V(state)``."""
    q = p.copy()

    def logpi():
        return math.log(policy(q, state)[action])

    def val():
        return value(q, state)

    out_pi, out_v = [], []
    for arr, is_critic in [(a, False) for a in [*q.weights, *q.biases, q.actor]] + [(q.critic, True)]:
        g = np.zeros_like(arr)
        f = val if is_critic else logpi
        it = np.nditer(arr, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            old = arr[idx]
            arr[idx] = old + step
            hi = f()
            arr[idx] = old - step
            lo = f()
            arr[idx] = old
            g[idx] = (hi - lo) / (2 * step)
        (out_v if is_critic else out_pi).append(g)
    return out_pi, out_v[0]


def gradient_check(p: GnosisParams, t: Topology, tol: float = 1e-4, step: float = 1e-5,
                   seed: int = 0) -> GradCheckReport:
    """Compare hand-written gradients with central differences on a random mid-episode state."""
    if t.n > 10:
        raise ValueError("gradient check is meant for graphs with at most 10 vertices")
    rng = np.random.default_rng(seed)
    state = MvcState(t)
    # advance a random number of steps so in_cover features are not all zero
    for _ in range(int(rng.integers(0, max(t.n // 2, 1)))):
        legal = np.flatnonzero(state.legal())
        if legal.size <= 1:
            break
        state.apply(int(rng.choice(legal)))
    legal = np.flatnonzero(state.legal())
    if legal.size == 0:
        return GradCheckReport(0.0, 0.0, tol)
    action = int(rng.choice(legal))
    _, g = log_policy_grad(p, state, action)
    _, gv = value_grad(p, state)
    num_pi, num_v = numeric_grads(p, state, action, step)
    ana_pi = [*g.weights, *g.biases, g.actor]
    actor_err = max(_rel_err(a, n) for a, n in zip(ana_pi, num_pi))
    return GradCheckReport(actor_err, _rel_err(gv, num_v), tol)
