"""Samplers and closed-form moment oracles for the building-block laws.

Beta and Dirichlet are delegated to numpy.  The decreasing stick-breaking
law (PD) and the generalized Mittag-Leffler law (ML) are built here:

* ``PD(beta, theta)``: sticks B_i ~ Beta(1-beta, theta+i*beta), weights
  Q_j = B_j prod_{i<j}(1-B_i), reported in decreasing order together with
  the untouched remainder mass.

* ``ML(beta, theta)``: defined by tilting a positive beta-stable variable
  sigma (Laplace transform exp(-lambda^beta)) by sigma^(-theta) and mapping
  through sigma^(-beta).  Moments:

      E[M^p] = Gamma(theta)Gamma(theta/beta+p) / (Gamma(theta/beta)Gamma(theta+p*beta))
             = Gamma(theta+1)Gamma(theta/beta+p+1) / (Gamma(theta/beta+1)Gamma(theta+p*beta+1))

  Three sampling methods:

  - ``"stable-exact"`` (theta = 0 only): M = sigma^(-beta) with sigma drawn
    by Zolotarev/Kanter's exact formula.
  - ``"crp"``: M ~= K(n)/n^beta where K(n) counts occupied tables after n
    customers of a (beta, theta) Chinese restaurant.  Bias in the mean is
    -(theta/beta) n^(-beta) + O(1/n), so this converges slowly; it is kept
    because it is the construction-level definition and is the default.
  - ``"crp-gamma"``: M = Gamma(K(n) + theta/beta) * (n+theta)^(-beta).  The
    table-count martingales give E[M^p] exact up to  a 1 + O(p^2/n) factor
    for every p, so at n = 10^4 this is bias-free for all practical
    purposes; the internal continuum samplers use it.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, lgamma, pi
from typing import Sequence

import numpy as np

from .rng import RandomStream

# -- parameter containers -----------------------------------------------------


@dataclass(frozen=True)
class MLParams:
    beta: float
    theta: float

    def __post_init__(self):
        if not (0 < self.beta < 1):
            raise ValueError(f"need 0 < beta < 1, got {self.beta}")
        if not (self.theta > -self.beta):
            raise ValueError(f"need theta > -beta, got theta={self.theta}")


def _check_positive(name, *values):
    for v in values:
        if not (v > 0):
            raise ValueError(f"{name} parameters must be positive, got {v}")


# -- moment oracles -----------------------------------------------------------


def ml_moment_forms(p: MLParams, power: float) -> tuple[float | None, float]:
    """Both printed Gamma-ratio forms of E[M^power]; the first is None at
    theta = 0 where it degenerates."""
    b, t = p.beta, p.theta
    form2 = exp(
        lgamma(t + 1) + lgamma(t / b + power + 1) - lgamma(t / b + 1) - lgamma(t + power * b + 1)
    )
    if t <= 0:
        # Gamma(theta) changes sign below zero and blows up at zero; only the
        # second printed form stays directly computable there.
        return None, form2
    form1 = exp(lgamma(t) + lgamma(t / b + power) - lgamma(t / b) - lgamma(t + power * b))
    return form1, form2


def ml_moment(p: MLParams, power: float) -> float:
    """E[M^power] for M ~ ML(beta, theta); asserts both printed forms agree."""
    if power < 0:
        raise ValueError("power must be >= 0")
    f1, f2 = ml_moment_forms(p, power)
    if f1 is not None and power > 0:
        assert abs(f1 / f2 - 1) < 1e-10, f"ML moment forms disagree: {f1} vs {f2}"
    return f2


def dirichlet_moment(params: Sequence[float], powers: Sequence[float]) -> float:
    """E[prod X_i^{k_i}] for (X_i) ~ Dir(params), real powers >= 0."""
    _check_positive("Dirichlet", *params)
    if len(params) != len(powers):
        raise ValueError("params and powers must have equal length")
    if any(k < 0 for k in powers):
        raise ValueError("powers must be >= 0")
    a = sum(params)
    k = sum(powers)
    out = lgamma(a) - lgamma(a + k)
    for ai, ki in zip(params, powers):
        out += lgamma(ai + ki) - lgamma(ai)
    return exp(out)


def pd_mixed_moment(beta: float, theta: float, powers: Sequence[float]) -> float:
    """E[ sum over distinct indices of P_{i_1}^{k_1} ... P_{i_n}^{k_n} ]
    for (P_i) ~ PD(beta, theta); every power must be >= 1."""
    MLParams(beta, theta)  # domain check
    if theta == 0:
        raise ValueError("theta = 0 hits a Gamma pole; not supported")
    if any(k < 1 for k in powers):
        raise ValueError("mixed-moment powers must be >= 1")
    n = len(powers)
    out = lgamma(theta) - lgamma(theta + sum(powers))
    out += lgamma(theta / beta + n) - lgamma(theta / beta)
    for k in powers:
        out += np.log(beta) + lgamma(k - beta) - lgamma(1 - beta)
    return exp(out)


def beta_moment(a: float, b: float, p: float = 1.0, q: float = 0.0) -> float:
    """E[B^p (1-B)^q] for B ~ Beta(a, b)."""
    _check_positive("Beta", a, b)
    return exp(
        lgamma(a + b) - lgamma(a + b + p + q) + lgamma(a + p) - lgamma(a) + lgamma(b + q) - lgamma(b)
    )


# -- elementary samplers ------------------------------------------------------


def sample_beta(a: float, b: float, rng: RandomStream, size=None):
    _check_positive("Beta", a, b)
    return rng.beta(a, b, size)


def sample_dirichlet(params: Sequence[float], rng: RandomStream, size=None):
    _check_positive("Dirichlet", *params)
    # gamma-normalisation supports vectorised sizes uniformly
    if size is None:
        g = rng.gamma(np.asarray(params, dtype=float))
        return g / g.sum()
    g = rng.gamma(np.tile(np.asarray(params, dtype=float), (size, 1)))
    return g / g.sum(axis=1, keepdims=True)


def sample_pd(beta: float, theta: float, rng: RandomStream, truncation: int):
    """First `truncation` weights of PD(beta, theta), sorted decreasing,
    plus the remainder mass 1 - (their sum).  The remainder is never
    silently dropped."""
    MLParams(beta, theta)
    if truncation < 1:
        raise ValueError("truncation must be >= 1")
    i = np.arange(1, truncation + 1)
    b = rng.beta(1 - beta, theta + i * beta)
    stick = np.empty(truncation)
    stick[0] = b[0]
    rest = np.cumprod(1 - b)
    stick[1:] = b[1:] * rest[:-1]
    weights = np.sort(stick)[::-1]
    remainder = float(rest[-1])
    return weights, remainder


def sample_gem(beta: float, theta: float, rng: RandomStream, truncation: int):
    """Stick-breaking weights in size-biased (unsorted) order plus remainder."""
    MLParams(beta, theta)
    i = np.arange(1, truncation + 1)
    b = rng.beta(1 - beta, theta + i * beta)
    stick = np.empty(truncation)
    stick[0] = b[0]
    rest = np.cumprod(1 - b)
    stick[1:] = b[1:] * rest[:-1]
    return stick, float(rest[-1])


# -- positive stable and Mittag-Leffler --------------------------------------


def sample_positive_stable(beta: float, rng: RandomStream, size=None):
    """sigma with E[exp(-lambda sigma)] = exp(-lambda^beta), by the
    Zolotarev/Kanter representation sigma = (A(U)/E)^((1-beta)/beta)."""
    if not (0 < beta < 1):
        raise ValueError("need 0 < beta < 1")
    u = rng.random(size)
    e = rng.exponential(1.0, size)
    a = (
        np.sin((1 - beta) * pi * u)
        * np.sin(beta * pi * u) ** (beta / (1 - beta))
        / np.sin(pi * u) ** (1 / (1 - beta))
    )
    return (a / e) ** ((1 - beta) / beta)


def crp_table_counts(beta: float, theta: float, steps: int, rng: RandomStream, size):
    """K(steps): occupied tables after `steps` customers, vectorised."""
    MLParams(beta, theta)
    if steps < 1:
        raise ValueError("need at least one customer")
    k = np.ones(size if size is not None else 1)
    for t in range(1, steps):
        u = rng.random(k.shape)
        k += u < (theta + beta * k) / (t + theta)
    return k if size is not None else float(k[0])


def sample_ml(
    p: MLParams,
    rng: RandomStream,
    method: str = "crp",
    crp_steps: int = 10**6,
    size=None,
):
    """Draws approximately (or exactly, see module docstring) ML(beta, theta)."""
    ml_moment(p, 1.0)  # asserts the two printed moment forms agree before use
    b, t = p.beta, p.theta
    if method == "stable-exact":
        if t != 0:
            raise ValueError("stable-exact sampling only covers theta = 0")
        return sample_positive_stable(b, rng, size) ** (-b)
    if method == "crp":
        k = crp_table_counts(b, t, crp_steps, rng, size)
        return k / crp_steps**b
    if method == "crp-gamma":
        scalar = size is None
        k = crp_table_counts(b, t, crp_steps, rng, 1 if scalar else size)
        out = rng.gamma(k + t / b) * (crp_steps + t) ** (-b)
        return float(out[0]) if scalar else out
    raise ValueError(f"unsupported method {method!r} for theta={t}")


class MLPool:
    """Chunked vectorised source of ML(beta, theta) draws.

    The continuum samplers need many scalar ML draws; drawing them one CRP
    at a time would be hopeless, so pools refill in vectorised batches from
    a dedicated stream.  Consumption order is deterministic.
    """

    def __init__(self, params: MLParams, rng: RandomStream, method="crp-gamma",
                 crp_steps: int = 10**4, chunk: int = 4096):
        self.params = params
        self.rng = rng
        self.method = method
        self.crp_steps = crp_steps
        self.chunk = chunk
        self._buf = np.empty(0)
        self._pos = 0

    def draw(self) -> float:
        if self._pos >= len(self._buf):
            self._buf = sample_ml(
                self.params, self.rng, self.method, self.crp_steps, size=self.chunk
            )
            self._pos = 0
        v = float(self._buf[self._pos])
        self._pos += 1
        return v

    def draw_many(self, count: int) -> np.ndarray:
        out = np.empty(count)
        for i in range(count):
            out[i] = self.draw()
        return out


# -- size-biased picks --------------------------------------------------------


def size_biased_split(dir_params: Sequence[float], rng: RandomStream):
    """Sample X ~ Dir(params) and a size-biased index I (P(I=i|X) = X_i).

    Marginally P(I=i) = a_i / sum(a), and X | I=i ~ Dir(..., a_i + 1, ...).
    """
    _check_positive("Dirichlet", *dir_params)
    x = sample_dirichlet(dir_params, rng)
    u = rng.random()
    i = int(np.searchsorted(np.cumsum(x), u))
    i = min(i, len(x) - 1)
    return i, x


# -- joint marginal law of a marked tree (masses / local times / lengths) -----


@dataclass(frozen=True)
class StableMarginalLaw:
    """Shape data for the joint law of a marked tree inside the continuum
    tree: m edges and internal degrees (d_1..d_r), at a given alpha."""

    alpha: float
    num_edges: int
    internal_degrees: tuple[int, ...]

    def __post_init__(self):
        if not (1 < self.alpha < 2):
            raise ValueError("alpha must lie in (1,2)")
        if any(d < 3 for d in self.internal_degrees):
            raise ValueError("internal degrees must be >= 3")

    @property
    def num_leaves(self) -> int:
        # leaves + root of the marked tree: edges = vertices - 1
        r = len(self.internal_degrees)
        return self.num_edges + 1 - r - 1


@dataclass
class StableMarginalSample:
    edge_masses: np.ndarray
    vertex_masses: np.ndarray
    edge_local_times: np.ndarray
    vertex_local_times: np.ndarray
    edge_lengths: np.ndarray
    edge_branchpoint_splits: list  # per edge: (PD weights, remainder)
    edge_branchpoint_rights: list  # per edge: U[0,1] right-fractions
    edge_branchpoint_positions: list  # per edge: U[0,1] positions along the edge
    vertex_corner_splits: list  # per vertex: Dir(1,...,1) over its corners

    @property
    def total_local_time(self) -> float:
        return float(self.edge_local_times.sum() + self.vertex_local_times.sum())


def sample_stable_marginal(
    law: StableMarginalLaw, rng: RandomStream, pd_truncation: int = 64,
    ml_method: str = "crp-gamma", crp_steps: int = 10**4,
) -> StableMarginalSample:
    """One realization of the joint masses / local times / lengths.

    With m edges and internal degrees d_j:
      masses ~ Dir(1-1/a repeated m, (d_j-1-a)/a ...);
      local times N = mass^(1/a) * R with R ~ ML(1/a, theta_component);
      lengths L(e) = mass^(1-1/a) * R^(a-1) * Rbar, Rbar ~ ML(a-1, a-1);
      per-edge branchpoint splits ~ PD(a-1, a-1) with U[0,1] right-fractions
      and U[0,1] positions; per-vertex corner splits ~ Dir(1,...,1).
    """
    a = law.alpha
    m = law.num_edges
    degs = law.internal_degrees
    r = len(degs)
    params = [1 - 1 / a] * m + [(d - 1 - a) / a for d in degs]
    masses = sample_dirichlet(params, rng)
    edge_R = np.array([
        sample_ml(MLParams(1 / a, 1 - 1 / a), rng, ml_method, crp_steps)
        for _ in range(m)
    ])
    vertex_R = np.array([
        sample_ml(MLParams(1 / a, (d - 1 - a) / a), rng, ml_method, crp_steps)
        for d in degs
    ])
    rbar = np.array([
        sample_ml(MLParams(a - 1, a - 1), rng, ml_method, crp_steps) for _ in range(m)
    ])
    em = masses[:m]
    vm = masses[m:]
    edge_N = em ** (1 / a) * edge_R
    vertex_N = vm ** (1 / a) * vertex_R if r else np.empty(0)
    edge_L = em ** (1 - 1 / a) * edge_R ** (a - 1) * rbar

    splits, rights, positions, corners = [], [], [], []
    for _ in range(m):
        w, rem = sample_pd(a - 1, a - 1, rng, pd_truncation)
        splits.append((w, rem))
        rights.append(rng.random(pd_truncation))
        positions.append(rng.random(pd_truncation))
    for d in degs:
        corners.append(sample_dirichlet([1.0] * d, rng))
    return StableMarginalSample(
        edge_masses=em,
        vertex_masses=vm,
        edge_local_times=edge_N,
        vertex_local_times=vertex_N,
        edge_lengths=edge_L,
        edge_branchpoint_splits=splits,
        edge_branchpoint_rights=rights,
        edge_branchpoint_positions=positions,
        vertex_corner_splits=corners,
    )
