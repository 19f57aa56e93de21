"""Gradient ascent for distance-sum energies and checks on maximizing configurations."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .energy import discrete_energy, gram_matrix
from .kernels import EuclideanPow, GeodesicPow
from .sphere import PointSet, _check_dim, as_pointset, geodesic_matrix, uniform_array

log = logging.getLogger(__name__)

MIN_STEP = 1e-16
PLATEAU_PATIENCE = 200


@dataclass(frozen=True)
class OptimizerConfig:
    max_steps: int = 5000
    step_size: float = 0.05
    restarts: int = 8
    seed: int = 0
    grad_tol: float = 1e-8
    value_tol: float = 1e-15

    def __post_init__(self):
        for name in ("max_steps", "restarts"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        for name in ("step_size", "grad_tol", "value_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")


@dataclass
class OptimizationResult:
    points: PointSet
    value: float
    trace: list = field(default_factory=list)
    converged: bool = False
    restart: int = 0


def _energy(X, K):
    n = X.shape[0]
    return float(np.sum(K.pairwise(X))) / n**2


def _tangent_gradient(X, K):
    n = X.shape[0]
    D = K.derivative(gram_matrix(X))
    np.fill_diagonal(D, 0.0)
    g = (2.0 / n**2) * (D @ X)
    return g - np.sum(g * X, axis=1, keepdims=True) * X


def _ascend(X, K, cfg: OptimizerConfig):
    value = _energy(X, K)
    trace = [(0, value)]
    eta = cfg.step_size
    converged = False
    flat = 0
    for step in range(1, cfg.max_steps + 1):
        g = _tangent_gradient(X, K)
        if np.linalg.norm(g) < cfg.grad_tol:
            converged = True
            break
        while eta >= MIN_STEP:
            Y = X + eta * g
            Y /= np.linalg.norm(Y, axis=1, keepdims=True)
            new = _energy(Y, K)
            if new > value:
                break
            eta *= 0.5
        else:
            # no ascent direction at machine step sizes: a (possibly non-smooth) local max
            converged = True
            break
        flat = flat + 1 if new - value < cfg.value_tol else 0
        X, value = Y, new
        trace.append((step, value))
        eta = min(2.0 * eta, 1.0)
        if flat >= PLATEAU_PATIENCE:
            converged = True
            break
    return X, value, trace, converged


def maximize_distance_sum(n: int, d: int, K, cfg: OptimizerConfig | None = None) -> OptimizationResult:
    """Maximize ``(1/N^2) sum_ij K(z_i . z_j)`` over N points of S^d.

    Projected gradient ascent with backtracking, best of ``cfg.restarts`` random
    starts; restart ``r`` draws its start from ``(cfg.seed, r)``.
    """
    if int(n) != n or n < 2:
        raise ValueError(f"need at least 2 points, got {n!r}")
    d = _check_dim(d)
    if not isinstance(K, (GeodesicPow, EuclideanPow)):
        raise TypeError("only geodesic and Euclidean power kernels can be maximized")
    cfg = cfg or OptimizerConfig()
    best = None
    for r in range(cfg.restarts):
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, r]))
        X, value, trace, conv = _ascend(uniform_array(rng, int(n), d), K, cfg)
        log.debug("restart %d: value %.15g after %d steps", r, value, trace[-1][0])
        if best is None or value > best.value:
            best = OptimizationResult(PointSet(X), value, trace, conv, r)
    return best


def geodesic_distance_sum(Z) -> float:
    """Ordered double sum of geodesic distances (diagonal included, so unnormalized ``N^2 E``)."""
    Z = as_pointset(Z)
    return len(Z) ** 2 * discrete_energy(Z, GeodesicPow(1.0))


def add_antipodal_pair(Z, p) -> PointSet:
    Z = as_pointset(Z)
    p = np.asarray(p, dtype=float)
    p = p / np.linalg.norm(p)
    return PointSet(np.vstack([Z.points, p, -p]))


def verify_hemisphere_balance(Z, num_directions: int, seed: int) -> int:
    """Largest ``|#(Z in H(x)) - #(Z in H(-x))|`` over random directions ``x``.

    Directions within 1e-12 of some ``z^perp`` are redrawn.
    """
    X = as_pointset(Z).points
    if int(num_directions) != num_directions or num_directions < 1:
        raise ValueError("num_directions must be a positive integer")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    d = X.shape[1] - 1
    worst = 0
    todo = int(num_directions)
    while todo:
        x = uniform_array(rng, todo, d)
        s = x @ X.T
        ok = np.all(np.abs(s) >= 1e-12, axis=1)
        s = s[ok]
        if s.size:
            worst = max(worst, int(np.max(np.abs(np.sum(s > 0, axis=1) - np.sum(s < 0, axis=1)))))
        todo -= int(ok.sum())
    return worst


def _antipode_costs(X):
    # cost[i, j] = d(z_i, -z_j) = 1 - d(z_i, z_j)
    return 1.0 - geodesic_matrix(X)


def _has_matching(cost, tau, spare):
    n = cost.shape[0]
    g = nx.Graph()
    g.add_nodes_from(range(n))
    iu, ju = np.nonzero(np.triu(cost <= tau, 1))
    g.add_edges_from(zip(iu.tolist(), ju.tolist()))
    need = n // 2
    if spare is not None:
        # a dummy vertex absorbs the unmatched point of an odd set
        g.add_edges_from((int(i), n) for i in np.flatnonzero(spare <= tau))
        need = (n + 1) // 2
    return len(nx.max_weight_matching(g, maxcardinality=True)) == need


def symmetry_defect(Z) -> float:
    """Bottleneck distance from central symmetry.

    Minimum over pairings of the largest ``d(z, -z')`` within a pair. For odd sets
    one point stays unpaired and is charged its distance to the nearest antipode
    of another point. Exact: bisection over candidate thresholds with a maximum
    cardinality matching test.
    """
    X = as_pointset(Z).points
    n = X.shape[0]
    if n == 1:
        return 1.0
    cost = _antipode_costs(X)
    np.fill_diagonal(cost, np.inf)
    spare = cost.min(axis=1) if n % 2 else None
    cands = np.unique(np.concatenate([cost[np.triu_indices(n, 1)], spare if spare is not None else []]))
    lo, hi = 0, cands.size - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _has_matching(cost, cands[mid], spare):
            hi = mid
        else:
            lo = mid + 1
    return float(max(cands[lo], 0.0))


def _symmetric_part(X, tol):
    """Indices left after removing a maximum set of disjoint near-antipodal pairs."""
    cost = _antipode_costs(X)
    g = nx.Graph()
    g.add_nodes_from(range(X.shape[0]))
    iu, ju = np.nonzero(np.triu(cost <= tol, 1))
    g.add_edges_from(zip(iu.tolist(), ju.tolist()))
    matched = {v for e in nx.max_weight_matching(g, maxcardinality=True) for v in e}
    return [i for i in range(X.shape[0]) if i not in matched]


@dataclass(frozen=True)
class OddMaximizerReport:
    value_gap: float
    balance_ok: bool
    coplanarity_residual: float
    max_imbalance: int
    residual_points: int


def check_odd_maximizer_structure(Z, num_directions: int = 2000, seed: int = 0,
                                  pair_tol: float = 1e-6) -> OddMaximizerReport:
    """Evidence (not proof) that an odd configuration maximizes the geodesic distance sum.

    ``coplanarity_residual`` is the third singular value of the points left after
    stripping near-antipodal pairs; it vanishes when they share a great circle.
    """
    Z = as_pointset(Z)
    n = len(Z)
    if n % 2 == 0:
        raise ValueError("structure check applies to odd configurations")
    gap = (0.5 - 0.5 / n**2) - discrete_energy(Z, GeodesicPow(1.0))
    imbalance = verify_hemisphere_balance(Z, num_directions, seed)
    rest = Z.points[_symmetric_part(Z.points, pair_tol)]
    sv = np.linalg.svd(rest, compute_uv=False) if rest.shape[0] else np.zeros(0)
    resid = float(sv[2]) if sv.size > 2 else 0.0
    return OddMaximizerReport(float(gap), imbalance <= 1, resid, imbalance, rest.shape[0])


def circle_gap_criterion(angles) -> bool:
    """For odd N on S^1: every run of ceil(N/2) consecutive central angles sums to >= pi."""
    a = np.sort(np.mod(np.asarray(angles, dtype=float), 2.0 * np.pi))
    n = a.size
    gaps = np.diff(np.concatenate([a, [a[0] + 2.0 * np.pi]]))
    k = -(-n // 2)
    runs = [np.sum(np.roll(gaps, -i)[:k]) for i in range(n)]
    return bool(min(runs) >= np.pi - 1e-12)
