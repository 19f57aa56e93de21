"""Points, distances, sampling and cap measures on the unit sphere S^d.

Points are stored as rows of a float array with ``d + 1`` columns.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import integrate
from scipy.spatial.distance import cdist
from scipy.special import betainc, gammaln

NORM_TOL = 1e-12
NORM_REJECT = 1e-6
MASS_TOL = 1e-12

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


class DimensionError(ValueError):
    """Raised when objects living on spheres of different dimensions meet."""


def _normalize_rows(coords: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(coords, axis=-1)
    bad = np.abs(norms - 1.0) > NORM_REJECT
    if np.any(bad):
        worst = float(np.max(np.abs(norms - 1.0)))
        raise ValueError(
            f"coordinates are not unit vectors (norm deviation {worst:.3g} > {NORM_REJECT})"
        )
    return coords / norms[..., None]


def as_sphere_point(x, dim: int | None = None) -> np.ndarray:
    """Validate ``x`` as a single point of S^dim and return it renormalized."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise ValueError("a sphere point needs a 1-d coordinate vector of length >= 2")
    if dim is not None and x.size != dim + 1:
        raise DimensionError(f"expected a point of S^{dim}, got {x.size} coordinates")
    return _normalize_rows(x)


@dataclass(frozen=True)
class PointSet:
    """An ordered, non-empty configuration of points on S^d."""

    points: np.ndarray
    label: str | None = None

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] < 2:
            raise ValueError("a point set needs shape (N, d+1) with N >= 1, d >= 1")
        pts = _normalize_rows(pts)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1] - 1

    def __len__(self) -> int:
        return self.points.shape[0]

    def as_measure(self) -> "WeightedMeasure":
        n = len(self)
        return WeightedMeasure(self.points, np.full(n, 1.0 / n))


@dataclass(frozen=True)
class WeightedMeasure:
    """Finitely supported signed measure with total mass one.

    Weights may be negative; they must sum to one within ``MASS_TOL``.
    """

    points: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] < 2:
            raise ValueError("a measure needs atoms of shape (N, d+1) with N >= 1, d >= 1")
        pts = _normalize_rows(pts)
        if self.weights is None:
            w = np.full(pts.shape[0], 1.0 / pts.shape[0])
        else:
            w = np.asarray(self.weights, dtype=float).ravel()
        if w.shape[0] != pts.shape[0]:
            raise ValueError(f"{pts.shape[0]} atoms but {w.shape[0]} weights")
        total = float(np.sum(w))
        if abs(total - 1.0) > MASS_TOL:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        pts.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return self.points.shape[1] - 1

    @property
    def is_nonnegative(self) -> bool:
        return bool(np.all(self.weights >= 0))

    def __len__(self) -> int:
        return self.points.shape[0]


def as_measure(mu, dim: int | None = None) -> WeightedMeasure:
    """Coerce a point set, measure or raw ``(N, d+1)`` array to a measure."""
    if isinstance(mu, WeightedMeasure):
        out = mu
    elif isinstance(mu, PointSet):
        out = mu.as_measure()
    else:
        out = PointSet(mu).as_measure()
    if dim is not None and out.dim != dim:
        raise DimensionError(f"measure lives on S^{out.dim}, expected S^{dim}")
    return out


def as_pointset(Z, dim: int | None = None) -> PointSet:
    if isinstance(Z, PointSet):
        out = Z
    elif isinstance(Z, WeightedMeasure):
        raise TypeError("expected an equal-weight point set, got a weighted measure")
    else:
        out = PointSet(Z)
    if dim is not None and out.dim != dim:
        raise DimensionError(f"point set lives on S^{out.dim}, expected S^{dim}")
    return out


def _check_dim(d) -> int:
    if int(d) != d or d < 1:
        raise ValueError(f"sphere dimension must be an integer >= 1, got {d!r}")
    return int(d)


def _pair(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != y.shape[-1]:
        raise DimensionError(f"points of S^{x.shape[-1] - 1} and S^{y.shape[-1] - 1}")
    return x, y


def inner(x, y) -> np.ndarray:
    """Inner product clamped to [-1, 1]."""
    x, y = _pair(x, y)
    return np.clip(np.sum(x * y, axis=-1), -1.0, 1.0)


def geodesic_distance(x, y):
    """Normalized geodesic distance ``arccos(x.y) / pi``; antipodes are at distance 1."""
    return np.arccos(inner(x, y)) / np.pi


def euclidean_distance(x, y):
    return np.sqrt(2.0 - 2.0 * inner(x, y))


def gram(X: np.ndarray) -> np.ndarray:
    """Clamped Gram matrix of the rows of ``X``."""
    G = X @ X.T
    return np.clip(G, -1.0, 1.0)


def chord_matrix(X: np.ndarray) -> np.ndarray:
    """Pairwise ``||x_i - x_j||`` from coordinate differences (exact zeros on the diagonal)."""
    return cdist(X, X)


def geodesic_matrix(X: np.ndarray) -> np.ndarray:
    """Pairwise normalized geodesic distances, accurate near 0 and near 1.

    Uses ``theta = 2 atan2(||x - y||, ||x + y||)``; ``arccos`` of a Gram entry
    loses half the digits when the points are nearly equal or antipodal.
    """
    return 2.0 * np.arctan2(cdist(X, X), cdist(X, -X)) / np.pi


def _rng(seed) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def sample_uniform(d: int, n: int, seed: int) -> PointSet:
    """``n`` i.i.d. uniform points on S^d (normalized Gaussian vectors)."""
    d = _check_dim(d)
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    return PointSet(uniform_array(_rng(seed), int(n), d))


def uniform_array(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    g = rng.standard_normal((n, d + 1))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def fibonacci_points(n: int) -> PointSet:
    """Golden-angle spiral on S^2 with heights ``1 - (2i + 1) / n``.

    ``n == 1`` returns the north pole.
    """
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n!r}")
    n = int(n)
    if n == 1:
        return PointSet(np.array([[0.0, 0.0, 1.0]]), label="fibonacci-1")
    i = np.arange(n)
    z = 1.0 - (2.0 * i + 1.0) / n
    r = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return PointSet(pts, label=f"fibonacci-{n}")


def random_rotation(dim: int, seed: int) -> np.ndarray:
    """Haar-random orthogonal matrix acting on R^(dim+1)."""
    from scipy.stats import ortho_group

    return ortho_group.rvs(dim + 1, random_state=np.random.default_rng(np.random.SeedSequence(int(seed))))


# --- constants -------------------------------------------------------------


def area_ratio(d: int) -> float:
    """``omega_{d-1} / omega_d``, the density constant of ``x.z`` under sigma."""
    d = _check_dim(d)
    return float(np.exp(gammaln((d + 1) / 2.0) - gammaln(d / 2.0) - 0.5 * np.log(np.pi)))


def constant_Cd(d: int) -> float:
    """The constant ``(1/d) Gamma((d+1)/2) / (sqrt(pi) Gamma(d/2))``."""
    d = _check_dim(d)
    return area_ratio(d) / d


# --- cap measures ----------------------------------------------------------


@lru_cache(maxsize=64)
def _gl(n: int):
    return np.polynomial.legendre.leggauss(n)


def cap_measure(t, d: int):
    """sigma-measure of the open cap ``{z : x.z > t}``; vectorized over ``t``.

    Under sigma, ``(1 - x.z) / 2`` is Beta(d/2, d/2), so this is a regularized
    incomplete beta function.
    """
    d = _check_dim(d)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < -1.0) or np.any(t_arr > 1.0) or np.any(np.isnan(t_arr)):
        raise ValueError("cap height t must lie in [-1, 1]")
    out = betainc(0.5 * d, 0.5 * d, 0.5 * (1.0 - t_arr))
    return float(out) if out.ndim == 0 else out


def _arc_overlap(beta, alpha):
    """Length of the intersection of arcs of half-width ``beta`` centered at 0 and ``alpha``."""
    beta = np.clip(beta, 0.0, np.pi)
    total = 0.0
    for k in (-1, 0, 1):
        shift = 2.0 * np.pi * k
        lo = np.maximum(-beta, alpha - beta + shift)
        hi = np.minimum(beta, alpha + beta + shift)
        total = total + np.maximum(0.0, hi - lo)
    return np.where(beta >= np.pi, 2.0 * np.pi, total)


def _half_width(t, r):
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(r > 0, t / np.where(r > 0, r, 1.0), np.sign(t) * np.inf)
    ratio = np.where((r == 0) & (t == 0), 0.0, ratio)
    return np.arccos(np.clip(ratio, -1.0, 1.0))


def cap_intersection_measure(x, y, t: float, epsabs: float = 1e-12) -> float:
    """sigma-measure of ``C(x,t) ∩ C(y,t)`` for caps of equal height ``t``.

    The projection of a uniform ``z`` onto the plane spanned by ``x`` and ``y``
    has uniform angle and a radius ``r`` with ``(1 - r^2)^((d-1)/2)`` uniform on
    [0, 1]. For fixed ``r`` the admissible angles form two arcs whose overlap is
    explicit, leaving one adaptive quadrature in that uniform variable.
    """
    x, y = _pair(as_sphere_point(x), as_sphere_point(y))
    d = x.size - 1
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise ValueError("cap height t must lie in [-1, 1]")
    alpha = float(np.arccos(inner(x, y)))
    if d == 1:
        return float(_arc_overlap(np.arccos(t), alpha) / (2.0 * np.pi))

    p = (d - 1) / 2.0

    def radius(q):
        return np.sqrt(np.maximum(0.0, 1.0 - q ** (1.0 / p)))

    def integrand(q):
        return _arc_overlap(_half_width(t, radius(q)), alpha) / (2.0 * np.pi)

    breaks = set()
    for beta in (0.5 * alpha, np.pi - 0.5 * alpha):
        c = np.cos(beta)
        if abs(c) > 1e-15:
            r = t / c
            if 0.0 < r < 1.0:
                breaks.add((1.0 - r * r) ** p)
    if 0.0 < abs(t) < 1.0:
        breaks.add((1.0 - t * t) ** p)
    breaks = sorted(b for b in breaks if 0.0 < b < 1.0)
    edges = [0.0, *breaks, 1.0]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        # smoothstep substitution flattens the square-root kinks at the breakpoints
        def g(s, a=a, h=b - a):
            return integrand(a + h * s * s * (3.0 - 2.0 * s)) * 6.0 * s * (1.0 - s) * h

        val, _ = integrate.quad(g, 0.0, 1.0, epsabs=epsabs, epsrel=1e-12, limit=200)
        total += val
    return float(total)


def zonal_pair_average(g, rho: float, d: int, order: int = 96) -> float:
    """Average of ``g(x.z, y.z)`` over uniform ``z`` when ``x.y = rho``.

    ``g`` must accept broadcast arrays. Uses Gauss-Legendre in the polar angle
    of the projection and the trapezoid rule (spectral for periodic integrands)
    in the azimuth.
    """
    d = _check_dim(d)
    alpha = float(np.arccos(np.clip(rho, -1.0, 1.0)))
    m_phi = 2 * order + 8
    phi = 2.0 * np.pi * np.arange(m_phi) / m_phi
    if d == 1:
        return float(np.mean(g(np.cos(phi), np.cos(phi - alpha))))
    xg, wg = _gl(order)
    psi = 0.25 * np.pi * (xg + 1.0)
    dens = (d - 1) * np.sin(psi) * np.cos(psi) ** (d - 2) * 0.25 * np.pi * wg
    r = np.sin(psi)[:, None]
    vals = g(r * np.cos(phi)[None, :], r * np.cos(phi - alpha)[None, :])
    return float(dens @ vals.mean(axis=1))
