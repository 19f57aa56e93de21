"""Closed-form L2 discrepancies and Monte Carlo estimates of their defining integrals.

Test families: caps ``C(x,t) = {z : x.z > t}`` averaged over ``t`` in [-1, 1]
(un-normalized ``dt``), caps of one fixed height, hemispheres ``C(x,0)``,
wedges ``{z : sign(x.z) != sign(y.z)}`` and slices ``{z : x.z > 0, y.z < 0}``.
All indicator sets are open: a zero inner product is on neither side.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .energy import continuous_energy_sigma, discrete_energy, gram_matrix, mean_euclidean_distance
from .kernels import EuclideanPow, GeodesicPow, SliceSquare, WedgeSquare
from .montecarlo import MCEstimate, mc_mean
from .sphere import (
    DimensionError,
    as_measure,
    cap_intersection_measure,
    cap_measure,
    constant_Cd,
    uniform_array,
)

FAMILIES = ("cap", "cap-t", "hemisphere", "wedge", "slice")


@dataclass(frozen=True)
class DiscrepancyFamily:
    kind: str
    t: float | None = None

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"unknown family {self.kind!r}; choose from {FAMILIES}")
        if self.kind == "cap-t":
            if self.t is None or not -1.0 <= self.t <= 1.0:
                raise ValueError("fixed-height caps need t in [-1, 1]")
            object.__setattr__(self, "t", float(self.t))
        elif self.t is not None:
            raise ValueError(f"family {self.kind!r} takes no height")

    @classmethod
    def parse(cls, kind: str, t: float | None = None) -> "DiscrepancyFamily":
        kind = kind.lower()
        if kind == "cap" and t is not None:
            kind = "cap-t"
        return cls(kind, t if kind == "cap-t" else None)


Cap = DiscrepancyFamily("cap")
Hemisphere = DiscrepancyFamily("hemisphere")
Wedge = DiscrepancyFamily("wedge")
Slice = DiscrepancyFamily("slice")


def CapFixedT(t: float) -> DiscrepancyFamily:
    return DiscrepancyFamily("cap-t", t)


def cap_kernel(d: int):
    """``1 - C_d ||x - y||``, the t-integrated cap intersection."""
    c = constant_Cd(d)
    return lambda t: 1.0 - c * np.sqrt(2.0 - 2.0 * np.clip(t, -1.0, 1.0))


def cap_discrepancy_sq(mu) -> float:
    """Squared cap discrepancy from the Euclidean distance energy.

    Signed measures with ``d >= 2`` go through the Gegenbauer expansion of the
    cap kernel (positive-definiteness check plus its mean ``a_0``).
    """
    mu = as_measure(mu)
    d = mu.dim
    if mu.is_nonnegative or d == 1:
        return constant_Cd(d) * (mean_euclidean_distance(d) - discrete_energy(mu, EuclideanPow(1.0)))
    from .gegenbauer import NotPositiveDefiniteError, expand_kernel, lambda_for_dim

    F = cap_kernel(d)
    Fexp = expand_kernel(F, lambda_for_dim(d))
    neg = np.flatnonzero(Fexp.coeffs[1:] < -1e-9)
    if neg.size:
        raise NotPositiveDefiniteError(int(neg[0]) + 1, float(Fexp.coeffs[neg[0] + 1]))
    return discrete_energy(mu, F) - Fexp.mean


def hemisphere_discrepancy_sq(mu) -> float:
    mu = as_measure(mu)
    return 0.5 * (0.5 - discrete_energy(mu, GeodesicPow(1.0)))


def wedge_discrepancy_sq(Z) -> float:
    mu = as_measure(Z)
    K = WedgeSquare()
    return discrete_energy(mu, K) - continuous_energy_sigma(K, mu.dim)


def slice_discrepancy_sq(Z) -> float:
    mu = as_measure(Z)
    K = SliceSquare()
    return 0.25 * (discrete_energy(mu, K) - continuous_energy_sigma(K, mu.dim))


def cap_fixed_t_discrepancy_sq(Z, t: float) -> float:
    """Pairwise cap-intersection form for a single cap height ``t``."""
    mu = as_measure(Z)
    t = float(t)
    if not -1.0 <= t <= 1.0:
        raise ValueError("cap height t must lie in [-1, 1]")
    X, w = mu.points, mu.weights
    cap = cap_measure(t, mu.dim)
    total = float(np.sum(w**2)) * cap
    for i in range(len(mu)):
        for j in range(i + 1, len(mu)):
            total += 2.0 * w[i] * w[j] * cap_intersection_measure(X[i], X[j], t)
    return total - cap**2


def cap_discrepancy_sq_by_heights(Z, epsabs: float = 1e-8) -> float:
    """Integrate the fixed-height form over ``t`` in [-1, 1] (slow; small sets only)."""
    mu = as_measure(Z)
    G = gram_matrix(mu.points)
    iu = np.triu_indices(len(mu), 1)
    kinks = np.cos(0.5 * np.arccos(G[iu]))
    pts = sorted({0.0, *np.round(kinks, 15), *np.round(-kinks, 15)} - {-1.0, 1.0})
    val, _ = integrate.quad(lambda t: cap_fixed_t_discrepancy_sq(mu, t), -1.0, 1.0,
                            points=pts or None, epsabs=epsabs, limit=400)
    return val


def discrepancy_sq(target, family: DiscrepancyFamily) -> float:
    """Closed-form squared discrepancy for any family."""
    if family.kind == "cap":
        return cap_discrepancy_sq(target)
    if family.kind == "cap-t":
        return cap_fixed_t_discrepancy_sq(target, family.t)
    if family.kind == "hemisphere":
        return hemisphere_discrepancy_sq(target)
    if family.kind == "wedge":
        return wedge_discrepancy_sq(target)
    return slice_discrepancy_sq(target)


def _wedge_indicator(sx, sy):
    return ((sx > 0) & (sy < 0)) | ((sx < 0) & (sy > 0))


def mc_discrepancy_sq(target, family: DiscrepancyFamily, samples: int, seed: int) -> MCEstimate:
    """Unbiased MC estimate of the defining integral of the squared discrepancy."""
    mu = as_measure(target)
    Z, w, d = mu.points, mu.weights, mu.dim
    kind = family.kind

    if kind == "cap":
        def draw(rng, m):
            x = uniform_array(rng, m, d)
            t = rng.uniform(-1.0, 1.0, m)
            hits = (x @ Z.T > t[:, None]).astype(float) @ w
            # the t-integral is over [-1, 1] without normalization
            return 2.0 * (hits - cap_measure(t, d)) ** 2
    elif kind in ("cap-t", "hemisphere"):
        t = family.t if kind == "cap-t" else 0.0
        cap = 0.5 if kind == "hemisphere" else cap_measure(t, d)

        def draw(rng, m):
            x = uniform_array(rng, m, d)
            return ((x @ Z.T > t).astype(float) @ w - cap) ** 2
    else:
        slice_ = kind == "slice"

        def draw(rng, m):
            x = uniform_array(rng, m, d)
            y = uniform_array(rng, m, d)
            sx, sy = x @ Z.T, y @ Z.T
            dist = np.arccos(np.clip(np.sum(x * y, axis=1), -1.0, 1.0)) / np.pi
            if slice_:
                hits = ((sx > 0) & (sy < 0)).astype(float) @ w
                return (hits - 0.5 * dist) ** 2
            return (_wedge_indicator(sx, sy).astype(float) @ w - dist) ** 2

    return mc_mean(draw, samples, seed)


def hamming_distance(x, y, Z) -> float:
    """Fraction of the hyperplanes ``z^perp`` (z in Z) strictly separating ``x`` and ``y``."""
    Zp = as_measure(Z).points
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape[-1] != Zp.shape[1] or y.shape[-1] != Zp.shape[1]:
        raise DimensionError("points and configuration live on different spheres")
    return float(np.mean(_wedge_indicator(Zp @ x, Zp @ y)))
