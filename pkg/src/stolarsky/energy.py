"""Discrete and continuous energies of zonal kernels on S^d."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .kernels import EuclideanPow, GeodesicPow, Kernel, SliceSquare, WedgeSquare
from .sphere import DimensionError, _check_dim, area_ratio, as_measure


def gram_matrix(points: np.ndarray) -> np.ndarray:
    """Clamped Gram matrix with an exact unit diagonal."""
    G = np.clip(points @ points.T, -1.0, 1.0)
    np.fill_diagonal(G, 1.0)
    return G


def discrete_energy(mu, K) -> float:
    """``sum_ij w_i w_j K(z_i . z_j)`` with the diagonal included.

    ``K`` is a :class:`Kernel` (stable pairwise distances) or any callable of ``t``.
    """
    mu = as_measure(mu)
    w = mu.weights
    if isinstance(K, Kernel):
        M = K.pairwise(mu.points)
    else:
        M = np.asarray(K(gram_matrix(mu.points)), dtype=float)
    return float(w @ M @ w)


def vd(d: int) -> float:
    """Mean squared normalized geodesic distance on S^d, by the two-step recursion.

    Seeds: ``V_0 = 1/2`` and ``V_1 = 1/3``; ``V_d = V_{d-2} - 2 / (pi^2 (d-1)^2)``.
    """
    if int(d) != d or d < 0:
        raise ValueError(f"d must be a non-negative integer, got {d!r}")
    d = int(d)
    v = 0.5 if d % 2 == 0 else 1.0 / 3.0
    for m in range(2 + d % 2, d + 1, 2):
        v -= 2.0 / (np.pi**2 * (m - 1) ** 2)
    return v


def vd_closed(d: int) -> float:
    """Same quantity from the finite odd/even sums (independent of the recursion loop)."""
    if int(d) != d or d < 0:
        raise ValueError(f"d must be a non-negative integer, got {d!r}")
    d = int(d)
    if d % 2:
        k = np.arange(1, (d - 1) // 2 + 1)
        return float(1.0 / 3.0 - 2.0 / np.pi**2 * np.sum(1.0 / (2.0 * k) ** 2))
    k = np.arange(1, d // 2 + 1)
    return float(0.5 - 2.0 / np.pi**2 * np.sum(1.0 / (2.0 * k - 1.0) ** 2))


def _closed_form(K, d: int) -> float | None:
    if isinstance(K, GeodesicPow) and K.delta == 1.0:
        return 0.5
    if isinstance(K, GeodesicPow) and K.delta == 2.0:
        return vd(d)
    if isinstance(K, EuclideanPow) and K.delta == 2.0:
        return 2.0
    if isinstance(K, WedgeSquare):
        return vd(d) - 0.25
    if isinstance(K, SliceSquare):
        return vd(d)
    return None


def sigma_energy_quad(K, d: int, epsabs: float = 1e-13) -> float:
    """``I_K(sigma)`` by adaptive quadrature in the angle between the two points."""
    d = _check_dim(d)

    def integrand(theta):
        return K(np.cos(theta)) * np.sin(theta) ** (d - 1)

    total = 0.0
    for a, b in ((0.0, 0.5 * np.pi), (0.5 * np.pi, np.pi)):
        val, _ = integrate.quad(integrand, a, b, epsabs=epsabs, epsrel=1e-13, limit=400)
        total += val
    return area_ratio(d) * total


def continuous_energy_sigma(K, d: int, method: str = "auto") -> float:
    """``I_K(sigma)``; ``method`` is ``"auto"`` (closed form when known) or ``"quad"``."""
    d = _check_dim(d)
    if method not in ("auto", "quad"):
        raise ValueError(f"method must be 'auto' or 'quad', got {method!r}")
    if method == "auto":
        closed = _closed_form(K, d)
        if closed is not None:
            return closed
    return sigma_energy_quad(K, d)


def mean_euclidean_distance(d: int) -> float:
    return continuous_energy_sigma(EuclideanPow(1.0), d)


@dataclass(frozen=True)
class EnergyReport:
    kernel: Kernel
    discrete: float
    continuous_sigma: float
    gap: float


def energy_gap(mu, K, d: int) -> EnergyReport:
    mu = as_measure(mu)
    d = _check_dim(d)
    if mu.dim != d:
        raise DimensionError(f"measure lives on S^{mu.dim}, expected S^{d}")
    disc = discrete_energy(mu, K)
    cont = continuous_energy_sigma(K, d)
    return EnergyReport(K, disc, cont, disc - cont)


def antipodal_pair(d: int) -> np.ndarray:
    p = np.zeros(d + 1)
    p[-1] = 1.0
    return np.stack([p, -p])


def measure_energy_extremes(delta: float, d: int) -> tuple[float, float]:
    """Geodesic ``delta``-energy of sigma and of the antipodal two-point measure."""
    K = GeodesicPow(delta)
    d = _check_dim(d)
    return continuous_energy_sigma(K, d), discrete_energy(antipodal_pair(d), K)
