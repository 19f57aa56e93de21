"""Gegenbauer expansions of zonal kernels on S^d, d >= 2.

Coefficients follow the normalization

    F(t) ~ sum_n a_n (n + lam) / lam * C_n^lam(t),     lam = (d - 1) / 2,

under which ``a_0 = I_F(sigma)``, the Funk-Hecke multiplier of degree ``n``
is ``a_n``, and the self-convolution of ``f`` has coefficients ``a_n^2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .energy import discrete_energy
from .kernels import ExpansionKernel
from .montecarlo import MCEstimate, mc_mean
from .sphere import (
    DimensionError,
    WeightedMeasure,
    _gl,
    as_measure,
    uniform_array,
    zonal_pair_average,
)

DEFAULT_NODES = 2048
DEFAULT_NMAX = 64
PD_TOL = 1e-9
# coefficients this small relative to the largest are treated as zero
ROUNDOFF_REL = 1e-13


class NotPositiveDefiniteError(ValueError):
    def __init__(self, n: int, value: float):
        super().__init__(f"Gegenbauer coefficient {n} is negative ({value:.3e})")
        self.n = n
        self.value = value


class QuadratureError(RuntimeError):
    pass


def lambda_for_dim(d: int) -> float:
    if int(d) != d or d < 2:
        raise ValueError(f"Gegenbauer machinery needs d >= 2, got {d!r}")
    return (d - 1) / 2.0


def _check_lambda(lam):
    if not lam > 0:
        raise ValueError(f"lambda must be > 0, got {lam!r}")
    return float(lam)


def gegenbauer_table(n_max: int, lam: float, t) -> np.ndarray:
    """Rows ``C_0^lam(t) .. C_{n_max}^lam(t)`` by the three-term recurrence."""
    lam = _check_lambda(lam)
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max must be a non-negative integer, got {n_max!r}")
    t = np.asarray(t, dtype=float)
    out = np.empty((int(n_max) + 1,) + t.shape)
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 2.0 * lam * t
    for n in range(2, int(n_max) + 1):
        out[n] = (2.0 * (n + lam - 1.0) * t * out[n - 1] - (n + 2.0 * lam - 2.0) * out[n - 2]) / n
    return out


def gegenbauer_poly(n: int, lam: float, t):
    """``C_n^lam(t)``."""
    if int(n) != n or n < 0:
        raise ValueError(f"degree must be a non-negative integer, got {n!r}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(np.abs(t_arr) > 1.0):
        raise ValueError("t must lie in [-1, 1]")
    val = gegenbauer_table(int(n), lam, t_arr)[int(n)]
    return float(val) if val.ndim == 0 else val


@dataclass(frozen=True)
class GegenbauerExpansion:
    """Coefficients ``a_0 .. a_{n_max}`` of a zonal kernel for a given ``lam``.

    ``truncation_error`` is the weighted L2 distance between the source kernel
    and the truncated series, when known.
    """

    lam: float
    coeffs: np.ndarray
    truncation_error: float | None = None

    def __post_init__(self):
        _check_lambda(self.lam)
        c = np.asarray(self.coeffs, dtype=float).ravel()
        if c.size == 0:
            raise ValueError("an expansion needs at least one coefficient")
        c.setflags(write=False)
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "coeffs", c)

    @property
    def n_max(self) -> int:
        return self.coeffs.size - 1

    @property
    def dim(self) -> int:
        return int(round(2 * self.lam + 1))

    @property
    def mean(self) -> float:
        """``a_0``, the sigma-average of the kernel."""
        return float(self.coeffs[0])

    def multipliers(self) -> np.ndarray:
        n = np.arange(self.n_max + 1)
        return self.coeffs * (n + self.lam) / self.lam

    def __call__(self, t):
        t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
        table = gegenbauer_table(self.n_max, self.lam, t)
        return np.tensordot(self.multipliers(), table, axes=1)

    def kernel(self) -> ExpansionKernel:
        return ExpansionKernel(self)


def _angle_rule(nodes: int):
    """Gauss-Legendre in theta on [0, pi/2] and [pi/2, pi]."""
    half = nodes // 2
    x, w = _gl(half)
    theta = np.concatenate([0.25 * np.pi * (x + 1.0), 0.25 * np.pi * (x + 3.0)])
    weights = np.concatenate([w, w]) * 0.25 * np.pi
    return theta, weights


def _project(F, lam, n_max, nodes):
    theta, w = _angle_rule(nodes)
    t = np.cos(theta)
    # w_lam(t) dt = sin^(2 lam) theta dtheta
    w = w * np.sin(theta) ** (2.0 * lam)
    vals = np.asarray(F(t), dtype=float) * np.ones_like(t)
    table = gegenbauer_table(n_max, lam, t)
    num = table @ (w * vals)
    den = (table**2) @ w
    n = np.arange(n_max + 1)
    coeffs = lam / (n + lam) * num / den
    recon = np.tensordot(coeffs * (n + lam) / lam, table, axes=1)
    err = np.sqrt(np.sum(w * (vals - recon) ** 2) / np.sum(w))
    return coeffs, float(err)


def expand_kernel(F, lam: float, n_max: int = DEFAULT_NMAX, nodes: int = DEFAULT_NODES,
                  check_tol: float = 1e-8) -> GegenbauerExpansion:
    """Project the kernel ``F`` onto ``C_0^lam .. C_{n_max}^lam``.

    Integrals run in the angle ``theta = arccos t`` with the weight folded in,
    split at ``t = 0`` so kernels with a jump there (hemisphere indicators) are
    integrated exactly. A half-resolution pass guards against non-convergence.
    """
    lam = _check_lambda(lam)
    if int(n_max) != n_max or n_max < 0:
        raise ValueError(f"n_max must be a non-negative integer, got {n_max!r}")
    if nodes < 4 * (n_max + 1):
        raise ValueError(f"{nodes} nodes are too few for n_max={n_max}")
    coeffs, err = _project(F, lam, int(n_max), int(nodes))
    coarse, _ = _project(F, lam, int(n_max), int(nodes) // 2)
    drift = float(np.max(np.abs(coeffs - coarse)))
    scale = max(1.0, float(np.max(np.abs(coeffs))))
    if not np.isfinite(drift) or drift > check_tol * scale:
        raise QuadratureError(
            f"coefficients moved by {drift:.3e} between {nodes // 2} and {nodes} nodes "
            f"(tolerance {check_tol * scale:.1e}); the kernel may be too rough"
        )
    return GegenbauerExpansion(lam, coeffs, truncation_error=err)


@dataclass(frozen=True)
class PDVerdict:
    is_pd: bool
    first_negative: tuple[int, float] | None
    tolerance: float


def _as_expansion(F, lam, n_max):
    if isinstance(F, GegenbauerExpansion):
        return F
    return expand_kernel(F, lam, n_max)


def is_positive_definite(F, lam: float, n_max: int = DEFAULT_NMAX, tol: float = PD_TOL) -> PDVerdict:
    """Coefficient test: every computed ``a_n`` (n <= n_max) is ``>= -tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    exp = _as_expansion(F, lam, n_max)
    neg = np.flatnonzero(exp.coeffs < -tol)
    if neg.size:
        n = int(neg[0])
        return PDVerdict(False, (n, float(exp.coeffs[n])), tol)
    return PDVerdict(True, None, tol)


def sqrt_kernel(Fexp: GegenbauerExpansion, tol: float = PD_TOL) -> GegenbauerExpansion:
    """Nonnegative coefficient-wise square root ``f`` with ``f_n^2 = F_n``."""
    c = Fexp.coeffs
    neg = np.flatnonzero(c < -tol)
    if neg.size:
        raise NotPositiveDefiniteError(int(neg[0]), float(c[neg[0]]))
    # square roots would blow quadrature roundoff (~1e-16) up to ~1e-8
    floor = ROUNDOFF_REL * float(np.max(np.abs(c)))
    return GegenbauerExpansion(Fexp.lam, np.sqrt(np.where(c > floor, c, 0.0)))


def self_convolution(fexp: GegenbauerExpansion, rho):
    """``int f(x.z) f(z.y) dsigma(z)`` for ``x.y = rho``, by quadrature on the sphere."""
    d = fexp.dim
    order = max(48, fexp.n_max + 32)
    rho_arr = np.asarray(rho, dtype=float)
    out = np.array([zonal_pair_average(lambda u, v: fexp(u) * fexp(v), r, d, order=order)
                    for r in rho_arr.ravel()])
    return float(out[0]) if rho_arr.ndim == 0 else out.reshape(rho_arr.shape)


def _check_measure_dim(mu, lam):
    d = int(round(2 * lam + 1))
    if mu.dim != d:
        raise DimensionError(f"measure lives on S^{mu.dim} but the expansion is for S^{d}")


def f_discrepancy_sq(mu, fexp: GegenbauerExpansion, samples: int, seed: int) -> MCEstimate:
    """MC estimate of ``int (int f(x.y) dmu(y) - a_0)^2 dsigma(x)``."""
    mu = as_measure(mu)
    _check_measure_dim(mu, fexp.lam)
    Z, w, a0, d = mu.points, mu.weights, fexp.mean, mu.dim

    def draw(rng, m):
        x = uniform_array(rng, m, d)
        return (fexp(np.clip(x @ Z.T, -1.0, 1.0)) @ w - a0) ** 2

    return mc_mean(draw, samples, seed)


def generalized_stolarsky_gap(mu, Fexp: GegenbauerExpansion, d: int | None = None,
                              tol: float = PD_TOL) -> float:
    """``I_F(mu) - I_F(sigma)`` with ``F`` given by its (truncated) expansion."""
    mu = as_measure(mu)
    _check_measure_dim(mu, Fexp.lam)
    if d is not None and d != mu.dim:
        raise DimensionError(f"d={d} does not match the measure on S^{mu.dim}")
    neg = np.flatnonzero(Fexp.coeffs < -tol)
    if neg.size:
        raise NotPositiveDefiniteError(int(neg[0]), float(Fexp.coeffs[neg[0]]))
    return discrete_energy(mu, Fexp.kernel()) - Fexp.mean


@dataclass(frozen=True)
class FunkHeckeResult:
    """Funk-Hecke check for one degree.

    ``residual`` is the largest ``|LHS(y) - a_n Y_n(y)|`` over the test points and
    ``std_error`` the largest MC standard error among them. ``coefficient`` is
    the multiplier recovered at ``y = axis``.
    """

    residual: float
    std_error: float
    coefficient: float
    coefficient_se: float
    expected: float


def funk_hecke_residual(fexp: GegenbauerExpansion, n: int, d: int, samples: int, seed: int,
                        n_test: int = 5) -> FunkHeckeResult:
    """MC check of ``int f(x.y) Y_n(x) dsigma(x) = a_n Y_n(y)`` with zonal ``Y_n``."""
    if d < 2 or fexp.dim != d:
        raise DimensionError(f"expansion is for S^{fexp.dim}, asked to check S^{d}")
    if int(n) != n or not 0 <= n <= fexp.n_max:
        raise ValueError(f"degree {n!r} outside 0..{fexp.n_max}")
    n = int(n)
    lam = fexp.lam
    axis = np.zeros(d + 1)
    axis[-1] = 1.0
    rng = np.random.default_rng(np.random.SeedSequence([int(seed), 1]))
    ys = np.vstack([axis, uniform_array(rng, n_test - 1, d)]) if n_test > 1 else axis[None]

    def draw(rng, m):
        x = uniform_array(rng, m, d)
        y_n = gegenbauer_table(n, lam, x @ axis)[n]
        return fexp(np.clip(x @ ys.T, -1.0, 1.0)) * y_n[:, None]

    est = mc_mean(draw, samples, seed)
    expected = fexp.coeffs[n] * gegenbauer_table(n, lam, ys @ axis)[n]
    resid = np.abs(np.asarray(est.value) - expected)
    scale = gegenbauer_table(n, lam, np.array(1.0))[n]
    return FunkHeckeResult(
        residual=float(resid.max()),
        std_error=float(np.max(est.std_error)),
        coefficient=float(np.asarray(est.value)[0] / scale),
        coefficient_se=float(np.asarray(est.std_error)[0] / abs(scale)),
        expected=float(fexp.coeffs[n]),
    )


def sphere_product_rule(order: int):
    """Product Gauss rule on S^2: nodes and weights (sum 1), exact to degree ``2*order - 1``."""
    x, w = _gl(order)
    m = 2 * order
    phi = 2.0 * np.pi * np.arange(m) / m
    s = np.sqrt(1.0 - x**2)
    pts = np.column_stack([
        np.repeat(s, m) * np.tile(np.cos(phi), order),
        np.repeat(s, m) * np.tile(np.sin(phi), order),
        np.repeat(x, m),
    ])
    weights = np.repeat(w / 2.0, m) / m
    return pts, weights


def perturbed_uniform_measure(n0: int, eps: float, order: int = 16):
    """Quadrature surrogate of ``(1 + eps * Y(x)) dsigma`` on S^2, Y the normalized zonal harmonic.

    The weights stay a mass-one measure because ``Y`` integrates to zero under the rule.
    """
    pts, w = sphere_product_rule(order)
    lam = 0.5
    y = gegenbauer_table(n0, lam, pts[:, 2])[n0]
    # Legendre P_n has squared sigma-norm 1 / (2n + 1) on S^2
    y = y * np.sqrt(2 * n0 + 1)
    weights = w * (1.0 + eps * y)
    weights = weights / weights.sum()
    return WeightedMeasure(pts, weights)
