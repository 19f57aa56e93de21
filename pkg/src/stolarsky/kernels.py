"""Zonal kernels ``F(x.y)`` evaluated at an inner product ``t`` in [-1, 1]."""
from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .sphere import chord_matrix, geodesic_matrix

if TYPE_CHECKING:
    from .gegenbauer import GegenbauerExpansion

# Lower clamp for 1 - t^2 inside arccos derivatives.
ARCCOS_FLOOR = 1e-14


def _t(t):
    return np.clip(np.asarray(t, dtype=float), -1.0, 1.0)


class Kernel:
    """Base class; subclasses are callables of the inner product."""

    name = "kernel"

    def __call__(self, t):
        raise NotImplementedError

    def derivative(self, t):
        raise NotImplementedError(f"{self.name} has no derivative")

    def pairwise(self, X: np.ndarray) -> np.ndarray:
        """Kernel matrix of the rows of ``X`` (unit vectors)."""
        G = np.clip(X @ X.T, -1.0, 1.0)
        np.fill_diagonal(G, 1.0)
        return np.asarray(self(G), dtype=float)


def _check_delta(delta):
    if not np.isfinite(delta) or delta <= 0:
        raise ValueError(f"exponent delta must be > 0 (Riesz/log cases unsupported), got {delta!r}")
    return float(delta)


@dataclass(frozen=True)
class EuclideanPow(Kernel):
    """``||x - y||^delta = (2 - 2t)^(delta/2)``."""

    delta: float = 1.0
    name = "euclidean"

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_delta(self.delta))

    def __call__(self, t):
        return (2.0 - 2.0 * _t(t)) ** (self.delta / 2.0)

    def pairwise(self, X):
        return chord_matrix(X) ** self.delta

    def derivative(self, t):
        t = _t(t)
        base = np.maximum(2.0 - 2.0 * t, ARCCOS_FLOOR)
        out = -self.delta * base ** (self.delta / 2.0 - 1.0)
        return np.where(t >= 1.0, 0.0, out)


@dataclass(frozen=True)
class GeodesicPow(Kernel):
    """``d(x, y)^delta = (arccos(t) / pi)^delta``."""

    delta: float = 1.0
    name = "geodesic"

    def __post_init__(self):
        object.__setattr__(self, "delta", _check_delta(self.delta))

    def __call__(self, t):
        return (np.arccos(_t(t)) / np.pi) ** self.delta

    def pairwise(self, X):
        return geodesic_matrix(X) ** self.delta

    def derivative(self, t):
        t = _t(t)
        dist = np.arccos(t) / np.pi
        slope = -1.0 / (np.pi * np.sqrt(np.maximum(1.0 - t * t, ARCCOS_FLOOR)))
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.delta * dist ** (self.delta - 1.0) * slope
        return np.where(np.abs(t) >= 1.0, 0.0, out)


@dataclass(frozen=True)
class WedgeSquare(Kernel):
    """``(1/2 - d(x, y))^2``."""

    name = "wedge"

    def __call__(self, t):
        return (0.5 - np.arccos(_t(t)) / np.pi) ** 2

    def pairwise(self, X):
        return (0.5 - geodesic_matrix(X)) ** 2


@dataclass(frozen=True)
class SliceSquare(Kernel):
    """``(1 - d(x, y))^2``."""

    name = "slice"

    def __call__(self, t):
        return (1.0 - np.arccos(_t(t)) / np.pi) ** 2

    def pairwise(self, X):
        return (1.0 - geodesic_matrix(X)) ** 2


@dataclass(frozen=True)
class InnerProdPow(Kernel):
    """``t^k``; ``k = 2`` gives the frame potential."""

    k: int = 2
    name = "inner"

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        object.__setattr__(self, "k", int(self.k))

    def __call__(self, t):
        return _t(t) ** self.k


@dataclass(frozen=True)
class ExpansionKernel(Kernel):
    """Kernel defined by a (truncated) Gegenbauer expansion."""

    expansion: "GegenbauerExpansion"
    name = "expansion"

    def __call__(self, t):
        return self.expansion(_t(t))


KERNELS = {
    "euclidean": EuclideanPow,
    "geodesic": GeodesicPow,
    "wedge": WedgeSquare,
    "slice": SliceSquare,
    "inner": InnerProdPow,
}


def make_kernel(name: str, delta: float | None = None) -> Kernel:
    """Build a kernel from its CLI name; ``delta`` is the exponent (or ``k`` for ``inner``)."""
    try:
        cls = KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown kernel {name!r}; choose from {sorted(KERNELS)}") from None
    if cls in (EuclideanPow, GeodesicPow):
        return cls(1.0 if delta is None else delta)
    if cls is InnerProdPow:
        return cls(2 if delta is None else int(delta))
    return cls()
