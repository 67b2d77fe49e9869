"""Pinching of product metrics on products of two positively curved factors.

On a product, the sectional curvature along a unit direction decomposes as
K_left y^2 + K_right (1-y)^2, where y is the left factor's share of the
metric norm.  Given factor pinching constants c_left, c_right under a common
upper bound k, the product extrema are k c_left c_right/(c_left + c_right)
and k; this module implements the closed forms and verifies them numerically
on concrete factor models.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import curvature_tensor
from .models import Hitchin, MetricModel, Product
from .optimize import extremize_direction

__all__ = [
    "CommonBoundError",
    "ProductBounds",
    "FactorStats",
    "ProductReport",
    "product_hsc",
    "product_bounds",
    "factor_curvature_stats",
    "verify_product_numeric",
]


class CommonBoundError(ValueError):
    """The two factors do not share a common upper curvature bound."""


def product_hsc(k_left: float, k_right: float, y: float) -> float:
    """Sectional curvature of a product direction with left norm share y."""
    if not 0.0 <= y <= 1.0:
        raise ValueError("norm share y out of range [0, 1]")
    return k_left * y * y + k_right * (1.0 - y) ** 2


@dataclass(frozen=True)
class ProductBounds:
    """Closed-form product extrema for pinched factors under a common bound."""

    lower: float
    upper: float
    y_star: float
    pinching: float


def product_bounds(c_left, c_right, k) -> ProductBounds:
    """Extrema of the product curvature: lower = k c_l c_r/(c_l + c_r), upper = k.

    ``y_star`` is the interior norm share attaining the lower bound.
    """
    if not (c_left > 0 and c_right > 0 and k > 0):
        raise ValueError("pinching constants and bound must be positive")
    if c_left > 1 or c_right > 1:
        raise ValueError("pinching constants lie in (0, 1]")
    total = c_left + c_right
    return ProductBounds(
        lower=k * c_left * c_right / total,
        upper=k,
        y_star=c_right / total,
        pinching=c_left * c_right / total,
    )


@dataclass(frozen=True)
class FactorStats:
    """Numerically measured curvature range of one factor model."""

    min_K: float
    max_K: float

    @property
    def pinching(self) -> float:
        return self.min_K / self.max_K


def _sample_points(model: MetricModel, rng: np.random.Generator, count: int):
    m = model.dimension
    pts = [np.zeros(m, dtype=complex)]
    if isinstance(model, Hitchin):
        pts.extend(model.fiber_point(r) for r in (1.0, 4.0, 24.0))
    raw = 0.8 * (rng.standard_normal((count, m)) + 1j * rng.standard_normal((count, m)))
    pts.extend(raw)
    return pts


def factor_curvature_stats(
    model: MetricModel, samples: int = 4, seed: int = 0
) -> FactorStats:
    """Extremize K over sampled points and all directions of one factor."""
    rng = np.random.default_rng(seed)
    lo, hi = math.inf, -math.inf
    for z in _sample_points(model, rng, samples):
        jet = model.metric_jet(z)
        ex = extremize_direction(curvature_tensor(jet), jet.g, seed=seed)
        lo, hi = min(lo, ex.min_K), max(hi, ex.max_K)
    if lo <= 0:
        raise ValueError("factor has non-positive sectional curvature on samples")
    return FactorStats(lo, hi)


@dataclass(frozen=True)
class ProductReport:
    """Numerical product extrema against the closed-form prediction."""

    min_K: float
    max_K: float
    pinching: float
    c_left: float
    c_right: float
    k: float
    expected: ProductBounds
    rel_min_err: float
    rel_max_err: float
    tol: float
    agree: bool

    def to_json_dict(self) -> dict:
        return {
            "min_K": self.min_K,
            "max_K": self.max_K,
            "pinching": self.pinching,
            "c_left": self.c_left,
            "c_right": self.c_right,
            "k": self.k,
            "y_star": self.expected.y_star,
            "expected_lower": self.expected.lower,
            "expected_upper": self.expected.upper,
            "expected_pinching": self.expected.pinching,
            "rel_min_err": self.rel_min_err,
            "rel_max_err": self.rel_max_err,
            "tol": self.tol,
            "agree": self.agree,
        }


def verify_product_numeric(
    left: MetricModel,
    right: MetricModel,
    samples: int = 3,
    tol: float = 1e-6,
    seed: int = 0,
    k_match_tol: float = 1e-6,
) -> ProductReport:
    """Extremize K on the product of two factor models and check the theorem.

    The factors' (c, k) are measured numerically on sample grids; the common
    upper bound hypothesis is enforced and a mismatch raises
    :class:`CommonBoundError` rather than being silently normalized away.
    """
    stats_l = factor_curvature_stats(left, samples=samples, seed=seed)
    stats_r = factor_curvature_stats(right, samples=samples, seed=seed + 1)
    k_l, k_r = stats_l.max_K, stats_r.max_K
    if abs(k_l - k_r) > k_match_tol * max(k_l, k_r):
        raise CommonBoundError(
            f"common bound k violated: left max {k_l:.6g} != right max {k_r:.6g}"
        )
    k = max(k_l, k_r)
    c_l, c_r = stats_l.min_K / k, stats_r.min_K / k
    expected = product_bounds(c_l, c_r, k)

    product = Product(left, right)
    rng = np.random.default_rng(seed)
    pts_l = _sample_points(left, rng, samples)
    pts_r = _sample_points(right, rng, samples)
    lo, hi = math.inf, -math.inf
    for zl in pts_l:
        for zr in pts_r:
            z = np.concatenate([zl, zr])
            jet = product.metric_jet(z)
            ex = extremize_direction(curvature_tensor(jet), jet.g, seed=seed)
            lo, hi = min(lo, ex.min_K), max(hi, ex.max_K)

    rel_min = abs(lo - expected.lower) / abs(expected.lower)
    rel_max = abs(hi - expected.upper) / abs(expected.upper)
    return ProductReport(
        min_K=lo,
        max_K=hi,
        pinching=lo / hi,
        c_left=c_l,
        c_right=c_r,
        k=k,
        expected=expected,
        rel_min_err=rel_min,
        rel_max_err=rel_max,
        tol=tol,
        agree=rel_min <= tol and rel_max <= tol,
    )
