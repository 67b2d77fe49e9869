"""Built-in Kahler metric models and their analytic metric jets.

Every model is defined by a global potential Phi that is a sum of logarithms
of real polynomial kernels in (z, zbar).  The metric jet (g, dg, ddg) is
assembled from closed-form Wirtinger derivatives of those kernels through the
hand-expanded chain/product rule for log-compositions; no numerical
differentiation is involved.  An independent finite-difference oracle
(:func:`fd_metric_jet`) cross-checks the analytic jets.

Models:

* ``FubiniStudy(m)``   -- complex projective space P^m, potential log(1+|z|^2).
* ``Hitchin(n, s)``    -- the Kahler family on the n-th Hirzebruch surface with
  potential log(1+|z1|^2) + s log((1+|z1|^2)^n + |z2|^2).
* ``Product(a, b)``    -- block product metric of two factor models.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .geometry import DegenerateMetricError, MetricJet, metric_eigenvalues

__all__ = [
    "KernelJet",
    "FubiniStudy",
    "Hitchin",
    "Product",
    "MetricModel",
    "log_jet",
    "fd_metric_jet",
    "kahler_residual",
    "model_to_json",
    "model_from_json",
]


@dataclass(frozen=True)
class KernelJet:
    """Wirtinger derivatives of a real polynomial kernel w(z, zbar) up to order (2, 2).

    Array index conventions (i, k unbarred; j, l barred):

        dw[i]          = dw/dz_i
        dwb[j]         = dw/dzbar_j
        d2w[i, k]      = d2w/(dz_i dz_k)
        d2wb[j, l]     = d2w/(dzbar_j dzbar_l)
        dmix[i, j]     = d2w/(dz_i dzbar_j)
        d3w[i, k, j]   = d3w/(dz_i dz_k dzbar_j)
        d3wb[i, j, l]  = d3w/(dz_i dzbar_j dzbar_l)
        d4w[i, k, j, l] = d4w/(dz_i dz_k dzbar_j dzbar_l)
    """

    w: float
    dw: np.ndarray
    dwb: np.ndarray
    d2w: np.ndarray
    d2wb: np.ndarray
    dmix: np.ndarray
    d3w: np.ndarray
    d3wb: np.ndarray
    d4w: np.ndarray


def _empty_kernel(m: int, w: float) -> dict:
    return dict(
        w=w,
        dw=np.zeros(m, dtype=complex),
        dwb=np.zeros(m, dtype=complex),
        d2w=np.zeros((m, m), dtype=complex),
        d2wb=np.zeros((m, m), dtype=complex),
        dmix=np.zeros((m, m), dtype=complex),
        d3w=np.zeros((m, m, m), dtype=complex),
        d3wb=np.zeros((m, m, m), dtype=complex),
        d4w=np.zeros((m, m, m, m), dtype=complex),
    )


def log_jet(kernel: KernelJet) -> MetricJet:
    """Metric jet of the potential log(w) from the kernel jet of w.

    The three returned arrays are the mixed Wirtinger derivatives of log(w) of
    orders (1,1), (2,1) and (2,2), expanded by the chain and product rules.
    """
    w = kernel.w
    dw, dwb = kernel.dw, kernel.dwb
    d2w, d2wb, dmix = kernel.d2w, kernel.d2wb, kernel.dmix
    d3w, d3wb, d4w = kernel.d3w, kernel.d3wb, kernel.d4w

    g = dmix / w - np.einsum("i,j->ij", dw, dwb) / w**2

    dg = (
        np.einsum("ikj->ijk", d3w) / w
        - (
            np.einsum("kj,i->ijk", dmix, dw)
            + np.einsum("ij,k->ijk", dmix, dw)
            + np.einsum("ik,j->ijk", d2w, dwb)
        )
        / w**2
        + 2.0 * np.einsum("i,k,j->ijk", dw, dw, dwb) / w**3
    )

    ddg = (
        np.einsum("ikjl->ijkl", d4w) / w
        - (
            np.einsum("ikj,l->ijkl", d3w, dwb)
            + np.einsum("ikl,j->ijkl", d3w, dwb)
            + np.einsum("kjl,i->ijkl", d3wb, dw)
            + np.einsum("ijl,k->ijkl", d3wb, dw)
            + np.einsum("ij,kl->ijkl", dmix, dmix)
            + np.einsum("kj,il->ijkl", dmix, dmix)
            + np.einsum("ik,jl->ijkl", d2w, d2wb)
        )
        / w**2
        + 2.0
        * (
            np.einsum("ij,k,l->ijkl", dmix, dw, dwb)
            + np.einsum("kj,i,l->ijkl", dmix, dw, dwb)
            + np.einsum("il,k,j->ijkl", dmix, dw, dwb)
            + np.einsum("kl,i,j->ijkl", dmix, dw, dwb)
            + np.einsum("jl,i,k->ijkl", d2wb, dw, dw)
            + np.einsum("ik,j,l->ijkl", d2w, dwb, dwb)
        )
        / w**3
        - 6.0 * np.einsum("i,k,j,l->ijkl", dw, dw, dwb, dwb) / w**4
    )

    return MetricJet(g, dg, ddg)


def _scale_add(left: MetricJet, scale: float, right: MetricJet) -> MetricJet:
    return MetricJet(
        left.g + scale * right.g,
        left.dg + scale * right.dg,
        left.ddg + scale * right.ddg,
    )


def _as_point(z, m: int) -> np.ndarray:
    z = np.asarray(z, dtype=complex).reshape(-1)
    if z.size != m:
        raise ValueError(f"expected a point with {m} coordinates, got {z.size}")
    if not np.all(np.isfinite(z)):
        raise ValueError("chart point coordinates must be finite")
    return z


@dataclass(frozen=True)
class FubiniStudy:
    """Fubini-Study metric on P^m in an affine chart."""

    m: int = 1

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("dimension must be >= 1")

    @property
    def dimension(self) -> int:
        return self.m

    def kernel(self, z) -> KernelJet:
        z = _as_point(z, self.m)
        parts = _empty_kernel(self.m, float(1.0 + np.vdot(z, z).real))
        parts["dw"] = z.conj()
        parts["dwb"] = z.copy()
        parts["dmix"] = np.eye(self.m, dtype=complex)
        return KernelJet(**parts)

    def potential(self, z) -> float:
        return math.log(self.kernel(z).w)

    def metric_jet(self, z) -> MetricJet:
        jet = log_jet(self.kernel(z))
        _check_definite(jet)
        return jet


@dataclass(frozen=True)
class Hitchin:
    """Hitchin's Kahler family on the n-th Hirzebruch surface.

    Potential:  log(u) + s log(v)  with  u = 1 + |z1|^2,  v = u^n + |z2|^2.
    The metric is Kahler for every s > 0 and Hodge when s is rational
    (``s_exact`` records an exact rational parameter when available).
    """

    n: int
    s: float
    s_exact: Fraction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Hirzebruch index n must be >= 1")
        if self.s_exact is not None:
            object.__setattr__(self, "s", float(self.s_exact))
        if not self.s > 0.0:
            raise ValueError("family parameter s must be positive")

    @classmethod
    def make(cls, n: int, s) -> "Hitchin":
        """Build from ``s`` given as float, Fraction, or a 'p/q' string."""
        if isinstance(s, str):
            s = Fraction(s)
        if isinstance(s, Fraction):
            return cls(n, float(s), s)
        return cls(n, float(s))

    @property
    def dimension(self) -> int:
        return 2

    @property
    def is_hodge(self) -> bool:
        return self.s_exact is not None

    def base_kernel(self, z) -> KernelJet:
        z = _as_point(z, 2)
        parts = _empty_kernel(2, float(1.0 + (z[0] * z[0].conjugate()).real))
        parts["dw"][0] = z[0].conjugate()
        parts["dwb"][0] = z[0]
        parts["dmix"][0, 0] = 1.0
        return KernelJet(**parts)

    def fiber_kernel(self, z) -> KernelJet:
        z = _as_point(z, 2)
        n = self.n
        z1, z2 = z
        q = (z1 * z1.conjugate()).real
        U = 1.0 + q
        parts = _empty_kernel(2, float(U**n + (z2 * z2.conjugate()).real))
        parts["dw"][0] = n * U ** (n - 1) * z1.conjugate()
        parts["dw"][1] = z2.conjugate()
        parts["dwb"][:] = parts["dw"].conj()
        parts["d2w"][0, 0] = n * (n - 1) * U ** (n - 2) * z1.conjugate() ** 2
        parts["d2wb"][:] = parts["d2w"].conj()
        parts["dmix"][0, 0] = n * U ** (n - 1) + n * (n - 1) * U ** (n - 2) * q
        parts["dmix"][1, 1] = 1.0
        parts["d3w"][0, 0, 0] = (
            n * (n - 1) * U ** (n - 3) * z1.conjugate() * (2.0 * U + (n - 2) * q)
        )
        parts["d3wb"][0, 0, 0] = parts["d3w"][0, 0, 0].conjugate()
        parts["d4w"][0, 0, 0, 0] = (
            n
            * (n - 1)
            * (
                2.0 * U ** (n - 2)
                + 4.0 * (n - 2) * U ** (n - 3) * q
                + (n - 2) * (n - 3) * U ** (n - 4) * q * q
            )
        )
        return KernelJet(**parts)

    def potential(self, z) -> float:
        return math.log(self.base_kernel(z).w) + self.s * math.log(
            self.fiber_kernel(z).w
        )

    def metric_jet(self, z) -> MetricJet:
        jet = _scale_add(log_jet(self.base_kernel(z)), self.s, log_jet(self.fiber_kernel(z)))
        _check_definite(jet)
        return jet

    def fiber_point(self, r: float) -> np.ndarray:
        """Chart point (0, z2) with |z2|^2 = r on the central fiber."""
        if not (r >= 0.0 and math.isfinite(r)):
            raise ValueError("fiber radius must be finite and non-negative")
        return np.array([0.0, math.sqrt(r)], dtype=complex)


@dataclass(frozen=True)
class Product:
    """Product metric of two factor models, block diagonal in all jets."""

    left: "MetricModel"
    right: "MetricModel"

    @property
    def dimension(self) -> int:
        return self.left.dimension + self.right.dimension

    def potential(self, z) -> float:
        z = _as_point(z, self.dimension)
        ml = self.left.dimension
        return self.left.potential(z[:ml]) + self.right.potential(z[ml:])

    def metric_jet(self, z) -> MetricJet:
        z = _as_point(z, self.dimension)
        ml, m = self.left.dimension, self.dimension
        jl = self.left.metric_jet(z[:ml])
        jr = self.right.metric_jet(z[ml:])
        g = np.zeros((m, m), dtype=complex)
        dg = np.zeros((m, m, m), dtype=complex)
        ddg = np.zeros((m, m, m, m), dtype=complex)
        g[:ml, :ml] = jl.g
        g[ml:, ml:] = jr.g
        dg[:ml, :ml, :ml] = jl.dg
        dg[ml:, ml:, ml:] = jr.dg
        ddg[:ml, :ml, :ml, :ml] = jl.ddg
        ddg[ml:, ml:, ml:, ml:] = jr.ddg
        return MetricJet(g, dg, ddg)


MetricModel = FubiniStudy | Hitchin | Product


def _check_definite(jet: MetricJet) -> None:
    ev = metric_eigenvalues(jet.g)
    if ev[0] <= 0.0:
        raise DegenerateMetricError(float(ev[0]))


def kahler_residual(jet: MetricJet) -> float:
    """Largest violation of dg_{i jbar}/dz_k = dg_{k jbar}/dz_i."""
    return float(np.max(np.abs(jet.dg - jet.dg.transpose(2, 1, 0))))


def _wirtinger(f, z: np.ndarray, k: int, h: float, barred: bool):
    e = np.zeros(z.size, dtype=complex)
    e[k] = 1.0
    fr = (f(z + h * e) - f(z - h * e)) / (2.0 * h)
    fi = (f(z + 1j * h * e) - f(z - 1j * h * e)) / (2.0 * h)
    return 0.5 * (fr + 1j * fi) if barred else 0.5 * (fr - 1j * fi)


def fd_metric_jet(model: MetricModel, z, h: float = 1e-4) -> MetricJet:
    """Finite-difference oracle for :meth:`metric_jet`.

    The metric itself is rebuilt from central Wirtinger differences of the
    potential; dg and ddg are central differences of the analytic metric, so
    the oracle is independent of the hand-expanded third and fourth derivative
    formulas it checks.
    """
    if h < 1e-12:
        raise ValueError("finite-difference step underflow (h < 1e-12)")
    m = model.dimension
    z = _as_point(z, m)

    def g_of(p):
        return model.metric_jet(p).g

    g = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            inner = lambda p, jj=j: _wirtinger(model.potential, p, jj, h, barred=True)
            g[i, j] = _wirtinger(inner, z, i, h, barred=False)

    dg = np.empty((m, m, m), dtype=complex)
    for k in range(m):
        dg[:, :, k] = _wirtinger(g_of, z, k, h, barred=False)

    ddg = np.empty((m, m, m, m), dtype=complex)
    for k in range(m):
        for l in range(m):
            inner = lambda p, ll=l: _wirtinger(g_of, p, ll, h, barred=True)
            ddg[:, :, k, l] = _wirtinger(inner, z, k, h, barred=False)

    return MetricJet(g, dg, ddg)


def model_to_json(model: MetricModel) -> dict:
    """JSON-serializable descriptor; rational Hitchin parameters stay exact."""
    if isinstance(model, FubiniStudy):
        return {"kind": "fubini_study", "m": model.m}
    if isinstance(model, Hitchin):
        s = str(model.s_exact) if model.s_exact is not None else model.s
        return {"kind": "hitchin", "n": model.n, "s": s}
    if isinstance(model, Product):
        return {
            "kind": "product",
            "left": model_to_json(model.left),
            "right": model_to_json(model.right),
        }
    raise TypeError(f"not a metric model: {model!r}")


def model_from_json(obj: dict) -> MetricModel:
    kind = obj.get("kind")
    if kind == "fubini_study":
        return FubiniStudy(int(obj["m"]))
    if kind == "hitchin":
        return Hitchin.make(int(obj["n"]), obj["s"])
    if kind == "product":
        return Product(model_from_json(obj["left"]), model_from_json(obj["right"]))
    raise ValueError(f"unknown model kind: {kind!r}")
