"""Pointwise curvature machinery for Kahler metrics in complex chart coordinates.

Index conventions used throughout the package:

    g[i, j]         = g_{i jbar}
    dg[i, j, k]     = d g_{i jbar} / d z_k
    ddg[i, j, k, l] = d^2 g_{i jbar} / (d z_k d zbar_l)
    R[i, j, k, l]   = R_{i jbar k lbar}

All operations are stateless functions of their array inputs, so they are safe
to evaluate from many threads concurrently.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "DegenerateMetricError",
    "ZeroDirectionError",
    "MetricJet",
    "SymmetryReport",
    "metric_eigenvalues",
    "inverse_metric",
    "curvature_tensor",
    "norm_squared",
    "holomorphic_sectional_curvature",
    "hsc_gradient",
    "ricci",
    "scalar_curvature",
    "orthonormal_frame",
    "check_symmetries",
]

_IMAG_TOL = 1e-10


class DegenerateMetricError(ValueError):
    """Raised when a metric matrix is singular or not positive definite."""

    def __init__(self, min_eigenvalue: float):
        super().__init__(
            f"degenerate metric: smallest eigenvalue {min_eigenvalue:.6e}"
        )
        self.min_eigenvalue = min_eigenvalue


class ZeroDirectionError(ValueError):
    """Raised when a tangent direction is numerically the zero vector."""


@dataclass(frozen=True)
class MetricJet:
    """Metric matrix plus first and mixed second Wirtinger derivatives at a point."""

    g: np.ndarray
    dg: np.ndarray
    ddg: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.g, dtype=complex)
        dg = np.asarray(self.dg, dtype=complex)
        ddg = np.asarray(self.ddg, dtype=complex)
        m = g.shape[0] if g.ndim == 2 else 0
        if g.shape != (m, m) or dg.shape != (m,) * 3 or ddg.shape != (m,) * 4 or m < 1:
            raise ValueError("inconsistent metric jet array shapes")
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dg", dg)
        object.__setattr__(self, "ddg", ddg)

    @property
    def dimension(self) -> int:
        return self.g.shape[0]


@dataclass(frozen=True)
class SymmetryReport:
    """Maximum violations of the curvature and metric symmetry relations."""

    first_pair: float
    second_pair: float
    conjugation: float
    kahler: float
    hermiticity: float

    @property
    def max_violation(self) -> float:
        return max(
            self.first_pair,
            self.second_pair,
            self.conjugation,
            self.kahler,
            self.hermiticity,
        )


def _real_part(value: complex, what: str) -> float:
    scale = max(1.0, abs(value))
    if abs(value.imag) > _IMAG_TOL * scale:
        raise ValueError(
            f"{what} has imaginary residue {value.imag:.3e}, expected real"
        )
    return float(value.real)


def metric_eigenvalues(g: np.ndarray) -> np.ndarray:
    """Eigenvalues of the Hermitian part of ``g``, ascending."""
    g = np.asarray(g, dtype=complex)
    return np.linalg.eigvalsh(0.5 * (g + g.conj().T))


def _require_positive_definite(g: np.ndarray) -> None:
    ev = metric_eigenvalues(g)
    if not np.all(np.isfinite(ev)) or ev[0] <= 0.0:
        raise DegenerateMetricError(float(ev[0]))


def inverse_metric(g: np.ndarray) -> np.ndarray:
    """Inverse metric g^{i jbar}, computed by a direct linear solve."""
    g = np.asarray(g, dtype=complex)
    _require_positive_definite(g)
    return np.linalg.solve(g, np.eye(g.shape[0], dtype=complex))


def curvature_tensor(jet: MetricJet) -> np.ndarray:
    """Curvature components R_{i jbar k lbar} of the metric described by ``jet``.

    Implements
        R[i,j,k,l] = -ddg[i,j,k,l]
                     + sum_{p,q} g^{p qbar} dg[i,p,k] conj(dg[j,q,l]),
    with conj(dg[j,q,l]) = d g_{q jbar} / d zbar_l.
    """
    ginv = inverse_metric(jet.g)
    quad = np.einsum("pq,ipk,jql->ijkl", ginv, jet.dg, jet.dg.conj())
    return -jet.ddg + quad


def norm_squared(g: np.ndarray, xi: np.ndarray) -> float:
    """Squared metric norm sum_{ij} g_{i jbar} xi_i conj(xi_j)."""
    g = np.asarray(g, dtype=complex)
    xi = np.asarray(xi, dtype=complex)
    value = np.einsum("ij,i,j->", g, xi, xi.conj())
    return _real_part(complex(value), "metric norm")


def holomorphic_sectional_curvature(
    R: np.ndarray, g: np.ndarray, xi: np.ndarray
) -> float:
    """Holomorphic sectional curvature K(xi) of the complex line through xi.

    Invariant under nonzero complex rescaling of ``xi``.
    """
    xi = np.asarray(xi, dtype=complex)
    if not np.any(xi):
        raise ZeroDirectionError("zero direction")
    n2 = norm_squared(g, xi)
    if n2 <= 0.0:
        raise ZeroDirectionError("direction with non-positive metric norm")
    num = 2.0 * np.einsum("ijkl,i,j,k,l->", R, xi, xi.conj(), xi, xi.conj())
    return _real_part(complex(num), "sectional curvature numerator") / (n2 * n2)


def hsc_gradient(R: np.ndarray, g: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Wirtinger gradient dK/d(conj(xi)).

    Vanishes identically at every extremal direction because K is invariant
    under complex rescaling; its norm is the stationarity residual of the
    constrained extremization over the metric unit sphere.
    """
    xi = np.asarray(xi, dtype=complex)
    S = norm_squared(g, xi)
    if S <= 0.0:
        raise ZeroDirectionError("zero direction")
    N = complex(np.einsum("ijkl,i,j,k,l->", R, xi, xi.conj(), xi, xi.conj()))
    dN = 2.0 * np.einsum("ijkl,i,k,l->j", R, xi, xi, xi.conj())
    dS = np.einsum("ij,i->j", np.asarray(g, dtype=complex), xi)
    return 2.0 * dN / S**2 - 4.0 * N.real * dS / S**3


def ricci(R: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Ricci curvature R_{i jbar} = sum_{kl} g^{k lbar} R_{i jbar k lbar}."""
    ginv = inverse_metric(g)
    return np.einsum("lk,ijkl->ij", ginv, R)


def scalar_curvature(R: np.ndarray, g: np.ndarray) -> float:
    """Scalar curvature, the double metric trace of the curvature tensor."""
    ginv = inverse_metric(g)
    value = np.einsum("ji,lk,ijkl->", ginv, ginv, R)
    return _real_part(complex(value), "scalar curvature")


def orthonormal_frame(g: np.ndarray) -> np.ndarray:
    """Matrix F whose columns are orthonormal for the metric pairing.

    Satisfies sum_{ij} g_{i jbar} F[i,a] conj(F[j,b]) = delta_{ab} (Cholesky
    based), so Euclidean-unit coordinate vectors c push forward to unit
    vectors F c of the metric norm with the metric-induced uniform measure.
    Note the pairing conjugates the second slot, matching
    :func:`norm_squared`; as a matrix identity this reads F^T g conj(F) = I.
    """
    g = np.asarray(g, dtype=complex)
    _require_positive_definite(g)
    L = np.linalg.cholesky(0.5 * (g + g.conj().T).conj())
    return np.linalg.inv(L).conj().T


def check_symmetries(R: np.ndarray, jet: MetricJet) -> SymmetryReport:
    """Report the largest violation of each Kahler symmetry relation.

    Report-only: never raises, suitable as a diagnostic for corrupted jets.
    """
    R = np.asarray(R, dtype=complex)
    first = float(np.max(np.abs(R - R.transpose(2, 1, 0, 3))))
    second = float(np.max(np.abs(R - R.transpose(0, 3, 2, 1))))
    conj_rel = float(np.max(np.abs(R - R.transpose(1, 0, 3, 2).conj())))
    kahler = float(np.max(np.abs(jet.dg - jet.dg.transpose(2, 1, 0))))
    hermit = float(np.max(np.abs(jet.g - jet.g.conj().T)))
    return SymmetryReport(first, second, conj_rel, kahler, hermit)
