"""
Bergman geometry of the unit ball in C^2.

Complex second derivatives are assembled from real central differences:
with ``z_j = x_j + i y_j``,

    d^2 u / dz_j dzbar_k = (u_{x_j x_k} + u_{y_j y_k} + i (u_{x_j y_k} - u_{y_j x_k})) / 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .catalog import CATALOG
from .core import BALL2, DomainError, Point, PointLike, as_point

__all__ = [
    "HermitianMetric2",
    "DefiningFunction",
    "ball2_defining_function",
    "bergman_metric",
    "bergman_metric_fd",
    "inverse_metric",
    "metric_det",
    "complex_hessian",
    "divergence_residual",
    "invariant_laplacian",
    "annihilation_check",
    "levi_form",
    "TangencyError",
]


class TangencyError(ValueError):
    pass


@dataclass(frozen=True)
class HermitianMetric2:
    entries: np.ndarray
    at: Point

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def _ball_point(z: PointLike, margin: float = 0.0) -> Point:
    p = as_point(z)
    if p.dim != 2:
        raise DomainError("ball geometry needs a point of C^2")
    if p.norm() >= 1.0 - margin:
        raise DomainError(f"|z| = {p.norm():.6g} must be below {1.0 - margin:g}")
    return p


def _hermitian(diag, off) -> np.ndarray:
    m = np.empty((2, 2), dtype=complex)
    m[0, 0], m[1, 1] = diag
    m[0, 1] = off
    m[1, 0] = np.conj(off)
    return m


def bergman_metric(z: PointLike) -> HermitianMetric2:
    """``g_jk = 3 (delta_jk (1 - |z|^2) + conj(z_j) z_k) / (1 - |z|^2)^2``."""
    p = _ball_point(z)
    z1, z2 = p.coords
    a = 1.0 - p.norm() ** 2
    c = 3.0 / a ** 2
    m = _hermitian((c * (1.0 - abs(z2) ** 2), c * (1.0 - abs(z1) ** 2)), c * z1.conjugate() * z2)
    return HermitianMetric2(m, p)


def inverse_metric(z: PointLike) -> HermitianMetric2:
    """``g^jk = (1 - |z|^2)/3 (delta_jk - conj(z_j) z_k)``."""
    p = _ball_point(z)
    z1, z2 = p.coords
    c = (1.0 - p.norm() ** 2) / 3.0
    m = _hermitian((c * (1.0 - abs(z1) ** 2), c * (1.0 - abs(z2) ** 2)), -c * z1.conjugate() * z2)
    return HermitianMetric2(m, p)


def metric_det(z: PointLike) -> float:
    p = _ball_point(z)
    return 9.0 / (1.0 - p.norm() ** 2) ** 3


def _to_real(p: Point) -> np.ndarray:
    return np.array([v for c in p.coords for v in (c.real, c.imag)])


def _to_complex(x: np.ndarray) -> np.ndarray:
    return x[0::2] + 1j * x[1::2]


# central-difference weights on offsets -2..2 (order 4) or -1..1 (order 2)
_FIRST = {2: np.array([-0.5, 0.0, 0.5]), 4: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0}
_SECOND = {2: np.array([1.0, -2.0, 1.0]), 4: np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0}


def complex_hessian(u: Callable, z: PointLike, h: float, order: int = 2) -> np.ndarray:
    """``H[j, k] = d^2 u / dz_j dzbar_k`` by central differences of step ``h``.

    ``order`` is 2 (3-point stencils, mixed terms on 4 points) or 4.
    ``u`` takes a length-2 complex array.  Stencil points and sums are
    carried in ``np.longdouble`` so that rounding stays below the
    truncation term; ``u`` sees extended-precision input when it keeps
    the dtype.
    """
    if order not in _FIRST:
        raise ValueError("order must be 2 or 4")
    p = as_point(z)
    x0 = _to_real(p).astype(np.longdouble)
    f = lambda x: np.clongdouble(u(_to_complex(x)))
    n = x0.size
    h = np.longdouble(h)
    c1 = _FIRST[order].astype(np.longdouble)
    c2 = _SECOND[order].astype(np.longdouble)
    offs = np.arange(c1.size, dtype=np.longdouble) - c1.size // 2
    E = np.eye(n, dtype=np.longdouble) * h
    R = np.empty((n, n), dtype=np.clongdouble)
    for a in range(n):
        R[a, a] = sum(c * f(x0 + o * E[a]) for c, o in zip(c2, offs) if c) / h ** 2
        for b in range(a + 1, n):
            R[a, b] = R[b, a] = sum(ca * cb * f(x0 + oa * E[a] + ob * E[b])
                                    for ca, oa in zip(c1, offs) if ca
                                    for cb, ob in zip(c1, offs) if cb) / h ** 2
    m = n // 2
    H = np.empty((m, m), dtype=complex)
    for j in range(m):
        for k in range(m):
            xj, yj, xk, yk = 2 * j, 2 * j + 1, 2 * k, 2 * k + 1
            H[j, k] = complex(0.25 * (R[xj, xk] + R[yj, yk] + 1j * (R[xj, yk] - R[yj, xk])))
    return H


def _log_diag_kernel(z: np.ndarray) -> float:
    return np.log(CATALOG["bergman-ball2"].func(z, z).real)


def bergman_metric_fd(z: PointLike, h: float = 1e-3, order: int = 4):
    """Metric from finite differences of ``log K(z, z)``; returns ``(matrix, max deviation)``."""
    p = _ball_point(z, margin=3 * h)
    H = complex_hessian(_log_diag_kernel, p, h, order)
    return H, float(np.max(np.abs(H - bergman_metric(p).entries)))


def _g_ginv(z: np.ndarray) -> np.ndarray:
    # g * g^{jk} = 3 (delta_jk - conj(z_j) z_k) / (1 - |z|^2)^2
    a = 1.0 - float(np.sum(np.abs(z) ** 2))
    return 3.0 * (np.eye(2) - np.outer(z.conj(), z)) / a ** 2


def divergence_residual(z: PointLike, h: float = 1e-4) -> float:
    """Largest component of the two divergence identities of ``g g^{jk}``.

    For each k: ``sum_j d/dzbar_j (g g^{jk})`` and its conjugate companion
    ``sum_j d/dz_j (g g^{kj})``, both by central differences.
    """
    p = _ball_point(z, margin=1e-3)
    z0 = p.array()
    d_dzbar = []
    d_dz = []
    for j in range(2):
        ex = np.zeros(2, dtype=complex)
        ex[j] = h
        dx = (_g_ginv(z0 + ex) - _g_ginv(z0 - ex)) / (2 * h)
        dy = (_g_ginv(z0 + 1j * ex) - _g_ginv(z0 - 1j * ex)) / (2 * h)
        d_dzbar.append(0.5 * (dx + 1j * dy))
        d_dz.append(0.5 * (dx - 1j * dy))
    first = sum(d_dzbar[j][j, :] for j in range(2))    # indexed by k
    second = sum(d_dz[j][:, j] for j in range(2))      # indexed by k
    return float(max(np.max(np.abs(first)), np.max(np.abs(second))))


def invariant_laplacian(u: Callable, z: PointLike, h: float = 1e-3) -> complex:
    """``4 sum_jk g^jk d^2 u / dzbar_j dz_k`` with finite-difference derivatives."""
    if not 1e-4 <= h <= 1e-2:
        raise ValueError("step h must lie in [1e-4, 1e-2]")
    p = as_point(z)
    if p.dim != 2:
        raise DomainError("the invariant Laplacian acts on functions on the ball in C^2")
    if p.norm() + 2 * h >= 1.0:
        raise DomainError("finite-difference stencil leaves the ball")
    H = complex_hessian(u, p, h)          # H[k, j] = d^2 u / dz_k dzbar_j
    ginv = inverse_metric(p).entries      # ginv[j, k]
    return complex(4.0 * np.sum(ginv * H.T))


def annihilation_check(zeta: PointLike, z: PointLike, h: float = 1e-3) -> float:
    """Relative residual ``|L_z P(z, zeta)| / P(z, zeta)`` for the ball Poisson-Szego kernel."""
    q = as_point(zeta)
    if q.dim != 2 or abs(q.norm() - 1.0) > 1e-12:
        raise DomainError("zeta must lie on the unit sphere of C^2")
    w = q.array()
    P = CATALOG["poisson-szego-ball2"].func
    u = lambda x: P(x, w.astype(x.dtype)).real
    p = as_point(z)
    val = invariant_laplacian(u, p, h)
    return abs(val) / float(u(p.array()))


@dataclass(frozen=True)
class DefiningFunction:
    """``Omega = {rho < 0}`` with ``d rho / dz_j`` and ``d^2 rho / dz_j dzbar_k``."""

    name: str
    rho: Callable
    gradient: Callable
    complex_hessian: Callable


def ball2_defining_function() -> DefiningFunction:
    return DefiningFunction(
        "ball2",
        lambda z: float(np.sum(np.abs(z) ** 2)) - 1.0,
        lambda z: np.conj(z),
        lambda z: np.eye(2, dtype=complex),
    )


def levi_form(rho: DefiningFunction, P: PointLike, w: PointLike, tol: float = 1e-10) -> float:
    """``sum_jk rho_{j kbar}(P) w_j conj(w_k)`` for a complex-tangent ``w``."""
    P = as_point(P).array()
    w = as_point(w).array()
    if abs(rho.rho(P)) > tol:
        raise DomainError(f"P is not on the boundary (rho(P) = {rho.rho(P):.3e})")
    grad = rho.gradient(P)
    if np.linalg.norm(grad) == 0.0:
        raise DomainError("defining function has vanishing gradient at P")
    residual = abs(np.sum(grad * w))
    if residual > tol:
        raise TangencyError(f"w is not complex-tangent at P (residual {residual:.3e})")
    H = rho.complex_hessian(P)
    return float(np.real(w @ H @ w.conj()))
