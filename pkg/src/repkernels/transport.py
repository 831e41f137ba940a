"""
Biholomorphic maps between the model domains and the transformation law
for Bergman kernels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .catalog import CATALOG, Kernel
from .core import (
    ANNULUS,
    BALL2,
    DISC,
    HALFPLANE,
    QUARTERPLANE,
    Domain,
    DomainError,
    PointLike,
    as_point,
)

__all__ = [
    "ConformalMap",
    "JacobianPair",
    "cayley",
    "square",
    "inversion",
    "mobius",
    "unitary2",
    "compose",
    "real_jacobian_det",
    "pullback_kernel",
    "unitary_invariance_check",
    "check_unitary",
]


@dataclass(frozen=True)
class ConformalMap:
    """A holomorphic bijection ``source -> target``.

    ``func`` and ``jac`` are vectorised.  In one variable ``jac`` is the
    complex derivative; on the ball it returns the complex Jacobian matrix
    (shape ``(..., 2, 2)``).
    """

    name: str
    source: Domain
    target: Optional[Domain]
    func: Callable
    jac: Callable

    @property
    def dim(self) -> int:
        return self.source.dim

    def __call__(self, z):
        return self.func(z)

    def jacobian_det(self, z):
        """Complex Jacobian determinant (``f'`` in one variable)."""
        J = self.jac(z)
        if self.dim == 1:
            return J
        return np.linalg.det(J)


@dataclass(frozen=True)
class JacobianPair:
    complex_det: complex
    real_det: float


def cayley() -> ConformalMap:
    """Upper half-plane onto the disc, ``z -> (i - z)/(i + z)``."""
    return ConformalMap(
        "cayley", HALFPLANE, DISC,
        lambda z: (1j - z) / (1j + z),
        lambda z: -2j / (1j + z) ** 2,
    )


def square() -> ConformalMap:
    """Quarter plane onto the upper half-plane, ``z -> z**2``."""
    return ConformalMap("square", QUARTERPLANE, HALFPLANE, lambda z: z * z, lambda z: 2 * z)


def inversion() -> ConformalMap:
    """``z -> 1/z``; sends the annulus to ``1/2 < |z| < 1``, which has no catalog kernel."""
    return ConformalMap("inversion", ANNULUS, None, lambda z: 1.0 / z, lambda z: -1.0 / z ** 2)


def mobius(a: complex) -> ConformalMap:
    """Disc automorphism ``z -> (z - a)/(1 - conj(a) z)``."""
    a = complex(a)
    if abs(a) >= 1:
        raise ValueError("mobius parameter must satisfy |a| < 1")
    ab = a.conjugate()
    return ConformalMap(
        f"mobius({a})", DISC, DISC,
        lambda z: (z - a) / (1 - ab * z),
        lambda z: (1 - abs(a) ** 2) / (1 - ab * z) ** 2,
    )


def check_unitary(M, tol: float = 1e-12) -> np.ndarray:
    M = np.asarray(M, dtype=complex)
    if M.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    err = np.max(np.abs(M.conj().T @ M - np.eye(2)))
    if err > tol:
        raise ValueError(f"matrix is not unitary (|M*M - I| = {err:.2e})")
    return M


def unitary2(M) -> ConformalMap:
    """Ball automorphism ``z -> M z`` for a unitary 2x2 ``M``."""
    M = check_unitary(M).copy()
    M.setflags(write=False)

    def func(z):
        return np.einsum("jk,...k->...j", M, np.asarray(z, dtype=complex))

    def jac(z):
        z = np.asarray(z, dtype=complex)
        return np.broadcast_to(M, z.shape[:-1] + (2, 2))

    return ConformalMap("unitary2", BALL2, BALL2, func, jac)


def compose(outer: ConformalMap, inner: ConformalMap) -> ConformalMap:
    """``outer o inner``, differentiated by the chain rule."""
    if inner.target != outer.source:
        raise DomainError(f"cannot compose: {inner.name} lands in {inner.target}, "
                          f"{outer.name} starts from {outer.source}")
    if inner.dim == 1:
        jac = lambda z: outer.jac(inner.func(z)) * inner.jac(z)
    else:
        jac = lambda z: outer.jac(inner.func(z)) @ inner.jac(z)
    return ConformalMap(f"{outer.name}o{inner.name}", inner.source, outer.target,
                        lambda z: outer.func(inner.func(z)), jac)


def _real_rendering(fmap: ConformalMap, x: np.ndarray) -> np.ndarray:
    z = x[0::2] + 1j * x[1::2]
    out = np.atleast_1d(fmap.func(z if fmap.dim == 2 else z[0]))
    return np.column_stack([out.real, out.imag]).ravel()


def real_jacobian_det(fmap: ConformalMap, z: PointLike, h: float = 1e-5) -> JacobianPair:
    """Real Jacobian determinant by central differences, beside the analytic ``det J_C``."""
    p = fmap.source.require_interior(z, "z")
    x0 = np.array([v for c in p.coords for v in (c.real, c.imag)])
    n = x0.size
    J = np.empty((n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        J[:, k] = (_real_rendering(fmap, x0 + e) - _real_rendering(fmap, x0 - e)) / (2 * h)
    return JacobianPair(complex(fmap.jacobian_det(p.array())), float(np.linalg.det(J)))


def pullback_kernel(fmap: ConformalMap, target_kernel: Kernel) -> Kernel:
    """Source-domain Bergman kernel ``det J(z) K(f(z), f(w)) conj(det J(w))``."""
    if target_kernel.kind != "bergman":
        raise ValueError("the transformation law is for Bergman kernels")
    if fmap.target is None or target_kernel.domain != fmap.target:
        raise DomainError(f"{fmap.name} does not map onto the domain of {target_kernel.name}")
    K = target_kernel.func

    def func(z, w):
        return fmap.jacobian_det(z) * K(fmap.func(z), fmap.func(w)) * np.conj(fmap.jacobian_det(w))

    return Kernel(f"{target_kernel.name}<-{fmap.name}", fmap.source, "bergman",
                  "transported", func, "interior")


def unitary_invariance_check(M, z: PointLike, w: PointLike) -> float:
    """``|det M K(Mz, Mw) conj(det M) - K(z, w)|`` for the ball kernel."""
    M = check_unitary(M)
    p = BALL2.require_interior(z, "z")
    q = BALL2.require_interior(w, "w")
    K = CATALOG["bergman-ball2"]
    d = np.linalg.det(M)
    a, b = M @ p.array(), M @ q.array()
    return float(abs(d * K(a, b) * np.conj(d) - K(p, q)))
