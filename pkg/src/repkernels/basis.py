"""
Orthonormal systems and the partial-sum kernels built from them.

The closed-form systems are monomial: ``phi_j(z) = z**j / ||z**j||``.  For
those, ``phi_j(z) * conj(phi_j(w))`` is ``(z * conj(w))**j / ||z**j||**2``
and the kernel is summed in log form, which keeps the long annulus
truncations (thousands of terms, ``|z| -> 2``) free of overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    ANNULUS,
    DISC,
    Domain,
    PointLike,
    QuadratureRule,
    as_point,
    make_area_quadrature,
    make_boundary_quadrature,
)

__all__ = [
    "NumericalDependenceError",
    "OrthonormalSystem",
    "SeriesKernel",
    "disc_bergman_basis",
    "disc_hardy_basis",
    "annulus_bergman_basis",
    "annulus_sqnorm",
    "gram_schmidt",
    "assemble_series_kernel",
    "discrete_gram",
]

LN2 = math.log(2.0)


class NumericalDependenceError(ValueError):
    def __init__(self, index: int):
        super().__init__(f"numerically dependent input at index {index}")
        self.index = index


@dataclass(frozen=True)
class OrthonormalSystem:
    space: str
    functions: tuple
    domain: Domain
    # monomial systems only
    powers: Optional[np.ndarray] = None
    log_sqnorms: Optional[np.ndarray] = None
    # gram_schmidt output: phi_i = sum_k coefficients[k, i] * raw_k
    coefficients: Optional[np.ndarray] = field(default=None, repr=False)

    def __len__(self):
        return len(self.functions)

    @property
    def count(self) -> int:
        return len(self.functions)

    @property
    def is_monomial(self) -> bool:
        return self.powers is not None

    def values(self, z) -> np.ndarray:
        """Matrix of ``phi_j(z)``; rows follow ``z``, columns the system."""
        z = np.asarray(z, dtype=complex)
        if self.is_monomial:
            return _monomial_values(z, self.powers, self.log_sqnorms)
        return np.stack([np.broadcast_to(np.asarray(f(z), dtype=complex), z.shape) for f in self.functions], axis=-1)


def _monomial_values(z: np.ndarray, powers: np.ndarray, log_sqnorms: np.ndarray) -> np.ndarray:
    out = np.empty(z.shape + powers.shape, dtype=complex)
    zero = z == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        logz = np.log(np.where(zero, 1.0, z))
    out[...] = np.exp(np.multiply.outer(logz, powers) - 0.5 * log_sqnorms)
    if np.any(zero):
        out[zero] = np.where(powers == 0, np.exp(-0.5 * log_sqnorms), 0.0)
    return out


def _monomial(j: int, log_sqnorm: float) -> Callable:
    scale = math.exp(-0.5 * log_sqnorm)

    def phi(z):
        return scale * np.asarray(z, dtype=complex) ** j

    phi.__name__ = f"phi_{j}"
    return phi


def _monomial_system(space: str, domain: Domain, powers: np.ndarray,
                     log_sqnorms: np.ndarray) -> OrthonormalSystem:
    funcs = tuple(_monomial(int(j), float(ls)) for j, ls in zip(powers, log_sqnorms))
    system = OrthonormalSystem(space, funcs, domain, powers, log_sqnorms)
    _verify_leading_block(system)
    return system


# Orthonormality is checked on a reference rule for the leading functions;
# the rule below integrates them exactly.
_VERIFY_COUNT = 16


def _verify_leading_block(system: OrthonormalSystem) -> None:
    if system.space == "hardy-disc":
        rule = make_boundary_quadrature(DISC, 64)
    else:
        rule = make_area_quadrature(system.domain, 24, 80)
    keep = np.argsort(np.abs(system.powers), kind="stable")[:_VERIFY_COUNT]
    sub = OrthonormalSystem(system.space, tuple(system.functions[k] for k in keep), system.domain)
    err = np.max(np.abs(discrete_gram(sub, rule) - np.eye(len(keep))))
    if err > 1e-10:
        raise AssertionError(f"{system.space} basis fails orthonormality check ({err:.2e})")


def discrete_gram(system: OrthonormalSystem, rule: QuadratureRule) -> np.ndarray:
    """``G[j, k] = sum_n w_n phi_j(x_n) conj(phi_k(x_n))``."""
    V = system.values(rule.nodes)
    return (V.T * rule.weights) @ V.conj()


def disc_bergman_basis(N: int) -> OrthonormalSystem:
    """``sqrt((j+1)/pi) z**j`` for ``j = 0 .. N-1``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    j = np.arange(N)
    return _monomial_system("bergman-disc", DISC, j, np.log(np.pi / (j + 1.0)))


def disc_hardy_basis(N: int) -> OrthonormalSystem:
    """``z**j / sqrt(2 pi)``; orthonormal for arc length on the circle."""
    if N < 1:
        raise ValueError("N must be at least 1")
    j = np.arange(N)
    return _monomial_system("hardy-disc", DISC, j, np.full(N, math.log(2.0 * math.pi)))


def annulus_sqnorm(j: int) -> float:
    """Squared area norm of ``z**j`` over ``1 < |z| < 2``."""
    if j == -1:
        return 2.0 * math.pi * LN2
    return math.pi * (4.0 ** (j + 1) - 1.0) / (j + 1)


def _annulus_log_sqnorms(powers: np.ndarray) -> np.ndarray:
    out = np.empty(powers.shape, dtype=float)
    for i, j in enumerate(powers):
        j = int(j)
        if j == -1:
            out[i] = math.log(2.0 * math.pi * LN2)
        elif j >= 0:
            # pi (4^{j+1} - 1) / (j+1)
            out[i] = math.log(math.pi) + (j + 1) * 2 * LN2 + math.log1p(-(4.0 ** -(j + 1))) - math.log(j + 1)
        else:
            # pi (1 - 4^{j+1}) / (-(j+1)), j <= -2
            out[i] = math.log(math.pi) + math.log1p(-(4.0 ** (j + 1))) - math.log(-(j + 1))
    return out


def annulus_bergman_basis(N: int) -> OrthonormalSystem:
    """Normalised ``z**j`` on the annulus ``1 < |z| < 2``, ``j = -N .. N``."""
    if N < 1:
        raise ValueError("N must be at least 1")
    j = np.arange(-N, N + 1)
    return _monomial_system("bergman-annulus", ANNULUS, j, _annulus_log_sqnorms(j))


def gram_schmidt(raw: Sequence[Callable], rule: QuadratureRule,
                 tol: float = 1e-12) -> OrthonormalSystem:
    """Orthonormalise ``raw`` in the rule's discrete inner product.

    Modified Gram-Schmidt with a second orthogonalisation pass.  A pivot
    below ``tol`` times the first pivot norm raises
    :class:`NumericalDependenceError`.
    """
    raw = tuple(raw)
    if not raw:
        raise ValueError("nothing to orthonormalise")
    w = rule.weights
    V = np.stack([np.broadcast_to(np.asarray(f(rule.nodes), dtype=complex), w.shape) for f in raw], axis=1)
    if not np.all(np.isfinite(V)):
        raise ValueError("raw functions must be finite on the rule nodes")
    n = V.shape[1]
    Q = V.copy()
    # V = Q R, so phi = raw @ inv(R)
    R = np.zeros((n, n), dtype=complex)
    first = None
    for k in range(n):
        for _ in range(2):
            for i in range(k):
                c = np.sum(w * Q[:, k] * Q[:, i].conj())
                Q[:, k] -= c * Q[:, i]
                R[i, k] += c
        nrm = math.sqrt(float(np.sum(w * np.abs(Q[:, k]) ** 2)))
        if first is None:
            first = math.sqrt(float(np.sum(w * np.abs(V[:, 0]) ** 2)))
        if nrm < tol * first:
            raise NumericalDependenceError(k)
        Q[:, k] /= nrm
        R[k, k] = nrm
    C = np.linalg.solve(R, np.eye(n, dtype=complex))
    C = np.triu(C)

    def combo(col):
        def phi(z):
            z = np.asarray(z, dtype=complex)
            acc = np.zeros(z.shape, dtype=complex)
            for k in range(col + 1):
                acc = acc + C[k, col] * np.broadcast_to(np.asarray(raw[k](z), dtype=complex), z.shape)
            return acc
        phi.__name__ = f"gs_{col}"
        return phi

    C.setflags(write=False)
    return OrthonormalSystem("custom", tuple(combo(i) for i in range(n)), rule.domain,
                             coefficients=C)


@dataclass(frozen=True)
class SeriesKernel:
    """Finite partial sum ``sum_j phi_j(z) conj(phi_j(w))``."""

    system: OrthonormalSystem
    kind: str

    @property
    def domain(self) -> Domain:
        return self.system.domain

    def values(self, z, w) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        s = self.system
        if s.is_monomial:
            return _monomial_sum(z * w.conj(), s.powers, s.log_sqnorms)
        z, w = np.broadcast_arrays(z, w)
        return np.sum(s.values(z) * s.values(w).conj(), axis=-1)

    def __call__(self, z: PointLike, w: PointLike) -> complex:
        return complex(self.values(as_point(z).z, as_point(w).z))

    evaluate = __call__


def _monomial_sum(lam: np.ndarray, powers: np.ndarray, log_sqnorms: np.ndarray) -> np.ndarray:
    lam = np.asarray(lam, dtype=complex)
    zero = lam == 0
    with np.errstate(divide="ignore", invalid="ignore"):
        loglam = np.log(np.where(zero, 1.0, lam))
    terms = np.exp(np.multiply.outer(loglam, powers) - log_sqnorms)
    # summing smallest-first keeps the long tails from being swamped
    order = np.argsort(-np.abs(powers), kind="stable")
    out = np.sum(terms[..., order], axis=-1)
    if np.any(zero):
        out = np.where(zero, np.sum(np.exp(-log_sqnorms[powers == 0])), out)
    return out


def assemble_series_kernel(system: OrthonormalSystem, kind: str = "bergman") -> SeriesKernel:
    if kind not in ("bergman", "szego"):
        raise ValueError(f"series kernels are bergman or szego, not {kind!r}")
    if len(system) == 0:
        raise ValueError("empty system")
    return SeriesKernel(system, kind)
