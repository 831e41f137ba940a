"""
Szego, Bergman and Poisson-Szego integral operators realised by quadrature.

Boundary and interior functions are vectorised callables (see
:mod:`repkernels.core`).  Default rules: 512 circle nodes, a 32 x 128 disc
area rule and a 32-per-axis product rule on S^3.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .catalog import CATALOG
from .core import (
    BALL2,
    DISC,
    DomainError,
    Point,
    PointLike,
    QuadratureRule,
    as_point,
    make_area_quadrature,
    make_boundary_quadrature,
)

__all__ = [
    "BoundaryFunction",
    "ProjectionResult",
    "szego_project",
    "bergman_project",
    "poisson_szego_extend",
    "bergman_project_at_nodes",
    "idempotence_check",
    "self_adjointness_gap",
    "NEAR_BOUNDARY",
]

NEAR_BOUNDARY = 0.95
_rules: dict = {}


def _default(kind: str) -> QuadratureRule:
    if kind not in _rules:
        _rules[kind] = {
            "arc": lambda: make_boundary_quadrature(DISC, 512),
            "area": lambda: make_area_quadrature(DISC, 32, 128),
            "sphere3": lambda: make_boundary_quadrature(BALL2, 32),
            "idempotence": lambda: make_area_quadrature(DISC, 16, 4096),
        }[kind]()
    return _rules[kind]


@dataclass(frozen=True)
class BoundaryFunction:
    eval: Callable
    description: str = ""

    def __call__(self, z):
        return self.eval(z)


@dataclass(frozen=True)
class ProjectionResult:
    at: Point
    value: complex
    rule_size: int
    warning: Optional[str] = None


def _as_function(f) -> Callable:
    return f.eval if isinstance(f, BoundaryFunction) else f


def _samples(f, rule: QuadratureRule) -> np.ndarray:
    vals = np.broadcast_to(np.asarray(_as_function(f)(rule.nodes), dtype=complex), rule.weights.shape)
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        raise ValueError(f"function is not finite at node {int(bad[0])}")
    return vals


def _result(p: Point, value: complex, rule: QuadratureRule) -> ProjectionResult:
    warning = None
    if p.norm() > NEAR_BOUNDARY:
        warning = (f"|z| = {p.norm():.4f} > {NEAR_BOUNDARY}: quadrature error grows like "
                   f"|z|^n near the boundary")
    if not np.isfinite(value):
        raise ArithmeticError("projection produced a non-finite value")
    return ProjectionResult(p, complex(value), len(rule), warning)


def szego_project(f: Union[BoundaryFunction, Callable], z: PointLike,
                  rule: Optional[QuadratureRule] = None) -> ProjectionResult:
    """``sum_k w_k f(zeta_k) S(z, zeta_k)`` with the disc Szego kernel."""
    rule = rule or _default("arc")
    if rule.measure != "arc":
        raise ValueError("the Szego projection needs a circle (arc-length) rule")
    p = as_point(z)
    DISC.require_interior(p, "z")
    S = CATALOG["szego-disc"].func(p.z, rule.nodes)
    return _result(p, np.sum(rule.weights * _samples(f, rule) * S), rule)


def bergman_project(f: Callable, z: PointLike,
                    rule: Optional[QuadratureRule] = None) -> ProjectionResult:
    """``sum_k w_k f(zeta_k) K(z, zeta_k)`` with the disc Bergman kernel."""
    rule = rule or _default("area")
    if rule.measure != "area" or rule.domain != DISC:
        raise ValueError("the Bergman projection needs a disc area rule")
    p = as_point(z)
    DISC.require_interior(p, "z")
    K = CATALOG["bergman-disc"].func(p.z, rule.nodes)
    return _result(p, np.sum(rule.weights * _samples(f, rule) * K), rule)


def poisson_szego_extend(f: Union[BoundaryFunction, Callable], z: PointLike,
                         rule: Optional[QuadratureRule] = None) -> ProjectionResult:
    """``sum_k w_k f(zeta_k) P(z, zeta_k)`` on the disc or the ball in C^2."""
    p = as_point(z)
    if p.dim == 1:
        rule = rule or _default("arc")
        kern = CATALOG["poisson-szego-disc"]
        zz = p.z
    else:
        rule = rule or _default("sphere3")
        kern = CATALOG["poisson-szego-ball2"]
        zz = p.array()
    if rule.domain != kern.domain or rule.measure not in ("arc", "sphere3"):
        raise DomainError(f"rule for the {rule.domain} does not match a point of C^{p.dim}")
    kern.domain.require_interior(p, "z")
    P = kern.func(zz, rule.nodes).real
    return _result(p, np.sum(rule.weights * _samples(f, rule) * P), rule)


def bergman_project_at_nodes(values: np.ndarray, rule: QuadratureRule) -> np.ndarray:
    """Quadrature Bergman projection of node samples, evaluated at every node.

    On a polar product rule the kernel block between two radii depends
    only on the angle difference, so each block is a circular convolution
    and is applied by FFT.  Near-boundary nodes need many angular nodes
    (thousands) before the kernel is resolved there.
    """
    if rule.measure != "area" or rule.domain != DISC or rule.grid_shape is None:
        raise ValueError("need a polar product area rule on the disc")
    nr, na = rule.grid_shape
    r = rule.factors["radii"]
    theta = rule.factors["angles"]
    wr = rule.weights.reshape(nr, na)[:, 0]
    F = np.asarray(values, dtype=complex).reshape(nr, na)
    Fhat = np.fft.fft(F * wr[:, None], axis=1)
    rr = np.multiply.outer(r, r)
    # block[a, b, k] = K(r_a e^{i theta_k}, r_b)
    block = 1.0 / (np.pi * (1.0 - rr[:, :, None] * np.exp(1j * theta)[None, None, :]) ** 2)
    Khat = np.fft.fft(block, axis=2)
    out = np.fft.ifft(np.einsum("abk,bk->ak", Khat, Fhat), axis=1)
    return out.ravel()


def idempotence_check(f: Callable, rule: Optional[QuadratureRule] = None,
                      grid: int = 5, extent: float = 0.5) -> float:
    """Largest ``|P(Pf)(z) - Pf(z)|`` over a ``grid x grid`` interior box.

    The inner ``Pf`` is the quadrature projection evaluated at the rule's
    own nodes (see :func:`bergman_project_at_nodes`).
    """
    rule = rule or _default("idempotence")
    vals = _samples(f, rule)
    pf_nodes = bergman_project_at_nodes(vals, rule)
    xs = np.linspace(-extent, extent, grid)
    zs = (xs[:, None] + 1j * xs[None, :]).ravel()
    K = CATALOG["bergman-disc"].func(zs[:, None], rule.nodes[None, :])
    once = K @ (rule.weights * vals)
    twice = K @ (rule.weights * pf_nodes)
    return float(np.max(np.abs(twice - once)))


def self_adjointness_gap(f: Callable, g: Callable, rule: Optional[QuadratureRule] = None) -> float:
    """``|<Pf, g> - <f, Pg>|`` in the rule's discrete inner product."""
    rule = rule or make_area_quadrature(DISC, 16, 1024)
    fv, gv = _samples(f, rule), _samples(g, rule)
    pf = bergman_project_at_nodes(fv, rule)
    pg = bergman_project_at_nodes(gv, rule)
    w = rule.weights
    return float(abs(np.sum(w * pf * gv.conj()) - np.sum(w * fv * pg.conj())))
