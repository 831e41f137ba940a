"""
Points, model domains and quadrature rules.

Functions handed to :func:`integrate` (and to the projection routines) are
applied to whole node arrays at once: a complex array of shape ``(m,)`` for
planar rules, shape ``(m, 2)`` for rules on the sphere in C^2.  Ordinary
numpy expressions such as ``lambda z: z**2`` or ``lambda z: z[..., 0]``
therefore work unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

__all__ = [
    "DomainError",
    "PoleError",
    "Point",
    "as_point",
    "Domain",
    "DISC",
    "ANNULUS",
    "HALFPLANE",
    "QUARTERPLANE",
    "BALL2",
    "domain_by_tag",
    "QuadratureRule",
    "make_area_quadrature",
    "make_boundary_quadrature",
    "integrate",
    "boundary_distance",
    "sample_interior",
]


class DomainError(ValueError):
    """An argument lies outside the region where an operation is defined."""


class PoleError(ArithmeticError):
    """Evaluation requested at (or numerically on) a kernel singularity."""


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class Point:
    """A point of C^1 or C^2."""

    coords: tuple

    def __post_init__(self):
        coords = tuple(complex(c) for c in self.coords)
        if len(coords) not in (1, 2):
            raise ValueError(f"points live in C^1 or C^2, got {len(coords)} coordinates")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coords):
            raise ValueError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def from_pairs(cls, pairs: Sequence[Sequence[float]]) -> "Point":
        return cls(tuple(complex(re, im) for re, im in pairs))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def z(self) -> complex:
        """First coordinate; the point itself when dim == 1."""
        return self.coords[0]

    def pairs(self) -> list:
        return [(c.real, c.imag) for c in self.coords]

    def norm(self) -> float:
        return math.sqrt(sum(abs(c) ** 2 for c in self.coords))

    def array(self):
        """Scalar complex for dim 1, length-2 complex array for dim 2."""
        if self.dim == 1:
            return self.coords[0]
        return np.array(self.coords, dtype=complex)

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)


PointLike = Union[Point, complex, float, int, Sequence[complex], np.ndarray]


def as_point(p: PointLike) -> Point:
    if isinstance(p, Point):
        return p
    if isinstance(p, (complex, float, int, np.number)):
        return Point((p,))
    return Point(tuple(np.asarray(p, dtype=complex).ravel()))


# --------------------------------------------------------------------------
# domains

_TAGS = ("disc", "annulus", "halfplane", "quarterplane", "ball2")


@dataclass(frozen=True)
class Domain:
    tag: str

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise ValueError(f"unknown domain tag {self.tag!r}")

    @property
    def dim(self) -> int:
        return 2 if self.tag == "ball2" else 1

    @property
    def bounded(self) -> bool:
        return self.tag in ("disc", "annulus", "ball2")

    def _signed_distance(self, p: Point) -> float:
        # positive inside, zero on the boundary, negative outside
        z = p.z
        if self.tag == "disc":
            return 1.0 - abs(z)
        if self.tag == "annulus":
            r = abs(z)
            return min(r - 1.0, 2.0 - r)
        if self.tag == "halfplane":
            return z.imag
        if self.tag == "quarterplane":
            return min(z.real, z.imag)
        return 1.0 - p.norm()

    def _check_dim(self, p: Point) -> None:
        if p.dim != self.dim:
            raise DomainError(f"{self.tag} expects points in C^{self.dim}, got C^{p.dim}")

    def contains(self, z: PointLike) -> bool:
        p = as_point(z)
        self._check_dim(p)
        return self._signed_distance(p) > 0.0

    def on_boundary(self, z: PointLike, tol: float = 1e-10) -> bool:
        p = as_point(z)
        self._check_dim(p)
        if self.tag == "annulus":
            r = abs(p.z)
            return min(abs(r - 1.0), abs(r - 2.0)) <= tol
        if self.tag == "quarterplane":
            z0 = p.z
            return (abs(z0.real) <= tol and z0.imag >= -tol) or (
                abs(z0.imag) <= tol and z0.real >= -tol
            )
        return abs(self._signed_distance(p)) <= tol

    def boundary_distance(self, z: PointLike) -> float:
        p = as_point(z)
        self._check_dim(p)
        d = self._signed_distance(p)
        if d < 0.0:
            raise DomainError(f"{p.coords} lies outside the closed {self.tag}")
        return d

    def require_interior(self, z: PointLike, what: str = "z") -> Point:
        p = as_point(z)
        if not self.contains(p):
            raise DomainError(f"{what}={p.coords} is not in the open {self.tag}")
        return p

    def require_boundary(self, z: PointLike, what: str = "w", tol: float = 1e-10) -> Point:
        p = as_point(z)
        if not self.on_boundary(p, tol):
            raise DomainError(f"{what}={p.coords} is not on the boundary of the {self.tag}")
        return p

    def __str__(self):
        return self.tag


DISC = Domain("disc")
ANNULUS = Domain("annulus")
HALFPLANE = Domain("halfplane")
QUARTERPLANE = Domain("quarterplane")
BALL2 = Domain("ball2")


def domain_by_tag(tag: str) -> Domain:
    return Domain(tag)


def boundary_distance(domain: Domain, z: PointLike) -> float:
    """Euclidean distance from ``z`` to the boundary of ``domain``."""
    return domain.boundary_distance(z)


def sample_interior(domain: Domain, rng: np.random.Generator, n: int,
                    margin: float = 0.0, box: float = 3.0) -> np.ndarray:
    """Random interior points (complex array, or (n, 2) for the ball).

    Unbounded domains are sampled inside ``[-box, box]^2`` intersected with
    the domain; ``margin`` keeps samples that far from the boundary.
    """
    if domain.tag == "disc":
        r = (1.0 - margin) * np.sqrt(rng.uniform(0, 1, n))
        return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    if domain.tag == "annulus":
        r = np.sqrt(rng.uniform((1 + margin) ** 2, (2 - margin) ** 2, n))
        return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))
    if domain.tag == "halfplane":
        return rng.uniform(-box, box, n) + 1j * rng.uniform(margin, box, n)
    if domain.tag == "quarterplane":
        return rng.uniform(margin, box, n) + 1j * rng.uniform(margin, box, n)
    v = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    r = (1.0 - margin) * rng.uniform(0, 1, n) ** 0.25
    return v * r[:, None]


# --------------------------------------------------------------------------
# quadrature

_TOTALS = {
    ("area", "disc"): math.pi,
    ("area", "annulus"): 3.0 * math.pi,
    ("arc", "disc"): 2.0 * math.pi,
    ("sphere3", "ball2"): 2.0 * math.pi ** 2,
}


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights for one of the supported measures.

    Product rules keep their factor structure in ``grid_shape`` (nodes are
    stored in C order over that shape) together with the 1-d factors, so
    callers may exploit it; ``expected_total`` and ``tolerance`` describe the
    self-check on the weight sum.
    """

    nodes: np.ndarray
    weights: np.ndarray
    measure: str
    domain: Domain
    expected_total: float
    tolerance: float
    grid_shape: Optional[tuple] = None
    factors: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(self.nodes) != len(self.weights) or len(self.nodes) == 0:
            raise ValueError("a rule needs as many weights as nodes, and at least one")
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be positive")
        self.nodes.setflags(write=False)
        self.weights.setflags(write=False)

    def __len__(self):
        return len(self.weights)

    def weight_sum_error(self) -> float:
        return abs(float(np.sum(self.weights)) - self.expected_total)


def make_area_quadrature(domain: Domain, n_radial: int = 32, n_angular: int = 128) -> QuadratureRule:
    """Gauss-Legendre in radius times the trapezoid rule in angle."""
    if domain.tag not in ("disc", "annulus"):
        raise DomainError("no area rule for this domain")
    if n_radial < 2 or n_angular < 4:
        raise ValueError("need n_radial >= 2 and n_angular >= 4")
    a, b = (0.0, 1.0) if domain.tag == "disc" else (1.0, 2.0)
    x, w = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * (b - a) * x + 0.5 * (b + a)
    wr = 0.5 * (b - a) * w
    theta = 2.0 * np.pi * np.arange(n_angular) / n_angular
    dtheta = 2.0 * np.pi / n_angular
    nodes = (r[:, None] * np.exp(1j * theta)[None, :]).ravel()
    weights = np.repeat(wr * r * dtheta, n_angular)
    return QuadratureRule(
        nodes, weights, "area", domain, _TOTALS[("area", domain.tag)], 1e-12,
        grid_shape=(n_radial, n_angular),
        factors={"radii": r, "radial_weights": wr, "angles": theta},
    )


def make_boundary_quadrature(domain: Domain, n_nodes: int = 512) -> QuadratureRule:
    """Trapezoid rule on the unit circle, or a product rule on S^3.

    On S^3 the nodes are ``(e^{i t} cos s, e^{i u} sin s)`` with ``t, u``
    on an ``n_nodes``-point trapezoid grid and ``s`` on ``n_nodes``
    Gauss-Legendre points of ``[0, pi/2]``; the surface element is
    ``cos s sin s ds dt du``.
    """
    if domain.tag == "disc":
        if n_nodes < 8:
            raise ValueError("need at least 8 circle nodes")
        theta = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
        weights = np.full(n_nodes, 2.0 * np.pi / n_nodes)
        return QuadratureRule(
            np.exp(1j * theta), weights, "arc", domain, 2.0 * np.pi, 1e-13,
            grid_shape=(n_nodes,), factors={"angles": theta},
        )
    if domain.tag == "ball2":
        if n_nodes < 2:
            raise ValueError("need at least 2 nodes per axis")
        x, w = np.polynomial.legendre.leggauss(n_nodes)
        s = 0.25 * np.pi * (x + 1.0)
        ws = 0.25 * np.pi * w * np.cos(s) * np.sin(s)
        t = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
        dt = 2.0 * np.pi / n_nodes
        S, T, U = np.meshgrid(s, t, t, indexing="ij")
        nodes = np.stack([np.exp(1j * T) * np.cos(S), np.exp(1j * U) * np.sin(S)], axis=-1)
        weights = np.broadcast_to((ws * dt * dt)[:, None, None], S.shape)
        return QuadratureRule(
            nodes.reshape(-1, 2), np.ascontiguousarray(weights).ravel(), "sphere3", domain,
            2.0 * np.pi ** 2, 1e-10, grid_shape=S.shape,
            factors={"polar": s, "angles": t},
        )
    raise DomainError(f"no boundary rule for the {domain.tag}")


def integrate(rule: QuadratureRule, f: Callable, vectorized: bool = True) -> complex:
    """Sum of ``weights[k] * f(nodes[k])``.

    With ``vectorized=False`` ``f`` is called once per node with a
    :class:`Point`.
    """
    if vectorized:
        vals = np.broadcast_to(np.asarray(f(rule.nodes), dtype=complex), rule.weights.shape)
    else:
        vals = np.array([complex(f(Point(tuple(np.atleast_1d(n))))) for n in rule.nodes])
    bad = np.flatnonzero(~np.isfinite(vals))
    if bad.size:
        k = int(bad[0])
        raise ValueError(f"integrand is not finite at node {k} ({rule.nodes[k]})")
    return complex(np.sum(rule.weights * vals))
