"""
Closed-form kernels on the model domains, the Poisson-Szego construction,
the annulus series and its decomposition, the extremal characterisation of
``K(z, z)`` and boundary blowup probes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .basis import (
    OrthonormalSystem,
    annulus_bergman_basis,
    assemble_series_kernel,
)
from .core import (
    ANNULUS,
    BALL2,
    DISC,
    HALFPLANE,
    QUARTERPLANE,
    Domain,
    DomainError,
    Point,
    PointLike,
    PoleError,
    as_point,
)

__all__ = [
    "InvariantViolation",
    "Kernel",
    "CATALOG",
    "CLOSED_FORM_IDS",
    "kernel",
    "eval_closed_form",
    "poisson_szego_from",
    "annulus_kernel_approx",
    "annulus_series",
    "annulus_truncation",
    "AnnulusTerms",
    "annulus_error_terms",
    "extremal_value",
    "BlowupReport",
    "blowup_probe",
    "DEFAULT_DELTAS",
    "BALL_VOLUME",
    "SPHERE_AREA",
]

POLE_GUARD = 1e-13
BALL_VOLUME = math.pi ** 2 / 2.0   # Euclidean volume of the unit ball of C^2
SPHERE_AREA = 2.0 * math.pi ** 2   # surface measure of S^3
DEFAULT_DELTAS = tuple(2.0 ** -k for k in range(3, 11))


class InvariantViolation(ArithmeticError):
    pass


def _c(x):
    # keep extended-precision input extended
    x = np.asarray(x)
    return x if x.dtype.kind == "c" else x.astype(np.result_type(x.dtype, np.complex128))


def _dot(z, w):
    """``z . conj(w)``; plain product in one variable."""
    z, w = _c(z), _c(w)
    # spelled out so that swapping z and w conjugates the result exactly
    # and z = w gives an exactly real value
    zr, zi, wr, wi = z.real, z.imag, w.real, w.imag
    prod = (zr * wr + zi * wi) + 1j * (zi * wr - zr * wi)
    if z.ndim and z.shape[-1:] == (2,) and w.shape[-1:] == (2,):
        return prod[..., 0] + prod[..., 1]
    return prod


def _one_minus_sq(z):
    """``1 - |z|^2`` computed as ``(1 - |z|)(1 + |z|)``."""
    z = _c(z)
    r = np.linalg.norm(z, axis=-1) if z.ndim and z.shape[-1:] == (2,) else np.abs(z)
    return (1.0 - r) * (1.0 + r)


def _abs_sq_one_minus(lam):
    """``|1 - lam|^2`` as ``(1 - |lam|)^2 + 4 |lam| sin^2(arg(lam)/2)``, free of cancellation."""
    r = np.abs(lam)
    return (1.0 - r) ** 2 + 4.0 * r * np.sin(0.5 * np.angle(lam)) ** 2


@dataclass(frozen=True)
class Kernel:
    """A two-point kernel with its domain, kind and provenance.

    ``func`` is vectorised over numpy arrays and does no checking;
    calling the kernel checks the arguments and guards the singularity.
    ``w_region`` says where the second argument may sit: ``interior``,
    ``boundary`` or ``closure``.
    """

    name: str
    domain: Domain
    kind: str
    provenance: str
    func: Callable
    w_region: str = "interior"
    pole: Optional[Callable] = None

    def values(self, z, w):
        return self.func(z, w)

    def __call__(self, z: PointLike, w: PointLike) -> complex:
        p, q = as_point(z), as_point(w)
        if p.dim != self.domain.dim or q.dim != self.domain.dim:
            raise DomainError(f"{self.name} takes points of C^{self.domain.dim}")
        if self.pole is not None and float(self.pole(p.array(), q.array())) < POLE_GUARD:
            raise PoleError(f"{self.name} is singular at z={p.coords}, w={q.coords}")
        self.domain.require_interior(p, "z")
        if self.w_region == "interior":
            self.domain.require_interior(q, "w")
        elif self.w_region == "boundary":
            self.domain.require_boundary(q, "w")
        elif not (self.domain.contains(q) or self.domain.on_boundary(q)):
            raise DomainError(f"w={q.coords} is outside the closed {self.domain.tag}")
        return complex(np.asarray(self.func(p.array(), q.array())).ravel()[0])

    evaluate = __call__


# --------------------------------------------------------------------------
# closed forms (vectorised, unchecked)


def _bergman_disc(z, w):
    return 1.0 / (np.pi * (1.0 - _dot(z, w)) ** 2)


def _szego_disc(z, w):
    return 1.0 / (2.0 * np.pi * (1.0 - _dot(z, w)))


def _extended(z, w):
    # Poisson-Szego values lose ~1/(1-|z|) ulps in double; evaluate in
    # extended precision and return in the callers' precision
    z, w = _c(z), _c(w)
    out = np.result_type(z, w)
    return z.astype(np.clongdouble), w.astype(np.clongdouble), out


def _poisson_szego_disc(z, w):
    z, w, out = _extended(z, w)
    return (_one_minus_sq(z) / (2 * np.pi * _abs_sq_one_minus(_dot(z, w)))).astype(out)


def _bergman_halfplane(z, w):
    return -1.0 / (np.pi * (np.conj(w) - np.asarray(z)) ** 2)


def _bergman_quarterplane(z, w):
    z = _c(z)
    wb = np.conj(w)
    return -4.0 * _dot(z, w) / (np.pi * (wb ** 2 - z ** 2) ** 2)


def _bergman_ball2(z, w):
    return 1.0 / (BALL_VOLUME * (1.0 - _dot(z, w)) ** 3)


def _szego_ball2(z, w):
    return 1.0 / (SPHERE_AREA * (1.0 - _dot(z, w)) ** 2)


def _poisson_szego_ball2(z, w):
    z, w, out = _extended(z, w)
    area = 2 * np.pi ** 2
    return (_one_minus_sq(z) ** 2 / (area * _abs_sq_one_minus(_dot(z, w)) ** 2)).astype(out)


def _annulus_approx(z, w):
    lam = _dot(z, w)
    return 4.0 / (np.pi * (4.0 - lam) ** 2) + 1.0 / (np.pi * (1.0 - lam) ** 2)


def _unit_pole(z, w):
    return np.abs(1.0 - _dot(z, w))


def _halfplane_pole(z, w):
    return np.abs(np.conj(w) - z)


def _quarter_pole(z, w):
    return np.abs(np.conj(w) ** 2 - np.asarray(z) ** 2)


def _annulus_pole(z, w):
    lam = _dot(z, w)
    return np.minimum(np.abs(1.0 - lam), np.abs(4.0 - lam))


CATALOG = {
    "bergman-disc": Kernel("bergman-disc", DISC, "bergman", "closed-form", _bergman_disc,
                           "interior", _unit_pole),
    "szego-disc": Kernel("szego-disc", DISC, "szego", "closed-form", _szego_disc,
                         "closure", _unit_pole),
    "poisson-szego-disc": Kernel("poisson-szego-disc", DISC, "poisson-szego", "closed-form",
                                 _poisson_szego_disc, "boundary", _unit_pole),
    "bergman-halfplane": Kernel("bergman-halfplane", HALFPLANE, "bergman", "closed-form",
                                _bergman_halfplane, "interior", _halfplane_pole),
    "bergman-quarterplane": Kernel("bergman-quarterplane", QUARTERPLANE, "bergman", "closed-form",
                                   _bergman_quarterplane, "interior", _quarter_pole),
    "bergman-ball2": Kernel("bergman-ball2", BALL2, "bergman", "closed-form", _bergman_ball2,
                            "interior", _unit_pole),
    "szego-ball2": Kernel("szego-ball2", BALL2, "szego", "closed-form", _szego_ball2,
                          "closure", _unit_pole),
    "poisson-szego-ball2": Kernel("poisson-szego-ball2", BALL2, "poisson-szego", "closed-form",
                                  _poisson_szego_ball2, "boundary", _unit_pole),
}
CLOSED_FORM_IDS = tuple(CATALOG)


def eval_closed_form(kernel_id: str, z: PointLike, w: PointLike) -> complex:
    try:
        k = CATALOG[kernel_id]
    except KeyError:
        raise KeyError(f"unknown kernel id {kernel_id!r}; choose from {', '.join(CATALOG)}") from None
    return k(z, w)


def poisson_szego_from(S: Kernel, z: PointLike, w: PointLike) -> float:
    """``|S(z, w)|^2 / S(z, z)`` for a Szego kernel ``S``."""
    if S.kind != "szego":
        raise ValueError(f"need a szego kernel, got {S.kind}")
    p = as_point(z)
    S.domain.require_boundary(w, "w")
    szz = S(p, p)
    if not szz.real > 0.0 or abs(szz.imag) > 1e-12 * abs(szz.real):
        raise InvariantViolation(f"S(z, z) = {szz} is not positive")
    return abs(S(p, w)) ** 2 / szz.real


# --------------------------------------------------------------------------
# annulus 1 < |z| < 2


def annulus_kernel_approx(z: PointLike, w: PointLike) -> complex:
    """Disc-of-radius-2 plus disc-of-radius-1 two-term approximation."""
    p = ANNULUS.require_interior(z, "z")
    q = ANNULUS.require_interior(w, "w")
    return complex(_annulus_approx(p.z, q.z))


def _tail_cutoff(rate: float, coef: float, tol: float, start: int = 0) -> int:
    """Smallest J >= start with coef * sum_{j >= J} (j+1) rate^j <= tol."""
    if rate <= 0.0:
        return start
    if rate >= 1.0:
        raise DomainError("series diverges on the boundary of the annulus")
    J = start
    a = 1.0 - rate
    while coef * rate ** J * ((J + 1) / a + rate / a ** 2) > tol:
        J += 1
    return J


def annulus_truncation(z: PointLike, w: PointLike, tol: float = 1e-12) -> int:
    """Symmetric truncation ``N`` so that both tails of the series are below ``tol``."""
    p = ANNULUS.require_interior(z, "z")
    q = ANNULUS.require_interior(w, "w")
    mod = abs(p.z) * abs(q.z)
    # j >= 0: |term| <= (4/3)(j+1)/(4 pi) (|lam|/4)^j
    J = _tail_cutoff(mod / 4.0, 1.0 / (3.0 * math.pi), tol / 2)
    # j = -m <= -2: |term| <= (4/3)(m+1)/pi |lam|^-m
    M = _tail_cutoff(1.0 / mod, 4.0 / (3.0 * math.pi), tol / 2, start=2)
    return max(J, M, 1)


def annulus_series(z: PointLike, w: PointLike, tol: float = 1e-12) -> complex:
    N = annulus_truncation(z, w, tol)
    return assemble_series_kernel(annulus_bergman_basis(N))(z, w)


def _annulus_series_values(z, w):
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    z, w = np.broadcast_arrays(z, w)
    out = np.array([annulus_series(a, b) for a, b in zip(z.ravel(), w.ravel())])
    return out.reshape(z.shape)


CATALOG["bergman-annulus"] = Kernel("bergman-annulus", ANNULUS, "bergman", "series",
                                    _annulus_series_values, "interior")
CATALOG["bergman-annulus-approx"] = Kernel("bergman-annulus-approx", ANNULUS, "bergman",
                                           "closed-form", _annulus_approx, "interior",
                                           _annulus_pole)


@dataclass(frozen=True)
class AnnulusTerms:
    I1: complex
    I2: complex
    II: complex
    III1: complex
    III2: complex

    @property
    def total(self) -> complex:
        return self.I1 + self.I2 + self.II + self.III1 + self.III2

    @property
    def approximation(self) -> complex:
        return self.I1 + self.III1


def _geometric_sum(first_terms: Callable[[int], complex], ratio: float, tol: float) -> complex:
    # terms are dominated by a geometric sequence with the given ratio from
    # the first index on; stop once the remaining tail is below tol
    acc = 0j
    k = 0
    while True:
        t = first_terms(k)
        acc += t
        if abs(t) * ratio / (1.0 - ratio) <= tol:
            return acc
        k += 1


def annulus_error_terms(z: PointLike, w: PointLike, tol: float = 1e-12) -> AnnulusTerms:
    """Split of the annulus kernel into the two disc-like closed forms and remainders."""
    p = ANNULUS.require_interior(z, "z")
    q = ANNULUS.require_interior(w, "w")
    lam = p.z * q.z.conjugate()
    I1 = 1.0 / (math.pi * (1.0 - lam) ** 2)
    III1 = 4.0 / (math.pi * (4.0 - lam) ** 2)
    II = 1.0 / (2.0 * math.pi * math.log(2.0) * lam)

    # j = -m, m >= 2: ((m-1)/pi) 4^{1-m} / (1 - 4^{1-m}) lam^{-m}
    def i2_term(k):
        m = k + 2
        f = 4.0 ** (1 - m)
        return (m - 1) / math.pi * f / (1.0 - f) * lam ** (-m)

    # j >= 0: (j+1) / (pi 4^{j+1} (4^{j+1} - 1)) lam^j
    def iii2_term(j):
        f = 4.0 ** -(j + 1)
        return (j + 1) / math.pi * f * f / (1.0 - f) * lam ** j

    # successive-term ratios are at most (m/(m-1)) / (4|lam|) and
    # ((j+2)/(j+1)) |lam| / 16 respectively; 0.5 bounds both for m >= 2, j >= 0
    I2 = _geometric_sum(i2_term, 0.5, tol)
    III2 = _geometric_sum(iii2_term, 0.5, tol)
    return AnnulusTerms(I1, I2, II, III1, III2)


# --------------------------------------------------------------------------
# extremal problem and blowup


def extremal_value(system: OrthonormalSystem, z: PointLike):
    """``(sum_j |phi_j(z)|^2, a)`` with ``a`` the maximising unit coefficient vector."""
    p = as_point(z)
    system.domain.require_interior(p, "z")
    v = system.values(np.asarray([p.z]))[0]
    value = float(np.sum(np.abs(v) ** 2))
    if value == 0.0:
        return 0.0, np.zeros_like(v)
    return value, v.conj() / math.sqrt(value)


@dataclass(frozen=True)
class BlowupReport:
    """Diagonal kernel magnitudes along a path into the boundary.

    ``fitted_exponent``/``fitted_constant`` come from the straight-line
    least-squares fit ``log|K| = p log(1/d) + log C``.  The ``corrected_*``
    pair adds a ``b * d`` column to absorb the first-order analytic
    correction, which the straight line mistakes for slope when the
    largest ``d`` is not small.
    """

    deltas: tuple
    distances: tuple
    values: tuple
    fitted_exponent: float
    fitted_constant: float
    corrected_exponent: float
    corrected_constant: float


def blowup_probe(K: Kernel, path: Callable[[float], PointLike],
                 deltas: Sequence[float] = DEFAULT_DELTAS,
                 distance: Optional[Callable[[float], float]] = None) -> BlowupReport:
    """Fit the growth of ``|K(path(d), path(d))|`` as ``d -> 0``.

    ``distance`` maps each ``d`` to the quantity the rate is measured
    against (default: ``d`` itself).
    """
    deltas = tuple(float(d) for d in deltas)
    if len(deltas) < 3:
        raise ValueError("need at least three deltas")
    if any(d <= 0 for d in deltas) or any(b >= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("deltas must be positive and strictly decreasing")
    vals = []
    for d in deltas:
        p = as_point(path(d))
        if not K.domain.contains(p):
            raise DomainError(f"probe point for delta={d} is outside the {K.domain.tag}")
        vals.append(abs(K(p, p)))
    vals = np.array(vals)
    if not np.all(np.isfinite(vals) & (vals > 0)):
        raise InvariantViolation("kernel magnitudes along the path must be finite and positive")
    s = np.array([distance(d) if distance else d for d in deltas], dtype=float)
    x = np.log(1.0 / s)
    y = np.log(vals)
    A = np.column_stack([x, np.ones_like(x)])
    (p1, c1), *_ = np.linalg.lstsq(A, y, rcond=None)
    B = np.column_stack([x, np.ones_like(x), s])
    (p2, c2, _), *_ = np.linalg.lstsq(B, y, rcond=None)
    return BlowupReport(deltas, tuple(s), tuple(vals), float(p1), float(math.exp(c1)),
                        float(p2), float(math.exp(c2)))


def kernel(kernel_id: str) -> Kernel:
    try:
        return CATALOG[kernel_id]
    except KeyError:
        raise KeyError(f"unknown kernel id {kernel_id!r}; choose from {', '.join(CATALOG)}") from None
