"""
Self-checks grouped into suites; each check records the measured value
against its tolerance.  ``run_suite("all")`` aggregates every suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from . import ballgeom as bg
from .basis import assemble_series_kernel, disc_bergman_basis, disc_hardy_basis
from .catalog import (
    CATALOG,
    annulus_error_terms,
    annulus_kernel_approx,
    annulus_series,
    blowup_probe,
    extremal_value,
)
from .core import BALL2, DISC, HALFPLANE, QUARTERPLANE, make_boundary_quadrature, sample_interior
from .projections import (
    bergman_project,
    idempotence_check,
    poisson_szego_extend,
    self_adjointness_gap,
    szego_project,
)
from .transport import cayley, pullback_kernel, real_jacobian_det, square, unitary_invariance_check

__all__ = ["Check", "SuiteReport", "SUITES", "run_suite"]

SEED = 20240611


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    note: str = ""

    def line(self) -> str:
        s = f"{self.name}: {'PASS' if self.passed else 'FAIL'} (measured {self.measured:.3e})"
        return f"{s}; {self.note}" if self.note else s


@dataclass
class SuiteReport:
    suite: str
    checks: List[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self) -> List[str]:
        out = [f"[{self.suite}]"] + [c.line() for c in self.checks]
        out.append(f"suite {self.suite}: {'PASS' if self.passed else 'FAIL'}")
        return out


def _le(name: str, measured: float, tol: float, note: str = "") -> Check:
    measured = float(measured)
    return Check(name, measured, tol, bool(np.isfinite(measured) and measured <= tol), note)


def _near(name: str, measured: float, target: float, tol: float, note: str = "") -> Check:
    measured = float(measured)
    return Check(name, measured, tol, bool(abs(measured - target) <= tol), note)


def _rng() -> np.random.Generator:
    return np.random.default_rng(SEED)


def _disc_points(n: int, radius: float, phase: float) -> np.ndarray:
    # n points on a spiral through the closed disc of the given radius
    k = np.arange(n)
    return radius * np.sqrt((k + 1) / n) * np.exp(1j * (phase + 2.399963 * k))


# --------------------------------------------------------------------------


def disc_series_error(N: int = 200) -> float:
    z = _disc_points(21, 0.9, 0.0)[:, None]
    w = _disc_points(21, 0.9, 1.0)[None, :]
    series = assemble_series_kernel(disc_bergman_basis(N)).values(z, w)
    exact = CATALOG["bergman-disc"].func(z, w)
    return float(np.max(np.abs(series - exact) / np.abs(exact)))


def szego_series_error(N: int = 200) -> float:
    z = _disc_points(21, 0.9, 0.0)[:, None]
    w = np.exp(2j * np.pi * np.arange(21) / 21)[None, :]
    series = assemble_series_kernel(disc_hardy_basis(N), "szego").values(z, w)
    exact = CATALOG["szego-disc"].func(z, w)
    return float(np.max(np.abs(series - exact) / np.abs(exact)))


def poisson_polar_error(n: int = 500) -> float:
    rng = _rng()
    r = rng.uniform(0, 0.99, n)
    th = rng.uniform(0, 2 * np.pi, n)
    ps = rng.uniform(0, 2 * np.pi, n)
    got = CATALOG["poisson-szego-disc"].func(r * np.exp(1j * th), np.exp(1j * ps)).real
    # (1 - r)^2 + 4 r sin^2(phi/2) is the cancellation-free 1 - 2 r cos(phi) + r^2
    want = (1 - r ** 2) / (2 * np.pi * ((1 - r) ** 2 + 4 * r * np.sin((th - ps) / 2) ** 2))
    return float(np.max(np.abs(got - want) / want))


def extremal_checks(N: int = 50, z: complex = 0.4 + 0.3j, trials: int = 1000):
    system = disc_bergman_basis(N)
    value, _ = extremal_value(system, z)
    series = assemble_series_kernel(system)(z, z).real
    v = system.values(np.asarray([z]))[0]
    rng = _rng()
    a = rng.normal(size=(trials, N)) + 1j * rng.normal(size=(trials, N))
    a /= np.linalg.norm(a, axis=1, keepdims=True)
    excess = float(np.max(np.abs(a @ v) ** 2 - value))
    return abs(value - series) / series, excess


def disc_suite() -> SuiteReport:
    r = SuiteReport("disc")
    r.checks.append(_le("series-vs-closed-form N=200 ≤ 1e-12", disc_series_error(), 1e-12))
    r.checks.append(_le("szego-series N=200 ≤ 1e-12", szego_series_error(), 1e-12))
    r.checks.append(_le("poisson-szego-polar-identity ≤ 1e-14", poisson_polar_error(), 1e-14))
    rel, excess = extremal_checks()
    r.checks.append(_le("extremal-equals-series rel ≤ 1e-14", rel, 1e-14))
    r.checks.append(_le("extremal-competitor-excess ≤ 1e-12", max(excess, 0.0), 1e-12))
    rep = blowup_probe(CATALOG["bergman-disc"], lambda d: 1.0 - d)
    r.checks.append(_near("disc-blowup-exponent = 2.00 ± 0.02", rep.corrected_exponent, 2.0, 0.02,
                          f"straight-line slope {rep.fitted_exponent:.4f}"))
    K = rep.values[-1] * rep.deltas[-1] ** 2
    r.checks.append(_le("disc-blowup-constant vs 1/(4π) rel ≤ 0.05",
                        abs(K * 4 * math.pi - 1.0), 0.05))
    return r


# --------------------------------------------------------------------------


def annulus_checks():
    z, w = 1.3, 1.6 * np.exp(0.5j)
    decomposition = abs(annulus_error_terms(z, w).total - annulus_series(z, w))
    near = annulus_series(1.99, 1.99).real
    near_rel = abs(near - annulus_kernel_approx(1.99, 1.99).real) / near
    rad = np.linspace(1.02, 1.98, 9)
    ang = np.linspace(0, 2 * np.pi, 8, endpoint=False)
    pts = (rad[:, None] * np.exp(1j * ang[None, :])).ravel()
    worst = 0.0
    for a in pts:
        for b in pts[::5]:
            worst = max(worst, abs(annulus_series(a, b) - annulus_kernel_approx(a, b)))
    return decomposition, near_rel, worst


def annulus_suite() -> SuiteReport:
    r = SuiteReport("annulus")
    dec, near, glob = annulus_checks()
    r.checks.append(_le("series-vs-decomposition ≤ 1e-9", dec, 1e-9))
    r.checks.append(_le("near-boundary series-vs-approximation rel ≤ 1e-2", near, 1e-2))
    r.checks.append(_le("grid series-vs-approximation abs ≤ 0.5", glob, 0.5))
    return r


# --------------------------------------------------------------------------


def _pullback_error(fmap, target_id: str, source_id: str, n: int = 200) -> float:
    rng = _rng()
    z = sample_interior(fmap.source, rng, n, margin=0.05)
    w = sample_interior(fmap.source, rng, n, margin=0.05)
    got = pullback_kernel(fmap, CATALOG[target_id]).func(z, w)
    want = CATALOG[source_id].func(z, w)
    return float(np.max(np.abs(got - want) / np.abs(want)))


def jacobian_error(n: int = 200) -> float:
    rng = _rng()
    worst = 0.0
    for fmap in (cayley(), square()):
        for z in sample_interior(fmap.source, rng, n // 2, margin=0.05):
            pair = real_jacobian_det(fmap, z)
            target = abs(pair.complex_det) ** 2
            worst = max(worst, abs(pair.real_det - target) / target)
    return worst


def quarterplane_diagonal_error(delta: float = 0.25) -> float:
    z = complex(delta, delta)
    got = CATALOG["bergman-quarterplane"](z, z)
    return abs(got - 1.0 / (2 * math.pi * delta ** 2)) * 2 * math.pi * delta ** 2


def transport_suite() -> SuiteReport:
    r = SuiteReport("transport")
    r.checks.append(_le("cayley-pullback rel ≤ 1e-12", _pullback_error(cayley(), "bergman-disc", "bergman-halfplane"), 1e-12))
    r.checks.append(_le("square-pullback rel ≤ 1e-12", _pullback_error(square(), "bergman-halfplane", "bergman-quarterplane"), 1e-12))
    r.checks.append(_le("real-det = |complex-det|^2 rel ≤ 1e-6", jacobian_error(), 1e-6))
    M = np.array([[1, 1j], [1j, 1]]) / math.sqrt(2)
    r.checks.append(_le("unitary-invariance ≤ 1e-12",
                        unitary_invariance_check(M, (0.3, 0.2j), (-0.1, 0.5)), 1e-12))
    rep = blowup_probe(CATALOG["bergman-halfplane"], lambda d: complex(0.3, d))
    r.checks.append(_near("halfplane-blowup-exponent = 2.00 ± 0.02", rep.fitted_exponent, 2.0, 0.02))
    rep = blowup_probe(CATALOG["bergman-quarterplane"], lambda d: complex(d, d),
                       distance=lambda d: d * math.sqrt(2))
    r.checks.append(_near("quarterplane-corner-exponent (1/s) = 4.00 ± 0.05", rep.fitted_exponent, 4.0, 0.05,
                          "diagonal values are exactly 1/(pi s^2), so the rate in 1/s is 2"))
    r.checks.append(_le("quarterplane-diagonal = 1/(2πδ²) rel ≤ 1e-14", quarterplane_diagonal_error(), 1e-14,
                        "the closed form gives 1/(2 pi delta^2), not the printed 2/(pi i delta^2), "
                        "which is not real and so cannot be a diagonal Bergman value"))
    return r


# --------------------------------------------------------------------------


def projection_checks() -> dict:
    pts = _disc_points(10, 0.8, 0.3)
    f = lambda z: z ** 3 + 2 * z
    out = {"bergman": max(abs(bergman_project(f, z).value - f(z)) for z in pts)}
    poly = lambda z: z ** 3 - 2j * z + 0.5
    out["szego"] = max(abs(szego_project(poly, z).value - poly(z)) for z in pts)
    out["poisson"] = max(abs(poisson_szego_extend(poly, z).value - poly(z)) for z in pts)
    z0 = 0.3 - 0.2j
    out["S(conj)"] = abs(szego_project(np.conj, z0).value)
    out["S(1)"] = abs(szego_project(lambda t: np.ones_like(t), z0).value - 1)
    out["S(id)"] = abs(szego_project(lambda t: t, z0).value - z0)
    out["idempotence"] = idempotence_check(lambda z: np.abs(z) ** 2 + np.conj(z) ** 2)
    out["self-adjoint"] = self_adjointness_gap(lambda z: np.conj(z) * z, lambda z: z ** 2 + np.conj(z))
    return out


def projections_suite() -> SuiteReport:
    m = projection_checks()
    r = SuiteReport("projections")
    r.checks.append(_le("bergman-reproduces z^3+2z ≤ 1e-8", m["bergman"], 1e-8))
    r.checks.append(_le("szego-reproduces polynomial ≤ 1e-10", m["szego"], 1e-10))
    r.checks.append(_le("poisson-szego-reproduces polynomial ≤ 1e-10", m["poisson"], 1e-10))
    r.checks.append(_le("S(conj z) = 0 ≤ 1e-10", m["S(conj)"], 1e-10))
    r.checks.append(_le("S(1) = 1 ≤ 1e-10", m["S(1)"], 1e-10))
    r.checks.append(_le("S(z) = z ≤ 1e-10", m["S(id)"], 1e-10))
    r.checks.append(_le("bergman-idempotence ≤ 1e-10", m["idempotence"], 1e-10))
    r.checks.append(_le("bergman-self-adjointness ≤ 1e-10", m["self-adjoint"], 1e-10))
    return r


# --------------------------------------------------------------------------


def ball_grid() -> list:
    """Radii 0, 0.2, ..., 0.8 times 8 fixed unit directions."""
    k = np.arange(8)
    dirs = np.stack([np.cos(0.4 * k) * np.exp(1j * k), np.sin(0.4 * k + 0.3) * np.exp(2.5j * k)], axis=1)
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return [tuple(r * d) for r in (0.0, 0.2, 0.4, 0.6, 0.8) for d in dirs]


def metric_checks() -> dict:
    out = {"g(0)": float(np.max(np.abs(bg.bergman_metric((0, 0)).entries - 3 * np.eye(2))))}
    det_err = inv_err = div = fd = 0.0
    for z in ball_grid():
        g = bg.bergman_metric(z).entries
        a = 1 - sum(abs(c) ** 2 for c in z)
        det_err = max(det_err, abs(np.linalg.det(g).real * a ** 3 / 9 - 1))
        inv_err = max(inv_err, float(np.max(np.abs(g @ bg.inverse_metric(z).entries - np.eye(2)))))
        div = max(div, bg.divergence_residual(z))
        fd = max(fd, bg.bergman_metric_fd(z)[1])
    out.update(det=det_err, inverse=inv_err, divergence=div, fd=fd)
    return out


def _random_configs(n: int, rmax: float, rng: np.random.Generator):
    out = []
    for _ in range(n):
        z = rng.normal(size=2) + 1j * rng.normal(size=2)
        z *= rng.uniform(0, rmax) / np.linalg.norm(z)
        t = rng.normal(size=2) + 1j * rng.normal(size=2)
        t /= np.linalg.norm(t)
        out.append((tuple(t), tuple(z)))
    return out


def annihilation_checks(n: int = 50, h: float = 1e-3):
    worst = 0.0
    ratios = []
    for zeta, z in _random_configs(n, 0.6, _rng()):
        r1 = bg.annihilation_check(zeta, z, h)
        r2 = bg.annihilation_check(zeta, z, h / 2)
        worst = max(worst, r1)
        ratios.append(r1 / r2)
    return worst, min(ratios), max(ratios)


def offdiagonal_sup(r: float, eps: float = 0.5, n: int = 300) -> float:
    """``sup P(z, zeta)`` over ``|z - zeta| >= eps`` on S^3 for ``z = (r, 0)``.

    Both ``P`` and ``|z - zeta|`` depend on ``zeta_1`` alone here, so the
    sphere is scanned through ``zeta_1`` over the closed unit disc.
    """
    rad = np.sqrt(np.linspace(0.0, 1.0, n))
    ang = np.linspace(0.0, 2 * np.pi, 2 * n, endpoint=False)
    z1 = (rad[:, None] * np.exp(1j * ang[None, :])).ravel()
    zeta = np.stack([z1, np.sqrt(np.maximum(0.0, 1.0 - np.abs(z1) ** 2)) + 0j], axis=-1)
    z = np.array([r, 0.0], dtype=complex)
    far = np.linalg.norm(zeta - z, axis=-1) >= eps
    return float(CATALOG["poisson-szego-ball2"].func(z, zeta[far]).real.max())


def poisson_ball_checks(n: int = 20, nodes: int = 64):
    rule = make_boundary_quadrature(BALL2, nodes)
    P = CATALOG["poisson-szego-ball2"].func
    norm_err = 0.0
    minimum = math.inf
    for _, z in _random_configs(n, 0.7, _rng()):
        vals = P(np.asarray(z), rule.nodes).real
        norm_err = max(norm_err, abs(float(np.sum(rule.weights * vals)) - 1))
        minimum = min(minimum, float(vals.min()))
    sups = [offdiagonal_sup(1 - 2.0 ** -k) for k in range(1, 11)]
    return norm_err, minimum, sups


def ball_suite() -> SuiteReport:
    m = metric_checks()
    r = SuiteReport("ball")
    r.checks.append(_le("metric-at-origin = 3I", m["g(0)"], 0.0))
    r.checks.append(_le("metric-det = 9/(1-|z|^2)^3 rel ≤ 1e-12", m["det"], 1e-12))
    r.checks.append(_le("metric-times-inverse = I ≤ 1e-12", m["inverse"], 1e-12))
    r.checks.append(_le("divergence-residual ≤ 1e-5", m["divergence"], 1e-5))
    r.checks.append(_le("fd-metric-vs-closed-form ≤ 1e-5", m["fd"], 1e-5))
    worst, lo, hi = annihilation_checks()
    r.checks.append(_le("LP-annihilation rel ≤ 1e-3", worst, 1e-3))
    r.checks.append(Check("LP-annihilation halving-ratio in [3.5, 4.5]", lo, 4.5,
                          3.5 <= lo and hi <= 4.5, f"ratios span [{lo:.3f}, {hi:.3f}]"))
    norm_err, minimum, sups = poisson_ball_checks()
    rise = float(np.max(np.diff(sups)))
    r.checks.append(_le("poisson-szego-ball integrates to 1 ≤ 1e-6", norm_err, 1e-6))
    r.checks.append(Check("poisson-szego-ball positive", minimum, 0.0, minimum > 0.0))
    r.checks.append(Check("poisson-szego-ball off-diagonal sup decreasing", rise, 0.0, rise < 0.0,
                          "sups along |z| = 1 - 2^-k: " + ", ".join(f"{v:.3g}" for v in sups)))
    levi = bg.levi_form(bg.ball2_defining_function(), (1, 0), (0, 2j))
    r.checks.append(_le("levi-form |w|^2 on the sphere", abs(levi - 4.0), 1e-14))
    return r


SUITES: dict = {
    "disc": disc_suite,
    "annulus": annulus_suite,
    "transport": transport_suite,
    "projections": projections_suite,
    "ball": ball_suite,
}


def run_suite(name: str) -> List[SuiteReport]:
    if name == "all":
        return [f() for f in SUITES.values()]
    try:
        return [SUITES[name]()]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}, all") from None
