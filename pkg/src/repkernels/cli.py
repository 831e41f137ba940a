"""
Command-line interface: ``repkernels {eval,grid,verify,project,blowup}``.

Complex numbers are ``re,im`` pairs; ball2 points are ``re1,im1,re2,im2``.
Write a leading minus as ``--z=-0.2,0.1`` so it is not read as a flag.
Numbers are printed as the shortest string that round-trips to the same
double, with ``-0`` printed as ``0`` and integral values without ``.0``.

Exit codes: 0 success, 2 domain error, 3 pole, 4 I/O error, 5 input format.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .catalog import CATALOG, DEFAULT_DELTAS, blowup_probe
from .core import DISC, DomainError, Point, PoleError, make_area_quadrature, make_boundary_quadrature
from .projections import bergman_project, szego_project
from .verify import SUITES, run_suite

EXIT_OK, EXIT_DOMAIN, EXIT_POLE, EXIT_IO, EXIT_FORMAT = 0, 2, 3, 4, 5


class InputFormatError(ValueError):
    pass


def fmt(x: float) -> str:
    x = float(x)
    if x == 0.0:
        return "0"
    s = repr(x)
    return s[:-2] if s.endswith(".0") else s


def fmt_complex(v: complex) -> str:
    return f"{fmt(v.real)} {fmt(v.imag)}"


def parse_point(text: str, dim: Optional[int] = None) -> Point:
    try:
        nums = [float(t) for t in text.split(",")]
    except ValueError:
        raise InputFormatError(f"cannot parse {text!r} as comma-separated numbers") from None
    if len(nums) not in (2, 4) or (dim is not None and len(nums) != 2 * dim):
        want = "re,im" if dim in (None, 1) else "re1,im1,re2,im2"
        raise InputFormatError(f"expected {want}, got {text!r}")
    if not all(math.isfinite(v) for v in nums):
        raise InputFormatError(f"non-finite coordinate in {text!r}")
    return Point.from_pairs(list(zip(nums[0::2], nums[1::2])))


def _kernel(kid: str):
    try:
        return CATALOG[kid]
    except KeyError:
        raise InputFormatError(f"unknown kernel {kid!r}; choose from {', '.join(CATALOG)}") from None


# --------------------------------------------------------------------------
# eval


def cmd_eval(args) -> int:
    k = _kernel(args.kernel)
    z = parse_point(args.z, k.domain.dim)
    w = parse_point(args.w, k.domain.dim)
    print(fmt_complex(k(z, w)))
    return EXIT_OK


# --------------------------------------------------------------------------
# grid


@dataclass(frozen=True)
class GridSpec:
    kernel_id: str
    w: Optional[Point]          # None: diagonal mode
    n: int
    box: tuple                  # (xmin, xmax, ymin, ymax)
    fmt: str

    def __post_init__(self):
        if self.n < 2:
            raise InputFormatError("grid resolution must be at least 2")
        x0, x1, y0, y1 = self.box
        if not (x0 < x1 and y0 < y1):
            raise InputFormatError("box must be xmin,xmax,ymin,ymax with min < max")
        if self.fmt not in ("csv", "pgm"):
            raise InputFormatError("format must be csv or pgm")


def _grid_point(dim: int, x: float, y: float) -> Point:
    # ball2 grids live on the slice z2 = 0
    return Point((complex(x, y),) if dim == 1 else (complex(x, y), 0j))


def evaluate_grid(spec: GridSpec):
    """Rows top to bottom (y decreasing), columns left to right; ``None`` marks skipped points."""
    k = _kernel(spec.kernel_id)
    if spec.w is None and k.w_region == "boundary":
        raise DomainError(f"{k.name} needs a boundary second argument; diagonal mode is undefined")
    if spec.w is not None and spec.w.dim != k.domain.dim:
        raise InputFormatError(f"{k.name} takes points of C^{k.domain.dim}")
    x0, x1, y0, y1 = spec.box
    xs = np.linspace(x0, x1, spec.n)
    ys = np.linspace(y1, y0, spec.n)
    rows = []
    for y in ys:
        row = []
        for x in xs:
            p = _grid_point(k.domain.dim, float(x), float(y))
            try:
                row.append((p, k(p, spec.w if spec.w is not None else p)))
            except (DomainError, PoleError):
                row.append((p, None))
        rows.append(row)
    return rows


def write_csv(rows, out) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["re_z", "im_z", "re_k", "im_k", "abs_k"])
    for row in rows:
        for p, v in row:
            if v is not None:
                w.writerow([fmt(p.z.real), fmt(p.z.imag), fmt(v.real), fmt(v.imag), fmt(abs(v))])


def pgm_levels(rows) -> List[List[int]]:
    """8-bit levels from log10|K| scaled between the grid's finite extremes; skipped points are 0."""
    logs = [[math.log10(abs(v)) if v is not None and abs(v) > 0 else None for _, v in row] for row in rows]
    finite = [x for r in logs for x in r if x is not None and math.isfinite(x)]
    lo, hi = (min(finite), max(finite)) if finite else (0.0, 0.0)
    span = hi - lo
    out = []
    for r in logs:
        line = []
        for x in r:
            if x is None or not math.isfinite(x) or span == 0:
                line.append(0)
            else:
                line.append(int(round(255 * min(1.0, max(0.0, (x - lo) / span)))))
        out.append(line)
    return out


def write_pgm(rows, out) -> None:
    levels = pgm_levels(rows)
    out.write(f"P2\n{len(levels[0])} {len(levels)}\n255\n")
    for line in levels:
        out.write(" ".join(str(v) for v in line) + "\n")


def cmd_grid(args) -> int:
    box = tuple(float(t) for t in args.box.split(",")) if args.box else None
    if box is None or len(box) != 4:
        raise InputFormatError("--box takes xmin,xmax,ymin,ymax")
    k = _kernel(args.kernel)
    w = None if args.diagonal else parse_point(args.w, k.domain.dim) if args.w else None
    if w is None and not args.diagonal:
        raise InputFormatError("give --w or --diagonal")
    spec = GridSpec(args.kernel, w, args.n, box, args.format)
    rows = evaluate_grid(spec)
    try:
        with open(args.out, "w", newline="") as fh:
            (write_csv if spec.fmt == "csv" else write_pgm)(rows, fh)
    except OSError as e:
        raise OSError(f"cannot write {args.out}: {e.strerror}") from None
    return EXIT_OK


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    reports = run_suite(args.suite)
    for r in reports:
        print("\n".join(r.lines()))
    ok = all(r.passed for r in reports)
    if len(reports) > 1:
        print(f"overall: {'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else 1


# --------------------------------------------------------------------------
# project


def _read_csv(path: str, header: Sequence[str]) -> np.ndarray:
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as e:
        raise OSError(f"cannot read {path}: {e.strerror}") from None
    if not rows or [h.strip() for h in rows[0]] != list(header):
        raise InputFormatError(f"{path}: expected header {','.join(header)}")
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError:
        raise InputFormatError(f"{path}: non-numeric entry") from None
    if data.ndim != 2 or data.shape[0] == 0 or data.shape[1] != len(header):
        raise InputFormatError(f"{path}: expected {len(header)} columns of data")
    if not np.all(np.isfinite(data)):
        raise InputFormatError(f"{path}: non-finite entry")
    return data


def trig_interpolant(t: np.ndarray, f: np.ndarray, tol: float = 1e-9):
    """Trigonometric interpolant of samples at uniform ``t_k = 2 pi k / n``."""
    n = t.size
    if n < 2 or np.max(np.abs(t - 2 * np.pi * np.arange(n) / n)) > tol:
        raise InputFormatError("t must be the uniform grid 2 pi k / n, k = 0 .. n-1")
    c = np.fft.fft(f) / n
    m = np.fft.fftfreq(n, 1.0 / n).astype(int)
    if n % 2 == 0:
        # split the Nyquist term evenly between +n/2 and -n/2
        c = np.append(c, 0.5 * c[n // 2])
        c[n // 2] *= 0.5
        m = np.append(m, n // 2)
        m[n // 2] = -n // 2

    def f_interp(zeta):
        zeta = np.asarray(zeta, dtype=complex)
        return np.sum(c * np.exp(1j * np.multiply.outer(np.angle(zeta), m)), axis=-1)

    return f_interp, int(np.max(np.abs(m)))


def cmd_project(args) -> int:
    z = parse_point(args.z, 1)
    if args.space == "hardy":
        data = _read_csv(args.input, ("t", "re_f", "im_f"))
        f, degree = trig_interpolant(data[:, 0], data[:, 1] + 1j * data[:, 2])
        rule = make_boundary_quadrature(DISC, max(512, 2 * degree + 2))
        res = szego_project(f, z, rule)
    else:
        data = _read_csv(args.input, ("re_z", "im_z", "re_f", "im_f"))
        rule = make_area_quadrature(DISC, args.radial, args.angular)
        nodes = data[:, 0] + 1j * data[:, 1]
        if nodes.shape != rule.nodes.shape or np.max(np.abs(nodes - rule.nodes)) > 1e-12:
            raise InputFormatError(f"rows must list the {args.radial}x{args.angular} disc rule nodes in order")
        values = data[:, 2] + 1j * data[:, 3]
        # the projection samples f exactly at the rule nodes, in order
        res = bergman_project(lambda x: values, z, rule)
    if res.warning:
        print(f"warning: {res.warning}", file=sys.stderr)
    print(fmt_complex(res.value))
    return EXIT_OK


# --------------------------------------------------------------------------
# blowup

_PATHS = {
    # path id -> domain tag -> (path, distance)
    "radial": {
        "disc": (lambda d: 1.0 - d, None),
        "annulus": (lambda d: 2.0 - d, None),
        "ball2": (lambda d: (1.0 - d, 0.0), None),
    },
    "vertical": {"halfplane": (lambda d: complex(0.0, d), None)},
    "corner": {"quarterplane": (lambda d: complex(d, d), lambda d: d * math.sqrt(2.0))},
}


def cmd_blowup(args) -> int:
    k = _kernel(args.kernel)
    try:
        path, dist = _PATHS[args.path][k.domain.tag]
    except KeyError:
        raise DomainError(f"path {args.path!r} does not approach the boundary of the {k.domain.tag}") from None
    if k.w_region == "boundary":
        raise DomainError(f"{k.name} has no interior diagonal to probe")
    try:
        deltas = [float(v) for v in args.deltas.split(",")] if args.deltas else DEFAULT_DELTAS
    except ValueError:
        raise InputFormatError("--deltas takes comma-separated numbers") from None
    rep = blowup_probe(k, path, deltas, dist)
    measure = "distance to the origin" if dist else "distance to the boundary"
    print(f"exponent {rep.fitted_exponent:.4f}")
    print(f"constant {rep.fitted_constant:.6g}")
    print(f"corrected-exponent {rep.corrected_exponent:.4f}")
    print(f"corrected-constant {rep.corrected_constant:.6g}")
    print(f"# rate in 1/d, d = {measure}; corrected fit adds a linear term in d")
    return EXIT_OK


# --------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_FORMAT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="repkernels", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    ids = ", ".join(CATALOG)

    e = sub.add_parser("eval", help="evaluate a kernel at one pair of points")
    e.add_argument("--kernel", required=True, help=f"one of: {ids}")
    e.add_argument("--z", required=True, help="re,im (re1,im1,re2,im2 on ball2)")
    e.add_argument("--w", required=True, help="second argument, same format")
    e.set_defaults(func=cmd_eval)

    g = sub.add_parser("grid", help="tabulate a kernel on an n x n grid (csv or plain pgm)")
    g.add_argument("--kernel", required=True, help=f"one of: {ids}")
    mode = g.add_mutually_exclusive_group()
    mode.add_argument("--w", help="fixed second argument")
    mode.add_argument("--diagonal", action="store_true", help="evaluate K(z, z)")
    g.add_argument("--n", type=int, default=64, help="points per side (default 64)")
    g.add_argument("--box", default="-0.95,0.95,-0.95,0.95", help="xmin,xmax,ymin,ymax")
    g.add_argument("--format", choices=("csv", "pgm"), default="csv")
    g.add_argument("--out", required=True, help="output file")
    g.set_defaults(func=cmd_grid)

    v = sub.add_parser("verify", help="run self-check suites")
    v.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    v.set_defaults(func=cmd_verify)

    pr = sub.add_parser("project", help="Szego (hardy) or Bergman projection of sampled data")
    pr.add_argument("--space", choices=("hardy", "bergman"), required=True)
    pr.add_argument("--input", required=True,
                    help="csv t,re_f,im_f at t = 2 pi k/n (hardy) or re_z,im_z,re_f,im_f on rule nodes (bergman)")
    pr.add_argument("--z", required=True, help="evaluation point re,im")
    pr.add_argument("--radial", type=int, default=32, help="bergman rule radial nodes (default 32)")
    pr.add_argument("--angular", type=int, default=128, help="bergman rule angular nodes (default 128)")
    pr.set_defaults(func=cmd_project)

    b = sub.add_parser("blowup", help="fit the diagonal growth rate along a path into the boundary")
    b.add_argument("--kernel", required=True, help=f"one of: {ids}")
    b.add_argument("--path", choices=tuple(_PATHS), required=True,
                   help="radial (disc, annulus, ball2), vertical (halfplane), corner (quarterplane)")
    b.add_argument("--deltas", help="comma-separated decreasing deltas (default 2^-3 .. 2^-10)")
    b.set_defaults(func=cmd_blowup)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputFormatError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT
    except DomainError as e:
        print(f"domain error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except PoleError as e:
        print(f"pole: {e}", file=sys.stderr)
        return EXIT_POLE
    except OSError as e:
        print(f"i/o error: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FORMAT


if __name__ == "__main__":
    sys.exit(main())
