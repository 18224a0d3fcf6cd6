"""Command-line entry point: ``sigma3 {periods,eval,verify,psi}``.

Exit codes: 0 success, 1 a verification section failed, 2 invalid input,
3 numerical failure (quadrature, conditioning, normalisation).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from .abel_jacobi import abel_jacobi, random_curve_point, x_of_u, y_of_u
from .config import DEFAULT_CONFIG, Config
from .curve import Curve, curve_from_json, load_curve
from .errors import (DegenerateGeometry, DegenerateNormalization, IllConditionedOmega,
                     QuadratureNonConvergence, RootFindFailure, Sigma3Error)
from .identities import psi_numeric, psi_symbolic, verify_all
from .periods import compute_periods, riemann_diagnostics
from .theta_sigma import MultiIndex, sigma, sigma_normalize, wp

log = logging.getLogger("sigma3")

STOCK_CURVES = {"x7p1": "x7p1.json", "real-roots": "real_roots.json"}

NUMERIC_FAILURES = (QuadratureNonConvergence, IllConditionedOmega, DegenerateGeometry,
                    DegenerateNormalization, RootFindFailure)


class InputError(Exception):
    pass


def resolve_curve(spec: str, config: Config) -> Curve:
    """A path to a curve file, or the name of a bundled curve."""
    if spec in STOCK_CURVES:
        text = resources.files("sigma3").joinpath("data", STOCK_CURVES[spec]).read_text("utf-8")
        return curve_from_json(json.loads(text), config)
    path = Path(spec)
    if not path.exists():
        raise InputError(f"curve file not found: {spec}")
    try:
        return load_curve(path, config)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {spec}: {exc}") from exc


def parse_vector(text: str) -> np.ndarray:
    """Three complex numbers, e.g. ``"0.1+0.2j,0.3,-0.1j"``."""
    try:
        vals = [complex(v.strip().replace(" ", "")) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse vector {text!r}") from exc
    if len(vals) != 3:
        raise InputError("a vector needs exactly three components")
    return np.array(vals)


def parse_point(text: str, curve: Curve):
    """``"x_re,x_im,sheet"`` with sheet +1 or -1."""
    try:
        re_, im_, sheet = (v.strip() for v in text.split(","))
        return curve.point(complex(float(re_), float(im_)), int(sheet))
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}: expected x_re,x_im,sheet") from exc


def _c(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _config(args) -> Config:
    changes = {}
    for name in ("quad_tol", "target_tol", "trunc_radius", "cache_dir", "seed", "trials"):
        v = getattr(args, name, None)
        if v is not None:
            changes[name] = v
    if getattr(args, "tol", None) is not None:
        changes["identity_tol"] = args.tol
    if getattr(args, "report", None) is not None:
        changes["report_path"] = str(args.report)
    try:
        return DEFAULT_CONFIG.replace(**changes)
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _context(args, config: Config):
    curve = resolve_curve(args.curve, config)
    pd = compute_periods(curve, config)
    return curve, pd, sigma_normalize(curve, pd, config)


def cmd_periods(args) -> int:
    config = _config(args)
    curve = resolve_curve(args.curve, config)
    pd = compute_periods(curve, config)
    diag = riemann_diagnostics(pd)
    out = Path(args.output)
    pd.save(out)
    print(f"symmetry residual {diag['symmetry_residual']:.3e}")
    print(f"min eigenvalue of Im Z {diag['min_eig_imZ']:.6f}")
    print(f"wrote {out}")
    return 0


def cmd_eval(args) -> int:
    config = _config(args)
    curve, pd, ctx = _context(args, config)
    out: dict = {"curve_hash": curve.hash}
    if args.sigma is not None:
        u = parse_vector(args.sigma)
        d = MultiIndex.of(*(int(c) for c in args.derivative)) if args.derivative else MultiIndex()
        out["sigma"] = _c(sigma(u, ctx, d))
    if args.wp is not None:
        u = parse_vector(args.wp)
        idx = tuple(int(c) for c in args.indices)
        out["wp"] = {"indices": args.indices, "value": _c(wp(u, ctx, idx, check=True))}
    if args.aj is not None:
        P = parse_point(args.aj, curve)
        u = abel_jacobi(P, curve, pd if args.reduce else None).u
        out["u"] = [_c(v) for v in u]
        out["x_of_u"] = _c(x_of_u(u, ctx))
        out["y_of_u"] = _c(y_of_u(u, ctx))
    if len(out) == 1:
        raise InputError("nothing to evaluate: pass --sigma, --wp or --aj")
    print(json.dumps(out, indent=2))
    return 0


def cmd_verify(args) -> int:
    config = _config(args)
    curve, pd, ctx = _context(args, config)
    report = verify_all(ctx, config)
    path = Path(args.report)
    report.save(path)
    for s in report.sections:
        flag = "pass" if s.passed else "FAIL"
        print(f"{flag}  {s.name:32s} max rel residual {s.max_rel_residual:.3e} (tol {s.tol:.0e})")
        if not s.passed and s.diagnostic:
            print(f"      {s.diagnostic}")
    print(f"report written to {path} in {report.runtime_sec:.1f} s")
    return 0 if report.passed else 1


def cmd_psi(args) -> int:
    config = _config(args)
    if args.symbolic:
        if args.n <= 3:
            print("error: the determinant formula requires n > 3", file=sys.stderr)
            return 2
        if args.j != 1:
            print("error: the symbolic route is polynomial only for j = 1", file=sys.stderr)
            return 2
        curve = resolve_curve(args.curve, config)
        print(psi_symbolic(args.n, curve).to_text())
        return 0
    if args.n < 2:
        print("error: n must be at least 2", file=sys.stderr)
        return 2
    curve, pd, ctx = _context(args, config)
    if args.n == 2:
        print("warning: psi_2 vanishes identically on the curve; values are round-off",
              file=sys.stderr)
    rows = []
    for k in range(args.points):
        P = random_curve_point(curve, (config.seed, 53, k))
        u = abel_jacobi(P, curve).u
        rows.append({"x": _c(P.x), "y": _c(P.y), "u": [_c(v) for v in u],
                     "psi": _c(psi_numeric(u, args.n, ctx))})
    print(json.dumps({"n": args.n, "values": rows}, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sigma3", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, needs_curve=True):
        sp.add_argument("--curve", required=needs_curve, default="x7p1",
                        help="curve JSON file or a bundled name (x7p1, real-roots)")
        sp.add_argument("--quad-tol", type=float, dest="quad_tol")
        sp.add_argument("--target-tol", type=float, dest="target_tol")
        sp.add_argument("--trunc-radius", type=int, dest="trunc_radius")
        sp.add_argument("--cache-dir", dest="cache_dir",
                        help="period cache directory (default: $SIGMA3_CACHE_DIR)")

    sp = sub.add_parser("periods", help="compute and store period matrices")
    common(sp)
    sp.add_argument("-o", "--output", default="periods.json")
    sp.set_defaults(func=cmd_periods)

    sp = sub.add_parser("eval", help="evaluate sigma, wp or the Abel-Jacobi map")
    common(sp)
    sp.add_argument("--sigma", metavar="U", help="u as three comma-separated complex numbers")
    sp.add_argument("--derivative", default="", help="derivative indices for --sigma, e.g. 13")
    sp.add_argument("--wp", metavar="U")
    sp.add_argument("--indices", default="33", help="wp indices, e.g. 33 or 333")
    sp.add_argument("--aj", metavar="POINT", help="point as x_re,x_im,sheet")
    sp.add_argument("--reduce", action="store_true", help="reduce u modulo the lattice")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("verify", help="run the identity checks and write report.json")
    common(sp)
    sp.add_argument("--trials", type=int)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--tol", type=float, help="identity tolerance (others scale with it)")
    sp.add_argument("--report", default="report.json")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("psi", help="division polynomial psi_n")
    common(sp, needs_curve=False)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--j", type=int, default=1, choices=(1, 2, 3))
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--symbolic", action="store_true")
    mode.add_argument("--numeric", action="store_true")
    sp.add_argument("--points", type=int, default=5)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_psi)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NUMERIC_FAILURES as exc:
        print(f"numerical failure ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3
    except Sigma3Error as exc:
        print(f"error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
