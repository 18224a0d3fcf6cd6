"""Both sides of the sigma-function determinant identities, the symbolic
division polynomials, and the aggregated verification report.

Frobenius-Stickelberger type:  for u_0..u_n on the curve locus

    sigma(u_0 + ... + u_n) prod_{i<j} sigma_3(u_i - u_j) / prod_i sigma_2(u_i)^(n+1)
        = det[ m_k(x(u_i), y(u_i)) ],

with m_0, m_1, ... the monomials 1, x, x^2, x^3, y, x^4, yx, ... by pole
order at infinity, holds up to the sign ``(-1)^(n(n+1)/2)`` (see
:func:`fs_sign`).  For n = 1 the sigma side reads
``sigma_3(u_0 + u_1) sigma_3(u_0 - u_1) / (sigma_2(u_0) sigma_2(u_1))^2``
and no sign appears.

Kiepert type:  for n >= 4 and D = d/du_j along the curve,

    (1! 2! ... (n-1)!) psi_n(u) = x^((j-1) n (n-1)/2) det[ D^r m_k ]_{r, k = 1..n-1},

where psi_n(u) = sigma(n u) / sigma_2(u)^(n^2).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import numpy as np

from .abel_jacobi import (JacobianPoint, abel_jacobi, jacobi_inversion,
                          match_multisets, pd_reduce_is_zero, random_curve_point,
                          x_of_u, y_of_u)
from .config import DEFAULT_CONFIG, Config
from .curve import (Curve, CurveFunction, CurvePoint, derive_along_curve,
                    monomial_basis, point_near_infinity)
from .exact import LaurentPoly
from .errors import AtOrigin, DegenerateConfiguration, PoleAtPoint, Sigma3Error
from .periods import legendre_residual, riemann_diagnostics
from .theta_sigma import (MultiIndex, SigmaContext, chi_closed_form, local_scale,
                          quasi_period_factor, sigma, sigma_jet, taylor_coefficient, wp)

__all__ = [
    "IdentityResidual", "Section", "VerificationReport", "rel_residual",
    "fs_sigma_side", "fs_determinant", "fs_sign", "verify_frobenius_stickelberger",
    "psi_numeric", "kiepert_determinant", "psi_symbolic", "local_increment",
    "curve_limit_ratios", "verify_curve_limits", "verify_all",
]

EPS = 1e-300


def rel_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), EPS)


@dataclass
class IdentityResidual:
    name: str
    inputs: object
    lhs: complex
    rhs: complex

    @property
    def rel_residual(self) -> float:
        return rel_residual(self.lhs, self.rhs)

    def to_json(self) -> dict:
        return {"name": self.name, "inputs": self.inputs,
                "lhs": [self.lhs.real, self.lhs.imag],
                "rhs": [self.rhs.real, self.rhs.imag],
                "rel_residual": self.rel_residual}


@dataclass
class Section:
    """One block of the report: residuals of a family of checks against a tolerance."""

    name: str
    tol: float
    residuals: list[float] = field(default_factory=list)
    samples: list[dict] = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    diagnostic: str = ""
    passed_override: bool | None = None

    def add(self, r: IdentityResidual | float, keep: bool = True):
        if isinstance(r, IdentityResidual):
            self.residuals.append(r.rel_residual)
            if keep:
                self.samples.append(r.to_json())
        else:
            self.residuals.append(float(r))

    @property
    def max_rel_residual(self) -> float:
        return float(max(self.residuals)) if self.residuals else 0.0

    @property
    def median_rel_residual(self) -> float:
        return float(np.median(self.residuals)) if self.residuals else 0.0

    @property
    def passed(self) -> bool:
        if self.passed_override is not None:
            return self.passed_override
        ok = bool(self.residuals) and all(np.isfinite(self.residuals))
        return ok and self.max_rel_residual <= self.tol

    def to_json(self) -> dict:
        out = {"name": self.name, "trials": len(self.residuals),
               "max_rel_residual": self.max_rel_residual,
               "median_rel_residual": self.median_rel_residual,
               "tol": self.tol, "pass": self.passed, "samples": self.samples[:5]}
        if self.extra:
            out["extra"] = self.extra
        if self.diagnostic:
            out["diagnostic"] = self.diagnostic
        return out


@dataclass
class VerificationReport:
    curve_hash: str
    config: dict
    sections: list[Section]
    runtime_sec: float = 0.0

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.sections)

    def section(self, name: str) -> Section:
        for s in self.sections:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_json(self) -> dict:
        return {"curve_hash": self.curve_hash, "config": self.config,
                "sections": [s.to_json() for s in self.sections],
                "pass": self.passed, "runtime_sec": self.runtime_sec}

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(_jsonable(self.to_json()), indent=2) + "\n",
                              encoding="utf-8")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# Frobenius-Stickelberger

def _check_configuration(us: list[np.ndarray], ctx: SigmaContext):
    for i, u in enumerate(us):
        if pd_reduce_is_zero(u, ctx):
            raise DegenerateConfiguration(f"u_{i} is a lattice point")
        for j in range(i):
            if pd_reduce_is_zero(u - us[j], ctx):
                raise DegenerateConfiguration(f"u_{j} and u_{i} coincide modulo the lattice")


def _as_vectors(us) -> list[np.ndarray]:
    return [u.u if isinstance(u, JacobianPoint) else np.asarray(u, dtype=complex) for u in us]


def fs_sigma_side(us, ctx: SigmaContext) -> complex:
    us = _as_vectors(us)
    n = len(us) - 1
    if n < 1:
        raise ValueError("need at least two points")
    _check_configuration(us, ctx)
    s2 = [sigma(u, ctx, MultiIndex.of(2)) for u in us]
    if n == 1:
        num = sigma(us[0] + us[1], ctx, MultiIndex.of(3)) * sigma(us[0] - us[1], ctx, MultiIndex.of(3))
        return complex(num / (s2[0] * s2[1]) ** 2)
    val = sigma(np.sum(us, axis=0), ctx)
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            val *= sigma(us[i] - us[j], ctx, MultiIndex.of(3))
    for s in s2:
        val /= s ** (n + 1)
    return complex(val)


def monomial_matrix(points, n: int) -> np.ndarray:
    """M[i, k] = m_k(x_i, y_i) over the first n + 1 monomials."""
    basis = monomial_basis(n)
    return np.array([[x ** m.a * (y if m.b else 1) for m in basis] for x, y in points],
                    dtype=complex)


def fs_sign(n: int) -> int:
    """Sign relating the sigma quotient to the monomial determinant.

    Near u_0 = 0 the quotient behaves like a product of leading terms in
    which sigma_2(u_0)^(n+1) = (-u_3^3)^(n+1) contributes (-1)^(n+1); running
    the induction on n with this factor kept gives (-1)^(n(n+1)/2) for
    n >= 2.  The two-point quotient uses sigma_3 instead of sigma and
    carries no sign.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    return 1 if n == 1 else (-1) ** (n * (n + 1) // 2)


def fs_determinant(us, ctx: SigmaContext) -> complex:
    us = _as_vectors(us)
    n = len(us) - 1
    _check_configuration(us, ctx)
    pts = [(x_of_u(u, ctx), y_of_u(u, ctx)) for u in us]
    return complex(np.linalg.det(monomial_matrix(pts, n)))


def _sample_points(curve: Curve, seed, count: int) -> list[CurvePoint]:
    return [random_curve_point(curve, (*seed, k)) for k in range(count)]


def verify_frobenius_stickelberger(n: int, trials: int, seed: int, ctx: SigmaContext,
                                   tol: float | None = None) -> Section:
    tol = ctx.config.identity_tol if tol is None else tol
    sec = Section(f"frobenius_stickelberger_n{n}", tol, extra={"sign": fs_sign(n)})
    curve = ctx.curve
    for trial in range(trials):
        for retry in range(10):
            pts = _sample_points(curve, (seed, 31, n, trial, retry), n + 1)
            us = [abel_jacobi(P, curve).u for P in pts]
            try:
                lhs = fs_sigma_side(us, ctx)
                rhs = fs_sign(n) * fs_determinant(us, ctx)
            except (DegenerateConfiguration, AtOrigin):
                continue
            break
        else:
            raise DegenerateConfiguration("10 resamples all degenerate")
        sec.add(IdentityResidual(sec.name, {"x": [complex(P.x) for P in pts]}, lhs, rhs), keep=trial < 3)
    return sec


# ---------------------------------------------------------------------------
# division polynomials

def psi_numeric(u, n: int, ctx: SigmaContext) -> complex:
    """psi_n(u) = sigma(n u) / sigma_2(u)^(n^2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    u = _as_vectors([u])[0]
    if pd_reduce_is_zero(u, ctx):
        raise AtOrigin("u is a lattice point")
    s2 = sigma(u, ctx, MultiIndex.of(2))
    return complex(sigma(n * u, ctx) / s2 ** (n * n))


def _superfactorial(n: int) -> int:
    return math.prod(math.factorial(k) for k in range(1, n))


@lru_cache(maxsize=None)
def derivative_table(curve: Curve, n: int, j: int) -> tuple[tuple[CurveFunction, ...], ...]:
    """Rows r = 1..n-1 of D_j^r applied to the non-constant monomials."""
    cols = [curve.monomial(m) for m in monomial_basis(n - 1)[1:]]
    rows = []
    cur = cols
    for _ in range(n - 1):
        cur = [derive_along_curve(g, j, curve) for g in cur]
        rows.append(tuple(cur))
    return tuple(rows)


def kiepert_determinant(u, n: int, j: int, ctx: SigmaContext) -> complex:
    """psi_n(u) from the derivative determinant, coordinates taken from sigma."""
    if n < 4:
        raise ValueError("the determinant formula requires n > 3")
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    u = _as_vectors([u])[0]
    x, y = x_of_u(u, ctx), y_of_u(u, ctx)
    if x == 0 and j > 1:
        raise PoleAtPoint("x(u) = 0 with j > 1")
    table = derivative_table(ctx.curve, n, j)
    M = np.array([[g(x, y) for g in row] for row in table], dtype=complex)
    pref = x ** ((j - 1) * n * (n - 1) // 2)
    return complex(pref * np.linalg.det(M) / _superfactorial(n))


def _ring_det(M: list[list[CurveFunction]], zero: CurveFunction) -> CurveFunction:
    """Determinant over the coordinate ring by expansion along rows,
    memoised on the set of columns already used."""
    size = len(M)
    memo: dict[int, CurveFunction] = {0: zero + 1}
    for r in range(size):
        nxt: dict[int, CurveFunction] = {}
        for used, val in memo.items():
            for c in range(size):
                if used >> c & 1:
                    continue
                sign = -1 if bin(used >> (c + 1)).count("1") % 2 else 1
                term = val * M[r][c]
                key = used | (1 << c)
                nxt[key] = nxt.get(key, zero) + (term if sign > 0 else -term)
        memo = nxt
    return memo[(1 << size) - 1]


def psi_symbolic(n: int, curve: Curve, j: int = 1) -> CurveFunction:
    """Exact psi_n as an element of the coordinate ring (j = 1 keeps it polynomial)."""
    if n < 4:
        raise ValueError("the determinant formula requires n > 3")
    table = derivative_table(curve, n, j)
    det = _ring_det([list(row) for row in table], curve.const(0))
    out = det * Fraction(1, _superfactorial(n))
    if j > 1:
        out = out * curve.function(LaurentPoly({(j - 1) * n * (n - 1) // 2: 1}))
    return out


# ---------------------------------------------------------------------------
# limits along the curve

def local_increment(P: CurvePoint, h: complex, curve: Curve) -> tuple[CurvePoint, np.ndarray]:
    """Point Q above x_P + h on the sheet continued from P, and u(Q) - u(P)."""
    from numpy.polynomial.legendre import leggauss
    gx, gw = leggauss(16)
    xs = P.x + h * (gx + 1) / 2
    ws = gw * h / 2
    ys = np.sqrt(curve.f(xs).astype(complex))
    dy = curve.df(P.x) / (2 * P.y)
    pred = P.y + dy * (xs - P.x)
    ys = np.where(np.abs(ys - pred) <= np.abs(ys + pred), ys, -ys)
    xq = P.x + h
    yq = complex(np.sqrt(complex(curve.f(xq))))
    pq = P.y + dy * h
    if abs(yq - pq) > abs(yq + pq):
        yq = -yq
    g = ws / (2 * ys)
    delta = np.array([np.sum(g), np.sum(g * xs), np.sum(g * xs * xs)])
    return CurvePoint(complex(xq), yq), delta


def curve_limit_ratios(P: CurvePoint, j: int, steps, ctx: SigmaContext) -> list[complex]:
    """sigma_3(u - v) / (u_j - v_j) for u moved from v = u(P) by each x-step."""
    out = []
    for h in steps:
        _, d = local_increment(P, h, ctx.curve)
        out.append(complex(sigma(d, ctx, MultiIndex.of(3)) / d[j - 1]))
    return out


def verify_curve_limits(j: int, trials: int, ctx: SigmaContext, seed: int = 0,
                     steps=(1e-2, 1e-3)) -> Section:
    """Residual at the finer step and the empirical order log10(r1/r2)/log10(h1/h2).

    Passes when every order lies in [0.8, 1.2] and every residual at the
    finer step is at most ``limit_tol``.  The Richardson-extrapolated
    residual is reported alongside.
    """
    sec = Section(f"curve_limit_j{j}", ctx.config.limit_tol)
    orders, extrap = [], []
    for trial in range(trials):
        P = random_curve_point(ctx.curve, (seed, 41, j, trial))
        target = 1 / P.x ** (j - 1)
        ratios = curve_limit_ratios(P, j, steps, ctx)
        res = [rel_residual(r, target) for r in ratios]
        order = math.log(res[0] / res[1]) / math.log(steps[0] / steps[1])
        k = steps[0] / steps[1]
        rich = (k * ratios[1] - ratios[0]) / (k - 1)
        orders.append(order)
        extrap.append(rel_residual(rich, target))
        sec.add(IdentityResidual(sec.name, {"x": complex(P.x), "step": steps[1], "order": order},
                                 ratios[1], target), keep=trial < 3)
    sec.extra = {"orders": orders, "order_min": min(orders), "order_max": max(orders),
                 "richardson_max_rel_residual": max(extrap)}
    order_ok = all(0.8 <= o <= 1.2 for o in orders)
    sec.passed_override = order_ok and sec.max_rel_residual <= sec.tol
    if not order_ok:
        sec.diagnostic = f"empirical order outside [0.8, 1.2]: {min(orders):.3f}..{max(orders):.3f}"
    elif sec.max_rel_residual > sec.tol:
        sec.diagnostic = "residual at the finer step exceeds the limit tolerance"
    return sec


# ---------------------------------------------------------------------------
# aggregated suite

LEADING_TAYLOR_TERMS = {
    (4, 0, 0): lambda L: -L[0] / 3,
    (3, 1, 0): lambda L: -L[1] / 3,
    (0, 4, 0): lambda L: -L[4] / 3,
    (0, 2, 2): lambda L: -L[6] / 2,
    (0, 0, 6): lambda L: L[7] / 45,
}


def taylor_section(ctx: SigmaContext) -> Section:
    """Leading Taylor coefficients by Cauchy integrals on the lattice sum.

    A target of 0 is compared in absolute terms (relative to 1).
    """
    sec = Section("taylor_coefficients", ctx.config.taylor_tol)
    for powers, fn in LEADING_TAYLOR_TERMS.items():
        target = complex(fn(ctx.curve.lam))
        got = taylor_coefficient(ctx, powers)
        r = abs(got - target) / max(abs(target), 1.0)
        sec.add(r)
        sec.samples.append({"powers": list(powers), "value": got, "target": target, "residual": r})
    return sec


def _random_u(rng, ctx: SigmaContext) -> np.ndarray:
    """Uniform point of the fundamental parallelotope."""
    a, b = rng.uniform(-0.5, 0.5, 3), rng.uniform(-0.5, 0.5, 3)
    return ctx.periods.omega1 @ a + ctx.periods.omega2 @ b


def _parity_section(ctx: SigmaContext, seed: int, count: int = 100) -> Section:
    sec = Section("parity", 1e-8)
    rng = np.random.default_rng([seed, 11])
    for _ in range(count):
        u = _random_u(rng, ctx)
        p = sigma_jet(u, ctx, 1)
        m = sigma_jet(-u, ctx, 1)
        sec.add(rel_residual(p[0], m[0]))
        sec.add(rel_residual(p[1][1], -m[1][1]))
        sec.add(rel_residual(p[1][2], -m[1][2]))
    return sec


def _generators():
    for k in range(3):
        a = np.zeros(3, int)
        a[k] = 1
        yield (a, np.zeros(3, int))
    for k in range(3):
        b = np.zeros(3, int)
        b[k] = 1
        yield (np.zeros(3, int), b)


def _quasi_period_section(ctx: SigmaContext, seed: int, count: int = 10) -> Section:
    sec = Section("quasi_periodicity", 1e-6)
    rng = np.random.default_rng([seed, 13])
    chis = {}
    for a, b in _generators():
        l = ctx.periods.lattice_point(a, b)
        chi, _ = quasi_period_factor(np.zeros(3), (a, b), ctx)
        chis[f"a={a.tolist()},b={b.tolist()}"] = chi
        if chi != chi_closed_form((a, b), ctx):
            sec.diagnostic = "empirical chi differs from the closed form"
            sec.add(np.inf)
        for _ in range(count):
            u = _random_u(rng, ctx)
            _, fac = quasi_period_factor(u, (a, b), ctx)
            sec.add(rel_residual(sigma(u + l, ctx), chi * sigma(u, ctx) * fac))
    sec.extra = {"chi": chis}
    return sec


def _wp_periodicity_section(ctx: SigmaContext, seed: int, count: int = 5) -> Section:
    sec = Section("wp_periodicity", 1e-6)
    rng = np.random.default_rng([seed, 17])
    for a, b in _generators():
        l = ctx.periods.lattice_point(a, b)
        for _ in range(count):
            u = _random_u(rng, ctx)
            for idx in ((1, 1), (2, 3), (3, 3), (1, 3)):
                sec.add(rel_residual(wp(u + l, ctx, idx), wp(u, ctx, idx)))
    return sec


def _infinity_section(ctx: SigmaContext, t: float = 1e-3) -> Section:
    """Leading behaviour of u, x and y at the point at infinity."""
    sec = Section("curve_locus_expansions", 1e-3)
    Q = point_near_infinity(ctx.curve, t)
    u = abel_jacobi(Q, ctx.curve).u
    vals = {"u1/(t^5/5)": u[0] / (t ** 5 / 5), "u2/(t^3/3)": u[1] / (t ** 3 / 3),
            "u3/t": u[2] / t, "x*t^2": x_of_u(u, ctx) * t ** 2,
            "-y*t^7": -y_of_u(u, ctx) * t ** 7}
    for k, v in vals.items():
        sec.add(abs(v - 1))
    sec.extra = {"t": t, "values": {k: complex(v) for k, v in vals.items()}}
    return sec


def _roundtrip_section(ctx: SigmaContext, seed: int, count: int = 20) -> Section:
    sec = Section("abel_jacobi_roundtrip", 1e-6)
    for k in range(count):
        P = random_curve_point(ctx.curve, (seed, 19, k))
        u = abel_jacobi(P, ctx.curve).u
        sec.add(IdentityResidual("x", {"x": P.x}, x_of_u(u, ctx), P.x), keep=k < 3)
        sec.add(IdentityResidual("y", {"x": P.x}, y_of_u(u, ctx), P.y), keep=k < 3)
        v = abel_jacobi(P.conjugate_sheet(), ctx.curve).u
        # the involution acts as u -> -u modulo the lattice
        sec.add(0.0 if pd_reduce_is_zero(u + v, ctx) else 1.0)
    return sec


def _inversion_section(ctx: SigmaContext, seed: int, count: int = 20) -> Section:
    sec = Section("jacobi_inversion", 1e-6)
    for k in range(count):
        pts = _sample_points(ctx.curve, (seed, 23, k), 3)
        u = sum(abel_jacobi(P, ctx.curve).u for P in pts)
        xs = jacobi_inversion(u, ctx)
        err = match_multisets(xs, [P.x for P in pts])
        sec.add(err)
        if k < 3:
            sec.samples.append({"x": [complex(P.x) for P in pts], "recovered": list(xs), "err": err})
    return sec


def _doubling_section(ctx: SigmaContext, seed: int, count: int = 50) -> Section:
    """sigma_3(2u) / sigma_2(u)^4 = -2 y(u), with y taken from the point itself."""
    sec = Section("sigma3_doubling", ctx.config.identity_tol)
    for k in range(count):
        P = random_curve_point(ctx.curve, (seed, 29, k))
        u = abel_jacobi(P, ctx.curve).u
        lhs = sigma(2 * u, ctx, MultiIndex.of(3)) / sigma(u, ctx, MultiIndex.of(2)) ** 4
        sec.add(IdentityResidual(sec.name, {"x": P.x}, lhs, -2 * P.y), keep=k < 3)
    return sec


def _theta_divisor_section(ctx: SigmaContext, seed: int, count: int = 10) -> Section:
    """sigma vanishes on two-point sums, sigma_3 on single points; generic
    three-point sums stay away from zero."""
    sec = Section("theta_divisor_vanishing", 1e-6)
    small3 = []
    for k in range(count):
        P1, P2, P3 = _sample_points(ctx.curve, (seed, 37, k), 3)
        u1, u2, u3 = (abel_jacobi(P, ctx.curve).u for P in (P1, P2, P3))
        sec.add(abs(sigma(u1 + u2, ctx)) / local_scale(u1 + u2, ctx))
        s = sigma_jet(u1, ctx, 1)
        sec.add(abs(s[1][2]) / max(np.max(np.abs(s[1])), EPS))
        small3.append(abs(sigma(u1 + u2 + u3, ctx)) / local_scale(u1 + u2 + u3, ctx))
    sec.extra = {"min_three_point_ratio": min(small3)}
    if min(small3) < 1e-4:
        sec.passed_override = False
        sec.diagnostic = "a generic three-point sum looks like a zero of sigma"
    return sec


def _fs_swap_section(ctx: SigmaContext, seed: int, count: int = 5) -> Section:
    sec = Section("frobenius_stickelberger_swap", ctx.config.identity_tol)
    for k in range(count):
        pts = _sample_points(ctx.curve, (seed, 43, k), 4)
        us = [abel_jacobi(P, ctx.curve).u for P in pts]
        sw = [us[1], us[0]] + us[2:]
        a, b = fs_sigma_side(us, ctx), fs_sigma_side(sw, ctx)
        c, d = fs_determinant(us, ctx), fs_determinant(sw, ctx)
        sec.add(rel_residual(a, -b))
        sec.add(rel_residual(c, -d))
        sec.add(rel_residual(b, fs_sign(3) * d))
    return sec


def _psi_sections(ctx: SigmaContext, seed: int, count: int) -> list[Section]:
    cfg = ctx.config
    per = Section("psi_periodicity", cfg.identity_tol)
    zero = Section("psi2_vanishing", cfg.identity_tol)
    kiep = {(n, j): Section(f"kiepert_n{n}_j{j}", cfg.kiepert_tol) for n in (4, 5, 6) for j in (1, 3)}
    jind = Section("kiepert_j_independence", cfg.kiepert_tol)
    sym = {n: Section(f"psi_symbolic_n{n}", cfg.kiepert_tol) for n in (4, 5)}
    polys = {n: psi_symbolic(n, ctx.curve) for n in sym}
    for k in range(count):
        P = random_curve_point(ctx.curve, (seed, 47, k))
        u = abel_jacobi(P, ctx.curve).u
        if k < 5:
            for n in (3, 4, 5):
                for a, b in _generators():
                    l = ctx.periods.lattice_point(a, b)
                    per.add(rel_residual(psi_numeric(u + l, n, ctx), psi_numeric(u, n, ctx)))
            zero.add(abs(sigma(2 * u, ctx)) / (local_scale(2 * u, ctx)))
        for n in (4, 5, 6):
            num = psi_numeric(u, n, ctx)
            vals = {}
            for j in (1, 3):
                vals[j] = kiepert_determinant(u, n, j, ctx)
                kiep[n, j].add(IdentityResidual(kiep[n, j].name, {"x": P.x}, vals[j], num), keep=k < 2)
            jind.add(rel_residual(vals[1], vals[3]))
        for n, g in polys.items():
            sym[n].add(IdentityResidual(sym[n].name, {"x": P.x}, complex(g(P.x, P.y)),
                                        psi_numeric(u, n, ctx)), keep=k < 2)
    return [per, zero, *kiep.values(), jind, *sym.values()]


def verify_all(ctx: SigmaContext, config: Config | None = None) -> VerificationReport:
    """Run every check on one curve; failures are reported, never raised."""
    if config is None:
        config = ctx.config
    elif config != ctx.config:
        ctx = ctx.with_config(config)
    t0 = time.perf_counter()
    seed, trials = config.seed, config.trials
    sections: list[Section] = []

    def run(name, fn, *args):
        try:
            res = fn(*args)
        except Sigma3Error as exc:
            s = Section(name, 0.0, passed_override=False, diagnostic=f"{type(exc).__name__}: {exc}")
            sections.append(s)
            return
        sections.extend(res if isinstance(res, list) else [res])

    diag = riemann_diagnostics(ctx.periods)
    rr = Section("riemann_relations", config.sym_tol)
    rr.add(diag["symmetry_residual"])
    rr.extra = diag
    if diag["min_eig_imZ"] <= 0:
        rr.passed_override = False
    sections.append(rr)
    leg = Section("legendre_relation", 1e-8)
    leg.add(legendre_residual(ctx.periods))
    sections.append(leg)

    run("taylor_coefficients", taylor_section, ctx)
    run("parity", _parity_section, ctx, seed)
    run("quasi_periodicity", _quasi_period_section, ctx, seed)
    run("wp_periodicity", _wp_periodicity_section, ctx, seed)
    run("curve_locus_expansions", _infinity_section, ctx)
    run("abel_jacobi_roundtrip", _roundtrip_section, ctx, seed)
    run("jacobi_inversion", _inversion_section, ctx, seed)
    run("sigma3_doubling", _doubling_section, ctx, seed)
    run("theta_divisor_vanishing", _theta_divisor_section, ctx, seed)
    for n in range(1, 7):
        run(f"frobenius_stickelberger_n{n}", verify_frobenius_stickelberger, n, trials, seed, ctx)
    run("frobenius_stickelberger_swap", _fs_swap_section, ctx, seed)
    run("psi", _psi_sections, ctx, seed, max(trials, 20))
    for j in (1, 2, 3):
        run(f"curve_limit_j{j}", verify_curve_limits, j, trials, ctx, seed)

    quad = ctx.periods.quad_tol
    for s in sections:
        if not s.passed and not s.diagnostic:
            s.diagnostic = (f"max residual {s.max_rel_residual:.3g} above tolerance {s.tol:.3g}; "
                            f"periods were computed with quad_tol={quad:.0e}, which bounds "
                            f"the attainable accuracy")
    return VerificationReport(ctx.curve.hash, config.as_dict(), sections,
                              time.perf_counter() - t0)
