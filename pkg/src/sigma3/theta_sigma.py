"""Theta series with characteristics, the normalised sigma function and
Baker's wp functions.

    sigma(u) = c exp(-u H u^T / 2) theta[delta](W u),    H = eta' W,  W = omega'^-1,

    theta[delta](z) = sum_n exp(pi i m^T Z m + 2 pi i m^T (z + delta')),  m = n + delta''.

Derivatives are taken term by term: d/du_j multiplies a lattice term by the
j-th entry of ``2 pi i W^T m``.  The lattice sum is centred on the dominant
term for the given argument and accumulated relative to it, so evaluations
far from the origin neither overflow early nor lose the leading terms.

With the alpha.beta = +1 orientation the periods obey the Legendre relation
``omega'^T eta'' - eta'^T omega'' = 2 pi i I``, which makes the
quasi-periodicity factor ``exp(-(u + l/2)^T (eta' a + eta'' b))`` for
``l = omega' a + omega'' b`` (up to the sign chi(l)).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .curve import Curve
from .errors import DegenerateNormalization, InconsistentChi, OnThetaDivisor
from .periods import PeriodData, compute_periods

log = logging.getLogger(__name__)

__all__ = [
    "ThetaCharacteristics", "MultiIndex", "SigmaContext", "truncation_radius",
    "theta_char", "sigma_normalize", "sigma", "sigma_jet", "wp",
    "quasi_period_factor", "L_form", "chi_closed_form", "taylor_coefficient",
    "build_context", "even_characteristics",
]


@dataclass(frozen=True)
class ThetaCharacteristics:
    """Half-integer characteristic: ``delta1`` shifts the argument,
    ``delta2`` shifts the summation index.  Entries are reduced mod 1."""

    delta1: tuple[float, float, float]
    delta2: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "delta1", tuple(float(v) % 1.0 for v in self.delta1))
        object.__setattr__(self, "delta2", tuple(float(v) % 1.0 for v in self.delta2))

    @property
    def d1(self) -> np.ndarray:
        return np.array(self.delta1)

    @property
    def d2(self) -> np.ndarray:
        return np.array(self.delta2)

    @property
    def is_even(self) -> bool:
        return int(round(4 * self.d1 @ self.d2)) % 2 == 0


# Reference characteristic delta' = [0, 1/2, 1], last entry reduced mod 1.
# It fits one particular homology basis, so it is tried first and kept only
# when it passes the normalisation gate.
REFERENCE_CHARACTERISTICS = ThetaCharacteristics((0.0, 0.5, 1.0), (0.5, 0.5, 0.5))


def even_characteristics() -> list[ThetaCharacteristics]:
    out = []
    for bits in itertools.product((0.0, 0.5), repeat=6):
        ch = ThetaCharacteristics(bits[:3], bits[3:])
        if ch.is_even:
            out.append(ch)
    return out


@dataclass(frozen=True)
class MultiIndex:
    """Derivative orders with respect to (u1, u2, u3); total order <= 3."""

    orders: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        o = tuple(int(v) for v in self.orders)
        if len(o) != 3 or min(o) < 0 or sum(o) > 3:
            raise ValueError(f"invalid derivative orders {self.orders}")
        object.__setattr__(self, "orders", o)

    @classmethod
    def of(cls, *indices: int) -> "MultiIndex":
        """From 1-based variable indices, e.g. ``MultiIndex.of(1, 3)``."""
        o = [0, 0, 0]
        for j in indices:
            o[j - 1] += 1
        return cls(tuple(o))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(j for j in range(3) for _ in range(self.orders[j]))

    @property
    def total(self) -> int:
        return sum(self.orders)


def _as_multi(d) -> MultiIndex:
    if d is None:
        return MultiIndex()
    if isinstance(d, MultiIndex):
        return d
    return MultiIndex(tuple(d))


def truncation_radius(Z: np.ndarray, target_tol: float) -> int:
    """Smallest R with sum_{|n|_inf > R} exp(-pi lmin |n|^2) < target_tol.

    The shell |n|_inf = k holds (2k+1)^3 - (2k-1)^3 points, each with
    |n|^2 >= k^2, which gives the bound summed here.
    """
    lmin = float(np.linalg.eigvalsh(np.asarray(Z).imag)[0])
    if lmin <= 0:
        raise ValueError("Im Z must be positive definite")

    def shell(k):
        return ((2 * k + 1) ** 3 - (2 * k - 1) ** 3) * np.exp(-np.pi * lmin * k * k)

    R = 0
    while True:
        tail, k = 0.0, R + 1
        while True:
            s = shell(k)
            tail += s
            if s < 1e-3 * tail * 1e-16 or s == 0.0:
                break
            k += 1
        if tail < target_tol:
            return R
        R += 1


def _offsets(R: int) -> np.ndarray:
    r = np.arange(-R, R + 1)
    return np.array(np.meshgrid(r, r, r, indexing="ij")).reshape(3, -1).T.astype(float)


def _lattice_terms(z, Z, ImZinv, chars, offsets):
    """Return (m, relative terms, log of the dominant modulus)."""
    d1, d2 = chars.d1, chars.d2
    center = np.round(-ImZinv @ np.asarray(z).imag - d2)
    m = offsets + center + d2
    ex = np.pi * 1j * np.einsum("ni,ij,nj->n", m, Z, m) + 2j * np.pi * (m @ (z + d1))
    shift = float(np.max(ex.real))
    return m, np.exp(ex - shift), shift


@dataclass(eq=False)
class SigmaContext:
    """Everything needed to evaluate sigma for one curve.

    Treat as immutable after :func:`sigma_normalize`; the only mutable member
    is the cache of empirically determined chi signs.
    """

    curve: Curve
    periods: PeriodData
    chars: ThetaCharacteristics
    c: complex = 1.0 + 0j
    trunc_radius: int = 6
    target_tol: float = 1e-16
    config: Config = DEFAULT_CONFIG
    _chi_cache: dict = field(default_factory=dict, repr=False)

    @cached_property
    def W(self) -> np.ndarray:
        return np.linalg.inv(self.periods.omega1)

    @cached_property
    def H(self) -> np.ndarray:
        H = self.periods.eta1 @ self.W
        return (H + H.T) / 2

    @cached_property
    def Z(self) -> np.ndarray:
        Z = self.periods.Z
        return (Z + Z.T) / 2

    @cached_property
    def ImZinv(self) -> np.ndarray:
        return np.linalg.inv(self.Z.imag)

    @cached_property
    def offsets(self) -> np.ndarray:
        return _offsets(self.trunc_radius)

    @cached_property
    def lattice_scale(self) -> float:
        """Length of the shortest lattice generator."""
        P = np.hstack([self.periods.omega1, self.periods.omega2])
        return float(np.min(np.linalg.norm(P, axis=0)))

    @cached_property
    def series(self) -> "OriginSeries":
        """Taylor expansion at 0, built on first use (a few seconds)."""
        return OriginSeries.build(self)

    def with_constant(self, c: complex) -> "SigmaContext":
        return SigmaContext(self.curve, self.periods, self.chars, c,
                            self.trunc_radius, self.target_tol, self.config)

    def with_config(self, config: Config) -> "SigmaContext":
        """Same sigma under different tolerances; cached data is shared."""
        out = SigmaContext(self.curve, self.periods, self.chars, self.c,
                           self.trunc_radius, self.target_tol, config)
        for name in ("W", "H", "Z", "ImZinv", "offsets", "lattice_scale", "series"):
            if name in self.__dict__:
                out.__dict__[name] = self.__dict__[name]
        out._chi_cache.update(self._chi_cache)
        return out


def theta_char(z, ctx: SigmaContext, d=None) -> complex:
    """Derivative of theta[delta] with respect to z components, term by term."""
    d = _as_multi(d)
    z = np.asarray(z, dtype=complex)
    m, T, shift = _lattice_terms(z, ctx.Z, ctx.ImZinv, ctx.chars, ctx.offsets)
    fac = np.prod((2j * np.pi * m) ** np.array(d.orders), axis=1)
    return complex(np.sum(T * fac) * np.exp(shift))


def sigma_jet(u, ctx: SigmaContext, order: int = 1, use_series: bool = True):
    """sigma and all its partial derivatives up to ``order`` (<= 3) at u.

    Returns a list ``[s0, s1, s2, s3][:order + 1]`` of arrays with shapes
    (), (3,), (3, 3), (3, 3, 3).  Arguments close to the origin go through
    :class:`OriginSeries`, where the lattice sum would cancel catastrophically.
    """
    u = np.asarray(u, dtype=complex)
    if use_series and _near_origin(u, ctx):
        return ctx.series.jet(u, order)
    return _lattice_jet(u, ctx, order)


def _lattice_jet(u, ctx: SigmaContext, order: int):
    z = ctx.W @ u
    m, T, shift = _lattice_terms(z, ctx.Z, ctx.ImZinv, ctx.chars, ctx.offsets)
    V = 2j * np.pi * (m @ ctx.W)
    t = [np.sum(T)]
    if order >= 1:
        TV = T[:, None] * V
        t.append(TV.sum(axis=0))
    if order >= 2:
        t.append(np.einsum("ni,nj->ij", TV, V))
    if order >= 3:
        t.append(np.einsum("ni,nj,nk->ijk", TV, V, V))
    Hu = ctx.H @ u
    g = -Hu
    G = -ctx.H
    scale = ctx.c * np.exp(-0.5 * (u @ Hu) + shift)
    out = [t[0]]
    if order >= 1:
        out.append(t[1] + g * t[0])
    if order >= 2:
        e2 = np.outer(g, g) + G
        out.append(t[2] + np.outer(g, t[1]) + np.outer(t[1], g) + e2 * t[0])
    if order >= 3:
        e3 = (np.einsum("i,j,k->ijk", g, g, g) + np.einsum("ij,k->ijk", G, g)
              + np.einsum("ik,j->ijk", G, g) + np.einsum("jk,i->ijk", G, g))
        s3 = (t[3]
              + np.einsum("i,jk->ijk", g, t[2]) + np.einsum("j,ik->ijk", g, t[2])
              + np.einsum("k,ij->ijk", g, t[2])
              + np.einsum("ij,k->ijk", e2, t[1]) + np.einsum("ik,j->ijk", e2, t[1])
              + np.einsum("jk,i->ijk", e2, t[1])
              + e3 * t[0])
        out.append(s3)
    return [scale * o for o in out]


def sigma(u, ctx: SigmaContext, d=None) -> complex:
    """sigma(u) or one of its partials, e.g. ``sigma(u, ctx, MultiIndex.of(2))``."""
    d = _as_multi(d)
    jet = sigma_jet(u, ctx, d.total)
    return complex(jet[d.total][d.indices] if d.total else jet[0])


SERIES_WEIGHTS = np.array([5.0, 3.0, 1.0])
SERIES_POINTS = 32
SERIES_THRESHOLD = 0.25


def default_taylor_radii(ctx: SigmaContext) -> np.ndarray:
    """Circle radii for coefficient extraction, scaled by the weights (5, 3, 1)
    of u1, u2, u3 against the size of the branch points."""
    s = 1 / np.sqrt(max(1.0, float(np.max(np.abs(ctx.curve.numeric_roots)))))
    return 0.5 * s ** SERIES_WEIGHTS


def _weighted_size(u, radii) -> float:
    return float(np.max((np.abs(u) / radii) ** (1 / SERIES_WEIGHTS)))


def _near_origin(u, ctx: SigmaContext) -> bool:
    return _weighted_size(u, default_taylor_radii(ctx)) <= SERIES_THRESHOLD


def _sigma_values_batch(U: np.ndarray, ctx: SigmaContext, chunk: int = 1024) -> np.ndarray:
    """sigma at many small arguments; the lattice sum is centred at 0."""
    m = _offsets(ctx.trunc_radius + 1) + np.round(-ctx.chars.d2) + ctx.chars.d2
    quad = np.pi * 1j * np.einsum("ni,ij,nj->n", m, ctx.Z, m)
    out = np.empty(len(U), dtype=complex)
    for i in range(0, len(U), chunk):
        u = U[i:i + chunk]
        z = u @ ctx.W.T
        ex = quad[None, :] + 2j * np.pi * ((z + ctx.chars.d1) @ m.T)
        shift = ex.real.max(axis=1, keepdims=True)
        th = np.exp(ex - shift).sum(axis=1)
        q = -0.5 * np.einsum("ni,ij,nj->n", u, ctx.H, u)
        out[i:i + chunk] = ctx.c * th * np.exp(q + shift[:, 0])
    return out


def weight_mask(curve: Curve, n: int) -> np.ndarray:
    """Monomials u^p allowed in the expansion of sigma.

    With weights 5, 3, 1 for u1, u2, u3 and 2(7 - i) for lambda_i, sigma is
    homogeneous of weight 6, so the coefficient of u^p is a polynomial in
    the lambda_i of weight 5 p1 + 3 p2 + p3 - 6.  Only weights generated by
    the non-zero lambda_i can occur.  Masking the other coefficients removes
    round-off from entries that are exactly zero.
    """
    gens = [2 * (7 - i) for i in range(7) if curve.lam[i] != 0]
    top = 5 * (n - 1) + 3 * (n - 1) + (n - 1)
    reach = np.zeros(top + 1, dtype=bool)
    reach[0] = True
    for w in range(1, top + 1):
        reach[w] = any(w >= g and reach[w - g] for g in gens)
    k = np.arange(n)
    wt = 5 * k[:, None, None] + 3 * k[None, :, None] + k[None, None, :] - 6
    return (wt >= 0) & reach[np.clip(wt, 0, top)]


class OriginSeries:
    """Truncated Taylor series of sigma at u = 0.

    Coefficients come from a discrete Cauchy integral (3-d FFT) over a
    polycircle with radii ``r_j = rho^(w_j)``, weights (5, 3, 1).  Inside
    ``max_j (|u_j|/r_j)^(1/w_j) <= 1/4`` the neglected terms are below
    ``4^-32`` of the sampled scale, and every kept term carries a relative
    error near machine precision, so small values such as sigma_3(2u) for
    u close to 0 keep their full relative accuracy.
    """

    def __init__(self, coeffs: np.ndarray, radii: np.ndarray):
        self.coeffs = coeffs
        self.radii = radii
        self.n = coeffs.shape[0]

    @classmethod
    def build(cls, ctx: SigmaContext, n: int = SERIES_POINTS) -> "OriginSeries":
        radii = default_taylor_radii(ctx)
        ph = np.exp(2j * np.pi * np.arange(n) / n)
        grid = np.stack(np.meshgrid(*(r * ph for r in radii), indexing="ij"), axis=-1)
        vals = _sigma_values_batch(grid.reshape(-1, 3), ctx).reshape(n, n, n)
        scaled = np.fft.fftn(vals) / n ** 3
        # fftn uses exp(-2 pi i k p / n), which is the Cauchy kernel u^-p.
        k = np.arange(n)
        inv = [r ** (-k.astype(float)) for r in radii]
        coeffs = scaled * np.einsum("a,b,c->abc", *inv)
        mask = weight_mask(ctx.curve, n)
        noise = float(np.max(np.abs(scaled[~mask]))) if (~mask).any() else 0.0
        if noise <= 1e-9 * float(np.max(np.abs(scaled))):
            coeffs = np.where(mask, coeffs, 0)
        else:
            log.warning("weight structure not confirmed (residual %.3g); keeping all terms", noise)
        return cls(coeffs, radii)

    def coefficient(self, powers) -> complex:
        return complex(self.coeffs[tuple(powers)])

    def _powers(self, x: complex, order: int) -> np.ndarray:
        """Rows a = 0..order: d^a/dx^a of x^k for k = 0..n-1."""
        k = np.arange(self.n)
        out = np.zeros((order + 1, self.n), dtype=complex)
        for a in range(order + 1):
            fall = np.ones(self.n)
            for i in range(a):
                fall = fall * (k - i)
            e = np.maximum(k - a, 0)
            out[a] = np.where(k >= a, fall * x ** e, 0)
        return out

    def jet(self, u, order: int):
        P = [self._powers(complex(u[j]), order) for j in range(3)]
        # all mixed partials with each order <= `order`, contracted axis by axis
        D = np.einsum("abc,ia,jb,kc->ijk", self.coeffs, P[0], P[1], P[2], optimize=True)
        out = [D[0, 0, 0]]
        for total in range(1, order + 1):
            arr = np.zeros((3,) * total, dtype=complex)
            for idx in itertools.product(range(3), repeat=total):
                o = [0, 0, 0]
                for j in idx:
                    o[j] += 1
                arr[idx] = D[tuple(o)]
            out.append(arr)
        return out


def _normalisation_gate(ctx: SigmaContext, tol: float = 1e-6) -> tuple[bool, complex, np.ndarray]:
    """Check that sigma~ (c = 1) vanishes to second order at 0 with Hessian
    proportional to u1 u3 - u2^2; return (ok, mixed partial, Hessian)."""
    zero = np.zeros(3, complex)
    m, T, shift = _lattice_terms(zero, ctx.Z, ctx.ImZinv, ctx.chars, ctx.offsets)
    s0, s1, s2 = _lattice_jet(zero, ctx.with_constant(1.0), 2)
    mag = float(np.sum(np.abs(T)) * np.exp(shift))
    mixed = s2[0, 2]
    if abs(mixed) < 1e-12 * mag:
        return False, mixed, s2
    h = s2 / mixed
    ok = (abs(s0) <= 1e-10 * mag
          and abs(h[1, 1] + 2) <= tol
          and max(abs(h[0, 0]), abs(h[0, 1]), abs(h[1, 2]), abs(h[2, 2])) <= tol)
    return ok, mixed, s2


def sigma_normalize(curve: Curve, periods: PeriodData, config: Config = DEFAULT_CONFIG,
                    chars: ThetaCharacteristics | None = None) -> SigmaContext:
    """Pick the characteristic and fix c so that sigma = u1 u3 - u2^2 + ...

    The reference characteristic is tried first.  It is tied to one
    particular homology basis; when it fails the gate, the unique even
    characteristic whose theta constant vanishes is located by search.
    """
    R = config.trunc_radius
    if R is None:
        R = truncation_radius(periods.Z, config.target_tol) + 1
    candidates = [chars] if chars is not None else [REFERENCE_CHARACTERISTICS]
    ctx = None
    for ch in candidates:
        trial = SigmaContext(curve, periods, ch, 1.0, R, config.target_tol, config)
        ok, mixed, _ = _normalisation_gate(trial)
        if ok:
            ctx = trial
            break
    if ctx is None and chars is None:
        scored = []
        for ch in even_characteristics():
            trial = SigmaContext(curve, periods, ch, 1.0, R, config.target_tol, config)
            m, T, shift = _lattice_terms(np.zeros(3, complex), trial.Z, trial.ImZinv, ch, trial.offsets)
            scored.append((abs(np.sum(T)) / np.sum(np.abs(T)), ch, trial))
        scored.sort(key=lambda s: s[0])
        _, ch, trial = scored[0]
        ok, mixed, _ = _normalisation_gate(trial)
        if ok:
            log.info("reference characteristic rejected for this basis; using %s", ch)
            ctx = trial
    if ctx is None:
        raise DegenerateNormalization("no characteristic gives the expected leading term")
    ok, mixed, s2 = _normalisation_gate(ctx)
    if abs(mixed) < 1e-12:
        raise DegenerateNormalization(f"mixed partial {abs(mixed):.3g} too small")
    out = ctx.with_constant(1 / mixed)
    check = _lattice_jet(np.zeros(3, complex), out, 2)[2][1, 1]
    if abs(check + 2) > 1e-6 * 2:
        raise DegenerateNormalization(f"sigma_22(0) = {check} instead of -2")
    return out


def build_context(curve: Curve, config: Config = DEFAULT_CONFIG) -> SigmaContext:
    """Periods (cached) plus normalisation in one call."""
    return sigma_normalize(curve, compute_periods(curve, config), config)


def local_scale(u, ctx: SigmaContext, radius: float | None = None) -> float:
    """max |sigma| over six probe points at distance ``radius`` from u.

    The default radius is |u|, capped at a tenth of the shortest lattice
    generator: sigma grows like a Gaussian, so probes far from u would
    measure that growth instead of the local size.
    """
    u = np.asarray(u, dtype=complex)
    if radius is None:
        radius = min(float(np.linalg.norm(u)), 0.1 * ctx.lattice_scale)
    r = radius or 0.1 * ctx.lattice_scale
    vals = []
    for j in range(3):
        for s in (r, -r):
            v = u.copy()
            v[j] += s
            vals.append(abs(sigma(v, ctx)))
    return max(vals)


def wp(u, ctx: SigmaContext, indices, check: bool = False) -> complex:
    """Baker's wp_{jk} (two indices) or wp_{jkl} (three), 1-based.

    wp_{jk} = -d^2 log sigma / du_j du_k and wp_{jkl} = d/du_j wp_{kl}.
    """
    idx = tuple(i - 1 for i in indices)
    if len(idx) not in (2, 3):
        raise ValueError("wp takes two or three indices")
    u = np.asarray(u, dtype=complex)
    s0, s1, s2, *rest = sigma_jet(u, ctx, len(idx))
    if check and abs(s0) < ctx.config.theta_div_tol * local_scale(u, ctx):
        raise OnThetaDivisor("sigma(u) vanishes to working precision")
    if len(idx) == 2:
        j, k = idx
        return complex((s1[j] * s1[k] - s2[j, k] * s0) / s0 ** 2)
    j, k, l = idx
    s3 = rest[0]
    L3 = (s3[j, k, l] / s0
          - (s2[j, k] * s1[l] + s2[j, l] * s1[k] + s2[k, l] * s1[j]) / s0 ** 2
          + 2 * s1[j] * s1[k] * s1[l] / s0 ** 3)
    return complex(-L3)


def L_form(u, ab, ctx: SigmaContext) -> complex:
    """The form L(u, l) = -u^T (eta' a + eta'' b) for l = omega' a + omega'' b."""
    a, b = (np.asarray(v, dtype=float) for v in ab)
    p = ctx.periods
    return complex(-np.asarray(u, dtype=complex) @ (p.eta1 @ a + p.eta2 @ b))


def chi_closed_form(ab, ctx: SigmaContext) -> int:
    """chi(l) = exp(2 pi i (delta''.a - delta'.b) + pi i a.b), a sign for
    half-integer characteristics."""
    a, b = (np.asarray(v, dtype=float) for v in ab)
    phase = 2 * (ctx.chars.d2 @ a - ctx.chars.d1 @ b) + a @ b
    return 1 if int(round(phase)) % 2 == 0 else -1


_CHI_PROBES = 4


def quasi_period_factor(u, ab, ctx: SigmaContext) -> tuple[int, complex]:
    """Return (chi(l), exp L(u + l/2, l)) so that sigma(u + l) = chi sigma(u) factor."""
    a, b = (np.asarray(v, dtype=int) for v in ab)
    l = ctx.periods.lattice_point(a, b)
    u = np.asarray(u, dtype=complex)
    factor = np.exp(L_form(u + l / 2, (a, b), ctx))
    if not a.any() and not b.any():
        return 1, complex(factor)
    key = (tuple(a % 2), tuple(b % 2))
    if key not in ctx._chi_cache:
        rng = np.random.default_rng(1234)
        ratios = []
        for _ in range(_CHI_PROBES):
            v = 0.3 * (rng.normal(size=3) + 1j * rng.normal(size=3)) @ ctx.periods.omega1.T
            fv = np.exp(L_form(v + l / 2, (a, b), ctx))
            ratios.append(sigma(v + l, ctx) / (sigma(v, ctx) * fv))
        ratios = np.array(ratios)
        chi = 1 if np.mean(ratios.real) > 0 else -1
        if np.max(np.abs(ratios - chi)) > 1e-5:
            raise InconsistentChi(f"ratios {ratios} are not a common sign")
        ctx._chi_cache[key] = chi
    return ctx._chi_cache[key], complex(factor)


def taylor_coefficient(ctx: SigmaContext, powers, radii=None, n_points: int = 32) -> complex:
    """Coefficient of u1^p1 u2^p2 u3^p3 in the Taylor series of sigma at 0,
    by the Cauchy integral on a polycircle (trapezoid rule, exponential
    convergence for an entire function)."""
    powers = np.asarray(powers, dtype=int)
    radii = default_taylor_radii(ctx) if radii is None else np.asarray(radii, dtype=float)
    active = [j for j in range(3) if powers[j] > 0]
    phases = np.exp(2j * np.pi * np.arange(n_points) / n_points)
    total = 0j
    for ks in itertools.product(range(n_points), repeat=len(active)):
        u = np.zeros(3, complex)
        w = 1 + 0j
        for j, k in zip(active, ks):
            s = radii[j] * phases[k]
            u[j] = s
            w *= s ** (-int(powers[j]))
        total += sigma(u, ctx) * w
    return complex(total / n_points ** len(active))
