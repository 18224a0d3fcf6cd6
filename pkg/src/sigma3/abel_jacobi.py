"""Abel-Jacobi map from the point at infinity, coordinates recovered from
sigma quotients, and Jacobi inversion.

The integration runs in the local parameter plane of infinity: with
``x = t^-2`` and ``y = -t^-7 sqrt(F(t^2))`` the three first-kind
differentials become

    du1 = t^4 dt / sqrt(F),   du2 = t^2 dt / sqrt(F),   du3 = dt / sqrt(F),

which are regular at t = 0, so the base point needs no special treatment.
Singularities sit at ``t = +-e^-1/2`` for the non-zero branch points e.
Paths are polygons from 0 to ``t_P = x_P^-1/2`` that step around any
singularity lying close to a straight leg.  Each leg is split until its
length is at most half its distance to the nearest singularity and
integrated with Gauss-Legendre; the square root is continued node to node.
If the continuation ends on the other sheet, the mirrored path to ``-t_P``
reaches P, and since the integrands are even in t that flips u.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .curve import Curve, CurvePoint
from .errors import AtOrigin, OnThetaDivisor, PathNearBranchPoint
from .periods import PeriodData, lattice_reduce
from .theta_sigma import SigmaContext, local_scale, sigma_jet, wp

__all__ = [
    "JacobianPoint", "abel_jacobi", "x_of_u", "y_of_u", "jacobi_inversion",
    "random_curve_point", "t_singularities", "match_multisets",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(16)
_MAX_DETOURS = 64


@dataclass(frozen=True)
class JacobianPoint:
    """A point of C^3 standing for its class in the Jacobian."""

    u: np.ndarray
    lattice: tuple | None = None

    def __post_init__(self):
        u = np.asarray(self.u, dtype=complex).reshape(3)
        if not np.all(np.isfinite(u)):
            raise ValueError("JacobianPoint needs finite entries")
        object.__setattr__(self, "u", u)

    def __add__(self, other):
        return JacobianPoint(self.u + _vec(other))

    def __sub__(self, other):
        return JacobianPoint(self.u - _vec(other))

    def __neg__(self):
        return JacobianPoint(-self.u)

    def __mul__(self, k):
        return JacobianPoint(self.u * k)

    __rmul__ = __mul__

    def reduced(self, pd: PeriodData) -> "JacobianPoint":
        u, a, b = lattice_reduce(self.u, pd)
        return JacobianPoint(u, (tuple(a), tuple(b)))


def _vec(v) -> np.ndarray:
    return v.u if isinstance(v, JacobianPoint) else np.asarray(v, dtype=complex)


def t_singularities(curve: Curve) -> np.ndarray:
    e = curve.numeric_roots
    e = e[np.abs(e) > 1e-300]
    r = 1 / np.sqrt(e)
    return np.concatenate([r, -r])


def _plan(a: complex, b: complex, sing: np.ndarray, radius: float, depth: int = 0) -> list[complex]:
    """Waypoints from a to b (a excluded, b included)."""
    if depth > _MAX_DETOURS:
        raise PathNearBranchPoint("path planning did not converge")
    d = b - a
    L = abs(d)
    if L == 0:
        return [b]
    s = (sing - a) / d
    par = s.real
    dist = np.abs(s.imag) * L
    rho = np.minimum(radius, 0.5 * np.minimum(np.abs(sing - a), np.abs(sing - b)))
    hit = (par > 0) & (par < 1) & (dist < 0.25 * rho)
    if not hit.any():
        return [b]
    k = int(np.argmin(np.where(hit, par, np.inf)))
    c, r = sing[k], rho[k]
    e = d / L
    side = -1.0 if s[k].imag > 0 else 1.0
    n = 1j * e * side
    w1 = c - r * e + r * n
    w2 = c + r * e + r * n
    return (_plan(a, w1, sing, radius, depth + 1)
            + _plan(w1, w2, sing, radius, depth + 1)
            + _plan(w2, b, sing, radius, depth + 1))


def _nodes(path: list[complex], sing: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and complex weights (dt) along the polygon."""
    ts, ws = [], []
    prev = 0j
    for q in path:
        pieces = [(prev, q)]
        while pieces:
            a, b = pieces.pop()
            mid = (a + b) / 2
            clear = float(np.min(np.abs(sing - mid))) - abs(b - a) / 2 if len(sing) else np.inf
            if abs(b - a) > 0.5 * max(clear, 0.0) and abs(b - a) > 1e-13 * (1 + abs(mid)):
                pieces.append((mid, b))
                pieces.append((a, mid))
                continue
            h = (b - a) / 2
            ts.append(mid + h * _GL_X)
            ws.append(h * _GL_W)
        prev = q
    return np.concatenate(ts), np.concatenate(ws)


def _integrate(curve: Curve, t_end: complex, sing: np.ndarray, radius: float):
    """Return (u, sqrt(F(t_end^2)) continued along the planned path)."""
    path = _plan(0j, t_end, sing, radius)
    t, w = _nodes(path, sing)
    F = curve.F(t * t)
    root = np.sqrt(F.astype(complex))
    prev = 1.0 + 0j
    for i in range(len(root)):
        if abs(root[i] - prev) > abs(root[i] + prev):
            root[i] = -root[i]
        prev = root[i]
    end = complex(np.sqrt(complex(curve.F(t_end * t_end))))
    if abs(end - prev) > abs(end + prev):
        end = -end
    g = w / root
    t2 = t * t
    u = np.array([np.sum(g * t2 * t2), np.sum(g * t2), np.sum(g)])
    return u, end


def abel_jacobi(P: CurvePoint, curve: Curve, pd: PeriodData | None = None,
                config: Config = DEFAULT_CONFIG) -> JacobianPoint:
    """u(P) = integral from infinity to P of (dx/2y, x dx/2y, x^2 dx/2y).

    The value is defined modulo the period lattice; pass ``pd`` to get the
    representative reduced to the fundamental parallelotope.
    """
    if P.at_infinity:
        return JacobianPoint(np.zeros(3, complex))
    if not curve.is_on_curve(P, max(config.on_curve_tol, 1e-8)):
        raise ValueError("point is not on the curve")
    if P.x == 0:
        # x = 0 sits at t = infinity; approach it from a nearby point instead
        raise PathNearBranchPoint("x = 0 cannot be reached in the local parameter plane")
    sing = t_singularities(curve)
    t_end = complex(P.x) ** -0.5
    scale = float(np.min(np.abs(sing))) if len(sing) else 1.0
    clearance = float(np.min(np.abs(sing - t_end))) if len(sing) else np.inf
    if clearance < 1e-8 * scale:
        raise PathNearBranchPoint(f"endpoint within {clearance:.3g} of a branch point")
    pair = np.abs(sing[:, None] - sing[None, :])
    np.fill_diagonal(pair, np.inf)
    radius = 0.5 * float(pair.min())
    u, root = _integrate(curve, t_end, sing, radius)
    y_here = -t_end ** -7 * root
    if abs(y_here - P.y) > abs(y_here + P.y):
        u = -u
    out = JacobianPoint(u)
    return out.reduced(pd) if pd is not None else out


def _coordinate_jets(u, ctx: SigmaContext):
    u = _vec(u)
    if pd_reduce_is_zero(u, ctx):
        raise AtOrigin("u is a lattice point")
    s0, s1 = sigma_jet(u, ctx, 1)
    if s1[1] == 0 or not np.isfinite(s1[1]):
        raise AtOrigin("sigma_2(u) vanishes")
    return s1


def pd_reduce_is_zero(u, ctx: SigmaContext) -> bool:
    red, _, _ = lattice_reduce(u, ctx.periods)
    scale = float(np.max(np.abs(ctx.periods.omega1)))
    return float(np.linalg.norm(red)) <= 1e-12 * scale


def x_of_u(u, ctx: SigmaContext) -> complex:
    """x = -sigma_1(u) / sigma_2(u) on the curve locus."""
    s1 = _coordinate_jets(u, ctx)
    return complex(-s1[0] / s1[1])


def y_of_u(u, ctx: SigmaContext) -> complex:
    """y = -sigma_3(2u) / (2 sigma_2(u)^4) on the curve locus."""
    u = _vec(u)
    s1 = _coordinate_jets(u, ctx)
    s3_2u = sigma_jet(2 * u, ctx, 1)[1][2]
    return complex(-s3_2u / (2 * s1[1] ** 4))


def jacobi_inversion(u, ctx: SigmaContext) -> np.ndarray:
    """x-coordinates of the three points whose divisor class is u.

    Roots of ``X^3 - wp33 X^2 - wp23 X - wp13``.
    """
    u = _vec(u)
    if abs(sigma_jet(u, ctx, 0)[0]) < ctx.config.theta_div_tol * local_scale(u, ctx):
        raise OnThetaDivisor("u lies on the theta divisor")
    p33 = wp(u, ctx, (3, 3))
    p23 = wp(u, ctx, (2, 3))
    p13 = wp(u, ctx, (1, 3))
    return np.roots([1, -p33, -p23, -p13]).astype(complex)


def match_multisets(a, b) -> float:
    """Largest relative distance under the best pairing (3 elements: brute force)."""
    from itertools import permutations
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    best = np.inf
    for perm in permutations(range(len(b))):
        bb = b[list(perm)]
        err = np.max(np.abs(a - bb) / np.maximum(np.maximum(np.abs(a), np.abs(bb)), 1.0))
        best = min(best, float(err))
    return best


def random_curve_point(curve: Curve, seed, margin: float | None = None,
                       rmin: float = 0.5, rmax: float | None = None) -> CurvePoint:
    """Deterministic pseudo-random point with ``rmin <= |x| <= rmax`` kept at
    least ``margin`` away from every branch point, on a random sheet."""
    rng = np.random.default_rng(seed)
    e = curve.numeric_roots
    big = float(np.max(np.abs(e)))
    rmax = 3 * max(big, 1.0) if rmax is None else rmax
    if margin is None:
        pair = np.abs(e[:, None] - e[None, :])
        np.fill_diagonal(pair, np.inf)
        margin = 0.25 * float(pair.min())
    for _ in range(10000):
        r = np.sqrt(rng.uniform(rmin ** 2, rmax ** 2))
        x = r * np.exp(2j * np.pi * rng.uniform())
        sheet = 1 if rng.uniform() < 0.5 else -1
        if np.min(np.abs(e - x)) >= margin:
            return curve.point(x, sheet)
    raise RuntimeError("could not sample a point away from the branch points")
