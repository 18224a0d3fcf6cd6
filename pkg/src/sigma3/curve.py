"""The curve y^2 = f(x) with deg f = 7, its coordinate ring and derivations.

Functions on the curve are stored exactly as ``a(x) + b(x) y`` with Laurent
polynomial parts, so every ``y**2`` is already reduced through ``f``.  The
derivation ``D_j = d/du_j`` along the curve satisfies ``du_j = x^(j-1) dx/2y``,
hence ``D_j = (2y / x^(j-1)) d/dx`` and

    D_j(a + b y) = (2 f b' + f' b) / x^(j-1) + (2 a' / x^(j-1)) y.

Near the point at infinity we use the local parameter ``t`` with ``x = t^-2``
and ``y = -t^-7 sqrt(F(t^2))`` where ``F(s) = s^7 f(1/s)``; on this sheet
``u3 = t + O(t^3)``.
"""

from __future__ import annotations

import hashlib
import heapq
import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .errors import (InfinityNotSupported, PoleAtPoint, RepeatedRoots,
                     TooFarFromInfinity)
from .exact import GaussianRational, LaurentPoly, as_exact

__all__ = [
    "Curve", "CurvePoint", "Monomial", "CurveFunction", "make_curve",
    "monomial_basis", "pole_order", "derive_along_curve", "eval_curve_function",
    "point_near_infinity", "load_curve", "dump_curve", "parse_curve_function",
]

GENUS = 3
DEGREE = 7


def _poly_rem(a: list, b: list) -> list:
    a = list(a)
    while len(a) >= len(b) and any(a):
        q = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] = a[shift + i] - q * c
        a.pop()
        while a and not a[-1]:
            a.pop()
    return a


def _exact_gcd_degree(coeffs: Sequence[GaussianRational]) -> int:
    """Degree of gcd(f, f') over Q(i); positive iff f has a repeated root."""
    f = list(coeffs)
    while f and not f[-1]:
        f.pop()
    df = [c * k for k, c in enumerate(f)][1:]
    while df and not df[-1]:
        df.pop()
    a, b = f, df
    while b:
        a, b = b, _poly_rem(a, b)
    return len(a) - 1


@dataclass(frozen=True)
class Curve:
    """Monic septic ``f(x) = lambda_0 + ... + lambda_6 x^6 + x^7``.

    ``coeffs`` holds the exact values lambda_0..lambda_7 (lambda_7 == 1).
    """

    coeffs: tuple[GaussianRational, ...]

    def __post_init__(self):
        if len(self.coeffs) != DEGREE + 1:
            raise ValueError("a curve needs exactly 8 coefficients")
        if self.coeffs[DEGREE] != 1:
            raise ValueError("lambda_7 must be exactly 1")

    @cached_property
    def lam(self) -> np.ndarray:
        """Complex coefficients lambda_0..lambda_7."""
        return np.array([complex(c) for c in self.coeffs])

    @cached_property
    def f_exact(self) -> LaurentPoly:
        return LaurentPoly(dict(enumerate(self.coeffs)))

    @cached_property
    def df_exact(self) -> LaurentPoly:
        return self.f_exact.derivative()

    @cached_property
    def hash(self) -> str:
        text = ";".join(f"{c.re}|{c.im}" for c in self.coeffs)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def f(self, x):
        return np.polyval(self.lam[::-1], x)

    def df(self, x):
        return np.polyval(np.polyder(self.lam[::-1]), x)

    def F(self, s):
        """Reversed polynomial ``s^7 f(1/s)``, equal to 1 at s = 0."""
        return np.polyval(self.lam, s)

    @cached_property
    def numeric_roots(self) -> np.ndarray:
        return np.roots(self.lam[::-1]).astype(complex)

    def is_on_curve(self, P: "CurvePoint", tol: float | None = None) -> bool:
        if P.at_infinity:
            return True
        tol = DEFAULT_CONFIG.on_curve_tol if tol is None else tol
        fx = self.f(P.x)
        return abs(P.y ** 2 - fx) <= tol * (1 + abs(fx))

    def point(self, x: complex, sheet: int = 1) -> "CurvePoint":
        """The point above ``x`` with ``y = sheet * sqrt(f(x))`` (principal root)."""
        if sheet not in (1, -1):
            raise ValueError("sheet must be +1 or -1")
        x = complex(x)
        return CurvePoint(x, sheet * complex(np.sqrt(complex(self.f(x)))))

    # exact coordinate functions
    @cached_property
    def x(self) -> "CurveFunction":
        return CurveFunction(LaurentPoly({1: 1}), LaurentPoly(), self.f_exact)

    @cached_property
    def y(self) -> "CurveFunction":
        return CurveFunction(LaurentPoly(), LaurentPoly({0: 1}), self.f_exact)

    def const(self, c) -> "CurveFunction":
        return CurveFunction(LaurentPoly({0: c}), LaurentPoly(), self.f_exact)

    def function(self, a: LaurentPoly, b: LaurentPoly | None = None) -> "CurveFunction":
        return CurveFunction(a, b if b is not None else LaurentPoly(), self.f_exact)

    def monomial(self, m: "Monomial") -> "CurveFunction":
        if m.b == 0:
            return self.function(LaurentPoly({m.a: 1}))
        return self.function(LaurentPoly(), LaurentPoly({m.a: 1}))

    def to_json(self) -> dict:
        def enc(c: GaussianRational):
            return [_num(c.re), _num(c.im)]
        return {"lambda": [enc(c) for c in self.coeffs[:DEGREE]]}


def _num(q):
    return int(q) if q.denominator == 1 else str(q)


def make_curve(*lam, config: Config = DEFAULT_CONFIG) -> Curve:
    """Build the curve from lambda_0..lambda_6 (lambda_7 = 1 is implied).

    Accepts ints, floats, complex numbers, Fractions, GaussianRationals or
    strings such as ``"1/3"``.  Raises :class:`RepeatedRoots` if f has a
    multiple root, detected exactly (gcd(f, f')) and numerically (root
    separation below ``root_sep_tol`` relative to the largest root).
    """
    if len(lam) == 1 and not isinstance(lam[0], (str, bytes)) and isinstance(lam[0], Iterable):
        lam = tuple(lam[0])
    if len(lam) != DEGREE:
        raise ValueError(f"expected 7 coefficients lambda_0..lambda_6, got {len(lam)}")
    coeffs = tuple(as_exact(v) for v in lam) + (GaussianRational(1),)
    if _exact_gcd_degree(coeffs) > 0:
        raise RepeatedRoots("repeated roots: gcd(f, f') is non-constant")
    curve = Curve(coeffs)
    r = curve.numeric_roots
    scale = max(1.0, float(np.max(np.abs(r))))
    d = np.abs(r[:, None] - r[None, :])
    np.fill_diagonal(d, np.inf)
    if d.min() <= config.root_sep_tol * scale:
        raise RepeatedRoots(f"repeated roots: separation {d.min():.3g}")
    return curve


def load_curve(path: str | Path, config: Config = DEFAULT_CONFIG) -> Curve:
    """Read ``{"lambda": [[re, im] x 7]}``; entries may be numbers or rational strings."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return curve_from_json(data, config)


def curve_from_json(data: dict, config: Config = DEFAULT_CONFIG) -> Curve:
    try:
        lam = data["lambda"]
        if len(lam) != DEGREE:
            raise ValueError("'lambda' must list 7 coefficients")
        vals = []
        for entry in lam:
            if isinstance(entry, (list, tuple)):
                re_, im_ = entry
            else:
                re_, im_ = entry, 0
            vals.append(GaussianRational(re_, im_))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed curve file: {exc}") from exc
    return make_curve(*vals, config=config)


def dump_curve(curve: Curve, path: str | Path) -> None:
    Path(path).write_text(json.dumps(curve.to_json()) + "\n", encoding="utf-8")


@dataclass(frozen=True)
class CurvePoint:
    x: complex = 0j
    y: complex = 0j
    at_infinity: bool = False

    @classmethod
    def infinity(cls) -> "CurvePoint":
        return cls(0j, 0j, True)

    def conjugate_sheet(self) -> "CurvePoint":
        """Image under the hyperelliptic involution (x, y) -> (x, -y)."""
        return self if self.at_infinity else CurvePoint(self.x, -self.y)


@dataclass(frozen=True, order=True)
class Monomial:
    """``x^a y^b`` with b in {0, 1}."""

    a: int
    b: int = 0

    def __post_init__(self):
        if self.a < 0 or self.b not in (0, 1):
            raise ValueError("Monomial needs a >= 0 and b in {0, 1}")

    def __str__(self):
        xs = "" if self.a == 0 else ("x" if self.a == 1 else f"x^{self.a}")
        if self.b == 0:
            return xs or "1"
        return "y" + xs


def pole_order(m: Monomial) -> int:
    """Pole order at infinity: x has a double pole, y a pole of order 7."""
    return 2 * m.a + 7 * m.b


def monomial_basis(n: int) -> list[Monomial]:
    """The first ``n + 1`` monomials ordered by pole order at infinity.

    >>> [str(m) for m in monomial_basis(7)]
    ['1', 'x', 'x^2', 'x^3', 'y', 'x^4', 'yx', 'x^5']
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    # Two interleaved streams: x^a (order 2a) and y x^a (order 2a + 7).
    heap = [(0, Monomial(0, 0)), (7, Monomial(0, 1))]
    out = []
    while len(out) < n + 1:
        order, m = heapq.heappop(heap)
        out.append(m)
        nxt = Monomial(m.a + 1, m.b)
        heapq.heappush(heap, (pole_order(nxt), nxt))
    return out


@dataclass(frozen=True)
class CurveFunction:
    """Exact element ``a(x) + b(x) y`` of the coordinate ring modulo y^2 = f."""

    a: LaurentPoly
    b: LaurentPoly
    f: LaurentPoly = field(repr=False)

    def _check(self, other: "CurveFunction"):
        if self.f != other.f:
            raise ValueError("curve functions live on different curves")

    def __add__(self, other):
        if not isinstance(other, CurveFunction):
            return CurveFunction(self.a + LaurentPoly({0: other}), self.b, self.f)
        self._check(other)
        return CurveFunction(self.a + other.a, self.b + other.b, self.f)

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(-self.a, -self.b, self.f)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CurveFunction):
            return CurveFunction(self.a * other, self.b * other, self.f)
        self._check(other)
        a = self.a * other.a + self.b * other.b * self.f
        b = self.a * other.b + self.b * other.a
        return CurveFunction(a, b, self.f)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = CurveFunction(LaurentPoly({0: 1}), LaurentPoly(), self.f)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if not isinstance(other, CurveFunction):
            return NotImplemented
        return self.a == other.a and self.b == other.b and self.f == other.f

    def __hash__(self):
        return hash((self.a, self.b))

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    @property
    def has_negative_powers(self) -> bool:
        lo = [p.min_exp for p in (self.a, self.b) if not p.is_zero()]
        return bool(lo) and min(lo) < 0

    def __call__(self, x, y):
        return self.a(x) + self.b(x) * y

    def to_text(self) -> str:
        """Canonical text: terms ``c*x^a`` then ``c*x^a*y``, descending in a."""
        parts = []
        for poly, ytag in ((self.a, ""), (self.b, "*y")):
            for k in sorted(poly.terms, reverse=True):
                parts.append(f"{poly.coeff(k)}*x^{k}{ytag}")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_text()


_TERM = re.compile(r"^(?P<c>.+?)\*x\^(?P<a>-?\d+)(?P<y>\*y)?$")


def parse_curve_function(text: str, curve: Curve) -> CurveFunction:
    """Inverse of :meth:`CurveFunction.to_text`."""
    text = text.strip()
    if text == "0":
        return curve.function(LaurentPoly())
    a: dict[int, GaussianRational] = {}
    b: dict[int, GaussianRational] = {}
    for term in text.split(" + "):
        m = _TERM.match(term.strip())
        if not m:
            raise ValueError(f"cannot parse term {term!r}")
        target = b if m.group("y") else a
        k = int(m.group("a"))
        target[k] = target.get(k, GaussianRational(0)) + GaussianRational.parse(m.group("c"))
    return curve.function(LaurentPoly(a), LaurentPoly(b))


def derive_along_curve(g: CurveFunction, j: int, curve: Curve) -> CurveFunction:
    """Apply ``D_j = d/du_j`` to ``g``; negative powers of x appear for j > 1."""
    if j not in (1, 2, 3):
        raise ValueError("j must be 1, 2 or 3")
    f, df = curve.f_exact, curve.df_exact
    a = g.a.derivative() * 2
    b = f * g.b.derivative() * 2 + df * g.b
    s = -(j - 1)
    return CurveFunction(b.shift(s), a.shift(s), f)


def eval_curve_function(g: CurveFunction, P: CurvePoint) -> complex:
    if P.at_infinity:
        raise InfinityNotSupported("cannot evaluate at the point at infinity")
    if P.x == 0 and g.has_negative_powers:
        raise PoleAtPoint("function has a pole at x = 0")
    return complex(g(P.x, P.y))


def convergence_radius(curve: Curve) -> float:
    """Distance from t = 0 to the nearest zero of F(t^2)."""
    r = curve.numeric_roots
    return float(1 / np.sqrt(np.max(np.abs(r))))


def sqrtF_along_ray(curve: Curve, t: complex, steps: int = 64) -> complex:
    """sqrt(F(t^2)) continued from the value 1 at t = 0 along the segment [0, t]."""
    s = np.linspace(0, 1, steps + 1)[1:] * t
    vals = np.sqrt(curve.F(s * s).astype(complex))
    prev = 1.0 + 0j
    for v in vals:
        prev = v if abs(v - prev) <= abs(v + prev) else -v
    return complex(prev)


def point_near_infinity(curve: Curve, t: complex, sign: int = -1) -> CurvePoint:
    """Point with ``x = t^-2`` and ``y = sign * t^-7 * sqrt(F(t^2))``.

    ``sign = -1`` is the canonical sheet on which ``u3 = t + O(t^3)``.
    Keep ``|t|`` at most a tenth of :func:`convergence_radius` for the series
    picture to be accurate; beyond the radius itself this raises.
    """
    t = complex(t)
    if t == 0:
        return CurvePoint.infinity()
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if abs(t) >= convergence_radius(curve):
        raise TooFarFromInfinity(f"|t| = {abs(t):.3g} exceeds the local radius")
    root = sqrtF_along_ray(curve, t)
    return CurvePoint(t ** -2, sign * t ** -7 * root)
