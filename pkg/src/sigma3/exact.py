"""Exact arithmetic: Gaussian rationals and Laurent polynomials over them.

Coefficients are pairs of :class:`fractions.Fraction`; floats are converted
exactly (every finite double is a dyadic rational).
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Complex, Rational

import numpy as np

__all__ = ["GaussianRational", "LaurentPoly", "as_exact"]


def _frac(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, Rational)):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(v)
    if isinstance(v, str):
        return Fraction(v.strip())
    raise TypeError(f"cannot convert {v!r} to Fraction")


class GaussianRational:
    """An element ``re + im*i`` of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = _frac(re)
        self.im = _frac(im)

    @classmethod
    def from_complex(cls, z: complex) -> "GaussianRational":
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, other):
        o = as_exact(other)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = as_exact(other)
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return as_exact(other) - self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __mul__(self, other):
        o = as_exact(other)
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = as_exact(other)
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by exact zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / d,
                                (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        return as_exact(other) / self

    def __eq__(self, other):
        try:
            o = as_exact(other)
        except TypeError:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({str(self.re)!r}, {str(self.im)!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"

    @property
    def is_real(self) -> bool:
        return self.im == 0

    @classmethod
    def parse(cls, text: str) -> "GaussianRational":
        """Inverse of ``str``: ``"3/2"``, ``"-1/3*i"``, ``"(1/2-3*i)"``."""
        s = text.strip()
        if s.startswith("(") and s.endswith(")"):
            s = s[1:-1]
        m = re.fullmatch(r"([+-]?[0-9/]+)([+-][0-9/]+)\*i", s)
        if m:
            return cls(Fraction(m.group(1)), Fraction(m.group(2)))
        if s.endswith("*i"):
            return cls(0, Fraction(s[:-2]))
        return cls(Fraction(s), 0)


def as_exact(v) -> GaussianRational:
    if isinstance(v, GaussianRational):
        return v
    if isinstance(v, (int, Fraction, float, str)) or isinstance(v, Rational):
        if isinstance(v, str) and "i" in v:
            return GaussianRational.parse(v)
        return GaussianRational(_frac(v), 0)
    if isinstance(v, Complex):
        return GaussianRational.from_complex(complex(v))
    if isinstance(v, np.generic):
        return as_exact(v.item())
    raise TypeError(f"cannot convert {v!r} to GaussianRational")


_ZERO = GaussianRational(0, 0)


class LaurentPoly:
    """Finite Laurent polynomial ``sum c_k x^k`` with exact coefficients.

    Immutable; the zero polynomial has no terms.
    """

    __slots__ = ("_c", "_cc")

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
            for k, v in items:
                v = as_exact(v)
                if v:
                    c[int(k)] = v
        self._c = c
        self._cc = None

    @classmethod
    def monomial(cls, k: int, coeff=1) -> "LaurentPoly":
        return cls({k: coeff})

    @property
    def terms(self) -> dict[int, GaussianRational]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    @property
    def max_exp(self) -> int | None:
        return max(self._c) if self._c else None

    @property
    def min_exp(self) -> int | None:
        return min(self._c) if self._c else None

    def coeff(self, k: int) -> GaussianRational:
        return self._c.get(k, _ZERO)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self._c)
        for k, v in other._c.items():
            out[k] = out.get(k, _ZERO) + v
        return LaurentPoly(out)

    def __neg__(self):
        return LaurentPoly({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            s = as_exact(other)
            return LaurentPoly({k: v * s for k, v in self._c.items()})
        out: dict[int, GaussianRational] = {}
        for i, a in self._c.items():
            for j, b in other._c.items():
                out[i + j] = out.get(i + j, _ZERO) + a * b
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by x**k."""
        return LaurentPoly({e + k: v for e, v in self._c.items()})

    def derivative(self) -> "LaurentPoly":
        return LaurentPoly({e - 1: v * e for e, v in self._c.items() if e != 0})

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def _complex_coeffs(self):
        if self._cc is None:
            ks = sorted(self._c)
            self._cc = (np.array(ks, dtype=int),
                        np.array([complex(self._c[k]) for k in ks], dtype=complex))
        return self._cc

    def __call__(self, x):
        """Evaluate at a complex scalar or array."""
        ks, cs = self._complex_coeffs()
        x = np.asarray(x, dtype=complex)
        if ks.size == 0:
            return np.zeros_like(x) if x.ndim else 0j
        lo = int(ks[0])
        hi = int(ks[-1])
        dense = np.zeros(hi - lo + 1, dtype=complex)
        dense[ks - lo] = cs
        val = np.polyval(dense[::-1], x)
        if lo:
            val = val * x ** lo
        return val if np.ndim(val) else complex(val)

    def __repr__(self):
        return f"LaurentPoly({ {k: str(v) for k, v in sorted(self._c.items())} })"
