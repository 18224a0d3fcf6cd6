"""Branch points, a symplectic homology basis and the period matrices.

The seven branch points are sorted lexicographically and joined into an
x-monotone (hence simple) chain ``e_1 - e_2 - ... - e_7``.  Each chain segment
lifts to a closed cycle ``gamma_k``: out along the segment on one sheet, back
on the other.  Adjacent lifts meet once, at their shared branch point, and
the sign of that crossing is read off from the local uniformiser
``w ~ y / sqrt(f'(e))``.  An integer symplectic reduction of the resulting
6x6 intersection matrix yields alpha/beta cycles with alpha.beta = identity.

Segment integrals ``int x^k dx / 2y`` carry inverse square-root endpoint
singularities.  The substitution ``x = mid + half * cos(theta)`` removes them
and leaves a Gauss-Chebyshev sum whose node count is doubled until stable.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .config import DEFAULT_CONFIG, Config
from .curve import Curve
from .errors import (DegenerateGeometry, IllConditionedOmega,
                     QuadratureNonConvergence, RootFindFailure)

log = logging.getLogger(__name__)

__all__ = [
    "BranchData", "CycleSpec", "PeriodData", "branch_points", "build_cycles",
    "period_matrices", "riemann_matrix", "lattice_reduce", "compute_periods",
    "differential_numerators", "symplectic_basis", "legendre_residual",
]


@dataclass(frozen=True)
class BranchData:
    roots: np.ndarray

    def __post_init__(self):
        if len(self.roots) != 7:
            raise ValueError("expected 7 branch points")


def _sort_key(scale):
    def key(z):
        return (round(z.real / scale, 9), z.imag)
    return key


def branch_points(curve: Curve) -> BranchData:
    """Roots of f, polished by Newton steps and sorted by (Re, Im)."""
    roots = np.array(curve.numeric_roots, dtype=complex)
    for _ in range(8):
        step = curve.f(roots) / curve.df(roots)
        roots = roots - step
        if np.all(np.abs(step) <= 1e-16 * np.maximum(1, np.abs(roots))):
            break
    resid = np.abs(curve.f(roots))
    bound = 1e-12 * np.maximum(1, np.abs(roots)) ** 7 * max(1, float(np.max(np.abs(curve.lam))))
    if np.any(resid > bound):
        raise RootFindFailure(f"root residual {resid.max():.3g} too large")
    scale = max(1.0, float(np.max(np.abs(roots))))
    return BranchData(np.array(sorted(roots, key=_sort_key(scale))))


def _segments_cross(p1, p2, q1, q2) -> bool:
    def orient(a, b, c):
        return np.sign(((b - a).conjugate() * (c - a)).imag)
    return (orient(p1, p2, q1) * orient(p1, p2, q2) < 0
            and orient(q1, q2, p1) * orient(q1, q2, p2) < 0)


class _Segment:
    """Straight segment between two chain roots with a continuous branch of y.

    On the segment ``y = i * half * sqrt(1 - tau^2) * H(x)``, with
    ``x = mid + half * tau`` and H a product of square roots of the other
    factors, each continuous along the segment.
    """

    def __init__(self, roots: np.ndarray, k: int):
        self.a, self.b = roots[k], roots[k + 1]
        self.mid = (self.a + self.b) / 2
        self.half = (self.b - self.a) / 2
        self.others = np.array([r for i, r in enumerate(roots) if i not in (k, k + 1)])
        self.rot = self.mid - self.others

    def H(self, x):
        x = np.asarray(x, dtype=complex)[..., None]
        return np.prod(np.sqrt(self.rot) * np.sqrt((x - self.others) / self.rot), axis=-1)

    def end_direction(self, at_b: bool) -> complex:
        """Phase-carrying factor of y as the segment approaches an endpoint."""
        end = self.b if at_b else self.a
        return 1j * (self.b - self.a) * complex(self.H(end))


@dataclass(frozen=True)
class CycleSpec:
    """Homology basis built from lifts of the root chain.

    ``chain`` is the ordered root list; ``intersection`` is the 6x6 matrix of
    the segment lifts; ``alpha`` / ``beta`` are 6x3 integer matrices whose
    columns express each basis cycle in terms of the segment lifts.
    """

    chain: np.ndarray
    intersection: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    def segments(self) -> list[_Segment]:
        return [_Segment(self.chain, k) for k in range(6)]

    def check_symplectic(self) -> bool:
        M = np.hstack([self.alpha, self.beta])
        J = np.block([[np.zeros((3, 3), int), np.eye(3, dtype=int)],
                      [-np.eye(3, dtype=int), np.zeros((3, 3), int)]])
        return bool(np.array_equal(M.T @ self.intersection @ M, J))


def symplectic_basis(K: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Integer symplectic Gram-Schmidt for a unimodular antisymmetric form."""
    n = K.shape[0]
    pool = [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    A, B = [], []

    def form(v, w):
        return int(v @ K @ w)

    while pool:
        v = pool.pop(0)
        if not v.any():
            continue
        for i, w in enumerate(pool):
            s = form(v, w)
            if abs(s) == 1:
                w = w * s
                pool.pop(i)
                break
        else:
            raise DegenerateGeometry("intersection form is not unimodular")
        A.append(v)
        B.append(w)
        pool = [x + form(x, v) * w - form(x, w) * v for x in pool]
    return np.array(A).T, np.array(B).T


def build_cycles(branch: BranchData) -> CycleSpec:
    r = np.asarray(branch.roots)
    scale = max(1.0, float(np.max(np.abs(r))))
    chain = np.array(sorted(r, key=_sort_key(scale)))
    for i in range(6):
        for j in range(i + 2, 6):
            if _segments_cross(chain[i], chain[i + 1], chain[j], chain[j + 1]):
                raise DegenerateGeometry("root chain is self-intersecting")
    segs = [_Segment(chain, k) for k in range(6)]
    K = np.zeros((6, 6), dtype=np.int64)
    for k in range(5):
        # gamma_k arrives at the shared root along w-ray d_in and leaves along
        # -d_in; gamma_{k+1} leaves along d_out.  Crossing sign = sign of the
        # oriented angle between the two tangent lines.
        d_in = segs[k].end_direction(at_b=True)
        d_out = segs[k + 1].end_direction(at_b=False)
        s = (d_out * np.conj(d_in)).imag
        if abs(s) < 1e-14 * abs(d_in) * abs(d_out):
            raise DegenerateGeometry("adjacent chain segments are tangent")
        K[k, k + 1] = -int(np.sign(s))
        K[k + 1, k] = -K[k, k + 1]
    A, B = symplectic_basis(K)
    return CycleSpec(chain, K, A, B)


def differential_numerators(lam: np.ndarray, x):
    """Numerators of omega_1..3 and eta_1..3 (all over dx / 2y) at x."""
    x = np.asarray(x, dtype=complex)
    one = np.ones_like(x)
    return np.stack([
        one, x, x * x,
        lam[3] * x + 2 * lam[4] * x ** 2 + 3 * lam[5] * x ** 3
        + 4 * lam[6] * x ** 4 + 5 * lam[7] * x ** 5,
        lam[5] * x ** 2 + 2 * lam[6] * x ** 3 + 3 * lam[7] * x ** 4,
        x ** 3,
    ])


def _chebyshev_sum(seg: _Segment, lam, N: int) -> np.ndarray:
    theta = (2 * np.arange(1, N + 1) - 1) * np.pi / (2 * N)
    x = seg.mid + seg.half * np.cos(theta)
    # dx / 2y = dtau / (2 i sqrt(1 - tau^2) H)
    w = 1 / (2j * seg.H(x))
    return np.pi / N * (differential_numerators(lam, x) @ w)


def segment_integrals(seg: _Segment, lam, quad_tol: float, n0: int = 32,
                      n_max: int = 1 << 16) -> np.ndarray:
    """Integrals of the six differentials along a segment, on its sheet."""
    N = n0
    prev = _chebyshev_sum(seg, lam, N)
    while N < n_max:
        N *= 2
        cur = _chebyshev_sum(seg, lam, N)
        if np.max(np.abs(cur - prev)) <= quad_tol * max(1.0, float(np.max(np.abs(cur)))):
            return cur
        prev = cur
    raise QuadratureNonConvergence(f"segment quadrature did not reach {quad_tol:g}")


@dataclass(frozen=True)
class PeriodData:
    """omega' / omega'' (alpha / beta periods of the first kind), eta' / eta''
    (second kind) and the Riemann matrix Z. Rows index the differential,
    columns the cycle."""

    omega1: np.ndarray
    omega2: np.ndarray
    eta1: np.ndarray
    eta2: np.ndarray
    Z: np.ndarray
    quad_tol: float
    curve_hash: str = ""

    def lattice_point(self, a, b) -> np.ndarray:
        return self.omega1 @ np.asarray(a, dtype=float) + self.omega2 @ np.asarray(b, dtype=float)

    def generators(self):
        """The six lattice generators as ((a, b), vector) pairs."""
        out = []
        for i in range(3):
            e = np.zeros(3, dtype=int)
            e[i] = 1
            out.append(((e, np.zeros(3, int)), self.omega1[:, i]))
        for i in range(3):
            e = np.zeros(3, dtype=int)
            e[i] = 1
            out.append(((np.zeros(3, int), e), self.omega2[:, i]))
        return out

    def to_json(self) -> dict:
        def enc(M):
            return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(M)]
        return {"omega1": enc(self.omega1), "omega2": enc(self.omega2),
                "eta1": enc(self.eta1), "eta2": enc(self.eta2), "Z": enc(self.Z),
                "quad_tol": self.quad_tol, "curve_hash": self.curve_hash}

    @classmethod
    def from_json(cls, data: dict) -> "PeriodData":
        def dec(M):
            return np.array([[complex(re, im) for re, im in row] for row in M])
        return cls(dec(data["omega1"]), dec(data["omega2"]), dec(data["eta1"]),
                   dec(data["eta2"]), dec(data["Z"]), float(data["quad_tol"]),
                   data.get("curve_hash", ""))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), indent=1) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "PeriodData":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def period_matrices(curve: Curve, cycles: CycleSpec, quad_tol: float = 1e-10,
                    config: Config = DEFAULT_CONFIG) -> PeriodData:
    """All 36 cycle integrals (6 differentials x 6 segment lifts), combined
    into the alpha/beta periods."""
    lam = curve.lam
    # a segment lift integrates the same branch out and back: twice the segment
    P = np.column_stack([2 * segment_integrals(s, lam, quad_tol) for s in cycles.segments()])
    A, B = cycles.alpha, cycles.beta
    w1, w2 = P[:3] @ A, P[:3] @ B
    h1, h2 = P[3:] @ A, P[3:] @ B
    pd = PeriodData(w1, w2, h1, h2, np.zeros((3, 3), complex), quad_tol, curve.hash)
    Z = riemann_matrix(pd, config)
    return PeriodData(w1, w2, h1, h2, Z, quad_tol, curve.hash)


def riemann_matrix(pd: PeriodData, config: Config = DEFAULT_CONFIG) -> np.ndarray:
    """``Z = omega'^-1 omega''``, symmetrised after the Riemann-relation checks."""
    cond = np.linalg.cond(pd.omega1)
    if not cond <= config.max_omega_cond:
        raise IllConditionedOmega(f"cond(omega') = {cond:.3g}")
    Z = np.linalg.solve(pd.omega1, pd.omega2)
    asym = np.linalg.norm(Z - Z.T) / np.linalg.norm(Z)
    if asym > config.sym_tol:
        raise DegenerateGeometry(f"Z is not symmetric (relative asymmetry {asym:.3g})")
    Z = (Z + Z.T) / 2
    lmin = np.linalg.eigvalsh(Z.imag)[0]
    if lmin <= 0:
        raise DegenerateGeometry(f"Im Z is not positive definite (min eigenvalue {lmin:.3g})")
    return Z


def riemann_diagnostics(pd: PeriodData) -> dict:
    Z = np.linalg.solve(pd.omega1, pd.omega2)
    return {"symmetry_residual": float(np.linalg.norm(Z - Z.T) / np.linalg.norm(Z)),
            "min_eig_imZ": float(np.linalg.eigvalsh(((Z + Z.T) / 2).imag)[0]),
            "cond_omega1": float(np.linalg.cond(pd.omega1))}


def legendre_residual(pd: PeriodData) -> float:
    """Deviation of omega'^T eta'' - eta'^T omega'' from 2 pi i I (diagnostic)."""
    M = pd.omega1.T @ pd.eta2 - pd.eta1.T @ pd.omega2
    return float(np.max(np.abs(M - 2j * np.pi * np.eye(3))))


def lattice_reduce(u, pd: PeriodData):
    """Write ``u = u_red + omega' a + omega'' b`` with real coordinates of
    ``u_red`` in [-1/2, 1/2)."""
    u = np.asarray(u, dtype=complex)
    M = np.hstack([pd.omega1, pd.omega2])
    R = np.vstack([M.real, M.imag])
    coords = np.linalg.solve(R, np.concatenate([u.real, u.imag]))
    n = np.floor(coords + 0.5).astype(int)
    u_red = u - M @ n
    return u_red, n[:3], n[3:]


def compute_periods(curve: Curve, config: Config = DEFAULT_CONFIG) -> PeriodData:
    """Periods of ``curve`` at ``config.quad_tol``, using the on-disk cache
    (``$SIGMA3_CACHE_DIR`` or ``config.cache_dir``) when available."""
    cache_dir = config.resolved_cache_dir()
    path = None
    if cache_dir is not None:
        path = cache_dir / f"periods_{curve.hash}_{config.quad_tol:.0e}.json"
        if path.exists():
            try:
                pd = PeriodData.load(path)
                if pd.curve_hash == curve.hash and pd.quad_tol == config.quad_tol:
                    return pd
            except (ValueError, KeyError):
                log.warning("ignoring unreadable period cache %s", path)
    cycles = build_cycles(branch_points(curve))
    pd = period_matrices(curve, cycles, config.quad_tol, config)
    if path is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        pd.save(path)
    return pd
