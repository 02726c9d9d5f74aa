"""Curves ``[0, 1] -> A``: piecewise polynomials and uniform samples.

:class:`PolyCurve` stores each cell ``[s_j, s_{j+1}]`` as a Chebyshev series
in the local variable ``x = 2 (t - s_j) / h_j - 1``, coefficient array of
shape ``(cells, degree + 1, dim)``.  Products and antiderivatives are exact
in this basis, and since ``|T_k| <= 1`` on a cell the sum of seminorms of
the coefficients bounds the sup of the curve.  The JSON interface uses power
coefficients in ``t - s_j`` instead.

:class:`SampledCurve` holds values on a uniform grid; it is the uncertified
convenience path.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P
from scipy.integrate import cumulative_simpson

from .algebra import REAL, Algebra, Element
from .errors import AlgebraMismatchError, CurveError

CONTINUITY_TOL = 1e-12
DEFAULT_NORM_GRID = 1024


def _check_time(t):
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0) or np.any(t > 1.0) or np.any(~np.isfinite(t)):
        raise CurveError("times must lie in [0, 1]")
    return t


def _power_to_cheb_matrix(deg: int, h: float) -> np.ndarray:
    """Columns: Chebyshev coefficients (in x) of ``(h (x + 1) / 2) ** k``."""
    out = np.zeros((deg + 1, deg + 1))
    base = np.array([h / 2.0, h / 2.0])
    mono = np.array([1.0])
    for k in range(deg + 1):
        out[: k + 1, k] = C.poly2cheb(mono)
        mono = P.polymul(mono, base)
    return out


class PolyCurve:
    """Piecewise-polynomial curve with Chebyshev cell coefficients."""

    def __init__(self, algebra: Algebra, breakpoints, coeffs, *, smoothness: int | None = None,
                 check: bool = True):
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2 or bp[0] != 0.0 or bp[-1] != 1.0 or np.any(np.diff(bp) <= 0):
            raise CurveError("breakpoints must increase strictly from 0 to 1")
        c = np.asarray(coeffs)
        if algebra.field == REAL and np.iscomplexobj(c):
            if np.any(np.imag(c) != 0):
                raise CurveError("complex coefficients for a real algebra")
            c = np.real(c)
        c = np.array(c, dtype=algebra.dtype)
        if c.ndim != 3 or c.shape[0] != bp.size - 1 or c.shape[2] != algebra.dim or c.shape[1] < 1:
            raise CurveError(f"coefficients have shape {c.shape}, expected ({bp.size - 1}, deg+1, {algebra.dim})")
        bp.setflags(write=False)
        c.setflags(write=False)
        self.algebra = algebra
        self.breakpoints = bp
        self.coeffs = c
        self.smoothness = smoothness if smoothness is not None else math.inf
        if check and bp.size > 2:
            left = C.chebval(1.0, np.moveaxis(c[:-1], 1, 0))   # (cells-1, dim) right ends
            right = C.chebval(-1.0, np.moveaxis(c[1:], 1, 0))
            scale = max(1.0, float(np.max(np.abs(c))))
            gap = float(np.max(np.abs(left - right)))
            if gap > CONTINUITY_TOL * scale:
                raise CurveError(f"curve is discontinuous at a breakpoint (jump {gap:.3e})")

    # construction ---------------------------------------------------------

    @classmethod
    def from_power(cls, algebra: Algebra, breakpoints, cells, **kw) -> "PolyCurve":
        """Cells given as power coefficients ``[c_0, c_1, ...]`` in ``(t - s_j)``."""
        bp = np.asarray(breakpoints, dtype=float)
        if len(cells) != bp.size - 1:
            raise CurveError(f"{len(cells)} cells for {bp.size - 1} intervals")
        deg = max(len(cell) for cell in cells) - 1
        if deg < 0:
            raise CurveError("empty cell")
        out = np.zeros((len(cells), deg + 1, algebra.dim), dtype=algebra.dtype)
        for j, cell in enumerate(cells):
            a = np.zeros((deg + 1, algebra.dim), dtype=algebra.dtype)
            arr = np.asarray(cell, dtype=algebra.dtype)
            if arr.ndim != 2 or arr.shape[1] != algebra.dim:
                raise CurveError(f"cell {j}: coefficient vectors must have length {algebra.dim}")
            a[: arr.shape[0]] = arr
            out[j] = _power_to_cheb_matrix(deg, bp[j + 1] - bp[j]) @ a
        return cls(algebra, bp, out, **kw)

    @classmethod
    def constant(cls, x: Element, breakpoints=(0.0, 1.0)) -> "PolyCurve":
        bp = np.asarray(breakpoints, dtype=float)
        c = np.broadcast_to(x.coeffs, (bp.size - 1, 1, x.algebra.dim))
        return cls(x.algebra, bp, c)

    @classmethod
    def polynomial(cls, algebra: Algebra, power_coeffs) -> "PolyCurve":
        """Single-cell curve ``t -> sum_k c_k t**k`` from Elements or vectors."""
        rows = [c.coeffs if isinstance(c, Element) else np.asarray(c) for c in power_coeffs]
        return cls.from_power(algebra, [0.0, 1.0], [rows])

    @classmethod
    def interpolate(cls, algebra: Algebra, f, degree: int, breakpoints=(0.0, 1.0), **kw) -> "PolyCurve":
        """Chebyshev interpolant of ``f`` (maps a time array to ``(K, dim)`` values)."""
        bp = np.asarray(breakpoints, dtype=float)
        nodes = np.cos(np.pi * (np.arange(degree + 1) + 0.5) / (degree + 1))
        vand = C.chebvander(nodes, degree)
        out = np.zeros((bp.size - 1, degree + 1, algebra.dim), dtype=algebra.dtype)
        for j in range(bp.size - 1):
            ts = bp[j] + (nodes + 1.0) * (bp[j + 1] - bp[j]) / 2.0
            out[j] = np.linalg.solve(vand, np.asarray(f(ts)))
        kw.setdefault("check", False)
        return cls(algebra, bp, out, **kw)

    @classmethod
    def interpolate_adaptive(cls, algebra: Algebra, f, breakpoints=(0.0, 1.0), *, start: int = 16,
                             max_degree: int = 256, rtol: float = 1e-15) -> "PolyCurve":
        """Double the interpolation degree until the trailing coefficients are negligible."""
        deg = start
        while True:
            cur = cls.interpolate(algebra, f, deg, breakpoints)
            mags = np.max(np.abs(cur.coeffs), axis=(0, 2))
            scale = max(float(np.max(mags)), 1e-300)
            if float(np.max(mags[-3:])) <= rtol * scale or deg >= max_degree:
                return cur.trim(rtol * scale * 1e-2)
            deg *= 2

    # basic queries ------------------------------------------------------------

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def cells(self) -> int:
        return self.coeffs.shape[0]

    def __repr__(self):
        return f"PolyCurve(cells={self.cells}, degree={self.degree}, algebra={self.algebra!r})"

    def _locate(self, t):
        j = np.searchsorted(self.breakpoints, t, side="right") - 1
        j = np.clip(j, 0, self.cells - 1)
        h = self.breakpoints[j + 1] - self.breakpoints[j]
        x = 2.0 * (t - self.breakpoints[j]) / h - 1.0
        return j, x

    def values(self, ts) -> np.ndarray:
        """Coefficient arrays ``(K, dim)`` at times ``ts``."""
        ts = _check_time(np.atleast_1d(ts))
        j, x = self._locate(ts)
        vand = C.chebvander(x, self.degree)            # (K, deg+1)
        return np.einsum("kd,kde->ke", vand, self.coeffs[j])

    def __call__(self, t) -> Element:
        return Element(self.algebra, self.values(np.array([float(t)]))[0])

    def power_cells(self) -> list[np.ndarray]:
        """Power coefficients in ``t - s_j`` per cell (inverse of :meth:`from_power`)."""
        out = []
        for j in range(self.cells):
            m = _power_to_cheb_matrix(self.degree, self.breakpoints[j + 1] - self.breakpoints[j])
            out.append(np.linalg.solve(m, self.coeffs[j]))
        return out

    def _like(self, coeffs, breakpoints=None, smoothness=None, algebra=None):
        return PolyCurve(algebra or self.algebra,
                         self.breakpoints if breakpoints is None else breakpoints,
                         coeffs, smoothness=self.smoothness if smoothness is None else smoothness,
                         check=False)

    # linear structure ---------------------------------------------------------

    def _aligned(self, other: "PolyCurve"):
        if not isinstance(other, PolyCurve):
            raise CurveError("representation mismatch: expected a PolyCurve")
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("curves live in different algebras")
        if self.breakpoints.shape == other.breakpoints.shape and np.array_equal(self.breakpoints, other.breakpoints):
            return self, other
        bp = np.union1d(self.breakpoints, other.breakpoints)
        return self.refine(bp), other.refine(bp)

    def padded(self, degree: int) -> np.ndarray:
        if degree <= self.degree:
            return self.coeffs
        out = np.zeros((self.cells, degree + 1, self.algebra.dim), dtype=self.algebra.dtype)
        out[:, : self.degree + 1] = self.coeffs
        return out

    def __add__(self, other):
        a, b = self._aligned(other)
        d = max(a.degree, b.degree)
        return a._like(a.padded(d) + b.padded(d), smoothness=min(a.smoothness, b.smoothness))

    def __sub__(self, other):
        a, b = self._aligned(other)
        d = max(a.degree, b.degree)
        return a._like(a.padded(d) - b.padded(d), smoothness=min(a.smoothness, b.smoothness))

    def __neg__(self):
        return self._like(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, PolyCurve):
            return self.product(other)
        if np.isscalar(other):
            return self._like(self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self._like(other * self.coeffs)
        return NotImplemented

    def add_constant(self, x: Element) -> "PolyCurve":
        if x.algebra is not self.algebra:
            raise AlgebraMismatchError("constant lives in another algebra")
        c = np.array(self.coeffs)
        c[:, 0, :] += x.coeffs
        return self._like(c)

    # calculus -----------------------------------------------------------------

    def product(self, other: "PolyCurve") -> "PolyCurve":
        """Pointwise algebra product; the degree is the sum of the degrees."""
        a, b = self._aligned(other)
        pair = np.einsum("mia,mjb,abc->mijc", a.coeffs, b.coeffs, self.algebra.table)
        da, db = a.degree, b.degree
        out = np.zeros((a.cells, da + db + 1, self.algebra.dim), dtype=self.algebra.dtype)
        # T_i T_j = (T_{i+j} + T_{|i-j|}) / 2
        for i in range(da + 1):
            for j in range(db + 1):
                half = 0.5 * pair[:, i, j]
                out[:, i + j] += half
                out[:, abs(i - j)] += half
        return a._like(out, smoothness=min(a.smoothness, b.smoothness))

    def derivative(self) -> "PolyCurve":
        if self.smoothness < 1:
            raise CurveError("curve has no first derivative representation")
        h = np.diff(self.breakpoints)
        if self.degree == 0:
            return self._like(np.zeros_like(self.coeffs), smoothness=self.smoothness - 1)
        d = np.stack([C.chebder(self.coeffs[j], axis=0, scl=2.0 / h[j]) for j in range(self.cells)])
        return self._like(d, smoothness=self.smoothness - 1)

    def antiderivative(self) -> "PolyCurve":
        """``t -> integral_0^t gamma``, exact and continuous."""
        h = np.diff(self.breakpoints)
        cells = [C.chebint(self.coeffs[j], lbnd=-1, scl=h[j] / 2.0, axis=0) for j in range(self.cells)]
        cells = np.stack(cells)
        ends = C.chebval(1.0, np.moveaxis(cells, 1, 0))  # (cells, dim), integral over each cell
        offsets = np.concatenate([np.zeros((1, self.algebra.dim), dtype=cells.dtype),
                                  np.cumsum(ends, axis=0)[:-1]])
        cells[:, 0, :] += offsets
        return self._like(cells, smoothness=self.smoothness + 1)

    def integrate(self, a: float, b: float) -> Element:
        if a > b:
            raise CurveError("integration bounds must satisfy a <= b")
        anti = self.antiderivative()
        v = anti.values(np.array([a, b]))
        return Element(self.algebra, v[1] - v[0])

    # re-expansion -------------------------------------------------------------

    def refine(self, breakpoints) -> "PolyCurve":
        """Same curve on a finer partition (exact up to rounding)."""
        bp = np.asarray(breakpoints, dtype=float)
        if not np.all(np.isin(self.breakpoints, bp)):
            raise CurveError("refinement must contain the original breakpoints")
        if bp.size == self.breakpoints.size:
            return self

        out = np.zeros((bp.size - 1, self.degree + 1, self.algebra.dim), dtype=self.algebra.dtype)
        nodes = np.cos(np.pi * (np.arange(self.degree + 1) + 0.5) / (self.degree + 1))
        vand = C.chebvander(nodes, self.degree)
        for j in range(bp.size - 1):
            ts = bp[j] + (nodes + 1.0) * (bp[j + 1] - bp[j]) / 2.0
            out[j] = np.linalg.solve(vand, self.values(ts))
        return PolyCurve(self.algebra, bp, out, smoothness=self.smoothness, check=False)

    def reparametrize(self, a: float, b: float) -> "PolyCurve":
        """Generator of the evolution on ``[a, b]``: ``u -> (b - a) * gamma(a + (b - a) u)``.

        If ``eta`` evolves ``gamma`` then ``u -> eta(a)^{-1} eta(a + (b - a) u)``
        evolves the returned curve.
        """
        if not 0.0 <= a < b <= 1.0:
            raise CurveError("need 0 <= a < b <= 1")
        inner = self.breakpoints[(self.breakpoints > a) & (self.breakpoints < b)]
        bp = np.concatenate([[0.0], (inner - a) / (b - a), [1.0]])
        deg = self.degree
        nodes = np.cos(np.pi * (np.arange(deg + 1) + 0.5) / (deg + 1))
        vand = C.chebvander(nodes, deg)
        out = np.zeros((bp.size - 1, deg + 1, self.algebra.dim), dtype=self.algebra.dtype)
        for j in range(bp.size - 1):
            us = bp[j] + (nodes + 1.0) * (bp[j + 1] - bp[j]) / 2.0
            out[j] = np.linalg.solve(vand, (b - a) * self.values(np.clip(a + (b - a) * us, 0.0, 1.0)))
        return PolyCurve(self.algebra, bp, out, smoothness=self.smoothness, check=False)

    def truncate(self, cap: int, seminorm=None) -> tuple["PolyCurve", float]:
        """Drop Chebyshev modes above ``cap``.

        This is the Chebyshev-weighted least-squares projection onto degree
        ``cap``; the returned bound ``max_j sum_k p(dropped_jk)`` dominates the
        sup of the error because ``|T_k| <= 1``.
        """
        if self.degree <= cap:
            return self, 0.0
        dropped = self.coeffs[:, cap + 1:]
        if seminorm is None:
            err = float(np.max(np.sum(np.max(np.abs(dropped), axis=-1), axis=1)))
        else:
            err = float(np.max(np.sum(seminorm.eval_coeffs(dropped), axis=1)))
        return self._like(self.coeffs[:, : cap + 1]), err

    def trim(self, atol: float = 0.0) -> "PolyCurve":
        """Drop trailing all-small coefficient rows."""
        mags = np.max(np.abs(self.coeffs), axis=(0, 2))
        keep = self.degree
        while keep > 0 and mags[keep] <= atol:
            keep -= 1
        return self._like(self.coeffs[:, : keep + 1])

    def coefficient_sup_bound(self, seminorm) -> float:
        """Rigorous ``sup_t p(gamma(t))`` bound: ``max_j sum_k p(c_jk)``."""
        return float(np.max(np.sum(seminorm.eval_coeffs(self.coeffs), axis=1)))

    def norm_grid(self, n: int = DEFAULT_NORM_GRID) -> np.ndarray:
        return np.union1d(np.linspace(0.0, 1.0, n), self.breakpoints)

    # fields -------------------------------------------------------------------

    def embed(self) -> "PolyCurve":
        if self.algebra.field != REAL:
            raise CurveError("embed expects a curve in a real algebra")
        return self._like(self.coeffs.astype(np.complex128), algebra=self.algebra.complexify())

    def real_part(self) -> "PolyCurve":
        return self._like(np.real(self.coeffs).copy(), algebra=_real_form(self.algebra))

    def imag_part(self) -> "PolyCurve":
        return self._like(np.imag(self.coeffs).copy(), algebra=_real_form(self.algebra))


def _real_form(a: Algebra) -> Algebra:
    if a.real_form is None:
        raise CurveError("curve is not in a complexified algebra")
    return a.real_form


class SampledCurve:
    """Values on the uniform grid ``t_i = i / (K - 1)``; linear interpolation between."""

    def __init__(self, algebra: Algebra, values, *, smoothness: int = 1):
        v = np.asarray(values)
        if algebra.field == REAL and np.iscomplexobj(v):
            if np.any(np.imag(v) != 0):
                raise CurveError("complex samples for a real algebra")
            v = np.real(v)
        v = np.array(v, dtype=algebra.dtype)
        if v.ndim != 2 or v.shape[1] != algebra.dim:
            raise CurveError(f"samples must have shape (K, {algebra.dim})")
        if v.shape[0] < 2:
            raise CurveError("a sampled curve needs at least two points")
        v.setflags(write=False)
        self.algebra = algebra
        self.samples = v
        self.smoothness = smoothness

    @classmethod
    def from_function(cls, algebra: Algebra, f, n: int, **kw) -> "SampledCurve":
        return cls(algebra, f(np.linspace(0.0, 1.0, n)), **kw)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.samples.shape[0])

    @property
    def h(self) -> float:
        return 1.0 / (self.samples.shape[0] - 1)

    def __repr__(self):
        return f"SampledCurve(points={self.samples.shape[0]}, algebra={self.algebra!r})"

    def values(self, ts) -> np.ndarray:
        ts = _check_time(np.atleast_1d(ts))
        k = self.samples.shape[0] - 1
        pos = ts * k
        i = np.clip(np.floor(pos).astype(int), 0, k - 1)
        w = (pos - i)[:, None]
        return (1.0 - w) * self.samples[i] + w * self.samples[i + 1]

    def __call__(self, t) -> Element:
        return Element(self.algebra, self.values(np.array([float(t)]))[0])

    def _aligned(self, other):
        if not isinstance(other, SampledCurve):
            raise CurveError("representation mismatch: expected a SampledCurve")
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("curves live in different algebras")
        if other.samples.shape != self.samples.shape:
            raise CurveError("sampled curves on different grids")

    def __add__(self, other):
        self._aligned(other)
        return SampledCurve(self.algebra, self.samples + other.samples,
                            smoothness=min(self.smoothness, other.smoothness))

    def __sub__(self, other):
        self._aligned(other)
        return SampledCurve(self.algebra, self.samples - other.samples,
                            smoothness=min(self.smoothness, other.smoothness))

    def __neg__(self):
        return SampledCurve(self.algebra, -self.samples, smoothness=self.smoothness)

    def __mul__(self, other):
        if isinstance(other, SampledCurve):
            return self.product(other)
        if np.isscalar(other):
            return SampledCurve(self.algebra, self.samples * other, smoothness=self.smoothness)
        return NotImplemented

    __rmul__ = __mul__

    def add_constant(self, x: Element) -> "SampledCurve":
        return SampledCurve(self.algebra, self.samples + x.coeffs, smoothness=self.smoothness)

    def product(self, other: "SampledCurve") -> "SampledCurve":
        self._aligned(other)
        return SampledCurve(self.algebra, self.algebra.mul_coeffs(self.samples, other.samples),
                            smoothness=min(self.smoothness, other.smoothness))

    def derivative(self) -> "SampledCurve":
        """Central differences inside, one-sided at the ends."""
        if self.smoothness < 1:
            raise CurveError("derivative order unsupported by the sampled representation")
        d = np.gradient(self.samples, self.h, axis=0, edge_order=1)
        return SampledCurve(self.algebra, d, smoothness=self.smoothness - 1)

    def antiderivative(self) -> "SampledCurve":
        """Cumulative Simpson integral from 0 on the sample grid."""
        if self.samples.shape[0] == 2:
            cum = np.stack([np.zeros(self.algebra.dim), 0.5 * self.h * self.samples.sum(axis=0)])
        else:
            cum = cumulative_simpson(self.samples, dx=self.h, axis=0, initial=0)
        return SampledCurve(self.algebra, cum, smoothness=self.smoothness + 1)

    def integrate(self, a: float, b: float) -> Element:
        """Composite Simpson; an odd cell count closes with a 3/8-rule panel."""
        if a > b:
            raise CurveError("integration bounds must satisfy a <= b")
        _check_time([a, b])
        k = self.samples.shape[0] - 1
        h = self.h
        ia = math.ceil(a * k - 1e-12)
        ib = math.floor(b * k + 1e-12)
        total = np.zeros(self.algebra.dim, dtype=self.algebra.dtype)
        if ia > ib:
            va, vb = self.values(np.array([a, b]))
            return Element(self.algebra, 0.5 * (b - a) * (va + vb))
        # partial cells at the ends follow the linear interpolant
        if ia * h > a:
            va, vg = self.values(np.array([a, ia * h]))
            total += 0.5 * (ia * h - a) * (va + vg)
        if b > ib * h:
            vg, vb = self.values(np.array([ib * h, b]))
            total += 0.5 * (b - ib * h) * (vg + vb)
        y = self.samples[ia: ib + 1]
        cells = ib - ia
        if cells == 1:
            total += 0.5 * h * (y[0] + y[1])
            cells = 0
        elif cells % 2 == 1:
            # 3/8 rule on the last three cells keeps cubic exactness
            total += 3.0 * h / 8.0 * (y[-4] + 3.0 * y[-3] + 3.0 * y[-2] + y[-1])
            y = y[:-3]
            cells -= 3
        if cells > 0:
            total += h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum(axis=0) + 2.0 * y[2:-1:2].sum(axis=0))
        return Element(self.algebra, total)

    def norm_grid(self, n: int | None = None) -> np.ndarray:
        return self.grid

    def embed(self) -> "SampledCurve":
        return SampledCurve(self.algebra.complexify(), self.samples.astype(np.complex128),
                            smoothness=self.smoothness)

    def real_part(self) -> "SampledCurve":
        return SampledCurve(_real_form(self.algebra), np.real(self.samples).copy(),
                            smoothness=self.smoothness)

    def imag_part(self) -> "SampledCurve":
        return SampledCurve(_real_form(self.algebra), np.imag(self.samples).copy(),
                            smoothness=self.smoothness)


Curve = PolyCurve | SampledCurve


# ---------------------------------------------------------------------------
# module-level operations


def eval_curve(gamma, t: float) -> Element:
    return gamma(t)


def derivative(gamma):
    return gamma.derivative()


def integrate(gamma, a: float, b: float) -> Element:
    return gamma.integrate(a, b)


def curve_norm(gamma, k: int, p, *, grid: int = DEFAULT_NORM_GRID, certified: bool = False) -> float:
    """``max_{j <= k} sup_t p(gamma^(j)(t))`` on a refinement grid plus breakpoints.

    With ``certified=True`` (polynomial curves only) each grid maximum is
    inflated by half the largest grid gap times a coefficient bound on the
    next derivative, which makes the result an upper bound.
    """
    if k < 0:
        raise CurveError("order must be non-negative")
    if p.algebra is not gamma.algebra:
        raise AlgebraMismatchError("seminorm and curve live in different algebras")
    if certified and not isinstance(gamma, PolyCurve):
        raise CurveError("certified norms need a polynomial curve")
    ts = gamma.norm_grid(grid)
    gap = float(np.max(np.diff(ts)))
    best = 0.0
    cur = gamma
    for j in range(k + 1):
        if j > 0:
            cur = cur.derivative()
        val = float(np.max(p.eval_coeffs(cur.values(ts))))
        if certified:
            lip = cur.derivative().coefficient_sup_bound(p) if cur.degree > 0 else 0.0
            val += 0.5 * gap * lip
        best = max(best, val)
    return best


def lipschitz_bound(gamma, p, **kw) -> float:
    """Lipschitz constant bound ``sup_t p(gamma'(t))``."""
    return curve_norm(gamma.derivative(), 0, p, **kw)


def make_curve(algebra: Algebra, spec: dict):
    """Parse ``{"rep": "poly", ...}`` or ``{"rep": "samples", ...}``."""
    if not isinstance(spec, dict) or "rep" not in spec:
        raise CurveError("curve spec must be an object with a 'rep' key")
    rep = spec["rep"]
    if rep == "poly":
        cells = [[_parse_vector(algebra, e) for e in cell] for cell in spec["cells"]]
        return PolyCurve.from_power(algebra, spec.get("breakpoints", [0.0, 1.0]), cells)
    if rep == "samples":
        vals = [_parse_vector(algebra, e) for e in spec["values"]]
        return SampledCurve(algebra, np.array(vals), smoothness=int(spec.get("smoothness", 1)))
    raise CurveError(f"unknown curve representation {rep!r}")


def _parse_vector(algebra: Algebra, v):
    if len(v) != algebra.dim:
        raise CurveError(f"coefficient vector of length {len(v)} for dim {algebra.dim}")
    if algebra.field == REAL:
        return np.asarray(v, dtype=float)
    return np.array([complex(*c) if isinstance(c, (list, tuple)) else complex(c) for c in v])


def curve_to_spec(gamma) -> dict:
    def enc(v):
        if np.iscomplexobj(v):
            return [[float(z.real), float(z.imag)] for z in v]
        return [float(z) for z in v]

    if isinstance(gamma, PolyCurve):
        return {"rep": "poly", "breakpoints": [float(b) for b in gamma.breakpoints],
                "cells": [[enc(row) for row in cell] for cell in gamma.power_cells()]}
    return {"rep": "samples", "values": [enc(row) for row in gamma.samples]}
