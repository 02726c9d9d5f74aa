"""Finite-dimensional unital associative algebras given by structure constants.

An algebra of dimension ``d`` is stored as a tensor ``table`` of shape
``(d, d, d)`` with ``e_i * e_j = sum_k table[i, j, k] e_k`` and a coefficient
vector ``unit`` for the identity.  Elements are dense coefficient vectors.

The left regular representation ``L_x`` (the matrix of ``y -> x*y``) is the
canonical lift used for inversion and exponentials; ``L_{xy} = L_x L_y``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import AlgebraError, AlgebraMismatchError, SingularElementError

REAL = "real"
COMPLEX = "complex"

CHECK_TOL = 1e-12
DEFAULT_DIM_CAP = 64
SYM_MUL_CAP = 8
SINGULAR_COND = 1e13


class Algebra:
    """A validated unital associative algebra over R or C."""

    def __init__(self, table, unit, field=REAL, *, name="structure_constants",
                 params=None, check=True, allow_large=False, tol=CHECK_TOL):
        if field not in (REAL, COMPLEX):
            raise AlgebraError(f"unknown field {field!r}")
        dtype = np.float64 if field == REAL else np.complex128
        table = np.asarray(table)
        unit = np.asarray(unit)
        if field == REAL and (np.iscomplexobj(table) or np.iscomplexobj(unit)):
            if np.any(np.imag(table) != 0) or np.any(np.imag(unit) != 0):
                raise AlgebraError("complex structure data for a real algebra")
        table = np.array(np.real_if_close(table) if field == REAL else table, dtype=dtype)
        unit = np.array(np.real_if_close(unit) if field == REAL else unit, dtype=dtype)
        if table.ndim != 3 or len(set(table.shape)) != 1:
            raise AlgebraError(f"structure tensor must be (d, d, d), got {table.shape}")
        dim = table.shape[0]
        if dim == 0:
            raise AlgebraError("dimension must be positive")
        if unit.shape != (dim,):
            raise AlgebraError(f"unit has shape {unit.shape}, expected ({dim},)")
        if dim > DEFAULT_DIM_CAP and not allow_large:
            raise AlgebraError(f"dim {dim} exceeds cap {DEFAULT_DIM_CAP}; pass allow_large=True")
        table.setflags(write=False)
        unit.setflags(write=False)
        self.table = table
        self.unit_coeffs = unit
        self.field = field
        self.dim = dim
        self.name = name
        self.params = dict(params or {})
        self.real_form: Algebra | None = None
        self._complexified: Algebra | None = None
        if check:
            self._check(tol)

    def _check(self, tol):
        c = self.table
        left = np.einsum("ijm,mkl->ijkl", c, c)
        right = np.einsum("jkm,iml->ijkl", c, c)
        err = np.max(np.abs(left - right))
        if err > tol:
            raise AlgebraError(f"structure tensor is not associative (defect {err:.3e})")
        u = self.unit_coeffs
        eye = np.eye(self.dim)
        lu = np.einsum("i,ijk->jk", u, c)   # row j: 1 * e_j
        ru = np.einsum("j,ijk->ik", u, c)   # row i: e_i * 1
        err = max(np.max(np.abs(lu - eye)), np.max(np.abs(ru - eye)))
        if err > tol:
            raise AlgebraError(f"unit law violated (defect {err:.3e})")

    def __repr__(self):
        extra = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"Algebra({self.name}{', ' + extra if extra else ''}, dim={self.dim}, field={self.field})"

    @property
    def dtype(self):
        return np.float64 if self.field == REAL else np.complex128

    # element construction ------------------------------------------------

    def element(self, coeffs) -> "Element":
        return Element(self, coeffs)

    def one(self) -> "Element":
        return Element(self, self.unit_coeffs)

    def zero(self) -> "Element":
        return Element(self, np.zeros(self.dim))

    def basis(self, i: int) -> "Element":
        v = np.zeros(self.dim)
        v[i] = 1.0
        return Element(self, v)

    def scalar(self, s) -> "Element":
        return Element(self, s * self.unit_coeffs)

    # raw coefficient kernels (batched over leading axes) ------------------

    def mul_coeffs(self, x, y):
        """Product of coefficient arrays ``x[..., d]`` and ``y[..., d]``."""
        return np.einsum("...i,...j,ijk->...k", x, y, self.table)

    def lrr_coeffs(self, x):
        """Left regular representation matrices for coefficient arrays ``x[..., d]``."""
        # L[k, j] = sum_i x_i c[i, j, k]
        return np.einsum("...i,ijk->...kj", x, self.table)

    # structural queries ---------------------------------------------------

    def is_commutative(self, tol=CHECK_TOL) -> bool:
        return bool(np.max(np.abs(self.table - self.table.transpose(1, 0, 2))) <= tol)

    def complexify(self) -> "Algebra":
        """The complexification: same structure tensor, complex scalars."""
        if self.field != REAL:
            raise AlgebraError("algebra is already complex")
        if self._complexified is None:
            ac = Algebra(self.table.astype(np.complex128), self.unit_coeffs.astype(np.complex128),
                         COMPLEX, name=self.name, params=self.params, check=False,
                         allow_large=True)
            ac.real_form = self
            self._complexified = ac
        return self._complexified


@dataclass(frozen=True, eq=False)
class Element:
    """An algebra element as a coefficient vector.  Immutable."""

    algebra: Algebra
    coeffs: np.ndarray = field(repr=True)

    def __post_init__(self):
        a = self.algebra
        c = np.asarray(self.coeffs)
        if a.field == REAL and np.iscomplexobj(c):
            if np.any(np.imag(c) != 0):
                raise AlgebraError("complex coefficients for a real algebra")
            c = np.real(c)
        c = np.array(c, dtype=a.dtype)
        if c.shape != (a.dim,):
            raise AlgebraError(f"coefficient vector has shape {c.shape}, expected ({a.dim},)")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _same(self, other: "Element"):
        if not isinstance(other, Element):
            raise TypeError(f"expected Element, got {type(other).__name__}")
        if other.algebra is not self.algebra:
            raise AlgebraMismatchError("elements belong to different algebras")

    def __add__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        return Element(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        self._same(other)
        return Element(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self):
        return Element(self.algebra, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Element):
            return mul(self, other)
        if np.isscalar(other):
            return Element(self.algebra, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return Element(self.algebra, other * self.coeffs)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return Element(self.algebra, self.coeffs / other)
        return NotImplemented

    def __pow__(self, n):
        return power(self, n)

    def lrr(self) -> np.ndarray:
        return self.algebra.lrr_coeffs(self.coeffs)

    def allclose(self, other: "Element", atol=1e-12, rtol=0.0) -> bool:
        self._same(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))


# ---------------------------------------------------------------------------
# builtin algebras


def matrix_algebra(n: int, field=REAL) -> Algebra:
    """M_n with basis of matrix units E_ij at flat index i*n + j."""
    if n < 1:
        raise AlgebraError("matrix size must be positive")
    d = n * n
    table = np.zeros((d, d, d))
    for i, j, l in itertools.product(range(n), repeat=3):
        # E_ij E_jl = E_il
        table[i * n + j, j * n + l, i * n + l] = 1.0
    unit = np.eye(n).reshape(-1)
    return Algebra(table, unit, field, name="matrix", params={"n": n})


def diagonal_algebra(d: int, field=REAL) -> Algebra:
    """K^d with componentwise product (idempotent basis)."""
    if d < 1:
        raise AlgebraError("dimension must be positive")
    table = np.zeros((d, d, d))
    for i in range(d):
        table[i, i, i] = 1.0
    return Algebra(table, np.ones(d), field, name="diagonal", params={"d": d})


def truncated_poly_algebra(k: int, field=REAL) -> Algebra:
    """K[x]/(x^k) with monomial basis 1, x, ..., x^(k-1)."""
    if k < 1:
        raise AlgebraError("k must be positive")
    table = np.zeros((k, k, k))
    for i in range(k):
        for j in range(k - i):
            table[i, j, i + j] = 1.0
    unit = np.zeros(k)
    unit[0] = 1.0
    return Algebra(table, unit, field, name="truncated_poly", params={"k": k})


def upper_triangular_indices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i, n)]


def upper_triangular_algebra(n: int, field=REAL) -> Algebra:
    """Upper-triangular n x n matrices, basis E_ij (i <= j) in row-major order."""
    if n < 1:
        raise AlgebraError("matrix size must be positive")
    idx = upper_triangular_indices(n)
    pos = {ij: a for a, ij in enumerate(idx)}
    d = len(idx)
    table = np.zeros((d, d, d))
    for (i, j), a in pos.items():
        for (j2, l), b in pos.items():
            if j == j2:
                table[a, b, pos[(i, l)]] = 1.0
    unit = np.zeros(d)
    for i in range(n):
        unit[pos[(i, i)]] = 1.0
    return Algebra(table, unit, field, name="upper_triangular", params={"n": n})


def _parse_complex_array(data):
    arr = np.asarray(data, dtype=object)
    return np.asarray(data, dtype=np.complex128) if arr.dtype != object else np.asarray(
        [complex(*v) if isinstance(v, (list, tuple)) else complex(v) for v in arr.ravel()]
    ).reshape(arr.shape)


def make_algebra(spec: dict, *, allow_large=False) -> Algebra:
    """Build an algebra from its JSON-shaped description.

    ``{"type": "matrix", "n": 2}``, ``{"type": "diagonal", "d": 3}``,
    ``{"type": "truncated_poly", "k": 4}``, ``{"type": "upper_triangular", "n": 3}``
    or ``{"type": "structure_constants", "dim": d, "field": ..., "table": ..., "unit": ...}``.
    Builtins accept an optional ``"field"`` (default ``"real"``).
    """
    if not isinstance(spec, dict) or "type" not in spec:
        raise AlgebraError("algebra spec must be an object with a 'type' key")
    kind = spec["type"]
    fld = spec.get("field", REAL)
    if kind == "matrix":
        return matrix_algebra(int(spec["n"]), fld)
    if kind == "diagonal":
        return diagonal_algebra(int(spec["d"]), fld)
    if kind == "truncated_poly":
        return truncated_poly_algebra(int(spec["k"]), fld)
    if kind == "upper_triangular":
        return upper_triangular_algebra(int(spec["n"]), fld)
    if kind == "structure_constants":
        table = np.asarray(spec["table"]) if fld == REAL else _parse_complex_array(spec["table"])
        unit = np.asarray(spec["unit"]) if fld == REAL else _parse_complex_array(spec["unit"])
        dim = int(spec.get("dim", table.shape[0] if table.ndim else 0))
        if table.shape != (dim, dim, dim) or unit.shape != (dim,):
            raise AlgebraError(f"dimension mismatch: dim={dim}, table {table.shape}, unit {unit.shape}")
        return Algebra(table, unit, fld, allow_large=allow_large)
    raise AlgebraError(f"unknown algebra type {kind!r}")


# ---------------------------------------------------------------------------
# element operations


def mul(x: Element, y: Element) -> Element:
    x._same(y)
    return Element(x.algebra, x.algebra.mul_coeffs(x.coeffs, y.coeffs))


def mul_n(xs: Sequence[Element]) -> Element:
    """Ordered product x_1 x_2 ... x_n (left fold)."""
    xs = list(xs)
    if not xs:
        raise ValueError("mul_n needs at least one factor")
    out = xs[0]
    for x in xs[1:]:
        out = mul(out, x)
    return out


def power(x: Element, n: int) -> Element:
    if n < 0:
        raise ValueError("negative powers are not supported; use invert")
    out = x.algebra.one()
    for _ in range(n):
        out = mul(out, x)
    return out


def sym_mul(xs: Sequence[Element], cap: int = SYM_MUL_CAP) -> Element:
    """Symmetrised product: mean of ``mul_n`` over all orderings."""
    xs = list(xs)
    n = len(xs)
    if n == 0:
        raise ValueError("sym_mul needs at least one factor")
    if n > cap:
        raise ValueError(f"sym_mul arity {n} exceeds cap {cap}")
    a = xs[0].algebra
    for x in xs:
        xs[0]._same(x)
    acc = np.zeros(a.dim, dtype=a.dtype)
    for perm in itertools.permutations(range(n)):
        acc = acc + mul_n([xs[i] for i in perm]).coeffs
    return Element(a, acc / math.factorial(n))


def invert(x: Element, method: str = "solve", seminorm=None, max_terms: int = 100_000) -> Element:
    """Two-sided inverse.

    ``method="solve"`` solves ``L_x y = 1``.  ``method="neumann"`` sums
    ``sum_k (1 - x)^k`` and needs a submultiplicative ``seminorm`` with
    ``seminorm(1 - x) < 1``.
    """
    a = x.algebra
    if method == "solve":
        lx = x.lrr()
        cond = np.linalg.cond(lx)
        if not np.isfinite(cond) or cond > SINGULAR_COND:
            raise SingularElementError(f"element is not invertible (cond={cond:.3e})")
        y = Element(a, np.linalg.solve(lx, a.unit_coeffs))
        check = max(np.max(np.abs(mul(x, y).coeffs - a.unit_coeffs)),
                    np.max(np.abs(mul(y, x).coeffs - a.unit_coeffs)))
        if check > max(1e-8, 1e3 * cond * np.finfo(float).eps):
            raise SingularElementError(f"inverse check failed (defect {check:.3e})")
        return y
    if method == "neumann":
        if seminorm is None or seminorm.submultiplicative != "proved":
            raise ValueError("Neumann inversion needs a proved submultiplicative seminorm")
        h = a.one() - x
        rho = seminorm(h)
        if rho >= 1:
            raise SingularElementError(f"Neumann series not certified: q(1 - x) = {rho:.3g} >= 1")
        total = a.one()
        term = a.one()
        for k in range(1, max_terms):
            term = mul(term, h)
            total = total + term
            if rho ** (k + 1) / (1 - rho) <= 1e-17 * max(1.0, seminorm(total)):
                return total
        raise SingularElementError("Neumann series did not reach working precision")
    raise ValueError(f"unknown inversion method {method!r}")


def exp(x: Element) -> Element:
    """Exponential by scaling and squaring with a Taylor core, in the algebra itself."""
    a = x.algebra
    nu = float(np.linalg.norm(x.lrr(), 1))
    if nu == 0.0:
        return a.one()
    s = max(0, math.ceil(math.log2(nu / 0.5))) if nu > 0.5 else 0
    y = x / (2.0 ** s)
    nu_y = nu / 2.0 ** s
    total = a.one()
    term = a.one()
    k = 0
    # remainder after degree k is at most nu_y^(k+1)/(k+1)! * e^nu_y
    while nu_y ** (k + 1) / math.factorial(k + 1) * math.exp(nu_y) > 1e-17:
        k += 1
        term = mul(term, y) / k
        total = total + term
    for _ in range(s):
        total = mul(total, total)
    return total


def is_commutative(a: Algebra) -> bool:
    return a.is_commutative()


# ---------------------------------------------------------------------------
# complexification helpers


def complexify(a: Algebra) -> Algebra:
    return a.complexify()


def embed(x: Element) -> Element:
    """Real element -> the same element of the complexification."""
    if x.algebra.field != REAL:
        raise AlgebraError("embed expects an element of a real algebra")
    return Element(x.algebra.complexify(), x.coeffs.astype(np.complex128))


def _real_form(z: Element) -> Algebra:
    if z.algebra.real_form is None:
        raise AlgebraError("element is not in a complexified algebra")
    return z.algebra.real_form


def re_part(z: Element) -> Element:
    return Element(_real_form(z), np.real(z.coeffs).copy())


def im_part(z: Element) -> Element:
    return Element(_real_form(z), np.imag(z.coeffs).copy())


def check_same_algebra(elems: Iterable[Element]):
    elems = list(elems)
    for e in elems[1:]:
        elems[0]._same(e)
