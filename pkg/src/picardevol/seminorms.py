"""Computable seminorms, multilinear product norms and (q, M, r) certificates.

For seminorms ``p, q`` on an algebra the quantity

    ||mu_n||_{p,q} = sup { p(x_1 ... x_n) : q(x_i) <= 1 }

controls the Dyson series.  A :class:`StarCertificate` records a ``q`` and a
growth constant ``M`` with ``||mu_n||_{p,q} <= M**n``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .algebra import REAL, Algebra, Element
from .errors import AlgebraMismatchError, CertificationError, SeminormError

PROVED = "proved"
UNKNOWN = "unknown"
FALSIFIED = "falsified"

ORDS = {"one": 1, "inf": np.inf, "two": 2}

EXACT_DIM_CAP = 4
EXACT_ARITY_CAP = 4
DEFAULT_SAMPLES = 10_000
_VERTEX_DIM_CAP = 16


@dataclass(frozen=True, eq=False)
class Seminorm:
    """A seminorm on ``algebra``.

    ``form`` is one of ``weighted_coeff`` (``max_i w_i |x_i|``), ``lrr_opnorm``
    (operator norm of the left regular representation), ``matrix_opnorm``
    (operator norm of the matrix itself, for builtin matrix algebras) or
    ``complexified`` (``p(a) + p(b)`` on ``a + ib`` for a real ``base``).
    """

    algebra: Algebra
    form: str
    which: str | None = None
    weights: tuple | None = None
    base: "Seminorm | None" = None
    submultiplicative: str = UNKNOWN

    def __call__(self, x: Element) -> float:
        if not isinstance(x, Element):
            raise TypeError("seminorms are evaluated on Elements; use eval_coeffs for arrays")
        if x.algebra is not self.algebra:
            raise AlgebraMismatchError("seminorm and element live in different algebras")
        return float(self.eval_coeffs(x.coeffs))

    def eval_coeffs(self, x):
        """Vectorised evaluation on coefficient arrays of shape ``(..., dim)``."""
        x = np.asarray(x)
        if self.form == "weighted_coeff":
            return np.max(np.asarray(self.weights) * np.abs(x), axis=-1)
        if self.form == "lrr_opnorm":
            return np.linalg.norm(self.algebra.lrr_coeffs(x), ORDS[self.which], axis=(-2, -1))
        if self.form == "matrix_opnorm":
            return np.linalg.norm(_as_matrices(self.algebra, x), ORDS[self.which], axis=(-2, -1))
        if self.form == "complexified":
            return self.base.eval_coeffs(np.real(x)) + self.base.eval_coeffs(np.imag(x))
        raise SeminormError(f"unknown seminorm form {self.form!r}")

    def key(self) -> tuple:
        base = self.base.key() if self.base is not None else None
        return (id(self.algebra), self.form, self.which, self.weights, base)

    def same_as(self, other: "Seminorm") -> bool:
        return isinstance(other, Seminorm) and self.key() == other.key()

    def to_spec(self) -> dict:
        if self.form == "weighted_coeff":
            return {"form": "weighted_coeff", "weights": [float(w) for w in self.weights]}
        if self.form == "complexified":
            return {"form": "complexified", "base": self.base.to_spec()}
        return {"form": self.form, "which": self.which}


def _as_matrices(a: Algebra, x):
    n = a.params.get("n")
    if a.name == "matrix":
        return x.reshape(x.shape[:-1] + (n, n))
    if a.name == "upper_triangular":
        out = np.zeros(x.shape[:-1] + (n, n), dtype=x.dtype)
        rows, cols = np.triu_indices(n)
        out[..., rows, cols] = x
        return out
    raise SeminormError("matrix_opnorm needs a builtin matrix or upper-triangular algebra")


# ---------------------------------------------------------------------------
# constructors


def _is_idempotent_diagonal(a: Algebra) -> bool:
    d = a.dim
    ref = np.zeros((d, d, d))
    ref[np.arange(d), np.arange(d), np.arange(d)] = 1.0
    return bool(np.array_equal(a.table, ref))


def weighted_coeff(algebra: Algebra, weights) -> Seminorm:
    w = tuple(float(v) for v in np.broadcast_to(np.asarray(weights, dtype=float), (algebra.dim,)))
    if any(v < 0 or not math.isfinite(v) for v in w):
        raise SeminormError("weights must be finite and non-negative")
    # componentwise products: w_i|x_i y_i| <= (w_i|x_i|)(w_i|y_i|) once w_i >= 1
    if _is_idempotent_diagonal(algebra) and all(v >= 1.0 for v in w):
        flag = PROVED
    else:
        flag = UNKNOWN
    p = Seminorm(algebra, "weighted_coeff", weights=w, submultiplicative=flag)
    return _maybe_falsify(p)


def max_coeff(algebra: Algebra) -> Seminorm:
    return weighted_coeff(algebra, np.ones(algebra.dim))


def lrr_opnorm(algebra: Algebra, which: str = "one") -> Seminorm:
    if which not in ORDS:
        raise SeminormError(f"unknown operator norm {which!r}")
    # L_{xy} = L_x L_y and induced norms are submultiplicative
    return Seminorm(algebra, "lrr_opnorm", which=which, submultiplicative=PROVED)


def matrix_opnorm(algebra: Algebra, which: str = "two") -> Seminorm:
    if which not in ORDS:
        raise SeminormError(f"unknown operator norm {which!r}")
    if algebra.name not in ("matrix", "upper_triangular"):
        raise SeminormError("matrix_opnorm needs a builtin matrix or upper-triangular algebra")
    return Seminorm(algebra, "matrix_opnorm", which=which, submultiplicative=PROVED)


def complexify_seminorm(p: Seminorm) -> Seminorm:
    """Surrogate ``p~(a + ib) = p(a) + p(b)`` for the complexified seminorm.

    The exact complexified seminorm ``p_C`` (an infimum over decompositions)
    satisfies ``max(p(a), p(b)) <= p_C(a + ib) <= p(a) + p(b)``, hence
    ``p_C <= p~ <= 2 p_C``.  Certificates built on ``p~`` double ``M``.
    """
    if p.algebra.field != REAL:
        raise SeminormError("complexify_seminorm expects a seminorm on a real algebra")
    return Seminorm(p.algebra.complexify(), "complexified", base=p, submultiplicative=UNKNOWN)


def make_seminorm(algebra: Algebra, spec: dict) -> Seminorm:
    """Parse ``{"form": "weighted_coeff", "weights": [...]}`` and friends."""
    if not isinstance(spec, dict) or "form" not in spec:
        raise SeminormError("seminorm spec must be an object with a 'form' key")
    form = spec["form"]
    if form == "weighted_coeff":
        if "weights" not in spec:
            raise SeminormError("weighted_coeff needs 'weights'")
        if len(spec["weights"]) != algebra.dim:
            raise SeminormError(f"expected {algebra.dim} weights, got {len(spec['weights'])}")
        return weighted_coeff(algebra, spec["weights"])
    if form == "max_coeff":
        return max_coeff(algebra)
    if form == "lrr_opnorm":
        return lrr_opnorm(algebra, spec.get("which", "one"))
    if form == "matrix_opnorm":
        return matrix_opnorm(algebra, spec.get("which", "two"))
    raise SeminormError(f"unknown seminorm form {form!r}")


def eval_seminorm(p: Seminorm, x: Element) -> float:
    return p(x)


def falsify_submultiplicativity(p: Seminorm, samples: int = 2000, seed: int = 0) -> bool:
    """Search for a pair with ``p(xy) > p(x) p(y)``; True when one is found."""
    a = p.algebra
    rng = np.random.default_rng(seed)
    basis = np.eye(a.dim, dtype=a.dtype)
    ones = np.ones((1, a.dim), dtype=a.dtype)
    pool = np.concatenate([_gauss(rng, a, (samples,)), basis, ones])
    x = np.concatenate([pool, np.repeat(basis, a.dim, 0), ones])
    y = np.concatenate([np.roll(pool, 1, axis=0), np.tile(basis, (a.dim, 1)), ones])
    lhs = p.eval_coeffs(a.mul_coeffs(x, y))
    rhs = p.eval_coeffs(x) * p.eval_coeffs(y)
    return bool(np.any(lhs > rhs * (1 + 1e-12) + 1e-300))


def _maybe_falsify(p: Seminorm) -> Seminorm:
    if p.submultiplicative == UNKNOWN and falsify_submultiplicativity(p):
        return Seminorm(p.algebra, p.form, p.which, p.weights, p.base, FALSIFIED)
    return p


def _gauss(rng, a: Algebra, shape):
    g = rng.standard_normal(shape + (a.dim,))
    if a.field != REAL:
        g = g + 1j * rng.standard_normal(shape + (a.dim,))
    return g


# ---------------------------------------------------------------------------
# domination constants


def _box_vertices(q: Seminorm):
    w = np.asarray(q.weights)
    signs = np.array(list(itertools.product((-1.0, 1.0), repeat=q.algebra.dim)))
    return signs / w


def _is_box(q: Seminorm) -> bool:
    return (q.form == "weighted_coeff" and q.algebra.field == REAL
            and all(w > 0 for w in q.weights))


def coeff_bound(q: Seminorm) -> float | None:
    """``K`` with ``max_i |x_i| <= K q(x)``, or None when q has a kernel direction."""
    if q.form == "weighted_coeff":
        w = min(q.weights)
        return None if w <= 0 else 1.0 / w
    if q.form == "lrr_opnorm":
        # x = L_x 1, so |x_i| <= ||x|| <= ||L_x|| ||1||
        return float(np.linalg.norm(q.algebra.unit_coeffs, ORDS[q.which]))
    if q.form == "matrix_opnorm":
        return 1.0
    if q.form == "complexified":
        return coeff_bound(q.base)
    return None


def domination_constant(p: Seminorm, q: Seminorm) -> float | None:
    """A constant ``C`` with ``p <= C q``, or None if none can be verified."""
    if p.algebra is not q.algebra:
        raise AlgebraMismatchError("seminorms live in different algebras")
    if p.same_as(q):
        return 1.0
    if p.form == "complexified" and q.form == "complexified":
        return domination_constant(p.base, q.base)
    if p.form == "weighted_coeff" and q.form == "weighted_coeff":
        ratios = []
        for wp, wq in zip(p.weights, q.weights):
            if wp == 0:
                continue
            if wq == 0:
                return None
            ratios.append(wp / wq)
        return max(ratios, default=0.0)
    if {p.form, q.form} == {"lrr_opnorm", "matrix_opnorm"} and p.which == q.which \
            and p.algebra.name == "matrix":
        # on M_n, L_X = X (x) I, which has the same induced norm as X
        return 1.0
    if _is_box(q) and q.algebra.dim <= _VERTEX_DIM_CAP:
        # p is convex, so its max over the box is attained at a vertex
        return float(np.max(p.eval_coeffs(_box_vertices(q))))
    k = coeff_bound(q)
    if k is None:
        return None
    if p.form == "weighted_coeff":
        return max(p.weights) * k
    basis = np.eye(p.algebra.dim, dtype=p.algebra.dtype)
    return k * float(np.sum(p.eval_coeffs(basis)))


# ---------------------------------------------------------------------------
# multilinear norm estimates


@dataclass(frozen=True)
class MuNormEstimate:
    n: int
    lower: float
    upper: float
    method: str


def _products(a: Algebra, factors):
    """Fold ``factors[..., k, :]`` left to right."""
    out = factors[..., 0, :]
    for k in range(1, factors.shape[-2]):
        out = a.mul_coeffs(out, factors[..., k, :])
    return out


def exact_vertex_mu_norm(p: Seminorm, q: Seminorm, n: int,
                         dim_cap: int = EXACT_DIM_CAP, arity_cap: int = EXACT_ARITY_CAP) -> float:
    """Max of ``p(x_1 ... x_n)`` over vertex tuples of the box ``q <= 1``.

    Exact: the objective is convex in each slot separately, so the supremum
    over a product of polytopes is attained at a tuple of vertices.
    """
    a = q.algebra
    if not _is_box(q):
        raise SeminormError("exact-vertex mode needs a real weighted_coeff q with positive weights")
    if a.dim > dim_cap or n > arity_cap:
        raise SeminormError(f"exact-vertex beyond caps (dim {a.dim} > {dim_cap} or n {n} > {arity_cap})")
    if n < 1:
        raise SeminormError("arity must be positive")
    verts = _box_vertices(q)
    prods = verts
    for _ in range(1, n):
        prods = a.mul_coeffs(prods[:, None, :], verts[None, :, :]).reshape(-1, a.dim)
        prods = np.unique(prods, axis=0)
    return float(np.max(p.eval_coeffs(prods)))


def sample_sphere(q: Seminorm, shape, rng):
    """Gaussian draws normalised onto the sphere ``q(x) = 1``; draws in the kernel of q become NaN."""
    g = _gauss(rng, q.algebra, tuple(shape))
    s = q.eval_coeffs(g)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = g / s[..., None]
    out[s == 0] = np.nan
    return out


def sampled_mu_norm(p: Seminorm, q: Seminorm, n: int, samples: int = DEFAULT_SAMPLES,
                    seed: int = 0, rng=None) -> float:
    """Lower bound for ``||mu_n||_{p,q}`` from random tuples on the q-unit sphere.

    The tuple ``(1/q(1), ..., 1/q(1))`` is always included.
    """
    a = q.algebra
    rng = np.random.default_rng(seed) if rng is None else rng
    xs = sample_sphere(q, (samples, n), rng)
    q1 = float(q.eval_coeffs(a.unit_coeffs))
    vals = p.eval_coeffs(_products(a, xs))
    best = float(np.nanmax(vals)) if np.any(np.isfinite(vals)) else 0.0
    if q1 > 0:
        unit_tuple = np.broadcast_to(a.unit_coeffs / q1, (n, a.dim))
        best = max(best, float(p.eval_coeffs(_products(a, unit_tuple))))
    return best


def tensor_bound_constants(p: Seminorm, q: Seminorm):
    """``(a, b)`` with ``||mu_n||_{p,q} <= a * b**n`` for every n, via ``s = lrr_opnorm('one')``."""
    s = lrr_opnorm(q.algebra, "one")
    a_ = domination_constant(p, s)
    b_ = domination_constant(s, q)
    if a_ is None or b_ is None:
        return None
    return a_, b_


def mu_norm(p: Seminorm, q: Seminorm, n: int, mode: str = "sampled", *,
            samples: int = DEFAULT_SAMPLES, seed: int = 0, rng=None) -> MuNormEstimate:
    """Estimate ``||mu_n||_{p,q}``.

    ``exact-vertex`` gives ``lower == upper``; ``sampled`` gives a lower bound
    only; ``bound`` gives a rigorous upper bound (submultiplicative q when
    available, otherwise a tensor bound through the LRR 1-norm).
    """
    if p.algebra is not q.algebra:
        raise AlgebraMismatchError("seminorms live in different algebras")
    if n < 1:
        raise SeminormError("arity must be positive")
    if mode == "exact-vertex":
        v = exact_vertex_mu_norm(p, q, n)
        return MuNormEstimate(n, v, v, "exact-vertex")
    if mode == "sampled":
        v = sampled_mu_norm(p, q, n, samples=samples, seed=seed, rng=rng)
        return MuNormEstimate(n, v, math.inf, "sampled")
    if mode == "bound":
        c = domination_constant(p, q)
        if q.submultiplicative == PROVED and c is not None:
            return MuNormEstimate(n, 0.0, c, "submultiplicative-bound")
        ab = tensor_bound_constants(p, q)
        if ab is None:
            raise SeminormError("p <= C q could not be verified; no rigorous bound available")
        return MuNormEstimate(n, 0.0, ab[0] * ab[1] ** n, "tensor-bound")
    raise SeminormError(f"unknown mu_norm mode {mode!r}")


# ---------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class StarCertificate:
    """``||mu_n||_{p,q} <= M**n`` for ``n <= validated_up_to`` (None: every n).

    ``tail_M`` extends a finitely validated certificate to all n through the
    tensor bound; ``uniform_M`` is the constant safe to use for whole series.
    """

    p: Seminorm
    q: Seminorm
    M: float
    r: float
    validated_up_to: int | None
    method: str
    tail_M: float | None = None

    @property
    def uniform_M(self) -> float | None:
        if self.validated_up_to is None:
            return self.M
        if self.tail_M is None:
            return None
        return max(self.M, self.tail_M)

    def to_json(self) -> dict:
        return {
            "p": self.p.to_spec(),
            "q": self.q.to_spec(),
            "M": float(self.M),
            "r": float(self.r),
            "validated_up_to": self.validated_up_to,
            "method": self.method,
            "tail_M": None if self.tail_M is None else float(self.tail_M),
            "uniform_M": None if self.uniform_M is None else float(self.uniform_M),
        }


def choose_r(M: float) -> float:
    return 0.5 if M <= 1.0 else 1.0 / (2.0 * M)


def _exact_eligible(q: Seminorm, n: int) -> bool:
    return _is_box(q) and q.algebra.dim <= EXACT_DIM_CAP and n <= EXACT_ARITY_CAP


def certify_star(p: Seminorm, candidates, max_n: int = 4) -> StarCertificate:
    """First candidate ``q`` that certifies, with the smallest supported ``M``.

    A proved-submultiplicative ``q`` dominating ``p`` gives ``M = max(1, C)``
    for every arity.  Otherwise rigorous upper bounds (exact vertex
    enumeration within caps, tensor bounds beyond) are collected for
    ``n <= max_n``.
    """
    if max_n < 2:
        raise SeminormError("max_n must be at least 2")
    candidates = list(candidates)
    if not candidates:
        raise CertificationError("no candidate seminorms given")
    reasons = []
    for q in candidates:
        if q.algebra is not p.algebra:
            raise AlgebraMismatchError("candidate q lives in another algebra")
        c = domination_constant(p, q)
        if q.submultiplicative == PROVED and c is not None:
            m = max(1.0, c)
            return StarCertificate(p, q, m, choose_r(m), None, "submultiplicative")
        ab = tensor_bound_constants(p, q)
        uppers = []
        methods = set()
        for n in range(1, max_n + 1):
            options = []
            if _exact_eligible(q, n):
                options.append(exact_vertex_mu_norm(p, q, n))
                methods.add("exact-vertex")
            if ab is not None:
                options.append(ab[0] * ab[1] ** n)
                methods.add("tensor-bound")
            if not options:
                break
            uppers.append(min(options))
        if len(uppers) < max_n:
            reasons.append(f"{q.to_spec()}: no upper bound for n={len(uppers) + 1}")
            continue
        m = max(u ** (1.0 / n) for n, u in enumerate(uppers, start=1))
        tail = None
        if ab is not None:
            tail = ab[1] * max(ab[0], 1.0) ** (1.0 / (max_n + 1))
        return StarCertificate(p, q, m, choose_r(m), max_n, "+".join(sorted(methods)), tail)
    raise CertificationError("no candidate certifies: " + "; ".join(reasons))


def complexify_certificate(cert: StarCertificate) -> StarCertificate:
    """Certificate for the surrogate complexified seminorms, with ``M`` doubled."""
    p = complexify_seminorm(cert.p)
    q = complexify_seminorm(cert.q)
    m = 2.0 * cert.M
    tail = None if cert.tail_M is None else 2.0 * cert.tail_M
    return StarCertificate(p, q, m, choose_r(m), cert.validated_up_to,
                           cert.method + "+complexified", tail)


def polarization_bound(p: Seminorm, q: Seminorm, n: int, samples: int = DEFAULT_SAMPLES,
                       seed: int = 0) -> float:
    """``n**n / n! * (sampled sup of p(x**n) over q(x) = 1)``.  Diagnostic only."""
    if n < 1 or n > 8:
        raise SeminormError("polarization_bound supports 1 <= n <= 8")
    a = q.algebra
    rng = np.random.default_rng(seed)
    xs = sample_sphere(q, (samples,), rng)
    q1 = float(q.eval_coeffs(a.unit_coeffs))
    if q1 > 0:
        xs = np.concatenate([xs, (a.unit_coeffs / q1)[None]], axis=0)
    pw = xs
    for _ in range(1, n):
        pw = a.mul_coeffs(pw, xs)
    vals = p.eval_coeffs(pw)
    pi_n = float(np.nanmax(vals))
    return n ** n / math.factorial(n) * pi_n
