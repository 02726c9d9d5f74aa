"""Picard iteration for ``eta' = eta * gamma``, ``eta(0) = 1``.

The iterates ``eta_n(t) = 1 + int_0^t eta_{n-1}(s) gamma(s) ds`` are partial
sums of the Dyson series ``sum_n sigma_n(gamma)`` whose n-th term is the
ordered n-fold integral of ``gamma(t_1) ... gamma(t_n)``.  With a certificate
``||mu_n||_{p,q} <= M**n`` and ``R = sup_t q(gamma(t))`` each term obeys

    ||sigma_n(gamma)||_{C^1, p} <= M**n R**n / (n - 1)!

so the truncation depth is fixed before iterating.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .algebra import Element
from .curves import PolyCurve, SampledCurve, curve_norm
from .errors import CertificationError, CurveError, DepthCapError, NumericalBreakdownError
from .seminorms import Seminorm, StarCertificate, complexify_certificate, complexify_seminorm, lrr_opnorm

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEPTH_CAP = 60
DEGREE_CAP = 16
DEFAULT_GRID = 256
MIN_RCOND = 1e-13


@dataclass(frozen=True)
class PicardState:
    """Iterates ``eta_0 = 1, ..., eta_N`` for one curve.

    ``truncation[n]`` bounds (in ``measure``) the Chebyshev modes dropped
    from the integrand of step ``n``; it is zero unless the degree cap bites.
    """

    gamma: PolyCurve | SampledCurve
    iterates: tuple
    truncation: tuple = ()
    degree_cap: int | None = DEGREE_CAP
    measure: Seminorm | None = None

    @property
    def depth(self) -> int:
        return len(self.iterates) - 1


def _unit_curve(gamma):
    one = gamma.algebra.one()
    if isinstance(gamma, PolyCurve):
        return PolyCurve.constant(one, gamma.breakpoints)
    return SampledCurve(gamma.algebra, np.broadcast_to(one.coeffs, gamma.samples.shape),
                        smoothness=gamma.smoothness)


def _zero_like(gamma):
    return gamma * 0.0


def initial_state(gamma, degree_cap: int | None = DEGREE_CAP, measure: Seminorm | None = None) -> PicardState:
    if measure is None:
        measure = lrr_opnorm(gamma.algebra, "one")
    return PicardState(gamma, (_unit_curve(gamma),), (), degree_cap, measure)


def _integrand(f, gamma, cap, measure):
    prod = f.product(gamma)
    if isinstance(prod, PolyCurve) and cap is not None:
        return prod.truncate(cap, measure)
    return prod, 0.0


def picard_step(state: PicardState) -> PicardState:
    """Append ``eta_{N+1} = 1 + int_0^t eta_N gamma``."""
    eta, gamma = state.iterates[-1], state.gamma
    if type(eta) is not type(gamma):
        raise CurveError("representation mismatch between gamma and the iterates")
    integrand, err = _integrand(eta, gamma, state.degree_cap, state.measure)
    nxt = integrand.antiderivative().add_constant(gamma.algebra.one())
    return replace(state, iterates=state.iterates + (nxt,), truncation=state.truncation + (err,))


def picard_iterates(gamma, n: int, **kw) -> PicardState:
    state = initial_state(gamma, **kw)
    for _ in range(n):
        state = picard_step(state)
    return state


def dyson_term(gamma, n: int, degree_cap: int | None = None):
    """``sigma_n(gamma) = eta_n - eta_{n-1}`` via ``sigma_n = int_0^t sigma_{n-1} gamma``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    sigma = _unit_curve(gamma)
    for _ in range(n):
        sigma, _ = _integrand(sigma, gamma, degree_cap, None)
        sigma = sigma.antiderivative()
    return sigma


def tau(gammas, degree_cap: int | None = None):
    """Ordered iterated integral ``int_{0<t_1<...<t_n<t} gamma_1(t_1) ... gamma_n(t_n)``."""
    gammas = list(gammas)
    if not gammas:
        raise ValueError("tau needs at least one curve")
    f = gammas[0].antiderivative()
    for g in gammas[1:]:
        f, _ = _integrand(f, g, degree_cap, None)
        f = f.antiderivative()
    return f


# ---------------------------------------------------------------------------
# certified tails


def _growth(cert) -> float:
    if isinstance(cert, StarCertificate):
        m = cert.uniform_M
        if m is None:
            raise CertificationError("certificate is only validated for finitely many arities")
        return float(m)
    m = float(cert)
    if m < 0:
        raise ValueError("growth constant must be non-negative")
    return m


def _log_term(x: float, k: int, fact: int) -> float:
    """log(x**k / fact!) for x > 0."""
    return k * math.log(x) - math.lgamma(fact + 1)


def remainder_bound(cert, R: float, N: int) -> float:
    """Bound for ``sum_{n > N} ||sigma_n||_{C^1,p}``: ``(M R)^(N+1) / N! * e^(M R)``."""
    if R < 0 or N < 0:
        raise ValueError("R and N must be non-negative")
    x = _growth(cert) * R
    if x == 0.0:
        return 0.0
    return math.exp(_log_term(x, N + 1, N) + x)


def tail_sum_bound(cert, R: float, N: int, terms: int = 40) -> float:
    """Tighter tail: ``terms`` explicit summands then the closed-form remainder."""
    if R < 0 or N < 0:
        raise ValueError("R and N must be non-negative")
    x = _growth(cert) * R
    if x == 0.0:
        return 0.0
    total = math.fsum(math.exp(_log_term(x, n, n - 1)) for n in range(N + 1, N + terms + 1))
    total += math.exp(_log_term(x, N + terms + 1, N + terms) + x)
    # both are upper bounds; the explicit sum can lose to rounding when x is large
    return min(total, remainder_bound(cert, R, N))


def gateaux_tail_bound(cert, R: float, D: float, N: int) -> float:
    """Bound for ``sum_{n > N} n M^n R^(n-1) D / (n-1)!`` (derivative series tail)."""
    if R < 0 or D < 0 or N < 1:
        raise ValueError("need R, D >= 0 and N >= 1")
    m = _growth(cert)
    x = m * R
    if m * D == 0.0:
        return 0.0
    if x == 0.0:
        return 0.0
    # n / (n-1)! = 1/(n-2)! + 1/(n-1)!  and  sum_{m >= k} x^m/m! <= x^k/k! e^x
    return m * D * math.exp(x) * (math.exp(_log_term(x, N - 1, N - 1)) + math.exp(_log_term(x, N, N)))


def choose_depth(cert, R: float, tol: float, depth_cap: int = DEPTH_CAP) -> int:
    """Smallest ``N`` with ``remainder_bound(cert, R, N) <= tol``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    for n in range(depth_cap + 1):
        if remainder_bound(cert, R, n) <= tol:
            return n
    raise DepthCapError(f"tol {tol:g} unreachable within depth cap {depth_cap} (M R = {_growth(cert) * R:.4g})")


# ---------------------------------------------------------------------------
# evolution


@dataclass
class EvolutionResult:
    eta: PolyCurve | SampledCurve
    depth: int
    M: float
    q: Seminorm
    R: float
    tail_bound: float
    residual: float
    slack: float
    invertibility_witness: float
    certified: bool
    p: Seminorm
    tol: float
    grid: np.ndarray
    state: PicardState | None = field(default=None, repr=False)
    imag_residue: float | None = None

    def __call__(self, t) -> Element:
        return self.eta(t)

    def trajectory(self, ts=None):
        ts = self.grid if ts is None else np.asarray(ts, dtype=float)
        return ts, self.eta.values(ts)

    def certificate_json(self) -> dict:
        out = {
            "depth": int(self.depth),
            "M": float(self.M),
            "R": float(self.R),
            "tail_bound": float(self.tail_bound),
            "residual": float(self.residual),
            "slack": float(self.slack),
            "certified": bool(self.certified),
            "tol": float(self.tol),
            "q": self.q.to_spec(),
            "invertibility_witness": float(self.invertibility_witness),
        }
        if self.imag_residue is not None:
            out["imag_residue"] = float(self.imag_residue)
        return out


def _check_cert(p: Seminorm, cert: StarCertificate | None):
    if cert is None:
        raise CertificationError("certificate missing")
    if not cert.p.same_as(p):
        raise CertificationError("certificate was issued for a different seminorm p")
    if cert.uniform_M is None:
        raise CertificationError("certificate does not bound every arity; cannot bound the series tail")


def _curve_bound(gamma, q: Seminorm) -> float:
    if isinstance(gamma, PolyCurve):
        return curve_norm(gamma, 0, q, certified=True)
    return curve_norm(gamma, 0, q)


def invertibility_witness(algebra, values) -> float:
    """Smallest reciprocal condition number of ``L_{eta(t)}`` over the given values."""
    lrr = algebra.lrr_coeffs(values)
    with np.errstate(divide="ignore"):
        rc = 1.0 / np.linalg.cond(lrr)
    rc = np.where(np.isfinite(rc), rc, 0.0)
    return float(np.min(rc))


def evolve(gamma, p: Seminorm, cert: StarCertificate | None, tol: float = DEFAULT_TOL, *,
           grid: int = DEFAULT_GRID, depth_cap: int = DEPTH_CAP, degree_cap: int | None = DEGREE_CAP,
           check_grid: int | None = None) -> EvolutionResult:
    """Evolution of ``gamma`` truncated at the certified depth for ``tol``.

    Raises :class:`DepthCapError` when ``tol`` needs more than ``depth_cap``
    steps and :class:`NumericalBreakdownError` when the ODE residual or the
    invertibility check fails.
    """
    _check_cert(p, cert)
    if p.algebra is not gamma.algebra:
        raise CertificationError("seminorm and curve live in different algebras")
    q = cert.q
    m = _growth(cert)
    R = _curve_bound(gamma, q)
    n = choose_depth(cert, R, tol, depth_cap)
    state = picard_iterates(gamma, n, degree_cap=degree_cap, measure=p)
    eta = state.iterates[-1]
    certified = isinstance(gamma, PolyCurve)

    ts = np.linspace(0.0, 1.0, grid)
    check_ts = np.linspace(0.0, 1.0, check_grid or 4 * grid + 1)
    eta_vals = eta.values(check_ts)
    d_eta = eta.derivative().values(check_ts)
    drift = gamma.algebra.mul_coeffs(eta_vals, gamma.values(check_ts))
    residual = float(np.max(p.eval_coeffs(d_eta - drift)))
    scale = float(np.max(p.eval_coeffs(eta_vals)))
    eps = np.finfo(float).eps
    slack = math.exp(m * R) * math.fsum(state.truncation) + 1e3 * eps * (1.0 + scale) * (1.0 + R) * gamma.algebra.dim
    if not certified:
        # quadrature defect of the last step stands in for a guarantee
        slack += residual
    elif residual > tol + slack:
        raise NumericalBreakdownError(f"ODE residual {residual:.3e} exceeds tol + slack {tol + slack:.3e}")

    witness = invertibility_witness(gamma.algebra, eta.values(ts))
    if witness < MIN_RCOND:
        raise NumericalBreakdownError(f"eta(t) numerically singular on the grid (rcond {witness:.3e})")
    log.debug("evolve: depth=%d R=%.4g residual=%.3e slack=%.3e", n, R, residual, slack)
    return EvolutionResult(eta=eta, depth=n, M=m, q=q, R=R, tail_bound=tail_sum_bound(cert, R, n),
                           residual=residual, slack=slack, invertibility_witness=witness,
                           certified=certified, p=p, tol=tol, grid=ts, state=state)


def evol(gamma, p: Seminorm, cert: StarCertificate | None, tol: float = DEFAULT_TOL, **kw) -> Element:
    """``Evol(gamma)(1)``."""
    return evolve(gamma, p, cert, tol, **kw).eta(1.0)


def _batched_inverse(algebra, values):
    lrr = algebra.lrr_coeffs(values)
    rc = 1.0 / np.linalg.cond(lrr)
    if np.any(~np.isfinite(rc)) or np.min(rc) < MIN_RCOND:
        raise NumericalBreakdownError("non-invertible value on the inversion grid")
    rhs = np.broadcast_to(algebra.unit_coeffs, values.shape)[..., None]
    return np.linalg.solve(lrr, rhs)[..., 0]


def inverse_evolution(result: EvolutionResult, gamma) -> PolyCurve:
    """``zeta(t) = eta(t)^{-1}`` as a Chebyshev interpolant on the cells of ``gamma``.

    ``zeta`` solves ``zeta' = -gamma zeta``, ``zeta(0) = 1``.
    """
    eta = result.eta
    if gamma.algebra is not eta.algebra:
        raise CurveError("gamma and the evolution live in different algebras")
    bp = gamma.breakpoints if isinstance(gamma, PolyCurve) else (0.0, 1.0)
    algebra = eta.algebra
    zeta = PolyCurve.interpolate_adaptive(algebra, lambda ts: _batched_inverse(algebra, eta.values(ts)), bp)
    _batched_inverse(algebra, eta.values(result.grid))
    return zeta


def gateaux(gamma, delta, p: Seminorm, cert: StarCertificate | None, tol: float = DEFAULT_TOL, *,
            depth_cap: int = DEPTH_CAP, degree_cap: int | None = DEGREE_CAP):
    """First Gateaux derivative ``d Phi(gamma; delta)`` of ``gamma -> eta_gamma``.

    Equals ``sum_n sum_i tau_n(gamma, .., delta (slot i), .., gamma)``,
    accumulated by differentiating the Picard recursion:
    ``d eta_n = int_0^t (d eta_{n-1} gamma + eta_{n-1} delta)``.
    """
    _check_cert(p, cert)
    if type(gamma) is not type(delta):
        raise CurveError("gamma and delta must share a representation")
    q = cert.q
    R = _curve_bound(gamma, q)
    D = _curve_bound(delta, q)
    n = None
    for k in range(1, depth_cap + 1):
        if gateaux_tail_bound(cert, R, D, k) <= tol:
            n = k
            break
    if n is None:
        raise DepthCapError(f"Gateaux tail above {tol:g} at depth cap {depth_cap}")
    eta = _unit_curve(gamma)
    d_eta = _zero_like(eta)
    for _ in range(n):
        a, _ = _integrand(d_eta, gamma, degree_cap, p)
        b, _ = _integrand(eta, delta, degree_cap, p)
        d_eta = (a + b).antiderivative()
        c, _ = _integrand(eta, gamma, degree_cap, p)
        eta = c.antiderivative().add_constant(gamma.algebra.one())
    return d_eta


def evolve_real_via_complexification(gamma, p: Seminorm, cert: StarCertificate | None,
                                     tol: float = DEFAULT_TOL, **kw) -> EvolutionResult:
    """Evolve a real curve inside ``A_C`` and return the real part.

    Uses the surrogate seminorm ``p(a) + p(b)`` with ``M`` doubled; the
    imaginary part must vanish and its size is reported as ``imag_residue``.
    """
    _check_cert(p, cert)
    gc = gamma.embed()
    res = evolve(gc, complexify_seminorm(p), complexify_certificate(cert), tol, **kw)
    imag = res.eta.imag_part()
    ts = np.linspace(0.0, 1.0, 4 * len(res.grid) + 1)
    residue = float(np.max(np.abs(imag.values(ts))))
    if residue > tol:
        raise NumericalBreakdownError(f"imaginary residue {residue:.3e} exceeds tol {tol:g}")
    return replace(res, eta=res.eta.real_part(), p=p, imag_residue=residue, state=None)
