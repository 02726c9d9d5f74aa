"""Reference solutions built on the left regular representation.

Nothing here calls into :mod:`picardevol.picard` or the series code in
:mod:`picardevol.algebra`; products and exponentials go through dense
matrices ``L_x`` and :func:`scipy.linalg.expm`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .algebra import Element
from .curves import PolyCurve
from .errors import AlgebraError


@dataclass(frozen=True)
class OracleResult:
    value: object
    steps: int
    method: str


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    """``mats[0] @ mats[1] @ ... @ mats[-1]`` by pairwise reduction."""
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            eye = np.eye(mats.shape[-1], dtype=mats.dtype)[None]
            mats = np.concatenate([mats, eye])
        mats = mats[0::2] @ mats[1::2]
    return mats[0]


def step_product(gamma, steps: int, variant: str = "euler") -> OracleResult:
    """Ordered midpoint product ``prod_i F_i`` with the earliest factor leftmost.

    ``F_i = 1 + dt gamma(t_i)`` for ``variant="euler"`` and
    ``exp(dt gamma(t_i))`` for ``variant="exp"``, ``t_i = (i - 1/2) dt``.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    a = gamma.algebra
    dt = 1.0 / steps
    ts = (np.arange(steps) + 0.5) * dt
    lrr = a.lrr_coeffs(gamma.values(ts)) * dt
    if variant == "euler":
        factors = np.eye(a.dim, dtype=lrr.dtype)[None] + lrr
    elif variant == "exp":
        factors = scipy.linalg.expm(lrr)
    else:
        raise ValueError(f"unknown step-product variant {variant!r}")
    # L_{f_1 ... f_K} = L_{f_1} ... L_{f_K}, and z = L_z 1
    value = _ordered_product(factors) @ a.unit_coeffs
    return OracleResult(Element(a, value), steps, f"step-product-{variant}")


def expm_oracle(x: Element) -> Element:
    """``exp(x) = expm(L_x) 1`` (Pade scaling and squaring on the LRR matrix)."""
    a = x.algebra
    return Element(a, scipy.linalg.expm(x.lrr()) @ a.unit_coeffs)


def commutative_closed_form(gamma: PolyCurve) -> OracleResult:
    """``t -> exp(int_0^t gamma)``, valid only in commutative algebras."""
    a = gamma.algebra
    if not a.is_commutative():
        raise AlgebraError("closed form needs a commutative algebra")
    anti = gamma.antiderivative()

    def f(ts):
        lrr = a.lrr_coeffs(anti.values(ts))
        return scipy.linalg.expm(lrr) @ a.unit_coeffs

    curve = PolyCurve.interpolate_adaptive(a, f, gamma.breakpoints, start=32)
    return OracleResult(curve, 0, "commutative-closed-form")


def symbolic_sigma_constant(c: Element, n: int, t: float) -> Element:
    """``t**n c**n / n!``: the n-th Dyson term of the constant curve ``c``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    a = c.algebra
    cn = np.linalg.matrix_power(c.lrr(), n) @ a.unit_coeffs
    return Element(a, cn * t ** n / math.factorial(n))


ORACLES = ("euler", "exp", "expm", "commutative")
