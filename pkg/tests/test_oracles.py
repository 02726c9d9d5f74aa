import math

import numpy as np
import pytest

from picardevol import PolyCurve, diagonal_algebra, matrix_algebra, matrix_opnorm, truncated_poly_algebra
from picardevol.errors import AlgebraError
from picardevol.oracles import commutative_closed_form, expm_oracle, step_product, symbolic_sigma_constant

from conftest import random_poly_curve

M2 = matrix_algebra(2)
P = matrix_opnorm(M2)


@pytest.mark.parametrize("variant", ["euler", "exp"])
def test_step_product_zero_curve(variant):
    res = step_product(PolyCurve.constant(M2.zero()), 17, variant)
    assert res.value.allclose(M2.one())
    assert res.steps == 17


def test_exp_variant_exact_for_constants():
    c = M2.element([0.3, -1.2, 0.8, 0.4])
    for steps in (1, 7, 64):
        assert step_product(PolyCurve.constant(c), steps, "exp").value.allclose(expm_oracle(c), atol=1e-13)


def test_euler_richardson_ratio():
    rng = np.random.default_rng(11)
    gamma = random_poly_curve(M2, rng, 3, scale=0.5)
    ref = step_product(gamma, 2 ** 16, "exp").value
    e1 = P(step_product(gamma, 512, "euler").value - ref)
    e2 = P(step_product(gamma, 1024, "euler").value - ref)
    assert e1 / e2 == pytest.approx(2.0, rel=0.1)


def test_step_product_rejects_bad_input():
    gamma = PolyCurve.constant(M2.one())
    with pytest.raises(ValueError):
        step_product(gamma, 0)
    with pytest.raises(ValueError):
        step_product(gamma, 4, "rk4")


def test_expm_examples():
    assert expm_oracle(M2.zero()).allclose(M2.one())
    d = diagonal_algebra(2)
    assert expm_oracle(d.element([1.0, 2.0])).allclose(d.element([math.e, math.e ** 2]), atol=1e-13)
    tp = truncated_poly_algebra(2)
    assert expm_oracle(tp.element([0.0, 3.0])).allclose(tp.element([1.0, 3.0]), atol=1e-14)


def test_commutative_closed_form_examples():
    d = diagonal_algebra(2)
    assert commutative_closed_form(PolyCurve.constant(d.zero())).value(0.7).allclose(d.one())
    gamma = PolyCurve.polynomial(d, [[1.0, 0.0], [0.0, 2.0]])
    assert commutative_closed_form(gamma).value(1.0).allclose(d.element([math.e, math.e]), atol=1e-13)
    scalar = diagonal_algebra(1)
    t_curve = PolyCurve.polynomial(scalar, [[0.0], [1.0]])
    assert commutative_closed_form(t_curve).value(1.0).allclose(scalar.element([math.exp(0.5)]), atol=1e-14)
    with pytest.raises(AlgebraError):
        commutative_closed_form(PolyCurve.constant(M2.one()))


def test_symbolic_sigma_examples():
    c = M2.element([0.2, 1.0, -0.5, 0.3])
    assert symbolic_sigma_constant(c, 0, 0.4).allclose(M2.one())
    assert symbolic_sigma_constant(c, 1, 1.0).allclose(c)
    scalar = diagonal_algebra(1)
    assert symbolic_sigma_constant(scalar.element([2.0]), 3, 0.5).allclose(scalar.element([1 / 6]))
