import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from picardevol import (
    certify_star,
    complexify,
    complexify_seminorm,
    diagonal_algebra,
    embed,
    lrr_opnorm,
    make_seminorm,
    matrix_algebra,
    matrix_opnorm,
    max_coeff,
    mu_norm,
    polarization_bound,
    sym_mul,
    weighted_coeff,
)
from picardevol.errors import AlgebraMismatchError, CertificationError, SeminormError
from picardevol.seminorms import (
    PROVED,
    complexify_certificate,
    domination_constant,
    exact_vertex_mu_norm,
    falsify_submultiplicativity,
    sample_sphere,
    sampled_mu_norm,
    tensor_bound_constants,
)

M2 = matrix_algebra(2)
SCALAR = diagonal_algebra(1)
ALL_M2 = [matrix_opnorm(M2), matrix_opnorm(M2, "one"), matrix_opnorm(M2, "inf"),
          lrr_opnorm(M2), lrr_opnorm(M2, "two"), max_coeff(M2), weighted_coeff(M2, [1, 2, 0.5, 1])]

vec4 = arrays(float, 4, elements=st.floats(-5, 5))


def test_spec_examples():
    d = diagonal_algebra(2)
    assert weighted_coeff(d, [1, 1])(d.element([1.0, -1.0])) == 1.0
    a = matrix_algebra(2)
    assert matrix_opnorm(a, "inf")(a.element([1.0, 2.0, 0.0, 1.0])) == pytest.approx(3.0)
    for p in ALL_M2:
        assert p(M2.zero()) == 0.0


@pytest.mark.parametrize("p", ALL_M2, ids=lambda p: p.form + "-" + str(p.which))
@settings(max_examples=40, deadline=None)
@given(vec4, vec4, st.floats(-4, 4))
def test_seminorm_axioms(p, x, y, lam):
    ex, ey = M2.element(x), M2.element(y)
    assert p(lam * ex) == pytest.approx(abs(lam) * p(ex), rel=1e-12, abs=1e-12)
    assert p(ex + ey) <= p(ex) + p(ey) + 1e-12
    if p.submultiplicative == PROVED:
        assert p(ex * ey) <= p(ex) * p(ey) * (1 + 1e-12) + 1e-12


def test_submultiplicativity_flags():
    assert matrix_opnorm(M2).submultiplicative == PROVED
    assert lrr_opnorm(M2).submultiplicative == PROVED
    assert max_coeff(diagonal_algebra(3)).submultiplicative == PROVED
    # max-coeff on M2: E12 + E11 style products break it
    assert max_coeff(M2).submultiplicative == "falsified"
    assert falsify_submultiplicativity(max_coeff(M2))


def test_make_seminorm_rejects_bad_specs():
    with pytest.raises(SeminormError):
        make_seminorm(M2, {"form": "weighted_coeff", "weights": [1, 1]})
    with pytest.raises(SeminormError):
        make_seminorm(M2, {"form": "schatten"})
    with pytest.raises(SeminormError):
        make_seminorm(diagonal_algebra(2), {"form": "matrix_opnorm"})


def test_domination_constants_are_sound():
    rng = np.random.default_rng(1)
    xs = rng.standard_normal((2000, 4))
    for p in ALL_M2:
        for q in ALL_M2:
            c = domination_constant(p, q)
            if c is None:
                continue
            assert np.all(p.eval_coeffs(xs) <= c * q.eval_coeffs(xs) * (1 + 1e-12))


def test_exact_vertex_examples():
    d = diagonal_algebra(2)
    q = max_coeff(d)
    assert exact_vertex_mu_norm(q, q, 2) == pytest.approx(1.0)
    s = max_coeff(SCALAR)
    for n in range(1, 5):
        assert mu_norm(s, s, n, "exact-vertex").upper == pytest.approx(1.0)


def test_mu_norm_modes_bracket():
    q = weighted_coeff(M2, [1.0, 0.25, 4.0, 1.0])
    for n in (1, 2, 3):
        exact = mu_norm(q, q, n, "exact-vertex")
        sampled = mu_norm(q, q, n, "sampled", samples=3000, seed=n)
        bound = mu_norm(q, q, n, "bound")
        assert sampled.lower <= exact.upper * (1 + 1e-12)
        assert exact.upper <= bound.upper * (1 + 1e-12)
    sub = matrix_opnorm(M2)
    assert mu_norm(sub, sub, 3, "bound").upper == 1.0
    with pytest.raises(SeminormError):
        mu_norm(sub, sub, 2, "guess")
    with pytest.raises(AlgebraMismatchError):
        mu_norm(sub, max_coeff(SCALAR), 2)


def test_tensor_bound_sound():
    p = max_coeff(M2)
    a, b = tensor_bound_constants(p, p)
    for n in (1, 2, 3):
        assert sampled_mu_norm(p, p, n, samples=2000, seed=0) <= a * b ** n


def test_sample_sphere_unit_norm():
    q = matrix_opnorm(M2)
    xs = sample_sphere(q, (500,), np.random.default_rng(3))
    assert np.allclose(q.eval_coeffs(xs), 1.0)


def test_sampled_is_seeded():
    q = weighted_coeff(M2, [1, 2, 3, 4])
    assert sampled_mu_norm(q, q, 3, samples=500, seed=4) == sampled_mu_norm(q, q, 3, samples=500, seed=4)


def test_certificates():
    cert = certify_star(matrix_opnorm(M2), [matrix_opnorm(M2)])
    assert (cert.M, cert.r, cert.validated_up_to) == (1.0, 0.5, None)
    assert certify_star(max_coeff(SCALAR), [max_coeff(SCALAR)]).M == 1.0
    d3 = max_coeff(diagonal_algebra(3))
    assert certify_star(d3, [d3]).M == 1.0


def test_certificate_for_dominated_p():
    q = matrix_opnorm(M2)
    p = max_coeff(M2)
    cert = certify_star(p, [q])
    assert cert.M == 1.0 and cert.q is q


def test_adversarial_weighted_norm_is_finitely_validated():
    p = weighted_coeff(M2, [1.0, 0.25, 4.0, 1.0])
    cert = certify_star(p, [p], max_n=4)
    assert cert.validated_up_to == 4
    assert cert.M > 1.0 and 0 < cert.r < 1 / cert.M
    assert cert.uniform_M >= cert.M
    # the claim for each validated arity is at least the exact value
    for n in range(1, 5):
        assert exact_vertex_mu_norm(p, p, n) <= cert.M ** n * (1 + 1e-12)


def test_certify_errors():
    p = matrix_opnorm(M2)
    with pytest.raises(CertificationError):
        certify_star(p, [])
    with pytest.raises(AlgebraMismatchError):
        certify_star(p, [max_coeff(SCALAR)])


def test_polarization_examples():
    s = max_coeff(SCALAR)
    assert polarization_bound(s, s, 2, samples=100) == pytest.approx(2.0)
    d = diagonal_algebra(2)
    q = max_coeff(d)
    assert polarization_bound(q, q, 1, samples=100) == pytest.approx(1.0)
    rng = np.random.default_rng(5)
    xs = sample_sphere(q, (300, 3), rng)
    sym = max(q(sym_mul([d.element(v) for v in row])) for row in xs)
    assert sym <= polarization_bound(q, q, 3, samples=2000)
    with pytest.raises(SeminormError):
        polarization_bound(q, q, 9)


def test_complexified_seminorm():
    p = matrix_opnorm(M2)
    pc = complexify_seminorm(p)
    ac = complexify(M2)
    rng = np.random.default_rng(2)
    for _ in range(20):
        x = M2.element(rng.standard_normal(4))
        assert pc(embed(x)) == pytest.approx(p(x))
        assert pc(1j * embed(x)) == pytest.approx(p(x))
        a, b = rng.standard_normal(4), rng.standard_normal(4)
        z = ac.element(a + 1j * b)
        assert pc(z) >= max(p(M2.element(a)), p(M2.element(b)))
    with pytest.raises(SeminormError):
        complexify_seminorm(pc)


def test_complexified_certificate_doubles_M():
    p = matrix_opnorm(M2)
    cc = complexify_certificate(certify_star(p, [p]))
    assert cc.M == 2.0 and cc.r == 0.25
    # the doubled constant really bounds the surrogate multilinear norms
    pc = cc.q
    for n in (1, 2, 3):
        assert sampled_mu_norm(pc, pc, n, samples=2000, seed=n) <= cc.M ** n


def test_certificate_json_is_plain():
    cert = certify_star(matrix_opnorm(M2), [matrix_opnorm(M2)])
    js = cert.to_json()
    assert js["M"] == 1.0 and js["validated_up_to"] is None
    assert math.isfinite(js["uniform_M"])
