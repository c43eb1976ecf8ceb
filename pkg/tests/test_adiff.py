"""Forward-mode jets against hand values and the finite-difference oracle."""
import math

import numpy as np
import pytest

from g4motions import adiff
from g4motions.adiff import (
    Const,
    DomainError,
    compile_values,
    coords,
    cos,
    eval_jet,
    exp,
    finite_diff_gradient,
    sin,
)

U1, U2, U3, U4 = coords()


def test_constant_field_has_zero_gradient():
    jet = eval_jet(Const(7.0), [0.3, -1.0, 2.0, 0.5])
    assert jet.value == 7.0
    assert np.all(jet.grad == 0.0)


def test_exponential_profile_gradient_at_origin():
    # d/du4 exp(-2 u4) = -2 at u4 = 0
    f = exp(-2.0 * U4)
    jet = eval_jet(f, [0.0, 0.0, 0.0, 0.0])
    assert jet.value == pytest.approx(1.0, abs=0)
    assert np.allclose(jet.grad, [0.0, 0.0, 0.0, -2.0])


def test_linear_field_finite_difference():
    fd = finite_diff_gradient(U2, [0.3, 1.2, -0.4, 0.7], h=1e-5)
    assert np.allclose(fd, [0.0, 1.0, 0.0, 0.0], atol=1e-9)


def test_exp_finite_difference_at_zero():
    fd = finite_diff_gradient(exp(U4), [0.0, 0.0, 0.0, 0.0], h=1e-5)
    assert abs(fd[3] - 1.0) < 1e-9


def test_jet_matches_finite_difference_on_mixed_expression():
    f = U1 * exp(-2.0 * U4)
    rng = np.random.default_rng(11)
    for _ in range(25):
        u = rng.uniform(-1.5, 1.5, size=4)
        jet = eval_jet(f, u)
        fd = finite_diff_gradient(f, u, h=1e-5)
        assert np.allclose(jet.grad, fd, rtol=1e-7, atol=1e-9)


def test_product_rule_is_exact():
    rng = np.random.default_rng(5)
    f = sin(U1) + U2 * U3
    g = exp(0.5 * U4) - U1 / (2.0 + cos(U2))
    fg = f * g
    for _ in range(50):
        u = rng.uniform(-1.4, 1.4, size=4)
        jf, jg, jfg = eval_jet(f, u), eval_jet(g, u), eval_jet(fg, u)
        assert jfg.value == pytest.approx(jf.value * jg.value, abs=1e-12, rel=1e-12)
        composed = jf.grad * jg.value + jf.value * jg.grad
        assert np.max(np.abs(jfg.grad - composed)) <= 1e-12 * (1 + np.max(np.abs(composed)))


def test_quotient_and_chain_rule_against_oracle():
    f = cos(U1 * U2) / (3.0 + sin(U3)) * exp(-U4)
    rng = np.random.default_rng(8)
    for _ in range(30):
        u = rng.uniform(-1.2, 1.2, size=4)
        jet = eval_jet(f, u)
        fd = finite_diff_gradient(f, u)
        assert np.max(np.abs(jet.grad - fd)) <= 1e-6 * (1 + np.max(np.abs(jet.grad)))


def test_batched_jets_match_pointwise():
    f = U1 * U1 * exp(-U3) + sin(U4 - U2)
    rng = np.random.default_rng(3)
    pts = rng.uniform(-1.0, 1.0, size=(20, 4))
    batch = eval_jet(f, pts.T)
    for k, u in enumerate(pts):
        single = eval_jet(f, u)
        assert batch.value[k] == pytest.approx(single.value, abs=0)
        assert np.array_equal(batch.grad[:, k], single.grad)


def test_singular_denominator_raises():
    f = 1.0 / sin(U1)
    with pytest.raises(DomainError):
        f([0.0, 1.0, 1.0, 1.0])
    with pytest.raises(DomainError):
        eval_jet(f, [0.0, 1.0, 1.0, 1.0])


def test_finite_diff_rejects_bad_step():
    with pytest.raises(ValueError):
        finite_diff_gradient(U1, [0, 0, 0, 0], h=0.0)


def test_symbolic_diff_matches_jets():
    f = U1 * exp(-2.0 * U4) + cos(U2) / (2.0 + U3 * U3)
    rng = np.random.default_rng(17)
    partials = adiff.gradient_exprs(f)
    for _ in range(20):
        u = rng.uniform(-1.3, 1.3, size=4)
        jet = eval_jet(f, u)
        sym = np.array([p(u) for p in partials])
        assert np.allclose(sym, jet.grad, atol=1e-13, rtol=1e-13)


def test_compiled_values_match_tree_walk():
    exprs = [
        U1 * exp(-2.0 * U4),
        cos(U2 - U3) / (2.0 + sin(U1)),
        -(U3 * U3) + 0.5 * U2,
        Const(-3.25),
    ]
    fn = compile_values(exprs)
    rng = np.random.default_rng(23)
    for _ in range(20):
        u = rng.uniform(-1.4, 1.4, size=4)
        got = fn(*u)
        want = [e(u) for e in exprs]
        assert np.allclose(got, want, atol=0, rtol=1e-15)


def test_catalog_expressions_agree_with_oracle(models):
    """Every expression table of every entry: AD vs central differences,
    |ad - fd| <= atol + rtol |ad| with atol = rtol = 1e-6, h = 1e-5."""
    from g4motions import catalog

    for gid, model in models.items():
        pts = catalog.sample_points(model.domain, 100, 7)
        # keep FD probes inside the domain for the entries with sin(u1) floors
        lo, hi = model.domain.bounds()
        pts = np.clip(pts, lo + 1e-4, hi - 1e-4)
        for table in (model.xi, model.dual, model.e_cov, model.e_con, model.holo_basis):
            for row in table:
                for expr in row:
                    jets = expr.jet(pts.T)
                    for k in range(0, len(pts), 7):
                        fd = finite_diff_gradient(expr, pts[k], h=1e-5)
                        ad = jets.grad[:, k]
                        assert np.max(np.abs(ad - fd)) <= 1e-6 + 1e-6 * np.max(np.abs(ad)), (
                            gid,
                            expr,
                        )
