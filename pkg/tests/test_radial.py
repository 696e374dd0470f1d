from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kwradial import fdcheck, forms, radial
from kwradial.families import SolutionFamily, Variant, profile
from kwradial.forms import Su2OneForm
from kwradial.radial import RadialProfile, SingularLocusError

F1 = SolutionFamily(Variant.F1, 1.0)
F2 = SolutionFamily(Variant.F2, 1.0)
THOOFT = SolutionFamily(Variant.THOOFT)


def _custom(f, df, g, dg, name="custom"):
    return RadialProfile(f, g, df, dg, name=name)


def test_zero_profile_gives_zero_form():
    a = radial.eval_connection(radial.zero_profile(), [0.3, 0.1, -2.0, 1.0])
    assert np.all(a.c == 0.0)


def test_thooft_at_one():
    a = radial.eval_connection(profile(THOOFT), [1.0, 0, 0, 0])
    assert np.allclose(a.c[1], [0.5, 0, 0])
    assert np.allclose(a.c[0], 0.0)


def test_f1_scale_on_unit_sphere(rng):
    x = rng.normal(size=4)
    x /= np.linalg.norm(x)
    a = radial.eval_connection(profile(F1), x)
    assert np.allclose(a.c, 0.5 * forms.im_xbar_dx(x).c, atol=1e-15)


def test_singular_guard():
    with pytest.raises(SingularLocusError):
        radial.eval_higgs(profile(F1), [1.0, 0, 0, 0])
    with pytest.raises(SingularLocusError):
        radial.eval_connection(profile(F2), [0.0, 0, 0, 0])
    # f1 itself is finite at t = 1; only g is singular there
    radial.eval_connection(profile(F1), [1.0, 0, 0, 0])


def test_reduced_components_examples():
    rc = radial.reduced_components(profile(THOOFT), np.linspace(0.0, 5.0, 11))
    assert np.max(np.abs(rc.fa_sd)) < 1e-15
    rc0 = radial.reduced_components(radial.zero_profile(), 1.7)
    assert all(float(v) == 0.0 for v in rc0.to_json().values())


def test_kw_combination_f1_at_two():
    rc = radial.reduced_components(profile(F1), 2.0)
    assert abs(rc.kw_sd()) < 1e-12 and abs(rc.kw_asd()) < 1e-12


def test_opposite_sign_combination_is_not_zero():
    # fa_sd - pp_sd + dap_sd and fa_asd - pp_asd - dap_asd belong to lam = +1
    rc = radial.reduced_components(profile(F1), 2.0)
    assert abs(rc.fa_sd - rc.pp_sd + rc.dap_sd) > 0.1
    assert abs(rc.fa_asd - rc.pp_asd - rc.dap_asd) > 0.1


@pytest.mark.parametrize("fam", [F1, F2])
def test_kw_ode_residual_at_two(fam):
    r1, r2 = radial.kw_ode_residual(profile(fam), -1.0, 2.0)
    assert abs(r1) < 1e-12 and abs(r2) < 1e-12


def test_f2_exact_values_at_two():
    p = profile(F2)
    assert abs(p.f(2.0) - 7 / 26) < 1e-16
    assert abs(p.df(2.0) + 73 / 676) < 1e-16
    assert abs(p.g(2.0) - 9 / 13) < 1e-16
    assert abs(p.dg(2.0) + 150 / 169) < 1e-15


def test_kw_ode_residual_non_solution():
    p = _custom(lambda t: 1 / (1 + t), lambda t: -1 / (1 + t) ** 2, lambda t: np.ones_like(t), lambda t: np.zeros_like(t))
    r1, r2 = radial.kw_ode_residual(p, -1.0, np.array(1.0))
    assert abs(r1) > 0.1 or abs(r2) > 0.1
    with pytest.raises(ValueError):
        radial.kw_ode_residual(p, 0.0, 1.0)


def test_asd_residual_thooft_and_non_solution():
    t = np.logspace(-3, 3, 50)
    r1, r2 = radial.asd_ode_residual(profile(THOOFT), t)
    assert np.max(np.abs(r1)) < 1e-15 and np.max(np.abs(r2)) == 0
    p = _custom(lambda t: np.zeros_like(t), lambda t: np.zeros_like(t), lambda t: np.ones_like(t), lambda t: np.zeros_like(t))
    r1, _ = radial.asd_ode_residual(p, np.array(1.0))
    assert abs(r1) > 0.5


def test_alt_asd_solves_reversed_orientation_system():
    # (t/(t^2-1), sqrt3/(t^2-1)) fails f'+f^2-g^2 = 0 but solves the mirror system
    p = profile(SolutionFamily(Variant.ALT_ASD))
    r1, _ = radial.asd_ode_residual(p, 2.0)
    assert abs(r1) > 0.1
    s1, s2 = radial.sd_ode_residual(p, np.array([0.3, 2.0, 7.0]))
    assert np.max(np.abs(s1)) < 1e-12 and np.max(np.abs(s2)) < 1e-12


def test_scaled_residual_relation():
    # s1 = (t r1 + r2)/2 and s2 = (r2 - t r1)/2 at lam = -1, checked on a non-solution
    p = _custom(lambda t: 1 / (1 + t), lambda t: -1 / (1 + t) ** 2, lambda t: t / (2 + t), lambda t: 2 / (2 + t) ** 2)
    t = np.array([0.3, 2.0, 5.0])
    r1, r2 = radial.kw_ode_residual(p, -1.0, t)
    s1, s2 = radial.kw_scaled_residual(p, t)
    assert np.max(np.abs(s1)) > 0.1
    assert np.allclose(s1, 0.5 * (t * r1 + r2), atol=1e-14)
    assert np.allclose(s2, 0.5 * (r2 - t * r1), atol=1e-14)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.05, 20.0), st.floats(-3, 3), st.floats(-3, 3))
def test_dastar_phi_vanishes_for_any_profile(t, a, b):
    p = _custom(lambda s: a / (1 + s), lambda s: -a / (1 + s) ** 2, lambda s: b * np.exp(-s), lambda s: -b * np.exp(-s))
    assert radial.dastar_phi_residual_symbolic(p, forms.euclidean(), t) < 1e-10 * max(1, abs(a * b), abs(b))


def test_dastar_phi_examples():
    p = profile(F1)
    assert radial.dastar_phi_residual_symbolic(p, forms.euclidean(), 3.0) < 1e-10
    assert radial.dastar_phi_residual_symbolic(p, forms.round_sphere(), 2.0) < 1e-10
    assert radial.dastar_phi_residual_symbolic(profile(THOOFT), forms.euclidean(), 2.0) == 0.0


def test_reconstruction_matches_direct(rng):
    p = profile(F1)
    pts = rng.normal(size=(50, 4))
    pts = pts[np.abs(np.einsum("ij,ij->i", pts, pts) - 1.0) > 1e-2]
    for x in pts:
        t = x @ x
        rc = radial.reduced_components(p, t)
        rec = radial.reconstruct(rc, x)
        for key, direct in (("F", radial.curvature_form(p, x)), ("phi_phi", radial.higgs_square(p, x)),
                            ("dA_phi", radial.covariant_dphi(p, x))):
            scale = max(1.0, float(direct.norm()))
            assert np.max(np.abs(rec[key].c - direct.c)) < 1e-8 * scale


def test_curvature_matches_finite_differences(rng):
    s = fdcheck.catalog_sampler(F1)
    for x in rng.normal(size=(5, 4)) * 1.5:
        if abs(x @ x - 1) < 0.05:
            continue
        fd = fdcheck.fd_curvature(s, x, 1e-4)
        exact = radial.curvature_form(profile(F1), x)
        assert np.max(np.abs(fd.c - exact.c)) < 1e-6


def test_kw_form_vanishes_pointwise(rng):
    p = profile(F1)
    for x in rng.normal(size=(20, 4)):
        if abs(x @ x - 1) < 1e-2:
            continue
        w = radial.kw_form(p, x)
        assert float(w.norm()) < 1e-9 * max(1.0, float(radial.curvature_form(p, x).norm()))


def test_gauge_covariance(rng):
    from kwradial.quat import embed_im, qconj_array, qmul_array

    p = profile(F1)
    for _ in range(10):
        a, b = rng.normal(size=(2, 4))
        a /= np.linalg.norm(a)
        b /= np.linalg.norm(b)
        x = rng.normal(size=4)
        L = lambda v: qmul_array(qmul_array(a, v), b)
        y = L(x)
        M = np.stack([L(e) for e in np.eye(4)], axis=1)
        pull = np.einsum("kc,kj->jc", radial.eval_connection(p, y).c, M)
        ax = radial.eval_connection(p, x).c
        rhs = np.stack([qmul_array(qmul_array(qconj_array(b), embed_im(ax[j])), b)[1:] for j in range(4)])
        assert np.max(np.abs(pull - rhs)) < 1e-10


def test_derivatives_consistent_with_differences():
    p = profile(F1)
    t = np.array([0.2, 0.7, 3.0, 9.0])
    h = 1e-5
    assert np.allclose(p.df(t), (p.f(t + h) - p.f(t - h)) / (2 * h), rtol=1e-8)
    assert np.allclose(p.dg(t), (p.g(t + h) - p.g(t - h)) / (2 * h), rtol=1e-7)
