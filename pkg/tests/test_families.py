from __future__ import annotations

import math

import numpy as np
import pytest

from kwradial import families as fa
from kwradial import radial
from kwradial.families import SolutionFamily, Variant, profile

GRID = np.logspace(-3, 3, 1000)


def test_profile_examples():
    p1 = profile(SolutionFamily(Variant.F1, 1.0))
    assert p1.f(0.0) == 3.0 and p1.g(0.0) == -3.0
    assert abs(profile(SolutionFamily(Variant.F2, 1.0)).f(2.0) - 7 / 26) < 1e-16
    assert profile(SolutionFamily(Variant.THOOFT)).f(0.0) == 1.0


def test_singular_sets():
    assert profile(SolutionFamily(Variant.F1, 2.0)).f_poles == ()
    assert profile(SolutionFamily(Variant.F1, 2.0)).g_poles == pytest.approx((0.5,))
    assert profile(SolutionFamily(Variant.F2, 1.0)).f_poles == (0.0,)
    assert profile(SolutionFamily(Variant.ALT_ASD)).singular_t == pytest.approx((1.0,))


@pytest.mark.parametrize("C", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("variant", [Variant.F1, Variant.F2, Variant.GLUED_PLUS, Variant.CONJ_GLUED_MINUS])
def test_kw_families_solve_reduced_system(variant, C):
    p = profile(SolutionFamily(variant, C))
    t = GRID[p.admissible(GRID)]
    r1, r2 = radial.kw_scaled_residual(p, t)
    assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) < 1e-10


def test_thooft_solves_asd_system():
    r1, r2 = radial.asd_ode_residual(profile(SolutionFamily(Variant.THOOFT)), GRID)
    assert max(np.max(np.abs(r1)), np.max(np.abs(r2))) < 1e-10


def test_f1_f2_share_g():
    for C in (0.5, 1.0, 2.0):
        g1 = profile(SolutionFamily(Variant.F1, C)).g
        g2 = profile(SolutionFamily(Variant.F2, C)).g
        t = GRID[np.abs(C * GRID - 1) > 1e-6]
        assert np.array_equal(g1(t), g2(t))


def test_alternate_pairing_fails():
    p = fa.alternate_pairing_profile(1.0)
    r1, r2 = radial.kw_ode_residual(p, -1.0, 2.0)
    assert max(abs(r1), abs(r2)) > 0.1


def test_glued_c1():
    jump, dq = fa.glued_u_c1_check(1.0, 1e-4)
    assert jump == 0.0 and dq <= 1e-3
    u = fa.f1_rational(1.0).times_t()
    assert u(1.0) - 0.5 == 0.0
    # both branches have zero slope of u at t = 1
    for r in (fa.f1_rational(1.0), fa.f2_rational(1.0)):
        assert abs(r.times_t().deriv()(1.0)) < 1e-15
    with pytest.raises(ValueError):
        fa.glued_u_c1_check(1.0, 0.6)


def test_glued_profile_picks_branches():
    p = profile(SolutionFamily(Variant.GLUED_PLUS, 2.0))
    f1, f2 = fa.f1_rational(2.0), fa.f2_rational(2.0)
    assert p.f(0.1) == f1(0.1) and p.f(3.0) == f2(3.0)
    assert p.f(0.0) == 6.0


def test_conjugate_form_examples():
    zero = fa.conjugate_form(SolutionFamily(Variant.F1, 0.0), [0.3, 0.2, 0.1, 0.9])
    assert np.all(zero.c == 0.0)
    fam = SolutionFamily(Variant.CONJ_GLUED_MINUS, 1.0)
    a = fa.conjugate_form(fam, [1.0, 0, 0, 0])
    f1 = profile(fam).f(1.0)
    # Im(1 * conj(e_j)) = -Im(e_j)
    assert np.allclose(a.c, -f1 * np.vstack([np.zeros(3), np.eye(3)]))


def test_conjugate_higgs_sign():
    fam = SolutionFamily(Variant.CONJ_GLUED_MINUS, 1.0)
    x = [0.2, 0.4, -0.1, 0.5]
    _, phi = fa.fields(fam, x)
    _, phi_lit = fa.fields(fam, x, literal=True)
    assert np.allclose(phi.c, -phi_lit.c)
    assert fam.higgs_sign == -1.0 and SolutionFamily(Variant.GLUED_PLUS).higgs_sign == 1.0


def test_tan_family_is_local_solution_with_dense_poles():
    p = profile(SolutionFamily(Variant.TAN, 1.0))
    t = np.logspace(-2, 2, 200)
    t = t[p.admissible(t)]
    r1, r2 = radial.kw_scaled_residual(p, t)
    assert max(np.max(np.abs(r1 / (1 + np.abs(p.g(t) * t)))), 0) < 1e-8
    poles = fa.tan_poles(1.0, 1e-300, 1.0)
    assert len(poles) > 50
    ratios = np.array(poles[1:]) / np.array(poles[:-1])
    assert np.allclose(ratios, math.exp(2 * math.pi))


def test_catalog_and_metadata():
    cat = fa.catalog()
    assert len(cat) == 14
    assert all(f.variant is not Variant.TAN for f in cat)
    assert fa.governing_system(SolutionFamily(Variant.THOOFT)) == "asd"
    assert fa.governing_system(SolutionFamily(Variant.F2, 2.0)) == "kw"
    assert SolutionFamily("f1", 2).to_json() == {"variant": "f1", "C": 2.0}
    assert SolutionFamily(Variant.GLUED_PLUS, 4.0).glue_t == 0.25
    tab = fa.table(SolutionFamily(Variant.F1, 1.0), np.array([0.5, 1.0, 2.0]))
    assert tab.shape == (2, 3)


def test_rational_poles_and_times_t():
    r = fa.f2_rational(1.0)
    assert r.poles() == (0.0,)
    rt = r.times_t()
    assert rt.poles() == ()
    assert abs(rt(0.0) - 1.0) < 1e-15
    assert fa.Rational(fa.P([0.0])).poles() == ()
