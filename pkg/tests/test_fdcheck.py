from __future__ import annotations

import json

import numpy as np
import pytest

from kwradial import fdcheck, forms
from kwradial.families import SolutionFamily, Variant, catalog
from kwradial.fdcheck import FieldSampler
from kwradial.forms import Su2OneForm


def _const(c):
    return lambda pts: np.broadcast_to(c, np.atleast_2d(pts).shape[:-1] + (4, 3)).copy()


def test_constant_connection(rng):
    c = rng.normal(size=(4, 3))
    s = FieldSampler(_const(c), _const(np.zeros((4, 3))))
    F = fdcheck.fd_curvature(s, rng.normal(size=4), 1e-3)
    a = Su2OneForm(c)
    assert np.allclose(F.c, forms.wedge_one_one(a, a).c, atol=1e-12)


def test_zero_fields():
    z = _const(np.zeros((4, 3)))
    rep = fdcheck.kw_residual_4d(FieldSampler(z, z), [0.1, 0.2, 0.3, 0.4])
    assert rep.r_kw == 0.0 and rep.r_div == 0.0


def test_thooft_self_dual_part_small():
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.THOOFT))
    F = fdcheck.fd_curvature(s, [1.0, 0, 0, 0], 1e-3)
    sd, _ = forms.sd_asd_split(F)
    assert sd.norm() <= 1e-5


def test_glued_second_order():
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.GLUED_PLUS, 1.0))
    x = np.array([1.0, 1.0, 1.0, 1.0])
    r1 = fdcheck.kw_residual_4d(s, x, 1e-3)
    assert 3.5 < r1.r_kw / r1.r_kw_half < 4.5
    assert r1.r_kw < 1e-5


def test_catalog_orders(rng):
    for fam in catalog():
        if fam.variant is Variant.ALT_ASD:
            continue
        s = fdcheck.catalog_sampler(fam)
        pts = fdcheck.random_points(rng, 5, s)
        assert fdcheck.order_scan(s, pts) >= 1.8, fam.label


def test_corrupted_control(rng):
    fam = SolutionFamily(Variant.F1, 1.0)
    s = fdcheck.catalog_sampler(fam, g_scale=1.1)
    assert "g*1.1" in s.name
    pts = fdcheck.random_points(rng, 5, s)
    assert fdcheck.order_scan(s, pts) < 0.5


def test_literal_conjugate_sign_fails(rng):
    fam = SolutionFamily(Variant.CONJ_GLUED_MINUS, 1.0)
    s = fdcheck.catalog_sampler(fam, literal=True)
    pts = fdcheck.random_points(rng, 5, s)
    assert fdcheck.order_scan(s, pts) < 0.5


def test_divergence_order(rng):
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.F1, 2.0))
    pts = fdcheck.random_points(rng, 5, s)
    assert fdcheck.order_scan(s, pts, which="div") >= 1.8


def test_order_scan_needs_points():
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.F1, 1.0))
    with pytest.raises(ValueError):
        fdcheck.order_scan(s, np.ones((3, 4)))


def test_guard():
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.F1, 1.0))
    with pytest.raises(fdcheck.DomainGuardError):
        fdcheck.kw_residual_4d(s, [1.0, 0, 0, 0], 1e-3)


def test_one_sided_curvature_continuity():
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.GLUED_PLUS, 1.0))
    x = np.full(4, 0.5)
    j1 = fdcheck.one_sided_curvature_jump(s, x, 1e-3)
    j2 = fdcheck.one_sided_curvature_jump(s, x, 5e-4)
    assert j1 < 1e-5
    assert 3.0 < j1 / j2 < 5.0
    with pytest.raises(fdcheck.DomainGuardError):
        fdcheck.one_sided_residual(s, [1.0, 0, 0, 0], 1e-3, "outer")


def test_report_json(rng):
    s = fdcheck.catalog_sampler(SolutionFamily(Variant.F1, 1.0))
    pts = fdcheck.random_points(rng, 2, s)
    reps = fdcheck.scan_reports(s, pts)
    d = json.loads(json.dumps(reps[0].to_json()))
    assert d["meta"]["field"] == s.name and len(d["meta"]["residuals"]) == 3


def test_twisted_form_at_zero_lambda(rng):
    F, pp, dap = (forms.Su2TwoForm(rng.normal(size=(6, 3))) for _ in range(3))
    r = fdcheck.twisted_residual_form(F, pp, dap, 0.0)
    sd, _ = forms.sd_asd_split(F - pp)
    _, asd = forms.sd_asd_split(dap)
    assert np.allclose(r.c, (sd - asd).c)
