from __future__ import annotations

import numpy as np
import pytest

from kwradial import nahm


def _unit(rng):
    w = rng.normal(size=4)
    return w / np.linalg.norm(w)


def test_frame_example():
    fr = nahm.frame([1.0, 0, 0, 0])
    assert np.array_equal(fr.e, [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])


@pytest.mark.parametrize("fn", [nahm.frame, nahm.left_frame])
def test_frames_orthonormal_and_tangent(fn, rng):
    for _ in range(5):
        x = _unit(rng)
        fr = fn(x)
        assert np.allclose(fr.gram(), np.eye(3), atol=1e-14)
        assert np.allclose(fr.e @ x, 0.0, atol=1e-14)


def test_decomposition(rng):
    x = _unit(rng)
    assert nahm.frame_decomposition_residual(x, "left") < 1e-14
    # the printed frame does not decompose Im(xbar dx)
    assert nahm.frame_decomposition_residual(x, "printed") > 0.1


def test_non_unit_point():
    with pytest.raises(nahm.NonUnitPointError):
        nahm.frame([1.0, 1.0, 0, 0])


def test_su2_triple():
    assert nahm.triple_commutator_residual() == 0.0
    t = nahm.su2_triple()
    assert np.array_equal(t[0], [0, 0.5, 0, 0])


def test_nahm_pole():
    for which in nahm.WHICH:
        assert nahm.nahm_pole_residual(which, 1e-3) <= 5e-3
        r1 = nahm.nahm_pole_residual(which, 1e-4)
        r2 = nahm.nahm_pole_residual(which, 2e-4)
        assert abs(r1 / r2 - 0.5) < 1e-3
    with pytest.raises(ValueError):
        nahm.nahm_pole_residual("plus_half", 0.2)


def test_profile_limits():
    a, p = nahm.pullback_profiles("plus_half", np.array([1e-8]))
    assert abs(a[0] - 1.0) < 1e-6
    a, _ = nahm.pullback_profiles("minus_half", np.array([1e-8]))
    assert abs(a[0] - 1.0) < 1e-6
    _, p = nahm.pullback_profiles("plus_half", 5.0)
    assert abs(p * np.exp(20.0) - 6.0) < 1e-3
    with pytest.raises(ValueError):
        nahm.pullback_profiles("plus_half", 0.0)
    with pytest.raises(ValueError):
        nahm.pullback_profiles("other", 1.0)


def test_decay_slopes():
    assert abs(nahm.decay_slope("plus_half", "p") + 4) < 1e-3
    assert abs(nahm.decay_slope("plus_half", "a") + 4) < 1e-3
    assert abs(nahm.decay_slope("minus_half", "a") + 2) < 1e-3


@pytest.mark.parametrize("which", nahm.WHICH)
@pytest.mark.parametrize("C", [1.0, 2.5])
def test_pullback_consistency(which, C, rng):
    for y in (0.05, 0.7, 3.0):
        assert nahm.pullback_consistency(which, y, _unit(rng), C) < 1e-10


def test_cylinder_instanton():
    assert nahm.cylinder_instanton("plus_half") == 0.5
    assert nahm.cylinder_instanton("minus_half") == -0.5
    for which in nahm.WHICH:
        q, err = nahm.cylinder_instanton_quadrature(which, 2.0)
        assert abs(q - nahm.cylinder_instanton(which, 2.0)) < 1e-8
    assert sum(abs(nahm.cylinder_instanton(w)) for w in nahm.WHICH) == 1.0


def test_table():
    tab = nahm.table("plus_half", np.array([0.1, 1.0]))
    assert tab.shape == (2, len(nahm.TABLE_COLUMNS))
    assert np.allclose(tab[:, 3], tab[:, 0] * tab[:, 2])
