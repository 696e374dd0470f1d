from __future__ import annotations

import numpy as np
import pytest

from kwradial import _pykernels, kernels

cy = pytest.importorskip("kwradial._ckernels")


@pytest.fixture
def data(rng):
    return {
        "a": rng.normal(size=(257, 4)),
        "b": rng.normal(size=(257, 4)),
        "pts": rng.normal(size=(257, 4)),
        "centers": rng.normal(size=(3, 4)),
        "w": rng.uniform(0.2, 2.0, size=3),
        "f1": rng.normal(size=(257, 4, 3)),
        "f2": rng.normal(size=(257, 4, 3)),
        "t1": rng.normal(size=(257, 6, 3)),
        "t2": rng.normal(size=(257, 6, 3)),
    }


def test_qmul_parity(data):
    assert np.max(np.abs(cy.qmul(data["a"], data["b"]) - _pykernels.qmul(data["a"], data["b"]))) < 1e-14


@pytest.mark.parametrize("conjugate", [False, True])
def test_im_basis_parity(data, conjugate):
    p = _pykernels.im_basis(data["pts"], data["centers"], data["w"], conjugate)
    c = cy.im_basis(data["pts"], data["centers"], data["w"], conjugate)
    assert np.max(np.abs(p - c)) < 1e-14


def test_wedge_parity(data):
    assert np.max(np.abs(cy.wedge11(data["f1"], data["f2"]) - _pykernels.wedge11(data["f1"], data["f2"]))) < 1e-14


def test_trace_density_parity(data):
    d = cy.trace_density(data["t1"], data["t2"]) - _pykernels.trace_density(data["t1"], data["t2"])
    assert np.max(np.abs(d)) < 1e-13


def test_bracket_parity(data):
    d = cy.bracket_sum(data["f1"], data["f2"]) - _pykernels.bracket_sum(data["f1"], data["f2"])
    assert np.max(np.abs(d)) < 1e-14


def test_read_only_inputs_accepted(data):
    a = data["f1"].copy()
    a.flags.writeable = False
    assert np.allclose(cy.wedge11(a, a), _pykernels.wedge11(a, a))
    assert np.allclose(cy.trace_density(data["t1"][:0], data["t1"][:0]), 0.0)


def test_backend_selection():
    assert kernels.BACKEND in ("python", "cython")
    assert kernels.get_backend("python") is _pykernels
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")
