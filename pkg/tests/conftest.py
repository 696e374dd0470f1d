from __future__ import annotations

import numpy as np
import pytest

from kwradial import _pykernels, kernels

KERNEL_NAMES = ("qmul", "im_basis", "wedge11", "trace_density", "bracket_sum")


def _available_backends():
    out = ["python"]
    try:
        kernels.get_backend("cython")
        out.append("cython")
    except ImportError:
        pass
    return out


@pytest.fixture(params=_available_backends())
def backend(request, monkeypatch):
    """Run the test body with every kernel routed through one backend."""
    mod = kernels.get_backend(request.param)
    for name in KERNEL_NAMES:
        monkeypatch.setattr(kernels, name, getattr(mod, name))
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from tests import acceptance_log

    if acceptance_log.LINES:
        terminalreporter.section("acceptance criteria")
        for line in acceptance_log.LINES:
            terminalreporter.write_line(line)
