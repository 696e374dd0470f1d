"""The cylinder picture: frames on S^3, pulled-back profiles and the Nahm pole.

Under ``x = C^{-1/2} e^y w`` with ``|w| = 1`` the radial fields become
``A = a(y) sum t_a e_a*`` and ``phi = p(y) sum t_a e_a*`` with
``t_a = I/2, J/2, K/2``.  Here ``e_a* = <e_a(x), dx>`` for the tangent
vectors ``e_a(x) = x I_a``, which have length ``|x|``; with these covectors
``a = 2 f`` and ``p = 2 g`` (at ``C = 1``).

Two frames are provided.  :func:`frame` returns the vectors as usually
printed, ``(-x2, x1, -x4, x3)`` and so on; :func:`left_frame` returns
``x I``, ``x J``, ``x K``.  Both are orthonormal and tangent at unit ``x``,
but only the second decomposes ``Im(xbar dx)`` (see
:func:`frame_decomposition_residual`).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import quat
from .families import SolutionFamily, Variant, f1_rational, f2_rational, fields
from .forms import im_xbar_dx

WHICH = ("plus_half", "minus_half")
UNIT_TOL = 1e-10


class NonUnitPointError(ValueError):
    pass


@dataclass(frozen=True)
class SphereFrame:
    x: np.ndarray
    e: np.ndarray  # (3, 4); row a is e_{a+1}

    @property
    def estar(self) -> np.ndarray:
        """Covectors dual to ``e`` under the Euclidean metric (same components)."""
        return self.e

    def gram(self) -> np.ndarray:
        return self.e @ self.e.T


def _unit(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (4,):
        raise ValueError("frame expects a single quaternion")
    if abs(np.linalg.norm(x) - 1.0) >= UNIT_TOL:
        raise NonUnitPointError(f"|x| = {np.linalg.norm(x):.17g} is not 1")
    return x


def frame(x) -> SphereFrame:
    """``e1 = (-x2, x1, -x4, x3)``, ``e2 = (-x3, x4, x1, -x2)``, ``e3 = (-x4, -x3, x2, x1)``."""
    x1, x2, x3, x4 = _unit(x)
    e = np.array([[-x2, x1, -x4, x3], [-x3, x4, x1, -x2], [-x4, -x3, x2, x1]])
    return SphereFrame(np.array([x1, x2, x3, x4]), e)


def left_frame(x) -> SphereFrame:
    """``e_a = x I_a``; the frame in which ``Im(xbar dx) = sum e_a* I_a``."""
    x = _unit(x)
    e = np.stack([quat.qmul_array(x, quat.UNIT_ARRAY[a]) for a in (1, 2, 3)])
    return SphereFrame(x, e)


def frame_decomposition_residual(x, which: str = "printed") -> float:
    """Max deviation of ``Im(xbar dx)`` from ``sum_a e_a* (unit a)``.

    The coefficient of ``dx_j`` in the a-th imaginary slot of ``Im(xbar dx)``
    is ``<x I_a, e_j>``, so the identity holds for :func:`left_frame`.
    For the printed frame two of the three vectors carry the opposite sign
    in their last two components and the residual is O(1).
    """
    fr = left_frame(x) if which == "left" else frame(x)
    m = im_xbar_dx(fr.x).c  # (4, 3): [j, a]
    return float(np.abs(m - fr.estar.T).max())


def su2_triple() -> np.ndarray:
    """``t_a = I/2, J/2, K/2`` as quaternion rows."""
    return 0.5 * quat.UNIT_ARRAY[1:].copy()


def triple_commutator_residual() -> float:
    """Max of ``|[t_a, t_b] - t_c|`` over the cyclic pairs, ``[u, v] = uv - vu``."""
    t = su2_triple()
    worst = 0.0
    for a, b, c in ((0, 1, 2), (1, 2, 0), (2, 0, 1)):
        br = quat.qmul_array(t[a], t[b]) - quat.qmul_array(t[b], t[a])
        worst = max(worst, float(np.abs(br - t[c]).max()))
    return worst


def _check_y(y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if np.any(y <= 0):
        raise ValueError("y must be positive")
    return y


def _den(y: np.ndarray) -> np.ndarray:
    e2 = np.exp(2 * y)
    return e2 * e2 + 4 * e2 + 1


def pullback_profiles(which: str, y) -> tuple[np.ndarray, np.ndarray]:
    """``(a(y), p(y))`` for ``plus_half`` or ``minus_half``."""
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}")
    y = _check_y(y)
    e2 = np.exp(2 * y)
    d = _den(y)
    p = 6.0 * (e2 + 1.0) / (d * np.expm1(2 * y))
    if which == "plus_half":
        a = 6.0 / d
    else:
        a = 2.0 * np.exp(-2 * y) * (e2 * e2 + e2 + 1.0) / d
    return a, p


def nahm_pole_residual(which: str, y) -> np.ndarray:
    """``|y p(y) - 1|``; vanishes linearly (slope 2) as ``y -> 0``."""
    y = np.asarray(y, dtype=float)
    if np.any((y <= 0) | (y >= 0.1)):
        raise ValueError("nahm_pole_residual needs 0 < y < 0.1")
    _, p = pullback_profiles(which, y)
    return np.abs(y * p - 1.0)


def decay_slope(which: str, quantity: str = "p", y_range=(5.0, 10.0), n: int = 101) -> float:
    """Least-squares slope of ``log a`` or ``log p`` against ``y``."""
    y = np.linspace(*y_range, n)
    a, p = pullback_profiles(which, y)
    v = p if quantity == "p" else a
    return float(np.polyfit(y, np.log(v), 1)[0])


def _radial_family(which: str, C: float) -> SolutionFamily:
    return SolutionFamily(Variant.F1 if which == "plus_half" else Variant.F2, C)


def cylinder_point(y: float, w, C: float = 1.0) -> np.ndarray:
    """``Psi(y, w) = C^{-1/2} e^y w``."""
    w = _unit(w)
    return math.exp(y) / math.sqrt(C) * w


def pullback_coefficients(which: str, y: float, w, C: float = 1.0) -> tuple[float, float]:
    """``(a, p)`` read off the 4D fields at ``Psi(y, w)`` by contracting with the left frame.

    The frame vectors at ``x`` are ``x I_a`` (length ``|x|``); contracting
    ``A = a sum t_a e_a*`` with ``x I_b`` gives ``a |x|^2 t_b``.  The value is
    scaled back to ``C = 1`` by the factor ``1/C`` that ``f`` and ``g`` carry.
    """
    x = cylinder_point(y, w, C)
    fam = _radial_family(which, C)
    A, phi = fields(fam, x)
    vecs = np.stack([quat.qmul_array(x, quat.UNIT_ARRAY[a]) for a in (1, 2, 3)])
    r2 = float(x @ x)
    out = []
    for form in (A, phi):
        contr = vecs @ form.c  # [b, c] = sum_j (x I_b)_j form_j[c]
        # the diagonal carries the coefficient of t_b = I_b / 2
        out.append(float(np.mean(2.0 * np.diag(contr))) / (r2 * C))
    return out[0], out[1]


def pullback_consistency(which: str, y: float, w, C: float = 1.0) -> float:
    """Max deviation between :func:`pullback_coefficients` and :func:`pullback_profiles`."""
    a, p = pullback_coefficients(which, y, w, C)
    a0, p0 = pullback_profiles(which, y)
    return max(abs(a - float(a0)) / max(1.0, abs(float(a0))), abs(p - float(p0)) / max(1.0, abs(float(p0))))


def _ft(which: str, C: float):
    r = f1_rational(C) if which == "plus_half" else f2_rational(C)
    return r.times_t()


def cylinder_instanton(which: str, C: float = 1.0) -> float:
    """Boundary formula on ``[1/C, inf)``: ``(2 ft^3 - 3 ft^2)`` from ``ft = 1/2`` to its limit.

    Signed under the package convention (``tr`` the dot pairing):
    ``plus_half`` gives ``+1/2`` and ``minus_half`` gives ``-1/2``.
    """
    if which not in WHICH:
        raise ValueError(f"which must be one of {WHICH}")
    ft = _ft(which, C)
    start = float(ft(1.0 / C))
    end = 0.0 if which == "plus_half" else 1.0
    F = lambda v: 2 * v ** 3 - 3 * v ** 2
    return F(end) - F(start)


def cylinder_instanton_quadrature(which: str, C: float = 1.0, t_max: float = 1e8) -> tuple[float, float]:
    """``6 int ft (ft - 1) ft' dt`` over ``[1/C, t_max]`` plus the closed-form tail."""
    ft = _ft(which, C)
    dft = ft.deriv()
    g = lambda t: 6.0 * float(ft(t)) * (float(ft(t)) - 1.0) * float(dft(t))
    pts = np.logspace(math.log10(1.0 / C), math.log10(t_max), 20)
    total = err = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        v, e = integrate.quad(g, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        total += v
        err += e
    end = 0.0 if which == "plus_half" else 1.0
    F = lambda v: 2 * v ** 3 - 3 * v ** 2
    total += F(end) - F(float(ft(t_max)))
    return total, err


TABLE_COLUMNS = ("y", "a", "p", "y_p")


def table(which: str, y) -> np.ndarray:
    y = _check_y(y)
    a, p = pullback_profiles(which, y)
    return np.column_stack([y, a, p, y * p])


__all__ = [
    "SphereFrame", "frame", "left_frame", "frame_decomposition_residual", "su2_triple",
    "triple_commutator_residual", "pullback_profiles", "nahm_pole_residual", "decay_slope",
    "cylinder_point", "pullback_coefficients", "pullback_consistency", "cylinder_instanton",
    "cylinder_instanton_quadrature", "table", "TABLE_COLUMNS", "NonUnitPointError", "WHICH",
]
