"""su(2)-valued differential forms at points of R^4.

Conventions
-----------
* Orientation: ``dx1^dx2^dx3^dx4`` is positive.
* 1-forms carry coefficients ``c[..., i, :]`` of ``dx_i`` (i = 0..3).
* 2-forms carry coefficients over the pairs 12, 13, 14, 23, 24, 34.
* 3-forms carry coefficients of ``*_E dx_i``, the Euclidean star of
  ``dx_i``, so that ``dx_i ^ *_E dx_j = delta_ij dVol``.
* Pairings of su(2) values use the Euclidean dot product on Im H.  With
  this choice the plain sum of squares over the six 2-form components
  reproduces ``|F_A^-|^2 = 6(tf' + 2f - tf^2)^2``, and the 4-form trace
  density integrates to the boundary formula for the instanton number.

Every form class accepts leading batch axes.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kernels
from ._pykernels import COMPLEMENT, PAIRS
from .quat import Quaternion, as_quat_array, embed_im, qconj_array, qmul_array

PAIR_INDEX = {p: n for n, p in enumerate(PAIRS)}


def _flat(c: np.ndarray, tail: int) -> tuple[np.ndarray, tuple]:
    lead = c.shape[: c.ndim - tail]
    return c.reshape((-1,) + c.shape[c.ndim - tail :]), lead


@dataclass(frozen=True, eq=False)
class Su2OneForm:
    c: np.ndarray  # (..., 4, 3)

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        if self.c.shape[-2:] != (4, 3):
            raise ValueError(f"1-form coefficients must end in (4, 3), got {self.c.shape}")

    def __add__(self, other):
        return Su2OneForm(self.c + other.c)

    def __sub__(self, other):
        return Su2OneForm(self.c - other.c)

    def __mul__(self, s):
        return Su2OneForm(np.asarray(s, dtype=float)[..., None, None] * self.c)

    __rmul__ = __mul__

    def to_json(self):
        return self.c.tolist()

    @classmethod
    def zeros(cls, *lead):
        return cls(np.zeros(tuple(lead) + (4, 3)))


@dataclass(frozen=True, eq=False)
class Su2TwoForm:
    c: np.ndarray  # (..., 6, 3)

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        if self.c.shape[-2:] != (6, 3):
            raise ValueError(f"2-form coefficients must end in (6, 3), got {self.c.shape}")

    def __add__(self, other):
        return Su2TwoForm(self.c + other.c)

    def __sub__(self, other):
        return Su2TwoForm(self.c - other.c)

    def __neg__(self):
        return Su2TwoForm(-self.c)

    def __mul__(self, s):
        return Su2TwoForm(np.asarray(s, dtype=float)[..., None, None] * self.c)

    __rmul__ = __mul__

    def norm_sq(self) -> np.ndarray:
        return np.einsum("...pc,...pc->...", self.c, self.c)

    def norm(self) -> np.ndarray:
        return np.sqrt(self.norm_sq())

    def to_json(self):
        return self.c.tolist()

    @classmethod
    def zeros(cls, *lead):
        return cls(np.zeros(tuple(lead) + (6, 3)))


@dataclass(frozen=True, eq=False)
class Su2ThreeForm:
    c: np.ndarray  # (..., 4, 3), coefficient of *_E dx_i

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=float))
        if self.c.shape[-2:] != (4, 3):
            raise ValueError(f"3-form coefficients must end in (4, 3), got {self.c.shape}")

    def to_json(self):
        return self.c.tolist()


@dataclass(frozen=True)
class Metric:
    """Conformally flat metric ``h(t) dx (x) dxbar`` with ``t = |x|^2``.

    In four dimensions the star of a 1-form only sees the conformal factor
    once: ``*dx_i = h(t) *_E dx_i``.  Callers that think of the factor as
    the square of a length scale pass ``h = rho^2``.
    """

    h: Callable[[np.ndarray], np.ndarray]
    dh: Callable[[np.ndarray], np.ndarray]
    name: str = "custom"

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        val = self.h(t)
        if np.any(val <= 0):
            raise ValueError(f"metric factor of {self.name} is not positive at t={t}")
        return val


def euclidean() -> Metric:
    return Metric(lambda t: np.ones_like(t, dtype=float), lambda t: np.zeros_like(t, dtype=float), "euclidean")


def round_sphere() -> Metric:
    """Round metric ``4/(1+t)^2 dx (x) dxbar`` pulled back by stereographic projection.

    The star factor at ``t = 1`` is exactly 1.
    """
    return Metric(lambda t: 4.0 / (1.0 + t) ** 2, lambda t: -8.0 / (1.0 + t) ** 3, "round")


# --- products ------------------------------------------------------------------

def wedge_one_one(a: Su2OneForm, b: Su2OneForm) -> Su2TwoForm:
    """Componentwise ``a_i b_j - a_j b_i`` under quaternion multiplication.

    The result is projected to Im H.  For ``a = b`` the product is already
    imaginary, so nothing is lost; for ``A ^ phi + phi ^ A`` the real parts
    cancel in the sum.
    """
    ac, lead = _flat(np.broadcast_to(a.c, np.broadcast_shapes(a.c.shape, b.c.shape)), 2)
    bc, _ = _flat(np.broadcast_to(b.c, np.broadcast_shapes(a.c.shape, b.c.shape)), 2)
    return Su2TwoForm(kernels.wedge11(ac, bc).reshape(lead + (6, 3)))


def qwedge_one_one(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Wedge of quaternion-valued 1-forms ``(..., 4, 4)`` into ``(..., 6, 4)``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.stack(
        [qmul_array(a[..., i, :], b[..., j, :]) - qmul_array(a[..., j, :], b[..., i, :]) for i, j in PAIRS],
        axis=-2,
    )


def scalar_wedge(s: np.ndarray, a: Su2OneForm) -> Su2TwoForm:
    """``s ^ a`` for a real 1-form ``s`` of shape ``(..., 4)``."""
    s = np.asarray(s, dtype=float)
    comps = [s[..., i, None] * a.c[..., j, :] - s[..., j, None] * a.c[..., i, :] for i, j in PAIRS]
    return Su2TwoForm(np.stack(comps, axis=-2))


def euclidean_star_2(w: Su2TwoForm) -> Su2TwoForm:
    out = np.empty_like(w.c)
    for p, (q, sign) in enumerate(COMPLEMENT):
        out[..., q, :] = sign * w.c[..., p, :]
    return Su2TwoForm(out)


def sd_asd_split(w: Su2TwoForm) -> tuple[Su2TwoForm, Su2TwoForm]:
    """Return (self-dual, anti-self-dual) parts of ``w``."""
    sw = euclidean_star_2(w)
    return Su2TwoForm(0.5 * (w.c + sw.c)), Su2TwoForm(0.5 * (w.c - sw.c))


def inner(w1: Su2TwoForm, w2: Su2TwoForm) -> np.ndarray:
    return np.einsum("...pc,...pc->...", w1.c, w2.c)


def hodge_star_1(w: Su2OneForm, m: Metric, t) -> Su2ThreeForm:
    """``*dx_i = h(t) *_E dx_i`` for the metric ``h(t) dx (x) dxbar``."""
    h = m(np.asarray(t, dtype=float))
    return Su2ThreeForm(np.asarray(h, dtype=float)[..., None, None] * w.c)


def hodge_star_3(w: Su2ThreeForm, m: Metric, t) -> Su2OneForm:
    """Inverse-direction star; on 3-forms in dimension 4, ``**`` is ``-1``."""
    h = m(np.asarray(t, dtype=float))
    return Su2OneForm(-w.c / np.asarray(h, dtype=float)[..., None, None])


def one_three_density(a: Su2OneForm, w: Su2ThreeForm) -> np.ndarray:
    """Quaternion coefficient of ``dVol`` in ``a ^ w``; shape ``(..., 4)``."""
    return qmul_array(embed_im(a.c), embed_im(w.c)).sum(axis=-2)


def three_one_density(w: Su2ThreeForm, a: Su2OneForm) -> np.ndarray:
    """Quaternion coefficient of ``dVol`` in ``w ^ a``; ``*dx_i ^ dx_i = -dVol``."""
    return -qmul_array(embed_im(w.c), embed_im(a.c)).sum(axis=-2)


def fourform_trace_density(w1: Su2TwoForm, w2: Su2TwoForm) -> np.ndarray:
    """Coefficient of ``dx1^dx2^dx3^dx4`` in ``tr(w1 ^ w2)``.

    ``tr`` is the dot-product pairing on Im H (see module notes), so a
    self-dual form has positive density and ``tr(F^F) = (|F+|^2 - |F-|^2) dVol``.
    """
    shape = np.broadcast_shapes(w1.c.shape, w2.c.shape)
    a, lead = _flat(np.broadcast_to(w1.c, shape), 2)
    b, _ = _flat(np.broadcast_to(w2.c, shape), 2)
    return kernels.trace_density(a, b).reshape(lead)


def quaternion_fourform_density(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Dot-pairing density for quaternion-valued 2-forms ``(..., 6, 4)``."""
    out = 0.0
    for p, (q, sign) in enumerate(COMPLEMENT):
        out = out + sign * np.einsum("...c,...c->...", a[..., p, :], b[..., q, :])
    return out


# --- the basis forms built from x ------------------------------------------------

def xbar_dx(x) -> np.ndarray:
    """Quaternion coefficients of ``xbar dx``; shape ``(..., 4, 4)``."""
    x = as_quat_array(x)
    xb = qconj_array(x)
    return np.stack([qmul_array(xb, np.broadcast_to(e, xb.shape)) for e in np.eye(4)], axis=-2)


def dxbar_x(x) -> np.ndarray:
    x = as_quat_array(x)
    return np.stack([qmul_array(np.broadcast_to(qconj_array(e), x.shape), x) for e in np.eye(4)], axis=-2)


def dx_wedge_dxbar() -> np.ndarray:
    dx = np.eye(4)
    return qwedge_one_one(dx, qconj_array(dx))


def dxbar_wedge_dx() -> np.ndarray:
    dx = np.eye(4)
    return qwedge_one_one(qconj_array(dx), dx)


def sd_basis_form(x) -> Su2TwoForm:
    """``xbar dx ^ dxbar x``, the self-dual basis 2-form of the radial ansatz."""
    q = qwedge_one_one(xbar_dx(x), dxbar_x(x))
    return Su2TwoForm(q[..., 1:])


def asd_basis_form() -> Su2TwoForm:
    """``dxbar ^ dx``, the anti-self-dual basis 2-form."""
    return Su2TwoForm(dxbar_wedge_dx()[..., 1:])


def im_xbar_dx(x) -> Su2OneForm:
    """``Im(xbar dx)`` via the batch kernel."""
    arr = as_quat_array(x)
    flat = arr.reshape(-1, 4)
    c = kernels.im_basis(flat, np.zeros((1, 4)), np.ones(1))
    return Su2OneForm(c.reshape(arr.shape[:-1] + (4, 3)))


def im_x_dxbar(x) -> Su2OneForm:
    """``Im(x dxbar)``, the conjugate ansatz direction."""
    arr = as_quat_array(x)
    flat = arr.reshape(-1, 4)
    c = kernels.im_basis(flat, np.zeros((1, 4)), np.ones(1), True)
    return Su2OneForm(c.reshape(arr.shape[:-1] + (4, 3)))


def self_dual_basis() -> np.ndarray:
    """Real self-dual 2-forms dx12+dx34, dx13+dx42, dx14+dx23 as ``(3, 6)``."""
    b = np.zeros((3, 6))
    b[0, PAIR_INDEX[(0, 1)]], b[0, PAIR_INDEX[(2, 3)]] = 1.0, 1.0
    b[1, PAIR_INDEX[(0, 2)]], b[1, PAIR_INDEX[(1, 3)]] = 1.0, -1.0
    b[2, PAIR_INDEX[(0, 3)]], b[2, PAIR_INDEX[(1, 2)]] = 1.0, 1.0
    return b


def anti_self_dual_basis() -> np.ndarray:
    b = np.zeros((3, 6))
    b[0, PAIR_INDEX[(0, 1)]], b[0, PAIR_INDEX[(2, 3)]] = 1.0, -1.0
    b[1, PAIR_INDEX[(0, 2)]], b[1, PAIR_INDEX[(1, 3)]] = 1.0, 1.0
    b[2, PAIR_INDEX[(0, 3)]], b[2, PAIR_INDEX[(1, 2)]] = 1.0, -1.0
    return b


# Frozen norm constants of the two basis forms under the pairing above:
# |xbar dx ^ dxbar x|^2 = SD_BASIS_NORM_SQ * t^2 and |dxbar ^ dx|^2 = ASD_BASIS_NORM_SQ.
SD_BASIS_NORM_SQ = 24.0
ASD_BASIS_NORM_SQ = 24.0


def point(x) -> np.ndarray:
    """Coerce a Quaternion or array-like to a float array with trailing 4."""
    if isinstance(x, Quaternion):
        return x.to_array()
    return as_quat_array(x)
