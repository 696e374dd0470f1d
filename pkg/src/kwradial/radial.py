"""The rotationally invariant ansatz and its exact reduction to ODEs.

Fields have the form ``A = Im(f(t) xbar dx)`` and ``phi = Im(g(t) xbar dx)``
with ``t = |x|^2`` (or the conjugate direction ``Im(x dxbar)``).  Every
2-form built from them splits into a multiple of ``xbar dx ^ dxbar x``
(self-dual) and a multiple of ``dxbar ^ dx`` (anti-self-dual); the six
coefficients are returned by :func:`reduced_components`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import forms
from .forms import Metric, Su2OneForm, Su2TwoForm

GUARD = 1e-6

Scalar = Callable[[np.ndarray], np.ndarray]


class SingularLocusError(ValueError):
    """Raised when a field is evaluated on (or too close to) a declared pole."""


@dataclass(frozen=True)
class RadialProfile:
    """A pair ``(f, g)`` of functions of ``t`` with exact derivatives.

    ``ft`` and ``dft`` optionally give ``t f`` and its derivative in a form
    that stays finite where ``f`` has a simple pole at ``t = 0``.
    ``singular_t`` lists poles of ``f`` or ``g`` in ``[0, inf)``.
    """

    f: Scalar
    g: Scalar
    df: Scalar
    dg: Scalar
    f_poles: tuple = ()
    g_poles: tuple = ()
    name: str = "profile"
    ft: Optional[Scalar] = None
    dft: Optional[Scalar] = None
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def singular_t(self) -> tuple:
        return tuple(sorted(set(self.f_poles) | set(self.g_poles)))

    def check(self, t, which: str = "both") -> np.ndarray:
        """Return ``t`` as an array, raising if it is within GUARD of a pole."""
        t = np.asarray(t, dtype=float)
        poles = {"f": self.f_poles, "g": self.g_poles}.get(which, self.singular_t)
        for p in poles:
            if np.any(np.abs(t - p) < GUARD):
                raise SingularLocusError(f"{self.name}: t within {GUARD:g} of pole at {p:g}")
        return t

    def tilde_f(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.ft is not None:
            return self.ft(t)
        return t * self.f(t)

    def tilde_f_prime(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.dft is not None:
            return self.dft(t)
        return self.f(t) + t * self.df(t)

    def admissible(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        ok = np.ones(t.shape, dtype=bool)
        for p in self.singular_t:
            ok &= np.abs(t - p) >= GUARD
        return ok


def zero_profile() -> RadialProfile:
    z = lambda t: np.zeros_like(np.asarray(t, dtype=float))
    return RadialProfile(z, z, z, z, name="zero")


@dataclass(frozen=True)
class ReducedComponents:
    """Coefficients of ``xbar dx ^ dxbar x`` (``*_sd``) and ``dxbar ^ dx`` (``*_asd``)."""

    fa_sd: np.ndarray
    fa_asd: np.ndarray
    pp_sd: np.ndarray
    pp_asd: np.ndarray
    dap_sd: np.ndarray
    dap_asd: np.ndarray

    def kw_sd(self) -> np.ndarray:
        """Self-dual part of ``F - phi^phi - *d_A phi``."""
        return self.fa_sd - self.pp_sd - self.dap_sd

    def kw_asd(self) -> np.ndarray:
        """Anti-self-dual part of ``F - phi^phi - *d_A phi``."""
        return self.fa_asd - self.pp_asd + self.dap_asd

    def to_json(self) -> dict:
        return {k: np.asarray(getattr(self, k)).tolist() for k in
                ("fa_sd", "fa_asd", "pp_sd", "pp_asd", "dap_sd", "dap_asd")}


def _t_of(x: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", x, x)


def _basis(x: np.ndarray, conjugate: bool) -> Su2OneForm:
    return forms.im_x_dxbar(x) if conjugate else forms.im_xbar_dx(x)


def eval_connection(p: RadialProfile, x, conjugate: bool = False) -> Su2OneForm:
    """``A(x) = Im(f(t) xbar dx)``; batch over leading axes of ``x``."""
    x = forms.point(x)
    t = p.check(_t_of(x), "f")
    return _basis(x, conjugate) * p.f(t)


def eval_higgs(p: RadialProfile, x, conjugate: bool = False) -> Su2OneForm:
    """``phi(x) = Im(g(t) xbar dx)``."""
    x = forms.point(x)
    t = p.check(_t_of(x), "g")
    return _basis(x, conjugate) * p.g(t)


def _exact_pieces(p: RadialProfile, x, conjugate: bool):
    # d Im(xbar dx) = Im(dxbar ^ dx) and d Im(x dxbar) = Im(dx ^ dxbar)
    x = forms.point(x)
    t = p.check(_t_of(x))
    b = _basis(x, conjugate)
    q = forms.dx_wedge_dxbar() if conjugate else forms.dxbar_wedge_dx()
    db = Su2TwoForm(np.broadcast_to(q[..., 1:], x.shape[:-1] + (6, 3)))
    dt = 2.0 * x
    bb = forms.wedge_one_one(b, b)
    return t, b, db, dt, bb


def curvature_form(p: RadialProfile, x, conjugate: bool = False) -> Su2TwoForm:
    """``F_A = f' dt ^ B + f dB + f^2 B ^ B`` with ``B`` the basis 1-form."""
    t, b, db, dt, bb = _exact_pieces(p, x, conjugate)
    return forms.scalar_wedge(p.df(t)[..., None] * dt, b) + db * p.f(t) + bb * p.f(t) ** 2


def higgs_square(p: RadialProfile, x, conjugate: bool = False) -> Su2TwoForm:
    t, b, _, _, bb = _exact_pieces(p, x, conjugate)
    return bb * p.g(t) ** 2


def covariant_dphi(p: RadialProfile, x, conjugate: bool = False) -> Su2TwoForm:
    """``d_A phi = g' dt ^ B + g dB + 2 f g B ^ B``."""
    t, b, db, dt, bb = _exact_pieces(p, x, conjugate)
    return (forms.scalar_wedge(p.dg(t)[..., None] * dt, b) + db * p.g(t)
            + bb * (2.0 * p.f(t) * p.g(t)))


def kw_form(p: RadialProfile, x, conjugate: bool = False) -> Su2TwoForm:
    """``F_A - phi ^ phi - * d_A phi`` evaluated from the exact pieces."""
    d = covariant_dphi(p, x, conjugate)
    return curvature_form(p, x, conjugate) - higgs_square(p, x, conjugate) - forms.euclidean_star_2(d)


def curvature_components(p: RadialProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """``(fa_sd, fa_asd)``; needs only ``f``, so poles of ``g`` are allowed."""
    t = p.check(t, "f")
    f, df = p.f(t), p.df(t)
    return -0.5 * (df + f * f), 0.5 * t * df - 0.5 * t * f * f + f


def reduced_components(p: RadialProfile, t) -> ReducedComponents:
    t = p.check(t)
    f, g, dg = p.f(t), p.g(t), p.dg(t)
    fa_sd, fa_asd = curvature_components(p, t)
    return ReducedComponents(
        fa_sd=fa_sd,
        fa_asd=fa_asd,
        pp_sd=-0.5 * g * g,
        pp_asd=-0.5 * t * g * g,
        dap_sd=-0.5 * (dg + 2.0 * f * g),
        dap_asd=0.5 * t * dg + g - f * g * t,
    )


def reconstruct(rc: ReducedComponents, x) -> dict[str, Su2TwoForm]:
    """Assemble ``F_A``, ``phi^phi`` and ``d_A phi`` from their reduced coefficients."""
    x = forms.point(x)
    sd = forms.sd_basis_form(x)
    asd = Su2TwoForm(np.broadcast_to(forms.asd_basis_form().c, sd.c.shape))
    return {
        "F": sd * rc.fa_sd + asd * rc.fa_asd,
        "phi_phi": sd * rc.pp_sd + asd * rc.pp_asd,
        "dA_phi": sd * rc.dap_sd + asd * rc.dap_asd,
    }


def kw_ode_residual(p: RadialProfile, lam: float, t) -> tuple[np.ndarray, np.ndarray]:
    """The two reduced equations of the twisted family at parameter ``lam``.

    ``lam = -1`` is the Kapustin-Witten case.  ``lam = 0`` is handled by
    :func:`asd_ode_residual` since the second equation carries ``1/lam``.
    """
    if lam == 0:
        raise ValueError("lam = 0 is the separate anti-self-dual system; use asd_ode_residual")
    t = p.check(t)
    f, g, df, dg = p.f(t), p.g(t), p.df(t), p.dg(t)
    li = 1.0 / lam
    r1 = df + lam * dg + f * f - g * g + 2.0 * lam * f * g
    r2 = t * df - t * li * dg + 2.0 * f - 2.0 * li * g + g * g * t - f * f * t + 2.0 * t * f * g * li
    return r1, r2


def asd_ode_residual(p: RadialProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """``f' + f^2 - g^2`` and ``t g' + 2g - 2tfg`` (the ``lam = 0`` system)."""
    t = p.check(t)
    f, g, df, dg = p.f(t), p.g(t), p.df(t), p.dg(t)
    return df + f * f - g * g, dg * t + 2.0 * g - 2.0 * t * f * g


def sd_ode_residual(p: RadialProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """The ``lam = 0`` system for the opposite orientation.

    Swapping the roles of the two basis 2-forms gives
    ``t f' - t f^2 + 2f + t g^2`` and ``g' + 2fg``.
    """
    t = p.check(t)
    f, g, df, dg = p.f(t), p.g(t), p.df(t), p.dg(t)
    return t * df - t * f * f + 2.0 * f + t * g * g, dg + 2.0 * f * g


def dastar_phi_residual_symbolic(p: RadialProfile, m: Metric, t, direction=None) -> float:
    """Norm of the 4-form density of ``d(*phi) + A ^ *phi + *phi ^ A``.

    Evaluated at ``x = sqrt(t) * direction / |direction|`` using exact
    derivatives: with ``*phi = h g sum_i B_i *_E dx_i`` the exterior
    derivative contributes ``sum_i d_i(h g B_i) = sum_i 2 x_i (h g)' B_i``
    (each ``B_i`` is linear in x with ``d_i B_i = 0``).
    """
    t = float(p.check(t))
    if direction is None:
        direction = np.array([0.3, -0.5, 0.7, 0.4])
    u = np.asarray(direction, dtype=float)
    x = np.sqrt(t) * u / np.linalg.norm(u)
    b = forms.im_xbar_dx(x)
    h, dh = float(m(t)), float(m.dh(np.asarray(t)))
    g, dg = float(p.g(t)), float(p.dg(t))
    dhg = dh * g + h * dg
    d_part = np.einsum("i,ic->c", 2.0 * x * dhg, b.c)
    a = b * float(p.f(t))
    star_phi = forms.hodge_star_1(b * g, m, t)
    q = forms.one_three_density(a, star_phi) + forms.three_one_density(star_phi, a)
    q[1:] += d_part
    return float(np.linalg.norm(q))


def kw_scaled_residual(p: RadialProfile, t) -> tuple[np.ndarray, np.ndarray]:
    """The ``lam = -1`` system in its ``t``-scaled form.

    ``t f' + f + g - 2fgt`` and ``t g' + f + g - t(f^2 - g^2)``.  These are
    ``t/2`` times the difference and sum of the two :func:`kw_ode_residual`
    equations at ``lam = -1``; the extra factor of ``t`` keeps every term
    bounded as ``t -> 0`` when ``f`` has a simple pole there, so the
    binary64 rounding floor stays near machine epsilon.
    """
    t = p.check(t)
    f, g, df, dg = p.f(t), p.g(t), p.df(t), p.dg(t)
    return t * df + f + g - 2.0 * f * g * t, t * dg + f + g - t * (f * f - g * g)
