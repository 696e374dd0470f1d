"""Instanton numbers, curvature norms, bubbling and the d_A phi singularity.

Sign convention
---------------
``tr`` is the dot pairing on Im H, so ``tr(F ^ F) = (|F+|^2 - |F-|^2) dVol``
and, for ``A = Im(f xbar dx)`` with ``ft = t f``::

    k = 6 int_0^inf ft (ft - 1) ft' dt = (2 ft^3 - 3 ft^2) |_0^inf

The conjugate direction ``Im(f x dxbar)`` flips the sign.  Reports carry
both the signed value and ``|k|``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from . import forms
from .families import SolutionFamily, Variant, profile
from .radial import RadialProfile, curvature_components, curvature_form, reduced_components

CONVENTION_NOTE = (
    "k = (2 ft^3 - 3 ft^2)|_0^inf for Im(f xbar dx), sign reversed for Im(f x dxbar); "
    "tr is the dot pairing on Im H so tr(F^F) = (|F+|^2 - |F-|^2) dVol"
)
EQUILIBRIA = (0.0, 1.0)
T_INF = 1e16


class NoLimitError(ValueError):
    pass


class PoleInDomainError(ValueError):
    pass


@dataclass
class InstantonReport:
    family: str
    k_boundary: float
    k_quadrature: float
    quadrature_error_estimate: float
    convention_note: str = CONVENTION_NOTE
    k_trace_density: float | None = None

    @property
    def abs_k(self) -> float:
        return abs(self.k_boundary)

    @property
    def consistent(self) -> bool:
        return abs(self.k_boundary - self.k_quadrature) <= max(1e-6, self.quadrature_error_estimate)

    def to_json(self) -> dict:
        d = asdict(self)
        d["abs_k"] = self.abs_k
        d["consistent"] = self.consistent
        return d


def _fam(fam) -> SolutionFamily:
    return fam if isinstance(fam, SolutionFamily) else SolutionFamily(*fam)


def _antiderivative(ft):
    return 2.0 * ft ** 3 - 3.0 * ft ** 2


def tilde_f_limits(p: RadialProfile) -> tuple[float, float]:
    """Limits of ``t f`` at 0 and infinity, snapped to the equilibria {0, 1}."""
    out = []
    for t in (0.0, T_INF):
        with np.errstate(divide="ignore", invalid="ignore"):
            val = float(p.tilde_f(t))
        snapped = [e for e in EQUILIBRIA if abs(val - e) <= 1e-8]
        if not snapped:
            raise NoLimitError(f"{p.name}: t f -> {val} at t={t:g}, not an equilibrium value")
        out.append(snapped[0])
    return out[0], out[1]


def instanton_boundary(fam) -> float:
    fam = _fam(fam)
    lo, hi = tilde_f_limits(profile(fam))
    k = _antiderivative(hi) - _antiderivative(lo)
    return -k if fam.conjugate else k


def _panels(t_max: float, breaks=()) -> list[tuple[float, float]]:
    pts = [0.0, 1e-8] + list(np.logspace(-6, math.log10(t_max), 25)) + [b for b in breaks if 0 < b < t_max]
    pts = sorted(set(p for p in pts if p <= t_max))
    return list(zip(pts[:-1], pts[1:]))


def instanton_quadrature(fam, t_max: float = 1e8) -> tuple[float, float]:
    """Gauss-Kronrod quadrature of ``6 ft (ft - 1) ft'`` plus the closed-form tail.

    Returns ``(k, error_estimate)``.
    """
    fam = _fam(fam)
    p = profile(fam)
    inner = [q for q in p.f_poles if 0.0 < q < t_max]
    if inner:
        raise PoleInDomainError(f"{p.name}: f has a pole at t={inner[0]:g}")
    if fam.variant is Variant.TAN:
        raise PoleInDomainError("tan family: poles accumulate at t = 0")
    _, ft_inf = tilde_f_limits(p)

    def integrand(t):
        ft = float(p.tilde_f(t))
        return 6.0 * ft * (ft - 1.0) * float(p.tilde_f_prime(t))

    total = 0.0
    err = 0.0
    breaks = [fam.glue_t] if fam.glue_t else []
    for a, b in _panels(t_max, breaks):
        val, e = integrate.quad(integrand, a, b, epsabs=1e-13, epsrel=1e-12, limit=200)
        total += val
        err += e
    ft_end = float(p.tilde_f(t_max))
    tail = _antiderivative(ft_inf) - _antiderivative(ft_end)
    total += tail
    if fam.conjugate:
        total = -total
    return total, err


def trace_density_radial(fam, t, directions=None) -> np.ndarray:
    """``tr(F ^ F)`` coefficient of ``dVol`` at ``|x|^2 = t``, averaged over directions."""
    fam = _fam(fam)
    p = profile(fam)
    if directions is None:
        directions = np.array([[1.0, 0.0, 0.0, 0.0], [0.3, -0.5, 0.7, 0.4], [-0.2, 0.9, 0.1, -0.6]])
    u = directions / np.linalg.norm(directions, axis=1, keepdims=True)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    x = np.sqrt(t)[:, None, None] * u[None]
    F = curvature_form(p, x, fam.conjugate)
    return forms.fourform_trace_density(F, F).mean(axis=-1)


def instanton_trace_density(fam, t_max: float = 1e8) -> tuple[float, float]:
    """``(1/4 pi^2) int tr(F^F)`` by quadrature over shells; ``d^4x = pi^2 t dt``."""
    fam = _fam(fam)
    breaks = [fam.glue_t] if fam.glue_t else []
    total = err = 0.0

    def integrand(s):
        t = math.exp(s)
        return float(trace_density_radial(fam, t)[0]) * t * t

    lo = math.log(1e-10)
    pts = sorted(set([lo] + [math.log(b) for b in breaks] + list(np.linspace(-6, math.log(t_max), 30))))
    pts = [q for q in pts if q >= lo]
    for a, b in zip(pts[:-1], pts[1:]):
        val, e = integrate.quad(integrand, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
        total += val
        err += e
    return 0.25 * total, 0.25 * err


def instanton_report(fam, t_max: float = 1e8, with_trace: bool = False) -> InstantonReport:
    fam = _fam(fam)
    kb = instanton_boundary(fam)
    kq, e = instanton_quadrature(fam, t_max)
    rep = InstantonReport(fam.label, kb, kq, e)
    if with_trace:
        rep.k_trace_density = instanton_trace_density(fam, t_max)[0]
    return rep


# --- curvature norms --------------------------------------------------------------

def curvature_parts(fam, t) -> tuple[np.ndarray, np.ndarray]:
    """``(|F+|^2, |F-|^2)`` from the reduced coefficients and the frozen basis norms."""
    fam = _fam(fam)
    t = np.asarray(t, dtype=float)
    fa_sd, fa_asd = curvature_components(profile(fam), t)
    return forms.SD_BASIS_NORM_SQ * t * t * fa_sd ** 2, forms.ASD_BASIS_NORM_SQ * fa_asd ** 2


def curvature_norm_sq(fam, t) -> np.ndarray:
    sd, asd = curvature_parts(fam, t)
    return sd + asd


def printed_curvature_f1(t) -> np.ndarray:
    """The closed form of ``|F_A|^2`` for the first family at C = 1."""
    t = np.asarray(t, dtype=float)
    return 108.0 * (2 * t ** 4 + 2 * t ** 3 + t ** 2 + 2 * t + 2) / (t * t + 4 * t + 1) ** 4


def bubbling_check(C: float, t) -> tuple[np.ndarray, np.ndarray]:
    """``(|F^C|(t), C |F^1|(C t))`` for the first family."""
    t = np.asarray(t, dtype=float)
    lhs = np.sqrt(curvature_norm_sq(SolutionFamily(Variant.F1, C), t))
    rhs = C * np.sqrt(curvature_norm_sq(SolutionFamily(Variant.F1, 1.0), C * t))
    return lhs, rhs


def curvature_mass(C: float, t_max: float = math.inf) -> float:
    """``int_{|x|^2 <= t_max} |F^C|^2 dVol`` for the first family, by log-space quadrature."""
    fam = SolutionFamily(Variant.F1, C)

    def integrand(s):
        t = math.exp(s)
        return float(curvature_norm_sq(fam, t)) * t * t

    # the density lives on the scale t ~ 1/C; integrate e^{+-40} about it
    centre = -math.log(C)
    lo, hi = centre - 40.0, centre + 40.0
    if math.isfinite(t_max):
        hi = min(hi, math.log(t_max))
    pts = np.linspace(lo, hi, 41) if hi > lo else np.array([lo, lo])
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        total += integrate.quad(integrand, a, b, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    return math.pi ** 2 * total


def concentration_fraction(C: float, r: float) -> float:
    if C <= 0 or r <= 0:
        raise ValueError("need C > 0 and r > 0")
    return curvature_mass(C, r * r) / curvature_mass(C)


def curvature_is_decreasing(fam, t) -> bool:
    vals = np.sqrt(curvature_norm_sq(fam, np.sort(np.asarray(t, dtype=float))))
    return bool(np.all(np.diff(vals) < 0))


# --- |d_A phi|^2 -------------------------------------------------------------------

def dAphi_norm_sq(fam, t) -> np.ndarray:
    fam = _fam(fam)
    t = np.asarray(t, dtype=float)
    rc = reduced_components(profile(fam), t)
    return forms.SD_BASIS_NORM_SQ * t * t * rc.dap_sd ** 2 + forms.ASD_BASIS_NORM_SQ * rc.dap_asd ** 2


def printed_dAphi_f1(t) -> np.ndarray:
    """The rational function printed for ``|d_A phi|^2`` of the first family at C = 1."""
    t = np.asarray(t, dtype=float)
    num = 432.0 * (2 * t ** 8 + 6 * t ** 7 + 5 * t ** 6 + 2 * t ** 5 + 6 * t ** 4 + 2 * t ** 3 + 5 * t ** 2 + 6 * t + 2)
    den = (t * t + 4 * t + 1) ** 2 * (t - 1) ** 2 * (t ** 3 + 3 * t ** 2 - 3 * t + 1) ** 2
    return num / den


def derived_dAphi_f1(t) -> np.ndarray:
    """``|d_A phi|^2`` of the first family at C = 1, simplified by hand from the reduction."""
    t = np.asarray(t, dtype=float)
    num = 216.0 * (t * t + 1) * (t ** 6 + 9 * t ** 4 + 16 * t ** 3 + 9 * t ** 2 + 1)
    return num / ((t - 1) ** 4 * (t * t + 4 * t + 1) ** 4)


def singular_mass(fam, eps: float, upper: float = 2.0) -> float:
    """``I(eps) = int_{t0+eps}^{upper} |d_A phi|^2 pi^2 t dt`` with ``t0`` the pole of g.

    Substituting ``t = t0 + e^w`` resolves the algebraic blow-up at ``t0``.
    """
    fam = _fam(fam)
    p = profile(fam)
    if not p.g_poles:
        raise ValueError(f"{p.name}: g has no pole")
    t0 = p.g_poles[0]

    def integrand(w):
        d = math.exp(w)
        t = t0 + d
        return float(dAphi_norm_sq(fam, t)) * t * d

    a, b = math.log(eps), math.log(upper - t0)
    pts = np.linspace(a, b, 9)
    total = sum(integrate.quad(integrand, lo, hi, epsabs=0.0, epsrel=1e-12, limit=200)[0]
                for lo, hi in zip(pts[:-1], pts[1:]))
    return math.pi ** 2 * total


def divergence_exponent(fam, eps_values=(1e-2, 5e-3, 2.5e-3), upper: float = 2.0) -> float:
    """Least-squares ``p`` in ``I(eps) ~ eps^-p``."""
    e = np.asarray(eps_values, dtype=float)
    vals = np.array([singular_mass(fam, float(x), upper) for x in e])
    slope = np.polyfit(np.log(e), np.log(vals), 1)[0]
    return float(-slope)


def report_table(fam, t) -> np.ndarray:
    """Columns t, |F|^2, |F+|^2, |F-|^2, |d_A phi|^2."""
    fam = _fam(fam)
    p = profile(fam)
    t = np.asarray(t, dtype=float)
    t = t[p.admissible(t)]
    sd, asd = curvature_parts(fam, t)
    return np.column_stack([t, sd + asd, sd, asd, dAphi_norm_sq(fam, t)])


REPORT_COLUMNS = ("t", "F_norm_sq", "F_plus_norm_sq", "F_minus_norm_sq", "dAphi_norm_sq")
