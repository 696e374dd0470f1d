"""Fields built from several weighted centres.

With ``U = (lam_1 (x - b_1), ..., lam_k (x - b_k))`` the fields are
``A = Im(f(|U|^2) U* dU)`` and ``phi = Im(g(|U|^2) U* dU)``, where ``f`` is
the glued profile (inner branch for ``|U|^2 <= 1/C``) and ``g`` the shared
one.

Completing the square shows ``Im(U* dU) = Lam Im(ybar dy)`` and
``|U|^2 = Lam |y|^2 + c0`` with ``y = x - m``, ``Lam = sum lam_i^2`` and
``m`` the weighted centroid.  :func:`radial_reduction` returns these; the
offset ``c0`` is what separates a general configuration from a translated
and rescaled radial field.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import fdcheck, forms, kernels
from .families import SolutionFamily, Variant, f1_rational, f2_rational, g_shared
from .forms import Su2OneForm, Su2TwoForm
from .radial import SingularLocusError

U_GUARD = 1e-4


@dataclass(frozen=True)
class CenterData:
    lambdas: tuple
    centers: tuple  # k quaternions as 4-tuples
    C: float = 1.0

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lambdas)
        cen = tuple(tuple(float(c) for c in b) for b in self.centers)
        if len(lam) < 1 or len(lam) != len(cen):
            raise ValueError("need k >= 1 weights and as many centres")
        if any(len(b) != 4 for b in cen):
            raise ValueError("centres are quaternions (4 components)")
        if not any(v != 0.0 for v in lam):
            raise ValueError("at least one weight must be nonzero")
        object.__setattr__(self, "lambdas", lam)
        object.__setattr__(self, "centers", cen)
        object.__setattr__(self, "C", float(self.C))

    @property
    def k(self) -> int:
        return len(self.lambdas)

    @property
    def weights_sq(self) -> np.ndarray:
        return np.asarray(self.lambdas) ** 2

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.centers, dtype=float).reshape(-1, 4)

    def shifted(self, c) -> "CenterData":
        c = np.asarray(c, dtype=float)
        return CenterData(self.lambdas, tuple(tuple(b + c) for b in self.center_array), self.C)

    def parameters(self) -> np.ndarray:
        """The ``5k`` parameters: weights, then centre coordinates."""
        return np.concatenate([np.asarray(self.lambdas), self.center_array.ravel()])

    @classmethod
    def from_parameters(cls, params, C: float = 1.0) -> "CenterData":
        params = np.asarray(params, dtype=float)
        k = params.size // 5
        if params.size != 5 * k:
            raise ValueError("parameter vector length must be a multiple of 5")
        return cls(tuple(params[:k]), tuple(map(tuple, params[k:].reshape(k, 4))), C)

    def to_json(self) -> dict:
        return {"lambdas": list(self.lambdas), "centers": [list(b) for b in self.centers], "C": self.C}

    @classmethod
    def from_json(cls, d: dict) -> "CenterData":
        return cls(tuple(d["lambdas"]), tuple(tuple(b) for b in d["centers"]), d.get("C", 1.0))

    @classmethod
    def load(cls, path) -> "CenterData":
        with open(path) as fh:
            return cls.from_json(json.load(fh))

    @classmethod
    def random(cls, rng: np.random.Generator, k: int, C: float = 1.0, spread: float = 1.0) -> "CenterData":
        lam = rng.uniform(0.5, 1.5, size=k) * rng.choice([-1.0, 1.0], size=k)
        cen = rng.normal(scale=spread, size=(k, 4))
        return cls(tuple(lam), tuple(map(tuple, cen)), C)


def u_norm_sq(cd: CenterData, x) -> np.ndarray:
    """``|U|^2 = sum lam_i^2 |x - b_i|^2``."""
    x = forms.point(x)
    d = x[..., None, :] - cd.center_array
    return np.einsum("k,...ki,...ki->...", cd.weights_sq, d, d)


def u_star_du(cd: CenterData, x) -> Su2OneForm:
    """``Im(U* dU)``: component ``j`` is ``sum lam_i^2 Im((xbar - bbar_i) e_j)``."""
    x = forms.point(x)
    flat = x.reshape(-1, 4)
    out = kernels.im_basis(flat, cd.center_array, cd.weights_sq)
    return Su2OneForm(np.asarray(out).reshape(x.shape[:-1] + (4, 3)))


def radial_reduction(cd: CenterData) -> tuple[float, np.ndarray, float]:
    """``(Lam, m, c0)`` with ``|U|^2 = Lam |x - m|^2 + c0``."""
    w = cd.weights_sq
    lam_tot = float(w.sum())
    b = cd.center_array
    m = (w[:, None] * b).sum(axis=0) / lam_tot
    c0 = float(np.einsum("k,ki,ki->", w, b, b) - lam_tot * m @ m)
    return lam_tot, m, max(c0, 0.0)


def _check_family(fam: SolutionFamily) -> None:
    if fam.variant not in (Variant.GLUED_PLUS, Variant.F1, Variant.F2):
        raise ValueError("multicentre fields use the glued_plus profile (or one of its branches)")
    if fam.C <= 0:
        raise ValueError("multicentre fields need C > 0")


def _profiles(fam: SolutionFamily):
    C = fam.C
    f1, f2, g = f1_rational(C), f2_rational(C), g_shared(C)
    if fam.variant is Variant.F1:
        return (f1, f1.deriv()), (f1, f1.deriv()), g
    if fam.variant is Variant.F2:
        return (f2, f2.deriv()), (f2, f2.deriv()), g
    return (f1, f1.deriv()), (f2, f2.deriv()), g


def _f_of(fam: SolutionFamily, s: np.ndarray, deriv: bool = False) -> np.ndarray:
    inner, outer, _ = _profiles(fam)
    k = 1 if deriv else 0
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(s <= 1.0 / fam.C, inner[k](s), outer[k](s))


def guard_mask(cd: CenterData, fam: SolutionFamily, x, band: float = U_GUARD) -> np.ndarray:
    """True where ``|U|^2`` is at least ``band`` from ``1/C`` (and from 0 for ``f2``)."""
    s = u_norm_sq(cd, x)
    ok = np.abs(s - 1.0 / fam.C) >= band
    if fam.variant is Variant.F2:
        ok &= s >= band
    return ok


def multicenter_field(cd: CenterData, fam: SolutionFamily, x) -> tuple[Su2OneForm, Su2OneForm]:
    """``(A, phi)`` at ``x``; raises within ``1e-4`` (in ``|U|^2``) of ``|U|^2 = 1/C``."""
    _check_family(fam)
    x = forms.point(x)
    if not np.all(guard_mask(cd, fam, x)):
        raise SingularLocusError(f"|U|^2 within {U_GUARD:g} of the singular value")
    s = u_norm_sq(cd, x)
    om = u_star_du(cd, x)
    _, _, g = _profiles(fam)
    return om * _f_of(fam, s), om * g(s)


def multicenter_curvature(cd: CenterData, fam: SolutionFamily, x) -> Su2TwoForm:
    """Exact ``F = f' d|U|^2 ^ Om + f dOm + f^2 Om ^ Om`` with ``Om = Im(U* dU)``.

    ``dOm = Lam Im(dxbar ^ dx)`` is constant; only ``f`` enters, so the
    pole of ``g`` does not matter here.
    """
    _check_family(fam)
    x = forms.point(x)
    s = u_norm_sq(cd, x)
    om = u_star_du(cd, x)
    lam_tot, m, _ = radial_reduction(cd)
    ds = 2.0 * lam_tot * (x - m)
    q = forms.dxbar_wedge_dx()[..., 1:]
    dom = Su2TwoForm(np.broadcast_to(lam_tot * q, x.shape[:-1] + (6, 3)))
    f = _f_of(fam, s)
    df = _f_of(fam, s, deriv=True)
    return forms.scalar_wedge(ds * df[..., None], om) + dom * f + forms.wedge_one_one(om, om) * (f * f)


def sampler(cd: CenterData, fam: SolutionFamily) -> fdcheck.FieldSampler:
    """FD sampler; the guard also keeps stencils ``10h`` (in ``|x - m|^2``) off the glue set."""
    _check_family(fam)

    def A(pts):
        s = u_norm_sq(cd, pts)
        return (u_star_du(cd, pts) * _f_of(fam, s)).c

    def phi(pts):
        s = u_norm_sq(cd, pts)
        _, _, g = _profiles(fam)
        return (u_star_du(cd, pts) * g(s)).c

    lam_tot, _, _ = radial_reduction(cd)

    def guard(pts, h):
        s = u_norm_sq(cd, pts)
        band = max(U_GUARD, 10.0 * h * lam_tot)
        ok = np.abs(s - 1.0 / fam.C) >= band
        if fam.variant is Variant.F2:
            ok &= s >= band
        return ok

    return fdcheck.FieldSampler(A, phi, guard, f"multicenter(k={cd.k})")


def dastar_phi_multicenter_residual(cd: CenterData, fam: SolutionFamily, x, h: float) -> float:
    """FD density of ``d(*phi) + A ^ *phi + *phi ^ A``."""
    multicenter_field(cd, fam, x)  # guard
    return fdcheck.divergence_residual(sampler(cd, fam), x, h)


def pair_antisymmetry_residual(x, b_i, b_l) -> float:
    """``sum_j (x - b_l)_j Im((xbar - bbar_i) e_j)`` plus the ``i <-> l`` swap."""
    x = forms.point(x).reshape(1, 4)
    bi = np.asarray(b_i, dtype=float).reshape(1, 4)
    bl = np.asarray(b_l, dtype=float).reshape(1, 4)
    Bi = kernels.im_basis(x, bi, np.ones(1))[0]
    Bl = kernels.im_basis(x, bl, np.ones(1))[0]
    tot = (x - bl)[0] @ Bi + (x - bi)[0] @ Bl
    return float(np.linalg.norm(tot))


def orthogonality_residual(cd: CenterData, x, f: float = 1.0, g: float = 1.0,
                           metric: forms.Metric | None = None) -> tuple[float, float]:
    """Density of ``Im(f U* dU) ^ *Im(g U* dU)``.

    Returns ``(|Im part|, |Re part|)``.  The su(2) projection vanishes
    (the quaternion products ``Om_j Om_j`` are real), so
    ``A ^ *phi + *phi ^ A = 0``; the real part is ``-f g h sum |Om_j|^2``.
    """
    m = forms.euclidean() if metric is None else metric
    x = forms.point(x)
    om = u_star_du(cd, x)
    t = np.einsum("...i,...i->...", x, x)
    dens = forms.one_three_density(om * f, forms.hodge_star_1(om * g, m, t))
    return float(np.linalg.norm(dens[..., 1:])), float(np.abs(dens[..., 0]).max())


def bracket_residual(cd: CenterData, fam: SolutionFamily, x) -> float:
    """``sum_i [A_i, phi_i]``; zero because ``A`` and ``phi`` are parallel."""
    a, p = multicenter_field(cd, fam, x)
    return float(np.linalg.norm(kernels.bracket_sum(a.c.reshape(-1, 4, 3), p.c.reshape(-1, 4, 3))))


def random_admissible_points(cd: CenterData, fam: SolutionFamily, rng: np.random.Generator, n: int,
                             t_range=(0.05, 20.0)) -> np.ndarray:
    """Points with ``|x - m|^2`` log-uniform in ``t_range`` (scaled by ``1/Lam``)."""
    lam_tot, m, _ = radial_reduction(cd)
    s = sampler(cd, fam)
    lo, hi = t_range
    return fdcheck.random_points(rng, n, s, (lo / lam_tot, hi / lam_tot), center=m)


def fd_order(cd: CenterData, fam: SolutionFamily, rng: np.random.Generator, n: int = 20) -> float:
    pts = random_admissible_points(cd, fam, rng, n)
    return fdcheck.order_scan(sampler(cd, fam), pts)


def kw_residual_4d(cd: CenterData, fam: SolutionFamily, x, h: float | None = None) -> fdcheck.ResidualReport:
    return fdcheck.kw_residual_4d(sampler(cd, fam), x, h)


def _s3_directions(n: int = 64, seed: int = 7) -> np.ndarray:
    rng = np.random.default_rng(seed)
    d = rng.normal(size=(n, 4))
    return d / np.linalg.norm(d, axis=1, keepdims=True)


def _shell_density(cd: CenterData, fam: SolutionFamily, r: float, dirs: np.ndarray, m: np.ndarray) -> np.ndarray:
    F = multicenter_curvature(cd, fam, m + r * dirs)
    return forms.fourform_trace_density(F, F)


def conjectural_instanton_number(cd: CenterData, fam: SolutionFamily, r_max: float = 1e4,
                                 n_dirs: int = 64, n_r: int = 400, seed: int = 7) -> tuple[float, float]:
    """Shell quadrature of ``(1/4 pi^2) int tr(F ^ F)`` over a ball about the weighted centroid.

    Returns ``(k, error_bar)``.  The error bar adds the spread of the
    angular averages (Monte Carlo standard error) and the difference between
    the quadrature at ``n_r`` and ``n_r / 2`` radial nodes.  The value is
    labelled conjectural: there is no closed form to compare with for
    ``k >= 2``.
    """
    _check_family(fam)
    lam_tot, m, _ = radial_reduction(cd)
    dirs = _s3_directions(n_dirs, seed)

    def run(nr):
        # Gauss-Legendre in ln r; r^3 dr = r^4 d(ln r)
        lo, hi = math.log(1e-4 / math.sqrt(lam_tot)), math.log(r_max)
        xg, wg = np.polynomial.legendre.leggauss(nr)
        u = 0.5 * (hi - lo) * xg + 0.5 * (hi + lo)
        w = 0.5 * (hi - lo) * wg
        means, sems = [], []
        for ui in u:
            r = math.exp(ui)
            rho = _shell_density(cd, fam, r, dirs, m)
            means.append(rho.mean())
            sems.append(rho.std(ddof=1) / math.sqrt(rho.size))
        r4 = np.exp(4 * u)
        # vol(S^3) = 2 pi^2, so k = (2 pi^2 / 4 pi^2) int <rho> r^3 dr
        k = 0.5 * float(np.sum(w * r4 * np.array(means)))
        err = 0.5 * float(np.sum(w * r4 * np.array(sems)))
        return k, err

    k_fine, e_fine = run(n_r)
    k_coarse, _ = run(n_r // 2)
    return k_fine, e_fine + abs(k_fine - k_coarse)


__all__ = [
    "CenterData", "u_norm_sq", "u_star_du", "radial_reduction", "multicenter_field",
    "multicenter_curvature", "sampler", "dastar_phi_multicenter_residual", "pair_antisymmetry_residual",
    "orthogonality_residual", "bracket_residual", "random_admissible_points", "fd_order",
    "kw_residual_4d", "conjectural_instanton_number", "guard_mask", "U_GUARD",
]
