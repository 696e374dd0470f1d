"""Finite-difference check of the full 4D equations for sampled fields.

Only the field samplers and the forms module are used here; nothing from
the reduced ODEs.  Derivatives are centred differences along the four
coordinate axes, so residuals of exact solutions shrink like ``h^2``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np

from . import forms
from . import kernels
from .forms import Su2OneForm, Su2TwoForm

FieldFn = Callable[[np.ndarray], np.ndarray]  # (n, 4) -> (n, 4, 3)
GuardFn = Callable[[np.ndarray, float], np.ndarray]  # (points, h) -> admissible mask


class DomainGuardError(ValueError):
    pass


@dataclass
class FieldSampler:
    A: FieldFn
    phi: FieldFn
    guard: Optional[GuardFn] = None
    name: str = "field"
    lam: float = -1.0  # which member of the twisted family the fields should solve

    def admissible(self, points: np.ndarray, h: float) -> np.ndarray:
        points = np.atleast_2d(points)
        if self.guard is None:
            return np.ones(points.shape[0], dtype=bool)
        return np.asarray(self.guard(points, h), dtype=bool)


@dataclass
class ResidualReport:
    x: list
    h: float
    r_kw: float
    r_div: float
    r_kw_half: float = math.nan
    order_estimate: float = math.nan
    meta: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return asdict(self)


def default_step(x) -> float:
    return 1e-3 * max(1.0, float(np.linalg.norm(x)))


def _stencil(x: np.ndarray, h: float) -> np.ndarray:
    # rows: x + h e_i for i = 0..3, then x - h e_i
    e = np.eye(4) * h
    return np.concatenate([x + e, x - e], axis=0)


def _check_ball(s: FieldSampler, x: np.ndarray, h: float) -> None:
    probe = np.concatenate([x[None], _stencil(x, 2.0 * h)], axis=0)
    if not np.all(s.admissible(probe, h)):
        raise DomainGuardError(f"{s.name}: stencil of radius {2 * h:g} around {x.tolist()} leaves the domain")


def fd_partials(fn: FieldFn, x: np.ndarray, h: float) -> np.ndarray:
    """``d_i w_j`` as an array ``[i, j, c]`` by centred differences."""
    vals = fn(_stencil(x, h))
    return (vals[:4] - vals[4:]) / (2.0 * h)


def _exterior(d: np.ndarray) -> Su2TwoForm:
    from ._pykernels import PAIRS

    return Su2TwoForm(np.stack([d[i, j] - d[j, i] for i, j in PAIRS]))


def fd_curvature(s: FieldSampler, x, h: float | None = None) -> Su2TwoForm:
    """``dA + A ^ A`` with centred differences."""
    x = forms.point(x).astype(float)
    h = default_step(x) if h is None else h
    _check_ball(s, x, h)
    a = Su2OneForm(s.A(x[None])[0])
    return _exterior(fd_partials(s.A, x, h)) + forms.wedge_one_one(a, a)


def _pieces(s: FieldSampler, x: np.ndarray, h: float):
    a = Su2OneForm(s.A(x[None])[0])
    p = Su2OneForm(s.phi(x[None])[0])
    da = fd_partials(s.A, x, h)
    dp = fd_partials(s.phi, x, h)
    F = _exterior(da) + forms.wedge_one_one(a, a)
    pp = forms.wedge_one_one(p, p)
    dap = _exterior(dp) + forms.wedge_one_one(a, p) + forms.wedge_one_one(p, a)
    div = np.einsum("iic->c", dp) + kernels.bracket_sum(a.c[None], p.c[None])[0]
    return F, pp, dap, div


def twisted_residual_form(F: Su2TwoForm, pp: Su2TwoForm, dap: Su2TwoForm, lam: float) -> Su2TwoForm:
    """The 2-form that vanishes on solutions of the twisted equations at ``lam``.

    ``lam = -1`` gives ``F - phi^phi - *d_A phi`` literally.  Otherwise the
    self-dual part is ``(F - phi^phi + lam d_A phi)^+`` and the anti-self-dual
    part ``(lam (F - phi^phi) - d_A phi)^-``, which stays finite at ``lam = 0``.
    """
    if lam == -1.0:
        return F - pp - forms.euclidean_star_2(dap)
    k = F - pp
    sd, _ = forms.sd_asd_split(k + dap * lam)
    _, asd = forms.sd_asd_split(k * lam - dap)
    return sd + asd


def kw_residual_4d(s: FieldSampler, x, h: float | None = None) -> ResidualReport:
    """Both equations at ``x``; ``order_estimate`` compares ``h`` with ``h/2``."""
    x = forms.point(x).astype(float)
    h = default_step(x) if h is None else h
    _check_ball(s, x, h)
    out = []
    for step in (h, 0.5 * h):
        F, pp, dap, div = _pieces(s, x, step)
        r = twisted_residual_form(F, pp, dap, s.lam)
        out.append((float(r.norm()), float(np.linalg.norm(div))))
    (r1, d1), (r2, _) = out
    order = math.log2(r1 / r2) if r1 > 0 and r2 > 0 else math.nan
    return ResidualReport(x.tolist(), h, r1, d1, r2, order, {"field": s.name})


def divergence_residual(s: FieldSampler, x, h: float | None = None) -> float:
    """Norm of ``sum_i d_i phi_i + [A_i, phi_i]``, the density of ``d_A * phi``."""
    x = forms.point(x).astype(float)
    h = default_step(x) if h is None else h
    _check_ball(s, x, h)
    dp = fd_partials(s.phi, x, h)
    a = s.A(x[None])
    p = s.phi(x[None])
    return float(np.linalg.norm(np.einsum("iic->c", dp) + kernels.bracket_sum(a, p)[0]))


def point_order(s: FieldSampler, x, h0: float | None = None, which: str = "kw") -> tuple[float, list]:
    """Least-squares slope of ``log r`` against ``log h`` over ``h0, h0/2, h0/4``."""
    x = forms.point(x).astype(float)
    h0 = default_step(x) if h0 is None else h0
    hs = [h0, 0.5 * h0, 0.25 * h0]
    rs = []
    for h in hs:
        if which == "div":
            rs.append(divergence_residual(s, x, h))
        else:
            _check_ball(s, x, h)
            F, pp, dap, _ = _pieces(s, x, h)
            rs.append(float(twisted_residual_form(F, pp, dap, s.lam).norm()))
    if min(rs) <= 0.0:
        return math.nan, rs
    slope = np.polyfit(np.log(hs), np.log(rs), 1)[0]
    return float(slope), rs


def order_scan(s: FieldSampler, points, h0: float | None = None, which: str = "kw") -> float:
    """Median Richardson order over at least five points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 5:
        raise ValueError("order_scan needs at least 5 points")
    orders = [point_order(s, x, h0, which)[0] for x in pts]
    return float(np.nanmedian(orders))


def scan_reports(s: FieldSampler, points, h0: float | None = None) -> list[ResidualReport]:
    out = []
    for x in np.atleast_2d(np.asarray(points, dtype=float)):
        rep = kw_residual_4d(s, x, h0)
        order, rs = point_order(s, x, h0)
        rep.order_estimate = order
        rep.meta["residuals"] = rs
        out.append(rep)
    return out


def random_points(rng: np.random.Generator, n: int, s: FieldSampler, t_range=(0.05, 20.0),
                  center=None, h_of=default_step, max_tries: int = 10_000) -> np.ndarray:
    """Seeded points with ``|x - center|^2`` log-uniform in ``t_range`` and admissible stencils."""
    c = np.zeros(4) if center is None else np.asarray(center, dtype=float)
    out = []
    tries = 0
    while len(out) < n:
        tries += 1
        if tries > max_tries:
            raise RuntimeError(f"{s.name}: could not find {n} admissible points")
        d = rng.normal(size=4)
        d /= np.linalg.norm(d)
        t = math.exp(rng.uniform(math.log(t_range[0]), math.log(t_range[1])))
        x = c + math.sqrt(t) * d
        h = h_of(x)
        # leave room for the h0 stencil and its 2h ball
        probe = np.concatenate([x[None], _stencil(x, 2.0 * h)], axis=0)
        if np.all(s.admissible(probe, h)):
            out.append(x)
    return np.array(out)


# --- one-sided checks at a C^1 interface ------------------------------------------

def one_sided_partials(fn: FieldFn, x: np.ndarray, h: float, signs: np.ndarray) -> np.ndarray:
    """Second-order one-sided differences ``(-3 w0 + 4 w1 - w2) / (2h)`` along ``signs[i] e_i``."""
    w0 = fn(x[None])[0]
    out = np.empty((4,) + w0.shape)
    for i in range(4):
        e = np.zeros(4)
        e[i] = signs[i] * h
        w = fn(np.stack([x + e, x + 2 * e]))
        out[i] = signs[i] * (-3.0 * w0 + 4.0 * w[0] - w[1]) / (2.0 * h)
    return out


def one_sided_residual(s: FieldSampler, x, h: float, side: str) -> float:
    """KW residual at a point of the interface ``|x|^2 = t0`` using stencils on one side.

    ``side="outer"`` steps each axis away from the origin, ``"inner"`` towards it,
    so that every stencil point lies on the chosen side for small ``h``.
    """
    x = forms.point(x).astype(float)
    if np.any(np.abs(x) < 4 * h):
        raise DomainGuardError("one-sided stencils need every |x_i| > 4h")
    signs = np.sign(x) * (1.0 if side == "outer" else -1.0)
    a = Su2OneForm(s.A(x[None])[0])
    p = Su2OneForm(s.phi(x[None])[0])
    F = _exterior(one_sided_partials(s.A, x, h, signs)) + forms.wedge_one_one(a, a)
    pp = forms.wedge_one_one(p, p)
    dap = (_exterior(one_sided_partials(s.phi, x, h, signs)) + forms.wedge_one_one(a, p)
           + forms.wedge_one_one(p, a))
    return float(twisted_residual_form(F, pp, dap, s.lam).norm())


def one_sided_curvature_jump(s: FieldSampler, x, h: float) -> float:
    """Norm of the difference between outer and inner one-sided ``F_A``."""
    x = forms.point(x).astype(float)
    a = Su2OneForm(s.A(x[None])[0])
    out = []
    for side in (1.0, -1.0):
        signs = np.sign(x) * side
        out.append(_exterior(one_sided_partials(s.A, x, h, signs)) + forms.wedge_one_one(a, a))
    return float((out[0] - out[1]).norm())


# --- samplers for the catalog ---------------------------------------------------------

def catalog_sampler(fam, literal: bool = False, g_scale: float = 1.0) -> FieldSampler:
    """Sampler for a catalog family.

    The guard keeps every evaluation ``max(1e-6, 10h)`` (in ``|x|^2``) away
    from poles and from the gluing sphere.  ``g_scale`` multiplies ``phi``
    (``1.1`` gives the corrupted negative control).
    """
    from .families import governing_system, profile
    from .radial import GUARD, eval_connection, eval_higgs

    p = profile(fam)
    sign = (1.0 if literal else fam.higgs_sign) * g_scale
    bad = list(p.singular_t) + ([fam.glue_t] if fam.glue_t else [])

    def A(pts):
        return eval_connection(p, pts, fam.conjugate).c

    def phi(pts):
        return sign * eval_higgs(p, pts, fam.conjugate).c

    def guard(pts, h):
        t = np.einsum("...i,...i->...", pts, pts)
        band = max(GUARD, 10.0 * h)
        ok = np.ones(t.shape, dtype=bool)
        for q in bad:
            ok &= np.abs(t - q) >= band
        return ok

    lam = 0.0 if governing_system(fam) == "asd" else -1.0
    name = fam.label + ("" if g_scale == 1.0 else f"[g*{g_scale:g}]")
    return FieldSampler(A, phi, guard, name, lam)
