"""Catalog of the closed-form radial solutions.

Rational profiles are stored as numerator/denominator polynomials so that
derivatives are exact and poles are the nonnegative real roots of the
denominator.  Tags:

``f1``, ``f2``
    The two lam = -1 branches sharing ``g = 3C(Ct+1)/((C^2t^2+4Ct+1)(Ct-1))``.
``glued_plus``
    ``f1`` for ``t <= 1/C`` and ``f2`` beyond, ``C^1`` across the sphere.
``conj_glued_minus``
    The same profile in the conjugate direction ``Im(x dxbar)``.
``thooft``
    ``(1/(1+t), 0)``, anti-self-dual.
``alt_asd``
    ``(t/(t^2-1), sqrt(3)/(t^2-1))``.
``tan``
    ``(1/(2t), tan(-ln(t)/2 + C)/(2t))``; poles accumulate at ``t = 0``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Polynomial as P

from .forms import Su2OneForm
from .radial import RadialProfile, eval_connection, eval_higgs


class Variant(str, enum.Enum):
    F1 = "f1"
    F2 = "f2"
    GLUED_PLUS = "glued_plus"
    CONJ_GLUED_MINUS = "conj_glued_minus"
    THOOFT = "thooft"
    ALT_ASD = "alt_asd"
    TAN = "tan"


@dataclass(frozen=True)
class Rational:
    """``num / prod(factor_k ** m_k)`` with the denominator kept factored.

    Evaluating each factor separately keeps full relative accuracy next to
    a simple root, where the expanded denominator would cancel.
    """

    num: P
    factors: tuple = ()  # ((P, multiplicity), ...)

    def _den(self, t):
        out = np.ones_like(t)
        for q, m in self.factors:
            out = out * q(t) ** m
        return out

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.num(t) / self._den(t)

    def deriv(self):
        num, dnum, factors = self.num, self.num.deriv(), self.factors

        def d(t):
            t = np.asarray(t, dtype=float)
            log_d = np.zeros_like(t)
            for q, m in factors:
                log_d = log_d + m * q.deriv()(t) / q(t)
            return (dnum(t) - num(t) * log_d) / self._den(t)

        return d

    def times_t(self) -> "Rational":
        facs = list(self.factors)
        for k, (q, m) in enumerate(facs):
            if q.degree() == 1 and q.coef[0] == 0.0:
                scale = q.coef[1]
                facs[k] = (q, m - 1)
                return Rational(self.num * (1.0 / scale), tuple(f for f in facs if f[1] > 0))
        return Rational(self.num * P([0.0, 1.0]), self.factors)

    def poles(self) -> tuple:
        if not np.any(self.num.coef):
            return ()
        out = []
        for q, _ in self.factors:
            if q.degree() < 1:
                continue
            for r in q.roots():
                if abs(r.imag) < 1e-12 and r.real >= -1e-15:
                    rr = max(float(r.real), 0.0)
                    if abs(self.num(rr)) > 1e-12 * np.abs(self.num.coef).max():
                        out.append(rr)
        return tuple(sorted(set(out)))


T = P([0.0, 1.0])


def _D(C: float) -> P:
    return P([1.0, 4.0 * C, C * C])


def g_shared(C: float) -> Rational:
    return Rational(P([3.0 * C, 3.0 * C * C]), ((P([-1.0, C]), 1), (_D(C), 1)))


def g_alternate(C: float) -> Rational:
    """The other ``g`` printed alongside ``f2``; kept only for the deciding experiment."""
    return Rational(P([3.0 * C, -3.0 * C * C]), ((P([1.0, C]), 1), (_D(C), 1)))


def f1_rational(C: float) -> Rational:
    return Rational(P([3.0 * C]), ((_D(C), 1),))


def f2_rational(C: float) -> Rational:
    return Rational(P([1.0, C, C * C]), ((T, 1), (_D(C), 1)))


def _from_rationals(f: Rational, g: Rational, name: str, **meta) -> RadialProfile:
    df, dg = f.deriv(), g.deriv()
    ft = f.times_t()
    dft = ft.deriv()
    meta = dict(meta, f_rational=f, g_rational=g)
    return RadialProfile(f, g, df, dg, f.poles(), g.poles(), name, ft, dft, meta)


@dataclass(frozen=True)
class SolutionFamily:
    variant: Variant
    C: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        object.__setattr__(self, "C", float(self.C))

    @property
    def conjugate(self) -> bool:
        return self.variant is Variant.CONJ_GLUED_MINUS

    @property
    def higgs_sign(self) -> float:
        """Sign in front of ``phi``.

        Conjugating ``x`` reverses orientation, which flips the sign of the
        ``*d_A phi`` term; negating ``phi`` restores the equations.
        """
        return -1.0 if self.conjugate else 1.0

    @property
    def glue_t(self) -> float | None:
        if self.variant in (Variant.GLUED_PLUS, Variant.CONJ_GLUED_MINUS) and self.C > 0:
            return 1.0 / self.C
        return None

    @property
    def label(self) -> str:
        if self.variant in (Variant.THOOFT, Variant.ALT_ASD):
            return self.variant.value
        return f"{self.variant.value}(C={self.C:g})"

    def profile(self) -> RadialProfile:
        return profile(self)

    def to_json(self) -> dict:
        return {"variant": self.variant.value, "C": self.C}


def _glued(C: float, name: str) -> RadialProfile:
    if C <= 0:
        raise ValueError("glued solutions need C > 0")
    f1, f2, g = f1_rational(C), f2_rational(C), g_shared(C)
    df1, df2, dg = f1.deriv(), f2.deriv(), g.deriv()
    ft1, ft2 = f1.times_t(), f2.times_t()
    dft1, dft2 = ft1.deriv(), ft2.deriv()
    tg = 1.0 / C

    def pick(a, b):
        return lambda t: np.where(np.asarray(t, dtype=float) <= tg, a(t), b(t))

    # f2 has a pole at t = 0, but only the f1 branch is used there
    return RadialProfile(
        lambda t: _safe_pick(t, tg, f1, f2),
        g,
        lambda t: _safe_pick(t, tg, df1, df2),
        dg,
        (),
        g.poles(),
        name,
        pick(ft1, ft2),
        pick(dft1, dft2),
        {"glue_t": tg},
    )


def _safe_pick(t, tg, inner, outer):
    t = np.asarray(t, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(t <= tg, inner(t), outer(t))


def _tan_profile(C: float) -> RadialProfile:
    def theta(t):
        return -0.5 * np.log(t) + C

    def g(t):
        t = np.asarray(t, dtype=float)
        return np.tan(theta(t)) / (2.0 * t)

    def dg(t):
        t = np.asarray(t, dtype=float)
        T = np.tan(theta(t))
        return -(1.0 + T * T) / (4.0 * t * t) - T / (2.0 * t * t)

    f = lambda t: 0.5 / np.asarray(t, dtype=float)
    df = lambda t: -0.5 / np.asarray(t, dtype=float) ** 2
    half = lambda t: np.full_like(np.asarray(t, dtype=float), 0.5)
    zero = lambda t: np.zeros_like(np.asarray(t, dtype=float))
    return RadialProfile(f, g, df, dg, (0.0,), tan_poles(C), f"tan(C={C:g})", half, zero,
                         {"dense_poles": True})


def tan_poles(C: float, t_min: float = 1e-300, t_max: float = 1e300) -> tuple:
    """Poles ``t = exp(2C - pi - 2 n pi)`` of the tan family inside a window."""
    lo, hi = math.log(t_min), math.log(t_max)
    n_lo = math.ceil((2 * C - math.pi - hi) / (2 * math.pi))
    n_hi = math.floor((2 * C - math.pi - lo) / (2 * math.pi))
    return tuple(sorted(math.exp(2 * C - math.pi - 2 * n * math.pi) for n in range(n_lo, n_hi + 1)))


def profile(fam: SolutionFamily) -> RadialProfile:
    C = fam.C
    v = fam.variant
    if v is Variant.F1:
        return _from_rationals(f1_rational(C), g_shared(C), fam.label)
    if v is Variant.F2:
        if C == 0.0:
            return _from_rationals(Rational(P([1.0]), ((T, 1),)), Rational(P([0.0])), fam.label)
        return _from_rationals(f2_rational(C), g_shared(C), fam.label)
    if v in (Variant.GLUED_PLUS, Variant.CONJ_GLUED_MINUS):
        return _glued(C, fam.label)
    if v is Variant.THOOFT:
        return _from_rationals(Rational(P([1.0]), ((P([1.0, 1.0]), 1),)), Rational(P([0.0])), fam.label)
    if v is Variant.ALT_ASD:
        den = ((P([-1.0, 1.0]), 1), (P([1.0, 1.0]), 1))
        return _from_rationals(Rational(T, den), Rational(P([math.sqrt(3.0)]), den), fam.label)
    if v is Variant.TAN:
        return _tan_profile(C)
    raise ValueError(f"unknown variant {v}")


def alternate_pairing_profile(C: float = 1.0) -> RadialProfile:
    """``f2`` paired with :func:`g_alternate` (expected to fail the ODEs)."""
    return _from_rationals(f2_rational(C), g_alternate(C), f"f2_g_alt(C={C:g})")


def glued_u_c1_check(C: float, h: float) -> tuple[float, float]:
    """Jump of ``tf`` and of one-sided difference quotients of ``u = tf - 1/2`` at ``t = 1/C``."""
    if not 0 < h < 1.0 / (2.0 * C):
        raise ValueError("need 0 < h < 1/(2C)")
    tg = 1.0 / C
    f1t, f2t = f1_rational(C).times_t(), f2_rational(C).times_t()
    jump = float(f2t(tg) - f1t(tg))
    left = (float(f1t(tg)) - float(f1t(tg - h))) / h
    right = (float(f2t(tg + h)) - float(f2t(tg))) / h
    return jump, abs(right - left)


def conjugate_form(fam: SolutionFamily, x) -> Su2OneForm:
    """``Im(f(t) x dxbar)`` for the family's ``f``."""
    return eval_connection(profile(fam), x, conjugate=True)


def fields(fam: SolutionFamily, x, literal: bool = False) -> tuple[Su2OneForm, Su2OneForm]:
    """``(A, phi)`` of a catalog family at ``x``.

    ``literal=True`` drops the orientation sign on ``phi`` for the conjugate
    family (negative control).
    """
    p = profile(fam)
    a = eval_connection(p, x, fam.conjugate)
    phi = eval_higgs(p, x, fam.conjugate)
    sign = 1.0 if literal else fam.higgs_sign
    return a, phi * sign


def catalog(Cs=(0.5, 1.0, 2.0)) -> list[SolutionFamily]:
    out = []
    for C in Cs:
        out += [SolutionFamily(Variant.F1, C), SolutionFamily(Variant.F2, C),
                SolutionFamily(Variant.GLUED_PLUS, C), SolutionFamily(Variant.CONJ_GLUED_MINUS, C)]
    out += [SolutionFamily(Variant.THOOFT), SolutionFamily(Variant.ALT_ASD)]
    return out


def governing_system(fam: SolutionFamily) -> str:
    """``"kw"`` (lam = -1) or ``"asd"`` (lam = 0)."""
    return "asd" if fam.variant in (Variant.THOOFT, Variant.ALT_ASD) else "kw"


def table(fam: SolutionFamily, t) -> np.ndarray:
    """Columns t, f, g sampled on admissible points of ``t``."""
    p = profile(fam)
    t = np.asarray(t, dtype=float)
    t = t[p.admissible(t)]
    return np.column_stack([t, p.f(t), p.g(t)])


__all__ = [
    "Variant", "SolutionFamily", "Rational", "profile", "catalog", "glued_u_c1_check",
    "conjugate_form", "alternate_pairing_profile", "fields", "tan_poles", "g_shared", "g_alternate",
    "f1_rational", "f2_rational", "governing_system", "table",
]
