"""Lower-bound functions and inequality chains behind the main energy
comparison, with certified interval verification.

Two bivariate bound functions live on the normalized triangle
0 < y < x <= 1 (x = a1/p, y = a2/p with p = -alpha1*alpha3):

* ``b1`` -- the degenerate-family minus-branch energy bound; certified > 1.
* ``b2`` -- the plus-branch analogue built from the squeeze functions
  ``f_aux <= g_aux``; certified > 0.9.

The chain audits (:func:`case_chain_check`, :func:`degenerate_c2_bounds_check`)
evaluate every displayed inequality of the underlying argument at a
parameter point and report which hold.  Two displays of the degenerate
minus branch are *not* pointwise truths: dividing the (possibly negative)
lower bound for the numerator of the angle slope by the upper end of the
c2 sandwich is only valid when that numerator bound is nonnegative, i.e.
when x + y >= 4/3.  Where it is negative the displayed slope bound, its
square, and (when the y-slope vanishes) the resulting Willmore bound all
fail on an open region, while every enclosing conclusion (the area bound,
E >= pi^2 B1, E > E_Cl) still holds with margin.  The audits report such
failures honestly rather than patching the chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Tuple

import numpy as np

from .family import (AlphaTriple, Branch, DerivedConstants, ModuliPoint,
                     derive_constants)
from .functionals import clifford_energy, energy_mironov
from .interval import (Box2, Certificate, CertStatus, Interval,
                       certify_lower_bound, sqrt)

DEFAULT_EPS = 1e-4


def _sq(v):
    return v.sq() if hasattr(v, "sq") else v * v


def _div_ext(num, den):
    """Division tolerating a denominator that touches zero at an endpoint
    (sign-definite numerator); dispatches per arithmetic engine."""
    if isinstance(num, Interval) or isinstance(den, Interval):
        from .interval import _ivl_div_extended
        num_i = num if isinstance(num, Interval) else Interval(num)
        den_i = den if isinstance(den, Interval) else Interval(den)
        return _ivl_div_extended(num_i, den_i)
    return num / den  # IntervalArray handles it; floats never hit 0 in-domain


@dataclass(frozen=True)
class TrianglePoint:
    """Normalized coordinates with 0 < y < x <= 1."""

    x: float
    y: float

    def __post_init__(self):
        if not (0.0 < self.y < self.x <= 1.0):
            raise ValueError(f"(x, y) = ({self.x}, {self.y}) outside 0 < y < x <= 1")


# ----------------------------------------------------------------------
# Bound functions (one generic expression serves floats, Interval and
# IntervalArray; .nonneg() clamps are justified by the domain clips)
# ----------------------------------------------------------------------


def _nonneg(v):
    return v.nonneg() if hasattr(v, "nonneg") else v


def b1_expr(x, y):
    """(16 + 8x + 8y - 7x^2 - 14xy - 7y^2) / (16 sqrt((2-x)(2-x-y)x))."""
    num = 16.0 + 8.0 * x + 8.0 * y - 7.0 * _sq(x) - 14.0 * x * y - 7.0 * _sq(y)
    den = 16.0 * sqrt(_nonneg((2.0 - x) * (2.0 - x - y) * x))
    return _div_ext(num, den)


def b1(t: TrianglePoint) -> float:
    return b1_expr(t.x, t.y)


def f_aux(t: TrianglePoint) -> float:
    """Lower squeeze function x^2 y^2 (2(2-x-y) - (x-y)^2/(2-x-y)) / (x-y)^2."""
    s, d = 2.0 - t.x - t.y, t.x - t.y
    return t.x * t.x * t.y * t.y * (2.0 * s - d * d / s) / (d * d)


def g_aux(t: TrianglePoint) -> float:
    """Upper squeeze function x^2 y^2 (2(2-x-y) - (x-y)^2/(2(2-x-y))) / (x-y)^2."""
    s, d = 2.0 - t.x - t.y, t.x - t.y
    return t.x * t.x * t.y * t.y * (2.0 * s - d * d / (2.0 * s)) / (d * d)


def b2(t: TrianglePoint) -> float:
    """Plus-branch bound, composed from f_aux and g_aux as displayed."""
    f, g = f_aux(t), g_aux(t)
    num = t.x + t.y + 0.25 * ((t.x + t.y) * f / (t.x * t.y) - t.x * t.y) ** 2 / g
    return num / math.sqrt(t.x + g / (t.x * t.y))


def b2_expr(x, y):
    """b2 after clearing the f/g compositions:

        b2 = (u + 2 (u s^2 - d^2)^2 / (s d^2 (4 s^2 - d^2)))
             / sqrt(x + x y (4 s^2 - d^2) / (2 s d^2)),

    u = x+y, s = 2-u, d = x-y.  Defined on y = 0 as well (only d = 0 is
    excluded); the single-fraction form avoids the catastrophic
    cancellation of the composed one near y = 0.
    """
    u = x + y
    s = _nonneg(2.0 - u)
    d = _nonneg(x - y)
    d2 = _sq(d)
    four_s2_d2 = _nonneg(4.0 * _sq(s) - d2)
    w = _div_ext(2.0 * _sq(u * _sq(s) - d2), s * d2 * four_s2_d2)
    den = sqrt(_nonneg(x + _div_ext(x * y * four_s2_d2, 2.0 * s * d2)))
    return _div_ext(u + w, den)


def b2_expanded(t: TrianglePoint) -> float:
    return b2_expr(t.x, t.y)


def b2_strip_lower_expr(x, rho):
    """Rigorous lower bound for b2 near the diagonal, in the coordinates
    (x, rho) with d = x - y = rho * x (so y = x (1 - rho)):

        b2 >= (u s^2 - d^2)^2 / (2 s^3 d sqrt(x (d^2 + 2 y s)))
            = ((2-rho) s^2 - x rho^2)^2
              / (2 s^3 rho sqrt(x rho^2 + 2 (1-rho) s)),

    where u = x (2-rho) and s = 2 - u.  The first line drops the additive
    u-term of b2 and bounds 4s^2 - d^2 <= 4s^2 and x + 2xys/d^2 <=
    x (d^2 + 2ys)/d^2; the second substitutes d = rho x, cancelling the
    x^2 that otherwise defeats interval evaluation at the origin corner.
    Tends to +inf as rho -> 0 (the diagonal); divisions treat rho and the
    radicand as positive, which the domain (x > y) guarantees.  Reliable
    for x bounded away from 1 (there s >= 2 - 2x > 0 keeps the numerator
    positive); the complementary corner chart handles x near 1.
    """
    u = x * (2.0 - rho)
    s = _nonneg(2.0 - u)
    s2 = _sq(s)
    num = _sq((2.0 - rho) * s2 - x * _sq(rho))
    den = 2.0 * s * s2 * rho * sqrt(_nonneg(x * _sq(rho) + 2.0 * (1.0 - rho) * s))
    return _div_ext(num, den)


def b2_strip_corner_expr(s, rho_s):
    """The same strip lower bound in the corner chart (s, rho_s) with
    s = 2 - x - y and d = rho_s * s (valid since d <= s on the triangle):

        b2 >= (2 - s - rho_s^2)^2
              / (2 rho_s sqrt(x s (s rho_s^2 + 2 y))),

    with x = 1 - s (1 - rho_s)/2 and y = 1 - s (1 + rho_s)/2.  The s^4
    factors cancel, so the expression stays regular at the (1, 1) corner
    (s -> 0) where the (x, rho) chart degenerates; on s <= 1/2, rho_s <= 1
    the numerator base 2 - s - rho_s^2 >= 1/2 is bounded away from zero.
    """
    x = 1.0 - s * (1.0 - rho_s) / 2.0
    y = 1.0 - s * (1.0 + rho_s) / 2.0
    num = _sq(2.0 - s - _sq(rho_s))
    den = 2.0 * rho_s * sqrt(_nonneg(x * s * (s * _sq(rho_s) + 2.0 * y)))
    return _div_ext(num, den)


# ----------------------------------------------------------------------
# Domain clips (vectorized over box arrays; conservative bounding boxes)
# ----------------------------------------------------------------------


def _shrink(xlo, xhi, ylo, yhi, eps, diag_gap, xy_cap):
    """Bounding box of the intersection with
    {y >= 0, y <= x - diag_gap, x <= 1, x >= eps, x + y <= xy_cap}."""
    for _ in range(2):
        xlo = np.maximum(np.maximum(xlo, eps), ylo + diag_gap)
        xhi = np.minimum(np.minimum(xhi, 1.0), xy_cap - ylo)
        ylo = np.maximum(ylo, 0.0)
        yhi = np.minimum(np.minimum(yhi, xhi - diag_gap), xy_cap - xlo)
    keep = (xlo <= xhi) & (ylo <= yhi)
    return xlo, xhi, ylo, yhi, keep


def clip_lemma4(eps: float):
    def clip(xlo, xhi, ylo, yhi):
        return _shrink(xlo, xhi, ylo, yhi, eps, 0.0, 2.0 - eps)
    return clip


def clip_lemma5(eps: float):
    def clip(xlo, xhi, ylo, yhi):
        return _shrink(xlo, xhi, ylo, yhi, eps, eps, 2.0)
    return clip


def clip_strip5(eps: float, x_cap: float):
    """The excluded diagonal band in (x, rho) coordinates: the second box
    dimension is rho = (x - y)/x, and the band x - y <= eps becomes
    x * rho <= eps (a hyperbola; boxes certainly beyond it are dropped)."""
    def clip(xlo, xhi, rlo, rhi):
        xlo = np.maximum(xlo, 0.0)
        xhi = np.minimum(xhi, x_cap)
        rlo = np.maximum(rlo, 0.0)
        rhi = np.minimum(rhi, 1.0)
        keep = (xlo <= xhi) & (rlo <= rhi) & (xlo * rlo <= eps)
        return xlo, xhi, rlo, rhi, keep
    return clip


def clip_strip5_corner(eps: float, s_cap: float):
    """Corner chart of the band: boxes in (s, rho_s) with s * rho_s <= eps."""
    def clip(slo, shi, rlo, rhi):
        slo = np.maximum(slo, 0.0)
        shi = np.minimum(shi, s_cap)
        rlo = np.maximum(rlo, 0.0)
        rhi = np.minimum(rhi, 1.0)
        keep = (slo <= shi) & (rlo <= rhi) & (slo * rlo <= eps)
        return slo, shi, rlo, rhi, keep
    return clip


def _point_in_lemma4(eps):
    return lambda x, y: 0.0 <= y <= x <= 1.0 and x >= eps and x + y <= 2.0 - eps


def _point_in_lemma5(eps):
    return lambda x, y: 0.0 <= y <= x - eps and x <= 1.0


# ----------------------------------------------------------------------
# Certified lemmas
# ----------------------------------------------------------------------


def _b1_point(x, y):
    return b1_expr(float(x), float(y))


def _strip_note_b1_left(eps: float) -> Tuple[float, str]:
    """Interval bound for b1 on the excluded strip 0 < x < eps, 0 <= y <= x."""
    X = Interval(0.0, eps)
    Y = Interval(0.0, eps)
    num = 16.0 + 8.0 * X + 8.0 * Y - 7.0 * X.sq() - 14.0 * X * Y - 7.0 * Y.sq()
    den = 16.0 * ((2.0 - X) * (2.0 - X - Y) * X).nonneg().sqrt()
    lo = num.lo / den.hi  # num > 0, den > 0 on the open strip
    return lo, (f"strip 0<x<{eps:g}: numerator >= {num.lo:.6g}, denominator <= "
                f"{den.hi:.6g}, so b1 >= {lo:.6g} there")


def _strip_note_b1_corner(eps: float) -> Tuple[float, str]:
    """Interval bound for b1 on the excluded strip x+y > 2-eps (forces
    x, y in [1-eps, 1] inside the triangle)."""
    X = Interval(1.0 - eps, 1.0)
    Y = Interval(1.0 - eps, 1.0)
    S = Interval(0.0, eps)  # 2 - x - y on the strip
    num = 16.0 + 8.0 * X + 8.0 * Y - 7.0 * X.sq() - 14.0 * X * Y - 7.0 * Y.sq()
    den = 16.0 * ((2.0 - X) * S * X).nonneg().sqrt()
    lo = num.lo / den.hi
    return lo, (f"strip x+y>{2 - eps:g}: numerator >= {num.lo:.6g}, denominator <= "
                f"{den.hi:.6g}, so b1 >= {lo:.6g} there")


def certify_lemma4(eps: float = DEFAULT_EPS, threshold: float = 1.0,
                   max_depth: int = 40, max_boxes: int = 10_000_000) -> Certificate:
    """Prove b1 > threshold on the triangle with the two blow-up strips
    (x < eps and x + y > 2 - eps) removed; the strips themselves carry
    one-box interval bounds recorded in the notes, so the full open
    triangle is covered."""
    lo1, note1 = _strip_note_b1_left(eps)
    lo2, note2 = _strip_note_b1_corner(eps)
    notes = [
        f"domain: 0 <= y <= x <= 1 with x >= {eps:g} and x + y <= {2 - eps:g}",
        note1, note2,
    ]
    if min(lo1, lo2) <= threshold:
        notes.append("WARNING: strip bounds do not clear the threshold")
    cert = certify_lower_bound(
        "B1", b1_expr, Box2.make(0.0, 1.0, 0.0, 1.0), threshold,
        clip=clip_lemma4(eps), point_in_domain=_point_in_lemma4(eps),
        point_fn=_b1_point, epsilon=eps, max_depth=max_depth,
        max_boxes=max_boxes, notes=notes)
    return cert


_STRIP_X_CAP = 0.875  # chart overlap: x <= 7/8 here, s <= 1/2 in the corner
_STRIP_S_CAP = 0.5    # chart; any band point has x <= 7/8 or s <= 0.2501


def lemma5_strip_certificates(eps: float = DEFAULT_EPS, threshold: float = 0.9,
                              max_depth: int = 40,
                              max_boxes: int = 10_000_000) -> List[Certificate]:
    """Prove b2 > threshold on the excluded diagonal band 0 < x - y <= eps
    via a rigorous lower bound that blows up on the diagonal.

    Two overlapping charts: (x, rho = d/x) for x <= 7/8 and, for the
    (1, 1) corner, (s, rho_s = d/s) for s <= 1/2.  Every band point lands
    in one of them (x > 7/8 forces s <= 2 - 2x + eps < 1/2)."""
    main = certify_lower_bound(
        "B2-diagonal-strip", b2_strip_lower_expr,
        Box2.make(0.0, _STRIP_X_CAP, 0.0, 1.0), threshold,
        clip=clip_strip5(eps, _STRIP_X_CAP),
        point_in_domain=lambda x, r: 0.0 < x <= _STRIP_X_CAP
        and 0.0 < r <= 1.0 and x * r <= eps,
        point_fn=lambda x, r: float(b2_strip_lower_expr(float(x), float(r))),
        epsilon=eps, max_depth=max_depth, max_boxes=max_boxes,
        notes=[f"band 0 < x - y <= {eps:g}, x <= {_STRIP_X_CAP:g}, in "
               "(x, (x-y)/x) coordinates; target is a proven lower bound "
               "for b2 that tends to +inf on the diagonal"])
    corner = certify_lower_bound(
        "B2-diagonal-strip-corner", b2_strip_corner_expr,
        Box2.make(0.0, _STRIP_S_CAP, 0.0, 1.0), threshold,
        clip=clip_strip5_corner(eps, _STRIP_S_CAP),
        point_in_domain=lambda s, r: 0.0 < s <= _STRIP_S_CAP
        and 0.0 < r <= 1.0 and s * r <= eps,
        point_fn=lambda s, r: float(b2_strip_corner_expr(float(s), float(r))),
        epsilon=eps, max_depth=max_depth, max_boxes=max_boxes,
        notes=[f"band 0 < x - y <= {eps:g} near (1, 1): s = 2-x-y <= "
               f"{_STRIP_S_CAP:g}, in (s, (x-y)/s) coordinates"])
    return [main, corner]


def certify_lemma5(eps: float = DEFAULT_EPS, threshold: float = 0.9,
                   max_depth: int = 40, max_boxes: int = 10_000_000,
                   with_strip: bool = True) -> Certificate:
    """Prove b2 > threshold on {0 <= y <= x - eps, x <= 1} (the full
    triangle minus the diagonal band; the band has its own certificate).

    The certified function is the plus-branch bound b2; the minus-branch
    bound b1 exceeds 0.9 a fortiori wherever b1 > 1 is certified.
    """
    notes = [
        f"domain: 0 <= y <= x - {eps:g}, x <= 1 (includes the y = 0 edge; "
        "the expanded single-fraction form of b2 is regular there)",
        "the certified target is the plus-branch bound function; the "
        "sometimes-reused label B1 for this claim is a misprint -- "
        "b1 > 0.9 already follows from the b1 > 1 certificate",
    ]
    if with_strip:
        for strip in lemma5_strip_certificates(eps, threshold, max_depth, max_boxes):
            notes.append(
                f"diagonal band covered by companion certificate "
                f"'{strip.target}': status {strip.status.value}, "
                f"{strip.retained_count} boxes, digest {strip.box_digest()[:16]}")
            if strip.status is not CertStatus.PROVED:
                notes.append("WARNING: diagonal band certification incomplete")
    return certify_lower_bound(
        "B2", b2_expr, Box2.make(0.0, 1.0, 0.0, 1.0), threshold,
        clip=clip_lemma5(eps), point_in_domain=_point_in_lemma5(eps),
        point_fn=lambda x, y: b2_expr(float(x), float(y)),
        epsilon=eps, max_depth=max_depth, max_boxes=max_boxes, notes=notes)


# ----------------------------------------------------------------------
# Scalar bounds with monotone tails
# ----------------------------------------------------------------------


def scalar_bound_1(x):
    """(1 + 9x/49) / sqrt(1 + x); exceeds 4/(3 sqrt(3)) for all x > 0."""
    return (1.0 + 9.0 * x / 49.0) / sqrt(_nonneg(1.0 + x))


def scalar_bound_2(x):
    """sqrt(8/7) (1 + x/4) / sqrt(1 + 3x/2); exceeds 4/(3 sqrt(3))."""
    return sqrt(_nonneg((8.0 / 7.0) * _sq(1.0 + x / 4.0) / (1.0 + 1.5 * x)))


def comparison_threshold() -> Interval:
    """Enclosure of 4 / (3 sqrt(3)), the Clifford ratio constant."""
    return Interval(4.0) / (3.0 * Interval(3.0).sqrt())


@dataclass
class TailRecord:
    """Interval-checked monotone-tail argument for x >= x_max.

    The cleared-denominator difference D(x) = numerator(x)^2 - c^2 *
    denominator(x) is a quadratic with positive leading coefficient; if
    D'(x_max) > 0 and D(x_max) > 0 then the scalar bound holds beyond
    x_max.
    """

    label: str
    x_max: float
    second_derivative: float
    dprime_lower: float
    d_lower: float

    @property
    def holds(self) -> bool:
        return (self.second_derivative > 0 and self.dprime_lower > 0
                and self.d_lower > 0)


def _tail_record_1(x_max: float) -> TailRecord:
    # D(x) = (1 + 9x/49)^2 - (16/27)(1 + x)
    X = Interval(x_max)
    d_val = (1.0 + 9.0 * X / 49.0).sq() - (16.0 * (1.0 + X)) / 27.0
    dprime = (162.0 * X) / 2401.0 + (Interval(18.0) / 49.0 - Interval(16.0) / 27.0)
    return TailRecord("(1+9x/49)/sqrt(1+x)", x_max, 162.0 / 2401.0,
                      dprime.lo, d_val.lo)


def _tail_record_2(x_max: float) -> TailRecord:
    # D(x) = (8/7)(1 + x/4)^2 - (16/27)(1 + 3x/2)
    X = Interval(x_max)
    d_val = (8.0 * (1.0 + X / 4.0).sq()) / 7.0 - (16.0 * (1.0 + 1.5 * X)) / 27.0
    dprime = X / 7.0 + (Interval(4.0) / 7.0 - Interval(8.0) / 9.0)
    return TailRecord("sqrt(8/7)(1+x/4)/sqrt(1+3x/2)", x_max, 1.0 / 7.0,
                      dprime.lo, d_val.lo)


@dataclass
class ScalarBoundReport:
    certificates: List[Certificate]
    tails: List[TailRecord]
    threshold: float

    @property
    def all_proved(self) -> bool:
        return (all(c.status is CertStatus.PROVED for c in self.certificates)
                and all(t.holds for t in self.tails))


def _clip_1d(x_max: float):
    def clip(xlo, xhi, ylo, yhi):
        xlo = np.maximum(xlo, 0.0)
        xhi = np.minimum(xhi, x_max)
        keep = xlo <= xhi
        return xlo, xhi, ylo, yhi, keep
    return clip


def _certify_scalar(label: str, expr: Callable, x_max: float, threshold: float,
                    max_depth: int, max_boxes: int) -> Certificate:
    return certify_lower_bound(
        label, lambda X, Y: expr(X), Box2.make(0.0, x_max, 0.0, 0.0),
        threshold, clip=_clip_1d(x_max),
        point_in_domain=lambda x, y: 0.0 <= x <= x_max,
        point_fn=lambda x, y: float(expr(float(x))),
        epsilon=0.0, max_depth=max_depth, max_boxes=max_boxes,
        notes=[f"1D domain [0, {x_max:g}]; monotone tail certified separately"])


def scalar_bound_checks(x_max: float = 100.0, max_depth: int = 60,
                        max_boxes: int = 10_000_000) -> ScalarBoundReport:
    """Certify both scalar comparison functions above 4/(3 sqrt(3)) on
    (0, x_max] by interval subdivision, plus the monotone tails."""
    thr = comparison_threshold().hi
    certs = [
        _certify_scalar("scalar-1", scalar_bound_1, x_max, thr, max_depth, max_boxes),
        _certify_scalar("scalar-2", scalar_bound_2, x_max, thr, max_depth, max_boxes),
    ]
    tails = [_tail_record_1(x_max), _tail_record_2(x_max)]
    return ScalarBoundReport(certificates=certs, tails=tails, threshold=thr)


# ----------------------------------------------------------------------
# Chain audits
# ----------------------------------------------------------------------


@dataclass
class ChainStep:
    name: str
    lhs: float
    rhs: float
    relation: str  # ">=" or ">"
    holds: bool
    note: str = ""


@dataclass
class ChainReport:
    alpha: Tuple[int, int, int]
    a1: float
    a2: float
    branch: str
    case_label: str
    steps: List[ChainStep] = field(default_factory=list)

    @property
    def failing(self) -> List[ChainStep]:
        return [s for s in self.steps if not s.holds]

    @property
    def all_hold(self) -> bool:
        return not self.failing


def _step(report: ChainReport, name: str, lhs: float, rhs: float,
          relation: str = ">=", note: str = "", slack: float = 0.0) -> None:
    if relation == ">=":
        ok = lhs >= rhs - slack
    else:
        ok = lhs > rhs
    report.steps.append(ChainStep(name, float(lhs), float(rhs), relation, bool(ok), note))


def _identity_step(report: ChainReport, name: str, lhs: float, rhs: float,
                   rel_tol: float = 1e-9) -> None:
    scale = max(1.0, abs(lhs), abs(rhs))
    ok = abs(lhs - rhs) <= rel_tol * scale
    report.steps.append(ChainStep(name, float(lhs), float(rhs), "==", bool(ok), ""))


def classify_case(alpha: AlphaTriple, d: DerivedConstants) -> int:
    """Proof-branch trichotomy for alpha2 > 0: 1 if (a1+a2)a3 >=
    (7/4)(a1 a2 - b c1), else 2 if alpha1 > -(3/2) alpha2 alpha3, else 3."""
    if (d.a1 + d.a2) * d.a3 >= 1.75 * (d.a1 * d.a2 - alpha.b * alpha.c1):
        return 1
    if alpha.alpha1 > -1.5 * alpha.alpha2 * alpha.alpha3:
        return 2
    return 3


def case_chain_check(alpha: AlphaTriple, a1: float, a2: float,
                     branch: Branch, tol: float = 1e-11) -> ChainReport:
    """Audit the alpha2 > 0 proof chain at one feasible point: classify
    the branch and numerically assert each displayed inequality."""
    if not (alpha.is_normalized and alpha.alpha2 > 0):
        raise ValueError("case_chain_check requires normalized alpha with alpha2 > 0")
    d = derive_constants(alpha, ModuliPoint(a1, a2, branch))
    fv = energy_mironov(d, 1, tol)
    E, ECl = fv.energy, clifford_energy()
    b, c1 = alpha.b, alpha.c1
    a3, aa = d.a3, d.slope_x
    case = classify_case(alpha, d)
    rep = ChainReport(alpha.weights, a1, a2, branch.value, f"case-{case}")
    sq15 = math.sqrt(a1 + a3)
    E0 = math.pi ** 2 * (a1 + a2 + (aa * aa + b * b) / 4.0) / sq15
    _step(rep, "E > pi^2 (a1+a2+(a^2+b^2)/4)/sqrt(a1+a3)", E, E0, ">")
    thr = 4.0 / (3.0 * math.sqrt(3.0))
    if case == 1:
        _identity_step(rep, "a^2 = ((a1+a2)a3 - (a1 a2 - b c1))^2 / c2^2",
                       aa * aa, ((a1 + a2) * a3 - (a1 * a2 - b * c1)) ** 2 / d.c2 ** 2)
        rhs1 = (9.0 / 49.0) * (a1 + a2) ** 2 * a3 ** 2 / d.c2 ** 2
        _step(rep, "a^2 >= (9/49)(a1+a2)^2 a3^2/c2^2", aa * aa, rhs1,
              slack=1e-12 * max(1.0, aa * aa))
        rhs2 = (9.0 / 49.0) * (a1 + a2) ** 2 * a3 / (a1 * a2)
        _step(rep, "a^2 >= (9/49)(a1+a2)^2 a3/(a1 a2)", aa * aa, rhs2,
              slack=1e-12 * max(1.0, aa * aa))
        _step(rep, "a2 >= 1 (box lower end)", a2, 1.0)
        mid = math.pi ** 2 * (a1 + 9.0 * a3 / 49.0) / sq15
        _step(rep, "pi^2(a1+a2+(a^2+b^2)/4)/sqrt > pi^2(a1+9a3/49)/sqrt", E0, mid, ">")
        x = a3 / a1
        _step(rep, "(1+9x/49)/sqrt(1+x) > 4/(3 sqrt 3) at x=a3/a1",
              scalar_bound_1(x), thr, ">")
    elif case == 2:
        _step(rep, "alpha1 < -3b", -3 * b, alpha.alpha1, ">")
        _step(rep, "-b c1/(a1+a2) < (3/2) b^2", 1.5 * b * b, -b * c1 / (a1 + a2), ">")
        den1 = a1 + 1.75 * (a1 * a2 - b * c1) / (a1 + a2)
        _step(rep, "E0 > pi^2 (a1+a2+b^2/4)/sqrt(a1 + (7/4)(a1a2-bc1)/(a1+a2))",
              E0, math.pi ** 2 * (a1 + a2 + b * b / 4.0) / math.sqrt(den1), ">")
        den2 = a1 + 1.75 * a2 + (21.0 / 8.0) * b * b
        _step(rep, "denominator step: a1+(7/4)(a1a2-bc1)/(a1+a2) < a1+(7/4)a2+(21/8)b^2",
              den2, den1, ">")
        _step(rep, "a1 + a2 > 2", a1 + a2, 2.0, ">")
        z = b * b / (a1 + a2)
        _step(rep, "sqrt(8/7)(1+z/4)/sqrt(1+3z/2) > 4/(3 sqrt 3) at z=b^2/(a1+a2)",
              scalar_bound_2(z), thr, ">")
    else:
        _step(rep, "-b c1 <= -2 alpha1^2 alpha2 alpha3",
              -2 * alpha.alpha1 ** 2 * alpha.alpha2 * alpha.alpha3, -b * c1)
        _step(rep, "-2 alpha1^2 alpha2 alpha3 < (9/2) a1 a2^2",
              4.5 * a1 * a2 * a2, -2 * alpha.alpha1 ** 2 * alpha.alpha2 * alpha.alpha3, ">")
        t = a2 / a1
        val = (1 + t) * math.sqrt(1 + t) / math.sqrt(1 + 2.75 * t + 7.875 * t * t)
        _step(rep, "(1+t)^{3/2}/sqrt(1+(11/4)t+(63/8)t^2) > 4/(3 sqrt 3) at t=a2/a1",
              val, thr, ">")
    _step(rep, "E > E_Cl", E, ECl, ">")
    return rep


def degenerate_c2_bounds_check(alpha: AlphaTriple, a1: float, a2: float,
                               branch: Branch, tol: float = 1e-11) -> ChainReport:
    """Audit the alpha2 = 0 chain at one point: reduced feasibility forms,
    the square-root squeeze, the c2^2 and a3 sandwiches, and the displayed
    slope/area/Willmore/energy bounds down to E >= pi^2 B1 (minus branch)
    or E >= pi^2 B2 (plus branch)."""
    if alpha.alpha2 != 0 or not alpha.is_ordered or alpha.alpha1 <= 0:
        raise ValueError("degenerate_c2_bounds_check requires alpha2 = 0")
    p = alpha.p
    x, y = a1 / p, a2 / p
    if not (0.0 < y < x <= 1.0):
        raise ValueError(f"(a1/p, a2/p) = ({x}, {y}) outside the triangle")
    d = derive_constants(alpha, ModuliPoint(a1, a2, branch))
    fv = energy_mironov(d, 1, tol)
    A, W, E = fv.area, fv.willmore, fv.energy
    b = alpha.b
    aa, a3, c2 = d.slope_x, d.a3, d.c2
    s, dd, u = 2.0 - x - y, x - y, x + y
    rep = ChainReport(alpha.weights, a1, a2, branch.value, f"degenerate-{branch.value}")
    sp = math.sqrt(p)
    slack = 1e-11

    _step(rep, "reduced feasibility: p^5 x^2 y^2 (x+y-2) <= 0",
          0.0, p ** 5 * x * x * y * y * (u - 2.0), slack=1e-15)
    _step(rep, "reduced feasibility: 4 p^10 x^4 y^4 (1-x)(1-y) >= 0",
          4.0 * p ** 10 * x ** 4 * y ** 4 * (1 - x) * (1 - y), 0.0)
    root = math.sqrt(s * s - dd * dd)
    _step(rep, "squeeze lower: s - d^2/s <= sqrt(s^2-d^2)", root, s - dd * dd / s,
          slack=slack)
    _step(rep, "squeeze upper: sqrt(s^2-d^2) <= s - d^2/(2s)",
          s - dd * dd / (2.0 * s), root, slack=slack)

    if branch is Branch.MINUS:
        lo_c2 = p ** 3 * x * x * y * y / (2.0 * s)
        hi_c2 = p ** 3 * x * x * y * y / s
        _step(rep, "c2^2 >= p^3 x^2 y^2/(2s)", c2 * c2, lo_c2, slack=slack * lo_c2)
        _step(rep, "c2^2 <= p^3 x^2 y^2/s", hi_c2, c2 * c2, slack=slack * hi_c2)
        _step(rep, "a3 >= p xy/(2s)", a3, p * x * y / (2.0 * s), slack=slack)
        _step(rep, "a3 <= p xy/s", p * x * y / s, a3, slack=slack)
        den = math.sqrt(x + x * y / s)
        _step(rep, "A >= pi^2 sqrt(p)(x+y)/sqrt(x+xy/s)", A,
              math.pi ** 2 * sp * u / den, slack=slack)
        beta = u / (2.0 * s) - 1.0
        first = (u * p * p * x * y / (2.0 * s) - x * y * p * p) / c2
        _step(rep, "a >= ((a1+a2) p xy/(2s) - a1 a2)/c2", aa, first, slack=slack)
        gap = "" if beta >= 0 else \
            "display divides a negative bracket by the sandwich's upper end; " \
            "only valid for x+y >= 4/3"
        _step(rep, "((a1+a2) p xy/(2s) - a1 a2)/c2 >= sqrt(p) beta sqrt(s)",
              first, sp * beta * math.sqrt(s), slack=slack, note=gap)
        _step(rep, "W >= 2 pi^2 a^2/sqrt(a1+a3)", W,
              2.0 * math.pi ** 2 * aa * aa / math.sqrt(a1 + a3), slack=slack)
        wb = 2.0 * math.pi ** 2 * sp * beta * beta * s / den
        _step(rep, "2 pi^2 a^2/sqrt(a1+a3) >= 2 pi^2 sqrt(p) beta^2 s/sqrt(x+xy/s)",
              2.0 * math.pi ** 2 * aa * aa / math.sqrt(a1 + a3), wb,
              slack=slack, note=gap and "squared form of the previous display")
        _step(rep, "W >= 2 pi^2 sqrt(p) beta^2 s/sqrt(x+xy/s)", W, wb,
              slack=slack, note=gap and "resulting Willmore bound")
        eb = math.pi ** 2 * sp * (u + 0.25 * beta * beta * s) / den
        _step(rep, "E >= pi^2 sqrt(p)(x+y+beta^2 s/4)/sqrt(x+xy/s)", E, eb, slack=slack)
        _step(rep, "E >= pi^2 B1 (using p >= 1)", E,
              math.pi ** 2 * b1(TrianglePoint(x, y)), slack=slack)
    else:
        t = TrianglePoint(x, y)
        f, g = f_aux(t), g_aux(t)
        _step(rep, "f <= g", g, f, slack=slack)
        _step(rep, "c2^2 >= p^3 f", c2 * c2, p ** 3 * f, slack=slack * max(1, p ** 3 * f))
        _step(rep, "c2^2 <= p^3 g", p ** 3 * g, c2 * c2, slack=slack * max(1, p ** 3 * g))
        _step(rep, "a3 >= p f/(xy)", a3, p * f / (x * y), slack=slack)
        _step(rep, "a3 <= p g/(xy)", p * g / (x * y), a3, slack=slack)
        den = math.sqrt(x + g / (x * y))
        _step(rep, "A >= pi^2 sqrt(p)(x+y)/sqrt(x+g/xy)", A,
              math.pi ** 2 * sp * u / den, slack=slack)
        gam = u * f / (x * y) - x * y
        _step(rep, "a >= sqrt(p)((x+y)f/(xy) - xy)/sqrt(g)", aa,
              sp * gam / math.sqrt(g), slack=slack)
        _step(rep, "W >= 2 pi^2 a^2/sqrt(a1+a3)", W,
              2.0 * math.pi ** 2 * aa * aa / math.sqrt(a1 + a3), slack=slack)
        wb = 2.0 * math.pi ** 2 * sp * gam * gam / (g * den)
        _step(rep, "W >= 2 pi^2 sqrt(p)((x+y)f/xy - xy)^2/(g sqrt(x+g/xy))", W, wb,
              slack=slack)
        eb = math.pi ** 2 * sp * (u + 0.25 * gam * gam / g) / den
        _step(rep, "E >= pi^2 sqrt(p)(x+y+((x+y)f/xy-xy)^2/(4g))/sqrt(x+g/xy)",
              E, eb, slack=slack)
        _step(rep, "E >= pi^2 B2 (using p >= 1)", E,
              math.pi ** 2 * b2(t), slack=slack)
    _step(rep, "E > E_Cl", E, clifford_energy(), ">")
    return rep
