"""Area, Willmore and energy functionals for the three torus families.

The energy is E = A + W/8.  For the two-parameter family, A comes from
one-period quadrature of the conformal factor, W has the closed form
2 pi N T (a^2 + b^2) in the Lagrangian-angle slopes, and everything
scales linearly in the period count N, so the energy ratio is evaluated
at N = 1 (where E/E_Cl > 1 is hardest).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import InfeasibleParameters
from .family import (AlphaTriple, Branch, DerivedConstants, ModuliPoint,
                     conformal_factor, derive_constants, lemma3_box)

_QUAD_TOL = 1e-11


def clifford_energy() -> float:
    """Energy of the Clifford torus, 4 pi^2 / (3 sqrt(3))."""
    return 4.0 * math.pi ** 2 / (3.0 * math.sqrt(3.0))


@dataclass(frozen=True)
class HomogeneousParams:
    """Radii of a homogeneous torus; must sit on the unit sphere."""

    r1: float
    r2: float
    r3: float

    def __post_init__(self):
        if min(self.r1, self.r2, self.r3) <= 0:
            raise ValueError("homogeneous radii must be positive")
        n = self.r1**2 + self.r2**2 + self.r3**2
        if abs(n - 1.0) > 1e-12:
            raise ValueError(f"r1^2+r2^2+r3^2 = {n!r} != 1")


def homogeneous_energy(params: HomogeneousParams) -> float:
    """pi^2 (1-r1^2)(1-r2^2)(1-r3^2) / (2 r1 r2 r3); minimized exactly at
    the symmetric point r_i = 1/sqrt(3), where it equals clifford_energy()."""
    r1, r2, r3 = params.r1, params.r2, params.r3
    return (math.pi ** 2 * (1 - r1 * r1) * (1 - r2 * r2) * (1 - r3 * r3)
            / (2.0 * r1 * r2 * r3))


@dataclass(frozen=True)
class FunctionalValues:
    area: float
    willmore: float
    energy: float
    ratio: float  # energy / clifford_energy()


def period_integral(d: DerivedConstants, tol: float = _QUAD_TOL) -> float:
    """Integral of the conformal factor over one period."""
    val, _ = quad(lambda x: conformal_factor(x, d), 0.0, d.period,
                  epsabs=tol, epsrel=1e-12, limit=300)
    return val


def area_mironov(d: DerivedConstants, n_periods: int = 1, tol: float = _QUAD_TOL) -> float:
    """A = 2 pi N * integral_0^T (2 e^v) dx, by one-period quadrature."""
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    return 2.0 * math.pi * n_periods * period_integral(d, tol)


def willmore_mironov(d: DerivedConstants, n_periods: int = 1) -> float:
    """W = 2 pi N T (a^2 + b^2), the closed form."""
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    return (2.0 * math.pi * n_periods * d.period
            * (d.slope_x ** 2 + d.slope_y ** 2))


def willmore_quadrature(d: DerivedConstants, n_periods: int = 1,
                        tol: float = _QUAD_TOL) -> float:
    """W by quadrature of |H|^2 over the surface, with
    |H|^2 = (a^2 + b^2) / (2 e^v); cross-checks the closed form."""
    h2 = d.slope_x ** 2 + d.slope_y ** 2
    val, _ = quad(lambda x: (h2 / conformal_factor(x, d)) * conformal_factor(x, d),
                  0.0, d.period, epsabs=tol, epsrel=1e-12, limit=300)
    return 2.0 * math.pi * n_periods * val


def energy_mironov(d: DerivedConstants, n_periods: int = 1,
                   tol: float = _QUAD_TOL) -> FunctionalValues:
    A = area_mironov(d, n_periods, tol)
    W = willmore_mironov(d, n_periods)
    E = A + W / 8.0
    return FunctionalValues(area=A, willmore=W, energy=E, ratio=E / clifford_energy())


def potential_energy_check(d: DerivedConstants, n_periods: int = 1,
                           tol: float = _QUAD_TOL) -> float:
    """Energy recomputed as half the integral of the associated
    Schroedinger potential 4 e^v + (a^2 + b^2)/4 over the lattice cell
    (the Laplacian term drops out for a linear Lagrangian angle).
    Agrees with area + willmore/8 analytically."""
    h2 = d.slope_x ** 2 + d.slope_y ** 2
    # 1/2 * 2pi * [ 2 * int cf dx + (h2/4) * N T ]
    return (math.pi * 2.0 * n_periods * period_integral(d, tol)
            + math.pi * h2 * n_periods * d.period / 4.0)


# ----------------------------------------------------------------------
# Parameter sweeps
# ----------------------------------------------------------------------

SCAN_COLUMNS = ("alpha1", "alpha2", "alpha3", "a1", "a2", "branch",
                "c2", "a3", "a", "T", "A", "W", "E", "ratio")


def feasible_grid(alpha: AlphaTriple, n: int, margin: float = 0.02) -> List[tuple]:
    """Interior (a1, a2) grid points of the feasibility box with a1 > a2.

    ``margin`` trims the box boundary (degenerate loci) as a fraction of
    the box width.
    """
    lo, hi = lemma3_box(alpha)
    if hi <= lo:
        return []
    pad = (hi - lo) * margin
    vals = np.linspace(lo + pad, hi - pad, n)
    sep = (hi - lo) * margin
    return [(float(a1), float(a2)) for a1 in vals for a2 in vals if a2 < a1 - sep]


def energy_scan(alphas: Iterable[AlphaTriple], n: int = 20,
                branches: Sequence[Branch] = (Branch.MINUS, Branch.PLUS),
                n_periods: int = 1, margin: float = 0.02,
                tol: float = _QUAD_TOL) -> List[dict]:
    """One row per feasible grid point and branch, CSV-ready."""
    rows: List[dict] = []
    for alpha in alphas:
        for a1, a2 in feasible_grid(alpha, n, margin):
            for branch in branches:
                try:
                    d = derive_constants(alpha, ModuliPoint(a1, a2, branch))
                except InfeasibleParameters:
                    continue
                fv = energy_mironov(d, n_periods, tol)
                rows.append({
                    "alpha1": alpha.alpha1, "alpha2": alpha.alpha2,
                    "alpha3": alpha.alpha3, "a1": a1, "a2": a2,
                    "branch": branch.value, "c2": d.c2, "a3": d.a3,
                    "a": d.slope_x, "T": d.period,
                    "A": fv.area, "W": fv.willmore, "E": fv.energy,
                    "ratio": fv.ratio,
                })
    return rows
