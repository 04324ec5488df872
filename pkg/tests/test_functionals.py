import math

import numpy as np
import pytest
from scipy.integrate import quad

from cp2tori.family import (AlphaTriple, Branch, ModuliPoint, derive_constants,
                            lemma3_box)
from cp2tori.functionals import (HomogeneousParams, area_mironov,
                                 clifford_energy, energy_mironov, energy_scan,
                                 feasible_grid, homogeneous_energy,
                                 period_integral, potential_energy_check,
                                 willmore_mironov, willmore_quadrature)

SQ3 = 1.0 / math.sqrt(3.0)


def test_clifford_value():
    assert clifford_energy() == 4.0 * math.pi ** 2 / (3.0 * math.sqrt(3.0))
    assert abs(clifford_energy() - 7.5976) < 1e-4


def test_homogeneous_equality_case():
    e = homogeneous_energy(HomogeneousParams(SQ3, SQ3, SQ3))
    assert e == pytest.approx(clifford_energy(), abs=1e-10)


def test_homogeneous_frozen_value():
    p = HomogeneousParams(1.0 / math.sqrt(2.0), 0.5, 0.5)
    expected = 9.0 * math.pi ** 2 / (8.0 * math.sqrt(2.0))
    assert homogeneous_energy(p) == pytest.approx(expected, rel=1e-14)
    assert abs(homogeneous_energy(p) - 7.852) < 1e-3


def test_homogeneous_boundary_behavior():
    # a single radius collapsing to 0 blows the energy up ...
    vals = []
    for r3 in (0.1, 0.01, 0.001):
        rest = math.sqrt((1.0 - r3 * r3) / 2.0)
        vals.append(homogeneous_energy(HomogeneousParams(rest, rest, r3)))
    assert vals[0] < vals[1] < vals[2]
    assert vals[-1] > 100.0
    # ... while along the balanced path r1 -> 1, r2 = r3 the energy tends
    # to the finite limit pi^2 (still above the Clifford value)
    r1 = 1.0 - 1e-8
    rest = math.sqrt((1.0 - r1 * r1) / 2.0)
    e = homogeneous_energy(HomogeneousParams(r1, rest, rest))
    assert e == pytest.approx(math.pi ** 2, rel=1e-6)
    assert e > clifford_energy()


def test_homogeneous_validation():
    with pytest.raises(ValueError):
        HomogeneousParams(0.5, 0.5, 0.5)  # not on the sphere
    with pytest.raises(ValueError):
        HomogeneousParams(-SQ3, SQ3, SQ3)


def test_homogeneous_inequality_random(rng):
    ecl = clifford_energy()
    for _ in range(5000):
        v = np.abs(rng.normal(size=3))
        v /= np.linalg.norm(v)
        if np.min(v) < 1e-6:
            continue
        e = homogeneous_energy(HomogeneousParams(*v))
        assert e >= ecl * (1.0 - 1e-12)


def test_area_substitution_identity(sample_derived, sample_derived_plus):
    # one-period quadrature of the conformal factor equals the angular form
    # (a1/sqrt(a1+a3)) * int_0^pi (1 - ((a1-a2)/a1) sin^2 t)/sqrt(1-k^2 sin^2 t) dt
    for d in (sample_derived, sample_derived_plus):
        k2 = d.modulus.k2
        ratio = (d.a1 - d.a2) / d.a1
        angular, _ = quad(
            lambda t: (1.0 - ratio * math.sin(t) ** 2)
            / math.sqrt(1.0 - k2 * math.sin(t) ** 2),
            0.0, math.pi, epsabs=1e-13, epsrel=1e-13, limit=200)
        lhs = period_integral(d)
        assert lhs == pytest.approx(d.a1 / math.sqrt(d.a1 + d.a3) * angular, abs=1e-9)


def test_area_small_modulus_limit():
    # a1 -> a2: the integrand averages (a1+a2)/2 over the period
    al = AlphaTriple(2, 1, -1)
    d = derive_constants(al, ModuliPoint(1.5 + 1e-6, 1.5 - 1e-6, Branch.MINUS))
    expected = math.pi * (d.a1 + d.a2) / (2.0 * math.sqrt(d.a1 + d.a3))
    assert period_integral(d) == pytest.approx(expected, rel=1e-6)


def test_area_exceeds_lemma_bound(sample_derived):
    d = sample_derived
    A = area_mironov(d)
    assert A > math.pi ** 2 * (d.a1 + d.a2) / math.sqrt(d.a1 + d.a3)


def test_willmore_closed_form_vs_quadrature(sample_derived, sample_derived_plus):
    for d in (sample_derived, sample_derived_plus):
        w1 = willmore_mironov(d)
        w2 = willmore_quadrature(d)
        assert w1 == pytest.approx(w2, rel=1e-9)


def test_willmore_scales_linearly(sample_derived):
    assert willmore_mironov(sample_derived, 2) == pytest.approx(
        2.0 * willmore_mironov(sample_derived, 1), rel=1e-14)
    assert area_mironov(sample_derived, 2) == pytest.approx(
        2.0 * area_mironov(sample_derived, 1), rel=1e-12)


def test_energy_decomposition_and_potential(sample_derived):
    d = sample_derived
    fv = energy_mironov(d)
    assert fv.energy == fv.area + fv.willmore / 8.0  # exact by construction
    assert potential_energy_check(d) == pytest.approx(fv.energy, abs=1e-9)
    assert fv.ratio == fv.energy / clifford_energy()


def test_energy_ratio_exceeds_one_on_grid():
    al = AlphaTriple(2, 1, -1)
    rows = energy_scan([al], n=8)
    assert rows, "feasible grid should not be empty"
    assert all(r["ratio"] > 1.0 for r in rows)


def test_energy_scan_empty_for_unfeasible_triple():
    assert energy_scan([AlphaTriple(1, 1, -1)], n=8) == []


def test_feasible_grid_stays_inside_box():
    al = AlphaTriple(3, 1, -1)
    lo, hi = lemma3_box(al)
    pts = feasible_grid(al, 10)
    assert pts
    for a1, a2 in pts:
        assert lo < a2 < a1 < hi
