"""The integer-weight circle-bundle family: curve parametrization and the
torus-vs-Klein-bottle topology predicate.

The base curve is the intersection of the unit sphere with the cone
m u1^2 + n u2^2 + k u3^2 = 0 (m >= n > 0 > k).  The total space is a
torus iff the involution u -> ((-1)^m u1, (-1)^n u2, (-1)^k u3)
preserves the orientation of the cone surface; that is decided here
numerically by transporting a tangent frame, with the cone oriented by
its gradient normal (the fixed convention reported in the output).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np


@dataclass(frozen=True)
class MnkParams:
    m: int
    n: int
    k: int

    def __post_init__(self):
        if not (self.m >= self.n > 0 > self.k):
            raise ValueError(f"need m >= n > 0 > k, got ({self.m}, {self.n}, {self.k})")

    @property
    def involution_signs(self) -> Tuple[int, int, int]:
        return ((-1) ** self.m, (-1) ** self.n, (-1) ** self.k)


def curve_point(p: MnkParams, t: float) -> np.ndarray:
    """Point on the intersection curve (u3 > 0 sheet), parametrized by the
    angle of (u1, u2); closed and 2 pi-periodic by construction."""
    m, n, k = p.m, p.n, p.k
    c, s = math.cos(t), math.sin(t)
    # radial scale so that |u| = 1 once u3 absorbs the cone constraint
    r2 = 1.0 / (1.0 + (m * c * c + n * s * s) / (-k))
    r = math.sqrt(r2)
    u3 = math.sqrt((m * r2 * c * c + n * r2 * s * s) / (-k))
    return np.array([r * c, r * s, u3])


def _cone_gradient(p: MnkParams, u: np.ndarray) -> np.ndarray:
    return 2.0 * np.array([p.m * u[0], p.n * u[1], p.k * u[2]])


def _tangent_frame(p: MnkParams, t: float):
    """(point, tangent basis) on the cone; the radial direction is tangent
    because the defining quadric is homogeneous."""
    u = curve_point(p, t)
    h = 1e-6
    e1 = (curve_point(p, t + h) - curve_point(p, t - h)) / (2.0 * h)
    e2 = u
    return u, e1, e2


def is_torus(p: MnkParams, samples: int = 10) -> bool:
    """True iff the involution preserves the cone orientation (gradient
    normal convention), decided by comparing frame orientations at sample
    points; resamples when a frame is numerically degenerate."""
    sigma = np.array(p.involution_signs, dtype=float)
    decisions = []
    for i in range(samples):
        t = 0.37 + 2.0 * math.pi * i / samples
        u, e1, e2 = _tangent_frame(p, t)
        n_u = _cone_gradient(p, u)
        d1 = float(np.linalg.det(np.array([n_u, e1, e2])))
        if abs(d1) < 1e-12:
            continue
        n_v = _cone_gradient(p, sigma * u)
        d2 = float(np.linalg.det(np.array([n_v, sigma * e1, sigma * e2])))
        decisions.append(d1 * d2 > 0)
    if not decisions:
        raise RuntimeError("all sample frames degenerate")
    if len(set(decisions)) != 1:
        raise RuntimeError("orientation decision not sample-independent")
    return decisions[0]


ORIENTATION_CONVENTION = ("cone oriented by its gradient normal; a tangent frame "
                          "(e1, e2) is positive when det[grad, e1, e2] > 0")
