"""Concrete checks on the analytic family XYZ = U^3, WU = t(X+Y+Z).

This is the only module (besides the radius diagnostic) that touches
floating point; every tolerance lives in the constants below.  On the
torus chart U = 1, Z = 1/(xy) the pencil member over t is the curve
t(x + y + 1/(xy)) = 1 with superpotential W = t(x + y + 1/(xy)).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import optimize

W_MIN_TOL = 1e-10          # accepted defect for the positive-locus minimum
SINGULAR_FIBER_TOL = 1e-9  # distance in 1/t-space to a critical value
QUADRATURE_MAX_T = Fraction(1, 3)

# Critical values of x + y + 1/(xy): 3*omega with omega a cube root of unity.
_CRITICAL_VALUES = tuple(3 * cmath.exp(2j * cmath.pi * k / 3) for k in range(3))


@dataclass(frozen=True)
class MirrorPoint:
    X: complex
    Y: complex
    Z: complex
    U: complex
    W: complex
    t: complex


def residuals(p: MirrorPoint):
    """Values of the two defining polynomials; (0, 0) certifies membership."""
    if p.X == p.Y == p.Z == p.U == 0:
        raise ValueError("homogeneous coordinates must not all vanish")
    r1 = p.X * p.Y * p.Z - p.U**3
    r2 = p.W * p.U - p.t * (p.X + p.Y + p.Z)
    return r1, r2


@dataclass(frozen=True)
class TorusPoint:
    x: complex
    y: complex

    def lift(self, t: complex) -> MirrorPoint:
        if self.x == 0 or self.y == 0:
            raise ValueError("torus coordinates must be nonzero")
        z = 1 / (self.x * self.y)
        return MirrorPoint(
            X=self.x, Y=self.y, Z=z, U=1, W=t * (self.x + self.y + z), t=t
        )


def superpotential(t, x, y):
    return t * (x + y + 1 / (x * y))


def w_min_positive(t: float):
    """Numerical minimum of W over x, y > 0; returns (value, (x, y)).

    Nelder-Mead for a rough location, then Newton on the gradient in log
    coordinates, where the objective is strictly convex.
    """
    if t <= 0:
        raise ValueError("t must be positive")

    def objective(u):
        a, b = math.exp(u[0]), math.exp(u[1])
        return t * (a + b + 1 / (a * b))

    rough = optimize.minimize(
        objective, x0=np.array([0.3, -0.2]), method="Nelder-Mead",
        options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 400},
    )
    u, v = rough.x
    for _ in range(60):
        ea, eb, inv = math.exp(u), math.exp(v), math.exp(-u - v)
        gu, gv = ea - inv, eb - inv
        if abs(gu) + abs(gv) < 1e-15:
            break
        huu, hvv, huv = ea + inv, eb + inv, inv
        det = huu * hvv - huv * huv
        u -= (hvv * gu - huv * gv) / det
        v -= (huu * gv - huv * gu) / det
    else:
        raise RuntimeError("Newton refinement of the minimum did not converge")
    x, y = math.exp(u), math.exp(v)
    return float(t * (x + y + 1 / (x * y))), (x, y)


def fiber_singularity_test(t: complex) -> bool:
    """True iff the fiber t(x + y + 1/(xy)) = 1 is singular (or t = 0).

    The fiber is singular exactly when 1/t is a critical value of
    x + y + 1/(xy); the critical points are x = y with x^3 = 1.
    """
    t = complex(t)
    if t == 0:
        return True
    inv = 1 / t
    return any(abs(inv - c) < SINGULAR_FIBER_TOL for c in _CRITICAL_VALUES)


def torus_period_quadrature(t: float, grid: int) -> float:
    """(2 pi)^-2 integral of Re 1/(1 - t(x+y+1/(xy))) over |x| = |y| = 1.

    Periodic trapezoid rule = plain mean over a uniform grid; converges
    geometrically for |t| < 1/3.  Equals sum_d (3d)!/(d!)^3 t^{3d}.
    """
    if abs(t) >= QUADRATURE_MAX_T:
        raise ValueError("quadrature requires |t| < 1/3")
    if grid < 2:
        raise ValueError("grid must have at least 2 points per axis")
    angles = 2 * np.pi * np.arange(grid) / grid
    x = np.exp(1j * angles)[:, None]
    y = np.exp(1j * angles)[None, :]
    integrand = 1.0 / (1.0 - t * (x + y + 1.0 / (x * y)))
    return float(np.mean(integrand.real))


def holomorphic_period_partial_sum(t: float, terms: int) -> float:
    """Oracle for the quadrature: sum_{d<=terms} (3d)!/(d!)^3 t^{3d}."""
    total = Fraction(0)
    tq = Fraction(t).limit_denominator(10**12)
    for d in range(terms + 1):
        coeff = Fraction(math.factorial(3 * d), math.factorial(d) ** 3)
        total += coeff * tq ** (3 * d)
    return float(total)
