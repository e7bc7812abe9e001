"""Frobenius-basis solver for the operator theta^3 - 3Q theta(3theta+1)(3theta+2).

The point Q = 0 is maximally unipotent, so the solution space is spanned by

    I0 = 1
    I1 = L + I1hol(Q)
    I2 = 1/2 L^2 + I1hol(Q) L + I2hol(Q)

with L the formal log Q.  (I2 is stored in expanded form; as a statement
about the classical normal form this is -1/2 L^2 + I1 L + I2hol.)  The
I1hol coefficients also have the closed form (3d)!/(d (d!)^3), which the
solver deliberately does not use: recurrence and closed form check each
other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .series import LogSeries, PowerSeries, theta, theta_ps

VARIABLE = "Q"


def _euler_poly(p: PowerSeries, weights=(9, 9, 2)) -> PowerSeries:
    """Apply 9 theta^3 + 9 theta^2 + 2 theta (= theta(3theta+1)(3theta+2))."""
    out = [Fraction(0)] * (p.order + 1)
    for d, c in enumerate(p.coefficients):
        out[d] = (weights[0] * d**3 + weights[1] * d**2 + weights[2] * d) * c
    return PowerSeries(p.variable, tuple(out))


def pf_apply(a: LogSeries) -> LogSeries:
    """Apply theta^3 - 3Q theta(3theta+1)(3theta+2); output order drops by 1."""
    if a.order < 1:
        raise ValueError("need at least order 1 to apply the operator")
    t3 = theta(theta(theta(a)))
    m = theta(9 * theta(theta(a)) + 9 * theta(a) + 2 * a)  # same operator, L-aware
    # Multiply by 3Q and subtract.  The Q factor makes the top coefficient
    # of the product depend on degree order-1 data only, hence the drop.
    q = PowerSeries.gen(a.variable, a.order)
    three_q_m = LogSeries(q * m.c0 * 3, q * m.c1 * 3, q * m.c2 * 3)
    return (t3 - three_q_m).truncate(a.order - 1)


def closed_form_I1_coeff(d: int) -> Fraction:
    """(3d)! / (d * (d!)^3), the degree-d coefficient of the single-log solution."""
    if d < 1:
        raise ValueError("the closed form is defined for d >= 1")
    return Fraction(math.factorial(3 * d), d * math.factorial(d) ** 3)


@dataclass(frozen=True)
class FrobeniusBasis:
    I0: LogSeries
    I1: LogSeries
    I2: LogSeries

    @property
    def order(self) -> int:
        return self.I0.order

    @property
    def I1hol(self) -> PowerSeries:
        return self.I1.c0

    @property
    def I2hol(self) -> PowerSeries:
        return self.I2.c0

    def validate(self) -> None:
        n = self.order
        one = PowerSeries.one(VARIABLE, n)
        if self.I0 != LogSeries.from_series(one):
            raise ValueError("I0 must be the constant series 1")
        if not self.I1.c2.is_zero() or self.I1.c1 != one:
            raise ValueError("I1 must have the form L + holomorphic part")
        if self.I1hol[0] != 0 or self.I2hol[0] != 0:
            raise ValueError("holomorphic parts are normalized to vanish at 0")
        if self.I2.c2 != one * Fraction(1, 2):
            raise ValueError("I2 must have leading log part 1/2 L^2")
        if self.I2.c1 != self.I1hol:
            raise ValueError("the L-coefficient of I2 must equal I1hol")


def frobenius_basis(order: int) -> FrobeniusBasis:
    """Solve for the basis by the order-by-order linear recurrence.

    The indicial operator theta^3 is invertible at every positive degree, so
    each coefficient is fixed by a single division by d^3.
    """
    if order < 3:
        raise ValueError("order must be at least 3")

    def m_weight(d: int) -> int:
        return 9 * d**3 + 9 * d**2 + 2 * d  # theta(3theta+1)(3theta+2) on Q^d

    # I1 = L + f:  d^3 f_d = 3 m(d-1) f_{d-1} + 6 [d == 1]
    f = [Fraction(0)] * (order + 1)
    for d in range(1, order + 1):
        rhs = 3 * m_weight(d - 1) * f[d - 1]
        if d == 1:
            rhs += 6  # the operator sends L to 2, times the 3Q prefactor
        if d == 0:
            raise ValueError("singular recurrence step")
        f[d] = Fraction(rhs, d**3)

    # I2 = 1/2 L^2 + f L + g:  the L-part of the equation reproduces I1's
    # recurrence; the log-free part fixes g degree by degree.
    g = [Fraction(0)] * (order + 1)
    for d in range(1, order + 1):
        rhs = -3 * d**2 * f[d] + 3 * (
            (27 * (d - 1) ** 2 + 18 * (d - 1) + 2) * f[d - 1]
            + m_weight(d - 1) * g[d - 1]
        )
        if d == 1:
            rhs += 27  # from theta(3theta+1)(3theta+2) acting on 1/2 L^2
        g[d] = Fraction(rhs, d**3)

    one = PowerSeries.one(VARIABLE, order)
    zero = PowerSeries.zero(VARIABLE, order)
    fs = PowerSeries(VARIABLE, tuple(f))
    gs = PowerSeries(VARIABLE, tuple(g))
    basis = FrobeniusBasis(
        I0=LogSeries.from_series(one),
        I1=LogSeries(fs, one, zero),
        I2=LogSeries(gs, fs, one * Fraction(1, 2)),
    )
    basis.validate()
    return basis


def convergence_radius_estimate(series: PowerSeries, window: int) -> float:
    """Ratio-test estimate of the convergence radius (diagnostic only).

    The raw coefficient ratios a_d / a_{d-1} approach the reciprocal radius
    like 1/d, too slowly for a tight estimate at moderate order, so the
    averaged ratio is first-order Richardson extrapolated in d before
    taking the reciprocal.
    """
    if window < 1:
        raise ValueError("window must be positive")
    coeffs = series.coefficients
    ratios = []  # (d, a_d / a_{d-1}) from the top down
    for d in range(series.order, 0, -1):
        if coeffs[d] and coeffs[d - 1]:
            ratios.append((d, coeffs[d] / coeffs[d - 1]))
        elif ratios:
            break
        if len(ratios) == window + 1:
            break
    if len(ratios) < window:
        raise ValueError(
            f"need {window} consecutive nonzero coefficient pairs, found {len(ratios)}"
        )
    if len(ratios) > window:
        extrapolated = [
            Fraction(d1) * r1 - Fraction(d0) * r0
            for (d1, r1), (d0, r0) in zip(ratios, ratios[1:])
        ]
    else:
        extrapolated = [r for _, r in ratios]
    mean = sum(extrapolated, Fraction(0)) / len(extrapolated)
    if mean == 0:
        raise ValueError("degenerate ratio sequence")
    return float(1 / mean)


def pf_apply_ps(p: PowerSeries) -> PowerSeries:
    """Operator applied to a log-free series (convenience for tests)."""
    t3 = theta_ps(theta_ps(theta_ps(p)))
    m = theta_ps(9 * theta_ps(theta_ps(p)) + 9 * theta_ps(p) + 2 * p)
    q = PowerSeries.gen(p.variable, p.order)
    return (t3 - 3 * (q * m)).truncate(p.order - 1)
