"""Canonical coordinate and curve-count extraction from the period side.

The canonical coordinate is q = -exp(I1(Q)).  We compute throughout with
its sign-free twin qt := -q = Q exp(I1hol(Q)), a genuine normalized power
series; the minus sign (an odd number of pi*i in the defining period) is
reintroduced only in reports.  The degree-d counts are then read off from

    I2 - 1/2 (L + I1hol)^2 = I2hol - 1/2 I1hol^2 = sum_d N_d qt(Q)^d,

after substituting the inverse of the coordinate change qt(Q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .picard_fuchs import FrobeniusBasis
from .series import (
    LogSeries,
    PowerSeries,
    fraction_to_str,
    ps_compose,
    ps_exp,
    ps_revert,
)


class PipelineInvariantError(RuntimeError):
    """A structural identity that must hold exactly failed to hold."""


@dataclass(frozen=True)
class CanonicalMap:
    """The coordinate change qt(Q) = Q exp(I1hol) and its inverse."""

    qtilde_of_Q: PowerSeries
    Q_of_qtilde: PowerSeries

    @property
    def order(self) -> int:
        return self.qtilde_of_Q.order

    def __post_init__(self):
        q = self.qtilde_of_Q
        if q[0] != 0 or q[1] != 1:
            raise ValueError("canonical coordinate must be Q + O(Q^2)")


def canonical_map(basis: FrobeniusBasis) -> CanonicalMap:
    basis.validate()
    q = PowerSeries.gen("Q", basis.order)
    qt = q * ps_exp(basis.I1hol)
    inv = ps_revert(qt)
    return CanonicalMap(qtilde_of_Q=qt, Q_of_qtilde=PowerSeries("qt", inv.coefficients))


PERIOD_PIPELINE = "period-pipeline"
SCATTERING_PIPELINE = "scattering-pipeline"


@dataclass(frozen=True)
class NdTable:
    """Curve counts N_1..N_D from one of the two pipelines."""

    values: tuple
    source: str

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if self.values and self.values[0] != 9:
            raise ValueError(f"N_1 must be 9, got {self.values[0]}")

    @property
    def max_degree(self) -> int:
        return len(self.values)

    def n(self, d: int) -> Fraction:
        if not 1 <= d <= self.max_degree:
            raise IndexError(f"degree {d} outside table range 1..{self.max_degree}")
        return self.values[d - 1]

    def to_json(self) -> dict:
        return {
            "source": self.source,
            "N": {str(d): fraction_to_str(v) for d, v in enumerate(self.values, start=1)},
        }


def extract_nd_period(basis: FrobeniusBasis, cmap: CanonicalMap, max_degree: int) -> NdTable:
    """Read N_d off the double-log period in the canonical coordinate."""
    if basis.order < max_degree:
        raise ValueError("truncation order must be at least the requested degree")
    n = basis.order
    # Cancel the logs inside the algebra: the L^2 and L^1 parts of
    # I2 - 1/2 (L + I1hol)^2 must vanish identically.
    log_plus = LogSeries(
        basis.I1hol,
        PowerSeries.one("Q", n),
        PowerSeries.zero("Q", n),
    )  # L + I1hol
    remainder = basis.I2 - Fraction(1, 2) * (log_plus * log_plus)
    if not remainder.c1.is_zero() or not remainder.c2.is_zero():
        raise PipelineInvariantError("log parts survived the double-log cancellation")
    in_qt = ps_compose(
        PowerSeries("qt", remainder.c0.coefficients), cmap.Q_of_qtilde
    )
    if in_qt[0] != 0:
        raise PipelineInvariantError("instanton part has a constant term")
    return NdTable(
        values=tuple(in_qt[d] for d in range(1, max_degree + 1)),
        source=PERIOD_PIPELINE,
    )


THREE_ZETA_TWO = math.pi**2 / 2  # 3 * zeta(2), the closing constant


@dataclass(frozen=True)
class PotentialReport:
    """Structured form of 1/2 log^2(t^3) + c + sum_d N_d t^{3d}."""

    log_part: str
    constant_symbol: str
    constant_value: float
    instanton: tuple  # ((3d, N_d) pairs)
    note: str = field(
        default="defined up to an additive constant; c matches -3*zeta(2) "
        "in the standard normalization but is carried symbolically"
    )

    def instanton_text(self) -> str:
        return " + ".join(f"{v}*t^{e}" for e, v in self.instanton) if self.instanton else "0"

    def potential_text(self) -> str:
        tail = (" + " + self.instanton_text()) if self.instanton else ""
        return f"1/2*log^2(t^3) + c{tail}"

    def derivative_text(self) -> str:
        # t d/dt of the potential: 9 log t + sum 3d N_d t^{3d}
        terms = [f"{e * v}*t^{e}" for e, v in self.instanton]
        return "9*log t" + ("".join(" + " + s for s in terms))

    def derivative_terms(self) -> dict:
        out = {"log t": Fraction(9)}
        for e, v in self.instanton:
            out[f"t^{e}"] = e * v
        return out


def b_model_potential(nd: NdTable, max_degree: int) -> PotentialReport:
    if max_degree > nd.max_degree:
        raise ValueError("table does not reach the requested degree")
    instanton = tuple((3 * d, nd.n(d)) for d in range(1, max_degree + 1))
    return PotentialReport(
        log_part="1/2*log^2(t^3)",
        constant_symbol="c",
        constant_value=-THREE_ZETA_TWO,
        instanton=instanton,
    )


@dataclass(frozen=True)
class LogPeriod:
    """a*pi*i + b*log t + c*log s with exact rational coefficients."""

    pi_i: Fraction
    log_t: Fraction
    log_s: Fraction

    def exp_as_monomial(self):
        """exp of the period as (sign, t-exponent, s-exponent); needs integrality."""
        if self.pi_i.denominator != 1 or self.log_t.denominator != 1 or self.log_s.denominator != 1:
            raise ValueError("exponentiation needs integer coefficients")
        sign = -1 if self.pi_i.numerator % 2 else 1
        return sign, int(self.log_t), int(self.log_s)


def q_t_relation_check() -> dict:
    """Tie the two variable conventions together: qt = -q = t^3 at s = 1.

    The double-log-free period over the auxiliary chain equals
    pi*i + 3(log t - log s); exponentiating at s = 1 gives q = -t^3.
    """
    pi1 = LogPeriod(pi_i=Fraction(1), log_t=Fraction(3), log_s=Fraction(-3))
    sign, te, se = pi1.exp_as_monomial()
    if (sign, te, se) != (-1, 3, -3):
        raise PipelineInvariantError("exp(pi*i + 3 log t - 3 log s) != -t^3/s^3")
    # s = t degenerates the chain; only the half-turn survives.
    at_s_eq_t = LogPeriod(pi1.pi_i, pi1.log_t + pi1.log_s, Fraction(0))
    # Doubling t scales qt by 2^3.
    scale = Fraction(2) ** te
    return {
        "q_of_t": "-t^3",
        "qtilde_of_t": "t^3",
        "period": "pi*i + 3*(log t - log s)",
        "period_at_s_eq_t": "pi*i" if at_s_eq_t.log_t == 0 else "unexpected",
        "qtilde_scale_under_t_doubling": str(scale),
        "ok": at_s_eq_t.log_t == 0 and scale == 8,
    }
