import math
from fractions import Fraction

import pytest

from cubiccount.mirror_map import (
    CanonicalMap,
    NdTable,
    PipelineInvariantError,
    b_model_potential,
    canonical_map,
    extract_nd_period,
    q_t_relation_check,
)
from cubiccount.picard_fuchs import frobenius_basis
from cubiccount.series import LogSeries, PowerSeries, ps_compose, ps_revert

F = Fraction

# cross-checked against the wall-crossing route (acceptance criterion A4)
KNOWN_COUNTS = {
    1: F(9),
    2: F(135, 4),
    3: F(244),
    4: F(36999, 16),
    5: F(635634, 25),
}


class TestCanonicalMap:
    def test_low_order_coefficients(self):
        cm = canonical_map(frobenius_basis(6))
        assert cm.qtilde_of_Q[0] == 0
        assert cm.qtilde_of_Q[1] == 1
        assert cm.qtilde_of_Q[2] == 6  # forced by the degree-one solution term

    def test_inverse_by_coefficient_matching(self):
        cm = canonical_map(frobenius_basis(8))
        # independent reversion: match coefficients of Q = qt - 6 qt^2 + ...
        oracle = ps_revert(PowerSeries("Q", cm.qtilde_of_Q.coefficients))
        assert cm.Q_of_qtilde.coefficients == oracle.coefficients
        assert cm.Q_of_qtilde[2] == -6

    def test_mutually_inverse(self):
        cm = canonical_map(frobenius_basis(12))
        qt = cm.qtilde_of_Q
        inv = PowerSeries("Q", cm.Q_of_qtilde.coefficients)
        assert ps_compose(qt, inv) == PowerSeries.gen("Q", 12)

    def test_trivial_map_when_no_corrections(self):
        q = PowerSeries.gen("Q", 5)
        cm = CanonicalMap(qtilde_of_Q=q, Q_of_qtilde=PowerSeries("qt", q.coefficients))
        assert cm.qtilde_of_Q == q


class TestExtract:
    def test_first_count_is_nine(self):
        basis = frobenius_basis(6)
        table = extract_nd_period(basis, canonical_map(basis), 1)
        assert table.n(1) == 9

    def test_known_values(self):
        basis = frobenius_basis(12)
        table = extract_nd_period(basis, canonical_map(basis), 5)
        for d, val in KNOWN_COUNTS.items():
            assert table.n(d) == val

    def test_no_corrections_means_no_counts(self):
        n = 6
        one = PowerSeries.one("Q", n)
        zero = PowerSeries.zero("Q", n)
        from cubiccount.picard_fuchs import FrobeniusBasis

        flat = FrobeniusBasis(
            I0=LogSeries.from_series(one),
            I1=LogSeries(zero, one, zero),
            I2=LogSeries(zero, zero, one * F(1, 2)),
        )
        q = PowerSeries.gen("Q", n)
        cm = CanonicalMap(qtilde_of_Q=q, Q_of_qtilde=PowerSeries("qt", q.coefficients))
        with pytest.raises(ValueError):
            # N_1 = 0 violates the hard table invariant, as it must
            extract_nd_period(flat, cm, 1)

    def test_stability_under_extension(self):
        b8, b16 = frobenius_basis(8), frobenius_basis(16)
        t8 = extract_nd_period(b8, canonical_map(b8), 4)
        t16 = extract_nd_period(b16, canonical_map(b16), 8)
        assert t16.values[:4] == t8.values

    def test_log_cancellation_is_exact(self):
        # the L^1 and L^2 parts of I2 - (L + I1hol)^2 / 2 vanish identically
        b = frobenius_basis(20)
        log_plus = LogSeries(b.I1hol, PowerSeries.one("Q", 20), PowerSeries.zero("Q", 20))
        remainder = b.I2 - F(1, 2) * (log_plus * log_plus)
        assert remainder.c1.is_zero()
        assert remainder.c2.is_zero()
        assert remainder.c0 == b.I2hol - F(1, 2) * (b.I1hol * b.I1hol)


class TestNdTable:
    def test_first_value_guard(self):
        with pytest.raises(ValueError):
            NdTable(values=(F(8),), source="period-pipeline")

    def test_json_schema(self):
        table = NdTable(values=(F(9), F(135, 4)), source="period-pipeline")
        assert table.to_json() == {
            "source": "period-pipeline",
            "N": {"1": "9/1", "2": "135/4"},
        }


class TestPotential:
    def test_derivative_at_degree_one(self):
        table = NdTable(values=(F(9),), source="period-pipeline")
        pot = b_model_potential(table, 1)
        assert pot.derivative_terms() == {"log t": F(9), "t^3": F(27)}
        assert pot.potential_text() == "1/2*log^2(t^3) + c + 9*t^3"
        assert pot.derivative_text() == "9*log t + 27*t^3"

    def test_empty_table(self):
        table = NdTable(values=(), source="period-pipeline")
        pot = b_model_potential(table, 0)
        assert pot.potential_text() == "1/2*log^2(t^3) + c"

    def test_constant_value(self):
        table = NdTable(values=(F(9),), source="period-pipeline")
        pot = b_model_potential(table, 1)
        assert pot.constant_value == pytest.approx(-math.pi**2 / 2, abs=1e-15)
        assert f"{pot.constant_value:.9f}" == "-4.934802201"


class TestCoordinateRelation:
    def test_relation(self):
        fact = q_t_relation_check()
        assert fact["ok"]
        assert fact["qtilde_of_t"] == "t^3"
        assert fact["period_at_s_eq_t"] == "pi*i"
        assert fact["qtilde_scale_under_t_doubling"] == "8"
