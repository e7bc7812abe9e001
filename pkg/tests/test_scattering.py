from fractions import Fraction
from pathlib import Path

import pytest

from cubiccount.mirror_map import canonical_map, extract_nd_period
from cubiccount.picard_fuchs import frobenius_basis
from cubiccount.series import BiSeries
from cubiccount.scattering import chart
from cubiccount.scattering.chart import AffineChart
from cubiccount.scattering.cloud import FactorizationError, layered_div_exact, line_div_exact
from cubiccount.scattering.engine import (
    CROSSING_SIGN,
    ConsistencyError,
    Germ,
    classify_joint,
    germs_at,
    joint_discrepancy,
    ks_complete,
    loop_product,
    solve_joint,
    verify_consistency,
    verify_grading,
)
from cubiccount.scattering.fout import (
    SupportError,
    extract_nd_scattering,
    f_out,
    log_fout_coefficients,
)
from cubiccount.scattering.svg import render_diagram
from cubiccount.scattering.walls import (
    KIND_KINK_RAY,
    KIND_SLAB,
    KIND_WALL,
    Monomial,
    cloud_to_function,
    initial_walls,
    make_wall,
    monodromy_transport,
    wall_cross,
)

F = Fraction
DATA = Path(__file__).parent / "data"


class TestChart:
    def test_constants_are_consistent(self):
        c = AffineChart()
        assert c.monodromy_linear == ((1, -9), (0, 1))
        assert c.total_kink == 9 and c.per_ray_kink == 3 and c.circumference == 3

    def test_vertices_follow_gluing_orbit(self):
        assert chart.vertex(0) == (0, 0)
        assert chart.vertex(1) == (0, 1)
        assert chart.vertex(2) == (-3, 2)
        assert chart.vertex(-1) == (-3, -1)

    def test_gluing_cubed_is_monodromy(self):
        # the one-cell shift applied three times acts by the full matrix
        v = (5, 7)
        assert chart.shift_vec(v, 3) == (5 - 9 * 7, 7)

    def test_distance_gradient_kinks(self):
        # the slope jump across each horizontal ray equals the ray t-class
        for cell in (-2, -1, 0, 1):
            g1, g2 = chart.grad_delta(cell), chart.grad_delta(cell + 1)
            assert g2[1] - g1[1] == 3

    def test_region_membership(self):
        assert chart.in_region((F(0), F(-1)))
        assert chart.in_region((F(-3, 2), F(3, 2)))
        assert not chart.in_region((F(-2), F(0)))


class TestWallCross:
    def test_basic_expansion(self):
        wall = make_wall(
            KIND_WALL, (0, 0), (0, -1), {(0, 0): F(1), (0, 1): F(1)}, home_cell=-1
        )
        got = wall_cross(Monomial((1, 0), 0), wall, orientation=1, order=6)
        assert got == [
            (F(1), Monomial((1, 0), 0)),
            (F(1), Monomial((1, 1), 3)),
        ]

    def test_tangent_invariance(self):
        wall = make_wall(
            KIND_WALL, (0, 0), (0, -1), {(0, 0): F(1), (0, 1): F(1)}, home_cell=-1
        )
        got = wall_cross(Monomial((0, 2), 1), wall, orientation=1, order=6)
        assert got == [(F(1), Monomial((0, 2), 1))]

    def test_kink_ray_shift(self):
        ray = make_wall(
            KIND_KINK_RAY, (0, 0), (1, 0), {(0, 0): F(1)}, home_cell=0, kink=3
        )
        got = wall_cross(Monomial((0, 1), 0), ray, orientation=1, order=6)
        assert got == [(F(1), Monomial((0, 1), 3))]

    def test_requires_truncation_order(self):
        ray = make_wall(
            KIND_KINK_RAY, (0, 0), (1, 0), {(0, 0): F(1)}, home_cell=0, kink=3
        )
        with pytest.raises(ValueError):
            wall_cross(Monomial((0, 1), 0), ray, orientation=1, order=None)


class TestMonodromyTransport:
    def test_outgoing_direction_invariant(self):
        assert monodromy_transport(Monomial((1, 0), 2), 1) == Monomial((1, 0), 2)

    def test_single_positive_crossing(self):
        assert monodromy_transport(Monomial((0, 1), 0), 1) == Monomial((-9, 1), 0)

    def test_opposite_crossings_cancel(self):
        m = Monomial((4, -5), 7)
        assert monodromy_transport(monodromy_transport(m, 1), -1) == m


def adhoc_germ(d, cloud, kink=0, kind=KIND_WALL):
    return Germ(
        direction=d,
        cloud_items=cloud_to_function(cloud),
        kink=kink,
        kind=kind,
        label=f"adhoc{d}",
    )


class TestJointAlgebra:
    def test_two_transverse_walls_commutator(self):
        # two order-one walls meeting at an interior point: the loop fails
        # to close at the product order by the classical commutator term,
        # with coefficient (product of coefficients) * |det of exponents|
        c1, c2 = F(2), F(5)
        joint = classify_joint((F(2), F(1, 2)))
        germs = [
            adhoc_germ((1, 0), {(0, 0): F(1), (-1, 0): c1}),
            adhoc_germ((-1, 0), {(0, 0): F(1), (-1, 0): c1}),
            adhoc_germ((1, 1), {(0, 0): F(1), (-1, -1): c2}),
            adhoc_germ((-1, -1), {(0, 0): F(1), (-1, -1): c2}),
        ]
        terms, _ = joint_discrepancy(joint, germs, 2)
        # det((-1,0), (-1,-1)) = 1; derivation pairs against rot90(m)
        m = (-2, -1)
        assert set(k[1] for k in terms) == {m}
        r = {xi: terms[(xi, m)] for xi in ((1, 0), (0, 1))}
        nbar = (1, -2)  # primitive normal of m
        ratio = {xi: r[xi] / F(CROSSING_SIGN * (nbar[0] * xi[0] + nbar[1] * xi[1])) for xi in r}
        assert ratio[(1, 0)] == ratio[(0, 1)]
        assert abs(ratio[(1, 0)]) == c1 * c2

    def test_insertion_restores_consistency(self):
        joint = classify_joint((F(2), F(1, 2)))
        germs = [
            adhoc_germ((1, 0), {(0, 0): F(1), (-1, 0): F(2)}),
            adhoc_germ((-1, 0), {(0, 0): F(1), (-1, 0): F(2)}),
            adhoc_germ((1, 1), {(0, 0): F(1), (-1, -1): F(5)}),
            adhoc_germ((-1, -1), {(0, 0): F(1), (-1, -1): F(5)}),
        ]
        insertions = solve_joint(joint, germs, 2)
        assert len(insertions) == 1
        (u, m, coeff), = insertions
        assert u == (2, 1) and m == (-2, -1)
        fixed = germs + [adhoc_germ(u, {(0, 0): F(1), m: coeff})]
        terms, _ = joint_discrepancy(joint, fixed, 2)
        assert not terms

    def test_wall_crossing_bare_kink_is_consistent(self):
        joint = classify_joint((F(1, 2), F(0)))
        germs = [
            adhoc_germ((1, 0), {(0, 0): F(1)}, kink=3, kind=KIND_KINK_RAY),
            adhoc_germ((-1, 0), {(0, 0): F(1)}, kink=3, kind=KIND_KINK_RAY),
            adhoc_germ((1, 2), {(0, 0): F(1), (-1, -2): F(3)}),
            adhoc_germ((-1, -2), {(0, 0): F(1), (-1, -2): F(3)}),
        ]
        for n in range(0, 5):
            terms, _ = joint_discrepancy(joint, germs, n)
            assert not terms


class TestDivision:
    def test_line_division(self):
        den = {(0, 0): F(1), (0, 1): F(2)}
        quot = {(0, 0): F(3), (0, 1): F(-1), (0, 2): F(1)}
        num = {}
        for (a, b), c in den.items():
            for (x, y), d in quot.items():
                key = (a + x, b + y)
                num[key] = num.get(key, F(0)) + c * d
        assert line_div_exact(num, den) == quot

    def test_line_division_failure(self):
        with pytest.raises(FactorizationError):
            line_div_exact(
                {(0, 0): F(1), (0, 1): F(1), (0, 3): F(1)},
                {(0, 0): F(1), (0, 1): F(1)},
            )

    def test_layered_division(self):
        ordf = lambda m: -m[0]
        den = {(0, 0): F(1), (0, 1): F(1), (-1, 0): F(4)}
        quot = {(0, 0): F(1), (-1, 2): F(3), (-2, 0): F(7)}
        num = {}
        for (a, b), c in den.items():
            for (x, y), d in quot.items():
                key = (a + x, b + y)
                num[key] = num.get(key, F(0)) + c * d
        assert layered_div_exact(num, den, ordf, 4) == quot


@pytest.fixture(scope="module")
def k3():
    return ks_complete(3)


@pytest.fixture(scope="module")
def k6():
    return ks_complete(6)


class TestCompletion:
    def test_order_zero_is_initial(self):
        s = ks_complete(0)
        assert [w.kind for w in s.walls] == [KIND_SLAB, KIND_SLAB, KIND_KINK_RAY]

    def test_order_three_content(self, k3):
        inserted = {
            (w.direction, w.function): w for w in k3.walls if w.kind == KIND_WALL
        }
        dirs = sorted(w.direction for w in k3.walls if w.kind == KIND_WALL)
        assert dirs == [(1, 0), (3, -2), (3, -1)]
        by_dir = {w.direction: dict(w.function) for w in k3.walls if w.kind == KIND_WALL}
        assert by_dir[(1, 0)][(-3, 0)] == 9
        assert by_dir[(3, -1)][(-3, 1)] == 3
        assert by_dir[(3, -2)][(-3, 2)] == 1

    def test_determinism(self, k3):
        again = ks_complete(3)
        assert [w.to_json() for w in k3.walls] == [w.to_json() for w in again.walls]

    def test_extension_reproduces_lower_orders(self, k3, k6):
        def content(s, cap):
            out = {}
            for w in s.walls:
                key = (w.kind, w.base, w.direction)
                cloud = {m: c for m, c in w.function if -m[0] <= cap and m != (0, 0)}
                if cloud or w.kind != KIND_WALL:
                    out[key] = cloud
            return out

        low = content(k3, 3)
        high = {k: v for k, v in content(k6, 3).items() if v or k[0] != KIND_WALL}
        for key, cloud in low.items():
            assert high.get(key, {}) == cloud

    def test_wall_count_grows(self, k3, k6):
        assert len(k6.walls) > len(k3.walls)

    def test_consistency_and_grading(self, k6):
        assert verify_consistency(k6) > 0
        assert verify_grading(k6) > 0

    def test_gluing_translate_has_identical_output(self, k3):
        translated = ks_complete(3)
        translated.walls = [w.translated(1) for w in translated.walls]
        assert f_out(translated) == f_out(k3)


class TestLoopProduct:
    def test_point_with_no_walls_is_identity(self, k3):
        record = loop_product((F(7), F(1, 3)), k3, 3)
        assert record.is_consistent()

    def test_all_joints_identity(self, k3):
        for p in k3.joints:
            assert loop_product(p, k3, 3).is_consistent()


class TestFOut:
    def test_empty_structure(self):
        s = ks_complete(0)
        assert f_out(s) == BiSeries.one(0)

    def test_order_three_coefficient(self, k3):
        lg = f_out(k3).log()
        assert lg[(3, -3)] == 27  # three cells, nine lines each

    def test_order_six_against_period_route(self, k6):
        basis = frobenius_basis(8)
        table = extract_nd_period(basis, canonical_map(basis), 2)
        lg = f_out(k6).log()
        assert lg[(6, -6)] == 6 * table.n(2)

    def test_extraction(self, k3):
        table = extract_nd_scattering(f_out(k3), 1)
        assert table.n(1) == 9
        assert table.source == "scattering-pipeline"

    def test_trivial_product_extracts_zero(self):
        assert log_fout_coefficients(BiSeries.one(9), 3) == [F(0)] * 3

    def test_support_violation_fails(self):
        bad = BiSeries(6, {(0, 0): F(1), (3, -2): F(1)})
        with pytest.raises(SupportError):
            extract_nd_scattering(bad, 1)

    def test_order_guard(self, k3):
        with pytest.raises(ValueError):
            extract_nd_scattering(f_out(k3), 2)


class TestRender:
    WINDOW = ((-5, 12), (-3, 4))

    def test_deterministic(self, k3):
        assert render_diagram(k3, self.WINDOW) == render_diagram(k3, self.WINDOW)

    def test_initial_structure_content(self):
        svg = render_diagram(ks_complete(0), self.WINDOW)
        # slabs render heavy, kink-rays dashed; both present, no plain walls
        assert 'stroke="#1a1a1a"' in svg
        assert "stroke-dasharray" in svg
        assert 'stroke="#c03060"' not in svg

    def test_golden_file(self, k3):
        golden = (DATA / "golden_scatter_k3.svg").read_text()
        assert render_diagram(k3, self.WINDOW) == golden

    def test_empty_window_rejected(self, k3):
        with pytest.raises(ValueError):
            render_diagram(k3, ((0, 0), (0, 1)))


class TestStructureJson:
    def test_schema(self, k3):
        doc = k3.to_json()
        assert doc["order"] == 3
        assert doc["chart"]["total_kink"] == 9
        kinds = {w["kind"] for w in doc["walls"]}
        assert kinds == {"wall", "slab", "kink-ray"}
        wall = next(w for w in doc["walls"] if w["kind"] == "wall" and w["direction"] == [1, 0])
        assert wall["function"] == [{"m": [-3, 0], "a": 3, "c": "9/1"}]
        assert all(len(w["base"]) == 2 and "/" in w["base"][0] for w in doc["walls"])
