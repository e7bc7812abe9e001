"""Order-by-order completion of the cylinder wall structure.

Consistency is checked per joint by a path-ordered transit of crossing
maps.  At an interior joint the transit is the full counterclockwise loop
and must be the identity.  At a boundary vertex the loop would have to
pass through the bounded cell, whose chart we never construct; instead we
use the transit across the unbounded sector (from one slab germ to the
other) and require it to agree with its own lowest-order part -- the
corner gluing it implicitly defines is rigid, so any t-deformation of the
transit is a genuine discrepancy.

Discrepancies factor into one germ per exponent direction.  New germs are
found by an exact linear solve against unit-insertion columns, and every
accepted insertion is certified afterwards by re-running the transit.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import chart
from .chart import Point, Vec, ccw_compare_from, cross, dot, primitive, rot90
from .cloud import (
    Cloud,
    FactorizationError,
    c_add,
    c_inv,
    c_is_one,
    c_mul,
    c_one,
    c_pow,
    c_scale,
    c_sub,
    layered_div_exact,
)
from .walls import (
    KIND_KINK_RAY,
    KIND_SLAB,
    KIND_WALL,
    GradingError,
    Wall,
    WallStructure,
    cloud_to_function,
    initial_walls,
    make_wall,
)

CROSSING_SIGN = -1  # orientation of crossing exponents for the CCW loop


class ConsistencyError(RuntimeError):
    """The structure failed a consistency requirement it must satisfy."""


@dataclass(frozen=True)
class Germ:
    direction: Vec
    cloud_items: tuple  # function as sorted tuple of (m, coeff)
    kink: int
    kind: str
    label: str

    @property
    def cloud(self) -> Cloud:
        return {m: c for m, c in self.cloud_items}


@dataclass(frozen=True)
class Joint:
    point: Point  # T-normalized: y in [0, 1)
    kind: str  # "vertex" | "ray" | "interior"

    @property
    def ray_level(self) -> Optional[int]:
        y = self.point[1]
        return int(y) if y.denominator == 1 else None


def t_normalize_point(p: Point):
    """Translate by the gluing map so that y lands in [0, 1); returns (p', j)."""
    y = Fraction(p[1])
    j = -(y.numerator // y.denominator)  # -floor(y)
    return chart.shift_point(p, j), j


def classify_joint(p: Point) -> Joint:
    x, y = Fraction(p[0]), Fraction(p[1])
    if y.denominator == 1:
        if (x, y) == chart.vertex(int(y)):
            return Joint((x, y), "vertex")
        return Joint((x, y), "ray")
    return Joint((x, y), "interior")


def slot_cell(joint: Joint, u: Vec) -> int:
    """Cell into which the direction u points at the joint."""
    if joint.kind == "interior":
        return math.floor(joint.point[1])
    r = joint.ray_level
    if u[1] > 0:
        return r
    if u[1] < 0:
        return r - 1
    return r  # horizontal: grading is frame-free


def slot_order(joint: Joint, m: Vec) -> int:
    """t-order of a germ monomial m in the frame of its own slot."""
    if m == (0, 0):
        return 0
    u = primitive((-m[0], -m[1]))
    return chart.ord_in_cell(m, slot_cell(joint, u))


# ---------------------------------------------------------------------------
# germ collection


def germs_at(joint: Joint, walls, window: int):
    """All germ crossings at the joint, over the T-translates of the reps."""
    p = joint.point
    out = []
    for idx, w in enumerate(walls):
        for j in range(-window, window + 1):
            tw = w.translated(j)
            if not tw.contains(p):
                continue
            dirs = []
            if tw.base == p:
                dirs.append(tw.direction)
            else:
                dirs.append(tw.direction)
                neg = (-tw.direction[0], -tw.direction[1])
                if tw.length is None:
                    dirs.append(neg)
                else:
                    far = tw.point_at(tw.length)
                    if far == p:
                        dirs = [neg]
                    else:
                        dirs.append(neg)
            for d in dirs:
                out.append(
                    Germ(
                        direction=d,
                        cloud_items=tw.function,
                        kink=tw.kink,
                        kind=tw.kind,
                        label=f"w{idx}t{j}",
                    )
                )
    return out


def order_germs(joint: Joint, germs):
    """Counterclockwise crossing order of the full loop around a joint."""
    cmp = ccw_compare_from((1, 0))
    return sorted(
        germs,
        key=functools.cmp_to_key(lambda a, b: cmp(a.direction, b.direction) or _tie(a, b)),
    )


def _tie(a: Germ, b: Germ) -> int:
    ka = (a.kink, a.cloud_items, a.label)
    kb = (b.kink, b.cloud_items, b.label)
    return -1 if ka < kb else (1 if ka > kb else 0)


# ---------------------------------------------------------------------------
# transit computation


@dataclass
class Value:
    """z^xi t^shift * num/den with degree-zero clouds num, den."""

    num: Cloud
    den: Cloud
    shift: int


class _Powers:
    """Cached powers of one crossing function, fractions via denominators."""

    def __init__(self, f: Cloud, ordf, cutoff):
        self.f = f
        self.ordf = ordf
        self.cutoff = cutoff
        tail_min = min((ordf(m) for m in f if m != (0, 0)), default=None)
        self.nilpotent = tail_min is not None and tail_min >= 1
        self._cache = {}

    def pos(self, e: int) -> Cloud:
        if e not in self._cache:
            if e >= 0:
                self._cache[e] = c_pow(self.f, e, self.ordf, self.cutoff)
            else:
                self._cache[e] = c_pow(
                    c_inv(self.f, self.ordf, self.cutoff), -e, self.ordf, self.cutoff
                )
        return self._cache[e]


def _theta_cloud(cl: Cloud, powers: _Powers, n: Vec, ordf, cutoff):
    """Crossing applied to a degree-zero cloud; returns (num, den)."""
    if not cl:
        return {}, c_one()
    sign = CROSSING_SIGN
    exps = {m: sign * dot(n, m) for m in cl}
    emin = min(exps.values())
    if emin >= 0 or powers.nilpotent:
        num: Cloud = {}
        for m, c in cl.items():
            num = c_add(
                num,
                c_scale(c_mul({m: Fraction(1)}, powers.pos(exps[m]), ordf, cutoff), c),
            )
        return num, c_one()
    # clear the common denominator with a single extra power of f
    shift = -emin
    num = {}
    for m, c in cl.items():
        num = c_add(
            num,
            c_scale(
                c_mul({m: Fraction(1)}, powers.pos(exps[m] + shift), ordf, cutoff), c
            ),
        )
    return num, powers.pos(shift)


def apply_germ(val: Value, germ: Germ, xi: Vec, ordf, cutoff) -> Value:
    n = rot90(germ.direction)
    pair_xi = dot(n, xi)
    shift = val.shift - germ.kink * pair_xi
    f = germ.cloud
    if c_is_one(f):
        return Value(val.num, val.den, shift)
    powers = _Powers(f, ordf, cutoff)
    n_num, n_den = _theta_cloud(val.num, powers, n, ordf, cutoff)
    d_num, d_den = _theta_cloud(val.den, powers, n, ordf, cutoff)
    num = c_mul(n_num, d_den, ordf, cutoff)
    den = c_mul(d_num, n_den, ordf, cutoff)
    # the prefactor z^xi crosses too: one factor f^{sign <n, xi>}
    e = CROSSING_SIGN * pair_xi
    if e:
        if e >= 0 or powers.nilpotent:
            num = c_mul(num, powers.pos(e), ordf, cutoff)
        else:
            den = c_mul(den, powers.pos(-e), ordf, cutoff)
    return Value(num, den, shift)


def transit(joint: Joint, ordered_germs, xi: Vec, ordf, cutoff) -> Value:
    val = Value(c_one(), c_one(), 0)
    for germ in ordered_germs:
        val = apply_germ(val, germ, xi, ordf, cutoff)
    return val


# ---------------------------------------------------------------------------
# discrepancy extraction


@dataclass
class TransitRecord:
    """Loop/transit result on the two coordinate exponents."""

    joint: Joint
    images: dict  # xi -> (monomial_part, correction cloud)
    consistent_to: int

    def is_consistent(self) -> bool:
        return all(not corr for _, corr in self.images.values())


def _ord_fn(joint: Joint):
    c_f = slot_cell(joint, (1, 0))
    if c_f != 0:
        raise ValueError("joints must be T-normalized before extraction")
    return lambda m: -m[0]


def joint_discrepancy(joint: Joint, germs, n: int):
    """Order-n discrepancy terms of the transit, keyed (xi, m) -> coeff.

    Returns (terms, amon) where amon maps xi to the monomial part
    (coefficient, exponent, t-shift) of the order-zero transit.  All
    grading is by ord_0(m) = -m_x, which is frame independent for the
    outgoing direction and nonnegative on every legal monomial.
    """
    ordered = order_germs(joint, germs)
    ordf = _ord_fn(joint)
    cutoff = n
    terms = {}
    amon = {}
    for xi in ((1, 0), (0, 1)):
        val = transit(joint, ordered, xi, ordf, cutoff)
        num0 = {m: c for m, c in val.num.items() if ordf(m) == 0}
        den0 = {m: c for m, c in val.den.items() if ordf(m) == 0}
        if not num0 or not den0:
            raise ConsistencyError(f"transit at {joint.point} lost its lowest order")
        a_cloud = layered_div_exact(num0, den0, ordf, 0)
        if len(a_cloud) != 1:
            raise ConsistencyError(
                f"lowest-order transit at {joint.point} is not a monomial map: {a_cloud}"
            )
        (a_m, a_c), = a_cloud.items()
        amon[xi] = (a_c, a_m, val.shift)
        # R = value / A - 1 = (num - A*den) / (A*den)
        r_num = c_sub(val.num, c_scale(c_mul({a_m: Fraction(1)}, val.den, ordf, cutoff), a_c))
        r_den = c_scale(c_mul({a_m: Fraction(1)}, val.den, ordf, cutoff), a_c)
        r = layered_div_exact(r_num, r_den, ordf, cutoff)
        for m, c in r.items():
            o = ordf(m)
            if o < 0:
                raise GradingError(
                    f"discrepancy {m} at {joint.point} has negative order"
                )
            if o == 0 and c:
                raise ConsistencyError(
                    f"order-zero discrepancy {m} at {joint.point}"
                )
            if o == n and c:
                terms[(xi, m)] = c
    return terms, amon


def _linear_part(amon) -> tuple:
    """Columns of the monomial map's linear action on exponents.

    The stored monomial part is the ratio image/input, so the input
    exponent is added back to recover the matrix columns.
    """
    _, m10, _ = amon[(1, 0)]
    _, m01, _ = amon[(0, 1)]
    return ((m10[0] + 1, m10[1]), (m01[0], m01[1] + 1))


def _apply_inverse_linear(cols, m: Vec) -> Optional[Vec]:
    (a, c), (b, d) = cols  # matrix [[a, b], [c, d]] columns m10=(a,c), m01=(b,d)
    det = a * d - b * c
    if det == 0:
        return None
    x = d * m[0] - b * m[1]
    y = -c * m[0] + a * m[1]
    if x % det or y % det:
        return None
    return (x // det, y // det)


def candidate_slots(joint: Joint, terms, amon, n: int, atoms):
    cands = set()

    def consider(m: Vec):
        if m == (0, 0):
            return
        if -m[0] != n:
            return
        u = primitive((-m[0], -m[1]))
        cell = slot_cell(joint, u)
        if u != (1, 0) and chart.delta_slope(u, cell) <= 0:
            return
        if slot_order(joint, m) < 1:
            return
        cands.add((u, m))

    cols = _linear_part(amon)
    for (_, m) in terms:
        consider(m)
        inv = _apply_inverse_linear(cols, m)
        if inv is not None:
            consider(inv)
        for v in atoms:
            consider((m[0] + v[0], m[1] + v[1]))
            consider((m[0] - v[0], m[1] - v[1]))
    return sorted(cands)


def _collect_atoms(germs):
    atoms = set()
    for g in germs:
        for m, _ in g.cloud_items:
            if m != (0, 0):
                atoms.add(m)
    return sorted(atoms)


def widen_slots(joint: Joint, slots, atoms, n: int):
    widened = set(slots)
    for (u, m) in list(slots):
        for v in atoms:
            for s in (1, -1):
                mm = (m[0] + s * v[0], m[1] + s * v[1])
                if mm == (0, 0) or -mm[0] != n:
                    continue
                uu = primitive((-mm[0], -mm[1]))
                cell = slot_cell(joint, uu)
                if (uu == (1, 0) or chart.delta_slope(uu, cell) > 0) and slot_order(
                    joint, mm
                ) >= 1:
                    widened.add((uu, mm))
    return sorted(widened)


def solve_joint(joint: Joint, germs, n: int):
    """Determine the order-n insertions at an isolated joint."""
    base_terms, amon = joint_discrepancy(joint, germs, n)
    if not base_terms:
        return []
    atoms = _collect_atoms(germs)
    slots = candidate_slots(joint, base_terms, amon, n, atoms)
    for _round in range(3):
        if not slots:
            raise ConsistencyError(
                f"no candidate directions for discrepancy at {joint.point}: {base_terms}"
            )
        columns = []
        keys = set(base_terms)
        for u, m in slots:
            trial = Germ(
                direction=u,
                cloud_items=cloud_to_function({(0, 0): Fraction(1), m: Fraction(1)}),
                kink=0,
                kind=KIND_WALL,
                label="trial",
            )
            terms_i, _ = joint_discrepancy(joint, list(germs) + [trial], n)
            col = {}
            for key in set(terms_i) | set(base_terms):
                delta = terms_i.get(key, Fraction(0)) - base_terms.get(key, Fraction(0))
                if delta:
                    col[key] = delta
                    keys.add(key)
            columns.append(col)
        key_list = sorted(keys)
        sol = _solve_exact(columns, key_list, base_terms)
        if sol is not None:
            out = []
            for (u, m), coeff in zip(slots, sol):
                if coeff:
                    out.append((u, m, coeff))
            return out
        new_slots = widen_slots(joint, slots, atoms, n)
        if new_slots == slots:
            break
        slots = new_slots
    raise ConsistencyError(
        f"discrepancy at {joint.point} (order {n}) is not factorizable: {base_terms}"
    )


def solve_order(structure: WallStructure, n: int, window: int):
    """One global order-n solve across all joints; returns insertions made."""
    joints = enumerate_joints(structure.walls, window)
    active = []
    for p in joints:
        joint = classify_joint(p)
        germs = germs_at(joint, structure.walls, window)
        if _min_interaction_order(joint, germs) > n:
            continue
        terms, amon = joint_discrepancy(joint, germs, n)
        active.append([joint, germs, terms, amon])
    target = {}
    for joint, germs, terms, amon in active:
        for (xi, m), c in terms.items():
            target[(joint.point, xi, m)] = c
    if not target:
        return []
    # candidate slots per joint, from its own discrepancy support
    slot_list = []
    for joint, germs, terms, amon in active:
        if not terms:
            continue
        atoms = _collect_atoms(germs)
        for u, m in candidate_slots(joint, terms, amon, n, atoms):
            slot_list.append((joint, u, m))
    for _round in range(3):
        columns = []
        keys = set(target)
        for joint_a, u, m in slot_list:
            wall = make_wall(
                KIND_WALL, joint_a.point, u,
                {(0, 0): Fraction(1), m: Fraction(1)},
                home_cell=slot_cell(joint_a, u),
            )
            col = {}
            for entry in active:
                joint_b, germs_b, terms_b, _ = entry
                affected = joint_b.point == joint_a.point or any(
                    wall.translated(jj).contains(joint_b.point)
                    for jj in range(-window, window + 1)
                )
                if not affected:
                    continue
                germs_bx = germs_b + _germs_of_wall(wall, joint_b, window)
                terms_i, _ = joint_discrepancy(joint_b, germs_bx, n)
                for key2 in set(terms_i) | set(terms_b):
                    delta = terms_i.get(key2, Fraction(0)) - terms_b.get(
                        key2, Fraction(0)
                    )
                    if delta:
                        col[(joint_b.point, key2[0], key2[1])] = delta
                        keys.add((joint_b.point, key2[0], key2[1]))
            columns.append(col)
        key_list = sorted(keys)
        sol = _solve_exact(columns, key_list, target)
        if sol is not None:
            out = []
            for (joint, u, m), coeff in zip(slot_list, sol):
                if coeff:
                    out.append((joint, u, m, coeff))
            return out
        widened = []
        seen = set()
        for joint, germs, terms, amon in active:
            if not terms:
                continue
            atoms = _collect_atoms(germs)
            base = [
                (u, m) for (jj, u, m) in slot_list if jj.point == joint.point
            ]
            for u, m in widen_slots(joint, base, atoms, n):
                key = (joint.point, u, m)
                if key not in seen:
                    seen.add(key)
                    widened.append((joint, u, m))
        if len(widened) == len(slot_list):
            break
        slot_list = widened
    raise ConsistencyError(f"order-{n} discrepancies are not factorizable: {target}")


def _germs_of_wall(wall: Wall, joint: Joint, window: int):
    out = []
    p = joint.point
    for jj in range(-window, window + 1):
        tw = wall.translated(jj)
        if not tw.contains(p):
            continue
        dirs = [tw.direction]
        if tw.base != p:
            dirs.append((-tw.direction[0], -tw.direction[1]))
        for d in dirs:
            out.append(
                Germ(
                    direction=d,
                    cloud_items=tw.function,
                    kink=0,
                    kind=KIND_WALL,
                    label="trial",
                )
            )
    return out


def _solve_exact(columns, key_list, target):
    """Solve sum_i x_i col_i = -target exactly; None if inconsistent."""
    rows = len(key_list)
    ncols = len(columns)
    a = [[col.get(key, Fraction(0)) for col in columns] for key in key_list]
    b = [-target.get(key, Fraction(0)) for key in key_list]
    # Gaussian elimination with partial pivoting over the rationals.
    pivots = []
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, rows):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[row], a[piv] = a[piv], a[row]
        b[row], b[piv] = b[piv], b[row]
        inv = 1 / a[row][col]
        a[row] = [x * inv for x in a[row]]
        b[row] = b[row] * inv
        for r in range(rows):
            if r != row and a[r][col]:
                factor = a[r][col]
                a[r] = [x - factor * y for x, y in zip(a[r], a[row])]
                b[r] = b[r] - factor * b[row]
        pivots.append(col)
        row += 1
        if row == rows:
            break
    # check consistency
    for r in range(row, rows):
        if b[r] and not any(a[r]):
            return None
    x = [Fraction(0)] * ncols
    for r, col in enumerate(pivots):
        x[col] = b[r]
    # verify (also guards underdetermined solutions that happen to work)
    for i, key in enumerate(key_list):
        acc = sum((columns[j].get(key, Fraction(0)) * x[j] for j in range(ncols)), Fraction(0))
        if acc != -target.get(key, Fraction(0)):
            return None
    return x


# ---------------------------------------------------------------------------
# joint enumeration


def _support_params(w: Wall, p: Point):
    dx = Fraction(p[0]) - w.base[0]
    dy = Fraction(p[1]) - w.base[1]
    if dx * w.direction[1] != dy * w.direction[0]:
        return None
    s = dx / w.direction[0] if w.direction[0] else dy / w.direction[1]
    if s < 0 or (w.length is not None and s > w.length):
        return None
    return s


def _intersect(w1: Wall, w2: Wall) -> Optional[Point]:
    d1, d2 = w1.direction, w2.direction
    den = cross(d1, d2)
    if den == 0:
        return None
    rx = w2.base[0] - w1.base[0]
    ry = w2.base[1] - w1.base[1]
    s = Fraction(rx * d2[1] - ry * d2[0], den)
    u = Fraction(rx * d1[1] - ry * d1[0], den)
    if s < 0 or u < 0:
        return None
    if w1.length is not None and s > w1.length:
        return None
    if w2.length is not None and u > w2.length:
        return None
    return w1.point_at(s)


def enumerate_joints(walls, window: int):
    """T-normalized joint points of the current structure."""
    points = {chart.vertex(0)}
    translates = []
    for w in walls:
        for j in range(-window, window + 1):
            translates.append(w.translated(j))
    reps = [w for w in walls]
    for w1 in reps:
        for w2 in translates:
            p = _intersect(w1, w2)
            if p is None:
                continue
            q, _ = t_normalize_point(p)
            if not chart.in_region(q):
                raise ConsistencyError(f"joint {q} escapes the unbounded region")
            points.add(q)
    return sorted(points, key=lambda p: (p[1], p[0]))


# ---------------------------------------------------------------------------
# completion driver


def ks_complete(order: int, chart_data=None, progress=None) -> WallStructure:
    """Build the consistent structure to the given t-order from the seeds."""
    from .chart import AffineChart

    structure = WallStructure(
        chart=chart_data or AffineChart(), order=order, walls=initial_walls()
    )
    window = order // 3 + 4
    for w in structure.walls:
        w.validate_grading()
    # order-zero sanity at the vertex: the seed functions are rigid
    vertex_joint = classify_joint(chart.vertex(0))
    base_terms, _ = joint_discrepancy(
        vertex_joint, germs_at(vertex_joint, structure.walls, window), 0
    )
    if base_terms:
        raise ConsistencyError(f"seed structure inconsistent at order zero: {base_terms}")

    for n in range(1, order + 1):
        # Insertions based at one joint can run through another, so each
        # order is one coupled linear solve across all joints.  Fresh
        # crossings with order-zero tails can surface new joints, hence
        # the short outer loop.
        for _pass in range(4):
            inserted = solve_order(structure, n, window)
            if not inserted:
                break
            for joint, u, m, coeff in inserted:
                _apply_insertion(structure, joint, u, m, coeff, order)
        else:
            raise ConsistencyError(f"order {n} did not stabilize")
        if progress:
            progress(n, structure)
    structure.joints = enumerate_joints(structure.walls, window)
    return structure


def _min_interaction_order(joint: Joint, germs) -> int:
    orders = []
    for g in germs:
        o = min((-m[0] for m, _ in g.cloud_items if m != (0, 0)), default=None)
        if o is not None:
            orders.append(o)
    if not orders:
        return 10**9
    kink_here = any(g.kink for g in germs)
    if len(orders) == 1:
        # single functional germ: a bare kink never interacts with it
        return orders[0] if kink_here else 10**9
    orders.sort()
    return orders[0] if kink_here else orders[0] + orders[1]


def _apply_insertion(structure: WallStructure, joint: Joint, u: Vec, m: Vec, coeff, order):
    cell = slot_cell(joint, u)
    if u != (1, 0) and chart.delta_slope(u, cell) <= 0:
        raise ConsistencyError(f"insertion at {joint.point} along {u} is not outgoing")
    ordf = lambda mm: -mm[0]  # scheduling grading, frame independent
    for w_idx, w in enumerate(structure.walls):
        if (
            w.kind == KIND_WALL
            and w.base == joint.point
            and w.direction == u
            and w.home_cell == cell
        ):
            new_cloud = c_mul(
                w.cloud, {(0, 0): Fraction(1), m: coeff}, ordf, structure.order
            )
            structure.walls[w_idx] = w.with_cloud(new_cloud)
            structure.walls[w_idx].validate_grading()
            return
    w = make_wall(
        KIND_WALL,
        joint.point,
        u,
        {(0, 0): Fraction(1), m: coeff},
        home_cell=cell,
    )
    w.validate_grading()
    structure.walls.append(w)


# ---------------------------------------------------------------------------
# verification / spec surface


def loop_product(point: Point, structure: WallStructure, n: int) -> TransitRecord:
    """Transit record at a joint: monomial parts and corrections mod t^{n+1}.

    The joint is consistent iff both coordinate exponents come back with no
    correction terms of order <= n.
    """
    q, _ = t_normalize_point(point)
    joint = classify_joint(q)
    window = structure.order // 3 + 4
    germs = germs_at(joint, structure.walls, window)
    ordered = order_germs(joint, germs)
    ordf = _ord_fn(joint)
    cutoff = n
    images = {}
    for xi in ((1, 0), (0, 1)):
        val = transit(joint, ordered, xi, ordf, cutoff)
        num0 = {m: c for m, c in val.num.items() if ordf(m) == 0}
        den0 = {m: c for m, c in val.den.items() if ordf(m) == 0}
        a_cloud = layered_div_exact(num0, den0, ordf, 0)
        (a_m, a_c), = a_cloud.items()
        r_num = c_sub(val.num, c_scale(c_mul({a_m: Fraction(1)}, val.den, ordf, cutoff), a_c))
        r_den = c_scale(c_mul({a_m: Fraction(1)}, val.den, ordf, cutoff), a_c)
        r = layered_div_exact(r_num, r_den, ordf, cutoff)
        corr = {m: c for m, c in sorted(r.items()) if 0 < ordf(m) <= n and c}
        images[xi] = ((a_c, a_m, val.shift), corr)
    return TransitRecord(joint=joint, images=images, consistent_to=n)


def verify_consistency(structure: WallStructure, n: Optional[int] = None) -> int:
    """Check every joint of the structure; returns the number checked."""
    n = structure.order if n is None else n
    window = structure.order // 3 + 4
    joints = enumerate_joints(structure.walls, window)
    for p in joints:
        record = loop_product(p, structure, n)
        if not record.is_consistent():
            raise ConsistencyError(
                f"loop product at {p} deviates from the identity: {record.images}"
            )
    return len(joints)


def verify_grading(structure: WallStructure) -> int:
    """Degree-zero homogeneity of every stored monomial; returns count."""
    checked = 0
    for w in structure.walls:
        w.validate_grading()
        for m, _ in w.function:
            if m == (0, 0):
                continue
            a = chart.ord_in_cell(m, w.home_cell)
            # normal form in the cell where the grading reads a = -m_x
            sheared = (m[0] + 3 * w.home_cell * m[1], m[1])
            if a != -sheared[0]:
                raise GradingError(f"monomial {m} on {w} violates a = -m_x")
            if w.kind == KIND_WALL and not w.is_horizontal():
                cell = w.home_cell
                if chart.delta_slope(w.direction, cell) <= 0 and w.base[0] >= chart.zigzag_x(w.base[1]):
                    raise GradingError(f"wall {w} is not outgoing")
            checked += 1
    return checked
