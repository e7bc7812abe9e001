"""Asymptotic chart of the degeneration base: geometry and grading.

The unbounded region of the base is a half-open cylinder; its universal
cover is drawn in a single honest affine chart.  The boundary zigzag has
vertices V_j = T^j(0, 0) for the gluing step

    T(x, y) = (x - 3y, y + 1),        T^3 = the full monodromy x -> Ax + b,

horizontal rays leave every vertex in the outgoing direction (1, 0), and
the strip between consecutive rays y = j, y = j+1 is one maximal cell.

The piecewise-linear distance delta from the bounded part has gradient
(1, 3j) on cell j; the kink of delta across each ray is the ray's t-class
3.  A monomial z^m on cell j therefore carries the implicit t-exponent

    ord_j(m) = -(m_x + 3 j m_y),

which is what makes every wall function homogeneous of degree zero.  All
transport bookkeeping reduces to re-reading ord in the new cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


Vec = tuple  # (int, int)
Point = tuple  # (Fraction, Fraction)

MONODROMY_LINEAR = ((1, -9), (0, 1))
MONODROMY_TRANSLATION = (-9, 3)
CIRCUMFERENCE = 3
MONODROMY_EXPONENT = 9
TOTAL_KINK = 9
PER_RAY_KINK = 3
OUTGOING = (1, 0)
BOUNDARY_VERTICES = ((-3, -1), (0, 0), (0, 1), (-3, 2))


@dataclass(frozen=True)
class AffineChart:
    """Chart constants of the cylinder; values are fixed by the geometry."""

    monodromy_linear: tuple = MONODROMY_LINEAR
    monodromy_translation: tuple = MONODROMY_TRANSLATION
    circumference: int = CIRCUMFERENCE
    monodromy_exponent: int = MONODROMY_EXPONENT
    total_kink: int = TOTAL_KINK
    per_ray_kink: int = PER_RAY_KINK
    boundary_vertices: tuple = BOUNDARY_VERTICES
    outgoing_direction: tuple = OUTGOING

    def __post_init__(self):
        a = self.monodromy_linear
        if (a[0][0], a[1][1]) != (1, 1) or a[1][0] != 0:
            raise ValueError("monodromy must be unipotent upper-triangular")
        # A - Id has rank one and annihilates the outgoing direction.
        ox, oy = self.outgoing_direction
        if (a[0][0] - 1) * ox + a[0][1] * oy or a[1][0] * ox + (a[1][1] - 1) * oy:
            raise ValueError("outgoing direction must be monodromy invariant")
        if self.monodromy_exponent != -a[0][1]:
            raise ValueError("exponent must be the negated off-diagonal entry")
        if self.total_kink != self.circumference * self.per_ray_kink:
            raise ValueError("total kink must be circumference * per-ray kink")

    def to_json(self) -> dict:
        return {
            "monodromy_linear": [list(r) for r in self.monodromy_linear],
            "monodromy_translation": list(self.monodromy_translation),
            "circumference": self.circumference,
            "monodromy_exponent": self.monodromy_exponent,
            "total_kink": self.total_kink,
            "per_ray_kink": self.per_ray_kink,
            "boundary_vertices": [list(v) for v in self.boundary_vertices],
            "outgoing_direction": list(self.outgoing_direction),
        }


def vertex(j: int) -> Point:
    """The boundary vertex V_j = T^j(0,0)."""
    return (Fraction(-3 * j * (j - 1), 2), Fraction(j))


def shift_point(p: Point, j: int) -> Point:
    """Apply T^j to a chart point."""
    x, y = Fraction(p[0]), Fraction(p[1])
    return (x - 3 * j * y - Fraction(3 * j * (j - 1), 2), y + j)


def shift_vec(v: Vec, j: int) -> Vec:
    """Apply the derivative of T^j to an integer tangent vector."""
    return (v[0] - 3 * j * v[1], v[1])


def grad_delta(cell: int) -> Vec:
    return (1, 3 * cell)


def ord_in_cell(m: Vec, cell: int) -> int:
    """Implicit t-exponent of the degree-zero monomial z^m on the given cell."""
    return -(m[0] + 3 * cell * m[1])


def delta_slope(direction: Vec, cell: int) -> int:
    """Directional derivative of delta along `direction` on the given cell."""
    return direction[0] + 3 * cell * direction[1]


def zigzag_x(y: Fraction) -> Fraction:
    """x-coordinate of the boundary zigzag at height y."""
    j = math.floor(y)
    vx, vy = vertex(j)
    return vx - 3 * j * (Fraction(y) - vy)


def in_region(p: Point) -> bool:
    """True iff p lies in the closed unbounded region (right of the zigzag)."""
    return Fraction(p[0]) >= zigzag_x(Fraction(p[1]))


def rot90(v: Vec) -> Vec:
    """Counterclockwise quarter turn."""
    return (-v[1], v[0])


def cross(u: Vec, v: Vec) -> int:
    return u[0] * v[1] - u[1] * v[0]


def dot(u: Vec, v: Vec) -> int:
    return u[0] * v[0] + u[1] * v[1]


def primitive(v: Vec) -> Vec:
    if v == (0, 0):
        raise ValueError("zero vector has no primitive form")
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def ccw_compare_from(base: Vec):
    """Exact comparator ordering directions by CCW angle in [0, 2pi) from base.

    Parallel-to-base sorts first, antiparallel at exactly half a turn.
    Use with functools.cmp_to_key.
    """

    def halfplane(v: Vec) -> int:
        c = cross(base, v)
        if c > 0:
            return 0
        if c < 0:
            return 1
        return 0 if dot(base, v) > 0 else 1

    def compare(u: Vec, v: Vec) -> int:
        hu, hv = halfplane(u), halfplane(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = cross(u, v)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return compare


def ccw_strictly_between(base_from: Vec, base_to: Vec, v: Vec) -> bool:
    """True iff v lies strictly inside the CCW sector from base_from to base_to."""
    cmp = ccw_compare_from(base_from)
    if cross(base_from, v) == 0 and dot(base_from, v) > 0:
        return False
    if cross(base_to, v) == 0 and dot(base_to, v) > 0:
        return False
    return cmp(v, base_to) < 0
