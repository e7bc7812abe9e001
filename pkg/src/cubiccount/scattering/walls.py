"""Walls, slabs and kink-rays of the cylinder wall structure.

A wall is a ray (or, for slabs, a unit segment) with a function
1 + (cloud of degree-zero monomials).  Monomials of a genuine wall are
antiparallel to its direction; slab functions are tangent to their edge.
The structure is stored per fundamental domain of the gluing map T and
extended by equivariance.

The initial data per domain:

* the slab on the boundary edge, function 1 + z^m with m pointing from
  the viewing vertex toward the edge's interior singularity (the two ends
  see opposite normalizations),
* the kink-ray (pure t-class 3, function 1),
* the two continuations of the slab line beyond its endpoints, with
  functions 1 + z^(0,1) (downward) and 1 + z^(-3,-1) (up-right); their
  coefficients are rigid: anything else breaks order-zero consistency of
  the transit around the vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional

from . import chart
from .chart import AffineChart, Point, Vec
from .cloud import Cloud, c_one

KIND_WALL = "wall"
KIND_SLAB = "slab"
KIND_KINK_RAY = "kink-ray"


class GradingError(RuntimeError):
    """A monomial violated the degree-zero homogeneity."""


@dataclass(frozen=True)
class Monomial:
    """Exponent vector with explicit t-power, as used on wire formats."""

    m: Vec
    a: int

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("t-power must be nonnegative")
        if self.m == (0, 0) and self.a == 0:
            raise ValueError("the constant term is implicit, not a Monomial")


@dataclass(frozen=True)
class Wall:
    kind: str
    base: Point
    direction: Vec
    function: tuple  # sorted ((m, coeff) ...) with m a Vec, coeff a Fraction
    home_cell: int
    kink: int = 0
    length: Optional[Fraction] = None  # None = unbounded ray

    def __post_init__(self):
        object.__setattr__(
            self, "base", (Fraction(self.base[0]), Fraction(self.base[1]))
        )
        if self.direction != chart.primitive(self.direction):
            raise ValueError("wall directions are stored primitive")
        if self.kind == KIND_WALL:
            d = self.direction
            for m, _ in self.function:
                if m == (0, 0):
                    continue
                if chart.cross(m, d) != 0 or chart.dot(m, d) >= 0:
                    raise ValueError(
                        f"wall monomial {m} is not antiparallel to direction {d}"
                    )

    @property
    def cloud(self) -> Cloud:
        return {m: c for m, c in self.function}

    def is_horizontal(self) -> bool:
        return self.direction in ((1, 0), (-1, 0))

    def with_cloud(self, cloud: Cloud) -> "Wall":
        return replace(self, function=cloud_to_function(cloud))

    def translated(self, j: int) -> "Wall":
        """The T^j image of this wall."""
        if j == 0:
            return self
        return Wall(
            kind=self.kind,
            base=chart.shift_point(self.base, j),
            direction=chart.primitive(chart.shift_vec(self.direction, j)),
            function=tuple(
                (chart.shift_vec(m, j), c) for m, c in self.function
            ),
            home_cell=self.home_cell + j,
            kink=self.kink,
            length=self.length,
        )

    def point_at(self, s: Fraction) -> Point:
        return (
            self.base[0] + s * self.direction[0],
            self.base[1] + s * self.direction[1],
        )

    def contains(self, p: Point) -> bool:
        dx = Fraction(p[0]) - self.base[0]
        dy = Fraction(p[1]) - self.base[1]
        if dx * self.direction[1] != dy * self.direction[0]:
            return False
        if self.direction[0]:
            s = dx / self.direction[0]
        else:
            s = dy / self.direction[1]
        if s < 0:
            return False
        return self.length is None or s <= self.length

    def min_order(self, ordf) -> int:
        orders = [ordf(m) for m, _ in self.function if m != (0, 0)]
        return min(orders) if orders else 10**9

    def validate_grading(self) -> None:
        """Stored monomials must be degree zero with a >= 0 on the home cell."""
        for m, _ in self.function:
            if m == (0, 0):
                continue
            a = chart.ord_in_cell(m, self.home_cell)
            if a < 0 or (self.kind == KIND_WALL and a == 0):
                raise GradingError(
                    f"monomial {m} has t-power {a} on cell {self.home_cell}"
                )

    def function_json(self) -> list:
        out = []
        for m, c in self.function:
            if m == (0, 0):
                continue
            out.append(
                {
                    "m": list(m),
                    "a": chart.ord_in_cell(m, self.home_cell),
                    "c": f"{c.numerator}/{c.denominator}",
                }
            )
        return out

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "base": [
                f"{self.base[0].numerator}/{self.base[0].denominator}",
                f"{self.base[1].numerator}/{self.base[1].denominator}",
            ],
            "direction": list(self.direction),
            "kink": self.kink,
            "function": self.function_json(),
        }


def cloud_to_function(cloud: Cloud) -> tuple:
    items = [(m, Fraction(c)) for m, c in cloud.items() if c]
    items.sort(key=lambda mc: (mc[0], mc[1]))
    return tuple(items)


def make_wall(kind, base, direction, cloud, home_cell, kink=0, length=None) -> Wall:
    return Wall(
        kind=kind,
        base=base,
        direction=chart.primitive(direction),
        function=cloud_to_function(cloud),
        home_cell=home_cell,
        kink=kink,
        length=length,
    )


SINGULARITY = (Fraction(0), Fraction(1, 2))  # on the boundary edge V_0 V_1


def initial_walls() -> list:
    """Fundamental-domain representatives of the seed structure.

    The invariant line of the edge singularity is stored as two half-lines
    based at the singularity; each carries the function 1 + z^m with m
    pointing back toward the singularity, the normalization in which all
    crossings around the line cancel pairwise.
    """
    one = Fraction(1)
    return [
        make_wall(
            KIND_SLAB, SINGULARITY, (0, -1),
            {(0, 0): one, (0, 1): one}, home_cell=0,
        ),
        make_wall(
            KIND_SLAB, SINGULARITY, (0, 1),
            {(0, 0): one, (0, -1): one}, home_cell=0,
        ),
        make_wall(
            KIND_KINK_RAY, (0, 0), (1, 0), c_one(), home_cell=0,
            kink=chart.PER_RAY_KINK,
        ),
    ]


@dataclass
class WallStructure:
    """Completed (or in-progress) structure: chart constants plus walls.

    `walls` holds one representative per T-orbit; `order` is the t-truncation.
    `joints` is filled by the completion engine.
    """

    chart: AffineChart
    order: int
    walls: list = field(default_factory=list)
    joints: list = field(default_factory=list)

    def horizontal_walls(self):
        return [w for w in self.walls if w.direction == (1, 0) and w.kind == KIND_WALL]

    def wall_counts(self) -> dict:
        counts = {}
        for w in self.walls:
            counts[w.kind] = counts.get(w.kind, 0) + 1
        return counts

    def to_json(self) -> dict:
        return {
            "chart": self.chart.to_json(),
            "order": self.order,
            "walls": [w.to_json() for w in sorted_walls(self.walls)],
        }


def sorted_walls(walls) -> list:
    return sorted(
        walls,
        key=lambda w: (w.kind, w.base[1], w.base[0], w.direction, w.function),
    )


def wall_cross(mono: Monomial, wall: Wall, orientation: int, order: Optional[int]):
    """One crossing automorphism applied to a single monomial.

    Returns the expansion of f^{<n, m>} t^{kink <n, m>} z^m as a list of
    (coefficient, Monomial), truncated at the given t-order.  `orientation`
    (+1/-1) fixes the side of the primitive normal n.
    """
    if order is None:
        raise ValueError("a truncation order is required for a crossing")
    if orientation not in (1, -1):
        raise ValueError("orientation must be +1 or -1")
    n = chart.rot90(wall.direction)
    n = (orientation * n[0], orientation * n[1])
    pairing = chart.dot(n, mono.m)
    a_shift = wall.kink * pairing
    if mono.a + a_shift < 0:
        raise GradingError("crossing produced a negative t-power")

    ordf = lambda m: chart.ord_in_cell(m, wall.home_cell)
    f = wall.cloud
    if pairing >= 0:
        power = _cloud_pow_checked(f, pairing, ordf, order)
    else:
        from .cloud import c_inv, c_pow

        power = c_pow(c_inv(f, ordf, order), -pairing, ordf, order)
    out = []
    for m, c in sorted(power.items()):
        total_m = (mono.m[0] + m[0], mono.m[1] + m[1])
        a = mono.a + a_shift + chart.ord_in_cell(m, wall.home_cell)
        if a > order:
            continue
        out.append((c, Monomial(total_m, a)))
    return out


def _cloud_pow_checked(f: Cloud, k: int, ordf, cutoff: int) -> Cloud:
    from .cloud import c_pow

    return c_pow(f, k, ordf, cutoff)


def monodromy_transport(mono: Monomial, crossings: int) -> Monomial:
    """Transport an exponent across the fundamental-domain cut.

    One positive crossing applies the full monodromy matrix to the exponent;
    the t-power never changes.
    """
    a = chart.MONODROMY_LINEAR
    m = mono.m
    for _ in range(abs(crossings)):
        if crossings > 0:
            m = (a[0][0] * m[0] + a[0][1] * m[1], a[1][0] * m[0] + a[1][1] * m[1])
        else:
            # inverse of a unipotent [[1, e], [0, 1]] is [[1, -e], [0, 1]]
            m = (m[0] - a[0][1] * m[1], m[1])
    return Monomial(m, mono.a) if (m, mono.a) != ((0, 0), 0) else mono
