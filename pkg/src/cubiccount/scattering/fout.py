"""Asymptotic wall-function product and the second route to the counts.

Per fundamental domain of the cylinder, the product of the functions of
all unbounded (horizontal) walls and of the kink-ray slabs is a series
f_out in t and 1/w.  Its logarithm is supported on the antidiagonal
(t^{3d}, w^{-3d}) and the coefficient there is 3d * N_d.
"""

from __future__ import annotations

from ..mirror_map import SCATTERING_PIPELINE, NdTable
from ..series import BiSeries
from ..scattering.chart import CIRCUMFERENCE
from .walls import KIND_KINK_RAY, WallStructure


class SupportError(RuntimeError):
    """f_out carried a term off the homogeneous antidiagonal."""


def f_out(structure: WallStructure) -> BiSeries:
    """Product of all asymptotic wall functions over one fundamental domain.

    Walls are stored one per orbit of the one-cell shift T, while the
    cylinder's fundamental domain spans circumference-many cells, so each
    representative's function enters with that multiplicity.
    """
    k = structure.order
    result = BiSeries.one(k)
    for w in structure.walls:
        if w.kind == KIND_KINK_RAY:
            # kink-rays carry the t-class; their function stays 1 and all
            # scattering output lives on overlay walls
            continue
        if w.direction == (1, 0):
            fw = _wall_biseries(w, k)
            for _ in range(CIRCUMFERENCE):
                result = result * fw
        elif w.direction == (-1, 0):
            raise SupportError("unbounded wall pointing against the outgoing direction")
    return result


def _wall_biseries(w, k: int) -> BiSeries:
    terms = {}
    for m, c in w.function:
        if m == (0, 0):
            terms[(0, 0)] = c
            continue
        if m[1] != 0 or m[0] >= 0:
            raise SupportError(
                f"horizontal wall carries non-outgoing monomial {m}"
            )
        # t-exponent of z^m is -m_x on every cell
        terms[(-m[0], m[0])] = c
    return BiSeries(k, terms)


def log_fout_coefficients(fout: BiSeries, max_degree: int) -> list:
    """The values [w^{-3d} t^{3d}] log f_out / (3d) for d = 1..max_degree.

    Raises SupportError for any term off the homogeneous antidiagonal.
    """
    if fout.order < 3 * max_degree:
        raise ValueError("f_out order must be at least 3 * max_degree")
    log_fout = fout.log()
    for (dt, dw), c in log_fout.terms.items():
        if c and (dw != -dt or dt % 3):
            raise SupportError(
                f"log f_out has coefficient {c} at (t^{dt}, w^{dw})"
            )
    return [log_fout[(3 * d, -3 * d)] / (3 * d) for d in range(1, max_degree + 1)]


def extract_nd_scattering(fout: BiSeries, max_degree: int) -> NdTable:
    """Curve counts from the asymptotic product; the table checks N_1 = 9."""
    values = log_fout_coefficients(fout, max_degree)
    return NdTable(values=tuple(values), source=SCATTERING_PIPELINE)
