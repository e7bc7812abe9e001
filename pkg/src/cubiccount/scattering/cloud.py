"""Arithmetic for degree-zero monomial clouds.

A *cloud* is a finite dict {(m_x, m_y): Fraction}.  Because every wall
monomial is homogeneous of degree zero, its t-exponent on a given cell is
the implicit value ord_cell(m); clouds therefore never store t-exponents.
All products are truncated against a *grading*: a linear functional
ord(m) = -(m_x + 3*cell*m_y) and a cutoff.  The grading must be
nonnegative on every cloud entering a computation, which makes truncation
exact (dropping high terms can never feed back into kept orders).

Division is exact peel division with an automatically chosen weight
vector; it certifies factorizations instead of trusting them.
"""

from __future__ import annotations

from fractions import Fraction

Vec = tuple
Cloud = dict  # {(int, int): Fraction}

ONE: Cloud = {(0, 0): Fraction(1)}


class FactorizationError(RuntimeError):
    """A quantity that had to be a finite polynomial was not."""


def c_one() -> Cloud:
    return {(0, 0): Fraction(1)}


def c_is_one(a: Cloud) -> bool:
    return a == {(0, 0): Fraction(1)}


def c_add(a: Cloud, b: Cloud) -> Cloud:
    out = dict(a)
    for m, c in b.items():
        s = out.get(m, Fraction(0)) + c
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def c_neg(a: Cloud) -> Cloud:
    return {m: -c for m, c in a.items()}


def c_sub(a: Cloud, b: Cloud) -> Cloud:
    return c_add(a, c_neg(b))


def c_scale(a: Cloud, s: Fraction) -> Cloud:
    if not s:
        return {}
    return {m: c * s for m, c in a.items()}


def c_mul(a: Cloud, b: Cloud, ordf, cutoff: int) -> Cloud:
    out: Cloud = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = (m1[0] + m2[0], m1[1] + m2[1])
            if ordf(m) > cutoff:
                continue
            s = out.get(m, Fraction(0)) + c1 * c2
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def c_pow(a: Cloud, k: int, ordf, cutoff: int) -> Cloud:
    if k < 0:
        raise ValueError("use c_inv_pow for negative powers")
    result = c_one()
    base = a
    while k:
        if k & 1:
            result = c_mul(result, base, ordf, cutoff)
        base = c_mul(base, base, ordf, cutoff)
        k >>= 1
    return result


def c_min_ord(a: Cloud, ordf) -> int:
    """Minimum grading of the non-constant part (cutoff+1-ish if none)."""
    orders = [ordf(m) for m in a if m != (0, 0)]
    return min(orders) if orders else 10**9


def c_inv(a: Cloud, ordf, cutoff: int) -> Cloud:
    """Inverse of 1 + tail where the tail has strictly positive grading."""
    c0 = a.get((0, 0), Fraction(0))
    if not c0:
        raise FactorizationError("inverse requires a nonzero constant term")
    tail = {m: c / c0 for m, c in a.items() if m != (0, 0)}
    if any(ordf(m) <= 0 for m in tail):
        raise FactorizationError("series inverse requires positive-order tail")
    result = c_one()
    power = c_one()
    min_step = min((ordf(m) for m in tail), default=cutoff + 1)
    for j in range(1, cutoff // max(min_step, 1) + 2):
        power = c_mul(power, tail, ordf, cutoff)
        if not power:
            break
        result = c_add(result, c_scale(power, Fraction(-1) ** j))
    return c_scale(result, 1 / c0)


def _weight_candidates():
    yield from [
        (1, 0), (0, 1), (-1, 0), (0, -1), (1, 1), (-1, -1), (1, -1), (-1, 1),
        (2, 1), (1, 2), (-2, 1), (-1, 2), (2, -1), (1, -2), (-2, -1), (-1, -2),
        (3, 1), (1, 3), (-3, 1), (-1, 3), (3, -1), (1, -3), (5, 2), (2, 5),
        (7, 3), (3, 7), (-5, 2), (-2, 5), (11, 4), (4, 11),
    ]


def _choose_weight(den: Cloud) -> Vec:
    for w in _weight_candidates():
        vals = sorted(w[0] * m[0] + w[1] * m[1] for m in den)
        if len(vals) == 1 or vals[0] < vals[1]:
            return w
    raise FactorizationError("no weight vector separates the divisor support")


def line_div_exact(num: Cloud, den: Cloud) -> Cloud:
    """Exact division by a divisor supported on the ord-zero line m_x = 0.

    Peels from the lowest q-power of the divisor; the quotient exists iff
    the numerator is exactly divisible, else FactorizationError.
    """
    if any(m[0] != 0 for m in den):
        raise FactorizationError("line divisor must be supported on m_x = 0")
    if not den:
        raise ZeroDivisionError("empty divisor")
    lead = min(den, key=lambda m: m[1])
    lead_c = den[lead]
    rest = {m: c for m, c in den.items() if m != lead}
    quot: Cloud = {}
    work = dict(num)
    guard = 0
    while work:
        guard += 1
        if guard > 100000:
            raise FactorizationError("line division did not terminate")
        m = min(work, key=lambda mm: (mm[0], mm[1]))
        c = work.pop(m)
        qm = (m[0], m[1] - lead[1])
        qc = c / lead_c
        quot[qm] = quot.get(qm, Fraction(0)) + qc
        for rm, rc in rest.items():
            km = (qm[0], qm[1] + rm[1])
            s = work.get(km, Fraction(0)) - qc * rc
            if s:
                work[km] = s
            else:
                work.pop(km, None)
    return quot


def layered_div_exact(num: Cloud, den: Cloud, ordf, cutoff: int) -> Cloud:
    """Quotient num/den mod grading-cutoff, requiring polynomial layers.

    The denominator's ord-zero layer lives on the line m_x = 0; the
    quotient is solved layer by layer, each step an exact line division.
    Raises FactorizationError when a layer fails to divide out.
    """

    def split(cl: Cloud) -> dict:
        layers: dict = {}
        for m, c in cl.items():
            o = ordf(m)
            if 0 <= o <= cutoff:
                layers.setdefault(o, {})[m] = c
            elif o < 0:
                raise FactorizationError(f"negative grading on {m}")
        return layers

    nl = split(num)
    dl = split(den)
    d0 = dl.get(0)
    if not d0:
        raise FactorizationError("denominator vanishes at order zero")
    out: Cloud = {}
    s_layers: dict = {}
    for k in range(cutoff + 1):
        rhs = dict(nl.get(k, {}))
        for j in range(1, k + 1):
            dj = dl.get(j)
            if not dj or (k - j) not in s_layers:
                continue
            for m1, c1 in dj.items():
                for m2, c2 in s_layers[k - j].items():
                    m = (m1[0] + m2[0], m1[1] + m2[1])
                    s = rhs.get(m, Fraction(0)) - c1 * c2
                    if s:
                        rhs[m] = s
                    else:
                        rhs.pop(m, None)
        sk = line_div_exact(rhs, d0)
        if sk:
            s_layers[k] = sk
            for m, c in sk.items():
                out[m] = c
    return out


def c_div_exact(num: Cloud, den: Cloud, ordf, cutoff: int, max_terms: int = 200000) -> Cloud:
    """Exact quotient num/den in the truncated cloud ring; raises if inexact."""
    if not num:
        return {}
    if c_is_one(den):
        return dict(num)
    w = _choose_weight(den)

    def wval(m):
        return (w[0] * m[0] + w[1] * m[1], m)

    lead = min(den, key=wval)
    lead_c = den[lead]
    rest = {m: c for m, c in den.items() if m != lead}
    quot: Cloud = {}
    work = dict(num)
    for _ in range(max_terms):
        if not work:
            return quot
        m = min(work, key=wval)
        c = work.pop(m)
        qm = (m[0] - lead[0], m[1] - lead[1])
        if ordf(qm) > cutoff:
            # Quotient term beyond truncation; its multiples were truncated
            # away from num as well, so it is simply dropped.
            continue
        qc = c / lead_c
        quot[qm] = quot.get(qm, Fraction(0)) + qc
        for rm, rc in rest.items():
            km = (qm[0] + rm[0], qm[1] + rm[1])
            if ordf(km) > cutoff:
                continue
            s = work.get(km, Fraction(0)) - qc * rc
            if s:
                work[km] = s
            else:
                work.pop(km, None)
    raise FactorizationError("peel division did not terminate; quotient not polynomial")
