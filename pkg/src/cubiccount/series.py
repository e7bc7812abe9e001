"""Exact truncated series arithmetic over arbitrary-precision rationals.

Everything downstream (period solver, canonical coordinate, curve-count
extraction) is built on three containers:

* ``PowerSeries`` -- a univariate power series truncated at a fixed order,
  with `fractions.Fraction` coefficients and a variable tag.
* ``LogSeries`` -- c0 + c1*L + c2*L**2 where L is a formal logarithm of the
  series variable.  Degree 2 is a hard cap.
* ``BiSeries`` -- a bivariate truncated series in (t, 1/w) used for the
  asymptotic wall-function product.

No floating point ever enters; binary operations truncate to the minimum
order of their operands.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping


class VariableMismatchError(ValueError):
    """Raised when combining series in different variables."""


class LogDegreeError(ValueError):
    """Raised when a product would exceed log-degree 2."""


def fraction_to_str(x: Fraction) -> str:
    """Render a rational as the exact string ``"p/q"`` (q >= 1)."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def fraction_from_str(s: str) -> Fraction:
    p, q = s.split("/")
    return Fraction(int(p), int(q))


def _coerce(c) -> Fraction:
    if isinstance(c, float):
        raise TypeError("float coefficients are not allowed; use Fraction or int")
    return Fraction(c)


@dataclass(frozen=True)
class PowerSeries:
    """Power series in `variable`, exact coefficients, truncated at `order`.

    ``coefficients[d]`` is the coefficient of variable**d for 0 <= d <= order.
    """

    variable: str
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(
            self, "coefficients", tuple(_coerce(c) for c in self.coefficients)
        )
        if not self.coefficients:
            raise ValueError("a series stores at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def from_list(cls, variable: str, coeffs: Iterable) -> "PowerSeries":
        return cls(variable, tuple(coeffs))

    @classmethod
    def zero(cls, variable: str, order: int) -> "PowerSeries":
        return cls(variable, (Fraction(0),) * (order + 1))

    @classmethod
    def one(cls, variable: str, order: int) -> "PowerSeries":
        return cls(variable, (Fraction(1),) + (Fraction(0),) * order)

    @classmethod
    def gen(cls, variable: str, order: int) -> "PowerSeries":
        """The series `variable` itself."""
        if order < 1:
            raise ValueError("order must be >= 1 to represent the variable")
        coeffs = [Fraction(0)] * (order + 1)
        coeffs[1] = Fraction(1)
        return cls(variable, tuple(coeffs))

    def __getitem__(self, d: int) -> Fraction:
        if d < 0 or d > self.order:
            raise IndexError(f"degree {d} outside truncation order {self.order}")
        return self.coefficients[d]

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return PowerSeries(self.variable, self.coefficients[: order + 1])

    def _check_var(self, other: "PowerSeries") -> None:
        if self.variable != other.variable:
            raise VariableMismatchError(
                f"cannot combine series in {self.variable!r} and {other.variable!r}"
            )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            coeffs = list(self.coefficients)
            coeffs[0] += Fraction(other)
            return PowerSeries(self.variable, tuple(coeffs))
        self._check_var(other)
        n = min(self.order, other.order)
        return PowerSeries(
            self.variable,
            tuple(self[d] + other[d] for d in range(n + 1)),
        )

    __radd__ = __add__

    def __neg__(self):
        return PowerSeries(self.variable, tuple(-c for c in self.coefficients))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return PowerSeries(self.variable, tuple(c * x for x in self.coefficients))
        self._check_var(other)
        n = min(self.order, other.order)
        out = [Fraction(0)] * (n + 1)
        for i, a in enumerate(self.coefficients[: n + 1]):
            if not a:
                continue
            for j in range(n + 1 - i):
                b = other.coefficients[j]
                if b:
                    out[i + j] += a * b
        return PowerSeries(self.variable, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined for plain series")
        result = PowerSeries.one(self.variable, self.order)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PowerSeries(
                self.variable,
                (Fraction(other),) + (Fraction(0),) * self.order,
            )
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return (
            self.variable == other.variable
            and self.coefficients == other.coefficients
        )

    def __hash__(self):
        return hash((self.variable, self.coefficients))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    def shift(self, k: int) -> "PowerSeries":
        """Multiply by variable**k (k >= 0), truncating at the same order."""
        if k < 0:
            raise ValueError("shift exponent must be nonnegative")
        coeffs = (Fraction(0),) * k + self.coefficients
        return PowerSeries(self.variable, coeffs[: self.order + 1])

    def __repr__(self):
        terms = [
            f"{c}*{self.variable}^{d}"
            for d, c in enumerate(self.coefficients)
            if c
        ]
        body = " + ".join(terms) if terms else "0"
        return f"PowerSeries({body} + O({self.variable}^{self.order + 1}))"

    def to_json(self) -> dict:
        return {
            "variable": self.variable,
            "order": self.order,
            "coefficients": [fraction_to_str(c) for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PowerSeries":
        coeffs = tuple(fraction_from_str(s) for s in data["coefficients"])
        if len(coeffs) != data["order"] + 1:
            raise ValueError("coefficient list does not match declared order")
        return cls(data["variable"], coeffs)


def ps_mul(a: PowerSeries, b: PowerSeries) -> PowerSeries:
    """Cauchy product, truncated at min(order(a), order(b))."""
    return a * b


def ps_exp(a: PowerSeries) -> PowerSeries:
    """exp(a) for a series with zero constant term."""
    if a[0] != 0:
        raise ValueError("ps_exp requires a zero constant term")
    n = a.order
    out = [Fraction(0)] * (n + 1)
    out[0] = Fraction(1)
    # exp(a)' = a' exp(a):  (d+1) e_{d+1} = sum_{j} (j+1) a_{j+1} e_{d-j}
    for d in range(n):
        acc = Fraction(0)
        for j in range(d + 1):
            acc += (j + 1) * a.coefficients[j + 1] * out[d - j]
        out[d + 1] = acc / (d + 1)
    return PowerSeries(a.variable, tuple(out))


def ps_log1p(a: PowerSeries) -> PowerSeries:
    """log(1 + a) for a series a with zero constant term."""
    if a[0] != 0:
        raise ValueError("ps_log1p requires a zero constant term")
    n = a.order
    # log(1+a)' = a'/(1+a):  solve (1+a) * out' = a' degree by degree.
    out = [Fraction(0)] * (n + 1)
    for d in range(n):
        acc = (d + 1) * a.coefficients[d + 1]
        for j in range(1, d + 1):
            acc -= a.coefficients[j] * (d + 1 - j) * out[d + 1 - j]
        out[d + 1] = acc / (d + 1)
    return PowerSeries(a.variable, tuple(out))


def ps_compose(outer: PowerSeries, inner: PowerSeries) -> PowerSeries:
    """outer(inner), requiring inner(0) = 0; result in inner's variable.

    The result order is the largest one both truncations support: the
    outer tail enters at inner's valuation times (outer order + 1).
    """
    if inner[0] != 0:
        raise ValueError("composition requires inner constant term 0")
    val = next((d for d, c in enumerate(inner.coefficients) if c), None)
    if val is None:
        return PowerSeries(
            inner.variable,
            (outer[0],) + (Fraction(0),) * inner.order,
        )
    n = min(inner.order, (outer.order + 1) * val - 1)
    result = PowerSeries.zero(inner.variable, n)
    inner_t = inner.truncate(n)
    # Horner evaluation in the (nilpotent mod order) series inner.
    for c in reversed(outer.coefficients[: n + 1]):
        result = result * inner_t + c
    return result


def ps_revert(a: PowerSeries) -> PowerSeries:
    """Compositional inverse of a = x + O(x^2) with unit linear coefficient.

    Newton iteration on b(a(x)) = x; the result satisfies both round trips
    to the shared truncation order.
    """
    if a[0] != 0 or a[1] != 1:
        raise ValueError("reversion requires a = x + O(x^2) with linear coefficient 1")
    n = a.order
    coeffs = [Fraction(0), Fraction(1)] + [Fraction(0)] * (n - 1)
    for d in range(2, n + 1):
        # Fix coefficient of x^d in a(b(x)) = x by adjusting b_d; the
        # correction enters linearly with unit factor through a's linear term.
        b = PowerSeries(a.variable, tuple(coeffs[: d + 1]))
        comp = ps_compose(a.truncate(d), b)
        coeffs[d] = -comp[d]
    return PowerSeries(a.variable, tuple(coeffs))


@dataclass(frozen=True)
class LogSeries:
    """c0 + c1*L + c2*L**2 with L the formal log of the shared variable."""

    c0: PowerSeries
    c1: PowerSeries
    c2: PowerSeries

    def __post_init__(self):
        if not (self.c0.variable == self.c1.variable == self.c2.variable):
            raise VariableMismatchError("log-series parts must share one variable")
        if not (self.c0.order == self.c1.order == self.c2.order):
            raise ValueError("log-series parts must share one truncation order")

    @property
    def variable(self) -> str:
        return self.c0.variable

    @property
    def order(self) -> int:
        return self.c0.order

    @property
    def parts(self):
        return (self.c0, self.c1, self.c2)

    @classmethod
    def from_series(cls, c0: PowerSeries) -> "LogSeries":
        zero = PowerSeries.zero(c0.variable, c0.order)
        return cls(c0, zero, zero)

    @classmethod
    def log_gen(cls, variable: str, order: int) -> "LogSeries":
        """The formal symbol L itself."""
        zero = PowerSeries.zero(variable, order)
        return cls(zero, PowerSeries.one(variable, order), zero)

    def truncate(self, order: int) -> "LogSeries":
        return LogSeries(
            self.c0.truncate(order), self.c1.truncate(order), self.c2.truncate(order)
        )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LogSeries.from_series(
                PowerSeries.one(self.variable, self.order) * Fraction(other)
            )
        if isinstance(other, PowerSeries):
            other = LogSeries.from_series(other)
        n = min(self.order, other.order)
        a, b = self.truncate(n), other.truncate(n)
        return LogSeries(a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2)

    __radd__ = __add__

    def __neg__(self):
        return LogSeries(-self.c0, -self.c1, -self.c2)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, PowerSeries)):
            return self + (-(self * 0 + other))
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return LogSeries(self.c0 * c, self.c1 * c, self.c2 * c)
        if isinstance(other, PowerSeries):
            other = LogSeries.from_series(other)
        return logseries_mul(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)

    def __repr__(self):
        return f"LogSeries(c0={self.c0!r}, c1={self.c1!r}, c2={self.c2!r})"

    def to_json(self) -> dict:
        return {"L0": self.c0.to_json(), "L1": self.c1.to_json(), "L2": self.c2.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> "LogSeries":
        return cls(
            PowerSeries.from_json(data["L0"]),
            PowerSeries.from_json(data["L1"]),
            PowerSeries.from_json(data["L2"]),
        )


def logseries_mul(a: LogSeries, b: LogSeries) -> LogSeries:
    """Product collecting L powers; rejects a nonzero L^3 or L^4 part."""
    n = min(a.order, b.order)
    a, b = a.truncate(n), b.truncate(n)
    prods = {}
    for i, ai in enumerate(a.parts):
        for j, bj in enumerate(b.parts):
            if ai.is_zero() or bj.is_zero():
                continue
            prods[i + j] = prods.get(i + j, PowerSeries.zero(a.variable, n)) + ai * bj
    for k in (3, 4):
        if k in prods and not prods[k].is_zero():
            raise LogDegreeError("product exceeds log-degree 2")
    zero = PowerSeries.zero(a.variable, n)
    return LogSeries(prods.get(0, zero), prods.get(1, zero), prods.get(2, zero))


def theta(a: LogSeries) -> LogSeries:
    """The Euler operator x d/dx extended by theta(L) = 1."""

    def euler(p: PowerSeries) -> PowerSeries:
        return PowerSeries(p.variable, tuple(d * c for d, c in enumerate(p.coefficients)))

    # theta(c_k L^k) = (euler c_k) L^k + k c_k L^{k-1}
    return LogSeries(
        euler(a.c0) + a.c1,
        euler(a.c1) + 2 * a.c2,
        euler(a.c2),
    )


def theta_ps(p: PowerSeries) -> PowerSeries:
    """Euler operator on a plain power series."""
    return PowerSeries(p.variable, tuple(d * c for d, c in enumerate(p.coefficients)))


class BiSeries:
    """Truncated series in t and 1/w: terms {(d_t >= 0, d_w <= 0): coeff}.

    `order` is the truncation order in t; zero coefficients are never stored.
    """

    __slots__ = ("order", "terms")

    def __init__(self, order: int, terms: Mapping | None = None):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        self.order = order
        self.terms = {}
        if terms:
            for (dt, dw), c in terms.items():
                c = _coerce(c)
                if not c:
                    continue
                if dt < 0 or dw > 0:
                    raise ValueError("exponents must satisfy d_t >= 0 and d_w <= 0")
                if dt <= order:
                    self.terms[(dt, dw)] = c

    @classmethod
    def one(cls, order: int) -> "BiSeries":
        return cls(order, {(0, 0): Fraction(1)})

    def __getitem__(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __eq__(self, other):
        return (
            isinstance(other, BiSeries)
            and self.order == other.order
            and self.terms == other.terms
        )

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiSeries(self.order, {(0, 0): Fraction(other)})
        n = min(self.order, other.order)
        out = {}
        for src in (self.terms, other.terms):
            for k, c in src.items():
                if k[0] <= n:
                    out[k] = out.get(k, Fraction(0)) + c
        return BiSeries(n, out)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiSeries(self.order, {(0, 0): Fraction(other)})
        return self + BiSeries(other.order, {k: -c for k, c in other.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BiSeries(self.order, {k: c * Fraction(other) for k, c in self.terms.items()})
        n = min(self.order, other.order)
        out = {}
        for (t1, w1), c1 in self.terms.items():
            for (t2, w2), c2 in other.terms.items():
                dt = t1 + t2
                if dt > n:
                    continue
                key = (dt, w1 + w2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return BiSeries(n, out)

    __rmul__ = __mul__

    def log(self) -> "BiSeries":
        """log of a series with constant term 1 and t-positive tail."""
        if self[(0, 0)] != 1:
            raise ValueError("log requires constant term 1")
        tail = BiSeries(self.order, {k: c for k, c in self.terms.items() if k != (0, 0)})
        if any(dt == 0 for dt, _ in tail.terms):
            raise ValueError("log requires the tail to vanish mod t")
        result = BiSeries(self.order)
        power = BiSeries.one(self.order)
        for j in range(1, self.order + 1):
            power = power * tail
            if not power.terms:
                break
            sign = Fraction(-1) ** (j + 1)
            result = result + power * (sign / j)
        return result

    def __repr__(self):
        items = sorted(self.terms.items())
        body = " + ".join(f"{c}*t^{dt}*w^{dw}" for (dt, dw), c in items) or "0"
        return f"BiSeries({body} + O(t^{self.order + 1}))"
