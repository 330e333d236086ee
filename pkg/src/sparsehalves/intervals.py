"""Outward-rounded interval arithmetic, plus forward-mode interval derivatives.

Endpoints are binary64 floats; every operation nudges the lower endpoint down
and the upper endpoint up with ``math.nextafter``, so each result encloses
the true real range (at the cost of a spare ulp).  Division by an interval
containing zero degrades to the whole line rather than raising: unsoundness
is never an option, subdivision is.

``Dual`` carries an interval value together with interval enclosures of the
partial derivatives, which powers mean-value-form bounds: f on a box is
contained in f(mid) + grad(box) . (box - mid).
"""

from __future__ import annotations

import math
from fractions import Fraction

_INF = math.inf


def _down(x):
    return x if x == -_INF else math.nextafter(x, -_INF)


def _up(x):
    return x if x == _INF else math.nextafter(x, _INF)


def _mul_pt(a, b):
    # 0 * inf would be nan; zero annihilates in enclosure arithmetic
    if a == 0.0 or b == 0.0:
        return 0.0
    return a * b


_FRACTION_CACHE = {}
_INT_CACHE = {}


class Interval:
    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            lo, hi = -_INF, _INF
        if lo > hi:
            raise ValueError(f"inverted interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- construction ------------------------------------------------------

    @classmethod
    def whole(cls):
        return cls(-_INF, _INF)

    @classmethod
    def from_fraction(cls, q):
        q = Fraction(q)
        cached = _FRACTION_CACHE.get(q)
        if cached is not None:
            return cached
        f = float(q)
        if math.isinf(f):
            iv = cls(-_INF, _INF)
        elif Fraction(f) == q:
            iv = cls(f, f)
        else:
            lo = f if Fraction(f) < q else _down(f)
            hi = f if Fraction(f) > q else _up(f)
            iv = cls(lo, hi)
        if len(_FRACTION_CACHE) < 4096:
            _FRACTION_CACHE[q] = iv
        return iv

    @classmethod
    def _coerce(cls, other):
        if isinstance(other, Interval):
            return other
        if isinstance(other, int):
            cached = _INT_CACHE.get(other)
            if cached is not None:
                return cached
            if abs(other) <= 1 << 53:
                iv = cls(float(other))
            else:
                iv = cls.from_fraction(other)
            if -64 <= other <= 64:
                _INT_CACHE[other] = iv
            return iv
        if isinstance(other, Fraction):
            return cls.from_fraction(other)
        if isinstance(other, float):
            return cls(other)
        return NotImplemented

    # -- queries -------------------------------------------------------------

    def width(self):
        return self.hi - self.lo

    def mid(self):
        if self.lo == -_INF or self.hi == _INF:
            return 0.0
        m = self.lo + (self.hi - self.lo) / 2
        return min(max(m, self.lo), self.hi)

    def contains(self, q):
        q = Fraction(q)
        lo_ok = self.lo == -_INF or Fraction(self.lo) <= q
        hi_ok = self.hi == _INF or q <= Fraction(self.hi)
        return lo_ok and hi_ok

    def contains_zero(self):
        return self.lo <= 0.0 <= self.hi

    def is_finite(self):
        return self.lo != -_INF and self.hi != _INF

    def __repr__(self):
        return f"[{self.lo!r}, {self.hi!r}]"

    # -- arithmetic ------------------------------------------------------------

    def __add__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(_down(self.lo + other.lo), _up(self.hi + other.hi))

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return Interval(_down(self.lo - other.hi), _up(self.hi - other.lo))

    def __rsub__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        p = (
            _mul_pt(self.lo, other.lo),
            _mul_pt(self.lo, other.hi),
            _mul_pt(self.hi, other.lo),
            _mul_pt(self.hi, other.hi),
        )
        return Interval(_down(min(p)), _up(max(p)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if other.contains_zero():
            return Interval.whole()
        inv = Interval(_down(1.0 / other.hi), _up(1.0 / other.lo))
        return self * inv

    def __rtruediv__(self, other):
        other = Interval._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if exponent != 2:
            raise ValueError("only squaring is supported")
        return self.square()

    def square(self):
        # dedicated rule: tighter than self * self when 0 is inside
        a, b = abs(self.lo), abs(self.hi)
        hi = _up(_mul_pt(max(a, b), max(a, b)))
        if self.contains_zero():
            return Interval(0.0, hi)
        lo = _down(_mul_pt(min(a, b), min(a, b)))
        return Interval(lo, hi)

    def hull(self, other):
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))


def recip_pole_upper(iv: Interval) -> Interval:
    """Enclosure of 1/t valid for every t in ``iv`` with t > 0, namely
    [1/hi, +inf).  The tool behind divergence collars: the vanishing factor's
    reciprocal is bounded below by the reciprocal of its upper endpoint."""
    if not iv.hi > 0.0:
        raise ValueError("factor has no positive part")
    if iv.hi == _INF:
        return Interval(0.0, _INF)
    return Interval(_down(1.0 / iv.hi), _INF)


class Dual:
    """Interval value plus interval partial derivatives (forward mode)."""

    __slots__ = ("value", "grad")

    def __init__(self, value, grad):
        self.value = value
        self.grad = tuple(grad)

    @classmethod
    def seed(cls, box):
        n = len(box)
        out = []
        for i, iv in enumerate(box):
            grad = [Interval(0.0)] * n
            grad[i] = Interval(1.0)
            out.append(cls(iv, grad))
        return out

    @classmethod
    def _coerce(cls, other, n):
        if isinstance(other, Dual):
            return other
        iv = Interval._coerce(other)
        if iv is NotImplemented:
            return NotImplemented
        return cls(iv, [Interval(0.0)] * n)

    def __add__(self, other):
        other = Dual._coerce(other, len(self.grad))
        if other is NotImplemented:
            return NotImplemented
        return Dual(
            self.value + other.value,
            [a + b for a, b in zip(self.grad, other.grad)],
        )

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.value, [-g for g in self.grad])

    def __sub__(self, other):
        other = Dual._coerce(other, len(self.grad))
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = Dual._coerce(other, len(self.grad))
        if other is NotImplemented:
            return NotImplemented
        return Dual(
            self.value * other.value,
            [
                self.value * gb + other.value * ga
                for ga, gb in zip(self.grad, other.grad)
            ],
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Dual._coerce(other, len(self.grad))
        if other is NotImplemented:
            return NotImplemented
        v = other.value
        q = self.value / v
        vsq = v.square()
        grad = [
            (ga * v - self.value * gb) / vsq
            for ga, gb in zip(self.grad, other.grad)
        ]
        return Dual(q, grad)

    def __rtruediv__(self, other):
        other = Dual._coerce(other, len(self.grad))
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, exponent):
        if exponent != 2:
            raise ValueError("only squaring is supported")
        two = Interval(2.0)
        return Dual(
            self.value.square(), [two * self.value * g for g in self.grad]
        )


def mean_value_enclosure(expr, box):
    """Mean-value-form enclosure of expr over the box; None when a gradient
    or midpoint evaluation blows up (division through zero)."""
    mids = [Interval(iv.mid()) for iv in box]
    center = expr(*mids)
    if isinstance(center, Dual):  # pragma: no cover - exprs return Interval here
        center = center.value
    if not center.is_finite():
        return None
    duals = Dual.seed(box)
    full = expr(*duals)
    out = center
    for iv, mid, g in zip(box, mids, full.grad):
        if not g.is_finite():
            return None
        out = out + g * (iv - mid)
    return out
