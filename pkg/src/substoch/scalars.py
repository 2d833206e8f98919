"""Scalar backends: exact arbitrary-precision rationals and IEEE-754 doubles.

The exact backend stores entries as ``fractions.Fraction`` (always in lowest
terms with positive denominator); comparisons are exact.  The float backend
stores plain ``float`` and compares with a relative tolerance plus an absolute
floor near zero.
"""

from __future__ import annotations

from fractions import Fraction


class ExactScalars:
    """Arithmetic over exact rationals."""

    name = "exact"
    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, value) -> Fraction:
        """Accept ints, Fractions and 'p/q' / decimal strings. Floats are
        rejected here: use from_float for an explicit exact conversion."""
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, float):
            raise TypeError(
                "refusing implicit float -> rational conversion; use from_float"
            )
        raise TypeError(f"cannot coerce {type(value).__name__} to a rational")

    def from_float(self, value: float) -> Fraction:
        return Fraction(value)

    def eq(self, a, b, tol=None) -> bool:
        return a == b

    def is_zero(self, a, tol=None) -> bool:
        return a == 0

    def sign(self, a) -> int:
        return (a > 0) - (a < 0)

    def residual_ok(self, lhs, rhs, residual, tol=None) -> bool:
        return residual == 0

    def format(self, a) -> str:
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"


class FloatScalars:
    """Arithmetic over 64-bit floats with tolerance-based comparison."""

    name = "float"
    zero = 0.0
    one = 1.0
    rel_tol = 1e-9
    abs_floor = 1e-12

    def coerce(self, value) -> float:
        if isinstance(value, bool):
            raise TypeError("bool is not a scalar")
        if isinstance(value, (int, float, Fraction)):
            return float(value)
        if isinstance(value, str):
            return float(value)
        raise TypeError(f"cannot coerce {type(value).__name__} to a float")

    def from_float(self, value: float) -> float:
        return float(value)

    def eq(self, a, b, tol=None) -> bool:
        rel = self.rel_tol if tol is None else tol
        diff = abs(a - b)
        return diff <= rel * max(abs(a), abs(b)) or diff <= self.abs_floor

    def is_zero(self, a, tol=None) -> bool:
        return self.eq(a, 0.0, tol)

    def sign(self, a) -> int:
        return (a > 0) - (a < 0)

    def residual_ok(self, lhs, rhs, residual, tol=None) -> bool:
        rel = self.rel_tol if tol is None else tol
        return abs(residual) <= rel * (1.0 + max(abs(lhs), abs(rhs)))

    def format(self, a) -> str:
        return repr(float(a))


EXACT = ExactScalars()
FLOAT = FloatScalars()
