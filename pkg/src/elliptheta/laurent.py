"""Exact Laurent polynomials in one variable over exact scalars.

Coefficients are Fractions by default but any field scalar with +,*,-,/ and
equality against 0 works (complex is accepted for numeric evaluation paths).
Used by the Macdonald/Cherednik layer, where every identity is checked with
zero tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .types import ConsistencyError


def _as_scalar(v):
    if isinstance(v, (int, str)):
        return Fraction(v)
    return v


class LaurentPoly:
    """A Laurent polynomial sum_d coeff[d] * x^d with exact coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, object] | Iterable[tuple[int, object]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        c: dict[int, object] = {}
        for d, v in items:
            v = _as_scalar(v)
            if v == 0:
                continue
            c[int(d)] = c.get(int(d), Fraction(0)) + v
        self.coeffs = {d: v for d, v in c.items() if v != 0}

    # ------------------------------------------------------------- basics

    @staticmethod
    def x(power: int = 1) -> "LaurentPoly":
        return LaurentPoly({power: Fraction(1)})

    @staticmethod
    def const(v) -> "LaurentPoly":
        return LaurentPoly({0: v})

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(tuple(sorted(self.coeffs.items())))

    def coeff(self, d: int):
        return self.coeffs.get(d, Fraction(0))

    @property
    def min_deg(self) -> int:
        return min(self.coeffs) if self.coeffs else 0

    @property
    def max_deg(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    def is_symmetric(self) -> bool:
        """True iff invariant under x -> 1/x."""
        return all(self.coeff(-d) == v for d, v in self.coeffs.items())

    # ---------------------------------------------------------- arithmetic

    def __add__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = LaurentPoly.const(other)
        c = dict(self.coeffs)
        for d, v in other.coeffs.items():
            c[d] = c.get(d, Fraction(0)) + v
        return LaurentPoly(c)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({d: -v for d, v in self.coeffs.items()})

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-other if isinstance(other, LaurentPoly) else -LaurentPoly.const(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return LaurentPoly.const(other) - self

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            other = _as_scalar(other)
            return LaurentPoly({d: v * other for d, v in self.coeffs.items()})
        c: dict[int, object] = {}
        for d1, v1 in self.coeffs.items():
            for d2, v2 in other.coeffs.items():
                d = d1 + d2
                c[d] = c.get(d, Fraction(0)) + v1 * v2
        return LaurentPoly(c)

    __rmul__ = __mul__

    def substitute(self, scale, invert: bool = False) -> "LaurentPoly":
        """x -> scale * x (or scale / x when invert)."""
        scale = _as_scalar(scale)
        sign = -1 if invert else 1
        return LaurentPoly({sign * d: v * scale**d for d, v in self.coeffs.items()})

    def divide_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        """Exact division; ConsistencyError on a nonzero remainder."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero Laurent polynomial")
        if self.is_zero():
            return LaurentPoly()
        rem = dict(self.coeffs)
        out: dict[int, object] = {}
        d_lead = other.max_deg
        v_lead = other.coeffs[d_lead]
        d_floor = self.min_deg - other.min_deg  # lowest degree an exact quotient can have
        while rem:
            d_top = max(rem)
            d_q = d_top - d_lead
            if d_q < d_floor:
                raise ConsistencyError("Laurent division left a remainder")
            c_q = rem[d_top] / v_lead
            out[d_q] = out.get(d_q, Fraction(0)) + c_q
            for d2, v2 in other.coeffs.items():
                d = d_q + d2
                nv = rem.get(d, Fraction(0)) - c_q * v2
                if nv == 0:
                    rem.pop(d, None)
                else:
                    rem[d] = nv
        quot = LaurentPoly(out)
        if quot * other != self:
            raise ConsistencyError("Laurent division left a remainder")
        return quot

    def __call__(self, x):
        """Numeric (or exact) evaluation at a scalar x."""
        out = 0
        for d, v in self.coeffs.items():
            if isinstance(v, Fraction) and not isinstance(x, Fraction):
                v = complex(v) if isinstance(x, complex) else float(v)
            out = out + v * x**d
        return out

    def map_coeffs(self, fn: Callable) -> "LaurentPoly":
        return LaurentPoly({d: fn(v) for d, v in self.coeffs.items()})

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs, reverse=True):
            v = self.coeffs[d]
            mono = "1" if d == 0 else ("x" if d == 1 else f"x^{d}")
            parts.append(f"({v})*{mono}" if d != 0 else f"({v})")
        return " + ".join(parts)
