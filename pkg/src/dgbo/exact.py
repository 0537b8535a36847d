"""Gaussian-rational arithmetic for the exact multiplier paths.

Python's ``complex`` coerces ``Fraction`` operands to float, which silently
destroys exactness, so the integer-dispersion lanes (cubic and quintic
symbols) carry values as a pair of ``Fraction`` components instead.
"""

from __future__ import annotations

from fractions import Fraction

_RAT = (int, Fraction)


class ComplexFraction:
    """Complex number with exact rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        if isinstance(other, ComplexFraction):
            return ComplexFraction(self.re + other.re, self.im + other.im)
        if isinstance(other, _RAT):
            return ComplexFraction(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, ComplexFraction):
            return ComplexFraction(self.re - other.re, self.im - other.im)
        if isinstance(other, _RAT):
            return ComplexFraction(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, _RAT):
            return ComplexFraction(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, ComplexFraction):
            return ComplexFraction(
                self.re * other.re - self.im * other.im,
                self.re * other.im + self.im * other.re,
            )
        if isinstance(other, _RAT):
            return ComplexFraction(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, _RAT):
            return ComplexFraction(self.re / other, self.im / other)
        if isinstance(other, ComplexFraction):
            d = other.re * other.re + other.im * other.im
            return ComplexFraction(
                (self.re * other.re + self.im * other.im) / d,
                (self.im * other.re - self.re * other.im) / d,
            )
        return NotImplemented

    def __neg__(self):
        return ComplexFraction(-self.re, -self.im)

    def __eq__(self, other):
        if isinstance(other, ComplexFraction):
            return self.re == other.re and self.im == other.im
        if isinstance(other, _RAT):
            return self.im == 0 and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return ComplexFraction(self.re, -self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"ComplexFraction({self.re!r}, {self.im!r})"


I = ComplexFraction(0, 1)
