"""Scalar backends for coefficient arithmetic.

Two backends are supported: exact Gaussian rationals (a + b*i with Fraction
parts) for table-derived algebras, and complex floats with an explicit zero
tolerance for sampled unitaries.  All linear algebra in :mod:`linalg` is
generic over these backends.
"""

from __future__ import annotations

from fractions import Fraction


class GaussianRational:
    """Exact complex scalar with rational real and imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if isinstance(re, Fraction) else Fraction(re)
        self.im = im if isinstance(im, Fraction) else Fraction(im)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational(
            (self.re * other.re + self.im * other.im) / n,
            (self.im * other.re - self.re * other.im) / n,
        )

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


def _coerce(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    return NotImplemented


class ExactScalars:
    """Gaussian-rational arithmetic; zero tests are exact."""

    exact = True
    tol = 0.0

    def __init__(self):
        self.zero = GaussianRational(0)
        self.one = GaussianRational(1)

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return GaussianRational(x)
        if isinstance(x, complex):
            raise TypeError("cannot coerce a float complex into the exact backend")
        if isinstance(x, float):
            frac = Fraction(x).limit_denominator(10**12)
            return GaussianRational(frac)
        raise TypeError(f"cannot coerce {x!r} to GaussianRational")

    def conj(self, x):
        return x.conjugate()

    def is_zero(self, x):
        return not x

    def pivot_size(self, x):
        # exact pivoting only needs nonzero; a constant keeps selection stable
        return 1.0 if x else 0.0

    def to_complex(self, x):
        return complex(x)

    def __repr__(self):
        return "ExactScalars()"


class FloatScalars:
    """Complex-float arithmetic with a zero tolerance."""

    exact = False

    def __init__(self, tol=1e-9):
        if tol <= 0:
            raise ValueError("tolerance must be positive")
        self.tol = tol
        self.zero = 0j
        self.one = 1 + 0j

    def coerce(self, x):
        if isinstance(x, GaussianRational):
            return complex(x)
        return complex(x)

    def conj(self, x):
        return x.conjugate()

    def is_zero(self, x):
        return abs(x) <= self.tol

    def pivot_size(self, x):
        return abs(x)

    def to_complex(self, x):
        return complex(x)

    def __repr__(self):
        return f"FloatScalars(tol={self.tol})"


EXACT = ExactScalars()


def float_scalars(tol=1e-9):
    return FloatScalars(tol)
