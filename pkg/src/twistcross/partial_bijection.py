"""Partial bijections of {1..n} with exact composition arithmetic.

A partial bijection of degree n is stored as a tuple of n integers where
entry i (1-based position) is the image of i, with 0 meaning undefined.
Nonzero entries are pairwise distinct.  Composition follows the convention
(f g)(x) = f(g(x)): the right factor acts first.
"""

from __future__ import annotations

import re

from .errors import InputError


class PartialBijection:

    __slots__ = ("degree", "image")

    def __init__(self, image):
        image = tuple(int(a) for a in image)
        n = len(image)
        if n == 0:
            raise InputError("degree must be positive")
        seen = set()
        for i, a in enumerate(image, start=1):
            if not 0 <= a <= n:
                raise InputError(f"entry {a} at position {i} is outside 0..{n}")
            if a:
                if a in seen:
                    raise InputError(f"duplicate image value {a}; map is not injective")
                seen.add(a)
        self.degree = n
        self.image = image

    @classmethod
    def identity(cls, degree):
        return cls(tuple(range(1, degree + 1)))

    @classmethod
    def empty(cls, degree):
        return cls((0,) * degree)

    @classmethod
    def on_subset(cls, degree, subset):
        """Identity map restricted to a subset of {1..degree}."""
        subset = set(subset)
        return cls(tuple(i if i in subset else 0 for i in range(1, degree + 1)))

    def __call__(self, x):
        """Image of the point x, or None when undefined."""
        a = self.image[x - 1]
        return a if a else None

    def domain(self):
        return frozenset(i for i, a in enumerate(self.image, start=1) if a)

    def range(self):
        return frozenset(a for a in self.image if a)

    def compose(self, other):
        """(self other)(x) = self(other(x)); other acts first."""
        if self.degree != other.degree:
            raise InputError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )
        out = []
        for x in range(1, self.degree + 1):
            mid = other.image[x - 1]
            out.append(self.image[mid - 1] if mid else 0)
        return PartialBijection(out)

    __mul__ = compose

    def star(self):
        """The inverse partial bijection."""
        out = [0] * self.degree
        for i, a in enumerate(self.image, start=1):
            if a:
                out[a - 1] = i
        return PartialBijection(out)

    def natural_leq(self, other):
        """True iff self = other * star(self) * self, i.e. self restricts other."""
        if self.degree != other.degree:
            raise InputError(
                f"degree mismatch: {self.degree} vs {other.degree}"
            )
        return self == other * self.star() * self

    def is_idempotent(self):
        return self * self == self

    def __eq__(self, other):
        return (
            isinstance(other, PartialBijection)
            and self.degree == other.degree
            and self.image == other.image
        )

    def __hash__(self):
        return hash(self.image)

    def __repr__(self):
        return f"PartialBijection({self.image})"

    def __str__(self):
        return format_pb(self)


def compose(f, g):
    return f.compose(g)


def star(f):
    return f.star()


def natural_leq(f, g):
    return f.natural_leq(g)


_TUPLE_RE = re.compile(r"^\(\s*(-?\d+\s*(,\s*-?\d+\s*)*)\)$")


def parse_pb(text):
    """Parse tuple notation like "(1,4,5,0,0,0)" into a PartialBijection."""
    text = text.strip()
    if not _TUPLE_RE.match(text):
        raise InputError(f"not a tuple of integers: {text!r}")
    entries = [int(tok) for tok in text[1:-1].split(",")]
    return PartialBijection(entries)


def format_pb(f):
    return "(" + ",".join(str(a) for a in f.image) + ")"
