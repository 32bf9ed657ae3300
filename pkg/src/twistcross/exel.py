"""The inverse semigroup of expansion elements attached to a finite group.

Elements are pairs (P, s): a subset P of the group containing the identity
and s, plus the tail s.  Multiplication is (P, s)(Q, t) = (P + s Q, s t) and
the involution is (P, s)* = (s^-1 P, s^-1).  Subsets are stored as bitmasks
over the group's element order.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CapExceededError, InputError
from .semigroup import FiniteInverseSemigroup

SG_TABLE_GUARD = 4096  # refuse tables beyond this many elements


@dataclass(frozen=True)
class ExelElement:
    group: FiniteInverseSemigroup
    members: int  # bitmask of group indices, always contains unit and tail
    tail: int

    def member_list(self):
        return [g for g in range(self.group.size) if self.members >> g & 1]


def _require_same_group(x, y):
    if x.group is not y.group and x.group != y.group:
        raise InputError("elements live over different groups")


def multiply(x, y):
    _require_same_group(x, y)
    G = x.group
    shifted = 0
    for h in y.member_list():
        shifted |= 1 << G.mul(x.tail, h)
    return ExelElement(G, x.members | shifted, G.mul(x.tail, y.tail))


def star(x):
    G = x.group
    inv = G.inv(x.tail)
    moved = 0
    for h in x.member_list():
        moved |= 1 << G.mul(inv, h)
    return ExelElement(G, moved, inv)


def embed(G, g):
    """Canonical image of a group element."""
    if G.unit is None or not G.is_group():
        raise InputError("carrier must be a group with designated unit")
    return ExelElement(G, (1 << G.unit) | (1 << g), g)


def unit_element(G):
    return embed(G, G.unit)


def to_canonical_string(x):
    """Bracket form listing the members other than the unit and tail, then the tail."""
    G = x.group

    def lbl(g):
        return "e" if g == G.unit else G.label(g)

    parts = []
    for g in sorted(set(x.member_list()) - {G.unit, x.tail}):
        parts.append(f"[{lbl(g)}][{lbl(G.inv(g))}]")
    parts.append(f"[{lbl(x.tail)}]")
    return "".join(parts)


class ExelSemigroup:
    """Full enumeration of the pairs (P, s) with tables and index lookup."""

    def __init__(self, G):
        if G.unit is None or not G.is_group():
            raise InputError("carrier must be a group with designated unit")
        n = G.size
        count = sum(1 << (n - len({G.unit, s})) for s in range(n))
        if count > SG_TABLE_GUARD:
            raise CapExceededError(
                f"expansion semigroup would have {count} elements (guard {SG_TABLE_GUARD})"
            )
        self.group = G
        elements = []
        for mask in range(1 << n):
            if not mask >> G.unit & 1:
                continue
            for s in range(n):
                if mask >> s & 1:
                    elements.append(ExelElement(G, mask, s))
        elements.sort(key=lambda x: (bin(x.members).count("1"), x.members, x.tail))
        self.elements = tuple(elements)
        self.index = {(x.members, x.tail): i for i, x in enumerate(elements)}
        m = len(elements)
        product = [
            [self._idx(multiply(a, b)) for b in elements] for a in elements
        ]
        star_table = [self._idx(star(a)) for a in elements]
        S = FiniteInverseSemigroup(
            product,
            star_table,
            labels=[to_canonical_string(x) for x in elements],
        )
        S.unit = S.find_unit()
        S.zero = S.find_zero()
        S.concrete_elements = self.elements
        self.semigroup = S

    def _idx(self, x):
        return self.index[(x.members, x.tail)]

    def index_of(self, x):
        key = (x.members, x.tail)
        if key not in self.index:
            raise InputError("element does not belong to this enumeration")
        return self.index[key]

    def embed_index(self, g):
        return self.index_of(embed(self.group, g))

    def size(self):
        return len(self.elements)


def enumerate_expansion(G):
    """All of the associated inverse semigroup, as tables plus element data."""
    return ExelSemigroup(G)
