"""Finite inverse semigroups as multiplication and involution tables.

Elements are integers 0..size-1.  The closure builder indexes elements in
breadth-first discovery order over generator words, so indices and witness
words are reproducible across runs.
"""

from __future__ import annotations

import itertools
import random

from .errors import CapExceededError, InputError, NotClosedError
from .report import Report

ASSOC_EXHAUSTIVE_BOUND = 64
ASSOC_RANDOM_TRIPLES = 10000


class FiniteInverseSemigroup:
    """Cayley table plus involution table, with optional unit/zero/labels."""

    def __init__(self, product, star, unit=None, zero=None, labels=None, words=None):
        self.product = tuple(tuple(int(x) for x in row) for row in product)
        self.star = tuple(int(x) for x in star)
        n = len(self.product)
        if n == 0:
            raise InputError("semigroup must be nonempty")
        if any(len(row) != n for row in self.product) or len(self.star) != n:
            raise InputError("table dimensions disagree")
        for row in self.product:
            for x in row:
                if not 0 <= x < n:
                    raise InputError(f"table entry {x} out of range")
        for x in self.star:
            if not 0 <= x < n:
                raise InputError(f"star entry {x} out of range")
        self.size = n
        self.unit = unit if unit is None else int(unit)
        self.zero = zero if zero is None else int(zero)
        self.labels = tuple(labels) if labels is not None else None
        self.words = tuple(words) if words is not None else None
        self.concrete_elements = None  # set by generate()

    # -- basic table access -------------------------------------------------

    def mul(self, i, j):
        return self.product[i][j]

    def mul_all(self, *elements):
        it = iter(elements)
        acc = next(it)
        for x in it:
            acc = self.product[acc][x]
        return acc

    def inv(self, i):
        return self.star[i]

    def elements(self):
        return range(self.size)

    def label(self, i):
        if self.labels is not None:
            return self.labels[i]
        return str(i)

    def is_idempotent(self, i):
        return self.product[i][i] == i

    def idempotent_list(self):
        return tuple(i for i in self.elements() if self.is_idempotent(i))

    def leq(self, i, j):
        """Natural partial order: i <= j iff i = j * star(i) * i."""
        return i == self.mul_all(j, self.star[i], i)

    def source_projection(self, i):
        return self.mul(self.star[i], i)

    def range_projection(self, i):
        return self.mul(i, self.star[i])

    def is_group(self):
        if self.unit is None:
            return False
        e = self.unit
        return all(
            self.mul(g, self.star[g]) == e and self.mul(self.star[g], g) == e
            for g in self.elements()
        )

    def find_unit(self):
        for e in self.elements():
            if all(self.mul(e, x) == x == self.mul(x, e) for x in self.elements()):
                return e
        return None

    def find_zero(self):
        for z in self.elements():
            if all(self.mul(z, x) == z == self.mul(x, z) for x in self.elements()):
                return z
        return None

    def __eq__(self, other):
        return (
            isinstance(other, FiniteInverseSemigroup)
            and self.product == other.product
            and self.star == other.star
        )

    def __hash__(self):
        return hash((self.product, self.star))

    def __repr__(self):
        return f"FiniteInverseSemigroup(size={self.size})"


# -- closure ----------------------------------------------------------------


def generate(generators, multiply, star, cap=100000, label=str):
    """Close generators under product and involution; build the tables.

    Breadth-first over words in the generators and their stars, so element
    indices follow (word length, discovery order).  Raises CapExceededError
    (carrying the partial element list) if the closure exceeds cap.
    """
    if not generators:
        raise InputError("need at least one generator")
    if cap < 1:
        raise InputError("cap must be at least 1")

    alphabet = []
    letter_words = []
    for gi, g in enumerate(generators):
        if g not in alphabet:
            alphabet.append(g)
            letter_words.append(((gi, False),))
    for gi, g in enumerate(generators):
        sg = star(g)
        if sg not in alphabet:
            alphabet.append(sg)
            letter_words.append(((gi, True),))

    index = {}
    elements = []
    words = []
    for a, w in zip(alphabet, letter_words):
        if a not in index:
            index[a] = len(elements)
            elements.append(a)
            words.append(w)
    if len(elements) > cap:
        raise CapExceededError(f"closure exceeded cap {cap}", partial=elements)

    frontier = list(range(len(elements)))
    while frontier:
        next_frontier = []
        for xi in frontier:
            for a, w in zip(alphabet, letter_words):
                y = multiply(elements[xi], a)
                if y not in index:
                    index[y] = len(elements)
                    elements.append(y)
                    words.append(words[xi] + w)
                    next_frontier.append(index[y])
                    if len(elements) > cap:
                        raise CapExceededError(
                            f"closure exceeded cap {cap}", partial=elements
                        )
        frontier = next_frontier

    n = len(elements)
    product = [[index[multiply(elements[i], elements[j])] for j in range(n)] for i in range(n)]
    star_table = [index[star(elements[i])] for i in range(n)]
    S = FiniteInverseSemigroup(
        product,
        star_table,
        labels=[label(x) for x in elements],
        words=words,
    )
    S.unit = S.find_unit()
    S.zero = S.find_zero()
    S.concrete_elements = tuple(elements)
    return S


def generate_partial_bijections(gens, cap=100000):
    """Closure of partial bijections under composition and inversion."""
    degrees = {g.degree for g in gens}
    if len(degrees) != 1:
        raise InputError("generators must share one degree")
    return generate(
        list(gens),
        multiply=lambda f, g: f * g,
        star=lambda f: f.star(),
        cap=cap,
    )


# -- verification -----------------------------------------------------------


def verify_inverse_semigroup(S, assoc_bound=ASSOC_EXHAUSTIVE_BOUND, seed=0):
    """Check the inverse-semigroup axioms; violations become report entries."""
    rep = Report(f"inverse semigroup axioms (size {S.size})")
    n = S.size

    bad = None
    if n <= assoc_bound:
        for a, b, c in itertools.product(range(n), repeat=3):
            if S.mul(S.mul(a, b), c) != S.mul(a, S.mul(b, c)):
                bad = (a, b, c)
                break
        rep.add(
            "associativity (exhaustive)",
            bad is None,
            "" if bad is None else f"triple {tuple(S.label(x) for x in bad)}",
        )
    else:
        rng = random.Random(seed)
        for _ in range(ASSOC_RANDOM_TRIPLES):
            a, b, c = (rng.randrange(n) for _ in range(3))
            if S.mul(S.mul(a, b), c) != S.mul(a, S.mul(b, c)):
                bad = (a, b, c)
                break
        rep.add(
            f"associativity ({ASSOC_RANDOM_TRIPLES} random triples)",
            bad is None,
            "" if bad is None else f"triple {tuple(S.label(x) for x in bad)}",
        )

    bad = None
    for s in range(n):
        inverses = [
            t
            for t in range(n)
            if S.mul_all(s, t, s) == s and S.mul_all(t, s, t) == t
        ]
        if inverses != [S.star[s]]:
            bad = (s, inverses)
            break
    rep.add(
        "unique generalized inverse equals star",
        bad is None,
        ""
        if bad is None
        else f"element {S.label(bad[0])} has inverses {[S.label(t) for t in bad[1]]}",
    )

    bad = None
    for s in range(n):
        if S.star[S.star[s]] != s:
            bad = f"star(star({S.label(s)})) != {S.label(s)}"
            break
        for t in range(n):
            if S.star[S.mul(s, t)] != S.mul(S.star[t], S.star[s]):
                bad = f"star({S.label(s)}*{S.label(t)}) mismatch"
                break
        if bad:
            break
    rep.add("star is an involutive anti-automorphism", bad is None, bad or "")

    idems = S.idempotent_list()
    bad = None
    for f, g in itertools.combinations(idems, 2):
        if S.mul(f, g) != S.mul(g, f):
            bad = (f, g)
            break
    rep.add(
        "idempotents commute",
        bad is None,
        "" if bad is None else f"pair ({S.label(bad[0])}, {S.label(bad[1])})",
    )
    return rep


def idempotents(S):
    return S.idempotent_list()


def natural_order(S):
    """All pairs (i, j) with i <= j in the natural partial order."""
    return frozenset(
        (i, j) for i in S.elements() for j in S.elements() if S.leq(i, j)
    )


def maximal_elements(S, skip_zero=True):
    skip = {S.zero} if (skip_zero and S.zero is not None) else set()
    out = []
    for m in S.elements():
        if m in skip:
            continue
        if all(x == m or x in skip or not S.leq(m, x) for x in S.elements()):
            out.append(m)
    return tuple(out)


def is_ftilde(S):
    """Whether every (nonzero) element lies under a unique maximal element.

    Returns (flag, majorant_map, witness, note).  When no zero is designated
    all elements are treated as nonzero and the note records that choice.
    """
    if S.unit is None:
        raise InputError("unital semigroup required")
    note = ""
    if S.zero is None:
        note = "no zero designated; every element treated as nonzero"
    maxima = maximal_elements(S, skip_zero=True)
    majorant = {}
    for t in S.elements():
        if S.zero is not None and t == S.zero:
            continue
        above = [m for m in maxima if S.leq(t, m)]
        if len(above) != 1:
            return False, None, (t, tuple(above)), note
        majorant[t] = above[0]
    return True, majorant, None, note


def max_group_image(S):
    """Quotient by the minimum group congruence s ~ t iff e s = e t, e idempotent.

    Returns (group, projection) where projection[i] is the class index.
    """
    idems = S.idempotent_list()
    n = S.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for s in range(n):
        for t in range(s + 1, n):
            if any(S.mul(e, s) == S.mul(e, t) for e in idems):
                union(s, t)
    reps = sorted({find(x) for x in range(n)})
    class_index = {r: k for k, r in enumerate(reps)}
    projection = [class_index[find(x)] for x in range(n)]
    m = len(reps)
    product = [[0] * m for _ in range(m)]
    for a, ra in enumerate(reps):
        for b, rb in enumerate(reps):
            product[a][b] = projection[S.mul(ra, rb)]
    star = [projection[S.star[r]] for r in reps]
    G = FiniteInverseSemigroup(product, star, labels=[S.label(r) for r in reps])
    G.unit = G.find_unit()
    if G.unit is None or not G.is_group():
        raise AssertionError("minimum group congruence did not yield a group")
    return G, tuple(projection)


def adjoin_unit(S):
    """Add a fresh unit unless one already exists."""
    e = S.find_unit()
    if e is not None:
        out = FiniteInverseSemigroup(S.product, S.star, unit=e, zero=S.zero, labels=S.labels)
        return out
    n = S.size
    product = [list(row) + [i] for i, row in enumerate(S.product)]
    product.append(list(range(n + 1)))
    star = list(S.star) + [n]
    labels = list(S.labels) + ["1"] if S.labels is not None else None
    return FiniteInverseSemigroup(product, star, unit=n, zero=S.zero, labels=labels)


def restrict(S, subset):
    """Subsemigroup on a product/star closed subset, with the index map.

    Returns (sub, embed) where embed[k] is the ambient index of sub element k.
    """
    subset = sorted(set(subset))
    pos = {x: k for k, x in enumerate(subset)}
    for a in subset:
        if S.star[a] not in pos:
            raise NotClosedError(
                f"subset not star-closed at {S.label(a)}", witness=(a,)
            )
        for b in subset:
            if S.mul(a, b) not in pos:
                raise NotClosedError(
                    f"subset not closed under product at ({S.label(a)}, {S.label(b)})",
                    witness=(a, b),
                )
    product = [[pos[S.mul(a, b)] for b in subset] for a in subset]
    star = [pos[S.star[a]] for a in subset]
    labels = [S.label(a) for a in subset] if S.labels is not None else None
    sub = FiniteInverseSemigroup(product, star, labels=labels)
    sub.unit = sub.find_unit()
    sub.zero = sub.find_zero()
    return sub, tuple(subset)


# -- stock examples ---------------------------------------------------------


def cyclic_group(n):
    """Z_n with additive labels."""
    product = [[(i + j) % n for j in range(n)] for i in range(n)]
    star = [(-i) % n for i in range(n)]
    G = FiniteInverseSemigroup(product, star, unit=0, labels=[str(i) for i in range(n)])
    return G


def symmetric_inverse_monoid(n):
    """All partial bijections of {1..n}, enumerated in lexicographic tuple order."""
    from .partial_bijection import PartialBijection

    maps = []
    for image in itertools.product(range(n + 1), repeat=n):
        nonzero = [a for a in image if a]
        if len(nonzero) == len(set(nonzero)):
            maps.append(PartialBijection(image))
    index = {m: k for k, m in enumerate(maps)}
    product = [[index[a * b] for b in maps] for a in maps]
    star = [index[a.star()] for a in maps]
    S = FiniteInverseSemigroup(product, star, labels=[str(m) for m in maps])
    S.unit = S.find_unit()
    S.zero = S.find_zero()
    S.concrete_elements = tuple(maps)
    return S
