"""Idempotent-separating congruences, kernel normal systems, quotients.

A congruence is stored as a partition of element indices.  Classes are
canonicalized: each class sorted ascending, classes ordered by their least
element, and the least element serves as class representative.
"""

from __future__ import annotations

import itertools

from .errors import CapExceededError, InputError, StructureError
from .report import Report
from .semigroup import FiniteInverseSemigroup


class Congruence:
    """Partition of a semigroup's index set, validated elsewhere."""

    def __init__(self, size, classes):
        seen = set()
        canon = []
        for cls in classes:
            cls = tuple(sorted(set(int(x) for x in cls)))
            if not cls:
                raise InputError("empty congruence class")
            for x in cls:
                if not 0 <= x < size:
                    raise InputError(f"class member {x} out of range")
                if x in seen:
                    raise InputError(f"element {x} appears in two classes")
                seen.add(x)
            canon.append(cls)
        if len(seen) != size:
            missing = sorted(set(range(size)) - seen)
            raise InputError(f"partition misses elements {missing}")
        canon.sort(key=lambda c: c[0])
        self.size = size
        self.classes = tuple(canon)
        self.class_of = [0] * size
        for k, cls in enumerate(canon):
            for x in cls:
                self.class_of[x] = k
        self.class_of = tuple(self.class_of)

    @classmethod
    def identity(cls, size):
        return cls(size, [(i,) for i in range(size)])

    @classmethod
    def from_pairs(cls, size, pairs):
        """Smallest partition relating every given pair (not closed under products)."""
        parent = list(range(size))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a, b in pairs:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups = {}
        for x in range(size):
            groups.setdefault(find(x), []).append(x)
        return cls(size, groups.values())

    def num_classes(self):
        return len(self.classes)

    def related(self, a, b):
        return self.class_of[a] == self.class_of[b]

    def __eq__(self, other):
        return isinstance(other, Congruence) and self.classes == other.classes

    def __hash__(self):
        return hash(self.classes)

    def __repr__(self):
        return f"Congruence({self.num_classes()} classes on {self.size})"


def is_congruence(S, partition):
    """Compatibility of a partition with multiplication on both sides."""
    rep = Report("congruence check")
    try:
        cong = partition if isinstance(partition, Congruence) else Congruence(S.size, partition)
    except InputError as exc:
        rep.add("partition well-formed", False, str(exc))
        return rep
    rep.add("partition well-formed", True)
    witness = None
    for cls in cong.classes:
        if witness:
            break
        for a, b in itertools.combinations(cls, 2):
            if witness:
                break
            for r in S.elements():
                if not cong.related(S.mul(r, a), S.mul(r, b)):
                    witness = f"{S.label(a)}~{S.label(b)} but r={S.label(r)} breaks left compatibility"
                    break
                if not cong.related(S.mul(a, r), S.mul(b, r)):
                    witness = f"{S.label(a)}~{S.label(b)} but r={S.label(r)} breaks right compatibility"
                    break
    rep.add("compatible with multiplication", witness is None, witness or "")
    return rep


def is_idempotent_separating(S, cong):
    idems = set(S.idempotent_list())
    return all(len(idems.intersection(cls)) <= 1 for cls in cong.classes)


def kernel_normal_system(S, cong):
    """Classes containing idempotents, ordered by their idempotent.

    For an idempotent-separating congruence each such class is a group whose
    identity is its idempotent; that structure is verified here.
    """
    idems = S.idempotent_list()
    out = []
    seen = set()
    for f in idems:
        k = cong.class_of[f]
        if k in seen:
            continue
        seen.add(k)
        out.append(cong.classes[k])
    if is_idempotent_separating(S, cong):
        for cls in out:
            f = next(x for x in cls if S.is_idempotent(x))
            for a in cls:
                if S.mul(a, S.star[a]) != f or S.mul(S.star[a], a) != f:
                    raise StructureError(
                        f"kernel class of {S.label(f)} is not a group: "
                        f"{S.label(a)} has a different source or range projection"
                    )
                if cong.class_of[S.mul(a, f)] != cong.class_of[a]:
                    raise StructureError("kernel class not closed under its identity")
    return tuple(out)


def is_normal_clifford(S, subset):
    """Clause-by-clause check that a subset is a normal Clifford subsemigroup."""
    rep = Report("normal Clifford subsemigroup check")
    subset = sorted(set(subset))
    sset = set(subset)
    idems = set(S.idempotent_list())
    rep.add(
        "contains all idempotents",
        idems <= sset,
        "" if idems <= sset else f"missing {sorted(S.label(x) for x in idems - sset)}",
    )
    witness = None
    for a in subset:
        if S.star[a] not in sset:
            witness = f"star({S.label(a)}) outside"
            break
        for b in subset:
            if S.mul(a, b) not in sset:
                witness = f"{S.label(a)}*{S.label(b)} outside"
                break
        if witness:
            break
    rep.add("closed under product and star", witness is None, witness or "")
    witness = None
    for s in S.elements():
        for n in subset:
            c = S.mul_all(s, n, S.star[s])
            if c not in sset:
                witness = f"{S.label(s)} {S.label(n)} {S.label(s)}* outside"
                break
        if witness:
            break
    rep.add("closed under conjugation", witness is None, witness or "")
    witness = None
    for n in subset:
        if S.mul(S.star[n], n) != S.mul(n, S.star[n]):
            witness = f"{S.label(n)} has distinct source and range projections"
            break
    rep.add("Clifford (n*n = nn*)", witness is None, witness or "")
    return rep


def congruence_from_normal_clifford(S, subset):
    """The idempotent-separating congruence with kernel classes inside subset.

    Relation: s ~ t iff the projections s s* and t t* agree and s t* lies in
    the kernel class of that idempotent.
    """
    rep = is_normal_clifford(S, subset)
    if not rep.passed:
        raise StructureError(
            "not a normal Clifford subsemigroup: "
            + "; ".join(c.name for c in rep.failures())
        )
    sset = set(subset)
    pairs = []
    for s in S.elements():
        fs = S.range_projection(s)
        for t in range(s + 1, S.size):
            if S.range_projection(t) != fs:
                continue
            st = S.mul(s, S.star[t])
            if st in sset and S.range_projection(st) == fs:
                pairs.append((s, t))
    cong = Congruence.from_pairs(S.size, pairs)
    check = is_congruence(S, cong)
    if not check.passed:
        raise StructureError("induced relation failed the congruence axioms")
    if not is_idempotent_separating(S, cong):
        raise StructureError("induced congruence does not separate idempotents")
    return cong


def normal_clifford_from_congruence(S, cong):
    """Union of the kernel classes: the subsemigroup determining cong."""
    return tuple(sorted(x for cls in kernel_normal_system(S, cong) for x in cls))


def enumerate_normal_clifford(S, max_size=30):
    """Every normal Clifford subsemigroup, smallest first.

    Grows closures of E plus one Clifford candidate at a time; every normal
    Clifford subsemigroup is reached this way because closures stay inside
    any subsemigroup containing the seed.
    """
    if S.size > max_size:
        raise CapExceededError(
            f"size {S.size} exceeds enumeration guard {max_size}"
        )
    idems = set(S.idempotent_list())
    candidates = [
        n
        for n in S.elements()
        if n not in idems and S.mul(S.star[n], n) == S.mul(n, S.star[n])
    ]

    def closure(seed):
        cur = set(seed)
        while True:
            new = set()
            for a in cur:
                if S.star[a] not in cur:
                    new.add(S.star[a])
                for b in cur:
                    p = S.mul(a, b)
                    if p not in cur:
                        new.add(p)
            for s in S.elements():
                for n in cur:
                    c = S.mul_all(s, n, S.star[s])
                    if c not in cur:
                        new.add(c)
            if not new:
                return frozenset(cur)
            cur |= new

    base = closure(idems)
    found = {base}
    queue = [base]
    while queue:
        current = queue.pop()
        for c in candidates:
            if c in current:
                continue
            grown = closure(current | {c})
            if grown in found:
                continue
            if all(S.mul(S.star[n], n) == S.mul(n, S.star[n]) for n in grown):
                found.add(grown)
                queue.append(grown)
    out = sorted((tuple(sorted(f)) for f in found), key=lambda t: (len(t), t))
    return [n for n in out if is_normal_clifford(S, n).passed]


def quotient(S, cong):
    """Quotient semigroup and the projection map onto class indices."""
    check = is_congruence(S, cong)
    if not check.passed:
        raise InputError("not a congruence: " + "; ".join(c.name for c in check.failures()))
    reps = [cls[0] for cls in cong.classes]
    m = len(reps)
    product = [[cong.class_of[S.mul(a, b)] for b in reps] for a in reps]
    # well-definedness across representatives (cheap, and catches misuse)
    for k, cls in enumerate(cong.classes):
        for a in cls:
            for j, other in enumerate(cong.classes):
                if cong.class_of[S.mul(a, other[0])] != product[k][j]:
                    raise StructureError("quotient table depends on representatives")
    star = [cong.class_of[S.star[r]] for r in reps]
    labels = ["[" + S.label(r) + "]" for r in reps]
    Q = FiniteInverseSemigroup(product, star, labels=labels)
    Q.unit = Q.find_unit()
    Q.zero = Q.find_zero()
    return Q, tuple(cong.class_of)
