"""Cross-sections of quotient classes and the order-preserving property.

A cross-section assigns to every congruence class an element of that class.
It is order-preserving when idempotent classes get their idempotent and the
assignment respects the natural partial orders on both sides.
"""

from __future__ import annotations

from .congruence import congruence_from_normal_clifford, kernel_normal_system, quotient
from .errors import InputError, StructureError
from .report import Report
from .semigroup import is_ftilde, maximal_elements


def _as_congruence(S, N_or_cong):
    from .congruence import Congruence

    if isinstance(N_or_cong, Congruence):
        return N_or_cong
    return congruence_from_normal_clifford(S, N_or_cong)


def check_cross_section(S, cong, section):
    """section must pick a member of every class."""
    if sorted(section) != list(range(cong.num_classes())):
        raise InputError("section must assign every class exactly once")
    for k, rep in section.items():
        if cong.class_of[rep] != k:
            raise InputError(
                f"section value {S.label(rep)} is not in class {k}"
            )


def is_order_preserving(S, N_or_cong, section):
    """Both clauses of the order-preserving property, with witnesses.

    Also reports (without requiring) whether the section happens to commute
    with the involution.
    """
    cong = _as_congruence(S, N_or_cong)
    section = dict(section)
    check_cross_section(S, cong, section)
    Q, proj = quotient(S, cong)
    rep = Report("order-preserving cross-section check")

    witness = None
    for k, cls in enumerate(cong.classes):
        f = next((x for x in cls if S.is_idempotent(x)), None)
        if f is not None and section[k] != f:
            witness = f"class of idempotent {S.label(f)} maps to {S.label(section[k])}"
            break
    rep.add("idempotent classes fixed", witness is None, witness or "")

    witness = None
    for a in range(Q.size):
        for b in range(Q.size):
            if a != b and Q.leq(a, b) and not S.leq(section[a], section[b]):
                witness = (
                    f"classes {Q.label(a)} <= {Q.label(b)} but "
                    f"{S.label(section[a])} !<= {S.label(section[b])}"
                )
                break
        if witness:
            break
    rep.add("quotient order respected", witness is None, witness or "")

    star_ok = all(
        section[Q.inv(k)] == S.star[section[k]] for k in range(Q.size)
    )
    rep.note(
        "section commutes with star" if star_ok else "section does not commute with star"
    )
    return rep


def find_order_preserving(S, N_or_cong):
    """Backtracking search for an order-preserving cross-section.

    Returns (section, None) on success or (None, diagnosis) after certified
    exhaustion.  The diagnosis lists quotient-order constraints that no
    representative of some class can satisfy simultaneously, when such a
    class exists; otherwise it records the exhausted search.
    """
    cong = _as_congruence(S, N_or_cong)
    Q, proj = quotient(S, cong)
    m = Q.size

    forced = {}
    for k, cls in enumerate(cong.classes):
        f = next((x for x in cls if S.is_idempotent(x)), None)
        if f is not None:
            forced[k] = f
        elif len(cls) == 1:
            forced[k] = cls[0]

    # visit maximal classes first along the quotient order
    order_pairs = [(a, b) for a in range(m) for b in range(m) if a != b and Q.leq(a, b)]
    above = {k: [b for (a, b) in order_pairs if a == k] for k in range(m)}
    below = {k: [a for (a, b) in order_pairs if b == k] for k in range(m)}
    height = {}

    def h(k):
        if k not in height:
            height[k] = 1 + max((h(b) for b in above[k]), default=0)
        return height[k]

    classes_in_order = sorted(range(m), key=lambda k: (h(k), k))
    assignment = {}

    def consistent(k, candidate):
        for b in above[k]:
            if b in assignment and not S.leq(candidate, assignment[b]):
                return False
        for a in below[k]:
            if a in assignment and not S.leq(assignment[a], candidate):
                return False
        return True

    def search(pos):
        if pos == m:
            return True
        k = classes_in_order[pos]
        candidates = [forced[k]] if k in forced else list(cong.classes[k])
        for cand in candidates:
            if consistent(k, cand):
                assignment[k] = cand
                if search(pos + 1):
                    return True
                del assignment[k]
        return False

    if search(0):
        section = dict(sorted(assignment.items()))
        verdict = is_order_preserving(S, cong, section)
        if not verdict.passed:
            raise StructureError("search produced a non-order-preserving section")
        return section, None

    # certified exhaustion: look for one class none of whose members fits the
    # constraints imposed by forced classes alone
    diagnosis = Report("no order-preserving cross-section")
    diagnosis.add("search exhausted all assignments", True)
    for k in range(m):
        if k in forced:
            continue
        fixed_above = [(b, forced[b]) for b in above[k] if b in forced]
        fixed_below = [(a, forced[a]) for a in below[k] if a in forced]
        blocked = all(
            any(not S.leq(cand, rep) for _, rep in fixed_above)
            or any(not S.leq(rep, cand) for _, rep in fixed_below)
            for cand in cong.classes[k]
        )
        if blocked and (fixed_above or fixed_below):
            constraints = [f"{Q.label(k)} <= {Q.label(b)}" for b, _ in fixed_above]
            constraints += [f"{Q.label(a)} <= {Q.label(k)}" for a, _ in fixed_below]
            diagnosis.add(
                "unsatisfiable class",
                True,
                f"class {Q.label(k)} = {{{', '.join(S.label(x) for x in cong.classes[k])}}} "
                f"cannot satisfy: " + "; ".join(constraints),
            )
            break
    return None, diagnosis


def ftilde_cross_section(S, cong, choice_on_maximals):
    """Extend a choice on maximal classes when the quotient has unique majorants.

    Each non-maximal class t gets c(m_t) * f where m_t is the unique maximal
    class above t and f is the idempotent of the kernel class of t* t.
    """
    Q, proj = quotient(S, cong)
    ok, majorant, witness, note = is_ftilde(Q)
    if not ok:
        raise StructureError(
            f"quotient is not F-tilde: class {Q.label(witness[0])} has "
            f"{len(witness[1])} maximal majorants"
        )
    maxima = maximal_elements(Q)
    choice = dict(choice_on_maximals)
    if sorted(choice) != sorted(maxima):
        raise InputError("choice must cover exactly the maximal classes")
    for k, rep in choice.items():
        if cong.class_of[rep] != k:
            raise InputError(f"choice for class {k} is not a member")
    if Q.unit is not None and Q.unit in choice:
        unit_class = cong.classes[Q.unit]
        f = next((x for x in unit_class if S.is_idempotent(x)), None)
        if f is not None and choice[Q.unit] != f:
            raise InputError("the unit class must be assigned its idempotent")

    idem_of_class = {}
    for cls in kernel_normal_system(S, cong):
        f = next(x for x in cls if S.is_idempotent(x))
        idem_of_class[cong.class_of[f]] = f

    section = {}
    for t in range(Q.size):
        if Q.zero is not None and t == Q.zero:
            section[t] = next(
                x for x in cong.classes[t] if S.is_idempotent(x)
            )
            continue
        if t in choice:
            section[t] = choice[t]
            continue
        m_t = majorant[t]
        source_class = Q.mul(Q.inv(t), t)
        f = idem_of_class[source_class]
        section[t] = S.mul(choice[m_t], f)
        if cong.class_of[section[t]] != t:
            raise StructureError("extension left its class; choice is inconsistent")
    verdict = is_order_preserving(S, cong, section)
    if not verdict.passed:
        raise StructureError("extended section failed the order-preserving check")
    return section
