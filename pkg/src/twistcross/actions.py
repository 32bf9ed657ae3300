"""Twisted action datasets, their verifiers, and the conversions between them.

Three container classes carry the data (cocycle-twisted semigroup actions,
twist-map actions over a normal Clifford subsemigroup, and twisted partial
group actions).  Verifiers run clause by clause over spanning sets and report
witnesses instead of raising.  All verifiers work through a uniform view, so
the iterated actions produced by the decomposition code (whose ideals are
general subspaces rather than basis spans) are checked by the same code.
"""

from __future__ import annotations

import itertools

from .congruence import congruence_from_normal_clifford, is_normal_clifford, quotient
from .cross_section import is_order_preserving
from .errors import InputError, StructureError
from .exel import ExelSemigroup
from .fdalgebra import (
    BasisIdeal,
    PartialStarAutomorphism,
    compose_autos,
    identity_automorphism,
    is_unitary_multiplier,
    semigroup_algebra,
    span_identity,
)
from .linalg import Subspace, vec_is_zero, vec_sub
from .report import Report


class ActionView:
    """Uniform access to an action for the verifiers and convolution builder.

    ideal_vectors(s) returns the chosen independent spanning vectors of the
    ideal attached to s; apply/apply_inv realize the action map on that span;
    cocycle(s, t) returns the twisting vector or None for untwisted actions.
    """

    def __init__(self, algebra, semigroup, ideal_vectors, apply, apply_inv, cocycle=None):
        self.algebra = algebra
        self.semigroup = semigroup
        self._ideal_vectors = ideal_vectors
        self._apply = apply
        self._apply_inv = apply_inv
        self._cocycle = cocycle
        self._spaces = {}
        self._identities = {}
        self._products = {}
        self._meets = {}

    def ideal_vectors(self, s):
        return self._ideal_vectors(s)

    def subspace(self, s):
        if s not in self._spaces:
            self._spaces[s] = Subspace(
                self.ideal_vectors(s), self.algebra.scalars, ambient_dim=self.algebra.dim
            )
        return self._spaces[s]

    def apply(self, s, vec):
        return self._apply(s, vec)

    def apply_inv(self, s, vec):
        return self._apply_inv(s, vec)

    def cocycle(self, s, t):
        return None if self._cocycle is None else self._cocycle(s, t)

    @property
    def twisted(self):
        return self._cocycle is not None

    def identity_vec(self, s):
        """Identity of the span attached to s (multipliers are internal)."""
        if s not in self._identities:
            vec = span_identity(self.algebra, self.ideal_vectors(s))
            if vec is None:
                raise StructureError(
                    f"ideal at {self.semigroup.label(s)} has no identity"
                )
            self._identities[s] = vec
        return self._identities[s]

    def product_span(self, a, b):
        """Span of pairwise products of the two ideals' spanning vectors."""
        if (a, b) not in self._products:
            A = self.algebra
            vecs = [
                A.mul_vec(u, v)
                for u in self.ideal_vectors(a)
                for v in self.ideal_vectors(b)
            ]
            self._products[(a, b)] = Subspace(vecs, A.scalars, ambient_dim=A.dim)
        return self._products[(a, b)]

    def meet_with_product(self, r, s, t):
        """Cached intersection of the ideal at r with the product span at (s, t)."""
        key = (r, s, t)
        if key not in self._meets:
            self._meets[key] = _subspace_intersection(
                self.subspace(r), self.product_span(s, t), self.algebra
            )
        return self._meets[key]


def _same_vec(A, u, v):
    return vec_is_zero(vec_sub(u, v), A.scalars)


# -- action containers -------------------------------------------------------


class BusbySmithAction:
    """Cocycle-twisted action: ideals E_s, maps beta_s, unitary cocycle w."""

    def __init__(self, algebra, semigroup, ideals, autos, cocycle):
        if semigroup.unit is None:
            raise InputError("the acting semigroup must be unital")
        self.algebra = algebra
        self.semigroup = semigroup
        self.ideals = tuple(ideals)
        self.autos = tuple(autos)
        self.cocycle = tuple(tuple(row) for row in cocycle)
        n = semigroup.size
        if len(self.ideals) != n or len(self.autos) != n:
            raise InputError("need one ideal and one map per semigroup element")
        if len(self.cocycle) != n or any(len(row) != n for row in self.cocycle):
            raise InputError("cocycle must be defined on all pairs")
        for s in range(n):
            auto = self.autos[s]
            if auto.codomain.indices != self.ideals[s].indices:
                raise InputError(f"map at {semigroup.label(s)} has the wrong range ideal")
            if auto.domain.indices != self.ideals[semigroup.inv(s)].indices:
                raise InputError(f"map at {semigroup.label(s)} has the wrong domain ideal")
        self._inverses = {}

    def beta_inv(self, s):
        if s not in self._inverses:
            self._inverses[s] = self.autos[s].inverse()
        return self._inverses[s]

    def view(self):
        return ActionView(
            self.algebra,
            self.semigroup,
            lambda s: [self.algebra.basis_vec(i) for i in self.ideals[s].indices],
            lambda s, v: self.autos[s].apply_vec(v),
            lambda s, v: self.beta_inv(s).apply_vec(v),
            lambda s, t: self.cocycle[s][t].coords,
        )

    def to_float(self, tol=1e-9):
        A = self.algebra.to_float(tol)
        ideals = [BasisIdeal(A, E.indices, check=False) for E in self.ideals]
        autos = []
        for s in range(self.semigroup.size):
            images = [
                tuple(complex(self.algebra.scalars.to_complex(c)) for c in img)
                for img in self.autos[s].images
            ]
            autos.append(
                PartialStarAutomorphism(
                    ideals[self.semigroup.inv(s)], ideals[s], images, check=False
                )
            )
        cocycle = [
            [A.element([self.algebra.scalars.to_complex(c) for c in w.coords]) for w in row]
            for row in self.cocycle
        ]
        return BusbySmithAction(A, self.semigroup, ideals, autos, cocycle)

    def equals(self, other, report=False):
        """Field-by-field comparison (same semigroup indexing assumed)."""
        rep = Report("action field-by-field comparison")
        rep.add("same underlying algebra dimension", self.algebra.dim == other.algebra.dim)
        rep.add("same semigroup", self.semigroup == other.semigroup)
        if rep.passed:
            rep.add(
                "same ideals",
                all(a.indices == b.indices for a, b in zip(self.ideals, other.ideals)),
            )
            rep.add(
                "same action maps",
                all(a.equals(b) for a, b in zip(self.autos, other.autos)),
            )
            same_w = all(
                _same_vec(self.algebra, self.cocycle[s][t].coords, other.cocycle[s][t].coords)
                for s in range(self.semigroup.size)
                for t in range(self.semigroup.size)
            )
            rep.add("same cocycle", same_w)
        return rep if report else rep.passed


class GreenTwistedAction:
    """Honest action gamma plus a twisting map tau on a normal Clifford subsemigroup."""

    def __init__(self, algebra, semigroup, normal, ideals, autos, twist):
        if semigroup.unit is None:
            raise InputError("the acting semigroup must be unital")
        self.algebra = algebra
        self.semigroup = semigroup
        self.normal = tuple(sorted(normal))
        self.ideals = tuple(ideals)
        self.autos = tuple(autos)
        self.twist = dict(twist)
        if sorted(self.twist) != list(self.normal):
            raise InputError("twist must be defined exactly on the normal subsemigroup")
        self._inverses = {}

    def gamma_inv(self, s):
        if s not in self._inverses:
            self._inverses[s] = self.autos[s].inverse()
        return self._inverses[s]

    def view(self):
        return ActionView(
            self.algebra,
            self.semigroup,
            lambda s: [self.algebra.basis_vec(i) for i in self.ideals[s].indices],
            lambda s, v: self.autos[s].apply_vec(v),
            lambda s, v: self.gamma_inv(s).apply_vec(v),
            None,
        )

    def restricted(self, subset):
        """Restriction of the action to a closed subsemigroup containing normal."""
        from .semigroup import restrict

        sub, embed = restrict(self.semigroup, subset)
        back = {x: k for k, x in enumerate(embed)}
        if not set(self.normal) <= set(embed):
            raise InputError("restriction must contain the twist's subsemigroup")
        return (
            GreenTwistedAction(
                self.algebra,
                sub,
                [back[n] for n in self.normal],
                [self.ideals[x] for x in embed],
                [self.autos[x] for x in embed],
                {back[n]: self.twist[n] for n in self.normal},
            ),
            embed,
        )


class TwistedPartialAction:
    """Twisted partial action of a finite group: ideals D_g, maps alpha_g, cocycle u."""

    def __init__(self, algebra, group, ideals, autos, cocycle):
        if not group.is_group():
            raise InputError("carrier must be a group")
        self.algebra = algebra
        self.group = group
        self.ideals = tuple(ideals)
        self.autos = tuple(autos)
        self.cocycle = tuple(tuple(row) for row in cocycle)
        self._inverses = {}

    def alpha_inv(self, g):
        if g not in self._inverses:
            self._inverses[g] = self.autos[g].inverse()
        return self._inverses[g]

    def equals(self, other, report=False):
        rep = Report("twisted partial action comparison")
        G = self.group
        rep.add("same group", G == other.group)
        rep.add(
            "same ideals",
            all(a.indices == b.indices for a, b in zip(self.ideals, other.ideals)),
        )
        rep.add("same maps", all(a.equals(b) for a, b in zip(self.autos, other.autos)))
        rep.add(
            "same cocycle",
            all(
                _same_vec(self.algebra, self.cocycle[r][s].coords, other.cocycle[r][s].coords)
                for r in range(G.size)
                for s in range(G.size)
            ),
        )
        return rep if report else rep.passed


# -- verifiers ----------------------------------------------------------------


def _check_map_structure(rep, view, s, name):
    """The map at s must be a star-isomorphism from span(E_{s*}) onto span(E_s)."""
    A = view.algebra
    S = view.semigroup
    dom = view.subspace(S.inv(s))
    cod = view.subspace(s)
    ok = dom.dim == cod.dim
    images = [view.apply(s, v) for v in dom.basis]
    img_space = Subspace(images, A.scalars, ambient_dim=A.dim) if images else cod
    ok = ok and img_space.dim == dom.dim and cod.contains_all(images)
    detail = ""
    if not ok:
        detail = f"{name} at {S.label(s)} is not a bijection onto its range ideal"
    mult = True
    for u in dom.basis:
        for v in dom.basis:
            prod = A.mul_vec(u, v)
            if not _same_vec(A, view.apply(s, prod), A.mul_vec(view.apply(s, u), view.apply(s, v))):
                mult = False
                detail = f"{name} at {S.label(s)} is not multiplicative"
                break
        if not mult:
            break
    star_ok = all(
        _same_vec(A, view.apply(s, A.star_vec(v)), A.star_vec(view.apply(s, v)))
        for v in dom.basis
    )
    if not star_ok:
        detail = f"{name} at {S.label(s)} does not preserve star"
    round_trip = all(
        _same_vec(A, view.apply_inv(s, view.apply(s, v)), v) for v in dom.basis
    )
    if not round_trip:
        detail = f"{name} at {S.label(s)} disagrees with its inverse"
    return rep.add(
        f"{name} at {S.label(s)} is a partial star-automorphism",
        ok and mult and star_ok and round_trip,
        detail,
    )


def _composite_domain(view, s, t):
    """Subspace of x in E_{t*} with apply(t, x) inside E_{s*}."""
    A = view.algebra
    S = view.semigroup
    inter = _subspace_intersection(view.subspace(t), view.subspace(S.inv(s)), A)
    pulled = [view.apply_inv(t, v) for v in inter.basis]
    return Subspace(pulled, A.scalars, ambient_dim=A.dim)


def _subspace_intersection(U, V, algebra):
    sc = algebra.scalars
    if U.dim == 0 or V.dim == 0:
        return Subspace([], sc, ambient_dim=algebra.dim)
    rows = []
    k, m = len(U.basis), len(V.basis)
    for coord in range(algebra.dim):
        rows.append(
            tuple(U.basis[i][coord] for i in range(k))
            + tuple(-V.basis[j][coord] for j in range(m))
        )
    from .linalg import nullspace

    combos = nullspace(rows, sc)
    vecs = []
    for combo in combos:
        out = [sc.zero] * algebra.dim
        for i in range(k):
            c = combo[i]
            if not sc.is_zero(c):
                for coord in range(algebra.dim):
                    out[coord] = out[coord] + c * U.basis[i][coord]
        vecs.append(tuple(out))
    return Subspace(vecs, sc, ambient_dim=algebra.dim)


def verify_busby_smith(action, derived=True):
    """All defining clauses, then the derived identities as independent checks."""
    view = action.view() if isinstance(action, BusbySmithAction) else action
    A, S = view.algebra, view.semigroup
    sc = A.scalars
    rep = Report("cocycle-twisted action axioms")
    e = S.unit
    if e is None:
        rep.add("acting semigroup is unital", False)
        return rep

    for s in S.elements():
        _check_map_structure(rep, view, s, "beta")

    rep.add("ideal at the unit is the whole algebra", view.subspace(e).dim == A.dim)

    bad = None
    for s in S.elements():
        for t in S.elements():
            w = view.cocycle(s, t)
            st = S.mul(s, t)
            home = view.subspace(st)
            if not home.contains(w):
                bad = f"w[{S.label(s)},{S.label(t)}] outside its ideal"
                break
            one = view.identity_vec(st)
            ws = A.star_vec(w)
            if not (
                _same_vec(A, A.mul_vec(w, ws), one)
                and _same_vec(A, A.mul_vec(ws, w), one)
            ):
                bad = f"w[{S.label(s)},{S.label(t)}] is not unitary on its ideal"
                break
        if bad:
            break
    rep.add("cocycle values are unitary multipliers", bad is None, bad or "")

    bad = None
    for s in S.elements():
        for t in S.elements():
            st = S.mul(s, t)
            dom = _composite_domain(view, s, t)
            expected = view.subspace(S.inv(st))
            if not dom.equals(expected):
                bad = (
                    f"dom(beta_{S.label(s)} beta_{S.label(t)}) has dim {dom.dim}, "
                    f"expected ideal of {S.label(S.inv(st))} with dim {expected.dim}"
                )
                break
            w = view.cocycle(s, t)
            ws = A.star_vec(w)
            for x in expected.basis:
                lhs = view.apply(s, view.apply(t, x))
                rhs = A.mul_vec(A.mul_vec(w, view.apply(st, x)), ws)
                if not _same_vec(A, lhs, rhs):
                    bad = f"composite law fails at ({S.label(s)}, {S.label(t)})"
                    break
            if bad:
                break
        if bad:
            break
    rep.add("composites equal conjugated products", bad is None, bad or "")

    bad = None
    for s in S.elements():
        for t in S.elements():
            if not (S.is_idempotent(s) or S.is_idempotent(t)):
                continue
            st = S.mul(s, t)
            if not _same_vec(A, view.cocycle(s, t), view.identity_vec(st)):
                bad = f"w[{S.label(s)},{S.label(t)}] is not the ideal identity"
                break
        if bad:
            break
    rep.add("cocycle trivial on idempotent pairs", bad is None, bad or "")

    bad = None
    for r, s, t in itertools.product(S.elements(), repeat=3):
        w_st = view.cocycle(s, t)
        w_r_st = view.cocycle(r, S.mul(s, t))
        w_rs = view.cocycle(r, s)
        w_rs_t = view.cocycle(S.mul(r, s), t)
        span = view.meet_with_product(S.inv(r), s, t)
        for a in span.basis:
            lhs = A.mul_vec(view.apply(r, A.mul_vec(a, w_st)), w_r_st)
            rhs = A.mul_vec(A.mul_vec(view.apply(r, a), w_rs), w_rs_t)
            if not _same_vec(A, lhs, rhs):
                bad = f"cocycle identity fails at ({S.label(r)}, {S.label(s)}, {S.label(t)})"
                break
        if bad:
            break
    rep.add("cocycle identity", bad is None, bad or "")

    if not derived:
        return rep

    # derived identities, re-checked independently of the axioms above
    bad = None
    for s in S.elements():
        if not view.subspace(s).equals(view.subspace(S.range_projection(s))):
            bad = f"ideal at {S.label(s)} differs from its range projection's"
            break
    rep.add("derived: ideals determined by range projections", bad is None, bad or "")

    bad = None
    for s in S.elements():
        f = S.range_projection(s)
        if not all(
            _same_vec(A, view.apply(f, v), v) for v in view.subspace(f).basis
        ):
            bad = f"map at projection {S.label(f)} is not the identity"
            break
    rep.add("derived: projections act as identity", bad is None, bad or "")

    rep.add(
        "derived: unit acts as identity",
        all(_same_vec(A, view.apply(e, v), v) for v in view.subspace(e).basis),
    )

    bad = None
    for s in S.elements():
        sstar = S.inv(s)
        w = view.cocycle(sstar, s)
        ws = A.star_vec(w)
        for v in view.subspace(s).basis:
            lhs = view.apply(sstar, v)
            rhs = A.mul_vec(A.mul_vec(w, view.apply_inv(s, v)), ws)
            if not _same_vec(A, lhs, rhs):
                bad = f"inverse map law fails at {S.label(s)}"
                break
        if bad:
            break
    rep.add("derived: star map is conjugated inverse", bad is None, bad or "")

    bad = None
    for r in S.elements():
        for s in S.elements():
            span = _subspace_intersection(
                view.subspace(S.inv(r)), view.subspace(s), A
            )
            images = [view.apply(r, v) for v in span.basis]
            image_span = Subspace(images or [], sc, ambient_dim=A.dim)
            if not image_span.equals(view.subspace(S.mul(r, s))):
                bad = f"image law fails at ({S.label(r)}, {S.label(s)})"
                break
        if bad:
            break
    rep.add("derived: image of meet ideal is product ideal", bad is None, bad or "")

    bad_f = bad_g = bad_h = None
    for r, s, t in itertools.product(S.elements(), repeat=3):
        w_st = view.cocycle(s, t)
        w_st_star = A.star_vec(w_st)
        st = S.mul(s, t)
        w_r_st = view.cocycle(r, st)
        w_rs = view.cocycle(r, s)
        w_rs_t = view.cocycle(S.mul(r, s), t)
        span = view.meet_with_product(S.inv(r), s, t)
        for a in span.basis:
            beta_a = view.apply(r, a)
            if bad_f is None:
                lhs = view.apply(r, A.mul_vec(a, w_st_star))
                rhs = A.mul_vec(
                    A.mul_vec(A.mul_vec(beta_a, w_r_st), A.star_vec(w_rs_t)),
                    A.star_vec(w_rs),
                )
                if not _same_vec(A, lhs, rhs):
                    bad_f = f"({S.label(r)}, {S.label(s)}, {S.label(t)})"
            if bad_g is None:
                lhs = view.apply(r, A.mul_vec(w_st, a))
                rhs = A.mul_vec(
                    A.mul_vec(A.mul_vec(w_rs, w_rs_t), A.star_vec(w_r_st)), beta_a
                )
                if not _same_vec(A, lhs, rhs):
                    bad_g = f"({S.label(r)}, {S.label(s)}, {S.label(t)})"
            if bad_h is None:
                lhs = view.apply(r, A.mul_vec(w_st_star, a))
                rhs = A.mul_vec(
                    A.mul_vec(A.mul_vec(w_r_st, A.star_vec(w_rs_t)), A.star_vec(w_rs)),
                    beta_a,
                )
                if not _same_vec(A, lhs, rhs):
                    bad_h = f"({S.label(r)}, {S.label(s)}, {S.label(t)})"
    rep.add("derived: conjugate cocycle identity (right)", bad_f is None, bad_f or "")
    rep.add("derived: conjugate cocycle identity (left)", bad_g is None, bad_g or "")
    rep.add("derived: conjugate cocycle identity (starred)", bad_h is None, bad_h or "")

    bad_i = bad_j = None
    for r, s in itertools.product(S.elements(), repeat=2):
        rstar_r = S.mul(S.inv(r), r)
        left = view.cocycle(S.mul(S.inv(s), rstar_r), s)
        right = view.cocycle(S.inv(s), S.mul(rstar_r, s))
        if bad_i is None and not _same_vec(A, left, right):
            bad_i = f"({S.label(r)}, {S.label(s)})"
        home = S.mul(S.inv(s), S.inv(r))
        truncated = A.mul_vec(view.cocycle(S.inv(s), s), view.identity_vec(home))
        if bad_j is None and not _same_vec(A, truncated, right):
            bad_j = f"({S.label(r)}, {S.label(s)})"
    rep.add("derived: cocycle reduction (shifted index)", bad_i is None, bad_i or "")
    rep.add("derived: cocycle reduction (truncated)", bad_j is None, bad_j or "")

    bad = None
    for s in S.elements():
        w = view.cocycle(S.inv(s), s)
        if not _same_vec(A, view.apply(s, w), view.cocycle(s, S.inv(s))):
            bad = f"at {S.label(s)}"
            break
    rep.add("derived: map exchanges the two unit cocycles", bad is None, bad or "")
    return rep


def verify_green(action, view=None, normal=None, twist=None):
    """Homomorphism property, ideal at the unit, and the three twist clauses."""
    if isinstance(action, GreenTwistedAction):
        view = action.view()
        normal = action.normal
        twist = {n: action.twist[n].coords for n in action.normal}
    A, S = view.algebra, view.semigroup
    rep = Report("twist-map action axioms")
    e = S.unit
    if e is None:
        rep.add("acting semigroup is unital", False)
        return rep

    for s in S.elements():
        _check_map_structure(rep, view, s, "gamma")

    rep.add("ideal at the unit is the whole algebra", view.subspace(e).dim == A.dim)

    bad = None
    for s in S.elements():
        for t in S.elements():
            st = S.mul(s, t)
            dom = _composite_domain(view, s, t)
            expected = view.subspace(S.inv(st))
            if not dom.equals(expected):
                bad = f"composite domain mismatch at ({S.label(s)}, {S.label(t)})"
                break
            for x in expected.basis:
                if not _same_vec(
                    A, view.apply(s, view.apply(t, x)), view.apply(st, x)
                ):
                    bad = f"not a homomorphism at ({S.label(s)}, {S.label(t)})"
                    break
            if bad:
                break
        if bad:
            break
    rep.add("action is a semigroup homomorphism", bad is None, bad or "")

    bad = None
    for n in normal:
        tau = twist[n]
        home = view.subspace(n)
        one = view.identity_vec(n)
        taus = A.star_vec(tau)
        if not home.contains(tau):
            bad = f"twist at {S.label(n)} outside its ideal"
            break
        if not (
            _same_vec(A, A.mul_vec(tau, taus), one)
            and _same_vec(A, A.mul_vec(taus, tau), one)
        ):
            bad = f"twist at {S.label(n)} is not unitary"
            break
    rep.add("twist values are unitary multipliers", bad is None, bad or "")

    bad = None
    for n in normal:
        tau = twist[n]
        taus = A.star_vec(tau)
        for v in view.subspace(S.inv(n)).basis:
            if not _same_vec(
                A, view.apply(n, v), A.mul_vec(A.mul_vec(tau, v), taus)
            ):
                bad = f"twist does not implement the map at {S.label(n)}"
                break
        if bad:
            break
    rep.add("twist implements the action on the subsemigroup", bad is None, bad or "")

    bad = None
    for s in S.elements():
        ss = S.mul(S.inv(s), s)
        for n in normal:
            if not S.leq(S.mul(S.inv(n), n), ss):
                continue
            conj = S.mul_all(s, n, S.inv(s))
            lhs = view.apply(s, twist[n])
            if not _same_vec(A, lhs, twist[conj]):
                bad = f"equivariance fails at ({S.label(s)}, {S.label(n)})"
                break
        if bad:
            break
    rep.add("twist is equivariant under conjugation", bad is None, bad or "")

    bad = None
    for n in normal:
        for l in normal:
            if not _same_vec(
                A, A.mul_vec(twist[n], twist[l]), twist[S.mul(n, l)]
            ):
                bad = f"twist not multiplicative at ({S.label(n)}, {S.label(l)})"
                break
        if bad:
            break
    rep.add("twist is multiplicative", bad is None, bad or "")
    return rep


def verify_twisted_partial(tpa):
    A, G = tpa.algebra, tpa.group
    rep = Report("twisted partial group action axioms")
    e = G.unit
    view = ActionView(
        A,
        G,
        lambda g: [A.basis_vec(i) for i in tpa.ideals[g].indices],
        lambda g, v: tpa.autos[g].apply_vec(v),
        lambda g, v: tpa.alpha_inv(g).apply_vec(v),
        lambda r, s: tpa.cocycle[r][s].coords,
    )

    rep.add("ideal at the unit is the whole algebra", view.subspace(e).dim == A.dim)
    rep.add(
        "unit acts as the identity",
        all(_same_vec(A, view.apply(e, v), v) for v in view.subspace(e).basis),
    )
    for g in G.elements():
        _check_map_structure(rep, view, g, "alpha")

    bad = None
    for r in G.elements():
        for s in G.elements():
            source = _subspace_intersection(
                view.subspace(G.inv(r)), view.subspace(s), A
            )
            images = [view.apply(r, v) for v in source.basis]
            image_span = Subspace(images or [], A.scalars, ambient_dim=A.dim)
            target = _subspace_intersection(
                view.subspace(r), view.subspace(G.mul(r, s)), A
            )
            if not image_span.equals(target):
                bad = f"domain shuffle fails at ({G.label(r)}, {G.label(s)})"
                break
        if bad:
            break
    rep.add("maps shuffle the ideal lattice", bad is None, bad or "")

    bad = None
    for r in G.elements():
        for s in G.elements():
            u = view.cocycle(r, s)
            home = _subspace_intersection(
                view.subspace(r), view.subspace(G.mul(r, s)), A
            )
            if not home.contains(u):
                bad = f"u[{G.label(r)},{G.label(s)}] outside its ideal"
                break
            one = span_identity(A, home.basis)
            if one is None:
                bad = f"ideal of u[{G.label(r)},{G.label(s)}] has no identity"
                break
            us = A.star_vec(u)
            if not (
                _same_vec(A, A.mul_vec(u, us), one)
                and _same_vec(A, A.mul_vec(us, u), one)
            ):
                bad = f"u[{G.label(r)},{G.label(s)}] is not unitary"
                break
        if bad:
            break
    rep.add("cocycle values are unitary multipliers", bad is None, bad or "")

    bad = None
    for r, s in itertools.product(G.elements(), repeat=2):
        span = _subspace_intersection(
            view.subspace(G.inv(s)), view.subspace(G.mul(G.inv(s), G.inv(r))), A
        )
        u = view.cocycle(r, s)
        us = A.star_vec(u)
        rs = G.mul(r, s)
        for a in span.basis:
            lhs = view.apply(r, view.apply(s, a))
            rhs = A.mul_vec(A.mul_vec(u, view.apply(rs, a)), us)
            if not _same_vec(A, lhs, rhs):
                bad = f"composite law fails at ({G.label(r)}, {G.label(s)})"
                break
        if bad:
            break
    rep.add("composites equal conjugated products", bad is None, bad or "")

    bad = None
    for t in G.elements():
        want = span_identity(A, view.subspace(t).basis)
        if not _same_vec(A, view.cocycle(e, t), want):
            bad = f"u[e,{G.label(t)}] nontrivial"
            break
        if not _same_vec(A, view.cocycle(t, e), want):
            bad = f"u[{G.label(t)},e] nontrivial"
            break
    rep.add("cocycle trivial on unit pairs", bad is None, bad or "")

    bad = None
    for r, s, t in itertools.product(G.elements(), repeat=3):
        st = G.mul(s, t)
        inner = _subspace_intersection(view.subspace(s), view.subspace(st), A)
        span = _subspace_intersection(view.subspace(G.inv(r)), inner, A)
        w_st = view.cocycle(s, t)
        w_r_st = view.cocycle(r, st)
        w_rs = view.cocycle(r, s)
        w_rs_t = view.cocycle(G.mul(r, s), t)
        for a in span.basis:
            lhs = A.mul_vec(view.apply(r, A.mul_vec(a, w_st)), w_r_st)
            rhs = A.mul_vec(A.mul_vec(view.apply(r, a), w_rs), w_rs_t)
            if not _same_vec(A, lhs, rhs):
                bad = f"cocycle identity fails at ({G.label(r)}, {G.label(s)}, {G.label(t)})"
                break
        if bad:
            break
    rep.add("cocycle identity", bad is None, bad or "")
    return rep


# -- constructors -------------------------------------------------------------


def _kernel_ideal_indices(T, N, algebra, top):
    """Basis positions of elements n in N whose range projection sits below top."""
    return [
        algebra.basis_of_element[n]
        for n in algebra.element_of_basis
        if T.leq(T.range_projection(n), top)
    ]


def action_from_cross_section(T, N, section, cong=None):
    """Twisted action on the subsemigroup algebra built from class representatives.

    Ideals are kernel-class spans below the representative's range projection,
    maps conjugate by the representative, and the cocycle multiplies two
    representatives against the star of a third.
    """
    N = tuple(sorted(N))
    if cong is None:
        cong = congruence_from_normal_clifford(T, N)
    verdict = is_order_preserving(T, cong, section)
    if not verdict.passed:
        raise InputError(
            "cross-section is not order-preserving: "
            + "; ".join(c.detail or c.name for c in verdict.failures())
        )
    Q, proj = quotient(T, cong)
    A = semigroup_algebra(T, subset=N)
    ideals = []
    for q in range(Q.size):
        c_q = section[q]
        top = T.range_projection(c_q)
        ideals.append(BasisIdeal(A, _kernel_ideal_indices(T, N, A, top), check=False))
    autos = []
    for q in range(Q.size):
        c_q = section[q]
        dom = ideals[Q.inv(q)]
        images = []
        for pos in dom.indices:
            n = A.element_of_basis[pos]
            out = T.mul_all(c_q, n, T.star[c_q])
            if out not in A.basis_of_element:
                raise StructureError("conjugation left the subsemigroup")
            images.append(A.basis_vec(A.basis_of_element[out]))
        autos.append(PartialStarAutomorphism(dom, ideals[q], images, check=False))
    cocycle = []
    for q in range(Q.size):
        row = []
        for r in range(Q.size):
            prod = T.mul_all(section[q], section[r], T.star[section[Q.mul(q, r)]])
            if prod not in A.basis_of_element:
                raise StructureError("cocycle value left the subsemigroup")
            row.append(A.basis_element(A.basis_of_element[prod]))
        cocycle.append(row)
    return BusbySmithAction(A, Q, ideals, autos, cocycle)


def canonical_action(T):
    """Trivially twisted conjugation action of T on its idempotent semilattice algebra."""
    if T.unit is None:
        raise InputError("the acting semigroup must be unital")
    E = tuple(T.idempotent_list())
    A = semigroup_algebra(T, subset=E)
    ideals = []
    for s in T.elements():
        top = T.range_projection(s)
        ideals.append(
            BasisIdeal(
                A,
                [A.basis_of_element[f] for f in E if T.leq(f, top)],
                check=False,
            )
        )
    autos = []
    for s in T.elements():
        dom = ideals[T.star[s]]
        images = []
        for pos in dom.indices:
            f = A.element_of_basis[pos]
            images.append(A.basis_vec(A.basis_of_element[T.mul_all(s, f, T.star[s])]))
        autos.append(PartialStarAutomorphism(dom, ideals[s], images, check=False))
    cocycle = []
    for s in T.elements():
        row = []
        for t in T.elements():
            st = T.mul(s, t)
            row.append(A.basis_element(A.basis_of_element[T.range_projection(st)]))
        cocycle.append(row)
    return BusbySmithAction(A, T, ideals, autos, cocycle)


def green_canonical(T, N):
    """Conjugation action of the whole semigroup on the subsemigroup algebra."""
    N = tuple(sorted(N))
    check = is_normal_clifford(T, N)
    if not check.passed:
        raise InputError(
            "subset is not a normal Clifford subsemigroup: "
            + "; ".join(c.name for c in check.failures())
        )
    A = semigroup_algebra(T, subset=N)
    ideals = [
        BasisIdeal(A, _kernel_ideal_indices(T, N, A, T.range_projection(s)), check=False)
        for s in T.elements()
    ]
    autos = []
    for s in T.elements():
        dom = ideals[T.star[s]]
        images = []
        for pos in dom.indices:
            n = A.element_of_basis[pos]
            out = T.mul_all(s, n, T.star[s])
            images.append(A.basis_vec(A.basis_of_element[out]))
        autos.append(PartialStarAutomorphism(dom, ideals[s], images, check=False))
    twist = {n: A.basis_element(A.basis_of_element[n]) for n in N}
    return GreenTwistedAction(A, T, N, ideals, autos, twist)


def green_to_busby(green, section, cong=None):
    """Collapse a twist-map action to a cocycle-twisted action of the quotient."""
    T = green.semigroup
    N = green.normal
    if cong is None:
        cong = congruence_from_normal_clifford(T, N)
    verdict = is_order_preserving(T, cong, section)
    if not verdict.passed:
        raise InputError(
            "cross-section is not order-preserving: "
            + "; ".join(c.detail or c.name for c in verdict.failures())
        )
    Q, proj = quotient(T, cong)
    ideals = [green.ideals[section[q]] for q in range(Q.size)]
    autos = []
    for q in range(Q.size):
        base = green.autos[section[q]]
        dom = ideals[Q.inv(q)]
        if base.domain.indices != dom.indices:
            raise StructureError("section representatives give mismatched domains")
        autos.append(PartialStarAutomorphism(dom, ideals[q], base.images, check=False))
    cocycle = []
    for q in range(Q.size):
        row = []
        for r in range(Q.size):
            n = T.mul_all(section[q], section[r], T.star[section[Q.mul(q, r)]])
            row.append(green.twist[n])
        cocycle.append(row)
    return BusbySmithAction(green.algebra, Q, ideals, autos, cocycle)


def partial_to_exel(tpa):
    """Induce a cocycle-twisted action of the expansion semigroup of the group."""
    G = tpa.group
    exel = ExelSemigroup(G)
    SG = exel.semigroup
    A = tpa.algebra
    ideals = []
    autos = []
    for x in exel.elements:
        members = x.member_list()
        idx = set(range(A.dim))
        for g in members:
            idx &= set(tpa.ideals[g].indices)
        ideals.append(BasisIdeal(A, idx, check=False))
    for pos, x in enumerate(exel.elements):
        current = tpa.autos[x.tail]
        for g in sorted(set(x.member_list()) - {G.unit, x.tail}):
            current = compose_autos(identity_automorphism(tpa.ideals[g]), current)
        if current.codomain.indices != ideals[pos].indices:
            raise StructureError("composed map range disagrees with the member ideal")
        autos.append(
            PartialStarAutomorphism(
                current.domain, ideals[pos], current.images, check=False
            )
        )
    cocycle = []
    for p, xp in enumerate(exel.elements):
        row = []
        for q, xq in enumerate(exel.elements):
            pq = SG.mul(p, q)
            one = ideals[pq].identity()
            if one is None:
                raise StructureError("product ideal has no identity")
            u = tpa.cocycle[xp.tail][xq.tail]
            row.append(A.element(A.mul_vec(one.coords, u.coords)))
        cocycle.append(row)
    return BusbySmithAction(A, SG, ideals, autos, cocycle), exel


def exel_to_partial(busby, exel):
    """Restrict an expansion-semigroup action to the canonical group image."""
    G = exel.group
    if busby.semigroup != exel.semigroup:
        raise InputError("action does not live over the given expansion semigroup")
    ideals = []
    autos = []
    for g in G.elements():
        i = exel.embed_index(g)
        ideals.append(busby.ideals[i])
    for g in G.elements():
        i = exel.embed_index(g)
        base = busby.autos[i]
        dom = ideals[G.inv(g)]
        if base.domain.indices != dom.indices:
            raise StructureError("embedded domains are inconsistent")
        autos.append(PartialStarAutomorphism(dom, ideals[g], base.images, check=False))
    cocycle = [
        [
            busby.cocycle[exel.embed_index(r)][exel.embed_index(s)]
            for s in G.elements()
        ]
        for r in G.elements()
    ]
    return TwistedPartialAction(busby.algebra, G, ideals, autos, cocycle)


# -- exterior equivalence and conjugacy ---------------------------------------


def is_exterior_equivalence(first, second, family):
    """Check that the unitary family carries the first action onto the second."""
    A = first.algebra
    S = first.semigroup
    rep = Report("exterior equivalence check")
    rep.add("same algebra", second.algebra is A or second.algebra.dim == A.dim)
    rep.add("same semigroup", second.semigroup == S)
    if not rep.passed:
        return rep
    rep.add(
        "same ideal family",
        all(a.indices == b.indices for a, b in zip(first.ideals, second.ideals)),
    )

    bad = None
    for s in S.elements():
        V = family[s]
        if not is_unitary_multiplier(V, first.ideals[s]):
            bad = f"V[{S.label(s)}] is not a unitary multiplier of its ideal"
            break
    rep.add("family values are unitary multipliers", bad is None, bad or "")
    if not rep.passed:
        return rep

    bad = None
    for s in S.elements():
        V = family[s]
        Vs = V.star()
        dom = first.ideals[S.inv(s)]
        for i in dom.indices:
            x = A.basis_vec(i)
            lhs = second.autos[s].apply_vec(x)
            rhs = A.mul_vec(
                A.mul_vec(V.coords, first.autos[s].apply_vec(x)), Vs.coords
            )
            if not _same_vec(A, lhs, rhs):
                bad = f"maps differ by more than conjugation at {S.label(s)}"
                break
        if bad:
            break
    rep.add("maps agree up to conjugation by the family", bad is None, bad or "")

    bad = None
    for s in S.elements():
        for t in S.elements():
            st = S.mul(s, t)
            one_dom = ideal_identity_vec(first, S.inv(s))
            truncated = A.mul_vec(one_dom, family[t].coords)
            moved = first.autos[s].apply_vec(truncated)
            rhs = A.mul_vec(
                A.mul_vec(
                    A.mul_vec(family[s].coords, moved), first.cocycle[s][t].coords
                ),
                A.star_vec(family[st].coords),
            )
            if not _same_vec(A, second.cocycle[s][t].coords, rhs):
                bad = f"cocycles differ at ({S.label(s)}, {S.label(t)})"
                break
        if bad:
            break
    rep.add("cocycles related by the family", bad is None, bad or "")
    return rep


def ideal_identity_vec(action, s):
    one = action.ideals[s].identity()
    if one is None:
        raise StructureError("ideal has no identity")
    return one.coords


def exterior_perturb(action, family):
    """The exterior-equivalent action determined by a unitary family."""
    A = action.algebra
    S = action.semigroup
    autos = []
    for s in S.elements():
        V = family[s]
        Vs = V.star()
        dom = action.ideals[S.inv(s)]
        images = [
            A.mul_vec(A.mul_vec(V.coords, action.autos[s].apply_vec(A.basis_vec(i))), Vs.coords)
            for i in dom.indices
        ]
        autos.append(PartialStarAutomorphism(dom, action.ideals[s], images, check=False))
    cocycle = []
    for s in S.elements():
        row = []
        for t in S.elements():
            st = S.mul(s, t)
            one_dom = ideal_identity_vec(action, S.inv(s))
            truncated = A.mul_vec(one_dom, family[t].coords)
            moved = action.autos[s].apply_vec(truncated)
            vec = A.mul_vec(
                A.mul_vec(
                    A.mul_vec(family[s].coords, moved), action.cocycle[s][t].coords
                ),
                A.star_vec(family[st].coords),
            )
            row.append(A.element(vec))
        cocycle.append(row)
    return BusbySmithAction(A, S, action.ideals, autos, cocycle)


def family_star(family):
    return {s: V.star() for s, V in family.items()}


def family_product(outer, inner):
    return {s: outer[s] * inner[s] for s in outer}


def cross_section_equivalence_witness(T, N, first_section, second_section, cong=None):
    """Unitary family second(s) * star(first(s)) linking the two induced actions."""
    N = tuple(sorted(N))
    if cong is None:
        cong = congruence_from_normal_clifford(T, N)
    act_first = action_from_cross_section(T, N, first_section, cong)
    act_second = action_from_cross_section(T, N, second_section, cong)
    A = act_first.algebra
    Q, proj = quotient(T, cong)
    family = {}
    for q in range(Q.size):
        prod = T.mul(second_section[q], T.star[first_section[q]])
        if prod not in A.basis_of_element:
            raise StructureError("witness value left the subsemigroup")
        family[q] = A.basis_element(A.basis_of_element[prod])
    rep = is_exterior_equivalence(act_first, act_second, family)
    if not rep.passed:
        raise StructureError("cross-section witness failed the equivalence check")
    return family, rep


def is_conjugacy(first, second, rho_images, phi):
    """rho: algebra map by basis images; phi: semigroup map by index table."""
    A, B = first.algebra, second.algebra
    S, T = first.semigroup, second.semigroup
    sc = B.scalars
    rep = Report("conjugacy check")

    rep.add("semigroup map is a bijection", sorted(phi) == list(range(T.size)))
    bad = None
    for s in S.elements():
        for t in S.elements():
            if phi[S.mul(s, t)] != T.mul(phi[s], phi[t]):
                bad = f"products disagree at ({S.label(s)}, {S.label(t)})"
                break
        if S.star[s] != s and phi[S.star[s]] != T.star[phi[s]]:
            bad = f"star disagrees at {S.label(s)}"
        if bad:
            break
    rep.add("semigroup map is a star-isomorphism", bad is None, bad or "")

    rho_images = [tuple(v) for v in rho_images]
    rep.add("algebra map dimensions agree", len(rho_images) == A.dim and A.dim == B.dim)
    if not rep.passed:
        return rep
    rho_space = Subspace(rho_images, sc, ambient_dim=B.dim)
    rep.add("algebra map is bijective", rho_space.dim == B.dim)

    def conv(c):
        if A.scalars.exact and sc.exact:
            return c
        return sc.coerce(A.scalars.to_complex(c))

    def rho(vec):
        out = [sc.zero] * B.dim
        for i, c in enumerate(vec):
            cc = conv(c)
            if not sc.is_zero(cc):
                for k in range(B.dim):
                    out[k] = out[k] + cc * rho_images[i][k]
        return tuple(out)

    bad = None
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = rho(A.mul_vec(A.basis_vec(i), A.basis_vec(j)))
            rhs = B.mul_vec(rho_images[i], rho_images[j])
            if not _same_vec(B, lhs, rhs):
                bad = f"not multiplicative at ({A.labels[i]}, {A.labels[j]})"
                break
        if bad is None and not _same_vec(
            B, rho(A.star_vec(A.basis_vec(i))), B.star_vec(rho_images[i])
        ):
            bad = f"star not preserved at {A.labels[i]}"
        if bad:
            break
    rep.add("algebra map is a star-homomorphism", bad is None, bad or "")

    bad = None
    for s in S.elements():
        dom = first.ideals[S.inv(s)]
        for i in dom.indices:
            x = A.basis_vec(i)
            lhs = rho(first.autos[s].apply_vec(x))
            rhs = second.autos[phi[s]].apply_vec(rho(x))
            if not _same_vec(B, lhs, rhs):
                bad = f"intertwining fails at {S.label(s)}"
                break
        if bad:
            break
    rep.add("algebra map intertwines the actions", bad is None, bad or "")

    bad = None
    for s in S.elements():
        for t in S.elements():
            lhs = rho(first.cocycle[s][t].coords)
            rhs = second.cocycle[phi[s]][phi[t]].coords
            if not _same_vec(B, lhs, rhs):
                bad = f"cocycles disagree at ({S.label(s)}, {S.label(t)})"
                break
        if bad:
            break
    rep.add("cocycles correspond", bad is None, bad or "")
    return rep
