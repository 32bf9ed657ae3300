"""Finite-dimensional crossed products and the decomposition checks.

The convolution algebra of an action has basis pairs (s, j): semigroup
element s and position j in the chosen basis of the ideal at s.  The
computational crossed product is the quotient by the star-ideal generated by
the order relations (plus the twist relations in the twist-map case); each
acceptance instance is certified by an explicit surjection with matching
kernel rather than by assuming the quotient equals the representation-
theoretic one.
"""

from __future__ import annotations

import itertools

import numpy as np

from .actions import (
    ActionView,
    BusbySmithAction,
    GreenTwistedAction,
    verify_busby_smith,
    verify_green,
)
from .congruence import congruence_from_normal_clifford, is_normal_clifford, quotient
from .cross_section import find_order_preserving, is_order_preserving
from .errors import InputError, StructureError, VerificationRefusal
from .fdalgebra import FdStarAlgebra, cstar_dimension, semigroup_algebra, star_gram
from .linalg import (
    Subspace,
    rref,
    reduce_mod,
    solve_in_span,
    vec_is_zero,
    vec_sub,
)
from .report import Report
from .semigroup import max_group_image, restrict


# -- convolution algebra -------------------------------------------------------


def build_convolution(view, check=True):
    """The convolution star-algebra of an action view.

    Returns (algebra, delta_basis, delta_index); the constructor re-verifies
    associativity and the star laws on basis triples, which re-derives the
    convolution-algebra proposition at finite scale.
    """
    A = view.algebra
    S = view.semigroup
    sc = A.scalars
    delta_basis = []
    for s in S.elements():
        for j in range(len(view.ideal_vectors(s))):
            delta_basis.append((s, j))
    delta_index = {pair: k for k, pair in enumerate(delta_basis)}
    dim = len(delta_basis)

    def coords_at(s, vec):
        c = view.subspace(s).coords(vec)
        if c is None:
            raise StructureError(
                f"convolution product left the ideal at {S.label(s)}"
            )
        return c

    mul_entries = [[() for _ in range(dim)] for _ in range(dim)]
    for a, (s, i) in enumerate(delta_basis):
        x = view.ideal_vectors(s)[i]
        back = view.apply_inv(s, x)
        for b, (t, j) in enumerate(delta_basis):
            y = view.ideal_vectors(t)[j]
            z = view.apply(s, A.mul_vec(back, y))
            w = view.cocycle(s, t)
            if w is not None:
                z = A.mul_vec(z, w)
            st = S.mul(s, t)
            entry = []
            for k, c in enumerate(coords_at(st, z)):
                if not sc.is_zero(c):
                    entry.append((delta_index[(st, k)], c))
            mul_entries[a][b] = tuple(entry)

    star_entries = []
    for (s, i) in delta_basis:
        x = view.ideal_vectors(s)[i]
        z = view.apply_inv(s, A.star_vec(x))
        s_star = S.inv(s)
        w = view.cocycle(s_star, s)
        if w is not None:
            z = A.mul_vec(z, A.star_vec(w))
        entry = []
        for k, c in enumerate(coords_at(s_star, z)):
            if not sc.is_zero(c):
                entry.append((delta_index[(s_star, k)], c))
        star_entries.append(tuple(entry))

    labels = []
    for (s, j) in delta_basis:
        vec = view.ideal_vectors(s)[j]
        support = sorted(A.support(vec))
        if len(support) == 1 and not sc.is_zero(vec[support[0]] - sc.one):
            base = f"({A.labels[support[0]]})"
        elif len(support) == 1:
            base = A.labels[support[0]]
        else:
            base = f"v{j}"
        labels.append(f"{base}.d[{S.label(s)}]")
    L = FdStarAlgebra(dim, mul_entries, star_entries, labels=labels, scalars=sc, check=check)
    return L, delta_basis, delta_index


def order_relation_vectors(view, delta_basis, delta_index):
    """Generators identifying a delta term with its extension along the order."""
    A = view.algebra
    S = view.semigroup
    sc = A.scalars
    out = []
    for s in S.elements():
        for t in S.elements():
            if s == t or not S.leq(s, t):
                continue
            target = view.subspace(t)
            for j, vec in enumerate(view.ideal_vectors(s)):
                coords = target.coords(vec)
                if coords is None:
                    raise StructureError(
                        "ideal does not extend along the natural order"
                    )
                rel = [sc.zero] * len(delta_basis)
                rel[delta_index[(s, j)]] = rel[delta_index[(s, j)]] + sc.one
                for k, c in enumerate(coords):
                    rel[delta_index[(t, k)]] = rel[delta_index[(t, k)]] - c
                out.append(tuple(rel))
    return out


def twist_relation_vectors(view, normal, twist, delta_basis, delta_index):
    """Generators identifying a twisted unit term with the subsemigroup term."""
    A = view.algebra
    S = view.semigroup
    sc = A.scalars
    e = S.unit
    unit_space = view.subspace(e)
    out = []
    for n in normal:
        tau = twist[n]
        for j, vec in enumerate(view.ideal_vectors(n)):
            moved = A.mul_vec(vec, tau)
            coords = unit_space.coords(moved)
            if coords is None:
                raise StructureError("twisted term left the unit ideal")
            rel = [sc.zero] * len(delta_basis)
            for k, c in enumerate(coords):
                rel[delta_index[(e, k)]] = rel[delta_index[(e, k)]] + c
            rel[delta_index[(n, j)]] = rel[delta_index[(n, j)]] - sc.one
            out.append(tuple(rel))
    return out


def star_ideal_closure(L, generators):
    """Smallest star-closed two-sided ideal containing the generators, as a Subspace."""
    sc = L.scalars
    rows, pivots = rref(list(generators), sc)
    frontier = list(rows)
    while frontier:
        new = []
        for v in frontier:
            candidates = [L.star_vec(v)]
            for i in range(L.dim):
                b = L.basis_vec(i)
                candidates.append(L.mul_vec(b, v))
                candidates.append(L.mul_vec(v, b))
            for c in candidates:
                red = reduce_mod(rows, pivots, c, sc)
                if not vec_is_zero(red, sc):
                    rows, pivots = rref(rows + [red], sc)
                    new.append(red)
        frontier = new
    return Subspace(rows, sc, ambient_dim=L.dim)


def quotient_by_ideal(L, ideal_space):
    """Quotient algebra on the non-pivot coordinates, with the projection map."""
    sc = L.scalars
    rows, pivots = ideal_space.reduced, ideal_space.pivots
    pivot_set = set(pivots)
    kept = [i for i in range(L.dim) if i not in pivot_set]
    back = {i: k for k, i in enumerate(kept)}
    dim_q = len(kept)
    if dim_q == 0:
        raise StructureError("quotient collapsed to zero")

    def project(vec):
        red = reduce_mod(rows, pivots, vec, sc)
        return tuple(red[i] for i in kept)

    mul_entries = []
    for a in kept:
        row_entries = []
        for b in kept:
            prod = project(L.mul_vec(L.basis_vec(a), L.basis_vec(b)))
            row_entries.append(
                tuple((k, c) for k, c in enumerate(prod) if not sc.is_zero(c))
            )
        mul_entries.append(row_entries)
    star_entries = []
    for a in kept:
        s = project(L.star_vec(L.basis_vec(a)))
        star_entries.append(tuple((k, c) for k, c in enumerate(s) if not sc.is_zero(c)))
    Q = FdStarAlgebra(
        dim_q,
        mul_entries,
        star_entries,
        labels=[L.labels[i] for i in kept],
        scalars=sc,
        check=True,
    )
    return Q, kept, project


class CrossedProductAlgebra:
    """Convolution algebra, relation ideal, and the quotient, bundled."""

    def __init__(self, view, relation_vectors, relation_kind, provenance=""):
        self.view = view
        self.relation_kind = relation_kind
        self.provenance = provenance
        L, delta_basis, delta_index = build_convolution(view)
        self.pre_quotient = L
        self.delta_basis = delta_basis
        self.delta_index = delta_index
        self.relation_space = star_ideal_closure(L, relation_vectors)
        Q, kept, project = quotient_by_ideal(L, self.relation_space)
        self.quotient = Q
        self.kept = kept
        self._project = project

    def project(self, L_vec):
        return self._project(L_vec)

    def delta_vec(self, s, ambient_vec):
        """Convolution coordinates of (ambient element) placed at s."""
        coords = self.view.subspace(s).coords(ambient_vec)
        if coords is None:
            raise InputError("element is outside the ideal at that tag")
        sc = self.pre_quotient.scalars
        out = [sc.zero] * self.pre_quotient.dim
        for k, c in enumerate(coords):
            out[self.delta_index[(s, k)]] = c
        return tuple(out)

    def image(self, s, ambient_vec):
        """Quotient coordinates of the class of (element at tag s)."""
        return self.project(self.delta_vec(s, ambient_vec))

    def dims(self):
        return {
            "convolution": self.pre_quotient.dim,
            "relations": self.relation_space.dim,
            "quotient": self.quotient.dim,
        }


def crossed_product(action, verified=None):
    """Order-relation quotient of a cocycle-twisted action's convolution algebra."""
    if verified is None:
        verified = verify_busby_smith(action)
    if not verified.passed:
        raise VerificationRefusal(
            "action failed verification; refusing to build the crossed product",
            report=verified,
        )
    view = action.view()
    L, delta_basis, delta_index = build_convolution(view, check=False)
    rels = order_relation_vectors(view, delta_basis, delta_index)
    return CrossedProductAlgebra(view, rels, "order", provenance="cocycle-twisted")


def green_crossed_product(green, verified=None):
    """Order plus twist relations over the untwisted convolution algebra."""
    if verified is None:
        verified = verify_green(green)
    if not verified.passed:
        raise VerificationRefusal(
            "action failed verification; refusing to build the crossed product",
            report=verified,
        )
    view = green.view()
    L, delta_basis, delta_index = build_convolution(view, check=False)
    rels = order_relation_vectors(view, delta_basis, delta_index)
    rels += twist_relation_vectors(
        view,
        green.normal,
        {n: green.twist[n].coords for n in green.normal},
        delta_basis,
        delta_index,
    )
    return CrossedProductAlgebra(view, rels, "order+twist", provenance="twist-map")


# -- explicit isomorphism certification ---------------------------------------


def verify_explicit_iso(images, source, relation_space, target):
    """Certify that a linear map induces a star-isomorphism of the quotient.

    images[i] is the target-coordinate vector of the i-th source basis
    element.  Checks: star-homomorphism on basis pairs, surjectivity by rank,
    and kernel equal to the relation subspace.
    """
    sc = target.scalars
    rep = Report("explicit isomorphism certificate")
    images = [tuple(v) for v in images]

    def apply(vec):
        out = [sc.zero] * target.dim
        for i, c in enumerate(vec):
            if not sc.is_zero(c):
                for k in range(target.dim):
                    out[k] = out[k] + c * images[i][k]
        return tuple(out)

    bad = None
    for i in range(source.dim):
        for j in range(source.dim):
            lhs = apply(source.mul_vec(source.basis_vec(i), source.basis_vec(j)))
            rhs = target.mul_vec(images[i], images[j])
            if not vec_is_zero(vec_sub(lhs, rhs), sc):
                bad = f"not multiplicative at ({source.labels[i]}, {source.labels[j]})"
                break
        if bad:
            break
    rep.add("multiplicative on basis pairs", bad is None, bad or "")

    bad = None
    for i in range(source.dim):
        lhs = apply(source.star_vec(source.basis_vec(i)))
        rhs = target.star_vec(images[i])
        if not vec_is_zero(vec_sub(lhs, rhs), sc):
            bad = f"star not preserved at {source.labels[i]}"
            break
    rep.add("star-preserving on the basis", bad is None, bad or "")

    image_space = Subspace(images, sc, ambient_dim=target.dim)
    rep.add(
        "surjective onto the target",
        image_space.dim == target.dim,
        f"rank {image_space.dim} of {target.dim}",
    )

    kernel_dim = source.dim - image_space.dim
    rep.add(
        "kernel dimension matches the relation ideal",
        kernel_dim == relation_space.dim,
        f"kernel {kernel_dim}, relations {relation_space.dim}",
    )
    bad = None
    for v in relation_space.basis:
        if not vec_is_zero(apply(v), sc):
            bad = "a relation generator has a nonzero image"
            break
    rep.add("relations are annihilated", bad is None, bad or "")
    return rep


def cross_section_iso(T, N, section, cong, xp):
    """Candidate map (element at class q) -> element * representative, into C*(T).

    Certifying it exhibits the crossed product over the quotient as the full
    semigroup algebra.
    """
    target = semigroup_algebra(T)
    A = xp.view.algebra
    images = []
    for (q, j) in xp.delta_basis:
        vec = xp.view.ideal_vectors(q)[j]
        out = [target.scalars.zero] * target.dim
        for pos, c in enumerate(vec):
            if target.scalars.is_zero(c):
                continue
            n = A.element_of_basis[pos]
            t = T.mul(n, section[q])
            out[t] = out[t] + c
        images.append(tuple(out))
    return images, target


# -- covariant representations -------------------------------------------------


class CovariantRepresentation:
    """Matrices pi over the coefficient algebra and v over the semigroup."""

    def __init__(self, pi, v, space_dim):
        self.pi = [np.asarray(m, dtype=complex) for m in pi]
        self.v = [np.asarray(m, dtype=complex) for m in v]
        self.space_dim = space_dim

    def pi_of_vec(self, vec, scalars):
        out = np.zeros((self.space_dim, self.space_dim), dtype=complex)
        for i, c in enumerate(vec):
            cc = scalars.to_complex(c)
            if cc:
                out += cc * self.pi[i]
        return out


def _column_space_projector(mats, tol):
    if not mats:
        return np.zeros((0, 0))
    stacked = np.hstack(mats)
    u, s, _ = np.linalg.svd(stacked)
    rank = int(np.sum(s > tol * max(1.0, s[0] if len(s) else 1.0)))
    basis = u[:, :rank]
    return basis @ basis.conj().T


def verify_covariant(rep, action, tol=1e-9):
    """Representation laws, the three covariance clauses, and derived identities."""
    A = action.algebra
    S = action.semigroup
    out = Report("covariant representation checks")
    d = rep.space_dim

    def close(x, y):
        return np.allclose(x, y, atol=tol * 10)

    bad = None
    for i in range(A.dim):
        for j in range(A.dim):
            prod = rep.pi_of_vec(A.mul_vec(A.basis_vec(i), A.basis_vec(j)), A.scalars)
            if not close(rep.pi[i] @ rep.pi[j], prod):
                bad = f"pi not multiplicative at ({A.labels[i]}, {A.labels[j]})"
                break
        if bad is None and not close(
            rep.pi_of_vec(A.star_vec(A.basis_vec(i)), A.scalars), rep.pi[i].conj().T
        ):
            bad = f"pi not star-preserving at {A.labels[i]}"
        if bad:
            break
    out.add("pi is a star-representation", bad is None, bad or "")

    full = _column_space_projector(list(rep.pi), tol)
    out.add("pi is nondegenerate", close(full, np.eye(d)))

    projectors = {}
    for s in S.elements():
        mats = [rep.pi[i] for i in action.ideals[s].indices]
        projectors[s] = (
            _column_space_projector(mats, tol) if mats else np.zeros((d, d))
        )

    bad = None
    for s in S.elements():
        vs = rep.v[s]
        if not close(vs @ vs.conj().T @ vs, vs):
            bad = f"v[{S.label(s)}] is not a partial isometry"
            break
        if not close(vs.conj().T @ vs, projectors[S.inv(s)]):
            bad = f"v[{S.label(s)}] has the wrong initial space"
            break
        if not close(vs @ vs.conj().T, projectors[s]):
            bad = f"v[{S.label(s)}] has the wrong final space"
            break
    out.add("partial isometries with the ideal spaces", bad is None, bad or "")

    bad = None
    for s in S.elements():
        for i in action.ideals[S.inv(s)].indices:
            lhs = rep.pi_of_vec(
                action.autos[s].apply_vec(A.basis_vec(i)), A.scalars
            )
            rhs = rep.v[s] @ rep.pi[i] @ rep.v[s].conj().T
            if not close(lhs, rhs):
                bad = f"covariance fails at {S.label(s)}"
                break
        if bad:
            break
    out.add("covariance", bad is None, bad or "")

    bad = None
    for r in S.elements():
        for s in S.elements():
            lhs = rep.v[r] @ rep.v[s]
            rhs = (
                rep.pi_of_vec(action.cocycle[r][s].coords, A.scalars)
                @ rep.v[S.mul(r, s)]
            )
            if not close(lhs, rhs):
                bad = f"cocycle covariance fails at ({S.label(r)}, {S.label(s)})"
                break
        if bad:
            break
    out.add("isometries compose through the cocycle", bad is None, bad or "")

    bad = None
    for f in S.elements():
        if not S.is_idempotent(f):
            continue
        if not close(rep.v[f], projectors[f]):
            bad = f"v at idempotent {S.label(f)} is not the ideal projection"
            break
    out.add("idempotent tags give orthogonal projections", bad is None, bad or "")

    out.add("unit tag gives the identity", close(rep.v[S.unit], np.eye(d)))

    bad_c = bad_d = bad_e = None
    for s in S.elements():
        ss = S.inv(s)
        w_ss_s = rep.pi_of_vec(action.cocycle[ss][s].coords, A.scalars)
        w_s_ss = rep.pi_of_vec(action.cocycle[s][ss].coords, A.scalars)
        if bad_c is None and not close(rep.v[ss], w_ss_s @ rep.v[s].conj().T):
            bad_c = f"at {S.label(s)}"
        if bad_d is None and not close(
            rep.v[s].conj().T, rep.v[ss] @ w_s_ss.conj().T
        ):
            bad_d = f"at {S.label(s)}"
        if bad_e is None and not close(
            rep.v[s].conj().T, w_ss_s.conj().T @ rep.v[ss]
        ):
            bad_e = f"at {S.label(s)}"
    out.add("star tag via cocycle (left form)", bad_c is None, bad_c or "")
    out.add("adjoint via cocycle (right form)", bad_d is None, bad_d or "")
    out.add("adjoint via cocycle (left form)", bad_e is None, bad_e or "")
    return out


def left_regular_representation(B, tol=1e-9):
    """Star-representation of B on itself via the positive trace form.

    Requires the certified-positive trace form; the Gram matrix orthonormalizes
    the basis and left multiplication becomes matrices.
    """
    cert = cstar_dimension(B, tol)
    if not (cert.certified and cert.radical_dim == 0):
        raise VerificationRefusal(
            "trace form is not certified positive definite; "
            "no faithful representation available this way"
        )
    H = np.array(
        [[B.scalars.to_complex(x) for x in row] for row in star_gram(B)], dtype=complex
    )
    gram = H.T.conj()
    C = np.linalg.cholesky(gram)
    Cdag = C.conj().T
    Cinv = np.linalg.inv(Cdag)
    mats = []
    for i in range(B.dim):
        Lmat = np.array(
            [
                [B.scalars.to_complex(x) for x in row]
                for row in B.left_mult_matrix(B.basis_vec(i))
            ],
            dtype=complex,
        )
        mats.append(Cdag @ Lmat @ Cinv)
    return mats


def rep_from_algebra_rep(Pi, xp, action, tol=1e-9):
    """Covariant pair derived from a representation of the quotient algebra.

    pi evaluates coefficient elements at the unit tag and v evaluates the
    ideal identities at each tag; the returned report includes the exact
    round-trip comparison against the original representation.
    """
    A = action.algebra
    S = action.semigroup
    Q = xp.quotient
    d = Pi[0].shape[0]

    def Pi_of(qvec):
        out = np.zeros((d, d), dtype=complex)
        for k, c in enumerate(qvec):
            cc = Q.scalars.to_complex(c)
            if cc:
                out += cc * Pi[k]
        return out

    e = S.unit
    pi = [Pi_of(xp.image(e, A.basis_vec(i))) for i in range(A.dim)]
    v = []
    for s in S.elements():
        one = action.ideals[s].identity()
        if one is None:
            raise StructureError("ideal has no identity")
        v.append(Pi_of(xp.image(s, one.coords)))
    rep = CovariantRepresentation(pi, v, d)

    roundtrip = Report("representation round trip")
    bad = None
    for (s, j) in xp.delta_basis:
        vec = xp.view.ideal_vectors(s)[j]
        direct = Pi_of(xp.image(s, vec))
        via_pair = rep.pi_of_vec(vec, A.scalars) @ rep.v[s]
        if not np.allclose(direct, via_pair, atol=tol * 10):
            bad = f"round trip differs at tag {S.label(s)}"
            break
    roundtrip.add("pair composition reproduces the representation", bad is None, bad or "")
    return rep, roundtrip


# -- decomposition --------------------------------------------------------------


def _linear_map_from_pairs(pairs, sc, dim_out):
    """Well-defined linear map sending each source vector to its image.

    pairs is a list of (source_vec, image_vec).  Returns a callable or raises
    when the assignment does not respect linear dependencies.
    """
    sources = [p[0] for p in pairs]
    images = [p[1] for p in pairs]
    if not pairs:
        return lambda vec: (sc.zero,) * dim_out
    dim_in = len(sources[0])
    stacked = [tuple(s) + tuple(i) for s, i in zip(sources, images)]
    if len(rref(sources, sc)[0]) != len(rref(stacked, sc)[0]):
        raise StructureError("assignment is not a well-defined linear map")
    space = Subspace(sources, sc, ambient_dim=dim_in)
    chosen = []
    chosen_images = []
    rows, pivots = [], []
    for s_vec, i_vec in pairs:
        red = reduce_mod(rows, pivots, s_vec, sc)
        if not vec_is_zero(red, sc):
            chosen.append(s_vec)
            chosen_images.append(i_vec)
            rows, pivots = rref(chosen, sc)

    def apply(vec):
        coeffs = solve_in_span(chosen, vec, sc)
        if coeffs is None:
            raise InputError("vector outside the map's domain span")
        out = [sc.zero] * dim_out
        for c, img in zip(coeffs, chosen_images):
            if not sc.is_zero(c):
                for k in range(dim_out):
                    out[k] = out[k] + c * img[k]
        return tuple(out)

    return apply


def _restrict_busby(action, subset):
    sub, embed = restrict(action.semigroup, subset)
    back = {x: k for k, x in enumerate(embed)}
    ideals = [action.ideals[x] for x in embed]
    autos = [action.autos[x] for x in embed]
    cocycle = [[action.cocycle[x][y] for y in embed] for x in embed]
    rebuilt = BusbySmithAction(action.algebra, sub, ideals, autos, cocycle)
    return rebuilt, embed, back


def decompose_busby(action, subsemigroup, section=None):
    """Iterate the crossed product through a normal Clifford subsemigroup.

    Builds the crossed product over the subsemigroup, transports the action
    to it along an order-preserving cross-section of the quotient, verifies
    the induced twisted-action axioms, and certifies the isomorphism between
    the direct and iterated quotients.  Refuses (with the search diagnosis)
    when no order-preserving cross-section exists.
    """
    T = action.semigroup
    A = action.algebra
    sc = A.scalars
    report = Report("iterated crossed-product decomposition")

    nc = is_normal_clifford(T, subsemigroup)
    report.add("subsemigroup is normal Clifford", nc.passed)
    if not nc.passed:
        return report
    cong = congruence_from_normal_clifford(T, subsemigroup)
    if section is None:
        section, diagnosis = find_order_preserving(T, cong)
        if section is None:
            raise VerificationRefusal(
                "no order-preserving cross-section exists; decomposition refused",
                report=diagnosis,
            )
    check = is_order_preserving(T, cong, section)
    report.add("cross-section order-preserving", check.passed)
    if not check.passed:
        return report
    Q, proj = quotient(T, cong)

    base_check = verify_busby_smith(action)
    report.add("base action verified", base_check.passed)
    if not base_check.passed:
        return report

    direct = crossed_product(action, verified=base_check)
    restricted, embed, back = _restrict_busby(action, subsemigroup)
    restricted_check = verify_busby_smith(restricted)
    report.add("restricted action verified", restricted_check.passed)
    B_xp = crossed_product(restricted, verified=restricted_check)
    B = B_xp.quotient

    L_T = direct.pre_quotient
    view_T = direct.view

    def unit_delta_vec(t):
        return direct.delta_vec(t, view_T.identity_vec(t))

    def sub_to_B(l_vec):
        """L(T) vector supported on subsemigroup tags -> quotient coordinates in B."""
        out = [sc.zero] * B_xp.pre_quotient.dim
        for idx, c in enumerate(l_vec):
            if sc.is_zero(c):
                continue
            t, j = direct.delta_basis[idx]
            if t not in back:
                raise StructureError("transport left the subsemigroup tags")
            out[B_xp.delta_index[(back[t], j)]] = c
        return B_xp.project(tuple(out))

    # spanning data for the iterated ideals
    span_sources = {}
    for q in range(Q.size):
        top = T.range_projection(section[q])
        sources = []
        for k_sub, k in enumerate(embed):
            if not T.leq(T.range_projection(k), top):
                continue
            for j in range(len(restricted.ideals[k_sub].indices)):
                vec_A = B_xp.view.ideal_vectors(k_sub)[j]
                b_coords = B_xp.image(k_sub, vec_A)
                sources.append(((k, j), b_coords))
        span_sources[q] = sources

    tilde_spaces = {
        q: Subspace([v for _, v in span_sources[q]], sc, ambient_dim=B.dim)
        for q in range(Q.size)
    }

    # transported maps: conjugation by the identity-tagged representative
    maps = {}
    well_defined = True
    for q in range(Q.size):
        c_q = section[q]
        g = unit_delta_vec(c_q)
        g_star = L_T.star_vec(g)
        pairs = []
        for (k, j), b_coords in span_sources[Q.inv(q)]:
            x = [sc.zero] * L_T.dim
            x[direct.delta_index[(k, j)]] = sc.one
            moved = L_T.mul_vec(L_T.mul_vec(g, tuple(x)), g_star)
            pairs.append((b_coords, sub_to_B(moved)))
        try:
            maps[q] = _linear_map_from_pairs(pairs, sc, B.dim)
        except StructureError:
            well_defined = False
            break
    report.add("transported maps are well-defined", well_defined)
    if not well_defined:
        return report

    def tilde_cocycle(q, r):
        c_q, c_r, c_qr = section[q], section[r], section[Q.mul(q, r)]
        z = L_T.mul_vec(
            L_T.mul_vec(unit_delta_vec(c_q), unit_delta_vec(c_r)),
            L_T.star_vec(unit_delta_vec(c_qr)),
        )
        return sub_to_B(z)

    cocycle_cache = {}

    def cocycle_fn(q, r):
        if (q, r) not in cocycle_cache:
            cocycle_cache[(q, r)] = tilde_cocycle(q, r)
        return cocycle_cache[(q, r)]

    iterated_view = ActionView(
        B,
        Q,
        lambda q: tilde_spaces[q].basis,
        lambda q, vec: maps[q](vec),
        lambda q, vec: maps[Q.inv(q)](vec),
        cocycle_fn,
    )

    iterated_check = verify_busby_smith(iterated_view)
    report.add("iterated action satisfies the twisted axioms", iterated_check.passed)
    if not iterated_check.passed:
        for c in iterated_check.failures():
            report.add("iterated failure: " + c.name, False, c.detail)
        return report

    L_iter, delta_iter, index_iter = build_convolution(iterated_view, check=False)
    rels = order_relation_vectors(iterated_view, delta_iter, index_iter)
    iterated = CrossedProductAlgebra(
        iterated_view, rels, "order", provenance="iterated"
    )

    report.add(
        "direct and iterated quotient dimensions agree",
        direct.quotient.dim == iterated.quotient.dim,
        f"direct {direct.quotient.dim}, iterated {iterated.quotient.dim}",
    )

    # explicit candidate map from the direct convolution algebra
    images = []
    for (t, j) in direct.delta_basis:
        vec_A = view_T.ideal_vectors(t)[j]
        q = proj[t]
        x = direct.delta_vec(t, vec_A)
        z = L_T.mul_vec(x, L_T.star_vec(unit_delta_vec(section[q])))
        b_coords = sub_to_B(z)
        images.append(iterated.image(q, b_coords))
    iso = verify_explicit_iso(
        images, direct.pre_quotient, direct.relation_space, iterated.quotient
    )
    report.add("explicit isomorphism certified", iso.passed)
    for c in iso.checks:
        report.add("iso: " + c.name, c.passed, c.detail)
    report.direct = direct
    report.iterated = iterated
    report.sub_product = B_xp
    return report


def decompose_green(green, middle):
    """Iterate a twist-map crossed product through an intermediate subsemigroup.

    The intermediate subsemigroup must be normal Clifford and contain the
    twist's subsemigroup.  The iterated data lives on the crossed product
    over the intermediate subsemigroup with subspace ideals; its axioms are
    verified by the same clause checks, and the natural candidate map is
    certified as an isomorphism.
    """
    S = green.semigroup
    A = green.algebra
    sc = A.scalars
    report = Report("iterated twist-map decomposition")

    base_check = verify_green(green)
    report.add("base action verified", base_check.passed)
    if not base_check.passed:
        return report
    nc = is_normal_clifford(S, middle)
    report.add("intermediate subsemigroup is normal Clifford", nc.passed)
    contains = set(green.normal) <= set(middle)
    report.add("intermediate contains the twist subsemigroup", contains)
    if not (nc.passed and contains):
        return report

    direct = green_crossed_product(green, verified=base_check)
    restricted, embed = green.restricted(middle)
    restricted_check = verify_green(restricted)
    report.add("restricted action verified", restricted_check.passed)
    B_xp = green_crossed_product(restricted, verified=restricted_check)
    B = B_xp.quotient
    back = {x: k for k, x in enumerate(embed)}

    L_S = direct.pre_quotient
    view_S = direct.view

    def sub_to_B(l_vec):
        out = [sc.zero] * B_xp.pre_quotient.dim
        for idx, c in enumerate(l_vec):
            if sc.is_zero(c):
                continue
            t, j = direct.delta_basis[idx]
            if t not in back:
                raise StructureError("transport left the intermediate tags")
            out[B_xp.delta_index[(back[t], j)]] = c
        return B_xp.project(tuple(out))

    span_sources = {}
    for s in S.elements():
        top = S.range_projection(s)
        sources = []
        for k_sub, k in enumerate(embed):
            if not S.leq(S.range_projection(k), top):
                continue
            for j in range(len(restricted.ideals[k_sub].indices)):
                vec_A = B_xp.view.ideal_vectors(k_sub)[j]
                sources.append(((k, j), B_xp.image(k_sub, vec_A)))
        span_sources[s] = sources
    tilde_spaces = {
        s: Subspace([v for _, v in span_sources[s]], sc, ambient_dim=B.dim)
        for s in S.elements()
    }

    maps = {}
    well_defined = True
    for s in S.elements():
        pairs = []
        for (k, j), b_coords in span_sources[S.inv(s)]:
            vec_A = green.ideals[k].algebra.basis_vec(
                green.ideals[k].indices[j]
            )
            moved_A = green.autos[s].apply_vec(vec_A)
            k2 = S.mul_all(s, k, S.inv(s))
            if k2 not in back:
                raise StructureError("conjugation left the intermediate subsemigroup")
            target = sub_to_B(direct.delta_vec(k2, moved_A))
            pairs.append((b_coords, target))
        try:
            maps[s] = _linear_map_from_pairs(pairs, sc, B.dim)
        except StructureError:
            well_defined = False
            break
    report.add("transported maps are well-defined", well_defined)
    if not well_defined:
        return report

    iterated_view = ActionView(
        B,
        S,
        lambda s: tilde_spaces[s].basis,
        lambda s, vec: maps[s](vec),
        lambda s, vec: maps[S.inv(s)](vec),
        None,
    )

    tilde_twist = {}
    for k_sub, k in enumerate(embed):
        one = restricted.ideals[k_sub].identity()
        if one is None:
            raise StructureError("ideal has no identity")
        tilde_twist[k] = B_xp.image(k_sub, one.coords)

    iterated_check = verify_green(
        None, view=iterated_view, normal=tuple(embed), twist=tilde_twist
    )
    report.add("iterated action satisfies the twist-map axioms", iterated_check.passed)
    if not iterated_check.passed:
        for c in iterated_check.failures():
            report.add("iterated failure: " + c.name, False, c.detail)
        return report

    # conjugation by the identity-tagged element agrees with the transported map
    bad = None
    for k_sub, k in enumerate(embed):
        m_k = tilde_twist[k]
        m_k_star = B.star_vec(m_k)
        for vec in tilde_spaces[S.inv(k)].basis:
            lhs = maps[k](vec)
            rhs = B.mul_vec(B.mul_vec(m_k, vec), m_k_star)
            if not vec_is_zero(vec_sub(lhs, rhs), sc):
                bad = f"disagreement at {S.label(k)}"
                break
        if bad:
            break
    report.add(
        "transported maps realized by internal conjugation on the subsemigroup",
        bad is None,
        bad or "",
    )

    L_iter, delta_iter, index_iter = build_convolution(iterated_view, check=False)
    rels = order_relation_vectors(iterated_view, delta_iter, index_iter)
    rels += twist_relation_vectors(
        iterated_view, tuple(embed), tilde_twist, delta_iter, index_iter
    )
    iterated = CrossedProductAlgebra(
        iterated_view, rels, "order+twist", provenance="iterated"
    )

    report.add(
        "direct and iterated quotient dimensions agree",
        direct.quotient.dim == iterated.quotient.dim,
        f"direct {direct.quotient.dim}, iterated {iterated.quotient.dim}",
    )

    images = []
    for (s, j) in direct.delta_basis:
        vec_A = view_S.ideal_vectors(s)[j]
        f = S.range_projection(s)
        if f not in back:
            raise StructureError("range projection outside the intermediate subsemigroup")
        b_coords = sub_to_B(direct.delta_vec(f, vec_A))
        images.append(iterated.image(s, b_coords))
    iso = verify_explicit_iso(
        images, direct.pre_quotient, direct.relation_space, iterated.quotient
    )
    report.add("explicit isomorphism certified", iso.passed)
    for c in iso.checks:
        report.add("iso: " + c.name, c.passed, c.detail)
    report.direct = direct
    report.iterated = iterated
    report.sub_product = B_xp
    return report


# -- whole-semigroup dimension statements ---------------------------------------


def semigroup_cstar_reports(S, N, section=None):
    """Dimension statements tying semigroup algebras to crossed products.

    Four statements are evaluated: the canonical crossed product over the
    subsemigroup algebra recovers the full semigroup algebra (twist-map and
    cross-section forms), and the maximal-group-image variants over the
    subsemigroup's group image.
    """
    from .actions import action_from_cross_section, green_canonical, green_to_busby

    report = Report("semigroup algebra dimension statements")
    A_S = semigroup_algebra(S)
    cert = cstar_dimension(A_S)
    report.add(
        "full semigroup algebra is certified semisimple",
        cert.certified and cert.radical_dim == 0,
        f"dim {cert.value}",
    )
    full_dim = S.size

    green = green_canonical(S, N)
    gxp = green_crossed_product(green)
    report.add(
        "twist-map crossed product recovers the semigroup algebra",
        gxp.quotient.dim == full_dim,
        f"quotient {gxp.quotient.dim}, target {full_dim}",
    )

    sub, embed = restrict(S, N)
    G_S, _ = max_group_image(S)
    G_N, proj_N = max_group_image(sub)
    back = {x: k for k, x in enumerate(embed)}

    AG = semigroup_algebra(G_N)
    from .fdalgebra import BasisIdeal, PartialStarAutomorphism

    full_ideal = BasisIdeal(AG, range(AG.dim), check=False)
    ideals = [full_ideal for _ in S.elements()]
    autos = []
    for s in S.elements():
        images = []
        for pos in range(AG.dim):
            k = embed[[i for i, c in enumerate(proj_N) if c == pos][0]]
            conj = S.mul_all(s, k, S.inv(s))
            images.append(AG.basis_vec(proj_N[back[conj]]))
        autos.append(PartialStarAutomorphism(full_ideal, full_ideal, images, check=False))
    twist = {n: AG.basis_element(proj_N[back[n]]) for n in N}
    green_g = GreenTwistedAction(AG, S, tuple(sorted(N)), ideals, autos, twist)
    gxp2 = green_crossed_product(green_g)
    report.add(
        "group-image twist-map product recovers the group-image algebra",
        gxp2.quotient.dim == G_S.size,
        f"quotient {gxp2.quotient.dim}, target {G_S.size}",
    )

    cong = congruence_from_normal_clifford(S, N)
    if section is None:
        section, _diag = find_order_preserving(S, cong)
    if section is None:
        report.add(
            "cross-section statements",
            True,
            "skipped: no order-preserving cross-section exists",
        )
        return report

    act = action_from_cross_section(S, tuple(sorted(N)), section, cong)
    xp = crossed_product(act)
    images, target = cross_section_iso(S, tuple(sorted(N)), section, cong, xp)
    iso = verify_explicit_iso(images, xp.pre_quotient, xp.relation_space, target)
    report.add(
        "cross-section crossed product recovers the semigroup algebra",
        xp.quotient.dim == full_dim and iso.passed,
        f"quotient {xp.quotient.dim}, target {full_dim}, iso {'ok' if iso.passed else 'failed'}",
    )

    busby_g = green_to_busby(green_g, section, cong)
    gxp3 = crossed_product(busby_g)
    report.add(
        "group-image cross-section product recovers the group-image algebra",
        gxp3.quotient.dim == G_S.size,
        f"quotient {gxp3.quotient.dim}, target {G_S.size}",
    )
    return report
