"""Finite-dimensional star-algebras by structure constants.

An algebra is a basis with a sparse structure tensor and an involution table.
Ideals are spans of basis subsets, and partial star-automorphisms carry
explicit images of the domain basis.  Scalars come from either backend in
:mod:`scalars`; every check is exact on the exact backend and tolerance-based
on floats.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InputError, NotClosedError, StructureError
from .linalg import Subspace, vec_add, vec_is_zero, vec_scale, vec_sub
from .scalars import EXACT, float_scalars


class FdStarAlgebra:

    def __init__(self, dim, mul_entries, star_entries, labels=None, scalars=EXACT, check=True):
        """mul_entries[i][j] and star_entries[i] are sparse (index, coeff) lists."""
        if dim <= 0:
            raise InputError("dimension must be positive")
        self.dim = dim
        self.scalars = scalars
        self.labels = tuple(labels) if labels is not None else tuple(
            f"b{i}" for i in range(dim)
        )
        self._mul = tuple(
            tuple(tuple((int(k), scalars.coerce(c)) for k, c in mul_entries[i][j]) for j in range(dim))
            for i in range(dim)
        )
        self._star = tuple(
            tuple((int(k), scalars.coerce(c)) for k, c in star_entries[i]) for i in range(dim)
        )
        self._unit = None
        self._unit_known = False
        if check:
            rep = self.check_axioms()
            if not rep.passed:
                raise StructureError(
                    "structure constants violate the star-algebra axioms: "
                    + "; ".join(c.name + (" " + c.detail if c.detail else "") for c in rep.failures())
                )

    # -- vector arithmetic ---------------------------------------------------

    def zero_vec(self):
        return (self.scalars.zero,) * self.dim

    def basis_vec(self, i):
        return linalg.unit_vec(self.dim, i, self.scalars)

    def mul_basis(self, i, j):
        return self._mul[i][j]

    def mul_vec(self, u, v):
        # skip exact zeros only; dropping small floats here would corrupt sums
        sc = self.scalars
        out = [sc.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            row = self._mul[i]
            for j, b in enumerate(v):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j]:
                    out[k] = out[k] + ab * c
        return tuple(out)

    def star_vec(self, u):
        sc = self.scalars
        out = [sc.zero] * self.dim
        for i, a in enumerate(u):
            if not a:
                continue
            ca = sc.conj(a)
            for k, c in self._star[i]:
                out[k] = out[k] + ca * c
        return tuple(out)

    def support(self, u):
        return frozenset(i for i, a in enumerate(u) if not self.scalars.is_zero(a))

    def element(self, coords):
        return AlgebraElement(self, tuple(self.scalars.coerce(c) for c in coords))

    def basis_element(self, i):
        return AlgebraElement(self, self.basis_vec(i))

    def zero(self):
        return AlgebraElement(self, self.zero_vec())

    def one(self):
        """Multiplicative unit, or None if the algebra has none."""
        if not self._unit_known:
            self._unit = span_identity(self, [self.basis_vec(i) for i in range(self.dim)])
            self._unit_known = True
        return None if self._unit is None else AlgebraElement(self, self._unit)

    def is_unital(self):
        return self.one() is not None

    # -- structure checks ----------------------------------------------------

    def check_axioms(self):
        from .report import Report

        rep = Report(f"star-algebra axioms (dim {self.dim})")
        bad = None
        for i in range(self.dim):
            bi = self.basis_vec(i)
            for j in range(self.dim):
                bj = self.basis_vec(j)
                ij = self.mul_vec(bi, bj)
                for k in range(self.dim):
                    bk = self.basis_vec(k)
                    left = self.mul_vec(ij, bk)
                    right = self.mul_vec(bi, self.mul_vec(bj, bk))
                    if not vec_is_zero(vec_sub(left, right), self.scalars):
                        bad = (i, j, k)
                        break
                if bad:
                    break
            if bad:
                break
        rep.add(
            "associativity on basis triples",
            bad is None,
            "" if bad is None else f"triple {tuple(self.labels[x] for x in bad)}",
        )
        bad = None
        for i in range(self.dim):
            si = self.star_vec(self.basis_vec(i))
            if not vec_is_zero(vec_sub(self.star_vec(si), self.basis_vec(i)), self.scalars):
                bad = f"star not involutive at {self.labels[i]}"
                break
        rep.add("star involutive", bad is None, bad or "")
        bad = None
        for i in range(self.dim):
            bi = self.basis_vec(i)
            for j in range(self.dim):
                bj = self.basis_vec(j)
                left = self.star_vec(self.mul_vec(bi, bj))
                right = self.mul_vec(self.star_vec(bj), self.star_vec(bi))
                if not vec_is_zero(vec_sub(left, right), self.scalars):
                    bad = f"star({self.labels[i]} {self.labels[j]}) mismatch"
                    break
            if bad:
                break
        rep.add("star anti-multiplicative", bad is None, bad or "")
        return rep

    def to_float(self, tol=1e-9):
        sc = float_scalars(tol)
        mul = [
            [[(k, complex(self.scalars.to_complex(c))) for k, c in self._mul[i][j]] for j in range(self.dim)]
            for i in range(self.dim)
        ]
        star = [
            [(k, complex(self.scalars.to_complex(c))) for k, c in self._star[i]]
            for i in range(self.dim)
        ]
        out = FdStarAlgebra(self.dim, mul, star, labels=self.labels, scalars=sc, check=False)
        for attr in ("semigroup", "element_of_basis", "basis_of_element"):
            if hasattr(self, attr):
                setattr(out, attr, getattr(self, attr))
        return out

    def left_mult_matrix(self, vec):
        """Matrix of x -> vec * x in basis coordinates (rows index outputs)."""
        cols = [self.mul_vec(vec, self.basis_vec(j)) for j in range(self.dim)]
        return [tuple(cols[j][k] for j in range(self.dim)) for k in range(self.dim)]

    def __repr__(self):
        kind = "exact" if self.scalars.exact else "float"
        return f"FdStarAlgebra(dim={self.dim}, {kind})"


class AlgebraElement:

    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        if len(coords) != algebra.dim:
            raise InputError("coefficient vector has the wrong length")
        self.algebra = algebra
        self.coords = tuple(coords)

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, vec_add(self.coords, other.coords))

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.algebra, vec_sub(self.coords, other.coords))

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(
                self.algebra, self.algebra.mul_vec(self.coords, other.coords)
            )
        c = self.algebra.scalars.coerce(other)
        return AlgebraElement(self.algebra, vec_scale(c, self.coords))

    def __rmul__(self, other):
        c = self.algebra.scalars.coerce(other)
        return AlgebraElement(self.algebra, vec_scale(c, self.coords))

    def __neg__(self):
        return AlgebraElement(self.algebra, vec_scale(-self.algebra.scalars.one, self.coords))

    def star(self):
        return AlgebraElement(self.algebra, self.algebra.star_vec(self.coords))

    def is_zero(self):
        return vec_is_zero(self.coords, self.algebra.scalars)

    def support(self):
        return self.algebra.support(self.coords)

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement) or other.algebra is not self.algebra:
            return NotImplemented
        return vec_is_zero(vec_sub(self.coords, other.coords), self.algebra.scalars)

    def __repr__(self):
        sc = self.algebra.scalars
        parts = [
            f"{a!r}*{self.algebra.labels[i]}"
            for i, a in enumerate(self.coords)
            if not sc.is_zero(a)
        ]
        return " + ".join(parts) if parts else "0"

    def _check(self, other):
        if other.algebra is not self.algebra:
            raise InputError("elements live in different algebras")


class BasisIdeal:
    """Span of a set of basis indices, validated as a two-sided star ideal."""

    def __init__(self, algebra, indices, check=True):
        self.algebra = algebra
        self.indices = tuple(sorted(set(int(i) for i in indices)))
        for i in self.indices:
            if not 0 <= i < algebra.dim:
                raise InputError(f"basis index {i} out of range")
        if check:
            witness = self._violation()
            if witness:
                raise StructureError(f"not a basis-aligned star ideal: {witness}")
        self._identity = None
        self._identity_known = False

    def _violation(self):
        A = self.algebra
        inside = set(self.indices)
        for i in self.indices:
            if not A.support(A.star_vec(A.basis_vec(i))) <= inside:
                return f"star({A.labels[i]}) leaves the span"
            for j in range(A.dim):
                if not A.support(A.mul_vec(A.basis_vec(i), A.basis_vec(j))) <= inside:
                    return f"{A.labels[i]} * {A.labels[j]} leaves the span"
                if not A.support(A.mul_vec(A.basis_vec(j), A.basis_vec(i))) <= inside:
                    return f"{A.labels[j]} * {A.labels[i]} leaves the span"
        return None

    @property
    def dim(self):
        return len(self.indices)

    def contains_vec(self, vec):
        return self.algebra.support(vec) <= set(self.indices)

    def contains(self, element):
        return self.contains_vec(element.coords)

    def basis_vectors(self):
        return [self.algebra.basis_vec(i) for i in self.indices]

    def identity(self):
        """Element acting as the unit on the span, or None."""
        if not self._identity_known:
            self._identity_known = True
            vec = span_identity(self.algebra, self.basis_vectors())
            self._identity = None if vec is None else AlgebraElement(self.algebra, vec)
        return self._identity

    def intersect(self, other):
        return BasisIdeal(
            self.algebra,
            set(self.indices) & set(other.indices),
            check=False,
        )

    def __eq__(self, other):
        return (
            isinstance(other, BasisIdeal)
            and self.algebra is other.algebra
            and self.indices == other.indices
        )

    def __le__(self, other):
        return set(self.indices) <= set(other.indices)

    def __hash__(self):
        return hash((id(self.algebra), self.indices))

    def __repr__(self):
        return f"BasisIdeal({[self.algebra.labels[i] for i in self.indices]})"


def ideal_identity(ideal):
    """The unit of the ideal's span; error when none exists."""
    u = ideal.identity()
    if u is None:
        raise StructureError("ideal span has no identity element")
    return u


def span_identity(algebra, vectors):
    """Identity of an arbitrary spanned subalgebra, as a vector, or None."""
    sc = algebra.scalars
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return algebra.zero_vec()
    space = Subspace(vectors, sc, ambient_dim=algebra.dim)
    basis = space.basis
    k = len(basis)
    # unknowns x_1..x_k with sum x_i basis_i acting as identity on each basis_j
    rows = []
    rhs = []
    for j, bj in enumerate(basis):
        left = [algebra.mul_vec(bi, bj) for bi in basis]
        right = [algebra.mul_vec(bj, bi) for bi in basis]
        for coord in range(algebra.dim):
            rows.append(tuple(left[i][coord] for i in range(k)))
            rhs.append(bj[coord])
            rows.append(tuple(right[i][coord] for i in range(k)))
            rhs.append(bj[coord])
    aug = [row + (r,) for row, r in zip(rows, rhs)]
    reduced, pivots = linalg.rref(aug, sc)
    coeffs = [sc.zero] * k
    for row, p in zip(reduced, pivots):
        if p == k:
            return None
        coeffs[p] = row[k]
    candidate = space.from_coords(coeffs)
    for bj in basis:
        if not vec_is_zero(vec_sub(algebra.mul_vec(candidate, bj), bj), sc):
            return None
        if not vec_is_zero(vec_sub(algebra.mul_vec(bj, candidate), bj), sc):
            return None
    return candidate


def is_unitary_multiplier(u, ideal):
    """u in span(ideal) with u u* = u* u = identity of the span."""
    if not ideal.contains(u):
        return False
    e = ideal.identity()
    if e is None:
        return False
    return u * u.star() == e and u.star() * u == e


class PartialStarAutomorphism:
    """Invertible star-map between two basis ideals, by images of the domain basis."""

    def __init__(self, domain, codomain, images, check=True):
        if domain.algebra is not codomain.algebra:
            raise InputError("domain and codomain live in different algebras")
        self.algebra = domain.algebra
        self.domain = domain
        self.codomain = codomain
        self.images = tuple(tuple(v) for v in images)
        if len(self.images) != domain.dim:
            raise InputError("need one image per domain basis vector")
        for v in self.images:
            if not codomain.contains_vec(v):
                raise StructureError("an image leaves the codomain span")
        if check:
            rep = self.check()
            if not rep.passed:
                raise StructureError(
                    "not a partial star-automorphism: "
                    + "; ".join(c.name for c in rep.failures())
                )

    def apply_vec(self, vec):
        A = self.algebra
        sc = A.scalars
        if not self.domain.contains_vec(vec):
            raise InputError("vector outside the automorphism's domain")
        out = [sc.zero] * A.dim
        for pos, idx in enumerate(self.domain.indices):
            c = vec[idx]
            if sc.is_zero(c):
                continue
            img = self.images[pos]
            for k in range(A.dim):
                out[k] = out[k] + c * img[k]
        return tuple(out)

    def apply(self, element):
        return AlgebraElement(self.algebra, self.apply_vec(element.coords))

    def matrix_on_coordinates(self):
        """Codomain-coordinate matrix (rows: codomain positions)."""
        rows = []
        for r, idx in enumerate(self.codomain.indices):
            rows.append(tuple(self.images[c][idx] for c in range(self.domain.dim)))
        return rows

    def inverse(self):
        sc = self.algebra.scalars
        m = self.matrix_on_coordinates()
        inv = linalg.mat_inverse(m, sc)
        if inv is None:
            raise StructureError("automorphism matrix is singular")
        images = []
        for pos, idx in enumerate(self.codomain.indices):
            col = [inv[r][pos] for r in range(len(inv))]
            vec = [sc.zero] * self.algebra.dim
            for r, didx in enumerate(self.domain.indices):
                vec[didx] = col[r]
            images.append(tuple(vec))
        return PartialStarAutomorphism(self.codomain, self.domain, images, check=False)

    def check(self):
        from .report import Report

        A = self.algebra
        sc = A.scalars
        rep = Report("partial star-automorphism")
        m = self.matrix_on_coordinates()
        square = self.domain.dim == self.codomain.dim
        invertible = square and linalg.mat_inverse(m, sc) is not None
        rep.add("bijective between the spans", invertible)
        bad = None
        for di in self.domain.indices:
            for dj in self.domain.indices:
                prod = A.mul_vec(A.basis_vec(di), A.basis_vec(dj))
                left = self.apply_vec(prod)
                right = A.mul_vec(
                    self.apply_vec(A.basis_vec(di)), self.apply_vec(A.basis_vec(dj))
                )
                if not vec_is_zero(vec_sub(left, right), sc):
                    bad = f"not multiplicative at ({A.labels[di]}, {A.labels[dj]})"
                    break
            if bad:
                break
        rep.add("multiplicative", bad is None, bad or "")
        bad = None
        for di in self.domain.indices:
            left = self.apply_vec(A.star_vec(A.basis_vec(di)))
            right = A.star_vec(self.apply_vec(A.basis_vec(di)))
            if not vec_is_zero(vec_sub(left, right), sc):
                bad = f"star not preserved at {A.labels[di]}"
                break
        rep.add("star-preserving", bad is None, bad or "")
        return rep

    def equals(self, other):
        if self.domain.indices != other.domain.indices:
            return False
        if self.codomain.indices != other.codomain.indices:
            return False
        sc = self.algebra.scalars
        return all(
            vec_is_zero(vec_sub(a, b), sc) for a, b in zip(self.images, other.images)
        )

    def __repr__(self):
        return (
            f"PartialStarAutomorphism(dom={list(self.domain.indices)}, "
            f"cod={list(self.codomain.indices)})"
        )


def identity_automorphism(ideal):
    return PartialStarAutomorphism(
        ideal,
        ideal,
        [ideal.algebra.basis_vec(i) for i in ideal.indices],
        check=False,
    )


def ad_automorphism(u, ideal):
    """Conjugation x -> u x u* as an automorphism of the ideal onto itself."""
    if not is_unitary_multiplier(u, ideal):
        raise InputError("conjugator is not a unitary multiplier of the ideal")
    A = ideal.algebra
    us = u.star()
    images = [
        A.mul_vec(A.mul_vec(u.coords, A.basis_vec(i)), us.coords)
        for i in ideal.indices
    ]
    return PartialStarAutomorphism(ideal, ideal, images, check=False)


def compose_autos(outer, inner):
    """outer after inner, with the usual composite domain.

    The composite domain is the preimage under inner of range(inner) meet
    dom(outer); a StructureError is raised when that preimage is not spanned
    by basis vectors.
    """
    if outer.algebra is not inner.algebra:
        raise InputError("automorphisms live in different algebras")
    A = outer.algebra
    middle = inner.codomain.intersect(outer.domain)
    mid_set = set(middle.indices)
    dom_positions = []
    for pos, d in enumerate(inner.domain.indices):
        if A.support(inner.images[pos]) <= mid_set:
            dom_positions.append(pos)
    if len(dom_positions) != len(middle.indices):
        raise StructureError(
            "composite domain is not spanned by basis vectors"
        )
    dom_idx = [inner.domain.indices[p] for p in dom_positions]
    images = [outer.apply_vec(inner.images[p]) for p in dom_positions]
    support = set()
    for v in images:
        support |= A.support(v)
    if len(support) != len(dom_idx):
        raise StructureError("composite range is not spanned by basis vectors")
    dom = BasisIdeal(A, dom_idx)
    cod = BasisIdeal(A, support)
    return PartialStarAutomorphism(dom, cod, images, check=False)


# -- constructors ------------------------------------------------------------


def semigroup_algebra(S, subset=None, scalars=EXACT):
    """Algebra spanned by (a product/star closed subset of) a semigroup."""
    if subset is None:
        subset = list(S.elements())
    subset = sorted(set(subset))
    pos = {x: k for k, x in enumerate(subset)}
    for a in subset:
        if S.star[a] not in pos:
            raise NotClosedError(f"subset not star-closed at {S.label(a)}", witness=(a,))
        for b in subset:
            if S.mul(a, b) not in pos:
                raise NotClosedError(
                    f"subset not product-closed at ({S.label(a)}, {S.label(b)})",
                    witness=(a, b),
                )
    dim = len(subset)
    mul = [
        [((pos[S.mul(a, b)], 1),) for b in subset]
        for a in subset
    ]
    star = [((pos[S.star[a]], 1),) for a in subset]
    A = FdStarAlgebra(
        dim,
        mul,
        star,
        labels=[S.label(a) for a in subset],
        scalars=scalars,
        check=False,
    )
    A.semigroup = S
    A.element_of_basis = tuple(subset)
    A.basis_of_element = pos
    return A


def group_algebra(G, scalars=EXACT):
    if not G.is_group():
        raise InputError("not a group")
    return semigroup_algebra(G, scalars=scalars)


def multimatrix_algebra(block_sizes, scalars=EXACT):
    """Direct sum of full matrix algebras, basis = matrix units."""
    basis = []
    for b, n in enumerate(block_sizes):
        if n < 1:
            raise InputError("block sizes must be positive")
        for p in range(n):
            for q in range(n):
                basis.append((b, p, q))
    index = {unit: k for k, unit in enumerate(basis)}
    dim = len(basis)
    mul = []
    for (b1, p1, q1) in basis:
        row = []
        for (b2, p2, q2) in basis:
            if b1 == b2 and q1 == p2:
                row.append(((index[(b1, p1, q2)], 1),))
            else:
                row.append(())
        mul.append(row)
    star = [((index[(b, q, p)], 1),) for (b, p, q) in basis]
    labels = [f"E{b}[{p},{q}]" for (b, p, q) in basis]
    A = FdStarAlgebra(dim, mul, star, labels=labels, scalars=scalars, check=False)
    A.matrix_blocks = tuple(block_sizes)
    A.matrix_units = tuple(basis)
    return A


# -- radical, trace form, dimension certification ----------------------------


def _left_mult_traces(A):
    """trace of left multiplication by each basis element."""
    sc = A.scalars
    traces = []
    for m in range(A.dim):
        t = sc.zero
        for j in range(A.dim):
            for k, c in A.mul_basis(m, j):
                if k == j:
                    t = t + c
        traces.append(t)
    return traces


def trace_of_left_mult(A, vec, traces=None):
    sc = A.scalars
    if traces is None:
        traces = _left_mult_traces(A)
    t = sc.zero
    for m, c in enumerate(vec):
        if not sc.is_zero(c):
            t = t + c * traces[m]
    return t


def radical_gram(A):
    """Symmetric matrix R[i][j] = trace of left multiplication by b_i b_j."""
    traces = _left_mult_traces(A)
    sc = A.scalars
    rows = []
    for i in range(A.dim):
        row = []
        for j in range(A.dim):
            t = sc.zero
            for k, c in A.mul_basis(i, j):
                t = t + c * traces[k]
            row.append(t)
        rows.append(tuple(row))
    return rows


def jacobson_radical(A):
    """Basis of the radical via the trace criterion (characteristic zero).

    The radical is the nullspace of the trace form of the left regular
    representation; star-closedness is asserted afterwards.
    """
    rows = radical_gram(A)
    basis = linalg.nullspace(rows, A.scalars)
    if basis:
        space = Subspace(basis, A.scalars, ambient_dim=A.dim)
        for v in basis:
            if not space.contains(A.star_vec(v)):
                raise StructureError("radical is not star-closed; data is inconsistent")
    return basis


def star_gram(A):
    """Hermitian matrix H[p][q] = trace of left multiplication by star(b_p) b_q."""
    traces = _left_mult_traces(A)
    rows = []
    for p in range(A.dim):
        sp = A.star_vec(A.basis_vec(p))
        row = []
        for q in range(A.dim):
            prod = A.mul_vec(sp, A.basis_vec(q))
            row.append(trace_of_left_mult(A, prod, traces))
        rows.append(tuple(row))
    return rows


@dataclass
class CstarDimension:
    value: int
    certified: bool
    radical_dim: int
    eigenvalues: tuple
    reason: str = ""


def cstar_dimension(A, tol=1e-9):
    """Dimension of the semisimple quotient, with a positivity certificate.

    Certified means the sesquilinear trace form is positive semidefinite and
    its kernel dimension matches the radical, so the quotient carries a
    faithful star-representation.  Ambiguous eigenvalues near the tolerance
    yield an uncertified (never wrong) verdict.
    """
    rad = jacobson_radical(A)
    rad_dim = len(rad)
    value = A.dim - rad_dim
    H = np.array(
        [[A.scalars.to_complex(x) for x in row] for row in star_gram(A)],
        dtype=complex,
    )
    if not np.allclose(H, H.conj().T, atol=max(tol, 1e-12)):
        return CstarDimension(value, False, rad_dim, (), "trace form is not Hermitian")
    eigs = np.linalg.eigvalsh(H)
    scale = max(1.0, float(np.max(np.abs(eigs))) if len(eigs) else 1.0)
    cut = tol * scale
    negatives = int(np.sum(eigs < -10 * cut))
    zeros = int(np.sum(np.abs(eigs) <= cut))
    ambiguous = int(np.sum((np.abs(eigs) > cut) & (np.abs(eigs) <= 10 * cut)))
    eig_tuple = tuple(float(e) for e in eigs)
    if negatives:
        return CstarDimension(
            value, False, rad_dim, eig_tuple, "trace form is not positive semidefinite"
        )
    if ambiguous:
        return CstarDimension(
            value, False, rad_dim, eig_tuple, "eigenvalues inside the ambiguity band"
        )
    if zeros != rad_dim:
        return CstarDimension(
            value, False, rad_dim, eig_tuple,
            f"form kernel dimension {zeros} differs from radical dimension {rad_dim}",
        )
    return CstarDimension(value, True, rad_dim, eig_tuple)
