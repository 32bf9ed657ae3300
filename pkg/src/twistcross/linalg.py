"""Row-reduction linear algebra generic over the scalar backends.

Vectors are tuples of scalars.  Everything here is small and dense; the
algebras in this package have dimensions in the tens, so clarity beats
asymptotics.
"""

from __future__ import annotations


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u):
    return tuple(c * a for a in u)


def vec_is_zero(u, sc):
    return all(sc.is_zero(a) for a in u)


def zero_vec(n, sc):
    return (sc.zero,) * n


def unit_vec(n, i, sc):
    return tuple(sc.one if j == i else sc.zero for j in range(n))


def rref(rows, sc):
    """Reduced row echelon form.

    Returns (reduced_rows, pivot_columns); zero rows are dropped.  Pivoting
    picks the largest entry under the backend's pivot_size, which keeps the
    float backend stable and the exact backend deterministic.
    """
    work = [list(r) for r in rows if not vec_is_zero(r, sc)]
    if not work:
        return [], []
    ncols = len(work[0])
    reduced = []
    pivots = []
    col = 0
    while work and col < ncols:
        best = max(range(len(work)), key=lambda i: sc.pivot_size(work[i][col]))
        if sc.is_zero(work[best][col]):
            col += 1
            continue
        row = work.pop(best)
        inv = sc.one / row[col]
        row = [inv * a for a in row]
        for other in work:
            c = other[col]
            if not sc.is_zero(c):
                for j in range(ncols):
                    other[j] = other[j] - c * row[j]
        for other in reduced:
            c = other[col]
            if not sc.is_zero(c):
                for j in range(ncols):
                    other[j] = other[j] - c * row[j]
        reduced.append(row)
        pivots.append(col)
        col += 1
        work = [r for r in work if not vec_is_zero(r, sc)]
    order = sorted(range(len(pivots)), key=lambda i: pivots[i])
    return [tuple(reduced[i]) for i in order], [pivots[i] for i in order]


def rank(rows, sc):
    return len(rref(rows, sc)[0])


def reduce_mod(reduced_rows, pivots, vec, sc):
    """Canonical representative of vec modulo the row span."""
    out = list(vec)
    for row, p in zip(reduced_rows, pivots):
        c = out[p]
        if not sc.is_zero(c):
            for j in range(len(out)):
                out[j] = out[j] - c * row[j]
    return tuple(out)


def solve_in_span(basis, target, sc):
    """Coefficients x with sum x_i basis_i = target, or None if unsolvable."""
    if not basis:
        return () if vec_is_zero(target, sc) else None
    n = len(target)
    k = len(basis)
    # augmented system over the transpose: columns are basis vectors
    rows = [[basis[i][j] for i in range(k)] + [target[j]] for j in range(n)]
    reduced, pivots = rref(rows, sc)
    coeffs = [sc.zero] * k
    for row, p in zip(reduced, pivots):
        if p == k:
            return None  # inconsistent
        coeffs[p] = row[k]
    # verify (guards float round-off and rank-deficient bases)
    residual = list(target)
    for i, c in enumerate(coeffs):
        if not sc.is_zero(c):
            for j in range(n):
                residual[j] = residual[j] - c * basis[i][j]
    if not vec_is_zero(tuple(residual), sc):
        return None
    return tuple(coeffs)


def nullspace(rows, sc):
    """Basis of {x : M x = 0} for the matrix with the given rows."""
    if not rows:
        return []
    ncols = len(rows[0])
    reduced, pivots = rref(rows, sc)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        v = [sc.zero] * ncols
        v[f] = sc.one
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        basis.append(tuple(v))
    return basis


def mat_mul_vec(rows, vec, sc):
    return tuple(sum((r[j] * vec[j] for j in range(len(vec))), sc.zero) for r in rows)


def mat_inverse(rows, sc):
    """Inverse of a square matrix given by rows; None if singular."""
    n = len(rows)
    aug = [list(rows[i]) + [sc.one if j == i else sc.zero for j in range(n)] for i in range(n)]
    reduced, pivots = rref(aug, sc)
    if pivots != list(range(n)):
        return None
    return [tuple(r[n:]) for r in reduced]


class Subspace:
    """Immutable span of a list of vectors with membership and coordinates."""

    def __init__(self, vectors, sc, ambient_dim=None):
        vectors = [tuple(v) for v in vectors]
        if vectors:
            ambient_dim = len(vectors[0])
        elif ambient_dim is None:
            raise ValueError("empty subspace needs an explicit ambient dimension")
        self.sc = sc
        self.ambient_dim = ambient_dim
        self.reduced, self.pivots = rref(vectors, sc)
        # an independent subset of the original vectors, kept in input order
        self.basis = []
        rows, pivs = [], []
        for v in vectors:
            if not vec_is_zero(reduce_mod(rows, pivs, v, sc), sc):
                self.basis.append(v)
                rows, pivs = rref(self.basis, sc)

    @property
    def dim(self):
        return len(self.reduced)

    def contains(self, vec):
        return vec_is_zero(reduce_mod(self.reduced, self.pivots, vec, self.sc), self.sc)

    def contains_all(self, vectors):
        return all(self.contains(v) for v in vectors)

    def reduce(self, vec):
        return reduce_mod(self.reduced, self.pivots, vec, self.sc)

    def coords(self, vec):
        """Coordinates of vec in self.basis, or None if outside the span."""
        return solve_in_span(self.basis, vec, self.sc)

    def from_coords(self, coeffs):
        out = [self.sc.zero] * self.ambient_dim
        for c, b in zip(coeffs, self.basis):
            if not self.sc.is_zero(c):
                for j in range(self.ambient_dim):
                    out[j] = out[j] + c * b[j]
        return tuple(out)

    def equals(self, other):
        return (
            self.dim == other.dim
            and self.contains_all(other.basis)
            and other.contains_all(self.basis)
        )
