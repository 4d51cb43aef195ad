"""Exact integer matrix algebra and finitely generated abelian groups.

Matrices are 2-dimensional numpy arrays with ``dtype=object`` holding Python
ints, so all arithmetic is arbitrary precision.  Everything here reduces to
Smith normal form: ``smith_normal_form`` produces unimodular U, V (and their
inverses) with ``U @ M @ V`` diagonal with a divisibility chain, and the rest
of the module (solving, kernels, cokernels, presented groups, subquotients)
is built on top of it.

Values are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DimensionError, NotInSubgroupError, SubgroupContainmentError

__all__ = [
    "intmat",
    "intvec",
    "zeros",
    "eye",
    "hstack",
    "mat_eq",
    "SmithForm",
    "smith_normal_form",
    "matrix_rank",
    "solve",
    "kernel_basis",
    "Kernel",
    "kernel",
    "cokernel",
    "FgAbelianGroup",
    "GroupHom",
    "Subquotient",
    "subquotient",
    "induced_hom",
]


# ---------------------------------------------------------------------------
# matrix helpers


def intmat(data, rows=None, cols=None):
    """Build an object-dtype integer matrix; shape hints cover the empty cases."""
    if isinstance(data, np.ndarray) and data.dtype == object and data.ndim == 2:
        a = data.copy()
    else:
        data = [[int(x) for x in row] for row in data]
        if not data or not any(len(r) for r in data):
            r = rows if rows is not None else len(data)
            c = cols if cols is not None else 0
            return np.zeros((r, c), dtype=object) + 0
        a = np.array(data, dtype=object)
        if a.ndim != 2:
            raise DimensionError("matrix data is not rectangular")
    for i in range(a.shape[0]):
        for j in range(a.shape[1]):
            a[i, j] = int(a[i, j])
    return a


def intvec(data, length=None):
    if isinstance(data, np.ndarray):
        data = data.tolist()
    vals = [int(x) for x in data]
    if not vals:
        return np.zeros(length if length is not None else 0, dtype=object) + 0
    return np.array(vals, dtype=object)


def zeros(r, c):
    return np.zeros((r, c), dtype=object) + 0


def eye(n):
    m = zeros(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def hstack(blocks):
    blocks = list(blocks)
    if not blocks:
        raise DimensionError("hstack of no blocks")
    return np.hstack(blocks)


def mat_eq(a, b):
    return a.shape == b.shape and all(
        a[i, j] == b[i, j] for i in range(a.shape[0]) for j in range(a.shape[1])
    )


def _is_zero(a):
    return all(x == 0 for x in a.flat)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithForm:
    """U @ M @ V == D with U, V unimodular and D diagonal, d1 | d2 | ... >= 0."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def diagonal(self):
        m, n = self.D.shape
        return [int(self.D[i, i]) for i in range(min(m, n))]

    @property
    def rank(self):
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(M):
    """Diagonalize an integer matrix by unimodular row and column operations.

    Returns a :class:`SmithForm`.  The nonzero diagonal entries are positive
    and each divides the next; U, V have determinant +-1 and their exact
    inverses are tracked alongside.
    """
    A = intmat(M)
    m, n = A.shape
    U, Ui = eye(m), eye(m)
    V, Vi = eye(n), eye(n)

    def row_add(i, j, q):  # row_i += q * row_j
        A[i, :] = A[i, :] + q * A[j, :]
        U[i, :] = U[i, :] + q * U[j, :]
        Ui[:, j] = Ui[:, j] - q * Ui[:, i]

    def row_swap(i, j):
        A[[i, j], :] = A[[j, i], :]
        U[[i, j], :] = U[[j, i], :]
        Ui[:, [i, j]] = Ui[:, [j, i]]

    def row_neg(i):
        A[i, :] = -A[i, :]
        U[i, :] = -U[i, :]
        Ui[:, i] = -Ui[:, i]

    def col_add(i, j, q):  # col_i += q * col_j
        A[:, i] = A[:, i] + q * A[:, j]
        V[:, i] = V[:, i] + q * V[:, j]
        Vi[j, :] = Vi[j, :] - q * Vi[i, :]

    def col_swap(i, j):
        A[:, [i, j]] = A[:, [j, i]]
        V[:, [i, j]] = V[:, [j, i]]
        Vi[[i, j], :] = Vi[[j, i], :]

    def pivot_position(t):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(A[i, j])
                if v and (best is None or v < best[0]):
                    best = (v, i, j)
        return best

    t = 0
    while t < min(m, n):
        found = pivot_position(t)
        if found is None:
            break
        _, pi, pj = found
        if pi != t:
            row_swap(pi, t)
        if pj != t:
            col_swap(pj, t)

        while True:
            dirty = False
            for i in range(t + 1, m):
                if A[i, t] != 0:
                    q = A[i, t] // A[t, t]
                    row_add(i, t, -q)
                    if A[i, t] != 0:  # remainder becomes the smaller pivot
                        row_swap(i, t)
                        dirty = True
            for j in range(t + 1, n):
                if A[t, j] != 0:
                    q = A[t, j] // A[t, t]
                    col_add(j, t, -q)
                    if A[t, j] != 0:
                        col_swap(j, t)
                        dirty = True
            if dirty:
                continue
            # enforce the divisibility chain: fold in any non-multiple
            fold = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i, j] % A[t, t] != 0:
                        fold = i
                        break
                if fold is not None:
                    break
            if fold is None:
                break
            row_add(t, fold, 1)

        if A[t, t] < 0:
            row_neg(t)
        t += 1

    return SmithForm(U=U, D=A, V=V, Uinv=Ui, Vinv=Vi)


def matrix_rank(M):
    return smith_normal_form(M).rank


def solve(M, b):
    """One integer solution x of M @ x == b, or None when unsolvable over Z.

    Unsolvability is decided exactly: in Smith coordinates the system splits
    into congruences c_i = d_i * y_i, so either some d_i fails to divide c_i
    or a zero row meets a nonzero c_i.
    """
    A = intmat(M)
    m, n = A.shape
    b = intvec(b, length=m)
    if b.shape[0] != m:
        raise DimensionError(f"solve: got rhs of length {b.shape[0]}, expected {m}")
    sf = smith_normal_form(A)
    c = sf.U.dot(b)
    y = np.zeros(n, dtype=object) + 0
    diag = sf.diagonal
    for i in range(m):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    return sf.V.dot(y)


def kernel_basis(M):
    """Columns form a basis of the (saturated) integer kernel lattice of M."""
    A = intmat(M)
    sf = smith_normal_form(A)
    r = sf.rank
    return sf.V[:, r:].copy()


@dataclass(frozen=True)
class Kernel:
    """Kernel of an integer matrix as a free group plus its inclusion."""

    group: "FgAbelianGroup"
    inclusion: np.ndarray  # cols(M) x rank, columns span ker(M)


def kernel(M):
    B = kernel_basis(M)
    return Kernel(group=FgAbelianGroup(B.shape[1]), inclusion=B)


def cokernel(M):
    """Z^rows / column span of M; the group's ``reduce`` is the projection."""
    A = intmat(M)
    return FgAbelianGroup(A.shape[0], A)


# ---------------------------------------------------------------------------
# finitely generated abelian groups


class FgAbelianGroup:
    """Z^ngens modulo the column span of a relation matrix.

    Normal-form coordinates list the torsion slots first (in invariant-factor
    order, entries taken mod d_i) followed by the free slots.  ``reduce`` maps
    ambient coordinates to normal form, ``section`` picks a representative,
    and reduce(section(x)) == x for every normal form x.
    """

    def __init__(self, ngens, rels=None):
        self.ngens = int(ngens)
        if rels is None:
            rels = zeros(self.ngens, 0)
        self.rels = intmat(rels)
        if self.rels.shape[0] != self.ngens:
            raise DimensionError(
                f"relation matrix has {self.rels.shape[0]} rows, expected {ngens}"
            )

    @cached_property
    def _snf(self):
        return smith_normal_form(self.rels)

    @cached_property
    def _diag_full(self):
        d = self._snf.diagonal
        return [d[i] if i < len(d) else 0 for i in range(self.ngens)]

    @cached_property
    def _torsion_pos(self):
        return [i for i, d in enumerate(self._diag_full) if d >= 2]

    @cached_property
    def _free_pos(self):
        return [i for i, d in enumerate(self._diag_full) if d == 0]

    @property
    def rank(self):
        return len(self._free_pos)

    @property
    def torsion(self):
        return tuple(self._diag_full[i] for i in self._torsion_pos)

    def invariants(self):
        return (self.rank, self.torsion)

    @property
    def nf_length(self):
        return len(self._torsion_pos) + len(self._free_pos)

    def is_trivial(self):
        return self.nf_length == 0

    def zero_nf(self):
        return (0,) * self.nf_length

    def reduce(self, x):
        x = intvec(x, length=self.ngens)
        if x.shape[0] != self.ngens:
            raise DimensionError(
                f"vector of length {x.shape[0]} in group with {self.ngens} generators"
            )
        y = self._snf.U.dot(x)
        tor = tuple(int(y[i]) % self._diag_full[i] for i in self._torsion_pos)
        free = tuple(int(y[i]) for i in self._free_pos)
        return tor + free

    def section(self, nf):
        nf = tuple(int(v) for v in nf)
        if len(nf) != self.nf_length:
            raise DimensionError(
                f"normal form of length {len(nf)}, expected {self.nf_length}"
            )
        y = np.zeros(self.ngens, dtype=object) + 0
        k = len(self._torsion_pos)
        for slot, i in enumerate(self._torsion_pos):
            y[i] = nf[slot]
        for slot, i in enumerate(self._free_pos):
            y[i] = nf[k + slot]
        return self._snf.Uinv.dot(y)

    def is_zero(self, x):
        return self.reduce(x) == self.zero_nf()

    def classes_equal(self, x1, x2):
        return self.reduce(x1) == self.reduce(x2)

    def generator_vectors(self):
        """Ambient representatives of the normal-form unit vectors."""
        out = []
        for s in range(self.nf_length):
            nf = [0] * self.nf_length
            nf[s] = 1
            out.append(self.section(nf))
        return out

    def same_invariants(self, other):
        return self.invariants() == other.invariants()

    def __repr__(self):
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.torsion]
        return "FgAbelianGroup(" + (" + ".join(parts) if parts else "0") + ")"


class GroupHom:
    """Homomorphism between presented groups, as a matrix on ambient generators.

    Well-definedness (relations land in relations) is checked at construction.
    """

    def __init__(self, source, target, matrix):
        self.source = source
        self.target = target
        self.matrix = intmat(matrix, rows=target.ngens, cols=source.ngens)
        if self.matrix.shape != (target.ngens, source.ngens):
            raise DimensionError(
                f"hom matrix {self.matrix.shape}, expected "
                f"{(target.ngens, source.ngens)}"
            )
        for j in range(self.source.rels.shape[1]):
            img = self.matrix.dot(self.source.rels[:, j])
            if not self.target.is_zero(img):
                raise SubgroupContainmentError(
                    f"relation column {j} is not sent into the target relations"
                )

    def apply(self, x):
        return self.matrix.dot(intvec(x, length=self.source.ngens))

    def compose(self, other):
        """self after other."""
        if other.target.ngens != self.source.ngens:
            raise DimensionError("composition dimension mismatch")
        return GroupHom(other.source, self.target, self.matrix.dot(other.matrix))

    def is_zero_hom(self):
        return all(
            self.target.is_zero(self.matrix[:, j])
            for j in range(self.matrix.shape[1])
        )

    def kernel(self):
        """ker as a subquotient of the source group."""
        stacked = hstack([self.matrix, self.target.rels])
        K = kernel_basis(stacked)
        L = K[: self.source.ngens, :]
        return subquotient(self.source, L, self.source.rels)

    def image(self):
        return subquotient(self.target, self.matrix, zeros(self.target.ngens, 0))

    def cokernel(self):
        return subquotient(self.target, eye(self.target.ngens), self.matrix)

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r})"


# ---------------------------------------------------------------------------
# subquotients


class Subquotient:
    """im(Z)/im(B) inside an ambient presented group, with a reduction map.

    ``gens`` columns are ambient-coordinate generators; ``group`` presents the
    quotient on those generators.  ``reduce`` takes ambient coordinates of a
    member to quotient normal form and is additive, so differences of classes
    (torsor computations) can be taken in normal form.
    """

    def __init__(self, ambient, gens, group):
        self.ambient = ambient
        self.gens = gens
        self.group = group

    @cached_property
    def _membership_matrix(self):
        return hstack([self.gens, self.ambient.rels])

    def coords(self, x):
        """One expression of x over the generators, as ambient-presentation coords."""
        x = intvec(x, length=self.ambient.ngens)
        sol = solve(self._membership_matrix, x)
        if sol is None:
            raise NotInSubgroupError("vector is not a member of the subgroup")
        return sol[: self.gens.shape[1]]

    def reduce(self, x):
        return self.group.reduce(self.coords(x))

    def contains(self, x):
        try:
            self.reduce(x)
            return True
        except NotInSubgroupError:
            return False

    def is_zero(self, x):
        return self.reduce(x) == self.group.zero_nf()

    def lift(self, nf):
        return self.gens.dot(self.group.section(nf))

    def generator_vectors(self):
        return [self.gens.dot(v) for v in self.group.generator_vectors()]

    def invariants(self):
        return self.group.invariants()

    def contains_lattice(self, other_gens):
        return all(
            self.contains(other_gens[:, j]) for j in range(other_gens.shape[1])
        )

    def __repr__(self):
        return f"Subquotient({self.group!r})"


def _as_matrix(x, ngens):
    if isinstance(x, GroupHom):
        if x.target.ngens != ngens:
            raise DimensionError("hom target does not match the ambient group")
        return x.matrix
    return intmat(x, rows=ngens)


def induced_hom(src: Subquotient, tgt: Subquotient, fn) -> GroupHom:
    """GroupHom between subquotient groups induced by fn on ambient vectors.

    fn must send the numerator of ``src`` into the numerator of ``tgt`` and
    denominators into denominators; both are certified by the membership
    solve and the GroupHom well-definedness check.
    """
    cols = [tgt.coords(fn(src.gens[:, j])) for j in range(src.gens.shape[1])]
    mat = zeros(tgt.group.ngens, src.group.ngens)
    for j, lam in enumerate(cols):
        for i in range(tgt.group.ngens):
            mat[i, j] = lam[i]
    return GroupHom(src.group, tgt.group, mat)


def subquotient(amb, Z, B):
    """im(Z)/im(B) inside ``amb``; raises when im(B) is not inside im(Z).

    Z and B may be GroupHoms into ``amb`` or plain matrices on its ambient
    generators.  The violation certificate names the first offending column.
    """
    MZ = _as_matrix(Z, amb.ngens)
    MB = _as_matrix(B, amb.ngens)
    probe = hstack([MZ, amb.rels])
    for j in range(MB.shape[1]):
        if solve(probe, MB[:, j]) is None:
            raise SubgroupContainmentError(
                f"generator column {j} of the denominator lies outside the "
                f"numerator subgroup: {MB[:, j].tolist()}"
            )
    a = MZ.shape[1]
    K = kernel_basis(hstack([MZ, MB, amb.rels]))
    rels = K[:a, :]
    return Subquotient(ambient=amb, gens=MZ, group=FgAbelianGroup(a, rels))
