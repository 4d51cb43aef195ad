"""Koszul-type cochain models of principal torus bundles.

``build_bundle`` tensors a base ring model with an exterior algebra on fiber
generators y_1..y_n and twists the differential by the chosen degree-2
cocycles: d(b (x) y_S) = (db) (x) y_S + (-1)^|b| sum_i eps(i,S) (b.z_i) (x) y_{S-i}.
The resulting total model is filtered by base degree, which drives the
spectral-sequence pages (computed by the standard zig-zag approximants
Z_r = {x in F^p : dx in F^{p+r}}, entirely with integer lattices) and the
filtration reports that decide dualizability downstream.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, ModelError
from .exact_linalg import (
    FgAbelianGroup,
    GroupHom,
    Subquotient,
    hstack,
    intvec,
    kernel_basis,
    solve,
    subquotient,
    zeros,
)
from .space_model import Cocycle, DgRingModel

__all__ = [
    "ChernVector",
    "BundleModel",
    "SSPage",
    "FiltrationReport",
    "build_bundle",
    "total_cohomology",
    "ss_page",
    "filtration_report",
    "pullback_to_total",
    "fiber_restriction",
]


class ChernVector:
    """The n degree-2 cocycles on the base that classify the bundle."""

    def __init__(self, base: DgRingModel, cocycles):
        self.base = base
        self.cocycles = []
        for i, z in enumerate(cocycles):
            if isinstance(z, Cocycle):
                if z.degree != 2:
                    raise InputError(f"chern cocycle {i} has degree {z.degree}, expected 2")
                vec = z.vector
            else:
                vec = intvec(z, length=base.dim(2))
            if vec.shape[0] != base.dim(2):
                raise InputError(
                    f"chern cocycle {i} has length {vec.shape[0]}, "
                    f"expected {base.dim(2)}"
                )
            if not base.is_closed(2, vec):
                raise InputError(f"chern cocycle {i} is not closed")
            self.cocycles.append(vec)
        self.n = len(self.cocycles)
        if self.n < 1:
            raise InputError("a torus bundle needs at least one fiber circle")

    def __iter__(self):
        return iter(self.cocycles)

    def __getitem__(self, i):
        return self.cocycles[i]


def _eps(i, S):
    return -1 if sum(1 for j in S if j < i) % 2 else 1


def _shuffle_sign(S, T):
    if set(S) & set(T):
        return None, 0
    inv = sum(1 for s in S for t in T if s > t)
    return tuple(sorted(S + T)), (-1) ** inv


class BundleModel:
    """Total-space model of a principal T^n-bundle, filtered by base degree.

    The basis of total degree k lists triples (p, a, S) with p + |S| = k,
    ordered by base degree p, then base index, then the fiber monomial; so
    each filtration step F^p is a basis suffix.  The total model is itself a
    DgRingModel, with d^2 = 0 verified exactly at build time.
    """

    def __init__(self, base: DgRingModel, chern: ChernVector, labels=None, check=True):
        if chern.base is not base:
            raise InputError("chern cocycles live in a different base model")
        self.base = base
        self.chern = chern
        self.n = chern.n
        self.labels = list(labels) if labels else [f"y{i + 1}" for i in range(self.n)]
        if len(self.labels) != self.n:
            raise InputError("one fiber label per fiber circle")
        self.D = base.D + self.n

        self.elements = []  # per total degree: list of (p, a, S)
        for k in range(self.D + 1):
            level = []
            for p in range(min(k, base.D) + 1):
                fdeg = k - p
                if fdeg > self.n:
                    continue
                for a in range(base.dim(p)):
                    for S in itertools.combinations(range(self.n), fdeg):
                        level.append((p, a, S))
            self.elements.append(level)
        self.index = [
            {e: i for i, e in enumerate(level)} for level in self.elements
        ]

        def label(p, a, S):
            b = base.basis[p][a]
            mono = "".join(self.labels[i] for i in S)
            if not S:
                return b
            if p == 0 and a == 0:
                return mono
            return f"{b}.{mono}"

        basis = [[label(*e) for e in level] for level in self.elements]
        diff = {k: self._diff_matrix(k) for k in range(self.D)}
        product = self._product_table()
        self.total = DgRingModel(basis, diff, product, check=False)
        if check:
            try:
                self.total.validate()
            except ModelError as err:
                raise ModelError(f"total model of the bundle is invalid: {err}")

    # -- construction --------------------------------------------------------

    def _diff_matrix(self, k):
        mat = zeros(len(self.elements[k + 1]) if k + 1 <= self.D else 0,
                    len(self.elements[k]))
        for col, (p, a, S) in enumerate(self.elements[k]):
            db = self.base.d(p, self.base.basis_vector(p, a))
            for a2 in range(self.base.dim(p + 1)):
                if db[a2]:
                    mat[self.index[k + 1][(p + 1, a2, S)], col] += db[a2]
            sign = -1 if p % 2 else 1
            for i in S:
                rest = tuple(j for j in S if j != i)
                prod = self.base.mul(
                    p, self.base.basis_vector(p, a), 2, self.chern[i]
                )
                for a2 in range(self.base.dim(p + 2)):
                    if prod[a2]:
                        mat[self.index[k + 1][(p + 2, a2, rest)], col] += (
                            sign * _eps(i, S) * prod[a2]
                        )
        return mat

    def _product_table(self):
        product = {}
        for k1 in range(self.D + 1):
            for k2 in range(self.D + 1 - k1):
                for n1, (p1, a1, S1) in enumerate(self.elements[k1]):
                    for n2, (p2, a2, S2) in enumerate(self.elements[k2]):
                        if (k1 == 0 and n1 == 0) or (k2 == 0 and n2 == 0):
                            continue
                        merged, sign = _shuffle_sign(S1, S2)
                        if merged is None:
                            continue
                        if len(S1) % 2 and p2 % 2:
                            sign = -sign
                        bb = self.base.mul(
                            p1,
                            self.base.basis_vector(p1, a1),
                            p2,
                            self.base.basis_vector(p2, a2),
                        )
                        table = {}
                        for a3 in range(self.base.dim(p1 + p2)):
                            if bb[a3]:
                                key = (p1 + p2, a3, merged)
                                c = self.index[k1 + k2].get(key)
                                if c is not None:
                                    table[c] = sign * bb[a3]
                        if table:
                            product[(k1, n1, k2, n2)] = table
        return product

    # -- basic structure ------------------------------------------------------

    def dim(self, k):
        return len(self.elements[k]) if 0 <= k <= self.D else 0

    def basis_elements(self, k):
        return self.elements[k] if 0 <= k <= self.D else []

    def d(self, k, vec):
        return self.total.d(k, vec)

    def mul(self, i, u, j, v):
        return self.total.mul(i, u, j, v)

    def zero_vector(self, k):
        return np.zeros(self.dim(k), dtype=object) + 0

    def basis_vector(self, k, idx):
        return self.total.basis_vector(k, idx)

    def monomials(self, fdeg):
        return list(itertools.combinations(range(self.n), fdeg))

    def element_vector(self, p, a, S):
        k = p + len(S)
        v = self.zero_vector(k)
        v[self.index[k][(p, a, tuple(sorted(S)))]] = 1
        return v

    def chern_classes(self):
        """Normal forms of the chern cocycles in H^2 of the base."""
        H2 = self.base.cohomology(2)
        return [H2.reduce(z) for z in self.chern]

    # -- maps to and from the base and fiber ----------------------------------

    def pullback_matrix(self, k):
        mat = zeros(self.dim(k), self.base.dim(k))
        for a in range(self.base.dim(k)):
            mat[self.index[k][(k, a, ())], a] = 1
        return mat

    def pullback_to_total(self, coc: Cocycle) -> Cocycle:
        """b -> b (x) y_empty; a ring map and a chain map."""
        if coc.degree > self.base.D:
            raise InputError("cocycle degree exceeds the base model")
        return Cocycle(coc.degree, self.pullback_matrix(coc.degree).dot(coc.vector))

    def fiber_restriction(self, z: Cocycle):
        """Coefficients of the pure fiber monomials, positive base degrees dropped."""
        k = z.degree
        monos = self.monomials(k)
        out = np.zeros(len(monos), dtype=object) + 0
        vec = intvec(z.vector, length=self.dim(k))
        for m_i, S in enumerate(monos):
            idx = self.index[k].get((0, 0, S))
            if idx is not None:
                out[m_i] = vec[idx]
        return out

    # -- cohomology and the spectral sequence ---------------------------------

    @lru_cache(maxsize=None)
    def total_cohomology(self, k):
        """H^k of the total space as a subquotient of degree-k cochains."""
        if k < 0 or k > self.D:
            return subquotient(FgAbelianGroup(0), zeros(0, 0), zeros(0, 0))
        amb = FgAbelianGroup(self.dim(k))
        Z = kernel_basis(self.total.d_matrix(k))
        B = self.total.d_matrix(k - 1) if k >= 1 else zeros(self.dim(k), 0)
        return subquotient(amb, Z, B)

    def filtration_indices(self, k, p):
        return [i for i, (bp, _, _) in enumerate(self.elements[k]) if bp >= p]

    def filtration_inclusion(self, k, p):
        idxs = self.filtration_indices(k, p)
        mat = zeros(self.dim(k), len(idxs))
        for c, i in enumerate(idxs):
            mat[i, c] = 1
        return mat

    @property
    def stable_page(self):
        return max(self.base.D, self.n) + 1

    @lru_cache(maxsize=None)
    def z_lattice(self, r, p, q):
        """Basis of Z_r^{p,q} = {x in F^p C^{p+q} : dx in F^{p+r}} in C^{p+q}.

        The lattice depends only on (p, p + q); the q index is bookkeeping.
        """
        k = p + q
        if k < 0 or k > self.D:
            return zeros(0, 0)
        r = min(r, self.stable_page)
        if r <= 0:
            return self.filtration_inclusion(k, p)
        incl = self.filtration_inclusion(k, p)
        if k == self.D:
            return incl
        dmat = self.total.d_matrix(k).dot(incl)
        low = [
            i
            for i, (bp, _, _) in enumerate(self.elements[k + 1])
            if bp < p + r
        ]
        if not low:
            return incl
        proj = dmat[low, :]
        K = kernel_basis(proj)
        return incl.dot(K)

    @lru_cache(maxsize=None)
    def _page_subquotient(self, r, p, q):
        # slots with q > n, q < 0 or p < 0 come out trivial by themselves
        k = p + q
        r = min(r, self.stable_page)
        if k < 0 or k > self.D:
            return subquotient(FgAbelianGroup(0), zeros(0, 0), zeros(0, 0))
        amb = FgAbelianGroup(self.dim(k))
        Z = self.z_lattice(r, p, q)
        B1 = self.z_lattice(r - 1, p + 1, q - 1)
        inner = self.z_lattice(r - 1, p - r + 1, q + r - 2)
        B2 = (
            self.total.d_matrix(k - 1).dot(inner)
            if 0 <= k - 1 <= self.D
            else zeros(self.dim(k), 0)
        )
        return subquotient(amb, Z, hstack([B1, B2]))

    def _page_hom(self, r, p, q):
        """d_r out of slot (p, q) as a GroupHom between page groups."""
        src = self._page_subquotient(r, p, q)
        tgt = self._page_subquotient(r, p + r, q - r + 1)
        k = p + q
        cols = []
        for j in range(src.group.ngens):
            x = src.gens[:, j]
            dx = self.d(k, x)
            lam = solve(tgt.gens, dx) if tgt.group.ngens else intvec([], length=0)
            if lam is None:
                raise ModelError(
                    "spectral-sequence differential left its target lattice; "
                    "the filtration bookkeeping is inconsistent"
                )
            cols.append(lam)
        mat = zeros(tgt.group.ngens, src.group.ngens)
        for j, lam in enumerate(cols):
            for i in range(tgt.group.ngens):
                mat[i, j] = lam[i]
        return GroupHom(src.group, tgt.group, mat)

    @lru_cache(maxsize=None)
    def ss_page(self, r, p, q):
        if r < 1:
            raise InputError("spectral-sequence pages start at r = 1")
        sq = self._page_subquotient(r, p, q)
        return SSPage(
            r=r,
            p=p,
            q=q,
            group=sq.group,
            sq=sq,
            d_out=self._page_hom(r, p, q),
            d_in=self._page_hom(r, p - r, q + r - 1),
            is_infinity=r >= self.stable_page,
        )

    def infinity_page(self, p, q):
        return self.ss_page(self.stable_page, p, q)

    # -- filtration of classes -------------------------------------------------

    def filtration_report(self, z: Cocycle) -> "FiltrationReport":
        """Maximal p with [z] in F^p H^k, plus the leading part at infinity."""
        k = z.degree
        vec = intvec(z.vector, length=self.dim(k))
        if not self.total.is_closed(k, vec):
            raise InputError("filtration_report needs a closed cochain")
        if self.total_cohomology(k).is_zero(vec):
            return FiltrationReport(
                degree=k, is_zero=True, p=None, leading=(), representative=vec * 0
            )
        bmat = (
            self.total.d_matrix(k - 1)
            if k >= 1
            else zeros(self.dim(k), 0)
        )
        for p in range(min(k, self.base.D), -1, -1):
            Kp = self.z_lattice(self.stable_page, p, k - p)
            sol = solve(hstack([Kp, bmat]), vec)
            if sol is not None:
                rep = Kp.dot(sol[: Kp.shape[1]])
                page = self.infinity_page(p, k - p)
                leading = page.sq.reduce(rep)
                return FiltrationReport(
                    degree=k, is_zero=False, p=p, leading=leading, representative=rep
                )
        raise ModelError("closed nonzero class fell out of the filtration")

    def __repr__(self):
        return f"BundleModel(n={self.n}, base={self.base!r})"

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


@dataclass
class SSPage:
    """One (r, p, q) slot of the spectral sequence with its differentials."""

    r: int
    p: int
    q: int
    group: FgAbelianGroup
    sq: Subquotient
    d_out: GroupHom
    d_in: GroupHom
    is_infinity: bool

    def invariants(self):
        return self.group.invariants()

    def reduce(self, vec):
        """Class of a member cochain vector in this slot's group."""
        return self.sq.reduce(vec)

    def apply_d(self, vec):
        """d_r of the class of ``vec``, as a normal form in the target slot."""
        lam = self.group.section(self.sq.reduce(vec))
        return self.d_out.target.reduce(self.d_out.matrix.dot(lam))


@dataclass
class FiltrationReport:
    """Maximal filtration step of a class and its leading-part coordinates."""

    degree: int
    is_zero: bool
    p: int | None
    leading: tuple
    representative: np.ndarray

    def in_step(self, p):
        return self.is_zero or (self.p is not None and self.p >= p)


# ---------------------------------------------------------------------------
# module-level operation wrappers


def build_bundle(base: DgRingModel, chern, labels=None, check=True) -> BundleModel:
    """Verified total-space model from a base model and chern cocycles."""
    if not isinstance(chern, ChernVector):
        chern = ChernVector(base, chern)
    return BundleModel(base, chern, labels=labels, check=check)


def total_cohomology(m: BundleModel, k):
    return m.total_cohomology(k)


def ss_page(m: BundleModel, r, p, q):
    return m.ss_page(r, p, q)


def filtration_report(m: BundleModel, z: Cocycle):
    return m.filtration_report(z)


def pullback_to_total(m: BundleModel, beta: Cocycle):
    return m.pullback_to_total(beta)


def fiber_restriction(m: BundleModel, z: Cocycle):
    return m.fiber_restriction(z)
