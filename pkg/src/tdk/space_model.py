"""Base-space models: simplicial complexes and differential graded ring models.

A :class:`DgRingModel` is a finite graded ring over Z in degrees 0..D with an
integer differential and a structure-constant product table.  It is the
carrier for every base-space computation downstream: cohomology groups, cup
products, and the Koszul-type bundle models built on top.

Validity hypothesis (user-facing): downstream bundle computations are
guaranteed correct when the model is integrally quasi-isomorphic, as a ring
model, to the cochain algebra of the intended space.  All shipped models
satisfy this.  For :func:`cohomology_ring` output it is a formality
assumption and is flagged in the model metadata.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InputError, ModelError, SchemaError
from .exact_linalg import (
    FgAbelianGroup,
    Subquotient,
    intmat,
    intvec,
    kernel_basis,
    subquotient,
    zeros,
)

__all__ = [
    "Cocycle",
    "DgRingModel",
    "SimplicialComplex",
    "parse_space",
    "cohomology_ring",
    "product_model",
    "builtin_space",
    "BUILTIN_NAMES",
    "DEFAULT_TRUNCATION",
]

DEFAULT_TRUNCATION = 4


@dataclass(frozen=True)
class Cocycle:
    """A degree and a coefficient vector over the model basis in that degree."""

    degree: int
    vector: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vector", intvec(self.vector))


def _parse_int(x, where):
    if isinstance(x, bool):
        raise SchemaError("expected an integer, got a boolean", where)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        s = x.strip()
        if s and (s.lstrip("+-").isdigit()):
            return int(s)
    raise SchemaError(f"expected an integer (decimal string), got {x!r}", where)


# ---------------------------------------------------------------------------
# differential graded ring models


class DgRingModel:
    """Finite graded ring over Z with differential, given by explicit tables.

    ``basis[k]`` lists the labels in degree k for 0 <= k <= D;
    ``diff[k]`` is the matrix of d: C^k -> C^{k+1};
    ``product[(i, a, j, b)]`` maps a basis pair to a dict {index: coeff} in
    degree i + j.  Pairs involving the unit default to the identity action,
    all other missing pairs to zero.  Products landing above degree D are
    truncated to zero.
    """

    def __init__(self, basis, diff, product, meta=None, check=True):
        self.basis = [list(map(str, bs)) for bs in basis]
        self.D = len(self.basis) - 1
        if self.D < 0 or not self.basis[0]:
            raise ModelError("model needs a nonempty degree-0 part")
        self.diff = {}
        for k, mat in dict(diff).items():
            self.diff[int(k)] = intmat(mat, rows=self.dim(k + 1), cols=self.dim(k))
        self.product = {}
        for key, entry in dict(product).items():
            i, a, j, b = map(int, key)
            self.product[(i, a, j, b)] = {int(c): int(v) for c, v in dict(entry).items() if int(v) != 0}
        self.meta = dict(meta or {})
        if check:
            self.validate()

    # -- basic structure ----------------------------------------------------

    def dim(self, k):
        return len(self.basis[k]) if 0 <= k <= self.D else 0

    @property
    def top_degree(self):
        for k in range(self.D, -1, -1):
            if self.dim(k):
                return k
        return 0

    def zero_vector(self, k):
        return np.zeros(self.dim(k), dtype=object) + 0

    def basis_vector(self, k, idx):
        v = self.zero_vector(k)
        v[idx] = 1
        return v

    def unit_vector(self):
        return self.basis_vector(0, 0)

    def d_matrix(self, k):
        if k in self.diff:
            return self.diff[k]
        return zeros(self.dim(k + 1), self.dim(k))

    def d(self, k, vec):
        return self.d_matrix(k).dot(intvec(vec, length=self.dim(k)))

    def is_closed(self, k, vec):
        return all(x == 0 for x in self.d(k, vec))

    def mul_basis(self, i, a, j, b):
        """Structure constants of basis element a (deg i) times b (deg j)."""
        if i + j > self.D:
            return {}
        if (i, a, j, b) in self.product:
            return self.product[(i, a, j, b)]
        if i == 0 and a == 0:
            return {b: 1}
        if j == 0 and b == 0:
            return {a: 1}
        return {}

    def mul(self, i, u, j, v):
        """Product of cochain vectors u (deg i) and v (deg j)."""
        k = i + j
        out = self.zero_vector(k)
        if k > self.D:
            return out
        u = intvec(u, length=self.dim(i))
        v = intvec(v, length=self.dim(j))
        for a in range(self.dim(i)):
            if u[a] == 0:
                continue
            for b in range(self.dim(j)):
                if v[b] == 0:
                    continue
                for c, coeff in self.mul_basis(i, a, j, b).items():
                    out[c] += u[a] * v[b] * coeff
        return out

    # -- validation ----------------------------------------------------------

    def validate(self):
        """Check every model axiom, raising ModelError with a certificate."""
        if self.dim(0) != 1:
            raise ModelError(
                f"degree-0 part has rank {self.dim(0)}, expected 1 (connected base)"
            )
        for k, mat in self.diff.items():
            if not (0 <= k <= self.D):
                raise ModelError(f"differential given in degree {k} outside 0..{self.D}")
            if mat.shape != (self.dim(k + 1), self.dim(k)):
                raise ModelError(
                    f"differential in degree {k} has shape {mat.shape}, "
                    f"expected {(self.dim(k + 1), self.dim(k))}"
                )
        for (i, a, j, b) in self.product:
            if not (0 <= i <= self.D and 0 <= j <= self.D and i + j <= self.D):
                raise ModelError(f"product entry for degrees ({i},{j}) out of range")
            if not (0 <= a < self.dim(i) and 0 <= b < self.dim(j)):
                raise ModelError(f"product entry ({i},{a},{j},{b}) indexes outside the basis")
        if any(x != 0 for x in self.d(0, self.unit_vector())):
            raise ModelError("d(unit) is nonzero")
        # d o d = 0
        for k in range(self.D - 1):
            comp = self.d_matrix(k + 1).dot(self.d_matrix(k))
            for a in range(self.dim(k)):
                if any(x != 0 for x in comp[:, a]):
                    raise ModelError(
                        f"d(d(x)) != 0 for basis element {self.basis[k][a]!r} in degree {k}"
                    )
        # unit acts as identity (explicit entries may not override it)
        for j in range(self.D + 1):
            for b in range(self.dim(j)):
                if self.mul_basis(0, 0, j, b) != {b: 1} or self.mul_basis(j, b, 0, 0) != {b: 1}:
                    raise ModelError(
                        f"unit does not act as identity on {self.basis[j][b]!r}"
                    )
        # graded commutativity
        for i in range(self.D + 1):
            for j in range(i, self.D - i + 1):
                sign = -1 if (i % 2 and j % 2) else 1
                for a in range(self.dim(i)):
                    for b in range(self.dim(j)):
                        left = self.mul(i, self.basis_vector(i, a), j, self.basis_vector(j, b))
                        right = self.mul(j, self.basis_vector(j, b), i, self.basis_vector(i, a))
                        if any(left[c] != sign * right[c] for c in range(self.dim(i + j))):
                            raise ModelError(
                                "graded commutativity fails on pair "
                                f"({self.basis[i][a]!r}, {self.basis[j][b]!r})"
                            )
        # associativity
        for i in range(self.D + 1):
            for j in range(self.D + 1 - i):
                for k in range(self.D + 1 - i - j):
                    for a in range(self.dim(i)):
                        ea = self.basis_vector(i, a)
                        for b in range(self.dim(j)):
                            eb = self.basis_vector(j, b)
                            ab = self.mul(i, ea, j, eb)
                            for c in range(self.dim(k)):
                                ec = self.basis_vector(k, c)
                                lhs = self.mul(i + j, ab, k, ec)
                                rhs = self.mul(i, ea, j + k, self.mul(j, eb, k, ec))
                                if any(x != y for x, y in zip(lhs, rhs)):
                                    raise ModelError(
                                        "associativity fails on triple "
                                        f"({self.basis[i][a]!r}, {self.basis[j][b]!r}, "
                                        f"{self.basis[k][c]!r})"
                                    )
        # Leibniz rule (both sides live below the truncation degree)
        for i in range(self.D + 1):
            for j in range(self.D - i):
                sign = -1 if i % 2 else 1
                for a in range(self.dim(i)):
                    ea = self.basis_vector(i, a)
                    da = self.d(i, ea)
                    for b in range(self.dim(j)):
                        eb = self.basis_vector(j, b)
                        lhs = self.d(i + j, self.mul(i, ea, j, eb))
                        rhs = self.mul(i + 1, da, j, eb) + sign * self.mul(
                            i, ea, j + 1, self.d(j, eb)
                        )
                        if any(x != y for x, y in zip(lhs, rhs)):
                            raise ModelError(
                                "Leibniz rule fails on pair "
                                f"({self.basis[i][a]!r}, {self.basis[j][b]!r})"
                            )

    # -- cohomology ----------------------------------------------------------

    @lru_cache(maxsize=None)
    def cohomology(self, k):
        """H^k as a subquotient of the degree-k cochain lattice."""
        if k < 0 or k > self.D:
            return subquotient(FgAbelianGroup(0), zeros(0, 0), zeros(0, 0))
        amb = FgAbelianGroup(self.dim(k))
        Z = kernel_basis(self.d_matrix(k))
        B = self.d_matrix(k - 1) if k >= 1 else zeros(self.dim(k), 0)
        return subquotient(amb, Z, B)

    def betti(self):
        return [self.cohomology(k).invariants() for k in range(self.D + 1)]

    def class_of(self, cocycle: Cocycle):
        return self.cohomology(cocycle.degree).reduce(cocycle.vector)

    def cup_class(self, x: Cocycle, y: Cocycle):
        """Normal form of [x][y] in H^{|x|+|y|}."""
        prod = self.mul(x.degree, x.vector, y.degree, y.vector)
        return self.cohomology(x.degree + y.degree).reduce(prod)

    def __repr__(self):
        dims = [self.dim(k) for k in range(self.D + 1)]
        return f"DgRingModel(dims={dims})"

    def __hash__(self):
        return id(self)

    def __eq__(self, other):
        return self is other


# ---------------------------------------------------------------------------
# simplicial complexes


class SimplicialComplex:
    """Finite abstract simplicial complex given by its facets."""

    def __init__(self, nvertices, facets, max_dim=DEFAULT_TRUNCATION):
        self.nvertices = int(nvertices)
        if self.nvertices < 0:
            raise SchemaError("vertex count must be nonnegative")
        clean = []
        for idx, f in enumerate(facets):
            verts = [int(v) for v in f]
            if len(set(verts)) != len(verts):
                raise SchemaError(f"facet {idx} has repeated vertices: {verts}")
            if any(v < 0 or v >= self.nvertices for v in verts):
                raise SchemaError(f"facet {idx} references a vertex out of range: {verts}")
            if not verts:
                raise SchemaError(f"facet {idx} is empty")
            if len(verts) - 1 > max_dim:
                raise SchemaError(
                    f"facet {idx} has dimension {len(verts) - 1} > bound {max_dim}"
                )
            clean.append(tuple(sorted(verts)))
        if not clean:
            raise SchemaError("complex has no facets")
        self.facets = sorted(set(clean))
        self.dim = max(len(f) - 1 for f in self.facets)
        self.simplices = [set() for _ in range(self.dim + 1)]
        for f in self.facets:
            for k in range(1, len(f) + 1):
                for face in itertools.combinations(f, k):
                    self.simplices[k - 1].add(face)
        self.simplices = [sorted(s) for s in self.simplices]
        self.index = [
            {s: i for i, s in enumerate(level)} for level in self.simplices
        ]

    def n_simplices(self, k):
        return len(self.simplices[k]) if 0 <= k <= self.dim else 0

    def euler_characteristic(self):
        return sum((-1) ** k * self.n_simplices(k) for k in range(self.dim + 1))

    def coboundary(self, k):
        """Matrix of the simplicial coboundary C^k -> C^{k+1}."""
        rows, cols = self.n_simplices(k + 1), self.n_simplices(k)
        mat = zeros(rows, cols)
        for r, tau in enumerate(self.simplices[k + 1] if k + 1 <= self.dim else []):
            for drop in range(len(tau)):
                face = tau[:drop] + tau[drop + 1 :]
                mat[r, self.index[k][face]] += (-1) ** drop
        return mat

    @lru_cache(maxsize=None)
    def cohomology(self, k):
        """H^k(K, Z) as a subquotient of simplicial k-cochains."""
        if k < 0 or k > self.dim:
            return subquotient(FgAbelianGroup(0), zeros(0, 0), zeros(0, 0))
        amb = FgAbelianGroup(self.n_simplices(k))
        Z = kernel_basis(self.coboundary(k))
        B = self.coboundary(k - 1) if k >= 1 else zeros(self.n_simplices(k), 0)
        return subquotient(amb, Z, B)

    def cup(self, p, u, q, v):
        """Front-face/back-face cup product of cochains u (deg p), v (deg q)."""
        k = p + q
        out = np.zeros(self.n_simplices(k), dtype=object) + 0
        if k > self.dim:
            return out
        u = intvec(u, length=self.n_simplices(p))
        v = intvec(v, length=self.n_simplices(q))
        for r, sigma in enumerate(self.simplices[k]):
            front = sigma[: p + 1]
            back = sigma[p:]
            iu = self.index[p].get(front)
            iv = self.index[q].get(back)
            if iu is not None and iv is not None:
                out[r] = u[iu] * v[iv]
        return out

    def is_connected(self):
        if self.nvertices == 0:
            return False
        seen = {self.simplices[0][0][0]} if self.simplices[0] else set()
        frontier = list(seen)
        adj = {}
        for (a, b) in self.simplices[1] if self.dim >= 1 else []:
            adj.setdefault(a, []).append(b)
            adj.setdefault(b, []).append(a)
        while frontier:
            x = frontier.pop()
            for y in adj.get(x, []):
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        vertices = {s[0] for s in self.simplices[0]}
        return seen == vertices

    def __repr__(self):
        counts = [self.n_simplices(k) for k in range(self.dim + 1)]
        return f"SimplicialComplex(vertices={self.nvertices}, counts={counts})"


# ---------------------------------------------------------------------------
# parsing


def parse_space(document, truncation=None):
    """Validate a space document and return the corresponding value.

    Two schemas are accepted: ``{"format": "simplicial", ...}`` producing a
    :class:`SimplicialComplex` and ``{"format": "dgring", ...}`` producing a
    fully validated :class:`DgRingModel`.  Integers may be decimal strings.
    """
    truncation = DEFAULT_TRUNCATION if truncation is None else int(truncation)
    if not isinstance(document, dict):
        raise SchemaError("space document must be a JSON object")
    fmt = document.get("format")
    if fmt == "simplicial":
        if "vertices" not in document or "facets" not in document:
            raise SchemaError("simplicial document needs 'vertices' and 'facets'")
        n = _parse_int(document["vertices"], "vertices")
        facets = document["facets"]
        if not isinstance(facets, list) or not all(isinstance(f, list) for f in facets):
            raise SchemaError("'facets' must be a list of vertex lists")
        facets = [[_parse_int(v, f"facets[{i}]") for v in f] for i, f in enumerate(facets)]
        return SimplicialComplex(n, facets, max_dim=truncation)
    if fmt == "dgring":
        return _parse_dgring(document, truncation)
    raise SchemaError(f"unknown space format {fmt!r} (expected 'simplicial' or 'dgring')")


def _parse_dgring(document, truncation):
    for key in ("degrees", "basis"):
        if key not in document:
            raise SchemaError(f"dgring document needs a {key!r} field")
    D = _parse_int(document["degrees"], "degrees")
    if D < 0:
        raise SchemaError("'degrees' must be nonnegative")
    if D > truncation:
        raise SchemaError(
            f"'degrees' = {D} exceeds the truncation bound {truncation} "
            "(raise TDK_TRUNCATION to accept deeper models)"
        )
    basis = document["basis"]
    if not isinstance(basis, list) or len(basis) != D + 1:
        raise SchemaError(f"'basis' must list degrees 0..{D}")
    for k, bs in enumerate(basis):
        if not isinstance(bs, list) or not all(isinstance(x, str) for x in bs):
            raise SchemaError(f"basis in degree {k} must be a list of labels")
    dims = [len(bs) for bs in basis]
    diff = {}
    for entry in document.get("diff", []):
        if not isinstance(entry, dict) or "deg" not in entry or "matrix" not in entry:
            raise SchemaError("each diff entry needs 'deg' and 'matrix'")
        k = _parse_int(entry["deg"], "diff.deg")
        if not (0 <= k <= D):
            raise SchemaError(f"diff entry for degree {k} outside 0..{D}")
        rows = dims[k + 1] if k + 1 <= D else 0
        mat = entry["matrix"]
        if not isinstance(mat, list) or len(mat) != rows or any(
            not isinstance(r, list) or len(r) != dims[k] for r in mat
        ):
            raise SchemaError(
                f"diff matrix in degree {k} must be {rows} x {dims[k]}"
            )
        diff[k] = [[_parse_int(x, f"diff[{k}]") for x in row] for row in mat]
    product = {}
    for pos, entry in enumerate(document.get("product", [])):
        if not isinstance(entry, dict):
            raise SchemaError(f"product entry {pos} must be an object")
        try:
            i = _parse_int(entry["i_deg"], f"product[{pos}].i_deg")
            a = _parse_int(entry["i_idx"], f"product[{pos}].i_idx")
            j = _parse_int(entry["j_deg"], f"product[{pos}].j_deg")
            b = _parse_int(entry["j_idx"], f"product[{pos}].j_idx")
            result = entry["result"]
        except KeyError as exc:
            raise SchemaError(f"product entry {pos} is missing field {exc}")
        if not (0 <= i <= D and 0 <= j <= D and i + j <= D):
            raise SchemaError(f"product entry {pos} has degrees out of range")
        if not (0 <= a < dims[i] and 0 <= b < dims[j]):
            raise SchemaError(f"product entry {pos} indexes outside the basis")
        if not isinstance(result, list):
            raise SchemaError(f"product entry {pos} result must be a list")
        table = {}
        for term in result:
            c = _parse_int(term["idx"], f"product[{pos}].result.idx")
            coeff = _parse_int(term["coeff"], f"product[{pos}].result.coeff")
            if not (0 <= c < dims[i + j]):
                raise SchemaError(f"product entry {pos} result index out of range")
            table[c] = coeff
        product[(i, a, j, b)] = table
    return DgRingModel(basis, diff, product)


# ---------------------------------------------------------------------------
# cohomology ring of a simplicial complex


def cohomology_ring(K: SimplicialComplex, truncation=DEFAULT_TRUNCATION):
    """Minimal ring model carrying H*(K, Z) with chosen representatives.

    For torsion-free cohomology the differential is zero; a torsion class of
    order d in degree k is carried by a generator t together with an auxiliary
    element s in degree k-1 with d(s) = d*t.  Products are computed by
    multiplying the chosen representative cocycles and reducing; the result is
    re-validated, so an unrepresentable torsion product structure is rejected
    rather than silently mangled.
    """
    if not K.is_connected():
        raise ModelError("cohomology_ring requires a connected complex")
    D = min(K.dim, truncation)

    gens = {}   # degree -> list of (label, kind, order, rep vector)
    for k in range(D + 1):
        H = K.cohomology(k)
        rank, torsion = H.invariants()
        reps = H.generator_vectors()
        out = []
        for t_i, d in enumerate(torsion):
            out.append((f"t{k}_{t_i}", "torsion", d, reps[t_i]))
        for f_i in range(rank):
            out.append((f"e{k}_{f_i}", "free", 0, reps[len(torsion) + f_i]))
        gens[k] = out
    # connected complex: use the constant-1 cochain as the unit representative
    ones = np.zeros(K.n_simplices(0), dtype=object) + 1
    gens[0] = [("1", "free", 0, ones)]

    basis = []
    kinds = []  # per degree: list of ("gen", gen record) / ("killer", target info)
    for k in range(D + 1):
        labels = []
        slot = []
        for rec in gens[k]:
            labels.append(rec[0])
            slot.append(("gen", rec))
        if k + 1 <= D:
            for t_i, rec in enumerate(r for r in gens[k + 1] if r[1] == "torsion"):
                labels.append(f"s{k + 1}_{t_i}")
                slot.append(("killer", (k + 1, t_i, rec)))
        basis.append(labels)
        kinds.append(slot)

    diff = {}
    for k in range(D):
        mat = zeros(len(basis[k + 1]), len(basis[k]))
        for col, (kind, payload) in enumerate(kinds[k]):
            if kind == "killer":
                deg, t_i, rec = payload
                mat[t_i, col] = rec[2]  # d(s) = order * t
        diff[k] = mat

    def killer_for(k, torsion_coords):
        """Auxiliary combination whose differential is sum d_i c_i t_i."""
        v = np.zeros(len(basis[k - 1]), dtype=object) + 0
        for col, (kind, payload) in enumerate(kinds[k - 1]):
            if kind == "killer" and payload[0] == k:
                t_i = payload[1]
                v[col] = torsion_coords[t_i]
        return v

    product = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            Hij = K.cohomology(i + j)
            n_tor = len(Hij.invariants()[1])
            for a, (kind_a, pay_a) in enumerate(kinds[i]):
                for b, (kind_b, pay_b) in enumerate(kinds[j]):
                    if (i == 0 and a == 0) or (j == 0 and b == 0):
                        continue  # unit action is implicit
                    if kind_a == "gen" and kind_b == "gen":
                        cup = K.cup(i, pay_a[3], j, pay_b[3])
                        nf = Hij.reduce(cup)
                        table = {c: int(v) for c, v in enumerate(nf) if v != 0}
                        if table:
                            product[(i, a, j, b)] = table
                    elif kind_a == "killer" and kind_b == "gen":
                        # s_t * x must have differential order(t) * (t * x);
                        # at the truncation boundary that differential is cut
                        # off, so the product may stay zero there
                        deg_t, t_i, rec = pay_a
                        if deg_t + j > D:
                            continue
                        cup = K.cup(deg_t, rec[3], j, pay_b[3])
                        target = K.cohomology(deg_t + j)
                        nf = target.reduce(cup)
                        n_tor_t = len(target.invariants()[1])
                        coords = [0] * n_tor_t
                        ok = True
                        for s_i, d_s in enumerate(target.invariants()[1]):
                            val = rec[2] * nf[s_i]
                            if val % d_s:
                                ok = False
                                break
                            coords[s_i] = val // d_s
                        if not ok:
                            raise ModelError(
                                "torsion product structure is not strictly "
                                f"realizable at pair ({basis[i][a]}, {basis[j][b]})"
                            )
                        vec = killer_for(deg_t + j, coords)
                        table = {c: int(v) for c, v in enumerate(vec) if v != 0}
                        if table:
                            product[(i, a, j, b)] = table
                            sign = -1 if (i % 2 and j % 2) else 1
                            product[(j, b, i, a)] = {
                                c: sign * v for c, v in table.items()
                            }
                    # killer*killer and gen*killer default to zero /
                    # commutativity entries written above

    model = DgRingModel(
        basis,
        diff,
        product,
        meta={
            "source": "simplicial-cohomology",
            "validity_hypothesis": (
                "ring model assumed integrally quasi-isomorphic to the cochain "
                "algebra of the realized complex (formality assumption)"
            ),
            "representatives": {
                k: [rec[3].tolist() for rec in gens[k]] for k in range(D + 1)
            },
        },
    )
    return model


# ---------------------------------------------------------------------------
# Kuenneth product of two models


def product_model(A: DgRingModel, B: DgRingModel, truncation=None):
    """Tensor-product model with Koszul-sign product.

    Requires both factors to have torsion-free cohomology in every degree so
    that the tensor basis computes the cohomology of the product space.
    """
    for M, name in ((A, "first"), (B, "second")):
        for k in range(M.D + 1):
            if M.cohomology(k).invariants()[1]:
                raise InputError(
                    f"{name} factor has torsion in H^{k}; Kuenneth model undefined"
                )
    D = min(A.D + B.D, DEFAULT_TRUNCATION if truncation is None else int(truncation))
    pairs = []  # per degree: list of (i, a, j, b)
    for k in range(D + 1):
        level = []
        for i in range(min(k, A.D) + 1):
            j = k - i
            if j > B.D:
                continue
            for a in range(A.dim(i)):
                for b in range(B.dim(j)):
                    level.append((i, a, j, b))
        pairs.append(level)
    index = [{p: n for n, p in enumerate(level)} for level in pairs]

    def label(i, a, j, b):
        la, lb = A.basis[i][a], B.basis[j][b]
        if la == "1" and lb == "1":
            return "1"
        if lb == "1":
            return la
        if la == "1":
            return lb
        return f"{la}*{lb}"

    basis = [[label(*p) for p in level] for level in pairs]
    diff = {}
    for k in range(D):
        mat = zeros(len(pairs[k + 1]), len(pairs[k]))
        for col, (i, a, j, b) in enumerate(pairs[k]):
            da = A.d(i, A.basis_vector(i, a))
            for a2 in range(A.dim(i + 1)):
                if da[a2] and (i + 1, a2, j, b) in index[k + 1]:
                    mat[index[k + 1][(i + 1, a2, j, b)], col] += da[a2]
            db = B.d(j, B.basis_vector(j, b))
            sign = -1 if i % 2 else 1
            for b2 in range(B.dim(j + 1)):
                if db[b2] and (i, a, j + 1, b2) in index[k + 1]:
                    mat[index[k + 1][(i, a, j + 1, b2)], col] += sign * db[b2]
        diff[k] = mat

    product = {}
    for k1 in range(D + 1):
        for k2 in range(D + 1 - k1):
            for n1, (i1, a1, j1, b1) in enumerate(pairs[k1]):
                for n2, (i2, a2, j2, b2) in enumerate(pairs[k2]):
                    if (k1 == 0 and n1 == 0) or (k2 == 0 and n2 == 0):
                        continue
                    sign = -1 if (j1 % 2 and i2 % 2) else 1
                    pa = A.mul(i1, A.basis_vector(i1, a1), i2, A.basis_vector(i2, a2))
                    pb = B.mul(j1, B.basis_vector(j1, b1), j2, B.basis_vector(j2, b2))
                    table = {}
                    for a3 in range(A.dim(i1 + i2)):
                        if pa[a3] == 0:
                            continue
                        for b3 in range(B.dim(j1 + j2)):
                            if pb[b3] == 0:
                                continue
                            key = (i1 + i2, a3, j1 + j2, b3)
                            if key in index[k1 + k2]:
                                c = index[k1 + k2][key]
                                table[c] = table.get(c, 0) + sign * pa[a3] * pb[b3]
                    table = {c: v for c, v in table.items() if v}
                    if table:
                        product[(k1, n1, k2, n2)] = table

    meta = {"source": "product", "factors": [A.meta.get("name"), B.meta.get("name")]}
    return DgRingModel(basis, diff, product, meta=meta)


# ---------------------------------------------------------------------------
# builtin models


def _exterior_tables(labels, D):
    """Basis (by subsets) and product table of an exterior algebra on deg-1 gens."""
    n = len(labels)
    subsets = [[] for _ in range(D + 1)]
    for size in range(min(n, D) + 1):
        subsets[size] = sorted(itertools.combinations(range(n), size))
    index = [{s: i for i, s in enumerate(level)} for level in subsets]

    def merge_sign(S, T):
        if set(S) & set(T):
            return None, 0
        inv = sum(1 for s in S for t in T if s > t)
        return tuple(sorted(S + T)), (-1) ** inv

    basis = [
        ["".join(labels[i] for i in s) if s else "1" for s in level]
        for level in subsets
    ]
    product = {}
    for i in range(D + 1):
        for j in range(D + 1 - i):
            for a, S in enumerate(subsets[i]):
                for b, T in enumerate(subsets[j]):
                    if (i == 0 and a == 0) or (j == 0 and b == 0):
                        continue
                    merged, sign = merge_sign(S, T)
                    if merged is not None and len(merged) <= D:
                        product[(i, a, j, b)] = {index[len(merged)][merged]: sign}
    return basis, product, subsets, index


def _torus_model(k, truncation):
    D = min(k, truncation)
    labels = [f"x{i + 1}" for i in range(k)]
    basis, product, _, _ = _exterior_tables(labels, D)
    return DgRingModel(basis, {}, product, meta={"name": f"torus{k}"})


def _sphere_model(k, truncation):
    basis = [["1"]] + [[] for _ in range(min(k, truncation))]
    if k <= truncation:
        basis[k] = [f"v{k}"]
    return DgRingModel(basis, {}, {}, meta={"name": f"sphere{k}"})


def _point_model():
    return DgRingModel([["1"]], {}, {}, meta={"name": "point"})


def _surface_model(genus, truncation):
    if genus == 0:
        return _sphere_model(2, truncation)
    labels = []
    for g in range(genus):
        labels += [f"a{g + 1}", f"b{g + 1}"]
    basis = [["1"], labels, ["v"]]
    product = {}
    for g in range(genus):
        ia, ib = 2 * g, 2 * g + 1
        product[(1, ia, 1, ib)] = {0: 1}
        product[(1, ib, 1, ia)] = {0: -1}
    return DgRingModel(basis, {}, product, meta={"name": f"surface{genus}"})


def _heisenberg_model(k, truncation):
    """Exterior algebra on x, y, z in degree 1 with d(z) = k * x^y."""
    labels = ["x", "y", "z"]
    D = min(3, truncation)
    basis, product, subsets, index = _exterior_tables(labels, D)
    diff = {}
    xy = index[2][(0, 1)]
    d1 = zeros(len(subsets[2]), len(subsets[1]))
    d1[xy, index[1][(2,)]] = k
    diff[1] = d1
    return DgRingModel(basis, diff, product, meta={"name": f"heisenberg{k}"})


BUILTIN_NAMES = ("point", "sphere", "torus", "surface", "heisenberg")


def builtin_space(name, params=None, truncation=DEFAULT_TRUNCATION):
    """Named base-space model; every builtin passes full validation."""
    params = dict(params or {})
    if name == "point":
        model, used = _point_model(), {}
    elif name == "sphere":
        k = int(params.get("k", 2))
        if not 1 <= k <= 4:
            raise InputError(f"sphere dimension {k} outside 1..4")
        model, used = _sphere_model(k, truncation), {"k": k}
    elif name == "torus":
        k = int(params.get("k", 2))
        if not 1 <= k <= 3:
            raise InputError(f"torus dimension {k} outside 1..3")
        model, used = _torus_model(k, truncation), {"k": k}
    elif name == "surface":
        genus = int(params.get("genus", 2))
        if genus < 0:
            raise InputError("genus must be nonnegative")
        model, used = _surface_model(genus, truncation), {"genus": genus}
    elif name == "heisenberg":
        k = int(params.get("k", 1))
        model, used = _heisenberg_model(k, truncation), {"k": k}
    else:
        raise InputError(
            f"unknown builtin space {name!r} (have {', '.join(BUILTIN_NAMES)})"
        )
    model.meta["builtin"] = {"name": name, "params": used}
    return model
