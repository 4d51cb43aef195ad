"""Space models: parsing, validation, simplicial cohomology, cup products.

Independent oracle for the simplicial fixtures: Betti numbers over Q and
dimensions over small prime fields via plain Gaussian elimination (no Smith
form involved), combined with the universal-coefficient bookkeeping
  rank H^k = dim_Q ker d_k - rank_Q d_{k-1},
  p-torsion present in H^k  iff  rank_{F_p} d_{k-1} < rank_Q d_{k-1}.
"""

from fractions import Fraction

import pytest

from tdk.errors import InputError, ModelError, SchemaError
from tdk.exact_linalg import intvec
from tdk.space_model import (
    Cocycle,
    DgRingModel,
    SimplicialComplex,
    builtin_space,
    cohomology_ring,
    parse_space,
    product_model,
)

BOUNDARY_TETRAHEDRON = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]

TORUS7 = [sorted([i, (i + 1) % 7, (i + 3) % 7]) for i in range(7)] + [
    sorted([i, (i + 2) % 7, (i + 3) % 7]) for i in range(7)
]

RP2_6 = [
    [0, 1, 3],
    [0, 1, 5],
    [0, 2, 3],
    [0, 2, 4],
    [0, 4, 5],
    [1, 2, 4],
    [1, 2, 5],
    [1, 3, 4],
    [2, 3, 5],
    [3, 4, 5],
]


# ---------------------------------------------------------------------------
# field-rank oracle


def field_rank(mat, p=None):
    """Rank by Gaussian elimination over Q (p=None) or F_p."""
    rows = [
        [Fraction(x) if p is None else x % p for x in row] for row in mat
    ]
    ncols = len(rows[0]) if rows else 0
    rank = 0
    col = 0
    while rank < len(rows) and col < ncols:
        piv = next(
            (r for r in range(rank, len(rows)) if rows[r][col] != 0), None
        )
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = (
            1 / rows[rank][col]
            if p is None
            else pow(int(rows[rank][col]), p - 2, p)
        )
        rows[rank] = [
            x * inv if p is None else (x * inv) % p for x in rows[rank]
        ]
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [
                    a - f * b if p is None else (a - f * b) % p
                    for a, b in zip(rows[r], rows[rank])
                ]
        rank += 1
        col += 1
    return rank


def oracle_cohomology(K):
    """(rank, set of primes with torsion) per degree, via field ranks only."""
    out = []
    for k in range(K.dim + 1):
        dk = [[int(x) for x in row] for row in K.coboundary(k).tolist()]
        dk1 = (
            [[int(x) for x in row] for row in K.coboundary(k - 1).tolist()]
            if k >= 1
            else [[0] * 0 for _ in range(K.n_simplices(k))]
        )
        rk = field_rank(dk) if dk else 0
        rk1 = field_rank(dk1) if k >= 1 else 0
        betti = K.n_simplices(k) - rk - rk1
        torsion_primes = set()
        for p in (2, 3, 5, 7):
            if k >= 1 and field_rank(dk1, p) < rk1:
                torsion_primes.add(p)
        out.append((betti, torsion_primes))
    return out


# ---------------------------------------------------------------------------
# simplicial complexes


def test_boundary_tetrahedron_is_a_2_sphere():
    K = SimplicialComplex(4, BOUNDARY_TETRAHEDRON)
    assert K.dim == 2
    assert K.euler_characteristic() == 2
    assert oracle_cohomology(K) == [(1, set()), (0, set()), (1, set())]
    assert [K.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (0, ()),
        (1, ()),
    ]


def test_seven_vertex_torus():
    K = SimplicialComplex(7, TORUS7)
    assert K.euler_characteristic() == 0
    assert oracle_cohomology(K) == [(1, set()), (2, set()), (1, set())]
    assert [K.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (2, ()),
        (1, ()),
    ]


def test_six_vertex_projective_plane():
    K = SimplicialComplex(6, RP2_6)
    assert K.euler_characteristic() == 1
    # oracle: H^2 has rank 0 with 2-torsion and no other torsion
    assert oracle_cohomology(K) == [(1, set()), (0, set()), (0, {2})]
    assert K.cohomology(1).invariants() == (0, ())
    assert K.cohomology(2).invariants() == (0, (2,))


def test_euler_characteristic_equals_alternating_rank_sum():
    for facets, nv in [
        (BOUNDARY_TETRAHEDRON, 4),
        (TORUS7, 7),
        (RP2_6, 6),
    ]:
        K = SimplicialComplex(nv, facets)
        chi = sum(
            (-1) ** k * K.cohomology(k).invariants()[0]
            for k in range(K.dim + 1)
        )
        assert chi == K.euler_characteristic()


def test_complex_rejects_bad_facets():
    with pytest.raises(SchemaError):
        SimplicialComplex(3, [[0, 0, 1]])
    with pytest.raises(SchemaError):
        SimplicialComplex(3, [[0, 1, 7]])
    with pytest.raises(SchemaError):
        SimplicialComplex(6, [[0, 1, 2, 3, 4, 5]])  # dimension above bound


# ---------------------------------------------------------------------------
# parsing


def test_parse_simplicial_document():
    doc = {"format": "simplicial", "vertices": "4", "facets": BOUNDARY_TETRAHEDRON}
    K = parse_space(doc)
    assert isinstance(K, SimplicialComplex) and K.dim == 2


def test_parse_torus_dgring_document():
    doc = {
        "format": "dgring",
        "degrees": "2",
        "basis": [["1"], ["x1", "x2"], ["v"]],
        "diff": [],
        "product": [
            {"i_deg": "1", "i_idx": "0", "j_deg": "1", "j_idx": "1",
             "result": [{"idx": "0", "coeff": "1"}]},
            {"i_deg": "1", "i_idx": "1", "j_deg": "1", "j_idx": "0",
             "result": [{"idx": "0", "coeff": "-1"}]},
        ],
    }
    M = parse_space(doc)
    assert isinstance(M, DgRingModel)
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (2, ()),
        (1, ()),
    ]


def test_parse_rejects_d_squared_nonzero():
    doc = {
        "format": "dgring",
        "degrees": 3,
        "basis": [["1"], ["a"], ["b"], ["c"]],
        "diff": [
            {"deg": 1, "matrix": [[1]]},  # d(a) = b
            {"deg": 2, "matrix": [[1]]},  # d(b) = c, so d(d(a)) = c != 0
        ],
        "product": [],
    }
    with pytest.raises(ModelError) as err:
        parse_space(doc)
    assert "d(d(" in str(err.value)


def test_parse_rejects_commutativity_failure():
    doc = {
        "format": "dgring",
        "degrees": 2,
        "basis": [["1"], ["x", "y"], ["v"]],
        "product": [
            {"i_deg": 1, "i_idx": 0, "j_deg": 1, "j_idx": 1,
             "result": [{"idx": 0, "coeff": 1}]},
            {"i_deg": 1, "i_idx": 1, "j_deg": 1, "j_idx": 0,
             "result": [{"idx": 0, "coeff": 1}]},  # should be -1
        ],
    }
    with pytest.raises(ModelError) as err:
        parse_space(doc)
    assert "commutativity" in str(err.value)


def test_parse_rejects_unknown_format_and_bad_schema():
    with pytest.raises(SchemaError):
        parse_space({"format": "cubical"})
    with pytest.raises(SchemaError):
        parse_space([1, 2, 3])
    with pytest.raises(SchemaError):
        parse_space({"format": "simplicial", "vertices": 3})


# ---------------------------------------------------------------------------
# cohomology_ring


def test_ring_of_sphere_triangulation():
    K = SimplicialComplex(4, BOUNDARY_TETRAHEDRON)
    M = cohomology_ring(K)
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (0, ()),
        (1, ()),
    ]
    # nontrivial products all vanish
    assert all(not v for (i, a, j, b), v in M.product.items() if i and j)


def test_ring_of_torus_triangulation_has_symplectic_pairing():
    K = SimplicialComplex(7, TORUS7)
    M = cohomology_ring(K)
    assert M.cohomology(1).invariants() == (2, ())
    assert M.cohomology(2).invariants() == (1, ())
    x1 = Cocycle(1, M.basis_vector(1, 0))
    x2 = Cocycle(1, M.basis_vector(1, 1))
    pairing = M.cup_class(x1, x2)
    # x1 cup x2 generates H^2
    assert pairing in [(1,), (-1,)]
    assert M.cup_class(x1, x1) == (0,)
    assert M.cup_class(x2, x2) == (0,)


def test_ring_of_projective_plane_has_torsion_model():
    K = SimplicialComplex(6, RP2_6)
    M = cohomology_ring(K)
    assert M.cohomology(2).invariants() == (0, (2,))
    assert M.cohomology(1).invariants() == (0, ())
    assert M.meta["validity_hypothesis"]


def test_ring_representatives_choice_does_not_change_constants():
    # shifting the chosen representatives by coboundaries leaves every
    # structure constant alone
    K = SimplicialComplex(7, TORUS7)
    M = cohomology_ring(K)
    H1 = K.cohomology(1)
    H2 = K.cohomology(2)
    reps = H1.generator_vectors()
    d0 = K.coboundary(0)
    shift = d0.dot(intvec([1, -2, 3, 0, 0, -1, 2]))
    for a in range(2):
        for b in range(2):
            expected = H2.reduce(K.cup(1, reps[a], 1, reps[b]))
            moved = H2.reduce(K.cup(1, reps[a] + shift, 1, reps[b] + shift))
            assert expected == moved


def test_ring_rejects_disconnected_complex():
    K = SimplicialComplex(4, [[0, 1], [2, 3]])
    with pytest.raises(ModelError):
        cohomology_ring(K)


# ---------------------------------------------------------------------------
# product models


def test_point_is_unit_for_products():
    X = builtin_space("torus", {"k": 2})
    P = builtin_space("point")
    M = product_model(P, X)
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        X.cohomology(k).invariants() for k in range(3)
    ]


def test_circle_times_circle_is_torus():
    S1 = builtin_space("sphere", {"k": 1})
    M = product_model(S1, S1)
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (2, ()),
        (1, ()),
    ]
    # alternating product on degree-1 classes
    a = M.basis_vector(1, 0)
    b = M.basis_vector(1, 1)
    assert list(M.mul(1, a, 1, b)) == [int(-x) for x in M.mul(1, b, 1, a)]


def test_s2_x_s1_kuenneth():
    M = product_model(builtin_space("sphere", {"k": 2}), builtin_space("sphere", {"k": 1}))
    assert [M.cohomology(k).invariants() for k in range(4)] == [
        (1, ()),
        (1, ()),
        (1, ()),
        (1, ()),
    ]


def test_product_model_rejects_torsion_factor():
    K = SimplicialComplex(6, RP2_6)
    M = cohomology_ring(K)
    with pytest.raises(InputError):
        product_model(M, builtin_space("sphere", {"k": 1}))


# ---------------------------------------------------------------------------
# builtins


def test_builtin_spheres():
    assert builtin_space("sphere", {"k": 3}).betti()[:4] == [
        (1, ()),
        (0, ()),
        (0, ()),
        (1, ()),
    ]


def test_builtin_torus3_ranks():
    M = builtin_space("torus", {"k": 3})
    assert [M.cohomology(k).invariants()[0] for k in range(4)] == [1, 3, 3, 1]


def test_builtin_surface_genus2():
    M = builtin_space("surface", {"genus": 2})
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        (1, ()),
        (4, ()),
        (1, ()),
    ]
    # symplectic pairing: a1 b1 = v, a1 a2 = 0
    assert M.cup_class(Cocycle(1, M.basis_vector(1, 0)), Cocycle(1, M.basis_vector(1, 1))) == (1,)
    assert M.cup_class(Cocycle(1, M.basis_vector(1, 0)), Cocycle(1, M.basis_vector(1, 2))) == (0,)


def test_builtin_heisenberg():
    M = builtin_space("heisenberg")
    assert M.cohomology(1).invariants() == (2, ())
    assert M.cohomology(2).invariants() == (2, ())
    assert M.cohomology(3).invariants() == (1, ())
    # the k=2 variant picks up torsion: H^2 = Z^2 + Z/2
    M2 = builtin_space("heisenberg", {"k": 2})
    assert M2.cohomology(2).invariants() == (2, (2,))


def test_builtin_unknown_name():
    with pytest.raises(InputError):
        builtin_space("moebius")


def test_triangulated_models_match_builtins():
    # same rank/torsion per degree; product pairing compared via its
    # invariant factors, which are basis-change independent
    from tdk.exact_linalg import smith_normal_form, intmat

    K = SimplicialComplex(7, TORUS7)
    M = cohomology_ring(K)
    T = builtin_space("torus", {"k": 2})
    assert [M.cohomology(k).invariants() for k in range(3)] == [
        T.cohomology(k).invariants() for k in range(3)
    ]

    def pairing_invariants(model):
        H1 = model.cohomology(1)
        reps = [Cocycle(1, v) for v in H1.generator_vectors()]
        mat = [
            [model.cup_class(x, y)[0] for y in reps] for x in reps
        ]
        sf = smith_normal_form(intmat(mat))
        return [d for d in sf.diagonal if d]

    assert pairing_invariants(M) == pairing_invariants(T) == [1, 1]
