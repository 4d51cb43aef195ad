"""Base spaces: simplicial complexes, ring models, and their cohomology.

Walks through the two input formats, integral cohomology with torsion, cup
products on a triangulated torus, and the Kuenneth product construction.
"""

from tdk import (
    Cocycle,
    SimplicialComplex,
    builtin_space,
    cohomology_ring,
    parse_space,
    product_model,
)
from tdk.fixtures import PROJECTIVE_PLANE_6, TORUS_7, simplicial_doc


def show(title, model, top):
    groups = []
    for k in range(top + 1):
        rank, torsion = model.cohomology(k).invariants()
        parts = ["Z"] * rank + [f"Z/{d}" for d in torsion]
        groups.append(" + ".join(parts) if parts else "0")
    print(f"{title}: " + ", ".join(f"H^{k}={g}" for k, g in enumerate(groups)))


# --- a triangulated 2-sphere: the boundary of a tetrahedron -----------------

sphere = parse_space(simplicial_doc("boundary-tetrahedron"))
print("boundary of a tetrahedron:", sphere)
print("Euler characteristic:", sphere.euler_characteristic())
show("H*(S^2 triangulation)", sphere, 2)

# --- the 7-vertex torus and its cup product ---------------------------------

torus = SimplicialComplex(7, TORUS_7)
show("H*(7-vertex torus)", torus, 2)

ring = cohomology_ring(torus)
x1 = Cocycle(1, ring.basis_vector(1, 0))
x2 = Cocycle(1, ring.basis_vector(1, 1))
print("x1 cup x2 in H^2:", ring.cup_class(x1, x2), "(a generator)")
print("x1 cup x1 in H^2:", ring.cup_class(x1, x1))

# --- torsion: the 6-vertex projective plane ----------------------------------

rp2 = SimplicialComplex(6, PROJECTIVE_PLANE_6)
show("H*(6-vertex projective plane)", rp2, 2)
model = cohomology_ring(rp2)
print("ring model of the projective plane keeps the 2-torsion:",
      model.cohomology(2).invariants())
print("validity note:", model.meta["validity_hypothesis"][:60] + "...")

# --- built-in models and products --------------------------------------------

show("built-in T^3", builtin_space("torus", {"k": 3}), 3)
show("built-in genus-2 surface", builtin_space("surface", {"genus": 2}), 2)
show("built-in nil 3-manifold", builtin_space("heisenberg"), 3)

s2xs1 = product_model(
    builtin_space("sphere", {"k": 2}), builtin_space("sphere", {"k": 1})
)
show("S^2 x S^1 by the product construction", s2xs1, 3)
