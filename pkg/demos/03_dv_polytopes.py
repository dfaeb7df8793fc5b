"""Dirichlet-Voronoi polytopes, face lattices and subordination schemes.

The DV polytope of a form collects the points at least as close to the
origin as to any other lattice point.  It is dual to the Delaunay star: its
vertices are exactly the circumcenters of the Delaunay cells around 0, and
its lattice translates tile space, so its volume is exactly 1.
"""

from lcone.exact import SymMat
from lcone.delaunay import delaunay_star
from lcone.polyhedral import (
    dv_polytope,
    face_lattice,
    incidence_graph,
    polytope_volume,
    subordination_scheme,
)

examples = [
    ("square lattice", SymMat.identity(2)),
    ("hexagonal lattice", SymMat([[2, 1], [1, 2]])),
    ("cubic lattice", SymMat.identity(3)),
    ("fcc lattice", SymMat([[2, 1, 1], [1, 2, 1], [1, 1, 2]])),
    ("bcc-type lattice", SymMat([[3, -1, -1], [-1, 3, -1], [-1, -1, 3]])),
]

for name, q in examples:
    poly = dv_polytope(q)
    _, fv = face_lattice(poly)
    star = delaunay_star(q)
    print(f"{name}:")
    print(f"  facets {poly.n_facets}, vertices {poly.n_vertices}, f-vector {fv}")
    print(f"  volume {polytope_volume(poly)} (tiles a fundamental domain)")
    print(f"  Delaunay cells at the origin: {len(star.cells)} "
          f"(= DV vertex count, by duality)")
    scheme = subordination_scheme(poly)
    if scheme:
        print(f"  subordination scheme (polygon census per level): {scheme}")
    n, colors, edges = incidence_graph(poly)
    print(f"  vertex-facet incidence graph: {n} nodes, {len(edges)} incidences")
    print()

# The fcc DV polytope is the rhombic dodecahedron (12 rhombic facets, 14
# vertices); the bcc-type one is the truncated octahedron (6 squares and 8
# hexagons), the most symmetric space filler in d = 3.
