"""Exact polyhedral computations: double description conversion between
halfspace and ray representations, Dirichlet-Voronoi polytopes, face
lattices, subordination schemes and volumes.

All cones are handled through the incremental double description method over
the integers; polytopes are treated through their homogenization cones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact import (
    Mat,
    Rat,
    SymMat,
    clear_denominators,
    gcd_normalize,
    inverse,
    nullspace,
    rank_of_rows,
    solve,
)


class NotPointed(Exception):
    """The cone has a nontrivial lineality space after quotienting equalities."""


@dataclass(frozen=True)
class HRep:
    """Halfspace representation of a cone: a x = 0 and a x >= 0 constraints."""

    dim: int
    equalities: tuple = ()
    inequalities: tuple = ()

    def __post_init__(self):
        for a in self.inequalities:
            if not any(a):
                raise ValueError("zero inequality functional")


def _dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def _integer_rows(rows) -> list[tuple]:
    return [clear_denominators(r) for r in rows]


def _independent_rows(rows: Sequence[Sequence], target: int) -> list[int]:
    """Indices of the first `target` linearly independent rows."""
    chosen: list[int] = []
    acc: list[list] = []
    for idx, row in enumerate(rows):
        cand = acc + [list(row)]
        if rank_of_rows(cand) > len(acc):
            chosen.append(idx)
            acc = cand
            if len(chosen) == target:
                return chosen
    raise NotPointed("inequality system does not have full rank")


def _dd_cone(ineqs: list[tuple], dim: int) -> list[tuple]:
    """Extreme rays of {y : a y >= 0 for a in ineqs} in R^dim.

    Requires the system to have rank ``dim`` (pointed cone).  All arithmetic
    is over the integers; rays come back gcd-normalized and sorted.
    """
    if dim == 0:
        return []
    if rank_of_rows(ineqs) < dim:
        raise NotPointed("lineality space detected")
    init = _independent_rows(ineqs, dim)
    a0 = Mat([ineqs[i] for i in init])
    inv = inverse(a0)
    rays = [clear_denominators(inv.col(j)) for j in range(dim)]
    rest = [k for k in range(len(ineqs)) if k not in init]
    # Insertion heuristic: inequalities satisfied by many initial rays first.
    rest.sort(key=lambda k: (-sum(1 for r in rays if _dot(ineqs[k], r) >= 0), k))

    processed = list(init)
    masks = []
    for r in rays:
        m = 0
        for pos, k in enumerate(processed):
            if _dot(ineqs[k], r) == 0:
                m |= 1 << pos
        masks.append(m)

    for k in rest:
        a = ineqs[k]
        vals = [_dot(a, r) for r in rays]
        if all(v >= 0 for v in vals):
            bit = 1 << len(processed)
            masks = [m | bit if v == 0 else m for m, v in zip(masks, vals)]
            processed.append(k)
            continue
        plus = [i for i, v in enumerate(vals) if v > 0]
        zero = [i for i, v in enumerate(vals) if v == 0]
        minus = [i for i, v in enumerate(vals) if v < 0]
        new_rays = []
        new_masks = []
        need = dim - 2
        for ip in plus:
            mp = masks[ip]
            for im in minus:
                m = mp & masks[im]
                if bin(m).count("1") < need:
                    continue
                adjacent = True
                for io, mo in enumerate(masks):
                    if io != ip and io != im and m & ~mo == 0:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vm = vals[ip], vals[im]
                comb = tuple(vp * y - vm * x for x, y in zip(rays[ip], rays[im]))
                new_rays.append(gcd_normalize(comb, orient=False))
                new_masks.append(m)
        bit = 1 << len(processed)
        keep_rays = [rays[i] for i in plus + zero]
        keep_masks = [masks[i] | (bit if i in zero else 0) for i in plus + zero]
        rays = keep_rays + new_rays
        masks = keep_masks + [m | bit for m in new_masks]
        processed.append(k)

    # Rays are already primitive integer vectors; sort for determinism.
    return sorted(set(rays))


def dual_description(h: HRep) -> list[tuple]:
    """Extreme rays of the cone given by an HRep.

    Equalities are quotiented out first; the remaining cone must be pointed,
    otherwise NotPointed is raised.  Rays are integral, gcd-normalized with
    the leading-entry sign convention, and sorted.
    """
    m = h.dim
    if h.equalities:
        basis = nullspace(list(h.equalities))
        if not basis:
            return []
        bmat = Mat.from_cols(basis)
        ineqs_y = _integer_rows([bmat.transpose().mul_vec(a) for a in h.inequalities]) \
            if h.inequalities else []
        ineqs_y = [a for a in ineqs_y if any(a)]
        s = len(basis)
        rays_y = _dd_cone(ineqs_y, s)
        rays_x = [clear_denominators(bmat.mul_vec(y)) for y in rays_y]
        return sorted(set(rays_x))
    ineqs = _integer_rows(h.inequalities)
    ineqs = [a for a in ineqs if any(a)]
    return _dd_cone(ineqs, m)


def rays_to_hrep(rays: Sequence[Sequence], dim: int) -> HRep:
    """Irredundant halfspace description of the cone generated by the rays.

    The equalities cut out the linear hull; the inequalities are the facet
    normals within that hull, projected onto it for determinism.
    """
    rays = [tuple(r) for r in rays]
    if not rays:
        eqs = tuple(tuple(1 if i == j else 0 for i in range(dim)) for j in range(dim))
        return HRep(dim, eqs, ())
    eq_basis = nullspace(rays)
    equalities = tuple(gcd_normalize(e) for e in eq_basis)
    # Span basis from the rays themselves.
    idx = []
    acc: list[list] = []
    for i, r in enumerate(rays):
        cand = acc + [list(r)]
        if rank_of_rows(cand) > len(acc):
            idx.append(i)
            acc = cand
    s = len(idx)
    bmat = Mat.from_cols([rays[i] for i in idx])
    btb = bmat.transpose() @ bmat
    ycoords = []
    for r in rays:
        w = solve(btb, bmat.transpose().mul_vec(r))
        ycoords.append(w)
    polar_ineqs = _integer_rows(ycoords)
    normals_y = _dd_cone(polar_ineqs, s)
    # A pointed cone that spans its hull has a full-dimensional polar there.
    if s and rank_of_rows(normals_y) < s:
        raise NotPointed("ray set generates a non-pointed cone")
    ineqs = []
    for g in normals_y:
        w = solve(btb, g)
        a = clear_denominators(bmat.mul_vec(w))
        ineqs.append(gcd_normalize(a, orient=False))
    # Orient each inequality to be nonnegative on the cone (already true by
    # construction: <a, ray_i> = <g, y_i> >= 0).
    return HRep(dim, equalities, tuple(sorted(set(ineqs))))


def extreme_rays(rays: Sequence[Sequence], dim: int) -> list[tuple]:
    """Canonical extreme-ray set of the cone generated by arbitrary rays."""
    return dual_description(rays_to_hrep(rays, dim))


@dataclass(frozen=True)
class LatPolytope:
    """Bounded full-dimensional polytope with exact rational vertex
    coordinates, irredundant facets (a, b) meaning a x + b >= 0, and exact
    vertex-facet incidences stored as bitmasks."""

    dim: int
    vertices: tuple
    facets: tuple
    vertex_masks: tuple = field(repr=False)   # per vertex: bitmask over facets
    facet_masks: tuple = field(repr=False)    # per facet: bitmask over vertices

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_facets(self) -> int:
        return len(self.facets)


def polytope_from_halfspaces(halfspaces: Sequence[tuple], dim: int) -> LatPolytope:
    """Vertex description of {x : a x + b >= 0} via the homogenization cone.

    The input may contain redundant halfspaces; only facet-supporting ones
    are retained.  The polytope must be bounded and full-dimensional.
    """
    hs = sorted(set(
        clear_denominators(tuple(a) + (b,))
        for a, b in ((tuple(h[0]), h[1]) for h in halfspaces)
    ))
    rays = _dd_cone(_integer_rows(hs), dim + 1)
    if not rays:
        raise ValueError("empty or degenerate polytope")
    verts = []
    for r in rays:
        t = r[-1]
        if t <= 0:
            raise ValueError("halfspace system is unbounded")
        verts.append(tuple(Rat(x, t) for x in r[:-1]))
    verts = sorted(set(verts))
    # Facet-supporting halfspaces: incident vertices have affine rank dim-1.
    facets = []
    facet_masks = []
    for h in hs:
        a, b = h[:-1], h[-1]
        mask = 0
        inc = []
        for i, v in enumerate(verts):
            if _dot(a, v) + b == 0:
                mask |= 1 << i
                inc.append(v)
        if not inc:
            continue
        v0 = inc[0]
        if rank_of_rows([[x - y for x, y in zip(v, v0)] for v in inc[1:]] or [[0] * dim]) == dim - 1:
            facets.append((tuple(a), b))
            facet_masks.append(mask)
    vertex_masks = []
    for i in range(len(verts)):
        m = 0
        for j, fm in enumerate(facet_masks):
            if fm >> i & 1:
                m |= 1 << j
        vertex_masks.append(m)
    return LatPolytope(dim, tuple(verts), tuple(facets),
                       tuple(vertex_masks), tuple(facet_masks))


def polytope_from_vertices(vertices: Sequence[Sequence], dim: int) -> LatPolytope:
    """Facet description of a full-dimensional polytope from its vertices."""
    vset = sorted(set(tuple(v) for v in vertices))
    rays = [tuple(v) + (1,) for v in vset]
    h = rays_to_hrep(_integer_rows(rays), dim + 1)
    if h.equalities:
        raise ValueError("polytope is not full-dimensional")
    halfspaces = [(g[:-1], g[-1]) for g in h.inequalities]
    return polytope_from_halfspaces(halfspaces, dim)


def dv_polytope(q: SymMat) -> LatPolytope:
    """Dirichlet-Voronoi polytope of a positive definite form, exactly.

    Facet candidates are the nonzero vectors v with Q[v] <= 4 mu where mu is
    the largest squared circumradius of the Delaunay cells; every facet
    vector satisfies this since its midpoint lies in the polytope.  The
    result is cross-checked against the Delaunay star: the vertices must be
    exactly the circumcenters of the cells having the origin as a vertex.
    """
    from .delaunay import delaunay_star
    from .lattice import short_vectors

    star = delaunay_star(q)
    mu = max(cell.sqradius for cell in star.cells)
    cands = short_vectors(q, 4 * mu)
    halfspaces = []
    for v in cands.vectors:
        a = tuple(-2 * x for x in q.mul_vec(v))
        b = q.quad(v)
        halfspaces.append((a, b))
    poly = polytope_from_halfspaces(halfspaces, q.d)
    centers = sorted(set(tuple(c.center) for c in star.cells))
    if list(poly.vertices) != centers:
        raise AssertionError("DV vertices do not match Delaunay circumcenters")
    return poly


def incidence_graph(p: LatPolytope):
    """Vertex-facet incidence graph as (n_nodes, node_colors, edges dict).

    Vertices come first, then facets; the two sides carry distinct colors.
    Suitable for canonical labeling in the equivalence module.
    """
    nv, nf = p.n_vertices, p.n_facets
    node_colors = [0] * nv + [1] * nf
    edges = {}
    for j, fm in enumerate(p.facet_masks):
        for i in range(nv):
            if fm >> i & 1:
                edges[(i, nv + j)] = 1
    return nv + nf, node_colors, edges


def face_lattice(p: LatPolytope):
    """All faces as vertex index sets grouped by dimension, plus f-vector.

    Faces are generated by closing the facet incidence sets under
    intersection; the dimension of a face is the affine rank of its
    vertices.  The full polytope is included, the empty face is not.
    """
    d = p.dim
    nv = p.n_vertices
    full = (1 << nv) - 1
    facet_sets = set(p.facet_masks)
    faces = set(facet_sets)
    frontier = set(facet_sets)
    while frontier:
        new = set()
        for f in frontier:
            for g in facet_sets:
                h = f & g
                if h and h not in faces:
                    new.add(h)
        faces |= new
        frontier = new
    by_dim: dict[int, list] = {k: [] for k in range(d + 1)}
    for mask in faces:
        vs = [p.vertices[i] for i in range(nv) if mask >> i & 1]
        if len(vs) == 1:
            by_dim[0].append(mask)
            continue
        v0 = vs[0]
        r = rank_of_rows([[x - y for x, y in zip(v, v0)] for v in vs[1:]])
        by_dim[r].append(mask)
    by_dim[d] = [full]
    for k in by_dim:
        by_dim[k].sort()
    f_vector = tuple(len(by_dim[k]) for k in range(d))
    return by_dim, f_vector


def subordination_scheme(p: LatPolytope) -> dict[int, dict[int, int]]:
    """Face-incidence histograms between consecutive levels of the face
    lattice: for each k in 2..d-1, the map sending n to the number of k-faces
    incident to exactly n of the (k-1)-faces (for k = 2, the polygon census
    of the 2-faces).  Empty for d <= 2.

    Counting subordinate faces (downward) rather than containing faces is
    what gives the invariant its separating power: on simple polytopes every
    (k-1)-face lies in the same number of k-faces, so the upward histograms
    carry no information beyond the f-vector.
    """
    d = p.dim
    scheme: dict[int, dict[int, int]] = {}
    if d < 3:
        return scheme
    by_dim, _ = face_lattice(p)
    for k in range(2, d):
        hist: dict[int, int] = {}
        for high in by_dim[k]:
            n = sum(1 for low in by_dim[k - 1] if low & ~high == 0)
            hist[n] = hist.get(n, 0) + 1
        scheme[k] = dict(sorted(hist.items()))
    return scheme


def serialize_subordination(scheme: dict[int, dict[int, int]]) -> str:
    parts = []
    for k in sorted(scheme):
        inner = ",".join(f"{n}:{c}" for n, c in sorted(scheme[k].items()))
        parts.append(f"{k}=[{inner}]")
    return ";".join(parts)


def _triangulate_face(mask: int, by_dim, dim_of: dict[int, int], p: LatPolytope, memo: dict):
    """Fan triangulation of a face, as tuples of vertex indices."""
    if mask in memo:
        return memo[mask]
    k = dim_of[mask]
    idxs = [i for i in range(p.n_vertices) if mask >> i & 1]
    if k == 0:
        memo[mask] = [tuple(idxs)]
        return memo[mask]
    apex = idxs[0]
    simplices = []
    for sub in by_dim[k - 1]:
        if sub & ~mask == 0 and not (sub >> apex & 1):
            for s in _triangulate_face(sub, by_dim, dim_of, p, memo):
                simplices.append((apex,) + s)
    memo[mask] = simplices
    return simplices


def polytope_volume(p: LatPolytope):
    """Exact volume via fan triangulation from the first vertex."""
    from .exact import det as _det

    d = p.dim
    by_dim, _ = face_lattice(p)
    dim_of = {}
    for k, masks in by_dim.items():
        for m in masks:
            dim_of[m] = k
    memo: dict[int, list] = {}
    full = (1 << p.n_vertices) - 1
    total = Rat(0)
    fact = 1
    for i in range(2, d + 1):
        fact *= i
    for simplex in _triangulate_face(full, by_dim, dim_of, p, memo):
        v0 = p.vertices[simplex[0]]
        rows = [[x - y for x, y in zip(p.vertices[i], v0)] for i in simplex[1:]]
        dv = _det(Mat(rows))
        total += abs(Rat(dv))
    return total / fact


__all__ = [
    "HRep",
    "LatPolytope",
    "NotPointed",
    "dual_description",
    "dv_polytope",
    "extreme_rays",
    "face_lattice",
    "incidence_graph",
    "polytope_from_halfspaces",
    "polytope_from_vertices",
    "polytope_volume",
    "rays_to_hrep",
    "serialize_subordination",
    "subordination_scheme",
]
