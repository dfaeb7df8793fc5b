"""Delaunay subdivisions of Z^d with respect to a positive definite form.

The subdivision is represented by its star at the origin: all full
dimensional Delaunay cells having 0 as a vertex, together with translation
class representatives and facet adjacencies.  Every constructed cell is
verified against the empty-sphere condition, so the algorithms used to find
cells only need to terminate, not to be trusted.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .exact import (
    AffinelyDependent,
    Mat,
    NotPositiveDefinite,
    Rat,
    SymMat,
    nullspace,
    rank_of_rows,
    solve,
)
from .lattice import closest_vectors, enumerate_close, short_vectors


class NotAFacet(Exception):
    pass


class NotOnSingleFacet(Exception):
    pass


@dataclass(frozen=True)
class Cell:
    """Full-dimensional Delaunay cell: lattice vertices on an empty sphere."""

    vertices: tuple          # sorted tuple of integer vectors
    center: tuple            # exact rational circumcenter
    sqradius: object         # exact squared circumradius

    def translate(self, t: Sequence[int]) -> "Cell":
        return Cell(
            tuple(sorted(tuple(x + s for x, s in zip(v, t)) for v in self.vertices)),
            tuple(c + s for c, s in zip(self.center, t)),
            self.sqradius,
        )

    def normalized(self) -> tuple["Cell", tuple]:
        """Translate the lexicographically smallest vertex to the origin.
        Returns (cell, shift) with cell = self translated by shift."""
        base = min(self.vertices)
        shift = tuple(-x for x in base)
        return self.translate(shift), shift


@dataclass(frozen=True)
class DelaunayStar:
    """Star of the origin in the Delaunay subdivision of a form."""

    form: SymMat
    cells: tuple                 # all cells with 0 as a vertex, sorted
    classes: tuple               # indices into cells: translation class reps
    adjacency: tuple             # per class: tuple of (facet, class index, shift)

    @property
    def dim(self) -> int:
        return self.form.d

    def class_cells(self):
        return tuple(self.cells[i] for i in self.classes)

    def class_keys(self):
        return tuple(self.cells[i].vertices for i in self.classes)


def circumcenter(q: SymMat, points: Sequence[Sequence[int]]) -> tuple[tuple, object]:
    """Exact center and squared radius of the sphere through d+1 affinely
    independent lattice points, in the metric of Q."""
    pts = [tuple(p) for p in points]
    d = q.d
    if len(pts) != d + 1:
        raise AffinelyDependent(f"need {d + 1} points, got {len(pts)}")
    p0 = pts[0]
    rows = []
    rhs = []
    for p in pts[1:]:
        diff = [a - b for a, b in zip(p, p0)]
        rows.append([2 * x for x in q.mul_vec(diff)])
        rhs.append(q.quad(p) - q.quad(p0))
    try:
        center = solve(Mat(rows), rhs)
    except Exception as exc:
        raise AffinelyDependent("points are affinely dependent") from exc
    r2 = q.quad([c - x for c, x in zip(center, p0)])
    return center, r2


def _require_pd(q: SymMat):
    if not q.is_positive_definite():
        raise NotPositiveDefinite("form is not positive definite")


def _sphere_value(q: SymMat, center, point):
    return q.quad([c - x for c, x in zip(center, point)])


def _parametric_contact(q: SymMat, base_vertex, center, sqradius, direction):
    """First lattice contact when the sphere center moves along `direction`.

    The sphere through the current vertex set stays through it (direction is
    Q-orthogonal to its affine hull) and the first lattice points reached on
    the positive side of the motion are returned, together with the contact
    center and squared radius.  The current sphere must be empty.
    """
    hq = q.mul_vec(direction)
    hq0 = sum(a * b for a, b in zip(hq, base_vertex))

    def denom(w):
        return sum(a * b for a, b in zip(hq, w)) - hq0

    # Bootstrap candidate on the positive side: reflect a basis step.
    step = next(k for k in range(q.d) if hq[k] != 0)
    probe = list(base_vertex)
    probe[step] += 1 if hq[step] > 0 else -1
    probe = tuple(probe)
    f_probe = _sphere_value(q, center, probe) - sqradius
    lam_probe = Rat(f_probe) / (2 * denom(probe))
    c_probe = tuple(c + lam_probe * h for c, h in zip(center, direction))
    r_probe = _sphere_value(q, c_probe, base_vertex)

    best_lam = None
    hits = []
    for w, _ in enumerate_close(q, c_probe, r_probe):
        dw = denom(w)
        if dw <= 0:
            continue
        lam = (Rat(_sphere_value(q, center, w)) - sqradius) / (2 * dw)
        if best_lam is None or lam < best_lam:
            best_lam = lam
            hits = [w]
        elif lam == best_lam:
            hits.append(w)
    assert best_lam is not None and best_lam >= 0
    new_center = tuple(c + best_lam * h for c, h in zip(center, direction))
    new_r2 = _sphere_value(q, new_center, base_vertex)
    return best_lam, new_center, new_r2, sorted(hits)


def initial_cell(q: SymMat) -> Cell:
    """Some Delaunay cell of Q with 0 as a vertex.

    Grows an empty sphere through an affinely independent vertex set one
    dimension at a time: among the two Q-orthogonal motions of the center,
    the first lattice contact with the smaller circumradius is taken.  The
    final vertex set is saturated to the full closest-vector set, and the
    empty-sphere postcondition is verified.
    """
    _require_pd(q)
    d = q.d
    n0 = min(q.entry(i, i) for i in range(d))
    sv = short_vectors(q, n0)
    min_norm = min(q.quad(v) for v in sv.vectors)
    v1 = min(v for v in sv.vectors if q.quad(v) == min_norm)
    zero = tuple([0] * d)
    verts = [zero, v1]
    center = tuple(Rat(x, 2) for x in v1)
    r2 = Rat(q.quad(v1), 4)
    while len(verts) < d + 1:
        rows = [q.mul_vec([a - b for a, b in zip(w, verts[0])]) for w in verts[1:]]
        direction = nullspace(rows)[0]
        sides = []
        for h in (direction, tuple(-x for x in direction)):
            lam, c2, rr2, hits = _parametric_contact(q, verts[0], center, r2, h)
            sides.append((rr2, hits[0], c2))
        sides.sort()
        rr2, w_new, c2 = sides[0]
        verts.append(w_new)
        center, r2 = c2, rr2
    best, mins = closest_vectors(q, center)
    if best != r2 or zero not in mins:
        raise AssertionError("initial cell failed the empty-sphere check")
    return Cell(tuple(sorted(mins)), center, r2)


def cell_facets(cell: Cell, d: int) -> list[tuple]:
    """Vertex sets of the (d-1)-faces of a cell, each sorted, in sorted order.

    Simplices get the combinatorial shortcut (drop one vertex at a time);
    general cells go through the polyhedral conversion.
    """
    if len(cell.vertices) == d + 1:
        return [cell.vertices[:i] + cell.vertices[i + 1:]
                for i in range(d + 1)]
    from .polyhedral import polytope_from_vertices

    poly = polytope_from_vertices(cell.vertices, d)
    vmap = {v: i for i, v in enumerate(poly.vertices)}
    out = []
    for mask in poly.facet_masks:
        fverts = tuple(sorted(v for v in cell.vertices if mask >> vmap[v] & 1))
        out.append(fverts)
    return sorted(out)


def adjacent_cell(q: SymMat, cell: Cell, facet: Sequence[Sequence[int]]) -> Cell:
    """The unique Delaunay cell on the other side of a facet of `cell`.

    The center slides along the line of centers Q-orthogonal to the facet,
    away from the cell, until the first lattice points enter the sphere.
    """
    fverts = tuple(sorted(tuple(v) for v in facet))
    vset = set(cell.vertices)
    if not set(fverts) <= vset:
        raise NotAFacet("facet vertices are not vertices of the cell")
    f0 = fverts[0]
    rows = [q.mul_vec([a - b for a, b in zip(w, f0)]) for w in fverts[1:]]
    if not rows:
        rows = [[0] * q.d]
    directions = nullspace(rows)
    span_rank = rank_of_rows([[a - b for a, b in zip(w, f0)] for w in fverts[1:]]) if len(fverts) > 1 else 0
    if span_rank != q.d - 1 or len(directions) != 1:
        raise NotAFacet("facet does not span a hyperplane")
    h = directions[0]
    hq = q.mul_vec(h)
    hq0 = sum(a * b for a, b in zip(hq, f0))
    others = [v for v in cell.vertices if v not in set(fverts)]
    dens = [sum(a * b for a, b in zip(hq, v)) - hq0 for v in others]
    if any(x == 0 for x in dens):
        raise NotAFacet("a non-facet vertex lies on the facet hyperplane")
    if all(x > 0 for x in dens):
        h = tuple(-x for x in h)
    elif not all(x < 0 for x in dens):
        raise NotAFacet("cell vertices on both sides of the hyperplane")
    _, new_center, new_r2, _ = _parametric_contact(q, f0, cell.center, cell.sqradius, h)
    best, mins = closest_vectors(q, new_center)
    assert best == new_r2 and set(fverts) <= set(mins)
    return Cell(tuple(sorted(mins)), new_center, new_r2)


def delaunay_star(q: SymMat) -> DelaunayStar:
    """Breadth-first closure of an initial cell under facet adjacency,
    keeping the cells with 0 as a vertex; deterministic ordering."""
    _require_pd(q)
    d = q.d
    zero = tuple([0] * d)
    first = initial_cell(q)
    seen = {first.vertices: first}
    queue = deque([first])
    while queue:
        cell = queue.popleft()
        for facet in cell_facets(cell, d):
            if zero not in facet:
                continue
            nb = adjacent_cell(q, cell, facet)
            if nb.vertices not in seen:
                seen[nb.vertices] = nb
                queue.append(nb)
    keys = sorted(seen)
    cells = tuple(seen[k] for k in keys)
    index = {k: i for i, k in enumerate(keys)}
    centers = set(c.center for c in cells)
    if len(centers) != len(cells):
        raise AssertionError("duplicate circumcenters in the star")

    class_of = {}
    for cell in cells:
        norm, _ = cell.normalized()
        class_of.setdefault(norm.vertices, norm)
    class_keys = sorted(class_of)
    class_pos = {k: i for i, k in enumerate(class_keys)}
    classes = []
    for k in class_keys:
        if k not in index:
            raise AssertionError("class representative missing from the star")
        classes.append(index[k])

    adjacency = []
    for k in class_keys:
        rep = seen[k]
        entries = []
        for facet in cell_facets(rep, d):
            nb = adjacent_cell(q, rep, facet)
            nnorm, shift = nb.normalized()
            entries.append((facet, class_pos[nnorm.vertices], tuple(-s for s in shift)))
        adjacency.append(tuple(entries))
    return DelaunayStar(q, cells, tuple(classes), tuple(adjacency))


def is_triangulation(star: DelaunayStar) -> bool:
    """True iff every Delaunay cell is a simplex."""
    d = star.dim
    return all(len(c.vertices) == d + 1 for c in star.cells)


def neighbor_triangulation(star: DelaunayStar, wallpoint: SymMat, center: SymMat) -> DelaunayStar:
    """Cross the wall of the secondary cone through `wallpoint`.

    `wallpoint` must be positive definite and lie in the relative interior of
    exactly one facet of the closure of the secondary cone of `star`;
    `center` must be interior.  Evaluates the star at
    wallpoint + eps (wallpoint - center) with eps halving until the result is
    a positive definite triangulation whose closed secondary cone contains
    the wallpoint, which certifies that exactly one wall was crossed.
    """
    from .scone import star_wall_forms

    if not wallpoint.is_positive_definite():
        raise NotPositiveDefinite("wallpoint is not positive definite")
    walls = star_wall_forms(star)
    tight = [n for n in walls if n.pair(wallpoint) == 0]
    if len(tight) != 1:
        raise NotOnSingleFacet(f"wallpoint is tight on {len(tight)} walls, need exactly 1")
    if any(n.pair(wallpoint) < 0 for n in walls):
        raise NotOnSingleFacet("wallpoint is outside the closed cone")

    eps = Rat(1)
    diff = wallpoint - center
    for _ in range(64):
        cand = wallpoint + diff.scale(eps)
        eps = eps / 2
        if not cand.is_positive_definite():
            continue
        nb = delaunay_star(cand)
        if not is_triangulation(nb):
            continue
        nb_walls = star_wall_forms(nb)
        if all(n.pair(wallpoint) >= 0 for n in nb_walls):
            if nb.class_keys() == star.class_keys():
                raise AssertionError("wall crossing returned the same triangulation")
            return nb
    raise AssertionError("wall crossing did not converge")
