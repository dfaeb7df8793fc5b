"""Secondary cones of Delaunay triangulations.

A triangulation's secondary cone is cut out, inside the space of symmetric
matrices, by one linear inequality per pair of adjacent simplices; the
inequality normals are the classical regulators.  Cones are stored with
irredundant inequalities, gcd-normalized integral extreme rays, accumulated
linear-hull equalities, and the central form (the sum of the rays).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

from .delaunay import DelaunayStar, is_triangulation
from .exact import (
    AffinelyDependent,
    Mat,
    Rat,
    SymMat,
    rank_of_rows,
    solve,
    symmat_clear_denominators,
)
from .polyhedral import HRep, dual_description, rays_to_hrep


class NotATriangulation(Exception):
    pass


class EmptyRaySet(Exception):
    pass


class NonPSDRay(Exception):
    pass


def sym_dim(d: int) -> int:
    return d * (d + 1) // 2


def sym_to_functional(n: SymMat) -> tuple:
    """Lower-triangular coordinates of the linear functional <N, .>: the
    off-diagonal entries pick up a factor 2 from the trace pairing."""
    out = []
    for i in range(n.d):
        for j in range(i + 1):
            out.append(n.entry(i, j) if i == j else 2 * n.entry(i, j))
    return tuple(out)


def functional_to_sym(d: int, a: Sequence) -> SymMat:
    """Inverse of sym_to_functional up to positive scaling; result integral."""
    entries = []
    k = 0
    for i in range(d):
        for j in range(i + 1):
            entries.append(a[k] if i == j else Rat(a[k], 2))
            k += 1
    return symmat_clear_denominators(SymMat.from_lower(d, entries))


@dataclass(frozen=True)
class Regulator:
    """Integral normal of one local Delaunay wall condition."""

    matrix: SymMat
    source: tuple

    @property
    def is_degenerate(self) -> bool:
        return all(x == 0 for x in self.matrix.lower())


def regulator(points: Sequence[Sequence[int]], w: Sequence[int]) -> Regulator:
    """Wall form of the affinely independent set V and the extra point w.

    With w = sum a_v v, 1 = sum a_v, this is w w^T - sum a_v v v^T, cleared
    to integral entries with gcd 1.  The orientation (which side is positive)
    is preserved by the normalization.
    """
    pts = [tuple(p) for p in points]
    w = tuple(w)
    d = len(w)
    if len(pts) != d + 1:
        raise AffinelyDependent(f"need {d + 1} points, got {len(pts)}")
    rows = [[p[i] for p in pts] for i in range(d)]
    rows.append([1] * (d + 1))
    try:
        alphas = solve(Mat(rows), list(w) + [1])
    except Exception as exc:
        raise AffinelyDependent("affinely dependent point set") from exc
    n = SymMat.outer(w)
    for a, p in zip(alphas, pts):
        if a:
            n = n - SymMat.outer(p).scale(a)
    if all(x == 0 for x in n.lower()):
        return Regulator(SymMat.zero(d), (tuple(pts), w))
    return Regulator(symmat_clear_denominators(n), (tuple(pts), w))


def star_wall_forms(star: DelaunayStar) -> list[SymMat]:
    """Deduplicated regulator matrices over all adjacent simplex pairs of a
    triangulation, one per wall class, each positive on the generating form."""
    d = star.dim
    q = star.form
    seen = {}
    for pos, entries in enumerate(star.adjacency):
        rep = star.cells[star.classes[pos]]
        if len(rep.vertices) != d + 1:
            raise NotATriangulation("star contains a non-simplex cell")
        for facet, nclass, shift in entries:
            nb = star.cells[star.classes[nclass]].translate(shift)
            extra = [v for v in nb.vertices if v not in set(facet)]
            if len(extra) != 1:
                raise NotATriangulation("adjacent cell is not a simplex")
            reg = regulator(rep.vertices, extra[0])
            if reg.is_degenerate:
                continue
            val = reg.matrix.pair(q)
            if val <= 0:
                raise AssertionError("regulator is not positive on its own form")
            seen[reg.matrix.lower()] = reg.matrix
    return [seen[k] for k in sorted(seen)]


@dataclass(frozen=True)
class ConeDesc:
    """Polyhedral cone in symmetric-matrix space.

    equalities: linear-hull constraints (accumulated along face descent)
    inequalities: irredundant facet normals within the hull, <N, Q> >= 0
    rays: gcd-normalized integral extreme rays, sorted
    central: sum of the rays
    """

    d: int
    dim_ambient: int
    equalities: tuple
    inequalities: tuple
    rays: tuple
    dim: int
    central: SymMat

    def key(self) -> tuple:
        return tuple(r.lower() for r in self.rays)

    def validate(self):
        m = sym_dim(self.d)
        assert self.dim_ambient == m
        for r in self.rays:
            if not r.is_positive_semidefinite():
                raise NonPSDRay(f"ray {r} is not positive semidefinite")
            for e in self.equalities:
                assert e.pair(r) == 0
            for n in self.inequalities:
                assert n.pair(r) >= 0
        assert rank_of_rows([r.lower() for r in self.rays]) == self.dim
        total = SymMat.zero(self.d)
        for r in self.rays:
            total = total + r
        assert total == self.central


def cone_from_rays(d: int, rays: Sequence[SymMat],
                   equalities: Optional[tuple] = None) -> ConeDesc:
    """Assemble a ConeDesc from extreme rays: inequalities are recomputed
    irredundantly within the linear hull; equalities may be supplied
    (accumulated from face descent) or derived from the hull."""
    m = sym_dim(d)
    rays = sorted(rays, key=lambda r: r.lower())
    if not rays:
        raise EmptyRaySet("cone has no rays")
    vecs = [r.lower() for r in rays]
    h = rays_to_hrep(vecs, m)
    ineqs = tuple(functional_to_sym(d, a) for a in h.inequalities)
    dim = rank_of_rows(vecs)
    if equalities is None:
        equalities = tuple(functional_to_sym(d, e) for e in h.equalities)
    else:
        eq_rows = [sym_to_functional(e) for e in equalities]
        if eq_rows and rank_of_rows(eq_rows) != m - dim:
            raise AssertionError("accumulated equalities do not cut out the hull")
    central = rays[0]
    for r in rays[1:]:
        central = central + r
    cone = ConeDesc(d, m, tuple(equalities), ineqs, tuple(rays), dim, central)
    cone.validate()
    return cone


def secondary_cone(star: DelaunayStar, must_be_triangulation: bool = True) -> ConeDesc:
    """Secondary cone of a Delaunay triangulation.

    Collects the wall forms, converts to extreme rays by double description,
    and keeps exactly the facet-supporting inequalities.
    """
    if must_be_triangulation and not is_triangulation(star):
        raise NotATriangulation("star is not a triangulation")
    d = star.dim
    m = sym_dim(d)
    walls = star_wall_forms(star)
    hrep = HRep(m, (), tuple(sym_to_functional(n) for n in walls))
    ray_vecs = dual_description(hrep)
    rays = [SymMat.from_lower(d, v) for v in ray_vecs]
    keep = []
    for n in walls:
        on = [r.lower() for r in rays if n.pair(r) == 0]
        if on and rank_of_rows(on) == m - 1:
            keep.append(n)
    rays_sorted = sorted(rays, key=lambda r: r.lower())
    central = rays_sorted[0]
    for r in rays_sorted[1:]:
        central = central + r
    cone = ConeDesc(d, m, (), tuple(keep), tuple(rays_sorted), m, central)
    cone.validate()
    if cone.dim != m:
        raise AssertionError("secondary cone of a triangulation must be full-dimensional")
    return cone


def central_form(rays: Sequence[SymMat]) -> SymMat:
    """Sum of the (gcd-normalized) generating rays."""
    rays = list(rays)
    if not rays:
        raise EmptyRaySet("no rays")
    total = rays[0]
    for r in rays[1:]:
        total = total + r
    return total


def cone_facets(cone: ConeDesc) -> list[ConeDesc]:
    """Facet cones of a cone, one per irredundant inequality.

    Each facet keeps the subset of rays tight on the inequality; its own
    inequalities are recomputed within the facet hull.  Cones of dimension 1
    have no facets other than the origin and return an empty list.
    """
    if cone.dim <= 1:
        return []
    out = []
    for n in cone.inequalities:
        on = [r for r in cone.rays if n.pair(r) == 0]
        facet = cone_from_rays(cone.d, on, equalities=cone.equalities + (n,))
        if facet.dim != cone.dim - 1:
            raise AssertionError("facet dimension mismatch")
        out.append(facet)
    return out


def contains_pd(cone: ConeDesc) -> bool:
    """Whether the relative interior of the cone meets the positive definite
    forms: with positive semidefinite rays this holds iff the central form is
    positive definite."""
    for r in cone.rays:
        if not r.is_positive_semidefinite():
            raise NonPSDRay("cone has a non-PSD ray")
    return cone.central.is_positive_definite()


def fundamental_face(cone: ConeDesc) -> Optional[ConeDesc]:
    """Smallest face containing all rays of rank > 1, or None when every ray
    has rank 1 (the zonotopal case)."""
    high = [r for r in cone.rays if r.rank() > 1]
    if not high:
        return None
    active = tuple(n for n in cone.inequalities
                   if all(n.pair(r) == 0 for r in high))
    face_rays = [r for r in cone.rays
                 if all(n.pair(r) == 0 for n in active)]
    if not active:
        return cone
    return cone_from_rays(cone.d, face_rays, equalities=cone.equalities + active)


@lru_cache(maxsize=65536)
def _ray_rank(r: SymMat) -> int:
    return r.rank()


def rank_profile(cone: ConeDesc) -> dict[int, int]:
    """Histogram of matrix ranks over the generating rays."""
    out: dict[int, int] = {}
    for r in cone.rays:
        k = _ray_rank(r)
        out[k] = out.get(k, 0) + 1
    return dict(sorted(out.items()))


def cone_to_dict(cone: ConeDesc) -> dict:
    return {
        "d": cone.d,
        "dim": cone.dim,
        "rays": [list(r.lower()) for r in cone.rays],
        "central": list(cone.central.lower()),
        "ineqs": [list(n.lower()) for n in cone.inequalities],
        "eqs": [list(e.lower()) for e in cone.equalities],
    }


def cone_from_dict(data: dict) -> ConeDesc:
    d = data["d"]
    m = sym_dim(d)
    rays = tuple(SymMat.from_lower(d, v) for v in data["rays"])
    ineqs = tuple(SymMat.from_lower(d, v) for v in data["ineqs"])
    eqs = tuple(SymMat.from_lower(d, v) for v in data.get("eqs", []))
    central = SymMat.from_lower(d, data["central"])
    return ConeDesc(d, m, eqs, ineqs, rays, data["dim"], central)
