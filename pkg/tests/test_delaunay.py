import random

import pytest

from lcone.delaunay import (
    Cell,
    NotAFacet,
    adjacent_cell,
    cell_facets,
    circumcenter,
    delaunay_star,
    initial_cell,
    is_triangulation,
    neighbor_triangulation,
)
from lcone.exact import AffinelyDependent, Mat, NotPositiveDefinite, Rat, SymMat, det, inverse
from lcone.lattice import closest_vectors

A2 = SymMat([[2, 1], [1, 2]])
I2 = SymMat.identity(2)


class TestCircumcenter:
    def test_right_triangle(self):
        c, r2 = circumcenter(I2, [(0, 0), (1, 0), (0, 1)])
        assert c == (Rat(1, 2), Rat(1, 2)) and r2 == Rat(1, 2)

    def test_a2(self):
        c, r2 = circumcenter(A2, [(0, 0), (1, 0), (0, 1)])
        assert c == (Rat(1, 3), Rat(1, 3)) and r2 == Rat(2, 3)

    def test_dependent(self):
        with pytest.raises(AffinelyDependent):
            circumcenter(I2, [(0, 0), (1, 0), (2, 0)])


class TestInitialCell:
    def test_square(self):
        cell = initial_cell(I2)
        assert len(cell.vertices) == 4
        assert (0, 0) in cell.vertices
        assert cell.sqradius == Rat(1, 2)

    def test_a2_triangle(self):
        cell = initial_cell(A2)
        assert len(cell.vertices) == 3
        assert (0, 0) in cell.vertices

    def test_cube(self):
        cell = initial_cell(SymMat.identity(3))
        assert len(cell.vertices) == 8

    def test_not_pd(self):
        with pytest.raises(NotPositiveDefinite):
            initial_cell(SymMat([[1, 2], [2, 1]]))

    def test_empty_sphere_postcondition(self):
        rng = random.Random(2)
        for _ in range(6):
            d = rng.choice([2, 3])
            rows = [[0] * d for _ in range(d)]
            for i in range(d):
                rows[i][i] = rng.randint(2, 5)
                for j in range(i):
                    rows[i][j] = rows[j][i] = rng.randint(-1, 1)
            q = SymMat(rows)
            if not q.is_positive_definite():
                continue
            cell = initial_cell(q)
            best, mins = closest_vectors(q, cell.center)
            assert best == cell.sqradius
            assert set(mins) == set(cell.vertices)


class TestAdjacentCell:
    def test_a2_flip_side(self):
        cell = Cell(((0, 0), (0, 1), (1, 0)), (Rat(1, 3), Rat(1, 3)), Rat(2, 3))
        nb = adjacent_cell(A2, cell, [(1, 0), (0, 1)])
        assert nb.vertices == ((0, 1), (1, 0), (1, 1))
        assert nb.center == (Rat(2, 3), Rat(2, 3))

    def test_square_translate(self):
        cell = initial_cell(I2)
        facets = cell_facets(cell, 2)
        for facet in facets:
            nb = adjacent_cell(I2, cell, facet)
            assert len(nb.vertices) == 4

    def test_diagonal_not_facet(self):
        cell = Cell(((0, 0), (0, 1), (1, 0), (1, 1)), (Rat(1, 2), Rat(1, 2)), Rat(1, 2))
        with pytest.raises(NotAFacet):
            adjacent_cell(I2, cell, [(0, 0), (1, 1)])


class TestDelaunayStar:
    @pytest.mark.parametrize("q,cells,classes,tri", [
        (I2, 4, 1, False),
        (A2, 6, 2, True),
        (SymMat([[1, 0], [0, 2]]), 4, 1, False),
        (SymMat([[1]]), 2, 1, True),
        (SymMat.identity(3), 8, 1, False),
    ])
    def test_counts(self, q, cells, classes, tri):
        star = delaunay_star(q)
        assert len(star.cells) == cells
        assert len(star.classes) == classes
        assert is_triangulation(star) == tri

    def test_every_cell_contains_origin(self):
        star = delaunay_star(A2)
        zero = (0, 0)
        for cell in star.cells:
            assert zero in cell.vertices

    def test_equivariance(self):
        # star of U^T Q U equals U^{-1} star(Q), as vertex sets
        rng = random.Random(9)
        forms = [A2, SymMat.identity(3), SymMat([[2, 0, 1], [0, 3, 1], [1, 1, 4]])]
        for q in forms:
            d = q.d
            while True:
                u = Mat([[rng.randint(-2, 2) for _ in range(d)] for _ in range(d)])
                if det(u) in (1, -1):
                    break
            q2 = q.congruence(u)
            star1 = delaunay_star(q)
            star2 = delaunay_star(q2)
            ui = inverse(u)
            mapped = set()
            for cell in star1.cells:
                vs = tuple(sorted(tuple(int(x) for x in ui.mul_vec(v)) for v in cell.vertices))
                mapped.add(vs)
            assert mapped == set(c.vertices for c in star2.cells)

    def test_tiling_volume(self):
        # translation class volumes add up to one fundamental domain
        from lcone.polyhedral import polytope_from_vertices, polytope_volume

        for q in (A2, I2, SymMat.identity(3), SymMat([[2, 1, 1], [1, 2, 1], [1, 1, 2]])):
            star = delaunay_star(q)
            total = Rat(0)
            for idx in star.classes:
                cell = star.cells[idx]
                poly = polytope_from_vertices(cell.vertices, q.d)
                total += polytope_volume(poly)
            assert total == 1

    def test_refinement_of_sum(self):
        # cells of Del(Q + Q') are contained in cells of Del(Q) and Del(Q')
        from lcone.classify import principal_form
        from lcone.scone import secondary_cone

        q = principal_form(2)
        star = delaunay_star(q)
        cone = secondary_cone(star)
        qa = cone.rays[0] + cone.rays[1]      # boundary form (coarser)
        qb = cone.central                     # interior form
        if not qa.is_positive_definite():
            qa = qa + cone.rays[2]
        qsum = qa + qb
        fine = delaunay_star(qsum)
        for coarse_form in (qa, qb):
            coarse = delaunay_star(coarse_form)
            for cell in fine.cells:
                hit = any(set(cell.vertices) <= set(c2.vertices) for c2 in coarse.cells)
                assert hit


class TestNeighborTriangulation:
    def test_d2_mirror(self):
        from lcone.scone import secondary_cone

        star = delaunay_star(A2)
        cone = secondary_cone(star)
        # wall with PD relative interior: sum of the facet's rays
        from lcone.scone import cone_facets, contains_pd

        crossed = 0
        for facet in cone_facets(cone):
            if not contains_pd(facet):
                continue
            nb = neighbor_triangulation(star, facet.central, cone.central)
            assert is_triangulation(nb)
            assert nb.class_keys() != star.class_keys()
            crossed += 1
        assert crossed == 3

    def test_wallpoint_must_be_on_wall(self):
        from lcone.delaunay import NotOnSingleFacet
        from lcone.scone import secondary_cone

        star = delaunay_star(A2)
        cone = secondary_cone(star)
        with pytest.raises(NotOnSingleFacet):
            neighbor_triangulation(star, cone.central, cone.central)
