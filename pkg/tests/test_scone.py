import random

import pytest

from lcone.delaunay import delaunay_star
from lcone.exact import SymMat
from lcone.scone import (
    EmptyRaySet,
    NotATriangulation,
    central_form,
    cone_facets,
    cone_from_rays,
    contains_pd,
    fundamental_face,
    rank_profile,
    regulator,
    secondary_cone,
    sym_to_functional,
)

A2 = SymMat([[2, 1], [1, 2]])


class TestRegulator:
    def test_hexagonal_wall(self):
        reg = regulator([(0, 0), (1, 0), (0, 1)], (1, 1))
        assert reg.matrix == SymMat([[0, 1], [1, 0]])

    def test_other_side(self):
        reg = regulator([(0, 0), (1, 0), (0, 1)], (1, -1))
        assert reg.matrix == SymMat([[0, -1], [-1, 2]])

    def test_degenerate(self):
        reg = regulator([(0, 0), (1, 0), (0, 1)], (1, 0))
        assert reg.is_degenerate

    def test_gcd_normalized(self):
        reg = regulator([(0, 0), (2, 0), (0, 2)], (2, 2))
        g = 0
        from math import gcd

        for x in reg.matrix.lower():
            g = gcd(g, x)
        assert g == 1


class TestSecondaryCone:
    def test_d1(self):
        star = delaunay_star(SymMat([[1]]))
        cone = secondary_cone(star)
        assert [r.lower() for r in cone.rays] == [(1,)]
        assert cone.central == SymMat([[1]])
        assert cone.dim == 1

    def test_a2(self):
        star = delaunay_star(A2)
        cone = secondary_cone(star)
        assert set(r.lower() for r in cone.rays) == {(1, 0, 0), (0, 0, 1), (1, 1, 1)}
        assert cone.central == A2
        assert len(cone.inequalities) == 3
        assert cone.dim == 3
        # inequalities are the three classical wall conditions, up to scaling
        vals = sorted(sym_to_functional(n) for n in cone.inequalities)
        assert vals == sorted([(0, 2, 0), (2, -2, 0), (0, -2, 2)])

    def test_rejects_coarse(self):
        star = delaunay_star(SymMat.identity(2))
        with pytest.raises(NotATriangulation):
            secondary_cone(star)

    def test_membership(self):
        # any strictly positive combination of rays has the same star classes
        star = delaunay_star(A2)
        cone = secondary_cone(star)
        rng = random.Random(4)
        for n in cone.inequalities:
            assert n.pair(A2) > 0
        for _ in range(20):
            q = SymMat.zero(2)
            for r in cone.rays:
                q = q + r.scale(rng.randint(1, 9))
            star2 = delaunay_star(q)
            assert star2.class_keys() == star.class_keys()

    def test_facet_point_coarsens(self):
        # PD points on a facet have strictly coarser subdivisions refined by T
        star = delaunay_star(A2)
        cone = secondary_cone(star)
        for facet in cone_facets(cone):
            if not contains_pd(facet):
                continue
            coarse = delaunay_star(facet.central)
            assert len(coarse.cells) < len(star.cells)
            for cell in star.cells:
                assert any(set(cell.vertices) <= set(c2.vertices) for c2 in coarse.cells)


class TestConeOps:
    def setup_method(self):
        self.cone = secondary_cone(delaunay_star(A2))

    def test_central_form(self):
        assert central_form(self.cone.rays) == A2
        single = self.cone.rays[0]
        assert central_form([single]) == single
        with pytest.raises(EmptyRaySet):
            central_form([])

    def test_facets(self):
        facets = cone_facets(self.cone)
        assert len(facets) == 3
        for f in facets:
            assert f.dim == 2
            assert len(f.rays) == 2
            assert len(f.equalities) == 1
        # d=1 cones have no facets
        d1 = secondary_cone(delaunay_star(SymMat([[1]])))
        assert cone_facets(d1) == []

    def test_contains_pd(self):
        assert contains_pd(self.cone)
        facets = cone_facets(self.cone)
        assert all(contains_pd(f) for f in facets)
        ray_cone = cone_from_rays(2, [self.cone.rays[0]])
        assert not contains_pd(ray_cone)

    def test_fundamental_face_zonotopal(self):
        assert fundamental_face(self.cone) is None

    def test_fundamental_face_nontrivial(self):
        d4 = SymMat([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]])
        assert d4.rank() == 4 and d4.is_positive_definite()
        cone = cone_from_rays(4, [d4])
        ff = fundamental_face(cone)
        assert ff is not None and ff.dim == 1 and ff.rays == cone.rays

    def test_rank_profile(self):
        assert rank_profile(self.cone) == {1: 3}

    def test_pyramid_dimension(self):
        # dim C = dim F(C) + number of rank-1 rays outside F(C)
        for cone in (self.cone,):
            ff = fundamental_face(cone)
            fdim = 0 if ff is None else ff.dim
            ff_rays = set() if ff is None else set(r.lower() for r in ff.rays)
            loose = [r for r in cone.rays
                     if r.rank() == 1 and r.lower() not in ff_rays]
            assert cone.dim == fdim + len(loose)
