import itertools
import random

import pytest

from lcone.delaunay import delaunay_star
from lcone.equiv import (
    ColoredGraph,
    UnimodularMap,
    automorphism_group,
    canonical_labeling,
    cone_equivalent,
    form_certificate,
    form_equivalence,
    group_order,
    stabilizer_order,
)
from lcone.exact import Mat, SymMat, det
from lcone.scone import cone_facets, secondary_cone

A2 = SymMat([[2, 1], [1, 2]])
I2 = SymMat.identity(2)


def random_unimodular(rng, d, entries=3):
    while True:
        u = Mat([[rng.randint(-entries, entries) for _ in range(d)] for _ in range(d)])
        if det(u) in (1, -1):
            return u


def backtrack_isometries(q1, q2):
    """Vector-backtracking isometry search, used as an independent oracle.

    Builds U column by column: column j ranges over lattice vectors of the
    right q1-norm, pruned by the pairwise inner products demanded by q2.
    Returns all U with U^T q1 U = q2.
    """
    from lcone.lattice import short_vectors

    d = q1.d
    cand = {}
    for j in range(d):
        want = q2.entry(j, j)
        cand[j] = [v for v in short_vectors(q1, want).vectors
                   if q1.quad(v) == want]
    out = []
    cols = []

    def place(j):
        if j == d:
            u = Mat.from_cols(cols)
            if det(u) in (1, -1):
                out.append(u)
            return
        for v in cand[j]:
            if all(q1.bilin(cols[i], v) == q2.entry(i, j) for i in range(j)):
                cols.append(v)
                place(j + 1)
                cols.pop()

    place(0)
    return out


class TestGraphCanonicalization:
    def test_four_cycle(self):
        g = ColoredGraph(4, [0] * 4, {(0, 1): 1, (1, 2): 1, (2, 3): 1, (0, 3): 1})
        form, lab, gens, order = canonical_labeling(g)
        assert order == 8

    def test_relabel_invariance(self):
        rng = random.Random(13)
        base_edges = {(0, 1): 1, (1, 2): 2, (2, 3): 1, (0, 3): 2, (0, 2): 3}
        g = ColoredGraph(4, [0, 0, 1, 1], base_edges)
        form0, *_ = canonical_labeling(g)
        for _ in range(20):
            perm = list(range(4))
            rng.shuffle(perm)
            edges = {}
            for (i, j), c in base_edges.items():
                a, b = perm[i], perm[j]
                edges[(min(a, b), max(a, b))] = c
            colors = [0] * 4
            for v in range(4):
                colors[perm[v]] = [0, 0, 1, 1][v]
            form1, *_ = canonical_labeling(ColoredGraph(4, colors, edges))
            assert form1 == form0

    def test_bipartite_square_incidence(self):
        from lcone.polyhedral import dv_polytope, incidence_graph

        n, colors, edges = incidence_graph(dv_polytope(I2))
        form, lab, gens, order = canonical_labeling(ColoredGraph(n, colors, edges))
        assert order == 8   # dihedral group of the square

    def test_different_colorings_differ(self):
        ka = ColoredGraph(3, [0, 0, 1], {(0, 1): 1, (1, 2): 1, (0, 2): 1})
        kb = ColoredGraph(3, [0, 1, 1], {(0, 1): 1, (1, 2): 1, (0, 2): 1})
        assert canonical_labeling(ka)[0] != canonical_labeling(kb)[0]

    def test_group_order_helper(self):
        # symmetric group on 4 points from two generators
        s4 = [(1, 0, 2, 3), (1, 2, 3, 0)]
        assert group_order(4, s4) == 24


class TestCertificates:
    def test_invariance_under_unimodular(self):
        rng = random.Random(31)
        for q in (A2, I2, SymMat([[2, 0, 1], [0, 3, 1], [1, 1, 4]])):
            c0 = form_certificate(q)
            for _ in range(20):
                u = random_unimodular(rng, q.d)
                cu = form_certificate(q.congruence(u))
                assert cu.hash == c0.hash and cu.canon == c0.canon

    def test_mirror_forms_equal(self):
        assert form_certificate(A2).hash == form_certificate(SymMat([[2, -1], [-1, 2]])).hash

    def test_inequivalent_forms_differ(self):
        assert form_certificate(I2).hash != form_certificate(A2).hash

    def test_digest_algorithm(self):
        a = form_certificate(A2, algorithm="md5")
        b = form_certificate(A2, algorithm="sha256")
        assert a.hash != b.hash and len(a.hash) == 32


class TestFormEquivalence:
    def test_diag_swap(self):
        u = form_equivalence(SymMat([[1, 0], [0, 2]]), SymMat([[2, 0], [0, 1]]))
        assert u is not None

    def test_sign_flip(self):
        u = form_equivalence(A2, SymMat([[2, -1], [-1, 2]]))
        assert u is not None

    def test_not_equivalent(self):
        assert form_equivalence(I2, SymMat([[1, 0], [0, 2]])) is None
        assert form_equivalence(I2, A2) is None

    def test_witness_soundness(self):
        rng = random.Random(7)
        for q in (A2, SymMat.identity(3), SymMat([[2, 0, 1], [0, 3, 1], [1, 1, 4]])):
            u0 = random_unimodular(rng, q.d)
            q2 = q.congruence(u0)
            u = form_equivalence(q, q2)
            assert u is not None
            assert q.congruence(u.matrix) == q2
            assert det(u.matrix) in (1, -1)


class TestAutomorphisms:
    @pytest.mark.parametrize("q,order", [
        (I2, 8),
        (A2, 12),
        (SymMat([[1, 0], [0, 2]]), 4),
        (SymMat.identity(3), 48),
        (SymMat.identity(4), 384),
    ])
    def test_orders(self, q, order):
        _, got = automorphism_group(q)
        assert got == order

    def test_brute_force_d2(self):
        def brute(q):
            count = 0
            for ents in itertools.product(range(-2, 3), repeat=4):
                u = Mat([ents[:2], ents[2:]])
                if det(u) in (1, -1) and q.congruence(u) == q:
                    count += 1
            return count

        for q in (I2, A2, SymMat([[1, 0], [0, 2]]), SymMat([[2, 1], [1, 3]])):
            _, order = automorphism_group(q)
            assert order == brute(q)

    def test_generators_fix_form(self):
        maps, order = automorphism_group(A2)
        for m in maps:
            assert A2.congruence(m.matrix) == A2
        assert order % 2 == 0   # -identity always present

    def test_d4_form(self):
        d4 = SymMat([[2, -1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]])
        _, order = automorphism_group(d4)
        assert order == 1152

    def test_backtracking_oracle_d3(self):
        # the canonical-labeling route against the direct isometry search
        fcc = SymMat([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        forms = [SymMat.identity(3), fcc,
                 SymMat([[3, -1, -1], [-1, 3, -1], [-1, -1, 3]])]
        for q in forms:
            _, order = automorphism_group(q)
            assert order == len(backtrack_isometries(q, q))

    def test_backtracking_oracle_equivalence(self):
        rng = random.Random(19)
        fcc = SymMat([[2, 1, 1], [1, 2, 1], [1, 1, 2]])
        u0 = random_unimodular(rng, 3, 2)
        other = fcc.congruence(u0)
        sols = backtrack_isometries(fcc, other)
        assert sols, "oracle must find an isometry for equivalent forms"
        assert form_equivalence(fcc, other) is not None
        assert form_equivalence(fcc, SymMat.identity(3)) is None
        assert backtrack_isometries(fcc, SymMat.identity(3)) == []


class TestConeEquivalence:
    def test_flip_mirror_cones(self):
        mirror = SymMat([[2, -1], [-1, 2]])
        c1 = secondary_cone(delaunay_star(A2))
        c2 = secondary_cone(delaunay_star(mirror))
        u = cone_equivalent(c1, c2)
        assert u is not None

    def test_cone_vs_facet(self):
        cone = secondary_cone(delaunay_star(A2))
        facet = cone_facets(cone)[0]
        assert cone_equivalent(cone, facet) is None

    def test_transformed_cone(self):
        rng = random.Random(3)
        cone = secondary_cone(delaunay_star(A2))
        u = random_unimodular(rng, 2)
        star2 = delaunay_star(A2.congruence(u))
        cone2 = secondary_cone(star2)
        assert cone_equivalent(cone, cone2) is not None

    def test_stabilizer_orders(self):
        c1 = secondary_cone(delaunay_star(SymMat([[1]])))
        assert stabilizer_order(c1) == 2
        c2 = secondary_cone(delaunay_star(A2))
        assert stabilizer_order(c2) == 12
        facet = [f for f in cone_facets(c2)][0]
        from lcone.scone import contains_pd

        pd_facets = [f for f in cone_facets(c2) if contains_pd(f)]
        assert all(stabilizer_order(f) == 8 for f in pd_facets)

    def test_unimodular_map_validation(self):
        with pytest.raises(ValueError):
            UnimodularMap(Mat([[2, 0], [0, 1]]))
