import json
import os

import pytest

from lcone.classify import (
    ClassDB,
    Classifier,
    DimensionUnsupported,
    IncompatibleCheckpoint,
    IncompleteDatabase,
    classify_all,
    contraction_refine,
    dimension_table,
    distinctness_check,
    enumerate_primitive,
    load_db,
    mass_check,
    principal_form,
    run_classification,
    seed_triangulation,
    subordination_collision_scan,
    zonotopal_census,
)
from lcone.delaunay import is_triangulation
from lcone.equiv import form_equivalence
from lcone.exact import Rat, SymMat
from lcone.scone import fundamental_face


A2 = SymMat([[2, 1], [1, 2]])


class TestSeeds:
    def test_principal_form_is_generic(self):
        for d in (1, 2, 3, 4):
            star = seed_triangulation(d)
            assert is_triangulation(star)

    def test_coarse_seed_is_refined(self):
        # the identity form has cubical cells; seeding still must produce a
        # triangulation (via the blend fallback)
        for d in (2, 3):
            star = seed_triangulation(d, SymMat.identity(d))
            assert is_triangulation(star)

    def test_principal_form_values(self):
        assert principal_form(2) == SymMat([[2, -1], [-1, 2]])
        assert principal_form(1) == SymMat([[1]])

    def test_dimension_guard(self):
        with pytest.raises(DimensionUnsupported):
            Classifier(6)
        with pytest.raises(DimensionUnsupported):
            Classifier(0)
        # d = 5 is structurally supported (extended run)
        Classifier(5)


class TestPrimitive:
    def test_d1(self):
        recs = enumerate_primitive(1)
        assert len(recs) == 1
        assert recs[0].stab_order == 2

    def test_d2(self):
        recs = enumerate_primitive(2)
        assert len(recs) == 1
        rec = recs[0]
        assert form_equivalence(rec.cone.central, A2) is not None
        want = {(1, 0, 0), (0, 0, 1), (1, 1, 1)}
        got = set(r.lower() for r in rec.cone.rays)
        # the stored representative is some unimodular image of the
        # hexagonal cone; ray sets match after mapping
        u = form_equivalence(rec.cone.central, A2)
        mapped = set(r.congruence(u.matrix).lower() for r in rec.cone.rays)
        assert mapped == want
        assert rec.stab_order == 12

    def test_d3(self):
        recs = enumerate_primitive(3)
        assert len(recs) == 1
        assert recs[0].stab_order == 48


class TestClassifyAll:
    def test_d1(self):
        db = classify_all(1)
        assert db.total() == 1
        assert dimension_table(db) == {1: 1}

    def test_d2(self):
        db = classify_all(2)
        assert db.total() == 2
        assert dimension_table(db) == {2: 1, 3: 1}
        assert mass_check(db).total == Rat(1, 24)
        ok, _ = distinctness_check(db)
        assert ok
        n, _ = zonotopal_census(db)
        assert n == 2
        total, table = contraction_refine(db)
        assert total == 2 and table == {2: 1, 3: 1}

    def test_d3(self):
        db = classify_all(3)
        assert db.total() == 5
        assert len(db.by_dim[6]) == 1
        assert mass_check(db).total == 0
        ok, _ = distinctness_check(db)
        assert ok
        assert subordination_collision_scan(db) == []
        n, zono = zonotopal_census(db)
        assert n == 5
        for rec in zono:
            assert len(rec.cone.rays) == rec.cone.dim
        total, _ = contraction_refine(db)
        assert total == 5
        # the five f-vectors of the classical space fillers
        fvs = sorted(r.f_vector for r in db.records())
        assert fvs == sorted([(24, 36, 14), (18, 28, 12), (12, 18, 8),
                              (14, 24, 12), (8, 12, 6)])

    def test_incomplete_guard(self):
        db = ClassDB(3)
        with pytest.raises(IncompleteDatabase):
            mass_check(db)

    def test_membership_of_interior_points(self):
        # random interior points of each classified cone reproduce its
        # Delaunay translation classes
        import random

        from lcone.delaunay import delaunay_star

        rng = random.Random(5)
        db = classify_all(2)
        for rec in db.records():
            cone = rec.cone
            star0 = delaunay_star(cone.central)
            for _ in range(5):
                q = SymMat.zero(2)
                for r in cone.rays:
                    q = q + r.scale(rng.randint(1, 7))
                star = delaunay_star(q)
                assert star.class_keys() == star0.class_keys()

    def test_pyramid_formula(self):
        for d in (2, 3):
            db = classify_all(d)
            for rec in db.records():
                cone = rec.cone
                ff = fundamental_face(cone)
                fdim = 0 if ff is None else ff.dim
                ff_rays = set() if ff is None else set(r.lower() for r in ff.rays)
                loose = [r for r in cone.rays
                         if r.rank() == 1 and r.lower() not in ff_rays]
                assert cone.dim == fdim + len(loose)

    def test_rank_restriction(self):
        for d in (2, 3):
            db = classify_all(d)
            for rec in db.records():
                for k, _ in rec.ranks:
                    assert k in {1, 4, d}

    def test_stab_orders_even(self):
        db = classify_all(3)
        for rec in db.records():
            assert rec.stab_order % 2 == 0

    def test_descent_completeness(self):
        # every PD facet of every classified cone is equivalent to some
        # record one dimension down
        from lcone.equiv import cone_equivalent
        from lcone.scone import cone_facets, contains_pd

        for d in (2, 3):
            db = classify_all(d)
            for rec in db.records():
                k = rec.cone.dim
                for facet in cone_facets(rec.cone):
                    if not contains_pd(facet):
                        continue
                    lower = db.by_dim.get(k - 1, [])
                    assert any(cone_equivalent(facet, other.cone) is not None
                               for other in lower)

    def test_seed_independence(self):
        # classifying from a different generic seed yields the same classes
        def class_data(db):
            return sorted((r.cone.dim, r.cert_hash, r.stab_order, r.dv_hash,
                           r.subordination, r.det, r.can_size, r.ranks)
                          for r in db.records())

        base = classify_all(3)
        # a unimodular image of the principal form, and an unrelated generic
        # form found by perturbing the fcc seed
        seeds = [
            SymMat([[3, 1, -1], [1, 3, 1], [-1, 1, 3]]),
            SymMat([[2, 0, 1], [0, 3, 1], [1, 1, 4]]),
        ]
        for seed in seeds:
            other = classify_all(3, seed=seed)
            assert class_data(other) == class_data(base)

    def test_no_duplicates_exhaustive(self):
        from lcone.equiv import cone_equivalent

        for d in (2, 3):
            db = classify_all(d)
            recs = list(db.records())
            for i in range(len(recs)):
                for j in range(i + 1, len(recs)):
                    if recs[i].invariant_key() != recs[j].invariant_key():
                        continue
                    assert cone_equivalent(recs[i].cone, recs[j].cone) is None


class TestPersistence:
    def test_write_load_roundtrip(self, tmp_path):
        out = str(tmp_path / "db2")
        db = run_classification(2, out)
        db2 = load_db(out)
        assert db2.complete
        assert dimension_table(db2) == dimension_table(db)
        for k in db.by_dim:
            a = [r.to_dict() for r in db.by_dim[k]]
            b = [r.to_dict() for r in db2.by_dim[k]]
            assert a == b
        manifest = json.loads((tmp_path / "db2" / "manifest.json").read_text())
        assert manifest["status"] == "complete"
        assert manifest["d"] == 2
        assert manifest["mass"] == "1/24"
        assert not (tmp_path / "db2" / "frontier.jsonl").exists()

    def test_resume_after_abort_is_byte_identical(self, tmp_path):
        ref = str(tmp_path / "ref")
        run_classification(3, ref)

        out = str(tmp_path / "resumed")
        with pytest.raises(KeyboardInterrupt):
            run_classification(3, out, abort_after=4)
        assert os.path.exists(os.path.join(out, "frontier.jsonl"))
        run_classification(3, out, resume=True)

        for name in sorted(os.listdir(ref)):
            if name.startswith("dim_") or name == "manifest.json":
                a = open(os.path.join(ref, name), "rb").read()
                b = open(os.path.join(out, name), "rb").read()
                assert a == b, f"{name} differs after resume"

    def test_resume_dimension_mismatch(self, tmp_path):
        out = str(tmp_path / "db")
        run_classification(2, out)
        with pytest.raises(IncompatibleCheckpoint):
            run_classification(3, out, resume=True)

    def test_worker_count_invariance(self, tmp_path):
        a = str(tmp_path / "j1")
        b = str(tmp_path / "j2")
        run_classification(2, a, workers=1)
        run_classification(2, b, workers=2)
        for name in sorted(os.listdir(a)):
            if name.startswith("dim_") or name == "manifest.json":
                assert open(os.path.join(a, name), "rb").read() == \
                    open(os.path.join(b, name), "rb").read()
