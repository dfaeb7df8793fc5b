"""Enumeration of all secondary cones up to GL_d(Z).

The pipeline follows the classical two-stage scheme: first all
full-dimensional cones (primitive types) are found by crossing walls between
neighboring triangulations; then faces are descended dimension by dimension,
deduplicating with invariant buckets, canonical certificates and verified
witnesses.  Verification operations (mass formula, pairwise combinatorial
distinctness, censuses and the contraction refinement) run on the finished
database.

Heavy geometric steps are pure functions of their input cone, so they can be
distributed over worker processes and their results cached on disk; a killed
run replays its cache and produces a byte-identical database.
"""

from __future__ import annotations

import hashlib
import json
import multiprocessing
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

from . import __version__
from .delaunay import delaunay_star, is_triangulation, neighbor_triangulation
from .equiv import _form_canonical, cone_equivalent, digest_of
from .exact import Rat, SymMat
from .lattice import characteristic_set
from .polyhedral import (
    dv_polytope,
    face_lattice,
    incidence_graph,
    serialize_subordination,
    subordination_scheme,
)
from .scone import (
    ConeDesc,
    cone_facets,
    cone_from_dict,
    cone_from_rays,
    cone_to_dict,
    contains_pd,
    fundamental_face,
    rank_profile,
    secondary_cone,
    sym_dim,
)


class DimensionUnsupported(Exception):
    pass


class IncompleteDatabase(Exception):
    pass


class IncompatibleCheckpoint(Exception):
    pass


def principal_form(d: int) -> SymMat:
    """Default traversal seed: the first-kind principal form (d+1) I - J.

    All its Selling parameters are positive, so it lies interior to a
    full-dimensional secondary cone in every dimension and its Delaunay
    subdivision is a triangulation.
    """
    return SymMat([[d if i == j else -1 for j in range(d)] for i in range(d)])


def perturb_schedule(q: SymMat, times: int) -> SymMat:
    """Documented fallback perturbation: add k/(100+k) to diagonal entry k,
    applied `times` times."""
    rows = [list(r) for r in q.entries]
    for k in range(1, q.d + 1):
        rows[k - 1][k - 1] += times * Rat(k, 100 + k)
    return SymMat(rows)


def seed_triangulation(d: int, seed: Optional[SymMat] = None):
    """Star of the traversal seed, refining a coarse user seed if needed.

    A coarse seed is first nudged by the diagonal schedule; if that does not
    reach a triangulation (diagonal moves can stay inside a low-dimensional
    cone forever), the seed is blended with the principal form: k Q + P
    approaches Q along a segment from a wall-free generic point, so for
    large k it lies in a full-dimensional cone whose closure contains Q and
    its subdivision is a triangulation refining Del(Q).
    """
    q = seed if seed is not None else principal_form(d)
    star = delaunay_star(q)
    if is_triangulation(star):
        return star
    for t in range(1, 5):
        cand = perturb_schedule(q, t)
        if not cand.is_positive_definite():
            break
        star = delaunay_star(cand)
        if is_triangulation(star):
            return star
    p = principal_form(d)
    k = 1
    for _ in range(40):
        star = delaunay_star(q.scale(k) + p)
        if is_triangulation(star):
            return star
        k *= 2
    raise ValueError("seed form could not be refined to a Delaunay triangulation")


# ---------------------------------------------------------------------------
# Class records


@dataclass(frozen=True)
class ClassRecord:
    """One GL_d(Z)-class of secondary cones with its invariants."""

    cone: ConeDesc
    cert_hash: str
    witness: tuple
    stab_order: int
    det: int
    can_size: int
    ranks: tuple            # sorted (rank, count) pairs
    dv_hash: str
    dv_facets: int
    dv_vertices: int
    f_vector: tuple
    subordination: str
    zonotopal: bool

    @property
    def dim(self) -> int:
        return self.cone.dim

    def invariant_key(self) -> tuple:
        return (self.det, self.cone.dim, len(self.cone.rays), self.ranks, self.can_size)

    def to_dict(self) -> dict:
        data = cone_to_dict(self.cone)
        data.update({
            "stab_order": self.stab_order,
            "hash": self.cert_hash,
            "cert": [list(v) for v in self.witness],
            "det": self.det,
            "can_size": self.can_size,
            "rank_profile": [list(rc) for rc in self.ranks],
            "dv_hash": self.dv_hash,
            "dv_facets": self.dv_facets,
            "dv_vertices": self.dv_vertices,
            "f_vector": list(self.f_vector),
            "subordination": self.subordination,
            "zonotopal": self.zonotopal,
        })
        return data

    @staticmethod
    def from_dict(data: dict) -> "ClassRecord":
        return ClassRecord(
            cone=cone_from_dict(data),
            cert_hash=data["hash"],
            witness=tuple(tuple(v) for v in data["cert"]),
            stab_order=data["stab_order"],
            det=data["det"],
            can_size=data["can_size"],
            ranks=tuple(tuple(rc) for rc in data["rank_profile"]),
            dv_hash=data["dv_hash"],
            dv_facets=data["dv_facets"],
            dv_vertices=data["dv_vertices"],
            f_vector=tuple(data["f_vector"]),
            subordination=data["subordination"],
            zonotopal=data["zonotopal"],
        )


@dataclass
class ClassDB:
    """Classification database: one record per class, grouped by cone dim."""

    d: int
    by_dim: dict = field(default_factory=dict)
    complete: bool = False

    def records(self):
        for k in sorted(self.by_dim, reverse=True):
            yield from self.by_dim[k]

    def total(self) -> int:
        return sum(len(v) for v in self.by_dim.values())

    def require_complete(self):
        if not self.complete:
            raise IncompleteDatabase("classification database is not complete")


def _record_sort_key(rec: ClassRecord):
    return (rec.invariant_key(), rec.cert_hash, rec.cone.key())


ALLOWED_RAY_RANKS = {1, 4}


def _check_ray_ranks(cone: ConeDesc):
    allowed = ALLOWED_RAY_RANKS | {cone.d}
    for r in cone.rays:
        k = r.rank()
        if k not in allowed:
            raise AssertionError(f"ray of rank {k} violates the rank restriction {allowed}")


def enrich_cone(cone: ConeDesc, digest: str = "sha256") -> ClassRecord:
    """All per-class invariants of a cone: certificate of the central form,
    stabilizer order, DV polytope data of the central form, censuses."""
    _check_ray_ranks(cone)
    cert_hash, _, witness, _, stab = _form_canonical(cone.central, digest)
    central_det = int(cone.central.det())
    can_size = len(characteristic_set(cone.central).vectors)
    ranks = tuple(sorted(rank_profile(cone).items()))
    poly = dv_polytope(cone.central)
    n, colors, edges = incidence_graph(poly)
    from .equiv import ColoredGraph, canonical_labeling

    form, _, _, _ = canonical_labeling(ColoredGraph(n, colors, edges))
    dv_hash = digest_of(form, digest)
    _, fv = face_lattice(poly)
    sub = serialize_subordination(subordination_scheme(poly))
    zono = fundamental_face(cone) is None
    return ClassRecord(
        cone=cone,
        cert_hash=cert_hash,
        witness=witness,
        stab_order=stab,
        det=central_det,
        can_size=can_size,
        ranks=ranks,
        dv_hash=dv_hash,
        dv_facets=poly.n_facets,
        dv_vertices=poly.n_vertices,
        f_vector=fv,
        subordination=sub,
        zonotopal=zono,
    )


@lru_cache(maxsize=16384)
def _candidate_key(cone: ConeDesc, digest: str) -> tuple:
    cert_hash, _, _, _, _ = _form_canonical(cone.central, digest)
    det = int(cone.central.det())
    ranks = tuple(sorted(rank_profile(cone).items()))
    can_size = len(characteristic_set(cone.central).vectors)
    inv = (det, cone.dim, len(cone.rays), ranks, can_size)
    return inv, cert_hash


def merge_candidates(existing: list, candidates: Sequence[ConeDesc],
                     digest: str = "sha256") -> list:
    """Deduplicate candidate cones against existing classes and each other.

    Protocol: invariant-key bucket, then canonical certificate, then a
    verified witness; a merge without a verified witness never happens.
    Returns the newly accepted cones in deterministic order.
    """
    buckets: dict[tuple, list[ConeDesc]] = {}
    for cone in existing:
        inv, _ = _candidate_key(cone, digest)
        buckets.setdefault(inv, []).append(cone)
    keyed = [(_candidate_key(c, digest), c) for c in candidates]
    keyed.sort(key=lambda kc: (kc[0][0], kc[0][1], kc[1].key()))
    accepted: list[ConeDesc] = []
    for (inv, _), cone in keyed:
        _, canon, _, _, _ = _form_canonical(cone.central, digest)
        dup = False
        for other in buckets.get(inv, ()):  # same invariant bucket
            _, canon_o, _, _, _ = _form_canonical(other.central, digest)
            if canon_o == canon:
                witness = cone_equivalent(other, cone)
                if witness is None:
                    raise AssertionError("equal certificates without a witness")
                dup = True
                break
        if not dup:
            buckets.setdefault(inv, []).append(cone)
            accepted.append(cone)
    return accepted


# ---------------------------------------------------------------------------
# Pure expansion tasks (worker friendly)


def expand_primitive_cone(payload: dict) -> dict:
    """Wall-cross every PD facet of a full-dimensional cone; returns the
    neighboring full-dimensional secondary cones."""
    cone = cone_from_dict(payload["cone"])
    star = delaunay_star(cone.central)
    if not is_triangulation(star):
        raise AssertionError("central form of a full-dimensional cone must be generic")
    out = []
    for facet in cone_facets(cone):
        if not contains_pd(facet):
            continue
        wallpoint = facet.central
        nb_star = neighbor_triangulation(star, wallpoint, cone.central)
        nb_cone = secondary_cone(nb_star)
        out.append(cone_to_dict(nb_cone))
    return {"cones": out}


def expand_descent_cone(payload: dict) -> dict:
    """Facets of a cone that still meet the positive definite forms."""
    cone = cone_from_dict(payload["cone"])
    out = []
    for facet in cone_facets(cone):
        if contains_pd(facet):
            out.append(cone_to_dict(facet))
    return {"cones": out}


def enrich_cone_task(payload: dict) -> dict:
    cone = cone_from_dict(payload["cone"])
    rec = enrich_cone(cone, payload["digest"])
    return {"record": rec.to_dict()}


_TASKS = {
    "prim": expand_primitive_cone,
    "desc": expand_descent_cone,
    "enrich": enrich_cone_task,
}


def _run_task(item):
    kind, key, payload = item
    return key, _TASKS[kind](payload)


class DiskCache:
    """Append-only JSONL cache of completed pure computations."""

    def __init__(self, path: Optional[str]):
        self.path = path
        self.data: dict[str, dict] = {}
        if path and os.path.exists(path):
            with open(path) as fh:
                for line in fh:
                    line = line.strip()
                    if not line:
                        continue
                    entry = json.loads(line)
                    self.data[entry["key"]] = entry["out"]
        self._fh = open(path, "a") if path else None

    def get(self, key: str):
        return self.data.get(key)

    def put(self, key: str, out: dict):
        self.data[key] = out
        if self._fh:
            self._fh.write(json.dumps({"key": key, "out": out}, sort_keys=True,
                                      separators=(",", ":")) + "\n")
            self._fh.flush()

    def close(self):
        if self._fh:
            self._fh.close()
            self._fh = None


def _cone_cache_key(kind: str, cone: ConeDesc) -> str:
    blob = json.dumps(cone_to_dict(cone), sort_keys=True, separators=(",", ":"))
    return f"{kind}:{hashlib.sha256(blob.encode()).hexdigest()}"


class Classifier:
    """Stateful driver for a (possibly resumable, parallel) classification."""

    def __init__(self, d: int, workers: int = 1, digest: str = "sha256",
                 cache: Optional[DiskCache] = None, seed: Optional[SymMat] = None,
                 abort_after: Optional[int] = None, verbose: bool = False):
        if not 1 <= d <= 5:
            raise DimensionUnsupported(f"dimension {d} is not supported (need 1..5)")
        self.d = d
        self.workers = max(1, workers)
        self.digest = digest
        self.cache = cache or DiskCache(None)
        self.seed = seed
        self.abort_after = abort_after
        self.verbose = verbose
        self._completed = 0

    def _log(self, msg: str):
        if self.verbose:
            import sys
            import time as _time

            print(f"[{_time.strftime('%H:%M:%S')}] {msg}", file=sys.stderr, flush=True)

    def _tick(self):
        self._completed += 1
        if self.abort_after is not None and self._completed >= self.abort_after:
            raise KeyboardInterrupt("aborted for checkpoint testing")

    def _map(self, kind: str, cones: Sequence[ConeDesc]) -> list[dict]:
        items = []
        results: dict[str, dict] = {}
        for cone in cones:
            key = _cone_cache_key(kind, cone)
            hit = self.cache.get(key)
            if hit is not None:
                results[key] = hit
            else:
                items.append((kind, key, {"cone": cone_to_dict(cone),
                                          "digest": self.digest}))
        if items:
            if self.workers > 1 and len(items) > 1:
                try:
                    ctx = multiprocessing.get_context("fork")
                except ValueError:
                    ctx = multiprocessing.get_context("spawn")
                with ctx.Pool(self.workers) as pool:
                    for key, out in pool.imap_unordered(_run_task, items):
                        self.cache.put(key, out)
                        results[key] = out
                        self._tick()
            else:
                for item in items:
                    key, out = _run_task(item)
                    self.cache.put(key, out)
                    results[key] = out
                    self._tick()
        return [results[_cone_cache_key(kind, cone)] for cone in cones]

    def primitive_cones(self) -> list[ConeDesc]:
        """All full-dimensional cones up to equivalence, by wall crossing."""
        star = seed_triangulation(self.d, self.seed)
        first = secondary_cone(star)
        classes = merge_candidates([], [first], self.digest)
        frontier = list(classes)
        wave = 0
        while frontier:
            wave += 1
            self._log(f"primitive wave {wave}: expanding {len(frontier)} cones "
                      f"({len(classes)} classes so far)")
            outs = self._map("prim", frontier)
            candidates = []
            for out in outs:
                candidates.extend(cone_from_dict(c) for c in out["cones"])
            new = merge_candidates(classes, candidates, self.digest)
            classes.extend(new)
            frontier = new
        self._log(f"primitive enumeration done: {len(classes)} classes")
        return classes

    def classify(self) -> ClassDB:
        m = sym_dim(self.d)
        level = self.primitive_cones()
        cones_by_dim: dict[int, list[ConeDesc]] = {m: level}
        for k in range(m, 1, -1):
            self._log(f"descending from dimension {k}: {len(cones_by_dim[k])} classes")
            outs = self._map("desc", cones_by_dim[k])
            candidates = []
            for out in outs:
                candidates.extend(cone_from_dict(c) for c in out["cones"])
            accepted = merge_candidates([], candidates, self.digest)
            if not accepted:
                break
            cones_by_dim[k - 1] = accepted
        db = ClassDB(self.d)
        for k, cones in cones_by_dim.items():
            self._log(f"enriching dimension {k}: {len(cones)} classes")
            outs = self._map("enrich", cones)
            recs = [ClassRecord.from_dict(o["record"]) for o in outs]
            recs.sort(key=_record_sort_key)
            db.by_dim[k] = recs
        db.complete = True
        return db


def enumerate_primitive(d: int, workers: int = 1, digest: str = "sha256",
                        seed: Optional[SymMat] = None) -> list[ClassRecord]:
    """Full-dimensional secondary cones up to GL_d(Z), as enriched records."""
    clf = Classifier(d, workers=workers, digest=digest, seed=seed)
    cones = clf.primitive_cones()
    outs = clf._map("enrich", cones)
    recs = [ClassRecord.from_dict(o["record"]) for o in outs]
    recs.sort(key=_record_sort_key)
    return recs


def classify_all(d: int, workers: int = 1, digest: str = "sha256",
                 seed: Optional[SymMat] = None) -> ClassDB:
    """Classify every secondary cone of Z^d forms up to GL_d(Z)."""
    return Classifier(d, workers=workers, digest=digest, seed=seed).classify()


# ---------------------------------------------------------------------------
# Verification operations on a complete database


@dataclass(frozen=True)
class MassReport:
    total: object
    by_dim: dict

    def __str__(self):
        parts = [f"dim {k}: {v}" for k, v in sorted(self.by_dim.items())]
        return f"mass {self.total} (" + ", ".join(parts) + ")"


def mass_check(db: ClassDB) -> MassReport:
    """Euler-Poincare mass: sum over classes of (-1)^dim / |stabilizer|."""
    db.require_complete()
    by_dim = {}
    total = Rat(0)
    for k, recs in sorted(db.by_dim.items()):
        part = Rat(0)
        for rec in recs:
            part += Rat((-1) ** k, rec.stab_order)
        by_dim[k] = part
        total += part
    return MassReport(total, by_dim)


def distinctness_check(db: ClassDB):
    """Pairwise distinctness of the DV incidence-graph hashes.

    On a hash collision the colliding pair is recompared on full canonical
    forms to decide isomorphism; the report lists any coincidences.
    """
    db.require_complete()
    groups: dict[str, list[ClassRecord]] = {}
    for rec in db.records():
        groups.setdefault(rec.dv_hash, []).append(rec)
    report = []
    for h, recs in groups.items():
        if len(recs) < 2:
            continue
        from .equiv import ColoredGraph, canonical_labeling

        forms = []
        for rec in recs:
            poly = dv_polytope(rec.cone.central)
            n, colors, edges = incidence_graph(poly)
            form, _, _, _ = canonical_labeling(ColoredGraph(n, colors, edges))
            forms.append(form)
        for i in range(len(recs)):
            for j in range(i + 1, len(recs)):
                report.append({
                    "hash": h,
                    "isomorphic": forms[i] == forms[j],
                    "pair": (recs[i].cert_hash, recs[j].cert_hash),
                })
    return len(report) == 0, report


def subordination_collision_scan(db: ClassDB) -> list:
    """Groups of classes sharing a subordination scheme while being
    combinatorially distinct (distinct DV hashes)."""
    db.require_complete()
    groups: dict[str, list[ClassRecord]] = {}
    for rec in db.records():
        groups.setdefault(rec.subordination, []).append(rec)
    out = []
    for scheme, recs in sorted(groups.items()):
        if len(recs) >= 2 and len(set(r.dv_hash for r in recs)) >= 2:
            out.append({
                "subordination": scheme,
                "classes": [r.cert_hash for r in recs],
                "dims": sorted(r.cone.dim for r in recs),
            })
    return out


def zonotopal_census(db: ClassDB):
    """Classes whose secondary cone is generated by rank-1 forms only.
    For each, the number of rays must equal the cone dimension."""
    db.require_complete()
    zono = [rec for rec in db.records() if rec.zonotopal]
    for rec in zono:
        if len(rec.cone.rays) != rec.cone.dim:
            raise AssertionError("zonotopal cone with ray count != dimension")
    return len(zono), zono


def totally_zone_contracted_census(db: ClassDB):
    """Classes all of whose rays have rank greater than one."""
    db.require_complete()
    tzc = [rec for rec in db.records()
           if all(k > 1 for k, _ in rec.ranks)]
    return len(tzc), tzc


def dimension_table(db: ClassDB) -> dict[int, int]:
    db.require_complete()
    return {k: len(v) for k, v in sorted(db.by_dim.items())}


# ---------------------------------------------------------------------------
# Contraction refinement


def _facet_ray_masks(cone: ConeDesc) -> list[int]:
    masks = []
    for n in cone.inequalities:
        mask = 0
        for i, r in enumerate(cone.rays):
            if n.pair(r) == 0:
                mask |= 1 << i
        masks.append(mask)
    return masks


def _faces_within(cone: ConeDesc, allowed: int, facet_masks: list[int]) -> list[int]:
    """Faces of the cone whose ray set lies inside the `allowed` mask.

    Candidates come from closing the facet traces (facet mask intersected
    with `allowed`) under intersection; each candidate is then verified to
    be a genuine face: it must equal the intersection of all facets
    containing it.  The cone itself qualifies when all its rays are allowed.
    """
    full = (1 << len(cone.rays)) - 1
    base = sorted(set(fm & allowed for fm in facet_masks))
    cands = set(base)
    frontier = set(base)
    while frontier:
        new = set()
        for f in frontier:
            for g in base:
                h = f & g
                if h not in cands:
                    new.add(h)
        cands |= new
        frontier = new
    faces = []
    if allowed == full:
        faces.append(full)
    for t in cands:
        hull = full
        for fm in facet_masks:
            if t & ~fm == 0:
                hull &= fm
        if hull == t:
            faces.append(t)
    return sorted(set(faces))


def contraction_refine(db: ClassDB, digest: str = "sha256"):
    """Refine the secondary cones into contraction cones and count classes.

    Every cone decomposes into pieces S + R1 where R1 is spanned by its
    rank-1 rays and S runs over the faces spanned by rays of higher rank,
    keeping only pieces that do not lie inside a facet of the cone.  Pieces
    are deduplicated across the database by central-form certificates.
    Returns (total, per-dimension table).
    """
    db.require_complete()
    pieces: list[ConeDesc] = []
    for rec in db.records():
        cone = rec.cone
        nr = len(cone.rays)
        rank1_mask = 0
        high_mask = 0
        for i, r in enumerate(cone.rays):
            if r.rank() == 1:
                rank1_mask |= 1 << i
            else:
                high_mask |= 1 << i
        facet_masks = _facet_ray_masks(cone)
        for smask in _faces_within(cone, high_mask, facet_masks):
            piece_mask = smask | rank1_mask
            if piece_mask == 0:
                continue
            if any(piece_mask & ~fm == 0 for fm in facet_masks):
                continue
            gens = [cone.rays[i] for i in range(nr) if piece_mask >> i & 1]
            pieces.append(cone_from_rays(cone.d, gens))
    kept = merge_candidates([], pieces, digest)
    table: dict[int, int] = {}
    for p in kept:
        table[p.dim] = table.get(p.dim, 0) + 1
    return len(kept), dict(sorted(table.items()))


# ---------------------------------------------------------------------------
# Persistence


def _record_json(rec: ClassRecord) -> str:
    return json.dumps(rec.to_dict(), sort_keys=True, separators=(",", ":"))


def write_db(db: ClassDB, out_dir: str, extras: Optional[dict] = None):
    os.makedirs(out_dir, exist_ok=True)
    counts = {}
    for k in sorted(db.by_dim, reverse=True):
        recs = sorted(db.by_dim[k], key=_record_sort_key)
        with open(os.path.join(out_dir, f"dim_{k}.jsonl"), "w") as fh:
            for rec in recs:
                fh.write(_record_json(rec) + "\n")
        counts[str(k)] = len(recs)
    manifest = {
        "d": db.d,
        "version": __version__,
        "status": "complete" if db.complete else "running",
        "counts": counts,
        "total": db.total(),
    }
    if extras:
        manifest.update(extras)
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, sort_keys=True, indent=1)
        fh.write("\n")


def load_db(out_dir: str) -> ClassDB:
    path = os.path.join(out_dir, "manifest.json")
    if not os.path.exists(path):
        raise IncompleteDatabase(f"no manifest in {out_dir}")
    with open(path) as fh:
        manifest = json.load(fh)
    db = ClassDB(manifest["d"])
    db.complete = manifest.get("status") == "complete"
    for name in sorted(os.listdir(out_dir)):
        if not (name.startswith("dim_") and name.endswith(".jsonl")):
            continue
        k = int(name[4:-6])
        recs = []
        with open(os.path.join(out_dir, name)) as fh:
            for line in fh:
                line = line.strip()
                if line:
                    recs.append(ClassRecord.from_dict(json.loads(line)))
        db.by_dim[k] = recs
    return db


def run_classification(d: int, out_dir: str, workers: int = 1,
                       resume: bool = False, digest: str = "sha256",
                       seed: Optional[SymMat] = None,
                       abort_after: Optional[int] = None,
                       verbose: bool = False) -> ClassDB:
    """End-to-end classification with on-disk checkpointing.

    Without `resume`, any previous state in `out_dir` is discarded.  With
    `resume`, the checkpoint must match the dimension and software version;
    completed heavy computations are replayed from the cache, so an
    interrupted run continues where it stopped and yields a byte-identical
    database.
    """
    os.makedirs(out_dir, exist_ok=True)
    manifest_path = os.path.join(out_dir, "manifest.json")
    frontier_path = os.path.join(out_dir, "frontier.jsonl")
    if resume:
        if os.path.exists(manifest_path):
            with open(manifest_path) as fh:
                manifest = json.load(fh)
            if manifest.get("d") != d or manifest.get("version") != __version__:
                raise IncompatibleCheckpoint(
                    "checkpoint dimension or version does not match")
    else:
        for name in list(os.listdir(out_dir)):
            if name == "frontier.jsonl" or name == "manifest.json" or (
                    name.startswith("dim_") and name.endswith(".jsonl")):
                os.remove(os.path.join(out_dir, name))
    write_marker = not os.path.exists(manifest_path)
    if write_marker or not resume:
        with open(manifest_path, "w") as fh:
            json.dump({"d": d, "version": __version__, "status": "running"}, fh,
                      sort_keys=True, indent=1)
            fh.write("\n")
    cache = DiskCache(frontier_path)
    try:
        clf = Classifier(d, workers=workers, digest=digest, cache=cache,
                         seed=seed, abort_after=abort_after, verbose=verbose)
        db = clf.classify()
    finally:
        cache.close()
    mass = mass_check(db)
    distinct, _ = distinctness_check(db)
    zono_count, _ = zonotopal_census(db)
    tzc_count, _ = totally_zone_contracted_census(db)
    primitive = len(db.by_dim.get(sym_dim(d), []))
    extras = {
        "mass": str(mass.total),
        "mass_by_dim": {str(k): str(v) for k, v in mass.by_dim.items()},
        "distinct": distinct,
        "primitive": primitive,
        "zonotopal": zono_count,
        "totally_zone_contracted": tzc_count,
    }
    write_db(db, out_dir, extras)
    os.remove(frontier_path)
    return db
