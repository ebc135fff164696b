"""Benchmark generators and the JSON instance format."""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from importlib import resources
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import (
    GenerationError,
    InstanceParseError,
    InvalidNetworkError,
    SchemaVersionError,
)
from .network import (
    ABS_DIFF_NOT_EQUAL,
    ALLOWED_TUPLES,
    KINDS,
    NOT_EQUAL,
    Constraint,
    ConstraintNetwork,
    evaluate,
)

SCHEMA_VERSION = 1


def gen_nqueens(n: int) -> ConstraintNetwork:
    """Queens on an ``n x n`` board: variable ``i`` is the row of the queen in column ``i``."""
    if n < 1:
        raise InvalidNetworkError("n-queens needs n >= 1")
    constraints = []
    for i, j in itertools.combinations(range(n), 2):
        constraints.append(Constraint((i, j), NOT_EQUAL))
        constraints.append(Constraint((i, j), ABS_DIFF_NOT_EQUAL, j - i))
    return ConstraintNetwork(
        [range(1, n + 1)] * n,
        constraints,
        name=f"queens{n}",
        metadata={"generator": "nqueens", "params": {"n": n}},
    )


def gen_graph_coloring(vertices: int, edges, colors: int) -> ConstraintNetwork:
    """One variable per vertex with colours ``1..colors``; duplicate edges collapse."""
    if vertices < 1 or colors < 1:
        raise InvalidNetworkError("need at least one vertex and one colour")
    unique = set()
    for u, v in edges:
        u, v = int(u), int(v)
        if not (0 <= u < vertices and 0 <= v < vertices):
            raise InvalidNetworkError(f"edge ({u}, {v}) has an endpoint outside 0..{vertices - 1}")
        if u == v:
            raise InvalidNetworkError(f"self-loop on vertex {u}")
        unique.add((min(u, v), max(u, v)))
    return ConstraintNetwork(
        [range(1, colors + 1)] * vertices,
        [Constraint(e, NOT_EQUAL) for e in sorted(unique)],
        name=f"coloring-v{vertices}-c{colors}",
        metadata={
            "generator": "graph-coloring",
            "params": {"vertices": vertices, "edges": [list(e) for e in sorted(unique)], "colors": colors},
        },
    )


def gen_random_binary(n: int, domain_size: int, density: float, tightness: float, seed: int) -> ConstraintNetwork:
    """Random binary CSP in the (n, d, p1, p2) model.

    Each pair is constrained with probability ``density``; a constrained
    pair forbids each value pair independently with probability
    ``tightness``. Constraints are stored as allowed tuples over ``1..d``.
    """
    if not (0.0 <= density <= 1.0 and 0.0 <= tightness <= 1.0):
        raise InvalidNetworkError("density and tightness must lie in [0, 1]")
    if n < 1 or domain_size < 1:
        raise InvalidNetworkError("need n >= 1 and domain_size >= 1")
    rng = np.random.default_rng(seed)
    values = range(1, domain_size + 1)
    constraints = []
    for i, j in itertools.combinations(range(n), 2):
        if rng.random() >= density:
            continue
        keep = rng.random((domain_size, domain_size)) >= tightness
        allowed = [(u, v) for (a, u), (b, v) in itertools.product(enumerate(values), repeat=2) if keep[a, b]]
        constraints.append(Constraint((i, j), ALLOWED_TUPLES, allowed))
    return ConstraintNetwork(
        [values] * n,
        constraints,
        name=f"rb-n{n}-d{domain_size}-p{density:g}-q{tightness:g}-s{seed}",
        metadata={
            "generator": "random-binary",
            "seed": seed,
            "params": {"n": n, "domain_size": domain_size, "density": density, "tightness": tightness},
        },
    )


# --- spatial scenes ---------------------------------------------------------

ADJACENT = "adjacent"
CONTAINS = "contains"
WITHIN = "within-distance"
SPATIAL_KINDS = (ADJACENT, CONTAINS, WITHIN)


class Box(NamedTuple):
    x0: int
    y0: int
    x1: int
    y1: int

    @property
    def center(self):
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)


class Relation(NamedTuple):
    first: str
    second: str
    kind: str
    distance: Optional[float] = None


def boxes_touch(a: Box, b: Box) -> bool:
    """Closed boxes meet but their interiors do not overlap."""
    closed = a.x0 <= b.x1 and b.x0 <= a.x1 and a.y0 <= b.y1 and b.y0 <= a.y1
    interior = a.x0 < b.x1 and b.x0 < a.x1 and a.y0 < b.y1 and b.y0 < a.y1
    return closed and not interior


def box_contains(a: Box, b: Box) -> bool:
    return a.x0 <= b.x0 and b.x1 <= a.x1 and a.y0 <= b.y0 and b.y1 <= a.y1


def centers_within(a: Box, b: Box, d: float) -> bool:
    (ax, ay), (bx, by) = a.center, b.center
    return math.hypot(ax - bx, ay - by) <= d


def relation_holds(rel: Relation, a: Box, b: Box) -> bool:
    if rel.kind == ADJACENT:
        return boxes_touch(a, b)
    if rel.kind == CONTAINS:
        return box_contains(a, b)
    return centers_within(a, b, rel.distance)


@dataclass(frozen=True)
class SpatialGraphSpec:
    """Object model: classes (graph vertices) and spatial relations (arcs)."""

    object_classes: tuple
    relations: tuple
    region_count: dict
    grid: int = 64
    max_size: int = 12

    def __post_init__(self):
        classes = tuple(self.object_classes)
        if len(set(classes)) != len(classes) or not classes:
            raise InvalidNetworkError("object classes must be non-empty and unique")
        rels = tuple(Relation(*r) for r in self.relations)
        for r in rels:
            if r.kind not in SPATIAL_KINDS:
                raise InvalidNetworkError(f"unknown spatial relation {r.kind!r}")
            if r.first not in classes or r.second not in classes or r.first == r.second:
                raise InvalidNetworkError(f"relation {r} must link two distinct known classes")
            if r.kind == WITHIN and not (r.distance and r.distance > 0):
                raise InvalidNetworkError(f"{WITHIN} needs a positive distance")
        counts = self.region_count
        if isinstance(counts, int):
            counts = {c: counts for c in classes}
        counts = {c: int(counts[c]) for c in classes}
        if any(v < 1 for v in counts.values()):
            raise InvalidNetworkError("region_count must be >= 1 per class")
        if self.grid < 4 or not 2 <= self.max_size <= self.grid:
            raise InvalidNetworkError("need grid >= 4 and 2 <= max_size <= grid")
        object.__setattr__(self, "object_classes", classes)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "region_count", counts)


def airport_spec(regions_per_class: int = 6) -> SpatialGraphSpec:
    """A representative airport-like model with four classes and five relations."""
    return SpatialGraphSpec(
        object_classes=("runway", "building", "airplane", "parking"),
        relations=(
            ("parking", "airplane", CONTAINS),
            ("parking", "building", ADJACENT),
            ("runway", "parking", WITHIN, 30.0),
            ("runway", "building", WITHIN, 35.0),
            ("airplane", "building", WITHIN, 20.0),
        ),
        region_count=regions_per_class,
    )


@dataclass
class SpatialScene:
    spec: SpatialGraphSpec
    regions: dict  # region id -> (class, Box)
    planted: tuple  # region id per variable (variable order = spec.object_classes)
    network: ConstraintNetwork = field(repr=False, default=None)


def _random_box(rng, grid, max_size, min_size=2) -> Box:
    w, h = rng.integers(min_size, max_size + 1, size=2)
    x0 = int(rng.integers(0, grid - w + 1))
    y0 = int(rng.integers(0, grid - h + 1))
    return Box(x0, y0, x0 + int(w), y0 + int(h))


def _candidate(rng, rel: Relation, placed: Box, new_is_first: bool, grid: int, max_size: int) -> Optional[Box]:
    """A box likely to satisfy ``rel`` against an already placed box."""
    if rel.kind == CONTAINS:
        if new_is_first:  # new box must enclose the placed one
            x0 = int(rng.integers(0, placed.x0 + 1))
            y0 = int(rng.integers(0, placed.y0 + 1))
            x1 = int(rng.integers(placed.x1, grid + 1))
            y1 = int(rng.integers(placed.y1, grid + 1))
            return Box(x0, y0, x1, y1)
        if placed.x1 - placed.x0 < 1 or placed.y1 - placed.y0 < 1:
            return None
        x0 = int(rng.integers(placed.x0, placed.x1))
        y0 = int(rng.integers(placed.y0, placed.y1))
        x1 = int(rng.integers(x0 + 1, placed.x1 + 1))
        y1 = int(rng.integers(y0 + 1, placed.y1 + 1))
        return Box(x0, y0, x1, y1)
    if rel.kind == ADJACENT:
        w, h = (int(v) for v in rng.integers(2, max_size + 1, size=2))
        side = int(rng.integers(4))
        if side == 0:
            x0, y0 = placed.x1, int(rng.integers(placed.y0 - h + 1, placed.y1))
        elif side == 1:
            x0, y0 = placed.x0 - w, int(rng.integers(placed.y0 - h + 1, placed.y1))
        elif side == 2:
            x0, y0 = int(rng.integers(placed.x0 - w + 1, placed.x1)), placed.y1
        else:
            x0, y0 = int(rng.integers(placed.x0 - w + 1, placed.x1)), placed.y0 - h
        box = Box(x0, y0, x0 + w, y0 + h)
        if box.x0 < 0 or box.y0 < 0 or box.x1 > grid or box.y1 > grid:
            return None
        return box
    w, h = (int(v) for v in rng.integers(2, max_size + 1, size=2))
    cx, cy = placed.center
    r = rel.distance * math.sqrt(rng.random())
    phi = rng.uniform(0, 2 * math.pi)
    x0 = int(round(cx + r * math.cos(phi) - w / 2))
    y0 = int(round(cy + r * math.sin(phi) - h / 2))
    x0 = min(max(x0, 0), grid - w)
    y0 = min(max(y0, 0), grid - h)
    return Box(x0, y0, x0 + w, y0 + h)


def _placement_order(spec: SpatialGraphSpec) -> list:
    """Class order with every container placed before what it contains."""
    order: list = []
    pending = list(spec.object_classes)
    while pending:
        for cls in pending:
            waiting = [r.first for r in spec.relations if r.kind == CONTAINS and r.second == cls and r.first not in order]
            if not waiting:
                break
        else:
            cls = pending[0]  # containment cycle; rejection sampling decides
        order.append(cls)
        pending.remove(cls)
    return order


def _plant(spec: SpatialGraphSpec, rng, tries: int = 200) -> Optional[dict]:
    placed: dict = {}
    for cls in _placement_order(spec):
        rels = [r for r in spec.relations if cls in (r.first, r.second) and (r.first in placed or r.second in placed)]
        hard = [r for r in rels if r.kind != WITHIN] or rels
        box = None
        for _ in range(tries):
            if rels:
                rel = hard[int(rng.integers(len(hard)))]
                other = rel.second if rel.first == cls else rel.first
                cand = _candidate(rng, rel, placed[other], rel.first == cls, spec.grid, spec.max_size)
            else:
                cand = _random_box(rng, spec.grid, spec.max_size)
            if cand is None:
                continue
            ok = all(
                relation_holds(r, cand if r.first == cls else placed[r.first], cand if r.second == cls else placed[r.second])
                for r in rels
            )
            if ok:
                box = cand
                break
        if box is None:
            return None
        placed[cls] = box
    return placed


def gen_spatial_graph(spec: SpatialGraphSpec, seed: int, restarts: int = 50) -> SpatialScene:
    """Random scene with a planted embedding of ``spec``.

    Variables follow ``spec.object_classes``; each variable's domain holds
    the ids of the regions of its class. Every relation becomes an
    allowed-tuples constraint listing the region pairs for which the
    relation holds geometrically.
    """
    rng = np.random.default_rng(seed)
    planted = None
    for _ in range(restarts):
        planted = _plant(spec, rng)
        if planted is not None:
            break
    if planted is None:
        raise GenerationError(f"could not realise the spatial model on a {spec.grid}x{spec.grid} grid")

    pool = []
    for cls in spec.object_classes:
        pool.append((cls, planted[cls], True))
        for _ in range(spec.region_count[cls] - 1):
            pool.append((cls, _random_box(rng, spec.grid, spec.max_size), False))
    order = rng.permutation(len(pool))
    regions = {}
    planted_ids = {}
    for rid, k in enumerate(order):
        cls, box, is_planted = pool[int(k)]
        regions[rid] = (cls, box)
        if is_planted:
            planted_ids[cls] = rid

    var = {cls: i for i, cls in enumerate(spec.object_classes)}
    domains = [[rid for rid, (c, _) in regions.items() if c == cls] for cls in spec.object_classes]
    constraints = []
    for rel in spec.relations:
        tuples = [
            (a, b)
            for a in domains[var[rel.first]]
            for b in domains[var[rel.second]]
            if relation_holds(rel, regions[a][1], regions[b][1])
        ]
        constraints.append(Constraint((var[rel.first], var[rel.second]), ALLOWED_TUPLES, tuples))
    network = ConstraintNetwork(
        domains,
        constraints,
        name=f"spatial-s{seed}",
        metadata={
            "generator": "spatial-graph",
            "seed": seed,
            "params": {
                "object_classes": list(spec.object_classes),
                "relations": [list(r) for r in spec.relations],
                "region_count": dict(spec.region_count),
                "grid": spec.grid,
            },
        },
    )
    embedding = tuple(planted_ids[cls] for cls in spec.object_classes)
    if evaluate(network, embedding) != 0:
        raise GenerationError("planted embedding violates the generated constraints")
    return SpatialScene(spec, regions, embedding, network)


# --- file format ------------------------------------------------------------


def _constraint_record(c: Constraint) -> dict:
    if c.kind == ALLOWED_TUPLES:
        payload = [list(t) for t in sorted(c.payload)]
    else:
        payload = c.payload
    return {"scope": list(c.scope), "kind": c.kind, "payload": payload}


def to_document(network: ConstraintNetwork) -> dict:
    constraints = sorted(network.constraints, key=Constraint.sort_key)
    return {
        "schema_version": SCHEMA_VERSION,
        "name": network.name,
        "n": network.n,
        "domains": [list(d) for d in network.domains],
        "constraints": [_constraint_record(c) for c in constraints],
        "metadata": network.metadata,
    }


def serialize(network: ConstraintNetwork) -> str:
    """Canonical text form: sorted keys, one domain and one constraint per line."""
    doc = to_document(network)

    def dump(obj):
        return json.dumps(obj, sort_keys=True, separators=(", ", ": "))

    lines = ["{"]
    keys = sorted(doc)
    for pos, key in enumerate(keys):
        tail = "," if pos < len(keys) - 1 else ""
        value = doc[key]
        if key in ("domains", "constraints") and value:
            lines.append(f"  {json.dumps(key)}: [")
            lines.extend(f"    {dump(item)}{',' if k < len(value) - 1 else ''}" for k, item in enumerate(value))
            lines.append(f"  ]{tail}")
        else:
            lines.append(f"  {json.dumps(key)}: {dump(value)}{tail}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def parse(text: str) -> ConstraintNetwork:
    """Parse an instance document, naming the offending field on error."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceParseError(exc.msg, f"line {exc.lineno}, column {exc.colno}") from None
    return from_document(doc)


def from_document(doc) -> ConstraintNetwork:
    if not isinstance(doc, dict):
        raise InstanceParseError("top level must be an object", "$")
    if "schema_version" not in doc:
        raise InstanceParseError("missing field", "schema_version")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise SchemaVersionError(f"unsupported schema version {doc['schema_version']!r}", "schema_version")
    unknown = set(doc) - {"schema_version", "name", "n", "domains", "constraints", "metadata"}
    if unknown:
        raise InstanceParseError(f"unknown field(s) {sorted(unknown)}", "$")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise InstanceParseError("must be a string", "name")
    n = doc.get("n")
    if not _is_int(n) or n < 1:
        raise InstanceParseError("must be a positive integer", "n")
    domains = doc.get("domains")
    if not isinstance(domains, list) or len(domains) != n:
        raise InstanceParseError(f"must be a list of {n} value lists", "domains")
    for i, d in enumerate(domains):
        if not isinstance(d, list) or not d:
            raise InstanceParseError("domain must be a non-empty list", f"domains[{i}]")
        for k, v in enumerate(d):
            if not _is_int(v):
                raise InstanceParseError("value must be an integer", f"domains[{i}][{k}]")
        if len(set(d)) != len(d):
            raise InstanceParseError("duplicate values", f"domains[{i}]")
    records = doc.get("constraints", [])
    if not isinstance(records, list):
        raise InstanceParseError("must be a list", "constraints")
    constraints = []
    for k, rec in enumerate(records):
        where = f"constraints[{k}]"
        if not isinstance(rec, dict):
            raise InstanceParseError("must be an object", where)
        extra = set(rec) - {"scope", "kind", "payload"}
        if extra:
            raise InstanceParseError(f"unknown field(s) {sorted(extra)}", where)
        scope = rec.get("scope")
        if not isinstance(scope, list) or len(scope) != 2 or not all(_is_int(s) for s in scope):
            raise InstanceParseError("must be a pair of integers", f"{where}.scope")
        if not all(0 <= s < n for s in scope):
            raise InstanceParseError(f"variable index out of range 0..{n - 1}", f"{where}.scope")
        if scope[0] == scope[1]:
            raise InstanceParseError("scope variables must be distinct", f"{where}.scope")
        kind = rec.get("kind")
        if kind not in KINDS:
            raise InstanceParseError(f"unknown kind {kind!r}", f"{where}.kind")
        payload = rec.get("payload")
        if kind == ABS_DIFF_NOT_EQUAL:
            if not _is_int(payload):
                raise InstanceParseError("offset must be an integer", f"{where}.payload")
        elif kind == ALLOWED_TUPLES:
            if not isinstance(payload, list):
                raise InstanceParseError("must be a list of value pairs", f"{where}.payload")
            for t, pair in enumerate(payload):
                if not isinstance(pair, list) or len(pair) != 2 or not all(_is_int(v) for v in pair):
                    raise InstanceParseError("must be a pair of integers", f"{where}.payload[{t}]")
            payload = [tuple(p) for p in payload]
        elif payload is not None:
            raise InstanceParseError(f"{kind} takes no payload", f"{where}.payload")
        constraints.append(Constraint(tuple(scope), kind, payload))
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise InstanceParseError("must be an object", "metadata")
    return ConstraintNetwork(domains, constraints, name=name, metadata=metadata)


def canonicalize(text: str) -> str:
    return serialize(parse(text))


def load(path) -> ConstraintNetwork:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def save(network: ConstraintNetwork, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize(network))


# --- bundled corpus ---------------------------------------------------------


def _corpus_dir():
    return resources.files("gsocsp") / "data" / "corpus"


def corpus_names() -> list:
    return sorted(p.name[: -len(".json")] for p in _corpus_dir().iterdir() if p.name.endswith(".json") and p.name != "golden.json")


def load_bundled(name: str) -> ConstraintNetwork:
    path = _corpus_dir() / f"{name}.json"
    if not path.is_file():
        raise FileNotFoundError(f"no bundled instance named {name!r}")
    return parse(path.read_text(encoding="utf-8"))


def golden_counts() -> dict:
    """Solution counts recorded by the backtracking oracle at bundling time."""
    return json.loads((_corpus_dir() / "golden.json").read_text(encoding="utf-8"))
