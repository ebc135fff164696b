import copy
import json
import math
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gsocsp.exceptions import GenerationError, InstanceParseError, InvalidNetworkError, SchemaVersionError
from gsocsp.instances import (
    SpatialGraphSpec,
    airport_spec,
    canonicalize,
    corpus_names,
    gen_graph_coloring,
    gen_nqueens,
    gen_random_binary,
    gen_spatial_graph,
    golden_counts,
    load,
    load_bundled,
    parse,
    save,
    serialize,
)
from gsocsp.network import evaluate
from gsocsp.propagation import ac3

from oracles import brute_force_solutions, count_solutions, geometric_oracle
from strategies import networks

ROOT = Path(__file__).resolve().parents[1]
TRIANGLE = [(0, 1), (1, 2), (0, 2)]


def test_queens_small_boards():
    one = gen_nqueens(1)
    assert one.n == 1 and one.constraints == () and brute_force_solutions(one) == {(1,)}
    assert brute_force_solutions(gen_nqueens(3)) == set()
    four = gen_nqueens(4)
    assert len(four.constraints) == 12 and len(brute_force_solutions(four)) == 2


def test_coloring_examples():
    assert len(brute_force_solutions(gen_graph_coloring(3, TRIANGLE, 3))) == 6
    assert brute_force_solutions(gen_graph_coloring(3, TRIANGLE, 2)) == set()
    assert len(brute_force_solutions(gen_graph_coloring(4, [], 3))) == 3**4
    # duplicate and reversed edges collapse
    assert len(gen_graph_coloring(3, [(0, 1), (1, 0), (0, 1)], 2).constraints) == 1
    with pytest.raises(InvalidNetworkError):
        gen_graph_coloring(3, [(1, 1)], 2)


def test_random_binary_extremes():
    assert gen_random_binary(6, 4, 0.0, 0.5, seed=1).constraints == ()
    full = gen_random_binary(4, 3, 1.0, 1.0, seed=1)
    assert len(full.constraints) == 6
    assert brute_force_solutions(full) == set()
    assert ac3(full).wipeout


def test_random_binary_is_seeded():
    a = gen_random_binary(10, 5, 0.4, 0.3, seed=8)
    assert serialize(a) == serialize(gen_random_binary(10, 5, 0.4, 0.3, seed=8))
    assert serialize(a) != serialize(gen_random_binary(10, 5, 0.4, 0.3, seed=9))


def test_single_class_scene():
    spec = SpatialGraphSpec(object_classes=("lake",), relations=(), region_count=1)
    scene = gen_spatial_graph(spec, 0)
    assert scene.network.n == 1 and len(scene.network.domains[0]) >= 1
    assert evaluate(scene.network, scene.planted) == 0


def test_unrealisable_spec():
    spec = SpatialGraphSpec(
        object_classes=("a", "b"),
        relations=(("a", "b", "contains"), ("b", "a", "contains"), ("a", "b", "adjacent")),
        region_count=1,
        grid=8,
        max_size=4,
    )
    with pytest.raises(GenerationError):
        gen_spatial_graph(spec, 0, restarts=3)
    with pytest.raises(InvalidNetworkError):
        SpatialGraphSpec(object_classes=("a",), relations=(), region_count=1, grid=8, max_size=12)


def test_spatial_planted_embedding_100_seeds():
    spec = airport_spec()
    for seed in range(100):
        scene = gen_spatial_graph(spec, seed)
        assert evaluate(scene.network, scene.planted) == 0
        var = {c: i for i, c in enumerate(spec.object_classes)}
        for rel in spec.relations:
            a = scene.regions[scene.planted[var[rel.first]]]
            b = scene.regions[scene.planted[var[rel.second]]]
            assert a[0] == rel.first and b[0] == rel.second
            assert geometric_oracle(rel, a[1], b[1])


@pytest.mark.parametrize("seed", [0, 5, 17])
def test_spatial_tuples_match_geometry(seed):
    spec = airport_spec()
    scene = gen_spatial_graph(spec, seed)
    # the generator emits one constraint per relation, in relation order
    for rel, c in zip(spec.relations, scene.network.constraints):
        i, j = c.scope
        expected = {
            (a, b)
            for a in scene.network.domains[i]
            for b in scene.network.domains[j]
            if geometric_oracle(rel, scene.regions[a][1], scene.regions[b][1])
        }
        assert set(c.payload) == expected


@settings(max_examples=100, deadline=None)
@given(networks(max_n=5))
def test_round_trip(net):
    text = serialize(net)
    back = parse(text)
    assert back.domains == net.domains
    assert sorted(back.constraints, key=lambda c: c.sort_key()) == sorted(net.constraints, key=lambda c: c.sort_key())
    assert serialize(back) == text


def test_bundled_corpus_round_trips():
    for name in corpus_names():
        raw = (ROOT / "src" / "gsocsp" / "data" / "corpus" / f"{name}.json").read_text()
        assert serialize(parse(raw)) == canonicalize(raw) == raw


def test_canonical_order_is_independent_of_input_order():
    doc = json.loads(serialize(gen_nqueens(4)))
    shuffled = copy.deepcopy(doc)
    shuffled["constraints"].reverse()
    assert canonicalize(json.dumps(shuffled)) == serialize(gen_nqueens(4))


def test_save_load(tmp_path):
    net = gen_graph_coloring(3, TRIANGLE, 3)
    save(net, tmp_path / "t.json")
    assert serialize(load(tmp_path / "t.json")) == serialize(net)


def _valid_doc():
    return json.loads(serialize(gen_random_binary(3, 2, 1.0, 0.3, seed=0)))


def _mutations():
    def setter(path, value):
        def apply(doc):
            target = doc
            for key in path[:-1]:
                target = target[key]
            target[path[-1]] = value
            return doc

        return apply

    def deleter(key):
        def apply(doc):
            del doc[key]
            return doc

        return apply

    yield "scope-equal", setter(["constraints", 0, "scope"], [0, 0])
    yield "empty-domain", setter(["domains", 1], [])
    yield "scope-out-of-range", setter(["constraints", 0, "scope"], [0, 7])
    yield "scope-triple", setter(["constraints", 0, "scope"], [0, 1, 2])
    yield "scope-strings", setter(["constraints", 0, "scope"], ["0", "1"])
    yield "scope-bool", setter(["constraints", 0, "scope"], [True, 0])
    yield "unknown-kind", setter(["constraints", 0, "kind"], "greater-than")
    yield "payload-not-list", setter(["constraints", 0, "payload"], 4)
    yield "payload-bad-pair", setter(["constraints", 0, "payload"], [[1, 2, 3]])
    yield "payload-float", setter(["constraints", 0, "payload"], [[1.5, 2]])
    yield "constraint-extra-field", setter(["constraints", 0, "weight"], 2)
    yield "constraint-not-object", setter(["constraints", 0], [0, 1])
    yield "constraints-not-list", setter(["constraints"], {"a": 1})
    yield "domains-short", setter(["domains"], [[1, 2]])
    yield "domains-not-list", setter(["domains"], "abc")
    yield "domain-float", setter(["domains", 0], [1, 2.5])
    yield "domain-duplicates", setter(["domains", 0], [1, 1])
    yield "n-zero", setter(["n"], 0)
    yield "n-string", setter(["n"], "3")
    yield "name-int", setter(["name"], 3)
    yield "metadata-list", setter(["metadata"], [])
    yield "unknown-top-field", setter(["extra"], 1)
    yield "no-version", deleter("schema_version")
    yield "no-n", deleter("n")
    yield "no-domains", deleter("domains")


@pytest.mark.parametrize("label, mutate", list(_mutations()), ids=[m[0] for m in _mutations()])
def test_fuzz_corpus_rejected(label, mutate):
    doc = mutate(_valid_doc())
    with pytest.raises(InstanceParseError) as info:
        parse(json.dumps(doc))
    assert str(info.value)


def test_error_names_field():
    doc = _valid_doc()
    doc["constraints"][1]["scope"] = [2, 2]
    with pytest.raises(InstanceParseError, match=r"constraints\[1\]\.scope"):
        parse(json.dumps(doc))


def test_error_names_line():
    text = serialize(gen_nqueens(4)).replace('"kind": "not-equal"', '"kind" "not-equal"', 1)
    with pytest.raises(InstanceParseError, match=r"line \d+"):
        parse(text)


def test_schema_version():
    doc = _valid_doc()
    doc["schema_version"] = 2
    with pytest.raises(SchemaVersionError):
        parse(json.dumps(doc))
    with pytest.raises(InstanceParseError):
        parse("[1, 2]")


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_random_edits_never_crash(data):
    text = serialize(gen_random_binary(3, 2, 1.0, 0.3, seed=0))
    pos = data.draw(st.integers(0, len(text) - 1))
    width = data.draw(st.integers(0, 6))
    insert = data.draw(st.text(alphabet='{}[],:"0123456789-truefalsnul ', max_size=6))
    edited = text[:pos] + insert + text[pos + width :]
    try:
        parse(edited)
    except InstanceParseError:
        pass


def test_golden_counts_against_enumeration():
    golden = golden_counts()
    assert set(golden) == set(corpus_names())
    for name, count in golden.items():
        net = load_bundled(name)
        size = math.prod(len(d) for d in net.domains)
        if count is None or size > 10**6:
            continue
        assert count_solutions(net) == count, name


@pytest.mark.slow
def test_large_golden_count():
    # 8^8 assignments, enumerated in chunks
    assert count_solutions(load_bundled("rb-n8-d8-s7")) == golden_counts()["rb-n8-d8-s7"]


def test_corpus_regenerates_byte_identical():
    sys.path.insert(0, str(ROOT / "tools"))
    try:
        import build_corpus
    finally:
        sys.path.pop(0)
    built = build_corpus.build()
    assert sorted(built) == corpus_names()
    for name, net in built.items():
        raw = (ROOT / "src" / "gsocsp" / "data" / "corpus" / f"{name}.json").read_text()
        assert serialize(net) == raw, name
