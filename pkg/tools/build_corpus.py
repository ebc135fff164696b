"""Regenerate src/gsocsp/data/corpus/ and its golden solution counts.

    python tools/build_corpus.py
"""
import dataclasses
import json
from pathlib import Path

from gsocsp.baselines import solve_backtracking
from gsocsp.exceptions import OracleBudgetError
from gsocsp.instances import (
    airport_spec,
    gen_graph_coloring,
    gen_nqueens,
    gen_random_binary,
    gen_spatial_graph,
    serialize,
)
from gsocsp.network import LESS_THAN, Constraint, ConstraintNetwork
from gsocsp.propagation import ac3

OUT = Path(__file__).resolve().parents[1] / "src" / "gsocsp" / "data" / "corpus"
GOLDEN_BUDGET = 5_000_000
BUDGET_OVERRIDES = {"rb-n8-d8-s7": 10**8}

# tight, sparse random CSPs: arc consistency prunes ~1/4 of the values
SUITE_FAMILY = dict(n=20, domain_size=6, density=0.25, tightness=0.55)
WIPEOUT_FAMILY = dict(n=20, domain_size=6, density=0.2, tightness=0.6)


def renamed(network, name):
    return dataclasses.replace(network, name=name)


def build():
    corpus = {}
    for n in (4, 6, 8):
        corpus[f"queens{n}"] = gen_nqueens(n)
    corpus["triangle-c3"] = renamed(gen_graph_coloring(3, [(0, 1), (1, 2), (0, 2)], 3), "triangle-c3")
    corpus["triangle-c2"] = renamed(gen_graph_coloring(3, [(0, 1), (1, 2), (0, 2)], 2), "triangle-c2")
    corpus["cycle-lt"] = ConstraintNetwork(
        [(1, 2, 3)] * 3,
        [Constraint((0, 1), LESS_THAN), Constraint((1, 2), LESS_THAN), Constraint((2, 0), LESS_THAN)],
        name="cycle-lt",
        metadata={"generator": "hand-written"},
    )
    corpus["rb-n8-d8-s7"] = renamed(gen_random_binary(8, 8, 0.3, 0.3, seed=7), "rb-n8-d8-s7")
    corpus["airport-s1"] = renamed(gen_spatial_graph(airport_spec(), 1).network, "airport-s1")

    seed = kept = 0
    while kept < 20:
        net = gen_random_binary(seed=seed, **SUITE_FAMILY)
        if not ac3(net).wipeout:
            corpus[f"suite-rb-{kept:02d}"] = renamed(net, f"suite-rb-{kept:02d}")
            kept += 1
        seed += 1
    seed = kept = 0
    while kept < 20:
        net = gen_random_binary(seed=seed, **WIPEOUT_FAMILY)
        if ac3(net).wipeout:
            corpus[f"wipeout-{kept:02d}"] = renamed(net, f"wipeout-{kept:02d}")
            kept += 1
        seed += 1
    return corpus


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    golden = {}
    for name, net in sorted(build().items()):
        (OUT / f"{name}.json").write_text(serialize(net), encoding="utf-8")
        try:
            golden[name] = len(solve_backtracking(net, BUDGET_OVERRIDES.get(name, GOLDEN_BUDGET)).solutions)
        except OracleBudgetError:
            golden[name] = None
        print(name, golden[name], flush=True)
    (OUT / "golden.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
