"""Independent reference implementations used only by the tests.

None of these share code with the solver paths they check: relations are
tabulated by calling ``check_pair`` value by value, enumeration is a plain
Cartesian product, and the arc-consistency oracle re-derives supports
itself instead of calling ``revise``.
"""
import itertools
import math

import numpy as np

from gsocsp.network import check_pair


def relation_tables(network, domains=None):
    domains = network.domains if domains is None else domains
    tables = []
    for c in network.constraints:
        i, j = c.scope
        t = np.array([[check_pair(c, u, v) for v in domains[j]] for u in domains[i]], dtype=bool)
        tables.append((i, j, t.reshape(len(domains[i]), len(domains[j]))))
    return tables


def brute_force_solutions(network, domains=None, chunk=200_000):
    """All solutions over ``domains`` by exhaustive enumeration (numpy, chunked)."""
    domains = network.domains if domains is None else domains
    if any(len(d) == 0 for d in domains):
        return set()
    tables = relation_tables(network, domains)
    sizes = [len(d) for d in domains]
    total = int(np.prod(sizes))
    found = set()
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.stack(np.unravel_index(flat, sizes), axis=1)
        ok = np.ones(len(flat), dtype=bool)
        for i, j, t in tables:
            ok &= t[idx[:, i], idx[:, j]]
        for row in idx[ok]:
            found.add(tuple(domains[k][row[k]] for k in range(len(domains))))
    return found


def count_solutions(network, domains=None, chunk=500_000):
    domains = network.domains if domains is None else domains
    tables = relation_tables(network, domains)
    sizes = [len(d) for d in domains]
    total = int(np.prod(sizes))
    count = 0
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        idx = np.stack(np.unravel_index(flat, sizes), axis=1)
        ok = np.ones(len(flat), dtype=bool)
        for i, j, t in tables:
            ok &= t[idx[:, i], idx[:, j]]
        count += int(ok.sum())
    return count


def naive_violations(network, a):
    """Violations counted pair by pair in reverse constraint order."""
    total = 0
    for c in reversed(network.constraints):
        total += 0 if check_pair(c, a[c.scope[0]], a[c.scope[1]]) else 1
    return total


def arc_consistent_fixpoint(network, domains=None):
    """Sweep every arc, dropping unsupported values, until a sweep changes nothing."""
    doms = [list(d) for d in (network.domains if domains is None else domains)]
    by_pair = {}
    for c in network.constraints:
        i, j = c.scope
        by_pair.setdefault((i, j), []).append((c, False))
        by_pair.setdefault((j, i), []).append((c, True))

    def ok(cs, u, v):
        return all(check_pair(c, v, u) if flipped else check_pair(c, u, v) for c, flipped in cs)

    changed = True
    while changed:
        changed = False
        for (i, j), cs in by_pair.items():
            keep = [u for u in doms[i] if any(ok(cs, u, v) for v in doms[j])]
            if len(keep) != len(doms[i]):
                doms[i] = keep
                changed = True
    return tuple(tuple(d) for d in doms)


class ScriptedRng:
    """Stand-in generator returning fixed draws, for pinning operator branches."""

    def __init__(self, normal=0.0, random=0.0, uniform=0.0):
        self.normal = normal
        self.rand = random
        self.unif = uniform

    def _fill(self, value, size):
        if size is None:
            return value
        return np.broadcast_to(np.asarray(value, dtype=float), size if isinstance(size, tuple) else (size,)).copy()

    def standard_normal(self, size=None):
        return self._fill(self.normal, size)

    def random(self, size=None):
        return self._fill(self.rand, size)

    def uniform(self, low=0.0, high=1.0, size=None):
        return self._fill(self.unif, size)


def all_assignments(network):
    return itertools.product(*network.domains)


def geometric_oracle(rel, a, b):
    """Spatial relation re-derived from raw box coordinates."""
    ax0, ay0, ax1, ay1 = a
    bx0, by0, bx1, by1 = b
    if rel.kind == "contains":
        return ax0 <= bx0 and ay0 <= by0 and bx1 <= ax1 and by1 <= ay1
    if rel.kind == "adjacent":
        overlap_x = min(ax1, bx1) - max(ax0, bx0)
        overlap_y = min(ay1, by1) - max(ay0, by0)
        return min(overlap_x, overlap_y) == 0 and max(overlap_x, overlap_y) >= 0
    dx = (ax0 + ax1 - bx0 - bx1) / 2
    dy = (ay0 + ay1 - by0 - by1) / 2
    return math.sqrt(dx * dx + dy * dy) <= rel.distance
