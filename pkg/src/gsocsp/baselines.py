"""Comparison solvers: standard GSO, global-best PSO and a backtracking oracle."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .exceptions import ConfigurationError, OracleBudgetError
from .gso import GsoParams, Member, SearchBounds, producer_scan_three_point
from .network import ConstraintNetwork
from .solver import PopulationSearch, SolverResult, StopCriterion, group_search, random_members


def _three_point_move(producer, params, bounds, k, k_max, search, rng):
    candidates = producer_scan_three_point(producer, params, bounds, rng)
    fits = search.fitness(np.array(candidates))
    best = int(np.argmin(fits))
    if fits[best] < producer.fitness:
        return Member(candidates[best], producer.head_angle.copy(), int(fits[best]), None, producer.feasible)
    return producer


def solve_standard_gso(
    network: ConstraintNetwork, params: Optional[GsoParams] = None, stop: Optional[StopCriterion] = None
) -> SolverResult:
    """Group search without root propagation and with three-point producer scanning."""
    return group_search(network, params or GsoParams(), stop or StopCriterion(), _three_point_move, prune=False)


@dataclass
class PsoParams:
    pop_size: int = 48
    w: float = 0.729
    c1: float = 1.49445
    c2: float = 1.49445
    v_max: Optional[float] = None  # None: half the largest domain size
    max_iters: int = 5000
    rng_seed: int = 0

    def validate(self) -> "PsoParams":
        if not isinstance(self.pop_size, (int, np.integer)) or self.pop_size < 1:
            raise ConfigurationError(f"pop_size must be a positive integer, got {self.pop_size!r}")
        if not isinstance(self.max_iters, (int, np.integer)) or self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not 0.0 <= self.w <= 1.0:
            raise ConfigurationError(f"inertia w must lie in [0, 1], got {self.w!r}")
        if self.c1 < 0 or self.c2 < 0:
            raise ConfigurationError("acceleration coefficients must be non-negative")
        if self.v_max is not None and not self.v_max > 0:
            raise ConfigurationError(f"v_max must be strictly positive, got {self.v_max!r}")
        return self


def pso_velocity(v, x, pbest, gbest, params: PsoParams, v_max: float, rng) -> np.ndarray:
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    v = params.w * v + params.c1 * r1 * (pbest - x) + params.c2 * r2 * (gbest - x)
    return np.clip(v, -v_max, v_max)


def solve_pso(
    network: ConstraintNetwork, params: Optional[PsoParams] = None, stop: Optional[StopCriterion] = None
) -> SolverResult:
    """Global-best PSO over the same continuous relaxation and decoding as group search."""
    params = (params or PsoParams()).validate()
    stop = stop or StopCriterion()
    rng = np.random.default_rng(params.rng_seed)
    domains = network.domains
    bounds = SearchBounds.for_domains(domains)
    v_max = params.v_max if params.v_max is not None else float(bounds.width.max()) / 2
    search = PopulationSearch(network, domains, params.max_iters, stop)

    x, _ = random_members(domains, params.pop_size, rng)
    v = rng.uniform(-v_max, v_max, x.shape)
    fitness = search.fitness(x)
    pbest, pbest_fit = x.copy(), fitness.copy()
    search.record(x, fitness)
    while True:
        halt, reason = search.halt()
        if halt:
            break
        g = int(np.argmin(pbest_fit))
        v = pso_velocity(v, x, pbest, pbest[g], params, v_max, rng)
        x = bounds.clip(x + v)
        fitness = search.fitness(x)
        better = fitness < pbest_fit
        pbest[better] = x[better]
        pbest_fit[better] = fitness[better]
        search.record(x, fitness)

    population = [
        Member(x[i], np.zeros(1), int(fitness[i]), tuple(int(a) for a in search.assignments(x[i])[0]))
        for i in range(params.pop_size)
    ]
    return search.result(reason, population)


class BacktrackResult(NamedTuple):
    solutions: list  # lexicographic by variable index, then domain order
    nodes: int


def solve_backtracking(network: ConstraintNetwork, budget: int = 10**8) -> BacktrackResult:
    """Enumerate every solution by chronological backtracking.

    Each tentative value assignment counts as one node; exceeding
    ``budget`` nodes raises :class:`OracleBudgetError`.
    """
    n = network.n
    # checks[i]: constraints linking variable i to an earlier variable
    checks = [[] for _ in range(n)]
    for c in network.constraints:
        i, j = c.scope
        if i < j:
            checks[j].append((c, i, True))
        else:
            checks[i].append((c, j, False))
    values = [0] * n
    solutions = []
    nodes = 0

    def extend(var: int) -> None:
        nonlocal nodes
        for u in network.domains[var]:
            nodes += 1
            if nodes > budget:
                raise OracleBudgetError(f"backtracking exceeded its budget of {budget} nodes")
            ok = True
            for c, other, var_is_second in checks[var]:
                w = values[other]
                if not (c.check(w, u) if var_is_second else c.check(u, w)):
                    ok = False
                    break
            if not ok:
                continue
            values[var] = u
            if var == n - 1:
                solutions.append(tuple(values))
            else:
                extend(var + 1)

    extend(0)
    return BacktrackResult(solutions, nodes)
