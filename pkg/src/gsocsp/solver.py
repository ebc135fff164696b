"""The hybrid APM-CPGSO search loop: arc-consistent initialisation plus group search."""
from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .exceptions import ConfigurationError
from .gso import (
    GsoParams,
    Member,
    SearchBounds,
    decode_indices,
    mutation_probability,
    producer_step_apm,
    range_moves,
    scrounge,
)
from .network import ConstraintNetwork, compile_tables, evaluate
from .propagation import ac3, assign_and_propagate


class StopMode(str, enum.Enum):
    FIRST_SOLUTION = "first-solution"
    N_SOLUTIONS = "n-solutions"
    MAX_ITERATIONS = "max-iterations"
    EXHAUST_POPULATION = "exhaust-population"


class StopReason(str, enum.Enum):
    FIRST_SOLUTION = "first-solution"
    SOLUTION_COUNT = "solution-count"
    ITERATION_CAP = "iteration-cap"
    EXHAUSTED = "exhausted"
    UNSATISFIABLE = "unsatisfiable"


@dataclass(frozen=True)
class StopCriterion:
    """When to halt. The iteration cap in the solver params always applies.

    ``count`` is the wanted number of solutions for ``n-solutions``.
    ``total`` is an externally known solution count that lets
    ``exhaust-population`` end early once every solution has been found.
    """

    mode: StopMode = StopMode.MAX_ITERATIONS
    count: Optional[int] = None
    total: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "mode", StopMode(self.mode))
        if self.mode is StopMode.N_SOLUTIONS and (self.count is None or self.count < 1):
            raise ConfigurationError("n-solutions needs a count >= 1")

    @classmethod
    def parse(cls, text: str) -> "StopCriterion":
        """Parse ``first``, ``count:N``, ``iters`` or ``exhaust[:TOTAL]``."""
        head, _, arg = text.partition(":")
        try:
            if head == "first":
                return cls(StopMode.FIRST_SOLUTION)
            if head == "count":
                return cls(StopMode.N_SOLUTIONS, count=int(arg))
            if head == "iters":
                return cls(StopMode.MAX_ITERATIONS)
            if head == "exhaust":
                return cls(StopMode.EXHAUST_POPULATION, total=int(arg) if arg else None)
        except ValueError as exc:
            raise ConfigurationError(f"bad stop criterion {text!r}: {exc}") from None
        raise ConfigurationError(f"unknown stop criterion {text!r}")


class SearchStatus(NamedTuple):
    iterations: int  # trace rows recorded so far, the initial population included
    n_solutions: int
    max_iters: int


def stop_check(state: SearchStatus, stop: StopCriterion) -> tuple:
    """Return ``(halt, reason)``; solution-based reasons win over the cap."""
    mode = stop.mode
    if mode is StopMode.FIRST_SOLUTION and state.n_solutions >= 1:
        return True, StopReason.FIRST_SOLUTION
    if mode is StopMode.N_SOLUTIONS and state.n_solutions >= stop.count:
        return True, StopReason.SOLUTION_COUNT
    if mode is StopMode.EXHAUST_POPULATION and stop.total is not None and state.n_solutions >= stop.total:
        return True, StopReason.EXHAUSTED
    if state.iterations >= state.max_iters:
        return True, StopReason.ITERATION_CAP
    return False, None


class TraceRow(NamedTuple):
    iteration: int
    best_fitness: int
    mean_fitness: float
    solutions_found: int
    elapsed_ms: int


TRACE_HEADER = TraceRow._fields


@dataclass
class ConvergenceTrace:
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def stable_rows(self) -> list:
        """Rows without the wall-clock column."""
        return [r[:-1] for r in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(TRACE_HEADER)]
        for r in self.rows:
            lines.append(f"{r.iteration},{r.best_fitness},{r.mean_fitness:.6f},{r.solutions_found},{r.elapsed_ms}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_csv(cls, text: str) -> "ConvergenceTrace":
        lines = text.strip().splitlines()
        if not lines or tuple(lines[0].split(",")) != TRACE_HEADER:
            raise ValueError("not a convergence trace: bad header")
        rows = []
        for line in lines[1:]:
            it, best, mean, sols, ms = line.split(",")
            rows.append(TraceRow(int(it), int(best), float(mean), int(sols), int(ms)))
        return cls(rows)


@dataclass
class SolverResult:
    solutions: list  # fitness-0 assignments in discovery order, no duplicates
    best: tuple  # (assignment, fitness)
    trace: ConvergenceTrace
    iterations_run: int
    stop_reason: StopReason
    population: list = field(default_factory=list)
    domains: tuple = ()

    @property
    def best_assignment(self):
        return self.best[0]

    @property
    def best_fitness(self):
        return self.best[1]

    @property
    def satisfiable(self) -> Optional[bool]:
        if self.solutions:
            return True
        if self.stop_reason is StopReason.UNSATISFIABLE:
            return False
        return None


def _proves_inconsistent(network, domains, assignment) -> bool:
    current = domains
    for var, value in enumerate(assignment):
        if value not in current[var]:
            return True
        result = assign_and_propagate(network, current, var, value)
        if result.wipeout:
            return True
        current = result.domains
    return False


def random_members(domains, pop_size: int, rng) -> tuple:
    """Uniform positions in ``[0, |D_j|)`` and head angles in ``[-pi, pi)``."""
    n = len(domains)
    sizes = np.array([len(d) for d in domains], dtype=float)
    positions = rng.random((pop_size, n)) * sizes
    angles = rng.uniform(-np.pi, np.pi, (pop_size, max(n - 1, 1)))
    return positions, angles


def initialize_population(network: ConstraintNetwork, params: GsoParams, rng, prune: bool = True) -> tuple:
    """Arc-consistent root domains and a random, evaluated population.

    Returns ``(members, root_domains)``. On a root wipeout the member list is
    empty and the caller should report the instance unsatisfiable. Members
    whose assignment violates constraints stay in the population; they are
    only run through propagation to flag them infeasible. ``prune=False``
    skips propagation entirely (the standard GSO baseline).
    """
    params.validate()
    if prune:
        root = ac3(network)
        if root.wipeout:
            return [], root.domains
        domains = root.domains
    else:
        domains = network.domains
    positions, angles = random_members(domains, params.pop_size, rng)
    sizes = np.array([len(d) for d in domains])
    members = []
    for pos, ang in zip(positions, angles):
        idx = decode_indices(pos, sizes)
        assignment = tuple(domains[j][idx[j]] for j in range(len(domains)))
        fit = evaluate(network, assignment)
        feasible = fit == 0 or not (prune and _proves_inconsistent(network, domains, assignment))
        members.append(Member(pos, ang, fit, assignment, feasible))
    return members, domains


class PopulationSearch:
    """Shared bookkeeping for population solvers: decoding, harvesting, tracing."""

    def __init__(self, network: ConstraintNetwork, domains, max_iters: int, stop: StopCriterion):
        self.network = network
        self.domains = tuple(domains)
        self.sizes = np.array([len(d) for d in self.domains])
        self.tables = compile_tables(network, self.domains)
        width = int(self.sizes.max())
        self.values = np.zeros((len(self.domains), width), dtype=np.int64)
        for j, d in enumerate(self.domains):
            self.values[j, : len(d)] = d
        self.max_iters = max_iters
        self.stop = stop
        self.solutions: dict = {}
        self.best_assignment = None
        self.best_fitness = None
        self.trace = ConvergenceTrace()
        self._t0 = time.perf_counter()

    def fitness(self, positions: np.ndarray) -> np.ndarray:
        return self.tables.count(decode_indices(positions, self.sizes))

    def fitness_of(self, position: np.ndarray) -> int:
        return int(self.fitness(position[None, :])[0])

    def assignments(self, positions: np.ndarray) -> np.ndarray:
        idx = decode_indices(np.atleast_2d(positions), self.sizes)
        return self.values[np.arange(len(self.domains)), idx]

    def record(self, positions: np.ndarray, fitness: np.ndarray) -> None:
        """Harvest solutions, update the best-so-far and append a trace row."""
        best = int(np.argmin(fitness))
        if self.best_fitness is None or fitness[best] < self.best_fitness:
            self.best_fitness = int(fitness[best])
            self.best_assignment = tuple(int(v) for v in self.assignments(positions[best])[0])
        zero = np.flatnonzero(fitness == 0)
        if len(zero):
            for row in self.assignments(positions[zero]):
                self.solutions.setdefault(tuple(int(v) for v in row), None)
        elapsed = int((time.perf_counter() - self._t0) * 1000)
        self.trace.rows.append(
            TraceRow(len(self.trace), self.best_fitness, float(np.mean(fitness)), len(self.solutions), elapsed)
        )

    def halt(self) -> tuple:
        return stop_check(SearchStatus(len(self.trace), len(self.solutions), self.max_iters), self.stop)

    def result(self, reason: StopReason, population: list) -> SolverResult:
        return SolverResult(
            solutions=list(self.solutions),
            best=(self.best_assignment, self.best_fitness),
            trace=self.trace,
            iterations_run=len(self.trace),
            stop_reason=reason,
            population=population,
            domains=self.domains,
        )


def unsatisfiable_result(domains) -> SolverResult:
    return SolverResult([], (None, None), ConvergenceTrace(), 0, StopReason.UNSATISFIABLE, [], tuple(domains))


ProducerMove = Callable[[Member, GsoParams, SearchBounds, int, int, "PopulationSearch", np.random.Generator], Member]


def _apm_move(producer, params, bounds, k, k_max, search, rng):
    return producer_step_apm(
        producer, params, bounds, k, k_max, search.network, search.domains, rng, fitness_of=search.fitness_of
    )


def group_search(
    network: ConstraintNetwork,
    params: GsoParams,
    stop: StopCriterion,
    producer_move: ProducerMove = _apm_move,
    prune: bool = True,
) -> SolverResult:
    """Producer / scrounger / ranger loop shared by APM-CPGSO and standard GSO.

    Trace row 0 describes the initial population; each further row follows
    one update of the whole group. ``params.max_iters`` caps the row count.
    """
    params.validate()
    rng = np.random.default_rng(params.rng_seed)
    members, domains = initialize_population(network, params, rng, prune=prune)
    if not members:
        return unsatisfiable_result(domains)
    bounds = SearchBounds.for_domains(domains)
    params = params.resolve(bounds)
    search = PopulationSearch(network, domains, params.max_iters, stop)

    positions = np.array([m.position for m in members])
    angles = np.array([m.head_angle for m in members])
    fitness = np.array([m.fitness for m in members], dtype=np.int64)
    feasible = [m.feasible for m in members]
    search.record(positions, fitness)

    k_max = max(params.max_iters - 1, 1)
    m = params.pop_size
    while True:
        halt, reason = search.halt()
        if halt:
            break
        k = len(search.trace)
        p = int(np.argmin(fitness))
        producer = Member(positions[p], angles[p], int(fitness[p]), None, feasible[p])
        moved = producer_move(producer, params, bounds, k, k_max, search, rng)
        positions = positions.copy()
        angles = angles.copy()
        positions[p] = moved.position
        angles[p] = moved.head_angle

        others = np.arange(m) != p
        u = rng.random(m)
        scroungers = others & (u < params.scrounger_prob)
        rangers = others & ~(u < params.scrounger_prob)
        if scroungers.any():
            positions[scroungers] = scrounge(positions[scroungers], positions[p], rng)
        if rangers.any():
            positions[rangers], angles[rangers] = range_moves(
                positions[rangers], angles[rangers], params, bounds, rng
            )
        fitness = search.fitness(positions)
        search.record(positions, fitness)

    population = [
        Member(positions[i], angles[i], int(fitness[i]), tuple(int(v) for v in search.assignments(positions[i])[0]), feasible[i])
        for i in range(m)
    ]
    return search.result(reason, population)


def solve(network: ConstraintNetwork, params: Optional[GsoParams] = None, stop: Optional[StopCriterion] = None) -> SolverResult:
    """Run APM-CPGSO on ``network``."""
    return group_search(network, params or GsoParams(), stop or StopCriterion())
