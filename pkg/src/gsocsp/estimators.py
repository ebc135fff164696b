"""scikit-learn style wrappers around the solvers and filters.

Solvers follow the clusterer convention: ``fit(network)`` runs the search
and ``fit_predict(network)`` returns the best assignment found. Fitted
attributes end in an underscore. Hyper-parameters are plain constructor
arguments, so ``get_params`` / ``set_params`` / ``clone`` work unchanged.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .baselines import PsoParams, solve_backtracking, solve_pso, solve_standard_gso
from .exceptions import CSPError, WipeoutError
from .gso import GsoParams
from .network import evaluate
from .propagation import ac3
from .solver import StopCriterion, solve
from .validation import check_assignments, check_network, check_random_state


def _stop(stop) -> StopCriterion:
    return stop if isinstance(stop, StopCriterion) else StopCriterion.parse(stop)


class _SearchSolver(BaseEstimator):
    def _run(self, network, seed):
        raise NotImplementedError

    def fit(self, X, y=None):
        network = check_network(X)
        self.seed_ = check_random_state(self.random_state)
        result = self._run(network, self.seed_)
        self.result_ = result
        self.solutions_ = [np.asarray(s) for s in result.solutions]
        self.best_assignment_ = None if result.best_assignment is None else np.asarray(result.best_assignment)
        self.best_fitness_ = result.best_fitness
        self.trace_ = result.trace
        self.n_iter_ = result.iterations_run
        self.stop_reason_ = result.stop_reason
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).best_assignment_

    def score(self, X=None, y=None):
        """Negative violation count of the best assignment (higher is better)."""
        check_is_fitted(self, "result_")
        return float(-self.best_fitness_) if self.best_fitness_ is not None else -np.inf


class APMCPGSO(_SearchSolver):
    """Group search with arc-consistent initialisation and adaptive polynomial mutation.

    Parameters
    ----------
    pop_size : int
        Number of members.
    scrounger_prob : float
        Chance that a non-producer scrounges rather than ranges.
    mutation_eta : float
        Distribution index of the producer's polynomial mutation.
    stop : str or StopCriterion
        ``first``, ``count:N``, ``iters`` or ``exhaust[:TOTAL]``.
    random_state : int or None
        Seed; ``None`` picks one and stores it in ``seed_``.
    """

    def __init__(
        self,
        pop_size=48,
        scrounger_prob=0.6,
        l_max=None,
        theta_max=None,
        alpha_max=None,
        mutation_eta=1.0,
        ranging_a=None,
        max_iters=5000,
        truncate_normal=True,
        stop="first",
        random_state=None,
    ):
        self.pop_size = pop_size
        self.scrounger_prob = scrounger_prob
        self.l_max = l_max
        self.theta_max = theta_max
        self.alpha_max = alpha_max
        self.mutation_eta = mutation_eta
        self.ranging_a = ranging_a
        self.max_iters = max_iters
        self.truncate_normal = truncate_normal
        self.stop = stop
        self.random_state = random_state

    def _params(self, seed) -> GsoParams:
        return GsoParams(
            pop_size=self.pop_size,
            scrounger_prob=self.scrounger_prob,
            l_max=self.l_max,
            theta_max=self.theta_max,
            alpha_max=self.alpha_max,
            mutation_eta=self.mutation_eta,
            ranging_a=self.ranging_a,
            max_iters=self.max_iters,
            rng_seed=seed,
            truncate_normal=self.truncate_normal,
        )

    def _run(self, network, seed):
        return solve(network, self._params(seed), _stop(self.stop))


class StandardGSO(APMCPGSO):
    """Plain group search: no propagation, three-point producer scanning."""

    def _run(self, network, seed):
        return solve_standard_gso(network, self._params(seed), _stop(self.stop))


class PSOSolver(_SearchSolver):
    def __init__(self, pop_size=48, w=0.729, c1=1.49445, c2=1.49445, v_max=None, max_iters=5000, stop="first", random_state=None):
        self.pop_size = pop_size
        self.w = w
        self.c1 = c1
        self.c2 = c2
        self.v_max = v_max
        self.max_iters = max_iters
        self.stop = stop
        self.random_state = random_state

    def _run(self, network, seed):
        params = PsoParams(self.pop_size, self.w, self.c1, self.c2, self.v_max, self.max_iters, seed)
        return solve_pso(network, params, _stop(self.stop))


class BacktrackingSolver(BaseEstimator):
    """Exhaustive enumeration; ``solutions_`` holds every solution."""

    def __init__(self, budget=10**8):
        self.budget = budget

    def fit(self, X, y=None):
        network = check_network(X)
        found = solve_backtracking(network, self.budget)
        self.solutions_ = [np.asarray(s) for s in found.solutions]
        self.n_solutions_ = len(found.solutions)
        self.nodes_ = found.nodes
        return self

    def fit_predict(self, X, y=None):
        self.fit(X)
        return self.solutions_[0] if self.solutions_ else None


class ArcConsistency(TransformerMixin, BaseEstimator):
    """AC-3 as a transformer: ``transform`` returns the network over pruned domains."""

    def __init__(self, reverse=False):
        self.reverse = reverse

    def fit(self, X, y=None):
        network = check_network(X)
        result = ac3(network, reverse=self.reverse)
        self.domains_ = result.domains
        self.wipeout_ = result.wipeout
        self.removals_ = result.removals
        return self

    def transform(self, X):
        check_is_fitted(self, "domains_")
        network = check_network(X)
        if len(network.domains) != len(self.domains_):
            raise CSPError("network does not match the fitted variable count")
        if self.wipeout_:
            raise WipeoutError("a domain was wiped out; the network is unsatisfiable")
        return network.with_domains(self.domains_)


class ViolationCounter(TransformerMixin, BaseEstimator):
    """Maps rows of assignment values to their violated-constraint counts."""

    def fit(self, X, y=None):
        self.network_ = check_network(X)
        self.n_features_in_ = self.network_.n
        return self

    def transform(self, X):
        check_is_fitted(self, "network_")
        rows = check_assignments(self.network_, X)
        return np.array([evaluate(self.network_, [int(v) for v in row]) for row in rows], dtype=np.int64)
