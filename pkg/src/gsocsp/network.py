"""Finite-domain binary constraint networks and violation counting."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import InvalidAssignmentError, InvalidNetworkError

EQUAL = "equal"
NOT_EQUAL = "not-equal"
LESS_THAN = "less-than"
ABS_DIFF_NOT_EQUAL = "abs-diff-not-equal-offset"
ALLOWED_TUPLES = "allowed-tuples"

KINDS = (EQUAL, NOT_EQUAL, LESS_THAN, ABS_DIFF_NOT_EQUAL, ALLOWED_TUPLES)

Domain = tuple  # sorted, duplicate-free tuple of ints


def make_domain(values: Iterable[int]) -> Domain:
    """Return ``values`` as a sorted duplicate-free tuple of Python ints."""
    return tuple(sorted({int(v) for v in values}))


@dataclass(frozen=True)
class Constraint:
    """Binary constraint on the ordered pair ``scope``.

    ``payload`` is the integer offset for ``abs-diff-not-equal-offset``, a
    set of allowed ``(u, v)`` pairs for ``allowed-tuples`` and ``None``
    for the other catalog relations.
    """

    scope: tuple
    kind: str
    payload: object = None

    def __post_init__(self):
        if len(self.scope) != 2:
            raise InvalidNetworkError(f"constraint arity must be 2, got scope {self.scope!r}")
        i, j = (int(s) for s in self.scope)
        if i == j:
            raise InvalidNetworkError(f"constraint scope variables must be distinct, got {self.scope!r}")
        if i < 0 or j < 0:
            raise InvalidNetworkError(f"negative variable index in scope {self.scope!r}")
        object.__setattr__(self, "scope", (i, j))
        if self.kind not in KINDS:
            raise InvalidNetworkError(f"unknown relation kind {self.kind!r}")
        if self.kind == ABS_DIFF_NOT_EQUAL:
            if isinstance(self.payload, bool) or not isinstance(self.payload, (int, np.integer)):
                raise InvalidNetworkError(f"{self.kind} needs an integer offset payload")
            object.__setattr__(self, "payload", int(self.payload))
        elif self.kind == ALLOWED_TUPLES:
            if self.payload is None:
                raise InvalidNetworkError(f"{self.kind} needs a tuple-set payload")
            pairs = set()
            for t in self.payload:
                if len(t) != 2:
                    raise InvalidNetworkError(f"allowed tuple {t!r} is not a pair")
                pairs.add((int(t[0]), int(t[1])))
            object.__setattr__(self, "payload", frozenset(pairs))
        elif self.payload is not None:
            raise InvalidNetworkError(f"{self.kind} takes no payload")

    def check(self, u: int, v: int) -> bool:
        kind = self.kind
        if kind == NOT_EQUAL:
            return u != v
        if kind == ABS_DIFF_NOT_EQUAL:
            return abs(u - v) != self.payload
        if kind == LESS_THAN:
            return u < v
        if kind == EQUAL:
            return u == v
        return (u, v) in self.payload

    def sort_key(self):
        payload = self.payload
        if self.kind == ALLOWED_TUPLES:
            payload = tuple(sorted(payload))
        elif payload is None:
            payload = ()
        else:
            payload = (payload,)
        return (self.scope, self.kind, payload)


def check_pair(c: Constraint, u: int, v: int) -> bool:
    """Truth of ``c``'s relation for values ``u`` (first scope var) and ``v``."""
    return c.check(u, v)


@dataclass(frozen=True)
class ConstraintNetwork:
    """The triple (variables, domains, constraints) of a binary CSP.

    Variables are the dense indices ``0..n-1``. Instances are immutable and
    may be shared between concurrent solver runs.
    """

    domains: tuple
    constraints: tuple = ()
    name: str = ""
    metadata: dict = field(default_factory=dict, compare=False, hash=False)
    _pairs: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        domains = tuple(make_domain(d) for d in self.domains)
        if len(domains) < 1:
            raise InvalidNetworkError("a network needs at least one variable")
        for idx, d in enumerate(domains):
            if not d:
                raise InvalidNetworkError(f"domain of variable {idx} is empty")
        constraints = tuple(self.constraints)
        n = len(domains)
        pairs: dict = {}
        for c in constraints:
            if not isinstance(c, Constraint):
                raise InvalidNetworkError(f"not a Constraint: {c!r}")
            i, j = c.scope
            if i >= n or j >= n:
                raise InvalidNetworkError(f"scope {c.scope} out of range for {n} variables")
            pairs.setdefault((i, j), []).append((c, False))
            pairs.setdefault((j, i), []).append((c, True))
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "constraints", constraints)
        object.__setattr__(self, "_pairs", {k: tuple(v) for k, v in pairs.items()})

    @property
    def n(self) -> int:
        return len(self.domains)

    def arcs(self) -> list:
        """Directed arcs ``(i, j)``, one per constrained ordered pair, sorted."""
        return sorted(self._pairs)

    def neighbors(self, i: int) -> list:
        return sorted(j for (a, j) in self._pairs if a == i)

    def constraints_between(self, i: int, j: int) -> tuple:
        """``(constraint, flipped)`` pairs coupling ``i`` and ``j``.

        ``flipped`` is True when the constraint's scope is ``(j, i)``, in which
        case values must be passed to ``check`` in swapped order.
        """
        return self._pairs.get((i, j), ())

    def supports(self, i: int, j: int, u: int, v: int) -> bool:
        """True when ``x_i=u, x_j=v`` satisfies every constraint on the pair."""
        for c, flipped in self._pairs.get((i, j), ()):
            if not (c.check(v, u) if flipped else c.check(u, v)):
                return False
        return True

    def with_domains(self, domains) -> "ConstraintNetwork":
        return ConstraintNetwork(domains, self.constraints, self.name, dict(self.metadata))


def _check_length(network: ConstraintNetwork, a: Sequence[int]) -> None:
    if len(a) != network.n:
        raise InvalidAssignmentError(
            f"assignment has {len(a)} values, network has {network.n} variables"
        )


def evaluate(network: ConstraintNetwork, a: Sequence[int]) -> int:
    """Number of constraints violated by the complete assignment ``a``."""
    _check_length(network, a)
    return sum(1 for c in network.constraints if not c.check(a[c.scope[0]], a[c.scope[1]]))


def is_solution(network: ConstraintNetwork, a: Sequence[int]) -> bool:
    return evaluate(network, a) == 0


class PairTables(NamedTuple):
    """Dense compatibility tables indexed by positions inside given domains.

    ``allowed[c, p, q]`` is True when constraint ``c`` admits the ``p``-th
    value of its first variable's domain with the ``q``-th value of the
    second's.
    """

    first: np.ndarray
    second: np.ndarray
    allowed: np.ndarray

    def count(self, indices: np.ndarray) -> np.ndarray:
        """Violation counts for a ``(m, n)`` matrix of domain positions."""
        indices = np.atleast_2d(indices)
        if len(self.first) == 0:
            return np.zeros(indices.shape[0], dtype=np.int64)
        ok = self.allowed[np.arange(len(self.first)), indices[:, self.first], indices[:, self.second]]
        return (~ok).sum(axis=1)


def _relation_matrix(c: Constraint, left: np.ndarray, right: np.ndarray) -> np.ndarray:
    u = left[:, None]
    v = right[None, :]
    if c.kind == NOT_EQUAL:
        return u != v
    if c.kind == EQUAL:
        return u == v
    if c.kind == LESS_THAN:
        return u < v
    if c.kind == ABS_DIFF_NOT_EQUAL:
        return np.abs(u - v) != c.payload
    return np.array([[(int(a), int(b)) in c.payload for b in right] for a in left], dtype=bool).reshape(
        len(left), len(right)
    )


def compile_tables(network: ConstraintNetwork, domains=None) -> PairTables:
    """Build :class:`PairTables` for ``network`` over ``domains``.

    ``domains`` defaults to the network's own domains; pass pruned domains
    to index positions inside them instead.
    """
    domains = network.domains if domains is None else domains
    width = max(len(d) for d in domains)
    cs = network.constraints
    allowed = np.zeros((len(cs), width, width), dtype=bool)
    for k, c in enumerate(cs):
        i, j = c.scope
        left = np.asarray(domains[i], dtype=np.int64)
        right = np.asarray(domains[j], dtype=np.int64)
        allowed[k, : len(left), : len(right)] = _relation_matrix(c, left, right)
    first = np.array([c.scope[0] for c in cs], dtype=np.intp)
    second = np.array([c.scope[1] for c in cs], dtype=np.intp)
    return PairTables(first, second, allowed)
