"""AC-3 arc-consistency filtering."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .exceptions import InvalidValueError, NoArcError
from .network import ConstraintNetwork, make_domain


@dataclass(frozen=True)
class PropagationResult:
    domains: tuple
    wipeout: bool
    removals: tuple  # (variable, value) in removal order

    @property
    def n_removed(self) -> int:
        return len(self.removals)


def revise(network: ConstraintNetwork, xi: int, xj: int, domains) -> tuple:
    """Drop the values of ``xi`` that have no support in ``domains[xj]``.

    All constraints on the pair are conjoined: a support must satisfy every
    one of them at once. Returns ``(changed, new_domain_of_xi)``.
    """
    if not network.constraints_between(xi, xj):
        raise NoArcError(f"no constraint couples variables {xi} and {xj}")
    dj = domains[xj]
    supports = network.supports
    kept = tuple(u for u in domains[xi] if any(supports(xi, xj, u, v) for v in dj))
    return len(kept) != len(domains[xi]), kept


def ac3(network: ConstraintNetwork, domains=None, reverse: bool = False) -> PropagationResult:
    """Reduce ``domains`` to the maximal arc-consistent subdomains.

    The queue is seeded with every arc in sorted order (reversed when
    ``reverse`` is set) and processed FIFO. A wipeout does not stop the
    loop early, so the returned domains are the true fixpoint whatever the
    seeding order.
    """
    domains = [make_domain(d) for d in (network.domains if domains is None else domains)]
    arcs = network.arcs()
    if reverse:
        arcs.reverse()
    queue = deque(arcs)
    queued = set(arcs)
    removals = []
    while queue:
        xi, xj = queue.popleft()
        queued.discard((xi, xj))
        changed, kept = revise(network, xi, xj, domains)
        if not changed:
            continue
        kept_set = set(kept)
        removals.extend((xi, u) for u in domains[xi] if u not in kept_set)
        domains[xi] = kept
        for xk in network.neighbors(xi):
            if xk != xj and (xk, xi) not in queued:
                queue.append((xk, xi))
                queued.add((xk, xi))
    wipeout = any(len(d) == 0 for d in domains)
    return PropagationResult(tuple(domains), wipeout, tuple(removals))


def assign_and_propagate(network: ConstraintNetwork, domains, var: int, value: int) -> PropagationResult:
    """Fix ``var`` to ``value`` and run :func:`ac3` on the result.

    The removal log starts with the other values of ``var`` dropped by the
    assignment itself.
    """
    domains = [make_domain(d) for d in domains]
    if value not in domains[var]:
        raise InvalidValueError(f"value {value} not in domain of variable {var}")
    pre = [(var, u) for u in domains[var] if u != value]
    domains[var] = (int(value),)
    result = ac3(network, domains)
    return PropagationResult(result.domains, result.wipeout, tuple(pre) + result.removals)
