"""Group search geometry and move operators on a continuous relaxation.

Members live in ``R^n`` with per-dimension bounds ``[0, |D_j|]``; a
position decodes to an assignment by flooring each coordinate into a
domain index. All operators draw from an explicit ``numpy`` generator and
broadcast over leading axes, so a ``(m, n)`` batch moves ``m`` members at once.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .exceptions import ConfigurationError, DimensionError, InfeasibleMemberError, OutOfRangeError
from .network import ConstraintNetwork, evaluate

NORMAL_CLIP = 3.0


@dataclass
class Member:
    position: np.ndarray
    head_angle: np.ndarray
    fitness: int = -1
    decoded: Optional[tuple] = None
    feasible: bool = True  # False once propagation proved the decoded assignment inconsistent

    def copy(self) -> "Member":
        return Member(self.position.copy(), self.head_angle.copy(), self.fitness, self.decoded, self.feasible)


@dataclass(frozen=True)
class SearchBounds:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.asarray(self.lower, dtype=float)
        upper = np.asarray(self.upper, dtype=float)
        if lower.shape != upper.shape or lower.ndim != 1:
            raise DimensionError("bounds must be two vectors of equal length")
        if not np.all(lower < upper):
            raise ConfigurationError("every lower bound must be strictly below its upper bound")
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def for_domains(cls, domains) -> "SearchBounds":
        sizes = np.array([len(d) for d in domains], dtype=float)
        if np.any(sizes == 0):
            raise InfeasibleMemberError("cannot build bounds over an empty domain")
        return cls(np.zeros_like(sizes), sizes)

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def clip(self, positions: np.ndarray) -> np.ndarray:
        return np.clip(positions, self.lower, self.upper)


@dataclass
class GsoParams:
    """Tunables for the group search engine.

    ``None`` for ``l_max``, ``theta_max``, ``alpha_max`` or ``ranging_a``
    means "derive from the problem size" (see :meth:`resolve`).
    """

    pop_size: int = 48
    scrounger_prob: float = 0.6
    l_max: Optional[float] = None
    theta_max: Optional[float] = None
    alpha_max: Optional[float] = None
    mutation_eta: float = 1.0
    ranging_a: Optional[float] = None
    max_iters: int = 5000
    rng_seed: int = 0
    truncate_normal: bool = True

    def validate(self) -> "GsoParams":
        if not isinstance(self.pop_size, (int, np.integer)) or self.pop_size < 1:
            raise ConfigurationError(f"pop_size must be a positive integer, got {self.pop_size!r}")
        if not isinstance(self.max_iters, (int, np.integer)) or self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        if not 0.0 <= self.scrounger_prob <= 1.0:
            raise ConfigurationError(f"scrounger_prob must lie in [0, 1], got {self.scrounger_prob!r}")
        for name in ("l_max", "theta_max", "alpha_max", "ranging_a", "mutation_eta"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ConfigurationError(f"{name} must be strictly positive, got {value!r}")
        return self

    def resolve(self, bounds: SearchBounds) -> "GsoParams":
        """Fill unset scale parameters from the usual group-search defaults."""
        self.validate()
        a = max(1, round(math.sqrt(bounds.n + 1)))
        theta_max = self.theta_max if self.theta_max is not None else math.pi / a**2
        return replace(
            self,
            theta_max=theta_max,
            alpha_max=self.alpha_max if self.alpha_max is not None else theta_max / 2,
            l_max=self.l_max if self.l_max is not None else float(np.linalg.norm(bounds.width)),
            ranging_a=self.ranging_a if self.ranging_a is not None else float(a),
        )


def _normal(rng, size, truncate: bool = True):
    r = rng.standard_normal(size)
    return np.clip(r, -NORMAL_CLIP, NORMAL_CLIP) if truncate else r


def wrap_angles(theta: np.ndarray) -> np.ndarray:
    """Map angles into ``[-pi, pi)``."""
    wrapped = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(wrapped >= np.pi, wrapped - 2 * np.pi, wrapped)


def direction_from_angles(angles, n: Optional[int] = None) -> np.ndarray:
    """Unit search direction from a head-angle vector (hyperspherical transform).

    ``angles`` has ``n - 1`` entries on its last axis. With ``n == 1`` the
    angles are ignored and the direction is ``(1,)``.
    """
    angles = np.asarray(angles, dtype=float)
    if n is None:
        n = angles.shape[-1] + 1
    if n == 1:
        return np.ones(angles.shape[:-1] + (1,)) if angles.ndim > 1 else np.ones(1)
    if angles.shape[-1] != n - 1:
        raise DimensionError(f"expected {n - 1} angles for dimension {n}, got {angles.shape[-1]}")
    cos = np.cos(angles)
    sin = np.sin(angles)
    lead = angles.shape[:-1]
    # suffix[..., j] = prod_{q >= j} cos(angle_q); the extra trailing 1 covers g_n
    suffix = np.concatenate([np.cumprod(cos[..., ::-1], axis=-1)[..., ::-1], np.ones(lead + (1,))], axis=-1)
    lead_sin = np.concatenate([np.ones(lead + (1,)), sin], axis=-1)
    return lead_sin * suffix


def decode_indices(positions: np.ndarray, sizes: np.ndarray) -> np.ndarray:
    """Domain positions ``clamp(floor(x_j), 0, size_j - 1)``."""
    idx = np.floor(np.asarray(positions, dtype=float)).astype(np.int64)
    return np.clip(idx, 0, np.asarray(sizes) - 1)


def decode(position, network: Optional[ConstraintNetwork], domains) -> tuple:
    """Map a continuous position onto one value per variable."""
    position = np.asarray(position, dtype=float)
    if position.shape != (len(domains),):
        raise DimensionError(f"position has shape {position.shape}, expected ({len(domains)},)")
    sizes = np.array([len(d) for d in domains])
    if np.any(sizes == 0):
        raise InfeasibleMemberError(f"empty domain at variable {int(np.argmin(sizes))}")
    idx = decode_indices(position, sizes)
    return tuple(domains[j][idx[j]] for j in range(len(domains)))


def producer_scan_three_point(producer: Member, params: GsoParams, bounds: SearchBounds, rng) -> tuple:
    """Zero-degree, right and left scan points around the producer."""
    n = bounds.n
    theta = producer.head_angle
    out = []
    for sign in (0.0, 1.0, -1.0):
        r1 = float(_normal(rng, None, params.truncate_normal))
        r2 = rng.random(theta.shape)
        g = direction_from_angles(theta + sign * r2 * params.theta_max / 2, n)
        out.append(bounds.clip(producer.position + r1 * params.l_max * g))
    return tuple(out)


def mutation_probability(d: int, k: int, k_max: int) -> float:
    """Per-dimension mutation rate growing linearly from ``1/d`` to 1."""
    if d < 1 or k_max < 1:
        raise OutOfRangeError("d and k_max must be positive")
    if k < 0 or k > k_max:
        raise OutOfRangeError(f"iteration {k} outside [0, {k_max}]")
    return 1.0 / d + (k / k_max) * (1.0 - 1.0 / d)


def polynomial_delta(u, eta: float):
    u = np.asarray(u, dtype=float)
    power = 1.0 / (eta + 1.0)
    low = np.power(2.0 * np.minimum(u, 0.5), power) - 1.0
    high = 1.0 - np.power(2.0 * (1.0 - np.maximum(u, 0.5)), power)
    return np.where(u < 0.5, low, high)


def polynomial_mutate(position, bounds: SearchBounds, p_m: float, eta: float, rng) -> np.ndarray:
    """Polynomial mutation applied independently to each coordinate with rate ``p_m``."""
    position = np.asarray(position, dtype=float)
    selected = rng.random(position.shape) < p_m
    u = rng.random(position.shape)
    step = bounds.width * polynomial_delta(u, eta)
    return bounds.clip(np.where(selected, position + step, position))


def _default_evaluator(network, domains):
    def fitness_of(position):
        return evaluate(network, decode(position, network, domains))

    return fitness_of


def producer_step_apm(
    producer: Member,
    params: GsoParams,
    bounds: SearchBounds,
    k: int,
    k_max: int,
    network: ConstraintNetwork,
    domains,
    rng,
    fitness_of: Optional[Callable] = None,
) -> Member:
    """One adaptive polynomial-mutation move with greedy (``<=``) acceptance.

    ``fitness_of`` maps a position to its violation count; by default it
    decodes against ``domains`` and calls :func:`~gsocsp.network.evaluate`.
    """
    fitness_of = fitness_of or _default_evaluator(network, domains)
    p_m = mutation_probability(bounds.n, k, k_max)
    candidate = polynomial_mutate(producer.position, bounds, p_m, params.mutation_eta, rng)
    fit = int(fitness_of(candidate))
    if fit <= producer.fitness:
        return Member(candidate, producer.head_angle.copy(), fit, None, producer.feasible)
    return producer


def scrounge(position, producer_position, rng) -> np.ndarray:
    """Move part of the way towards the producer, coordinate by coordinate."""
    y = np.asarray(position, dtype=float)
    yp = np.asarray(producer_position, dtype=float)
    moved = y + rng.random(y.shape) * (yp - y)
    # rounding in y + r*(yp - y) can overshoot yp by an ulp
    return np.clip(moved, np.minimum(y, yp), np.maximum(y, yp))


def range_moves(positions, angles, params: GsoParams, bounds: SearchBounds, rng) -> tuple:
    """Batched ranging: turn randomly, then walk a random distance.

    ``positions`` is ``(m, n)`` and ``angles`` ``(m, n-1)`` (``(m, 1)`` and
    ignored when ``n == 1``).
    """
    positions = np.asarray(positions, dtype=float)
    angles = np.asarray(angles, dtype=float)
    m, n = positions.shape
    r2 = rng.uniform(-1.0, 1.0, angles.shape)
    r1 = _normal(rng, (m, 1), params.truncate_normal)
    if n == 1:
        # a single fixed direction; the sign of r1 keeps the walk two-sided
        step = params.ranging_a * r1 * params.l_max
        return bounds.clip(positions + step), angles.copy()
    new_angles = wrap_angles(angles + r2 * params.alpha_max)
    step = params.ranging_a * np.abs(r1) * params.l_max
    return bounds.clip(positions + step * direction_from_angles(new_angles, n)), new_angles


def range_step(member: Member, params: GsoParams, bounds: SearchBounds, rng) -> tuple:
    pos, ang = range_moves(member.position[None, :], member.head_angle[None, :], params, bounds, rng)
    return pos[0], ang[0]
