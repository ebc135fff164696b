"""Input validation helpers in the spirit of ``sklearn.utils.validation``."""
from __future__ import annotations

import os

import numpy as np

from .exceptions import InvalidAssignmentError, InvalidNetworkError
from .network import ConstraintNetwork


def check_network(X) -> ConstraintNetwork:
    """Accept a network, an instance document (dict), JSON text or a file path."""
    from . import instances

    if isinstance(X, ConstraintNetwork):
        return X
    if isinstance(X, dict):
        return instances.from_document(X)
    if isinstance(X, (str, os.PathLike)):
        text = str(X)
        if text.lstrip().startswith("{"):
            return instances.parse(text)
        return instances.load(X)
    raise InvalidNetworkError(f"expected a ConstraintNetwork, document or path, got {type(X).__name__}")


def check_assignments(network: ConstraintNetwork, X) -> np.ndarray:
    """Return ``X`` as a 2-D integer array with one column per variable."""
    arr = np.asarray(X)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise InvalidAssignmentError(f"expected a 2-D array of assignments, got {arr.ndim} dimensions")
    if arr.shape[1] != network.n:
        raise InvalidAssignmentError(f"assignments have {arr.shape[1]} columns, network has {network.n} variables")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        if not np.all(np.equal(np.mod(arr, 1), 0)):
            raise InvalidAssignmentError("assignment values must be integers")
        arr = arr.astype(np.int64)
    return arr


def check_random_state(seed) -> int:
    """Turn ``random_state`` into a concrete integer seed.

    ``None`` draws fresh OS entropy so the chosen seed can still be read
    back from the fitted estimator and replayed.
    """
    if seed is None:
        return int(np.random.SeedSequence().entropy % (2**63))
    if isinstance(seed, (int, np.integer)) and not isinstance(seed, bool):
        return int(seed)
    raise ValueError(f"random_state must be None or an integer, got {seed!r}")
