"""Hypothesis strategies for small binary networks over the full relation catalog."""
from hypothesis import strategies as st

from gsocsp.network import ALLOWED_TUPLES, KINDS, Constraint, ConstraintNetwork


@st.composite
def constraints_for(draw, n, values):
    i, j = draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    kind = draw(st.sampled_from(KINDS))
    payload = None
    if kind == ALLOWED_TUPLES:
        pairs = st.tuples(st.sampled_from(values), st.sampled_from(values))
        payload = draw(st.sets(pairs, max_size=len(values) ** 2))
    elif kind == "abs-diff-not-equal-offset":
        payload = draw(st.integers(0, 3))
    return Constraint((i, j), kind, payload)


@st.composite
def networks(draw, max_n=5, max_d=4, max_constraints=8):
    n = draw(st.integers(2, max_n))
    values = list(range(1, max_d + 2))
    domains = [
        draw(st.lists(st.sampled_from(values), min_size=1, max_size=max_d, unique=True))
        for _ in range(n)
    ]
    cs = draw(st.lists(constraints_for(n, values), max_size=max_constraints))
    return ConstraintNetwork(domains, cs)
