"""Brute-force oracles kept independent of the code paths they check."""

from fractions import Fraction
from itertools import combinations

from hypothesis import strategies as st

from lobbykit.lobby import VoteMatrix


def wins_everything(instance, rows):
    """Buy ``rows`` (set to target) and count agreement column by column."""
    rows = set(rows)
    for j in range(instance.n):
        want = instance.target[j]
        agree = 0
        for i, row in enumerate(instance.entries):
            vote = want if i in rows else row[j]
            agree += vote == want
        if 2 * agree <= instance.m:
            return False
    return True


def brute_force_opt(instance):
    """(price, rows) of the cheapest winning subset, lexicographically smallest on ties."""
    best = None
    for size in range(instance.m + 1):
        for rows in combinations(range(instance.m), size):
            if not wins_everything(instance, rows):
                continue
            price = sum((instance.prices[i] for i in rows), Fraction(0))
            if best is None or (price, rows) < best:
                best = (price, rows)
    return best


prices = st.one_of(
    st.just(Fraction(1)),
    st.builds(Fraction, st.integers(0, 9), st.integers(1, 9)),
)


@st.composite
def vote_matrices(draw, max_m=7, max_n=5, any_target=True):
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=m, max_size=m))
    ps = draw(st.lists(prices, min_size=m, max_size=m))
    if any_target:
        target = draw(st.lists(st.integers(0, 1), min_size=n, max_size=n))
    else:
        target = [1] * n
    return VoteMatrix.from_rows(rows, ps, target)
