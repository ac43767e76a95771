"""Exact optimum, approximation bounds and randomized checks for greedy lobbying."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import rng as rngmod
from .lobby import (
    GreedyTrace,
    NormalizedInstance,
    VoteMatrix,
    deficit_sum,
    greedy_lobby,
    normalize,
)

DEFAULT_BRUTE_FORCE_CAP = 18


class CapExceededError(ValueError):
    """Instance too large for an exhaustive oracle."""


class CapOverrideWarning(UserWarning):
    pass


def check_cap(size: int, cap: int, default: int, what: str) -> None:
    if cap > default:
        warnings.warn(
            f"{what} cap raised from {default} to {cap}; exhaustive search may be slow",
            CapOverrideWarning,
            stacklevel=3,
        )
    if size > cap:
        raise CapExceededError(
            f"{what}: size {size} exceeds cap {cap}; use a smaller instance or override the cap"
        )


@dataclass(frozen=True)
class ExactSolution:
    rows: tuple[int, ...]
    opt_price: Fraction


@dataclass(frozen=True)
class RatioReport:
    m: int
    n: int
    seed: Optional[int]
    d0: int
    iteration_sizes: tuple[int, ...]
    greedy_rows: tuple[int, ...]
    greedy_price: Fraction
    opt_rows: tuple[int, ...]
    opt_price: Fraction
    ratio: Fraction
    harmonic_bound: Fraction
    refined_bound: Fraction
    lemma21_violations: tuple[int, ...]

    @property
    def lemma21_ok(self) -> bool:
        return not self.lemma21_violations

    @property
    def bounds_ok(self) -> bool:
        """greedy <= refined * OPT <= H(D0) * OPT, in exact arithmetic."""
        return (
            self.greedy_price <= self.refined_bound * self.opt_price
            <= self.harmonic_bound * self.opt_price
        )


def exact_opt(norm: NormalizedInstance, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> ExactSolution:
    """Cheapest voter set whose purchase wins every referendum.

    Exhaustive depth-first search over include/exclude decisions per row,
    pruned only by provable bounds (a partial set that is already dearer
    than the incumbent, or that cannot be completed). Among equally cheap
    solutions the lexicographically smallest sorted row tuple wins.
    """
    check_cap(norm.m, cap, DEFAULT_BRUTE_FORCE_CAP, "exact_opt")
    m, n = norm.m, norm.n
    prices = norm.prices
    need = list(deficit_sum(norm).deficits)
    zero_cols = [[j for j in range(n) if norm.entries[i][j] == 0] for i in range(m)]
    # zeros_below[i][j]: zeros in column j among rows i..m-1
    zeros_below = [[0] * n for _ in range(m + 1)]
    for i in range(m - 1, -1, -1):
        zeros_below[i] = list(zeros_below[i + 1])
        for j in zero_cols[i]:
            zeros_below[i][j] += 1

    best_price: Optional[Fraction] = None
    best_rows: Optional[tuple[int, ...]] = None
    chosen: list[int] = []

    def better(price, rows):
        if best_price is None or price < best_price:
            return True
        return price == best_price and rows < best_rows

    def lower_bound(i, remaining):
        total = sum(remaining)
        if total == 0:
            return Fraction(0)
        ratio = None
        for r in range(i, m):
            useful = sum(1 for j in zero_cols[r] if remaining[j] > 0)
            if useful:
                q = prices[r] / useful
                if ratio is None or q < ratio:
                    ratio = q
        return ratio * total

    def search(i, remaining, spent):
        nonlocal best_price, best_rows
        if sum(remaining) == 0:
            rows = tuple(chosen)
            if better(spent, rows):
                best_price, best_rows = spent, rows
            return
        if i == m:
            return
        if any(remaining[j] > zeros_below[i][j] for j in range(n)):
            return
        # include-first DFS meets solutions in lexicographic order, so a later
        # solution at equal price never beats the incumbent
        if best_price is not None and spent + lower_bound(i, remaining) >= best_price:
            return
        # include row i
        chosen.append(i)
        after = list(remaining)
        for j in zero_cols[i]:
            if after[j] > 0:
                after[j] -= 1
        search(i + 1, after, spent + prices[i])
        chosen.pop()
        search(i + 1, remaining, spent)

    search(0, need, Fraction(0))
    assert best_price is not None and best_rows is not None  # buying everyone always works
    return ExactSolution(best_rows, best_price)


def harmonic(k: int) -> Fraction:
    if k < 1:
        raise ValueError(f"harmonic number needs k >= 1, got {k}")
    return sum((Fraction(1, i) for i in range(1, k + 1)), Fraction(0))


def _harmonic_or_zero(k: int) -> Fraction:
    return harmonic(k) if k >= 1 else Fraction(0)


def refined_bound(trace: GreedyTrace) -> Fraction:
    """sum_j  l_j / (D0 - l_1 - ... - l_{j-1})  over the greedy iterations."""
    d0 = trace.initial_deficit
    if d0 == 0:
        return Fraction(0)
    total, done = Fraction(0), 0
    for size in trace.iteration_sizes:
        total += Fraction(size, d0 - done)
        done += size
    return total


def verify_lemma21(trace: GreedyTrace, opt: Fraction) -> list[int]:
    """Indices k with cost(e_k) > OPT / (D0 - k + 1).

    ``opt`` must come from the same instance as ``trace``; a mismatch cannot
    be detected here.
    """
    d0 = trace.initial_deficit
    opt = Fraction(opt)
    return [f.k for f in trace.flips if f.cost > opt / (d0 - f.k + 1)]


def tight_example(n: int, epsilon) -> VoteMatrix:
    """The (2n+1) x n instance on which greedy pays H_n but OPT is 1 + epsilon.

    Rows 0..n-1 have a single 0 on the diagonal and price 1/(i+1); row n is
    all zeros at price 1 + epsilon; rows n+1..2n have a single 1 on the
    diagonal at price 2.
    """
    if n < 2:
        raise ValueError(f"tight example needs n >= 2, got {n}")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    rows, prices = [], []
    for i in range(n):
        rows.append([0 if j == i else 1 for j in range(n)])
        prices.append(Fraction(1, i + 1))
    rows.append([0] * n)
    prices.append(1 + epsilon)
    for i in range(n):
        rows.append([1 if j == i else 0 for j in range(n)])
        prices.append(Fraction(2))
    return VoteMatrix.from_rows(rows, prices)


PRICE_MODELS = ("unit", "rational")


def random_instance(
    m: int,
    n: int,
    price_model: str = "unit",
    seed: int = 0,
    price_range: tuple[int, int] = (10, 10),
) -> VoteMatrix:
    """Fair-coin matrix with all-ones target.

    ``price_model="rational"`` draws each price as ``a/b`` with ``a`` uniform
    on ``0..price_range[0]`` and ``b`` uniform on ``1..price_range[1]``.
    """
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    if price_model not in PRICE_MODELS:
        raise ValueError(f"unknown price model {price_model!r}; choose from {PRICE_MODELS}")
    gen = rngmod.make_rng(seed)
    bits = gen.integers(0, 2, size=(m, n))
    if price_model == "unit":
        prices = [Fraction(1)] * m
    else:
        num = gen.integers(0, price_range[0] + 1, size=m)
        den = gen.integers(1, price_range[1] + 1, size=m)
        prices = [Fraction(int(a), int(b)) for a, b in zip(num, den)]
    return VoteMatrix.from_rows(bits.tolist(), prices)


def ratio(greedy_price: Fraction, opt_price: Fraction) -> Fraction:
    if opt_price == 0:
        if greedy_price == 0:
            return Fraction(1)
        raise ZeroDivisionError("positive greedy price against zero optimum")
    return Fraction(greedy_price) / opt_price


def evaluate_instance(
    instance: VoteMatrix, cap: int = DEFAULT_BRUTE_FORCE_CAP, seed: Optional[int] = None
) -> RatioReport:
    norm = normalize(instance)
    trace = greedy_lobby(norm)
    opt = exact_opt(norm, cap=cap)
    return RatioReport(
        m=instance.m,
        n=instance.n,
        seed=seed,
        d0=trace.initial_deficit,
        iteration_sizes=tuple(trace.iteration_sizes),
        greedy_rows=tuple(trace.selected_rows),
        greedy_price=trace.total_price,
        opt_rows=opt.rows,
        opt_price=opt.opt_price,
        ratio=ratio(trace.total_price, opt.opt_price),
        harmonic_bound=_harmonic_or_zero(trace.initial_deficit),
        refined_bound=refined_bound(trace),
        lemma21_violations=tuple(verify_lemma21(trace, opt.opt_price)),
    )


@dataclass(frozen=True)
class RatioParams:
    m_range: tuple[int, int] = (1, 8)
    n_range: tuple[int, int] = (1, 6)
    price_models: Sequence[str] = ("unit", "rational")
    cap: int = DEFAULT_BRUTE_FORCE_CAP


def ratio_experiment(params: RatioParams, trials: int, seed: int) -> list[RatioReport]:
    """Random instances checked against the exact optimum, one report per trial.

    Trial ``i`` draws its shape and price model from ``trial_rng(seed, i)``
    and its matrix from ``trial_seed(seed, i)``, so any single trial can be
    regenerated in isolation.
    """
    if params.m_range[1] > params.cap:
        raise CapExceededError(f"m up to {params.m_range[1]} exceeds cap {params.cap}")
    reports = []
    for i in range(trials):
        shape = rngmod.trial_rng(seed, i)
        m = int(shape.integers(params.m_range[0], params.m_range[1] + 1))
        n = int(shape.integers(params.n_range[0], params.n_range[1] + 1))
        model = params.price_models[int(shape.integers(0, len(params.price_models)))]
        s = rngmod.trial_seed(seed, i)
        inst = random_instance(m, n, model, seed=s)
        reports.append(evaluate_instance(inst, cap=params.cap, seed=s))
    return reports


def max_ratio(reports: Sequence[RatioReport]) -> Optional[Fraction]:
    return max((r.ratio for r in reports), default=None)
