"""Weighted lobbying instances and the greedy purchase algorithm.

A lobbying instance is an ``m x n`` 0-1 matrix whose rows are voters and
whose columns are referenda, a nonnegative rational price per voter, and a
target outcome per referendum. The Lobby buys voters; a bought voter's row
is rewritten to the target. Rows and columns are indexed from 0.

Prices are :class:`fractions.Fraction` throughout so that cost accounting
and the per-entry bound checks are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Union[int, Fraction]
INFINITY = math.inf


def as_price(value) -> Fraction:
    """Coerce ``value`` to a nonnegative exact rational.

    Accepts ints, Fractions and strings such as ``"3"`` or ``"1/3"``.
    Floats are rejected because they are not exact.
    """
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"price must be an exact rational, got {value!r}")
    price = Fraction(value)
    if price < 0:
        raise ValueError(f"price must be nonnegative, got {price}")
    return price


def majority_threshold(m: int) -> int:
    """Smallest count that is a strict majority of ``m`` (ties are not a majority)."""
    return m // 2 + 1


@dataclass(frozen=True)
class VoteMatrix:
    entries: tuple[tuple[int, ...], ...]
    prices: tuple[Fraction, ...]
    target: tuple[int, ...]

    def __post_init__(self):
        entries = tuple(tuple(int(b) for b in row) for row in self.entries)
        if not entries:
            raise ValueError("a vote matrix needs at least one voter")
        n = len(entries[0])
        if n == 0:
            raise ValueError("a vote matrix needs at least one referendum")
        for i, row in enumerate(entries):
            if len(row) != n:
                raise ValueError(f"row {i} has {len(row)} entries, expected {n}")
            if any(b not in (0, 1) for b in row):
                raise ValueError(f"row {i} has a non-binary entry")
        prices = tuple(as_price(p) for p in self.prices)
        if len(prices) != len(entries):
            raise ValueError(f"{len(prices)} prices for {len(entries)} voters")
        target = tuple(int(b) for b in self.target)
        if len(target) != n:
            raise ValueError(f"target has length {len(target)}, expected {n}")
        if any(b not in (0, 1) for b in target):
            raise ValueError("target has a non-binary entry")
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "prices", prices)
        object.__setattr__(self, "target", target)

    @classmethod
    def from_rows(cls, rows, prices=None, target=None) -> "VoteMatrix":
        rows = [list(r) for r in rows]
        if prices is None:
            prices = [1] * len(rows)
        if target is None:
            target = [1] * (len(rows[0]) if rows else 0)
        return cls(tuple(map(tuple, rows)), tuple(prices), tuple(target))

    @property
    def m(self) -> int:
        return len(self.entries)

    @property
    def n(self) -> int:
        return len(self.target)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)


@dataclass(frozen=True)
class NormalizedInstance:
    """An instance rewritten so that the target is all ones.

    ``flip_mask[j]`` is true when column ``j`` was complemented because the
    original target wanted a 0 there.
    """

    base: VoteMatrix
    flip_mask: tuple[bool, ...]

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def prices(self) -> tuple[Fraction, ...]:
        return self.base.prices

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return self.base.entries

    def denormalize(self) -> VoteMatrix:
        """Recover the original matrix and target."""
        entries = tuple(
            tuple(1 - b if f else b for b, f in zip(row, self.flip_mask))
            for row in self.base.entries
        )
        target = tuple(0 if f else 1 for f in self.flip_mask)
        return VoteMatrix(entries, self.base.prices, target)


@dataclass(frozen=True)
class DeficitVector:
    deficits: tuple[int, ...]
    total: int


@dataclass(frozen=True)
class FlipRecord:
    k: int  # 1-based position in the flip order
    row: int
    column: int
    cost: Fraction
    iteration: int  # 1-based


@dataclass
class GreedyTrace:
    flips: list[FlipRecord] = field(default_factory=list)
    iteration_sizes: list[int] = field(default_factory=list)
    selected_rows: list[int] = field(default_factory=list)
    total_price: Fraction = Fraction(0)
    initial_deficit: int = 0
    deficit_history: list[tuple[int, ...]] = field(default_factory=list)
    final_entries: tuple[tuple[int, ...], ...] = ()


def normalize(instance: VoteMatrix) -> NormalizedInstance:
    mask = tuple(t == 0 for t in instance.target)
    entries = tuple(
        tuple(1 - b if f else b for b, f in zip(row, mask)) for row in instance.entries
    )
    base = VoteMatrix(entries, instance.prices, (1,) * instance.n)
    return NormalizedInstance(base, mask)


def denormalize_solution(norm: NormalizedInstance, rows: Iterable[int]) -> set[int]:
    """Map a row set of the normalized instance back to the original one.

    Complementing columns does not rename voters, so this is the identity; it
    exists so that callers always report solutions against the original input.
    """
    rows = set(rows)
    bad = [i for i in rows if not 0 <= i < norm.m]
    if bad:
        raise IndexError(f"row indices out of range: {sorted(bad)}")
    return rows


def _check_column(norm: NormalizedInstance, j: int) -> None:
    if not 0 <= j < norm.n:
        raise IndexError(f"column {j} out of range for n={norm.n}")


def _check_row(norm: NormalizedInstance, i: int) -> None:
    if not 0 <= i < norm.m:
        raise IndexError(f"row {i} out of range for m={norm.m}")


def deficit_of_count(m: int, ones: int) -> int:
    return max(0, majority_threshold(m) - ones)


def column_deficit(norm: NormalizedInstance, j: int) -> int:
    """Number of 0-to-1 flips column ``j`` needs to hold a strict majority of ones."""
    _check_column(norm, j)
    return deficit_of_count(norm.m, sum(norm.base.column(j)))


def deficit_sum(norm: NormalizedInstance) -> DeficitVector:
    deficits = tuple(column_deficit(norm, j) for j in range(norm.n))
    return DeficitVector(deficits, sum(deficits))


def _zeros_in(row: Sequence[int], active: Iterable[int]) -> int:
    return sum(1 for j in active if row[j] == 0)


def cost_effectiveness(norm: NormalizedInstance, row: int, active_columns) -> Union[Fraction, float]:
    """Price of ``row`` per zero it has in ``active_columns``.

    Returns ``math.inf`` when the row has no zero among the active columns,
    so such a row is never preferred over one that makes progress.
    """
    _check_row(norm, row)
    zeros = _zeros_in(norm.entries[row], active_columns)
    if zeros == 0:
        return INFINITY
    return norm.prices[row] / zeros


def greedy_lobby(norm: NormalizedInstance) -> GreedyTrace:
    """Buy the most cost-effective voter until every referendum is won.

    Each iteration picks the row with the smallest price per zero in the
    columns that still have a positive deficit (lowest index on ties), flips
    exactly those zeros, and charges each flipped entry an equal share of
    the row's price.
    """
    m, n = norm.m, norm.n
    work = [list(row) for row in norm.entries]
    deficits = [column_deficit(norm, j) for j in range(n)]
    trace = GreedyTrace(initial_deficit=sum(deficits))
    trace.deficit_history.append(tuple(deficits))

    while sum(deficits) > 0:
        active = [j for j in range(n) if deficits[j] > 0]
        best_row, best_eff = None, INFINITY
        for i in range(m):
            zeros = _zeros_in(work[i], active)
            if zeros == 0:
                continue
            eff = norm.prices[i] / zeros
            if best_row is None or eff < best_eff:
                best_row, best_eff = i, eff
        # a positive deficit means some row still holds a zero in that column
        assert best_row is not None

        iteration = len(trace.iteration_sizes) + 1
        flipped = [j for j in active if work[best_row][j] == 0]
        cost = norm.prices[best_row] / len(flipped)
        for j in flipped:
            work[best_row][j] = 1
            deficits[j] -= 1
            trace.flips.append(
                FlipRecord(len(trace.flips) + 1, best_row, j, cost, iteration)
            )
        trace.iteration_sizes.append(len(flipped))
        trace.selected_rows.append(best_row)
        trace.total_price += norm.prices[best_row]
        trace.deficit_history.append(tuple(deficits))

    trace.final_entries = tuple(tuple(r) for r in work)
    return trace


def apply_purchase(instance: VoteMatrix, rows: Iterable[int]) -> VoteMatrix:
    """Rewrite every bought voter's row to the target pattern."""
    rows = set(rows)
    entries = tuple(
        instance.target if i in rows else row for i, row in enumerate(instance.entries)
    )
    return VoteMatrix(entries, instance.prices, instance.target)


def outcome_reached(instance: VoteMatrix) -> bool:
    """True iff every referendum's target holds a strict majority."""
    need = majority_threshold(instance.m)
    for j, want in enumerate(instance.target):
        agree = sum(1 for row in instance.entries if row[j] == want)
        if agree < need:
            return False
    return True
