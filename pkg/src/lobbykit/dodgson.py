"""Dodgson elections: exact scores, the greedy self-knowing heuristics, and
Monte-Carlo frequency checks.

Votes are strict total orders listed most-preferred first. The greedy
heuristics return a :class:`Verdict`; a ``definitely`` verdict is always
correct, a ``maybe`` verdict promises nothing.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Generic, Hashable, Sequence, TypeVar

import numpy as np

from . import rng as rngmod
from .lobby_eval import check_cap

T = TypeVar("T")

DEFINITELY = "definitely"
MAYBE = "maybe"

# exact_score memo table size limit (product of per-rival deficit ranges)
DEFAULT_SCORE_STATE_CAP = 10**6
# exact_score_bfs is a micro-scale oracle
DEFAULT_BFS_MAX_M = 3
DEFAULT_BFS_MAX_N = 3


@dataclass(frozen=True)
class Verdict(Generic[T]):
    value: T
    flag: str

    def __post_init__(self):
        if self.flag not in (DEFINITELY, MAYBE):
            raise ValueError(f"flag must be {DEFINITELY!r} or {MAYBE!r}, got {self.flag!r}")

    @property
    def definite(self) -> bool:
        return self.flag == DEFINITELY


@dataclass(frozen=True)
class Election:
    candidates: tuple
    votes: tuple

    def __post_init__(self):
        candidates = tuple(self.candidates)
        if not candidates:
            raise ValueError("an election needs at least one candidate")
        if len(set(candidates)) != len(candidates):
            raise ValueError("candidate labels must be distinct")
        known = set(candidates)
        votes = []
        for i, vote in enumerate(self.votes):
            vote = tuple(vote)
            unknown = [c for c in vote if c not in known]
            if unknown:
                raise ValueError(f"vote {i} names unknown candidate(s) {unknown}")
            if len(set(vote)) != len(vote):
                raise ValueError(f"vote {i} lists a candidate twice")
            if len(vote) != len(candidates):
                missing = [c for c in candidates if c not in vote]
                raise ValueError(f"vote {i} omits candidate(s) {missing}")
            votes.append(vote)
        object.__setattr__(self, "candidates", candidates)
        object.__setattr__(self, "votes", tuple(votes))

    @property
    def m(self) -> int:
        return len(self.candidates)

    @property
    def n(self) -> int:
        return len(self.votes)


@dataclass(frozen=True)
class DodgsonTriple:
    election: Election
    c: Hashable

    def __post_init__(self):
        if self.c not in self.election.candidates:
            raise ValueError(f"designated candidate {self.c!r} is not running")

    @property
    def rivals(self) -> tuple:
        return tuple(d for d in self.election.candidates if d != self.c)


def _require_candidate(e: Election, x) -> None:
    if x not in e.candidates:
        raise ValueError(f"unknown candidate {x!r}")


def pairwise_wins(e: Election, a, b) -> int:
    """Number of votes ranking ``a`` above ``b``."""
    _require_candidate(e, a)
    _require_candidate(e, b)
    if a == b:
        raise ValueError("pairwise contest needs two different candidates")
    return sum(1 for v in e.votes if v.index(a) < v.index(b))


def condorcet_winner(e: Election):
    need = e.n // 2 + 1
    for a in e.candidates:
        if all(pairwise_wins(e, a, b) >= need for b in e.candidates if b != a):
            return a
    return None


def deficit_against(t: DodgsonTriple, d) -> int:
    """Votes ``c`` must gain to beat ``d`` by a strict majority."""
    if d == t.c:
        raise ValueError("deficit is only defined against a rival")
    e = t.election
    return max(0, e.n // 2 + 1 - pairwise_wins(e, t.c, d))


def adjacency_count(t: DodgsonTriple, d) -> int:
    """Votes in which ``d`` sits immediately above ``c``."""
    if d == t.c:
        raise ValueError("adjacency is only defined for a rival")
    _require_candidate(t.election, d)
    count = 0
    for v in t.election.votes:
        p = v.index(t.c)
        if p > 0 and v[p - 1] == d:
            count += 1
    return count


def is_nice(t: DodgsonTriple) -> bool:
    return all(adjacency_count(t, d) >= deficit_against(t, d) for d in t.rivals)


def greedy_score(t: DodgsonTriple) -> Verdict[int]:
    """Sum of deficits, flagged ``definitely`` exactly when the triple is nice.

    On a non-nice triple the value is still the deficit sum (a lower bound on
    the score), but the flag is ``maybe``.
    """
    total = sum(deficit_against(t, d) for d in t.rivals)
    return Verdict(total, DEFINITELY if is_nice(t) else MAYBE)


def exact_score(t: DodgsonTriple, state_cap: int = DEFAULT_SCORE_STATE_CAP) -> int:
    """Dodgson score by exhaustive search over how far ``c`` climbs in each vote.

    Raising ``c`` by ``k`` places in a vote costs ``k`` swaps and gives ``c``
    one pairwise vote against each of the ``k`` candidates it passes. The
    search is a dynamic program over votes whose state is the tuple of
    deficits still outstanding.
    """
    rivals = t.rivals
    index = {d: i for i, d in enumerate(rivals)}
    start = tuple(deficit_against(t, d) for d in rivals)
    size = math.prod(x + 1 for x in start)
    check_cap(size, state_cap, DEFAULT_SCORE_STATE_CAP, "exact_score states")
    if not any(start):
        return 0

    # options[v]: for each climb k, (cost k, rival indices passed)
    options = []
    for vote in t.election.votes:
        p = vote.index(t.c)
        opts = [(k, tuple(index[d] for d in vote[p - k:p])) for k in range(1, p + 1)]
        options.append(opts)

    frontier = {start: 0}
    for opts in options:
        nxt = dict(frontier)
        for state, cost in frontier.items():
            for k, passed in opts:
                s = list(state)
                for r in passed:
                    if s[r] > 0:
                        s[r] -= 1
                key = tuple(s)
                c = cost + k
                if c < nxt.get(key, math.inf):
                    nxt[key] = c
        frontier = nxt
    goal = (0,) * len(rivals)
    if goal not in frontier:
        # unreachable: climbing to the top of every vote wins every contest
        raise AssertionError("no winning climb found")
    return frontier[goal]


def _is_condorcet_winner(votes: Sequence[tuple], c) -> bool:
    need = len(votes) // 2 + 1
    candidates = votes[0] if votes else (c,)
    for d in candidates:
        if d == c:
            continue
        if sum(1 for v in votes if v.index(c) < v.index(d)) < need:
            return False
    return True


def exact_score_bfs(
    t: DodgsonTriple, max_m: int = DEFAULT_BFS_MAX_M, max_n: int = DEFAULT_BFS_MAX_N
) -> int:
    """Dodgson score as a shortest path over whole profiles.

    One edge swaps any two adjacent candidates in any single vote, so no
    assumption is made about which swaps are useful.
    """
    e = t.election
    check_cap(e.m, max_m, DEFAULT_BFS_MAX_M, "exact_score_bfs candidates")
    check_cap(e.n, max_n, DEFAULT_BFS_MAX_N, "exact_score_bfs votes")
    start = e.votes
    if e.n == 0 or _is_condorcet_winner(start, t.c):
        return 0
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        profile, dist = queue.popleft()
        for i, vote in enumerate(profile):
            for p in range(len(vote) - 1):
                nv = list(vote)
                nv[p], nv[p + 1] = nv[p + 1], nv[p]
                nxt = profile[:i] + (tuple(nv),) + profile[i + 1:]
                if nxt in seen:
                    continue
                if _is_condorcet_winner(nxt, t.c):
                    return dist + 1
                seen.add(nxt)
                queue.append((nxt, dist + 1))
    raise AssertionError("profile graph exhausted without a Condorcet winner")


def greedy_winner(t: DodgsonTriple) -> Verdict[bool]:
    """Is ``c`` a Dodgson winner? Definite only if every candidate's greedy score is.

    When some score is ``maybe`` the answer compares the greedy values anyway
    and is flagged ``maybe``.
    """
    e = t.election
    verdicts = {d: greedy_score(DodgsonTriple(e, d)) for d in e.candidates}
    best = min(v.value for v in verdicts.values())
    answer = verdicts[t.c].value == best
    flag = DEFINITELY if all(v.definite for v in verdicts.values()) else MAYBE
    return Verdict(answer, flag)


def dodgson_scores(e: Election, state_cap: int = DEFAULT_SCORE_STATE_CAP) -> dict:
    return {c: exact_score(DodgsonTriple(e, c), state_cap) for c in e.candidates}


def dodgson_winners(e: Election, state_cap: int = DEFAULT_SCORE_STATE_CAP) -> set:
    scores = dodgson_scores(e, state_cap)
    best = min(scores.values())
    return {c for c, s in scores.items() if s == best}


def candidate_labels(m: int) -> tuple[str, ...]:
    if m <= 26:
        return tuple(chr(ord("a") + i) for i in range(m))
    return tuple(f"c{i}" for i in range(m))


def _random_rankings(gen: np.random.Generator, m: int, n: int) -> np.ndarray:
    """n x m array, row v = vote v as candidate indices, most preferred first."""
    base = np.tile(np.arange(m), (n, 1))
    return gen.permuted(base, axis=1)


def random_election(m: int, n: int, seed: int) -> Election:
    """Each vote an independent uniform permutation (Fisher-Yates per vote)."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    labels = candidate_labels(m)
    rankings = _random_rankings(rngmod.make_rng(seed), m, n)
    return Election(labels, tuple(tuple(labels[i] for i in row) for row in rankings))


def nice_flags(rankings: np.ndarray) -> np.ndarray:
    """Per candidate: is the triple with that candidate designated nice?

    Vectorized counterpart of :func:`is_nice` over an n x m ranking array.
    """
    n, m = rankings.shape
    pos = np.empty_like(rankings)
    rows = np.arange(n)[:, None]
    pos[rows, rankings] = np.arange(m)[None, :]
    need = n // 2 + 1
    flags = np.ones(m, dtype=bool)
    for c in range(m):
        for d in range(m):
            if d == c:
                continue
            wins = int(np.count_nonzero(pos[:, c] < pos[:, d]))
            deficit = max(0, need - wins)
            if deficit and int(np.count_nonzero(pos[:, d] == pos[:, c] - 1)) < deficit:
                flags[c] = False
                break
    return flags


def lemma_a3_bound(m: int, n: int) -> float:
    """Upper bound on P[random triple is not nice]: 2(m-1) exp(-n / 8m^2)."""
    return 2 * (m - 1) * math.exp(-n / (8 * m * m))


def theorem_a4_bound(m: int, n: int) -> float:
    """Upper bound on P[some candidate gets a maybe]: 2(m^2-m) exp(-n / 8m^2)."""
    return 2 * (m * m - m) * math.exp(-n / (8 * m * m))


@dataclass(frozen=True)
class FrequencyReport:
    m: int
    n: int
    trials: int
    seed: int
    not_nice: int  # designated candidate = first label
    any_maybe: int
    not_nice_bound: float
    any_maybe_bound: float

    @property
    def not_nice_rate(self) -> float:
        return self.not_nice / self.trials

    @property
    def any_maybe_rate(self) -> float:
        return self.any_maybe / self.trials


def sampling_slack(bound: float, trials: int) -> float:
    """Four standard errors of a Bernoulli count at the bound rate (capped at 1)."""
    return 4 * math.sqrt(min(bound, 1.0) / trials)


def niceness_trial(m: int, n: int, trials: int, seed: int) -> FrequencyReport:
    """Fraction of uniform elections that defeat the greedy heuristics.

    Trial ``i`` uses the election ``random_election(m, n, trial_seed(seed, i))``.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    not_nice = any_maybe = 0
    for i in range(trials):
        gen = rngmod.make_rng(rngmod.trial_seed(seed, i))
        flags = nice_flags(_random_rankings(gen, m, n))
        not_nice += not flags[0]
        any_maybe += not flags.all()
    return FrequencyReport(
        m, n, trials, seed, int(not_nice), int(any_maybe),
        lemma_a3_bound(m, n), theorem_a4_bound(m, n),
    )
