"""Length-indexed distributions over binary strings, junta checks, and the
benign-scheme to self-knowingly-correct wrapper.

Strings are Python ``str`` over the alphabet ``"01"``. A distribution is a
family of per-length distributions: for each length ``n`` the weights of
the ``2**n`` strings of that length sum to one. Every weight is an exact
``Fraction``. Properties that quantify over all lengths can only be checked
here length by length, by enumeration, up to :data:`ENUMERATION_CAP`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterator, Optional

from .dodgson import DEFINITELY, MAYBE, Verdict
from .lobby_eval import check_cap

ENUMERATION_CAP = 20

SelfKnowingOutput = Verdict


class _Symbol:
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name

    def __repr__(self) -> str:
        return self.name


# what a benign scheme returns when it declines to answer
QUESTION = _Symbol("?")
# value slot of a "maybe" output; carries no information
ANYTHING = _Symbol("anything")


def strings(n: int) -> Iterator[str]:
    """All length-``n`` binary strings in lexicographic order."""
    for bits in itertools.product("01", repeat=n):
        yield "".join(bits)


def _check_enum(n: int, cap: int) -> None:
    if n < 0:
        raise ValueError("length must be nonnegative")
    check_cap(n, cap, ENUMERATION_CAP, "enumeration length")


@dataclass(frozen=True)
class MembershipOracle:
    """A decidable set of binary strings.

    ``np_hard`` is a declared attribute only; hardness cannot be checked.
    """

    name: str
    decide: Callable[[str], bool]
    np_hard: bool = False

    def __call__(self, x: str) -> bool:
        return bool(self.decide(x))


class LengthDistribution:
    def __init__(self, weight: Callable[[int, str], Fraction], name: str = ""):
        self._weight = weight
        self.name = name

    def weight(self, x: str) -> Fraction:
        return self._weight(len(x), x)

    def __call__(self, x: str) -> Fraction:
        return self.weight(x)

    def weights(self, n: int, cap: int = ENUMERATION_CAP) -> Iterator[tuple[str, Fraction]]:
        _check_enum(n, cap)
        for x in strings(n):
            yield x, self._weight(n, x)

    def total(self, n: int, cap: int = ENUMERATION_CAP) -> Fraction:
        return sum((w for _, w in self.weights(n, cap)), Fraction(0))

    def prob(self, n: int, event: Callable[[str], bool], cap: int = ENUMERATION_CAP) -> Fraction:
        return sum((w for x, w in self.weights(n, cap) if event(x)), Fraction(0))


def uniform_per_length() -> LengthDistribution:
    return LengthDistribution(lambda n, x: Fraction(1, 2**n), "uniform")


# --- the standard uniform distribution on nonempty strings ------------------

def uniform_density(x: str) -> Fraction:
    """Weight 1/(n(n+1)2^n) of a string of length n; the empty string gets 0."""
    n = len(x)
    if n == 0:
        return Fraction(0)
    return Fraction(1, n * (n + 1) * 2**n)


def uniform_length_mass(n: int, cumulative: bool = False) -> Fraction:
    """Mass on length exactly ``n`` (1/(n(n+1))) or on lengths 1..n (n/(n+1))."""
    if n < 1:
        raise ValueError("length mass is defined for n >= 1")
    if cumulative:
        return Fraction(n, n + 1)
    return Fraction(1, n * (n + 1))


# --- pierced sets and the junta built from them -----------------------------

@dataclass(frozen=True)
class PiercedSet:
    """A set with one recognizable member and non-member at each length >= threshold."""

    oracle: MembershipOracle
    pos: Callable[[int], str]
    neg: Callable[[int], str]
    threshold: int

    @classmethod
    def from_predicates(cls, oracle, in_pos, in_neg, threshold, cap=ENUMERATION_CAP):
        """Pierce via membership tests for Pos and Neg.

        ``Pos(n)``/``Neg(n)`` become the lexicographically smallest length-n
        strings passing ``in_pos``/``in_neg``, found by enumeration.
        """
        def first(pred):
            def at(n):
                _check_enum(n, cap)
                for x in strings(n):
                    if pred(x):
                        return x
                raise ValueError(f"no pierced string at length {n}")
            return at

        return cls(oracle, first(in_pos), first(in_neg), threshold)

    def check(self, n: int) -> None:
        """Raise unless Pos(n), Neg(n) are distinct, of length n, and correctly classified."""
        if n < self.threshold:
            return
        p, q = self.pos(n), self.neg(n)
        if len(p) != n or len(q) != n:
            raise ValueError(f"pierced strings at length {n} have wrong length")
        if p == q:
            raise ValueError(f"Pos({n}) equals Neg({n}); invalid piercing")
        if not self.oracle(p):
            raise ValueError(f"Pos({n}) = {p} is not in the set")
        if self.oracle(q):
            raise ValueError(f"Neg({n}) = {q} is in the set")


def junta_from_pierced(p: PiercedSet, k: int = 2) -> LengthDistribution:
    """Put almost all weight on Pos(n) and Neg(n).

    At lengths n >= threshold every other string weighs 2^-(n^k) and the two
    pierced strings split the rest evenly; shorter lengths are uniform.
    With k = 2 the pierced heuristic errs with weight at most 2^-(n^2 - n).
    """
    if k < 1:
        raise ValueError("exponent k must be >= 1")
    cache: dict[int, tuple[str, str]] = {}

    def pierced(n):
        if n not in cache:
            p.check(n)
            cache[n] = (p.pos(n), p.neg(n))
        return cache[n]

    def weight(n, x):
        if n < p.threshold:
            return Fraction(1, 2**n)
        small = Fraction(1, 2 ** (n**k))
        if x in pierced(n):
            return Fraction(1, 2) * (1 - (2**n - 2) * small)
        return small

    return LengthDistribution(weight, f"junta[{p.oracle.name}]")


def check_dichotomy(d: LengthDistribution, n: int, p_exponent: Callable[[int], int],
                    cap: int = ENUMERATION_CAP) -> bool:
    """Every length-n weight is 0 or at least 2^-p(n)."""
    floor = Fraction(1, 2 ** p_exponent(n))
    return all(w == 0 or w >= floor for _, w in d.weights(n, cap))


def check_balance(d: LengthDistribution, oracle: MembershipOracle, n: int, c,
                  cap: int = ENUMERATION_CAP) -> bool:
    """1/c <= Prob[x in L] <= 1 - 1/c at length n."""
    c = Fraction(c)
    if c <= 1:
        raise ValueError("balance constant must exceed 1")
    prob = d.prob(n, oracle, cap)
    return 1 / c <= prob <= 1 - 1 / c


def pierced_heuristic(p: PiercedSet, x: str) -> bool:
    """Reject exactly the Neg strings; accept everything else."""
    n = len(x)
    if n >= p.threshold and x == p.neg(n):
        return False
    return True


def heuristic_error_weight(d: LengthDistribution, oracle: MembershipOracle,
                           algorithm: Callable[[str], bool], n: int,
                           cap: int = ENUMERATION_CAP) -> Fraction:
    """Weight at length n of strings the algorithm classifies differently from the oracle."""
    return d.prob(n, lambda x: bool(algorithm(x)) != oracle(x), cap)


# --- benign schemes and the self-knowing wrapper ----------------------------

BenignScheme = Callable[[str, Fraction], Any]


def wrapper_delta(n: int) -> Fraction:
    return Fraction(1, (n + 1) ** 3)


def fskc_from_benign(scheme: BenignScheme, x: str) -> Verdict:
    """Run ``scheme`` with delta = 1/(|x|+1)^3; a refusal becomes a maybe."""
    y = scheme(x, wrapper_delta(len(x)))
    if y is QUESTION:
        return Verdict(ANYTHING, MAYBE)
    return Verdict(y, DEFINITELY)


def fskc(scheme: BenignScheme) -> Callable[[str], Verdict]:
    return lambda x: fskc_from_benign(scheme, x)


def maybe_rate(algorithm: Callable[[str], Verdict], n: int, cap: int = ENUMERATION_CAP) -> Fraction:
    _check_enum(n, cap)
    hits = sum(1 for x in strings(n) if not algorithm(x).definite)
    return Fraction(hits, 2**n)


def wrong_definite(algorithm: Callable[[str], Verdict], target: Callable[[str], Any], n: int,
                   cap: int = ENUMERATION_CAP) -> list[str]:
    """Length-n strings on which a ``definitely`` output disagrees with ``target``."""
    _check_enum(n, cap)
    bad = []
    for x in strings(n):
        v = algorithm(x)
        if v.definite and v.value != target(x):
            bad.append(x)
    return bad


def question_rate_upto(scheme: BenignScheme, delta: Fraction, n: int,
                       cap: int = ENUMERATION_CAP) -> Fraction:
    """Prob that ``scheme(x, delta)`` refuses, x drawn from the uniform distribution on lengths 1..n."""
    total = Fraction(0)
    for length in range(1, n + 1):
        _check_enum(length, cap)
        refused = sum(1 for x in strings(length) if scheme(x, delta) is QUESTION)
        total += uniform_length_mass(length) * Fraction(refused, 2**length)
    return total / uniform_length_mass(n, cumulative=True)


def maybe_rate_bound(n: int) -> Fraction:
    """n(n+1)/(n+1)^3: maybe-rate ceiling of the wrapper at length n."""
    return Fraction(n * (n + 1), (n + 1) ** 3)


# --- padding ----------------------------------------------------------------

def pad_reduce(x: str) -> str:
    """x -> 1 x 1^(|x|^2 + 2)."""
    return "1" + x + "1" * (len(x) ** 2 + 2)


def padded_core_length(total: int) -> Optional[int]:
    """The l >= 0 with l^2 + l + 3 == total, if any."""
    disc = 4 * total - 11  # from l^2 + l + (3 - total) = 0
    if disc < 0:
        return None
    r = math.isqrt(disc)
    if r * r != disc or (r - 1) % 2:
        return None
    return (r - 1) // 2


def unpad(y: str) -> Optional[str]:
    """Inverse of :func:`pad_reduce`, or None if ``y`` is not a padded string."""
    if not y.startswith("1"):
        return None
    ell = padded_core_length(len(y))
    if ell is None:
        return None
    core, tail = y[1:1 + ell], y[1 + ell:]
    if tail != "1" * len(tail):
        return None
    return core


def padded_oracle(a: MembershipOracle) -> MembershipOracle:
    """{00x : any x}  union  {1 x 1^(|x|^2+2) : x in A}."""
    def decide(y: str) -> bool:
        if y.startswith("00"):
            return True
        core = unpad(y)
        return core is not None and a(core)

    return MembershipOracle(f"padded[{a.name}]", decide, a.np_hard)


def padded_trivial_heuristic(y: str) -> bool:
    """Accept exactly the strings beginning 00."""
    return y.startswith("00")


def padded_error_ceiling(length: int) -> Fraction:
    """2^(l - L) if length L = l^2 + l + 3 for some l, else 0.

    At such a length only the 2^l padded images can be misclassified by
    :func:`padded_trivial_heuristic` under the uniform per-length distribution.
    """
    ell = padded_core_length(length)
    if ell is None:
        return Fraction(0)
    return Fraction(2**ell, 2**length)
