"""Decidable toy sets, pierced sets and benign schemes used by the checks.

Real NP-hard sets are out of reach for exhaustive enumeration, so the
junta and padding demonstrations run on these instead.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

from .dist import QUESTION, MembershipOracle, PiercedSet


def _majority(x: str) -> bool:
    return x.count("1") > x.count("0")


def _parity(x: str) -> int:
    return x.count("1") % 2


MAJORITY = MembershipOracle("majority", _majority)
PARITY = MembershipOracle("odd-parity", lambda x: _parity(x) == 1)


def majority_pierced(threshold: int = 2) -> PiercedSet:
    """Pos(n) = 1^n, Neg(n) = 0^n; valid from length 1 on."""
    if threshold < 1:
        raise ValueError("threshold must be >= 1 (0-length strings cannot be pierced)")
    return PiercedSet(MAJORITY, lambda n: "1" * n, lambda n: "0" * n, threshold)


# Tiny CNF encoding over two variables. A literal is two bits (variable,
# negated); a clause is three literals; a string of length n holds n // 6
# clauses, spare trailing bits are ignored. The empty formula is satisfiable.
SAT_LITERAL_BITS = 2
SAT_CLAUSE_BITS = 3 * SAT_LITERAL_BITS
SAT_THRESHOLD = 2 * SAT_CLAUSE_BITS


def decode_cnf(x: str) -> list[list[tuple[int, bool]]]:
    clauses = []
    for start in range(0, len(x) - SAT_CLAUSE_BITS + 1, SAT_CLAUSE_BITS):
        block = x[start:start + SAT_CLAUSE_BITS]
        clause = [
            (int(block[i]), block[i + 1] == "1")
            for i in range(0, SAT_CLAUSE_BITS, SAT_LITERAL_BITS)
        ]
        clauses.append(clause)
    return clauses


def _satisfiable(x: str) -> bool:
    clauses = decode_cnf(x)
    for assignment in product((False, True), repeat=2):
        if all(any(assignment[v] != neg for v, neg in cl) for cl in clauses):
            return True
    return False


TOY_SAT = MembershipOracle("toy-2var-3cnf", _satisfiable, np_hard=False)


def _sat_neg(n: int) -> str:
    # (x0 or x0 or x0) and (not x0 or not x0 or not x0), then padding zeros
    return "000000" + "010101" + "0" * (n - SAT_THRESHOLD)


def sat_pierced() -> PiercedSet:
    """Pos(n) = 0^n (all clauses x0), Neg(n) forces x0 and not x0; from length 12."""
    return PiercedSet(TOY_SAT, lambda n: "0" * n, _sat_neg, SAT_THRESHOLD)


def _rank(x: str) -> int:
    return int(x, 2) if x else 0


def spread_parity_scheme(x: str, delta: Fraction):
    """Refuses on the first floor(delta 2^n) strings of each length."""
    n = len(x)
    if _rank(x) < int(Fraction(delta) * 2**n):
        return QUESTION
    return _parity(x)


def _cube_root_exact(q: Fraction):
    """r with r**3 == q for positive integer q, else None."""
    if q.denominator != 1 or q <= 0:
        return None
    v = q.numerator
    r = round(v ** (1 / 3))
    for cand in (r - 1, r, r + 1):
        if cand > 0 and cand**3 == v:
            return cand
    return None


def concentrated_parity_scheme(x: str, delta: Fraction):
    """Spends its whole refusal budget at the length the wrapper will ask about.

    For delta = 1/(L+1)^3 it refuses on the first floor(min(1, delta L^2) 2^L)
    strings of length L and answers everywhere else. The cumulative refusal
    rate through any length n is then at most delta, so the scheme is benign,
    while its per-length refusal rate at L approaches the wrapper's ceiling.
    """
    n = len(x)
    root = _cube_root_exact(1 / Fraction(delta))
    if root is not None and root - 1 == n and n >= 1:
        budget = min(Fraction(1), Fraction(delta) * n * n)
        if _rank(x) < int(budget * 2**n):
            return QUESTION
    return _parity(x)


def never_refuse_scheme(x: str, delta: Fraction):
    return _parity(x)


def always_refuse_scheme(x: str, delta: Fraction):
    return QUESTION


parity_target = _parity
