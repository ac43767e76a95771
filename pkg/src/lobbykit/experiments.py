"""Runnable checks. Each suite returns a :class:`Report` whose bound checks
state the claim being tested, the claimed value and the observed value.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import dist, dodgson as dg, fixtures
from . import rng as rngmod
from .formats import dumps_json, to_jsonable
from .lobby import VoteMatrix, greedy_lobby, normalize, apply_purchase, outcome_reached
from .lobby_eval import (
    DEFAULT_BRUTE_FORCE_CAP,
    RatioParams,
    evaluate_instance,
    exact_opt,
    harmonic,
    ratio_experiment,
    refined_bound,
    tight_example,
)


@dataclass
class Check:
    name: str
    claim: str
    claimed: Any
    observed: Any
    passed: bool

    def to_obj(self) -> dict:
        return {
            "name": self.name,
            "claim": self.claim,
            "claimed": to_jsonable(self.claimed),
            "observed": to_jsonable(self.observed),
            "passed": bool(self.passed),
        }


@dataclass
class Report:
    command: str
    config: dict
    records: list = field(default_factory=list)
    aggregate: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    duration_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name, claim, claimed, observed, passed) -> bool:
        self.checks.append(Check(name, claim, claimed, observed, bool(passed)))
        return bool(passed)

    def to_obj(self, timing: bool = True) -> dict:
        obj = {
            "command": self.command,
            "config": to_jsonable(self.config),
            "passed": self.passed,
            "checks": [c.to_obj() for c in self.checks],
            "aggregate": to_jsonable(self.aggregate),
            "records": to_jsonable(self.records),
        }
        if timing:
            obj["duration_seconds"] = round(self.duration_seconds, 6)
        return obj

    def to_json(self, timing: bool = True) -> str:
        return dumps_json(self.to_obj(timing))


class _timed:
    def __init__(self, report: Report):
        self.report = report

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.duration_seconds = time.perf_counter() - self.t0
        return False


# --- lobbying ---------------------------------------------------------------

CLAIM_ACCOUNTING = "sum of per-entry costs equals the price of the bought voters"
CLAIM_TERMINATION = "greedy flips exactly D0 entries and wins every referendum"
CLAIM_PER_ENTRY = "every flipped entry costs at most OPT/(D0-k+1)"
CLAIM_RATIO = "greedy price <= refined ratio * OPT <= H(D0) * OPT"
CLAIM_STRICT = "refined ratio < H(D0) whenever some iteration flips more than one entry"
CLAIM_TIGHT = "greedy pays H_n on the tight example while OPT buys only the all-zeros voter at 1+epsilon"


def _trace_record(trace) -> dict:
    return {
        "d0": trace.initial_deficit,
        "selected_rows": trace.selected_rows,
        "iteration_sizes": trace.iteration_sizes,
        "total_price": trace.total_price,
        "flips": [
            {"k": f.k, "row": f.row, "column": f.column, "cost": f.cost, "iteration": f.iteration}
            for f in trace.flips
        ],
    }


def lobby_greedy_report(instance: VoteMatrix) -> Report:
    rep = Report("lobby-greedy", {"m": instance.m, "n": instance.n})
    with _timed(rep):
        norm = normalize(instance)
        trace = greedy_lobby(norm)
        rep.records.append(_trace_record(trace))
        rep.aggregate["refined_ratio_bound"] = refined_bound(trace)
        if trace.initial_deficit:
            rep.aggregate["harmonic_bound"] = harmonic(trace.initial_deficit)
        cost_sum = sum((f.cost for f in trace.flips), Fraction(0))
        rep.check("accounting", CLAIM_ACCOUNTING, trace.total_price, cost_sum,
                  cost_sum == trace.total_price)
        won = outcome_reached(apply_purchase(instance, trace.selected_rows))
        rep.check("termination", CLAIM_TERMINATION, trace.initial_deficit, len(trace.flips),
                  won and len(trace.flips) == trace.initial_deficit)
    return rep


def lobby_exact_report(instance: VoteMatrix, cap: int = DEFAULT_BRUTE_FORCE_CAP) -> Report:
    rep = Report("lobby-exact", {"m": instance.m, "n": instance.n, "cap": cap})
    with _timed(rep):
        r = evaluate_instance(instance, cap=cap)
        rep.records.append(_ratio_record(r))
        rep.aggregate.update(opt_rows=r.opt_rows, opt_price=r.opt_price, ratio=r.ratio)
        won = outcome_reached(apply_purchase(instance, r.opt_rows))
        rep.check("opt_feasible", "the optimal voter set wins every referendum", True, won, won)
        rep.check("per_entry_cost", CLAIM_PER_ENTRY, 0, len(r.lemma21_violations), r.lemma21_ok)
        rep.check("ratio_bound", CLAIM_RATIO, r.refined_bound, r.ratio, r.bounds_ok)
    return rep


def _ratio_record(r) -> dict:
    return {
        "m": r.m, "n": r.n, "seed": r.seed, "d0": r.d0,
        "iteration_sizes": r.iteration_sizes,
        "greedy_rows": r.greedy_rows, "greedy_price": r.greedy_price,
        "opt_rows": r.opt_rows, "opt_price": r.opt_price,
        "ratio": r.ratio, "refined_bound": r.refined_bound, "harmonic_bound": r.harmonic_bound,
        "per_entry_violations": r.lemma21_violations,
    }


def lobby_ratio_report(trials: int = 1000, seed: int = 0, m_max: int = 8, n_max: int = 6,
                       price_models: Sequence[str] = ("unit", "rational"),
                       cap: int = DEFAULT_BRUTE_FORCE_CAP) -> Report:
    cfg = {"trials": trials, "seed": seed, "m_max": m_max, "n_max": n_max,
           "price_models": list(price_models), "cap": cap}
    rep = Report("lobby-ratio", cfg)
    with _timed(rep):
        params = RatioParams((1, m_max), (1, n_max), tuple(price_models), cap)
        reports = ratio_experiment(params, trials, seed)
        rep.records = [_ratio_record(r) for r in reports]
        violations = sum(len(r.lemma21_violations) for r in reports)
        bound_fail = [i for i, r in enumerate(reports) if not r.bounds_ok]
        strict_fail = [
            i for i, r in enumerate(reports)
            if any(s > 1 for s in r.iteration_sizes) and not r.refined_bound < r.harmonic_bound
        ]
        worst = max(reports, key=lambda r: r.ratio) if reports else None
        rep.aggregate.update(
            trials=trials,
            max_ratio=worst.ratio if worst else None,
            max_ratio_trial=reports.index(worst) if worst else None,
            trials_with_multi_flip=sum(any(s > 1 for s in r.iteration_sizes) for r in reports),
        )
        rep.check("per_entry_cost", CLAIM_PER_ENTRY, 0, violations, violations == 0)
        rep.check("ratio_bound", CLAIM_RATIO, 0, len(bound_fail), not bound_fail)
        rep.check("refined_strict", CLAIM_STRICT, 0, len(strict_fail), not strict_fail)
    return rep


def lobby_tight_report(n_values: Sequence[int] = range(2, 11), epsilon=Fraction(1, 100)) -> Report:
    epsilon = Fraction(epsilon)
    rep = Report("lobby-tight", {"n": list(n_values), "epsilon": epsilon})
    with _timed(rep):
        for n in n_values:
            inst = tight_example(n, epsilon)
            norm = normalize(inst)
            trace = greedy_lobby(norm)
            opt = exact_opt(norm, cap=max(DEFAULT_BRUTE_FORCE_CAP, inst.m))
            hn = harmonic(n)
            rat = trace.total_price / opt.opt_price
            rep.records.append({
                "n": n, "greedy_rows": trace.selected_rows, "greedy_price": trace.total_price,
                "opt_rows": opt.rows, "opt_price": opt.opt_price, "ratio": rat,
                "harmonic": hn, "iteration_sizes": trace.iteration_sizes,
            })
            ok = (
                trace.total_price == hn
                and trace.selected_rows == list(range(n - 1, -1, -1))
                and opt.rows == (n,)
                and opt.opt_price == 1 + epsilon
                and rat == hn / (1 + epsilon)
            )
            rep.check(f"tight_n{n}", CLAIM_TIGHT,
                      {"greedy": hn, "opt": 1 + epsilon, "ratio": hn / (1 + epsilon)},
                      {"greedy": trace.total_price, "opt": opt.opt_price, "ratio": rat}, ok)
    return rep


# --- Dodgson ----------------------------------------------------------------

CLAIM_SKC = "a definitely-flagged greedy score equals the exact Dodgson score"
CLAIM_NICE_EQ = "on nice triples the Dodgson score equals the sum of deficits"
CLAIM_LOWER = "the Dodgson score is at least the sum of deficits"
CLAIM_ORACLES = "climb-only exact search agrees with unrestricted swap search"


def _verdict_obj(v) -> dict:
    return {"value": v.value, "flag": v.flag}


def dodgson_score_report(e: dg.Election, candidates: Optional[Sequence] = None) -> Report:
    candidates = list(candidates) if candidates else list(e.candidates)
    rep = Report("dodgson-score", {"m": e.m, "n": e.n, "candidates": candidates})
    with _timed(rep):
        for c in candidates:
            t = dg.DodgsonTriple(e, c)
            v = dg.greedy_score(t)
            exact = dg.exact_score(t)
            deficits = {d: dg.deficit_against(t, d) for d in t.rivals}
            rep.records.append({"candidate": c, "greedy": _verdict_obj(v), "exact": exact,
                                "nice": dg.is_nice(t), "deficits": deficits})
            rep.check(f"skc_{c}", CLAIM_SKC, exact, v.value, (not v.definite) or v.value == exact)
    return rep


def dodgson_winner_report(e: dg.Election) -> Report:
    rep = Report("dodgson-winner", {"m": e.m, "n": e.n})
    with _timed(rep):
        winners = dg.dodgson_winners(e)
        scores = dg.dodgson_scores(e)
        for c in e.candidates:
            v = dg.greedy_winner(dg.DodgsonTriple(e, c))
            truth = c in winners
            rep.records.append({"candidate": c, "score": scores[c], "winner": truth,
                                "greedy_winner": _verdict_obj(v)})
            rep.check(f"skc_winner_{c}", "a definitely-flagged winner answer is correct",
                      truth, v.value, (not v.definite) or v.value == truth)
        rep.aggregate.update(winners=sorted(winners), condorcet_winner=dg.condorcet_winner(e))
    return rep


def dodgson_freq_report(m: int = 2, n: int = 100, trials: int = 10_000, seed: int = 1) -> Report:
    rep = Report("dodgson-freq", {"m": m, "n": n, "trials": trials, "seed": seed})
    with _timed(rep):
        fr = dg.niceness_trial(m, n, trials, seed)
        slack_a = dg.sampling_slack(fr.not_nice_bound, trials)
        slack_b = dg.sampling_slack(fr.any_maybe_bound, trials)
        rep.aggregate.update(
            not_nice=fr.not_nice, any_maybe=fr.any_maybe,
            not_nice_rate=fr.not_nice_rate, any_maybe_rate=fr.any_maybe_rate,
            not_nice_bound=fr.not_nice_bound, any_maybe_bound=fr.any_maybe_bound,
        )
        rep.check("not_nice", "P[random triple not nice] <= 2(m-1)exp(-n/8m^2) (+4 std. errors)",
                  fr.not_nice_bound, fr.not_nice_rate,
                  fr.not_nice_rate <= fr.not_nice_bound + slack_a)
        rep.check("any_maybe",
                  "P[some candidate gets maybe] < 2(m^2-m)exp(-n/8m^2) (+4 std. errors)",
                  fr.any_maybe_bound, fr.any_maybe_rate,
                  fr.any_maybe_rate <= fr.any_maybe_bound + slack_b)
    return rep


def all_profiles(m: int, n: int):
    labels = dg.candidate_labels(m)
    perms = list(itertools.permutations(labels))
    for votes in itertools.product(perms, repeat=n):
        yield dg.Election(labels, votes)


def dodgson_verify_report(max_m: int = 3, max_n: int = 3, random_trials: int = 10_000,
                          rand_m: int = 5, rand_n: int = 9, seed: int = 0) -> Report:
    """Exhaustive micro-scale oracle agreement plus random self-knowing checks."""
    cfg = {"exhaustive_m": max_m, "exhaustive_n": max_n, "random_trials": random_trials,
           "random_m_max": rand_m, "random_n_max": rand_n, "seed": seed}
    rep = Report("dodgson-verify", cfg)
    with _timed(rep):
        mismatch, skc_bad, nice_bad, lower_bad = [], [], [], []
        exhaustive = definite = 0

        def examine(t, where):
            nonlocal definite
            exact = dg.exact_score(t)
            v = dg.greedy_score(t)
            if v.definite:
                definite += 1
                if v.value != exact:
                    skc_bad.append(where)
            if dg.is_nice(t) and exact != v.value:
                nice_bad.append(where)
            if exact < v.value:
                lower_bad.append(where)
            return exact

        for n in range(1, max_n + 1):
            for e in all_profiles(max_m, n):
                for c in e.candidates:
                    t = dg.DodgsonTriple(e, c)
                    exhaustive += 1
                    exact = examine(t, {"votes": e.votes, "c": c})
                    if exact != dg.exact_score_bfs(t, max_m, max_n):
                        mismatch.append({"votes": e.votes, "c": c})
        for i in range(random_trials):
            g = rngmod.trial_rng(seed, i)
            m = int(g.integers(1, rand_m + 1))
            n = int(g.integers(1, rand_n + 1))
            e = dg.random_election(m, n, rngmod.trial_seed(seed, i))
            c = e.candidates[int(g.integers(0, m))]
            examine(dg.DodgsonTriple(e, c), {"trial": i})
        rep.aggregate.update(exhaustive_triples=exhaustive, random_triples=random_trials,
                             definite_outputs=definite)
        rep.records = {"oracle_mismatch": mismatch, "skc_violations": skc_bad,
                       "nice_equality_violations": nice_bad, "lower_bound_violations": lower_bad}
        rep.check("oracle_agreement", CLAIM_ORACLES, 0, len(mismatch), not mismatch)
        rep.check("self_knowing", CLAIM_SKC, 0, len(skc_bad), not skc_bad)
        rep.check("nice_equality", CLAIM_NICE_EQ, 0, len(nice_bad), not nice_bad)
        rep.check("deficit_lower_bound", CLAIM_LOWER, 0, len(lower_bad), not lower_bad)
    return rep


# --- distributions ----------------------------------------------------------

PIERCED = {"majority": fixtures.majority_pierced, "sat": fixtures.sat_pierced}


def dist_junta_report(oracle: str = "majority", n_max: int = 10, error_n_max: int = 6,
                      balance_c=3, k: int = 2) -> Report:
    p = PIERCED[oracle]()
    cfg = {"oracle": oracle, "threshold": p.threshold, "n_max": n_max,
           "error_n_max": error_n_max, "balance_c": balance_c, "k": k}
    rep = Report("dist-junta", cfg)
    with _timed(rep):
        nu = dist.junta_from_pierced(p, k)
        for n in range(max(1, p.threshold), n_max + 1):
            total = nu.total(n)
            dich = dist.check_dichotomy(nu, n, lambda n: max(n, n**k))
            bal = dist.check_balance(nu, p.oracle, n, balance_c)
            prob = nu.prob(n, p.oracle)
            rec = {"n": n, "total": total, "prob_in_set": prob, "dichotomy": dich, "balance": bal}
            rep.check(f"sums_to_one_n{n}", "each per-length distribution sums to 1", 1, total,
                      total == 1)
            rep.check(f"dichotomy_n{n}", "every weight is 0 or >= 2^-p(n), p(n)=max(n,n^k)",
                      True, dich, dich)
            rep.check(f"balance_n{n}", f"1/c <= Prob[x in L] <= 1-1/c with c={balance_c}",
                      True, prob, bal)
            if n <= error_n_max:
                err = dist.heuristic_error_weight(nu, p.oracle, lambda x: dist.pierced_heuristic(p, x), n)
                ceiling = Fraction(1, 2 ** (n**k - n))
                rec["error_weight"] = err
                rep.check(f"error_n{n}", "pierced heuristic error weight <= 2^-(n^k-n)",
                          ceiling, err, err <= ceiling)
            rep.records.append(rec)
    return rep


def dist_uniform_report(n_max: int = 20) -> Report:
    rep = Report("dist-uniform", {"n_max": n_max})
    with _timed(rep):
        cumulative = Fraction(0)
        for n in range(1, n_max + 1):
            mass = dist.uniform_length_mass(n)
            cumulative += mass
            rep.records.append({"n": n, "length_mass": mass, "cumulative": cumulative})
            rep.check(f"telescoping_n{n}", "mass on lengths 1..n equals n/(n+1)",
                      Fraction(n, n + 1), cumulative,
                      cumulative == dist.uniform_length_mass(n, cumulative=True))
        if n_max <= 12:
            # full density enumeration at small lengths, independent of the per-length formula
            total = sum((dist.uniform_density(x) for L in range(1, n_max + 1) for x in dist.strings(L)),
                        Fraction(0))
            rep.check("density_enumeration", "string densities through length n sum to n/(n+1)",
                      Fraction(n_max, n_max + 1), total, total == Fraction(n_max, n_max + 1))
    return rep


SCHEMES = {
    "concentrated": fixtures.concentrated_parity_scheme,
    "spread": fixtures.spread_parity_scheme,
}


def dist_fskc_report(n_max: int = 10, schemes: Sequence[str] = ("concentrated", "spread")) -> Report:
    rep = Report("dist-fskc-demo", {"n_max": n_max, "schemes": list(schemes), "target": "parity"})
    with _timed(rep):
        for name in schemes:
            scheme = SCHEMES[name]
            wrapped = dist.fskc(scheme)
            for n in range(1, n_max + 1):
                bad = dist.wrong_definite(wrapped, fixtures.parity_target, n)
                rate = dist.maybe_rate(wrapped, n)
                ceiling = dist.maybe_rate_bound(n)
                benign = dist.question_rate_upto(scheme, dist.wrapper_delta(n), n)
                rep.records.append({"scheme": name, "n": n, "maybe_rate": rate,
                                    "ceiling": ceiling, "refusal_rate_upto_n": benign,
                                    "wrong_definite": len(bad)})
                rep.check(f"{name}_benign_n{n}", "the fixture scheme refuses with probability <= delta",
                          dist.wrapper_delta(n), benign, benign <= dist.wrapper_delta(n))
                rep.check(f"{name}_correct_n{n}", "definitely-flagged outputs are correct", 0,
                          len(bad), not bad)
                rep.check(f"{name}_maybe_n{n}", "maybe-rate at length n <= n(n+1)/(n+1)^3",
                          ceiling, rate, rate <= ceiling)
    return rep


PAD_ORACLES = {"majority": fixtures.MAJORITY, "parity": fixtures.PARITY}


def dist_pad_report(x_max: int = 8, length_max: int = 12,
                    oracles: Sequence[str] = ("majority", "parity")) -> Report:
    cfg = {"x_max": x_max, "length_max": length_max, "oracles": list(oracles)}
    rep = Report("dist-pad", cfg)
    with _timed(rep):
        uniform = dist.uniform_per_length()
        for name in oracles:
            a = PAD_ORACLES[name]
            padded = dist.padded_oracle(a)
            wrong = [x for L in range(0, x_max + 1) for x in dist.strings(L)
                     if padded(dist.pad_reduce(x)) != a(x)]
            rep.check(f"{name}_reduction", "x in A iff pad(x) in A'", 0, len(wrong), not wrong)
            for L in range(1, length_max + 1):
                err = dist.heuristic_error_weight(uniform, padded, dist.padded_trivial_heuristic, L)
                ceiling = dist.padded_error_ceiling(L)
                rep.records.append({"oracle": name, "length": L, "error_weight": err,
                                    "ceiling": ceiling})
                rep.check(f"{name}_error_L{L}",
                          "trivial heuristic error <= 2^(l-L) (only padded images can be wrong) and < 1/L",
                          ceiling, err, err <= ceiling and err < Fraction(1, L))
    return rep
