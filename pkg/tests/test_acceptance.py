"""Exit criteria. Each test records one PASS/FAIL line in the terminal summary."""

import math
import time
from fractions import Fraction

import pytest

from lobbykit import experiments as ex
from lobbykit.lobby_eval import harmonic

from conftest import ACCEPTANCE_LINES

SEED = 20261014
EPS = Fraction(1, 100)

# suite name -> (factory, first rendering without timing)
_RUNS = {}


def record(number, title, ok, elapsed, limit, detail=""):
    ok = ok and elapsed < limit
    status = "PASS" if ok else "FAIL"
    line = f"[{status}] criterion {number:>2}: {title} ({elapsed:.2f}s < {limit}s){' ' + detail if detail else ''}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def timed(name, factory):
    t0 = time.perf_counter()
    report = factory()
    elapsed = time.perf_counter() - t0
    _RUNS[name] = (factory, report.to_json(timing=False))
    return report, elapsed


def failed(report):
    return [c.name for c in report.checks if not c.passed]


def test_01_tight_example():
    rep, t = timed("tight", lambda: ex.lobby_tight_report(range(2, 11), EPS))
    ok = rep.passed and len(rep.records) == 9
    for rec in rep.records:
        n = rec["n"]
        ok &= rec["greedy_price"] == harmonic(n)
        ok &= rec["opt_rows"] == (n,) and rec["opt_price"] == 1 + EPS
        ok &= rec["ratio"] == harmonic(n) / (1 + EPS)
    assert record(1, "tight example n=2..10: greedy H_n, OPT 1+eps, ratio H_n/(1+eps)", ok, t, 5), failed(rep)


@pytest.fixture(scope="module")
def ratio_run():
    return timed("ratio", lambda: ex.lobby_ratio_report(1000, SEED, m_max=8, n_max=6))


def test_02_per_entry_cost_bound(ratio_run):
    rep, t = ratio_run
    seeds = {r["seed"] for r in rep.records}
    ok = len(rep.records) == 1000 and len(seeds) == 1000
    ok &= all(r["m"] <= 8 and r["n"] <= 6 for r in rep.records)
    violations = sum(len(r["per_entry_violations"]) for r in rep.records)
    ok &= violations == 0 and next(c for c in rep.checks if c.name == "per_entry_cost").passed
    assert record(2, "per-entry cost bound on 1000 random instances", ok, t, 60,
                  f"violations={violations}"), failed(rep)


def test_02_uses_both_price_models(ratio_run):
    rep, _ = ratio_run
    non_unit = sum(1 for r in rep.records if r["greedy_price"] != len(r["greedy_rows"]))
    assert non_unit > 0


def test_03_ratio_bounds(ratio_run):
    rep, t = ratio_run
    ok = True
    strict_cases = 0
    for r in rep.records:
        opt = r["opt_price"]
        ok &= r["greedy_price"] <= r["refined_bound"] * opt <= r["harmonic_bound"] * opt
        if any(s > 1 for s in r["iteration_sizes"]):
            strict_cases += 1
            ok &= r["refined_bound"] < r["harmonic_bound"]
    ok &= rep.passed and strict_cases > 0
    assert record(3, "greedy <= refined*OPT <= H(D0)*OPT; strict when some l_j > 1", ok, t, 60,
                  f"multi-flip trials={strict_cases}, max ratio={rep.aggregate['max_ratio']}"), failed(rep)


def test_04_dodgson_oracles():
    rep, t = timed("oracles", lambda: ex.dodgson_verify_report(3, 3, random_trials=0, seed=SEED))
    ok = rep.aggregate["exhaustive_triples"] == 774
    ok &= next(c for c in rep.checks if c.name == "oracle_agreement").passed
    assert record(4, "climb-only exact score == BFS score on all 774 triples (m=3, n<=3)", ok, t, 30), failed(rep)


def test_05_self_knowing():
    rep, t = timed("skc", lambda: ex.dodgson_verify_report(3, 3, random_trials=10_000,
                                                           rand_m=5, rand_n=9, seed=SEED))
    ok = rep.passed and rep.aggregate["random_triples"] == 10_000
    assert record(5, "definite greedy scores exact; nice => score = sum of deficits", ok, t, 120,
                  f"definite outputs={rep.aggregate['definite_outputs']}"), failed(rep)


@pytest.mark.parametrize("m,n", [(2, 100), (3, 201), (4, 400)])
def test_06_frequency_bounds(m, n):
    rep, t = timed(f"freq{m}", lambda: ex.dodgson_freq_report(m, n, 10_000, SEED))
    agg = rep.aggregate
    ok = rep.passed
    for rate, bound in ((agg["not_nice_rate"], agg["not_nice_bound"]),
                        (agg["any_maybe_rate"], agg["any_maybe_bound"])):
        ok &= rate <= bound + 4 * math.sqrt(min(bound, 1) / 10_000)
    if (m, n) == (2, 100):
        ok &= abs(agg["not_nice_bound"] - 0.0879) < 1e-4 and abs(agg["any_maybe_bound"] - 0.1758) < 1e-4
    assert record(6, f"non-nice / any-maybe rates vs bounds at (m,n)=({m},{n})", ok, t, 120 / 3,
                  f"rates=({agg['not_nice_rate']}, {agg['any_maybe_rate']}) "
                  f"bounds=({agg['not_nice_bound']:.4f}, {agg['any_maybe_bound']:.4f})"), failed(rep)


def test_07_junta():
    rep, t = timed("junta", lambda: ex.dist_junta_report("majority", n_max=10, error_n_max=6, balance_c=3))
    ok = rep.passed and rep.config["threshold"] == 2
    ns = [r["n"] for r in rep.records]
    ok &= ns == list(range(2, 11))
    ok &= all(r["total"] == 1 for r in rep.records)
    ok &= all(r["error_weight"] <= Fraction(1, 2 ** (r["n"] ** 2 - r["n"]))
              for r in rep.records if r["n"] <= 6)
    assert record(7, "junta n=2..10: sums to 1, dichotomy n^2, balance c=3, error <= 2^-(n^2-n)", ok, t, 30), \
        failed(rep)


def test_08_fskc_wrapper():
    rep, t = timed("fskc", lambda: ex.dist_fskc_report(10))
    ok = rep.passed
    ok &= all(r["wrong_definite"] == 0 and r["maybe_rate"] <= r["ceiling"] for r in rep.records)
    assert record(8, "wrapper never wrong when definite; maybe-rate <= n(n+1)/(n+1)^3, n<=10", ok, t, 10), \
        failed(rep)


def test_09_uniform():
    rep, t = timed("uniform", lambda: ex.dist_uniform_report(20))
    ok = rep.passed and all(r["cumulative"] == Fraction(r["n"], r["n"] + 1) for r in rep.records)
    ok &= len(rep.records) == 20
    assert record(9, "cumulative uniform mass through n equals n/(n+1), n<=20", ok, t, 1), failed(rep)


def test_10_padding():
    rep, t = timed("pad", lambda: ex.dist_pad_report(8, 12, ("majority", "parity")))
    ok = rep.passed
    ok &= all(r["error_weight"] < Fraction(1, r["length"]) for r in rep.records)
    worst = max(rep.records, key=lambda r: r["error_weight"])
    assert record(10, "padding reduction |x|<=8; trivial-heuristic error < 2^(l-L), < 1/L for L<=12",
                  ok, t, 30, f"worst error={worst['error_weight']} at L={worst['length']}"), failed(rep)


def test_11_determinism():
    if not _RUNS:
        pytest.skip("no suites ran")
    t0 = time.perf_counter()
    diverged = [name for name, (factory, first) in _RUNS.items()
                if factory().to_json(timing=False) != first]
    t = time.perf_counter() - t0
    ok = not diverged and len(_RUNS) >= 11
    assert record(11, f"{len(_RUNS)} suites rerun with the same seed give identical reports", ok, t, 600,
                  f"diverged={diverged}" if diverged else "")
