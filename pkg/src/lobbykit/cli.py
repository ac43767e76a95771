"""Command-line entry point: ``lobbykit <subcommand> [options]``.

Every subcommand writes one report (JSON by default, CSV of the per-record
table with ``--format csv``) and exits 0 exactly when all of the report's
bound checks pass.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from . import experiments as ex
from .formats import FormatError, parse_election, parse_lobby_instance, records_to_csv
from .lobby_eval import DEFAULT_BRUTE_FORCE_CAP, CapExceededError, CapOverrideWarning

log = logging.getLogger("lobbykit")

OUTPUT_DIR_ENV = "LOBBYKIT_OUTPUT_DIR"

EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_CAP = 4


@dataclass
class RunConfig:
    subcommand: str
    inputs: list = field(default_factory=list)
    output: Optional[str] = None
    seed: int = 0
    trials: Optional[int] = None
    m: Optional[int] = None
    n: Optional[int] = None
    epsilon: Fraction = Fraction(1, 100)
    cap: Optional[int] = None
    fmt: str = "json"
    candidate: Optional[str] = None
    oracle: str = "majority"


def _need_input(cfg: RunConfig) -> bytes:
    if not cfg.inputs:
        raise FormatError(f"{cfg.subcommand} needs --input")
    return Path(cfg.inputs[0]).read_bytes()


def build_report(cfg: RunConfig) -> ex.Report:
    sub = cfg.subcommand
    cap = cfg.cap or DEFAULT_BRUTE_FORCE_CAP
    if sub == "lobby-greedy":
        return ex.lobby_greedy_report(parse_lobby_instance(_need_input(cfg)))
    if sub == "lobby-exact":
        return ex.lobby_exact_report(parse_lobby_instance(_need_input(cfg)), cap=cap)
    if sub == "lobby-ratio":
        return ex.lobby_ratio_report(cfg.trials or 1000, cfg.seed, cfg.m or 8, cfg.n or 6, cap=cap)
    if sub == "lobby-tight":
        ns = [cfg.n] if cfg.n else list(range(2, 11))
        return ex.lobby_tight_report(ns, cfg.epsilon)
    if sub == "dodgson-score":
        e = parse_election(_need_input(cfg))
        return ex.dodgson_score_report(e, [cfg.candidate] if cfg.candidate else None)
    if sub == "dodgson-winner":
        return ex.dodgson_winner_report(parse_election(_need_input(cfg)))
    if sub == "dodgson-freq":
        return ex.dodgson_freq_report(cfg.m or 2, cfg.n or 100, cfg.trials or 10_000, cfg.seed)
    if sub == "dodgson-verify":
        return ex.dodgson_verify_report(random_trials=cfg.trials if cfg.trials is not None else 10_000,
                                        rand_m=cfg.m or 5, rand_n=cfg.n or 9, seed=cfg.seed)
    if sub == "dist-junta":
        return ex.dist_junta_report(cfg.oracle, cfg.n or (12 if cfg.oracle == "sat" else 10))
    if sub == "dist-uniform":
        return ex.dist_uniform_report(cfg.n or 20)
    if sub == "dist-fskc-demo":
        return ex.dist_fskc_report(cfg.n or 10)
    if sub == "dist-pad":
        return ex.dist_pad_report(length_max=cfg.n or 12)
    raise ValueError(f"unknown subcommand {sub!r}")


def render(report: ex.Report, fmt: str) -> str:
    if fmt == "csv":
        records = report.records
        if isinstance(records, dict):
            records = [{"kind": k, "count": len(v)} for k, v in records.items()]
        table = records or [c.to_obj() for c in report.checks]
        return records_to_csv(table)
    return report.to_json()


def _destination(cfg: RunConfig) -> Optional[Path]:
    if cfg.output:
        return Path(cfg.output)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{cfg.subcommand}.{cfg.fmt}"
    return None


def run(cfg: RunConfig) -> tuple[Optional[ex.Report], int]:
    try:
        report = build_report(cfg)
    except (FormatError, ValueError) as exc:
        log.error("%s", exc)
        return None, EXIT_CAP if isinstance(exc, CapExceededError) else EXIT_INPUT
    except OSError as exc:
        log.error("cannot read input: %s", exc)
        return None, EXIT_INPUT
    text = render(report, cfg.fmt)
    dest = _destination(cfg)
    try:
        if dest is None:
            sys.stdout.write(text)
        else:
            dest.parent.mkdir(parents=True, exist_ok=True)
            dest.write_text(text)
    except OSError as exc:
        log.error("cannot write report: %s", exc)
        return report, EXIT_INPUT
    for c in report.checks:
        if not c.passed:
            log.warning("check failed: %s (%s)", c.name, c.claim)
    return report, 0 if report.passed else EXIT_CHECK_FAILED


SUBCOMMANDS = {
    "lobby-greedy": "run the greedy algorithm on --input",
    "lobby-exact": "exact optimum of --input with bound checks",
    "lobby-ratio": "greedy vs exact optimum on random instances",
    "lobby-tight": "the tight example for n in 2..10 (or --n)",
    "dodgson-score": "greedy and exact Dodgson scores for --input",
    "dodgson-winner": "greedy and exact Dodgson winners for --input",
    "dodgson-freq": "frequency of non-nice triples vs the bounds",
    "dodgson-verify": "oracle agreement and self-knowing correctness",
    "dist-junta": "junta built from a toy pierced set",
    "dist-uniform": "length masses of the standard uniform distribution",
    "dist-fskc-demo": "self-knowing wrapper on fixture benign schemes",
    "dist-pad": "padding reduction and its trivial heuristic",
}


def _fraction(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {s!r}")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lobbykit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, metavar="SUBCOMMAND")
    for name, help_text in SUBCOMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--input", action="append", default=[], help="input JSON file")
        p.add_argument("--output", help=f"report path (default: stdout or ${OUTPUT_DIR_ENV})")
        p.add_argument("--seed", type=int, default=None, help="64-bit master seed")
        p.add_argument("--trials", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--n", type=int)
        p.add_argument("--epsilon", type=_fraction, default=Fraction(1, 100))
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--cap-override", type=int, help="raise the exhaustive-search cap")
        p.add_argument("--candidate", help="designated candidate (dodgson-score)")
        p.add_argument("--oracle", choices=tuple(ex.PIERCED), default="majority")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="lobbykit: %(levelname)s: %(message)s")
    if args.cap_override:
        log.warning("exhaustive-search cap overridden to %d", args.cap_override)
    seed = args.seed
    if seed is None:
        seed = 1 if args.subcommand == "dodgson-freq" else 0
    cfg = RunConfig(
        subcommand=args.subcommand, inputs=args.input, output=args.output, seed=seed,
        trials=args.trials, m=args.m, n=args.n, epsilon=args.epsilon, cap=args.cap_override,
        fmt=args.format, candidate=args.candidate, oracle=args.oracle,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("default", CapOverrideWarning)
        _, code = run(cfg)
    return code


if __name__ == "__main__":
    sys.exit(main())
