"""JSON/CSV file formats for instances, elections and reports.

Rationals are always written as ``"num/den"`` strings. Floats only appear
for bounds involving e or ln and are rounded to 12 significant digits.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .dodgson import Election
from .lobby import VoteMatrix


class FormatError(ValueError):
    """Base class for malformed input files."""


class MalformedJSON(FormatError):
    pass


class SchemaError(FormatError):
    pass


class DimensionMismatch(FormatError):
    pass


class NonBinaryEntry(FormatError):
    pass


class NegativePrice(FormatError):
    pass


class InvalidVote(FormatError):
    pass


def fmt_rational(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise SchemaError(f"rational must be a string like '1/3' or an integer, got {s!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"cannot parse rational {s!r}") from exc


def fmt_float(x: float) -> float:
    return float(f"{x:.12g}")


def _load(data) -> Any:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJSON(f"input is not UTF-8: {exc}") from exc
    try:
        return json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedJSON(f"invalid JSON: {exc}") from exc


def _binary_row(row, what) -> list[int]:
    if not isinstance(row, list):
        raise SchemaError(f"{what} must be a list")
    out = []
    for b in row:
        if isinstance(b, bool) or b not in (0, 1):
            raise NonBinaryEntry(f"{what} contains non-binary entry {b!r}")
        out.append(int(b))
    return out


def parse_lobby_instance(data) -> VoteMatrix:
    """Parse ``{"matrix": [[0|1,..],..], "prices": ["num/den"|int,..], "target": [0|1,..]}``."""
    obj = _load(data)
    if not isinstance(obj, dict):
        raise SchemaError("lobby instance must be a JSON object")
    for key in ("matrix", "prices", "target"):
        if key not in obj:
            raise SchemaError(f"missing key {key!r}")
    matrix = obj["matrix"]
    if not isinstance(matrix, list) or not matrix:
        raise SchemaError("matrix must be a nonempty list of rows")
    rows = [_binary_row(r, f"matrix row {i}") for i, r in enumerate(matrix)]
    target = _binary_row(obj["target"], "target")
    n = len(target)
    if n == 0:
        raise DimensionMismatch("target must be nonempty")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise DimensionMismatch(f"matrix row {i} has {len(r)} entries but target has {n}")
    if not isinstance(obj["prices"], list):
        raise SchemaError("prices must be a list")
    prices = [parse_rational(p) for p in obj["prices"]]
    if len(prices) != len(rows):
        raise DimensionMismatch(f"{len(prices)} prices for {len(rows)} matrix rows")
    for i, p in enumerate(prices):
        if p < 0:
            raise NegativePrice(f"price of voter {i} is negative ({fmt_rational(p)})")
    return VoteMatrix.from_rows(rows, prices, target)


def lobby_instance_to_obj(v: VoteMatrix) -> dict:
    return {
        "matrix": [list(r) for r in v.entries],
        "prices": [fmt_rational(p) for p in v.prices],
        "target": list(v.target),
    }


def serialize_lobby_instance(v: VoteMatrix) -> str:
    return json.dumps(lobby_instance_to_obj(v))


def parse_election(data) -> Election:
    """Parse ``{"candidates": [...], "votes": [[most preferred, ...], ...]}``."""
    obj = _load(data)
    if not isinstance(obj, dict) or "candidates" not in obj or "votes" not in obj:
        raise SchemaError("election must be an object with 'candidates' and 'votes'")
    cands = obj["candidates"]
    votes = obj["votes"]
    if not isinstance(cands, list) or not all(isinstance(c, str) for c in cands):
        raise SchemaError("candidates must be a list of strings")
    if not isinstance(votes, list) or not all(isinstance(v, list) for v in votes):
        raise SchemaError("votes must be a list of lists")
    if len(set(cands)) != len(cands):
        raise InvalidVote("duplicate candidate label")
    known = set(cands)
    for i, vote in enumerate(votes):
        unknown = [c for c in vote if c not in known]
        if unknown:
            raise InvalidVote(f"vote {i} names unknown candidate(s) {unknown}")
        if len(set(vote)) != len(vote):
            raise InvalidVote(f"vote {i} lists a candidate twice")
        missing = [c for c in cands if c not in vote]
        if missing:
            raise InvalidVote(f"vote {i} omits candidate(s) {missing}")
    return Election(tuple(cands), tuple(tuple(v) for v in votes))


def election_to_obj(e: Election) -> dict:
    return {"candidates": list(e.candidates), "votes": [list(v) for v in e.votes]}


def serialize_election(e: Election) -> str:
    return json.dumps(election_to_obj(e))


def to_jsonable(x):
    """Recursively convert Fractions, tuples and sets for JSON output."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return fmt_rational(x)
    if isinstance(x, float):
        return fmt_float(x)
    if isinstance(x, Mapping):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (set, frozenset)):
        return [to_jsonable(v) for v in sorted(x, key=repr)]
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if hasattr(x, "item"):  # numpy scalar
        return to_jsonable(x.item())
    raise TypeError(f"cannot serialize {type(x).__name__}")


def dumps_json(obj) -> str:
    return json.dumps(to_jsonable(obj), indent=2, sort_keys=False) + "\n"


def records_to_csv(records: Iterable[Mapping]) -> str:
    """Flat CSV of per-trial records; list-valued cells are joined with spaces."""
    records = [to_jsonable(r) for r in records]
    buf = io.StringIO()
    if not records:
        return ""
    fields = list(records[0].keys())
    for r in records[1:]:
        for k in r:
            if k not in fields:
                fields.append(k)
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    for r in records:
        writer.writerow({k: " ".join(map(str, v)) if isinstance(v, list) else v
                         for k, v in r.items()})
    return buf.getvalue()


def matrix_to_csv(v: VoteMatrix) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([f"r{j}" for j in range(v.n)] + ["price"])
    for row, p in zip(v.entries, v.prices):
        w.writerow(list(row) + [fmt_rational(p)])
    w.writerow(list(v.target) + ["target"])
    return buf.getvalue()
