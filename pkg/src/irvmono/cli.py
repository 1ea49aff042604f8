"""Command-line front end.

Exit codes: 0 ok, 1 input error, 2 tie, 3 verification mismatch,
4 witness unavailable.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
from pathlib import Path
from typing import Sequence

from . import conditions, montecarlo, oracle, witness
from .profile import (
    CANDIDATES,
    BallotProfile,
    ShiftVector,
    TabulationTrace,
    TieError,
    TiePolicy,
    format_ranking,
    parse_ranking,
    tabulate,
)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_TIE = 2
EXIT_MISMATCH = 3
EXIT_NO_WITNESS = 4


class BallotFileError(ValueError):
    pass


# ---------------------------------------------------------------- ballot files


def parse_ballots(text: str, candidates: Sequence[str] = CANDIDATES, fmt: str = "auto") -> BallotProfile:
    """Read an aggregated ``ranking,count`` CSV or one ranking per line.

    Duplicate rankings are summed. ``fmt`` is ``"csv"``, ``"raw"`` or
    ``"auto"`` (CSV when the first line is the ``ranking,count`` header).
    """
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise BallotFileError("ballot file is empty")
    header = [h.strip().lower() for h in lines[0].split(",")]
    if fmt == "auto":
        fmt = "csv" if header == ["ranking", "count"] else "raw"
    counts = [0] * 6
    if fmt == "csv":
        if header != ["ranking", "count"]:
            raise BallotFileError("CSV ballot files need the header 'ranking,count'")
        reader = csv.reader(io.StringIO("\n".join(lines[1:])))
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise BallotFileError(f"line {lineno}: expected 'ranking,count', got {row!r}")
            try:
                index = parse_ranking(row[0], candidates)
                n = int(row[1].strip())
            except ValueError as exc:
                raise BallotFileError(f"line {lineno}: {exc}") from None
            if n < 0:
                raise BallotFileError(f"line {lineno}: negative count {n}")
            counts[index] += n
    elif fmt == "raw":
        for lineno, line in enumerate(lines, start=1):
            try:
                counts[parse_ranking(line, candidates)] += 1
            except ValueError as exc:
                raise BallotFileError(f"line {lineno}: {exc}") from None
    else:
        raise BallotFileError(f"unknown ballot format {fmt!r}")
    if sum(counts) == 0:
        raise BallotFileError("ballot file has no voters")
    return BallotProfile(tuple(counts))


def format_ballots(profile: BallotProfile, candidates: Sequence[str] = CANDIDATES) -> str:
    rows = ["ranking,count"]
    rows += [f"{format_ranking(i, candidates)},{n}" for i, n in enumerate(profile.counts)]
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------- payloads


def _profile_dict(p: BallotProfile, names: Sequence[str]) -> dict:
    return {format_ranking(i, names): n for i, n in enumerate(p.counts)}


def _trace_dict(t: TabulationTrace, names: Sequence[str]) -> dict:
    out = names[t.eliminated_round1]
    return {
        "round1": {names[c]: t.first_round[c] for c in t.round1_order},
        "eliminated_round1": out,
        "round2": {f"{names[c]}({out})": n for c, n in t.round2_tallies},
        "winner": names[t.winner],
        "had_tie": t.had_tie,
        "playout": t.pattern().render(names),
    }


def _shift_dict(s: ShiftVector, names: Sequence[str]) -> dict:
    moves = {
        f"{format_ranking(src, names)} -> {format_ranking(dst, names)}": n
        for (src, dst), n in s.moves.items()
        if n
    }
    return {
        "candidate": names[s.direction.candidate],
        "kind": "promote" if s.direction.up else "demote",
        "moves": moves,
        "total": s.total,
    }


def _permutation_dict(perm: Sequence[int], names: Sequence[str]) -> dict:
    return {names[old]: CANDIDATES[new] for old, new in enumerate(perm)}


def envelope(command: str, digest: str, payload: dict, names: Sequence[str] = CANDIDATES) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "input_digest": digest,
        "candidates": list(names),
        "payload": payload,
    }


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def render_text(value, indent: int = 0) -> str:
    """Plain-text view of a payload; every number comes straight from the JSON form."""
    pad = "  " * indent
    lines = []
    for key, v in value.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(v, indent + 1) if v else f"{pad}  (none)")
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{key}:")
            for item in v:
                lines.append(render_text(item, indent + 1))
                lines.append("")
        else:
            if isinstance(v, bool):
                v = str(v).lower()
            elif isinstance(v, list):
                v = ", ".join(map(str, v)) if v else "(none)"
            lines.append(f"{pad}{key}: {v}")
    return "\n".join(lines)


def _emit(args, env: dict) -> None:
    if args.json:
        print(json.dumps(env, indent=2, ensure_ascii=False))
    else:
        print(render_text(env["payload"]))


# ---------------------------------------------------------------- commands


def _names(args) -> list[str]:
    names = [n.strip() for n in args.candidates.split(",")]
    if len(names) != 3 or len(set(names)) != 3 or not all(names):
        raise BallotFileError(f"--candidates needs 3 distinct names, got {args.candidates!r}")
    return names


def _load(args) -> tuple[BallotProfile, str, list[str]]:
    names = _names(args)
    try:
        data = Path(args.file).read_bytes()
    except OSError as exc:
        raise BallotFileError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError:
        raise BallotFileError(f"{args.file} is not UTF-8") from None
    return parse_ballots(text, names, args.format), _digest(data), names


def cmd_tabulate(args) -> int:
    profile, digest, names = _load(args)
    trace = tabulate(profile, TiePolicy(args.tie_policy))
    payload = {"profile": _profile_dict(profile, names), "voters": profile.V}
    payload.update(_trace_dict(trace, names))
    _emit(args, envelope("tabulate", digest, payload, names))
    return EXIT_OK


def _check_payload(profile: BallotProfile, names: Sequence[str]) -> dict:
    report = conditions.classify(profile)
    np_ = report.normalized
    return {
        "profile": _profile_dict(profile, names),
        "voters": profile.V,
        "normalization": {
            "permutation": _permutation_dict(np_.permutation, names),
            "normalized_profile": _profile_dict(np_.profile, CANDIDATES),
        },
        "flags": report.flags(),
        "upward": report.upward.as_dict(),
        "downward": report.downward.as_dict(),
        "upward_exact": conditions.upward_creatable_exact(np_).as_dict(),
    }


def cmd_check(args) -> int:
    profile, digest, names = _load(args)
    _emit(args, envelope("check", digest, _check_payload(profile, names), names))
    return EXIT_OK


def cmd_witness(args) -> int:
    profile, digest, names = _load(args)
    np_ = conditions.classify(profile).normalized
    if args.direction == "downward":
        try:
            record = witness.construct_downward_witness(np_)
        except witness.ConditionNotSatisfied as exc:
            print(f"not creatable: {exc}", file=sys.stderr)
            return EXIT_NO_WITNESS
    else:
        # the exact condition is the oracle-checked iff; skip hopeless searches
        if not conditions.upward_creatable_exact(np_).holds:
            print("not creatable: no promotion of the winner can make it lose", file=sys.stderr)
            return EXIT_NO_WITNESS
        record = witness.search_upward_witness(np_)
        if record is None:
            print("not creatable: search found no witness", file=sys.stderr)
            return EXIT_NO_WITNESS
    # report in the caller's labels
    record = record.relabel(np_.inverse)
    verdict = witness.verify_witness(record)
    payload = {
        "direction": args.direction,
        "normalization": {"permutation": _permutation_dict(np_.permutation, names)},
        "original": _profile_dict(record.original, names),
        "shift": _shift_dict(record.shift, names),
        "modified": _profile_dict(record.modified, names),
        "trace_before": _trace_dict(record.trace_before, names),
        "trace_after": _trace_dict(record.trace_after, names),
        "verified": verdict.ok,
        "reasons": list(verdict.reasons),
    }
    _emit(args, envelope("witness", digest, payload, names))
    return EXIT_OK if verdict.ok else EXIT_MISMATCH


def cmd_verify(args) -> int:
    if args.max_voters < 1:
        raise BallotFileError("--max-voters must be at least 1")
    directions = ["downward", "upward"] if args.direction == "both" else [args.direction]
    reports = [
        oracle.exhaustive_verify(args.max_voters, d, workers=args.workers, min_voters=args.min_voters)
        for d in directions
    ]
    params = {"max_voters": args.max_voters, "min_voters": args.min_voters, "direction": args.direction}
    digest = _digest(json.dumps(params, sort_keys=True).encode())
    payload = {"reports": [r.as_dict() for r in reports], "ok": all(r.ok for r in reports)}
    if not args.timing:
        for r in payload["reports"]:
            r.pop("elapsed_seconds")
    _emit(args, envelope("verify", digest, payload))
    return EXIT_OK if payload["ok"] else EXIT_MISMATCH


def cmd_simulate(args) -> int:
    if args.voters < 1 or args.trials < 1:
        raise BallotFileError("--voters and --trials must be at least 1")
    report = montecarlo.estimate(
        montecarlo.CultureModel(args.model),
        args.voters,
        args.trials,
        args.seed,
        confidence=args.confidence,
        workers=args.workers,
    )
    params = {"model": args.model, "voters": args.voters, "trials": args.trials, "seed": args.seed}
    digest = _digest(json.dumps(params, sort_keys=True).encode())
    payload = report.as_dict()
    if args.timing:
        payload["elapsed_seconds"] = round(report.elapsed, 3)
    _emit(args, envelope("simulate", digest, payload))
    return EXIT_OK


# ---------------------------------------------------------------- entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="irvmono", description="Monotonicity-failure analysis for 3-candidate IRV.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(p):
        p.add_argument("file", help="ballot file (ranking,count CSV or one ranking per line)")
        p.add_argument("--candidates", default="A,B,C", help="comma-separated names (default A,B,C)")
        p.add_argument("--format", choices=["auto", "csv", "raw"], default="auto")
        p.add_argument("--json", action="store_true", help="emit the JSON report envelope")
        return p

    p = with_file(sub.add_parser("tabulate", help="run the election and show the playout"))
    p.add_argument("--tie-policy", choices=[t.value for t in TiePolicy], default="error")
    p.set_defaults(func=cmd_tabulate)

    p = with_file(sub.add_parser("check", help="which failures could have happened or be created"))
    p.set_defaults(func=cmd_check)

    p = with_file(sub.add_parser("witness", help="construct a profile that exhibits a failure"))
    p.add_argument("--direction", choices=["downward", "upward"], default="downward")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify", help="check the closed-form conditions against brute force")
    p.add_argument("--max-voters", type=int, default=12)
    p.add_argument("--min-voters", type=int, default=1)
    p.add_argument("--direction", choices=["both", "downward", "upward", "upward-exact"], default="both")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock time")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo susceptibility frequencies")
    p.add_argument("--model", choices=[m.value for m in montecarlo.CultureModel], default="iac")
    p.add_argument("--voters", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--confidence", type=float, default=0.99)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timing", action="store_true", help="include wall-clock time")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except TieError as exc:
        print(f"tie: {exc}", file=sys.stderr)
        return EXIT_TIE
    except (BallotFileError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
