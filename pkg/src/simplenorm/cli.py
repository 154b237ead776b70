"""Batch command-line front end.

Subcommands: construct, analyze, alphabet, verify, oracle.  Exit codes:
0 success, 1 a verification came out false, 2 user error (bad profile,
missing file, out-of-range request), 3 internal invariant breach.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

from . import __version__
from .alphabet import alphabet_to_json, balanced_alphabet, verify_alphabet
from .analyzer import DiscrepancyReport, digit_report, verify_stage_log
from .blocks import is_block_equivalent
from .engine import DEFAULT_BUDGET, StageRecord, run
from .errors import InternalInvariantError, SimplenormError
from .profile import NormalityProfile, profile_to_json, validate_profile
from .radix import SAdicNumber, nat_pos
from .residues import (
    PartitionSpec,
    euler_phi,
    is_residue_equivalent,
    minimal_residue_sets,
    parity_partition_difference,
    partition_count,
)

_JSON_OPTS = {"sort_keys": True, "separators": (",", ":")}


def _load_profile(path: str, seed_override: int | None) -> NormalityProfile:
    raw = json.loads(Path(path).read_text())
    if seed_override is not None:
        raw["seed"] = seed_override
    return validate_profile(raw)


def _write_json(path: Path, doc: dict) -> None:
    path.write_text(json.dumps(doc, **_JSON_OPTS) + "\n")


def cmd_construct(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile, args.seed)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    x, records = run(profile, budget=args.budget)
    lines = [json.dumps(rec.to_json_dict(), **_JSON_OPTS) for rec in records]
    (out_dir / "stages.jsonl").write_text("\n".join(lines) + "\n")
    final_doc = {
        "x": x.to_json_dict(),
        "b": records[-1].b if records else 0,
        "stages": len(records),
    }
    _write_json(out_dir / "final.json", final_doc)
    manifest = {
        "tool": "simplenorm",
        "version": __version__,
        "command": "construct",
        "profile_path": str(args.profile),
        "out_dir": str(out_dir),
        "profile": profile_to_json(profile),
        "seed": profile.seed,
        "budget": args.budget,
    }
    _write_json(out_dir / "manifest.json", manifest)
    print(f"construct: {len(records)} stages, reached b = {final_doc['b']}")
    return 0


def _load_final(path: str) -> tuple[SAdicNumber, int]:
    """Final value and nat position from final.json or a stage log."""
    text = Path(path).read_text()
    if path.endswith(".jsonl"):
        lines = [line for line in text.splitlines() if line.strip()]
        if not lines:
            raise ValueError(f"{path} holds no stage records")
        last = StageRecord.from_json_dict(json.loads(lines[-1]))
        return last.x, last.b
    doc = json.loads(text)
    return SAdicNumber.from_json_dict(doc["x"]), int(doc["b"])


def cmd_analyze(args: argparse.Namespace) -> int:
    x, b = _load_final(args.input)
    bases = [int(part) for part in args.bases.split(",")]
    horizons = {r: nat_pos(b, r) for r in bases}
    if args.checkpoints:
        checkpoints = [int(part) for part in args.checkpoints.split(",")]
        report = digit_report(x, bases, checkpoints, max_positions=horizons)
    else:
        # default: one checkpoint per base at its digit horizon
        def one_base(r: int) -> DiscrepancyReport:
            return digit_report(x, [r], [horizons[r]])

        ordered = sorted(bases)
        if args.threads > 1:
            with ThreadPoolExecutor(max_workers=args.threads) as pool:
                parts = list(pool.map(one_base, ordered))
        else:
            parts = [one_base(r) for r in ordered]
        report = DiscrepancyReport(tuple(row for part in parts for row in part.rows))
    text = report.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_alphabet(args: argparse.Namespace) -> int:
    exponents = {int(part) for part in args.M.split(",")} if args.M else set()
    alpha = balanced_alphabet(args.s, exponents, args.n, args.c)
    verify_alphabet(alpha)
    doc = alphabet_to_json(alpha)
    text = json.dumps(doc, **_JSON_OPTS) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    profile = _load_profile(args.profile, None)
    lines = Path(args.log).read_text().splitlines()
    records = [
        StageRecord.from_json_dict(json.loads(line)) for line in lines if line.strip()
    ]
    ok, reason = verify_stage_log(records, profile)
    if ok:
        print(f"verify: {len(records)} stages check out")
        return 0
    print(f"verify: FAILED ({reason})")
    return 1


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.kind == "parity":
        n, k = args.values[0], args.values[1]
        computed = parity_partition_difference(n, k)
        closed = n ** (k - 1) * euler_phi(n)
        print(f"signed partition difference({n},{k}) = {computed}")
        print(f"closed form n^(k-1)*phi(n)       = {closed}")
        print("match" if computed == closed else "MISMATCH")
        return 0 if computed == closed else 1
    if args.kind == "partition":
        n, sigma, v, k = args.values
        print(partition_count(PartitionSpec(n, sigma, v, k)))
        return 0
    if args.kind == "equiv":
        if len(args.values) < 2:
            raise ValueError("equiv needs: m1 [m2 ...] n")
        moduli = set(args.values[:-1])
        n = args.values[-1]
        x_set, y_set = minimal_residue_sets(moduli, n)
        equal = is_residue_equivalent(x_set, y_set, moduli)
        unequal = not is_residue_equivalent(x_set, y_set, {n})
        print(f"X = {sorted(x_set)}")
        print(f"Y = {sorted(y_set)}")
        print(f"residue equivalent for {sorted(moduli)}: {equal}")
        print(f"residue inequivalent for {n}: {unequal}")
        return 0 if equal and unequal else 1
    raise ValueError(f"unknown oracle kind {args.kind!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simplenorm",
        description="construct and audit digit expansions with a prescribed "
        "simple-normality profile",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="run the stage recursion")
    p.add_argument("--profile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the profile seed")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("analyze", help="digit frequency report as CSV")
    p.add_argument("input", help="final.json or stages.jsonl")
    p.add_argument("--bases", required=True, help="comma-separated bases")
    p.add_argument("--checkpoints", default=None, help="comma-separated digit positions")
    p.add_argument("--out", default=None, help="CSV path (default stdout)")
    p.add_argument("--threads", type=int, default=1)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("alphabet", help="restricted alphabet as JSON")
    p.add_argument("s", type=int)
    p.add_argument("M", help="comma-separated exponents, or '' for none")
    p.add_argument("n", type=int)
    p.add_argument("c", type=int, nargs="?", default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_alphabet)

    p = sub.add_parser("verify", help="recheck a stage log against a profile")
    p.add_argument("log", help="stages.jsonl")
    p.add_argument("--profile", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="combinatorial oracles")
    p.add_argument("kind", choices=["parity", "partition", "equiv"])
    p.add_argument("values", type=int, nargs="+")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return 3
    except (SimplenormError, ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
