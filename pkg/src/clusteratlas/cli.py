"""Command-line interface.

Exit codes: 0 success, 1 a check found violations, 2 bad input.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import checks
from .atlas import (
    EnumerationLimits,
    ExchangeAtlas,
    enumerate_atlas,
    expand_in_base,
    export,
    load_atlas,
    stable_hash,
)
from .laurent import den_vector
from .quiver import PRESETS, QuiverError, classify, load_quiver, preset
from .rank2 import clusters_containing_x1, enumerate_chain, special_variables

log = logging.getLogger("clusteratlas")

CHECKS = ("conjecture3", "conjecture4", "lemma21", "unistructural", "theorem1")


class InputError(Exception):
    pass


def _add_source(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", choices=sorted(PRESETS), help="named quiver")
    src.add_argument("--quiver", metavar="PATH", help="quiver JSON file")
    src.add_argument("--atlas", metavar="PATH", help="previously exported atlas JSON")
    p.add_argument("--max-seeds", type=int, default=EnumerationLimits.max_seeds)
    p.add_argument("--max-depth", type=int, default=EnumerationLimits.max_depth)
    p.add_argument(
        "--workers",
        type=int,
        default=None,
        help="enumeration worker processes (default: $CLUSTER_ATLAS_WORKERS or 1)",
    )


def _add_output(p: argparse.ArgumentParser, formats, default) -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", metavar="PATH", help="write to a file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="clusteratlas", description="Exact cluster algebra enumeration and checks."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="enumerate the exchange graph")
    _add_source(p)
    _add_output(p, ("json", "dot", "table"), "json")

    p = sub.add_parser("variables", help="sorted cluster variables with denominator vectors")
    _add_source(p)
    _add_output(p, ("json", "table"), "table")

    p = sub.add_parser("expand", help="expand a variable in the cluster of a seed")
    _add_source(p)
    p.add_argument("--var", required=True, help="variable index (see `variables`)")
    p.add_argument("--seed", required=True, help="seed index or DOT node hash")
    _add_output(p, ("json", "table"), "table")

    p = sub.add_parser("check", help="run a verification")
    p.add_argument("name", choices=CHECKS)
    _add_source(p)
    p.add_argument("--bound", type=int, default=None, help="matrix entry bound (unistructural)")
    p.add_argument("--budget", type=int, default=None, help="per-candidate seed budget")
    p.add_argument("--seed", type=int, default=0, help="RNG seed for membership fingerprints")
    _add_output(p, ("json", "table"), "json")

    p = sub.add_parser("rank2", help="rank-2 chain via the two-term recurrence")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--depth", type=int, required=True)
    _add_output(p, ("json", "table"), "json")
    return parser


def _workers(args) -> int:
    if args.workers is not None:
        return args.workers
    env = os.environ.get("CLUSTER_ATLAS_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise InputError(f"CLUSTER_ATLAS_WORKERS={env!r} is not an integer") from None
    return 1


def _atlas(args) -> ExchangeAtlas:
    if args.atlas:
        try:
            return load_atlas(Path(args.atlas).read_text())
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load atlas: {exc}") from exc
    try:
        B = preset(args.preset) if args.preset else load_quiver(args.quiver)
        limits = EnumerationLimits(args.max_seeds, args.max_depth)
    except (OSError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    workers = _workers(args)
    if workers < 1:
        raise InputError("--workers must be positive")
    return enumerate_atlas(B, limits, workers=workers)


def _emit(args, payload) -> None:
    if isinstance(payload, (dict, list)):
        payload = json.dumps(payload, indent=1) + "\n"
    if isinstance(payload, str):
        payload = payload.encode()
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _variable_rows(atlas: ExchangeAtlas) -> list[dict]:
    return [
        {
            "index": i,
            "variable": v.to_fraction_string(),
            "den": list(den_vector(v)),
            "laurent": v.to_json(),
        }
        for i, v in enumerate(atlas.variables)
    ]


def cmd_enumerate(args) -> int:
    atlas = _atlas(args)
    if args.format == "table":
        summary = atlas.summary() | {"type": classify(atlas.base.matrix).name}
        _emit(args, "".join(f"{k:18} {v}\n" for k, v in summary.items()))
    else:
        _emit(args, export(atlas, args.format))
    return 0


def cmd_variables(args) -> int:
    atlas = _atlas(args)
    rows = _variable_rows(atlas)
    if args.format == "json":
        _emit(args, {"status": atlas.status, "variables": rows})
    else:
        lines = [f"# {len(rows)} variables, atlas {atlas.status}"]
        for r in rows:
            den = "(" + ",".join(map(str, r["den"])) + ")"
            lines.append(f"{r['index']:5}  {den:16}  {r['variable']}")
        _emit(args, "\n".join(lines) + "\n")
    return 0


def _resolve_seed(atlas: ExchangeAtlas, text: str) -> int:
    try:
        return atlas.seed_id(int(text))
    except ValueError:
        pass
    except KeyError as exc:
        raise InputError(str(exc)) from None
    for i, s in enumerate(atlas.seeds):
        if stable_hash(s) == text:
            return i
    raise InputError(f"no seed {text!r}")


def cmd_expand(args) -> int:
    atlas = _atlas(args)
    try:
        v = atlas.var_id(int(args.var))
    except (ValueError, KeyError):
        raise InputError(f"no variable {args.var!r}") from None
    s = _resolve_seed(atlas, args.seed)
    result = expand_in_base(atlas, v, s)
    names = [f"y{i + 1}" for i in range(atlas.n)]
    cluster = [w.to_fraction_string() for w in atlas.seeds[s].vars]
    if args.format == "json":
        _emit(
            args,
            {
                "variable": v,
                "seed": s,
                "cluster": cluster,
                "expansion": result.to_json(),
                "den": list(den_vector(result)),
            },
        )
    else:
        lines = [f"{n} = {c}" for n, c in zip(names, cluster)]
        lines.append(f"x = {result.to_string(names)}")
        lines.append("den = (" + ",".join(map(str, den_vector(result))) + ")")
        _emit(args, "\n".join(lines) + "\n")
    return 0


def cmd_check(args) -> int:
    atlas = _atlas(args)
    try:
        if args.name == "conjecture3":
            report = checks.verify_conjecture3(atlas)
        elif args.name == "conjecture4":
            report = checks.verify_conjecture4(atlas)
        elif args.name == "lemma21":
            report = checks.verify_lemma21(atlas)
        elif args.name == "unistructural":
            report = checks.unistructural_search(
                atlas, args.bound, args.budget, seed=args.seed
            )
        else:
            report = checks.verify_theorem1(atlas, args.budget, seed=args.seed)
    except checks.TruncatedAtlas as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        _emit(args, report.to_json())
        print(report.line(), file=sys.stderr)
    else:
        _emit(args, f"{report.check} {report.type}: {report.line()}\n")
    return 1 if report.violations else 0


def cmd_rank2(args) -> int:
    try:
        chain = enumerate_chain(args.r, args.depth)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    special = special_variables(chain)
    report = {
        "special_variables": [v.to_fraction_string() for v in special],
        "clusters_containing_x1": clusters_containing_x1(chain) if args.depth >= 2 else None,
    }
    if args.format == "json":
        _emit(args, chain.to_json() | {"report": report})
    else:
        lines = [f"# r={chain.r} depth={chain.depth} periodic={chain.periodic}"]
        for m in chain.indices:
            den = "(" + ",".join(map(str, den_vector(chain[m]))) + ")"
            lines.append(f"{m:5}  {den:14}  {chain[m].to_fraction_string()}")
        lines.append("special: " + ", ".join(report["special_variables"]))
        lines.append(f"clusters containing x1: {report['clusters_containing_x1']}")
        _emit(args, "\n".join(lines) + "\n")
    return 0


COMMANDS = {
    "enumerate": cmd_enumerate,
    "variables": cmd_variables,
    "expand": cmd_expand,
    "check": cmd_check,
    "rank2": cmd_rank2,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return COMMANDS[args.command](args)
    except (InputError, QuiverError) as exc:
        print(f"clusteratlas: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
