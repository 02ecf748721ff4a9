"""Command-line front end.

Exit codes: 0 success, 1 domain error (invalid system, non-surjective
mechanism, bad subsystem, ...), 2 I/O or parse error. All output is
deterministic given identical inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io as docio
from .entangle import entanglement, enumerate_partitions, partition_of
from .errors import DocumentError, Error
from .lattice import Subsystem, bottom, build_quale, enumerate_subsystems, subsystem, top
from .measure import measurement_report, system_output_space
from .oracle import crosscheck, exhaustive_tables, random_tables
from .stoch import dirac, kl_divergence
from .system import unroll, validate


def _bits(x: float) -> str:
    return "inf" if x == float("inf") else f"{x:.9f}"


def _parse_subsystem(spec, text: str) -> Subsystem:
    text = text.strip()
    if text == "all":
        return top(spec)
    if text == "null" or text == "":
        return bottom(spec)
    pairs = []
    for chunk in text.split(","):
        parts = chunk.strip().split("-")
        if len(parts) != 2 or not all(parts):
            raise DocumentError(
                f"bad edge {chunk!r}: expected srcId-trgId (ids must not contain '-')")
        pairs.append((parts[0], parts[1]))
    return subsystem(spec, pairs)


def _parse_output(spec, text: str):
    out_space = system_output_space(spec)
    if text.startswith("@"):
        return docio.load_distribution(text[1:], out_space)
    assignments = {}
    for chunk in text.split(","):
        if "=" in chunk:
            occ, sym = chunk.split("=", 1)
            assignments[occ.strip()] = sym.strip()
        elif len(out_space.factors) == 1:
            assignments[out_space.factor_ids[0]] = chunk.strip()
        else:
            raise DocumentError(
                f"output {chunk!r} must name its occasion, e.g. vZ=0")
    missing = set(out_space.factor_ids) - set(assignments)
    extra = set(assignments) - set(out_space.factor_ids)
    if missing or extra:
        raise DocumentError(
            f"output must assign exactly the target occasions {out_space.factor_ids}; "
            f"missing {sorted(missing)}, unknown {sorted(extra)}")
    return dirac(out_space, tuple(assignments[f] for f in out_space.factor_ids))


def _subsystem_key(sub: Subsystem) -> str:
    if not sub.pairs:
        return "null"
    return ",".join(f"{a}-{b}" for a, b in sub.sorted_pairs())


def _load_valid(path: str):
    spec = docio.load_system(path)
    violations = validate(spec)
    if violations:
        raise Error("invalid system: " + "; ".join(str(v) for v in violations))
    return spec


def cmd_validate(args) -> int:
    spec = docio.load_system(args.path)
    violations = validate(spec)
    for v in violations:
        print(str(v), file=sys.stderr)
    return 0 if not violations else 1


def cmd_quale(args) -> int:
    spec = _load_valid(args.path)
    quale = build_quale(spec, max_pairs=args.max_edges)
    sections = []
    for sec in quale.sections:
        m = sec.matrix
        sections.append({
            "subsystem": [f"{a}-{b}" for a, b in sec.subsystem.sorted_pairs()],
            "outputs": list(m.domain.factor_ids),
            "inputs": list(m.codomain.factor_ids),
            "matrix": [[docio.format_rational(v) for v in col] for col in m.cols],
        })
    doc = {"format_version": docio.FORMAT_VERSION, "sections": sections}
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_ei(args) -> int:
    spec = _load_valid(args.path)
    sub = _parse_subsystem(spec, args.subsystem)
    context = _parse_subsystem(spec, args.context)
    d_out = _parse_output(spec, args.output)
    report = measurement_report(spec, sub, context, d_out)
    print(_bits(report.ei_bits))
    if report.infinite_states:
        print(f"infinite divergence at states {list(report.infinite_states)}",
              file=sys.stderr)
    return 0


def cmd_gamma(args) -> int:
    spec = _load_valid(args.path)
    sub = _parse_subsystem(spec, args.subsystem)
    d_out = _parse_output(spec, args.output)
    if args.all_partitions:
        parts = list(enumerate_partitions(sub.source_ids()))
    elif args.partition:
        parts = [partition_of(
            [blk.split(",") for blk in args.partition.split("|")])]
    else:
        raise DocumentError("need --partition or --all-partitions")
    print(f"{'partition':24} {'gamma':>13} {'ei_whole':>13} {'sum_blocks':>13} {'gap':>13}")
    for part in parts:
        rep = entanglement(spec, sub, part, d_out)
        blocks_sum = sum(rep.per_block_ei)
        print(f"{part.label():24} {_bits(rep.gamma_bits):>13} {_bits(rep.ei_whole):>13} "
              f"{_bits(blocks_sum):>13} {_bits(rep.additivity_gap):>13}")
        if not args.all_partitions:
            for block, ei in zip(part.blocks, rep.per_block_ei):
                print(f"  block {','.join(block):17} ei={_bits(ei)}")
    return 0


def cmd_lattice(args) -> int:
    spec = _load_valid(args.path)
    d_out = _parse_output(spec, args.output)
    subs = list(enumerate_subsystems(spec, max_pairs=args.max_edges))
    subs.sort(key=lambda s: (len(s.pairs), _subsystem_key(s)))
    measurements = {
        s.effective: measurement_report(spec, s, None, d_out).fine for s in subs}
    lines = ["digraph ei_lattice {", "  rankdir=BT;", '  node [shape=box];']
    for s in subs:
        key = _subsystem_key(s)
        lines.append(f'  "{key}" [label="{key}"];')
    edges = sorted(spec.edges)
    arrows = []
    for s in subs:
        for e in edges:
            if e in s.pairs:
                continue
            bigger = Subsystem(s.pairs | {e}, s.effective | {e})
            ei = kl_divergence(measurements[bigger.effective], measurements[s.effective])
            arrows.append((_subsystem_key(s), _subsystem_key(bigger), ei))
    arrows.sort(key=lambda a: (a[0], a[1]))
    for src, dst, ei in arrows:
        label = "inf" if ei == float("inf") else f"{ei:.5f}"
        lines.append(f'  "{src}" -> "{dst}" [label="{label}"];')
    lines.append("}")
    text = "\n".join(lines)
    if args.dot:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_unroll(args) -> int:
    with open(args.path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{args.path}: invalid JSON: {exc}") from None
    if args.steps is not None:
        if args.steps < 1:
            raise DocumentError("--steps must be >= 1")
        doc = {**doc, "window": [0, args.steps - 1]}
    auto = docio.automaton_from_document(doc)
    spec = unroll(auto)
    violations = validate(spec)
    if violations:
        for v in violations:
            print(str(v), file=sys.stderr)
        return 1
    if args.out:
        docio.save_system(spec, args.out)
    else:
        print(json.dumps(docio.system_to_document(spec), indent=2, sort_keys=True))
    return 0


def _parse_dims(text: str) -> tuple[int, int, int]:
    parts = text.lower().split("x")
    if len(parts) != 3 or not all(p.isdigit() and int(p) > 0 for p in parts):
        raise DocumentError(f"bad dimensions {text!r}: expected like 2x2x2")
    return tuple(int(p) for p in parts)


def cmd_oracle_check(args) -> int:
    reports = []
    for dims in args.exhaustive or []:
        nx, ny, nz = _parse_dims(dims)
        reports.append(crosscheck(
            exhaustive_tables(nx, ny, nz), label=f"exhaustive {nx}x{ny}x{nz}"))
    if args.random:
        nx, ny, nz = _parse_dims(args.dims)
        reports.append(crosscheck(
            random_tables(nx, ny, nz, args.random, args.seed),
            label=f"random {args.random} of {nx}x{ny}x{nz} (seed {args.seed})"))
    if not reports:
        raise DocumentError("need --exhaustive and/or --random")
    failed = False
    for rep in reports:
        print(rep.summary())
        for line in rep.mismatches:
            print(f"  {line}", file=sys.stderr)
        failed = failed or not rep.ok
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="distmeas",
        description="Analyze the measurements performed by distributed stochastic systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a system document")
    p.add_argument("path")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("quale", help="dualized glued mechanism of every subsystem")
    p.add_argument("path")
    p.add_argument("--max-edges", type=int, default=16)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_quale)

    p = sub.add_parser("ei", help="effective information of a subsystem in a context")
    p.add_argument("path")
    p.add_argument("--subsystem", required=True, help='"all", "null" or "src-trg,..."')
    p.add_argument("--context", default="null", help='"all", "null" or "src-trg,..."')
    p.add_argument("--output", required=True, help='"vZ=0[,vW=1]" or "@dist.json"')
    p.set_defaults(fn=cmd_ei)

    p = sub.add_parser("gamma", help="entanglement over a partition of sources")
    p.add_argument("path")
    p.add_argument("--subsystem", default="all")
    p.add_argument("--partition", help='blocks like "vX|vY" or "vA,vB|vC"')
    p.add_argument("--all-partitions", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(fn=cmd_gamma)

    p = sub.add_parser("lattice", help="Hasse diagram with ei increments, DOT format")
    p.add_argument("path")
    p.add_argument("--output", required=True)
    p.add_argument("--dot", help="write DOT here instead of stdout")
    p.add_argument("--max-edges", type=int, default=16)
    p.set_defaults(fn=cmd_lattice)

    p = sub.add_parser("unroll", help="unroll an automaton document into a system")
    p.add_argument("path")
    p.add_argument("--steps", type=int, help="override the window to [0, steps-1]")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_unroll)

    p = sub.add_parser("oracle-check", help="compare the pipeline with counting oracles")
    p.add_argument("--exhaustive", action="append", metavar="NXxNYxNZ",
                   help="sweep all functions of these dimensions (repeatable)")
    p.add_argument("--random", type=int, metavar="N")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dims", default="3x3x3")
    p.set_defaults(fn=cmd_oracle_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (DocumentError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Error as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
