"""Command-line interface.

Exit codes: 0 success, 1 usage or input error, 2 structurally singular input.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

from .analysis import METHODS, AnalysisReport, analyze
from .btf import BlockStructure, fine_btf
from .dae_text import parse_dae, read_sigfile, signature_of, write_sigfile
from .errors import DaeStructError, StructurallySingular
from .harness import BENCH_FIELDS, run_bench, run_verify
from .sigma import SignatureMatrix

EXIT_OK, EXIT_INPUT, EXIT_SINGULAR = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _sigma_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError("expected LO:HI, e.g. 0:3") from None
    if lo > hi:
        raise argparse.ArgumentTypeError("LO must not exceed HI")
    return lo, hi


def _density(text: str) -> float:
    val = float(text)
    if not 0.0 <= val <= 1.0:
        raise argparse.ArgumentTypeError("density must lie in [0, 1]")
    return val


def _positive(text: str) -> int:
    val = int(text)
    if val < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return val


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="daestruct", description="Structural analysis of DAE systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_input(p):
        p.add_argument("--input", required=True, help="path, or - for stdin")
        p.add_argument("--format", choices=("dae", "sig"),
                       help="input format (default: from the file extension)")

    p = sub.add_parser("analyze", help="offsets, index and Jacobian pattern")
    add_input(p)
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--output", choices=("json", "text"), default="json")
    p.add_argument("--block-structure", help="BlockStructure JSON file for --method block")

    p = sub.add_parser("btf", help="print the fine block triangular form as JSON")
    add_input(p)

    p = sub.add_parser("bench", help="global vs block solving, CSV on stdout")
    p.add_argument("--blocks", type=_positive, required=True)
    p.add_argument("--block-size", type=_positive, required=True)
    p.add_argument("--density", type=_density, default=0.3)
    p.add_argument("--coupling-density", type=_density)
    p.add_argument("--sigma-range", type=_sigma_range, default=(0, 3), metavar="LO:HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reps", type=_positive, default=1)

    p = sub.add_parser("verify", help="cross-check against brute-force oracles")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--n", type=_positive)
    group.add_argument("--blocks", type=_positive)
    p.add_argument("--block-size", type=_positive)
    p.add_argument("--cases", type=_positive, default=100)
    p.add_argument("--density", type=_density, default=0.4)
    p.add_argument("--sigma-range", type=_sigma_range, default=(0, 3), metavar="LO:HI")
    p.add_argument("--seed", type=int, default=0)
    return parser


def _read_input(path: str, fmt: str | None):
    """Return ``(sigma, equation_names, variable_names)``."""
    if fmt is None:
        fmt = "dae" if path.endswith(".dae") else "sig"
    text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    if fmt == "dae":
        system = parse_dae(text)
        return signature_of(system), system.equation_names, system.vars
    return read_sigfile(text), None, None


def _styled() -> bool:
    return sys.stdout.isatty() and not os.environ.get("DAESTRUCT_NO_COLOR")


def render_table(sigma: SignatureMatrix, report: AnalysisReport, styled: bool = False) -> str:
    """Signature matrix with the HVT starred, ``c`` as a right margin and ``d``
    as a bottom row."""
    n = sigma.n
    eqs = report.equation_names or tuple(f"f{i + 1}" for i in range(n))
    var_names = report.variable_names or tuple(f"x{j + 1}" for j in range(n))
    hvt = set(report.hvt.cells())
    cells = [["" for _ in range(n)] for _ in range(n)]
    for (i, j), v in sigma.entries.items():
        cells[i][j] = f"{v}*" if (i, j) in hvt else f"{v} "
    d_row = [f"{x} " for x in report.offsets.d]
    var_names = [f"{name} " for name in var_names]
    widths = [max(len(var_names[j]), len(d_row[j]), *(len(cells[i][j]) for i in range(n)))
              for j in range(n)]
    label_w = max(len("d"), *(len(e) for e in eqs))
    c_w = max(len("c"), *(len(str(x)) for x in report.offsets.c))

    def line(label, items, margin):
        body = "  ".join(item.rjust(w) for item, w in zip(items, widths))
        text = f"{label.ljust(label_w)}  {body}"
        if margin is not None:
            text += f"  | {margin.rjust(c_w)}"
        return text.rstrip()

    def bold(s):
        return f"\x1b[1m{s}\x1b[0m" if styled else s

    out = [bold(line("", list(var_names), "c"))]
    for i in range(n):
        out.append(line(eqs[i], cells[i], str(report.offsets.c[i])))
    out.append(line("d", d_row, None))
    out.append("")
    out.append(f"structural index: {report.structural_index}")
    out.append(f"hvt value: {report.hvt_value}")
    out.append(f"method: {report.method}")
    if report.block_structure is not None:
        out.append("blocks: " + " ".join(str(b) for b in report.block_structure.block_sizes))
    out.append(f"jacobian cells: {len(report.jacobian_pattern)}")
    return "\n".join(out) + "\n"


def cmd_analyze(args) -> int:
    sigma, eqs, var_names = _read_input(args.input, args.format)
    bs = None
    if args.block_structure:
        with open(args.block_structure, encoding="utf-8") as fh:
            bs = BlockStructure.from_json(fh.read())
    report = analyze(sigma, args.method, bs, eqs, var_names)
    if args.output == "text":
        sys.stdout.write(render_table(sigma, report, _styled()))
    else:
        sys.stdout.write(json.dumps(report.to_dict()) + "\n")
    return EXIT_OK


def cmd_btf(args) -> int:
    sigma, _, _ = _read_input(args.input, args.format)
    sys.stdout.write(fine_btf(sigma).to_json() + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = run_bench(args.blocks, args.block_size, reps=args.reps, seed=args.seed,
                     density=args.density, sigma_range=args.sigma_range,
                     coupling_density=args.coupling_density)
    writer = csv.DictWriter(sys.stdout, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({**row, "equal": str(row["equal"]).lower()})
    return EXIT_OK if all(r["equal"] for r in rows) else EXIT_INPUT


def cmd_verify(args) -> int:
    if args.blocks is not None and args.block_size is None:
        raise _UsageError("--blocks requires --block-size")
    result = run_verify(args.cases, seed=args.seed, n=args.n, blocks=args.blocks,
                        block_size=args.block_size, density=args.density,
                        sigma_range=args.sigma_range)
    print(f"{result.agreed}/{result.cases} agree")
    if result.mismatch is not None:
        m = result.mismatch
        print(f"first mismatch (case seed {m['seed']}): {m['problem']}")
        sys.stdout.write(write_sigfile(m["sigma"]))
    return EXIT_OK if result.ok else EXIT_INPUT


class _UsageError(Exception):
    pass


COMMANDS = {"analyze": cmd_analyze, "btf": cmd_btf, "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except StructurallySingular as exc:
        print(f"daestruct: {exc}", file=sys.stderr)
        return EXIT_SINGULAR
    except (DaeStructError, _UsageError, OSError, ValueError) as exc:
        where = f"{args.input}: " if getattr(args, "input", None) else ""
        print(f"daestruct: {where}{exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
