"""Command-line front end.

Exit codes: 0 ok, 1 a verification reported FAIL, 2 unreadable input,
3 a search cap was hit, 4 invalid parameters.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import constructors, deciders, explorer, formats, gadgets, solver
from .digraph import Digraph, DigraphError, is_semicomplete, is_strong, is_symmetric

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CAP, EXIT_PARAM = 0, 1, 2, 3, 4


class ParamError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARAM, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return formats.parse_vertex_list(text)
    except formats.FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pair(text: str) -> tuple[int, int]:
    values = _int_list(text)
    if len(values) != 2:
        raise argparse.ArgumentTypeError(f"expected two integers, got {text!r}")
    return values[0], values[1]


def _common(p: argparse.ArgumentParser, *, terminals=True) -> None:
    p.add_argument("--input", help="digraph file ('n m' header, one arc per line)")
    if terminals:
        group = p.add_mutually_exclusive_group()
        group.add_argument("--k", type=int, help="terminal set size")
        group.add_argument("--S", type=_int_list, help="explicit terminal set, e.g. 0,1,2")
    p.add_argument("--candidate-cap", type=int, default=solver.DEFAULT_CANDIDATE_CAP)
    p.add_argument("--oracle-threshold", type=int, default=solver.DEFAULT_ORACLE_THRESHOLD)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--seed", type=int, default=explorer.DEFAULT_SEED)
    p.add_argument("--out", help="output path prefix")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="strongk", description="Strong subgraph k-arc-connectivity toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compute", help="exact lambda_k or lambda_S with a certificate")
    _common(p)
    p.add_argument("--oracle", action="store_true", help="cross-check lambda_S by brute force")

    p = sub.add_parser("decide", help="is lambda_k (or lambda_S) at least ell?")
    _common(p)
    p.add_argument("--ell", type=int, default=2)

    p = sub.add_parser("construct", help="explicit packings")
    p.add_argument("family", choices=("complete", "minimal", "product"))
    _common(p, terminals=False)
    p.add_argument("--S", type=_int_list)
    p.add_argument("--n", type=int)
    p.add_argument("--cover", help="deleted cycles, e.g. 0-1,2-3-4")
    p.add_argument("--left", help="digraph file of the first factor")
    p.add_argument("--right", help="digraph file of the second factor")

    p = sub.add_parser("gadget", help="reduction instance from a digraph and four terminals")
    _common(p, terminals=False)
    p.add_argument("--terminals", type=_int_list, required=True, help="s1,t1,s2,t2")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--ell", type=int, default=2)

    p = sub.add_parser("explore", help="theorem checks over small digraphs")
    _common(p, terminals=False)
    p.add_argument("--what", choices=("suite", "table", "scan", "minimal"), default="suite")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=3, help="second factor order for --what table")
    p.add_argument("--k", type=_int_list, help="k values for the suite, e.g. 2,3,4")
    p.add_argument("--ell", type=int, default=2)
    p.add_argument(
        "--mode", choices=("all_labeled", "semicomplete", "symmetric", "random"), default="all_labeled"
    )
    p.add_argument("--sample", type=int, default=explorer.DEFAULT_SAMPLE)
    p.add_argument("--tree", choices=("path", "star"), default="path")

    p = sub.add_parser("bounds", help="polynomial lower and upper bounds on lambda_k")
    _common(p)

    p = sub.add_parser("ng", help="lambda_k of a digraph and of its complement")
    _common(p)

    p = sub.add_parser("dot", help="export a digraph in DOT format")
    _common(p, terminals=False)
    return parser


# helpers


def _load(path: str | None, flag: str = "--input") -> Digraph:
    if not path:
        raise ParamError(f"{flag} is required")
    try:
        return formats.read_digraph(path)
    except OSError as exc:
        raise formats.FormatError(f"{path}: {exc.strerror}") from None


def _arcs_text(part) -> str:
    return " ".join(f"{u}->{v}" for u, v in sorted(part))


def _cert_lines(packing: solver.Packing) -> list[str]:
    lines = [f"certificate: {len(packing.parts)} parts"]
    lines += [f"part {i}: {_arcs_text(p)}" for i, p in enumerate(packing.parts, start=1)]
    return lines


def _cert_dict(n: int, packing: solver.Packing) -> dict:
    return formats.packing_to_dict(n, packing.S, packing.parts)


def _check_k(D: Digraph, k: int | None) -> int:
    if k is None:
        raise ParamError("one of --k or --S is required")
    if not 2 <= k <= D.n:
        raise ParamError(f"--k must satisfy 2 <= k <= n = {D.n}")
    return k


def _check_S(D: Digraph, S) -> tuple[int, ...]:
    try:
        S = tuple(sorted(set(S)))
        if len(S) < 2:
            raise ParamError("--S needs at least two vertices")
        from .digraph import as_vertex_set

        return as_vertex_set(S, D.n)
    except DigraphError as exc:
        raise ParamError(str(exc)) from None


class Output:
    """Collects text lines and a JSON document; prints exactly one of them."""

    def __init__(self, fmt: str, command: str):
        self.fmt = fmt
        self.lines: list[str] = []
        self.data: dict = {"command": command}

    def text(self, line: str) -> None:
        self.lines.append(line)

    def emit(self, stream) -> None:
        if self.fmt == "json":
            stream.write(json.dumps(self.data, sort_keys=True) + "\n")
        else:
            stream.write("".join(line + "\n" for line in self.lines))


def _write_outputs(prefix: str, files: dict[str, str], out: Output) -> None:
    written = []
    for suffix, content in files.items():
        path = Path(prefix + suffix)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(content)
        written.append(str(path))
        out.text(f"wrote {path}")
    out.data["files"] = written


# commands


def cmd_compute(args, out: Output) -> int:
    D = _load(args.input)
    if args.S is not None:
        S = _check_S(D, args.S)
        result = solver.lambda_S_exact(D, S, cap=args.candidate_cap)
        out.text(f"lambda_S = {result.value}")
        out.data.update(kind="lambda_S", value=result.value)
        if args.oracle:
            ref = solver.oracle_lambda_S(D, S, threshold=args.oracle_threshold)
            out.text(f"oracle lambda_S = {ref}")
            out.data["oracle"] = ref
            if ref != result.value:
                out.text("MISMATCH between exact solver and oracle")
                out.data["mismatch"] = True
                return EXIT_FAIL
    else:
        k = _check_k(D, args.k)
        result = solver.lambda_k_exact(D, k, cap=args.candidate_cap)
        out.text(f"lambda_{k} = {result.value}")
        out.data.update(kind="lambda_k", k=k, value=result.value)
    out.text("witness S = " + ",".join(map(str, result.witness_S)))
    out.lines += _cert_lines(result.certificate)
    out.data["witness_S"] = list(result.witness_S)
    out.data["certificate"] = _cert_dict(D.n, result.certificate)
    return EXIT_OK


def cmd_decide(args, out: Output) -> int:
    D = _load(args.input)
    ell = args.ell
    if ell < 1:
        raise ParamError("--ell must be at least 1")
    cert = None
    if args.S is not None:
        S = _check_S(D, args.S)
        route = "exact"
        answer, cert = solver.decide_lambda_S(D, S, ell, cap=args.candidate_cap)
        subject = "lambda_S"
    else:
        k = _check_k(D, args.k)
        subject = f"lambda_{k}"
        if ell == 2 and is_semicomplete(D):
            route = "semicomplete"
            answer = deciders.decide2_semicomplete(D, k)
        elif ell == 2 and is_symmetric(D) and is_strong(D):
            route = "symmetric"
            answer, cert = deciders.decide2_symmetric(D, k)
        else:
            route = "exact"
            answer, failing = solver.lambda_k_at_least(D, k, ell, cap=args.candidate_cap)
            if not answer:
                out.text("failing S = " + ",".join(map(str, failing)))
                out.data["failing_S"] = list(failing)
    verdict = "YES" if answer else "NO"
    notes = {
        "semicomplete": "semicomplete: 2-arc-strong and not S_4 at k = 4",
        "symmetric": "symmetric: bridgeless",
        "exact": "exact search",
    }
    out.lines.insert(0, f"{verdict} via {route} route ({notes[route]}): {subject} >= {ell}")
    out.data.update(answer=answer, route=route, ell=ell)
    if cert is not None:
        out.lines += _cert_lines(cert)
        out.data["certificate"] = _cert_dict(D.n, cert)
    return EXIT_OK


def cmd_construct(args, out: Output) -> int:
    try:
        if args.family == "complete":
            if args.n is None or args.S is None:
                raise ParamError("construct complete needs --n and --S")
            if args.n < 2:
                raise ParamError("--n must be at least 2")
            D = constructors.complete_digraph(args.n)
            packing = constructors.complete_packing(args.n, args.S)
        elif args.family == "minimal":
            if args.n is None or args.cover is None:
                raise ParamError("construct minimal needs --n and --cover")
            cover = formats.parse_cycle_cover(args.cover)
            D = constructors.minimal_graph(args.n, cover)
            recognized = constructors.recognize_minimal_2_nminus2(D)
            out.text(f"recognized as K<->_{args.n} minus disjoint cycles: {'yes' if recognized else 'no'}")
            out.data["recognized"] = recognized
            packing = constructors.minimal_packing(D, args.S if args.S is not None else (0, 1))
        else:
            if args.S is None:
                raise ParamError("construct product needs --S")
            G, H = _load(args.left, "--left"), _load(args.right, "--right")
            D = constructors.cartesian_product(G, H)
            packing = constructors.product_packing(G, H, args.S)
    except (constructors.ConstructionError, DigraphError) as exc:
        raise ParamError(str(exc)) from None
    if not solver.verify_packing(D, packing):
        raise RuntimeError("constructed certificate failed verification")
    out.text(f"{len(packing.parts)} arc-disjoint strong subgraphs containing S = "
             + ",".join(map(str, packing.S)))
    out.data.update(family=args.family, parts=len(packing.parts), n=D.n, m=D.m)
    cert_json = formats.packing_to_json(D.n, packing.S, packing.parts)
    if args.out:
        _write_outputs(args.out, {".dg": formats.format_digraph(D), ".cert.json": cert_json + "\n"}, out)
        # read back what was written and re-verify it
        back = formats.read_digraph(args.out + ".dg")
        with open(args.out + ".cert.json", encoding="utf-8") as fh:
            _, S, parts = formats.packing_from_dict(json.load(fh))
        if back != D or not solver.verify_packing(back, solver.Packing(S, tuple(parts))):
            raise RuntimeError("written certificate failed to re-verify")
    else:
        out.lines += _cert_lines(packing)
        out.data["digraph"] = formats.format_digraph(D)
    out.data["certificate"] = _cert_dict(D.n, packing)
    return EXIT_OK


def cmd_gadget(args, out: Output) -> int:
    D = _load(args.input)
    if len(args.terminals) != 4:
        raise ParamError("--terminals needs four vertices s1,t1,s2,t2")
    try:
        inst = gadgets.build_gadget(D, args.terminals, args.k, args.ell)
    except gadgets.GadgetError as exc:
        raise ParamError(str(exc)) from None
    names = {"x": inst.x, "y": inst.y}
    names.update({f"x{i}": v for i, v in enumerate(inst.S[2:], start=1)})
    names.update(inst.terminal_map)
    out.text(f"stage {inst.stage}: n = {inst.digraph.n}, m = {inst.digraph.m}, S = "
             + ",".join(map(str, inst.S)))
    out.data.update(stage=inst.stage, n=inst.digraph.n, m=inst.digraph.m, S=list(inst.S), terminals=names)
    if args.out:
        _write_outputs(args.out, {
            ".dg": formats.format_digraph(inst.digraph),
            ".map": formats.format_terminal_map(names),
        }, out)
    else:
        out.lines += formats.format_digraph(inst.digraph).splitlines()
        out.lines += formats.format_terminal_map(names).splitlines()
        out.data["digraph"] = formats.format_digraph(inst.digraph)
    return EXIT_OK


def cmd_explore(args, out: Output) -> int:
    failed = False
    if args.what == "suite":
        ks = args.k or list(range(2, args.n + 1))
        try:
            stream = explorer.enumerate_digraphs(args.n, args.mode, args.sample, args.seed)
        except ValueError as exc:
            raise ParamError(str(exc)) from None
        rows = []
        for report in explorer.run_suite(stream, ks):
            out.lines += report.lines()
            rows += [list(c) + [report.digraph_id] for c in report.checks]
            failed |= bool(report.failures)
        out.data["results"] = [
            {"id": r[3], "check": r[0], "status": r[1], "detail": r[2]} for r in rows
        ]
    elif args.what == "table":
        try:
            entries = explorer.reproduce_table1(args.n, args.m, args.tree)
        except (ValueError, DigraphError) as exc:
            raise ParamError(str(exc)) from None
        for e in entries:
            status = "PASS" if e.matches else "FAIL"
            failed |= not e.matches
            out.text(f"{e.row}\t{e.column}\t{e.symbolic}={e.expected}\t"
                     f"lower={e.lower}\tupper={e.upper}\t{status}")
        out.data["table"] = [
            {"row": e.row, "column": e.column, "formula": e.symbolic, "expected": e.expected,
             "lower": e.lower, "upper": e.upper, "matches": e.matches}
            for e in entries
        ]
    elif args.what == "scan":
        found = explorer.scan_conjecture(args.n, args.ell)
        out.text(f"{len(found)} exceptional class(es) of order {args.n} for ell = {args.ell}")
        for D in found:
            out.text(_arcs_text(D.arcs))
        out.data["exceptions"] = [[list(a) for a in D.sorted_arcs()] for D in found]
    else:
        recognized, defined = explorer.minimal_family_comparison(args.n)
        same = {explorer.canonical_form(D) for D in recognized} == {
            explorer.canonical_form(D) for D in defined
        }
        failed |= not same
        out.text(f"recognized {len(recognized)}, by definition {len(defined)}, "
                 f"{'identical' if same else 'DIFFERENT'}")
        out.data.update(recognized=len(recognized), defined=len(defined), identical=same)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_bounds(args, out: Output) -> int:
    D = _load(args.input)
    k = _check_k(D, args.k)
    r = deciders.bounds(D, k)
    out.text(f"lower = {r.lower} ({r.lower_rule})")
    out.text(f"upper = {r.upper} ({r.upper_rule})")
    out.data.update(k=r.k, lower=r.lower, upper=r.upper, lower_rule=r.lower_rule, upper_rule=r.upper_rule)
    return EXIT_OK


def cmd_ng(args, out: Output) -> int:
    D = _load(args.input)
    k = _check_k(D, args.k)
    r = deciders.nordhaus_gaddum(D, k)
    fields = r.__dict__
    for key, value in fields.items():
        out.text(f"{key} = {value}")
    out.data.update(fields)
    ok = r.sum_bound_holds and r.product_bound_holds
    ok = ok and r.sum_zero_iff_both_nonstrong and r.product_zero_iff_one_nonstrong
    return EXIT_OK if ok else EXIT_FAIL


def cmd_dot(args, out: Output) -> int:
    D = _load(args.input)
    out.lines += formats.to_dot(D).splitlines()
    out.data["dot"] = formats.to_dot(D)
    return EXIT_OK


COMMANDS = {
    "compute": cmd_compute,
    "decide": cmd_decide,
    "construct": cmd_construct,
    "gadget": cmd_gadget,
    "explore": cmd_explore,
    "bounds": cmd_bounds,
    "ng": cmd_ng,
    "dot": cmd_dot,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.candidate_cap < 1 or args.oracle_threshold < 0:
        stderr.write("error: caps must be positive\n")
        return EXIT_PARAM
    out = Output(args.format, args.command)
    try:
        code = COMMANDS[args.command](args, out)
    except formats.FormatError as exc:
        stderr.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except solver.CapExceeded as exc:
        stderr.write(f"cap exceeded: {exc}\n")
        return EXIT_CAP
    except (ParamError, ValueError) as exc:
        stderr.write(f"invalid parameters: {exc}\n")
        return EXIT_PARAM
    out.data["exit_code"] = code
    out.emit(stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
