"""Command-line front end.

Exit codes: 0 success, 1 verification failed or claim refuted, 2 usage or
input error, 3 search budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import boxcore, cubefourier, extremal, setgroups, simplexgeo
from .boxcore import FormatError, VerificationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Out:
    def __init__(self):
        self.lines: list[str] = []
        self.wrote_file = False  # the command handled --output itself

    def __call__(self, line: str = ""):
        self.lines.append(line)

    def text(self) -> str:
        return "".join(l + "\n" for l in self.lines)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _fmt_set(mask: int) -> str:
    return "{" + setgroups.format_set(mask).strip("{}") + "}"


def _flag(ok: bool) -> str:
    return "pass" if ok else "FAIL"


def cmd_verify(args, out) -> int:
    fam = boxcore.parse_family(_read(args.file))
    rep = boxcore.verify_family(fam)
    out(f"n={rep.n} k={rep.k} size={rep.size}")
    out(f"alpha: {_flag(rep.alpha_ok)}")
    out(f"beta: {_flag(rep.beta_ok)}")
    out(f"gamma: {_flag(rep.gamma_ok)}")
    if rep.in_bound_range:
        out(f"bound: {rep.bound} (2^{rep.k}-2) {_flag(rep.bound_ok)}")
    else:
        out("bound: n/a (needs 3 <= k < n)")
    for kind, idx in rep.violations:
        out(f"violation {kind} " + " ".join(str(i + 1) for i in idx))
    return EXIT_OK if rep.ok and rep.bound_ok else EXIT_FAIL


def cmd_fourier(args, out) -> int:
    fam = boxcore.parse_family(_read(args.file))
    spec = cubefourier.transform(cubefourier.indicator_sum(fam))
    for s in range(1 << fam.n):
        out(f"S {_fmt_set(s)} {int(spec.scaled[s])} {spec.coefficient(s)}")
    if not args.trace:
        return EXIT_OK
    tr = cubefourier.proof_trace(fam)
    out(f"# trace m={tr.m} k={tr.k} n={tr.n}")
    out(f"fhat(empty) = {tr.fhat_empty}")
    for b in fam.boxes:
        key = boxcore.prop(b)
        out(f"fhat({_fmt_set(b.fixed)}) = {tr.fhat_props[key]}")
    out(f"props all +-1/2^{tr.k}: {_flag(tr.props_are_pm)}")
    out(f"energy = {tr.energy}")
    out(f"bessel_rhs = {tr.bessel_rhs}")
    out(f"bessel_slack = {tr.bessel_slack}")
    out(f"support_size = {len(tr.support)}")
    out(f"support_equals_M = {str(tr.support_equals_m).lower()}")
    out(f"support_is_group = {str(tr.support_is_group).lower()}")
    if tr.idempotent is not None:
        out(f"idempotent = {str(tr.idempotent).lower()}")
    ok = (tr.props_are_pm and tr.fhat_empty == tr.energy == Fraction(tr.m, 2**tr.k)
          and tr.bessel_slack >= 0)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_search(args, out) -> int:
    prob = extremal.SearchProblem(
        k=args.k, n=args.n, target=args.target, node_limit=args.node_limit,
        time_limit=args.time_limit, symmetry_breaking=not args.no_symmetry,
        jobs=args.jobs)
    res = extremal.search(prob)
    name = f"b({args.k},{args.n})"
    if res.status == extremal.MAXIMUM_PROVED:
        summary, code = f"{name} = {res.best_size}", EXIT_OK
    elif res.status == extremal.WITNESS_FOUND:
        summary, code = f"{name} >= {res.best_size}", EXIT_OK
    elif res.status == extremal.TARGET_REFUTED:
        if res.best_size == res.upper_bound_used:
            summary = f"{name} = {res.best_size} < {args.target}"
        else:
            summary = f"{name} < {args.target}"
        code = EXIT_FAIL
    else:
        summary, code = f"{name} >= {res.best_size}", EXIT_BUDGET
    out(f"{summary}, {res.status}")
    doc = extremal.serialize_result(res)
    if args.output:
        Path(args.output).write_text(doc, encoding="utf-8")
        out.wrote_file = True
    else:
        out(doc.rstrip("\n"))
    return code


def cmd_group(args, out) -> int:
    if args.action == "gen":
        if args.v is None:
            raise _Usage("group gen needs --v")
        fam = (setgroups.generate_Gv(args.v) if args.p is None
               else setgroups.preimage_group(args.v, args.p))
        out(setgroups.serialize_sets(fam).rstrip("\n"))
        return EXIT_OK
    if args.file is None:
        raise _Usage("group check needs a file")
    fam = setgroups.parse_sets(_read(args.file))
    rep = setgroups.check_group(fam)
    out(f"size={rep.size} n={fam.n}")
    out(f"is_group: {_flag(rep.is_group)}")
    if rep.witness and rep.witness[0] == "not-closed":
        a, b = rep.witness[1:]
        out(f"witness: {_fmt_set(a)} ^ {_fmt_set(b)} = {_fmt_set(a ^ b)} missing")
    elif rep.witness:
        out("witness: empty set missing")
    if rep.uniform_k is None:
        out("uniform_k: none")
    else:
        out(f"uniform_k: {rep.uniform_k} v={rep.v} bound={rep.bound} "
            f"{_flag(rep.bound_ok)}{' (equality)' if rep.attains_bound else ''}")
    out(f"half_intersections: {_flag(rep.half_intersections_ok)}")
    return EXIT_OK if rep.is_group and rep.bound_ok is not False else EXIT_FAIL


def cmd_double(args, out) -> int:
    fam = boxcore.parse_family(_read(args.file))
    doubled = boxcore.double_family(fam)
    out(f"# n={doubled.n} k={doubled.k}")
    out(boxcore.serialize_family(doubled).rstrip("\n"))
    return EXIT_OK


def cmd_encode(args, out) -> int:
    fam = simplexgeo.parse_simplices(_read(args.file))
    enc = simplexgeo.encode_boxes(fam)
    out(f"# n={enc.family.n} k={enc.family.k}")
    out(boxcore.serialize_family(enc.family).rstrip("\n"))
    if args.output:
        Path(args.output + ".hyperplanes").write_text(
            simplexgeo.serialize_hyperplanes(enc.hyperplanes), encoding="utf-8")
    else:
        for i, h in enumerate(enc.hyperplanes, 1):
            out(f"# H{i}: {h}")
    for (i, j), h in sorted(enc.pair_witnesses.items()):
        out(f"# pair {i + 1},{j + 1}: H{h + 1}")
    return EXIT_OK


class _Usage(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help="write the result here instead of stdout")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cubeboxes",
                                description="Disjoint sub-box families of the discrete cube.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="check a star-word family")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("fourier", parents=[common], help="exact spectrum of a family")
    s.add_argument("file")
    s.add_argument("--trace", action="store_true", help="also print the counting trace")
    s.set_defaults(func=cmd_fourier)

    s = sub.add_parser("search", parents=[common], help="branch-and-bound for b(k,n)")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    mode = s.add_mutually_exclusive_group()
    mode.add_argument("--prove-max", action="store_true")
    mode.add_argument("--target", type=int)
    s.add_argument("--node-limit", type=int)
    s.add_argument("--time-limit", type=float)
    s.add_argument("--no-symmetry", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("group", parents=[common], help="symmetric-difference groups")
    s.add_argument("action", choices=["gen", "check"])
    s.add_argument("file", nargs="?")
    s.add_argument("--v", type=int)
    s.add_argument("--p", type=int)
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("double", parents=[common], help="double a verified family")
    s.add_argument("file")
    s.set_defaults(func=cmd_double)

    s = sub.add_parser("encode", parents=[common], help="encode simplices into boxes")
    s.add_argument("file")
    s.set_defaults(func=cmd_encode)
    return p


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Execute one command; returns ``(exit_code, stdout_text)``."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else EXIT_USAGE), ""
    if args.verbose:
        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    out = _Out()
    try:
        code = args.func(args, out)
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL, out.text()
    except (_Usage, FormatError, ValueError, OverflowError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, out.text()
    text = out.text()
    if args.output and not out.wrote_file:
        try:
            Path(args.output).write_text(text, encoding="utf-8")
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE, ""
        return code, ""
    return code, text


def main(argv: list[str] | None = None) -> int:
    code, text = run(argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
