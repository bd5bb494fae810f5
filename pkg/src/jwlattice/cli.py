"""Command-line entry point.

    jwlattice validate --model ising
    jwlattice smatrix --model fibonacci
    jwlattice conf --dims --model z3 --n 3 --m 2
    jwlattice sft --model z3
    jwlattice export-ll --model fibonacci --n 2 --m 3 --out ll.txt
    jwlattice verify --model fibonacci --suite all
    jwlattice verify --list-checks

Exit status is 0 on success, 1 when a check or validation fails and 2 for
usage errors (bad flags, unknown model, unreadable model file, unknown check).
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor

from . import anyons, checks
from . import conf as cf

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    src = p.add_mutually_exclusive_group()
    src.add_argument("--model", default="fibonacci", help="built-in model name (default fibonacci)")
    src.add_argument("--model-file", help="path to a JSON model file")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the output here instead of stdout")
    p.add_argument("--threads", type=int, default=1, help="worker threads for verify; output does not depend on it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="jwlattice", description="Lattice configuration spaces over anyon models.")
    parser.add_argument("--list-checks", action="store_true", help="print the check registry and exit")
    sub = parser.add_subparsers(dest="command")
    sub.add_parser("validate", parents=[common], help="pentagon, hexagon and unitarity residuals")
    sub.add_parser("smatrix", parents=[common], help="twist-formula S matrix")
    c = sub.add_parser("conf", parents=[common], help="configuration space data")
    c.add_argument("--dims", action="store_true", help="print dimensions")
    sub.add_parser("sft", parents=[common], help="string Fourier transform matrix on Conf(n, m)")
    sub.add_parser("export-ll", parents=[common], help="LL pairing matrix on Conf(n, m)")
    v = sub.add_parser("verify", parents=[common], help="run identity checks")
    v.add_argument("--suite", default="all", help="'all' or comma separated check ids")
    v.add_argument("--budget", type=int, default=checks.DEFAULT_BUDGET,
                   help="largest space a pairing matrix may be built on")
    v.add_argument("--list-checks", action="store_true", help="print the check registry and exit")
    return parser


def _model(args) -> anyons.AnyonModel:
    if args.model_file:
        try:
            with open(args.model_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read model file: {exc}") from None
        return anyons.parse_model_text(text)
    return anyons.load_model(args.model)


def _size(args):
    if args.n < 0 or args.m < 1:
        raise UsageError(f"need n >= 0 and m >= 1, got n={args.n} m={args.m}")
    return args.n, args.m


def _listing() -> str:
    rows = checks.list_checks()
    width = max(len(cid) for cid, _ in rows)
    return "".join(f"{cid:<{width}}  {text}\n" for cid, text in rows)


def cmd_validate(args):
    rep = anyons.validate_model(_model(args))
    return "\n".join(rep.lines()) + "\n", EXIT_OK if rep.ok else EXIT_FAIL


def cmd_smatrix(args):
    model = _model(args)
    S = anyons.s_matrix(model)
    return cf.export_matrix(model, 2, 2, S, list(model.names)), EXIT_OK


def cmd_conf(args):
    model = _model(args)
    n, m = _size(args)
    g = cf.gamma(model, m)
    sp = cf.conf_space(model, n, m)
    lines = [f"model {model.name}", f"n {n}", f"m {m}",
             f"global_dimension {model.global_dim:.12e}",
             f"gamma_dimension {g.dimension:.12e}",
             f"gamma_components {len(g.components)}",
             f"conf_dimension {sp.dim}"]
    if not args.dims:
        lines += ["basis"] + [cf.element_name(model, e) for e in sp.basis]
    return "\n".join(lines) + "\n", EXIT_OK


def _space_matrix(args, build):
    model = _model(args)
    n, m = _size(args)
    sp = cf.conf_space(model, n, m)
    names = [cf.element_name(model, e) for e in sp.basis]
    return cf.export_matrix(model, n, m, build(sp), names), EXIT_OK


def cmd_sft(args):
    return _space_matrix(args, lambda sp: cf.sft_operator(sp).matrix)


def cmd_export_ll(args):
    return _space_matrix(args, cf.ll_gram)


def cmd_verify(args):
    if args.list_checks:
        return _listing(), EXIT_OK
    model = _model(args)
    n, m = _size(args)
    if args.suite.strip() == "all":
        ids = [cid for cid, _ in checks.list_checks()]
    else:
        ids = [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [cid for cid in ids if cid not in checks.REGISTRY]
    if unknown or not ids:
        raise UsageError(f"unknown check(s): {', '.join(unknown) or '(none given)'}")

    def one(cid):
        return checks.run_suite([cid], model, n, m, args.tol, args.seed, args.budget)[0]

    if args.threads > 1:
        with ThreadPoolExecutor(args.threads) as pool:
            reports = list(pool.map(one, ids))
    else:
        reports = [one(cid) for cid in ids]
    failed = sum(not r.passed for r in reports)
    text = "".join(r.record() + "\n" for r in reports)
    text += f"summary checks={len(reports)} passed={len(reports) - failed} failed={failed}\n"
    return text, EXIT_FAIL if failed else EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "smatrix": cmd_smatrix,
    "conf": cmd_conf,
    "sft": cmd_sft,
    "export-ll": cmd_export_ll,
    "verify": cmd_verify,
}


def run_cli(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.command is None:
        if args.list_checks:
            stdout.write(_listing())
            return EXIT_OK
        parser.print_usage(stderr)
        return EXIT_USAGE
    try:
        text, status = COMMANDS[args.command](args)
    except (UsageError, anyons.ModelError, checks.UnknownCheck, cf.SizeMismatch) as exc:
        stderr.write(f"jwlattice: error: {exc}\n")
        return EXIT_USAGE
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
