"""Command-line front end.

Exit codes: 0 success, 1 file or input-format error, 2 usage error,
3 proof not closed (NOT-REDUCED) or a failed coefficient/numeric check.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .certificate import render_certificate
from .files import FileFormatError, parse_coefficients, parse_ideal_file
from .groebner import GroebnerBudgetExceeded, buchberger, normal_form, DEFAULT_MAX_PAIRS
from .numeric import HAMILTONIANS, NOISES, ConvergenceError, get_hamiltonian, jacobian_fd, symplectic_residual
from .prk import ORDER1_STYLES, Kind, PRKSpec, check_coefficients
from .prover import STAGE2_ORDERS, ProofOptions, prove
from .text import PolynomialSyntaxError, render_polynomial

EXIT_OK = 0
EXIT_FILE = 1
EXIT_USAGE = 2
EXIT_FAILED = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _kind(text: str) -> Kind:
    try:
        return Kind.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected det or stoch") from None


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def _positive_float(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _state(text: str) -> tuple[float, float]:
    try:
        p, q = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected P,Q") from None
    return p, q


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="symprove", description="Groebner-basis symplecticity prover for PRK methods.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def method_args(p):
        p.add_argument("--kind", type=_kind, required=True, help="det or stoch")
        p.add_argument("--stages", type=_positive_int, required=True)

    p = sub.add_parser("prove", help="run the two-stage proof and write a certificate")
    method_args(p)
    p.add_argument("--order1", choices=ORDER1_STYLES, default="paper")
    p.add_argument("--order2", choices=STAGE2_ORDERS, default="grevlex")
    p.add_argument("--no-identify-mixed-partials", action="store_true", help="keep Hpq and Hqp distinct")
    p.add_argument("--cross-check", action="store_true", help="compare stage 1 with the linear-algebra oracle")
    p.add_argument("--emit-gg", action="store_true", help="include the full g_G text")
    p.add_argument("--max-pairs", type=_positive_int, default=DEFAULT_MAX_PAIRS)
    p.add_argument("--out", help="certificate file (created; refuses to overwrite without --force)")
    p.add_argument("--force", action="store_true")

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    p.add_argument("file")
    p.add_argument("--out")
    p.add_argument("--force", action="store_true")
    p.add_argument("--max-pairs", type=_positive_int, default=DEFAULT_MAX_PAIRS)

    p = sub.add_parser("reduce", help="normal form of a polynomial modulo an ideal file")
    p.add_argument("file")
    p.add_argument("--poly", required=True)
    p.add_argument("--max-pairs", type=_positive_int, default=DEFAULT_MAX_PAIRS)

    p = sub.add_parser("check-coeffs", help="exact check of the symplectic conditions")
    p.add_argument("file")
    method_args(p)

    p = sub.add_parser("numeric-check", help="finite-difference symplecticity check")
    method_args(p)
    p.add_argument("--coeffs", required=True)
    p.add_argument("--ham", choices=sorted(HAMILTONIANS), required=True)
    p.add_argument("--noise", choices=sorted(NOISES), help="noise Hamiltonian (stochastic methods)")
    p.add_argument("--h", type=_positive_float, default=0.01)
    p.add_argument("--dB", type=float)
    p.add_argument("--state", type=_state, default=(0.3, 0.7), help="P,Q")
    p.add_argument("--eps", type=_positive_float, default=1e-6)
    p.add_argument("--tol", type=_positive_float, default=1e-6)
    return ap


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str | None, text: str, force: bool) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w" if force else "x", encoding="utf-8") as fh:
        fh.write(text)


def _cmd_prove(args) -> int:
    spec = PRKSpec(args.stages, args.kind, not args.no_identify_mixed_partials)
    opts = ProofOptions(
        order1=args.order1,
        order2=args.order2,
        cross_check=args.cross_check,
        emit_gg=args.emit_gg,
        max_pairs=args.max_pairs,
    )
    cert = prove(spec, opts)
    _write(args.out, render_certificate(cert), args.force)
    if args.out:
        print(f"{cert.verdict}: {cert.note}")
    return EXIT_OK if cert.verified else EXIT_FAILED


def _cmd_groebner(args) -> int:
    f = parse_ideal_file(_read(args.file))
    gb = buchberger(f.ideal(), max_pairs=args.max_pairs)
    _write(args.out, "".join(render_polynomial(g) + "\n" for g in gb), args.force)
    return EXIT_OK


def _cmd_reduce(args) -> int:
    f = parse_ideal_file(_read(args.file))
    try:
        poly = f.parse(args.poly)
    except PolynomialSyntaxError as exc:
        print(f"symprove: --poly: {exc}", file=sys.stderr)
        return EXIT_USAGE
    gb = buchberger(f.ideal(), max_pairs=args.max_pairs)
    print(render_polynomial(normal_form(poly, gb.elements, gb.order)))
    return EXIT_OK


def _cmd_check_coeffs(args) -> int:
    spec = PRKSpec(args.stages, args.kind)
    coeffs = parse_coefficients(_read(args.file), spec)
    results = check_coefficients(coeffs, spec)
    bad = [(g, v) for g, v in results if v]
    if not bad:
        print(f"all {len(results)} conditions satisfied")
        return EXIT_OK
    for g, v in bad:
        print(f"violated: {render_polynomial(g)} = {v}")
    print(f"{len(bad)} of {len(results)} conditions violated")
    return EXIT_FAILED


def _cmd_numeric(args) -> int:
    spec = PRKSpec(args.stages, args.kind)
    coeffs = parse_coefficients(_read(args.coeffs), spec)
    if spec.stochastic:
        if args.dB is None or args.noise is None:
            print("symprove: stochastic methods need --dB and --noise", file=sys.stderr)
            return EXIT_USAGE
        dB = args.dB
    else:
        if args.dB is not None or args.noise is not None:
            print("symprove: --dB and --noise apply to stochastic methods only", file=sys.stderr)
            return EXIT_USAGE
        dB = None
    ham = get_hamiltonian(args.ham, args.noise)
    try:
        M = jacobian_fd(coeffs, ham, args.state, args.h, dB, args.eps)
    except ConvergenceError as exc:
        print(f"symprove: {exc}", file=sys.stderr)
        return EXIT_FAILED
    r = symplectic_residual(M)
    ok = r < args.tol
    print(f"residual {r:.3e} ({'below' if ok else 'not below'} tolerance {args.tol:g})")
    return EXIT_OK if ok else EXIT_FAILED


_COMMANDS = {
    "prove": _cmd_prove,
    "groebner": _cmd_groebner,
    "reduce": _cmd_reduce,
    "check-coeffs": _cmd_check_coeffs,
    "numeric-check": _cmd_numeric,
}


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (OSError, FileFormatError, PolynomialSyntaxError) as exc:
        print(f"symprove: {exc}", file=sys.stderr)
        return EXIT_FILE
    except GroebnerBudgetExceeded as exc:
        print(f"symprove: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
