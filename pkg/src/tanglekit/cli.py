"""Command-line entry point: ``tanglekit <command> [options]``.

Exit codes: 0 success, 1 a verify-paper check failed, 2 bad input, 3 numerical
failure.  Every error prints a single ``error: <kind>: <reason>`` line to
stderr.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from .convexroof import TRIPLES, roof_of
from .errors import BadParam, TangleError
from .families import FAMILIES, parse_family
from .monogamy import analyze
from .pauli import evaluate, invariants_for
from .qstate import PureState, partial_trace, read_state
from .sweep import ZERO_TOL, SweepSpec, find_brackets, run_sweep, to_csv
from .tangles import key, tangle_report


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _round(obj):
    if isinstance(obj, float):
        return obj if not math.isfinite(obj) else float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    return obj


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _emit_json(args, data) -> None:
    _emit(args, json.dumps(_round(data), indent=2))


def _load(args) -> tuple[PureState, float]:
    if args.family:
        return parse_family(args.family).build(), 1.0
    return read_state(args.file)


def _note_factor(factor: float) -> str:
    return "" if abs(factor - 1) < 1e-12 else f"(input rescaled by {factor:.6g} to unit norm)\n"


def cmd_tangles(args) -> int:
    state, factor = _load(args)
    rep = tangle_report(state, roofs=not args.no_roofs, seed=args.seed, restarts=args.restarts)
    if args.json:
        _emit_json(args, {**rep.to_json(), "normalization_factor": factor})
        return 0
    lines = [_note_factor(factor) + f"{'quantity':<12} {'value':>12}"]
    lines += [f"{name:<12} {v:>12.6g}" for name, v in rep.scalars().items()]
    _emit(args, "\n".join(lines))
    return 0


def cmd_invariants(args) -> int:
    state, factor = _load(args)
    names = invariants_for(state.n_qubits)
    if not names:
        raise BadParam(f"no invariants registered for {state.n_qubits} qubits")
    vals = {n: evaluate(n, state) for n in names}
    if args.json:
        _emit_json(args, {n: {"re": v.raw.real, "im": v.raw.imag, "modulus": v.modulus,
                              "degree": v.homogeneity_degree, "normalized": v.normalized(4)}
                          for n, v in vals.items()})
        return 0
    lines = [_note_factor(factor) + f"{'name':<6} {'degree':>6} {'re':>12} {'im':>12} {'modulus':>12} {'deg-4 norm':>12}"]
    for n, v in vals.items():
        lines.append(f"{n:<6} {v.homogeneity_degree:>6} {v.raw.real:>12.6g} {v.raw.imag:>12.6g} "
                     f"{v.modulus:>12.6g} {v.normalized(4):>12.6g}")
    _emit(args, "\n".join(lines))
    return 0


def cmd_monogamy(args) -> int:
    state, _ = _load(args)
    rep = analyze(state, args.seed, args.restarts, args.beta, smoothing=args.smoothing)
    if args.json:
        _emit_json(args, rep.to_json())
    else:
        _emit(args, rep.table())
    return 0


def _triples(text: str | None, n: int):
    if n != 4:
        raise BadParam("roof needs a four-qubit pure state (its three-qubit reductions are roofed)")
    if not text:
        return list(TRIPLES)
    out = []
    for item in text.split(","):
        t = tuple(sorted(int(ch) for ch in item.strip()))
        if t not in TRIPLES:
            raise BadParam(f"bad triple {item!r}")
        out.append(t)
    return out


def cmd_roof(args) -> int:
    state, _ = _load(args)
    results = {}
    for t in _triples(args.triple, state.n_qubits):
        rho = partial_trace(state, t)
        results[t] = (roof_of(rho, seed=args.seed, restarts=args.restarts, beta=args.beta,
                                 smoothing=args.smoothing), rho)
    if args.json:
        _emit_json(args, {key(t): {**r.to_json(), "reconstruction_residual": r.reconstruction_residual(rho)}
                          for t, (r, rho) in results.items()})
        return 0
    lines = [f"{'triple':<7} {'roof tau3':>12} {'objective':>12} {'restarts':>8} {'converged':>9}"]
    for t, (r, _) in results.items():
        lines.append(f"{key(t):<7} {r.value:>12.6g} {r.objective:>12.6g} {r.restarts_used:>8} "
                     f"{f'{sum(r.converged)}/{len(r.converged)}':>9}")
    lines.append("values are upper-bound estimates of the convex roof")
    _emit(args, "\n".join(lines))
    return 0


def cmd_sweep(args) -> int:
    fam = parse_family(args.family)
    start, stop, steps = args.range
    if not float(steps).is_integer():
        raise BadParam("steps must be an integer")
    columns = tuple(c.strip() for c in args.columns.split(",") if c.strip())
    spec = SweepSpec(fam, args.param, start, stop, int(steps), columns)
    rows = run_sweep(spec, args.seed, args.restarts, args.beta, args.smoothing)
    brackets = find_brackets(rows, columns, args.zero_tol)
    csv_text = to_csv(rows, columns)
    if args.out:
        Path(args.out).write_text(csv_text)
        stream = sys.stdout
    else:
        sys.stdout.write(csv_text)
        stream = sys.stderr
    for b in brackets:
        print(f"bracket {b.column} [{b.lo:.12g}, {b.hi:.12g}] {b.before}->{b.after}", file=stream)
    return 0


def cmd_verify_paper(args) -> int:
    from .corpus import run_corpus

    only = None
    if args.only:
        try:
            only = [int(x) for x in args.only.split(",")]
        except ValueError:
            raise BadParam(f"--only expects comma-separated criterion numbers, got {args.only!r}") from None
        bad = [c for c in only if not 1 <= c <= 10]
        if bad:
            raise BadParam(f"unknown criteria {bad}")
    checks = run_corpus(args.seed, args.restarts, only)
    if args.json:
        _emit_json(args, [{"criterion": c.criterion, "claim": c.claim, "expected": c.expected,
                           "computed": c.computed, "tolerance": c.tolerance, "pass": c.passed}
                          for c in checks])
    else:
        failed = sum(not c.passed for c in checks)
        _emit(args, "\n".join([c.row() for c in checks] + [f"{len(checks) - failed}/{len(checks)} checks pass"]))
    return 0 if all(c.passed for c in checks) else 1


def _smoothing(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if any(not v > 0 for v in vals):
        raise argparse.ArgumentTypeError("smoothing parameters must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--restarts", type=int, default=64)
    common.add_argument("--beta", type=float, default=1.0, help="roof transform exponent")
    common.add_argument("--json", action="store_true", help="serialized output instead of a table")
    common.add_argument("--out", metavar="PATH", help="write output to PATH")
    common.add_argument("--smoothing", type=_smoothing, default=(), metavar="EPS,...",
                        help="roof smoothing schedule, e.g. 1e-3,1e-5 (slower, tighter on generic states)")

    state_in = _Parser(add_help=False)
    src = state_in.add_mutually_exclusive_group(required=True)
    src.add_argument("--family", help=f"family spec, e.g. psi_p:p=0.35 ({', '.join(FAMILIES)})")
    src.add_argument("--file", help="state JSON file")

    parser = _Parser(prog="tanglekit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    p = sub.add_parser("tangles", parents=[common, state_in], help="one-, two- and three-tangles")
    p.add_argument("--no-roofs", action="store_true", help="skip four-qubit roof estimates")
    p.set_defaults(func=cmd_tangles)
    p = sub.add_parser("invariants", parents=[common, state_in], help="registered SL invariants")
    p.set_defaults(func=cmd_invariants)
    p = sub.add_parser("monogamy", parents=[common, state_in], help="four-qubit monogamy report")
    p.set_defaults(func=cmd_monogamy)
    p = sub.add_parser("roof", parents=[common, state_in], help="roof three-tangles of reductions")
    p.add_argument("--triple", help="comma-separated triples such as 123,234 (default all)")
    p.set_defaults(func=cmd_roof)
    p = sub.add_parser("sweep", parents=[common], help="CSV sweep over one family parameter")
    p.add_argument("--family", required=True)
    p.add_argument("--param", required=True)
    p.add_argument("--range", nargs=3, type=float, required=True, metavar=("START", "STOP", "STEPS"))
    p.add_argument("--columns", required=True, help="comma-separated report columns")
    p.add_argument("--zero-tol", type=float, default=ZERO_TOL)
    p.set_defaults(func=cmd_sweep)
    p = sub.add_parser("verify-paper", parents=[common], help="run the reproduction corpus")
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify_paper)
    return parser


def _fail(kind: str, exc: BaseException, code: int) -> int:
    reason = " ".join(str(exc).split()) or type(exc).__name__
    print(f"error: {kind}: {reason}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.restarts < 1:
            raise BadParam("--restarts must be positive")
        return args.func(args)
    except UsageError as exc:
        return _fail("usage", exc, 2)
    except (ArithmeticError, RuntimeError) as exc:
        return _fail("numerical", exc, 3)
    except (TangleError, ValueError, KeyError, OSError) as exc:
        return _fail("input", exc, 2)


if __name__ == "__main__":
    sys.exit(main())
