"""Command-line front end: verification reports, tables, and generators.

Exit codes: 0 all checks passed, 1 a verified inequality failed, 2 input or
argument error, 3 decomposition hit the depth cap before terminating.
Rationals cross this boundary as "p/q" strings; decimal renderings appear
only in human-facing CSV columns and always round outward.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .bounds import c_seq, check_envelope, constants, phi, tail_bound
from .extremal import make_extremal
from .jn_decomp import (
    DecompositionLayers,
    DecompositionParams,
    StoppingMeasureError,
    decompose,
    psi,
    verify_pointwise,
)
from .numerics import (
    DEFAULT_BITS,
    MAX_BITS,
    DomainError,
    decimal_str,
    parse_rational,
    rational_str,
)
from .oscillation import bmo_norm
from .stepfn import Interval, IntervalUnion, StepFunction
from .sunrise import sunrise_decompose

_ONE = Fraction(1)
_ZERO = Fraction(0)

DEFAULT_TOL = "1/1000000000"


def random_step_function(
    cells: int,
    seed: int,
    max_den: int = 64,
    value_num: int = 8,
    value_den: int = 8,
    domain: Optional[Interval] = None,
) -> StepFunction:
    """Deterministic random step function; same seed, same function."""
    if not (2 <= cells <= 10**4):
        raise DomainError("cells must lie in [2, 10^4]")
    if domain is None:
        domain = Interval(_ZERO, _ONE)
    rng = random.Random(seed)
    span = domain.length
    points: set[Fraction] = set()
    while len(points) < cells - 1:
        den = rng.randint(2, max_den)
        num = rng.randint(1, den - 1)
        points.add(domain.a + span * Fraction(num, den))
    values: list[Fraction] = []
    for _ in range(cells):
        while True:
            v = Fraction(
                rng.randint(-value_num, value_num), rng.randint(1, value_den)
            )
            if not values or v != values[-1]:
                break
        values.append(v)
    return StepFunction(domain, tuple(sorted(points)), tuple(values))


def _load_step_function(path: str) -> StepFunction:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise DomainError(f"cannot read {path}: {exc}") from exc
    return StepFunction.from_json_str(text)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv(rows: list[list[str]], header: list[str]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def _certified_tail_ok(
    measured: Fraction,
    alpha: Fraction,
    norm_hi: Fraction,
    size: Fraction,
    bits: int,
) -> bool:
    p = bits
    while True:
        bound = tail_bound(alpha, norm_hi, size, p)
        if measured <= bound.lo:
            return True
        if measured > bound.hi:
            return False
        if p >= MAX_BITS:
            return False
        p = min(MAX_BITS, 2 * p)


def _layer_checks(f: StepFunction, layers: DecompositionLayers) -> list[dict]:
    gamma = layers.params.gamma
    alpha = layers.params.alpha_bar
    base = layers.base_average
    size = layers.domain.length
    checks = []

    ok = all(
        sum((c.length for c in node.children), _ZERO) <= gamma * node.parent.length
        for node in layers.nodes
    )
    checks.append({"name": "stopping_measure_per_node", "passed": ok})

    ok = True
    for layer in layers.layers:
        for part in layer.stopping_E.parts:
            ok = ok and f.average(part) == base + layer.depth * alpha
        for part in layer.stopping_F.parts:
            ok = ok and f.average(part) == base - layer.depth * alpha
    checks.append({"name": "stopping_average_ladder", "passed": ok})

    ok = True
    prev_e = prev_f = IntervalUnion((layers.domain,))
    for layer in layers.layers:
        ok = ok and layer.E.is_subset_of(prev_e) and layer.F.is_subset_of(prev_f)
        prev_e, prev_f = layer.E, layer.F
    checks.append({"name": "level_set_nesting", "passed": ok})

    ok = all(not layer.E.intersects(layer.F) for layer in layers.layers)
    checks.append({"name": "side_disjointness", "passed": ok})

    ok = True
    factor = _ONE
    for layer in layers.layers:
        factor *= gamma
        ok = ok and layer.E.measure <= factor * size
        ok = ok and layer.F.measure <= factor * size
        ok = ok and layer.G.measure <= min(_ONE, 2 * factor) * size
    checks.append({"name": "layer_measure_bounds", "passed": ok})

    report = verify_pointwise(f, layers)
    checks.append(
        {
            "name": "pointwise_majorant",
            "passed": report.passed,
            "min_slack": rational_str(report.min_slack),
            "worst_cell": [
                rational_str(report.worst_cell.a),
                rational_str(report.worst_cell.b),
            ],
        }
    )

    majorant = psi(layers)
    ok = True
    factor = _ONE
    for k in range(0, layers.depth + 2):
        measured = majorant.distribution(_ZERO, Fraction(k))
        ok = ok and measured == layers.g_set(k).measure
        ok = ok and measured <= min(_ONE, 2 * factor) * size
        factor *= gamma
    checks.append({"name": "psi_distribution", "passed": ok})
    return checks


def cmd_verify(args) -> int:
    bits = args.precision_bits
    try:
        f = _load_step_function(args.input)
        gamma = parse_rational(args.gamma)
        tol = parse_rational(args.tol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    norm = bmo_norm(f, tol)
    if args.alpha is not None:
        alpha = parse_rational(args.alpha)
    elif norm.bounds.hi > 0:
        alpha = norm.bounds.hi / (2 * gamma)
    else:
        alpha = _ONE

    report: dict = {
        "input": args.input,
        "precision_bits": bits,
        "norm": {
            "lo": rational_str(norm.bounds.lo),
            "hi": rational_str(norm.bounds.hi),
            "witness": [rational_str(norm.witness.a), rational_str(norm.witness.b)],
            "tolerance": rational_str(norm.tolerance),
        },
        "params": {
            "gamma": rational_str(gamma),
            "alpha_bar": rational_str(alpha),
            "max_depth": args.max_depth,
        },
    }

    try:
        params = DecompositionParams(gamma, alpha, args.max_depth)
        layers = decompose(f, params)
    except (DomainError, StoppingMeasureError) as exc:
        report["checks"] = [
            {"name": "decomposition", "passed": False, "detail": str(exc)}
        ]
        report["passed"] = False
        report["exit_code"] = 1
        _emit(json.dumps(report, indent=2) + "\n", args.out)
        return 1

    report["complete"] = layers.complete
    report["layers"] = layers.to_json_dict()["layers"]
    if not layers.complete:
        report["checks"] = [
            {"name": "depth_cap", "passed": False, "detail": "incomplete"}
        ]
        report["passed"] = False
        report["exit_code"] = 3
        _emit(json.dumps(report, indent=2) + "\n", args.out)
        return 3

    checks = _layer_checks(f, layers)

    if norm.bounds.hi > 0:
        base = layers.base_average
        grid_bound = norm.bounds.hi
        failures = []
        for j in range(1, 61):
            a_j = Fraction(j) * grid_bound / 20
            measured = f.distribution(base, a_j)
            if not _certified_tail_ok(measured, a_j, grid_bound, f.domain.length, bits):
                failures.append(rational_str(a_j))
        checks.append(
            {
                "name": "tail_bound_grid",
                "passed": not failures,
                "alphas_checked": 60,
                "failures": failures,
            }
        )

    passed = all(c["passed"] for c in checks)
    report["checks"] = checks
    report["passed"] = passed
    report["exit_code"] = 0 if passed else 1
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if passed else 1


def cmd_report_phi(args) -> int:
    bits = args.precision_bits
    digits = args.digits
    try:
        lo = parse_rational(args.min)
        hi = parse_rational(args.max)
        step = parse_rational(args.step)
        if lo <= 0 or step <= 0 or hi < lo:
            raise DomainError("need 0 < min <= max and positive step")
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows = []
    x = lo
    while x <= hi:
        cert = check_envelope(x, bits)
        if args.json:
            rows.append(
                {
                    "xi": rational_str(x),
                    "phi_lo": decimal_str(cert.lhs.lo, digits, "down"),
                    "phi_hi": decimal_str(cert.lhs.hi, digits, "up"),
                    "envelope_hi": decimal_str(cert.rhs.hi, digits, "up"),
                    "status": cert.status,
                }
            )
        else:
            rows.append(
                [
                    rational_str(x),
                    decimal_str(cert.lhs.lo, digits, "down"),
                    decimal_str(cert.lhs.hi, digits, "up"),
                    decimal_str(cert.rhs.hi, digits, "up"),
                ]
            )
        x += step
    if args.json:
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        _emit(_csv(rows, ["xi", "phi_lo", "phi_hi", "envelope_hi"]), args.out)
    return 0


def cmd_report_cm(args) -> int:
    bits = args.precision_bits
    digits = args.digits
    if args.max_m < 1:
        print("error: --max-m must be at least 1", file=sys.stderr)
        return 2
    rows = []
    for m in range(1, args.max_m + 1):
        c = c_seq(m, bits)
        if args.json:
            rows.append(
                {
                    "m": m,
                    "c_lo": decimal_str(c.lo, digits, "down"),
                    "c_hi": decimal_str(c.hi, digits, "up"),
                }
            )
        else:
            rows.append(
                [
                    str(m),
                    decimal_str(c.lo, digits, "down"),
                    decimal_str(c.hi, digits, "up"),
                ]
            )
    if args.json:
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        _emit(_csv(rows, ["m", "c_lo", "c_hi"]), args.out)
    return 0


def cmd_report_tail(args) -> int:
    bits = args.precision_bits
    digits = args.digits
    try:
        f = _load_step_function(args.input)
        alphas = [parse_rational(tok) for tok in args.alphas.split(",")]
        tol = parse_rational(args.tol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    norm = bmo_norm(f, tol)
    if norm.bounds.hi == 0:
        print("error: constant function has zero norm", file=sys.stderr)
        return 2
    base = f.average()
    rows = []
    for a in alphas:
        measured = f.distribution(base, a)
        bound = tail_bound(a, norm.bounds.hi, f.domain.length, bits)
        if args.json:
            rows.append(
                {
                    "alpha": rational_str(a),
                    "measured": rational_str(measured),
                    "bound_lo": decimal_str(bound.lo, digits, "down"),
                    "bound_hi": decimal_str(bound.hi, digits, "up"),
                }
            )
        else:
            rows.append(
                [
                    rational_str(a),
                    decimal_str(measured, digits, "down"),
                    decimal_str(bound.lo, digits, "down"),
                    decimal_str(bound.hi, digits, "up"),
                ]
            )
    if args.json:
        _emit(json.dumps(rows, indent=2) + "\n", args.out)
    else:
        _emit(_csv(rows, ["alpha", "measured", "bound_lo", "bound_hi"]), args.out)
    return 0


def cmd_report_norm(args) -> int:
    digits = args.digits
    try:
        f = _load_step_function(args.input)
        tol = parse_rational(args.tol)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    norm = bmo_norm(f, tol)
    payload = {
        "lo": rational_str(norm.bounds.lo),
        "hi": rational_str(norm.bounds.hi),
        "witness": [rational_str(norm.witness.a), rational_str(norm.witness.b)],
        "tolerance": rational_str(norm.tolerance),
    }
    if args.json:
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        row = [
            decimal_str(norm.bounds.lo, digits, "down"),
            decimal_str(norm.bounds.hi, digits, "up"),
            rational_str(norm.witness.a),
            rational_str(norm.witness.b),
        ]
        _emit(_csv([row], ["norm_lo", "norm_hi", "witness_a", "witness_b"]), args.out)
    return 0


def cmd_report_sunrise(args) -> int:
    try:
        f = _load_step_function(args.input)
        level = parse_rational(args.level)
        family = sunrise_decompose(f, level)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    pairs = family.to_pairs()
    if args.json:
        _emit(json.dumps(pairs, indent=2) + "\n", args.out)
    else:
        _emit(_csv([list(p) for p in pairs], ["a", "b"]), args.out)
    return 0


def cmd_report_decompose(args) -> int:
    try:
        f = _load_step_function(args.input)
        gamma = parse_rational(args.gamma)
        tol = parse_rational(args.tol)
        if args.alpha is not None:
            alpha = parse_rational(args.alpha)
        else:
            hi = bmo_norm(f, tol).bounds.hi
            alpha = hi / (2 * gamma) if hi > 0 else _ONE
        params = DecompositionParams(gamma, alpha, args.max_depth)
        layers = decompose(f, params)
    except (DomainError, StoppingMeasureError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        _emit(json.dumps(layers.to_json_dict(), indent=2) + "\n", args.out)
    else:
        size = layers.domain.length
        rows = []
        factor = _ONE
        for layer in layers.layers:
            factor *= gamma
            rows.append(
                [
                    str(layer.depth),
                    rational_str(layer.E.measure),
                    rational_str(layer.F.measure),
                    rational_str(layer.G.measure),
                    rational_str(min(_ONE, 2 * factor) * size),
                ]
            )
        _emit(
            _csv(rows, ["depth", "measure_E", "measure_F", "measure_G", "bound_G"]),
            args.out,
        )
    return 0 if layers.complete else 3


def cmd_generate(args) -> int:
    if args.kind == "extremal":
        _emit(make_extremal().to_json_str(), args.out)
        return 0
    try:
        f = random_step_function(
            args.cells,
            args.seed,
            max_den=args.max_den,
            value_num=args.value_num,
            value_den=args.value_den,
        )
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(f.to_json_str(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jnsharp",
        description="Exact decompositions and certified tail bounds for "
        "step functions of bounded mean oscillation.",
    )
    parser.add_argument(
        "--precision-bits",
        type=int,
        default=DEFAULT_BITS,
        help="working precision for enclosures (default 128)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the full verification suite")
    p_verify.add_argument("input")
    p_verify.add_argument("--gamma", required=True)
    p_verify.add_argument("--alpha", default=None)
    p_verify.add_argument("--max-depth", type=int, default=64)
    p_verify.add_argument("--tol", default=DEFAULT_TOL)
    p_verify.add_argument("--out", default=None)
    p_verify.set_defaults(func=cmd_verify)

    p_report = sub.add_parser("report", help="emit CSV/JSON tables")
    rsub = p_report.add_subparsers(dest="subcommand", required=True)

    def _common(p):
        p.add_argument("--json", action="store_true")
        p.add_argument("--out", default=None)
        p.add_argument("--digits", type=int, default=15)

    p_phi = rsub.add_parser("phi")
    p_phi.add_argument("--min", required=True)
    p_phi.add_argument("--max", required=True)
    p_phi.add_argument("--step", required=True)
    _common(p_phi)
    p_phi.set_defaults(func=cmd_report_phi)

    p_cm = rsub.add_parser("cm")
    p_cm.add_argument("--max-m", type=int, required=True)
    _common(p_cm)
    p_cm.set_defaults(func=cmd_report_cm)

    p_tail = rsub.add_parser("tail")
    p_tail.add_argument("input")
    p_tail.add_argument("--alphas", required=True)
    p_tail.add_argument("--tol", default=DEFAULT_TOL)
    _common(p_tail)
    p_tail.set_defaults(func=cmd_report_tail)

    p_norm = rsub.add_parser("norm")
    p_norm.add_argument("input")
    p_norm.add_argument("--tol", default=DEFAULT_TOL)
    _common(p_norm)
    p_norm.set_defaults(func=cmd_report_norm)

    p_sun = rsub.add_parser("sunrise")
    p_sun.add_argument("input")
    p_sun.add_argument("--level", required=True)
    _common(p_sun)
    p_sun.set_defaults(func=cmd_report_sunrise)

    p_dec = rsub.add_parser("decompose")
    p_dec.add_argument("input")
    p_dec.add_argument("--gamma", required=True)
    p_dec.add_argument("--alpha", default=None)
    p_dec.add_argument("--max-depth", type=int, default=64)
    p_dec.add_argument("--tol", default=DEFAULT_TOL)
    _common(p_dec)
    p_dec.set_defaults(func=cmd_report_decompose)

    p_gen = sub.add_parser("generate", help="write step-function fixtures")
    p_gen.add_argument("kind", choices=["extremal", "random"])
    p_gen.add_argument("--out", default=None)
    p_gen.add_argument("--cells", type=int, default=8)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--max-den", type=int, default=64)
    p_gen.add_argument("--value-num", type=int, default=8)
    p_gen.add_argument("--value-den", type=int, default=8)
    p_gen.set_defaults(func=cmd_generate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
