"""Command-line front end: ``diffsetlab <subcommand> ...``.

stdout carries exactly one JSON document; diagnostics go to stderr.
Exit codes: 0 witness found / sweep passed, 1 honest negative, 2 usage or
input error, 3 budget or largeness refusal.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dilates import Configuration, find_dilate, threshold_bound, threshold_constant
from .errors import BudgetExceeded, DiffsetlabError, DomainTooSmall
from .experiments import GENERATORS, KINDS, Target, TrialSpec, gen_set, run_sweep
from .grid import Box
from .poly import (IntPolynomial, PolySystem, find_poly_witness, poly_threshold_constant,
                   single_poly_constant, square_difference_ap)
from .proof import DEFAULT_BUDGET, averaging_census, literal_witness, literal_witness_poly, poly_census
from .setfile import SetFileError, read_set_file, write_set_file
from .sumset import ap_in_sumset

EXIT_FOUND, EXIT_NONE, EXIT_USAGE, EXIT_REFUSED = 0, 1, 2, 3


def _existing_file(text: str) -> Path:
    path = Path(text)
    if not path.is_file():
        raise argparse.ArgumentTypeError(f"no such file: {text}")
    return path


def _odd_m(text: str) -> int:
    try:
        m = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"m must be an integer, got {text!r}") from None
    if m < 3 or m % 2 == 0:
        raise argparse.ArgumentTypeError(f"m must be an odd integer >= 3, got {m}")
    return m


def _odd_list(text: str) -> list[int]:
    return [_odd_m(x) for x in text.split(",") if x.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _config(text: str) -> Configuration:
    try:
        return Configuration.parse(text)
    except DiffsetlabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _system(text: str) -> PolySystem:
    try:
        return PolySystem.parse(text)
    except DiffsetlabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _poly_list(text: str) -> list[IntPolynomial]:
    try:
        return [IntPolynomial.parse(p) for p in text.split(";") if p.strip()]
    except DiffsetlabError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diffsetlab", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="diagnostics on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("find-dilate", help="smallest r with r*v_j in A-A for all j")
    p.add_argument("--set", required=True, type=_existing_file, dest="set_file")
    p.add_argument("--config", required=True, type=_config)

    p = sub.add_parser("find-poly", help="pair r' != r'' with Q(r') - Q(r'') in A-A")
    p.add_argument("--set", required=True, type=_existing_file, dest="set_file")
    p.add_argument("--system", type=_system, help='rows ";", entries "|", coefficients "a0,a1,..."')
    p.add_argument("--config", type=_config, help="with --poly: rank-one system P_j v_j")
    p.add_argument("--poly", type=_poly_list, help='polynomials "a0,a1,...;..." one per vector')

    p = sub.add_parser("square-ap", help="m-term AP in A-A with square common difference")
    p.add_argument("--set", required=True, type=_existing_file, dest="set_file")
    p.add_argument("-m", required=True, type=_odd_m)

    p = sub.add_parser("sumset-ap", help="m-term AP in A+B via translate averaging")
    p.add_argument("--set-a", required=True, type=_existing_file)
    p.add_argument("--set-b", required=True, type=_existing_file)
    p.add_argument("-m", required=True, type=_odd_m)
    p.add_argument("--no-exhaustive", action="store_true", help="skip the direct scan of A+B")

    p = sub.add_parser("prove", help="literal replay of the averaging argument")
    p.add_argument("--set", required=True, type=_existing_file, dest="set_file")
    p.add_argument("--config", type=_config)
    p.add_argument("--poly", type=_poly_list)
    p.add_argument("--system", type=_system)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--strict", action="store_true", help="fibers over [1, r_max] only (no r''=0 fallback)")

    p = sub.add_parser("sweep", help="threshold sweep; writes JSON report and CSV")
    p.add_argument("--target", required=True, choices=KINDS)
    p.add_argument("-N", "--n", type=_int_list, default=[64, 128, 256])
    p.add_argument("-m", type=_odd_list, default=None)
    p.add_argument("--config", type=_config)
    p.add_argument("--system", type=_system)
    p.add_argument("--positive", action="store_true", help="positive-polynomial constant (2 instead of 4)")
    p.add_argument("--multipliers", type=_float_list, default=[0.25, 0.5, 1.0, 2.0])
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--greedy-trials", type=int, default=0)
    p.add_argument("--perturbed-trials", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--params", default="", help='overrides as "key=value;key=value" (N, m, trials, seed, ...)')
    p.add_argument("--out", type=Path)
    p.add_argument("--csv", type=Path)

    p = sub.add_parser("threshold", help="density constants for a configuration or system")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--config", type=_config)
    g.add_argument("--system", type=_system)
    p.add_argument("--positive", action="store_true")
    p.add_argument("-N", "--n", type=int, help="also report the density threshold at this N")

    p = sub.add_parser("gen", help="write a generated set to a file")
    p.add_argument("-N", "--n", type=int, required=True)
    p.add_argument("-d", type=int, default=1)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--generator", choices=GENERATORS, default="uniform-random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--target", choices=KINDS, default="ap-diff")
    p.add_argument("-m", type=_odd_m, default=5)
    p.add_argument("--config", type=_config)
    p.add_argument("--system", type=_system)
    p.add_argument("--out", type=Path, required=True)
    return parser


def _sweep_overrides(ns: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    conv = {"N": ("n", _int_list), "n": ("n", _int_list), "m": ("m", _odd_list), "trials": ("trials", int),
            "greedy_trials": ("greedy_trials", int), "perturbed_trials": ("perturbed_trials", int),
            "seed": ("seed", int), "multipliers": ("multipliers", _float_list), "config": ("config", _config),
            "system": ("system", _system), "workers": ("workers", int)}
    for item in ns.params.split(";"):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in conv:
            parser.error(f"bad --params entry {item!r}")
        attr, fn = conv[key]
        try:
            setattr(ns, attr, fn(value.strip()))
        except (argparse.ArgumentTypeError, ValueError) as exc:
            parser.error(f"--params {key}: {exc}")


def _validate(ns: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if ns.command in ("find-poly", "prove"):
        if ns.poly is not None and ns.config is None:
            parser.error("--poly needs --config")
        if ns.system is not None and ns.config is not None:
            parser.error("give either --system or --config, not both")
        if ns.command == "find-poly" and ns.system is None and ns.poly is None:
            parser.error("find-poly needs --system or --config with --poly")
        if ns.command == "prove" and ns.system is None and ns.config is None:
            parser.error("prove needs --config or --system")
    if ns.command in ("sweep", "gen"):
        kind = ns.target
        if kind in ("ap-diff", "ap-sum", "square-ap") and not ns.m:
            parser.error(f"target {kind} needs -m")
        if kind == "dilate" and ns.config is None:
            parser.error("target dilate needs --config")
        if kind == "poly" and ns.system is None:
            parser.error("target poly needs --system")
    if ns.command == "sweep" and (ns.out is None or ns.csv is None):
        parser.error("sweep needs --out and --csv")


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command == "sweep":
        _sweep_overrides(ns, parser)
    _validate(ns, parser)
    return ns


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def _system_of(ns) -> PolySystem:
    return ns.system if ns.system is not None else PolySystem.rank_one(ns.poly, ns.config)


def _cmd_find_dilate(ns) -> int:
    a = read_set_file(ns.set_file)
    w = find_dilate(a, ns.config)
    _emit(w.to_json() if w else {"found": False})
    return EXIT_FOUND if w else EXIT_NONE


def _cmd_find_poly(ns) -> int:
    a = read_set_file(ns.set_file)
    w = find_poly_witness(a, _system_of(ns))
    _emit(w.to_json() if w else {"found": False})
    return EXIT_FOUND if w else EXIT_NONE


def _cmd_square_ap(ns) -> int:
    a = read_set_file(ns.set_file)
    w = square_difference_ap(a, ns.m)
    _emit(w.to_json() if w else {"found": False})
    return EXIT_FOUND if w else EXIT_NONE


def _cmd_sumset_ap(ns) -> int:
    a = read_set_file(ns.set_a)
    b = read_set_file(ns.set_b)
    w = ap_in_sumset(a, b, ns.m, exhaustive=not ns.no_exhaustive)
    _emit(w.to_json() if w else {"found": False})
    return EXIT_FOUND if w else EXIT_NONE


def _cmd_prove(ns) -> int:
    a = read_set_file(ns.set_file)
    if ns.system is None and ns.poly is None:
        census = averaging_census(a, ns.config, ns.budget)
        lw = literal_witness(a, ns.config, ns.budget, anchored=not ns.strict)
        mode = "linear"
    else:
        ps = _system_of(ns)
        census = poly_census(a, ps, ns.budget)
        lw = literal_witness_poly(a, ps, ns.budget)
        mode = "poly"
    _emit({
        "mode": mode,
        "identity_total": census.total,
        "expected_total": census.expected,
        "identity_holds": census.identity_holds,
        "covering_size": census.size,
        "r_max": census.r_max,
        "found": lw is not None,
        "witness": lw.to_json() if lw else None,
    })
    return EXIT_FOUND if lw else EXIT_NONE


def _targets(ns) -> list[Target]:
    if ns.target in ("ap-diff", "ap-sum", "square-ap"):
        return [Target(ns.target, m=m) for m in ns.m]
    if ns.target == "dilate":
        return [Target("dilate", config=ns.config)]
    return [Target("poly", system=ns.system, positive=ns.positive)]


def _cmd_sweep(ns) -> int:
    gens = {"uniform-random": ns.trials}
    if ns.greedy_trials:
        gens["greedy-avoider"] = ns.greedy_trials
    if ns.perturbed_trials:
        gens["perturbed-structured"] = ns.perturbed_trials
    report = run_sweep(_targets(ns), ns.n, ns.multipliers, gens, ns.seed, ns.workers)
    report.write_json(ns.out)
    report.write_csv(ns.csv)
    summary = report.to_json(include_trials=False)
    summary.update({"json": str(ns.out), "csv": str(ns.csv)})
    _emit(summary)
    if not report.passed:
        print(f"{report.failures} trial(s) met the hypothesis without a witness", file=sys.stderr)
    return EXIT_FOUND if report.passed else EXIT_NONE


def _cmd_threshold(ns) -> int:
    if ns.config is not None:
        c = ns.config
        out = {"kind": "dilate", "ell": c.ell, "d": c.d, "s": c.s, "constant": threshold_constant(c),
               "bound": threshold_bound(c), "exponent": 1.0 / c.ell}
    else:
        ps = ns.system
        out = {"kind": "poly", "ell": ps.ell, "d": ps.d, "k": ps.k, "t": ps.t,
               "constant": poly_threshold_constant(ps, ns.positive),
               "constant_general": poly_threshold_constant(ps, False),
               "constant_positive": poly_threshold_constant(ps, True),
               "exponent": 1.0 / (ps.ell * ps.k), "positive": ns.positive}
        if ps.ell == 1 and ps.d == 1:
            out["single_poly_constant"] = single_poly_constant(ps.rows[0][0])
    if ns.n is not None:
        out["N"] = ns.n
        out["density"] = out["constant"] * ns.n ** (-out["exponent"])
    _emit(out)
    return EXIT_FOUND


def _cmd_gen(ns) -> int:
    target = Target(ns.target, m=ns.m if ns.target in ("ap-diff", "ap-sum", "square-ap") else None,
                    config=ns.config, system=ns.system)
    spec = TrialSpec(ns.seed, Box(ns.n, ns.d), ns.density, ns.generator, target)
    a = gen_set(spec)
    write_set_file(ns.out, a, comment=f"generator={ns.generator} seed={ns.seed} density={ns.density}")
    _emit({"path": str(ns.out), "N": ns.n, "d": ns.d, "cardinality": a.cardinality,
           "density": ns.density, "generator": ns.generator, "seed": ns.seed})
    return EXIT_FOUND


COMMANDS = {
    "find-dilate": _cmd_find_dilate,
    "find-poly": _cmd_find_poly,
    "square-ap": _cmd_square_ap,
    "sumset-ap": _cmd_sumset_ap,
    "prove": _cmd_prove,
    "sweep": _cmd_sweep,
    "threshold": _cmd_threshold,
    "gen": _cmd_gen,
}


def dispatch(ns: argparse.Namespace) -> int:
    try:
        return COMMANDS[ns.command](ns)
    except (BudgetExceeded, DomainTooSmall) as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_REFUSED
    except (DiffsetlabError, SetFileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    try:
        ns = parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0) and EXIT_USAGE
    return dispatch(ns)


if __name__ == "__main__":
    sys.exit(main())
