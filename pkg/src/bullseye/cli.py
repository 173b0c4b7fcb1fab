"""Command-line surface: JSON in, JSON or text out, exit 0/1/2.

Exit 0 on success, 1 on a checked failure (an unstable limit, an asserted
equivalence that fails, an unclassified cone, a failed verify run), 2 on a
usage error.  Data goes to stdout, diagnostics to stderr.  The environment
variable BULLSEYE_HORIZON overrides the default sampling horizon.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import verifysuite
from .cone import UnidentifiedCone, UnstableAt, cone, composition_check, iterate_cone
from .constructions import (SearchExhausted, Unclassified, build_infmany,
                            build_onlycount, build_periodic, build_transfinite,
                            build_varying, classify_cone, cone_omega,
                            find_scaling_for_density,
                            sample_classification_scalings)
from .density import NotClosedForm, adn_exact, density_report
from .geometry import NotEquivalentUpTo, build_window, render_svg, shift_equivalent
from .jsonio import (cone_result_to_json, descriptor_from_json,
                     descriptor_to_json, family_to_json, fraction_to_json,
                     metric_window_to_json, scaling_from_json, scaling_to_json)
from .limits import UnstableTable
from .scaling import default_schedule
from .sequences import Rich, evaluate


def _load_json_arg(text: str):
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _descriptor(text: str):
    return descriptor_from_json(_load_json_arg(text))


def _scaling(text: str | None, c: int):
    if text is None:
        return default_schedule(c)
    return scaling_from_json(_load_json_arg(text))


def _horizon_default(args, fallback: int | None = None) -> int | None:
    env = os.environ.get("BULLSEYE_HORIZON")
    if args.horizon is not None:
        return args.horizon
    if env:
        return int(env)
    return fallback


def _emit(args, payload: dict, text_lines) -> None:
    if args.format == "json":
        out = json.dumps(payload, indent=2, sort_keys=True)
    else:
        out = "\n".join(text_lines)
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# ---------------------------------------------------------------------------
# subcommands


def cmd_density(args) -> int:
    seq = _descriptor(args.descriptor)
    windows = tuple(int(x) for x in args.windows.split(",")) if args.windows else (args.n,)
    report = density_report(seq, windows=windows)
    payload = {
        "exact": fraction_to_json(report.exact) if report.exact is not None else None,
        "window_averages": [{"n": n, "average": fraction_to_json(avg)}
                            for n, avg in report.window_averages],
    }
    lines = []
    if report.exact is not None:
        lines.append(f"exact density: {report.exact}")
    else:
        lines.append("exact density: not closed form")
    for n, avg in report.window_averages:
        lines.append(f"  window [-{n}, {n}]: {avg} ~ {float(avg):.6f}")
    _emit(args, payload, lines)
    return 0


def cmd_cone(args) -> int:
    seq = _descriptor(args.descriptor)
    s = _scaling(args.scaling, args.c)
    candidate = _descriptor(args.candidate) if args.candidate else None
    res = cone(seq, s, args.window, _horizon_default(args), candidate=candidate)
    payload = cone_result_to_json(res)
    lines = [f"cone window [-{res.window}, {res.window}] identified={res.identified}",
             "bits: " + "".join(str(res.values[k]) for k in range(-res.window, res.window + 1))]
    _emit(args, payload, lines)
    return 0


def cmd_iterate(args) -> int:
    seq = _descriptor(args.descriptor)
    s = _scaling(args.scaling, args.c)
    res = iterate_cone(seq, s, args.depth, args.window, _horizon_default(args))
    payload = cone_result_to_json(res)
    payload["depth"] = args.depth
    lines = [f"cone^{args.depth} identified={res.identified}",
             "bits: " + "".join(str(res.values[k]) for k in range(-res.window, res.window + 1))]
    _emit(args, payload, lines)
    return 0


def cmd_compose_check(args) -> int:
    seq = _descriptor(args.descriptor)
    s = _scaling(args.scaling, args.c)
    s2 = _scaling(args.scaling2, args.c) if args.scaling2 else s
    ok = composition_check(seq, s, s2, args.window, _horizon_default(args))
    _emit(args, {"composition": ok}, [f"composition check: {'pass' if ok else 'FAIL'}"])
    return 0 if ok else 1


def cmd_construct(args) -> int:
    s = default_schedule(args.c)
    extra = {}
    if args.family == "infmany":
        family = build_infmany(s, args.levels)
    elif args.family == "periodic":
        family = build_periodic(args.m, s)
    elif args.family == "varying":
        assignment = [int(x) for x in args.assignment.split(",")]
        family, scalings = build_varying(assignment, window=args.window or 5,
                                         search_limit=args.search_limit)
        extra["scalings"] = [scaling_to_json(sc) for sc in scalings]
    elif args.family == "transfinite":
        family = build_transfinite(args.k, s, levels=args.levels or 48)
    else:
        family, scheme = build_onlycount(args.levels or 72)
        extra["scheme_check"] = scheme.check_implications(12)
    payload = {"family": family_to_json(family), **extra}
    lines = [f"constructed {args.family} family"]

    code = 0
    if args.verify and args.family == "periodic":
        window = args.window or 50
        res = iterate_cone(family.member(0), s, args.m, window)
        same = all(res.values[k] == evaluate(family.member(0), k)
                   for k in range(-window, window + 1))
        payload["iterate_identity"] = same
        lines.append(f"cone^{args.m} = member 0 on [-{window}, {window}]: "
                     + ("pass" if same else "FAIL"))
        code = 0 if same else 1
    elif args.verify and args.family == "infmany":
        window = args.window or 50
        res = cone(family.member(0), s, window)
        same = res.identified and res.sequence == family.member(1)
        payload["cone_step"] = same
        lines.append(f"cone(member 0) = member 1 on [-{window}, {window}]: "
                     + ("pass" if same else "FAIL"))
        code = 0 if same else 1
    _emit(args, payload, lines)
    return code


def cmd_find_scaling(args) -> int:
    target = _descriptor(args.target)
    source = _descriptor(args.source) if args.source else Rich()
    s = find_scaling_for_density(source, target, args.terms, args.search_limit)
    _emit(args, {"scaling": scaling_to_json(s)},
          [f"exponents: {list(s.exponents)}"])
    return 0


def cmd_classify(args) -> int:
    family, scheme = build_onlycount(args.levels)
    samples = sample_classification_scalings(args.count, args.seed,
                                             args.horizon, scheme, family.levels)
    member = family.member(0)
    outcomes = []
    unclassified = 0
    for idx, sc in enumerate(samples):
        res = cone(member, sc, args.window, args.horizon)
        cls = classify_cone(res, family, scheme)
        if isinstance(cls, Unclassified):
            unclassified += 1
            outcomes.append({"sample": idx, "class": "unclassified"})
        elif hasattr(cls, "divisor_index"):
            outcomes.append({"sample": idx, "class": "class2",
                             "divisor_index": cls.divisor_index, "cut": cls.cut})
        else:
            outcomes.append({"sample": idx, "class": "class1"})
    lines = [f"sample {o['sample']}: {o['class']}" for o in outcomes]
    lines.append(f"unclassified: {unclassified}")
    _emit(args, {"outcomes": outcomes, "unclassified": unclassified}, lines)
    return 0 if unclassified == 0 else 1


def cmd_shift_equiv(args) -> int:
    a = _descriptor(args.a)
    b = _descriptor(args.b)
    res = shift_equivalent(a, b, args.max_shift, args.horizon)
    if isinstance(res, NotEquivalentUpTo):
        _emit(args, {"equivalent": False, "horizon": res.horizon},
              [f"not shift-equivalent up to horizon {res.horizon}"])
        return 0 if not args.expect_equivalent else 1
    _emit(args, {"equivalent": True, "shift": res}, [f"shift: {res}"])
    return 0


def cmd_render(args) -> int:
    seq = _descriptor(args.descriptor)
    w = build_window(seq, args.kmin, args.kmax, args.resolution)
    if args.format == "json":
        _emit(args, metric_window_to_json(w), [])
        return 0
    svg = render_svg(w)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(svg + "\n")
    else:
        print(svg)
    return 0


def cmd_verify(args) -> int:
    report = verifysuite.run(fast=args.fast)
    print(report.text)
    return 0 if report.ok else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bullseye",
        description="Bullseye-space sequence calculus: densities, cones, constructions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, horizon=True, fmt=True):
        if horizon:
            p.add_argument("--horizon", type=int, default=None)
        if fmt:
            p.add_argument("--format", choices=("json", "text"), default="text")
        p.add_argument("--output", default=None)

    p = sub.add_parser("density", help="exact density plus window averages")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--windows", default=None, help="comma-separated window radii")
    common(p, horizon=False)
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("cone", help="certified cone window along a scaling")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--scaling", default=None)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--window", type=int, default=50)
    p.add_argument("--candidate", default=None)
    common(p)
    p.set_defaults(func=cmd_cone)

    p = sub.add_parser("iterate", help="iterated cone with identification")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--scaling", default=None)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--window", type=int, default=50)
    common(p)
    p.set_defaults(func=cmd_iterate)

    p = sub.add_parser("compose-check", help="double cone vs product scheme")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--scaling", default=None)
    p.add_argument("--scaling2", default=None)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--window", type=int, default=20)
    common(p)
    p.set_defaults(func=cmd_compose_check)

    p = sub.add_parser("construct", help="build a family")
    p.add_argument("family", choices=("infmany", "periodic", "varying",
                                      "transfinite", "onlycount"))
    p.add_argument("--levels", type=int, default=6)
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--c", type=int, default=2)
    p.add_argument("--assignment", default="0,1,0,2")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--search-limit", type=int, default=1 << 21)
    p.add_argument("--verify", action="store_true")
    common(p, horizon=False)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("find-scaling", help="search a rich sequence for a target window")
    p.add_argument("--target", required=True)
    p.add_argument("--source", default=None, help="defaults to the rich sequence")
    p.add_argument("--terms", type=int, required=True)
    p.add_argument("--search-limit", type=int, default=1 << 20)
    common(p, horizon=False)
    p.set_defaults(func=cmd_find_scaling)

    p = sub.add_parser("classify", help="classify cones of the onlycount family")
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--levels", type=int, default=72)
    p.add_argument("--window", type=int, default=16)
    p.add_argument("--horizon", type=int, default=64)
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("shift-equiv", help="least shift matching two sequences")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--max-shift", type=int, default=100)
    p.add_argument("--horizon", type=int, default=1000)
    p.add_argument("--expect-equivalent", action="store_true")
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_shift_equiv)

    p = sub.add_parser("render", help="SVG or JSON graph of a window")
    p.add_argument("--descriptor", required=True)
    p.add_argument("--kmin", type=int, default=0)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--format", choices=("svg", "json"), default="svg")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("verify", help="run the invariant suite")
    p.add_argument("--fast", action="store_true")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UnstableAt as exc:
        print(f"unstable at index {exc.index}; sample trace: "
              f"{list(exc.trace)[:40]}", file=sys.stderr)
        return 1
    except (UnstableTable, UnidentifiedCone, SearchExhausted, NotClosedForm) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
