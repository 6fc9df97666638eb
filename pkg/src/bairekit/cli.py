"""Batch front door: run realisers and reductions on instance files, emit
answers with certificate logs, and re-verify reports.

Exit status: 0 for a certified answer, 2 when a search budget is exhausted,
3 for a malformed or inadequate instance, 4 when certification fails (or a
verified report contains a failing record).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import instances
from .certificates import (component_record, emission_record, lower_bound_record,
                           point_record, serialize_records, stage_record,
                           witness_record)
from .errors import (BudgetExhausted, CertificateFailure, DeltaHookUnavailable,
                     InjectivityViolation, MalformedInstance,
                     NeedsMembershipDecision, NeedsOscZeroDecision)
from .exact import format_rational, parse_rational
from .gallery import finite_indicator
from .opensets import diagonal_pair, r4_to_r2, r4_to_r3_lower_bound
from .realisers import bct_realiser, enumerate_finite_closed, omega_fin, strong_cantor_realiser
from .reductions import (ApartFromRationals, DenseAvoidingContinuity,
                         DenseDiscontinuity, IrrationalContinuity,
                         RationalDiscontinuity, RationalLiteral,
                         baire_from_minmax, builtin_baire_oracle,
                         common_continuity_point, continuity_point_from_baire,
                         countable_dense_volterra, honest_minmax_oracle,
                         pair_reduction, recover_indicator_support,
                         strong_cantor_records, stub_constant_minmax_oracle,
                         volterra_from_baire)
from .sternbrocot import canonical_rational
from .verify import verify_report

DEFAULT_DEPTH = 16
DEFAULT_PRECISION = 32
DEFAULT_BUDGET = int(os.environ.get("BAIREKIT_BUDGET", "100000"))


def _load_instance(args) -> dict:
    if getattr(args, "instance", None):
        try:
            with open(args.instance) as fh:
                spec = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise MalformedInstance(f"cannot read instance file: {exc}") from exc
        if not isinstance(spec, dict):
            raise MalformedInstance("instance file must hold a JSON object")
        return spec
    if getattr(args, "generator", None):
        params = {}
        if getattr(args, "points", None):
            params["points"] = [p.strip() for p in args.points.split(",") if p.strip()]
        return {"kind": "generator", "name": args.generator, "params": params}
    raise MalformedInstance("provide --instance FILE or --generator NAME")


def _tag_answer(tag) -> dict:
    if tag is None:
        return {"tag": "none"}
    if isinstance(tag, RationalLiteral):
        return {"tag": "rational", "q": format_rational(tag.q)}
    if isinstance(tag, ApartFromRationals):
        return {"tag": "apart-from-rationals"}
    return {"tag": "unknown"}


def _point_answer(kind: str, value, precision: int, tag=None) -> dict:
    answer = {"kind": kind,
              "value_approx": format_rational(value.approx(precision)),
              "precision": precision}
    if tag is not None or kind == "tagged-point":
        answer.update(_tag_answer(tag))
    return answer


def _run_bct(inst: dict, cfg: dict):
    seq = instances.parse_sequence(inst)
    point = bct_realiser(seq, depth=cfg["depth"], budget=cfg["budget"])
    records = [stage_record(s) for s in point.stages(cfg["depth"])]
    return _point_answer("baire-point", point.value, cfg["precision"]), records


def _run_continuity_point(inst: dict, cfg: dict):
    f = instances.parse_function(inst)
    oracle = builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"])
    pt = continuity_point_from_baire(f, oracle, depth=cfg["depth"])
    return _point_answer("tagged-point", pt.value, cfg["precision"], pt.tag), pt.records


def _run_volterra(inst: dict, cfg: dict):
    f = instances.parse_function(inst)
    oracle = builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"])
    answer = volterra_from_baire(f, oracle, mode=cfg["mode"], depth=cfg["depth"])
    if isinstance(answer, RationalDiscontinuity):
        return ({"kind": "rational-discontinuity", "q": format_rational(answer.q),
                 "osc_precision": answer.precision}, answer.records)
    out = _point_answer("irrational-continuity", answer.point.value,
                        cfg["precision"], answer.point.tag)
    return out, answer.records


def _run_pair(inst: dict, cfg: dict):
    f = instances.parse_function(inst.get("f", {}))
    g = instances.parse_function(inst.get("g", {}))
    oracle = builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"])
    pt = pair_reduction(f, g, oracle, depth=cfg["depth"])
    return _point_answer("tagged-point", pt.value, cfg["precision"], pt.tag), pt.records


def _run_sequence(inst: dict, cfg: dict):
    specs = inst.get("functions")
    if not isinstance(specs, list) or not specs:
        raise MalformedInstance("function-sequence needs a functions list")
    members = [instances.parse_function(s) for s in specs]
    oracle = builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"])
    pt = common_continuity_point(lambda n: members[n % len(members)], oracle,
                                 depth=cfg["depth"])
    return _point_answer("tagged-point", pt.value, cfg["precision"], pt.tag), pt.records


def _run_minmax(inst: dict, cfg: dict):
    seq = instances.parse_closed_seq(inst)
    selector = cfg["oracle"]
    if selector == "builtin":
        oracle = honest_minmax_oracle(
            builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"]),
            depth=cfg["depth"])
    elif selector.startswith("literal:"):
        oracle = stub_constant_minmax_oracle(parse_rational(selector.split(":", 1)[1]))
    else:
        raise MalformedInstance(f"unknown oracle selector {selector!r}")
    result = baire_from_minmax(seq, oracle, depth=cfg["depth"])
    return _point_answer("real", result.value, cfg["precision"]), result.records


def _run_countable_dense(inst: dict, cfg: dict):
    dense = instances.parse_dense_set(inst.get("dense", ""))
    f = instances.parse_function(inst.get("function", {}))
    oracle = builtin_baire_oracle(depth=cfg["depth"], budget=cfg["budget"])
    answer = countable_dense_volterra(dense, f, oracle, mode=cfg["mode"],
                                      depth=cfg["depth"])
    if isinstance(answer, DenseDiscontinuity):
        return ({"kind": "dense-discontinuity", "index": answer.index,
                 "element": format_rational(answer.element),
                 "osc_precision": answer.precision}, answer.records)
    assert isinstance(answer, DenseAvoidingContinuity)
    out = _point_answer("dense-avoiding-continuity", answer.point.value,
                        cfg["precision"], answer.point.tag)
    return out, answer.records


def _run_strong_cantor(inst: dict, cfg: dict):
    a = instances.parse_height_set(inst)
    result = strong_cantor_realiser(a, route=cfg["route"], depth=cfg["depth"],
                                    budget=cfg["budget"])
    records = strong_cantor_records(result, a, slice_depth=cfg["slice_depth"],
                                    stage_depth=cfg["depth"])
    answer = _point_answer("real", result.value, cfg["precision"])
    answer["route"] = result.route
    return answer, records


def _run_omega_fin(inst: dict, cfg: dict):
    points = instances.parse_finite_set(inst)
    if cfg["via"] == "direct":
        reals = omega_fin(points)
        records = [point_record(r.exact_rational, cfg["precision"], element=r.exact_rational)
                   for r in reals]
        return ({"kind": "enumeration",
                 "points": [format_rational(r.exact_rational) for r in reals]},
                records)
    f = finite_indicator(points)
    bound = cfg["bound"] if cfg["bound"] is not None else len(set(points))
    enum = recover_indicator_support(f, bound=bound, precision_index=cfg["precision"])
    records = [component_record(i, c.lo, c.hi, c.stage)
               for i, c in enumerate(enum.components)]
    approxes = [p.approx(cfg["precision"]) for p in enum.points]
    records += [point_record(v, cfg["precision"]) for v in approxes]
    return ({"kind": "enumeration",
             "points": [format_rational(v) for v in approxes],
             "precision": cfg["precision"]},
            records)


def _run_convert(inst: dict, cfg: dict):
    direction = cfg["direction"]
    if direction == "r4-to-r2":
        r4 = instances.parse_r4(inst)
        probe = parse_rational(cfg["probe"])
        radius = r4_to_r2(r4).witness(probe, cfg["stage"])
        return ({"kind": "witness", "probe": format_rational(probe),
                 "radius": format_rational(radius)},
                [witness_record(probe, cfg["stage"], radius)])
    if direction == "r4-to-r3":
        r4 = instances.parse_r4(inst)
        probe = parse_rational(cfg["probe"])
        value = r4_to_r3_lower_bound(r4, probe, cfg["stage"])
        return ({"kind": "lower-bound", "probe": format_rational(probe),
                 "value": format_rational(value)},
                [lower_bound_record(probe, cfg["stage"], value)])
    if direction == "r3-to-r4":
        if inst.get("kind") == "complement-of-finite":
            from .opensets import finite_complement_r2
            from .reductions import delta_exact_distance
            r3 = delta_exact_distance(finite_complement_r2(
                [parse_rational(p) for p in inst.get("points", [])]))
        else:
            r4 = instances.parse_r4(inst)
            from .opensets import OpenR3
            r3 = OpenR3(lambda x, m: r4_to_r3_lower_bound(r4, x, m))
        records = []
        for t in range(cfg["stage"]):
            i, m = diagonal_pair(t)
            q = canonical_rational(i)
            lb = r3.lower_bound(q, m)
            if lb > 0:
                records.append(emission_record(t, q, m, q - lb, q + lb))
        return ({"kind": "emissions", "count": len(records)}, records)
    raise MalformedInstance(f"unknown conversion {direction!r}")


def _run_enumerate_closed(inst: dict, cfg: dict):
    r4 = instances.parse_r4(inst)
    bound = cfg["bound"] if cfg["bound"] is not None else 0
    enum = enumerate_finite_closed(r4, bound=bound, precision_index=cfg["precision"])
    records = [component_record(i, c.lo, c.hi, c.stage)
               for i, c in enumerate(enum.components)]
    approxes = [p.approx(cfg["precision"]) for p in enum.points]
    records += [point_record(v, cfg["precision"]) for v in approxes]
    return ({"kind": "enumeration",
             "points": [format_rational(v) for v in approxes],
             "precision": cfg["precision"]},
            records)


_RUNNERS = {
    "bct": _run_bct,
    "continuity-point": _run_continuity_point,
    "volterra": _run_volterra,
    "pair": _run_pair,
    "sequence": _run_sequence,
    "minmax-to-baire": _run_minmax,
    "countable-dense": _run_countable_dense,
    "strong-cantor": _run_strong_cantor,
    "omega-fin": _run_omega_fin,
    "convert": _run_convert,
    "enumerate-closed": _run_enumerate_closed,
}


def run_config(config: dict) -> dict:
    """Execute one resolved configuration and assemble its report."""
    runner = _RUNNERS.get(config["subcommand"])
    if runner is None:
        raise MalformedInstance(f"unknown subcommand {config['subcommand']!r}")
    answer, records = runner(config["instance"], config)
    return {"config": config, "answer": answer, "records": serialize_records(records)}


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, separators=(",", ":"))
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text)
            fh.write("\n")
    if getattr(args, "format", "human") == "records":
        print(json.dumps({"answer": report["answer"]}, sort_keys=True))
        for rec in report["records"]:
            print(json.dumps(rec, sort_keys=True))
        return
    answer = report["answer"]
    print(f"answer: {json.dumps(answer, sort_keys=True)}")
    va = answer.get("value_approx")
    if va is not None:
        print(f"decimal: {float(Fraction(va)):.12g}")
    print(f"records: {len(report['records'])} certificate(s)")


def _config_from_args(args) -> dict:
    cfg = {
        "subcommand": args.subcommand,
        "instance": _load_instance(args),
        "depth": getattr(args, "depth", DEFAULT_DEPTH),
        "budget": getattr(args, "budget", DEFAULT_BUDGET),
        "precision": getattr(args, "precision", DEFAULT_PRECISION),
    }
    for key in ("mode", "route", "via", "oracle", "bound", "slice_depth",
                "direction", "probe", "stage"):
        if hasattr(args, key):
            cfg[key] = getattr(args, key)
    return cfg


def _verdict_lines(verdicts) -> bool:
    all_ok = True
    for v in verdicts:
        status = "pass" if v["ok"] else "FAIL"
        detail = f" ({v['detail']})" if v["detail"] else ""
        print(f"record {v['record']:>3} {v['kind']:<18} {status}{detail}")
        all_ok = all_ok and v["ok"]
    return all_ok


SUITE: list[tuple[str, dict]] = [
    ("bct-avoid-all-rationals", {
        "subcommand": "bct", "depth": 32,
        "instance": {"kind": "generator", "name": "avoid-all-rationals", "params": {}}}),
    ("bct-dyadic-complements", {
        "subcommand": "bct", "depth": 32,
        "instance": {"kind": "generator", "name": "h-dyadic", "params": {}}}),
    ("bct-thomae-complements", {
        "subcommand": "bct", "depth": 32,
        "instance": {"kind": "generator", "name": "thomae", "params": {}}}),
    ("bct-two-set-cycle", {
        "subcommand": "bct", "depth": 32,
        "instance": {"kind": "sequence", "sets": [
            {"kind": "complement-of-finite", "points": ["1/3", "2/3"]},
            {"kind": "r4", "intervals": [["0", "1/2"], ["1/2", "1"]]}]}}),
    ("bct-full-interval", {
        "subcommand": "bct", "depth": 32,
        "instance": {"kind": "sequence", "sets": [
            {"kind": "r4", "intervals": [["0", "1"]]}]}}),
    ("volterra-dovetail-thomae", {
        "subcommand": "volterra", "mode": "dovetail", "depth": 16,
        "instance": {"kind": "generator", "name": "thomae", "params": {}}}),
    ("volterra-forced-thomae", {
        "subcommand": "volterra", "mode": "force_irrational", "depth": 16,
        "instance": {"kind": "generator", "name": "thomae", "params": {}}}),
    ("continuity-point-h-dyadic", {
        "subcommand": "continuity-point", "depth": 16,
        "instance": {"kind": "generator", "name": "h-dyadic", "params": {}}}),
    ("pair-thomae-indicator", {
        "subcommand": "pair", "depth": 12,
        "instance": {"kind": "pair",
                     "f": {"kind": "generator", "name": "thomae", "params": {}},
                     "g": {"kind": "generator", "name": "finite-indicator",
                           "params": {"points": ["1/3"]}}}}),
    ("sequence-of-indicators", {
        "subcommand": "sequence", "depth": 10,
        "instance": {"kind": "function-sequence", "functions": [
            {"kind": "generator", "name": "finite-indicator", "params": {"points": ["1/2"]}},
            {"kind": "generator", "name": "finite-indicator",
             "params": {"points": ["1/4", "3/4"]}}]}}),
    ("minmax-to-baire-dyadic", {
        "subcommand": "minmax-to-baire", "depth": 12, "oracle": "builtin",
        "instance": {"kind": "generator", "name": "h-dyadic", "params": {}}}),
    ("countable-dense-thomae-dovetail", {
        "subcommand": "countable-dense", "mode": "dovetail", "depth": 16,
        "instance": {"kind": "countable-dense", "dense": "dyadics",
                     "function": {"kind": "generator", "name": "thomae", "params": {}}}}),
    ("countable-dense-constant-avoidance", {
        "subcommand": "countable-dense", "mode": "avoidance", "depth": 16,
        "instance": {"kind": "countable-dense", "dense": "dyadics",
                     "function": {"kind": "generator", "name": "finite-indicator",
                                  "params": {"points": []}}}}),
    ("strong-cantor-via-baire", {
        "subcommand": "strong-cantor", "route": "via_baire", "depth": 32,
        "slice_depth": 20,
        "instance": {"kind": "generator", "name": "height-denominator", "params": {}}}),
    ("strong-cantor-via-enumeration", {
        "subcommand": "strong-cantor", "route": "via_enumeration", "depth": 32,
        "slice_depth": 20,
        "instance": {"kind": "generator", "name": "height-denominator", "params": {}}}),
    ("omega-fin-pipeline", {
        "subcommand": "omega-fin", "via": "pipeline", "precision": 8, "bound": None,
        "instance": {"kind": "finite-set", "points": ["1/3", "2/3"]}}),
    ("enumerate-closed-three-points", {
        "subcommand": "enumerate-closed", "bound": 3, "precision": 10,
        "instance": {"kind": "r4", "intervals": [["0", "1/2"], ["1/2", "1"]]}}),
    ("convert-r3-to-r4", {
        "subcommand": "convert", "direction": "r3-to-r4", "stage": 24,
        "instance": {"kind": "r4", "intervals": [["1/4", "3/4"]]}}),
]


def _run_suite(args) -> int:
    failures = 0
    for name, base in SUITE:
        config = {"depth": DEFAULT_DEPTH, "budget": DEFAULT_BUDGET,
                  "precision": DEFAULT_PRECISION, **base}
        try:
            report = run_config(config)
            verdicts = verify_report(report)
            bad = [v for v in verdicts if not v["ok"]]
            if bad:
                failures += 1
                print(f"{name:<40} FAIL ({len(bad)} bad certificate(s))")
            else:
                print(f"{name:<40} pass ({len(verdicts)} certificate(s))")
        except Exception as exc:
            failures += 1
            print(f"{name:<40} ERROR {type(exc).__name__}: {exc}")
    print(f"suite: {len(SUITE) - failures}/{len(SUITE)} configurations certified")
    return 0 if failures == 0 else 4


def _add_common(parser, depth=DEFAULT_DEPTH):
    parser.add_argument("--instance", help="path to an instance JSON file")
    parser.add_argument("--generator", help="named instance generator")
    parser.add_argument("--points", help="comma-separated rationals for generators")
    parser.add_argument("--depth", type=int, default=depth)
    parser.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    parser.add_argument("--precision", type=int, default=DEFAULT_PRECISION)
    parser.add_argument("--out", help="write the full report JSON here")
    parser.add_argument("--format", choices=("human", "records"), default="human")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bairekit",
        description="certified category realisers, oscillation galleries, and reductions")
    subs = parser.add_subparsers(dest="subcommand", required=True)

    _add_common(subs.add_parser("bct", help="nested-interval category realiser"), depth=32)
    _add_common(subs.add_parser("continuity-point", help="continuity point of an enriched function"))
    p = subs.add_parser("volterra", help="rational discontinuity or irrational continuity point")
    _add_common(p)
    p.add_argument("--mode", choices=("dovetail", "force_irrational"), default="dovetail")
    _add_common(subs.add_parser("pair", help="common continuity point of two functions"), depth=12)
    _add_common(subs.add_parser("sequence", help="common continuity point of a function sequence"), depth=12)
    p = subs.add_parser("minmax-to-baire", help="category answer from a min-max-window oracle")
    _add_common(p)
    p.add_argument("--oracle", default="builtin",
                   help="'builtin' or 'literal:p/q' (non-conforming stub)")
    p = subs.add_parser("countable-dense", help="split against a countable dense set")
    _add_common(p)
    p.add_argument("--mode", choices=("avoidance", "dovetail"), default="avoidance")
    p = subs.add_parser("strong-cantor", help="point outside a height-countable set")
    _add_common(p, depth=32)
    p.add_argument("--route", choices=("via_baire", "via_enumeration"), default="via_baire")
    p.add_argument("--slice-depth", dest="slice_depth", type=int, default=20)
    p = subs.add_parser("omega-fin", help="finiteness realiser")
    _add_common(p, depth=8)
    p.add_argument("--via", choices=("direct", "pipeline"), default="direct")
    p.add_argument("--bound", type=int, default=None)
    p = subs.add_parser("convert", help="representation conversions")
    p.add_argument("direction", choices=("r4-to-r2", "r4-to-r3", "r3-to-r4"))
    _add_common(p)
    p.add_argument("--probe", default="1/2", help="rational probe point")
    p.add_argument("--stage", type=int, default=8,
                   help="stage / probe effort / attempt count")
    p = subs.add_parser("enumerate-closed", help="locate the points of a finite closed set")
    _add_common(p, depth=8)
    p.add_argument("--bound", type=int, default=None)
    p = subs.add_parser("verify", help="re-verify a report's certificates")
    p.add_argument("report", help="path to a report JSON written with --out")
    subs.add_parser("suite", help="run and verify the bundled corpus")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.subcommand == "suite":
        return _run_suite(args)
    if args.subcommand == "verify":
        try:
            with open(args.report) as fh:
                report = json.load(fh)
            verdicts = verify_report(report)
        except (OSError, json.JSONDecodeError, MalformedInstance) as exc:
            print(f"cannot verify: {exc}", file=sys.stderr)
            return 3
        return 0 if _verdict_lines(verdicts) else 4
    try:
        report = run_config(_config_from_args(args))
    except BudgetExhausted as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return 2
    except (MalformedInstance, NeedsMembershipDecision, NeedsOscZeroDecision,
            DeltaHookUnavailable, InjectivityViolation) as exc:
        print(f"instance rejected: {exc}", file=sys.stderr)
        return 3
    except CertificateFailure as exc:
        print(f"certification failed: {exc}", file=sys.stderr)
        return 4
    _emit(report, args)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
