"""Independent re-verification of report certificates.

``verify_report`` rebuilds the instance objects from the report's embedded
configuration and re-derives every recorded claim: witness radii are
recomputed from the instance, interval geometry and the shrink discipline are
re-checked exactly, separations are confirmed on approximants, oscillation
bounds are confirmed against the instance's exact oscillation and a
brute-force grid oracle.  Any tampering with a record flips its verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import instances
from .certificates import parse_records
from .errors import MalformedInstance
from .exact import ExactReal, from_rational, parse_rational
from .gallery import (ClosedNowhereDenseSeq, EnrichedBaire1, brute_force_osc,
                      rational_evaluator)
from .opensets import (DenseOpenSequence, OpenR3, OpenR4,
                       complement_components, r4_to_r2, r4_to_r3_lower_bound)
from .realisers import HeightCountableSet, complement_sequence, merged_enumeration
from .reductions import (delta_exact_distance, dense_exclusion_sequence,
                         forced_irrational_sequence, functions_square_sequence,
                         pair_sequence)
from .sternbrocot import canonical_rational


@dataclass
class VerifyContext:
    """Everything a verdict may need, rebuilt from the embedded instance."""

    seq: Optional[DenseOpenSequence] = None
    closed_seq: Optional[ClosedNowhereDenseSeq] = None
    function: Optional[EnrichedBaire1] = None
    entry_at: Optional[Callable[[int], ExactReal]] = None
    r4: Optional[OpenR4] = None
    r3: Optional[OpenR3] = None
    height_set: Optional[HeightCountableSet] = None
    expected_points: Optional[list[Fraction]] = None
    precision_index: Optional[int] = None
    canonical_targets: bool = False


def build_context(config: dict) -> VerifyContext:
    sub = config.get("subcommand")
    inst = config.get("instance")
    ctx = VerifyContext()
    if sub == "bct":
        ctx.seq = instances.parse_sequence(inst)
    elif sub == "continuity-point":
        f = instances.parse_function(inst)
        ctx.function = f
        ctx.seq = DenseOpenSequence(set_at=f.complement_of_Dk, label=f.name)
    elif sub == "volterra":
        f = instances.parse_function(inst)
        ctx.function = f
        ctx.seq = forced_irrational_sequence(f)
        ctx.canonical_targets = True
    elif sub == "pair":
        f = instances.parse_function(inst.get("f", {}))
        g = instances.parse_function(inst.get("g", {}))
        ctx.function = f
        ctx.seq = pair_sequence(f, g)
    elif sub == "sequence":
        specs = inst.get("functions")
        if not isinstance(specs, list) or not specs:
            raise MalformedInstance("function-sequence needs a functions list")
        members = [instances.parse_function(s) for s in specs]
        ctx.seq = functions_square_sequence(lambda n: members[n % len(members)])
    elif sub == "minmax-to-baire" or sub == "baire-from-continuity":
        closed = instances.parse_closed_seq(inst)
        ctx.closed_seq = closed
        from .gallery import make_h
        f = make_h(closed)
        ctx.function = f
        # a conforming oracle's own trace runs over the level complements
        ctx.seq = DenseOpenSequence(set_at=f.complement_of_Dk, label=f.name)
    elif sub == "countable-dense":
        dense = instances.parse_dense_set(inst.get("dense", ""))
        f = instances.parse_function(inst.get("function", {}))
        ctx.function = f
        ctx.seq = dense_exclusion_sequence(dense, f)
    elif sub == "strong-cantor":
        a = instances.parse_height_set(inst)
        ctx.height_set = a
        if config.get("route") == "via_enumeration":
            entry = merged_enumeration(a)
            ctx.entry_at = lambda n: from_rational(entry(n))
        else:
            ctx.seq = complement_sequence(a)
    elif sub == "omega-fin":
        pts = instances.parse_finite_set(inst)
        ctx.expected_points = pts
        if config.get("via") == "pipeline":
            from .gallery import finite_indicator
            f = finite_indicator(pts)
            ctx.function = f
            ctx.r3 = delta_exact_distance(f.complement_of_Dk(0))
            from .opensets import r3_to_r4
            ctx.r4 = r3_to_r4(ctx.r3)
            ctx.precision_index = config.get("precision")
    elif sub == "convert":
        if inst.get("kind") == "complement-of-finite":
            from .opensets import finite_complement_r2
            o2 = finite_complement_r2([parse_rational(p) for p in inst.get("points", [])])
            ctx.r3 = delta_exact_distance(o2)
        else:
            r4 = instances.parse_r4(inst)
            ctx.r4 = r4
            ctx.r3 = OpenR3(lambda x, m: r4_to_r3_lower_bound(r4, x, m))
    elif sub == "enumerate-closed":
        ctx.r4 = instances.parse_r4(inst)
        ctx.precision_index = config.get("precision")
    else:
        raise MalformedInstance(f"cannot verify subcommand {sub!r}")
    return ctx


def _ok(index: int, kind: str, detail: str = "") -> dict:
    return {"record": index, "kind": kind, "ok": True, "detail": detail}


def _fail(index: int, kind: str, detail: str) -> dict:
    return {"record": index, "kind": kind, "ok": False, "detail": detail}


def _pow2(k: int) -> Fraction:
    return Fraction(1, 2 ** k)


def _verify_stage(i: int, rec: dict, ctx: VerifyContext, stage_intervals: dict) -> dict:
    if ctx.seq is None:
        return _fail(i, "stage", "no sequence context")
    n = rec["n"]
    parent = stage_intervals.get(n - 1, (Fraction(0), Fraction(1)))
    if n > 0 and (n - 1) not in stage_intervals:
        return _fail(i, "stage", f"stage {n} has no recorded parent")
    plo, phi = parent
    raw = ctx.seq.set_at(rec["set_index"]).witness(rec["center"], rec["probe_precision"])
    clipped = min(raw, rec["center"] - plo, phi - rec["center"])
    if rec["witness_radius"] > clipped:
        return _fail(i, "stage", f"recorded witness radius exceeds recomputed {clipped}")
    expected_radius = min(rec["witness_radius"] / 2, _pow2(n + 1))
    if rec["radius"] != expected_radius:
        return _fail(i, "stage", "radius breaks the shrink discipline")
    if rec["lo"] != rec["center"] - rec["radius"] or rec["hi"] != rec["center"] + rec["radius"]:
        return _fail(i, "stage", "interval endpoints inconsistent with center and radius")
    if rec["lo"] < plo or rec["hi"] > phi:
        return _fail(i, "stage", "interval escapes its parent")
    stage_intervals[n] = (rec["lo"], rec["hi"])
    return _ok(i, "stage")


def _verify_separation(i: int, rec: dict, ctx: VerifyContext, stage_intervals: dict) -> dict:
    m = rec["precision"]
    target = rec["target"]
    if ctx.canonical_targets and rec.get("target_index") is not None:
        if canonical_rational(rec["target_index"]) != target:
            return _fail(i, "separation", "target is not the claimed canonical rational")
    if ctx.entry_at is not None and rec.get("target_index") is not None:
        entry = ctx.entry_at(rec["target_index"]).approx(m)
        if abs(entry - target) > _pow2(m):
            return _fail(i, "separation", "target differs from the enumerated entry")
    elif ctx.height_set is not None and rec.get("stage") is not None:
        if target not in set(ctx.height_set.slice_at(rec["stage"])):
            return _fail(i, "separation", "target missing from the claimed slice")
    gap = abs(rec["value_approx"] - target)
    if not gap > 2 * _pow2(m):
        return _fail(i, "separation", f"approximants too close: gap {gap}")
    if gap + _pow2(m) < rec["radius"]:
        return _fail(i, "separation", "claimed radius exceeds what approximants support")
    stage = rec.get("stage")
    if stage is not None and stage in stage_intervals:
        lo, hi = stage_intervals[stage]
        if not (lo - _pow2(m) <= rec["value_approx"] <= hi + _pow2(m)):
            return _fail(i, "separation", "value approximation escapes its stage interval")
    return _ok(i, "separation")


def _verify_avoid_stage(i: int, rec: dict, ctx: VerifyContext, avoid_intervals: dict) -> dict:
    if ctx.entry_at is None:
        return _fail(i, "avoid-stage", "no enumeration context")
    n = rec["n"]
    plo, phi = avoid_intervals.get(n - 1, (Fraction(0), Fraction(1)))
    if n > 0 and (n - 1) not in avoid_intervals:
        return _fail(i, "avoid-stage", f"stage {n} has no recorded parent")
    k = rec["ball_precision"]
    if ctx.entry_at(n).approx(k) != rec["ball_center"]:
        return _fail(i, "avoid-stage", "ball center differs from the enumerated entry")
    if rec["hi"] - rec["lo"] != (phi - plo) / 3:
        return _fail(i, "avoid-stage", "kept interval is not a third of its parent")
    if rec["lo"] < plo or rec["hi"] > phi:
        return _fail(i, "avoid-stage", "kept interval escapes its parent")
    rho = _pow2(k)
    ball_lo, ball_hi = rec["ball_center"] - rho, rec["ball_center"] + rho
    gap = max(rec["lo"] - ball_hi, ball_lo - rec["hi"])
    if gap != rec["separation"] or gap <= 0:
        return _fail(i, "avoid-stage", f"separation mismatch: recomputed {gap}")
    avoid_intervals[n] = (rec["lo"], rec["hi"])
    return _ok(i, "avoid-stage")


def _verify_ball(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.closed_seq is None:
        return _fail(i, "ball-in-set", "no closed-sequence context")
    witness = ctx.closed_seq.complement_r2(rec["set_index"])
    r = witness.witness(rec["probe"], rec["probe_precision"])
    if r < rec["radius"]:
        return _fail(i, "ball-in-set", f"recomputed witness {r} below recorded radius")
    if rec["radius"] <= 0:
        return _fail(i, "ball-in-set", "radius not positive")
    if not rec.get("exact") and rec["radius"] <= _pow2(rec["probe_precision"]):
        return _fail(i, "ball-in-set",
                     "radius does not dominate the probe approximation error")
    return _ok(i, "ball-in-set")


def _verify_level(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.closed_seq is None or ctx.closed_seq.membership_level is None:
        return _fail(i, "membership-level", "no membership hook to check against")
    level = ctx.closed_seq.membership_level(rec["q"])
    if level != rec["level"]:
        return _fail(i, "membership-level", f"hook answers {level}")
    return _ok(i, "membership-level")


def _verify_osc_bound(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.function is None:
        return _fail(i, "osc-lower-bound", "no function context")
    bound = _pow2(rec["precision"])
    exact = ctx.function.osc_at_rational(rec["q"]).exact_rational
    if exact is not None and exact < bound:
        return _fail(i, "osc-lower-bound",
                     f"exact oscillation {exact} below claimed bound {bound}")
    brute = brute_force_osc(rational_evaluator(ctx.function), rec["q"], 10, 20)
    if brute + _pow2(9) < bound:
        return _fail(i, "osc-lower-bound",
                     f"grid oracle {brute} cannot support bound {bound}")
    return _ok(i, "osc-lower-bound")


def _verify_osc_zero(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.function is None:
        return _fail(i, "osc-zero", "no function context")
    if ctx.function.osc_zero_decision is None:
        return _fail(i, "osc-zero", "instance has no oscillation-zero hook")
    if not ctx.function.osc_zero_decision(rec["q"]):
        return _fail(i, "osc-zero", "hook denies zero oscillation")
    ev = rational_evaluator(ctx.function)
    for window in (10, 14, 18, 22):
        if brute_force_osc(ev, rec["q"], window, window + 10) <= _pow2(8):
            return _ok(i, "osc-zero")
    return _fail(i, "osc-zero", "grid oracle keeps seeing a jump nearby")


def _verify_component(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.r4 is None:
        return _fail(i, "component", "no interval-union context")
    comps = complement_components(ctx.r4.stage(rec["stage"]))
    if (rec["lo"], rec["hi"]) not in comps:
        return _fail(i, "component", "not a complement component at the recorded stage")
    if ctx.precision_index is not None and rec["hi"] - rec["lo"] > _pow2(ctx.precision_index):
        return _fail(i, "component", "component wider than the requested precision")
    return _ok(i, "component")


def _verify_witness(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.r4 is None:
        return _fail(i, "witness", "no interval-union context")
    r = r4_to_r2(ctx.r4).witness(rec["probe"], rec["precision"])
    if r != rec["radius"]:
        return _fail(i, "witness", f"recomputed radius {r}")
    return _ok(i, "witness")


def _verify_lower_bound(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.r4 is None:
        return _fail(i, "lower-bound", "no interval-union context")
    v = r4_to_r3_lower_bound(ctx.r4, rec["probe"], rec["stage"])
    if v != rec["value"]:
        return _fail(i, "lower-bound", f"recomputed bound {v}")
    return _ok(i, "lower-bound")


def _verify_emission(i: int, rec: dict, ctx: VerifyContext) -> dict:
    if ctx.r3 is None:
        return _fail(i, "emission", "no distance context")
    from .opensets import diagonal_pair
    probe_index, stage = diagonal_pair(rec["index"])
    if canonical_rational(probe_index) != rec["probe"] or stage != rec["stage"]:
        return _fail(i, "emission", "probe/stage inconsistent with the attempt index")
    lb = ctx.r3.lower_bound(rec["probe"], rec["stage"])
    if lb <= 0:
        return _fail(i, "emission", "recomputed bound not positive")
    if rec["lo"] != rec["probe"] - lb or rec["hi"] != rec["probe"] + lb:
        return _fail(i, "emission", "endpoints inconsistent with recomputed bound")
    return _ok(i, "emission")


def _verify_point(i: int, rec: dict, ctx: VerifyContext) -> dict:
    tol = _pow2(rec["precision"])
    if rec.get("element") is not None:
        if abs(rec["value_approx"] - rec["element"]) > tol:
            return _fail(i, "point", "approximation too far from the named element")
        if ctx.expected_points is not None and rec["element"] not in set(ctx.expected_points):
            return _fail(i, "point", "named element is not in the instance")
        return _ok(i, "point")
    if ctx.expected_points is not None:
        near = [p for p in ctx.expected_points if abs(rec["value_approx"] - p) <= tol]
        if len(near) != 1:
            return _fail(i, "point",
                         f"approximation close to {len(near)} instance points, expected 1")
        return _ok(i, "point")
    return _ok(i, "point", "no instance points to compare against")


_VERIFIERS = {
    "ball-in-set": _verify_ball,
    "membership-level": _verify_level,
    "osc-lower-bound": _verify_osc_bound,
    "osc-zero": _verify_osc_zero,
    "component": _verify_component,
    "witness": _verify_witness,
    "lower-bound": _verify_lower_bound,
    "emission": _verify_emission,
    "point": _verify_point,
}


def verify_records(records: list[dict], ctx: VerifyContext) -> list[dict]:
    verdicts = []
    stage_intervals: dict[int, tuple] = {}
    avoid_intervals: dict[int, tuple] = {}
    for i, rec in enumerate(records):
        kind = rec.get("kind", "?")
        try:
            if kind == "stage":
                verdicts.append(_verify_stage(i, rec, ctx, stage_intervals))
            elif kind == "separation":
                verdicts.append(_verify_separation(i, rec, ctx, stage_intervals))
            elif kind == "avoid-stage":
                verdicts.append(_verify_avoid_stage(i, rec, ctx, avoid_intervals))
            elif kind in _VERIFIERS:
                verdicts.append(_VERIFIERS[kind](i, rec, ctx))
            else:
                verdicts.append(_fail(i, kind, f"unknown record kind"))
        except Exception as exc:  # a malformed record must yield a verdict, not a crash
            verdicts.append(_fail(i, kind, f"verification error: {exc}"))
    return verdicts


def verify_report(report: dict) -> list[dict]:
    """Re-validate every certificate of a report against raw instance data."""
    config = report.get("config")
    if not isinstance(config, dict):
        raise MalformedInstance("report carries no configuration")
    ctx = build_context(config)
    records = parse_records(report.get("records", []))
    return verify_records(records, ctx)
