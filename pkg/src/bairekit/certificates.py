"""Certificate records: construction, serialization, and re-verification.

Every realiser and reduction emits a list of records, dicts with exact
rational fields, that can be re-checked later against nothing but the raw
instance data.  ``verify_report`` re-derives every claim independently, so a
tampered record (a widened interval, an inflated radius, a strengthened
oscillation bound) fails its verdict.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .exact import format_rational, parse_rational

_FRACTION_FIELDS = {
    "center", "witness_radius", "radius", "lo", "hi", "target", "separation",
    "value_approx", "q", "ball_center", "probe", "value", "element",
}


def stage_record(stage, set_index: Optional[int] = None) -> dict:
    return {
        "kind": "stage",
        "n": stage.index,
        "set_index": stage.index if set_index is None else set_index,
        "center": stage.center,
        "probe_precision": stage.probe_precision,
        "witness_radius": stage.witness_radius,
        "radius": stage.radius,
        "lo": stage.lo,
        "hi": stage.hi,
    }


def separation_record(target: Fraction, radius: Fraction, precision: int,
                      value_approx: Fraction, stage: Optional[int] = None,
                      target_index: Optional[int] = None) -> dict:
    return {
        "kind": "separation",
        "target": target,
        "target_index": target_index,
        "stage": stage,
        "radius": radius,
        "precision": precision,
        "value_approx": value_approx,
    }


def avoid_stage_record(s) -> dict:
    return {
        "kind": "avoid-stage",
        "n": s.index,
        "ball_center": s.ball_center,
        "ball_precision": s.ball_precision,
        "lo": s.lo,
        "hi": s.hi,
        "separation": s.separation,
    }


def ball_record(set_index: int, probe: Fraction, probe_precision: int,
                radius: Fraction, exact: bool) -> dict:
    return {
        "kind": "ball-in-set",
        "set_index": set_index,
        "probe": probe,
        "probe_precision": probe_precision,
        "radius": radius,
        "exact": exact,
    }


def osc_bound_record(q: Fraction, precision: int) -> dict:
    return {"kind": "osc-lower-bound", "q": q, "precision": precision}


def osc_zero_record(q: Fraction) -> dict:
    return {"kind": "osc-zero", "q": q}


def level_record(q: Fraction, level: Optional[int]) -> dict:
    return {"kind": "membership-level", "q": q, "level": level}


def component_record(index: int, lo: Fraction, hi: Fraction, stage: int) -> dict:
    return {"kind": "component", "index": index, "lo": lo, "hi": hi, "stage": stage}


def witness_record(probe: Fraction, precision: int, radius: Fraction) -> dict:
    return {"kind": "witness", "probe": probe, "precision": precision, "radius": radius}


def lower_bound_record(probe: Fraction, stage: int, value: Fraction) -> dict:
    return {"kind": "lower-bound", "probe": probe, "stage": stage, "value": value}


def emission_record(index: int, probe: Fraction, stage: int,
                    lo: Fraction, hi: Fraction) -> dict:
    return {"kind": "emission", "index": index, "probe": probe, "stage": stage,
            "lo": lo, "hi": hi}


def point_record(value_approx: Fraction, precision: int, element: Optional[Fraction] = None) -> dict:
    return {"kind": "point", "value_approx": value_approx, "precision": precision,
            "element": element}


def serialize_record(record: dict) -> dict:
    out = {}
    for key, val in record.items():
        if isinstance(val, Fraction):
            out[key] = format_rational(val)
        else:
            out[key] = val
    return out


def parse_record(record: dict) -> dict:
    out = {}
    for key, val in record.items():
        if key in _FRACTION_FIELDS and isinstance(val, str):
            out[key] = parse_rational(val)
        else:
            out[key] = val
    return out


def serialize_records(records: list[dict]) -> list[dict]:
    return [serialize_record(r) for r in records]


def parse_records(records: list[dict]) -> list[dict]:
    return [parse_record(r) for r in records]
