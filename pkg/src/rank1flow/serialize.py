"""JSON wire formats.

Schedules:  {"mode", "h1", "w1", "stages": [{"r", "spacer": {...}}, ...]}
            or {"mode", "h1", "w1", "named": {"kind", "params"}}.
Exact scalars travel as strings "p/q" and "p/q+p'/q'*sqrt2".
A "stages" document repeats its last entry for all deeper stages.
"""

from __future__ import annotations

import json

from .builders import named_schedule
from .errors import ConfigurationError
from .scalars import scalar_from_string, scalar_to_string
from .schedule import (
    Constant,
    ExplicitList,
    FractionSplit,
    PairedGaps,
    Schedule,
    Staircase,
    Symmetrized,
)


def spacer_map_from_json(doc: dict):
    variant = doc.get("variant")
    if variant == "explicit":
        return ExplicitList(
            tuple(scalar_from_string(s) for s in doc["spacers"]),
            bottom_spacer=scalar_from_string(doc.get("bottom", "0")),
        )
    if variant == "constant":
        return Constant(scalar_from_string(doc["c"]))
    if variant == "staircase":
        return Staircase(scalar_from_string(doc["u"]))
    if variant == "fraction_split":
        return FractionSplit(int(doc["q"]), scalar_from_string(doc["s"]))
    if variant == "paired_gaps":
        return PairedGaps(
            tuple(scalar_from_string(s) for s in doc["gaps"]),
            tuple(scalar_from_string(s) for s in doc["separators"]),
        )
    if variant == "symmetrized":
        return Symmetrized(spacer_map_from_json(doc["inner"]), int(doc["r_inner"]))
    raise ConfigurationError(f"unknown spacer variant {variant!r}")


def schedule_from_json(doc: dict) -> Schedule:
    mode = doc.get("mode", "rational")
    h1 = scalar_from_string(doc.get("h1", "1"))
    w1 = scalar_from_string(doc.get("w1", "1"))
    if "named" in doc:
        named = doc["named"]
        sched = named_schedule(named["kind"], **named.get("params", {}))
        return sched
    stages = doc.get("stages")
    if not stages:
        raise ConfigurationError("schedule document needs either 'named' or non-empty 'stages'")
    parsed = [(int(st["r"]), spacer_map_from_json(st["spacer"])) for st in stages]

    def params(n, h, w):
        return parsed[min(n - 1, len(parsed) - 1)]

    return Schedule(params, h1=h1, w1=w1, mode=mode, name="json", meta={"kind": "json"})


def schedule_to_json(schedule: Schedule, depth: int | None = None) -> dict:
    doc = {
        "mode": schedule.mode,
        "h1": scalar_to_string(schedule.h1),
        "w1": scalar_to_string(schedule.w1),
    }
    kind = schedule.meta.get("kind")
    if "symmetrized_from" in schedule.meta:
        kind = None
    if depth is None and kind not in (None, "json"):
        params = {k: v for k, v in schedule.meta.items() if k not in ("kind", "classes", "class_stages", "m_times")}
        doc["named"] = {"kind": kind, "params": params}
        return doc
    depth = depth or 8
    stages = []
    for n in range(1, depth + 1):
        st = schedule.stage(n)
        spacer = {"variant": "explicit", "spacers": [scalar_to_string(v) for v in st.spacers]}
        if st.bottom != 0:
            spacer["bottom"] = scalar_to_string(st.bottom)
        stages.append({"r": st.r, "spacer": spacer})
    doc["stages"] = stages
    return doc


def load_schedule(source) -> Schedule:
    """Accept a parsed dict, a JSON string, or a file path."""
    if isinstance(source, dict):
        return schedule_from_json(source)
    text = str(source)
    if text.strip().startswith("{"):
        return schedule_from_json(json.loads(text))
    with open(text) as fh:
        return schedule_from_json(json.load(fh))


def correlation_result_to_json(res) -> dict:
    return {
        "value": [res.value.real, res.value.imag],
        "error_bound": res.error_bound,
        "stage_used": res.stage_used,
    }
