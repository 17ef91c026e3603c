import json

import pytest

from rank1flow import (
    asym49_schedule,
    load_schedule,
    schedule_from_json,
    schedule_to_json,
    staircase34_schedule,
    symmetrize,
    thm44_schedule,
)
from rank1flow.errors import ConfigurationError


def same_geometry(a, b, depth=5):
    for n in range(1, depth + 1):
        sa, sb = a.stage(n), b.stage(n)
        if (sa.r, sa.h, sa.w, sa.measure, sa.offsets) != (sb.r, sb.h, sb.w, sb.measure, sb.offsets):
            return False
    return True


def test_named_roundtrip_staircase():
    sched = staircase34_schedule(staircase_stages=(2, 3), base=4, r_cap=16)
    doc = schedule_to_json(sched)
    assert doc["named"]["kind"] == "staircase34"
    assert same_geometry(sched, schedule_from_json(doc))


def test_named_roundtrip_asym49():
    sched = asym49_schedule(r_cap=16)
    doc = schedule_to_json(sched)
    assert same_geometry(sched, schedule_from_json(doc))


def test_named_roundtrip_thm44():
    sched = thm44_schedule(s_values=(2,), q_max=1, k_max=1, r_cap=6)
    doc = schedule_to_json(sched)
    assert doc["named"]["kind"] == "thm44"
    assert same_geometry(sched, schedule_from_json(doc), depth=4)


def test_symmetrized_serializes_as_explicit_stages():
    sched = symmetrize(asym49_schedule(r_cap=16))
    doc = schedule_to_json(sched, depth=4)
    assert "stages" in doc and "named" not in doc
    assert same_geometry(sched, schedule_from_json(doc), depth=4)


def test_explicit_depth_roundtrip():
    sched = staircase34_schedule(staircase_stages=(2, 3), base=4, r_cap=16)
    doc = schedule_to_json(sched, depth=6)
    back = schedule_from_json(doc)
    assert same_geometry(sched, back, depth=6)


def test_all_spacer_variants_roundtrip():
    sched = thm44_schedule(s_values=(2,), q_max=2, k_max=1, r_cap=6)
    sched.stage(6)
    doc = schedule_to_json(sched, depth=6)
    text = json.dumps(doc)
    back = load_schedule(text)
    assert same_geometry(sched, back, depth=6)


def test_load_schedule_from_path(tmp_path):
    sched = asym49_schedule(r_cap=16)
    path = tmp_path / "sched.json"
    path.write_text(json.dumps(schedule_to_json(sched)))
    assert same_geometry(sched, load_schedule(path))


def test_empty_document_rejected():
    with pytest.raises(ConfigurationError):
        schedule_from_json({})


def test_unknown_spacer_variant_rejected():
    doc = {"stages": [{"r": 2, "spacer": {"variant": "mystery"}}]}
    with pytest.raises(ConfigurationError):
        schedule_from_json(doc)
