"""Experiment runners behind the ``rank1`` command line.

Each runner takes a parsed experiment spec (a plain dict), drives the
library, and returns a JSON-ready report dict plus a pass/fail verdict.
Reports are deterministic: seeds are explicit, iteration orders fixed,
and nothing time- or host-dependent goes into the report body.
"""

from __future__ import annotations

import csv
import random
from fractions import Fraction

from .builders import named_schedule
from .correlate import (
    Correlator,
    FockComponent,
    WeakLimitTarget,
    component_correlate,
    correlate,
    inner_product,
    m_correlate,
    pick_stage,
    weak_limit_probe,
)
from .errors import ConfigurationError
from .oracle import oracle_correlate
from .schedule import Schedule, finiteness_test
from .scalars import scalar_from_string, scalar_to_string
from .serialize import load_schedule
from .spectral import affinity, autocorr_curve, bochner_density, curve_from_samples, dilate
from .stepfun import StepFunction, indicator, lift, random_level_set, random_step_function, reflect
from .schedule import symmetrize

REPORT_VERSION = "rank1-report-1"

KINDS = (
    "stage-audit",
    "correlate",
    "weak-limit",
    "triple-asymmetry",
    "fock-claims",
    "spectrum",
    "disjointness",
    "reflection-check",
)


# ---------------------------------------------------------------------------
# spec plumbing
# ---------------------------------------------------------------------------


def resolve_schedule(spec: dict) -> Schedule:
    doc = spec.get("schedule")
    if doc is None:
        raise ConfigurationError("experiment spec needs a 'schedule' entry")
    if isinstance(doc, dict) and "kind" in doc and "stages" not in doc and "named" not in doc:
        sched = named_schedule(doc["kind"], **doc.get("params", {}))
    else:
        sched = load_schedule(doc)
    if spec.get("symmetrize"):
        sched = symmetrize(sched)
    return sched


def resolve_times(schedule: Schedule, doc) -> list:
    """Literal time list, stage-height multiples, or recorded class times."""
    if isinstance(doc, list):
        return [scalar_from_string(str(t)) for t in doc]
    kind = doc.get("kind")
    if kind == "heights":
        d = scalar_from_string(str(doc.get("d", "1")))
        return [d * schedule.height(n) for n in doc["stages"]]
    if kind == "m_class":
        build_to = int(doc["build_to"])
        schedule.stage(build_to)
        recorded = schedule.meta.get("m_times", {}).get(doc["label"])
        if not recorded:
            raise ConfigurationError(f"no recorded times for class {doc['label']!r}")
        return [rec["t"] for rec in recorded if rec["stage"] <= build_to]
    raise ConfigurationError(f"unknown time spec kind {kind!r}")


def test_family(schedule: Schedule, params: dict, pair: bool = True) -> list:
    """Seeded family of stage-measurable test functions."""
    stage = int(params.get("stage", 1))
    levels = int(params.get("levels", 4))
    seed = int(params.get("seed", 0))
    size = int(params.get("family_size", 3))
    mean_zero = bool(params.get("mean_zero", False))
    rng = random.Random(seed)
    h = schedule.height(stage)
    fam = []
    for _ in range(size):
        f = random_step_function(stage, h, levels, rng, mean_zero=mean_zero)
        if pair:
            g = random_step_function(stage, h, levels, rng, mean_zero=mean_zero)
            fam.append((f, g))
        else:
            fam.append(f)
    return fam


def _cres(r) -> dict:
    return {
        "value": [r.value.real, r.value.imag],
        "error_bound": r.error_bound,
        "stage_used": r.stage_used,
    }


# ---------------------------------------------------------------------------
# runners
# ---------------------------------------------------------------------------


def run_stage_audit(spec: dict):
    schedule = resolve_schedule(spec)
    depth = int(spec.get("depth", 8))
    items = []
    ok_all = True
    for n in range(1, depth + 1):
        st = schedule.stage(n)
        checks = {
            "offsets_increasing": all(a < b for a, b in zip(st.offsets, st.offsets[1:])),
            "offset_recursion": all(
                st.offsets[j] == st.offsets[j - 1] + st.h + st.spacers[j - 1]
                for j in range(1, st.r)
            ),
            "first_offset_is_bottom": st.offsets[0] == st.bottom,
        }
        if n < depth:
            nxt = schedule.stage(n + 1)
            checks["height_recursion"] = nxt.h == st.offsets[-1] + st.h + st.spacers[-1]
            checks["width_recursion"] = nxt.w == st.w / st.r
            checks["measure_recursion"] = nxt.measure == st.measure + st.spacer_mass_added
            checks["measure_monotone"] = not nxt.measure < st.measure
        ok = all(checks.values())
        ok_all = ok_all and ok
        items.append(
            {
                "n": n,
                "r": st.r,
                "h": scalar_to_string(st.h),
                "w": scalar_to_string(st.w),
                "measure": scalar_to_string(st.measure),
                "checks": checks,
                "ok": ok,
            }
        )
    report = {"items": items}
    horizon = spec.get("finiteness_horizon")
    if horizon:
        verdict = finiteness_test(schedule, int(horizon))
        report["finiteness"] = {
            "status": verdict.status,
            "partial_sum": scalar_to_string(verdict.partial_sum),
            "horizon": verdict.horizon,
        }
    plot = [[it["n"], it["r"], float(scalar_from_string(it["h"])), float(scalar_from_string(it["measure"]))] for it in items]
    return report, ok_all, ("n,r,h,measure", plot)


def run_correlate(spec: dict):
    schedule = resolve_schedule(spec)
    (f, g) = test_family(schedule, spec, pair=True)[0]
    times = resolve_times(schedule, spec.get("times", ["0"]))
    against_oracle = bool(spec.get("oracle", False))
    corr = Correlator(schedule, f, g)
    items = []
    ok_all = True
    for t in times:
        res = corr.at(t)
        item = {"t": scalar_to_string(t), **_cres(res)}
        if against_oracle:
            ref = oracle_correlate(schedule, f, g, t, stage=res.stage_used).value
            gap = abs(res.value - ref)
            item["oracle_value"] = [ref.real, ref.imag]
            item["oracle_gap"] = gap
            item["ok"] = gap <= res.error_bound + 1e-9
            ok_all = ok_all and item["ok"]
        items.append(item)
    plot = [[i, float(scalar_from_string(it["t"])), it["value"][0], it["value"][1], it["error_bound"]] for i, it in enumerate(items)]
    return {"items": items}, ok_all, ("i,t,re,im,bound", plot)


def _target_from_spec(doc: dict) -> WeakLimitTarget:
    def cplx(v):
        if isinstance(v, list):
            return complex(v[0], v[1])
        return complex(float(v), 0.0)

    return WeakLimitTarget(
        alpha=cplx(doc.get("alpha", 0)),
        beta=cplx(doc.get("beta", 0)),
        s=scalar_from_string(str(doc.get("s", "0"))),
    )


def run_weak_limit(spec: dict):
    schedule = resolve_schedule(spec)
    times = resolve_times(schedule, spec.get("times", ["0"]))
    target = _target_from_spec(spec.get("target", {"alpha": 1}))
    family = test_family(schedule, spec)
    threshold = float(spec.get("threshold", 0.05))
    probe = weak_limit_probe(schedule, times, target, family, threshold=threshold)
    items = [
        {"j": j, "t": scalar_to_string(t), "residual": r, "bound": b}
        for j, (t, r, b) in enumerate(zip(probe.times, probe.residuals, probe.bounds))
    ]
    report = {
        "items": items,
        "threshold": threshold,
        "final_residual": probe.final_residual,
        "final_below": probe.final_below,
    }
    plot = [[it["j"], float(scalar_from_string(it["t"])), it["residual"], it["bound"]] for it in items]
    return report, bool(probe.final_below), ("j,t,residual,bound", plot)


def asym_stage_indices(schedule: Schedule, count: int) -> list:
    """The stages carrying the five-cut spacer layout, shallowest first."""
    period = int(schedule.meta.get("period", 2))
    return [1 + period * i for i in range(count)]


def forward_level_sets(schedule: Schedule, spec: dict) -> list:
    stage = int(spec.get("set_stage", 2))
    levels = int(spec.get("set_levels", 4))
    seed = int(spec.get("seed", 0))
    count = int(spec.get("forward_sets", 5))
    rng = random.Random(seed)
    h = schedule.height(stage)
    return [random_level_set(stage, h, levels, rng) for _ in range(count)]


def backward_candidates(schedule: Schedule, spec: dict) -> list:
    """Candidate witness sets: unit-height combs of integer period.

    The spacer displacements that survive the stacking are small integers,
    so combs whose period avoids them are natural witnesses."""
    stage = int(spec.get("set_stage", 2))
    h = schedule.height(stage)
    out = []
    for period in range(2, int(spec.get("backward_period_max", 4)) + 1):
        for phase in range(period):
            bps = [0 * h]
            vals = []
            pos = Fraction(0)
            m = 0
            while True:
                a = m * period + phase
                b = a + 1
                if b > h:
                    break
                if a > pos:
                    bps.append(Fraction(a))
                    vals.append(0j)
                bps.append(Fraction(b))
                vals.append(1 + 0j)
                pos = Fraction(b)
                m += 1
            if pos < h:
                bps.append(h)
                vals.append(0j)
            if any(v for v in vals):
                out.append((f"comb period={period} phase={phase}", StepFunction(stage, bps, vals)))
    return out


def triple_ratio(schedule: Schedule, a: StepFunction, n, sign: int):
    """mu(A meet T_{sn}A meet T_{3sn}A) / mu(A) with its error bound."""
    mu_a = inner_product(schedule, a, a).real
    res = m_correlate(schedule, [a, a, a], (0 * n, sign * n, 3 * sign * n))
    return res.value.real / mu_a, res.error_bound / mu_a, res.stage_used


def run_triple_asymmetry(spec: dict):
    schedule = resolve_schedule(spec)
    idx = asym_stage_indices(schedule, int(spec.get("stage_count", 3)))
    n_times = [schedule.height(l) + 1 for l in idx]
    thr_fwd = float(spec.get("forward_threshold", 0.19))
    thr_bwd = float(spec.get("backward_threshold", 0.1))
    forward_items = []
    worst_forward = None
    for s_idx, a in enumerate(forward_level_sets(schedule, spec)):
        rows = []
        for i, n in enumerate(n_times):
            ratio, bound, stage_used = triple_ratio(schedule, a, n, +1)
            rows.append({"i": i, "n": scalar_to_string(n), "ratio": ratio, "bound": bound, "stage_used": stage_used})
        final = rows[-1]["ratio"]
        worst_forward = final if worst_forward is None else min(worst_forward, final)
        forward_items.append({"set": s_idx, "rows": rows, "final_ratio": final})
    backward_items = []
    best = None
    for label, a in backward_candidates(schedule, spec):
        ratio, bound, _ = triple_ratio(schedule, a, n_times[-1], -1)
        backward_items.append({"set": label, "final_ratio": ratio, "bound": bound})
        if best is None or ratio < best["final_ratio"]:
            best = backward_items[-1]
    passed = worst_forward >= thr_fwd and best is not None and best["final_ratio"] <= thr_bwd
    report = {
        "forward": forward_items,
        "forward_liminf_estimate": worst_forward,
        "forward_threshold": thr_fwd,
        "backward": backward_items,
        "backward_best": best,
        "backward_threshold": thr_bwd,
    }
    plot = []
    for it in forward_items:
        for row in it["rows"]:
            plot.append([it["set"], row["i"], float(scalar_from_string(row["n"])), row["ratio"], row["bound"]])
    return report, passed, ("set,i,n,ratio,bound", plot)


def run_fock_claims(spec: dict):
    schedule = resolve_schedule(spec)
    label = spec["class_label"]
    times = resolve_times(schedule, {"kind": "m_class", "label": label, "build_to": spec.get("build_to", 12)})
    shifts = [scalar_from_string(str(s)) for s in spec["shifts"]]
    mults = tuple(int(m) for m in spec.get("multiplicities", [1] * len(shifts)))
    l0 = int(spec.get("l0", 1))
    fam = test_family(schedule, spec, pair=False)
    vectors = tuple(fam[i % len(fam)] for i in range(len(shifts)))
    comp = FockComponent(tuple(shifts), mults, vectors)
    two_r = 2 * len(shifts) if not spec.get("pairs") else 2 * int(spec["pairs"])
    threshold = float(spec.get("threshold", 0.1))
    items = []
    for t in times:
        factors = []
        for pos, (s_l, f_l) in enumerate(zip(comp.shifts, comp.vectors), start=1):
            res = correlate(schedule, f_l, f_l, s_l * t)
            norm = inner_product(schedule, f_l, f_l).real
            if pos == l0:
                ref = correlate(schedule, f_l, f_l, s_l)
                predicted = ref.value / two_r
            else:
                predicted = complex(norm / two_r)
            factors.append(
                {
                    "l": pos,
                    "s": scalar_to_string(s_l),
                    **_cres(res),
                    "predicted": [predicted.real, predicted.imag],
                    "residual": abs(res.value - predicted) / max(norm, 1e-30),
                }
            )
        total = component_correlate(schedule, comp, t)
        items.append({"t": scalar_to_string(t), "factors": factors, "component": _cres(total)})
    final = items[-1]
    max_res = max(fc["residual"] for fc in final["factors"])
    report = {"items": items, "final_max_factor_residual": max_res, "threshold": threshold}
    off = spec.get("off_scale")
    passed = max_res < threshold
    if off is not None:
        b = scalar_from_string(str(off))
        f0 = comp.vectors[0]
        norm = inner_product(schedule, f0, f0).real
        probes = [abs(correlate(schedule, f0, f0, b * t).value) / norm for t in times]
        report["off_scale"] = {"b": scalar_to_string(b), "values": probes}
        passed = passed and probes[-1] < float(spec.get("off_scale_threshold", 0.05))
    plot = []
    for j, it in enumerate(items):
        for fc in it["factors"]:
            plot.append([j, fc["l"], fc["value"][0], fc["predicted"][0], fc["residual"]])
    return report, passed, ("j,l,re,predicted_re,residual", plot)


def _curve_for_spec(schedule, spec):
    dt = float(spec.get("dt", 0.05))
    t_max = float(spec.get("t_max", 8.0))
    analytic = spec.get("analytic")
    if analytic:
        import math

        n = int(round(t_max / dt))
        ts = [i * dt for i in range(-n, n + 1)]
        if analytic["kind"] == "gaussian":
            vals = [math.exp(-math.pi * t * t) for t in ts]
        elif analytic["kind"] == "cosine":
            freqs = analytic.get("freqs", [1.0])
            vals = [sum(math.cos(2 * math.pi * l0 * t) for l0 in freqs) for t in ts]
        else:
            raise ConfigurationError(f"unknown analytic curve {analytic['kind']!r}")
        return curve_from_samples(dt, vals)
    f = test_family(schedule, spec, pair=False)[0]
    return autocorr_curve(schedule, f, dt, t_max)


def run_spectrum(spec: dict):
    schedule = resolve_schedule(spec) if spec.get("schedule") else None
    curve = _curve_for_spec(schedule, spec)
    est = bochner_density(
        curve,
        lam_max=float(spec.get("lam", 4.0)),
        grid_size=int(spec.get("grid_size", 801)),
        taper_width=spec.get("taper_width"),
    )
    c0 = curve.values[len(curve.values) // 2].real
    report = {
        "c0": c0,
        "total_mass": est.total_mass,
        "taper": {"kind": est.taper_kind, "width": est.taper_width},
        "grid": {"lam": float(est.freqs[-1]), "size": len(est.freqs)},
    }
    passed = abs(est.total_mass - c0) <= 1e-9 * max(1.0, abs(c0))
    plot = [[float(l), float(d)] for l, d in zip(est.freqs, est.density)]
    return report, passed, ("lambda,density", plot)


def run_disjointness(spec: dict):
    schedule = resolve_schedule(spec) if spec.get("schedule") else None
    curve = _curve_for_spec(schedule, spec)
    est = bochner_density(
        curve,
        lam_max=float(spec.get("lam", 4.0)),
        grid_size=int(spec.get("grid_size", 801)),
        taper_width=spec.get("taper_width"),
    )
    factors = [float(x) for x in spec.get("dilations", [2.0])]
    threshold = float(spec.get("threshold", 0.5))
    self_aff = affinity(est, est)
    items = [{"t": t, "affinity": affinity(est, dilate(est, t))} for t in factors]
    passed = self_aff == 1.0 and all(it["affinity"] < threshold for it in items)
    report = {"self_affinity": self_aff, "items": items, "threshold": threshold}
    plot = [[it["t"], it["affinity"]] for it in items]
    return report, passed, ("t,affinity", plot)


def reflection_cases(schedule: Schedule, spec: dict):
    """Random (f, g, t) with t on the scale of the small spacers, where
    the truncation bounds are tight and any reflection defect shows."""
    stage = int(spec.get("stage", 1))
    levels = int(spec.get("levels", 4))
    seed = int(spec.get("seed", 0))
    cases = int(spec.get("cases", 50))
    rng = random.Random(seed)
    h = schedule.height(stage)
    out = []
    for _ in range(cases):
        f = random_step_function(stage, h, levels, rng)
        g = random_step_function(stage, h, levels, rng)
        t = Fraction(rng.randrange(-40, 41), 16)
        out.append((f, g, t))
    return out


def run_reflection_check(spec: dict):
    """Does stage reflection implement time reversal consistently?

    f is reflected inside its own stage, g at a deeper one.  A schedule
    whose spacers are palindromic carries a global reflection, so the two
    choices of stage agree and correlate(Rf, Rg, -t) = correlate(f, g, t)
    within summed bounds; a genuinely asymmetric schedule has no global
    reflection and must break the identity at some case."""
    schedule = resolve_schedule(spec)
    depth = int(spec.get("reflect_depth", 2))
    items = []
    violations = 0
    eval_depth = int(spec.get("eval_depth", 3))
    for i, (f, g, t) in enumerate(reflection_cases(schedule, spec)):
        deep = g.stage + depth
        rf = lift(schedule, reflect(f), deep)
        rg = reflect(g, schedule, deep)
        n_eval = pick_stage(schedule, deep, abs(t)) + eval_depth
        lhs = correlate(schedule, f, g, t, stage=n_eval)
        rhs = correlate(schedule, rf, rg, -t, stage=n_eval)
        gap = abs(lhs.value - rhs.value)
        bound = lhs.error_bound + rhs.error_bound
        ok = gap <= bound + 1e-9
        violations += 0 if ok else 1
        items.append(
            {
                "case": i,
                "t": scalar_to_string(t),
                "gap": gap,
                "bound": bound,
                "ok": ok,
            }
        )
    gross = sum(1 for it in items if it["gap"] > 10.0 * (it["bound"] + 1e-9))
    report = {"items": items, "violations": violations, "gross_violations": gross}
    plot = [[it["case"], float(scalar_from_string(it["t"])), it["gap"], it["bound"]] for it in items]
    return report, violations == 0, ("case,t,gap,bound", plot)


_RUNNERS = {
    "stage-audit": run_stage_audit,
    "correlate": run_correlate,
    "weak-limit": run_weak_limit,
    "triple-asymmetry": run_triple_asymmetry,
    "fock-claims": run_fock_claims,
    "spectrum": run_spectrum,
    "disjointness": run_disjointness,
    "reflection-check": run_reflection_check,
}


def run_experiment(kind: str, spec: dict) -> dict:
    """Full report for one experiment; deterministic for a fixed spec."""
    if kind not in _RUNNERS:
        raise ConfigurationError(f"unknown experiment kind {kind!r}")
    body, passed, (header, rows) = _RUNNERS[kind](spec)
    return {
        "version": REPORT_VERSION,
        "experiment": kind,
        "spec": spec,
        "result": body,
        "passed": bool(passed),
        "plot": {"columns": header, "rows": rows},
    }


def export_plotdata(report: dict, path) -> None:
    """CSV dump of the report's sequence-valued result."""
    plot = report.get("plot", {"columns": "", "rows": []})
    with open(path, "w", newline="") as fh:
        fh.write(f"# experiment: {report.get('experiment', '?')}; columns: {plot['columns']}\n")
        writer = csv.writer(fh)
        writer.writerow(plot["columns"].split(","))
        for row in plot["rows"]:
            writer.writerow(row)
