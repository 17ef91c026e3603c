"""Independent second implementation of the correlation engine.

Instead of the offset recursion, lift both functions explicitly to the
working stage and integrate the shifted product in closed form on the
exact breakpoint partition refined by the shift (no sampling error).
Only usable for small cut numbers and shallow depth; every value the
main engine produces must agree with this one within its error bound.
"""

from __future__ import annotations

from typing import Sequence

from .correlate import CorrelationResult, pick_stage
from .scalars import Scalar
from .schedule import Schedule
from .stepfun import StepFunction, cross_correlation, lift, product_integral


def oracle_correlate(
    schedule: Schedule, f: StepFunction, g: StepFunction, t: Scalar, stage: int | None = None
) -> CorrelationResult:
    n = pick_stage(schedule, f.stage, abs(t)) if stage is None else stage
    F = lift(schedule, f, n)
    G = lift(schedule, g, n)
    w_n = schedule.width(n)
    value = complex(cross_correlation(F, G, -t)) * float(w_n)
    bound = 2.0 * f.sup_norm * g.sup_norm * float(abs(t)) * float(w_n)
    return CorrelationResult(value=value, error_bound=bound, stage_used=n)


def oracle_m_correlate(
    schedule: Schedule,
    functions: Sequence[StepFunction],
    times: Sequence[Scalar],
    stage: int | None = None,
) -> CorrelationResult:
    k = functions[0].stage
    t_max = max(abs(t) for t in times)
    n = pick_stage(schedule, k, t_max) if stage is None else stage
    lifted = [lift(schedule, f, n) for f in functions]
    w_n = schedule.width(n)
    value = complex(product_integral(lifted, list(times))) * float(w_n)
    sup = 1.0
    for f in functions:
        sup *= f.sup_norm
    bound = 2.0 * sup * float(t_max) * float(w_n) * len(functions)
    return CorrelationResult(value=value, error_bound=bound, stage_used=n)
