"""Step functions measurable with respect to a tower stage.

A stage-k measurable function depends on the height in the stage-k tower
only; it is stored as strictly increasing breakpoints
0 = b_0 < ... < b_m = h_k with one complex value per piece
[b_{i-1}, b_i).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import ConfigurationError, ResourceError
from .scalars import Scalar, scalar_from_string, scalar_to_string


@dataclass
class StepFunction:
    stage: int
    breakpoints: list  # m + 1 scalars, 0 = b_0 < ... < b_m = h_stage
    values: list  # m complex values

    def __post_init__(self):
        if len(self.breakpoints) != len(self.values) + 1:
            raise ConfigurationError("need one more breakpoint than values")
        for a, b in zip(self.breakpoints, self.breakpoints[1:]):
            if not a < b:
                raise ConfigurationError("breakpoints must be strictly increasing")

    @property
    def height(self):
        return self.breakpoints[-1]

    @property
    def sup_norm(self) -> float:
        return max(abs(complex(v)) for v in self.values) if self.values else 0.0

    def norm2_sq_unweighted(self) -> float:
        """integral of |f|^2 over [0, h_k), without the width weight."""
        total = 0.0
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            total += abs(complex(v)) ** 2 * float(b - a)
        return total

    def mean_unweighted(self) -> complex:
        total = 0j
        for a, b, v in zip(self.breakpoints, self.breakpoints[1:], self.values):
            total += complex(v) * float(b - a)
        return total

    def __call__(self, y: Scalar) -> complex:
        """Value at height y; 0 outside [0, h_k)."""
        if y < 0 or not y < self.height:
            return 0j
        lo, hi = 0, len(self.values) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self.breakpoints[mid] <= y:
                lo = mid
            else:
                hi = mid - 1
        return complex(self.values[lo])

    def merged(self) -> "StepFunction":
        """Adjacent equal values merged; semantics unchanged."""
        bps = [self.breakpoints[0]]
        vals = []
        for b, v in zip(self.breakpoints[1:], self.values):
            if vals and v == vals[-1]:
                bps[-1] = b
            else:
                vals.append(v)
                bps.append(b)
        return StepFunction(self.stage, bps, vals)

    def scaled(self, c: complex) -> "StepFunction":
        return StepFunction(self.stage, list(self.breakpoints), [c * complex(v) for v in self.values])

    def to_json(self) -> dict:
        return {
            "stage": self.stage,
            "breakpoints": [scalar_to_string(b) for b in self.breakpoints],
            "values": [[complex(v).real, complex(v).imag] for v in self.values],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "StepFunction":
        return cls(
            stage=doc["stage"],
            breakpoints=[scalar_from_string(s) for s in doc["breakpoints"]],
            values=[complex(re, im) for re, im in doc["values"]],
        )


def indicator(stage: int, height: Scalar, lo: Scalar, hi: Scalar) -> StepFunction:
    """1 on [lo, hi), 0 elsewhere on [0, height)."""
    if not (0 <= lo < hi <= height):
        raise ConfigurationError("indicator interval must be inside [0, height)")
    bps: list = [0 * height]  # zero in the scalar type of height
    vals: list = []
    if lo > 0:
        bps.append(lo)
        vals.append(0j)
    bps.append(hi)
    vals.append(1 + 0j)
    if hi < height:
        bps.append(height)
        vals.append(0j)
    return StepFunction(stage, bps, vals)


def level_partition(stage: int, height: Scalar, levels: int) -> list:
    """Breakpoints of the uniform partition of [0, h) into *levels* pieces."""
    return [height * Fraction(i, levels) for i in range(levels + 1)]


def random_step_function(
    stage: int,
    height: Scalar,
    levels: int,
    rng: random.Random,
    complex_values: bool = True,
    mean_zero: bool = False,
) -> StepFunction:
    """A seeded random function on the uniform level partition."""
    bps = level_partition(stage, height, levels)
    vals = []
    for _ in range(levels):
        re = rng.choice([-1.0, -0.5, 0.0, 0.5, 1.0])
        im = rng.choice([-0.5, 0.0, 0.5]) if complex_values else 0.0
        vals.append(complex(re, im))
    if all(v == 0 for v in vals):
        vals[rng.randrange(levels)] = 1 + 0j
    if mean_zero:
        m = sum(vals) / levels
        vals = [v - m for v in vals]
    return StepFunction(stage, bps, vals)


def random_level_set(stage: int, height: Scalar, levels: int, rng: random.Random) -> StepFunction:
    """Indicator of a random union of levels (at least one level)."""
    bps = level_partition(stage, height, levels)
    vals = [complex(rng.randrange(2)) for _ in range(levels)]
    if all(v == 0 for v in vals):
        vals[rng.randrange(levels)] = 1 + 0j
    return StepFunction(stage, bps, vals)


# ---------------------------------------------------------------------------
# exact cross-correlation and lifting
# ---------------------------------------------------------------------------


def cross_correlation(f: StepFunction, g: StepFunction, tau: Scalar) -> complex:
    """integral of f(y + tau) * conj(g(y)) dy, exact piecewise.

    Piece lengths are computed in exact arithmetic; the complex value
    accumulates in doubles.
    """
    # support of the integrand: y in [0, h_g) with y + tau in [0, h_f)
    lo = max(g.breakpoints[0], f.breakpoints[0] - tau)
    hi = min(g.breakpoints[-1], f.breakpoints[-1] - tau)
    if not lo < hi:
        return 0j
    fi = gi = 0
    fb = [b - tau for b in f.breakpoints]
    gb = g.breakpoints
    while fb[fi + 1] <= lo:
        fi += 1
    while gb[gi + 1] <= lo:
        gi += 1
    total = 0j
    cur = lo
    while cur < hi:
        nxt = fb[fi + 1] if fb[fi + 1] < gb[gi + 1] else gb[gi + 1]
        if nxt > hi:
            nxt = hi
        total += complex(f.values[fi]) * complex(g.values[gi]).conjugate() * float(nxt - cur)
        cur = nxt
        if fi + 1 < len(f.values) and fb[fi + 1] <= cur:
            fi += 1
        if gi + 1 < len(g.values) and gb[gi + 1] <= cur:
            gi += 1
    return total


def product_integral(functions: Sequence[StepFunction], shifts: Sequence[Scalar]) -> complex:
    """integral of prod_i f_i(y - shift_i) dy over the common support."""
    lo = None
    hi = None
    shifted = []
    for f, s in zip(functions, shifts):
        b0 = f.breakpoints[0] + s
        b1 = f.breakpoints[-1] + s
        lo = b0 if lo is None or b0 > lo else lo
        hi = b1 if hi is None or b1 < hi else hi
        shifted.append(([b + s for b in f.breakpoints], f.values))
    if lo is None or not lo < hi:
        return 0j
    idx = []
    for bps, _ in shifted:
        i = 0
        while bps[i + 1] <= lo:
            i += 1
        idx.append(i)
    total = 0j
    cur = lo
    while cur < hi:
        nxt = hi
        for i, (bps, _) in enumerate(shifted):
            b = bps[idx[i] + 1]
            if b < nxt:
                nxt = b
        piece = complex(1, 0)
        for i, (_, vals) in enumerate(shifted):
            piece *= complex(vals[idx[i]])
        total += piece * float(nxt - cur)
        cur = nxt
        for i, (bps, _) in enumerate(shifted):
            if idx[i] + 1 < len(shifted[i][1]) and bps[idx[i] + 1] <= cur:
                idx[i] += 1
    return total


def lift(schedule, f: StepFunction, target_stage: int, max_breakpoints: int = 2_000_000) -> StepFunction:
    """The stage-N function equal to f on every copy of its stage and 0 on
    all spacer levels, materialized explicitly.

    Only meant for shallow towers (the oracle); the main engine uses the
    offset recursion and never builds deep lifts.
    """
    if target_stage < f.stage:
        raise ConfigurationError("cannot lift downward")
    cur = f
    for n in range(f.stage, target_stage):
        st = schedule.stage(n)
        h_next = st.h_next
        bps: list = [st.h * 0]
        vals: list = []
        pos = bps[0]
        for j in range(st.r):
            o = st.offsets[j]
            if o > pos:
                bps.append(o)
                vals.append(0j)
            for b, v in zip(cur.breakpoints[1:], cur.values):
                bps.append(o + b)
                vals.append(v)
            pos = o + cur.breakpoints[-1]
            if len(bps) > max_breakpoints:
                raise ResourceError("lift breakpoint blowup")
        if pos < h_next:
            bps.append(h_next)
            vals.append(0j)
        cur = StepFunction(n + 1, bps, vals)
    return cur


def reflect(f: StepFunction, schedule=None, stage: int | None = None) -> StepFunction:
    """(reflect f)(y) = f(h - y) relative to a tower stage; an involution
    preserving norms.

    With no stage given the flip happens inside f's own stage.  Passing a
    deeper stage lifts f there first and flips the whole lifted column;
    the two orders of lift and flip agree exactly only when the spacer
    sequences are palindromic.
    """
    if stage is not None:
        if schedule is None:
            raise ConfigurationError("reflecting at another stage needs the schedule")
        f = lift(schedule, f, stage)
    h = f.height
    bps = [h - b for b in reversed(f.breakpoints)]
    vals = list(reversed(f.values))
    return StepFunction(f.stage, bps, vals)
