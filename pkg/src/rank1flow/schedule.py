"""Cutting-and-stacking schedules and exact tower geometry.

A schedule assigns to every stage n >= 1 a cut number r_n > 1 and a spacer
map s_n.  Stage n of the construction is a tower of height h_n and width
w_n; it is cut into r_n columns of width w_n / r_n, a spacer of height
s_n(j) is put on top of column j, and the columns are stacked bottom to
top.  Copy j of the stage-n tower therefore sits inside the stage-(n+1)
tower at offset

    o_1 = bottom spacer (0 unless the map carries one),
    o_{j+1} = o_j + h_n + s_n(j),

and h_{n+1} = o_{r_n} + h_n + s_n(r_n).
"""

from __future__ import annotations

import threading
from bisect import bisect_left, bisect_right
from collections import Counter
from math import lcm
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

from .errors import ConfigurationError, ResourceError
from .scalars import Scalar, coerce, scalar_to_string

DEFAULT_DIGIT_BUDGET = 200_000  # bits allowed in a height numerator


# ---------------------------------------------------------------------------
# spacer maps
# ---------------------------------------------------------------------------


class SpacerMap:
    """Base class: a map j -> s(j) >= 0 for j = 1..r, plus an optional
    bottom spacer inserted underneath copy 1."""

    bottom_spacer: Scalar = 0

    def values(self, r: int) -> list:
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class ExplicitList(SpacerMap):
    spacers: tuple
    bottom_spacer: Scalar = 0

    def values(self, r):
        if len(self.spacers) != r:
            raise ConfigurationError(
                f"explicit spacer list has {len(self.spacers)} entries, need r={r}"
            )
        return list(self.spacers)

    def to_json(self):
        return {
            "variant": "explicit",
            "spacers": [scalar_to_string(v) for v in self.spacers],
            "bottom": scalar_to_string(self.bottom_spacer),
        }


@dataclass(frozen=True)
class Constant(SpacerMap):
    c: Scalar = 0

    def values(self, r):
        return [self.c] * r

    def to_json(self):
        return {"variant": "constant", "c": scalar_to_string(self.c)}


@dataclass(frozen=True)
class Staircase(SpacerMap):
    """s(j) = (j - 1) * u."""

    u: Scalar

    def values(self, r):
        return [(j - 1) * self.u for j in range(1, r + 1)]

    def to_json(self):
        return {"variant": "staircase", "u": scalar_to_string(self.u)}


@dataclass(frozen=True)
class FractionSplit(SpacerMap):
    """s(j) = 0 for j <= ceil(r/q), s(j) = s on the top (q-1)/q fraction."""

    q: int
    s: Scalar

    def values(self, r):
        cut = -(-r // self.q)  # ceil(r / q)
        return [0 if j <= cut else self.s for j in range(1, r + 1)]

    def to_json(self):
        return {"variant": "fraction_split", "q": self.q, "s": scalar_to_string(self.s)}


@dataclass(frozen=True)
class PairedGaps(SpacerMap):
    """k adjacent pairs (r = 2k): gap g_i above copy 2i-1, separator a_i
    above copy 2i; a_k is the final top spacer."""

    gaps: tuple
    separators: tuple

    def values(self, r):
        k = len(self.gaps)
        if len(self.separators) != k or r != 2 * k:
            raise ConfigurationError("paired gaps need r = 2k with k gaps and k separators")
        out = []
        for i in range(k):
            out.append(self.gaps[i])
            out.append(self.separators[i])
        return out

    def to_json(self):
        return {
            "variant": "paired_gaps",
            "gaps": [scalar_to_string(v) for v in self.gaps],
            "separators": [scalar_to_string(v) for v in self.separators],
        }


@dataclass(frozen=True)
class Symmetrized(SpacerMap):
    """Palindromic respacing of an inner map with r_inner copies.

    The symmetrized stage has r' = 2 r - 1 copies; read bottom to top
    (including the bottom spacer) the gap sequence is

        s(r), s(r-1), ..., s(1), s(1), s(2), ..., s(r),

    which is the reflection of the original around the centre copy.
    """

    inner: SpacerMap
    r_inner: int

    @property
    def bottom_spacer(self):  # type: ignore[override]
        return self.inner.values(self.r_inner)[-1]

    def values(self, r):
        ri = self.r_inner
        if r != 2 * ri - 1:
            raise ConfigurationError(f"symmetrized map needs r = {2 * ri - 1}, got {r}")
        s = self.inner.values(ri)
        out = [s[ri - 1 - j] for j in range(1, ri)]  # s(r-1) .. s(1)
        out.extend(s[j] for j in range(ri))  # s(1) .. s(r)
        return out

    def to_json(self):
        return {
            "variant": "symmetrized",
            "r_inner": self.r_inner,
            "inner": self.inner.to_json(),
        }


# ---------------------------------------------------------------------------
# schedules and stages
# ---------------------------------------------------------------------------


@dataclass
class TowerStage:
    """Exact geometry of stage n, plus the cut data used to build n+1."""

    n: int
    h: Scalar  # height h_n
    w: Scalar  # width w_n
    measure: Scalar  # mu(X_n)
    r: int  # cut number r_n
    spacers: list  # s_n(1) .. s_n(r_n)
    bottom: Scalar  # bottom spacer (0 unless symmetrized)
    offsets: list = field(default_factory=list)  # o_{n,1} .. o_{n,r_n}

    @property
    def tower_measure(self):
        return self.h * self.w

    @property
    def h_next(self):
        return self.offsets[-1] + self.h + self.spacers[-1]

    @property
    def w_next(self):
        return self.w / self.r

    @property
    def spacer_mass_added(self):
        total = self.bottom
        for s in self.spacers:
            total = total + s
        return self.w_next * total

    def offset(self, j: int):
        """o_{n,j}, 1-based."""
        return self.offsets[j - 1]

    def _ints(self):
        """Offsets and height on a common integer scale (rational data
        only): (den, offset numerators, height numerator), cached."""
        cached = getattr(self, "_int_cache", None)
        if cached is None:
            den = self.h.denominator if isinstance(self.h, Fraction) else 1
            for o in self.offsets:
                if isinstance(o, Fraction):
                    den = lcm(den, o.denominator)
            cached = (den, [int(o * den) for o in self.offsets], int(self.h * den))
            object.__setattr__(self, "_int_cache", cached)
        return cached


class Schedule:
    """A deterministic generator n -> (r_n, SpacerMap_n) plus base data.

    ``params`` is called with (n, h_n, w_n) so that spacer maps may depend
    on the geometry built so far; stages are computed in order and cached,
    so the callback sees a consistent, reproducible history.
    """

    def __init__(
        self,
        params: Callable[[int, Scalar, Scalar], tuple],
        h1: Scalar = 1,
        w1: Scalar = 1,
        mode: str = "rational",
        name: str = "custom",
        meta: Optional[dict] = None,
        digit_budget: int = DEFAULT_DIGIT_BUDGET,
    ):
        self._params = params
        self.mode = mode
        self.name = name
        self.meta = meta if meta is not None else {}
        self.h1 = coerce(h1, mode)
        self.w1 = coerce(w1, mode)
        self.digit_budget = digit_budget
        self._stages: list[TowerStage] = []
        self._lock = threading.Lock()
        self._overlap_cache: dict = {}

    # -- stage computation ----------------------------------------------

    def stage(self, n: int) -> TowerStage:
        if n < 1:
            raise ConfigurationError("stage index must be >= 1")
        with self._lock:
            while len(self._stages) < n:
                self._build_next()
            return self._stages[n - 1]

    def _build_next(self):
        m = len(self._stages) + 1
        if m == 1:
            h, w, mu = self.h1, self.w1, self.h1 * self.w1
        else:
            prev = self._stages[-1]
            h = prev.h_next
            w = prev.w_next
            mu = prev.measure + prev.spacer_mass_added
        self._check_budget(h)
        r, smap = self._params(m, h, w)
        if r <= 1:
            raise ConfigurationError(f"r_{m} = {r}; cut numbers must exceed 1")
        spacers = [coerce(v, self.mode) for v in smap.values(r)]
        bottom = coerce(smap.bottom_spacer, self.mode)
        for v in spacers:
            if v < 0:
                raise ConfigurationError(f"negative spacer at stage {m}")
        if bottom < 0:
            raise ConfigurationError(f"negative bottom spacer at stage {m}")
        offsets = [bottom]
        for j in range(r - 1):
            offsets.append(offsets[-1] + h + spacers[j])
        self._stages.append(
            TowerStage(n=m, h=h, w=w, measure=mu, r=r, spacers=spacers, bottom=bottom, offsets=offsets)
        )

    def _check_budget(self, h):
        if isinstance(h, float):
            return
        num = h.a.numerator if hasattr(h, "a") else Fraction(h).numerator
        if num.bit_length() > self.digit_budget:
            raise ResourceError(
                f"height numerator exceeds the digit budget ({self.digit_budget} bits)"
            )

    # -- convenience -----------------------------------------------------

    def overlaps(self, n: int, shift: Scalar, guard: int = 10**6) -> list:
        """Cached :func:`overlap_pairs` for stage n; the overlap structure
        depends on the geometry only, so all correlators on this schedule
        share it."""
        key = (n, shift)
        cached = self._overlap_cache.get(key)
        if cached is None:
            cached = overlap_pairs(self.stage(n), shift, guard=guard)
            if len(self._overlap_cache) < guard:
                self._overlap_cache[key] = cached
        return cached

    def height(self, n: int):
        return self.stage(n).h

    def width(self, n: int):
        return self.stage(n).w


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


@dataclass
class FinitenessVerdict:
    status: str  # "finite-so-far" | "diverged"
    partial_sum: Scalar
    partial_sums: list
    horizon: int


def finiteness_test(schedule: Schedule, horizon: int, budget: Scalar = 1) -> FinitenessVerdict:
    """Partial sums of the finiteness criterion series
    sum_n h_n^{-1} r_n^{-1} sum_j s_n(j).

    Never claims convergence of the full series; reports "diverged" as
    soon as the partial sum exceeds *budget*.
    """
    if horizon < 1:
        raise ConfigurationError("horizon must be >= 1")
    total: Scalar = 0
    sums = []
    status = "finite-so-far"
    for n in range(1, horizon + 1):
        st = schedule.stage(n)
        mass: Scalar = st.bottom
        for s in st.spacers:
            mass = mass + s
        total = total + mass / (st.h * st.r)
        sums.append(total)
        if total > budget:
            status = "diverged"
    return FinitenessVerdict(status=status, partial_sum=total, partial_sums=sums, horizon=horizon)


def overlap_pairs(stage: TowerStage, shift: Scalar, guard: int = 10**6) -> list:
    """All distinct values delta = shift + o_{j'} - o_j with |delta| < h_n,
    each with the number of (j, j') pairs realizing it.

    Offsets are strictly increasing, so the j' admissible for a given j
    form a contiguous window, and both window ends move monotonically
    with j (a single two-pointer sweep, no per-j bisection).
    """
    h = stage.h
    offs = stage.offsets
    r = stage.r
    rational = isinstance(shift, (int, Fraction)) and isinstance(h, (int, Fraction))
    den = 1
    if rational:
        sden, offs_den = (
            shift.denominator if isinstance(shift, Fraction) else 1,
            stage._ints(),
        )
        den = lcm(offs_den[0], sden)
        m = den // offs_den[0]
        offs = offs_den[1] if m == 1 else [o * m for o in offs_den[1]]
        h = offs_den[2] * m
        shift = int(shift * den)
    counts: Counter = Counter()
    a = b = 0
    for j in range(r):
        oj = offs[j]
        lo = oj - shift - h  # need offs[j'] > lo
        hi = oj - shift + h  # need offs[j'] < hi
        while a < r and not offs[a] > lo:
            a += 1
        if b < a:
            b = a
        while b < r and offs[b] < hi:
            b += 1
        base = shift - oj
        for jp in range(a, b):
            counts[base + offs[jp]] += 1
        if len(counts) > guard:
            raise ResourceError(f"overlap blowup at stage {stage.n}: more than {guard} deltas")
    if rational:
        return sorted((Fraction(delta, den), mult) for delta, mult in counts.items())
    return sorted(counts.items())


def symmetrize(schedule: Schedule) -> Schedule:
    """Palindromic respacing: r'_n = 2 r_n - 1, spacers reflected around
    the centre copy, with the original top spacer duplicated underneath
    as a bottom spacer."""

    def params(n, h, w):
        st = schedule.stage(n)
        if st.bottom != 0:
            raise ConfigurationError(
                f"stage {n} already carries a bottom spacer; symmetrizing it is not defined"
            )
        return 2 * st.r - 1, Symmetrized(ExplicitList(tuple(st.spacers)), st.r)

    return Schedule(
        params,
        h1=schedule.h1,
        w1=schedule.w1,
        mode=schedule.mode,
        name=f"symmetrized({schedule.name})",
        meta={"symmetrized_from": schedule.name, **schedule.meta},
        digit_budget=schedule.digit_budget,
    )
