"""Time-parameterized isotopies, the countable-composition scheduler, and
the convergence / injectivity probes.

A ``MoveSequence`` yields stages (H_k, V_k): an isotopy supported in a box.
``truncated_map`` composes the first n time-1 maps; ``glue_schedule``
compresses the first n stages into a single isotopy on a strictly
increasing time grid; ``eval_limit_isotopy`` evaluates the countable
composition at any time, including the limit time t = 1 via the
settled / tolerance-converged / budget trichotomy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import Box, PLCurve, Point3, union_diameter
from .maps import CompositeMap, IdentityMap, LocalMap


@dataclass(frozen=True)
class Isotopy:
    """A time-parameterized family of maps, identity at t = 0, supported
    in a fixed box at every time."""

    support: Box
    map_at: Callable[[float], LocalMap]

    def eval(self, t: float, p: Point3) -> Point3:
        return self.map_at(t).apply(p)

    def time_one(self) -> LocalMap:
        return self.map_at(1.0)


@dataclass(frozen=True)
class Schedule:
    """Strictly increasing time grid t_k in (0, 1) with limit 1.

    The default is t_k = 1 - 2^{-k}; t_0 = 0 always.
    """

    times: Callable[[int], float] = lambda k: 1.0 - 2.0 ** (-k)

    def time(self, k: int) -> float:
        if k == 0:
            return 0.0
        t = self.times(k)
        if not (0.0 < t < 1.0):
            raise ValueError(f"schedule time t_{k} = {t} outside (0,1)")
        return t

    def stage_of(self, t: float, max_k: int) -> int:
        """The stage k with t in [t_{k-1}, t_k), searching up to max_k."""
        if not (0.0 <= t < 1.0):
            raise ValueError(f"t={t} has no finite stage")
        for k in range(1, max_k + 1):
            if t < self.time(k):
                return k
        raise ValueError(f"t={t} beyond stage horizon {max_k}")


class GeneratorExhausted(Exception):
    """Raised when a finite move sequence is asked for a stage past its end."""


@dataclass
class MoveSequence:
    """A replayable stream of stages (H_k, V_k) inside a compact container.

    ``stage_fn`` is 1-based and must be pure; stages are memoized.
    ``length`` is None for unbounded streams.
    """

    stage_fn: Callable[[int], tuple[Isotopy, Box]]
    container: Box
    length: int | None = None
    _cache: dict = field(default_factory=dict, repr=False)

    def stage(self, k: int) -> tuple[Isotopy, Box]:
        if k < 1:
            raise ValueError(f"stage index must be >= 1, got {k}")
        if self.length is not None and k > self.length:
            raise GeneratorExhausted(f"stage {k} past sequence length {self.length}")
        if k not in self._cache:
            self._cache[k] = self.stage_fn(k)
        return self._cache[k]

    def clip(self, k: int) -> int:
        """k clipped to the available number of stages."""
        return k if self.length is None else min(k, self.length)

    def boxes(self, first: int, last: int) -> list[Box]:
        return [self.stage(k)[1] for k in range(first, last + 1)]

    def time_one_map(self, k: int) -> LocalMap:
        return self.stage(k)[0].time_one()


@dataclass(frozen=True)
class HypothesisReport:
    """Verdict on the support-shrinking and containment conditions."""

    tail_diameters: tuple[tuple[int, float], ...]
    containment_ok: bool
    disjoint_supports: bool
    verdict: str  # "pass" | "fail"
    first_violation: int | None  # 1 = tail diameters, 2 = containment

    def to_lines(self) -> list[str]:
        tails = "; ".join(f"{n}:{d:.17g}" for n, d in self.tail_diameters)
        return [
            f"tail_diameters: {tails}",
            f"containment_ok: {str(self.containment_ok).lower()}",
            f"disjoint_supports: {str(self.disjoint_supports).lower()}",
            f"verdict: {self.verdict}"
            + (f" (condition {self.first_violation})" if self.first_violation else ""),
        ]


@dataclass(frozen=True)
class ProbeReport:
    """Numerical evidence from the convergence and injectivity probes."""

    sup_deviation: float
    min_image_separation: float
    unsettled_points: int
    budget_exhausted: bool

    def __post_init__(self) -> None:
        if self.sup_deviation < 0 or self.min_image_separation < 0 or self.unsettled_points < 0:
            raise ValueError("probe report fields must be nonnegative")

    def to_lines(self) -> list[str]:
        return [
            f"sup_deviation: {self.sup_deviation:.17g}",
            f"min_image_separation: {self.min_image_separation:.17g}",
            f"unsettled_points: {self.unsettled_points}",
            f"budget_exhausted: {str(self.budget_exhausted).lower()}",
        ]


# -- finite truncations ------------------------------------------------------


def truncated_map(seq: MoveSequence, n: int) -> LocalMap:
    """Composite of the first n time-1 maps, applied in stage order."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if n == 0:
        return IdentityMap(support=seq.container)
    parts = [seq.time_one_map(k) for k in range(1, n + 1)]
    return CompositeMap(parts, support=seq.container)


def apply_truncated(seq: MoveSequence, n: int, pts: np.ndarray) -> np.ndarray:
    out = np.asarray(pts, dtype=float)
    for k in range(1, n + 1):
        out = seq.time_one_map(k).apply_array(out)
    return out


def map_curve(m: LocalMap, curve: PLCurve, max_seg_len: float | None = None) -> PLCurve:
    """Image of a curve under a map, optionally densifying first so the
    piecewise structure of the map is resolved."""
    c = curve if max_seg_len is None else curve.densified(max_seg_len)
    img = m.apply_array(c.as_array())
    return PLCurve(tuple(Point3.from_array(row) for row in img), closed=c.closed)


# -- hypothesis checking -----------------------------------------------------


def tail_boxes(seq: MoveSequence, after: int, horizon: int) -> list[Box]:
    """Supports V_k for k in (after, horizon], clipped to the stream length."""
    last = seq.clip(horizon)
    if after >= last:
        return []
    return seq.boxes(after + 1, last)


def check_hypotheses(seq: MoveSequence, horizon: int, threshold: float) -> HypothesisReport:
    """Tail-union diameters, containment in the compact container, and the
    pairwise-disjointness witness."""
    if horizon < 2:
        raise ValueError(f"horizon must be >= 2, got {horizon}")
    last = seq.clip(horizon)
    boxes = seq.boxes(1, last)
    tails = tuple(
        (n, union_diameter(boxes[n - 1 :])) for n in range(1, last + 1)
    )
    containment_ok = all(seq.container.contains_box(b, strict=True) for b in boxes)
    disjoint = True
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if boxes[i].intersects(boxes[j]):
                disjoint = False
                break
        if not disjoint:
            break
    first_violation: int | None = None
    if tails[-1][1] >= threshold:
        first_violation = 1
    elif not containment_ok:
        first_violation = 2
    verdict = "pass" if first_violation is None else "fail"
    return HypothesisReport(
        tail_diameters=tails,
        containment_ok=containment_ok,
        disjoint_supports=disjoint,
        verdict=verdict,
        first_violation=first_violation,
    )


# -- limit evaluation --------------------------------------------------------


@dataclass(frozen=True)
class LimitValue:
    point: Point3
    status: str  # exact | settled | tol-converged | budget-exhausted
    steps: int


def eval_limit_isotopy(
    seq: MoveSequence,
    sched: Schedule,
    t: float,
    p: Point3,
    tol: float,
    k_budget: int = 60,
) -> LimitValue:
    """Value of the countably-composed isotopy at (t, p).

    For t < 1 the evaluation is exact and finite: stage k with
    t in [t_{k-1}, t_k) is evaluated at its local time after the first
    k-1 time-1 maps.  At t = 1 the composition is iterated until the
    running image escapes all later supports (settled, exact) or the
    remaining tail union has diameter below tol (tol-converged), up to
    k_budget stages.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not (0.0 <= t <= 1.0):
        raise ValueError(f"t={t} outside [0,1]")
    if t < 1.0:
        k = sched.stage_of(t, max_k=seq.clip(k_budget))
        t0, t1 = sched.time(k - 1), sched.time(k)
        local = (t - t0) / (t1 - t0)
        x = apply_truncated(seq, k - 1, p.as_array()[None, :])
        iso, _ = seq.stage(k)
        x = iso.map_at(local).apply_array(x)
        return LimitValue(Point3.from_array(x[0]), "exact", k)
    horizon = seq.clip(k_budget)
    x = p.as_array()[None, :]
    for k in range(0, horizon + 1):
        later = tail_boxes(seq, k, horizon)
        if not later:
            # a finite stream truly ends; an unbounded one just ran out of budget
            if seq.length is not None:
                return LimitValue(Point3.from_array(x[0]), "settled", k)
            break
        if not any(b.contains_array(x)[0] for b in later):
            return LimitValue(Point3.from_array(x[0]), "settled", k)
        if union_diameter(later) < tol:
            return LimitValue(Point3.from_array(x[0]), "tol-converged", k)
        if k == horizon:
            break
        x = seq.time_one_map(k + 1).apply_array(x)
    return LimitValue(Point3.from_array(x[0]), "budget-exhausted", horizon)


# -- probes ------------------------------------------------------------------


def uniform_convergence_probe(
    seq: MoveSequence, n: int, m: int, grid: Sequence[Point3]
) -> float:
    """Max over the grid of d(composite_n(y), composite_m(y))."""
    if not grid:
        raise ValueError("grid must be non-empty")
    if m < n:
        raise ValueError("need m >= n")
    pts = np.array([g.as_array() for g in grid])
    xn = apply_truncated(seq, n, pts)
    xm = xn.copy()
    for k in range(n + 1, m + 1):
        xm = seq.time_one_map(k).apply_array(xm)
    return float(np.sqrt(((xn - xm) ** 2).sum(-1)).max())


def injectivity_probe(
    seq: MoveSequence, n: int, pairs: Sequence[tuple[Point3, Point3]]
) -> float:
    """Min over pairs of the image separation under the n-stage composite."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    a = np.array([p[0].as_array() for p in pairs])
    b = np.array([p[1].as_array() for p in pairs])
    ia = apply_truncated(seq, n, a)
    ib = apply_truncated(seq, n, b)
    return float(np.sqrt(((ia - ib) ** 2).sum(-1)).min())


def infinite_motion_census(
    seq: MoveSequence,
    n_max: int,
    samples: Sequence[Point3],
    horizon: int | None = None,
) -> int:
    """Count of samples whose n_max-stage image still lies in a later
    support (checked up to the horizon)."""
    if not samples:
        return 0
    if horizon is None:
        horizon = n_max + 20
    n_max = seq.clip(n_max)
    pts = np.array([s.as_array() for s in samples])
    img = apply_truncated(seq, n_max, pts)
    later = tail_boxes(seq, n_max, horizon)
    if not later:
        return 0
    trapped = np.zeros(len(samples), dtype=bool)
    for b in later:
        trapped |= b.contains_array(img)
    return int(trapped.sum())


# -- schedule gluing ---------------------------------------------------------


def glue_schedule(seq: MoveSequence, sched: Schedule, n: int) -> Isotopy:
    """The n-stage time-compressed gluing: stage k runs over
    [t_{k-1}, t_k], and the map freezes at t >= t_n."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    t_n = sched.time(n)

    def map_at(t: float) -> LocalMap:
        if not (0.0 <= t <= 1.0):
            raise ValueError(f"t={t} outside [0,1]")
        if t >= t_n:
            return truncated_map(seq, n)
        k = sched.stage_of(t, max_k=n)
        t0, t1 = sched.time(k - 1), sched.time(k)
        local = (t - t0) / (t1 - t0)
        iso, _ = seq.stage(k)
        parts = [seq.time_one_map(j) for j in range(1, k)] + [iso.map_at(local)]
        return CompositeMap(parts, support=seq.container)

    return Isotopy(support=seq.container, map_at=map_at)


def seam_values(
    seq: MoveSequence, sched: Schedule, k: int, pts: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """One-sided values of the glued isotopy at the seam t_k.

    Left: stage k completed at its local time 1.  Right: stage k+1 entered
    at its local time 0.  Both are exact one-sided limits.
    """
    base = apply_truncated(seq, k - 1, np.asarray(pts, dtype=float))
    left = seq.stage(k)[0].map_at(1.0).apply_array(base)
    right_iso = seq.stage(k + 1)[0]
    right = right_iso.map_at(0.0).apply_array(seq.time_one_map(k).apply_array(base))
    return left, right
