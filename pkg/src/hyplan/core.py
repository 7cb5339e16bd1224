"""Hybrid time bookkeeping, solution pairs, concatenation, and validation.

A solution to a hybrid system is parameterized by hybrid time (t, j): t is
elapsed flow time, j is the number of jumps taken so far.  Solutions are
stored as discretized sample sequences; all structural checks operate at
sample resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import EmptyOperand, EmptySolutionPair, EndpointMismatch
from .integrators import rk4_step

TAU_CONCAT_DEFAULT = 1e-9


@dataclass(frozen=True, order=True)
class HybridTime:
    """A point (t, j) in hybrid time: flow seconds t and jump count j.

    Ordering is lexicographic, which matches the ordering of samples along
    any solution.
    """

    t: float
    j: int

    def __post_init__(self):
        if self.t < 0:
            raise ValueError(f"flow time must be nonnegative, got {self.t}")
        if self.j < 0:
            raise ValueError(f"jump count must be nonnegative, got {self.j}")

    def shifted(self, dt: float, dj: int) -> "HybridTime":
        return HybridTime(self.t + dt, self.j + dj)


@dataclass(frozen=True)
class HybridTimeDomain:
    """An ordered union of intervals ([t_start, t_end], j).

    Consecutive entries share an endpoint in t and increment j by one.
    Zero-length intervals are allowed (consecutive jumps at the same t).
    """

    intervals: tuple  # of (t_start, t_end, j)

    def __post_init__(self):
        iv = self.intervals
        for (a, b, j) in iv:
            if a > b:
                raise ValueError(f"interval ({a}, {b}, {j}) has t_start > t_end")
        for k in range(len(iv) - 1):
            if iv[k][1] != iv[k + 1][0]:
                raise ValueError("consecutive intervals must share a t endpoint")
            if iv[k + 1][2] != iv[k][2] + 1:
                raise ValueError("j must increase by exactly 1 across intervals")

    @property
    def max_time(self) -> HybridTime:
        a, b, j = self.intervals[-1]
        return HybridTime(b, j)

    @property
    def min_time(self) -> HybridTime:
        a, b, j = self.intervals[0]
        return HybridTime(a, j)

    def shifted(self, dt: float, dj: int) -> "HybridTimeDomain":
        return HybridTimeDomain(
            tuple((a + dt, b + dt, j + dj) for (a, b, j) in self.intervals)
        )

    def union_with(self, other: "HybridTimeDomain") -> "HybridTimeDomain":
        """Union of this domain with one starting where this one ends."""
        a, b, j = other.intervals[0]
        if (a, j) != (self.intervals[-1][1], self.intervals[-1][2]):
            raise ValueError("domains do not abut")
        merged = (self.intervals[-1][0], b, j)
        return HybridTimeDomain(self.intervals[:-1] + (merged,) + other.intervals[1:])


def _frozen(arr) -> np.ndarray:
    out = np.asarray(arr, dtype=float).copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Sample:
    """One discretized point of a solution pair: hybrid time, state, input."""

    time: HybridTime
    state: np.ndarray
    input: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "state", _frozen(self.state))
        object.__setattr__(self, "input", _frozen(self.input))

    def shifted(self, dt: float, dj: int) -> "Sample":
        return Sample(self.time.shifted(dt, dj), self.state, self.input)


@dataclass(frozen=True)
class SolutionPair:
    """A discretized hybrid arc with its input signal.

    Between consecutive samples either t strictly increases with j fixed
    (a flow step) or t is unchanged and j increments by one (a jump step).
    """

    samples: tuple

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise EmptySolutionPair("a SolutionPair needs at least one sample")
        prev = self.samples[0]
        for s in self.samples[1:]:
            dt = s.time.t - prev.time.t
            dj = s.time.j - prev.time.j
            flow_step = dt > 0 and dj == 0
            jump_step = dt == 0 and dj == 1
            if not (flow_step or jump_step):
                raise ValueError(
                    f"invalid step {prev.time} -> {s.time}: "
                    "expected flow (t up, j fixed) or jump (t fixed, j+1)"
                )
            prev = s

    @property
    def first(self) -> Sample:
        return self.samples[0]

    @property
    def last(self) -> Sample:
        return self.samples[-1]

    @property
    def phase_boundaries(self) -> tuple:
        """Indices k such that the step k -> k+1 is a jump."""
        out = []
        for k in range(len(self.samples) - 1):
            if self.samples[k + 1].time.j > self.samples[k].time.j:
                out.append(k)
        return tuple(out)

    @property
    def jump_count(self) -> int:
        return self.samples[-1].time.j - self.samples[0].time.j

    def shifted(self, dt: float, dj: int) -> "SolutionPair":
        return SolutionPair(tuple(s.shifted(dt, dj) for s in self.samples))


@dataclass(frozen=True)
class HybridSystem:
    """Behavioral definition of a hybrid system H = (C, f, D, g).

    All maps and predicates are pure.  Predicates take (state, input);
    every bundled example system ignores the input in its set tests.
    ``jump_set_sampler`` is an optional hook producing states in D for
    systems whose jump set has zero measure in the state box.
    """

    name: str
    state_dim: int
    input_dim: int
    state_bounds: tuple  # per-dim (min, max)
    flow_map: Callable[[np.ndarray, np.ndarray], np.ndarray]
    jump_map: Callable[[np.ndarray, np.ndarray], np.ndarray]
    in_flow_set: Callable[[np.ndarray, np.ndarray], bool]
    in_jump_set: Callable[[np.ndarray, np.ndarray], bool]
    in_unsafe_set: Callable[[np.ndarray, np.ndarray], bool]
    flow_input_bounds: tuple  # per-dim (min, max), length input_dim
    jump_input_bounds: tuple
    jump_set_sampler: Optional[Callable] = None

    def __post_init__(self):
        for bounds, label in (
            (self.state_bounds, "state_bounds"),
            (self.flow_input_bounds, "flow_input_bounds"),
            (self.jump_input_bounds, "jump_input_bounds"),
        ):
            for lo, hi in bounds:
                if lo > hi:
                    raise ValueError(f"{label}: min {lo} > max {hi}")

    def zero_input(self) -> np.ndarray:
        return np.zeros(self.input_dim)

    # State-only set projections, evaluated at zero input.  The bundled
    # systems define membership on the state alone, so this is exact for
    # them; systems with genuinely input-dependent sets should sample D
    # through jump_set_sampler.
    def state_in_flow_set(self, x: np.ndarray) -> bool:
        return self.in_flow_set(x, self.zero_input())

    def state_in_jump_set(self, x: np.ndarray) -> bool:
        return self.in_jump_set(x, self.zero_input())


def domain_of(sp: SolutionPair) -> HybridTimeDomain:
    """Interval decomposition of the hybrid time domain induced by sp."""
    samples = sp.samples
    intervals = []
    start_t = samples[0].time.t
    cur_j = samples[0].time.j
    last_t = start_t
    for s in samples[1:]:
        if s.time.j == cur_j:
            last_t = s.time.t
        else:
            intervals.append((start_t, last_t, cur_j))
            start_t = s.time.t
            last_t = s.time.t
            cur_j = s.time.j
    intervals.append((start_t, last_t, cur_j))
    return HybridTimeDomain(tuple(intervals))


def concatenate(
    sp1: SolutionPair, sp2: SolutionPair, tau: float = TAU_CONCAT_DEFAULT
) -> SolutionPair:
    """Concatenate sp2 onto sp1, Minkowski-shifting sp2's domain.

    The shift aligns sp2's initial hybrid time with sp1's terminal hybrid
    time; for an sp2 rooted at (0, 0) this is exactly a shift by
    max dom sp1.  The sample at the junction is taken from sp2 (its input
    belongs to the incoming edge).
    """
    if sp1 is None or sp2 is None:
        raise EmptyOperand("concatenate needs two solution pairs")
    end1, start2 = sp1.last, sp2.first
    err = float(np.max(np.abs(end1.state - start2.state))) if end1.state.size else 0.0
    if err > tau:
        raise EndpointMismatch(
            f"terminal/initial states differ by {err:.3e} > {tau:.3e}"
        )
    dt = end1.time.t - start2.time.t
    dj = end1.time.j - start2.time.j
    shifted2 = sp2.shifted(dt, dj)
    return SolutionPair(sp1.samples[:-1] + shifted2.samples)


@dataclass(frozen=True)
class ValidationTolerances:
    flow_residual: float = 1e-6
    jump_residual: float = 1e-9


@dataclass(frozen=True)
class ValidationIssue:
    index: int  # sample index of the left end of the offending step
    code: str
    detail: str


VALIDATION_CODES = (
    "DomainMonotonicity",
    "InitialConditionViolation",
    "FlowOutsideFlowSet",
    "FlowResidual",
    "JumpOutsideJumpSet",
    "JumpMapMismatch",
)


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.issues

    def add(self, index: int, code: str, detail: str):
        self.issues.append(ValidationIssue(index, code, detail))

    def codes(self):
        return {i.code for i in self.issues}


def validate_solution_pair(
    sp: SolutionPair,
    sys: HybridSystem,
    tol: ValidationTolerances = ValidationTolerances(),
) -> ValidationReport:
    """Check the solution-pair conditions at sample resolution.

    Checked per step: flow-set membership of interior flow samples, flow
    residual against the simulator's own RK4 rule, jump pre-state
    membership in D, and jump consistency against the jump map.  Local
    absolute continuity and Lebesgue measurability have no finite-sample
    analogue and are not checked.
    """
    report = ValidationReport()
    samples = sp.samples

    s0 = samples[0]
    if not (sys.in_flow_set(s0.state, s0.input) or sys.in_jump_set(s0.state, s0.input)):
        report.add(0, "InitialConditionViolation", "initial sample not in C union D")

    # Step classification; SolutionPair construction already enforces
    # monotonicity, but a pair parsed from disk is re-checked here.
    n = len(samples)
    for k in range(n - 1):
        a, b = samples[k], samples[k + 1]
        dt = b.time.t - a.time.t
        dj = b.time.j - a.time.j
        if dt > 0 and dj == 0:
            pred = rk4_step(sys.flow_map, a.state, a.input, dt)
            resid = float(np.linalg.norm((b.state - pred) / dt))
            if resid > tol.flow_residual:
                report.add(k, "FlowResidual", f"residual {resid:.3e}")
            interior = (
                k + 2 < n
                and samples[k + 2].time.j == b.time.j
                and samples[k + 2].time.t > b.time.t
            )
            if interior and not sys.in_flow_set(b.state, b.input):
                report.add(k + 1, "FlowOutsideFlowSet", "interior flow sample not in C")
        elif dt == 0 and dj == 1:
            if not sys.in_jump_set(a.state, a.input):
                report.add(k, "JumpOutsideJumpSet", "pre-jump sample not in D")
            mapped = sys.jump_map(a.state, a.input)
            err = float(np.linalg.norm(b.state - mapped))
            if err > tol.jump_residual:
                report.add(k, "JumpMapMismatch", f"|x+ - g(x,u)| = {err:.3e}")
        else:
            report.add(k, "DomainMonotonicity", f"bad step {a.time} -> {b.time}")
    return report
