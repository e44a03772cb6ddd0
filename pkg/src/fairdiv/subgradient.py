"""Projected subgradient solver for the weighted maxmin value.

The maxmin value is the minimum over the unit simplex of the convex function
g, whose subgradient at alpha is the maxsum value vector u.  Steps follow a
diminishing rule clipped so that iterates stay strictly inside the simplex;
the mean-centered update then keeps the coordinate sum at one without any
general projection.

Two stopping modes: bracket mode stops once the certified bounds pinch to
epsilon; equitable mode stops once the value vector coordinates agree to
epsilon and returns the best-spread iterate seen.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .bounds import lower_bound
from .partition import PvvResult, WeightedProblem, maxsum_partition

_EXACT_STOP_TOL = 1e-12  # treat g == lb as landing on the optimum


@dataclass(frozen=True)
class StepRule:
    """Diminishing base step with interiority clipping.

    ``kind`` picks the base sequence: scale/(t+1) or scale/sqrt(t+1); both
    vanish while their series diverge.  ``clip`` is the safety margin
    constant: steps shrink to (clip-1)/clip of the largest interior-safe step.
    """

    kind: str = "harmonic"
    scale: float = 0.5
    clip: int = 10

    def __post_init__(self):
        if self.kind not in ("harmonic", "sqrt"):
            raise ValueError("step kind must be 'harmonic' or 'sqrt'")
        if self.scale <= 0:
            raise ValueError("step scale must be positive")
        if self.clip < 2:
            raise ValueError("clip constant must be an integer >= 2")

    def base(self, t: int) -> float:
        if self.kind == "harmonic":
            return self.scale / (t + 1)
        return self.scale / math.sqrt(t + 1)


@dataclass(frozen=True)
class SolverConfig:
    epsilon: float = 1e-3
    max_iterations: int = 50_000
    step_rule: StepRule = StepRule()
    initial_alpha: tuple[float, ...] | None = None
    record_trace: bool = False

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if self.initial_alpha is not None and any(
                a <= 0 for a in self.initial_alpha):
            raise ValueError("initial alpha must be strictly interior")


def clipped_step(t: int, alpha: np.ndarray, u: np.ndarray,
                 rule: StepRule) -> float:
    """Base step at t, shrunk so the next iterate stays strictly interior.

    Only coordinates with u_i above the mean pull alpha toward the boundary;
    if there are none the base step is already safe.
    """
    s = rule.base(t)
    ubar = u.mean()
    above = u > ubar
    if not above.any():
        return s
    tau = (rule.clip - 1) / rule.clip * np.min(
        alpha[above] / (u[above] - ubar))
    return min(s, float(tau))


def update_alpha(alpha: np.ndarray, u: np.ndarray, s: float) -> np.ndarray:
    """Mean-centered subgradient step; preserves the coordinate sum."""
    out = alpha - s * (u - u.mean())
    if np.any(out <= 0.0):
        raise RuntimeError("step was not clipped enough to stay interior")
    return out / out.sum()


@dataclass
class IterationTrace:
    """Per-iterate history: state at t plus the step chosen at t."""

    t: list[int] = field(default_factory=list)
    ub: list[float] = field(default_factory=list)
    lb: list[float] = field(default_factory=list)
    g: list[float] = field(default_factory=list)
    vbar: list[float] = field(default_factory=list)
    step: list[float] = field(default_factory=list)
    alpha: list[np.ndarray] = field(default_factory=list)
    u: list[np.ndarray] = field(default_factory=list)

    def append(self, t, ub, lb, g, vbar, step, alpha, u):
        self.t.append(t)
        self.ub.append(ub)
        self.lb.append(lb)
        self.g.append(g)
        self.vbar.append(vbar)
        self.step.append(step)
        self.alpha.append(alpha)
        self.u.append(u)

    def __len__(self) -> int:
        return len(self.t)

    def to_csv(self, out) -> None:
        m = len(self.alpha[0]) if self.alpha else 0
        cols = (["t", "ub", "lb", "g", "vbar", "step"]
                + [f"alpha_{j + 1}" for j in range(m)]
                + [f"u_{j + 1}" for j in range(m)])
        out.write(",".join(cols) + "\n")
        for i in range(len(self)):
            row = [str(self.t[i])]
            row += [_fmt(v) for v in (self.ub[i], self.lb[i], self.g[i],
                                      self.vbar[i], self.step[i])]
            row += [_fmt(v) for v in self.alpha[i]]
            row += [_fmt(v) for v in self.u[i]]
            out.write(",".join(row) + "\n")

    def to_csv_string(self) -> str:
        buf = io.StringIO()
        self.to_csv(buf)
        return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.6g}"


@dataclass(frozen=True)
class SolveResult:
    lower: float
    upper: float
    alpha: np.ndarray
    pvv: PvvResult
    iterations: int
    converged: bool
    trace: IterationTrace | None = None

    @property
    def allocation(self):
        return self.pvv.allocation

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    @property
    def width(self) -> float:
        return self.upper - self.lower


def _initial_alpha(problem: WeightedProblem, config: SolverConfig) -> np.ndarray:
    if config.initial_alpha is None:
        return np.full(problem.m, 1.0 / problem.m)
    alpha = np.asarray(config.initial_alpha, dtype=float)
    if alpha.shape != (problem.m,):
        raise ValueError("initial alpha size does not match the structure")
    return alpha


def _solve(problem: WeightedProblem, config: SolverConfig,
           equitable: bool) -> SolveResult:
    rule = config.step_rule
    totals = problem.totals
    alpha = _initial_alpha(problem, config)

    pvv = maxsum_partition(problem, alpha)
    ub = pvv.g_value
    lb = lower_bound(pvv, totals)
    best_pvv, best_spread = pvv, pvv.spread
    trace = IterationTrace() if config.record_trace else None

    t = 0
    while True:
        if equitable:
            done = pvv.spread < config.epsilon
        else:
            done = (ub - lb < config.epsilon
                    or pvv.g_value - lb < _EXACT_STOP_TOL)
        step = clipped_step(t, alpha, pvv.u, rule)
        if trace is not None:
            trace.append(t, ub, lb, pvv.g_value, lower_bound(pvv, totals),
                         step, alpha.copy(), pvv.u.copy())
        if done or t >= config.max_iterations:
            break
        alpha = update_alpha(alpha, pvv.u, step)
        pvv = maxsum_partition(problem, alpha)
        ub = min(ub, pvv.g_value)
        lb = max(lb, lower_bound(pvv, totals))
        if pvv.spread < best_spread:
            best_pvv, best_spread = pvv, pvv.spread
        t += 1

    if equitable:
        ret = best_pvv
        converged = best_spread < config.epsilon
    else:
        ret = pvv
        converged = done
    return SolveResult(lower=lb, upper=ub, alpha=ret.alpha, pvv=ret,
                       iterations=t, converged=converged, trace=trace)


def solve_value(problem: WeightedProblem,
                config: SolverConfig = SolverConfig()) -> SolveResult:
    """Shrink the certified bracket around the maxmin value to epsilon."""
    return _solve(problem, config, equitable=False)


def solve_partition(problem: WeightedProblem,
                    config: SolverConfig = SolverConfig()) -> SolveResult:
    """Drive the value vector to equal coordinates; returns the best-spread
    iterate so an unconverged run still yields the most equitable partition
    seen."""
    return _solve(problem, config, equitable=True)
