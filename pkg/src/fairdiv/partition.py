"""Weighted maxsum partitions of the gridded cake.

For coefficients alpha on the unit simplex, assigning every cell to a
coalition maximizing alpha_j * f_j^w at the cell midpoint solves the maxsum
problem max sum_j alpha_j * mu_j^w(B_j) over partitions.  The resulting value
vector u is both a point on the Pareto border of the partition range and a
subgradient of g(alpha) = integral of max_j alpha_j f_j^w.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .measures import Grid, MeasureTable, coalition_table

#: how far off the simplex an alpha may be before it is rejected
SIMPLEX_TOL = 1e-12


@dataclass(frozen=True)
class WeightedProblem:
    """A coalition structure with weights over a shared measure table.

    ``structure`` lists m pairwise-disjoint coalitions (sorted tuples of
    0-based player ids); ``table`` rows are aligned with it.  The solver-side
    discretization uses midpoint densities throughout, so the per-cell values
    and the totals below are exactly consistent with g evaluations.
    """

    structure: tuple[tuple[int, ...], ...]
    weights: tuple[float, ...]
    table: MeasureTable

    def __post_init__(self):
        if len(self.structure) < 1:
            raise ValueError("need at least one coalition")
        if len(self.weights) != len(self.structure):
            raise ValueError("one weight per coalition required")
        if any(w <= 0 for w in self.weights):
            raise ValueError("weights must be strictly positive")
        seen: set[int] = set()
        for s in self.structure:
            if seen & set(s):
                raise ValueError("coalitions must be pairwise disjoint")
            seen |= set(s)
        if self.table.coalitions != self.structure:
            raise ValueError("table rows must match the coalition structure")

    @property
    def m(self) -> int:
        return len(self.structure)

    @property
    def grid(self) -> Grid:
        return self.table.grid

    @cached_property
    def weighted_densities(self) -> np.ndarray:
        """f_j^w at cell midpoints, shape (m, cells)."""
        w = np.asarray(self.weights, dtype=float)
        return self.table.densities / w[:, None]

    @cached_property
    def cell_values(self) -> np.ndarray:
        """Weighted mass of each cell for each coalition (midpoint rule)."""
        return self.weighted_densities * self.grid.width

    @cached_property
    def totals(self) -> np.ndarray:
        """mu_j^w of the whole cake, in the solver discretization."""
        return self.cell_values.sum(axis=1)


def weighted_problem(players, structure, weights, grid: Grid) -> WeightedProblem:
    """Convenience builder: measure the coalitions, then wrap them up."""
    structure = tuple(tuple(sorted(set(s))) for s in structure)
    table = coalition_table(players, structure, grid)
    return WeightedProblem(structure=structure,
                           weights=tuple(float(w) for w in weights),
                           table=table)


@dataclass(frozen=True)
class Allocation:
    """Assignment of every grid cell to one coalition index."""

    grid: Grid
    assignment: np.ndarray

    def cells_of(self, j: int) -> np.ndarray:
        return np.nonzero(self.assignment == j)[0]

    def intervals(self) -> dict[int, list[tuple[float, float]]]:
        """Merged [a,b] intervals per coalition index."""
        edges = self.grid.edges
        out: dict[int, list[tuple[float, float]]] = {}
        assign = self.assignment
        start = 0
        for k in range(1, len(assign) + 1):
            if k == len(assign) or assign[k] != assign[start]:
                j = int(assign[start])
                out.setdefault(j, []).append((float(edges[start]), float(edges[k])))
                start = k
        return out


@dataclass(frozen=True)
class PvvResult:
    """Maxsum partition at alpha: the allocation, its value vector u, and g."""

    alpha: np.ndarray
    allocation: Allocation
    u: np.ndarray
    g_value: float

    @property
    def spread(self) -> float:
        return float(self.u.max() - self.u.min())


def _check_alpha(alpha, m: int) -> np.ndarray:
    a = np.asarray(alpha, dtype=float)
    if a.shape != (m,):
        raise ValueError(f"alpha must have {m} components")
    if np.any(a < 0.0):
        raise ValueError("alpha components must be nonnegative")
    if abs(a.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError("alpha must sum to 1")
    return a


def maxsum_partition(problem: WeightedProblem, alpha) -> PvvResult:
    """Cell-wise argmax partition for alpha; ties go to the lowest index."""
    alpha = _check_alpha(alpha, problem.m)
    scores = alpha[:, None] * problem.cell_values
    assignment = scores.argmax(axis=0)
    cols = np.arange(problem.grid.cell_count)
    g = float(scores[assignment, cols].sum())
    u = np.bincount(assignment,
                    weights=problem.cell_values[assignment, cols],
                    minlength=problem.m)
    return PvvResult(alpha=alpha,
                     allocation=Allocation(problem.grid, assignment),
                     u=u, g_value=g)


def g_eval(problem: WeightedProblem, alpha) -> float:
    """g(alpha) = integral of max_j alpha_j f_j^w; convex in alpha."""
    return maxsum_partition(problem, alpha).g_value
