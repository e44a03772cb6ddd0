"""Player preferences as densities on the cake [0,1], and their discretization.

A player's preference is a probability density on [0,1] (uniform, beta, or
piecewise constant).  A coalition values a piece by the best joint split of
it among its members, which makes the coalition density the pointwise max of
the member densities.  Everything downstream works on a uniform grid, so this
module also turns densities into per-cell masses.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import optimize, stats

#: absolute tolerance for "this density integrates to 1"
MASS_TOL = 1e-9

_EDGE_EPS = 1e-12  # evaluation offset to dodge infinite beta densities at 0/1


@dataclass(frozen=True)
class DensitySpec:
    """A preference density on [0,1].  Use the factory classmethods."""

    kind: str
    a: float | None = None
    b: float | None = None
    breakpoints: tuple[float, ...] | None = None
    values: tuple[float, ...] | None = None

    @classmethod
    def uniform(cls) -> "DensitySpec":
        return cls(kind="uniform")

    @classmethod
    def beta(cls, a: float, b: float) -> "DensitySpec":
        return cls(kind="beta", a=float(a), b=float(b))

    @classmethod
    def piecewise(cls, breakpoints, values) -> "DensitySpec":
        """Piecewise-constant density; renormalized to total mass 1 on load."""
        bp = tuple(float(x) for x in breakpoints)
        vals = np.asarray(values, dtype=float)
        if len(bp) < 2 or len(vals) != len(bp) - 1:
            raise ValueError("need k+1 breakpoints for k values")
        widths = np.diff(bp)
        total = float(np.dot(vals, widths))
        if total <= 0:
            raise ValueError("piecewise density must have positive total mass")
        if abs(total - 1.0) > 1e-12:  # keep reloads bit-identical
            vals = vals / total
        return cls(kind="piecewise", breakpoints=bp,
                   values=tuple(float(v) for v in vals))

    def __post_init__(self):
        if self.kind == "uniform":
            pass
        elif self.kind == "beta":
            if self.a is None or self.b is None or self.a <= 0 or self.b <= 0:
                raise ValueError("beta parameters must be positive")
        elif self.kind == "piecewise":
            bp = np.asarray(self.breakpoints, dtype=float)
            vals = np.asarray(self.values, dtype=float)
            if bp[0] != 0.0 or bp[-1] != 1.0:
                raise ValueError("breakpoints must start at 0 and end at 1")
            if np.any(np.diff(bp) <= 0):
                raise ValueError("breakpoints must be strictly increasing")
            if np.any(vals < 0):
                raise ValueError("piecewise values must be nonnegative")
            if abs(float(np.dot(vals, np.diff(bp))) - 1.0) > MASS_TOL:
                raise ValueError("piecewise density must integrate to 1 "
                                 "(use DensitySpec.piecewise to normalize)")
        else:
            raise ValueError(f"unknown density kind {self.kind!r}")


def density_eval(spec: DensitySpec, x):
    """Evaluate the density at x (scalar or array), x must lie in [0,1]."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0) or np.any(xs > 1.0):
        raise ValueError("density argument outside [0,1]")
    if spec.kind == "uniform":
        out = np.ones_like(xs)
    elif spec.kind == "beta":
        out = stats.beta.pdf(xs, spec.a, spec.b)
    else:
        bp = np.asarray(spec.breakpoints)
        idx = np.clip(np.searchsorted(bp, xs, side="right") - 1,
                      0, len(spec.values) - 1)
        out = np.asarray(spec.values)[idx]
    if np.ndim(x) == 0:
        return float(out)
    return out


def density_cdf(spec: DensitySpec, x):
    """Cumulative mass of [0, x]; closed form for every supported kind."""
    xs = np.asarray(x, dtype=float)
    if np.any(xs < 0.0) or np.any(xs > 1.0):
        raise ValueError("density argument outside [0,1]")
    if spec.kind == "uniform":
        out = xs.copy()
    elif spec.kind == "beta":
        out = stats.beta.cdf(xs, spec.a, spec.b)
    else:
        bp = np.asarray(spec.breakpoints)
        vals = np.asarray(spec.values)
        cums = np.concatenate([[0.0], np.cumsum(vals * np.diff(bp))])
        idx = np.clip(np.searchsorted(bp, xs, side="right") - 1,
                      0, len(vals) - 1)
        out = cums[idx] + vals[idx] * (xs - bp[idx])
    if np.ndim(x) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class Grid:
    """Uniform grid of cells partitioning [0,1]."""

    cell_count: int

    def __post_init__(self):
        if self.cell_count < 1:
            raise ValueError("cell_count must be positive")

    @cached_property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.cell_count + 1)

    @cached_property
    def midpoints(self) -> np.ndarray:
        return (np.arange(self.cell_count) + 0.5) / self.cell_count

    @property
    def width(self) -> float:
        return 1.0 / self.cell_count


def cell_masses(spec: DensitySpec, grid: Grid) -> np.ndarray:
    """Per-cell masses as CDF differences; they sum to 1 up to rounding."""
    cdf = density_cdf(spec, grid.edges)
    return np.diff(cdf)


@dataclass(frozen=True)
class MeasureTable:
    """Per-cell masses and midpoint densities for a set of coalitions.

    Rows are aligned with ``coalitions``; each coalition is a sorted tuple of
    0-based player indices.  Densities are midpoint values of the coalition
    density max over members; masses integrate that max over each cell.
    """

    grid: Grid
    coalitions: tuple[tuple[int, ...], ...]
    masses: np.ndarray
    densities: np.ndarray

    @cached_property
    def _index(self) -> dict[tuple[int, ...], int]:
        return {c: i for i, c in enumerate(self.coalitions)}

    def row_index(self, coalition) -> int:
        key = tuple(sorted(coalition))
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"coalition {key} not in table") from None

    def mass_row(self, coalition) -> np.ndarray:
        return self.masses[self.row_index(coalition)]

    @cached_property
    def totals(self) -> np.ndarray:
        """Whole-cake value per coalition row."""
        return self.masses.sum(axis=1)

    def restrict(self, coalitions) -> "MeasureTable":
        """Sub-table with rows for the given coalitions, in the given order."""
        rows = [self.row_index(c) for c in coalitions]
        return MeasureTable(
            grid=self.grid,
            coalitions=tuple(tuple(sorted(c)) for c in coalitions),
            masses=self.masses[rows],
            densities=self.densities[rows],
        )


def _coalition_row(specs, members, mids_f, edges_f, player_masses, grid):
    """Masses and densities for one coalition.

    Within a cell the coalition density equals the density of whichever
    member dominates there, so the cell mass is that member's exact mass.
    Cells where the dominating member changes between the two edges are split
    at the crossing point.
    """
    members = list(members)
    sub_mid = mids_f[members]
    sub_edge = edges_f[members]
    dens = sub_mid.max(axis=0)

    arg_mid = sub_mid.argmax(axis=0)
    arg_left = sub_edge[:, :-1].argmax(axis=0)
    arg_right = sub_edge[:, 1:].argmax(axis=0)

    K = grid.cell_count
    masses = player_masses[np.asarray(members)[arg_mid], np.arange(K)]

    for k in np.nonzero(arg_left != arg_right)[0]:
        ia, ib = members[arg_left[k]], members[arg_right[k]]
        xl, xr = grid.edges[k], grid.edges[k + 1]
        split = _crossing_point(specs[ia], specs[ib], xl, xr)
        masses[k] = (density_cdf(specs[ia], split) - density_cdf(specs[ia], xl)) \
            + (density_cdf(specs[ib], xr) - density_cdf(specs[ib], split))

    # the exact coalition mass dominates each member's; clamp rounding noise
    masses = np.maximum(masses, player_masses[members].max(axis=0))
    return masses, dens


def _crossing_point(spec_a, spec_b, xl, xr) -> float:
    """Point in (xl, xr) where density a stops dominating density b."""
    lo = max(xl, _EDGE_EPS)
    hi = min(xr, 1.0 - _EDGE_EPS)

    def diff(x):
        return density_eval(spec_a, x) - density_eval(spec_b, x)

    fa, fb = diff(lo), diff(hi)
    if np.isfinite(fa) and np.isfinite(fb) and fa > 0 > fb:
        return float(optimize.brentq(diff, lo, hi, xtol=1e-15))
    return 0.5 * (xl + xr)


def coalition_table(players, subsets, grid: Grid) -> MeasureTable:
    """Build the measure table for the given coalitions of players.

    ``players`` is the list of DensitySpec, ``subsets`` a list of nonempty
    coalitions (iterables of 0-based player indices).
    """
    subsets = [tuple(sorted(set(s))) for s in subsets]
    if not subsets:
        raise ValueError("need at least one coalition")
    n = len(players)
    for s in subsets:
        if len(s) == 0:
            raise ValueError("empty coalition")
        if s[0] < 0 or s[-1] >= n:
            raise ValueError(f"coalition {s} references unknown players")

    mids_f = np.vstack([density_eval(p, grid.midpoints) for p in players])
    eval_edges = np.clip(grid.edges, _EDGE_EPS, 1.0 - _EDGE_EPS)
    with np.errstate(divide="ignore"):
        edges_f = np.vstack([density_eval(p, eval_edges) for p in players])
    player_masses = np.vstack([cell_masses(p, grid) for p in players])

    masses = np.empty((len(subsets), grid.cell_count))
    dens = np.empty_like(masses)
    for i, s in enumerate(subsets):
        masses[i], dens[i] = _coalition_row(
            players, s, mids_f, edges_f, player_masses, grid)

    return MeasureTable(grid=grid, coalitions=tuple(subsets),
                        masses=masses, densities=dens)
