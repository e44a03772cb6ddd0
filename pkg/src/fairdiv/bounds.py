"""Certified bounds on the weighted maxmin value from a single maxsum result.

The maxsum value g(alpha) bounds the maxmin value from above.  From below,
the segment hull of the value vector u and the axis points (0,..,mu_q^w(C),
..,0) for q != argmax crosses the egalitarian diagonal at a closed-form
height, which is a certified lower bound at least min_j u_j.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partition import PvvResult


@dataclass(frozen=True)
class BoundPair:
    lower: float
    upper: float
    witness_alpha: np.ndarray
    witness_u: np.ndarray

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError("need 0 <= lower <= upper")

    @property
    def width(self) -> float:
        return self.upper - self.lower


def upper_bound(pvv: PvvResult) -> float:
    return pvv.g_value


def lower_bound(pvv: PvvResult, totals) -> float:
    """Diagonal height of the hull of u and the axis points, closed form.

    ``totals`` are the whole-cake weighted values mu_j^w(C); they must be
    strictly positive.  The max coordinate index breaks ties low.
    """
    totals = np.asarray(totals, dtype=float)
    u = pvv.u
    if totals.shape != u.shape:
        raise ValueError("totals must have one entry per coalition")
    if np.any(totals <= 0.0):
        raise ValueError("whole-cake coalition values must be positive")
    h = int(np.argmax(u))
    rest = np.arange(len(u)) != h
    denom = 1.0 + np.sum((u[h] - u[rest]) / totals[rest])
    return float(u[h] / denom)


def bound_pair(pvv: PvvResult, totals) -> BoundPair:
    return BoundPair(lower=lower_bound(pvv, totals),
                     upper=upper_bound(pvv),
                     witness_alpha=pvv.alpha,
                     witness_u=pvv.u)
