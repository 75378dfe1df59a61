"""Capacity region of the two-user white Gaussian MAC with feedback.

The region is the union over input correlation ``rho in [0, 1]`` of the
pentagons cut out by the correlated-input rate bounds, so it reuses
:func:`macjscc.gmac.relaxed_bounds` verbatim.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .gmac import GmacSpec, relaxed_bounds


@dataclass(frozen=True)
class FeedbackRegionPoint:
    rho: float
    B1: float
    B2: float
    B12: float

    def corners(self):
        """Pentagon vertices, counter-clockwise from the origin."""
        r1 = min(self.B1, self.B12)
        r2 = min(self.B2, self.B12)
        return [
            (0.0, 0.0),
            (r1, 0.0),
            (r1, max(0.0, min(r2, self.B12 - r1))),
            (max(0.0, min(r1, self.B12 - r2)), r2),
            (0.0, r2),
        ]

    @property
    def max_sum_rate(self):
        return min(self.B1 + self.B2, self.B12)


def ozarow_bounds(P1, P2, sigma2, rho) -> FeedbackRegionPoint:
    if not 0 <= rho <= 1:
        raise InputError("rho must lie in [0, 1]")
    b1, b2, b12 = relaxed_bounds(GmacSpec(P1, P2, sigma2), rho)
    return FeedbackRegionPoint(float(rho), b1, b2, b12)


def _grid(rho_grid):
    g = np.asarray(rho_grid, dtype=float).ravel()
    if g.size == 0 or np.any(g < 0) or np.any(g > 1):
        raise InputError("rho grid must be a nonempty subset of [0, 1]")
    return g


def ozarow_boundary(P1, P2, sigma2, rho_grid):
    """Pentagon corners for every grid correlation.

    Returns a list of ``(rho, corner_index, R1, R2)`` ordered by grid
    position, then corner index.
    """
    rows = []
    for rho in _grid(rho_grid):
        pt = ozarow_bounds(P1, P2, sigma2, rho)
        for k, (x, y) in enumerate(pt.corners()):
            rows.append((float(rho), k, x, y))
    return rows


def frontier(P1, P2, sigma2, rho_grid, r1_values):
    """Largest ``R2`` in the union for each ``R1`` (``-inf`` when unreachable)."""
    pts = [ozarow_bounds(P1, P2, sigma2, r) for r in _grid(rho_grid)]
    out = []
    for r1 in np.asarray(r1_values, dtype=float):
        best = -np.inf
        for p in pts:
            if r1 <= min(p.B1, p.B12):
                best = max(best, min(p.B2, p.B12 - r1))
        out.append(best)
    return np.array(out)


def max_sum_rate(P1, P2, sigma2, rho_grid):
    """``(rho*, sum rate)`` maximizing ``min(B1 + B2, B12)`` over the grid."""
    pts = [ozarow_bounds(P1, P2, sigma2, r) for r in _grid(rho_grid)]
    i = int(np.argmax([p.max_sum_rate for p in pts]))
    return pts[i].rho, pts[i].max_sum_rate
