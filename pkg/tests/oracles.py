"""Brute-force reference implementations used only by the test suite.

These deliberately avoid the engine's admission and search code: distances
come from a naive sum-of-squares form, the full sorted candidate list is
materialized up front, and the walk is written from the rules alone. They
were written first and the engine's expected values were frozen from them.
"""

from decimal import Decimal


def euclid(a, b):
    return sum((x - y) ** 2 for x, y in zip(a, b)) ** 0.5


def oracle_prefix_cluster(pool, center, cap, cost=None):
    """Member ids of the longest admissible distance-ordered prefix.

    The center is always in; if its own cost meets or exceeds the cap, the
    cluster is just the center.
    """
    if cost is None:
        cost = lambda seg: seg.cost_by_year[seg.scheduled_year]
    cap = cap if isinstance(cap, Decimal) else Decimal(str(cap))
    chosen = {center.id}
    total = cost(center)
    if total >= cap:
        return chosen
    ranked = sorted(
        (seg for seg in pool if seg.id != center.id),
        key=lambda seg: (euclid(center.coords, seg.coords), seg.id),
    )
    for seg in ranked:
        if total + cost(seg) > cap:
            break
        total += cost(seg)
        chosen.add(seg.id)
    return chosen


def oracle_furthest_point(candidates, clustered_coords):
    """Id of the candidate maximizing the min distance to the clustered set;
    the earliest candidate wins ties (replacement only on strict improvement)."""
    clustered_coords = list(clustered_coords)
    best = None
    best_d = None
    for seg in candidates:
        d = min(euclid(seg.coords, c) for c in clustered_coords)
        if best is None or d > best_d:
            best, best_d = seg, d
    if best is None:
        raise ValueError("candidate list must not be empty")
    return best.id
