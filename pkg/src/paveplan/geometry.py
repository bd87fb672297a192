"""Distance kernel: point-point and point-to-set distances, distance-ordered
enumeration around an anchor, and the farthest-remaining-point search used
to seed new clusters.

Everything here is a pure function over immutable inputs. Scans are naive
and quadratic on purpose: at desk scale (a few thousand points) correctness
and determinism beat indexing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import DimensionMismatchError, Segment

Coords = tuple[float, ...]


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean distance; raises on mixed dimensionality."""
    if len(a) != len(b):
        raise DimensionMismatchError(
            f"points have dimensions {len(a)} and {len(b)}"
        )
    return math.dist(a, b)


def point_set_distance(point_set: Iterable[Coords], point: Sequence[float]) -> float:
    """Min-linkage distance from ``point`` to the set; 0 when it belongs."""
    best: float | None = None
    for member in point_set:
        d = distance(member, point)
        if best is None or d < best:
            best = d
    if best is None:
        raise ValueError("point set must not be empty")
    return best


@dataclass(frozen=True)
class DistanceOrdering:
    """All segments except the anchor, nearest first; ties by ascending id."""

    anchor_id: str
    ordered_ids: tuple[str, ...]


def order_by_distance(segments: Sequence[Segment], anchor: Segment) -> DistanceOrdering:
    if not any(seg.id == anchor.id for seg in segments):
        raise ValueError(f"anchor {anchor.id!r} is not in the segment list")
    ranked = sorted(
        (distance(anchor.coords, seg.coords), seg.id)
        for seg in segments
        if seg.id != anchor.id
    )
    return DistanceOrdering(anchor.id, tuple(sid for _, sid in ranked))


def furthest_point_from_cluster(
    candidates: Sequence[Segment], clustered: Sequence[Coords]
) -> Segment:
    """The candidate farthest (min-linkage) from the clustered coordinates.

    A later candidate must be strictly farther to take over, so ties keep
    the earliest one in input order. Note the two arguments play different
    roles: swapping them asks a different question.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("candidate list must not be empty")
    clustered = list(clustered)
    if not clustered:
        raise ValueError("clustered point set must not be empty")
    best = candidates[0]
    best_distance = point_set_distance(clustered, best.coords)
    for challenger in candidates[1:]:
        d = point_set_distance(clustered, challenger.coords)
        if d > best_distance:
            best, best_distance = challenger, d
    return best
