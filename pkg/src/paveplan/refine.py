"""Tolerance-band cluster construction.

Around one center, three nested clusters are grown with caps shrunk and
stretched by the per-year tolerances: inner (cap - low), nominal (cap), and
outer (cap + high). Points inside the inner cluster enter the final cluster
purely by distance; the band between inner and outer is then refilled by
urgency (earlier or overdue scheduled year first, then lower cost) while
the nominal cap holds. The flagship pipeline combines this with landmark
centers and prices every admission at the cluster's own fiscal year.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from typing import Sequence

from .geometry import distance
from .model import (
    BudgetSchedule,
    Cluster,
    Diagnostic,
    Plan,
    Segment,
    ValidationFailedError,
    ZERO,
    money,
    validate_dataset,
)
from .radial import (
    STOP_BUDGET_REACHED,
    STOP_CENTER_EXCEEDS_BUDGET,
    STOP_DATA_EXHAUSTED,
    ClusterBuildTrace,
    CostFn,
    _drain_pool,
    cost_fn_for_year,
    landmark_next_center,
    radial_neighbor_clustering,
    scheduled_year_cost,
)


@dataclass(frozen=True)
class ToleranceBand:
    """The three nested clusters plus the band between them in refill order."""

    low_cluster: Cluster
    mid_cluster: Cluster
    high_cluster: Cluster
    band_ids: tuple[str, ...]


def band_order(
    band: Sequence[Segment], center: Segment, *, cost: CostFn | None = None
) -> list[Segment]:
    """Urgency order for band points: ascending scheduled year (overdue work
    naturally sorts first), then ascending cost, then distance to the
    center, then id."""
    if cost is None:
        cost = scheduled_year_cost
    return sorted(
        band,
        key=lambda seg: (
            seg.scheduled_year,
            cost(seg),
            distance(center.coords, seg.coords),
            seg.id,
        ),
    )


def build_tolerance_band(
    pool: Sequence[Segment],
    center: Segment,
    budget,
    low_tolerance,
    high_tolerance,
    *,
    year: int | None = None,
    cost: CostFn | None = None,
) -> ToleranceBand:
    """Grow the inner/nominal/outer clusters on the same pool and center.

    Prefix admission makes the three member sets nest: shrinking the cap can
    only cut the tail of the same distance-ordered walk.
    """
    cap = money(budget)
    low = money(low_tolerance)
    high = money(high_tolerance)
    if low < 0 or high < 0:
        raise ValueError("tolerances must be non-negative")
    if cap - low <= 0:
        raise ValueError("low tolerance must leave a positive inner budget")
    pool = list(pool)
    low_cluster, _ = radial_neighbor_clustering(
        pool, center, cap - low, year=year, cost=cost
    )
    mid_cluster, _ = radial_neighbor_clustering(pool, center, cap, year=year, cost=cost)
    high_cluster, _ = radial_neighbor_clustering(
        pool, center, cap + high, year=year, cost=cost
    )
    by_id = {seg.id: seg for seg in pool}
    low_ids = set(low_cluster.member_ids)
    band_segments = [
        by_id[sid] for sid in high_cluster.member_ids if sid not in low_ids
    ]
    ordered = band_order(band_segments, center, cost=cost)
    return ToleranceBand(
        low_cluster, mid_cluster, high_cluster, tuple(seg.id for seg in ordered)
    )


def schedule_aware_cluster(
    pool: Sequence[Segment],
    center: Segment,
    budget,
    low_tolerance,
    high_tolerance,
    *,
    year: int | None = None,
    cost: CostFn | None = None,
    skip_mode: bool = False,
) -> tuple[Cluster, ClusterBuildTrace]:
    """Final cluster: all of the inner cluster, then band points in urgency
    order while the nominal cap holds.

    With both tolerances at zero this reduces exactly to
    :func:`radial_neighbor_clustering` (same members, same trace).
    """
    cap = money(budget)
    if cost is None:
        cost = scheduled_year_cost
    if year is None:
        year = center.scheduled_year
    pool = list(pool)
    by_id = {seg.id: seg for seg in pool}
    if center.id not in by_id:
        raise ValueError(f"center {center.id!r} is not in the pool")

    center_cost = cost(center)
    if center_cost >= cap:
        cluster = Cluster(
            year=year,
            center_id=center.id,
            member_ids=(center.id,),
            realized_cost=center_cost,
            budget=cap,
        )
        trace = ClusterBuildTrace(
            center.id, ((center.id, center_cost),), STOP_CENTER_EXCEEDS_BUDGET
        )
        return cluster, trace

    band = build_tolerance_band(
        pool, center, cap, low_tolerance, high_tolerance, year=year, cost=cost
    )
    members = list(band.low_cluster.member_ids)
    admitted: list[tuple[str, Decimal]] = []
    total = ZERO
    for sid in members:
        total += cost(by_id[sid])
        admitted.append((sid, total))
    for sid in band.band_ids:
        candidate_cost = cost(by_id[sid])
        if total + candidate_cost <= cap:
            total += candidate_cost
            members.append(sid)
            admitted.append((sid, total))
        elif skip_mode:
            continue
        else:
            break
    stop_reason = (
        STOP_DATA_EXHAUSTED if len(members) == len(pool) else STOP_BUDGET_REACHED
    )
    cluster = Cluster(
        year=year,
        center_id=center.id,
        member_ids=tuple(members),
        realized_cost=total,
        budget=cap,
    )
    return cluster, ClusterBuildTrace(center.id, tuple(admitted), stop_reason)


def schedule_aware_plan(
    segments: Sequence[Segment],
    schedule: BudgetSchedule,
    axis: int = 0,
    *,
    strict: bool = False,
    skip_mode: bool = False,
) -> Plan:
    """Flagship pipeline: landmark centers, tolerance-band clusters, and
    every admission priced at the cluster's own fiscal year.

    Dataset validation runs first; in strict mode any issue aborts,
    otherwise issues are carried into the plan's diagnostics.
    """
    segments = list(segments)
    if not segments:
        raise ValueError("segment list must not be empty")
    if axis < 0 or axis >= segments[0].dimension:
        raise ValueError(
            f"axis {axis} out of range for {segments[0].dimension}-dimensional data"
        )
    report = validate_dataset(segments, schedule)
    if strict and not report.ok:
        raise ValidationFailedError(report)
    initial_diagnostics = tuple(
        Diagnostic(issue.code, issue.message, year=issue.year)
        for issue in report.issues
    )

    def build(remaining, center, entry):
        return schedule_aware_cluster(
            remaining,
            center,
            entry.budget,
            entry.low_tolerance,
            entry.high_tolerance,
            year=entry.year,
            cost=cost_fn_for_year(entry.year),
            skip_mode=skip_mode,
        )

    plan, _ = _drain_pool(
        schedule,
        segments,
        landmark_next_center(axis),
        build,
        initial_diagnostics=initial_diagnostics,
    )
    return plan
