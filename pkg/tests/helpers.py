"""Shared builders for the test suite."""

from decimal import Decimal

from paveplan.model import BudgetEntry, BudgetSchedule, Segment


def seg(sid, coords, cost="1.00", year=2018, years=None):
    """Segment with a flat cost table over ``years`` (plus its own year)."""
    table_years = set(years) if years else set()
    table_years.add(year)
    amount = Decimal(str(cost))
    return Segment(
        id=sid,
        coords=tuple(float(c) for c in coords),
        cost_by_year={y: amount for y in table_years},
        scheduled_year=year,
    )


def line_segments(xs, cost="1.00", year=2018, years=None, prefix="s"):
    """Unit-spaced points on the x-axis; ids carry the x value."""
    return [seg(f"{prefix}{x}", (x, 0.0), cost=cost, year=year, years=years) for x in xs]


def schedule(budgets, start_year=2018, low="0.00", high="0.00", tolerance="0.00"):
    entries = tuple(
        BudgetEntry(
            year=start_year + i,
            budget=Decimal(str(b)),
            low_tolerance=Decimal(str(low)),
            high_tolerance=Decimal(str(high)),
        )
        for i, b in enumerate(budgets)
    )
    return BudgetSchedule(entries, Decimal(str(tolerance)))


def random_segments(rng, n, *, years=(2018,), max_coord=10000.0, max_cents=50000):
    """n random segments with flat cost tables over ``years``."""
    out = []
    for i in range(n):
        year = years[rng.randrange(len(years))]
        cost = Decimal(rng.randint(1, max_cents)) / 100
        out.append(
            Segment(
                id=f"r{i:04d}",
                coords=(rng.uniform(0.0, max_coord), rng.uniform(0.0, max_coord)),
                cost_by_year={y: cost for y in years},
                scheduled_year=year,
            )
        )
    return out


def random_schedule(rng, years, *, max_budget_cents=2_000_00, with_tolerances=False):
    entries = []
    for year in years:
        budget = Decimal(rng.randint(100, max_budget_cents)) / 100
        if with_tolerances:
            low = min(Decimal(rng.randint(0, int(budget * 100) - 1)) / 100, budget - Decimal("0.01"))
            high = Decimal(rng.randint(0, max_budget_cents // 2)) / 100
        else:
            low = high = Decimal("0.00")
        entries.append(
            BudgetEntry(year=year, budget=budget, low_tolerance=low, high_tolerance=high)
        )
    return BudgetSchedule(tuple(entries))
