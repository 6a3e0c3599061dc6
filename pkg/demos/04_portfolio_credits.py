"""From a planting inventory to project credits.

A greening project plants cohorts of trees, deducts its own emissions
from the aggregated absorption, and attributes a share of the credit to
the greening business for its stewardship years (a linear time share of
the project period).
"""

import tempfile
from pathlib import Path

from canopy import (
    CreditMode,
    ProjectParams,
    evaluate_portfolio,
    load_inventory,
)

INVENTORY_CSV = """\
label,wood,size,count
boulevard-east,evergreen,tall,140
boulevard-west,deciduous,tall,120
park-center,conifer,medium,60
hedge-rows,deciduous,shrub,800
"""

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "inventory.csv"
    path.write_text(INVENTORY_CSV)
    cohorts = load_inventory(path)

for mode in (CreditMode.SURVIVOR_ONLY, CreditMode.INCLUDE_IN_PROCESS):
    params = ProjectParams(
        project_emissions=25.0,  # machinery, transport, nursery operations
        steward_years=3.0,
        credit_mode=mode,
    )
    report = evaluate_portfolio(cohorts, params)
    print(f"credit mode: {mode.value}")
    print(f"  {'cohort':<18}{'trees':>7}{'per tree (t)':>14}{'credit (t)':>12}{'steward (t)':>13}")
    for row in report.per_cohort:
        per_tree = row.cohort_credit / row.count if row.count else 0.0
        print(
            f"  {row.label:<18}{row.count:>7}{per_tree:>14.6f}"
            f"{row.cohort_credit:>12.3f}{row.steward_share:>13.4f}"
        )
    print(f"  gross credit {report.gross_credit:10.3f} t")
    print(f"  emissions    {report.project_emissions:10.3f} t")
    flag = "  <- emissions exceed absorption" if report.shortfall else ""
    print(f"  net credit   {report.net_credit:10.3f} t{flag}\n")
