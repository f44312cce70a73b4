"""First-order supply and demand shocks from remote-work feasibility, essential industries and demand scenarios."""

from .aggregation import (
    AggregateReport,
    ValueAddedTable,
    WageTable,
    aggregate_employment,
    aggregate_value_added,
    aggregate_wages,
    pearson,
    quartile_breakdown,
    venn_decomposition,
)
from .engine import (
    ActivityMap,
    EmploymentMatrix,
    RemotabilityVector,
    ShockKind,
    ShockVector,
    demand_shock_industries,
    demand_shock_occupations,
    essential_score_industries,
    essential_score_occupations,
    filter_occupations,
    rate_consensus,
    rli_industries,
    rli_occupations,
    supply_shock_industries,
    supply_shock_occupations,
    total_shock,
    total_shock_health,
)
from .epidemic import EpidemicParams, attack_rate_estimate, labor_loss_morbidity, labor_loss_mortality
from .scenarios import DemandScenario, load_scenario
from .taxonomy import (
    ClassCode,
    Concordance,
    EssentialList,
    OverrideList,
    Scheme,
    apply_overrides,
    build_concordance,
    column_normalize,
    expand_prefix,
    parse_code,
    row_normalize,
)

__version__ = "0.1.0"
