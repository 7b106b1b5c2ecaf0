"""Task-based production and endogenous growth simulator."""

__version__ = "0.1.0"

from .config import (
    BASELINE,
    FEATURE_NAMES,
    RANGES,
    DiffusionParams,
    GrowthParams,
    ModelConfig,
    apply_scenario,
    config_from_dict,
    default_profiles,
    load_config,
)
from .dynamics import ShockEvent, SimState, Trajectory, parse_shock_spec, simulate, step
from .errors import (
    ConfigError,
    ModelDomainError,
    NonFiniteStateError,
    ProfileViolationError,
    TaskGrowthError,
)
from .production import (
    FactorEndowment,
    FrictionParams,
    StaticEquilibrium,
    aggregate_output,
    effective_outputs,
    friction_cost,
    optimal_frontier,
    statics_sweep,
    wage_and_labor_share,
)
from .profiles import ProductivityProfile, profile_integral
from .sweep import (
    ParamRange,
    SweepDataset,
    convergence_filter,
    default_ranges,
    read_dataset,
    run_sweep,
    sample_params,
    write_dataset,
)
from .forest import (
    Forest,
    ForestParams,
    TreeNode,
    fit_forest,
    fit_tree,
    impurity_importance,
    permutation_importance,
    predict,
    train_val_split,
)
from .shapley import ShapReport, shapley_values
