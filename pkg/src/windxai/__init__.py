"""Wind turbine power curve models with physics-anchored strategy validation.

The package trains data-driven power curve regressors on 10-minute SCADA
data, explains them with exact baseline-replacement Shapley attributions,
and scores how closely each model's learned strategy follows a simple
physics-informed baseline.  The score feeds a two-criterion model selection
(error plus strategy) and a performance-monitoring workflow that decomposes
deviations from an expected output into per-feature contributions.
"""

from .errors import (
    CapabilityError,
    ConfigurationError,
    DataError,
    DomainError,
    SchemaError,
    TrainingError,
    WindXaiError,
)
from .models import (
    HybridResidualModel,
    MlpConfig,
    MlpModel,
    PhysicsBaseline,
    PiecewiseLinearModel,
    PiecewisePolynomialModel,
    PowerCurveModel,
    RandomForestModel,
    SegmentSpec,
    ann_large_config,
    ann_small_config,
    evaluate_rmse,
    load_model,
    save_model,
)
from .physics import (
    AmbientState,
    NominalPowerCurve,
    QuadratureSettings,
    air_density,
    density_correct_wind_speed,
    generic_2mw_curve,
    phys_base_predict,
    ti_corrected_power,
    turbulence_intensity,
    yaw_power_factor,
)
from .scada import (
    CsvSchema,
    FeatureMatrix,
    MinMaxScaler,
    ScadaRecord,
    SplitSpec,
    SynthConfig,
    TiReference,
    augment_yaw,
    build_feature_matrix,
    correct_ti_bias,
    filter_operational,
    load_scada_csv,
    save_scada_csv,
    stratified_probe,
    synthesize_scada,
    temporal_split,
)
from .strategy import (
    PAPER_WEIGHTS,
    ModelCandidate,
    SelectionCriterion,
    StrategyReport,
    evaluate_strategy,
    r2_feature,
    r2_phys,
    select_model,
)
from .xai import (
    Attribution,
    AttributionBatch,
    ConditionalAttributionProfile,
    ReferencePoint,
    attribute_rows,
    build_reference,
    conditional_profile,
    shapley_exact,
    shapley_values,
)

__version__ = "0.1.0"
