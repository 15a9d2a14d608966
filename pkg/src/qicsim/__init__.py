"""Mode tracking and channel capacities for instantaneously coupled
detectors on a massless scalar field in 2+1 and 3+1 dimensions."""

from .channel import (
    CapacityResult,
    ChannelScenario,
    OutcomeDistribution,
    capacity,
    capacity_table,
    joint_distribution,
    make_channel_scenario,
    marginalize,
    mutual_information,
)
from .errors import (
    ConfigurationError,
    NumericConsistencyError,
    QuadratureError,
    UnsupportedChannelError,
)
from .field_kernel import (
    ModeFunctionSample,
    PairingMatrix,
    mode_function,
    mode_function_dt,
    pairing,
    pairing_matrix,
)
from .qic import (
    FieldGrid,
    Generator,
    GridAxis,
    GridSpec,
    QicModeSet,
    build_qic,
    extended_gram,
    weighting_grid,
)
from .scenarios import (
    preset,
    shockwave_scenario,
    single_qic_scenario,
    table1_scenario,
)
from .smearing import RadialSmearing, ft_oracle, radial_ft, spatial_eval

__all__ = [
    "CapacityResult",
    "ChannelScenario",
    "ConfigurationError",
    "FieldGrid",
    "Generator",
    "GridAxis",
    "GridSpec",
    "ModeFunctionSample",
    "NumericConsistencyError",
    "OutcomeDistribution",
    "PairingMatrix",
    "QicModeSet",
    "QuadratureError",
    "RadialSmearing",
    "UnsupportedChannelError",
    "build_qic",
    "capacity",
    "capacity_table",
    "extended_gram",
    "ft_oracle",
    "joint_distribution",
    "make_channel_scenario",
    "marginalize",
    "mode_function",
    "mode_function_dt",
    "mutual_information",
    "pairing",
    "pairing_matrix",
    "preset",
    "radial_ft",
    "shockwave_scenario",
    "single_qic_scenario",
    "spatial_eval",
    "table1_scenario",
    "weighting_grid",
]
