from .grid import KGrid, XGrid, make_k_grid
from .params import (
    DimensionlessParams,
    PhysicalParams,
    length_unit,
    recoil_energy,
    recoil_velocity,
    reduce_params,
    time_unit,
    width_to_delta,
)
from .state import (
    GaussianSpec,
    SpinorK,
    SpinorX,
    from_position,
    gaussian_amplitude,
    sample_gaussian,
    to_position,
)

__all__ = [
    "DimensionlessParams",
    "GaussianSpec",
    "KGrid",
    "PhysicalParams",
    "SpinorK",
    "SpinorX",
    "XGrid",
    "from_position",
    "gaussian_amplitude",
    "length_unit",
    "make_k_grid",
    "recoil_energy",
    "recoil_velocity",
    "reduce_params",
    "sample_gaussian",
    "time_unit",
    "to_position",
    "width_to_delta",
]
