"""Alt-Phillips free-boundary laboratory."""

from ._core import (
    Params,
    barrier,
    bv_transform,
    certify_growth,
    density,
    energy,
    growth_slope,
    normalization_integral,
    phase_transform,
    phi,
    phi_inverse,
    phi_prime,
    recovery,
    rescale,
    solve,
    sweep,
    w,
    w_prime,
    weight_mass,
)

__all__ = [
    "Params",
    "barrier",
    "bv_transform",
    "certify_growth",
    "density",
    "energy",
    "growth_slope",
    "normalization_integral",
    "phase_transform",
    "phi",
    "phi_inverse",
    "phi_prime",
    "recovery",
    "rescale",
    "solve",
    "sweep",
    "w",
    "w_prime",
    "weight_mass",
]
