"""Radiation fields and scattering for the radial energy-critical wave equation."""

import json

from ._nullrad import (
    CauchyData,
    InverseResult,
    Nonlinearity,
    NullradError,
    RadialProfile,
    RadiationProfile,
    ScatterConfig,
    ScatteringResult,
    ScatteringSResult,
    backward_radiation,
    energy,
    energy_history,
    forward_radiation,
    forward_radiation_duhamel,
    forward_radiation_goursat,
    inverse_linear_radiation,
    inverse_radiation,
    l2_distance,
    l2_norm_cylinder,
    l2_norm_r3,
    linear_energy_distance,
    linear_energy_norm,
    linear_radiation,
    linear_radiation_minus,
    plus_map,
    reflect,
    scattering_A,
    scattering_A_formula,
    scattering_S,
    selftest_json,
    wave_operator_plus,
)


def selftest():
    """Run the quick example battery; returns the report as a dict."""
    return json.loads(selftest_json())


__all__ = [name for name in dir() if not name.startswith("_")]
