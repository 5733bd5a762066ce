"""Berry phases, Hannay angles and Fock states for quadratic Hartree-type systems."""

import json as _json

from ._core import (
    Frequencies,
    HberryError,
    ParameterLoop,
    ParameterSet,
    PhysicalConstants,
    berry_phase,
    eigenvalue,
    extract_phase,
    fock_state,
    frequencies,
    hannay_angles,
    latitude_loop,
    solid_angle,
)
from ._core import verify_suite as _verify_suite


def verify_suite(path):
    """Run a verification suite file and return the parsed report."""
    return _json.loads(_verify_suite(path))


__all__ = [
    "Frequencies",
    "HberryError",
    "ParameterLoop",
    "ParameterSet",
    "PhysicalConstants",
    "berry_phase",
    "eigenvalue",
    "extract_phase",
    "fock_state",
    "frequencies",
    "hannay_angles",
    "latitude_loop",
    "solid_angle",
    "verify_suite",
]
