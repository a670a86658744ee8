"""Gauge geometry with symplectic duality."""

from .bodies import HPolytope, SmoothBody, VPolytope, body_from_json, body_to_json
from .characteristics import (
    capacity_estimate,
    integrate_characteristic,
    isoperimetric_report,
    j_map,
    jj_involution_check,
    planar_characteristic_check,
    section_body,
    section_duality_check,
    symplectic_area,
)
from .curves import SampledCurve
from .duality import dual_body, dual_gauge_eval, polar_body
from .gauge import Gauge, gauge_eval
from .symplectic import (
    PlaneSubspace,
    SymplecticForm,
    determinant_form,
    make_standard_form,
)

__version__ = "0.1.0"
