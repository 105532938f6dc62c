"""Information-disturbance tradeoff measures for quantum measurements on a
completely unknown pure state.

The single-outcome measures depend only on the singular values of a
measurement operator; see :mod:`infodist.measures` for the closed forms and
:mod:`infodist.oracle` for the Haar-ensemble reference implementation.
"""

__version__ = "0.1.0"

from .entropy import entropy_bound, entropy_reduction_estimate, entropy_reduction_single
from .hull import DegenerateHullError, HullRegion, convex_hull
from .measures import (
    Disturbance,
    Estimate,
    Info,
    MeasurePair,
    MeasurePoint,
    OutcomeMeasures,
    Spectrum,
    additive_measures_single,
    average_measures,
    disturbance_value,
    estimation_fidelity_single,
    info_value,
    operation_fidelity_single,
    outcome_probability,
    physical_reversibility_single,
    single_outcome_measures,
)
from .optimal import (
    IncompleteMeasurementError,
    Measurement,
    SaturationReport,
    averaged_all,
    build_type1,
    build_type2,
    check_saturation,
    optimal_measurement,
)
from .oracle import HaarEnsemble, ZeroProbabilityError, oracle_F, oracle_G, oracle_I, oracle_R, sample_haar
from .region import (
    CurvatureClassificationError,
    NoTangentError,
    TangentResult,
    averaged_region,
    curvature_sign,
    curvature_table,
    decrease_profile,
    family_spectrum,
    single_outcome_region,
    tangent_from_identity,
    trace_curve,
)
from .verify import FuzzReport, fuzz_inequalities, random_measurement
