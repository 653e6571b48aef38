"""Multi-photon entanglement in polarization-squeezed light.

A numerics library for the single-mode model of a coherent beam (horizontal)
combined with a squeezed thermal beam (vertical): macroscopic Stokes moments
and squeezing criteria, observable N-photon density matrices built from
normally ordered moments, reduced two-photon matrices at large N,
entanglement measures and depth bounds, and a coincidence-detection
simulator with pair-averaged tomography.
"""

from .state import (
    StateParams,
    StokesSummary,
    QuadratureSummary,
    stokes_summary,
    quadratures,
    squeezing_db,
    purify,
    apply_loss,
)
from .correlators import CorrelationTable, correlation, moment_integral, upsilon
from .fock import FockState, build_squeezed_thermal, oracle_correlation, oracle_odm
from .odm import (
    Odm,
    build_odm,
    born_probability,
    closed_form_r2,
    closed_form_r3,
    phase_average,
)
from .reduced import (
    TwoBodyOdm,
    averaged_two_body,
    photon_number_distribution,
    reduced_two_body,
)
from .entanglement import (
    EntanglementReport,
    bipartition_negativity,
    concurrence,
    concurrence_max,
    delta_criterion,
    entanglement_report,
    optimize_ns_for_concurrence,
)
from .depth import (
    DepthResult,
    contour_data,
    depth_exact_small_j,
    depth_large_j,
    macroscopic_fraction,
    min_jx2_at_defect,
)
from .detect import (
    DetectorArray,
    ShotRecord,
    TomographyResult,
    reconstruct_two_body,
    run_pair_tomography,
    simulate_shots,
)

__version__ = "0.1.0"

__all__ = [
    "StateParams",
    "StokesSummary",
    "QuadratureSummary",
    "stokes_summary",
    "quadratures",
    "squeezing_db",
    "purify",
    "apply_loss",
    "CorrelationTable",
    "correlation",
    "moment_integral",
    "upsilon",
    "FockState",
    "build_squeezed_thermal",
    "oracle_correlation",
    "oracle_odm",
    "Odm",
    "build_odm",
    "born_probability",
    "closed_form_r2",
    "closed_form_r3",
    "phase_average",
    "TwoBodyOdm",
    "averaged_two_body",
    "photon_number_distribution",
    "reduced_two_body",
    "EntanglementReport",
    "bipartition_negativity",
    "concurrence",
    "concurrence_max",
    "delta_criterion",
    "entanglement_report",
    "optimize_ns_for_concurrence",
    "DepthResult",
    "contour_data",
    "depth_exact_small_j",
    "depth_large_j",
    "macroscopic_fraction",
    "min_jx2_at_defect",
    "DetectorArray",
    "ShotRecord",
    "TomographyResult",
    "reconstruct_two_body",
    "run_pair_tomography",
    "simulate_shots",
    "__version__",
]
