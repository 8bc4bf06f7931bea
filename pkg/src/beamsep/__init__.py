"""Entanglement generated by beam splitters on truncated two-mode Fock spaces."""
from .entanglement import EntanglementReport, e_p, negativity, report, schmidt, small_theta_predict
from .fock import (
    ConfigurationError,
    CutoffConfig,
    CutoffError,
    DomainError,
    JointState,
    NumericTolerances,
    SingleModeState,
    SpecError,
    partial_trace,
    purity,
    tensor,
    trace_distance,
    validate,
)
from .optics import BeamSplitterParams, apply_bs, bs_unitary, transform_displacement, transform_squeeze

__version__ = "0.1.0"
