"""Bottleneck quantum Fisher information: engine, closed forms, bounds."""

__version__ = "0.1.0"

from .bottleneck import (
    EstimationReport,
    apply_channel,
    bottleneck_qfi,
    bottleneck_qfi_curve,
    contour_gap,
    default_alpha_grid,
    estimate,
    kraus_ops,
    optimize_qfi,
    peak_count,
    two_copy_bottleneck_qfi,
    two_copy_full_qfi_max,
)
from .continuity import (
    BoundReport,
    generator_continuity_bound,
    induced_1to1_norm,
    liouvillian_continuity_bound,
    qfi_continuity_bound,
)
from .generators import (
    GeneratorSpec,
    SingularPointError,
    accessed_trace_vanishes,
    case_full_qfi_max,
    case_pair_qfi,
    make_aligned_fields,
    make_case,
    make_diagonal_coupling,
    make_pauli,
    make_tensor,
    tensor_bottleneck_max,
    tensor_full_qfi_max,
    tensor_gap,
)
from .probes import (
    ProbeState,
    anticommutant_basis,
    grid_probes,
    haar_probe,
    hurwitz_state,
    named_probe,
    probe_candidates,
)
# The qfi submodule keeps its name at the package root (qfi_bottleneck.qfi);
# its central function is re-exported as qfi_value to avoid shadowing it.
from .qfi import max_qfi_full, pure_state_qfi, sld, support_rank, unitary_family_point
from .qfi import StateFamilyPoint
from .qfi import qfi as qfi_value
from . import qfi as _qfi_module

qfi = _qfi_module

__all__ = [
    "__version__",
    "EstimationReport", "apply_channel", "bottleneck_qfi", "bottleneck_qfi_curve",
    "contour_gap", "default_alpha_grid", "estimate", "kraus_ops", "optimize_qfi",
    "peak_count", "two_copy_bottleneck_qfi", "two_copy_full_qfi_max",
    "BoundReport", "generator_continuity_bound", "induced_1to1_norm",
    "liouvillian_continuity_bound", "qfi_continuity_bound",
    "GeneratorSpec", "SingularPointError", "accessed_trace_vanishes",
    "case_full_qfi_max", "case_pair_qfi", "make_aligned_fields", "make_case",
    "make_diagonal_coupling", "make_pauli", "make_tensor",
    "tensor_bottleneck_max", "tensor_full_qfi_max", "tensor_gap",
    "ProbeState", "anticommutant_basis", "grid_probes", "haar_probe",
    "hurwitz_state", "named_probe", "probe_candidates",
    "StateFamilyPoint", "max_qfi_full", "pure_state_qfi", "qfi", "qfi_value",
    "sld", "support_rank", "unitary_family_point",
]
