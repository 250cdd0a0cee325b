"""pauliflow: Clifford+T canonicalization, T-depth optimization,
distillation scheduling, and surface-code resource estimation."""

from .pauli import PauliString, commutes, independent, merged_rotation_axis, multiply, weight
from .circuits import (
    Gate,
    GateCircuit,
    PauliRotation,
    RotationCircuit,
    circuit_metrics,
    gate_to_rotations,
    parse_circuit,
    render_circuit,
)
from .canonical import (
    CanonicalForm,
    CliffordTableau,
    canonicalize,
    measurement_bases,
    push_cliffords,
    tableau_conjugate,
    to_rotation_circuit,
)
from .layers import (
    GAConfig,
    Layering,
    MergeSet,
    apply_merges,
    build_layers,
    ga_optimize,
    greedy_collapse,
    greedy_matching,
    mergeable,
    score_pair,
    singleton_layering,
    split_dense_layers,
)
from .scheduling import (
    Demand,
    Protocol,
    Schedule,
    brute_force,
    default_catalog,
    dp_schedule,
    effective_latency,
    evaluate,
    greedy_schedule,
    random_baseline,
    success_probability,
)
from .resources import (
    CodeParams,
    WorkloadProfile,
    correctable_weight,
    distillation_volume,
    distilled_error,
    logical_error_rate,
    min_distance_for,
    physical_qubits,
    recommend_protocol,
)
from .codes import (
    LookupDecoder,
    NoiseModel,
    StabilizerCode,
    build_lookup,
    decode,
    monte_carlo,
    repetition_code,
    residual_class,
    rotated_surface_code,
    syndrome,
    validate_code,
)

__version__ = "0.1.0"
