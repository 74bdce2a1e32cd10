"""Stabilizer simulation and erasure-recovery experiments for a brickwork
transverse-field Ising code."""

from .circuits import (
    CodeInstance,
    build_code,
    build_encoder,
    conjugate_by_encoder,
    derive_check_operators,
    derive_logical_operators,
    encoded_frame,
    global_parity,
    sample_hadamard_layers,
)
from .decoders import (
    AmbiguousSyndromeError,
    DecodingTieError,
    ErasurePattern,
    Syndrome,
    UncorrectableSyndromeError,
    decode_single_error,
    decode_z_errors,
    erasure_recoverable,
    syndrome_of,
)
from .gates import CliffordGate, conjugate_pauli, hadamard, tfim
from .majorana import (
    MajoranaMode,
    ModeLeakageError,
    SitePermutation,
    check_as_mode_pair,
    encoder_permutation,
    evolve_mode,
    mode_to_pauli,
    pauli_to_mode,
)
from .pauli import PauliString, commutes, pauli_mul
from .tableau import MeasurementResult, StabilizerFrame, frame_conjugate, measure_pauli

__version__ = "0.1.0"

__all__ = [
    "AmbiguousSyndromeError",
    "CliffordGate",
    "CodeInstance",
    "DecodingTieError",
    "ErasurePattern",
    "MajoranaMode",
    "MeasurementResult",
    "ModeLeakageError",
    "PauliString",
    "SitePermutation",
    "StabilizerFrame",
    "Syndrome",
    "UncorrectableSyndromeError",
    "build_code",
    "build_encoder",
    "check_as_mode_pair",
    "commutes",
    "conjugate_by_encoder",
    "conjugate_pauli",
    "decode_single_error",
    "decode_z_errors",
    "derive_check_operators",
    "derive_logical_operators",
    "encoded_frame",
    "encoder_permutation",
    "erasure_recoverable",
    "evolve_mode",
    "frame_conjugate",
    "global_parity",
    "hadamard",
    "measure_pauli",
    "mode_to_pauli",
    "pauli_mul",
    "pauli_to_mode",
    "sample_hadamard_layers",
    "syndrome_of",
    "tfim",
]
