"""Dense statevector reference simulator for small qubit counts.

This is the cross-check instrument for the stabilizer engine, hard-capped at
14 qubits so every oracle run stays sub-second. Site s occupies axis s-1 of
the amplitude tensor (site 1 is the most significant bit of a basis index).
All equality checks use double precision with a 1e-10 tolerance.
"""
from __future__ import annotations

from math import sqrt

import numpy as np

from .gates import CliffordGate, gate_sites
from .pauli import PauliString

MAX_QUBITS = 14
ATOL = 1e-10

_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / sqrt(2.0)
_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_LETTER_MATRIX = {"X": _X, "Y": _Y, "Z": _Z}
# (Z ⊗ I + X ⊗ X)/sqrt(2) on (first, second) bond site; involutory and unitary.
_BOND = (np.kron(_Z, np.eye(2)) + np.kron(_X, _X)) / sqrt(2.0)


class DenseState:
    """A normalized 2^n amplitude vector, n <= 14."""

    __slots__ = ("n", "vec")

    def __init__(self, n: int, vec: np.ndarray):
        if n < 1 or n > MAX_QUBITS:
            raise ValueError(f"dense oracle supports 1..{MAX_QUBITS} qubits, got {n}")
        if vec.shape != (2**n,):
            raise ValueError("amplitude vector has wrong length")
        self.n = n
        self.vec = np.asarray(vec, dtype=complex)

    @classmethod
    def zero(cls, n: int) -> "DenseState":
        vec = np.zeros(2**n, dtype=complex)
        vec[0] = 1.0
        return cls(n, vec)

    @classmethod
    def with_amplitudes_on(
        cls, n: int, site: int, alpha: complex, beta: complex
    ) -> "DenseState":
        """(alpha|0> + beta|1>) on ``site``, |0> elsewhere."""
        if not 1 <= site <= n:
            raise ValueError(f"site {site} out of range 1..{n}")
        norm = sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        if norm < ATOL:
            raise ValueError("input amplitudes are all zero")
        vec = np.zeros(2**n, dtype=complex)
        vec[0] = alpha / norm
        vec[1 << (n - site)] = beta / norm
        return cls(n, vec)

    def copy(self) -> "DenseState":
        return DenseState(self.n, self.vec.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def _tensor(self) -> np.ndarray:
        return self.vec.reshape([2] * self.n)


def _apply_matrix(state: DenseState, mat: np.ndarray, sites: tuple[int, ...]) -> None:
    axes = tuple(s - 1 for s in sites)
    t = np.moveaxis(state._tensor(), axes, range(len(axes)))
    shape = t.shape
    t = mat @ t.reshape(2 ** len(axes), -1)
    t = np.moveaxis(t.reshape(shape), range(len(axes)), axes)
    state.vec = np.ascontiguousarray(t).reshape(-1)


def apply_gate_dense(state: DenseState, gate: CliffordGate) -> DenseState:
    """Apply ``gate`` in place (and return the state for chaining)."""
    sites = gate_sites(gate, state.n)
    _apply_matrix(state, _H if gate.kind == "h" else _BOND, sites)
    return state


def apply_schedule_dense(state: DenseState, gates) -> DenseState:
    for g in gates:
        apply_gate_dense(state, g)
    return state


def apply_pauli_dense(state: DenseState, p: PauliString) -> DenseState:
    if p.n != state.n:
        raise ValueError("size mismatch")
    for site in p.support():
        _apply_matrix(state, _LETTER_MATRIX[p.letter_at(site)], (site,))
    state.vec = state.vec * (1j**p.phase)
    return state


def born_probability(state: DenseState, site: int) -> float:
    """Probability of measuring +1 (bit 0) at ``site``."""
    if not 1 <= site <= state.n:
        raise ValueError(f"site {site} out of range 1..{state.n}")
    t = state._tensor()
    marg = np.sum(np.abs(t) ** 2, axis=tuple(a for a in range(state.n) if a != site - 1))
    return float(marg[0])


def born_measure_dense(
    state: DenseState, site: int, rng: np.random.Generator
) -> tuple[int, DenseState]:
    """Sample a z-axis measurement at ``site``; project and renormalize.

    Outcomes are Z eigenvalues ±1. A branch with probability below tolerance
    is never sampled.
    """
    p_plus = born_probability(state, site)
    if p_plus >= 1.0 - ATOL:
        outcome = 1
    elif p_plus <= ATOL:
        outcome = -1
    else:
        outcome = 1 if rng.random() < p_plus else -1
    project_dense(state, site, outcome)
    return outcome, state


def project_dense(state: DenseState, site: int, outcome: int) -> DenseState:
    """Project ``site`` onto the ±1 Z eigenspace and renormalize."""
    t = state._tensor()
    idx: list = [slice(None)] * state.n
    idx[site - 1] = 1 if outcome == 1 else 0
    t[tuple(idx)] = 0.0
    norm = np.linalg.norm(t)
    if norm < ATOL:
        raise ValueError("projection onto a zero-probability branch")
    state.vec = (t / norm).reshape(-1)
    return state


def expectation_pauli(state: DenseState, p: PauliString) -> float:
    scratch = state.copy()
    apply_pauli_dense(scratch, p)
    val = complex(np.vdot(state.vec, scratch.vec))
    if abs(val.imag) > 1e-9:
        raise ValueError("expectation of a non-Hermitian observable")
    return float(val.real)


def overlap_fidelity(a: DenseState, b: DenseState) -> float:
    if a.n != b.n:
        raise ValueError(f"size mismatch: {a.n} != {b.n}")
    return float(abs(np.vdot(a.vec, b.vec)) ** 2)


def sample_site(
    state: DenseState, site: int, shots: int, rng: np.random.Generator
) -> int:
    """Number of +1 outcomes in ``shots`` Born-rule samples (no projection)."""
    return int(rng.binomial(shots, born_probability(state, site)))
