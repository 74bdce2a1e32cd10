import numpy as np
import pytest

from conftest import pauli_matrix, random_pauli
from tfim_qec.circuits import build_code
from tfim_qec.dense import (
    ATOL,
    DenseState,
    apply_gate_dense,
    apply_pauli_dense,
    apply_schedule_dense,
    born_measure_dense,
    born_probability,
    expectation_pauli,
    overlap_fidelity,
    project_dense,
    sample_site,
)
from tfim_qec.gates import hadamard, tfim
from tfim_qec.pauli import PauliString


def test_qubit_cap():
    with pytest.raises(ValueError):
        DenseState.zero(15)


def test_bond_gate_is_unitary_and_involutory():
    rng = np.random.default_rng(0)
    for _ in range(20):
        n = int(rng.integers(2, 7))
        vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
        vec /= np.linalg.norm(vec)
        state = DenseState(n, vec.copy())
        site = int(rng.integers(1, n + 1))
        apply_gate_dense(state, tfim(site))
        assert abs(state.norm() - 1) < 1e-12
        apply_gate_dense(state, tfim(site))
        assert np.allclose(state.vec, vec, atol=1e-12)


def test_bond_gate_on_00_gives_bell_pair():
    state = DenseState.zero(2)
    apply_gate_dense(state, tfim(1))
    expect = np.zeros(4, dtype=complex)
    expect[0] = expect[3] = 1 / np.sqrt(2)
    assert np.allclose(state.vec, expect, atol=1e-12)


def test_gate_matches_pauli_conjugation_oracle():
    # conjugating densely must agree with the bit-level gate action
    from tfim_qec.gates import conjugate_pauli

    rng = np.random.default_rng(1)
    for _ in range(30):
        n = 3
        gate = tfim(int(rng.integers(1, n + 1)))
        p = random_pauli(rng, n)
        img = conjugate_pauli(p, gate)
        state = DenseState(n, (rng.normal(size=8) + 1j * rng.normal(size=8)))
        state.vec /= state.norm()
        lhs = state.copy()
        apply_gate_dense(lhs, gate)
        apply_pauli_dense(lhs, img)
        apply_gate_dense(lhs, gate)
        rhs = state.copy()
        apply_pauli_dense(rhs, p)
        assert np.allclose(lhs.vec, rhs.vec, atol=1e-10)


class TestParityCheckStateStructure:
    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_amplitude_magnitudes(self, n):
        rng = np.random.default_rng(n)
        scale = 2 ** (-(n - 1) / 2)
        for _ in range(5):
            raw = rng.normal(size=4)
            alpha, beta = complex(raw[0], raw[1]), complex(raw[2], raw[3])
            norm = np.sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
            alpha, beta = alpha / norm, beta / norm
            state = DenseState.with_amplitudes_on(n, 1, alpha, beta)
            apply_schedule_dense(state, build_code(n, "open", 1).schedule)
            for idx in range(2**n):
                parity = bin(idx).count("1") % 2
                want = abs(beta if parity else alpha) * scale
                assert abs(abs(state.vec[idx]) - want) < ATOL


class TestBornMeasurement:
    def test_deterministic_zero_state(self):
        state = DenseState.zero(2)
        outcome, _ = born_measure_dense(state, 2, np.random.default_rng(0))
        assert outcome == 1

    def test_bell_state_is_fair(self):
        rng = np.random.default_rng(42)
        plus = 0
        shots = 10_000
        base = DenseState.zero(2)
        apply_gate_dense(base, tfim(1))
        assert abs(born_probability(base, 1) - 0.5) < ATOL
        plus = sample_site(base, 1, shots, rng)
        assert abs(plus - shots / 2) < 5 * np.sqrt(shots * 0.25)

    def test_projection_collapses(self):
        state = DenseState.zero(2)
        apply_gate_dense(state, tfim(1))
        outcome, state = born_measure_dense(state, 1, np.random.default_rng(7))
        again, _ = born_measure_dense(state, 1, np.random.default_rng(8))
        assert again == outcome

    def test_zero_probability_branch_rejected(self):
        state = DenseState.zero(2)
        with pytest.raises(ValueError):
            project_dense(state, 1, -1)


class TestOverlapFidelity:
    def test_identical(self):
        a = DenseState.zero(3)
        assert abs(overlap_fidelity(a, a) - 1) < 1e-12

    def test_orthogonal_basis_states(self):
        a = DenseState.zero(2)
        b = DenseState.with_amplitudes_on(2, 1, 0, 1)
        assert overlap_fidelity(a, b) < 1e-12

    def test_involution_round_trip(self):
        rng = np.random.default_rng(5)
        vec = rng.normal(size=8) + 1j * rng.normal(size=8)
        vec /= np.linalg.norm(vec)
        a = DenseState(3, vec.copy())
        b = a.copy()
        apply_gate_dense(b, tfim(2))
        apply_gate_dense(b, tfim(2))
        assert abs(overlap_fidelity(a, b) - 1) < 1e-12

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            overlap_fidelity(DenseState.zero(2), DenseState.zero(3))


def test_expectation_matches_matrix_oracle():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = 3
        vec = rng.normal(size=8) + 1j * rng.normal(size=8)
        vec /= np.linalg.norm(vec)
        state = DenseState(n, vec)
        p = random_pauli(rng, n, hermitian=True)
        want = np.vdot(vec, pauli_matrix(p) @ vec).real
        assert abs(expectation_pauli(state, p) - want) < 1e-10


def test_hadamard_dense():
    state = DenseState.zero(1)
    apply_gate_dense(state, hadamard(1))
    assert np.allclose(state.vec, [1 / np.sqrt(2), 1 / np.sqrt(2)])
