import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tfim_qec.circuits import (
    build_code,
    build_encoder,
    conjugate_by_encoder,
    derive_check_operators,
    derive_logical_operators,
    global_parity,
    sample_hadamard_layers,
)
from tfim_qec.pauli import PauliString, commutes, pauli_mul


def P(word, n):
    return PauliString.from_word(word, n)


def one_round_open_check(n, k):
    """Closed form of the one-round open-chain check on site k."""
    if k == 2:
        return P("Y1 Y2", n)
    if k == n:
        return P(f"-Y{n-2} Z{n-1} Y{n}", n)
    if k == n - 1:
        return P(f"X{n-1} X{n}", n)
    if k % 2:
        return P(f"X{k} Z{k+1} X{k+2}", n)
    return P(f"Y{k-2} Z{k-1} Y{k}", n)


class TestBuildEncoder:
    def test_open_round_bond_order_n10(self):
        sched = build_encoder(10, "open", 1)
        bonds = [g.site for g in sched]
        assert bonds == [1, 3, 5, 7, 9, 2, 4, 6, 8]

    def test_periodic_adds_wraparound_to_second_layer(self):
        sched = build_encoder(10, "periodic", 1)
        assert [g.site for g in sched] == [1, 3, 5, 7, 9, 2, 4, 6, 8, 10]

    def test_gate_count_n4(self):
        assert len(build_encoder(4, "open", 1)) == 3

    def test_hadamard_layers_sit_between_rounds(self):
        sched = build_encoder(4, "open", 2, hadamard_layers=[{2, 4}])
        kinds = [(g.kind, g.site) for g in sched]
        assert kinds == [
            ("tfim", 1), ("tfim", 3), ("tfim", 2),
            ("h", 2), ("h", 4),
            ("tfim", 1), ("tfim", 3), ("tfim", 2),
        ]

    def test_validation(self):
        with pytest.raises(ValueError):
            build_encoder(7, "open", 1)
        with pytest.raises(ValueError):
            build_encoder(10, "open", 0)
        with pytest.raises(ValueError):
            build_encoder(4, "open", 2, hadamard_layers=[{1}, {2}])
        with pytest.raises(ValueError):
            build_encoder(4, "open", 2, hadamard_layers=[{9}])


class TestOneRoundConjugation:
    N = 12

    def test_x_even(self):
        for k in range(2, self.N, 2):
            img = conjugate_by_encoder(P(f"X{k}", self.N), build_code(self.N, "open", 1))
            assert img == P(f"Z{k} X{k+1}", self.N)

    def test_x_odd_interior(self):
        for k in range(3, self.N - 2, 2):
            img = conjugate_by_encoder(P(f"X{k}", self.N), build_code(self.N, "open", 1))
            assert img == P(f"-Y{k-1} Y{k} Z{k+1} X{k+2}", self.N)

    def test_y_odd(self):
        for k in range(3, self.N, 2):
            img = conjugate_by_encoder(P(f"Y{k}", self.N), build_code(self.N, "open", 1))
            assert img == P(f"-Y{k-1} Z{k}", self.N)

    def test_y_even_interior(self):
        for k in range(4, self.N, 2):
            img = conjugate_by_encoder(P(f"Y{k}", self.N), build_code(self.N, "open", 1))
            assert img == P(f"Y{k-2} Z{k-1} X{k} X{k+1}", self.N)

    def test_z_odd(self):
        for k in range(1, self.N - 2, 2):
            img = conjugate_by_encoder(P(f"Z{k}", self.N), build_code(self.N, "open", 1))
            assert img == P(f"X{k} Z{k+1} X{k+2}", self.N)

    def test_z_even_interior(self):
        for k in range(4, self.N + 1, 2):
            img = conjugate_by_encoder(P(f"Z{k}", self.N), build_code(self.N, "open", 1))
            if k == self.N:
                assert img == P(f"-Y{k-2} Z{k-1} Y{k}", self.N)
            else:
                assert img == P(f"Y{k-2} Z{k-1} Y{k}", self.N)


class TestCheckAndLogicalForms:
    @pytest.mark.parametrize("n", [10, 12, 14])
    def test_one_round_open_checks(self, n):
        code = build_code(n, "open", 1)
        for k in range(2, n + 1):
            assert code.check_for_site(k) == one_round_open_check(n, k)

    @pytest.mark.parametrize("n", [10, 12, 14])
    def test_one_round_logicals(self, n):
        code = build_code(n, "open", 1)
        assert code.logical_x[0] == P("Z1 Z2 X3", n)
        assert code.logical_z[0] == P("X1 Z2 X3", n)

    def test_logical_product_is_a_logical_y(self):
        # (Z1 Z2 X3)(X1 Z2 X3) telescopes to i·Y1, the evolved logical Y; it
        # anticommutes with both logical operators and commutes with checks.
        code = build_code(10, "open", 1)
        prod = pauli_mul(code.logical_x[0], code.logical_z[0])
        assert prod == PauliString(10, 1, 1, 1)  # +i Y1
        assert not commutes(prod, code.logical_z[0])
        assert not commutes(prod, code.logical_x[0])
        assert all(commutes(prod, c) for c in code.checks)

    @pytest.mark.parametrize("n", [10, 12, 14])
    def test_two_round_periodic_letter_patterns(self, n):
        code = build_code(n, "periodic", 2)
        every = derive_check_operators(code, logical_sites=())
        for k in range(1, n + 1):
            op = every[k - 1]
            assert op.is_hermitian()
            wrap = lambda s: (s - 1) % n + 1
            if k % 2:
                expect = {wrap(k): "X", wrap(k + 1): "Z", wrap(k + 2): "Z",
                          wrap(k + 3): "Z", wrap(k + 4): "X"}
            else:
                expect = {wrap(k - 4): "Y", wrap(k - 3): "Z", wrap(k - 2): "Z",
                          wrap(k - 1): "Z", wrap(k): "Y"}
            got = {s: op.letter_at(s) for s in op.support()}
            assert got == expect, f"k={k}: {op.to_word()}"

    def test_checks_commute_and_logicals_commute_with_checks(self):
        for variant, rounds in (("open", 1), ("periodic", 2)):
            code = build_code(12, variant, rounds)
            for i, a in enumerate(code.checks):
                assert all(commutes(a, b) for b in code.checks[i + 1:])
                assert commutes(a, code.logical_x[0])
                assert commutes(a, code.logical_z[0])
            assert not commutes(code.logical_x[0], code.logical_z[0])


class TestGlobalParity:
    def test_invariant_without_hadamards(self):
        for variant, rounds in (("open", 1), ("open", 3), ("periodic", 2)):
            code = build_code(8, variant, rounds)
            zbar = global_parity(8)
            assert conjugate_by_encoder(zbar, code) == zbar

    def test_broken_by_hadamards(self):
        code = build_code(8, "open", 2, hadamard_layers=[{3}])
        zbar = global_parity(8)
        assert conjugate_by_encoder(zbar, code) != zbar


class TestHadamardSampling:
    def test_edge_probabilities(self):
        rng = np.random.default_rng(0)
        assert sample_hadamard_layers(6, 3, 0.0, rng) == (frozenset(), frozenset())
        full = frozenset(range(1, 7))
        assert sample_hadamard_layers(6, 3, 1.0, rng) == (full, full)

    def test_single_round_has_no_slots(self):
        rng = np.random.default_rng(0)
        assert sample_hadamard_layers(6, 1, 0.7, rng) == ()

    def test_mean_layer_size(self):
        rng = np.random.default_rng(1)
        sizes = [
            len(sample_hadamard_layers(64, 2, 0.5, rng)[0]) for _ in range(1000)
        ]
        sigma_mean = np.sqrt(64 * 0.25) / np.sqrt(1000)
        assert abs(np.mean(sizes) - 32) < 5 * sigma_mean

    def test_deterministic_given_seed(self):
        a = sample_hadamard_layers(12, 4, 0.3, np.random.default_rng(9))
        b = sample_hadamard_layers(12, 4, 0.3, np.random.default_rng(9))
        assert a == b

    def test_exclusion_flag(self):
        rng = np.random.default_rng(2)
        layers = sample_hadamard_layers(8, 3, 1.0, rng, exclude=(1, 3))
        assert all(layer == frozenset({2, 4, 5, 6, 7, 8}) for layer in layers)

    def test_probability_validation(self):
        with pytest.raises(ValueError):
            sample_hadamard_layers(4, 2, 1.5, np.random.default_rng(0))


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_derive_matches_stored_operators(data):
    n = data.draw(st.sampled_from([4, 6, 8]))
    variant = data.draw(st.sampled_from(["open", "periodic"]))
    rounds = data.draw(st.integers(1, 3))
    code = build_code(n, variant, rounds)
    assert list(code.checks) == derive_check_operators(code)
    lx, lz = derive_logical_operators(code)
    assert list(code.logical_x) == lx and list(code.logical_z) == lz


def test_logical_site_validation():
    with pytest.raises(ValueError):
        build_code(6, "open", 1, logical_sites=(9,))
    code = build_code(6, "open", 1)
    with pytest.raises(ValueError):
        derive_check_operators(code, logical_sites=(7,))


def test_size_mismatch():
    code = build_code(6, "open", 1)
    with pytest.raises(ValueError):
        conjugate_by_encoder(P("X1", 4), code)
