from itertools import combinations

import numpy as np
import pytest

from tfim_qec.circuits import build_code, encoded_frame, sample_hadamard_layers
from tfim_qec.decoders import (
    AmbiguousSyndromeError,
    DecodingTieError,
    ErasurePattern,
    Syndrome,
    UncorrectableSyndromeError,
    bernoulli_erasure,
    decode_single_error,
    decode_z_errors,
    erasure_recoverable,
    fixed_count_erasure,
    single_error_candidates,
    syndrome_from_frame,
    syndrome_of,
)
from tfim_qec.majorana import encoder_permutation
from tfim_qec.pauli import PauliString, pauli_mul
from tfim_qec.tableau import StabilizerFrame


def P(word, n):
    return PauliString.from_word(word, n)


def brute_force_erasable(frame, erased):
    """Exhaustive stabilizer-group search, independent of the GF(2) solver."""
    stabs = frame.stabilizers
    restrictions = set()
    for bits in range(1 << len(stabs)):
        acc = PauliString.identity(frame.n)
        for j in range(len(stabs)):
            if (bits >> j) & 1:
                acc = pauli_mul(acc, stabs[j])
        restrictions.add(acc.restricted_bits(erased))
    return all(
        op.restricted_bits(erased) in restrictions
        for op in list(frame.logical_x) + list(frame.logical_z)
    )


class TestSyndromeOf:
    def test_identity_error(self):
        code = build_code(10, "periodic", 2)
        s = syndrome_of(PauliString.identity(10), code)
        assert s.weight() == 0

    def test_z_error_one_round_flags_cycle_neighbours(self):
        n = 12
        code = build_code(n, "open", 1)
        sigma = encoder_permutation(n, "open")
        inv = sigma.inverse()
        for k in range(2, n + 1):
            if inv(k) == 1 or k == 1:
                continue  # flags touching the unmeasured logical column
            s = syndrome_of(P(f"Z{k}", n), code)
            assert s.flagged() == {k, inv(k)}

    def test_two_round_lookup_rows(self):
        # the six single-error syndrome patterns on the two-round code,
        # expressed on the check columns (2k-3, 2k-1, 2k+1, 2k, 2k+2, 2k+4)
        n = 12
        code = build_code(n, "periodic", 2, logical_sites=())
        rows = {
            "X": {"even": (1, 1, 0, 1, 1, 1), "odd": (0, 1, 0, 0, 1, 1)},
            "Y": {"even": (1, 1, 0, 0, 1, 0), "odd": (1, 1, 1, 0, 1, 1)},
            "Z": {"even": (0, 0, 0, 1, 0, 1), "odd": (1, 0, 1, 0, 0, 0)},
        }
        wrap = lambda s: (s - 1) % n + 1
        for site in range(3, n - 4):
            parity = "even" if site % 2 == 0 else "odd"
            base = site if parity == "even" else site - 1  # base = 2k
            cols = [wrap(c) for c in (base - 3, base - 1, base + 1, base, base + 2, base + 4)]
            for letter in "XYZ":
                s = syndrome_of(PauliString.single(n, site, letter), code)
                got = tuple(s.bits[c] for c in cols)
                assert got == rows[letter][parity], (site, letter)
                # nothing outside the six tabulated columns fires
                assert s.flagged() <= set(cols)

    def test_size_mismatch(self):
        code = build_code(10, "open", 1)
        with pytest.raises(ValueError):
            syndrome_of(P("X1", 8), code)

    def test_syndrome_requires_matching_support(self):
        with pytest.raises(ValueError):
            Syndrome({2: 1}, frozenset({2, 3}))


class TestDecodeSingleError:
    def test_zero_syndrome_gives_identity(self):
        code = build_code(10, "periodic", 2)
        s = syndrome_of(PauliString.identity(10), code)
        assert decode_single_error(s, code) == PauliString.identity(10)

    @pytest.mark.parametrize("n", [10, 12])
    def test_round_trip_all_single_errors(self, n):
        code = build_code(n, "periodic", 2)
        for cand in single_error_candidates(n):
            restored = decode_single_error(syndrome_of(cand, code), code)
            assert restored == cand

    def test_lookup_row_z_odd(self):
        # flag columns (2k-3, 2k+1) only: decodes to Z on the odd site 2k+1
        n, k = 12, 3
        code = build_code(n, "periodic", 2)
        bits = {c: 0 for c in code.check_sites}
        bits[2 * k - 3] = 1
        bits[2 * k + 1] = 1
        out = decode_single_error(Syndrome(bits, frozenset(code.check_sites)), code)
        assert out == P(f"Z{2*k+1}", n)

    def test_n8_collisions_are_ambiguous(self):
        code = build_code(8, "periodic", 2)
        with pytest.raises(AmbiguousSyndromeError) as exc:
            decode_single_error(syndrome_of(P("Z4", 8), code), code)
        words = {c.to_word() for c in exc.value.candidates}
        assert words == {"Z4", "Z8"}

    def test_n6_has_a_collision(self):
        code = build_code(6, "periodic", 2)
        seen = {}
        collisions = []
        for cand in single_error_candidates(6)[1:]:
            key = tuple(syndrome_of(cand, code).as_vector(code.check_sites))
            if key in seen:
                collisions.append((seen[key], cand.to_word()))
            else:
                seen[key] = cand.to_word()
        assert collisions

    def test_uncorrectable_syndrome(self):
        n = 12
        code = build_code(n, "periodic", 2)
        two = pauli_mul(P("X3", n), P("X9", n))
        s = syndrome_of(two, code)
        with pytest.raises(UncorrectableSyndromeError):
            decode_single_error(s, code)

    @pytest.mark.parametrize("n", [10, 12, 14])
    def test_distinct_syndromes_robust_to_column_loss(self, n):
        code = build_code(n, "periodic", 2, logical_sites=())
        errors = single_error_candidates(n)[1:]
        vectors = [syndrome_of(e, code).as_vector(code.check_sites) for e in errors]
        assert all(sum(v) > 0 for v in vectors)
        for a, b in combinations(range(len(vectors)), 2):
            dist = sum(x != y for x, y in zip(vectors[a], vectors[b]))
            assert dist >= 2, (errors[a].to_word(), errors[b].to_word())


class TestDecodeZErrors:
    def test_empty(self):
        code = build_code(12, "open", 1)
        s = syndrome_of(PauliString.identity(12), code)
        assert decode_z_errors(s, code) == PauliString.identity(12)

    def test_single_z_recovered(self):
        n = 12
        code = build_code(n, "open", 1)
        for k in range(1, n + 1):
            err = P(f"Z{k}", n)
            assert decode_z_errors(syndrome_of(err, code), code) == err

    def test_small_weights_exhaustive_n8(self):
        n = 8
        code = build_code(n, "open", 1)
        for w in range(0, n // 2):
            for sites in combinations(range(1, n + 1), w):
                err = PauliString.identity(n)
                for s in sites:
                    err = pauli_mul(err, P(f"Z{s}", n))
                assert decode_z_errors(syndrome_of(err, code), code) == err

    def test_half_weight_ties_flagged(self):
        n = 8
        code = build_code(n, "open", 1)
        for sites in combinations(range(1, n + 1), n // 2):
            err = PauliString.identity(n)
            for s in sites:
                err = pauli_mul(err, P(f"Z{s}", n))
            with pytest.raises(DecodingTieError):
                decode_z_errors(syndrome_of(err, code), code)

    def test_periodic_two_logical_cycles(self):
        n = 8
        code = build_code(n, "periodic", 1, logical_sites=(1, 2))
        err = pauli_mul(P("Z5", n), P("Z6", n))
        assert decode_z_errors(syndrome_of(err, code), code) == err

    def test_requires_one_round(self):
        code = build_code(8, "periodic", 2)
        s = syndrome_of(PauliString.identity(8), code)
        with pytest.raises(ValueError):
            decode_z_errors(s, code)


class TestSyndromeFromFrame:
    def test_error_then_correction_restores_frame(self):
        n = 10
        code = build_code(n, "periodic", 2)
        for cand in single_error_candidates(n):
            frame = encoded_frame(code)
            reference = frame.copy()
            frame.apply_pauli(cand)
            s = syndrome_from_frame(frame, code)
            assert s == syndrome_of(cand, code)
            correction = decode_single_error(s, code)
            frame.apply_pauli(correction)
            assert frame.stabilizers == reference.stabilizers
            assert frame.logical_x == reference.logical_x
            assert frame.logical_z == reference.logical_z


class TestErasureRecovery:
    def test_empty_pattern_succeeds(self):
        frame = encoded_frame(build_code(8, "open", 1))
        sol = erasure_recoverable(frame, ErasurePattern(frozenset()))
        assert sol.success

    def test_full_erasure_fails(self):
        frame = encoded_frame(build_code(8, "open", 1))
        sol = erasure_recoverable(frame, ErasurePattern(frozenset(range(1, 9))))
        assert not sol.success

    def test_worked_example_site_three(self):
        code = build_code(10, "open", 1)
        frame = encoded_frame(code)
        sol = erasure_recoverable(frame, ErasurePattern(frozenset({3})))
        assert sol.success
        by_label = {c.label: c for c in sol.corrections}
        fix = by_label["X1"]
        # the logical X support on site 3 is cleared by the check X3 Z4 X5
        assert [frame.stabilizers[j] for j in fix.stabilizer_indices] == [
            P("X3 Z4 X5", 10)
        ]
        assert fix.cleaned.letter_at(3) == "I"
        assert fix.cleaned == P("Z1 Z2 Z4 X5", 10)

    def test_cleaned_operators_clear_every_erased_site(self):
        rng = np.random.default_rng(0)
        code = build_code(12, "periodic", 3, logical_sites=(1, 5, 9),
                          hadamard_layers=[{2, 7}, {4, 11}])
        frame = encoded_frame(code)
        for _ in range(20):
            pattern = bernoulli_erasure(12, 0.2, rng)
            sol = erasure_recoverable(frame, pattern)
            if sol.success:
                for corr in sol.corrections:
                    assert all(
                        corr.cleaned.letter_at(s) == "I" for s in pattern.erased_sites
                    )
                    assert corr.cleaned.is_hermitian()

    @pytest.mark.parametrize(
        "n,variant,rounds,logical",
        [(6, "open", 1, (1,)), (8, "open", 1, (1,)), (8, "periodic", 2, (1,))],
    )
    def test_matches_brute_force_small(self, n, variant, rounds, logical):
        frame = encoded_frame(build_code(n, variant, rounds, logical))
        for size in range(0, 4):
            for sites in combinations(range(1, n + 1), size):
                sol = erasure_recoverable(frame, ErasurePattern(frozenset(sites)))
                assert sol.success == brute_force_erasable(frame, sites)

    def test_matches_brute_force_multi_logical_with_hadamards(self):
        rng = np.random.default_rng(5)
        layers = sample_hadamard_layers(8, 3, 0.5, rng)
        frame = encoded_frame(
            build_code(8, "periodic", 3, logical_sites=(1, 3, 5, 7),
                       hadamard_layers=layers)
        )
        for size in range(0, 4):
            for sites in combinations(range(1, 9), size):
                sol = erasure_recoverable(frame, ErasurePattern(frozenset(sites)))
                assert sol.success == brute_force_erasable(frame, sites)


class TestErasureSampling:
    def test_bernoulli_bounds(self):
        rng = np.random.default_rng(1)
        assert bernoulli_erasure(10, 0.0, rng).erased_sites == frozenset()
        assert bernoulli_erasure(10, 1.0, rng).erased_sites == frozenset(range(1, 11))
        with pytest.raises(ValueError):
            bernoulli_erasure(10, 1.2, rng)

    def test_fixed_count(self):
        rng = np.random.default_rng(2)
        pat = fixed_count_erasure(12, 4, rng)
        assert len(pat.erased_sites) == 4
        with pytest.raises(ValueError):
            fixed_count_erasure(12, 13, rng)
