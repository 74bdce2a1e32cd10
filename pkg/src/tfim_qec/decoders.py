"""Syndrome extraction and decoding: single-error lookup, cycle-majority
decoding of Z errors, and GF(2) erasure recovery.

Syndrome convention: bit 1 at check k means the measured eigenvalue was -1,
equivalently the error anticommutes with check k. Single-error decoding is
exhaustive matching over the 3n+1 weight-<=1 candidates rather than a
hand-coded table, which keeps it robust to index arithmetic and to whichever
check column is the unmeasurable logical one.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .circuits import CodeInstance
from .majorana import encoder_permutation
from .pauli import PauliString, commutes, pauli_mul
from .tableau import StabilizerFrame


class UncorrectableSyndromeError(Exception):
    """No weight-<=1 error reproduces the observed syndrome."""


class AmbiguousSyndromeError(Exception):
    """Several distinct errors reproduce the observed syndrome."""

    def __init__(self, message: str, candidates: tuple[PauliString, ...] = ()):
        super().__init__(message)
        self.candidates = candidates


class DecodingTieError(Exception):
    """Both complementary Z-error candidates have the same weight."""


@dataclass(frozen=True)
class Syndrome:
    """Measured check bits, keyed by check site; 1 means eigenvalue -1."""

    bits: Mapping[int, int]
    available_checks: frozenset[int]

    def __post_init__(self):
        if set(self.bits) != set(self.available_checks):
            raise ValueError("bits must be defined exactly on available_checks")
        object.__setattr__(self, "bits", dict(self.bits))

    def weight(self) -> int:
        return sum(self.bits.values())

    def as_vector(self, order: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.bits[k] for k in order)

    def flagged(self) -> frozenset[int]:
        return frozenset(k for k, b in self.bits.items() if b)


@dataclass(frozen=True)
class ErasurePattern:
    """A set of located errors: the sites are known, their Pauli content is not."""

    erased_sites: frozenset[int]
    model: str = "fixed"
    param: float | int | None = None


def bernoulli_erasure(n: int, p_e: float, rng: np.random.Generator) -> ErasurePattern:
    if not 0.0 <= p_e <= 1.0:
        raise ValueError(f"p_e must lie in [0, 1], got {p_e}")
    draws = rng.random(n) < p_e
    sites = frozenset(s for s in range(1, n + 1) if draws[s - 1])
    return ErasurePattern(sites, "bernoulli", p_e)


def fixed_count_erasure(n: int, m: int, rng: np.random.Generator) -> ErasurePattern:
    if not 0 <= m <= n:
        raise ValueError(f"erasure count {m} out of range 0..{n}")
    sites = frozenset(int(s) for s in rng.choice(n, size=m, replace=False) + 1)
    return ErasurePattern(sites, "fixed", m)


def syndrome_of(error: PauliString, code: CodeInstance) -> Syndrome:
    if error.n != code.n:
        raise ValueError(f"error acts on {error.n} sites, code has {code.n}")
    bits = {
        k: 0 if commutes(error, chk) else 1
        for k, chk in zip(code.check_sites, code.checks)
    }
    return Syndrome(bits, frozenset(code.check_sites))


def syndrome_from_frame(frame: StabilizerFrame, code: CodeInstance) -> Syndrome:
    """Read every check value off a (possibly errored) frame.

    Checks commute with the whole stabilizer group of the encoded state, so
    the outcomes are deterministic; bit 1 records eigenvalue -1.
    """
    bits = {}
    for k, chk in zip(code.check_sites, code.checks):
        val = frame.expectation_sign(chk)
        if val is None:
            raise ValueError(f"check at site {k} is not deterministic on this frame")
        bits[k] = 0 if val == 1 else 1
    return Syndrome(bits, frozenset(code.check_sites))


def single_error_candidates(n: int) -> list[PauliString]:
    """Identity plus every single-site X, Y, Z — the 3n+1 decodable errors."""
    out = [PauliString.identity(n)]
    for site in range(1, n + 1):
        for letter in ("X", "Y", "Z"):
            out.append(PauliString.single(n, site, letter))
    return out


def decode_single_error(s: Syndrome, code: CodeInstance) -> PauliString:
    """The unique weight-<=1 Pauli matching ``s`` on the available checks.

    The correction equals the error itself (single-site Paulis are
    self-inverse). Raises :class:`AmbiguousSyndromeError` when several
    candidates match (expected for n in {6, 8}) and
    :class:`UncorrectableSyndromeError` when none does.
    """
    if s.available_checks != frozenset(code.check_sites):
        raise ValueError("syndrome was taken against a different check set")
    order = code.check_sites
    target = s.as_vector(order)
    matches = [
        cand
        for cand in single_error_candidates(code.n)
        if syndrome_of(cand, code).as_vector(order) == target
    ]
    if not matches:
        raise UncorrectableSyndromeError(
            f"syndrome {target} matches no weight-<=1 error: detected but uncorrectable"
        )
    if len(matches) > 1:
        words = ", ".join(m.to_word() for m in matches)
        raise AmbiguousSyndromeError(
            f"syndrome {target} matches several errors: {words}", tuple(matches)
        )
    return matches[0]


def decode_z_errors(s: Syndrome, code: CodeInstance) -> PauliString:
    """Minimum-weight Z-only correction for a one-round code.

    Sites are relabeled by their position along the encoder's permutation
    cycle; each syndrome bit marks a domain wall between consecutive cycle
    positions, exactly as in repetition-code decoding. Each cycle must contain
    exactly one logical site (its missing check is the free boundary). A tie
    at weight n/2 raises :class:`DecodingTieError` rather than guessing.
    """
    if code.rounds != 1:
        raise ValueError("cycle-majority decoding is defined for one-round codes")
    if s.available_checks != frozenset(code.check_sites):
        raise ValueError("syndrome was taken against a different check set")
    sigma = encoder_permutation(code.n, code.variant)
    logical = set(code.logical_sites)
    flips: list[int] = []
    total_weight = 0
    for cyc in sigma.cycles():
        missing = [site for site in cyc if site in logical]
        if len(missing) != 1:
            raise ValueError(
                f"cycle {cyc} holds {len(missing)} logical sites; need exactly 1"
            )
        # Rotate so the logical site sits at position 0: bits integrate from
        # the free boundary, leaving one global flip per cycle.
        start = cyc.index(missing[0])
        order = cyc[start:] + cyc[:start]
        err = [0] * len(order)
        for q in range(1, len(order)):
            # check at site order[q] couples error bits at positions q, q+1
            err[(q + 1) % len(order)] = err[q] ^ s.bits[order[q]]
        base = [site for q, site in enumerate(order) if err[q]]
        comp = [site for q, site in enumerate(order) if not err[q]]
        if len(base) * 2 == len(order):
            raise DecodingTieError(
                f"cycle {cyc}: both candidates have weight {len(base)}"
            )
        chosen = base if len(base) < len(comp) else comp
        flips.extend(chosen)
        total_weight += len(chosen)
    correction = PauliString.identity(code.n)
    for site in flips:
        correction = pauli_mul(correction, PauliString.single(code.n, site, "Z"))
    return correction


@dataclass(frozen=True)
class LogicalCorrection:
    """Stabilizer dressing that clears one logical operator off erased sites."""

    label: str
    stabilizer_indices: tuple[int, ...]
    cleaned: PauliString


@dataclass(frozen=True)
class ErasureSolution:
    success: bool
    corrections: tuple[LogicalCorrection, ...] | None


def erasure_recoverable(frame: StabilizerFrame, pattern: ErasurePattern) -> ErasureSolution:
    """Decide erasure recoverability by Gaussian elimination over GF(2).

    Success iff every logical generator, restricted to the erased sites, lies
    in the span of the stabilizer restrictions. Existence is a mask-level
    (GF(2)) fact; on success the actual Pauli products are formed so the
    returned cleaned operators carry exact ±1 phases.
    """
    erased = sorted(pattern.erased_sites)
    for s in erased:
        if not 1 <= s <= frame.n:
            raise ValueError(f"erased site {s} out of range 1..{frame.n}")
    labels = [f"X{j + 1}" for j in range(frame.k)] + [f"Z{j + 1}" for j in range(frame.k)]
    logicals = list(frame.logical_x) + list(frame.logical_z)
    if not erased or not logicals:
        cleaned = tuple(
            LogicalCorrection(lab, (), op) for lab, op in zip(labels, logicals)
        )
        return ErasureSolution(True, cleaned)

    n_stab = len(frame.stabilizers)
    n_rows = 2 * len(erased)
    # Constraint rows: for each erased site, one x-bit row and one z-bit row.
    # Row r is an int: bits 0..n_stab-1 hold stabilizer coefficients, bits
    # n_stab.. hold one RHS column per logical generator.
    rows = [0] * n_rows
    for j, stab in enumerate(frame.stabilizers):
        xr, zr = stab.restricted_bits(erased)
        for e in range(len(erased)):
            if (xr >> e) & 1:
                rows[2 * e] |= 1 << j
            if (zr >> e) & 1:
                rows[2 * e + 1] |= 1 << j
    for l, op in enumerate(logicals):
        xr, zr = op.restricted_bits(erased)
        col = 1 << (n_stab + l)
        for e in range(len(erased)):
            if (xr >> e) & 1:
                rows[2 * e] |= col
            if (zr >> e) & 1:
                rows[2 * e + 1] |= col

    pivot_row_of_col: dict[int, int] = {}
    r = 0
    for col in range(n_stab):
        bit = 1 << col
        pivot = next((i for i in range(r, n_rows) if rows[i] & bit), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for i in range(n_rows):
            if i != r and rows[i] & bit:
                rows[i] ^= rows[r]
        pivot_row_of_col[col] = r
        r += 1

    corrections = []
    for l, (lab, op) in enumerate(zip(labels, logicals)):
        rhs_bit = 1 << (n_stab + l)
        stab_mask = (1 << n_stab) - 1
        if any(rows[i] & rhs_bit and not (rows[i] & stab_mask) for i in range(n_rows)):
            return ErasureSolution(False, None)
        indices = tuple(
            col for col, pr in pivot_row_of_col.items() if rows[pr] & rhs_bit
        )
        cleaned = op
        for col in indices:
            cleaned = pauli_mul(cleaned, frame.stabilizers[col])
        xr, zr = cleaned.restricted_bits(erased)
        assert xr == 0 and zr == 0, "GF(2) solution failed to clear the erasure"
        corrections.append(LogicalCorrection(lab, indices, cleaned))
    return ErasureSolution(True, tuple(corrections))
