"""Stabilizer frames: tableau simulation with explicit logical rows.

A frame holds n-k stabilizer generators, their destabilizer partners, and k
tracked logical X/Z pairs. The 2n rows form a symplectic basis: every row
commutes with every other except its own conjugate partner. Destabilizers make
deterministic measurement outcomes O(n * rows) without per-measurement
Gaussian elimination; logical rows are carried explicitly because codes here
may keep up to n/2 data qubits logical.

Frames are plain values owned by the caller: no internal sharing, all
randomness comes from an explicitly passed ``numpy.random.Generator``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .gates import CliffordGate, conjugate_pauli
from .pauli import PauliString, commutes, pauli_mul


class FrameConsistencyError(RuntimeError):
    """The tableau's symplectic structure has been violated."""


@dataclass(frozen=True)
class MeasurementResult:
    """Outcome of one projective Pauli measurement.

    ``outcome`` is the measured eigenvalue ±1. ``deterministic`` marks
    outcomes fixed by the stabilizer group. ``collapsed_pair`` is the index of
    the logical pair destroyed by the measurement, or None; a non-None value
    means encoded information was read out (k dropped by one).
    """

    outcome: int
    deterministic: bool
    collapsed_pair: int | None = None


class StabilizerFrame:
    """Mutable stabilizer tableau for one n-qubit state."""

    __slots__ = ("n", "stabilizers", "destabilizers", "logical_x", "logical_z")

    def __init__(
        self,
        n: int,
        stabilizers: Sequence[PauliString],
        destabilizers: Sequence[PauliString],
        logical_x: Sequence[PauliString] = (),
        logical_z: Sequence[PauliString] = (),
    ):
        if len(stabilizers) != len(destabilizers):
            raise ValueError("stabilizers and destabilizers must pair up")
        if len(logical_x) != len(logical_z):
            raise ValueError("logical X and Z rows must pair up")
        if len(stabilizers) + len(logical_x) != n:
            raise ValueError("need (n - k) stabilizers and k logical pairs")
        self.n = n
        self.stabilizers = list(stabilizers)
        self.destabilizers = list(destabilizers)
        self.logical_x = list(logical_x)
        self.logical_z = list(logical_z)

    @classmethod
    def initial(cls, n: int, logical_sites: Iterable[int] = ()) -> "StabilizerFrame":
        """Frame for |0...0> with unknown qubits parked on ``logical_sites``.

        Non-logical site j is stabilized by Z_j (destabilizer X_j); each
        logical site s contributes the pair (X_s, Z_s).
        """
        logical = sorted(set(logical_sites))
        for s in logical:
            if not 1 <= s <= n:
                raise ValueError(f"logical site {s} out of range 1..{n}")
        logical_set = set(logical)
        stab, destab = [], []
        for j in range(1, n + 1):
            if j not in logical_set:
                stab.append(PauliString.single(n, j, "Z"))
                destab.append(PauliString.single(n, j, "X"))
        lx = [PauliString.single(n, s, "X") for s in logical]
        lz = [PauliString.single(n, s, "Z") for s in logical]
        return cls(n, stab, destab, lx, lz)

    @property
    def k(self) -> int:
        return len(self.logical_x)

    def copy(self) -> "StabilizerFrame":
        return StabilizerFrame(
            self.n,
            list(self.stabilizers),
            list(self.destabilizers),
            list(self.logical_x),
            list(self.logical_z),
        )

    def _row_lists(self):
        return (self.stabilizers, self.destabilizers, self.logical_x, self.logical_z)

    # -- evolution -----------------------------------------------------------

    def apply_gate(self, gate: CliffordGate) -> "StabilizerFrame":
        for rows in self._row_lists():
            for i, row in enumerate(rows):
                rows[i] = conjugate_pauli(row, gate)
        return self

    def apply_schedule(
        self, gates: Iterable[CliffordGate], validate: bool = False
    ) -> "StabilizerFrame":
        for g in gates:
            self.apply_gate(g)
            if validate:
                self.verify_invariants()
        return self

    def apply_pauli(self, p: PauliString) -> "StabilizerFrame":
        """Apply a Pauli as a gate: rows anticommuting with it flip sign."""
        if p.n != self.n:
            raise ValueError("size mismatch")
        for rows in self._row_lists():
            for i, row in enumerate(rows):
                if not commutes(row, p):
                    rows[i] = row.negate()
        return self

    # -- measurement ----------------------------------------------------------

    def measure(self, obs: PauliString, rng: np.random.Generator) -> MeasurementResult:
        """Projectively measure the Hermitian Pauli ``obs``.

        Deterministic if obs is ± a stabilizer-group element; a fair coin if it
        anticommutes with a stabilizer; a fair coin plus logical collapse if it
        commutes with the group but overlaps the logical algebra.
        """
        if obs.n != self.n:
            raise ValueError("size mismatch")
        if not obs.is_hermitian():
            raise ValueError(f"observable must have phase ±1, got {obs.to_word()!r}")

        anti_stab = [j for j, s in enumerate(self.stabilizers) if not commutes(obs, s)]
        if anti_stab:
            return self._measure_random(obs, anti_stab[0], rng)

        anti_logical = [
            (which, j)
            for which, rows in (("x", self.logical_x), ("z", self.logical_z))
            for j, row in enumerate(rows)
            if not commutes(obs, row)
        ]
        if not anti_logical:
            return MeasurementResult(self._deterministic_outcome(obs), True, None)
        return self._measure_collapse(obs, anti_logical, rng)

    def expectation_sign(self, obs: PauliString) -> int | None:
        """±1 for observables fixed by the stabilizer group, else None."""
        if obs.n != self.n:
            raise ValueError("size mismatch")
        if not obs.is_hermitian():
            raise ValueError("observable must have phase ±1")
        if any(not commutes(obs, s) for s in self.stabilizers):
            return None
        if any(not commutes(obs, r) for r in self.logical_x + self.logical_z):
            return None
        return self._deterministic_outcome(obs)

    def _deterministic_outcome(self, obs: PauliString) -> int:
        acc = PauliString.identity(self.n)
        for j, d in enumerate(self.destabilizers):
            if not commutes(obs, d):
                acc = pauli_mul(acc, self.stabilizers[j])
        if not acc.equal_up_to_sign(obs):
            raise FrameConsistencyError(
                "observable commutes with the group but is not generated by it"
            )
        return 1 if acc.phase == obs.phase else -1

    def _measure_random(
        self, obs: PauliString, pivot: int, rng: np.random.Generator
    ) -> MeasurementResult:
        old = self.stabilizers[pivot]
        for rows in self._row_lists():
            for i, row in enumerate(rows):
                if rows is self.stabilizers and i == pivot:
                    continue
                if rows is self.destabilizers and i == pivot:
                    continue  # overwritten below
                if not commutes(obs, row):
                    rows[i] = pauli_mul(row, old)
        outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
        self.destabilizers[pivot] = old
        self.stabilizers[pivot] = obs if outcome == 1 else obs.negate()
        return MeasurementResult(outcome, False, None)

    def _measure_collapse(
        self,
        obs: PauliString,
        anti_logical: list[tuple[str, int]],
        rng: np.random.Generator,
    ) -> MeasurementResult:
        which, jp = anti_logical[0]
        pivot = (self.logical_x if which == "x" else self.logical_z)[jp]
        # Fix every other anticommuting row except the pivot's own partner,
        # which is dropped with the collapsed pair (multiplying it by the
        # pivot would create a non-Hermitian row).
        for rows in (self.destabilizers, self.logical_x, self.logical_z):
            for i, row in enumerate(rows):
                if rows is self.logical_x and i == jp:
                    continue
                if rows is self.logical_z and i == jp:
                    continue
                if not commutes(obs, row):
                    rows[i] = pauli_mul(row, pivot)
        outcome = 1 if int(rng.integers(0, 2)) == 0 else -1
        self.stabilizers.append(obs if outcome == 1 else obs.negate())
        self.destabilizers.append(pivot)
        del self.logical_x[jp]
        del self.logical_z[jp]
        return MeasurementResult(outcome, False, jp)

    # -- structure checks ------------------------------------------------------

    def verify_invariants(self) -> None:
        """Re-verify the full pairwise commutation structure (test/debug aid)."""
        ns = len(self.stabilizers)
        rows = (
            [("s", i, p) for i, p in enumerate(self.stabilizers)]
            + [("d", i, p) for i, p in enumerate(self.destabilizers)]
            + [("lx", i, p) for i, p in enumerate(self.logical_x)]
            + [("lz", i, p) for i, p in enumerate(self.logical_z)]
        )
        for kind, i, p in rows:
            if not p.is_hermitian():
                raise FrameConsistencyError(f"row {kind}{i} has phase ±i")
        for a in range(len(rows)):
            ka, ia, pa = rows[a]
            for b in range(a + 1, len(rows)):
                kb, ib, pb = rows[b]
                conjugate_pair = (ia == ib) and {ka, kb} in ({"s", "d"}, {"lx", "lz"})
                if commutes(pa, pb) == conjugate_pair:
                    raise FrameConsistencyError(
                        f"rows {ka}{ia} and {kb}{ib} break the symplectic pairing"
                    )
        if ns + len(self.logical_x) != self.n:
            raise FrameConsistencyError("row counts no longer match n")

    def contains_stabilizer(self, p: PauliString) -> bool:
        """True iff ``p`` equals a stabilizer-group element including sign."""
        if any(not commutes(p, s) for s in self.stabilizers):
            return False
        if any(not commutes(p, r) for r in self.logical_x + self.logical_z):
            return False
        acc = PauliString.identity(self.n)
        for j, d in enumerate(self.destabilizers):
            if not commutes(p, d):
                acc = pauli_mul(acc, self.stabilizers[j])
        return acc == p


def frame_conjugate(frame: StabilizerFrame, gate: CliffordGate) -> StabilizerFrame:
    """Functional wrapper: a new frame with every row conjugated by ``gate``."""
    return frame.copy().apply_gate(gate)


def measure_pauli(
    frame: StabilizerFrame, obs: PauliString, rng: np.random.Generator
) -> tuple[int, StabilizerFrame]:
    """Functional wrapper around :meth:`StabilizerFrame.measure`."""
    out = frame.copy()
    result = out.measure(obs, rng)
    return result.outcome, out
