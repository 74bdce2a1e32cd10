"""Brickwork encoder construction and Heisenberg-picture operator derivation.

One encoding round is two sub-layers of bond gates: odd bonds (1,2),(3,4),...
then even bonds (2,3),(4,5),...; the periodic variant appends the wraparound
bond (n,1) to the second sub-layer. Optional random Hadamard layers sit
between consecutive rounds. Depth is counted in gate sub-layers, so r rounds
means depth t = 2r.

Check and logical operators are derived by conjugating the initial single-site
Z's and logical X/Z through the full schedule, signs included.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .gates import CliffordGate, conjugate_pauli_schedule, hadamard, tfim
from .pauli import PauliString
from .tableau import StabilizerFrame

Variant = Literal["open", "periodic"]


def round_bonds(n: int, variant: Variant) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Bond start sites for the two sub-layers of one round."""
    if n < 4 or n % 2:
        raise ValueError(f"encoder needs even n >= 4, got {n}")
    if variant not in ("open", "periodic"):
        raise ValueError(f"unknown variant {variant!r}")
    odd = tuple(range(1, n, 2))
    even = tuple(range(2, n - 1, 2))
    if variant == "periodic":
        even = even + (n,)
    return odd, even


def build_encoder(
    n: int,
    variant: Variant,
    rounds: int = 1,
    hadamard_layers: Sequence[Iterable[int]] | None = None,
) -> tuple[CliffordGate, ...]:
    """Deterministic gate list for ``rounds`` rounds with optional Hadamard
    layers inserted between consecutive rounds (``rounds - 1`` slots)."""
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    odd, even = round_bonds(n, variant)
    layers = [frozenset()] * (rounds - 1)
    if hadamard_layers is not None:
        if len(hadamard_layers) != rounds - 1:
            raise ValueError(
                f"expected {rounds - 1} Hadamard layers for {rounds} rounds, "
                f"got {len(hadamard_layers)}"
            )
        layers = [frozenset(layer) for layer in hadamard_layers]
        for layer in layers:
            for s in layer:
                if not 1 <= s <= n:
                    raise ValueError(f"Hadamard site {s} out of range 1..{n}")
    schedule: list[CliffordGate] = []
    for r in range(rounds):
        schedule.extend(tfim(i) for i in odd)
        schedule.extend(tfim(i) for i in even)
        if r < rounds - 1:
            schedule.extend(hadamard(s) for s in sorted(layers[r]))
    return tuple(schedule)


def sample_hadamard_layers(
    n: int,
    rounds: int,
    p_h: float,
    rng: np.random.Generator,
    exclude: Iterable[int] = (),
) -> tuple[frozenset[int], ...]:
    """One site-set per inter-round slot, each site included i.i.d. with
    probability ``p_h``. ``exclude`` removes sites (e.g. logical ones) from
    consideration; by default every site participates."""
    if not 0.0 <= p_h <= 1.0:
        raise ValueError(f"p_h must lie in [0, 1], got {p_h}")
    if rounds < 1:
        raise ValueError(f"rounds must be >= 1, got {rounds}")
    excluded = set(exclude)
    layers = []
    for _ in range(rounds - 1):
        draws = rng.random(n) < p_h
        layers.append(
            frozenset(s for s in range(1, n + 1) if draws[s - 1] and s not in excluded)
        )
    return tuple(layers)


@dataclass(frozen=True)
class CodeInstance:
    """An encoder schedule together with its derived check/logical operators.

    ``checks[i]`` is the evolved Z on site ``check_sites[i]``; check and
    logical operators always carry sign ±1. Instances are immutable and safe
    to share read-only across threads.
    """

    n: int
    variant: Variant
    rounds: int
    hadamard_layers: tuple[frozenset[int], ...]
    logical_sites: tuple[int, ...]
    schedule: tuple[CliffordGate, ...]
    checks: tuple[PauliString, ...]
    check_sites: tuple[int, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]

    @property
    def depth(self) -> int:
        return 2 * self.rounds

    @property
    def k(self) -> int:
        return len(self.logical_sites)

    def check_for_site(self, k: int) -> PauliString:
        try:
            return self.checks[self.check_sites.index(k)]
        except ValueError:
            raise KeyError(f"no check operator for site {k}") from None


def build_code(
    n: int,
    variant: Variant = "open",
    rounds: int = 1,
    logical_sites: Iterable[int] = (1,),
    hadamard_layers: Sequence[Iterable[int]] | None = None,
) -> CodeInstance:
    logical = tuple(sorted(set(logical_sites)))
    for s in logical:
        if not 1 <= s <= n:
            raise ValueError(f"logical site {s} out of range 1..{n}")
    schedule = build_encoder(n, variant, rounds, hadamard_layers)
    layers = (
        tuple(frozenset(layer) for layer in hadamard_layers)
        if hadamard_layers is not None
        else tuple(frozenset() for _ in range(rounds - 1))
    )
    check_sites = tuple(k for k in range(1, n + 1) if k not in logical)
    checks = tuple(
        conjugate_pauli_schedule(PauliString.single(n, k, "Z"), schedule)
        for k in check_sites
    )
    lx = tuple(
        conjugate_pauli_schedule(PauliString.single(n, s, "X"), schedule)
        for s in logical
    )
    lz = tuple(
        conjugate_pauli_schedule(PauliString.single(n, s, "Z"), schedule)
        for s in logical
    )
    for op in checks + lx + lz:
        assert op.is_hermitian(), "derived operator lost Hermiticity"
    return CodeInstance(
        n, variant, rounds, layers, logical, schedule, checks, check_sites, lx, lz
    )


def conjugate_by_encoder(p: PauliString, code: CodeInstance) -> PauliString:
    if p.n != code.n:
        raise ValueError(f"operator acts on {p.n} sites, code has {code.n}")
    return conjugate_pauli_schedule(p, code.schedule)


def derive_check_operators(
    code: CodeInstance, logical_sites: Iterable[int] | None = None
) -> list[PauliString]:
    """Evolved Z_k for every k outside ``logical_sites`` (default: the code's
    own logical sites). Pass an empty iterable to derive all n columns."""
    logical = set(code.logical_sites if logical_sites is None else logical_sites)
    for s in logical:
        if not 1 <= s <= code.n:
            raise ValueError(f"logical site {s} out of range 1..{code.n}")
    return [
        conjugate_pauli_schedule(PauliString.single(code.n, k, "Z"), code.schedule)
        for k in range(1, code.n + 1)
        if k not in logical
    ]


def derive_logical_operators(
    code: CodeInstance, logical_sites: Iterable[int] | None = None
) -> tuple[list[PauliString], list[PauliString]]:
    logical = sorted(
        set(code.logical_sites if logical_sites is None else logical_sites)
    )
    for s in logical:
        if not 1 <= s <= code.n:
            raise ValueError(f"logical site {s} out of range 1..{code.n}")
    lx = [
        conjugate_pauli_schedule(PauliString.single(code.n, s, "X"), code.schedule)
        for s in logical
    ]
    lz = [
        conjugate_pauli_schedule(PauliString.single(code.n, s, "Z"), code.schedule)
        for s in logical
    ]
    return lx, lz


def global_parity(n: int) -> PauliString:
    """The all-sites Z product; invariant under any pure bond-gate schedule."""
    return PauliString(n, 0, (1 << n) - 1, 0)


def initial_frame(n: int, logical_sites: Iterable[int] = (1,)) -> StabilizerFrame:
    return StabilizerFrame.initial(n, logical_sites)


def encoded_frame(code: CodeInstance) -> StabilizerFrame:
    frame = StabilizerFrame.initial(code.n, code.logical_sites)
    frame.apply_schedule(code.schedule)
    return frame
