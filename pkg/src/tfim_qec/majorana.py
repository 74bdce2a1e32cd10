"""Majorana-mode view of the encoder dynamics.

Each site i carries two modes defined through Jordan-Wigner strings:
``gamma_i = Z_1...Z_{i-1} X_i`` and ``xi_i = Z_1...Z_{i-1} Y_i``. Bond gates
act as matchgates on these modes (gamma_i <-> gamma_{i+1}, xi_i -> -xi_i,
xi_{i+1} fixed), so an open-boundary round permutes the gamma modes by a
single cycle. The wraparound bond of the periodic variant cuts across every
Jordan-Wigner string, which mixes the global parity string into single-mode
images: open schedules keep every mode a mode, periodic ones leak for
seam-crossing modes. ``evolve_mode`` evolves honestly through the Pauli engine
and raises :class:`ModeLeakageError` when the image is no longer a single
mode; permutation-level bookkeeping stays available for both variants.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .circuits import CodeInstance, Variant, conjugate_by_encoder, round_bonds
from .pauli import PauliString, pauli_mul

ModeKind = Literal["gamma", "xi"]


class UnsupportedScheduleError(ValueError):
    """The schedule is outside the domain where mode tracking is defined."""


class ModeLeakageError(ValueError):
    """A mode's image under the schedule is not ± a single Majorana mode."""


@dataclass(frozen=True)
class MajoranaMode:
    kind: ModeKind
    site: int
    sign: int = 1

    def __post_init__(self):
        if self.kind not in ("gamma", "xi"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.sign not in (1, -1):
            raise ValueError("sign must be ±1")
        if self.site < 1:
            raise ValueError("site must be >= 1")

    def negate(self) -> "MajoranaMode":
        return MajoranaMode(self.kind, self.site, -self.sign)


@dataclass(frozen=True)
class SitePermutation:
    """A bijection on sites 1..n; ``mapping[i-1]`` is the image of site i."""

    n: int
    mapping: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.mapping) != list(range(1, self.n + 1)):
            raise ValueError("mapping is not a bijection on 1..n")

    def __call__(self, i: int) -> int:
        return self.mapping[i - 1]

    def inverse(self) -> "SitePermutation":
        inv = [0] * self.n
        for i, j in enumerate(self.mapping, start=1):
            inv[j - 1] = i
        return SitePermutation(self.n, tuple(inv))

    def power(self, r: int) -> "SitePermutation":
        if r < 0:
            return self.inverse().power(-r)
        out = tuple(range(1, self.n + 1))
        for _ in range(r):
            out = tuple(self.mapping[i - 1] for i in out)
        return SitePermutation(self.n, out)

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Cycle decomposition; each cycle starts at its smallest unseen site."""
        seen = set()
        out = []
        for start in range(1, self.n + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self(start)
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self(j)
            out.append(tuple(cyc))
        return tuple(out)


def _cycle_to_mapping(n: int, cycles: list[list[int]]) -> tuple[int, ...]:
    mapping = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            mapping[a - 1] = b
    return tuple(mapping)


def encoder_permutation(n: int, variant: Variant) -> SitePermutation:
    """Gamma-mode permutation of one round.

    For even n this is derived by walking the round's bonds with the matchgate
    swap rule; odd n (where no brickwork schedule is built) uses the closed
    cycle patterns: odds ascending then evens descending, fused into one cycle
    for open boundaries and split into two for periodic ones.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if variant not in ("open", "periodic"):
        raise ValueError(f"unknown variant {variant!r}")
    if n % 2 == 0 and n >= 4:
        odd, even = round_bonds(n, variant)
        mapping = list(range(1, n + 1))
        for layer in (odd, even):
            for i in layer:
                j = i % n + 1
                for idx in range(n):
                    if mapping[idx] == i:
                        mapping[idx] = j
                    elif mapping[idx] == j:
                        mapping[idx] = i
        return SitePermutation(n, tuple(mapping))
    odds = list(range(1, n + 1, 2))
    evens = list(range(2, n + 1, 2))
    if n % 2 == 0:
        descending = list(reversed(evens))  # n, n-2, ..., 2
        if variant == "open":
            return SitePermutation(n, _cycle_to_mapping(n, [odds + descending]))
        return SitePermutation(n, _cycle_to_mapping(n, [odds, descending]))
    descending = list(reversed(evens))  # n-1, n-3, ..., 2
    if variant == "open":
        return SitePermutation(n, _cycle_to_mapping(n, [odds + descending]))
    return SitePermutation(n, _cycle_to_mapping(n, [odds, descending]))


def mode_to_pauli(m: MajoranaMode, n: int) -> PauliString:
    """Jordan-Wigner string of the mode, sign included."""
    if m.site > n:
        raise ValueError(f"mode site {m.site} exceeds n={n}")
    head = 1 << (m.site - 1)
    prefix = head - 1
    phase = 0 if m.sign == 1 else 2
    if m.kind == "gamma":
        return PauliString(n, head, prefix, phase)
    return PauliString(n, head, prefix | head, phase)


def pauli_to_mode(p: PauliString) -> MajoranaMode | None:
    """Classify a Pauli string as ± a single mode, or None."""
    if p.phase not in (0, 2):
        return None
    if p.x_mask == 0 or p.x_mask & (p.x_mask - 1):
        return None  # need exactly one X-ish head
    head = p.x_mask
    site = head.bit_length()
    prefix = head - 1
    sign = 1 if p.phase == 0 else -1
    if p.z_mask == prefix:
        return MajoranaMode("gamma", site, sign)
    if p.z_mask == prefix | head:
        return MajoranaMode("xi", site, sign)
    return None


_MODE_MAP_CACHE: dict[tuple[int, Variant, int], dict[tuple[ModeKind, int], MajoranaMode | None]] = {}


def _mode_map(code: CodeInstance) -> dict[tuple[ModeKind, int], MajoranaMode | None]:
    if any(code.hadamard_layers):
        raise UnsupportedScheduleError(
            "mode tracking is defined only for pure bond-gate schedules"
        )
    key = (code.n, code.variant, code.rounds)
    cached = _MODE_MAP_CACHE.get(key)
    if cached is None:
        cached = {}
        for kind in ("gamma", "xi"):
            for site in range(1, code.n + 1):
                image = conjugate_by_encoder(
                    mode_to_pauli(MajoranaMode(kind, site), code.n), code
                )
                cached[(kind, site)] = pauli_to_mode(image)
        _MODE_MAP_CACHE[key] = cached
    return cached


def evolve_mode(m: MajoranaMode, code: CodeInstance) -> MajoranaMode:
    """Image of ``m`` under the code's schedule, derived gate-by-gate.

    Raises :class:`ModeLeakageError` if the image is not ± a single mode
    (possible only for periodic schedules, where the wraparound bond drags the
    parity string into seam-crossing modes).
    """
    evolved = _mode_map(code)[(m.kind, m.site)]
    if evolved is None:
        raise ModeLeakageError(
            f"{m.kind}_{m.site} does not stay a single mode under the "
            f"{code.variant} schedule (n={code.n}, rounds={code.rounds})"
        )
    return evolved if m.sign == 1 else evolved.negate()


def check_as_mode_pair(k: int, code: CodeInstance) -> PauliString:
    """The evolved Z_k reassembled from its mode pair: -i (U gamma_k U)(U xi_k U).

    Matches ``conjugate_by_encoder(Z_k)`` exactly, including the sign, whenever
    both modes evolve cleanly.
    """
    if not 1 <= k <= code.n:
        raise ValueError(f"site {k} out of range 1..{code.n}")
    g = evolve_mode(MajoranaMode("gamma", k), code)
    x = evolve_mode(MajoranaMode("xi", k), code)
    prod = pauli_mul(mode_to_pauli(g, code.n), mode_to_pauli(x, code.n))
    return PauliString(code.n, prod.x_mask, prod.z_mask, (prod.phase + 3) % 4)
