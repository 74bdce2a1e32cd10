"""Clifford gates of the code circuit and their action on Pauli strings.

Two gate kinds exist: the two-site brickwork gate ``(Z_i + X_i X_{i+1})/sqrt(2)``
acting on the bond (i, i+1) (wrapping to (n, 1) when i == n), and the
single-site Hadamard. Both are involutory, so conjugation direction is
unambiguous. The bond gate's action on the 16 two-site letter combinations is
tabulated once at import from the four generator images, which keeps row
conjugation O(1) per gate.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Literal

from .pauli import PauliString, pauli_mul

GateKind = Literal["tfim", "h"]


@dataclass(frozen=True)
class CliffordGate:
    """A gate placement: ``tfim`` acts on sites (site, site+1), ``h`` on site."""

    kind: GateKind
    site: int

    def __repr__(self) -> str:
        return f"{self.kind}({self.site})"


def tfim(site: int) -> CliffordGate:
    return CliffordGate("tfim", site)


def hadamard(site: int) -> CliffordGate:
    return CliffordGate("h", site)


def _build_bond_table() -> dict[tuple[int, int, int, int], tuple[int, int, int, int, int]]:
    """Conjugation table for the bond gate on local sites (1, 2).

    Generator images: X1 -> Z1 X2, Z1 -> X1 X2, X2 -> X2, Z2 -> -Y1 Y2.
    An arbitrary two-site letter pair is X1^a Z1^b X2^c Z2^d times i^(ab+cd);
    its conjugate is the ordered product of the generator images with the same
    prefactor, which pauli_mul reduces to canonical letters plus a phase shift.
    """
    img = {
        "x1": PauliString.from_letters(2, {1: "Z", 2: "X"}),
        "z1": PauliString.from_letters(2, {1: "X", 2: "X"}),
        "x2": PauliString.from_letters(2, {2: "X"}),
        "z2": PauliString.from_letters(2, {1: "Y", 2: "Y"}, sign=-1),
    }
    table = {}
    for a, b, c, d in product((0, 1), repeat=4):
        acc = PauliString(2, phase=(a * b + c * d) % 4)
        for bit, key in ((a, "x1"), (b, "z1"), (c, "x2"), (d, "z2")):
            if bit:
                acc = pauli_mul(acc, img[key])
        table[(a, b, c, d)] = (
            acc.x_mask & 1,
            (acc.z_mask >> 0) & 1,
            (acc.x_mask >> 1) & 1,
            (acc.z_mask >> 1) & 1,
            acc.phase,
        )
    return table


_BOND_TABLE = _build_bond_table()


def gate_sites(gate: CliffordGate, n: int) -> tuple[int, ...]:
    """1-based sites touched by ``gate`` on an n-site chain."""
    if gate.kind == "h":
        if not 1 <= gate.site <= n:
            raise ValueError(f"Hadamard site {gate.site} out of range 1..{n}")
        return (gate.site,)
    if not 1 <= gate.site <= n or n < 2:
        raise ValueError(f"bond gate site {gate.site} out of range for n={n}")
    return (gate.site, gate.site % n + 1)


def conjugate_pauli(p: PauliString, gate: CliffordGate) -> PauliString:
    """Image of ``p`` under conjugation by ``gate`` (exact phase)."""
    if gate.kind == "h":
        (site,) = gate_sites(gate, p.n)
        b = 1 << (site - 1)
        x, z = p.x_mask, p.z_mask
        xb, zb = x & b, z & b
        dphase = 2 if (xb and zb) else 0
        x = (x & ~b) | (b if zb else 0)
        z = (z & ~b) | (b if xb else 0)
        return PauliString(p.n, x, z, (p.phase + dphase) % 4)

    i, j = gate_sites(gate, p.n)
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    x, z = p.x_mask, p.z_mask
    a = 1 if x & bi else 0
    b_ = 1 if z & bi else 0
    c = 1 if x & bj else 0
    d = 1 if z & bj else 0
    if not (a | b_ | c | d):
        return p
    na, nb, nc, nd, dphase = _BOND_TABLE[(a, b_, c, d)]
    x &= ~(bi | bj)
    z &= ~(bi | bj)
    if na:
        x |= bi
    if nb:
        z |= bi
    if nc:
        x |= bj
    if nd:
        z |= bj
    return PauliString(p.n, x, z, (p.phase + dphase) % 4)


def conjugate_pauli_schedule(p: PauliString, gates: Iterable[CliffordGate]) -> PauliString:
    for g in gates:
        p = conjugate_pauli(p, g)
    return p
