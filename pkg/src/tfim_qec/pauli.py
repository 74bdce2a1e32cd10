"""Signed N-qubit Pauli strings with bit-packed X/Z masks and exact mod-4 phase.

A ``PauliString`` represents ``i^phase * P_1 ⊗ ... ⊗ P_n`` where each single-site
letter is decoded from its (x, z) bit pair: (0,0)=I, (1,0)=X, (1,1)=Y, (0,1)=Z.
Masks are plain Python ints (bit j holds site j+1), so strings of a few hundred
qubits cost a couple of machine words. Site indices are 1-based at every public
boundary and 0-based internally.
"""
from __future__ import annotations

import re
from typing import Iterable, Mapping

_PHASE_LABEL = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}

_WORD_TOKEN = re.compile(r"([XYZ])(\d+)$")


class PauliString:
    """One signed Pauli operator on ``n`` qubits.

    The phase exponent is stored mod 4; Hermitian operators carry phase 0 or 2
    (i.e. sign +1 or -1). Instances are treated as immutable values: all
    algebra returns new objects, so they are safe to share across threads.
    """

    __slots__ = ("n", "x_mask", "z_mask", "phase")

    def __init__(self, n: int, x_mask: int = 0, z_mask: int = 0, phase: int = 0):
        if n < 1:
            raise ValueError(f"need at least one site, got n={n}")
        mask = (1 << n) - 1
        if x_mask & ~mask or z_mask & ~mask:
            raise ValueError("mask has bits outside the first n sites")
        self.n = n
        self.x_mask = x_mask
        self.z_mask = z_mask
        self.phase = phase & 3

    # -- constructors ------------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, site: int, letter: str) -> "PauliString":
        """One letter at ``site`` (1-based), identity elsewhere."""
        if not 1 <= site <= n:
            raise ValueError(f"site {site} out of range 1..{n}")
        x, z = _LETTER_BITS[letter]
        b = 1 << (site - 1)
        return cls(n, x * b, z * b)

    @classmethod
    def from_letters(
        cls, n: int, letters: Mapping[int, str], sign: int = 1
    ) -> "PauliString":
        """Build from a {site: letter} map with an overall sign of +1 or -1."""
        x_mask = z_mask = 0
        for site, letter in letters.items():
            if not 1 <= site <= n:
                raise ValueError(f"site {site} out of range 1..{n}")
            x, z = _LETTER_BITS[letter]
            b = 1 << (site - 1)
            if (x_mask | z_mask) & b and letter != "I":
                raise ValueError(f"site {site} assigned twice")
            x_mask |= x * b
            z_mask |= z * b
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        return cls(n, x_mask, z_mask, 0 if sign == 1 else 2)

    @classmethod
    def from_word(cls, word: str, n: int) -> "PauliString":
        """Parse a Pauli word like ``"-Y8 Z9 Y10"`` or ``"I"``.

        Format: optional leading sign, then whitespace-separated letter+site
        tokens with 1-based sites. A bare ``I`` denotes the identity.
        """
        text = word.strip()
        sign = 1
        if text.startswith(("+", "-")):
            if text[0] == "-":
                sign = -1
            text = text[1:].lstrip()
        if text in ("I", "i", ""):
            if text == "":
                raise ValueError(f"cannot parse Pauli word {word!r}")
            return cls(n, phase=0 if sign == 1 else 2)
        letters: dict[int, str] = {}
        for token in text.split():
            m = _WORD_TOKEN.match(token)
            if not m:
                raise ValueError(f"bad Pauli token {token!r} in {word!r}")
            site = int(m.group(2))
            if site in letters:
                raise ValueError(f"site {site} appears twice in {word!r}")
            letters[site] = m.group(1)
        return cls.from_letters(n, letters, sign)

    # -- inspection --------------------------------------------------------

    def letter_at(self, site: int) -> str:
        if not 1 <= site <= self.n:
            raise ValueError(f"site {site} out of range 1..{self.n}")
        b = site - 1
        return _BITS_LETTER[((self.x_mask >> b) & 1, (self.z_mask >> b) & 1)]

    def support(self) -> tuple[int, ...]:
        m = self.x_mask | self.z_mask
        return tuple(i + 1 for i in range(self.n) if (m >> i) & 1)

    def weight(self) -> int:
        return (self.x_mask | self.z_mask).bit_count()

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def is_hermitian(self) -> bool:
        return self.phase in (0, 2)

    @property
    def sign(self) -> int:
        """The ±1 sign of a Hermitian string; raises if the phase is ±i."""
        if self.phase == 0:
            return 1
        if self.phase == 2:
            return -1
        raise ValueError(f"phase is {_PHASE_LABEL[self.phase]}, not a sign")

    def to_word(self) -> str:
        prefix = {0: "", 1: "+i ", 2: "-", 3: "-i "}[self.phase]
        if self.is_identity():
            return prefix + "I"
        body = " ".join(f"{self.letter_at(s)}{s}" for s in self.support())
        return prefix + body

    # -- algebra -----------------------------------------------------------

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def commutes_with(self, other: "PauliString") -> bool:
        return commutes(self, other)

    def adjoint(self) -> "PauliString":
        """Hermitian conjugate (letters unchanged, phase i -> -i)."""
        return PauliString(self.n, self.x_mask, self.z_mask, (-self.phase) % 4)

    def negate(self) -> "PauliString":
        return PauliString(self.n, self.x_mask, self.z_mask, (self.phase + 2) % 4)

    def equal_up_to_sign(self, other: "PauliString") -> bool:
        return (
            self.n == other.n
            and self.x_mask == other.x_mask
            and self.z_mask == other.z_mask
        )

    def restricted_bits(self, sites: Iterable[int]) -> tuple[int, int]:
        """(x, z) bit vectors of this string restricted to ``sites``, packed in
        the iteration order of ``sites``."""
        xr = zr = 0
        for pos, site in enumerate(sites):
            b = site - 1
            xr |= ((self.x_mask >> b) & 1) << pos
            zr |= ((self.z_mask >> b) & 1) << pos
        return xr, zr

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.n == other.n
            and self.x_mask == other.x_mask
            and self.z_mask == other.z_mask
            and self.phase == other.phase
        )

    def __hash__(self) -> int:
        return hash((self.n, self.x_mask, self.z_mask, self.phase))

    def __repr__(self) -> str:
        return f"PauliString({self.to_word()!r}, n={self.n})"


def pauli_mul(a: PauliString, b: PauliString) -> PauliString:
    """Product ``a @ b`` with the exact mod-4 phase.

    The phase update per site follows the Levi-Civita rule (XY=iZ and cyclic,
    reversed order picks up -i); distinct non-commuting letters on k sites
    contribute i^{±k} in total.
    """
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    ax, az, bx, bz = a.x_mask, a.z_mask, b.x_mask, b.z_mask
    mask = (1 << a.n) - 1
    nax, naz = ~ax & mask, ~az & mask
    nbx, nbz = ~bx & mask, ~bz & mask
    # cyclic pairs (X,Y) (Y,Z) (Z,X) give +i, the reversed pairs give -i
    cyc = (ax & naz & bx & bz) | (ax & az & nbx & bz) | (nax & az & bx & nbz)
    acyc = (ax & az & bx & nbz) | (nax & az & bx & bz) | (ax & naz & nbx & bz)
    phase = (a.phase + b.phase + cyc.bit_count() - acyc.bit_count()) % 4
    return PauliString(a.n, ax ^ bx, az ^ bz, phase)


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product of the masks is 0 mod 2."""
    if a.n != b.n:
        raise ValueError(f"length mismatch: {a.n} != {b.n}")
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


def parse_word(word: str, n: int) -> PauliString:
    return PauliString.from_word(word, n)


def format_word(p: PauliString) -> str:
    return p.to_word()
