"""Shared test helpers: dense-matrix oracles kept independent of the library's
own bit-level algebra so the two routes can check each other."""
from __future__ import annotations

import numpy as np

from tfim_qec.pauli import PauliString

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
LETTER_MATS = {"I": I2, "X": SX, "Y": SY, "Z": SZ}


def pauli_matrix(p: PauliString) -> np.ndarray:
    """Kronecker-product matrix of a Pauli string (site 1 is the left factor)."""
    out = np.array([[1j**p.phase]], dtype=complex)
    for site in range(1, p.n + 1):
        out = np.kron(out, LETTER_MATS[p.letter_at(site)])
    return out


def random_pauli(rng: np.random.Generator, n: int, hermitian: bool = False) -> PauliString:
    phase = int(rng.integers(0, 2)) * 2 if hermitian else int(rng.integers(0, 4))
    return PauliString(
        n,
        int(rng.integers(0, 1 << n)),
        int(rng.integers(0, 1 << n)),
        phase,
    )
