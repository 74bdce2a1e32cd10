"""Experiment protocols: measurement-based state transfer, check-support
statistics under random Hadamard layers, and erasure-recovery Monte Carlo.

Every stochastic routine derives its randomness from a per-trial substream
hashed out of (master seed, trial key) via ``numpy.random.SeedSequence``, so
trials are order-independent, parallel-safe, and bit-reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import log, prod, sqrt

import numpy as np

from .circuits import (
    CodeInstance,
    Variant,
    build_code,
    build_encoder,
    conjugate_by_encoder,
    encoded_frame,
    round_bonds,
    sample_hadamard_layers,
)
from .decoders import (
    ErasurePattern,
    bernoulli_erasure,
    erasure_recoverable,
    fixed_count_erasure,
)
from .dense import (
    DenseState,
    apply_pauli_dense,
    apply_schedule_dense,
    born_measure_dense,
    overlap_fidelity,
)
from .gates import hadamard, tfim
from .majorana import MajoranaMode, encoder_permutation, mode_to_pauli
from .pauli import PauliString, pauli_mul
from .tableau import StabilizerFrame

Z95 = 1.959963984540054


def trial_rng(master_seed: int, *key: int) -> tuple[np.random.Generator, int]:
    """Independent substream for one trial plus a 64-bit fingerprint of it."""
    ss = np.random.SeedSequence([int(master_seed), *(int(k) for k in key)])
    fingerprint = int(ss.generate_state(1, dtype=np.uint64)[0])
    return np.random.default_rng(ss), fingerprint


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    denom = 1.0 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


# ---------------------------------------------------------------------------
# State transfer
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TeleportPlan:
    """Recipe for moving the encoded qubit from ``source`` onto ``target``.

    ``transfer_logical`` is a logical-X representative acting as X on the
    target and Z or identity elsewhere, built by multiplying the evolved
    logical by the check chain that follows the encoder cycle from the source.
    Measuring every other site and applying X/Z on the target conditioned on
    the recorded parities completes the transfer.
    """

    n: int
    source: int
    target: int
    code: CodeInstance
    chain: tuple[int, ...]
    transfer_logical: PauliString
    x_parity_sites: frozenset[int]
    z_parity_sites: frozenset[int]


@dataclass(frozen=True)
class TeleportResult:
    fidelity: float | None
    outcomes: dict[int, int]
    applied_x: bool
    applied_z: bool
    logical_match: bool | None


def plan_teleport(
    n: int, source: int = 1, target: int | None = None, code: CodeInstance | None = None
) -> TeleportPlan:
    if target is None:
        target = n
    if source == target:
        raise ValueError("source and target must differ")
    if code is None:
        code = build_code(n, "open", 1, (source,))
    if code.variant != "open" or code.rounds != 1 or any(code.hadamard_layers):
        raise ValueError("state transfer is planned on one-round open schedules")
    if source not in code.logical_sites:
        raise ValueError(f"site {source} is not a logical site of the code")
    if not 1 <= target <= n:
        raise ValueError(f"target {target} out of range 1..{n}")

    sigma = encoder_permutation(n, "open")
    # X_source equals gamma_source times initial stabilizer Z's, so the mode
    # image is a valid evolved-logical representative with a clean endpoint.
    carrier = conjugate_by_encoder(
        mode_to_pauli(MajoranaMode("gamma", source), n), code
    )
    chain: list[int] = []
    endpoint = sigma(source)
    while endpoint != target:
        carrier = pauli_mul(carrier, code.check_for_site(endpoint))
        chain.append(endpoint)
        endpoint = sigma(endpoint)

    if carrier.letter_at(target) != "X" or not carrier.is_hermitian():
        raise RuntimeError("transfer construction left a bad endpoint letter")
    for s in carrier.support():
        if s != target and carrier.letter_at(s) != "Z":
            raise RuntimeError("transfer logical is not Z/identity off the target")
    z_sites = frozenset(s for s in carrier.support() if s != target)
    x_sites = frozenset(range(1, n + 1)) - {target}
    return TeleportPlan(n, source, target, code, tuple(chain), carrier, x_sites, z_sites)


def run_teleport(
    plan: TeleportPlan,
    alpha: complex,
    beta: complex,
    rng: np.random.Generator,
    backend: str = "oracle",
) -> TeleportResult:
    """Encode, measure all sites but the target, correct by parities.

    The oracle backend returns the fidelity against the input qubit (exactly 1
    on every outcome branch); the tableau backend instead verifies that the
    logical pair lands on (X_target, Z_target) as signed group elements.
    """
    n, target = plan.n, plan.target
    measured = sorted(plan.x_parity_sites)
    if backend == "oracle":
        state = DenseState.with_amplitudes_on(n, plan.source, alpha, beta)
        apply_schedule_dense(state, plan.code.schedule)
        outcomes = {}
        for site in measured:
            o, _ = born_measure_dense(state, site, rng)
            outcomes[site] = o
        applied_x, applied_z = _parity_corrections(plan, outcomes)
        if applied_z:
            apply_pauli_dense(state, PauliString.single(n, target, "Z"))
        if applied_x:
            apply_pauli_dense(state, PauliString.single(n, target, "X"))
        norm = sqrt(abs(alpha) ** 2 + abs(beta) ** 2)
        expected = np.zeros(2**n, dtype=complex)
        base = sum(1 << (n - s) for s, o in outcomes.items() if o == -1)
        expected[base] = alpha / norm
        expected[base | (1 << (n - target))] = beta / norm
        fid = overlap_fidelity(state, DenseState(n, expected))
        return TeleportResult(fid, outcomes, applied_x, applied_z, None)

    if backend == "tableau":
        frame = encoded_frame(plan.code)
        outcomes = {}
        for site in measured:
            res = frame.measure(PauliString.single(n, site, "Z"), rng)
            if res.collapsed_pair is not None:
                raise RuntimeError("state transfer unexpectedly read out the logical")
            outcomes[site] = res.outcome
        applied_x, applied_z = _parity_corrections(plan, outcomes)
        if applied_z:
            frame.apply_pauli(PauliString.single(n, target, "Z"))
        if applied_x:
            frame.apply_pauli(PauliString.single(n, target, "X"))
        src_index = plan.code.logical_sites.index(plan.source)
        lx, lz = frame.logical_x[src_index], frame.logical_z[src_index]
        match = frame.contains_stabilizer(
            pauli_mul(lx, PauliString.single(n, target, "X"))
        ) and frame.contains_stabilizer(
            pauli_mul(lz, PauliString.single(n, target, "Z"))
        )
        return TeleportResult(None, outcomes, applied_x, applied_z, match)

    raise ValueError(f"unknown backend {backend!r}")


def _parity_corrections(plan: TeleportPlan, outcomes: dict[int, int]) -> tuple[bool, bool]:
    x_parity = prod(outcomes[s] for s in plan.x_parity_sites)
    z_parity = plan.transfer_logical.sign * prod(
        outcomes[s] for s in plan.z_parity_sites
    )
    return x_parity < 0, z_parity < 0


# ---------------------------------------------------------------------------
# Check-support statistics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SupportStats:
    n: int
    rounds: int
    p_h: float
    samples: int
    variant: Variant
    even_site: int
    odd_site: int
    mean_counts: dict[tuple[str, str], float]
    count_variance: dict[tuple[str, str], float]
    overlap_mean: float


def default_logical_sites(n: int) -> tuple[int, ...]:
    """Every odd site; the n/2-logical layout used by the erasure studies."""
    return tuple(range(1, n, 2))


def check_support_stats(
    n: int,
    rounds: int,
    p_h: float,
    samples: int,
    rng: np.random.Generator,
    variant: Variant = "periodic",
    logical_sites: tuple[int, ...] | None = None,
) -> SupportStats:
    """Average, over sampled Hadamard layers, of how many check operators act
    with each letter on a representative even and odd site, plus how many
    overlap the central site at all."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    logical = default_logical_sites(n) if logical_sites is None else logical_sites
    half = n // 2
    even_site = half if half % 2 == 0 else half + 1
    odd_site = even_site - 1
    keys = [(parity, letter) for parity in ("even", "odd") for letter in "XYZ"]
    sums = {key: 0.0 for key in keys}
    sq_sums = {key: 0.0 for key in keys}
    overlap_sum = 0.0
    for _ in range(samples):
        layers = sample_hadamard_layers(n, rounds, p_h, rng)
        code = build_code(n, variant, rounds, logical, layers)
        counts = {key: 0 for key in keys}
        overlap = 0
        for chk in code.checks:
            for parity, site in (("even", even_site), ("odd", odd_site)):
                letter = chk.letter_at(site)
                if letter != "I":
                    counts[(parity, letter)] += 1
            if chk.letter_at(even_site) != "I":
                overlap += 1
        for key in keys:
            sums[key] += counts[key]
            sq_sums[key] += counts[key] ** 2
        overlap_sum += overlap
    means = {key: sums[key] / samples for key in keys}
    variances = {
        key: max(sq_sums[key] / samples - means[key] ** 2, 0.0) for key in keys
    }
    return SupportStats(
        n, rounds, p_h, samples, variant, even_site, odd_site, means, variances,
        overlap_sum / samples,
    )


# ---------------------------------------------------------------------------
# Erasure-recovery Monte Carlo
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TrialRecord:
    """One erasure trial; bit-reproducible from (master seed, key, params)."""

    seed: int
    n: int
    depth: int
    p_h: float
    erased_sites: tuple[int, ...]
    success: bool


def logical_sites_for_fraction(n: int, f: float) -> tuple[int, ...]:
    """``f * n`` logical sites spread evenly across the chain (odd sites when
    f = 1/2)."""
    m_float = f * n
    m = round(m_float)
    if abs(m_float - m) > 1e-9 or m < 1 or m > n:
        raise ValueError(f"logical fraction {f} does not give a whole site count on n={n}")
    return tuple(1 + (i * n) // m for i in range(m))


def _sample_erasure(
    n: int, model: str, param: float, rng: np.random.Generator
) -> ErasurePattern:
    if model == "bernoulli":
        return bernoulli_erasure(n, float(param), rng)
    if model == "fixed":
        return fixed_count_erasure(n, int(param), rng)
    raise ValueError(f"unknown erasure model {model!r}")


def erasure_trial(
    n: int,
    rounds: int,
    p_h: float,
    model: str,
    param: float,
    f: float,
    master_seed: int,
    trial_key: int | tuple[int, ...],
    variant: Variant = "periodic",
) -> TrialRecord:
    """Build a code with freshly sampled Hadamard layers, sample an erasure,
    and test whether every logical pair survives it."""
    if n % 2:
        raise ValueError("erasure trials need even n")
    key = (trial_key,) if isinstance(trial_key, int) else tuple(trial_key)
    rng, fingerprint = trial_rng(master_seed, *key)
    pattern = _sample_erasure(n, model, param, rng)
    layers = sample_hadamard_layers(n, rounds, p_h, rng)
    logical = logical_sites_for_fraction(n, f)
    frame = StabilizerFrame.initial(n, logical)
    frame.apply_schedule(build_encoder(n, variant, rounds, layers))
    success = erasure_recoverable(frame, pattern).success
    return TrialRecord(
        fingerprint, n, 2 * rounds, p_h, tuple(sorted(pattern.erased_sites)), success
    )


@dataclass(frozen=True)
class RecoveryPoint:
    depth: int
    p_e: float
    trials: int
    successes: int
    mean: float
    ci_lo: float
    ci_hi: float


@dataclass(frozen=True)
class RecoveryCurve:
    n: int
    f: float
    p_h: float
    model: str
    trials: int
    master_seed: int
    hamming_bound_pe: float
    points: tuple[RecoveryPoint, ...]


def recovery_curve(
    n: int,
    rounds_list: tuple[int, ...],
    pe_grid: tuple[float, ...],
    f: float = 0.5,
    p_h: float = 0.5,
    trials: int = 100,
    master_seed: int = 0,
    model: str = "bernoulli",
    variant: Variant = "periodic",
) -> RecoveryCurve:
    """Mean recovery probability with Wilson CIs over a (depth, p_e) grid.

    The erasure capacity marker p_e = (1 - f)/2 is recorded alongside.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    points = []
    for di, rounds in enumerate(rounds_list):
        for pi, p_e in enumerate(pe_grid):
            successes = 0
            for t in range(trials):
                rec = erasure_trial(
                    n, rounds, p_h, model, p_e, f, master_seed, (di, pi, t), variant
                )
                successes += rec.success
            lo, hi = wilson_interval(successes, trials)
            points.append(
                RecoveryPoint(
                    2 * rounds, p_e, trials, successes, successes / trials, lo, hi
                )
            )
    return RecoveryCurve(
        n, f, p_h, model, trials, master_seed, (1.0 - f) / 2.0, tuple(points)
    )


@dataclass(frozen=True)
class DepthRequirement:
    n: int
    required_depth: int | None
    success_by_depth: tuple[float, ...]


@dataclass(frozen=True)
class ScalingFit:
    """Least-squares fit of required depth against log n.

    ``requirements`` holds the per-size detail; censored sizes (target never
    reached within max_depth) are excluded from the fit.
    """

    p_e: float
    f: float
    p_h: float
    target: float
    trials: int
    master_seed: int
    max_depth: int
    requirements: tuple[DepthRequirement, ...]
    slope: float
    intercept: float
    r_squared: float


def fit_loglinear(ns: list[int], ts: list[float]) -> tuple[float, float, float]:
    x = np.log(np.asarray(ns, dtype=float))
    y = np.asarray(ts, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(((y - pred) ** 2).sum())
    ss_tot = float(((y - y.mean()) ** 2).sum())
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return float(slope), float(intercept), r2


def depth_to_target(
    n_list: tuple[int, ...],
    p_e: float,
    f: float = 0.5,
    p_h: float = 0.5,
    target: float = 0.9,
    trials: int = 100,
    master_seed: int = 0,
    max_rounds: int = 12,
    model: str = "bernoulli",
    variant: Variant = "periodic",
) -> ScalingFit:
    """Smallest even depth reaching the target mean success, per chain length.

    Each trial fixes its erasure once and grows the circuit round by round, so
    every depth is evaluated on the same ``trials`` erasure samples.
    """
    if not 0.0 < target < 1.0:
        raise ValueError(f"target must lie in (0, 1), got {target}")
    requirements = []
    for n in n_list:
        logical = logical_sites_for_fraction(n, f)
        odd, even = round_bonds(n, variant)
        round_gates = [tfim(i) for i in odd] + [tfim(i) for i in even]
        successes = np.zeros(max_rounds, dtype=int)
        for t in range(trials):
            rng, _ = trial_rng(master_seed, n, t)
            pattern = _sample_erasure(n, model, p_e, rng)
            frame = StabilizerFrame.initial(n, logical)
            for r in range(1, max_rounds + 1):
                if r > 1:
                    (layer,) = sample_hadamard_layers(n, 2, p_h, rng)
                    for s in sorted(layer):
                        frame.apply_gate(hadamard(s))
                for g in round_gates:
                    frame.apply_gate(g)
                if erasure_recoverable(frame, pattern).success:
                    successes[r - 1] += 1
        rates = successes / trials
        required = next(
            (2 * (r + 1) for r in range(max_rounds) if rates[r] >= target), None
        )
        requirements.append(DepthRequirement(n, required, tuple(map(float, rates))))
    fitted = [(req.n, req.required_depth) for req in requirements if req.required_depth]
    if len({n for n, _ in fitted}) < 4:
        raise RuntimeError(
            "log-fit needs at least 4 uncensored chain lengths; "
            f"got {len(fitted)} (raise max_rounds or lower the target)"
        )
    slope, intercept, r2 = fit_loglinear(
        [n for n, _ in fitted], [t for _, t in fitted]
    )
    return ScalingFit(
        p_e, f, p_h, target, trials, master_seed, 2 * max_rounds,
        tuple(requirements), slope, intercept, r2,
    )


def longest_erased_run(
    n: int, q: float, samples: int, rng: np.random.Generator
) -> np.ndarray:
    """Longest cyclic run of erased sites in each of ``samples`` draws."""
    lengths = np.empty(samples, dtype=int)
    for i in range(samples):
        erased = rng.random(n) < q
        clear = np.flatnonzero(~erased)
        if clear.size == 0:
            lengths[i] = n
        else:
            gaps = np.diff(np.append(clear, clear[0] + n)) - 1
            lengths[i] = int(gaps.max())
    return lengths


def heuristic_run_length(n: int, q: float) -> float:
    """log n / log(1/q), the expected scale of the longest erased run."""
    return log(n) / log(1.0 / q)
