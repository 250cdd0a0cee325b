"""Stabilizer codes, algebraic syndromes, lookup decoding, Monte Carlo.

Syndrome extraction is algebraic: bit i is 1 iff the error anticommutes
with generator i.  This matches ideal ancilla-based measurement; a
single perfect syndrome round is assumed throughout (no measurement
errors, no temporal decoding).

The lookup decoder enumerates Pauli errors by increasing weight (within
a weight class: qubit subsets in index order, letters in X < Y < Z
product order) and keeps the first error seen per syndrome, giving a
deterministic minimum-weight coset representative.  Residuals are
classified symplectically, phases ignored: anticommuting with any
generator is "uncorrected", membership in the generator span is
"success", and a commuting non-member is a "logical_error".

Monte Carlo campaigns sample i.i.d. per-qubit errors in fixed-size
shard blocks whose RNG streams derive from (seed, shard index), so
counts are bit-identical regardless of how many workers the shards are
spread across.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .pauli import (
    PauliString,
    gf2_pivots,
    gf2_reduce,
    independent,
    symplectic_vector,
)

LOOKUP_GUARD_M = 24
_SHARD_SHOTS = 65536

SUCCESS = "success"
LOGICAL_ERROR = "logical_error"
UNCORRECTED = "uncorrected"
DETECTED_UNCORRECTABLE = "detected_uncorrectable"


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    generators: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    distance: int

    def __post_init__(self):
        if len(self.generators) != self.n - self.k:
            raise ValueError("need exactly n - k generators")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            raise ValueError("need k logical X and k logical Z operators")

    @property
    def m(self) -> int:
        return len(self.generators)

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "n": self.n,
            "k": self.k,
            "distance": self.distance,
            "generators": [str(g) for g in self.generators],
            "logical_x": [str(p) for p in self.logical_x],
            "logical_z": [str(p) for p in self.logical_z],
        }


@dataclass
class CodeValidation:
    structural: bool
    commuting: bool
    independent: bool
    logicals: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.structural and self.commuting and self.independent and self.logicals


def validate_code(code: StabilizerCode) -> CodeValidation:
    """Check generator validity rules and the logical-operator relations."""
    failures: list[str] = []

    structural = True
    for p in code.generators + code.logical_x + code.logical_z:
        if p.n != code.n or not p.is_hermitian():
            structural = False
            failures.append(f"{p} is not a Hermitian length-{code.n} Pauli")

    commuting = True
    gens = code.generators
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            if not gens[a].commutes(gens[b]):
                commuting = False
                failures.append(f"generators {a} and {b} anticommute")

    indep = independent(list(gens)) if gens else True
    if not indep:
        failures.append("generators are not independent over GF(2)")

    logicals = True
    for label, ops in (("X", code.logical_x), ("Z", code.logical_z)):
        for i, op in enumerate(ops):
            for g_idx, g in enumerate(gens):
                if not op.commutes(g):
                    logicals = False
                    failures.append(
                        f"logical {label}[{i}] anticommutes with generator {g_idx}"
                    )
    for i in range(code.k):
        if not code.logical_x[i].anticommutes(code.logical_z[i]):
            logicals = False
            failures.append(f"logical X[{i}] and Z[{i}] do not anticommute")
        for j in range(code.k):
            if j == i:
                continue
            if not code.logical_x[i].commutes(code.logical_z[j]):
                logicals = False
                failures.append(f"logical X[{i}] and Z[{j}] should commute")
            if not code.logical_x[i].commutes(code.logical_x[j]):
                logicals = False
                failures.append(f"logical X[{i}] and X[{j}] should commute")
            if not code.logical_z[i].commutes(code.logical_z[j]):
                logicals = False
                failures.append(f"logical Z[{i}] and Z[{j}] should commute")

    return CodeValidation(structural, commuting, indep, logicals, failures)


# -- code constructors -----------------------------------------------------


def repetition_code(n_qubits: int) -> StabilizerCode:
    """Bit-flip repetition code: Z_i Z_{i+1} parity checks, distance n."""
    if n_qubits < 3 or n_qubits % 2 == 0:
        raise ValueError(f"repetition code needs odd n >= 3, got {n_qubits}")
    gens = tuple(
        PauliString(n_qubits, 0, 0b11 << i) for i in range(n_qubits - 1)
    )
    logical_z = PauliString.single(n_qubits, 0, "Z")
    logical_x = PauliString(n_qubits, (1 << n_qubits) - 1, 0)
    return StabilizerCode(
        n=n_qubits,
        k=1,
        generators=gens,
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=n_qubits,
    )


def rotated_surface_code(d: int) -> StabilizerCode:
    """Rotated surface code on a d x d data grid, one logical qubit.

    Data qubit (r, c) has index r*d + c.  Bulk faces are checkerboard
    colored, X-type on (r + c) even; weight-2 boundary checks sit on the
    top/bottom edges for X-type and left/right for Z-type, at columns
    and rows that continue the bulk coloring.
    """
    if d < 3 or d % 2 == 0:
        raise ValueError(f"surface code distance must be odd and >= 3, got {d}")
    n = d * d

    def q(r: int, c: int) -> int:
        return r * d + c

    def x_check(qubits) -> PauliString:
        return PauliString(n, sum(1 << i for i in qubits), 0)

    def z_check(qubits) -> PauliString:
        return PauliString(n, 0, sum(1 << i for i in qubits))

    gens: list[PauliString] = []
    for r in range(d - 1):
        for c in range(d - 1):
            corners = (q(r, c), q(r, c + 1), q(r + 1, c), q(r + 1, c + 1))
            gens.append(x_check(corners) if (r + c) % 2 == 0 else z_check(corners))
    for c in range(d - 1):
        if c % 2 == 1:  # top boundary, continues the X coloring of row -1
            gens.append(x_check((q(0, c), q(0, c + 1))))
        else:  # bottom boundary
            gens.append(x_check((q(d - 1, c), q(d - 1, c + 1))))
    for r in range(d - 1):
        if r % 2 == 0:  # left boundary, continues the Z coloring of column -1
            gens.append(z_check((q(r, 0), q(r + 1, 0))))
        else:  # right boundary
            gens.append(z_check((q(r, d - 1), q(r + 1, d - 1))))

    logical_z = PauliString(n, 0, sum(1 << q(0, c) for c in range(d)))
    logical_x = PauliString(n, sum(1 << q(r, 0) for r in range(d)), 0)
    return StabilizerCode(
        n=n,
        k=1,
        generators=tuple(gens),
        logical_x=(logical_x,),
        logical_z=(logical_z,),
        distance=d,
    )


# -- syndromes and decoding --------------------------------------------------


def syndrome(code: StabilizerCode, error: PauliString) -> tuple[int, ...]:
    """Bit i is 1 iff the error anticommutes with generator i."""
    if error.n != code.n:
        raise ValueError(f"error acts on {error.n} qubits, code has {code.n}")
    return tuple(int(error.anticommutes(g)) for g in code.generators)


@dataclass
class LookupDecoder:
    code: StabilizerCode
    table: dict[tuple[int, ...], PauliString]
    max_weight: int


def _errors_by_weight(n: int, max_weight: int):
    """Pauli errors of weight 0..max_weight, deterministic minimum-weight-first
    order: weight, then qubit subset in index order, then X < Y < Z letters."""
    yield PauliString.identity(n)
    for w in range(1, max_weight + 1):
        for support in itertools.combinations(range(n), w):
            for letters in itertools.product("XYZ", repeat=w):
                x = z = 0
                for qubit, letter in zip(support, letters):
                    if letter in ("X", "Y"):
                        x |= 1 << qubit
                    if letter in ("Y", "Z"):
                        z |= 1 << qubit
                yield PauliString(n, x, z)


def build_lookup(code: StabilizerCode, max_weight: int) -> LookupDecoder:
    """Enumerate low-weight errors; first error per syndrome is its correction."""
    if code.m > LOOKUP_GUARD_M:
        raise ValueError(
            f"lookup table needs m <= {LOOKUP_GUARD_M} generators, got {code.m}"
        )
    if max_weight < 0:
        raise ValueError("max_weight must be >= 0")
    table: dict[tuple[int, ...], PauliString] = {}
    for error in _errors_by_weight(code.n, max_weight):
        s = syndrome(code, error)
        if s not in table:
            table[s] = error
    return LookupDecoder(code=code, table=table, max_weight=max_weight)


def decode(dec: LookupDecoder, s: tuple[int, ...]) -> Optional[PauliString]:
    """Correction for a syndrome, or None when detected-uncorrectable."""
    if len(s) != dec.code.m:
        raise ValueError(f"syndrome length {len(s)} != {dec.code.m}")
    return dec.table.get(tuple(s))


def residual_class(
    code: StabilizerCode, error: PauliString, correction: PauliString
) -> str:
    """Classify correction * error: success, logical_error, or uncorrected."""
    if error.n != code.n or correction.n != code.n:
        raise ValueError("operator length does not match the code")
    residual = correction * error
    if any(residual.anticommutes(g) for g in code.generators):
        return UNCORRECTED
    pivots = gf2_pivots(symplectic_vector(g) for g in code.generators)
    if gf2_reduce(pivots, symplectic_vector(residual)) == 0:
        return SUCCESS
    return LOGICAL_ERROR


# -- noise and Monte Carlo ---------------------------------------------------


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p: float

    def __post_init__(self):
        if self.kind not in ("bitflip", "depolarizing"):
            raise ValueError(f"unknown noise kind {self.kind!r}")
        if not 0 <= self.p <= 1:
            raise ValueError("error probability must be in [0, 1]")


@dataclass
class MonteCarloResult:
    shots: int
    seed: int
    counts: dict[str, int]
    p_logical_estimate: float
    wilson_95_interval: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "schema_version": 1,
            "shots": self.shots,
            "seed": self.seed,
            "counts": dict(self.counts),
            "p_logical_estimate": self.p_logical_estimate,
            "wilson_95_interval": list(self.wilson_95_interval),
        }


def wilson_interval(successes: int, trials: int, z: float = 1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
        / denom
    )
    return (max(0.0, center - half), min(1.0, center + half))


def _int_to_row(value: int, width: int) -> np.ndarray:
    return np.array([value >> b & 1 for b in range(width)], dtype=np.uint8)


def _decoder_arrays(dec: LookupDecoder):
    """Vectorized companions: syndrome map, correction table, span basis.

    All 2n-column arrays use the symplectic bit layout (z << 0 | x << n),
    i.e. column b mirrors bit b of symplectic_vector().
    """
    code = dec.code
    n, m = code.n, code.m
    # syndrome s = E . A^T mod 2: error row [z_e | x_e], A row [x_g | z_g]
    a = np.zeros((m, 2 * n), dtype=np.int64)
    for i, g in enumerate(code.generators):
        a[i, :n] = _int_to_row(g.x, n)
        a[i, n:] = _int_to_row(g.z, n)
    powers = 1 << np.arange(m, dtype=np.int64)
    corrections: dict[int, np.ndarray] = {}
    for synd, corr in dec.table.items():
        key = int(np.dot(np.array(synd, dtype=np.int64), powers))
        corrections[key] = _int_to_row(symplectic_vector(corr), 2 * n)
    pivots = gf2_pivots(symplectic_vector(g) for g in code.generators)
    # ascending pivot order makes one elimination pass per row sufficient
    basis = [
        _int_to_row(row, 2 * n) for _, row in sorted(pivots.items())
    ]
    return a, powers, corrections, basis


def _sample_errors(rng, count: int, n: int, noise: NoiseModel) -> np.ndarray:
    """Error rows in [z bits | x bits] layout as uint8."""
    out = np.zeros((count, 2 * n), dtype=np.uint8)
    if noise.p == 0:
        return out
    if noise.kind == "bitflip":
        out[:, n:] = rng.random((count, n)) < noise.p
        return out
    u = rng.random((count, n))
    p = noise.p
    out[:, n:] = u < 2 * p / 3  # X component (letters X and Y)
    out[:, :n] = (u >= p / 3) & (u < p)  # Z component (letters Y and Z)
    return out


def _run_shard(args):
    (dec_arrays, noise, count, seed, shard_index) = args
    a, powers, corrections, basis = dec_arrays
    rng = np.random.default_rng(np.random.SeedSequence([seed, shard_index]))
    n2 = a.shape[1]
    errors = _sample_errors(rng, count, n2 // 2, noise)
    synd = (errors.astype(np.int64) @ a.T) % 2
    keys = synd @ powers
    counts = {SUCCESS: 0, LOGICAL_ERROR: 0, DETECTED_UNCORRECTABLE: 0}
    unique_keys, inverse = np.unique(keys, return_inverse=True)
    corr_rows = np.zeros((len(unique_keys), n2), dtype=np.uint8)
    miss = np.zeros(len(unique_keys), dtype=bool)
    for pos, key in enumerate(unique_keys):
        vec = corrections.get(int(key))
        if vec is None:
            miss[pos] = True
        else:
            corr_rows[pos] = vec
    miss_mask = miss[inverse]
    counts[DETECTED_UNCORRECTABLE] = int(miss_mask.sum())
    residual = errors[~miss_mask] ^ corr_rows[inverse[~miss_mask]]
    for vec in basis:
        pivot_col = int(np.argmax(vec))
        active = residual[:, pivot_col] == 1
        residual[active] ^= vec
    counts[LOGICAL_ERROR] = int(residual.any(axis=1).sum())
    counts[SUCCESS] = int(
        count - counts[DETECTED_UNCORRECTABLE] - counts[LOGICAL_ERROR]
    )
    return counts


def monte_carlo(
    code: StabilizerCode,
    dec: LookupDecoder,
    noise: NoiseModel,
    shots: int,
    seed: int,
    workers: int = 1,
) -> MonteCarloResult:
    """Sample errors, decode, classify; logical failure counts both the
    logical_error class and detected-uncorrectable table misses.

    Shots are processed in fixed-size shards with RNG streams derived
    from (seed, shard), so counts do not depend on the worker count.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    dec_arrays = _decoder_arrays(dec)
    shard_sizes = []
    remaining = shots
    while remaining > 0:
        take = min(_SHARD_SHOTS, remaining)
        shard_sizes.append(take)
        remaining -= take
    jobs = [
        (dec_arrays, noise, size, seed, idx)
        for idx, size in enumerate(shard_sizes)
    ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            shard_counts = list(pool.map(_run_shard, jobs))
    else:
        shard_counts = [_run_shard(job) for job in jobs]
    counts = {SUCCESS: 0, LOGICAL_ERROR: 0, DETECTED_UNCORRECTABLE: 0}
    for sc in shard_counts:
        for key, value in sc.items():
            counts[key] += value
    failures = counts[LOGICAL_ERROR] + counts[DETECTED_UNCORRECTABLE]
    return MonteCarloResult(
        shots=shots,
        seed=seed,
        counts=counts,
        p_logical_estimate=failures / shots,
        wilson_95_interval=wilson_interval(failures, shots),
    )


def repetition_failure_rate(n: int, p: float) -> float:
    """Analytic bit-flip failure probability: majority vote loses when
    more than (n-1)/2 qubits flip."""
    t = (n - 1) // 2
    total = 0.0
    for k in range(t + 1, n + 1):
        total += math.comb(n, k) * p**k * (1 - p) ** (n - k)
    return total
