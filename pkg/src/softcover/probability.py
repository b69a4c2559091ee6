"""Finite-alphabet distributions, channels, memoryless extensions, total variation.

Sequence spaces are addressed by integer indices (base-``k`` encodings, first
symbol most significant); they are never materialized as symbol lists, so a
full-space pmf is just a vector of length ``k**n``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetMismatch,
    LengthMismatch,
    NegativeWeight,
    ZeroMass,
)

# "sums to 1" tolerance on ingestion; deviations below this are renormalized
# silently (config files carry short decimal literals).
INGEST_TOL = 1e-9


@dataclass(frozen=True)
class Alphabet:
    """A finite symbol set; labels are display-only."""

    size: int
    labels: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.size < 1:
            raise ValueError(f"alphabet size must be >= 1, got {self.size}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.size:
                raise ValueError(
                    f"got {len(labels)} labels for alphabet of size {self.size}"
                )
            object.__setattr__(self, "labels", labels)


def _same_size(a: Alphabet, b: Alphabet) -> bool:
    return a.size == b.size


@dataclass(frozen=True, eq=False)
class FiniteDistribution:
    """Probability vector over a finite alphabet.

    Entries must be nonnegative and sum to 1 within ``INGEST_TOL``; the stored
    vector is renormalized exactly and frozen.
    """

    alphabet: Alphabet
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=float)
        if probs.ndim != 1 or probs.shape[0] != self.alphabet.size:
            raise AlphabetMismatch(
                f"need {self.alphabet.size} probabilities, got shape {probs.shape}"
            )
        if np.any(probs < 0):
            raise NegativeWeight("probabilities must be nonnegative")
        total = float(probs.sum())
        if total <= 0.0:
            raise ZeroMass("probabilities sum to zero")
        if abs(total - 1.0) > INGEST_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        probs = probs / total
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return self.alphabet.size

    def __getitem__(self, i: int) -> float:
        return float(self.probs[i])


def make_distribution(weights, labels: tuple[str, ...] | None = None) -> FiniteDistribution:
    """Normalize nonnegative weights into a distribution.

    Raises NegativeWeight if any weight is negative and ZeroMass if all
    weights vanish.
    """
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1:
        raise ValueError("weights must be a 1-D vector")
    if np.any(w < 0):
        raise NegativeWeight(f"negative weight in {w!r}")
    total = float(w.sum())
    if total == 0.0:
        raise ZeroMass("all weights are zero")
    return FiniteDistribution(Alphabet(w.size, labels), w / total)


@dataclass(frozen=True, eq=False)
class Channel:
    """Row-stochastic conditional pmf matrix: ``rows[x][y] = P(y | x)``."""

    input: Alphabet
    output: Alphabet
    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=float)
        if rows.shape != (self.input.size, self.output.size):
            raise AlphabetMismatch(
                f"channel matrix shape {rows.shape} does not match "
                f"({self.input.size}, {self.output.size})"
            )
        if np.any(rows < 0):
            raise NegativeWeight("channel entries must be nonnegative")
        sums = rows.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > INGEST_TOL):
            bad = int(np.argmax(np.abs(sums - 1.0)))
            raise ValueError(f"channel row {bad} sums to {sums[bad]!r}, not 1")
        rows = rows / sums[:, None]
        rows.flags.writeable = False
        object.__setattr__(self, "rows", rows)

    def row_distribution(self, x: int) -> FiniteDistribution:
        return FiniteDistribution(self.output, self.rows[x])


def make_channel(rows) -> Channel:
    """Normalize nonnegative row weights into a channel."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2:
        raise ValueError("channel rows must form a matrix")
    if np.any(rows < 0):
        raise NegativeWeight("channel entries must be nonnegative")
    sums = rows.sum(axis=1)
    if np.any(sums == 0):
        raise ZeroMass(f"channel row {int(np.argmin(sums))} has zero mass")
    return Channel(Alphabet(rows.shape[0]), Alphabet(rows.shape[1]), rows / sums[:, None])


@dataclass(frozen=True)
class SequenceIndex:
    """Length-``n`` sequence over an alphabet, encoded base-``k`` (big-endian)."""

    n: int
    alphabet: Alphabet
    value: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise ValueError("blocklength must be nonnegative")
        if not (0 <= self.value < self.alphabet.size**self.n):
            raise ValueError(
                f"sequence index {self.value} out of range for "
                f"{self.alphabet.size}^{self.n}"
            )

    def symbols(self) -> tuple[int, ...]:
        k = self.alphabet.size
        out = []
        v = self.value
        for _ in range(self.n):
            v, s = divmod(v, k)
            out.append(s)
        return tuple(reversed(out))

    @classmethod
    def from_symbols(cls, symbols, alphabet: Alphabet) -> "SequenceIndex":
        k = alphabet.size
        value = 0
        for s in symbols:
            s = int(s)
            if not (0 <= s < k):
                raise ValueError(f"symbol {s} outside alphabet of size {k}")
            value = value * k + s
        return cls(len(tuple(symbols)), alphabet, value)


def output_distribution(qx: FiniteDistribution, ch: Channel) -> FiniteDistribution:
    """Push an input distribution through a channel: ``P(y) = sum_x qx(x) rows[x][y]``."""
    if not _same_size(qx.alphabet, ch.input):
        raise AlphabetMismatch("input distribution does not match channel input")
    return FiniteDistribution(ch.output, qx.probs @ ch.rows)


def joint_distribution(qx: FiniteDistribution, ch: Channel) -> FiniteDistribution:
    """Joint law of (input, output), flattened row-major by input then output."""
    if not _same_size(qx.alphabet, ch.input):
        raise AlphabetMismatch("input distribution does not match channel input")
    joint = (qx.probs[:, None] * ch.rows).ravel()
    return FiniteDistribution(Alphabet(joint.size), joint)


def sequence_pmf(dist: FiniteDistribution, seq: SequenceIndex) -> float:
    """Probability of a sequence under the memoryless extension of ``dist``."""
    if not _same_size(dist.alphabet, seq.alphabet):
        raise AlphabetMismatch("sequence alphabet does not match distribution")
    k = dist.alphabet.size
    v = seq.value
    out = 1.0
    for _ in range(seq.n):
        v, s = divmod(v, k)
        out *= dist.probs[s]
    return float(out)


def product_pmf_vector(dist: FiniteDistribution, n: int) -> np.ndarray:
    """Full pmf vector of the n-fold memoryless extension, indexed like SequenceIndex."""
    out = np.ones(1)
    for _ in range(n):
        out = np.multiply.outer(out, dist.probs).ravel()
    return out


def total_variation(p, q) -> float:
    """One half the L1 distance between two probability vectors."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape or p.ndim != 1:
        raise LengthMismatch(f"shapes {p.shape} and {q.shape} differ")
    for name, v in (("p", p), ("q", q)):
        total = v.sum()
        if abs(total - 1.0) > 1e-6:
            raise ValueError(f"{name} sums to {total!r}, not 1")
    return float(0.5 * np.abs(p - q).sum())
