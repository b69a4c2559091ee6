"""Random codebooks, exact induced output distributions, and typicality splits.

The induced distribution of a codebook is the uniform mixture of the channel
outputs of its codewords. The report decomposes it by per-pair typicality
(sum of per-symbol information densities at most n(I + eps), boundary ties
typical) and measures the quantities the high-probability analysis bounds.

Two evaluation paths exist. The generic path enumerates the output space in
chunks and is the source of truth. For binary mirror-symmetric channels the
per-codeword output pmf depends on the input-output XOR pattern only, so the
whole report reduces to XOR convolutions computed with fast Walsh-Hadamard
transforms; with a uniform input the typicality test also collapses to the
Hamming weight of the XOR pattern, making blocklength-14 sweeps cheap. Both
paths are cross-checked in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AlphabetMismatch,
    SizeOverflow,
    SpaceTooLarge,
    ZeroDispersion,
    ZeroTargetMass,
)
from .exponents import JointProductDivergence, qfunc
from .info import InfoProfile, info_profile
from .probability import (
    Alphabet,
    Channel,
    FiniteDistribution,
    SequenceIndex,
    output_distribution,
    product_pmf_vector,
)

DEFAULT_M_CAP = 1 << 26
DEFAULT_SPACE_CAP = 1 << 24

# boundary ties belong to the typical set; comparisons use sum > thr + _TIE_TOL
_TIE_TOL = 1e-9

# value-merge tolerance for the density-sum convolution
_MERGE_TOL = 1e-12

# elements per chunk when enumerating (codeword, sequence) pairs
_CHUNK_BUDGET = 1 << 22


@dataclass(frozen=True, eq=False)
class Codebook:
    """M codewords of blocklength n, kept as an (M, n) symbol matrix."""

    n: int
    rate_bits: float
    alphabet: Alphabet
    symbols: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        symbols = np.asarray(self.symbols)
        if symbols.ndim != 2 or symbols.shape[1] != self.n:
            raise ValueError(f"symbol matrix shape {symbols.shape} does not match n={self.n}")
        if symbols.size and (symbols.min() < 0 or symbols.max() >= self.alphabet.size):
            raise ValueError("symbol outside the input alphabet")
        symbols = np.ascontiguousarray(symbols, dtype=np.int64)
        symbols.flags.writeable = False
        object.__setattr__(self, "symbols", symbols)

    @property
    def m(self) -> int:
        return self.symbols.shape[0]

    @property
    def words(self) -> tuple[SequenceIndex, ...]:
        """Codewords as sequence indices (arbitrary-precision for large n)."""
        return tuple(
            SequenceIndex.from_symbols(row, self.alphabet) for row in self.symbols
        )


@dataclass(frozen=True)
class SoftCoverReport:
    """Measured per-codebook quantities of the typicality decomposition."""

    tv: float
    p2_mass: float
    d1_max: float
    pos_part_d1: float
    epsilon_used: float

    def __post_init__(self) -> None:
        if not (-1e-12 <= self.tv <= 1.0 + 1e-12):
            raise ValueError(f"tv out of range: {self.tv!r}")
        if not (-1e-12 <= self.p2_mass <= 1.0 + 1e-12):
            raise ValueError(f"p2_mass out of range: {self.p2_mass!r}")
        if self.tv > self.pos_part_d1 + self.p2_mass + 1e-12:
            raise ValueError(
                "decomposition bound violated: "
                f"tv={self.tv!r} > {self.pos_part_d1!r} + {self.p2_mass!r}"
            )


@dataclass(frozen=True)
class AtypicalityResult:
    """Exact atypicality probability and its best Chernoff bound (log2)."""

    epsilon: float
    exact_prob: float
    chernoff_log2: float


def sample_codebook(qx: FiniteDistribution, n: int, rate_bits: float, seed: int,
                    m_cap: int = DEFAULT_M_CAP) -> Codebook:
    """Draw round(2^(n * rate_bits)) codewords i.i.d., symbols i.i.d. from qx."""
    if n < 1:
        raise ValueError(f"blocklength must be >= 1, got {n}")
    if rate_bits <= 0:
        raise ValueError(f"rate must be positive, got {rate_bits}")
    exponent = n * rate_bits
    if exponent > math.log2(m_cap) + 1:
        raise SizeOverflow(f"2^{exponent:.3g} codewords exceeds the cap {m_cap}")
    m = int(round(2.0**exponent))
    if m > m_cap:
        raise SizeOverflow(f"{m} codewords exceeds the cap {m_cap}")
    rng = np.random.default_rng(seed)
    symbols = rng.choice(qx.size, size=(m, n), p=qx.probs)
    return Codebook(n=n, rate_bits=rate_bits, alphabet=qx.alphabet,
                    symbols=symbols, seed=seed)


def _is_mirror_binary(ch: Channel) -> bool:
    return (
        ch.input.size == 2
        and ch.output.size == 2
        and ch.rows[0, 0] == ch.rows[1, 1]
        and ch.rows[0, 1] == ch.rows[1, 0]
    )


def _wht(vec: np.ndarray) -> np.ndarray:
    """In-place-style fast Walsh-Hadamard transform (unnormalized)."""
    v = vec.astype(float, copy=True)
    size = v.size
    h = 1
    while h < size:
        x = v.reshape(-1, 2, h)
        y = np.empty_like(x)
        y[:, 0, :] = x[:, 0, :] + x[:, 1, :]
        y[:, 1, :] = x[:, 0, :] - x[:, 1, :]
        v = y.reshape(-1)
        h *= 2
    return v


def _xor_convolve(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """c[y] = sum_x a[x] * b[x XOR y], via the transform convolution theorem."""
    return _wht(_wht(a) * _wht(b)) / a.size


def _binary_values(cb: Codebook) -> np.ndarray:
    shifts = np.arange(cb.n - 1, -1, -1, dtype=np.int64)
    return (cb.symbols << shifts[None, :]).sum(axis=1)


def _y_digits(start: int, stop: int, n: int, k: int) -> np.ndarray:
    """Digit matrix (n, stop-start) of sequence indices [start, stop)."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((n, idx.size), dtype=np.int64)
    for i in range(n - 1, -1, -1):
        digits[i] = idx % k
        idx = idx // k
    return digits


def _check_space(n: int, k_y: int, space_cap: int) -> int:
    space = k_y**n
    if space > space_cap:
        raise SpaceTooLarge(
            f"output space {k_y}^{n} = {space} exceeds the cap {space_cap}"
        )
    return space


def induced_distribution(cb: Codebook, ch: Channel,
                         space_cap: int = DEFAULT_SPACE_CAP) -> np.ndarray:
    """Exact pmf of the codebook's output mixture over the full sequence space."""
    if cb.alphabet.size != ch.input.size:
        raise AlphabetMismatch("codebook alphabet does not match channel input")
    space = _check_space(cb.n, ch.output.size, space_cap)
    if _is_mirror_binary(ch):
        cnt = np.bincount(_binary_values(cb), minlength=space).astype(float)
        w = product_pmf_vector(ch.row_distribution(0), cb.n)
        p = _xor_convolve(cnt, w) / cb.m
        return np.maximum(p, 0.0)
    return _induced_generic(cb, ch, space)


def _induced_generic(cb: Codebook, ch: Channel, space: int) -> np.ndarray:
    m = cb.m
    acc = np.empty(space)
    chunk = max(1, min(space, _CHUNK_BUDGET // max(m, 1)))
    for start in range(0, space, chunk):
        stop = min(start + chunk, space)
        digits = _y_digits(start, stop, cb.n, ch.output.size)
        prob = np.ones((m, stop - start))
        for i in range(cb.n):
            prob *= ch.rows[cb.symbols[:, i]][:, digits[i]]
        acc[start:stop] = prob.sum(axis=0)
    return acc / m


def _log_density_table(qx: FiniteDistribution, ch: Channel) -> np.ndarray:
    qy = output_distribution(qx, ch)
    with np.errstate(divide="ignore"):
        return np.log2(ch.rows / qy.probs[None, :])


def soft_cover_report(cb: Codebook, qx: FiniteDistribution, ch: Channel,
                      epsilon: float,
                      space_cap: int = DEFAULT_SPACE_CAP) -> SoftCoverReport:
    """Total variation and typicality-split quantities for one codebook.

    Membership of a (codeword, sequence) pair in the typical set is decided by
    the per-symbol density sum being at most n(I + epsilon); the split masses
    P1 + P2 are verified to reassemble the induced distribution to 1e-12.
    """
    if cb.alphabet.size != ch.input.size:
        raise AlphabetMismatch("codebook alphabet does not match channel input")
    space = _check_space(cb.n, ch.output.size, space_cap)
    profile = info_profile(qx, ch)
    threshold = cb.n * (profile.mutual_info_bits + epsilon)

    qy = output_distribution(qx, ch)
    q_vec = product_pmf_vector(qy, cb.n)

    uniform_input = qx.size == 2 and qx.probs[0] == qx.probs[1]
    if _is_mirror_binary(ch) and uniform_input:
        p_vec, p1_vec, p2_vec = _split_mirror(cb, ch, threshold)
    else:
        p_vec, p1_vec, p2_vec = _split_generic(cb, qx, ch, space, threshold)

    if np.max(np.abs(p1_vec + p2_vec - p_vec)) > 1e-12:
        raise RuntimeError("typicality split failed to reassemble the induced pmf")

    zero_q = q_vec == 0.0
    if np.any(p_vec[zero_q] > 0.0):
        raise ZeroTargetMass("induced pmf puts mass where the target has none")

    tv = 0.5 * float(np.abs(p_vec - q_vec).sum())
    p2_mass = float(p2_vec.sum())
    safe_q = np.where(zero_q, 1.0, q_vec)
    d1_max = float(np.max(np.where(zero_q, 0.0, p1_vec / safe_q)))
    pos_part_d1 = float(np.clip(p1_vec - q_vec, 0.0, None).sum())
    return SoftCoverReport(
        tv=tv,
        p2_mass=p2_mass,
        d1_max=d1_max,
        pos_part_d1=pos_part_d1,
        epsilon_used=epsilon,
    )


def _split_mirror(cb: Codebook, ch: Channel, threshold: float):
    """XOR-transform path: everything is a function of the Hamming weight."""
    n = cb.n
    a_same, a_diff = float(ch.rows[0, 0]), float(ch.rows[0, 1])
    with np.errstate(divide="ignore"):
        dens_same = math.log2(2.0 * a_same) if a_same > 0 else -math.inf
        dens_diff = math.log2(2.0 * a_diff) if a_diff > 0 else -math.inf

    weight = np.array(
        [a_same ** (n - k) * a_diff**k for k in range(n + 1)]
    )
    sums = np.array(
        [
            (k * dens_diff if k else 0.0) + ((n - k) * dens_same if k < n else 0.0)
            for k in range(n + 1)
        ]
    )
    typical = sums <= threshold + _TIE_TOL

    cnt = np.bincount(_binary_values(cb), minlength=2**n).astype(float)
    pc = np.bitwise_count(np.arange(2**n, dtype=np.int64))
    w_all = weight[pc]
    w_typ = np.where(typical[pc], w_all, 0.0)
    w_atyp = np.where(typical[pc], 0.0, w_all)

    p = np.maximum(_xor_convolve(cnt, w_all) / cb.m, 0.0)
    p1 = np.maximum(_xor_convolve(cnt, w_typ) / cb.m, 0.0)
    p2 = np.maximum(_xor_convolve(cnt, w_atyp) / cb.m, 0.0)
    return p, p1, p2


def _split_generic(cb: Codebook, qx: FiniteDistribution, ch: Channel,
                   space: int, threshold: float):
    m = cb.m
    dens_table = _log_density_table(qx, ch)
    p = np.empty(space)
    p1 = np.empty(space)
    p2 = np.empty(space)
    chunk = max(1, min(space, _CHUNK_BUDGET // max(m, 1)))
    for start in range(0, space, chunk):
        stop = min(start + chunk, space)
        digits = _y_digits(start, stop, cb.n, ch.output.size)
        prob = np.ones((m, stop - start))
        dens = np.zeros((m, stop - start))
        for i in range(cb.n):
            cols = cb.symbols[:, i]
            prob *= ch.rows[cols][:, digits[i]]
            dens += dens_table[cols][:, digits[i]]
        typical = dens <= threshold + _TIE_TOL
        p[start:stop] = prob.sum(axis=0)
        p1[start:stop] = np.where(typical, prob, 0.0).sum(axis=0)
        p2[start:stop] = np.where(typical, 0.0, prob).sum(axis=0)
    return p / m, p1 / m, p2 / m


def _merge_support(vals: np.ndarray, probs: np.ndarray):
    order = np.argsort(vals, kind="stable")
    v = vals[order]
    p = probs[order]
    starts = np.empty(v.size, dtype=bool)
    starts[0] = True
    starts[1:] = np.diff(v) > _MERGE_TOL
    idx = np.flatnonzero(starts)
    return v[idx], np.add.reduceat(p, idx)


def _iota_distribution(qx: FiniteDistribution, ch: Channel):
    """Finitely-supported law of the per-symbol density under the joint law."""
    joint = (qx.probs[:, None] * ch.rows).ravel()
    dens = _log_density_table(qx, ch).ravel()
    sup = joint > 0
    return _merge_support(dens[sup], joint[sup])


def atypical_probability(qx: FiniteDistribution, ch: Channel, n: int,
                         epsilon: float) -> AtypicalityResult:
    """Exact P(sum of n i.i.d. densities > n(I + epsilon)) plus Chernoff bound.

    The exact value comes from an n-fold convolution of the density's law with
    value merging at 1e-12; the Chernoff side maximizes the exponent over a
    log-spaced order grid and is returned as a log2 bound (-beta * n).
    """
    if n < 1:
        raise ValueError(f"blocklength must be >= 1, got {n}")
    profile = info_profile(qx, ch)
    threshold = n * (profile.mutual_info_bits + epsilon)

    base_v, base_p = _iota_distribution(qx, ch)
    acc_v, acc_p = base_v, base_p
    for _ in range(n - 1):
        vv = np.add.outer(acc_v, base_v).ravel()
        pp = np.multiply.outer(acc_p, base_p).ravel()
        acc_v, acc_p = _merge_support(vv, pp)
    exact = float(acc_p[acc_v > threshold + _TIE_TOL].sum())

    curve = JointProductDivergence(qx, ch)
    alphas = 1.0 + np.logspace(-6, 6, 2001)
    betas = (alphas - 1.0) * (profile.mutual_info_bits + epsilon - curve.on_grid(alphas))
    chernoff_log2 = float(-n * np.max(betas))
    return AtypicalityResult(epsilon=epsilon, exact_prob=exact, chernoff_log2=chernoff_log2)


def berry_esseen_bound(profile: InfoProfile, n: int, epsilon: float) -> float:
    """Normal-approximation tail bound Q(eps sqrt(n/V)) + rho / (V^(3/2) sqrt(n))."""
    V = profile.dispersion
    if V <= 1e-12:
        raise ZeroDispersion(f"dispersion {V!r} is numerically zero")
    return qfunc(epsilon * math.sqrt(n / V)) + profile.third_abs_moment / (
        V**1.5 * math.sqrt(n)
    )


def berry_esseen_check(qx: FiniteDistribution, ch: Channel, n: int,
                       epsilon: float) -> float:
    """Return the normal-approximation bound, verifying it dominates the exact value."""
    profile = info_profile(qx, ch)
    bound = berry_esseen_bound(profile, n, epsilon)
    exact = atypical_probability(qx, ch, n, epsilon).exact_prob
    if exact > bound:
        raise RuntimeError(
            f"normal-approximation bound {bound!r} fails to dominate exact {exact!r}"
        )
    return bound
