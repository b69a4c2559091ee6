"""Repeated-trial harness: sample codebooks, collect reports, fit decay slopes.

Determinism contract: the seed of trial t at blocklength n is a pure 64-bit
avalanche mix of (master_seed, n, t), so results are independent of execution
order and of the number of worker threads, and a sweep can be split into
halves and merged. Bit-identical streams are promised within this
implementation for a given master seed, not across implementations.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .codebook import DEFAULT_M_CAP, DEFAULT_SPACE_CAP, sample_codebook, soft_cover_report
from .errors import DegenerateFit, InvalidRate, RateTooLow
from .exponents import ExponentResult, qfunc_inv, theorem1_bound
from .info import info_profile
from .probability import Channel, FiniteDistribution

_MASK64 = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, n: int, trial: int) -> int:
    """64-bit seed for one (blocklength, trial) work item."""
    return _splitmix64(_splitmix64(_splitmix64(master_seed & _MASK64) ^ n) ^ trial)


@dataclass(frozen=True)
class FixedRate:
    bits: float


@dataclass(frozen=True)
class SecondOrderRate:
    """Rate I + Qinv(eps_target) sqrt(V/n) + c log2(n)/n per blocklength."""

    eps_target: float
    c: float


@dataclass(frozen=True)
class TrialConfig:
    qx: FiniteDistribution
    ch: Channel
    n_list: tuple[int, ...]
    rate_spec: FixedRate | SecondOrderRate
    trials: int
    master_seed: int
    delta: float
    epsilon_override: float | None = None
    tail_thresholds: tuple[float, ...] = ()
    trial_offset: int = 0
    m_cap: int = DEFAULT_M_CAP
    space_cap: int = DEFAULT_SPACE_CAP

    def __post_init__(self) -> None:
        n_list = tuple(int(n) for n in self.n_list)
        if not n_list:
            raise ValueError("n_list must be nonempty")
        if list(n_list) != sorted(n_list):
            raise ValueError("n_list must be ascending")
        object.__setattr__(self, "n_list", n_list)
        object.__setattr__(self, "tail_thresholds", tuple(self.tail_thresholds))
        if self.trials < 1:
            raise ValueError("need at least one trial")


@dataclass(frozen=True)
class TrialRow:
    n: int
    trial: int
    seed: int
    tv: float
    p2_mass: float
    d1_max: float
    pos_part_d1: float


@dataclass(frozen=True)
class TailEstimate:
    threshold: float
    p_hat: float
    stderr: float


@dataclass(frozen=True)
class BlockSummary:
    """Per-blocklength aggregation: sorted tv sample, bound, tail estimates."""

    n: int
    rate_bits: float
    epsilon_used: float
    tvs: np.ndarray
    median_tv: float
    bound: ExponentResult | None
    tails: tuple[TailEstimate, ...]


@dataclass(frozen=True)
class DecayFit:
    slope: float
    stderr: float
    excluded_ns: tuple[int, ...] = ()


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[TrialRow, ...]
    blocks: tuple[BlockSummary, ...]
    decay: DecayFit | None


def tail_estimate(tvs, threshold: float) -> TailEstimate:
    """Empirical exceedance fraction with its binomial standard error."""
    tvs = np.asarray(tvs, dtype=float)
    if tvs.size < 1:
        raise ValueError("need at least one observation")
    p_hat = float(np.mean(tvs > threshold))
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / tvs.size)
    return TailEstimate(threshold=threshold, p_hat=p_hat, stderr=stderr)


def fit_decay(per_n_tvs) -> DecayFit:
    """Least-squares decay rate of the median tv across blocklengths.

    Fits log2(median tv) against n and reports the negated slope as a positive
    decay rate (bits per symbol) with its standard error. Blocklengths with a
    zero median cannot enter the log fit; they are excluded and reported.
    Raises DegenerateFit when fewer than three usable blocklengths remain.
    """
    ns, meds, excluded = [], [], []
    for n in sorted(per_n_tvs):
        med = float(np.median(np.asarray(per_n_tvs[n], dtype=float)))
        if med <= 0.0:
            excluded.append(int(n))
        else:
            ns.append(float(n))
            meds.append(med)
    if len(ns) < 3:
        raise DegenerateFit(
            f"only {len(ns)} blocklengths with positive median tv (excluded: {excluded})"
        )
    x = np.array(ns)
    y = np.log2(np.array(meds))
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    dof = x.size - 2
    sxx = float(((x - x.mean()) ** 2).sum())
    stderr = math.sqrt(float((resid**2).sum()) / dof / sxx) if dof > 0 else 0.0
    return DecayFit(slope=float(-slope), stderr=stderr, excluded_ns=tuple(excluded))


def _resolve_block(cfg: TrialConfig, n: int):
    """Rate, theorem bound (None when inapplicable), and report slack for one n."""
    profile = info_profile(cfg.qx, cfg.ch)
    if isinstance(cfg.rate_spec, FixedRate):
        rate = cfg.rate_spec.bits
    else:
        V = profile.dispersion
        if V <= 1e-12:
            raise InvalidRate("second-order rate spec needs positive dispersion")
        rate = (
            profile.mutual_info_bits
            + qfunc_inv(cfg.rate_spec.eps_target) * math.sqrt(V / n)
            + cfg.rate_spec.c * math.log2(n) / n
        )
    try:
        bound = theorem1_bound(cfg.qx, cfg.ch, rate, cfg.delta, n)
    except RateTooLow:
        bound = None

    if cfg.epsilon_override is not None:
        eps = cfg.epsilon_override
    elif bound is not None:
        eps = bound.epsilon_star
    elif isinstance(cfg.rate_spec, SecondOrderRate):
        # harness default when the fixed-delta bound is inapplicable: the
        # second-order slack with r = 1
        eps = (
            qfunc_inv(cfg.rate_spec.eps_target)
            * math.sqrt(profile.dispersion / n)
            + math.log2(n) / n
        )
    else:
        raise RateTooLow(
            f"rate {rate!r} - delta {cfg.delta!r} is at most I(X;Y); "
            "supply epsilon_override to force a sweep anyway"
        )
    return rate, bound, eps


def run_sweep(cfg: TrialConfig, threads: int | None = None) -> SweepResult:
    """Run trials x blocklengths codebook draws and aggregate their reports."""
    resolved = {n: _resolve_block(cfg, n) for n in cfg.n_list}

    def one_trial(n: int, t: int) -> TrialRow:
        rate, _, eps = resolved[n]
        seed = trial_seed(cfg.master_seed, n, t)
        cb = sample_codebook(cfg.qx, n, rate, seed, m_cap=cfg.m_cap)
        rep = soft_cover_report(cb, cfg.qx, cfg.ch, eps, space_cap=cfg.space_cap)
        return TrialRow(
            n=n, trial=t, seed=seed, tv=rep.tv, p2_mass=rep.p2_mass,
            d1_max=rep.d1_max, pos_part_d1=rep.pos_part_d1,
        )

    items = [
        (n, t)
        for n in cfg.n_list
        for t in range(cfg.trial_offset, cfg.trial_offset + cfg.trials)
    ]
    if threads is None or threads <= 0:
        threads = os.cpu_count() or 1
    if threads == 1:
        rows = [one_trial(n, t) for n, t in items]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(lambda nt: one_trial(*nt), items))
    rows.sort(key=lambda r: (r.n, r.trial))

    blocks = []
    per_n_tvs: dict[int, np.ndarray] = {}
    for n in cfg.n_list:
        rate, bound, eps = resolved[n]
        tvs = np.sort(np.array([r.tv for r in rows if r.n == n]))
        per_n_tvs[n] = tvs
        thresholds = list(cfg.tail_thresholds)
        if bound is not None:
            thresholds.append(bound.tv_threshold)
        if isinstance(cfg.rate_spec, SecondOrderRate):
            thresholds.append(cfg.rate_spec.eps_target)
        tails = tuple(tail_estimate(tvs, thr) for thr in thresholds)
        blocks.append(
            BlockSummary(
                n=n, rate_bits=rate, epsilon_used=eps, tvs=tvs,
                median_tv=float(np.median(tvs)), bound=bound, tails=tails,
            )
        )

    try:
        decay = fit_decay(per_n_tvs)
    except DegenerateFit:
        decay = None
    return SweepResult(rows=tuple(rows), blocks=tuple(blocks), decay=decay)
