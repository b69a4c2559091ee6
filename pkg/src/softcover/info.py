"""Scalar information quantities of an (input distribution, channel) pair.

All quantities are in bits (base-2 logs), matching the unit in which codebook
rates are expressed. Pairs with zero joint probability contribute nothing to
moment sums even when their log-density is -inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from .errors import AlphabetMismatch, SupportViolation, UndefinedDensity
from .probability import Channel, FiniteDistribution, output_distribution

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class InfoProfile:
    """First three central moments of the per-symbol information density.

    mutual_info_bits : mean (the mutual information)
    dispersion       : variance, bits^2
    third_abs_moment : third absolute central moment, bits^3
    """

    mutual_info_bits: float
    dispersion: float
    third_abs_moment: float


def information_density(qx: FiniteDistribution, ch: Channel, x: int, y: int) -> float:
    """log2 of rows[x][y] / P(y); -inf when rows[x][y] = 0 and P(y) > 0."""
    if qx[x] <= 0.0:
        raise ValueError(f"input symbol {x} has zero probability")
    qy = output_distribution(qx, ch)
    if qy[y] <= 0.0:
        raise UndefinedDensity(f"output symbol {y} has zero probability")
    w = float(ch.rows[x, y])
    if w == 0.0:
        return -math.inf
    return math.log2(w / qy[y])


def info_profile(qx: FiniteDistribution, ch: Channel) -> InfoProfile:
    """Mean, variance, and third absolute central moment of the density."""
    joint = qx.probs[:, None] * ch.rows
    qy = joint.sum(axis=0)
    mask = joint > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        dens = np.log2(ch.rows / qy[None, :])
    d = dens[mask]
    w = joint[mask]
    mean = float(w @ d)
    centered = d - mean
    var = float(w @ centered**2)
    third = float(w @ np.abs(centered) ** 3)
    return InfoProfile(mean, var, third)


def renyi_divergence(p: FiniteDistribution, q: FiniteDistribution, alpha: float) -> float:
    """Order-alpha divergence in bits: (1/(a-1)) log2 sum p^a q^(1-a).

    Terms with p_i = 0 are dropped (the 0^a convention). Evaluation is in the
    log domain per term with max-shift aggregation, so large alpha does not
    underflow.
    """
    if alpha <= 0 or alpha == 1.0:
        raise ValueError(f"order must be positive and != 1, got {alpha}")
    if p.size != q.size:
        raise AlphabetMismatch("distributions live on different alphabets")
    sup = p.probs > 0
    pv = p.probs[sup]
    qv = q.probs[sup]
    if alpha > 1 and np.any(qv == 0):
        raise SupportViolation("p puts mass where q has none (alpha > 1)")
    with np.errstate(divide="ignore"):
        terms = alpha * np.log(pv) + (1.0 - alpha) * np.log(qv)
    return float(logsumexp(terms) / (alpha - 1.0) / _LN2)


def kl_divergence(p: FiniteDistribution, q: FiniteDistribution) -> float:
    """KL divergence in bits; the alpha -> 1 limit of renyi_divergence."""
    if p.size != q.size:
        raise AlphabetMismatch("distributions live on different alphabets")
    sup = p.probs > 0
    pv = p.probs[sup]
    qv = q.probs[sup]
    if np.any(qv == 0):
        raise SupportViolation("p puts mass where q has none")
    return float(pv @ np.log2(pv / qv))
