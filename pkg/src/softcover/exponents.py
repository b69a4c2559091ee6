"""Analytical bounds: decay exponents, failure probabilities, second-order rates.

The decay exponent is a supremum over orders alpha > 1 of

    ((alpha - 1) / (2 alpha - 1)) * (rate - delta - d_alpha),

where d_alpha is the order-alpha divergence between the joint law and the
product of its marginals. The supremum is located on the compact
reparametrization t = (alpha - 1)/(2 alpha - 1), t in (0, 1/2); when the
objective is still increasing at the t -> 1/2 boundary (constant-d_alpha
channels) the boundary limit is reported with ``boundary=True``.

All failure probabilities are carried as natural logs plus a ``vacuous`` flag:
the exact bounds are double-exponentially small in the blocklength and
underflow any linear-scale float long before they become interesting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import erfc, logsumexp

from .errors import DomainError, RateTooLow, ZeroDispersion
from .info import InfoProfile, info_profile
from .probability import Channel, FiniteDistribution

_LN2 = math.log(2.0)
_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0

# largest exponent e such that 2.0**e stays finite
_MAX_POW2_EXP = 1020.0


@dataclass(frozen=True)
class ExponentResult:
    """Optimized decay exponent and the per-blocklength bound built from it.

    ``alpha_star`` is ``inf`` (and ``boundary`` True) when the supremum is only
    approached as alpha grows without bound. The per-``n`` fields are None when
    no blocklength was supplied. ``failure_log`` is a natural log;
    ``tv_bound_log2`` is log2 of the total-variation threshold.
    """

    gamma_delta: float
    alpha_star: float
    boundary: bool
    epsilon_star: float
    beta: float
    mutual_info_bits: float
    n: int | None = None
    tv_threshold: float | None = None
    tv_bound_log2: float | None = None
    failure_log: float | None = None
    vacuous: bool | None = None


@dataclass(frozen=True)
class SecondOrderPlan:
    """Rate schedule and failure bound when the rate gap shrinks like 1/sqrt(n).

    ``rate`` is the blocklength-n rate; ``typicality_slack`` is the internal
    threshold slack used in the analysis; ``mu_n`` is the atypicality estimate
    that converges to ``epsilon_target`` from below; ``failure_log`` is the
    natural log of the codebook failure bound.
    """

    epsilon_target: float
    c: float
    d: float
    r: float
    n: int
    rate: float
    typicality_slack: float
    mu_n: float
    failure_log: float
    vacuous: bool


def qfunc(x: float) -> float:
    """Standard normal upper tail: 1 - Phi(x), via the complementary error function."""
    return float(0.5 * erfc(x / math.sqrt(2.0)))


def qfunc_inv(eps: float) -> float:
    """Inverse of qfunc on (0, 1), by bracketed root finding."""
    if not (0.0 < eps < 1.0):
        raise DomainError(f"qfunc_inv needs an argument in (0, 1), got {eps}")
    return float(brentq(lambda x: qfunc(x) - eps, -40.0, 40.0, xtol=1e-14))


def optimized_epsilon(rate: float, delta: float, alpha: float, dalpha: float,
                      mutual_info: float) -> float:
    """Typicality slack that balances the two exponential failure terms."""
    return (0.5 * (rate - delta) + (alpha - 1.0) * dalpha) / (0.5 + (alpha - 1.0)) - mutual_info


def beta_exponent(profile: InfoProfile, dalpha: float, alpha: float, epsilon: float) -> float:
    """Atypicality exponent (alpha - 1)(I + epsilon - d_alpha), in bits."""
    if alpha <= 1:
        raise DomainError(f"order must exceed 1, got {alpha}")
    return (alpha - 1.0) * (profile.mutual_info_bits + epsilon - dalpha)


class JointProductDivergence:
    """Order-alpha divergence between a pair's joint law and its marginal product.

    Precomputes the log arrays once so the divergence can be evaluated cheaply
    on scalars or grids of alpha. ``d_inf`` is the alpha -> infinity limit
    (the largest log density ratio on the support).
    """

    def __init__(self, qx: FiniteDistribution, ch: Channel):
        joint = (qx.probs[:, None] * ch.rows).ravel()
        qy = qx.probs @ ch.rows
        prod = (qx.probs[:, None] * qy[None, :]).ravel()
        sup = joint > 0
        self._lp = np.log(joint[sup])
        self._lq = np.log(prod[sup])
        self.d_inf = float(np.max(self._lp - self._lq) / _LN2)

    def __call__(self, alpha: float) -> float:
        terms = alpha * self._lp + (1.0 - alpha) * self._lq
        return float(logsumexp(terms) / (alpha - 1.0) / _LN2)

    def on_grid(self, alphas: np.ndarray) -> np.ndarray:
        terms = alphas[:, None] * self._lp[None, :] + (1.0 - alphas)[:, None] * self._lq[None, :]
        return logsumexp(terms, axis=1) / (alphas - 1.0) / _LN2


def _alpha_from_t(t):
    return (1.0 - t) / (1.0 - 2.0 * t)


def _golden_max(f, a: float, b: float, tol: float = 1e-12):
    """Golden-section search for the maximum of a unimodal f on [a, b]."""
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, f(x)


def _theorem1_failure_log(n: int, delta: float, y_size: int) -> float:
    """Natural log of (1 + |Y|^n) * exp(-2^(n delta) / 3)."""
    prefactor = np.logaddexp(0.0, n * math.log(y_size))
    exp2 = n * delta
    if exp2 > _MAX_POW2_EXP:
        return -math.inf
    return float(prefactor - (2.0**exp2) / 3.0)


def gamma_delta(qx: FiniteDistribution, ch: Channel, rate: float, delta: float,
                n: int | None = None, grid_size: int = 4096) -> ExponentResult:
    """Optimized total-variation decay exponent for a fixed-rate codebook.

    Requires 0 < delta < rate - I; raises RateTooLow otherwise (the supremum
    would be zero, and silent zeros hide configuration mistakes). With ``n``
    supplied, also fills the per-blocklength threshold 3 * 2^(-n gamma) and
    the failure bound (1 + |Y|^n) exp(-2^(n delta)/3) in log form.
    """
    profile = info_profile(qx, ch)
    mutual = profile.mutual_info_bits
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    if rate - delta <= mutual:
        raise RateTooLow(
            f"rate - delta = {rate - delta!r} does not exceed I(X;Y) = {mutual!r}"
        )
    curve = JointProductDivergence(qx, ch)

    ts = np.linspace(1e-9, 0.5 - 1e-9, grid_size + 1)
    gvals = ts * (rate - delta - curve.on_grid(_alpha_from_t(ts)))
    i_best = int(np.argmax(gvals))

    def objective(t: float) -> float:
        return t * (rate - delta - curve(_alpha_from_t(t)))

    lo = ts[max(i_best - 1, 0)]
    hi = ts[min(i_best + 1, ts.size - 1)]
    t_star, g_star = _golden_max(objective, lo, hi)

    g_boundary = 0.5 * (rate - delta - curve.d_inf)
    if g_boundary >= g_star - 1e-10:
        gamma = g_boundary
        alpha_star = math.inf
        boundary = True
        eps_star = curve.d_inf - mutual
        beta = gamma
    else:
        gamma = g_star
        alpha_star = _alpha_from_t(t_star)
        boundary = False
        d_star = curve(alpha_star)
        eps_star = optimized_epsilon(rate, delta, alpha_star, d_star, mutual)
        beta = beta_exponent(profile, d_star, alpha_star, eps_star)

    if n is None:
        return ExponentResult(gamma, alpha_star, boundary, eps_star, beta, mutual)

    tv_bound_log2 = math.log2(3.0) - n * gamma
    tv_threshold = 2.0**tv_bound_log2 if tv_bound_log2 > -_MAX_POW2_EXP else 0.0
    failure_log = _theorem1_failure_log(n, delta, ch.output.size)
    return ExponentResult(
        gamma, alpha_star, boundary, eps_star, beta, mutual,
        n=n,
        tv_threshold=tv_threshold,
        tv_bound_log2=tv_bound_log2,
        failure_log=failure_log,
        vacuous=failure_log >= 0.0,
    )


def theorem1_bound(qx: FiniteDistribution, ch: Channel, rate: float, delta: float,
                   n: int) -> ExponentResult:
    """Per-blocklength high-probability bound: threshold plus log failure probability."""
    return gamma_delta(qx, ch, rate, delta, n=n)


def second_order_plan(profile: InfoProfile, eps_target: float, n: int, c: float,
                      d: float, r: float, y_size: int) -> SecondOrderPlan:
    """Rate schedule whose gap to I shrinks like 1/sqrt(n), with failure bound.

    rate  = I + Qinv(eps) sqrt(V/n) + c log2(n)/n, c > 2
    slack = Qinv(eps) sqrt(V/n) + r log2(n)/n, 0 < r < c - d - 1, d < c - 1
    mu_n  = Q(Qinv(eps) + (r/sqrt(V)) log2(n)/sqrt(n)) + rho / (V^(3/2) sqrt(n))

    The failure bound is exp(-mu_n 2^(n rate)/(3n)) + |Y|^n exp(-n^(c-r-1)/3),
    combined in the log domain. mu_n converges to eps_target from below as n
    grows, which is what makes the schedule work.
    """
    if not (0.0 < eps_target < 1.0):
        raise DomainError(f"target total variation must be in (0, 1), got {eps_target}")
    if c <= 2.0:
        raise DomainError(f"c must exceed 2, got {c}")
    if d >= c - 1.0:
        raise DomainError(f"d must be below c - 1 = {c - 1.0}, got {d}")
    if not (0.0 < r < c - d - 1.0):
        raise DomainError(f"r must lie in (0, {c - d - 1.0}), got {r}")
    if n < 1:
        raise DomainError(f"blocklength must be >= 1, got {n}")
    V = profile.dispersion
    if V <= 1e-12:
        raise ZeroDispersion(
            f"dispersion {V!r} is numerically zero; second-order expansion undefined"
        )
    mutual = profile.mutual_info_bits
    rho = profile.third_abs_moment

    qi = qfunc_inv(eps_target)
    log2n = math.log2(n)
    rate = mutual + qi * math.sqrt(V / n) + c * log2n / n
    slack = qi * math.sqrt(V / n) + r * log2n / n
    mu_n = qfunc(qi + (r / math.sqrt(V)) * log2n / math.sqrt(n)) + rho / (V**1.5 * math.sqrt(n))

    exp2 = n * rate
    if exp2 > _MAX_POW2_EXP or mu_n <= 0:
        term1 = -math.inf
    else:
        term1 = -mu_n * (2.0**exp2) / (3.0 * n)
    power = (c - r - 1.0) * math.log(n)
    if power > 700.0:
        term2 = -math.inf
    else:
        term2 = n * math.log(y_size) - math.exp(power) / 3.0
    failure_log = float(np.logaddexp(term1, term2))

    return SecondOrderPlan(
        epsilon_target=eps_target,
        c=c,
        d=d,
        r=r,
        n=n,
        rate=rate,
        typicality_slack=slack,
        mu_n=mu_n,
        failure_log=failure_log,
        vacuous=failure_log >= 0.0,
    )
