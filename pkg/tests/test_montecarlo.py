import numpy as np
import pytest

import softcover as sc
from softcover.errors import DegenerateFit, InvalidRate, RateTooLow
from softcover.montecarlo import trial_seed


def small_cfg(**kw):
    qx, ch = sc.parse_channel_spec("bsc:0.2")
    defaults = dict(
        qx=qx, ch=ch, n_list=(3, 4, 5), rate_spec=sc.FixedRate(0.9),
        trials=8, master_seed=99, delta=0.05,
    )
    defaults.update(kw)
    return sc.TrialConfig(**defaults)


def test_trial_seed_is_pure_and_spread():
    assert trial_seed(1, 4, 0) == trial_seed(1, 4, 0)
    seeds = {trial_seed(7, n, t) for n in range(1, 20) for t in range(50)}
    assert len(seeds) == 19 * 50
    assert all(0 <= s < 2**64 for s in seeds)


def test_run_sweep_deterministic():
    res1 = sc.run_sweep(small_cfg(), threads=1)
    res2 = sc.run_sweep(small_cfg(), threads=1)
    assert res1.rows == res2.rows
    assert res1.decay == res2.decay


def test_run_sweep_thread_count_invariance():
    res1 = sc.run_sweep(small_cfg(), threads=1)
    res4 = sc.run_sweep(small_cfg(), threads=4)
    assert res1.rows == res4.rows


def test_run_sweep_merge_property():
    full = sc.run_sweep(small_cfg(trials=10), threads=2)
    first = sc.run_sweep(small_cfg(trials=5), threads=2)
    second = sc.run_sweep(small_cfg(trials=5, trial_offset=5), threads=2)
    assert full.rows == tuple(sorted(first.rows + second.rows, key=lambda r: (r.n, r.trial)))


def test_run_sweep_perfect_cover_seed():
    # noiseless binary at rate 1: when the two sampled words happen to be a
    # permutation of the alphabet, the cover is exact
    cfg = sc.TrialConfig(
        qx=sc.uniform(2), ch=sc.noiseless(2), n_list=(1,), rate_spec=sc.FixedRate(1.0),
        trials=1, master_seed=4, delta=0.5, epsilon_override=0.5,
    )
    res = sc.run_sweep(cfg, threads=1)
    assert res.rows[0].tv == 0.0


def test_run_sweep_default_epsilon_comes_from_bound():
    res = sc.run_sweep(small_cfg(), threads=1)
    qx, ch = sc.parse_channel_spec("bsc:0.2")
    expect = sc.gamma_delta(qx, ch, 0.9, 0.05).epsilon_star
    assert all(b.epsilon_used == pytest.approx(expect) for b in res.blocks)


def test_run_sweep_rate_too_low_needs_override():
    cfg = sc.TrialConfig(
        qx=sc.uniform(2), ch=sc.noiseless(2), n_list=(2,), rate_spec=sc.FixedRate(1.0),
        trials=2, master_seed=0, delta=0.5,
    )
    with pytest.raises(RateTooLow):
        sc.run_sweep(cfg, threads=1)
    cfg_ok = sc.TrialConfig(
        qx=sc.uniform(2), ch=sc.noiseless(2), n_list=(2,), rate_spec=sc.FixedRate(1.0),
        trials=2, master_seed=0, delta=0.5, epsilon_override=0.3,
    )
    res = sc.run_sweep(cfg_ok, threads=1)
    assert all(b.bound is None for b in res.blocks)


def test_run_sweep_second_order_spec():
    qx, ch = sc.parse_channel_spec("bsc:0.11")
    cfg = sc.TrialConfig(
        qx=qx, ch=ch, n_list=(6, 8), rate_spec=sc.SecondOrderRate(0.25, 3.0),
        trials=4, master_seed=5, delta=0.02,
    )
    res = sc.run_sweep(cfg, threads=1)
    prof = sc.info_profile(qx, ch)
    for block in res.blocks:
        expect = (
            prof.mutual_info_bits
            + sc.qfunc_inv(0.25) * np.sqrt(prof.dispersion / block.n)
            + 3.0 * np.log2(block.n) / block.n
        )
        assert block.rate_bits == pytest.approx(expect)
        # the target threshold is always among the tail estimates
        assert any(t.threshold == 0.25 for t in block.tails)

    with pytest.raises(InvalidRate):
        sc.run_sweep(
            sc.TrialConfig(
                qx=qx, ch=sc.bsc(0.5), n_list=(4,), rate_spec=sc.SecondOrderRate(0.25, 3.0),
                trials=1, master_seed=0, delta=0.02,
            ),
            threads=1,
        )


def test_config_validation():
    with pytest.raises(ValueError):
        small_cfg(n_list=())
    with pytest.raises(ValueError):
        small_cfg(n_list=(5, 3))
    with pytest.raises(ValueError):
        small_cfg(trials=0)


def test_fit_decay_exact_line():
    per_n = {n: [2.0 ** (-0.3 * n)] for n in range(4, 11)}
    fit = sc.fit_decay(per_n)
    assert fit.slope == pytest.approx(0.3, abs=1e-12)
    assert fit.stderr == pytest.approx(0.0, abs=1e-12)


def test_fit_decay_constant():
    per_n = {n: [0.25, 0.25] for n in (2, 4, 6, 8)}
    fit = sc.fit_decay(per_n)
    assert fit.slope == pytest.approx(0.0, abs=1e-12)


def test_fit_decay_excludes_zero_medians():
    per_n = {2: [0.5], 4: [0.25], 6: [0.125], 8: [0.0]}
    fit = sc.fit_decay(per_n)
    assert fit.excluded_ns == (8,)
    assert fit.slope == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(DegenerateFit):
        sc.fit_decay({2: [0.0], 4: [0.1], 6: [0.0]})


def test_tail_estimate_examples():
    tvs = np.array([0.1, 0.2, 0.3, 0.4])
    assert sc.tail_estimate(tvs, 1.0).p_hat == 0.0
    assert sc.tail_estimate(tvs, -0.5).p_hat == 1.0
    t = sc.tail_estimate(tvs, 0.25)
    assert t.p_hat == 0.5
    assert t.stderr == pytest.approx(np.sqrt(0.25 / 4))
    med = sc.tail_estimate(tvs, float(np.median(tvs)))
    assert abs(med.p_hat - 0.5) <= med.stderr + 0.25


def test_median_tv_mostly_decreasing_in_n():
    # desk-scale reflection of the exponential-decay claim
    cfg = small_cfg(n_list=(4, 6, 8, 10), trials=40)
    res = sc.run_sweep(cfg)
    medians = [b.median_tv for b in res.blocks]
    inversions = sum(1 for a, b in zip(medians, medians[1:]) if b >= a)
    assert inversions <= 1
    assert res.decay is not None and res.decay.slope > 0
