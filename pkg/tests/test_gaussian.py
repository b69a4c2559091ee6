import math

import numpy as np
import pytest
from scipy.stats import norm

import softcover as sc

# one codeword at the origin, snr 15: quadrature oracle at 10x resolution,
# frozen before the main build
ORIGIN_TV_SNR15 = 0.5817631816303125


def test_setup_variance_relations():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=5, noise_var=2.0, seed=0)
    assert setup.input_var == pytest.approx(30.0)
    assert setup.target_var == pytest.approx(32.0)
    assert setup.codebook_size == 5
    assert sc.GaussianSetup(snr=15.0, dim=2, b=32).codebook_size == 1024
    with pytest.raises(ValueError):
        sc.GaussianSetup(snr=-1.0, dim=1, b=5)
    with pytest.raises(ValueError):
        sc.GaussianSetup(snr=15.0, dim=3, b=5)


def test_mutual_info_two_bits_at_snr_15():
    assert sc.gaussian_mutual_info_bits(15.0) == 2.0
    assert math.log2(5) > 2.0
    assert 5.0 > 2.0


def test_sample_codebook_deterministic():
    setup = sc.GaussianSetup(snr=15.0, dim=2, b=5, seed=77)
    cw1 = sc.sample_gaussian_codebook(setup)
    cw2 = sc.sample_gaussian_codebook(setup)
    assert cw1.shape == (25, 2)
    np.testing.assert_array_equal(cw1, cw2)
    single = sc.sample_gaussian_codebook(sc.GaussianSetup(snr=15.0, dim=1, b=1, seed=0))
    assert single.shape == (1, 1)


def test_sample_codebook_variance():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=32, seed=5)
    draws = np.concatenate(
        [sc.sample_gaussian_codebook(sc.GaussianSetup(15.0, 1, 32, seed=s)).ravel()
         for s in range(60)]
    )
    assert draws.var() == pytest.approx(15.0, rel=0.1)


def test_mixture_tv_origin_oracle():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=1, seed=0)
    tv = sc.mixture_tv(np.array([[0.0]]), setup)
    assert tv == pytest.approx(ORIGIN_TV_SNR15, abs=1e-4)


def test_mixture_tv_vanishes_when_noise_matches_target():
    # snr -> 0: a single origin codeword plus noise is nearly the target
    setup = sc.GaussianSetup(snr=1e-9, dim=1, b=1, seed=0)
    assert sc.mixture_tv(np.array([[0.0]]), setup) < 1e-8


def test_mixture_tv_scale_invariance():
    rng = np.random.default_rng(2)
    base = sc.GaussianSetup(snr=15.0, dim=1, b=6, noise_var=1.0, seed=0)
    cws = rng.normal(0, math.sqrt(base.input_var), size=(6, 1))
    scaled = sc.GaussianSetup(snr=15.0, dim=1, b=6, noise_var=4.0, seed=0)
    tv1 = sc.mixture_tv(cws, base)
    tv2 = sc.mixture_tv(2.0 * cws, scaled)
    assert tv1 == pytest.approx(tv2, abs=1e-9)


def test_mixture_tv_matches_high_resolution_quadrature():
    rng = np.random.default_rng(9)
    checked = 0
    for seed in range(14):
        b = int(rng.integers(2, 9))
        setup = sc.GaussianSetup(snr=float(rng.uniform(4, 20)), dim=1, b=b, seed=seed)
        cws = sc.sample_gaussian_codebook(setup)
        assert sc.mixture_tv(cws, setup) == pytest.approx(
            sc.mixture_tv(cws, setup, points=40960), abs=1e-4
        )
        checked += 1
    for seed in range(6):
        setup = sc.GaussianSetup(snr=float(rng.uniform(4, 20)), dim=2, b=2, seed=seed)
        cws = sc.sample_gaussian_codebook(setup)
        assert sc.mixture_tv(cws, setup) == pytest.approx(
            sc.mixture_tv(cws, setup, points=5120), abs=1e-4
        )
        checked += 1
    assert checked == 20


def test_optimize_origin_already_stationary():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=1, seed=0)
    out = sc.optimize_codewords(np.array([[0.0]]), setup, max_iters=200, tol=1e-3)
    assert abs(out[0, 0]) <= 1e-3 * 4  # stays within a few final steps of the origin


def test_optimize_monotone_and_beats_random_start():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=5, seed=0)
    init = sc.sample_gaussian_codebook(setup)
    tv_init = sc.mixture_tv(init, setup)
    out = sc.optimize_codewords(init, setup, max_iters=300, tol=1e-3)
    tv_out = sc.mixture_tv(out, setup)
    assert tv_out <= tv_init
    assert tv_out < 0.2  # well below the random-start value near 0.36


def test_optimized_five_points_nearly_symmetric():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=5, seed=0)
    qs = (np.arange(5) + 0.5) / 5
    init = norm.ppf(qs, scale=math.sqrt(setup.input_var)).reshape(-1, 1)
    tol = 1e-3
    out = sc.optimize_codewords(init, setup, max_iters=1000, tol=tol)
    c = np.sort(out.ravel())
    moved_by_mirror_average = np.max(np.abs(c + c[::-1])) / 2.0
    assert moved_by_mirror_average <= 2 * tol


def test_emit_density_grid_1d():
    setup = sc.GaussianSetup(snr=15.0, dim=1, b=5, seed=3)
    cws = sc.sample_gaussian_codebook(setup)
    grid = sc.emit_density_grid(cws, setup)
    assert grid.dim == 1 and grid.ys is None
    np.testing.assert_array_equal(grid.codewords, cws)
    assert np.trapezoid(grid.mixture, grid.xs) == pytest.approx(1.0, abs=1e-3)
    assert np.trapezoid(grid.target, grid.xs) == pytest.approx(1.0, abs=1e-3)
    # grid spans at least six target standard deviations
    assert grid.xs[0] <= -6 * math.sqrt(setup.target_var)


def test_emit_density_grid_2d():
    setup = sc.GaussianSetup(snr=15.0, dim=2, b=4, seed=3)
    cws = sc.sample_gaussian_codebook(setup)
    grid = sc.emit_density_grid(cws, setup, points=256)
    assert grid.dim == 2 and grid.target is None
    assert grid.mixture.shape == (256, 256)
    mass = np.trapezoid(np.trapezoid(grid.mixture, grid.ys, axis=1), grid.xs)
    assert mass == pytest.approx(1.0, abs=1e-3)


def test_big_codebook_tracks_target_better():
    gaps = {5: [], 32: []}
    for b in (5, 32):
        for seed in range(15):
            setup = sc.GaussianSetup(snr=15.0, dim=1, b=b, seed=seed)
            grid = sc.emit_density_grid(sc.sample_gaussian_codebook(setup), setup)
            gaps[b].append(float(np.max(np.abs(grid.mixture - grid.target))))
    assert np.median(gaps[32]) < np.median(gaps[5])
