import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import softcover as sc
from softcover.errors import (
    AlphabetMismatch,
    LengthMismatch,
    NegativeWeight,
    ZeroMass,
)
from softcover.probability import Alphabet, SequenceIndex, product_pmf_vector


def test_make_distribution_examples():
    np.testing.assert_allclose(sc.make_distribution([0.5, 0.5]).probs, [0.5, 0.5])
    np.testing.assert_allclose(sc.make_distribution([2, 2]).probs, [0.5, 0.5])
    np.testing.assert_allclose(sc.make_distribution([1, 3]).probs, [0.25, 0.75])


def test_make_distribution_errors():
    with pytest.raises(NegativeWeight):
        sc.make_distribution([0.5, -0.1])
    with pytest.raises(ZeroMass):
        sc.make_distribution([0.0, 0.0])


def test_distribution_ingest_tolerance():
    # short decimal literals that do not sum exactly to 1 are renormalized
    d = sc.FiniteDistribution(Alphabet(3), np.array([0.1, 0.2, 0.7000000001]))
    assert abs(d.probs.sum() - 1.0) < 1e-15
    with pytest.raises(ValueError):
        sc.FiniteDistribution(Alphabet(2), np.array([0.6, 0.6]))


def test_output_distribution_examples(uniform2, bsc011):
    np.testing.assert_allclose(sc.output_distribution(uniform2, bsc011).probs, [0.5, 0.5])
    point = sc.make_distribution([1.0, 0.0])
    ch = sc.bsc(0.2)
    np.testing.assert_allclose(sc.output_distribution(point, ch).probs, ch.rows[0])
    skew = sc.make_distribution([0.3, 0.7])
    np.testing.assert_allclose(sc.output_distribution(skew, ch).probs, [0.38, 0.62])


def test_output_distribution_mismatch(bsc02):
    with pytest.raises(AlphabetMismatch):
        sc.output_distribution(sc.uniform(3), bsc02)


def test_joint_distribution_examples(uniform2):
    ident = sc.noiseless(2)
    np.testing.assert_allclose(
        sc.joint_distribution(uniform2, ident).probs, [0.5, 0, 0, 0.5], atol=1e-15
    )
    np.testing.assert_allclose(
        sc.joint_distribution(uniform2, sc.bsc(0.5)).probs, [0.25] * 4
    )
    skew = sc.make_distribution([0.3, 0.7])
    np.testing.assert_allclose(
        sc.joint_distribution(skew, sc.bsc(0.2)).probs, [0.24, 0.06, 0.14, 0.56]
    )


def test_joint_marginal_consistency():
    rng = np.random.default_rng(11)
    for _ in range(20):
        k_in, k_out = rng.integers(2, 5, size=2)
        qx = sc.make_distribution(rng.random(k_in) + 0.01)
        ch = sc.make_channel(rng.random((k_in, k_out)) + 0.01)
        joint = sc.joint_distribution(qx, ch).probs.reshape(k_in, k_out)
        direct = sc.output_distribution(qx, ch).probs
        np.testing.assert_allclose(joint.sum(axis=0), direct, atol=1e-12)


def test_sequence_index_roundtrip():
    alpha = Alphabet(3)
    for value in range(3**4):
        seq = SequenceIndex(4, alpha, value)
        assert SequenceIndex.from_symbols(seq.symbols(), alpha).value == value
    with pytest.raises(ValueError):
        SequenceIndex(2, alpha, 9)


def test_sequence_pmf_examples(uniform2):
    alpha2 = Alphabet(2)
    assert sc.sequence_pmf(uniform2, SequenceIndex(3, alpha2, 5)) == pytest.approx(0.125)
    point = sc.make_distribution([1.0, 0.0])
    assert sc.sequence_pmf(point, SequenceIndex(4, alpha2, 0)) == 1.0
    skew = sc.make_distribution([0.25, 0.75])
    assert sc.sequence_pmf(skew, SequenceIndex(2, alpha2, 0b01)) == pytest.approx(0.1875)


@pytest.mark.parametrize("n", [1, 4, 8, 12])
def test_sequence_pmf_sums_to_one(n):
    skew = sc.make_distribution([0.3, 0.7])
    vec = product_pmf_vector(skew, n)
    assert vec.size == 2**n
    assert abs(vec.sum() - 1.0) < 1e-9
    # vector agrees with the per-sequence scalar on a few indices
    alpha2 = Alphabet(2)
    for value in (0, 1, 2**n - 1):
        assert vec[value] == pytest.approx(
            sc.sequence_pmf(skew, SequenceIndex(n, alpha2, value)), abs=1e-15
        )


def test_total_variation_examples():
    assert sc.total_variation([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert sc.total_variation([1.0, 0.0], [0.0, 1.0]) == 1.0
    assert sc.total_variation([0.5, 0.5], [0.9, 0.1]) == pytest.approx(0.4)
    with pytest.raises(LengthMismatch):
        sc.total_variation([1.0], [0.5, 0.5])


def _prob_vectors(size):
    return st.lists(
        st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=size, max_size=size
    ).filter(lambda w: sum(w) > 1e-6)


@given(_prob_vectors(5), _prob_vectors(5), _prob_vectors(5))
@settings(max_examples=200, deadline=None)
def test_total_variation_metric_properties(wp, wq, wr):
    p = sc.make_distribution(wp).probs
    q = sc.make_distribution(wq).probs
    r = sc.make_distribution(wr).probs
    tv_pq = sc.total_variation(p, q)
    assert 0.0 <= tv_pq <= 1.0
    assert tv_pq == pytest.approx(sc.total_variation(q, p), abs=1e-15)
    assert tv_pq <= sc.total_variation(p, r) + sc.total_variation(r, q) + 1e-12
    # positive-part identity: half L1 equals the one-sided mass surplus
    assert tv_pq == pytest.approx(np.clip(p - q, 0, None).sum(), abs=1e-12)
