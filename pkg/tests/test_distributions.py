import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from linfbound.distributions import (
    CountVector,
    Distribution,
    InvalidArgument,
    V_star,
    cumulative_table,
    mle,
    phi,
    read_counts_csv,
    read_distribution_csv,
    rep_seed,
    sample,
    sup_dev,
    uniform,
    uniforms,
    v_star,
    write_counts_csv,
    write_distribution_csv,
    zipf,
)

# mpmath, 40 digits: 1 / sum_{r<=100} r^-1.1
ZIPF_100_11_P1 = 0.2337527780551643349


@st.composite
def prob_vectors(draw, min_size=1, max_size=40):
    w = draw(st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=min_size, max_size=max_size))
    w = np.array(w)
    if w.sum() == 0:
        w[0] = 1.0
    p = w / w.sum()
    p[np.argmax(p)] += 1.0 - math.fsum(p)
    return Distribution(p)


class TestConstructors:
    def test_zipf_single(self):
        assert_array_equal(zipf(1, 1.1).probs, [1.0])

    def test_zipf_two(self):
        assert_allclose(zipf(2, 1.0).probs, [2 / 3, 1 / 3], rtol=1e-15)

    def test_zipf_reference_mass(self):
        assert_allclose(zipf(100, 1.1).probs[0], ZIPF_100_11_P1, rtol=1e-13)

    @pytest.mark.parametrize("A", [1, 4, 100])
    def test_uniform(self, A):
        assert_array_equal(uniform(A).probs, np.full(A, 1.0 / A))

    @pytest.mark.parametrize("bad", [0, -3, 2.5])
    def test_bad_alphabet(self, bad):
        with pytest.raises(InvalidArgument):
            zipf(bad, 1.0)
        with pytest.raises(InvalidArgument):
            uniform(bad)

    def test_zipf_rejects_nonpositive_exponent(self):
        with pytest.raises(InvalidArgument):
            zipf(10, 0.0)


class TestDistribution:
    def test_sum_tolerance(self):
        Distribution([0.5, 0.5 + 5e-13])
        with pytest.raises(InvalidArgument):
            Distribution([0.5, 0.5 + 1e-10])

    def test_negative(self):
        with pytest.raises(InvalidArgument):
            Distribution([1.2, -0.2])

    def test_zero_mass_counts_in_support(self):
        d = Distribution([0.5, 0.0, 0.5])
        assert d.support_size == 3

    def test_immutable(self):
        d = uniform(3)
        with pytest.raises(ValueError):
            d.probs[0] = 1.0

    def test_sorted_view_stable(self):
        d = Distribution([0.2, 0.4, 0.4])
        assert_array_equal(d.sorted_desc(), [0.4, 0.4, 0.2])
        assert d.top == 0.4


class TestCounts:
    def test_sum_must_match(self):
        with pytest.raises(InvalidArgument):
            CountVector([1, 2], 4)

    def test_mle_examples(self):
        assert_array_equal(mle([3, 1]).probs, [0.75, 0.25])
        assert_array_equal(mle([0, 5]).probs, [0.0, 1.0])
        assert_array_equal(mle([2, 2, 2]).probs, np.full(3, 1 / 3))

    @given(st.lists(st.integers(0, 50), min_size=1, max_size=20).filter(lambda c: sum(c) > 0))
    def test_mle_is_counts_over_n(self, c):
        est = mle(c)
        assert_array_equal(est.probs, np.array(c) / sum(c))
        assert est.vhat_star == pytest.approx(np.max(est.probs * (1 - est.probs)))


class TestSampling:
    def test_degenerate(self):
        assert_array_equal(sample(Distribution([1.0]), 7, 123).counts, [7])

    def test_determinism(self):
        d = zipf(50, 1.1)
        assert_array_equal(sample(d, 500, 9).counts, sample(d, 500, 9).counts)

    def test_different_seeds_differ(self):
        d = uniform(20)
        assert not np.array_equal(sample(d, 500, 1).counts, sample(d, 500, 2).counts)

    def test_fair_coin_band(self):
        c = sample(uniform(2), 10**6, 2024).counts
        assert 0.497 <= c[0] / 10**6 <= 0.503

    def test_trailing_zero_mass_unreachable(self):
        d = Distribution([0.3, 0.7, 0.0, 0.0])
        cdf = cumulative_table(d.probs)
        assert cdf[1] == 1.0
        assert sample(d, 10**4, 5).counts[2:].sum() == 0

    def test_uniform_stream_is_pinned(self):
        # guards the documented bit-stream: PCG64 raw words, top 53 bits
        u = uniforms(rep_seed(0, 0), 3)
        assert np.all((u >= 0) & (u < 1))
        raw = np.random.PCG64(rep_seed(0, 0)).random_raw(3)
        assert_array_equal(u, (raw >> np.uint64(11)) * 2.0**-53)

    def test_rep_seeds_distinct(self):
        seeds = {rep_seed(7, r) for r in range(10_000)}
        assert len(seeds) == 10_000

    def test_consistency_median(self):
        d = uniform(10)
        devs = [sup_dev(d, mle(sample(d, 10**5, rep_seed(3, r)))) for r in range(200)]
        assert np.median(devs) < 0.01

    def test_multinomial_moments(self):
        d = Distribution([0.2, 0.3, 0.5])
        n, reps = 50, 4000
        c = np.array([sample(d, n, rep_seed(11, r)).counts for r in range(reps)])
        se = np.sqrt(n * d.probs * (1 - d.probs) / reps)
        assert np.all(np.abs(c.mean(axis=0) - n * d.probs) < 4 * se)


class TestFunctionals:
    def test_sup_dev_examples(self):
        assert sup_dev(uniform(3), uniform(3)) == 0
        assert sup_dev([0.7, 0.3], [0.5, 0.5]) == pytest.approx(0.2)
        assert sup_dev([0.5, 0.5, 0.0], [0.4, 0.4, 0.2]) == pytest.approx(0.2)

    def test_sup_dev_pads(self):
        assert sup_dev([0.5, 0.5], [0.5, 0.3, 0.2]) == pytest.approx(0.2)

    @given(prob_vectors(3, 3), prob_vectors(3, 3), prob_vectors(3, 3))
    def test_sup_dev_metric(self, p, q, r):
        assert sup_dev(p, q) == sup_dev(q, p)
        assert sup_dev(p, p) == 0
        assert sup_dev(p, r) <= sup_dev(p, q) + sup_dev(q, r) + 1e-15

    def test_v_star_examples(self):
        assert v_star([1.0, 0.0]) == 0
        assert v_star([0.5, 0.5]) == 0.25

    def test_v_star_zipf_at_top(self):
        p = zipf(100, 1.1)
        scan = max(x * (1 - x) for x in p.probs)
        assert v_star(p) == scan == p.top * (1 - p.top)

    def test_V_star_examples(self):
        assert V_star([1.0]) == 0
        assert V_star([0.5, 0.5]) == pytest.approx(0.25 * math.log(3))
        assert V_star(uniform(8)) == pytest.approx(1 / 8 * 7 / 8 * math.log(9), rel=1e-14)

    def test_V_star_tie_order(self):
        # stable sort: equal masses keep their index order, result is deterministic
        assert V_star([0.25, 0.5, 0.25]) == V_star([0.5, 0.25, 0.25])

    def test_phi(self):
        assert phi(1.0) == 0
        assert phi(0.0) == 0
        assert phi(1 / math.e) == pytest.approx(1 / math.e)
        with pytest.raises(InvalidArgument):
            phi(1.5)

    @settings(max_examples=200)
    @given(prob_vectors(2, 50))
    def test_structural_inequalities(self, p):
        vs = v_star(p)
        assert V_star(p) <= phi(vs) + 1e-15
        assert V_star(p) <= vs * math.log(p.support_size + 1) + 1e-15

    @given(prob_vectors(1, 30))
    def test_v_star_at_largest_mass_when_below_half(self, p):
        if p.top <= 0.5:
            assert v_star(p) == pytest.approx(p.top * (1 - p.top), abs=1e-15)


class TestCsv:
    def test_distribution_round_trip(self, tmp_path):
        d = Distribution(zipf(30, 0.9).probs, tuple(f"s{i}" for i in range(30)))
        path = tmp_path / "d.csv"
        write_distribution_csv(d, path)
        assert read_distribution_csv(path) == d

    def test_counts_round_trip(self, tmp_path):
        c = CountVector([4, 0, 9])
        path = tmp_path / "c.csv"
        write_counts_csv(c, path, ["a", "b", "c"])
        back, labels = read_counts_csv(path)
        assert_array_equal(back.counts, c.counts)
        assert labels == ("a", "b", "c")

    def test_bad_row_has_line_number(self, tmp_path):
        path = tmp_path / "c.csv"
        path.write_text("symbol,count\na,3\nb,x\n", encoding="utf-8")
        with pytest.raises(InvalidArgument, match=":3:"):
            read_counts_csv(path)
