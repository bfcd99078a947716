import math

import numpy as np
import pytest

from calscan.scores import (bj_score, calibrated_score, cbj_score, chc_score,
                            cks_score, kl_one_sided, kl_one_sided_array)


class TestKLOneSided:
    def test_equal_is_zero(self):
        assert kl_one_sided(0.5, 0.5) == 0.0

    def test_below_reference_is_zero(self):
        assert kl_one_sided(0.3, 0.5) == 0.0

    def test_anchor_289(self):
        # 100 * KL(0.75, 0.01) ~ 289
        assert kl_one_sided(0.75, 0.01) == pytest.approx(2.8940, abs=1e-3)

    def test_anchor_447(self):
        # 900 * KL(0.744, 0.699) = 4.47
        assert kl_one_sided(0.744, 0.699) == pytest.approx(0.004966, abs=1e-4)

    def test_reference_bounds(self):
        with pytest.raises(ValueError):
            kl_one_sided(0.5, 0.0)
        with pytest.raises(ValueError):
            kl_one_sided(0.5, 1.0)

    def test_extremes(self):
        assert kl_one_sided(1.0, 0.5) == pytest.approx(math.log(2))
        assert kl_one_sided(0.0, 0.5) == 0.0

    def test_nonnegative_and_monotone(self):
        b = 0.2
        prev = 0.0
        for a in np.linspace(0.0, 1.0, 101):
            v = kl_one_sided(float(a), b)
            assert v >= 0.0
            if a <= b:
                assert v == 0.0
            else:
                assert v > prev
                prev = v

    def test_array_matches_scalar(self):
        rng = np.random.default_rng(0)
        a = rng.random(200)
        b = rng.uniform(0.01, 0.99, 200)
        vec = kl_one_sided_array(a, b)
        for i in range(200):
            assert vec[i] == pytest.approx(kl_one_sided(float(a[i]), float(b[i])), abs=1e-12)

    def test_array_degenerate_reference(self):
        assert kl_one_sided_array(np.array([0.5]), np.array([1.0]))[0] == 0.0


class TestBJScore:
    def test_anchor_289(self):
        assert bj_score(0.01, 75, 100) == pytest.approx(289, abs=1)

    def test_anchor_1123(self):
        assert bj_score(0.09, 670, 900) == pytest.approx(1123, abs=30)

    def test_zero_at_expectation(self):
        assert bj_score(0.05, 5, 100) == 0.0

    def test_matches_binomial_glr(self):
        # BJ equals the binomial generalized log-likelihood ratio evaluated at
        # the MLE beta = k/n: k*ln(beta/alpha) + (n-k)*ln((1-beta)/(1-alpha))
        rng = np.random.default_rng(1)
        for _ in range(300):
            n = int(rng.integers(2, 500))
            k = int(rng.integers(0, n + 1))
            alpha = float(rng.uniform(0.001, 0.5))
            beta = k / n
            if beta <= alpha:
                expected = 0.0
            else:
                expected = 0.0
                if k > 0:
                    expected += k * math.log(beta / alpha)
                if k < n:
                    expected += (n - k) * math.log((1 - beta) / (1 - alpha))
            assert bj_score(alpha, k, n) == pytest.approx(expected, abs=1e-9)


class TestCalibratedScores:
    def test_cbj_anchor_447(self):
        assert cbj_score(0.09, 670, 900, 0.699) == pytest.approx(4.47, abs=0.3)

    def test_cbj_anchor_6226(self):
        assert cbj_score(0.01, 148, 202, 0.347) == pytest.approx(62.26, abs=1.0)

    def test_cbj_degenerate_reference(self):
        assert cbj_score(0.05, 50, 100, 1.0) == 0.0

    def test_cbj_equals_bj_at_alpha(self):
        rng = np.random.default_rng(2)
        for _ in range(200):
            n = int(rng.integers(1, 300))
            k = int(rng.integers(0, n + 1))
            alpha = float(rng.uniform(0.001, 0.3))
            assert cbj_score(alpha, k, n, alpha) == bj_score(alpha, k, n)

    def test_chc_values(self):
        assert chc_score(0.05, 5, 100, 0.05) == 0.0
        assert chc_score(0.01, 20, 100, 0.10) == pytest.approx(10 / 3)
        assert chc_score(0.01, 5, 100, 0.10) == 0.0

    def test_chc_rejects_degenerate(self):
        with pytest.raises(ValueError):
            chc_score(0.01, 5, 10, 1.0)
        with pytest.raises(ValueError):
            chc_score(0.01, 5, 10, 0.0)

    def test_cks_values(self):
        assert cks_score(0.05, 5, 100, 0.05) == 0.0
        assert cks_score(0.01, 20, 100, 0.10) == pytest.approx(1.0)
        assert cks_score(0.01, 5, 100, 0.10) == 0.0

    @pytest.mark.parametrize("fn,ref", [(cbj_score, 0.2), (chc_score, 0.2), (cks_score, 0.2)])
    def test_monotone_in_count(self, fn, ref):
        n = 50
        scores = [fn(0.05, k, n, ref) for k in range(n + 1)]
        assert all(b >= a for a, b in zip(scores, scores[1:]))

    def test_dispatch_clamps_reference(self):
        # table value below alpha is clamped up to alpha before scoring
        assert calibrated_score("cbj", 0.05, 20, 100, 0.01) == \
            pytest.approx(cbj_score(0.05, 20, 100, 0.05))
        assert calibrated_score("chc", 0.05, 20, 100, 1.0) == 0.0
        with pytest.raises(ValueError):
            calibrated_score("nope", 0.05, 1, 10, 0.05)
