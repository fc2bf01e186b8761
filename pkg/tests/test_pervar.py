"""Single-variable distance rules for every measurement level."""

import numpy as np
import pytest

from gowermix import (
    NumericMethod,
    OrdinalScale,
    Scaling,
    Variant,
    compute_stats,
    dist_binary_asymmetric,
    dist_binary_symmetric,
    dist_nominal,
    dist_numeric,
    dist_ordinal,
    numeric_kernel,
)
from gowermix.dataset import midranks_by_code


class TestBinary:
    def test_symmetric_matching(self):
        assert dist_binary_symmetric(0, 0) == (0.0, 1)
        assert dist_binary_symmetric(1, 1) == (0.0, 1)
        assert dist_binary_symmetric(0, 1) == (1.0, 1)

    def test_symmetric_missing_skips(self):
        assert dist_binary_symmetric(None, 1) == (0.0, 0)
        assert dist_binary_symmetric(0, None) == (0.0, 0)

    def test_asymmetric_double_zero_is_uninformative(self):
        assert dist_binary_asymmetric(0, 0) == (0.0, 0)
        assert dist_binary_asymmetric("0", 0.0) == (0.0, 0)

    def test_asymmetric_other_pairs_match_symmetric(self):
        assert dist_binary_asymmetric(1, 1) == (0.0, 1)
        assert dist_binary_asymmetric(0, 1) == (1.0, 1)
        assert dist_binary_asymmetric(1, 0) == (1.0, 1)


class TestNominal:
    def test_matching(self):
        assert dist_nominal("a", "a") == (0.0, 1)
        assert dist_nominal("a", "b") == (1.0, 1)
        assert dist_nominal(None, "b") == (0.0, 0)


class TestOrdinal:
    RATIO = OrdinalScale(np.arange(4) / 3.0, 1.0)

    def test_ratio_scores(self):
        assert dist_ordinal(0, 3, self.RATIO) == (1.0, 1)
        assert dist_ordinal(0, 1, self.RATIO)[0] == pytest.approx(1 / 3)
        assert dist_ordinal(2, 2, self.RATIO) == (0.0, 1)

    def test_missing_skips(self):
        assert dist_ordinal(None, 2, self.RATIO) == (0.0, 0)

    def test_midrank_scale(self):
        # observed codes 0,0,1,3 of 4 -> midranks 1.5, 3, nan, 4
        mid = midranks_by_code(np.array([0, 0, 1, 3]), 4)
        scale = OrdinalScale(mid, float(np.nanmax(mid) - np.nanmin(mid)))
        d, delta = dist_ordinal(0, 3, scale)
        assert delta == 1
        assert d == pytest.approx((4.0 - 1.5) / 2.5)

    def test_midrank_unseen_category_skips(self):
        mid = midranks_by_code(np.array([0, 0, 1, 3]), 4)
        scale = OrdinalScale(mid, 2.5)
        assert dist_ordinal(2, 0, scale) == (0.0, 0)

    def test_zero_spread_skips(self):
        mid = midranks_by_code(np.array([1, 1, 1]), 4)
        scale = OrdinalScale(mid, 0.0)
        assert dist_ordinal(1, 1, scale) == (0.0, 0)


AGES = compute_stats(np.array([15.0, 36.0, 58.0, 78.0, 100.0]))
POOL = compute_stats(np.array([0.0, 2.0, 10.0]))  # range 10, IQR 5


class TestNumericStandard:
    def test_published_age_grid(self):
        # range 85 gives 21/85, 43/85, 63/85, 85/85
        m = NumericMethod.standard()
        pairs = [(15, 15, 0.0), (15, 36, 0.2471), (15, 58, 0.5059), (15, 78, 0.7412), (15, 100, 1.0)]
        for x, y, want in pairs:
            d, delta = dist_numeric(x, y, m, AGES)
            assert delta == 1
            assert round(d, 4) == want

    def test_clamped_at_one(self):
        small = compute_stats(np.array([0.0, 2.0]))
        assert dist_numeric(0.0, 10.0, NumericMethod.standard(), small) == (1.0, 1)

    def test_degenerate_range(self):
        flat = compute_stats(np.array([4.0, 4.0]))
        m = NumericMethod.standard()
        assert dist_numeric(4.0, 4.0, m, flat) == (0.0, 1)
        assert dist_numeric(4.0, 5.0, m, flat) == (1.0, 1)

    def test_missing_skips(self):
        m = NumericMethod.standard()
        assert dist_numeric(None, 1.0, m, POOL) == (0.0, 0)
        assert dist_numeric(float("nan"), 1.0, m, POOL) == (0.0, 0)


class TestNumericIqrCapped:
    M = NumericMethod.iqr_capped()

    def test_scales_by_iqr_below_it(self):
        assert dist_numeric(0.0, 2.0, self.M, POOL) == (0.4, 1)

    def test_caps_from_iqr_on(self):
        assert dist_numeric(0.0, 5.0, self.M, POOL) == (1.0, 1)  # boundary a == IQR
        assert dist_numeric(0.0, 8.0, self.M, POOL) == (1.0, 1)
        assert dist_numeric(0.0, 4.9, self.M, POOL)[0] == pytest.approx(0.98)

    def test_degenerate_iqr(self):
        flat = compute_stats(np.array([1.0, 1.0, 1.0]))
        assert dist_numeric(1.0, 1.0, self.M, flat) == (0.0, 1)
        assert dist_numeric(1.0, 3.0, self.M, flat) == (1.0, 1)


class TestNumericKdeWindow:
    M = NumericMethod.kde()  # c = 1.06; POOL bandwidth ~ 3.175

    def test_zero_inside_bandwidth(self):
        assert dist_numeric(0.0, 2.0, self.M, POOL) == (0.0, 1)
        assert dist_numeric(0.0, 3.1, self.M, POOL) == (0.0, 1)

    def test_linear_between_bandwidth_and_range(self):
        assert dist_numeric(2.0, 10.0, self.M, POOL)[0] == pytest.approx(0.8)

    def test_one_from_range_on(self):
        assert dist_numeric(0.0, 10.0, self.M, POOL) == (1.0, 1)
        assert dist_numeric(0.0, 11.0, self.M, POOL) == (1.0, 1)

    def test_bandwidth_override(self):
        assert dist_numeric(0.0, 2.0, self.M, POOL, h=1.0)[0] == pytest.approx(0.2)

    def test_iqr_scaled_window(self):
        m = NumericMethod.kde(scaling=Scaling.IQR)
        # divisor 5, bandwidth unchanged: a = 4 falls between
        assert dist_numeric(0.0, 4.0, m, POOL)[0] == pytest.approx(0.8)


class TestNumericKnnWindow:
    def test_directional_dead_zone(self):
        m = NumericMethod.knn(k=1)
        # thr(2) = 2 but thr(10) = 8, so the pair is asymmetric
        assert dist_numeric(2.0, 10.0, m, POOL)[0] == pytest.approx(0.8)
        assert dist_numeric(10.0, 2.0, m, POOL) == (0.0, 1)

    def test_symmetrised_takes_the_wider_zone(self):
        m = NumericMethod.knn(k=1, symmetric=True)
        assert dist_numeric(2.0, 10.0, m, POOL) == (0.0, 1)
        assert dist_numeric(10.0, 2.0, m, POOL) == (0.0, 1)

    def test_default_k_from_sample_size(self):
        four = compute_stats(np.array([1.0, 2.0, 4.0, 8.0]))
        m = NumericMethod.knn()  # k defaults to round(sqrt(4)) = 2
        assert dist_numeric(1.0, 4.0, m, four) == (0.0, 1)  # thr(1) covers 2 and 4

    def test_k_override_argument(self):
        four = compute_stats(np.array([1.0, 2.0, 4.0, 8.0]))
        m = NumericMethod.knn(k=3)
        d_k3 = dist_numeric(1.0, 4.0, m, four)
        d_k1 = dist_numeric(1.0, 4.0, m, four, k=1)
        assert d_k3 == (0.0, 1)
        assert d_k1[0] > 0.0

    def test_zero_wins_over_cap_when_zone_exceeds_divisor(self):
        st = compute_stats(np.array([0.0, 1.0, 2.0, 10.0]))  # IQR 3.25
        m = NumericMethod.knn(k=3, scaling=Scaling.IQR)
        # thr(0) = 10 > IQR, so a = 5 still sits in the dead zone
        assert dist_numeric(0.0, 5.0, m, st) == (0.0, 1)


class TestNumericMethodValidation:
    def test_standard_is_range_only(self):
        with pytest.raises(ValueError):
            NumericMethod(Variant.STANDARD, Scaling.IQR)

    def test_iqr_capped_is_iqr_only(self):
        with pytest.raises(ValueError):
            NumericMethod(Variant.IQR_CAPPED, Scaling.RANGE)

    def test_bandwidth_factor_positive(self):
        with pytest.raises(ValueError):
            NumericMethod.kde(c=0.0)

    def test_k_at_least_one(self):
        with pytest.raises(ValueError):
            NumericMethod.knn(k=0)


class TestNumericKernelVector:
    def test_standard_vector(self):
        a = np.array([0.0, 2.0, 10.0, 15.0])
        out = numeric_kernel(a, Variant.STANDARD, 10.0)
        assert out.tolist() == [0.0, 0.2, 1.0, 1.0]

    def test_degenerate_divisor_vector(self):
        a = np.array([0.0, 3.0])
        assert numeric_kernel(a, Variant.STANDARD, 0.0).tolist() == [0.0, 1.0]
        assert numeric_kernel(a, Variant.IQR_CAPPED, 0.0).tolist() == [0.0, 1.0]
        assert numeric_kernel(a, Variant.KDE_WINDOW, 0.0, h=0.0).tolist() == [0.0, 1.0]

    def test_window_with_per_pair_thresholds(self):
        a = np.array([1.0, 5.0, 9.0])
        thr = np.array([2.0, 2.0, 2.0])
        out = numeric_kernel(a, Variant.KNN_WINDOW, 10.0, thr=thr)
        assert out.tolist() == [0.0, 0.5, 0.9]

    def test_matches_scalar_rule(self):
        a = np.array([0.0, 2.0, 3.2, 5.0, 9.0, 10.0, 12.0])
        out = numeric_kernel(a, Variant.KDE_WINDOW, 10.0, h=3.2)
        assert out.tolist() == [0.0, 0.0, 0.0, 0.5, 0.9, 1.0, 1.0]
