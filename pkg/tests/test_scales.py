import random

import pytest

from hanstream.errors import DegenerateDomain
from hanstream.scales import Band, LinearScale, band_scale


class TestLinearScale:
    def test_midpoint(self):
        s = LinearScale(0, 10, 0, 1)
        assert s(5) == pytest.approx(0.5)

    def test_inverted_axis(self):
        s = LinearScale(0, 100, 1, 0)
        assert s(25) == pytest.approx(0.75)

    def test_round_trip(self):
        s = LinearScale(0, 10, 0, 1)
        assert s.invert(s(7.3)) == pytest.approx(7.3, abs=1e-12)

    def test_no_clamping(self):
        s = LinearScale(0, 1, 0, 1)
        assert s(2.0) == pytest.approx(2.0)

    def test_degenerate_domain(self):
        with pytest.raises(DegenerateDomain):
            LinearScale(3, 3, 0, 1)

    def test_round_trip_property(self):
        rng = random.Random(9)
        for _ in range(500):
            d0 = rng.uniform(-100, 100)
            d1 = d0 + rng.uniform(0.01, 200) * rng.choice((1, -1))
            r0, r1 = rng.uniform(-5, 5), rng.uniform(5.01, 10)
            s = LinearScale(d0, d1, r0, r1)
            x = rng.uniform(min(d0, d1), max(d0, d1))
            assert abs(s.invert(s(x)) - x) <= 1e-9 * abs(d1 - d0)


class TestBandScale:
    def test_single_full_width_band(self):
        bands = band_scale(["only"], 1.0, 0.0)
        assert bands["only"] == Band(offset=0.0, width=1.0)

    def test_three_bands_padded(self):
        # step 1/3, width 0.3, offset of index 1 = 0.35 (independent calculator)
        bands = band_scale(["a", "b", "c"], 1.0, 0.1)
        assert bands["b"].offset == pytest.approx(0.35)
        assert bands["b"].width == pytest.approx(0.3)
        assert bands["a"].offset == pytest.approx(1.0 / 60.0)

    def test_bands_disjoint_and_bounded(self):
        rng = random.Random(13)
        for _ in range(100):
            n = rng.randint(1, 12)
            p = rng.uniform(0.0, 0.95)
            w = rng.uniform(0.1, 3.0)
            cats = [f"c{i}" for i in range(n)]
            bands = band_scale(cats, w, p)
            prev_end = -1e-12
            for cat in cats:
                b = bands[cat]
                assert b.offset >= prev_end - 1e-12
                prev_end = b.offset + b.width
            assert prev_end <= w + 1e-12

    def test_empty_categories(self):
        with pytest.raises(DegenerateDomain):
            band_scale([], 1.0, 0.1)

    def test_padding_validation(self):
        with pytest.raises(ValueError):
            band_scale(["a"], 1.0, 1.0)
