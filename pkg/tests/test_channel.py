import math

import numpy as np
import pytest
from scipy.integrate import quad

from owc_aloha import (
    CellGeometry,
    LedTransmitter,
    PhotoDetector,
    build_model,
    channel_gain,
    default_model,
    lambertian_order,
    radial_pdf,
    snr_cdf_closed_form,
    snr_of_gain,
    snr_pdf,
)


class TestLambertianOrder:
    def test_60_deg_is_exactly_one(self):
        assert lambertian_order(math.radians(60)) == pytest.approx(1.0, abs=1e-12)

    def test_45_deg_is_exactly_two(self):
        assert lambertian_order(math.radians(45)) == pytest.approx(2.0, abs=1e-12)

    def test_30_deg(self):
        # high-precision evaluation of -ln 2 / ln cos(pi/6)
        assert lambertian_order(math.radians(30)) == pytest.approx(4.818841679306418, rel=1e-12)

    @pytest.mark.parametrize("bad", [0.0, -0.1, math.pi / 2, 2.0])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            lambertian_order(bad)


class TestChannelGain:
    def test_center_is_gain_max(self):
        m = default_model()
        assert channel_gain(m, 0.0) == pytest.approx(m.gain_max, rel=1e-14)

    def test_reference_values(self):
        # independent single-expression evaluation of the same parameters
        m = default_model()
        x = 1e-4 * 2 * 0.4 / (2 * math.pi) * 1.0 * (1.5**2 / 1.0) * 2.5**2
        assert m.aggregate_factor == pytest.approx(x, rel=1e-13)
        assert m.aggregate_factor == pytest.approx(1.7904931097838e-4, rel=1e-10)
        assert channel_gain(m, 0.0) == pytest.approx(x / 2.5**4, rel=1e-13)
        assert channel_gain(m, 0.0) == pytest.approx(4.583662361047e-6, rel=1e-10)
        # note: x / (9 + 6.25)^2, i.e. 7.699e-7 (not 7.705e-7)
        assert channel_gain(m, 3.0) == pytest.approx(x / 15.25**2, rel=1e-13)
        assert channel_gain(m, 3.0) == pytest.approx(7.698976016270e-7, rel=1e-10)
        assert channel_gain(m, 3.0) == pytest.approx(m.gain_min, rel=1e-14)

    def test_strictly_decreasing_with_range(self):
        m = default_model()
        r = np.linspace(0.0, 3.0, 400)
        h = channel_gain(m, r)
        assert np.all(np.diff(h) < 0)
        assert h[0] == pytest.approx(m.gain_max) and h[-1] == pytest.approx(m.gain_min)

    def test_domain_errors(self):
        m = default_model()
        with pytest.raises(ValueError):
            channel_gain(m, -0.1)
        with pytest.raises(ValueError):
            channel_gain(m, 3.5)

    def test_fov_branch_zeroes_gain(self):
        # 30 deg FOV excludes the cell edge (incidence atan(3/2.5) = 50 deg)
        m = build_model(fov=math.radians(30))
        assert channel_gain(m, 3.0) == 0.0
        assert channel_gain(m, 0.0) > 0.0


class TestSnrOfGain:
    def test_zero(self):
        assert snr_of_gain(default_model(), 0.0) == 0.0

    def test_gain_max_maps_to_snr_max(self):
        m = default_model()
        assert snr_of_gain(m, m.gain_max) == pytest.approx(m.snr_max, rel=1e-14)

    def test_paper_power_params(self):
        m = default_model()
        assert m.power.snr_scale == pytest.approx(2.88e12, rel=1e-12)
        assert snr_of_gain(m, 4.584e-6) == pytest.approx(60.51760128, rel=1e-9)

    def test_negative_gain_rejected(self):
        with pytest.raises(ValueError):
            snr_of_gain(default_model(), -1e-6)


class TestRadialPdf:
    def test_boundary_and_center(self):
        cell = CellGeometry(radius=3.0, height=2.5)
        assert radial_pdf(cell, 3.0) == pytest.approx(2.0 / 3.0)
        assert radial_pdf(cell, 0.0) == 0.0
        assert radial_pdf(cell, 3.1) == 0.0

    def test_midpoint(self):
        cell = CellGeometry(radius=2.0, height=2.5)
        assert radial_pdf(cell, 1.0) == pytest.approx(0.5)

    def test_against_uniform_disk_histogram(self):
        # rejection-sampled uniform points in the disk, radial histogram
        rng = np.random.default_rng(2024)
        pts = rng.uniform(-1.0, 1.0, size=(4_000_000, 2))
        r = np.hypot(pts[:, 0], pts[:, 1])
        r = r[r <= 1.0] * 2.0            # uniform on a disk of radius 2
        cell = CellGeometry(radius=2.0, height=2.5)
        hist, edges = np.histogram(r, bins=40, range=(0.0, 2.0), density=True)
        centers = 0.5 * (edges[1:] + edges[:-1])
        assert np.max(np.abs(hist - radial_pdf(cell, centers))) < 0.01

    def test_normalizes(self):
        cell = CellGeometry(radius=3.0, height=2.5)
        val, _ = quad(lambda r: radial_pdf(cell, r), 0.0, 3.0)
        assert val == pytest.approx(1.0, abs=1e-12)


class TestSnrPdf:
    def test_outside_support_is_zero(self):
        m = default_model()
        assert snr_pdf(m, m.snr_min * 0.99) == 0.0
        assert snr_pdf(m, m.snr_max * 1.01) == 0.0

    def test_normalizes(self):
        m = default_model()
        val, _ = quad(lambda g: snr_pdf(m, g), m.snr_min, m.snr_max, limit=200)
        assert val == pytest.approx(1.0, abs=1e-6)

    def test_matches_histogram_of_sampled_chain(self):
        # gains from radially sampled users, squared into SNR
        m = default_model()
        rng = np.random.default_rng(7)
        r = m.cell.radius * np.sqrt(rng.random(1_000_000))
        g = snr_of_gain(m, channel_gain(m, r))
        hist, edges = np.histogram(g, bins=30, range=(m.snr_min, m.snr_max), density=True)
        centers = 0.5 * (edges[1:] + edges[:-1])
        # bin-averaged analytic density from CDF differences
        avg = np.diff(snr_cdf_closed_form(m, edges)) / np.diff(edges)
        peak = snr_pdf(m, m.snr_min)
        assert np.max(np.abs(hist - avg)) < 0.02 * peak


class TestSnrCdfClosedForm:
    def test_support_edges(self):
        m = default_model()
        assert snr_cdf_closed_form(m, m.snr_min) == pytest.approx(0.0, abs=1e-12)
        assert snr_cdf_closed_form(m, m.snr_max) == pytest.approx(1.0, abs=1e-12)

    def test_matches_quadrature_at_geometric_mean(self):
        m = default_model()
        g = math.sqrt(m.snr_min * m.snr_max)
        val, _ = quad(lambda x: snr_pdf(m, x), m.snr_min, g, limit=200, epsabs=1e-12)
        assert snr_cdf_closed_form(m, g) == pytest.approx(val, abs=1e-9)

    def test_matches_quadrature_at_random_points(self):
        m = default_model()
        rng = np.random.default_rng(5)
        gs = np.exp(rng.uniform(np.log(m.snr_min), np.log(m.snr_max), 100))
        for g in gs:
            val, _ = quad(lambda x: snr_pdf(m, x), m.snr_min, g, limit=200, epsabs=1e-12)
            assert abs(snr_cdf_closed_form(m, g) - val) < 1e-9

    def test_nondecreasing(self):
        m = default_model()
        gs = np.geomspace(m.snr_min * 0.5, m.snr_max * 2, 500)
        assert np.all(np.diff(snr_cdf_closed_form(m, gs)) >= 0)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            snr_cdf_closed_form(default_model(), 0.0)


class TestModelInvariants:
    def test_unit_consistency(self):
        base = default_model()
        double_noise = build_model(noise_psd=2e-21)
        assert double_noise.power.snr_scale == pytest.approx(base.power.snr_scale / 2)
        scaled_power = build_model(tx_power=3 * 30e-3)
        for gain in (1e-6, 4e-6):
            assert snr_of_gain(scaled_power, gain) == pytest.approx(
                9 * snr_of_gain(base, gain), rel=1e-12
            )

    def test_radius_monotonicity(self):
        base = build_model(radius=3.0)
        wider = build_model(radius=4.0)
        assert wider.gain_min < base.gain_min
        assert wider.snr_min < base.snr_min
        assert wider.gain_max == pytest.approx(base.gain_max)
        assert wider.snr_max == pytest.approx(base.snr_max)

    def test_derived_fields(self):
        m = default_model()
        assert m.power.noise_variance == pytest.approx(1e-21 * 200e3)
        assert m.snr_min == pytest.approx(m.power.snr_scale * m.gain_min**2, rel=1e-14)
        assert m.snr_max == pytest.approx(m.power.snr_scale * m.gain_max**2, rel=1e-14)
        assert 0 < m.gain_min < m.gain_max

    def test_type_validation(self):
        with pytest.raises(ValueError):
            LedTransmitter(semi_angle_half_power=2.0)
        with pytest.raises(ValueError):
            PhotoDetector(area=-1e-4, responsivity=0.4)
        with pytest.raises(ValueError):
            CellGeometry(radius=0.0, height=2.5)
