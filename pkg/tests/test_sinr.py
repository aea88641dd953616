import math

import numpy as np
import pytest

from owc_aloha import (
    McConfig,
    QuadratureSpec,
    TabulatedDistribution,
    build_model,
    conditional_sinr_cdf,
    conditional_sinr_pdf,
    default_model,
    interference_cf,
    interference_pdf,
    interference_pdf_convolution,
    single_interferer_cf,
    snr_cdf_closed_form,
    snr_pdf,
)
from owc_aloha.errors import QuadratureError
from owc_aloha.montecarlo import _draw_snr
from owc_aloha.sinr import _loggrid_interference_pdf


@pytest.fixture(scope="module")
def model():
    return default_model()


@pytest.fixture(scope="module")
def spec():
    return QuadratureSpec()


def _cf_gamma_oracle(model, t):
    """Closed form of the single-interferer CF through the upper incomplete
    gamma function, evaluated in arbitrary precision.

    For the power-law density C g^(-(k+1)/k) on [lo, hi] (k = m + 3),

        phi(t) = C (-jt)^(1/k) [Gamma(-1/k, -jt lo) - Gamma(-1/k, -jt hi)].

    The (-jt)^(1/k) factor is the Jacobian of u = -jt g; without it the
    bracket does not reproduce the defining integral.
    """
    import mpmath as mp

    mp.mp.dps = 40
    k = mp.mpf(model.led.lambertian_order) + 3
    a = mp.mpf(model.power.snr_scale) * mp.mpf(model.aggregate_factor) ** 2
    lo = mp.mpf(model.snr_min)
    hi = mp.mpf(model.snr_max)
    c = a ** (1 / k) / (mp.mpf(model.cell.radius) ** 2 * k)
    s = -1 / k
    val = c * (-1j * mp.mpf(t)) ** (-s) * (
        mp.gammainc(s, -1j * mp.mpf(t) * lo) - mp.gammainc(s, -1j * mp.mpf(t) * hi)
    )
    return complex(val)


class TestQuadratureSpec:
    def test_defaults_valid(self):
        QuadratureSpec()

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"cf_nodes": 8},
            {"inversion_nodes": 4},
            {"lambda_nodes": 0},
            {"inversion_t_max": 0.0},
            {"rel_tol": 0.0},
            {"rel_tol": 0.5},
        ],
    )
    def test_invariants_enforced(self, kwargs):
        with pytest.raises(ValueError):
            QuadratureSpec(**kwargs)


class TestSingleInterfererCf:
    def test_normalization_at_zero(self, model, spec):
        assert abs(single_interferer_cf(model, 0.0, spec) - 1.0) < 1e-12

    def test_conjugate_symmetry(self, model, spec):
        for t in (0.3, 2.0, 17.0):
            assert single_interferer_cf(model, -t, spec) == pytest.approx(
                single_interferer_cf(model, t, spec).conjugate(), abs=1e-12
            )

    def test_modulus_bounded(self, model, spec):
        for t in np.geomspace(1e-3, 50.0, 25):
            assert abs(single_interferer_cf(model, float(t), spec)) <= 1.0 + 1e-9

    def test_incomplete_gamma_closed_form(self, model, spec):
        for t in (1e-2 / model.snr_min, 1.0 / model.snr_min, 5.0):
            got = single_interferer_cf(model, t, spec)
            want = _cf_gamma_oracle(model, t)
            assert abs(got - want) / abs(want) < 1e-6

    def test_budget_exhaustion_raises(self, model):
        tight = QuadratureSpec(cf_nodes=64, rel_tol=1e-6)
        with pytest.raises(QuadratureError) as err:
            single_interferer_cf(model, 500.0, tight)
        assert err.value.error_estimate is not None


class TestInterferenceCf:
    def test_empty_product(self, model, spec):
        assert interference_cf(model, 3.7, 0, spec) == 1.0 + 0.0j

    def test_zero_t(self, model, spec):
        assert abs(interference_cf(model, 0.0, 4, spec) - 1.0) < 1e-11

    def test_square(self, model, spec):
        phi = single_interferer_cf(model, 1.3, spec)
        assert interference_cf(model, 1.3, 2, spec) == pytest.approx(phi * phi, abs=1e-12)


class TestInterferencePdf:
    def test_roundtrip_recovers_snr_density(self, model, spec):
        tab = interference_pdf(model, 1, spec)
        exact = snr_pdf(model, tab.grid)
        assert np.max(np.abs(tab.pdf_values - exact)) < 1e-3 * exact.max()

    def test_two_interferers_match_convolution(self, model, spec):
        inv = interference_pdf(model, 2, spec)
        conv = interference_pdf_convolution(model, 2, spec)
        assert np.max(np.abs(inv.pdf_values - conv.pdf_at(inv.grid))) < 1e-3 * inv.pdf_values.max()

    def test_mass(self, model, spec):
        tab = interference_pdf(model, 3, spec)
        assert abs(tab.total_mass() - 1.0) <= 1e-3

    def test_support(self, model, spec):
        tab = interference_pdf(model, 2, spec)
        assert tab.support_lo == pytest.approx(2 * model.snr_min)
        assert tab.support_hi == pytest.approx(2 * model.snr_max)

    def test_truncation_budget_failure(self, model):
        bad = QuadratureSpec(inversion_t_max=5.0)
        with pytest.raises(QuadratureError, match="renormalization"):
            interference_pdf(model, 1, bad)

    def test_node_budget_failure(self, model):
        bad = QuadratureSpec(inversion_nodes=64)
        with pytest.raises(QuadratureError, match="inversion_nodes"):
            interference_pdf(model, 1, bad)


class TestInterferencePdfConvolution:
    def test_single_is_resampled_snr_pdf(self, model, spec):
        tab = interference_pdf_convolution(model, 1, spec)
        assert np.allclose(tab.pdf_values, snr_pdf(model, tab.grid))

    def test_coarse_grid_raises(self, model):
        with pytest.raises(QuadratureError, match="too coarse"):
            interference_pdf_convolution(model, 2, QuadratureSpec(cf_nodes=16))

    def test_support_of_pair_sum(self, model, spec):
        tab = interference_pdf_convolution(model, 2, spec)
        assert tab.grid[0] == pytest.approx(2 * model.snr_min)
        assert tab.grid[-1] == pytest.approx(2 * model.snr_max)

    def test_mean_additivity(self, model, spec):
        from scipy.integrate import quad

        single_mean, _ = quad(lambda g: g * snr_pdf(model, g),
                              model.snr_min, model.snr_max, limit=200)
        tab = interference_pdf_convolution(model, 2, spec)
        assert tab.mean() == pytest.approx(2 * single_mean, rel=1e-4)


class TestPathAgreement:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_cdf_sup_distance(self, model, spec, n):
        inv = interference_pdf(model, n, spec)
        conv = interference_pdf_convolution(model, n, spec)
        assert inv.sup_cdf_distance(conv) < 1e-3

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_loggrid_agrees_with_inversion(self, model, spec, n):
        lg = _loggrid_interference_pdf(model, n)
        inv = interference_pdf(model, n, spec)
        assert lg.sup_cdf_distance(inv) < 1e-3


class TestConditionalSinrPdf:
    def test_single_user_is_snr_density(self, model, spec):
        tab = conditional_sinr_pdf(model, 1, spec)
        assert np.allclose(tab.pdf_values, snr_pdf(model, tab.grid))
        assert tab.support_lo == pytest.approx(model.snr_min)
        assert tab.support_hi == pytest.approx(model.snr_max)

    def test_mass(self, model, spec):
        for n in (2, 3):
            assert abs(conditional_sinr_pdf(model, n, spec).total_mass() - 1.0) <= 1e-3

    def test_sinr_cannot_exceed_interference_free_snr(self, model, spec):
        tab = conditional_sinr_pdf(model, 2, spec)
        assert tab.support_hi <= model.snr_max
        assert tab.pdf_at(model.snr_max * 1.0001) == 0.0
        # upper support edge is snr_max / (snr_min + 1)
        assert tab.support_hi == pytest.approx(model.snr_max / (model.snr_min + 1.0))

    def test_two_active_against_mc_histogram(self, model, spec):
        tab = conditional_sinr_pdf(model, 2, spec)
        rng = McConfig(trials=1_000_000, seed=99).generator()
        g = _draw_snr(model, rng, (1_000_000, 2))
        sinr = np.sort(g[:, 1] / (g[:, 0] + 1.0))
        xs = tab.grid[:: len(tab.grid) // 256]
        emp = np.searchsorted(sinr, xs, side="right") / sinr.size
        assert np.max(np.abs(tab.cdf_at(xs) - emp)) < 0.01


class TestConditionalSinrCdf:
    def test_full_support_is_one(self, model, spec):
        assert conditional_sinr_cdf(model, 1, model.snr_max * 1.01, spec) == 1.0

    def test_below_support_is_zero(self, model, spec):
        assert conditional_sinr_cdf(model, 1, model.snr_min * 0.99, spec) == 0.0
        lam_hi = model.snr_max + 1.0
        assert conditional_sinr_cdf(model, 2, model.snr_min / lam_hi * 0.9, spec) == 0.0

    def test_single_user_matches_closed_form(self, model, spec):
        for g in np.geomspace(model.snr_min, model.snr_max, 17):
            got = conditional_sinr_cdf(model, 1, float(g), spec)
            assert abs(got - snr_cdf_closed_form(model, g)) < 1e-6

    def test_monotone_in_threshold(self, model, spec):
        gs = np.geomspace(0.05, 60.0, 40)
        vals = [conditional_sinr_cdf(model, 2, float(g), spec) for g in gs]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_stochastic_dominance_in_active_count(self, model, spec):
        gs = np.geomspace(0.03, 60.0, 60)
        prev = None
        for n in (1, 2, 3, 4):
            cur = np.array([conditional_sinr_cdf(model, n, float(g), spec) for g in gs])
            if prev is not None:
                assert np.min(cur - prev) > -1e-6
            prev = cur

    def test_rejects_bad_arguments(self, model, spec):
        with pytest.raises(ValueError):
            conditional_sinr_cdf(model, 0, 1.0, spec)
        with pytest.raises(ValueError):
            conditional_sinr_cdf(model, 2, -1.0, spec)


class TestWideSupportModels:
    def test_conditional_cdf_against_mc_narrow_beam(self):
        # 20 deg semi-angle stretches the SNR support over ~9 decades; the
        # log-grid path must still track the Monte Carlo oracle
        m = build_model(semi_angle=math.radians(20))
        assert m.snr_max / m.snr_min > 1e4
        gth = 2.0
        for n_act in (2, 4):
            ana = conditional_sinr_cdf(m, n_act, gth)
            rng = McConfig(trials=400_000, seed=31, stream_id=n_act).generator()
            g = _draw_snr(m, rng, (400_000, n_act))
            ref = g[:, -1]
            emp = np.mean(ref < gth * (g.sum(axis=1) - ref + 1.0))
            assert abs(ana - emp) < 0.005


def test_produced_distributions_satisfy_invariants(model, spec):
    # construction re-validates; exercise a spread of shapes
    tabs = [
        interference_pdf(model, 1, spec),
        interference_pdf(model, 3, spec),
        interference_pdf_convolution(model, 2, spec),
        conditional_sinr_pdf(model, 2, spec),
        _loggrid_interference_pdf(model, 3),
    ]
    for tab in tabs:
        assert isinstance(tab, TabulatedDistribution)
        tab.validate()
        assert np.all(tab.pdf_values >= 0)
        assert abs(tab.total_mass() - 1.0) <= 1e-3
