#include <catch_amalgamated.hpp>

#include <cmath>

#include "thzisac/capacity.hpp"
#include "thzisac/rng.hpp"

using namespace thzisac;

namespace
{
    ArrayConfig baseline_cfg()
    {
        return ArrayConfig{};
    }

    HardwareProfile baseline_hw()
    {
        HardwareProfile hw;
        hw.gamma_pa = std::pow(10.0, -2.2);
        hw.adc_bits = 7;
        hw.irr_db = 20.0;
        hw.ps_bits = 4;
        hw.diff_jitter_s = 50e-15;
        hw.jitter_s = 50e-15;
        return hw;
    }

    LinkOperatingPoint baseline_op(double snr0, DistortionMode mode)
    {
        const ArrayConfig cfg = baseline_cfg();
        const HardwareProfile hw = baseline_hw();
        LinkOperatingPoint op;
        op.snr0 = snr0;
        op.gain = gain_breakdown(cfg, hw);
        op.budget = with_total(distortion_budget(hw, cfg.bandwidth_hz / 4.0), 0.006);
        op.sigma_phi_res = 0.01;
        op.mode = mode;
        return op;
    }
}

TEST_CASE("saturation ceiling")
{
    DistortionBudget b;
    b.gamma_total = 0.006;
    CHECK(c_sat(b, 0.01) == Catch::Approx(7.375111613178515).epsilon(1e-12));
    b.gamma_total = 0.17;
    CHECK(c_sat(b, 0.01) == Catch::Approx(2.770580130910449).epsilon(1e-12));
    // More residual phase noise lowers the ceiling.
    CHECK(c_sat(b, 0.1) < c_sat(b, 0.01));
    CHECK_THROWS_AS(c_sat(DistortionBudget{}, 0.01), ZeroDistortion);
}

TEST_CASE("critical SNR in both distortion modes")
{
    const LinkOperatingPoint op = baseline_op(1.0, DistortionMode::directional);
    const double unc = snr_crit(op.gain, op.budget, DistortionMode::uncorrelated);
    const double dir = snr_crit(op.gain, op.budget, DistortionMode::directional);

    CHECK(unc == Catch::Approx(0.14200450592691172).epsilon(1e-9));
    CHECK(linear_to_db(unc) == Catch::Approx(-8.476978748553503).epsilon(1e-9));
    CHECK(dir == Catch::Approx(581.6504562766304).epsilon(1e-9));
    CHECK(linear_to_db(dir) == Catch::Approx(27.64662073112424).epsilon(1e-9));

    // The two modes differ by exactly the ideal array gain.
    CHECK(unc / dir == Catch::Approx(1.0 / 4096.0).epsilon(1e-12));

    CHECK_THROWS_AS(snr_crit(op.gain, DistortionBudget{}, DistortionMode::directional),
                    ZeroDistortion);
}

TEST_CASE("spectral efficiency saturates at the ceiling")
{
    const double ceiling = c_sat(baseline_op(1.0, DistortionMode::directional).budget, 0.01);

    const double c4 = c_exact(baseline_op(1e4, DistortionMode::directional), baseline_cfg());
    const double c6 = c_exact(baseline_op(1e6, DistortionMode::directional), baseline_cfg());
    const double c8 = c_exact(baseline_op(1e8, DistortionMode::directional), baseline_cfg());

    CHECK(c4 < c6);
    CHECK(c6 < c8);
    CHECK(c8 < ceiling);
    // Per-frequency SINR tends to exp(-sigma)/gamma wherever the squint gain
    // is nonzero, so the band average closes on the ceiling.
    CHECK(ceiling - c8 < 0.02 * ceiling);

    // The Jensen bound saturates at the same ceiling from above the exact curve.
    const double j8 = c_jensen(baseline_op(1e8, DistortionMode::directional), baseline_cfg());
    CHECK(j8 >= c8);
    CHECK(j8 <= ceiling + 1e-9);
}

TEST_CASE("band-average bound dominates the exact average")
{
    // Property check across random operating points (no sideband comb: with a
    // comb the per-frequency denominator varies and the ordering argument
    // does not apply).
    SplitMix64 rng = make_stream(0xC0FFEE, 7);
    int idx = 0;
    for (int trial = 0; trial < 60; ++trial) {
        ArrayConfig cfg;
        cfg.n_tx = 16 << (trial % 3);
        cfg.n_rx = cfg.n_tx;
        cfg.steer_angle_rad = (rng.uniform(idx++) - 0.5) * 2.8;
        cfg.bandwidth_hz = (0.02 + 0.13 * rng.uniform(idx++)) * cfg.carrier_hz;

        HardwareProfile hw = baseline_hw();
        hw.gamma_pa = 1e-3 * std::pow(10.0, 2.0 * rng.uniform(idx++));

        LinkOperatingPoint op;
        op.snr0 = 1e-3 * std::pow(10.0, 6.0 * rng.uniform(idx++));
        op.gain = gain_breakdown(cfg, hw);
        op.budget = distortion_budget(hw, cfg.bandwidth_hz / 4.0);
        op.sigma_phi_res = 0.05 * rng.uniform(idx++);
        op.mode = (trial % 2 == 0) ? DistortionMode::directional
                                   : DistortionMode::uncorrelated;

        const double ce = c_exact(op, cfg);
        const double cj = c_jensen(op, cfg);
        CHECK(cj >= ce - 1e-9);
    }
}

TEST_CASE("sideband comb lowers both capacity estimates")
{
    const ArrayConfig cfg = baseline_cfg();
    LinkOperatingPoint clean = baseline_op(10.0, DistortionMode::directional);
    LinkOperatingPoint comb = clean;
    comb.rsm.symbol_rate_hz = 2e9;
    comb.rsm.total_power_ratio = 0.05;
    comb.rsm.line_width_hz = 2e7;
    comb.rsm.n_harmonics = 3;

    CHECK(c_exact(comb, cfg) < c_exact(clean, cfg));
    CHECK(c_jensen(comb, cfg) < c_jensen(clean, cfg));
}

TEST_CASE("second-order gap estimate tracks squint spread")
{
    const ArrayConfig wide = baseline_cfg();
    ArrayConfig narrow = wide;
    narrow.bandwidth_hz = 2e9;

    const LinkOperatingPoint op = baseline_op(1.0, DistortionMode::directional);
    LinkOperatingPoint op_n = op;
    op_n.gain = gain_breakdown(narrow, baseline_hw());

    const double g_wide = jensen_gap_taylor(op, wide);
    const double g_narrow = jensen_gap_taylor(op_n, narrow);
    CHECK(g_wide > 0.0);
    CHECK(g_narrow >= 0.0);
    CHECK(g_narrow < g_wide);
}

TEST_CASE("combined capacity report is self-consistent")
{
    const ArrayConfig cfg = baseline_cfg();
    const LinkOperatingPoint op = baseline_op(5.0, DistortionMode::directional);
    const CapacityResult r = compute_capacity(op, cfg);
    CHECK(r.c_exact == Catch::Approx(c_exact(op, cfg)).epsilon(1e-12));
    CHECK(r.c_jensen == Catch::Approx(c_jensen(op, cfg)).epsilon(1e-12));
    CHECK(r.jensen_gap == Catch::Approx(r.c_jensen - r.c_exact).margin(1e-12));
    CHECK(r.jensen_gap >= -1e-12);
    CHECK(r.c_sat == Catch::Approx(7.375111613178515).epsilon(1e-12));

    LinkOperatingPoint bad = op;
    bad.snr0 = 0.0;
    CHECK_THROWS_AS(c_exact(bad, cfg), std::invalid_argument);
}
