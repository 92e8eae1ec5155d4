#include <catch_amalgamated.hpp>

#include <cmath>

#include "thzisac/montecarlo.hpp"
#include "thzisac/stats.hpp"

using namespace thzisac;

TEST_CASE("sample statistics and power-law fits")
{
    const SampleStats s = sample_stats({1.0, 2.0, 3.0, 4.0});
    CHECK(s.n == 4);
    CHECK(s.mean == Catch::Approx(2.5));
    CHECK(s.var == Catch::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(s.std_err == Catch::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-12));
    CHECK_THROWS_AS(sample_stats({1.0}), std::invalid_argument);

    const FitResult f = slope_fit({0.0, 1.0, 2.0}, {1.0, 3.0, 5.0});
    CHECK(f.slope == Catch::Approx(2.0).epsilon(1e-13));
    CHECK(f.intercept == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(f.r_squared == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(slope_fit({1.0, 1.0}, {0.0, 5.0}), DegenerateFit);
    CHECK_THROWS_AS(slope_fit({1.0}, {0.0}), DegenerateFit);
    CHECK_THROWS_AS(slope_fit({1.0, 2.0}, {0.0}), std::invalid_argument);
}

TEST_CASE("counter-based RNG is reproducible and well-behaved")
{
    const SplitMix64 a = make_stream(42, 0);
    const SplitMix64 b = make_stream(42, 0);
    const SplitMix64 c = make_stream(42, 1);
    CHECK(a.next_u64(17) == b.next_u64(17));
    CHECK(a.next_u64(17) != c.next_u64(17));

    // Uniforms stay strictly inside (0, 1); normals have sane moments.
    std::vector<double> u(5000), z(5000);
    for (int i = 0; i < 5000; ++i) {
        u[i] = a.uniform(i);
        z[i] = a.normal(5000 + i);
        CHECK(u[i] > 0.0);
        CHECK(u[i] < 1.0);
    }
    const SampleStats su = sample_stats(u);
    const SampleStats sz = sample_stats(z);
    CHECK(std::fabs(su.mean - 0.5) < 5.0 * su.std_err);
    CHECK(std::fabs(sz.mean) < 5.0 * sz.std_err);
    CHECK(sz.var == Catch::Approx(1.0).margin(0.08));
}

TEST_CASE("phase-noise decomposition Monte Carlo agrees with theory")
{
    for (double var : {0.01, 0.1, 0.5}) {
        const BussgangMcResult r = mc_bussgang(var, 50000, 20240915);
        INFO("sigma^2 = " << var);
        CHECK(r.gain_theory == Catch::Approx(std::exp(-var / 2.0)).epsilon(1e-12));
        CHECK(r.dist_power_theory == Catch::Approx(1.0 - std::exp(-var)).epsilon(1e-12));
        CHECK(r.gain_ok);
        CHECK(r.dist_ok);
        CHECK(r.cross_ok);
        CHECK(r.all_ok());
        CHECK(r.gain_se > 0.0);
        CHECK(r.gain_se < 0.01);
    }

    // Same seed, same result, bit for bit; another seed moves the estimate.
    const BussgangMcResult r1 = mc_bussgang(0.1, 5000, 7);
    const BussgangMcResult r2 = mc_bussgang(0.1, 5000, 7);
    const BussgangMcResult r3 = mc_bussgang(0.1, 5000, 8);
    CHECK(r1.gain_est == r2.gain_est);
    CHECK(r1.dist_power_est == r2.dist_power_est);
    CHECK(r1.gain_est != r3.gain_est);

    CHECK_THROWS_AS(mc_bussgang(-0.1, 5000, 7), std::invalid_argument);
    CHECK_THROWS_AS(mc_bussgang(0.1, 50, 7), std::invalid_argument);
}

TEST_CASE("route-validation grid is invariant to the worker count")
{
    ValidationGridParams p;
    p.n_aperture = 2;
    p.n_frac_bw = 2;
    p.n_bins = 256;

    p.n_threads = 1;
    const ValidationGridResult serial = whittle_validation_grid(p);
    p.n_threads = 3;
    const ValidationGridResult threaded = whittle_validation_grid(p);

    REQUIRE(serial.points.size() == 4);
    REQUIRE(threaded.points.size() == 4);
    for (int i = 0; i < 4; ++i) {
        CHECK(serial.points[i].aperture_wavelengths ==
              threaded.points[i].aperture_wavelengths);
        CHECK(serial.points[i].j_whittle == threaded.points[i].j_whittle);
        CHECK(serial.points[i].j_exact == threaded.points[i].j_exact);
    }
    CHECK(serial.max_rel_err == threaded.max_rel_err);
    CHECK(serial.max_rel_err < 0.05);

    ValidationGridParams bad = p;
    bad.n_aperture = 1;
    CHECK_THROWS_AS(whittle_validation_grid(bad), std::invalid_argument);
}

TEST_CASE("array-size scaling of accuracy and critical SNR")
{
    const ArrayConfig ref;
    HardwareProfile hw;
    hw.ps_bits = 4;
    hw.diff_jitter_s = 50e-15;

    const MimoScalingResult r = mimo_scaling_experiment(ref, hw, 0.006);
    REQUIRE(r.rows.size() == 5);
    CHECK(r.eta_bsq_avg_ref == Catch::Approx(0.29081387489533095).epsilon(1e-8));

    // Squint re-evaluated per aperture bends the accuracy law away from the
    // ideal -1/2 power of the combined element count.
    CHECK(r.rmse_slope == Catch::Approx(-0.4086321227664291).epsilon(1e-7));
    const double expect_rmse[5] = {3.76153620e-04, 2.78850388e-04, 2.00202234e-04,
                                   1.50772984e-04, 1.21899495e-04};
    for (int i = 0; i < 5; ++i)
        CHECK(r.rows[i].rmse_m == Catch::Approx(expect_rmse[i]).epsilon(1e-7));

    // Critical-SNR columns isolate the pure array-size laws.
    CHECK(r.crit_unc_slope == Catch::Approx(-2.0).epsilon(1e-10));
    CHECK(r.crit_dir_slope == Catch::Approx(0.0).margin(1e-10));
    for (const auto& row : r.rows) {
        CHECK(row.snr_crit_uncorrelated ==
              Catch::Approx(row.snr_crit_directional / row.g_ideal).epsilon(1e-12));
    }

    // Broadside steering removes the squint entirely: exact -1/2 law.
    ArrayConfig broadside = ref;
    broadside.steer_angle_rad = 0.0;
    const MimoScalingResult rb = mimo_scaling_experiment(broadside, hw, 0.006);
    CHECK(rb.rmse_slope == Catch::Approx(-0.5).epsilon(1e-12));
    for (const auto& row : rb.rows)
        CHECK(row.eta_bsq_avg == 1.0);

    CHECK_THROWS_AS(mimo_scaling_experiment(ref, hw, 0.0), ZeroDistortion);
    CHECK_THROWS_AS(mimo_scaling_experiment(ref, hw, 0.006, {16}),
                    std::invalid_argument);
}
