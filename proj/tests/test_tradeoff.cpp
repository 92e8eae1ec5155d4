#include <catch_amalgamated.hpp>

#include <cmath>

#include "thzisac/tradeoff.hpp"

using namespace thzisac;

TEST_CASE("pilot-fraction scaling laws")
{
    CHECK(sigma_pn_var(0.5, 0.01) == Catch::Approx(0.02).epsilon(1e-12));
    CHECK(sigma_dse_var(0.5, 1e-3) == Catch::Approx(1e-3 * 32.0).epsilon(1e-12));
    // Halving alpha costs 2x in phase noise but 32x in sync error.
    CHECK(sigma_pn_var(0.25, 0.01) / sigma_pn_var(0.5, 0.01) == Catch::Approx(2.0));
    CHECK(sigma_dse_var(0.25, 1e-3) / sigma_dse_var(0.5, 1e-3) == Catch::Approx(32.0));

    CHECK_THROWS_AS(sigma_pn_var(0.0, 0.01), AlphaOutOfRange);
    CHECK_THROWS_AS(sigma_pn_var(1.5, 0.01), AlphaOutOfRange);
    CHECK_THROWS_AS(sigma_dse_var(-0.1, 0.01), AlphaOutOfRange);
    CHECK_THROWS_AS(sigma_pn_var(0.5, -1.0), std::invalid_argument);
}

TEST_CASE("crossover pilot fraction")
{
    // 0.16^4 = 6.5536e-4 exactly, so the quarter-power root is exact too.
    CHECK(alpha_star(0.01, 6.5536e-6) == Catch::Approx(0.16).epsilon(1e-14));
    // At the crossover the two variances are equal.
    const double a = alpha_star(0.01, 6.5536e-6);
    CHECK(sigma_pn_var(a, 0.01) == Catch::Approx(sigma_dse_var(a, 6.5536e-6)).epsilon(1e-12));

    // Perturbation laws: alpha* scales as c_dse^{1/4} and c_pn^{-1/4}.
    CHECK(alpha_star(0.01, 16.0 * 6.5536e-6) == Catch::Approx(2.0 * 0.16).epsilon(1e-12));
    CHECK(alpha_star(16.0 * 0.01, 6.5536e-6) == Catch::Approx(0.5 * 0.16).epsilon(1e-12));

    CHECK_THROWS_AS(alpha_star(0.0, 1e-6), std::invalid_argument);
    CHECK(alpha_star(1e-8, 1.0) > 1.0);   // crossover can sit outside (0, 1]
}

TEST_CASE("coefficients from link physics and platform dynamics")
{
    CHECK(c_pn_from_link(2.0, 1e-20, 1e-15) ==
          Catch::Approx(2.0 * 1e-20 / (2.0 * 1e-15)).epsilon(1e-12));
    CHECK_THROWS_AS(c_pn_from_link(0.0, 1.0, 1.0), std::invalid_argument);

    // q * dt^5 / 20 with q = 0.03806059144434216 m^2/s^5 at dt = 10 ms,
    // mapped through the two-way carrier-phase factor, reproduces the
    // reference sync coefficient 6.5536e-6.
    const double q = 0.03806059144434216;
    CHECK(ca_position_var(q, 0.01) == Catch::Approx(q * 1e-10 / 20.0).epsilon(1e-12));
    CHECK(c_dse_from_dynamics(140e9, q, 0.01) ==
          Catch::Approx(6.5536e-6).epsilon(1e-9));
    CHECK_THROWS_AS(c_dse_from_dynamics(140e9, q, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ca_position_var(-1.0, 0.01), std::invalid_argument);
}

TEST_CASE("surrogate capacity and net rate")
{
    TradeoffParams p;
    p.c_pn = 0.01;
    p.c_dse = 6.5536e-6;
    p.snr0 = 1.0;
    p.g_sig_avg = 1173.6716773793664;
    p.gamma_total = 0.006;

    // Hand-evaluated at alpha = 0.2.
    const double s_pn = 0.01 / 0.2;
    const double s_dse = 6.5536e-6 / std::pow(0.2, 5);
    const double num = p.g_sig_avg * std::exp(-s_pn);
    const double den = 1.0 + p.g_sig_avg * 0.006 + s_dse;
    CHECK(c_j_alpha(0.2, p) == Catch::Approx(std::log2(1.0 + num / den)).epsilon(1e-12));
    CHECK(r_net(0.2, p) == Catch::Approx(0.8 * c_j_alpha(0.2, p)).epsilon(1e-12));

    // All-pilot frame carries no data.
    CHECK(r_net(1.0, p) == 0.0);

    TradeoffParams bad = p;
    bad.g_sig_avg = 0.0;
    CHECK_THROWS_AS(c_j_alpha(0.2, bad), std::invalid_argument);
}

TEST_CASE("alpha grid is logarithmic with pinned endpoints")
{
    const auto g = alpha_grid(200, 0.01, 1.0);
    REQUIRE(g.size() == 200);
    CHECK(g.front() == Catch::Approx(0.01).epsilon(1e-14));
    CHECK(g.back() == 1.0);
    // Constant ratio between neighbours.
    const double ratio = g[1] / g[0];
    CHECK(ratio == Catch::Approx(std::exp(std::log(100.0) / 199.0)).epsilon(1e-12));
    CHECK(g[100] / g[99] == Catch::Approx(ratio).epsilon(1e-10));

    CHECK_THROWS_AS(alpha_grid(1, 0.01, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_grid(10, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(alpha_grid(10, 0.5, 1.5), std::invalid_argument);
}

TEST_CASE("sweep locates an interior optimum")
{
    TradeoffParams p;
    p.c_pn = 0.01;
    p.c_dse = 6.5536e-6;
    p.snr0 = 1.0;
    p.g_sig_avg = 1173.6716773793664;
    p.gamma_total = 0.006;

    const AlphaSweepResult res = alpha_sweep(p, alpha_grid(200, 0.01, 1.0));
    REQUIRE(res.points.size() == 200);
    CHECK(res.alpha_star == Catch::Approx(0.16).epsilon(1e-12));
    CHECK_FALSE(res.crossover_outside_unit);

    // The optimum is interior and the boundary rates are strictly worse.
    CHECK(res.best_r_net > res.points.front().r_net);
    CHECK(res.best_r_net > res.points.back().r_net);
    CHECK(res.best_alpha > 0.01);
    CHECK(res.best_alpha < 1.0);

    // Flags flip as alpha passes the crossover and the feasibility edge.
    for (const auto& pt : res.points) {
        CHECK(pt.dse_dominated == (pt.sigma_dse_var > pt.sigma_pn_var));
        CHECK(pt.feasible == (pt.sigma_dse_var <= 1.0));
        CHECK(pt.r_net == Catch::Approx((1.0 - pt.alpha) * pt.c_j).margin(1e-15));
    }
    CHECK(res.points.front().dse_dominated);       // alpha = 0.01: sync-limited
    CHECK_FALSE(res.points.back().dse_dominated);  // alpha = 1: loop-limited

    // A crossover beyond alpha = 1 raises the warning flag.
    TradeoffParams far = p;
    far.c_dse = 10.0 * far.c_pn;
    const AlphaSweepResult res2 = alpha_sweep(far, alpha_grid(50, 0.5, 1.0));
    CHECK(res2.crossover_outside_unit);
}
