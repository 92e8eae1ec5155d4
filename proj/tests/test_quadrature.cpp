#include <catch_amalgamated.hpp>

#include <cmath>

#include "thzisac/quadrature.hpp"
#include "thzisac/util.hpp"

using namespace thzisac;

TEST_CASE("single panel is exact for low-degree polynomials")
{
    double err = 0.0;
    const double v = quad_g7k15([](double x) { return 3.0 * x * x - x + 2.0; },
                                -1.0, 2.0, err);
    // Integral of 3x^2 - x + 2 over [-1, 2] = 9 - 1.5 + 6 = 13.5.
    CHECK(v == Catch::Approx(13.5).epsilon(1e-14));
    CHECK(err < 1e-12);
}

TEST_CASE("adaptive integral of sin over [0, pi]")
{
    const double v = integrate([](double x) { return std::sin(x); }, 0.0, pi);
    CHECK(v == Catch::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("oscillatory integrand")
{
    // Integral of sin(50 x) over [0, 1] = (1 - cos(50)) / 50.
    const double expect = (1.0 - std::cos(50.0)) / 50.0;
    const double v = integrate([](double x) { return std::sin(50.0 * x); }, 0.0, 1.0,
                               1e-11, 1e-14);
    CHECK(v == Catch::Approx(expect).epsilon(1e-9));
}

TEST_CASE("breakpoints split the initial panels")
{
    // |x| has a kink at 0; a breakpoint there makes both halves polynomial.
    const double v = integrate([](double x) { return std::fabs(x); }, -1.0, 3.0,
                               1e-12, 1e-15, {0.0});
    CHECK(v == Catch::Approx(5.0).epsilon(1e-12));

    // Breakpoints outside the interval are ignored.
    const double w = integrate([](double x) { return x; }, 0.0, 1.0, 1e-12, 1e-15,
                               {-5.0, 7.0});
    CHECK(w == Catch::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("narrow feature found by refinement")
{
    // Gaussian of width 1e-3 centered mid-interval; total mass ~ w sqrt(pi).
    const double w = 1e-3;
    const double expect = w * std::sqrt(pi);
    const double v = integrate(
        [&](double x) { return std::exp(-sq((x - 0.5) / w)); }, 0.0, 1.0, 1e-10,
        1e-16, {0.5});
    CHECK(v == Catch::Approx(expect).epsilon(1e-8));
}

TEST_CASE("error estimate reflects panel accuracy")
{
    double err_smooth = 0.0, err_rough = 0.0;
    quad_g7k15([](double x) { return x * x; }, 0.0, 1.0, err_smooth);
    quad_g7k15([](double x) { return std::sin(40.0 * x); }, 0.0, 1.0, err_rough);
    CHECK(err_smooth < err_rough);
}
