#pragma once

#include <cmath>

namespace thzisac
{
    inline constexpr double pi = 3.141592653589793238462643383279502884;
    inline constexpr double two_pi = 2.0 * pi;
    inline constexpr double speed_of_light_m_s = 299792458.0;

    // All dB<->linear conversions in the library go through these two helpers.
    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    inline double deg_to_rad(double deg) { return deg * pi / 180.0; }
    inline double rad_to_deg(double rad) { return rad * 180.0 / pi; }

    // sinc(x) = sin(x)/x with sinc(0) = 1 (unnormalized argument).
    inline double sinc(double x)
    {
        if (std::fabs(x) < 1e-8) {
            const double x2 = x * x;
            return 1.0 - x2 / 6.0 * (1.0 - x2 / 20.0);
        }
        return std::sin(x) / x;
    }

    inline double sq(double x) { return x * x; }
}
