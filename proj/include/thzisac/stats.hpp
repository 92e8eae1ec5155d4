#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "thzisac/errors.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    struct SampleStats {
        std::size_t n = 0;
        double mean = 0.0;
        double var = 0.0;        // unbiased
        double std_err = 0.0;    // of the mean
    };

    inline SampleStats sample_stats(const std::vector<double>& x)
    {
        if (x.size() < 2)
            throw std::invalid_argument("sample_stats: need at least two samples");
        SampleStats s;
        s.n = x.size();
        double m = 0.0;
        for (double v : x)
            m += v;
        m /= static_cast<double>(s.n);
        double ss = 0.0;
        for (double v : x)
            ss += sq(v - m);
        s.mean = m;
        s.var = ss / static_cast<double>(s.n - 1);
        s.std_err = std::sqrt(s.var / static_cast<double>(s.n));
        return s;
    }

    struct FitResult {
        double slope = 0.0;
        double intercept = 0.0;
        double r_squared = 0.0;
    };

    // Ordinary least squares y = slope * x + intercept. Callers pass
    // log-transformed data when they want a power-law exponent.
    inline FitResult slope_fit(const std::vector<double>& x, const std::vector<double>& y)
    {
        if (x.size() != y.size())
            throw std::invalid_argument("slope_fit: size mismatch");
        const std::size_t n = x.size();
        if (n < 2)
            throw DegenerateFit("slope_fit: need at least two points");
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mx += x[i];
            my += y[i];
        }
        mx /= static_cast<double>(n);
        my /= static_cast<double>(n);
        double sxx = 0.0, sxy = 0.0, syy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sxx += (x[i] - mx) * (x[i] - mx);
            sxy += (x[i] - mx) * (y[i] - my);
            syy += (y[i] - my) * (y[i] - my);
        }
        if (!(sxx > 0.0))
            throw DegenerateFit("slope_fit: abscissae are all identical");
        FitResult f;
        f.slope = sxy / sxx;
        f.intercept = my - f.slope * mx;
        f.r_squared = syy > 0.0 ? sq(sxy) / (sxx * syy) : 1.0;
        return f;
    }
}
