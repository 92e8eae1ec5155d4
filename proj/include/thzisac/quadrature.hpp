#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace thzisac
{
    // Gauss-Kronrod 7-15 panel: returns the K15 estimate, err gets the
    // standard (200|K15-G7|)^{3/2} error heuristic.
    template <class Func>
    double quad_g7k15(const Func& f, double a, double b, double& err)
    {
        static const double nw[8][3] = {
            {0.000000000000000, 0.417959183673469, 0.209482141084728},
            {0.405845151377397, 0.381830050505119, 0.190350578064785},
            {0.741531185599394, 0.279705391489277, 0.140653259715525},
            {0.949107912342759, 0.129484966168870, 0.063092092629979},
            {0.207784955007898, 0.0,               0.204432940075298},
            {0.586087235467691, 0.0,               0.169004726639267},
            {0.864864423359769, 0.0,               0.104790010322250},
            {0.991455371120813, 0.0,               0.022935322010529}
        };

        const double x0 = (a + b) * 0.5;
        const double m = b - x0;

        const double y0 = f(x0);
        double g7 = nw[0][1] * y0;
        double k15 = nw[0][2] * y0;

        for (int i = 1; i < 8; ++i) {
            const double mx = m * nw[i][0];
            const double yi = f(x0 + mx) + f(x0 - mx);
            g7 += nw[i][1] * yi;
            k15 += nw[i][2] * yi;
        }

        g7 *= m;
        k15 *= m;

        err = 200.0 * std::fabs(g7 - k15);
        err *= std::sqrt(err);

        return k15;
    }

    // Adaptive bisection on a worklist of panels. Initial panels may be seeded
    // at known breakpoints (integrand kinks, nulls, narrow lines) so the
    // subdivision does not have to discover them.
    template <class Func>
    double integrate(const Func& f, double a, double b,
                     double rel_tol = 1e-9, double abs_tol = 1e-12,
                     const std::vector<double>& breakpoints = {})
    {
        if (!(b > a))
            return 0.0;

        struct Panel { double a, b; };
        std::vector<Panel> work;

        if (breakpoints.empty()) {
            work.push_back({a, b});
        } else {
            std::vector<double> pts(breakpoints);
            pts.push_back(a);
            pts.push_back(b);
            std::sort(pts.begin(), pts.end());
            double lo = a;
            for (double p : pts) {
                if (p <= lo || p > b)
                    continue;
                work.push_back({lo, p});
                lo = p;
            }
            if (lo < b)
                work.push_back({lo, b});
        }

        const std::size_t max_panels = 4000;
        const double span = b - a;
        double sum = 0.0;

        while (!work.empty()) {
            const Panel p = work.back();
            work.pop_back();

            double err;
            const double s = quad_g7k15(f, p.a, p.b, err);
            // Panel-local acceptance: share of the absolute budget proportional
            // to panel width, or small relative to the running total.
            const double width_frac = (p.b - p.a) / span;
            if (err <= abs_tol * width_frac ||
                err <= rel_tol * std::fabs(s) ||
                (p.b - p.a) < 1e-14 * span) {
                sum += s;
                continue;
            }

            if (work.size() + 2 > max_panels)
                throw std::runtime_error("integrate: panel budget exhausted");

            const double mid = 0.5 * (p.a + p.b);
            work.push_back({p.a, mid});
            work.push_back({mid, p.b});
        }

        return sum;
    }
}
