#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "thzisac/errors.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    // Pilot-fraction scalings: residual phase-noise variance decays like
    // 1/alpha (integration gain of the tracking loop) while the delay-sync
    // error grows like 1/alpha^5 when the frame share left for sensing
    // shrinks.
    inline void check_alpha(double alpha)
    {
        if (!(alpha > 0.0) || alpha > 1.0)
            throw AlphaOutOfRange("pilot fraction must lie in (0, 1]");
    }

    inline double sigma_pn_var(double alpha, double c_pn)
    {
        check_alpha(alpha);
        if (c_pn < 0.0)
            throw std::invalid_argument("sigma_pn_var: negative coefficient");
        return c_pn / alpha;
    }

    inline double sigma_dse_var(double alpha, double c_dse)
    {
        check_alpha(alpha);
        if (c_dse < 0.0)
            throw std::invalid_argument("sigma_dse_var: negative coefficient");
        return c_dse / std::pow(alpha, 5);
    }

    // Pilot fraction equalizing the two variances.
    inline double alpha_star(double c_pn, double c_dse)
    {
        if (!(c_pn > 0.0) || !(c_dse > 0.0))
            throw std::invalid_argument("alpha_star: coefficients must be positive");
        return std::pow(c_dse / c_pn, 0.25);
    }

    // Phase-noise coefficient from link physics: loop loss times N0 over
    // twice the total pilot-available energy.
    inline double c_pn_from_link(double loop_loss_linear, double n0_w_hz,
                                 double e_total_j)
    {
        if (!(loop_loss_linear > 0.0) || !(n0_w_hz > 0.0) || !(e_total_j > 0.0))
            throw std::invalid_argument("c_pn_from_link: inputs must be positive");
        return loop_loss_linear * n0_w_hz / (2.0 * e_total_j);
    }

    // Constant-acceleration position drift over an update interval dt:
    // variance q * dt^5 / 20 (the [0][0] element of the integrated process
    // noise).
    inline double ca_position_var(double q_accel, double dt_s)
    {
        if (q_accel < 0.0 || dt_s < 0.0)
            throw std::invalid_argument("ca_position_var: negative input");
        return q_accel * std::pow(dt_s, 5) / 20.0;
    }

    // Delay-sync coefficient from platform dynamics: position drift mapped to
    // carrier phase through (4 pi f_c / c)^2 (two-way propagation).
    inline double c_dse_from_dynamics(double carrier_hz, double q_accel,
                                      double t_frame_s)
    {
        if (!(carrier_hz > 0.0) || !(t_frame_s > 0.0))
            throw std::invalid_argument("c_dse_from_dynamics: inputs must be positive");
        return sq(4.0 * pi * carrier_hz / speed_of_light_m_s) *
               ca_position_var(q_accel, t_frame_s);
    }

    struct TradeoffParams {
        double c_pn = 0.01;
        double c_dse = 6.5536e-6;
        double snr0 = 1.0;
        double g_sig_avg = 1.0;
        double gamma_total = 0.0;

        void validate() const
        {
            if (!(c_pn > 0.0) || !(c_dse > 0.0))
                throw std::invalid_argument("TradeoffParams: coefficients must be positive");
            if (!(snr0 > 0.0) || !(g_sig_avg > 0.0) || gamma_total < 0.0)
                throw std::invalid_argument("TradeoffParams: bad link parameters");
        }
    };

    // Surrogate capacity at pilot fraction alpha: both pilot-limited
    // impairments plugged into the band-averaged SINR.
    inline double c_j_alpha(double alpha, const TradeoffParams& p)
    {
        p.validate();
        const double s_pn = sigma_pn_var(alpha, p.c_pn);
        const double s_dse = sigma_dse_var(alpha, p.c_dse);
        const double num = p.snr0 * p.g_sig_avg * std::exp(-s_pn);
        const double den = 1.0 + p.snr0 * p.g_sig_avg * p.gamma_total + s_dse;
        return std::log2(1.0 + num / den);
    }

    // Net rate: the (1 - alpha) data share of the surrogate capacity.
    inline double r_net(double alpha, const TradeoffParams& p)
    {
        return (1.0 - alpha) * c_j_alpha(alpha, p);
    }

    inline std::vector<double> alpha_grid(int n = 200, double lo = 0.01, double hi = 1.0)
    {
        if (n < 2 || !(lo > 0.0) || !(hi > lo) || hi > 1.0)
            throw std::invalid_argument("alpha_grid: bad parameters");
        std::vector<double> g(n);
        const double step = std::log(hi / lo) / (n - 1);
        for (int i = 0; i < n; ++i)
            g[i] = lo * std::exp(i * step);
        g.back() = hi;
        return g;
    }

    struct AlphaPoint {
        double alpha = 0.0;
        double sigma_pn_var = 0.0;
        double sigma_dse_var = 0.0;
        double c_j = 0.0;
        double r_net = 0.0;
        bool feasible = true;            // sync variance below one rad^2
        bool dse_dominated = false;
    };

    struct AlphaSweepResult {
        std::vector<AlphaPoint> points;
        double alpha_star = 0.0;
        bool crossover_outside_unit = false;  // warning flag, not an error
        double best_alpha = 0.0;
        double best_r_net = 0.0;
    };

    inline AlphaSweepResult alpha_sweep(const TradeoffParams& p,
                                        const std::vector<double>& grid)
    {
        p.validate();
        AlphaSweepResult res;
        res.alpha_star = alpha_star(p.c_pn, p.c_dse);
        res.crossover_outside_unit = res.alpha_star > 1.0;
        res.points.reserve(grid.size());
        for (double a : grid) {
            AlphaPoint pt;
            pt.alpha = a;
            pt.sigma_pn_var = sigma_pn_var(a, p.c_pn);
            pt.sigma_dse_var = sigma_dse_var(a, p.c_dse);
            pt.c_j = c_j_alpha(a, p);
            pt.r_net = (1.0 - a) * pt.c_j;
            pt.feasible = pt.sigma_dse_var <= 1.0;
            pt.dse_dominated = pt.sigma_dse_var > pt.sigma_pn_var;
            if (pt.r_net > res.best_r_net) {
                res.best_r_net = pt.r_net;
                res.best_alpha = pt.alpha;
            }
            res.points.push_back(pt);
        }
        return res;
    }
}
