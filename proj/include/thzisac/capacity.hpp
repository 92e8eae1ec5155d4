#pragma once

#include <cmath>
#include <vector>

#include "thzisac/array_model.hpp"
#include "thzisac/errors.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/quadrature.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    // How the hardware distortion combines at the receiver. Under constant-
    // envelope drive, identical per-element nonlinearities emit distortion
    // proportional to the steering vector, so it beamforms with the signal
    // (directional) and the signal-to-distortion ratio is array-size
    // invariant. The uncorrelated alternative leaves the distortion at the
    // per-element level.
    enum class DistortionMode { uncorrelated, directional };

    struct LinkOperatingPoint {
        double snr0 = 1.0;               // P_tx / (N0 B)
        GainBreakdown gain{};
        DistortionBudget budget{};
        double sigma_phi_res = 0.0;      // residual tracked phase variance, rad^2
        double sigma_dse_phase = 0.0;    // kinematic mismatch term, relative to N0
        RsmModel rsm{};
        DistortionMode mode = DistortionMode::directional;

        void validate() const
        {
            if (!(snr0 > 0.0))
                throw std::invalid_argument("LinkOperatingPoint: snr0 must be positive");
            if (sigma_phi_res < 0.0 || sigma_dse_phase < 0.0)
                throw std::invalid_argument("LinkOperatingPoint: variances must be >= 0");
        }
    };

    namespace detail
    {
        // Comb reference power in thermal units: snr0 = P/(N0 B) makes the
        // received signal power snr0 * G * N0 * B, so with N0 == 1 the comb
        // PSD divided by N0 is s_rsm evaluated at this reference.
        inline double rsm_ref_power(const LinkOperatingPoint& op, const ArrayConfig& cfg)
        {
            return op.snr0 * op.gain.g_sig_avg * cfg.bandwidth_hz;
        }
    }

    // Frequency-resolved effective SINR.
    inline double sinr_at(double f_offset_hz, const LinkOperatingPoint& op,
                          const ArrayConfig& cfg)
    {
        const double g_f = op.gain.g_ideal * op.gain.rho_static() *
                           eta_bsq(f_offset_hz, cfg);
        const double num = op.snr0 * g_f * std::exp(-op.sigma_phi_res);
        const double dist = (op.mode == DistortionMode::directional)
                                ? op.snr0 * g_f * op.budget.gamma_total
                                : op.snr0 * op.budget.gamma_total;
        double den = 1.0 + dist + op.sigma_dse_phase;
        if (op.rsm.enabled())
            den += s_rsm(f_offset_hz, op.rsm, detail::rsm_ref_power(op, cfg));
        return num / den;
    }

    namespace detail
    {
        inline std::vector<double> sinr_breakpoints(const LinkOperatingPoint& op,
                                                    const ArrayConfig& cfg)
        {
            std::vector<double> pts = eta_bsq_null_offsets(cfg);
            if (op.rsm.enabled()) {
                const double w = op.rsm.line_width_hz;
                for (int k = 1; k <= op.rsm.n_harmonics; ++k) {
                    for (double fk : {k * op.rsm.symbol_rate_hz, -k * op.rsm.symbol_rate_hz}) {
                        pts.push_back(fk - 4.0 * w);
                        pts.push_back(fk);
                        pts.push_back(fk + 4.0 * w);
                    }
                }
            }
            return pts;
        }
    }

    // Exact Gaussian-input spectral efficiency: band average of log2(1 + SINR).
    inline double c_exact(const LinkOperatingPoint& op, const ArrayConfig& cfg)
    {
        op.validate();
        const double half = cfg.bandwidth_hz / 2.0;
        const double val = integrate(
            [&](double f) { return std::log2(1.0 + sinr_at(f, op, cfg)); },
            -half, half, 1e-8, 1e-12, detail::sinr_breakpoints(op, cfg));
        return val / cfg.bandwidth_hz;
    }

    // Jensen upper bound: log of the band-averaged effective SINR.
    inline double c_jensen(const LinkOperatingPoint& op, const ArrayConfig& cfg)
    {
        op.validate();
        const double num = op.snr0 * op.gain.g_sig_avg * std::exp(-op.sigma_phi_res);
        const double dist = (op.mode == DistortionMode::directional)
                                ? op.snr0 * op.gain.g_sig_avg * op.budget.gamma_total
                                : op.snr0 * op.budget.gamma_total;
        double den = 1.0 + dist + op.sigma_dse_phase;
        if (op.rsm.enabled())
            den += op.rsm.total_power_ratio * detail::rsm_ref_power(op, cfg) /
                   cfg.bandwidth_hz;
        return std::log2(1.0 + num / den);
    }

    // Second-order estimate of the Jensen gap from the band variance of the
    // SINR; a qualitative scaling estimator, not a bound.
    inline double jensen_gap_taylor(const LinkOperatingPoint& op, const ArrayConfig& cfg)
    {
        op.validate();
        const double half = cfg.bandwidth_hz / 2.0;
        const auto pts = detail::sinr_breakpoints(op, cfg);
        const double mean = integrate([&](double f) { return sinr_at(f, op, cfg); },
                                      -half, half, 1e-8, 1e-12, pts) /
                            cfg.bandwidth_hz;
        const double mom2 = integrate([&](double f) { return sq(sinr_at(f, op, cfg)); },
                                      -half, half, 1e-8, 1e-12, pts) /
                            cfg.bandwidth_hz;
        const double var = std::max(0.0, mom2 - sq(mean));
        return var / (2.0 * sq(1.0 + mean) * std::log(2.0));
    }

    // Distortion-imposed spectral-efficiency ceiling; independent of SNR and
    // array size.
    inline double c_sat(const DistortionBudget& budget, double sigma_phi_res)
    {
        if (!(budget.gamma_total > 0.0))
            throw ZeroDistortion("c_sat: ceiling is infinite with zero distortion");
        return std::log2(1.0 + std::exp(-sigma_phi_res) / budget.gamma_total);
    }

    // SNR at which the distortion term overtakes thermal noise. In directional
    // mode the array gain cancels between signal and distortion, leaving only
    // the per-element factors.
    inline double snr_crit(const GainBreakdown& gain, const DistortionBudget& budget,
                           DistortionMode mode)
    {
        if (!(budget.gamma_total > 0.0))
            throw ZeroDistortion("snr_crit: undefined with zero distortion");
        if (mode == DistortionMode::uncorrelated)
            return 1.0 / (gain.g_sig_avg * budget.gamma_total);
        return 1.0 / (gain.rho_static() * gain.eta_bsq_avg * budget.gamma_total);
    }

    struct CapacityResult {
        double c_exact = 0.0;
        double c_jensen = 0.0;
        double jensen_gap = 0.0;
        double c_sat = 0.0;
        double snr_crit = 0.0;
    };

    inline CapacityResult compute_capacity(const LinkOperatingPoint& op,
                                           const ArrayConfig& cfg)
    {
        CapacityResult r;
        r.c_exact = c_exact(op, cfg);
        r.c_jensen = c_jensen(op, cfg);
        r.jensen_gap = r.c_jensen - r.c_exact;
        r.c_sat = c_sat(op.budget, op.sigma_phi_res);
        r.snr_crit = snr_crit(op.gain, op.budget, op.mode);
        return r;
    }
}
