#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "thzisac/errors.hpp"
#include "thzisac/quadrature.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    // Geometry and steering of a ULA-to-ULA link.
    struct ArrayConfig {
        int n_tx = 64;
        int n_rx = 64;
        double spacing_wavelengths = 0.5;      // d / lambda_c
        double steer_angle_rad = pi / 6.0;     // theta_0
        double carrier_hz = 140e9;             // f_c
        double bandwidth_hz = 20e9;            // B
        double range_m = 1e6;                  // R

        void validate() const
        {
            if (n_tx < 1 || n_rx < 1)
                throw std::invalid_argument("ArrayConfig: element counts must be positive");
            if (!(spacing_wavelengths > 0.0))
                throw std::invalid_argument("ArrayConfig: spacing must be positive");
            if (!(std::fabs(steer_angle_rad) < pi / 2.0))
                throw std::invalid_argument("ArrayConfig: steer angle must lie in (-pi/2, pi/2)");
            if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0))
                throw std::invalid_argument("ArrayConfig: frequencies must be positive");
            if (bandwidth_hz > carrier_hz)
                throw std::invalid_argument("ArrayConfig: fractional bandwidth must be below 1");
            if (!(range_m > 0.0))
                throw std::invalid_argument("ArrayConfig: range must be positive");
        }

        double wavelength_m() const { return speed_of_light_m_s / carrier_hz; }
        double aperture_tx_wavelengths() const { return n_tx * spacing_wavelengths; }
        double aperture_rx_wavelengths() const { return n_rx * spacing_wavelengths; }
        // Single active aperture: the larger side (worst-case squint).
        double aperture_wavelengths() const
        {
            return std::max(aperture_tx_wavelengths(), aperture_rx_wavelengths());
        }
        double aperture_m() const { return aperture_wavelengths() * wavelength_m(); }
        double far_field_min_range_m() const
        {
            return 2.0 * sq(aperture_m()) / wavelength_m();
        }
        bool far_field_ok() const { return range_m >= far_field_min_range_m(); }
    };

    // All impairment magnitudes. Ratios are linear (not dB), angles rad, times s.
    struct HardwareProfile {
        double gamma_pa = 0.0;        // PA distortion power ratio (EVM^2)
        int adc_bits = 7;
        double irr_db = 20.0;         // image rejection ratio, dB
        int ps_bits = 4;              // phase shifter resolution
        double jitter_s = 0.0;        // sampling clock RMS jitter
        double amp_err_rms = 0.0;     // per-element amplitude error
        double point_err_rad = 0.0;   // RMS pointing error
        double rel_pn_var_tx = 0.0;   // residual carrier phase variance, tx PLL
        double rel_pn_var_rx = 0.0;
        double diff_jitter_s = 0.0;   // differential timing jitter between ends
        double loop_loss = 1.0;       // tracking loop SNR loss, linear >= 1

        void validate() const
        {
            if (gamma_pa < 0.0 || jitter_s < 0.0 || amp_err_rms < 0.0 ||
                point_err_rad < 0.0 || rel_pn_var_tx < 0.0 || rel_pn_var_rx < 0.0 ||
                diff_jitter_s < 0.0)
                throw std::invalid_argument("HardwareProfile: ratios must be non-negative");
            if (adc_bits < 1 || ps_bits < 1)
                throw std::invalid_argument("HardwareProfile: bit counts must be >= 1");
            if (!(irr_db > 0.0))
                throw std::invalid_argument("HardwareProfile: irr_db must be positive");
            if (loop_loss < 1.0)
                throw std::invalid_argument("HardwareProfile: loop_loss must be >= 1");
        }

        std::vector<std::string> warnings() const
        {
            std::vector<std::string> w;
            if (amp_err_rms > 0.3)
                w.push_back("amp_err_rms above 0.3: first-order loss model degrades");
            return w;
        }
    };

    // Space-bandwidth product kappa = (L_ap/lambda)(B/f_c)|sin theta0|.
    inline double kappa(const ArrayConfig& cfg)
    {
        return cfg.aperture_wavelengths() * (cfg.bandwidth_hz / cfg.carrier_hz) *
               std::fabs(std::sin(cfg.steer_angle_rad));
    }

    // Frequency-resolved beam-squint loss, sinc^4 of the steering mismatch.
    // f_offset is relative to the carrier.
    inline double eta_bsq(double f_offset_hz, const ArrayConfig& cfg)
    {
        const double x = pi * cfg.aperture_wavelengths() *
                         std::sin(cfg.steer_angle_rad) * f_offset_hz / cfg.carrier_hz;
        return sq(sq(sinc(x)));
    }

    // Offsets of the sinc nulls inside the band, used as quadrature breakpoints.
    inline std::vector<double> eta_bsq_null_offsets(const ArrayConfig& cfg)
    {
        std::vector<double> nulls;
        const double slope = cfg.aperture_wavelengths() *
                             std::fabs(std::sin(cfg.steer_angle_rad)) / cfg.carrier_hz;
        if (slope <= 0.0)
            return nulls;
        const double f_null = 1.0 / slope;
        for (double f = f_null; f <= cfg.bandwidth_hz / 2.0; f += f_null) {
            nulls.push_back(f);
            nulls.push_back(-f);
        }
        return nulls;
    }

    enum class AveragingMethod { numeric, taylor };

    // Band-average of eta_bsq over [-B/2, B/2]. The closed-form (taylor) path
    // is only valid for small kappa and refuses to run beyond 0.5.
    inline double eta_bsq_avg(const ArrayConfig& cfg,
                              AveragingMethod method = AveragingMethod::numeric)
    {
        const double k = kappa(cfg);
        if (k == 0.0)
            return 1.0;
        if (method == AveragingMethod::taylor) {
            if (k > 0.5)
                throw TaylorOutOfRange("eta_bsq_avg: kappa = " + std::to_string(k) +
                                       " exceeds 0.5; use the numeric method");
            const double a = cfg.aperture_wavelengths() * std::sin(cfg.steer_angle_rad);
            return 1.0 - (sq(pi) / 18.0) * sq(a) * sq(cfg.bandwidth_hz / cfg.carrier_hz);
        }
        const double half = cfg.bandwidth_hz / 2.0;
        const double val = integrate([&](double f) { return eta_bsq(f, cfg); },
                                     -half, half, 1e-9, 1e-12,
                                     eta_bsq_null_offsets(cfg));
        return val / cfg.bandwidth_hz;
    }

    // Phase-shifter quantization loss.
    inline double rho_q(int ps_bits)
    {
        if (ps_bits < 1)
            throw std::invalid_argument("rho_q: ps_bits must be >= 1");
        return sq(sinc(pi / std::pow(2.0, ps_bits)));
    }

    // Antenna pointing-error loss.
    inline double rho_ape(const ArrayConfig& cfg, double point_err_rad)
    {
        if (point_err_rad < 0.0)
            throw std::invalid_argument("rho_ape: point_err_rad must be >= 0");
        const double lcos = cfg.aperture_wavelengths() * std::cos(cfg.steer_angle_rad);
        return std::exp(-(sq(pi) / 3.0) * sq(lcos) * sq(point_err_rad));
    }

    // Per-element amplitude-error loss.
    inline double rho_a(double amp_err_rms)
    {
        if (amp_err_rms < 0.0)
            throw std::invalid_argument("rho_a: amp_err_rms must be >= 0");
        return std::exp(-sq(amp_err_rms));
    }

    // Residual carrier phase-noise loss between the two ends.
    inline double rel_pn_var(const HardwareProfile& hw, double carrier_hz)
    {
        return hw.rel_pn_var_tx + hw.rel_pn_var_rx +
               sq(two_pi * carrier_hz * hw.diff_jitter_s);
    }

    inline double rho_pn(const HardwareProfile& hw, double carrier_hz)
    {
        return std::exp(-rel_pn_var(hw, carrier_hz));
    }

    // Multiplicative gain cascade: ideal array gain times every loss factor.
    struct GainBreakdown {
        double g_ideal = 1.0;
        double eta_bsq_avg = 1.0;
        double rho_q = 1.0;
        double rho_ape = 1.0;
        double rho_a = 1.0;
        double rho_pn = 1.0;
        double g_sig_avg = 1.0;

        // Static (frequency-flat) loss product, excluding the squint average.
        double rho_static() const { return rho_q * rho_ape * rho_a * rho_pn; }
    };

    inline GainBreakdown gain_breakdown(const ArrayConfig& cfg, const HardwareProfile& hw)
    {
        cfg.validate();
        hw.validate();
        GainBreakdown g;
        g.g_ideal = static_cast<double>(cfg.n_tx) * static_cast<double>(cfg.n_rx);
        g.eta_bsq_avg = eta_bsq_avg(cfg, AveragingMethod::numeric);
        g.rho_q = rho_q(hw.ps_bits);
        g.rho_ape = rho_ape(cfg, hw.point_err_rad);
        g.rho_a = rho_a(hw.amp_err_rms);
        g.rho_pn = rho_pn(hw, cfg.carrier_hz);
        g.g_sig_avg = g.g_ideal * g.eta_bsq_avg * g.rho_q * g.rho_ape * g.rho_a * g.rho_pn;
        return g;
    }

    // Frequency-resolved signal amplitude shape. The residual tracked-loop
    // coherence loss is deliberately not part of this amplitude: under the
    // sensing convention that power shows up additively in the noise PSD, and
    // including it here as well would count it twice.
    inline double amplitude_profile(double f_offset_hz, const ArrayConfig& cfg,
                                    const HardwareProfile& hw)
    {
        const double rho_static = rho_q(hw.ps_bits) * rho_ape(cfg, hw.point_err_rad) *
                                  rho_a(hw.amp_err_rms) * rho_pn(hw, cfg.carrier_hz);
        const double g_ideal = static_cast<double>(cfg.n_tx) * static_cast<double>(cfg.n_rx);
        return std::sqrt(g_ideal * rho_static * eta_bsq(f_offset_hz, cfg));
    }

    // Free-space path loss (4 pi R / lambda)^2.
    inline double path_loss(const ArrayConfig& cfg)
    {
        if (!(cfg.range_m > 0.0))
            throw std::invalid_argument("path_loss: range must be positive");
        return sq(4.0 * pi * cfg.range_m / cfg.wavelength_m());
    }
}
