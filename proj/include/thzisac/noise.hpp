#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "thzisac/array_model.hpp"
#include "thzisac/errors.hpp"
#include "thzisac/quadrature.hpp"
#include "thzisac/spectral.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    // ---- hardware distortion budget ----

    inline double gamma_adc(int bits)
    {
        if (bits < 1)
            throw std::invalid_argument("gamma_adc: bits must be >= 1");
        return db_to_linear(-(6.02 * bits + 1.76));
    }

    inline double gamma_iq(double irr_db)
    {
        if (!(irr_db > 0.0))
            throw std::invalid_argument("gamma_iq: irr_db must be positive");
        return db_to_linear(-irr_db);
    }

    inline double gamma_lo(double jitter_s, double f_eff_hz)
    {
        if (jitter_s < 0.0 || f_eff_hz < 0.0)
            throw std::invalid_argument("gamma_lo: inputs must be non-negative");
        return sq(two_pi * f_eff_hz * jitter_s);
    }

    struct DistortionBudget {
        double gamma_pa = 0.0;
        double gamma_adc = 0.0;
        double gamma_iq = 0.0;
        double gamma_lo = 0.0;
        double gamma_total = 0.0;

        double pa_fraction() const
        {
            return gamma_total > 0.0 ? gamma_pa / gamma_total : 0.0;
        }
        std::array<double, 4> fractions() const
        {
            if (gamma_total <= 0.0)
                return {0.0, 0.0, 0.0, 0.0};
            return {gamma_pa / gamma_total, gamma_adc / gamma_total,
                    gamma_iq / gamma_total, gamma_lo / gamma_total};
        }
    };

    inline DistortionBudget distortion_budget(const HardwareProfile& hw, double f_eff_hz)
    {
        hw.validate();
        DistortionBudget b;
        b.gamma_pa = hw.gamma_pa;
        b.gamma_adc = gamma_adc(hw.adc_bits);
        b.gamma_iq = gamma_iq(hw.irr_db);
        b.gamma_lo = gamma_lo(hw.jitter_s, f_eff_hz);
        b.gamma_total = b.gamma_pa + b.gamma_adc + b.gamma_iq + b.gamma_lo;
        return b;
    }

    // Rescale every component to a directly measured total, preserving the
    // component shares. This is the escape hatch for datasheets that quote
    // an aggregate distortion figure the per-component sum does not hit.
    inline DistortionBudget with_total(DistortionBudget b, double gamma_total)
    {
        if (!(b.gamma_total > 0.0))
            throw ZeroDistortion("with_total: budget has no distortion to rescale");
        if (!(gamma_total > 0.0))
            throw std::invalid_argument("with_total: target must be positive");
        const double s = gamma_total / b.gamma_total;
        b.gamma_pa *= s;
        b.gamma_adc *= s;
        b.gamma_iq *= s;
        b.gamma_lo *= s;
        b.gamma_total = gamma_total;
        return b;
    }

    // ---- residual tracked phase noise ----

    // Raw oscillator PSD is the standard power law k2/f^2 + k3/|f|^3 + floor;
    // the tracking loop high-passes it with |H|^2 = f^2/(B_L^2 + f^2).
    struct PhaseNoiseModel {
        double k2 = 0.0;          // rad^2 * Hz
        double k3 = 0.0;          // rad^2 * Hz^2
        double floor = 0.0;       // rad^2 / Hz
        double loop_bw_hz = 1e7;  // B_L

        void validate() const
        {
            if (k2 < 0.0 || k3 < 0.0 || floor < 0.0)
                throw std::invalid_argument("PhaseNoiseModel: coefficients must be >= 0");
            if (!(loop_bw_hz > 0.0))
                throw std::invalid_argument("PhaseNoiseModel: loop_bw_hz must be positive");
        }

        // Residual PSD after the loop. Finite at f = 0 for the k2 term
        // (limit k2/B_L^2); the k3 term diverges there and is reported as such.
        double residual_psd(double f_hz) const
        {
            const double f2 = sq(f_hz);
            const double hp = f2 / (sq(loop_bw_hz) + f2);
            double v = floor * hp + k2 / (sq(loop_bw_hz) + f2);
            if (k3 > 0.0) {
                if (f_hz == 0.0)
                    return std::numeric_limits<double>::infinity();
                v += k3 / (std::fabs(f_hz) * (sq(loop_bw_hz) + f2));
            }
            return v;
        }
    };

    inline double s_phi_res(double f_hz, const PhaseNoiseModel& model)
    {
        return model.residual_psd(f_hz);
    }

    namespace detail
    {
        // Exact antiderivatives of the residual PSD terms on f >= 0.
        inline double anti_k2(double f, double bl) { return std::atan(f / bl) / bl; }
        inline double anti_floor(double f, double bl) { return f - bl * std::atan(f / bl); }
        inline double anti_k3(double f, double bl)
        {
            // d/df [ ln(f^2/(bl^2+f^2)) / (2 bl^2) ] = 1/(f (bl^2+f^2)), f > 0
            return std::log(sq(f) / (sq(bl) + sq(f))) / (2.0 * sq(bl));
        }

        // Mean of the residual PSD over [a, b]. Cells whose closure touches
        // f = 0 fall back to the midpoint value for the k3 term: after the
        // loop high-pass that term still behaves as 1/|f| near DC, which is
        // not integrable, so its DC cell is pinned by convention rather than
        // averaged. All other terms use closed-form averages.
        inline double cell_avg_phase_noise(double a, double b, const PhaseNoiseModel& m)
        {
            const double w = b - a;
            if (!(w > 0.0))
                return 0.0;
            const double bl = m.loop_bw_hz;
            double v = m.k2 * (anti_k2(b, bl) - anti_k2(a, bl)) / w +
                       m.floor * (anti_floor(b, bl) - anti_floor(a, bl)) / w;
            if (m.k3 > 0.0) {
                if (a >= 0.0 ? (a > 0.0) : (b < 0.0)) {
                    const double lo = std::min(std::fabs(a), std::fabs(b));
                    const double hi = std::max(std::fabs(a), std::fabs(b));
                    v += m.k3 * (anti_k3(hi, bl) - anti_k3(lo, bl)) / w;
                } else {
                    const double fm = 0.5 * (a + b);
                    const double af = std::fabs(fm) > 0.0 ? std::fabs(fm) : 0.25 * w;
                    v += m.k3 / (af * (sq(bl) + sq(af)));
                }
            }
            return v;
        }
    }

    // Residual phase variance over the band: sum of exact cell averages times
    // the cell width, i.e. the same number a PSD built on this grid integrates
    // to. For k2/floor-only models this equals the continuous integral exactly.
    inline double sigma_phi_res_var(const PhaseNoiseModel& model, const SpectralGrid& grid)
    {
        model.validate();
        grid.validate();
        const double df = grid.bin_spacing_hz();
        double sum = 0.0;
        for (int k = 0; k < grid.n_bins; ++k)
            sum += detail::cell_avg_phase_noise(grid.edge_hz(k), grid.edge_hz(k + 1), model) * df;
        return sum;
    }

    // Solve k2 so that the residual variance over the band hits target_var
    // with the given k3/floor contributions already in place.
    inline PhaseNoiseModel calibrated_phase_noise(double target_var, const SpectralGrid& grid,
                                                  double loop_bw_hz = 1e7,
                                                  double k3 = 0.0, double floor = 0.0)
    {
        PhaseNoiseModel m{0.0, k3, floor, loop_bw_hz};
        const double base = sigma_phi_res_var(m, grid);
        PhaseNoiseModel unit{1.0, 0.0, 0.0, loop_bw_hz};
        const double per_k2 = sigma_phi_res_var(unit, grid);
        if (base > target_var)
            throw std::invalid_argument(
                "calibrated_phase_noise: k3/floor terms already exceed the target variance");
        m.k2 = (target_var - base) / per_k2;
        return m;
    }

    // ---- residual sideband modulation surrogate ----

    // Comb of Gaussian lines at +-k * symbol_rate. total_power_ratio is the
    // fraction of the reference signal power leaking into the comb;
    // n_harmonics = 0 disables the term entirely.
    struct RsmModel {
        double symbol_rate_hz = 1e9;
        double total_power_ratio = 0.0;
        double line_width_hz = 1e6;
        int n_harmonics = 0;

        void validate() const
        {
            if (!(symbol_rate_hz > 0.0) || !(line_width_hz > 0.0))
                throw std::invalid_argument("RsmModel: rates and widths must be positive");
            if (total_power_ratio < 0.0 || n_harmonics < 0)
                throw std::invalid_argument("RsmModel: power ratio and harmonics must be >= 0");
        }

        bool enabled() const { return n_harmonics > 0 && total_power_ratio > 0.0; }
    };

    inline double s_rsm(double f_offset_hz, const RsmModel& model, double p_sig_ref_w)
    {
        if (!model.enabled())
            return 0.0;
        const double share = model.total_power_ratio * p_sig_ref_w / (2.0 * model.n_harmonics);
        const double w = model.line_width_hz;
        const double norm = share / (w * std::sqrt(two_pi));
        double v = 0.0;
        for (int k = 1; k <= model.n_harmonics; ++k) {
            const double fk = k * model.symbol_rate_hz;
            v += norm * std::exp(-0.5 * sq((f_offset_hz - fk) / w));
            v += norm * std::exp(-0.5 * sq((f_offset_hz + fk) / w));
        }
        return v;
    }

    namespace detail
    {
        inline double cell_avg_rsm(double a, double b, const RsmModel& m, double p_ref)
        {
            if (!m.enabled())
                return 0.0;
            const double share = m.total_power_ratio * p_ref / (2.0 * m.n_harmonics);
            const double w = m.line_width_hz;
            const double inv = 1.0 / (w * std::sqrt(2.0));
            double mass = 0.0;
            for (int k = 1; k <= m.n_harmonics; ++k) {
                for (double fk : {k * m.symbol_rate_hz, -k * m.symbol_rate_hz}) {
                    mass += 0.5 * share *
                            (std::erf((b - fk) * inv) - std::erf((a - fk) * inv));
                }
            }
            return mass / (b - a);
        }
    }

    // ---- unified noise PSDs ----

    enum class NoiseConvention { comm, sense };

    // Sampled additive noise PSD. `values` holds the cell-average over each
    // grid cell, so value * bin_spacing sums to the band power of each
    // component even when a feature (phase-noise line, comb tooth) is narrower
    // than a cell. `refined` holds the same PSD on a refine-times finer cell
    // split; the time-domain covariance builder needs that extra resolution
    // (see exact_time_fim) while every bin-sum consumer uses `values`.
    struct NoisePsd {
        SpectralGrid grid;
        std::vector<double> values;
        NoiseConvention convention = NoiseConvention::comm;
        std::vector<double> refined;
        int refine = 1;
    };

    struct NoiseInputs {
        double n0 = 1.0;                 // thermal floor, W/Hz
        double sigma_gamma_psd = 0.0;    // flat distortion PSD, W/Hz
        double sigma_dse_psd = 0.0;      // flat kinematic-mismatch PSD, W/Hz
        RsmModel rsm{};
        double rsm_p_sig_ref_w = 0.0;    // reference power the comb ratio applies to
        PhaseNoiseModel phase_noise{};
        double pn_ref_power_w = 1.0;     // carrier power multiplying the rad^2/Hz PSD
    };

    inline NoisePsd build_noise_psd(NoiseConvention convention, const NoiseInputs& in,
                                    const SpectralGrid& grid, int refine = 8)
    {
        grid.validate();
        in.rsm.validate();
        in.phase_noise.validate();
        if (refine < 1)
            throw std::invalid_argument("build_noise_psd: refine must be >= 1");

        NoisePsd psd;
        psd.grid = grid;
        psd.convention = convention;
        psd.refine = refine;

        const int n_fine = grid.n_bins * refine;
        const double df_fine = grid.bandwidth_hz / n_fine;
        const double half = grid.bandwidth_hz / 2.0;

        std::vector<double> fine(n_fine, in.n0 + in.sigma_gamma_psd + in.sigma_dse_psd);

        if (in.rsm.enabled()) {
            std::vector<double> comb(n_fine);
            double mass = 0.0;
            for (int j = 0; j < n_fine; ++j) {
                const double a = -half + j * df_fine;
                comb[j] = detail::cell_avg_rsm(a, a + df_fine, in.rsm, in.rsm_p_sig_ref_w);
                mass += comb[j] * df_fine;
            }
            // Renormalize so the in-band power equals the requested ratio
            // exactly; lines clipped by the band edge are scaled back up.
            const double target = in.rsm.total_power_ratio * in.rsm_p_sig_ref_w;
            if (mass > 0.0) {
                const double scale = target / mass;
                for (int j = 0; j < n_fine; ++j)
                    fine[j] += comb[j] * scale;
            }
        }

        // Coarse values aggregate the fine cells; exact for every term above
        // because the cell averages come from closed-form antiderivatives.
        psd.values.assign(grid.n_bins, 0.0);
        for (int k = 0; k < grid.n_bins; ++k) {
            double acc = 0.0;
            for (int j = 0; j < refine; ++j)
                acc += fine[k * refine + j];
            psd.values[k] = acc / refine;
        }

        if (convention == NoiseConvention::sense) {
            for (int j = 0; j < n_fine; ++j) {
                const double a = -half + j * df_fine;
                fine[j] += in.pn_ref_power_w *
                           detail::cell_avg_phase_noise(a, a + df_fine, in.phase_noise);
            }
            // The phase-noise component is added to the coarse cells directly
            // (not aggregated from the fine split) so the bin sum matches
            // sigma_phi_res_var exactly even when the k3 DC-cell convention
            // makes the two resolutions disagree in the two cells at DC.
            for (int k = 0; k < grid.n_bins; ++k)
                psd.values[k] += in.pn_ref_power_w *
                                 detail::cell_avg_phase_noise(grid.edge_hz(k),
                                                              grid.edge_hz(k + 1),
                                                              in.phase_noise);
        }

        psd.refined = std::move(fine);

        for (int k = 0; k < grid.n_bins; ++k)
            if (!(psd.values[k] > 0.0))
                throw NonPositivePsd("build_noise_psd: bin " + std::to_string(k) +
                                     " is not positive");
        for (int j = 0; j < n_fine; ++j)
            if (!(psd.refined[j] > 0.0))
                throw NonPositivePsd("build_noise_psd: refined cell " + std::to_string(j) +
                                     " is not positive");
        return psd;
    }

    // Band power of a sampled PSD (bin sum).
    inline double band_power(const NoisePsd& psd)
    {
        double sum = 0.0;
        for (double v : psd.values)
            sum += v;
        return sum * psd.grid.bin_spacing_hz();
    }
}
