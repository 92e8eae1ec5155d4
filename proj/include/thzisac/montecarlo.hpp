#pragma once

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <thread>
#include <vector>

#include "thzisac/array_model.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/rng.hpp"
#include "thzisac/sensing.hpp"
#include "thzisac/stats.hpp"

namespace thzisac
{
    // Monte-Carlo check of the multiplicative phase-noise decomposition
    // y = B x + d with B = E[e^{j phi}] = e^{-sigma^2/2}: the distortion d is
    // uncorrelated with x and carries power (1 - e^{-sigma^2}) per unit
    // signal power.
    struct BussgangMcResult {
        double sigma_phi_var = 0.0;
        std::uint64_t n_samples = 0;
        double gain_est = 0.0;
        double gain_theory = 0.0;
        double gain_se = 0.0;
        double dist_power_est = 0.0;
        double dist_power_theory = 0.0;
        double dist_power_se = 0.0;
        double cross_re = 0.0;
        double cross_im = 0.0;
        double cross_se = 0.0;
        bool gain_ok = false;
        bool dist_ok = false;
        bool cross_ok = false;

        bool all_ok() const { return gain_ok && dist_ok && cross_ok; }
    };

    inline BussgangMcResult mc_bussgang(double sigma_phi_var, std::uint64_t n_samples,
                                        std::uint64_t seed)
    {
        if (sigma_phi_var < 0.0)
            throw std::invalid_argument("mc_bussgang: negative variance");
        if (n_samples < 100)
            throw std::invalid_argument("mc_bussgang: need at least 100 samples");

        using cplx = std::complex<double>;
        const double sigma = std::sqrt(sigma_phi_var);
        const double b_th = std::exp(-sigma_phi_var / 2.0);
        const SplitMix64 sx_re = make_stream(seed, 0);
        const SplitMix64 sx_im = make_stream(seed, 1);
        const SplitMix64 sphi = make_stream(seed, 2);

        // Per-sample accumulators for the three delta-method standard errors.
        double sum_w = 0.0, sum_z = 0.0, sum_q = 0.0;
        double sum_cr = 0.0, sum_ci = 0.0;
        double ss_z = 0.0, ss_q = 0.0, ss_cr = 0.0, ss_ci = 0.0;
        std::vector<double> zs(n_samples), qs(n_samples), crs(n_samples),
            cis(n_samples), ws(n_samples);
        for (std::uint64_t i = 0; i < n_samples; ++i) {
            const cplx x(sx_re.normal(i) / std::sqrt(2.0),
                         sx_im.normal(i) / std::sqrt(2.0));
            const double phi = sigma * sphi.normal(i);
            const cplx y = std::polar(1.0, phi) * x;
            const cplx d = y - b_th * x;
            const double w = std::norm(x);
            const cplx dxc = d * std::conj(x);
            ws[i] = w;
            zs[i] = (y * std::conj(x)).real();
            qs[i] = std::norm(d);
            crs[i] = dxc.real();
            cis[i] = dxc.imag();
            sum_w += w;
            sum_z += zs[i];
            sum_q += qs[i];
            sum_cr += crs[i];
            sum_ci += cis[i];
        }

        BussgangMcResult r;
        r.sigma_phi_var = sigma_phi_var;
        r.n_samples = n_samples;
        r.gain_theory = b_th;
        r.dist_power_theory = 1.0 - std::exp(-sigma_phi_var);
        const double w_bar = sum_w / static_cast<double>(n_samples);
        r.gain_est = sum_z / sum_w;
        r.dist_power_est = sum_q / sum_w;
        r.cross_re = sum_cr / sum_w;
        r.cross_im = sum_ci / sum_w;

        // Delta-method standard error of a ratio-of-means estimate a/w:
        // sqrt(Var(a_i - (a/w) w_i) / n) / w_bar.
        for (std::uint64_t i = 0; i < n_samples; ++i) {
            ss_z += sq(zs[i] - r.gain_est * ws[i]);
            ss_q += sq(qs[i] - r.dist_power_est * ws[i]);
            ss_cr += sq(crs[i] - r.cross_re * ws[i]);
            ss_ci += sq(cis[i] - r.cross_im * ws[i]);
        }
        const double nn = static_cast<double>(n_samples);
        r.gain_se = std::sqrt(ss_z / (nn - 1.0) / nn) / w_bar;
        r.dist_power_se = std::sqrt(ss_q / (nn - 1.0) / nn) / w_bar;
        r.cross_se = std::sqrt((ss_cr + ss_ci) / (nn - 1.0) / nn) / w_bar;

        r.gain_ok = std::fabs(r.gain_est - r.gain_theory) <= 3.0 * r.gain_se;
        r.dist_ok = std::fabs(r.dist_power_est - r.dist_power_theory) <=
                    3.0 * r.dist_power_se;
        r.cross_ok = std::hypot(r.cross_re, r.cross_im) <= 3.0 * r.cross_se;
        return r;
    }

    // ------------------------------------------------------------------
    // Whittle vs exact-time cross-validation over aperture / fractional
    // bandwidth.

    struct ValidationPoint {
        double aperture_wavelengths = 0.0;
        double frac_bandwidth = 0.0;
        double j_whittle = 0.0;
        double j_exact = 0.0;
        double rel_err = 0.0;
    };

    struct ValidationGridResult {
        std::vector<ValidationPoint> points;
        double max_rel_err = 0.0;
        double slope_vs_log_frac_bw = 0.0;   // linear error vs ln(B/fc)
        double slope_vs_log_aperture = 0.0;  // linear error vs ln(L/lambda)
    };

    struct ValidationGridParams {
        double carrier_hz = 140e9;
        double steer_angle_rad = pi / 6.0;
        double aperture_min = 3.0;
        double aperture_max = 25.0;
        double frac_bw_min = 0.02;
        double frac_bw_max = 0.15;
        int n_aperture = 10;
        int n_frac_bw = 10;
        int n_bins = 1024;
        double pn_power_fraction = 0.025;   // of in-band thermal power
        double pn_loop_bw_hz = 1e7;
        int n_threads = 0;                  // 0: hardware concurrency
    };

    // One grid point: unit-scale probing spectrum |S|^2 = eta_bsq(f) in
    // thermal noise plus a Lorentzian phase-noise pedestal carrying the given
    // fraction of the in-band thermal power. The route discrepancy is
    // invariant to the overall signal scale, so the unit spectrum loses no
    // generality.
    inline ValidationPoint validation_point(double aperture_wl, double frac_bw,
                                            const ValidationGridParams& p)
    {
        ArrayConfig cfg;
        cfg.n_tx = cfg.n_rx = 64;
        cfg.spacing_wavelengths = aperture_wl / 64.0;
        cfg.carrier_hz = p.carrier_hz;
        cfg.steer_angle_rad = p.steer_angle_rad;
        cfg.bandwidth_hz = frac_bw * p.carrier_hz;

        SpectralGrid grid{p.n_bins, cfg.bandwidth_hz};
        SensingSignalSpec sig;
        sig.grid = grid;
        sig.amplitude.resize(grid.n_bins);
        double e = 0.0;
        for (int k = 0; k < grid.n_bins; ++k) {
            const double a = std::sqrt(eta_bsq(grid.midpoint_hz(k), cfg));
            sig.amplitude[k] = a;
            e += sq(a);
        }
        sig.energy = e * grid.bin_spacing_hz();

        const double i_unit = 2.0 / p.pn_loop_bw_hz *
                              std::atan(cfg.bandwidth_hz / (2.0 * p.pn_loop_bw_hz));
        NoiseInputs in;
        in.n0 = 1.0;
        in.phase_noise = PhaseNoiseModel{
            p.pn_power_fraction * cfg.bandwidth_hz / i_unit, 0.0, 0.0,
            p.pn_loop_bw_hz};
        in.pn_ref_power_w = 1.0;
        const NoisePsd noise = build_noise_psd(NoiseConvention::sense, in, grid);

        ValidationPoint out;
        out.aperture_wavelengths = aperture_wl;
        out.frac_bandwidth = frac_bw;
        out.j_whittle = whittle_fim_tau(sig, noise).j_tau_tau;
        out.j_exact = exact_time_fim(sig, noise).j_tau_tau;
        out.rel_err = std::fabs(out.j_whittle - out.j_exact) / out.j_exact;
        return out;
    }

    inline ValidationGridResult whittle_validation_grid(const ValidationGridParams& p)
    {
        if (p.n_aperture < 2 || p.n_frac_bw < 2)
            throw std::invalid_argument("whittle_validation_grid: need a 2x2 grid at least");
        const int total = p.n_aperture * p.n_frac_bw;
        std::vector<ValidationPoint> pts(total);

        // Row-major over (aperture, frac_bw); each worker claims indexed
        // slots so the output order is scheduling-independent.
        std::atomic<int> next{0};
        auto work = [&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= total)
                    return;
                const int ia = i / p.n_frac_bw;
                const int ib = i % p.n_frac_bw;
                const double l = p.aperture_min +
                                 (p.aperture_max - p.aperture_min) * ia /
                                     (p.n_aperture - 1);
                const double r = p.frac_bw_min +
                                 (p.frac_bw_max - p.frac_bw_min) * ib /
                                     (p.n_frac_bw - 1);
                pts[i] = validation_point(l, r, p);
            }
        };
        int n_threads = p.n_threads > 0
                            ? p.n_threads
                            : static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads < 1)
            n_threads = 1;
        n_threads = std::min(n_threads, total);
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t)
            pool.emplace_back(work);
        for (auto& th : pool)
            th.join();

        ValidationGridResult res;
        res.points = std::move(pts);
        std::vector<double> log_r, log_l, err;
        for (const auto& q : res.points) {
            res.max_rel_err = std::max(res.max_rel_err, q.rel_err);
            log_r.push_back(std::log(q.frac_bandwidth));
            log_l.push_back(std::log(q.aperture_wavelengths));
            err.push_back(q.rel_err);
        }
        res.slope_vs_log_frac_bw = slope_fit(log_r, err).slope;
        res.slope_vs_log_aperture = slope_fit(log_l, err).slope;
        return res;
    }

    // ------------------------------------------------------------------
    // Array-size scaling of the ranging accuracy and of the critical SNR.

    struct MimoRow {
        int n_elements = 0;
        double g_ideal = 0.0;
        double eta_bsq_avg = 0.0;
        double rmse_m = 0.0;
        double snr_crit_uncorrelated = 0.0;
        double snr_crit_directional = 0.0;
    };

    struct MimoScalingResult {
        std::vector<MimoRow> rows;
        double rmse_slope = 0.0;        // log rmse vs log(Nt*Nr)
        double crit_unc_slope = 0.0;    // log snr_crit vs log N
        double crit_dir_slope = 0.0;
        double eta_bsq_avg_ref = 0.0;
    };

    // RMSE column: white-noise closed form at the squint-degraded effective
    // energy E(N) = N^2 rho_static eta_avg(N); the squint average is
    // re-evaluated at each aperture, which is what bends the slope away from
    // the ideal -1/2. Critical-SNR columns: per-element factors (including
    // the squint average) frozen at the reference geometry so the columns
    // isolate the pure array-size laws N^-2 and N^0.
    inline MimoScalingResult mimo_scaling_experiment(
        const ArrayConfig& ref_cfg, const HardwareProfile& hw, double gamma_total,
        const std::vector<int>& n_values = {8, 11, 16, 23, 32})
    {
        if (n_values.size() < 2)
            throw std::invalid_argument("mimo_scaling_experiment: need >= 2 sizes");
        if (!(gamma_total > 0.0))
            throw ZeroDistortion("mimo_scaling_experiment: critical SNR needs "
                                 "a positive distortion factor");

        MimoScalingResult res;
        res.eta_bsq_avg_ref = eta_bsq_avg(ref_cfg, AveragingMethod::numeric);

        std::vector<double> lg, lr, ln_, lcu, lcd;
        for (int n : n_values) {
            ArrayConfig cfg = ref_cfg;
            cfg.n_tx = cfg.n_rx = n;
            const GainBreakdown gb = gain_breakdown(cfg, hw);

            MimoRow row;
            row.n_elements = n;
            row.g_ideal = gb.g_ideal;
            row.eta_bsq_avg = gb.eta_bsq_avg;
            row.rmse_m = rmse_awgn_closed(
                gb.g_ideal * gb.rho_static() * gb.eta_bsq_avg, 1.0,
                cfg.bandwidth_hz);
            const double g_ref_avg =
                gb.g_ideal * gb.rho_static() * res.eta_bsq_avg_ref;
            row.snr_crit_uncorrelated = 1.0 / (g_ref_avg * gamma_total);
            row.snr_crit_directional =
                1.0 / (gb.rho_static() * res.eta_bsq_avg_ref * gamma_total);
            res.rows.push_back(row);

            lg.push_back(std::log(row.g_ideal));
            lr.push_back(std::log(row.rmse_m));
            ln_.push_back(std::log(static_cast<double>(n)));
            lcu.push_back(std::log(row.snr_crit_uncorrelated));
            lcd.push_back(std::log(row.snr_crit_directional));
        }
        res.rmse_slope = slope_fit(lg, lr).slope;
        res.crit_unc_slope = slope_fit(ln_, lcu).slope;
        res.crit_dir_slope = slope_fit(ln_, lcd).slope;
        return res;
    }
}
