#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "thzisac/array_model.hpp"
#include "thzisac/errors.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/spectral.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    // Baseband signal magnitude spectrum on a grid, |S(f_k)| per bin, plus the
    // delay/Doppler point the Fisher information is evaluated at. Energy is
    // the bin sum of |S|^2 * bin_spacing by definition.
    struct SensingSignalSpec {
        SpectralGrid grid;
        std::vector<double> amplitude;
        double energy = 0.0;
        double tau_s = 0.0;
        double doppler_hz = 0.0;

        void validate() const
        {
            grid.validate();
            if (static_cast<int>(amplitude.size()) != grid.n_bins)
                throw std::invalid_argument("SensingSignalSpec: amplitude size != n_bins");
            double e = 0.0;
            for (double a : amplitude)
                e += sq(a);
            e *= grid.bin_spacing_hz();
            const double scale = std::max(std::fabs(e), std::fabs(energy));
            if (scale > 0.0 && std::fabs(e - energy) > 1e-9 * scale)
                throw std::invalid_argument("SensingSignalSpec: energy field does not "
                                            "match the bin sum of |S|^2");
        }
    };

    // Probing signal shaped by the array response: |S|^2 = (e_bb/B) * G_ideal
    // * rho_static * eta_bsq(f). The tracked-loop coherence loss is excluded
    // here; it lives in the sensing noise PSD instead (single counting).
    inline SensingSignalSpec make_array_signal(const ArrayConfig& cfg,
                                               const HardwareProfile& hw,
                                               double e_bb_j, const SpectralGrid& grid)
    {
        SensingSignalSpec s;
        s.grid = grid;
        s.amplitude.resize(grid.n_bins);
        double e = 0.0;
        for (int k = 0; k < grid.n_bins; ++k) {
            const double a = amplitude_profile(grid.midpoint_hz(k), cfg, hw) *
                             std::sqrt(e_bb_j / grid.bandwidth_hz);
            s.amplitude[k] = a;
            e += sq(a);
        }
        s.energy = e * grid.bin_spacing_hz();
        return s;
    }

    // Flat spectrum with the given total energy.
    inline SensingSignalSpec make_flat_signal(double energy_j, const SpectralGrid& grid)
    {
        SensingSignalSpec s;
        s.grid = grid;
        s.amplitude.assign(grid.n_bins, std::sqrt(energy_j / grid.bandwidth_hz));
        s.energy = 0.0;
        for (double a : s.amplitude)
            s.energy += sq(a);
        s.energy *= grid.bin_spacing_hz();
        return s;
    }

    enum class FimMethod { whittle, exact_time };

    struct FimResult {
        double j_tau_tau = 0.0;                        // 1/s^2
        std::array<std::array<double, 2>, 2> fim{};    // over (tau, f_D)
        bool has_doppler = false;
        double crb_tau = 0.0;                          // s^2
        double rmse_range_m = 0.0;
        FimMethod method = FimMethod::whittle;
    };

    inline double rmse_range(double crb_tau_s2)
    {
        if (crb_tau_s2 < 0.0)
            throw std::invalid_argument("rmse_range: crb must be >= 0");
        // Factor 1/2: cooperative two-way time transfer halves the effective
        // one-way delay error.
        return 0.5 * speed_of_light_m_s * std::sqrt(crb_tau_s2);
    }

    namespace detail
    {
        inline void require_sense(const NoisePsd& noise, const char* who)
        {
            if (noise.convention != NoiseConvention::sense)
                throw ConventionMismatch(std::string(who) +
                                         ": needs a sense-convention PSD (the residual "
                                         "phase noise must be additive here)");
        }

        inline void require_same_grid(const SensingSignalSpec& sig, const NoisePsd& noise,
                                      const char* who)
        {
            if (!(sig.grid == noise.grid))
                throw std::invalid_argument(std::string(who) +
                                            ": signal and noise grids differ");
        }
    }

    // Frequency-domain (Whittle) Fisher information for the delay: the bin-sum
    // form of 8 pi^2 Integral f^2 |S|^2 / N df.
    inline FimResult whittle_fim_tau(const SensingSignalSpec& sig, const NoisePsd& noise)
    {
        sig.validate();
        detail::require_sense(noise, "whittle_fim_tau");
        detail::require_same_grid(sig, noise, "whittle_fim_tau");

        const double df = sig.grid.bin_spacing_hz();
        double j = 0.0;
        for (int k = 0; k < sig.grid.n_bins; ++k) {
            const double f = sig.grid.midpoint_hz(k);
            j += sq(f) * sq(sig.amplitude[k]) / noise.values[k];
        }
        j *= 8.0 * sq(pi) * df;

        FimResult r;
        r.method = FimMethod::whittle;
        r.j_tau_tau = j;
        r.fim[0][0] = j;
        r.crb_tau = j > 0.0 ? 1.0 / j : std::numeric_limits<double>::infinity();
        r.rmse_range_m = j > 0.0 ? rmse_range(r.crb_tau)
                                 : std::numeric_limits<double>::infinity();
        return r;
    }

    // Closed-form delay information for a flat spectrum in white noise.
    inline double fim_awgn_closed(double energy_j, double n0_w_hz, double bandwidth_hz)
    {
        if (!(energy_j > 0.0) || !(n0_w_hz > 0.0) || !(bandwidth_hz > 0.0))
            throw std::invalid_argument("fim_awgn_closed: inputs must be positive");
        return 2.0 * sq(pi) * energy_j * sq(bandwidth_hz) / (3.0 * n0_w_hz);
    }

    inline double rmse_awgn_closed(double energy_j, double n0_w_hz, double bandwidth_hz)
    {
        return rmse_range(1.0 / fim_awgn_closed(energy_j, n0_w_hz, bandwidth_hz));
    }

    // Noise-weighted second spectral moment: Integral f^2 W(f)/N(f) df with
    // W = |S|^2 / (E/B).
    inline double weighted_moment(const SensingSignalSpec& sig, const NoisePsd& noise)
    {
        sig.validate();
        detail::require_same_grid(sig, noise, "weighted_moment");
        if (!(sig.energy > 0.0))
            throw std::invalid_argument("weighted_moment: zero-energy signal");
        const double df = sig.grid.bin_spacing_hz();
        const double w_scale = sig.grid.bandwidth_hz / sig.energy;
        double m = 0.0;
        for (int k = 0; k < sig.grid.n_bins; ++k) {
            const double f = sig.grid.midpoint_hz(k);
            m += sq(f) * sq(sig.amplitude[k]) * w_scale / noise.values[k];
        }
        return m * df;
    }

    // Exact time-domain Fisher information with a dense Toeplitz noise
    // covariance.
    //
    // The covariance lags are computed from the refined sub-bin PSD averages:
    // r[m] = sum_j N_fine[j] e^{j 2 pi f_j m T_s} df_fine. Building them from
    // the N coarse bins instead would make the lag sequence N-periodic, the
    // Toeplitz matrix exactly circulant, and this method algebraically
    // identical to the Whittle sum -- no longer an independent check. The
    // sub-bin resolution keeps narrow spectral features genuinely non-circulant
    // while preserving their integrated power.
    inline FimResult exact_time_fim(const SensingSignalSpec& sig, const NoisePsd& noise,
                                    bool include_doppler = false)
    {
        sig.validate();
        detail::require_sense(noise, "exact_time_fim");
        detail::require_same_grid(sig, noise, "exact_time_fim");
        const int n = sig.grid.n_bins;
        if (n > 8192)
            throw std::invalid_argument("exact_time_fim: grid larger than 8192 bins");

        using cplx = std::complex<double>;
        const double ts = sig.grid.sample_period_s();
        const double df = sig.grid.bin_spacing_hz();
        const int n_fine = static_cast<int>(noise.refined.size());
        const double df_fine = sig.grid.bandwidth_hz / n_fine;

        // Lags via per-cell phase rotators (incremental complex exponentials).
        std::vector<cplx> rot(n_fine), cur(n_fine, cplx(1.0, 0.0));
        for (int j = 0; j < n_fine; ++j) {
            const double f = -sig.grid.bandwidth_hz / 2.0 + (j + 0.5) * df_fine;
            rot[j] = std::polar(1.0, two_pi * f * ts);
        }
        std::vector<cplx> lag(n);
        for (int m = 0; m < n; ++m) {
            cplx acc(0.0, 0.0);
            for (int j = 0; j < n_fine; ++j) {
                acc += noise.refined[j] * cur[j];
                cur[j] *= rot[j];
            }
            lag[m] = acc * df_fine;
        }

        if (!(lag[0].real() > 0.0))
            throw CovarianceNotPD("exact_time_fim: non-positive zero lag");

        Eigen::MatrixXcd cov(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j2 = 0; j2 <= i; ++j2) {
                cov(i, j2) = lag[i - j2];
                cov(j2, i) = std::conj(lag[i - j2]);
            }
        }

        Eigen::LLT<Eigen::MatrixXcd> llt(cov);
        if (llt.info() != Eigen::Success)
            throw CovarianceNotPD("exact_time_fim: Cholesky factorization failed");

        // Time-domain signal and parameter derivatives at t_n = n T_s.
        Eigen::VectorXcd d_tau(n), d_dop(n);
        std::vector<cplx> frot(n), fcur(n);
        for (int k = 0; k < n; ++k) {
            const double f = sig.grid.midpoint_hz(k);
            frot[k] = std::polar(1.0, two_pi * f * ts);
            fcur[k] = std::polar(1.0, -two_pi * f * sig.tau_s);
        }
        for (int i = 0; i < n; ++i) {
            cplx s(0.0, 0.0), dt(0.0, 0.0);
            for (int k = 0; k < n; ++k) {
                const double f = sig.grid.midpoint_hz(k);
                const cplx term = sig.amplitude[k] * fcur[k];
                s += term;
                dt += cplx(0.0, -two_pi * f) * term;
                fcur[k] *= frot[k];
            }
            const double t = i * ts;
            const cplx dop = std::polar(1.0, two_pi * sig.doppler_hz * t);
            d_tau(i) = dt * df * dop;
            d_dop(i) = cplx(0.0, two_pi * t) * s * df * dop;
        }

        FimResult r;
        r.method = FimMethod::exact_time;
        const Eigen::VectorXcd x_tau = llt.solve(d_tau);
        r.j_tau_tau = 2.0 * d_tau.dot(x_tau).real();
        r.fim[0][0] = r.j_tau_tau;

        if (include_doppler) {
            const Eigen::VectorXcd x_dop = llt.solve(d_dop);
            r.fim[0][1] = 2.0 * d_tau.dot(x_dop).real();
            r.fim[1][0] = r.fim[0][1];
            r.fim[1][1] = 2.0 * d_dop.dot(x_dop).real();
            r.has_doppler = true;
            const double det = r.fim[0][0] * r.fim[1][1] - sq(r.fim[0][1]);
            r.crb_tau = det > 0.0 ? r.fim[1][1] / det
                                  : std::numeric_limits<double>::infinity();
        } else {
            r.crb_tau = r.j_tau_tau > 0.0 ? 1.0 / r.j_tau_tau
                                          : std::numeric_limits<double>::infinity();
        }
        r.rmse_range_m = std::isfinite(r.crb_tau)
                             ? rmse_range(r.crb_tau)
                             : std::numeric_limits<double>::infinity();
        return r;
    }

    // Bayesian CRB for the delay. Without a prior this is the scalar
    // weighted-moment route, algebraically (B/E)/(8 pi^2 M2); with a prior
    // precision matrix the 2x2 delay/Doppler data information is combined
    // with it and inverted.
    inline double bcrlb(const SensingSignalSpec& sig, const NoisePsd& noise,
                        std::optional<std::array<std::array<double, 2>, 2>>
                            prior_precision = std::nullopt)
    {
        detail::require_sense(noise, "bcrlb");
        if (!prior_precision) {
            const double m2 = weighted_moment(sig, noise);
            if (!(m2 > 0.0))
                throw SingularFim("bcrlb: vanishing weighted moment");
            return (sig.grid.bandwidth_hz / sig.energy) / (8.0 * sq(pi) * m2);
        }

        const FimResult data = exact_time_fim(sig, noise, true);
        const auto& p = *prior_precision;
        const double a = data.fim[0][0] + p[0][0];
        const double b = data.fim[0][1] + p[0][1];
        const double c = data.fim[1][0] + p[1][0];
        const double d = data.fim[1][1] + p[1][1];
        const double det = a * d - b * c;
        const double scale = std::max({std::fabs(a * d), std::fabs(b * c), 1.0});
        if (!(std::fabs(det) > 1e-14 * scale))
            throw SingularFim("bcrlb: combined information matrix is singular");
        return d / det;   // [ (F_D + F_P)^{-1} ]_{tau,tau}
    }
}
