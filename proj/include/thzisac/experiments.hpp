#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "thzisac/capacity.hpp"
#include "thzisac/config.hpp"
#include "thzisac/csv.hpp"
#include "thzisac/montecarlo.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/sensing.hpp"
#include "thzisac/tradeoff.hpp"

namespace thzisac
{
    struct ExperimentOutput {
        std::vector<std::pair<std::string, CsvTable>> tables;   // file -> table
        std::vector<std::pair<std::string, std::string>> plots; // file -> script
        std::vector<std::string> summary;
        bool passed = true;
    };

    namespace detail
    {
        inline std::string fmt(double v) { return csv_cell(v); }

        inline void name_value(CsvTable& t, const char* name, double v)
        {
            t.add(name, v);
        }
    }

    // ------------------------------------------------------------------
    // link-budget: the full gain cascade and distortion budget at one
    // operating point, plus the capacity ceilings they imply.

    inline ExperimentOutput run_link_budget(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();
        const double sigma = s.tracking.target_var;
        const double csat = c_sat(bud, sigma);
        const double crit_unc = snr_crit(gb, bud, DistortionMode::uncorrelated);
        const double crit_dir = snr_crit(gb, bud, DistortionMode::directional);

        CsvTable t({"name", "value"});
        using detail::name_value;
        name_value(t, "n_tx", s.array.n_tx);
        name_value(t, "n_rx", s.array.n_rx);
        name_value(t, "aperture_wavelengths", s.array.aperture_wavelengths());
        name_value(t, "kappa", kappa(s.array));
        name_value(t, "g_ideal", gb.g_ideal);
        name_value(t, "eta_bsq_avg", gb.eta_bsq_avg);
        name_value(t, "rho_q", gb.rho_q);
        name_value(t, "rho_ape", gb.rho_ape);
        name_value(t, "rho_a", gb.rho_a);
        name_value(t, "rho_pn", gb.rho_pn);
        name_value(t, "rho_static", gb.rho_static());
        name_value(t, "g_sig_avg", gb.g_sig_avg);
        name_value(t, "gamma_pa", bud.gamma_pa);
        name_value(t, "gamma_adc", bud.gamma_adc);
        name_value(t, "gamma_iq", bud.gamma_iq);
        name_value(t, "gamma_lo", bud.gamma_lo);
        name_value(t, "gamma_total", bud.gamma_total);
        name_value(t, "gamma_total_db", linear_to_db(bud.gamma_total));
        name_value(t, "pa_fraction", bud.pa_fraction());
        name_value(t, "sigma_phi_res_var", sigma);
        name_value(t, "c_sat_bits", csat);
        name_value(t, "snr_crit_uncorrelated_db", linear_to_db(crit_unc));
        name_value(t, "snr_crit_directional_db", linear_to_db(crit_dir));
        name_value(t, "path_loss_db", linear_to_db(path_loss(s.array)));
        name_value(t, "far_field_min_range_m", s.array.far_field_min_range_m());
        out.tables.emplace_back("link_budget.csv", std::move(t));

        out.summary = {
            "tier " + s.tier + ": g_ideal " + detail::fmt(gb.g_ideal) +
                ", eta_bsq_avg " + detail::fmt(gb.eta_bsq_avg) + ", rho_static " +
                detail::fmt(gb.rho_static()),
            "g_sig_avg " + detail::fmt(gb.g_sig_avg) + "  (" +
                detail::fmt(linear_to_db(gb.g_sig_avg)) + " dB)",
            "gamma_total " + detail::fmt(bud.gamma_total) + "  (" +
                detail::fmt(linear_to_db(bud.gamma_total)) + " dB), PA share " +
                detail::fmt(bud.pa_fraction()),
            "c_sat " + detail::fmt(csat) + " bits/s/Hz; snr_crit " +
                detail::fmt(linear_to_db(crit_unc)) + " dB (uncorrelated), " +
                detail::fmt(linear_to_db(crit_dir)) + " dB (directional)",
        };
        return out;
    }

    // ------------------------------------------------------------------
    // capacity-sweep: exact vs surrogate capacity over transmit SNR.

    inline ExperimentOutput run_capacity_sweep(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();

        CsvTable t({"snr_db", "c_exact", "c_jensen", "jensen_gap", "gap_taylor",
                    "c_sat"});
        double peak_gap = 0.0, peak_gap_snr_db = 0.0;
        const int n = s.sweep.snr_points;
        for (int i = 0; i < n; ++i) {
            const double snr_db =
                s.sweep.snr_db_min +
                (s.sweep.snr_db_max - s.sweep.snr_db_min) * i / (n - 1);
            LinkOperatingPoint op;
            op.snr0 = db_to_linear(snr_db);
            op.gain = gb;
            op.budget = bud;
            op.sigma_phi_res = s.tracking.target_var;
            op.rsm = s.rsm;
            const CapacityResult r = compute_capacity(op, s.array);
            const double gap_t = jensen_gap_taylor(op, s.array);
            t.add(snr_db, r.c_exact, r.c_jensen, r.jensen_gap, gap_t, r.c_sat);
            if (r.jensen_gap > peak_gap) {
                peak_gap = r.jensen_gap;
                peak_gap_snr_db = snr_db;
            }
        }
        out.tables.emplace_back("capacity_sweep.csv", t);

        const double crit_unc = snr_crit(gb, bud, DistortionMode::uncorrelated);
        const double crit_dir = snr_crit(gb, bud, DistortionMode::directional);
        PlotSpec ps;
        ps.kind = PlotKind::line;
        ps.csv_file = "capacity_sweep.csv";
        ps.x_col = "snr_db";
        ps.y_cols = {"c_exact", "c_jensen", "c_sat"};
        ps.title = "Capacity vs transmit SNR";
        ps.x_label = "SNR0 (dB)";
        ps.y_label = "bits/s/Hz";
        ps.h_lines = {{"c_sat", c_sat(bud, s.tracking.target_var)}};
        ps.v_lines = {{"snr_crit", linear_to_db(crit_unc)}};
        out.plots.emplace_back("capacity_sweep.gp", emit_plot_description(t, ps));

        out.summary = {
            "c_sat " + detail::fmt(c_sat(bud, s.tracking.target_var)) + " bits/s/Hz",
            "snr_crit " + detail::fmt(linear_to_db(crit_unc)) +
                " dB (uncorrelated), " + detail::fmt(linear_to_db(crit_dir)) +
                " dB (directional)",
            "peak jensen gap " + detail::fmt(peak_gap) + " bits/s/Hz at " +
                detail::fmt(peak_gap_snr_db) + " dB",
        };
        return out;
    }

    // ------------------------------------------------------------------
    // Shared sensing-noise construction: thermal floor, flat distortion and
    // sync terms, and the tracked phase-noise pedestal referenced to the
    // received carrier power.

    struct SensingToggles {
        bool hw = true;
        bool pn = true;
        bool dse = true;
    };

    struct ParetoPoint {
        double alpha = 0.0;
        double r_net = 0.0;
        double rmse_m = 0.0;
        double sigma_pn_var = 0.0;
        double sigma_dse_var = 0.0;
        bool feasible = true;
        bool dse_dominated = false;
    };

    inline double pareto_rmse(double alpha, const Scenario& s, const GainBreakdown& gb,
                              const DistortionBudget& bud,
                              const SensingToggles& tog = {})
    {
        check_alpha(alpha);
        const SpectralGrid grid = s.grid();
        const double snr0 = s.snr0();

        NoiseInputs in;
        in.n0 = 1.0;
        if (tog.hw)
            in.sigma_gamma_psd = snr0 * gb.g_sig_avg * bud.gamma_total;
        if (tog.dse)
            in.sigma_dse_psd = sigma_dse_var(alpha, s.resource.c_dse);
        if (tog.pn) {
            in.phase_noise = calibrated_phase_noise(
                sigma_pn_var(alpha, s.resource.c_pn), grid, s.tracking.loop_bw_hz);
            in.pn_ref_power_w = snr0 * gb.g_sig_avg * s.array.bandwidth_hz;
        }
        const NoisePsd noise = build_noise_psd(NoiseConvention::sense, in, grid);

        const double e_bb = alpha * snr0 * s.array.bandwidth_hz * s.resource.t_obs_s;
        const SensingSignalSpec sig = make_array_signal(s.array, s.hardware, e_bb, grid);
        return whittle_fim_tau(sig, noise).rmse_range_m;
    }

    inline ParetoPoint pareto_point(double alpha, const Scenario& s,
                                    const GainBreakdown& gb,
                                    const DistortionBudget& bud)
    {
        TradeoffParams tp{s.resource.c_pn, s.resource.c_dse, s.snr0(), gb.g_sig_avg,
                          bud.gamma_total};
        ParetoPoint p;
        p.alpha = alpha;
        p.sigma_pn_var = sigma_pn_var(alpha, tp.c_pn);
        p.sigma_dse_var = sigma_dse_var(alpha, tp.c_dse);
        p.r_net = r_net(alpha, tp);
        p.rmse_m = pareto_rmse(alpha, s, gb, bud);
        p.feasible = p.sigma_dse_var <= 1.0;
        p.dse_dominated = p.sigma_dse_var > p.sigma_pn_var;
        return p;
    }

    inline std::vector<std::size_t> frontier_indices(const std::vector<ParetoPoint>& pts)
    {
        std::vector<std::size_t> order(pts.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (pts[a].rmse_m != pts[b].rmse_m)
                return pts[a].rmse_m < pts[b].rmse_m;
            return pts[a].r_net > pts[b].r_net;
        });
        std::vector<std::size_t> keep;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i : order) {
            if (pts[i].r_net > best) {
                keep.push_back(i);
                best = pts[i].r_net;
            }
        }
        return keep;   // rmse ascending, r_net ascending
    }

    // ------------------------------------------------------------------
    // alpha-sweep: the analytic resource-allocation curves.

    inline ExperimentOutput run_alpha_sweep(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();
        TradeoffParams tp{s.resource.c_pn, s.resource.c_dse, s.snr0(), gb.g_sig_avg,
                          bud.gamma_total};
        const auto grid =
            alpha_grid(s.resource.alpha_points, s.resource.alpha_min, 1.0);
        const AlphaSweepResult sw = alpha_sweep(tp, grid);

        CsvTable t({"alpha", "sigma_pn_var", "sigma_dse_var", "c_j", "r_net",
                    "feasible", "regime"});
        for (const auto& p : sw.points)
            t.add(p.alpha, p.sigma_pn_var, p.sigma_dse_var, p.c_j, p.r_net,
                  p.feasible, p.dse_dominated ? "dse_dominated" : "pn_dominated");
        out.tables.emplace_back("alpha_sweep.csv", t);

        PlotSpec pv;
        pv.kind = PlotKind::loglog;
        pv.csv_file = "alpha_sweep.csv";
        pv.x_col = "alpha";
        pv.y_cols = {"sigma_pn_var", "sigma_dse_var"};
        pv.title = "Pilot-share variance crossover";
        pv.x_label = "alpha";
        pv.y_label = "variance (rad^2)";
        pv.v_lines = {{"alpha*", sw.alpha_star}};
        out.plots.emplace_back("alpha_sweep_variances.gp", emit_plot_description(t, pv));

        PlotSpec pr;
        pr.kind = PlotKind::line;
        pr.csv_file = "alpha_sweep.csv";
        pr.x_col = "alpha";
        pr.y_cols = {"r_net"};
        pr.title = "Net rate vs pilot share";
        pr.x_label = "alpha";
        pr.y_label = "bits/s/Hz";
        pr.v_lines = {{"alpha*", sw.alpha_star}};
        out.plots.emplace_back("alpha_sweep_rate.gp", emit_plot_description(t, pr));

        out.summary = {
            "alpha* " + detail::fmt(sw.alpha_star) +
                (sw.crossover_outside_unit ? "  (warning: outside (0,1])" : ""),
            "best r_net " + detail::fmt(sw.best_r_net) + " at alpha " +
                detail::fmt(sw.best_alpha),
        };
        return out;
    }

    // ------------------------------------------------------------------
    // pareto: accuracy/rate frontier over the pilot share.

    inline ExperimentOutput run_pareto(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();
        const auto grid =
            alpha_grid(s.resource.alpha_points, s.resource.alpha_min, 1.0);

        std::vector<ParetoPoint> pts;
        pts.reserve(grid.size());
        for (double a : grid)
            pts.push_back(pareto_point(a, s, gb, bud));

        const auto add_rows = [](CsvTable& t, const std::vector<ParetoPoint>& v) {
            for (const auto& p : v)
                t.add(p.alpha, p.r_net, p.rmse_m,
                      p.dse_dominated ? "dse_dominated" : "pn_dominated",
                      p.feasible);
        };
        CsvTable t({"alpha", "r_net", "rmse_m", "regime", "feasible"});
        add_rows(t, pts);
        out.tables.emplace_back("pareto.csv", t);

        std::vector<ParetoPoint> front;
        for (std::size_t i : frontier_indices(pts))
            front.push_back(pts[i]);
        CsvTable tf({"alpha", "r_net", "rmse_m", "regime", "feasible"});
        add_rows(tf, front);
        out.tables.emplace_back("pareto_frontier.csv", tf);

        PlotSpec ps;
        ps.kind = PlotKind::pareto;
        ps.csv_file = "pareto.csv";
        ps.frontier_csv = "pareto_frontier.csv";
        ps.title = "Accuracy / net-rate frontier";
        ps.x_label = "ranging RMSE (m)";
        ps.y_label = "net rate (bits/s/Hz)";
        out.plots.emplace_back("pareto.gp", emit_plot_description(t, ps));

        const double a_star = alpha_star(s.resource.c_pn, s.resource.c_dse);
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].r_net > pts[best].r_net)
                best = i;
        out.summary = {"alpha* " + detail::fmt(a_star), "frontier size " +
                                                            std::to_string(front.size())};
        for (double a : {0.05, 0.10, 0.30}) {
            const ParetoPoint p = pareto_point(a, s, gb, bud);
            out.summary.push_back("alpha " + detail::fmt(a) + ": r_net " +
                                  detail::fmt(p.r_net) + ", rmse " +
                                  detail::fmt(p.rmse_m) + " m");
        }
        out.summary.push_back("best r_net " + detail::fmt(pts[best].r_net) +
                              " at alpha " + detail::fmt(pts[best].alpha));
        return out;
    }

    // ------------------------------------------------------------------
    // mimo-scaling: accuracy and critical-SNR scaling with array size.

    inline ExperimentOutput run_mimo_scaling(const Scenario& s)
    {
        ExperimentOutput out;
        const DistortionBudget bud = s.budget();
        const MimoScalingResult sq =
            mimo_scaling_experiment(s.array, s.hardware, bud.gamma_total, s.mimo_n);
        ArrayConfig broadside = s.array;     // squint off: broadside steering
        broadside.steer_angle_rad = 0.0;
        const MimoScalingResult nq =
            mimo_scaling_experiment(broadside, s.hardware, bud.gamma_total, s.mimo_n);

        CsvTable t({"n", "g_ideal", "eta_bsq_avg", "rmse_m", "rmse_nosquint_m",
                    "snr_crit_uncorrelated", "snr_crit_directional"});
        for (std::size_t i = 0; i < sq.rows.size(); ++i)
            t.add(sq.rows[i].n_elements, sq.rows[i].g_ideal, sq.rows[i].eta_bsq_avg,
                  sq.rows[i].rmse_m, nq.rows[i].rmse_m,
                  sq.rows[i].snr_crit_uncorrelated, sq.rows[i].snr_crit_directional);
        out.tables.emplace_back("mimo_scaling.csv", t);

        PlotSpec ps;
        ps.kind = PlotKind::loglog;
        ps.csv_file = "mimo_scaling.csv";
        ps.x_col = "g_ideal";
        ps.y_cols = {"rmse_m", "rmse_nosquint_m"};
        ps.title = "Ranging RMSE vs array gain";
        ps.x_label = "Nt*Nr";
        ps.y_label = "RMSE (m)";
        out.plots.emplace_back("mimo_scaling.gp", emit_plot_description(t, ps));

        out.summary = {
            "rmse slope " + detail::fmt(sq.rmse_slope) + " (with squint), " +
                detail::fmt(nq.rmse_slope) + " (broadside)",
            "snr_crit slopes: uncorrelated " + detail::fmt(sq.crit_unc_slope) +
                ", directional " + detail::fmt(sq.crit_dir_slope),
        };
        return out;
    }

    // ------------------------------------------------------------------
    // ablation: RMSE(alpha) with impairments enabled cumulatively.

    inline ExperimentOutput run_ablation(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();
        const auto grid =
            alpha_grid(s.resource.alpha_points, s.resource.alpha_min, 1.0);

        CsvTable t({"alpha", "rmse_thermal_m", "rmse_hw_m", "rmse_hw_pn_m",
                    "rmse_full_m"});
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double a : grid) {
            const double r0 = pareto_rmse(a, s, gb, bud, {false, false, false});
            const double r1 = pareto_rmse(a, s, gb, bud, {true, false, false});
            const double r2 = pareto_rmse(a, s, gb, bud, {true, true, false});
            const double r3 = pareto_rmse(a, s, gb, bud, {true, true, true});
            t.add(a, r0, r1, r2, r3);
            lo = std::min(lo, r3);
            hi = std::max(hi, r3);
        }
        out.tables.emplace_back("ablation.csv", t);

        PlotSpec ps;
        ps.kind = PlotKind::loglog;
        ps.csv_file = "ablation.csv";
        ps.x_col = "alpha";
        ps.y_cols = {"rmse_thermal_m", "rmse_hw_m", "rmse_hw_pn_m", "rmse_full_m"};
        ps.title = "RMSE vs pilot share, cumulative impairments";
        ps.x_label = "alpha";
        ps.y_label = "RMSE (m)";
        out.plots.emplace_back("ablation.gp", emit_plot_description(t, ps));

        const double ratio = pareto_rmse(0.3, s, gb, bud, {true, false, false}) /
                             pareto_rmse(0.3, s, gb, bud, {false, false, false});
        out.summary = {
            "hardware floor / thermal floor at alpha=0.3: " + detail::fmt(ratio),
            "full-model RMSE spans " + detail::fmt(std::log10(hi / lo)) +
                " orders of magnitude over the alpha grid",
        };
        return out;
    }

    // ------------------------------------------------------------------
    // sensing-sweep: ranging accuracy vs transmit SNR at full pilot share.

    inline ExperimentOutput run_sensing_sweep(const Scenario& s)
    {
        ExperimentOutput out;
        const GainBreakdown gb = gain_breakdown(s.array, s.hardware);
        const DistortionBudget bud = s.budget();
        const SpectralGrid grid = s.grid();

        CsvTable t({"snr_db", "e_bb_j", "j_whittle", "crb_tau_s2", "rmse_m",
                    "rmse_white_m"});
        const int n = s.sweep.snr_points;
        for (int i = 0; i < n; ++i) {
            const double snr_db =
                s.sweep.snr_db_min +
                (s.sweep.snr_db_max - s.sweep.snr_db_min) * i / (n - 1);
            const double snr0 = db_to_linear(snr_db);

            NoiseInputs in;
            in.n0 = 1.0;
            in.sigma_gamma_psd = snr0 * gb.g_sig_avg * bud.gamma_total;
            in.phase_noise = s.tracking_model();
            in.pn_ref_power_w = snr0 * gb.g_sig_avg * s.array.bandwidth_hz;
            in.rsm = s.rsm;
            in.rsm_p_sig_ref_w = snr0 * gb.g_sig_avg * s.array.bandwidth_hz;
            const NoisePsd noise = build_noise_psd(NoiseConvention::sense, in, grid);

            const double e_bb = snr0 * s.array.bandwidth_hz * s.resource.t_obs_s;
            const SensingSignalSpec sig =
                make_array_signal(s.array, s.hardware, e_bb, grid);
            const FimResult r = whittle_fim_tau(sig, noise);
            t.add(snr_db, e_bb, r.j_tau_tau, r.crb_tau, r.rmse_range_m,
                  rmse_awgn_closed(sig.energy, 1.0, s.array.bandwidth_hz));
        }
        out.tables.emplace_back("sensing_sweep.csv", t);

        PlotSpec ps;
        ps.kind = PlotKind::line;
        ps.csv_file = "sensing_sweep.csv";
        ps.x_col = "snr_db";
        ps.y_cols = {"rmse_m", "rmse_white_m"};
        ps.title = "Ranging RMSE vs transmit SNR";
        ps.x_label = "SNR0 (dB)";
        ps.y_label = "RMSE (m)";
        out.plots.emplace_back("sensing_sweep.gp", emit_plot_description(t, ps));

        out.summary = {"sensing sweep over " + std::to_string(n) + " SNR points"};
        return out;
    }

    // ------------------------------------------------------------------
    // Randomized check that the sensing PSD exceeds the communication PSD
    // by exactly the residual phase-noise power. The reference power is
    // drawn so the phase-noise mass is comparable to the rest of the band
    // power (as it is in a real sensing PSD); with a vanishing mass the
    // subtraction would only measure floating-point cancellation, not the
    // model. Returns the worst relative error.

    inline double spectral_consistency_check(std::uint64_t seed, int n_models)
    {
        const SplitMix64 rng = make_stream(seed, 77);
        double worst = 0.0;
        for (int i = 0; i < n_models; ++i) {
            const std::uint64_t k = 8ULL * static_cast<std::uint64_t>(i);
            const SpectralGrid g{512 + 128 * (i % 4), 1e10 * (1.0 + rng.uniform(k))};
            NoiseInputs in;
            in.n0 = 0.5 + rng.uniform(k + 1);
            in.phase_noise = PhaseNoiseModel{
                std::pow(10.0, 3.0 + 2.0 * rng.uniform(k + 2)),
                std::pow(10.0, 9.0 + 2.0 * rng.uniform(k + 3)),
                1e-14 * rng.uniform(k + 4),
                std::pow(10.0, 6.0 + 2.0 * rng.uniform(k + 5))};
            in.sigma_gamma_psd = rng.uniform(k + 7);
            const double var = sigma_phi_res_var(in.phase_noise, g);
            const double ratio = std::pow(10.0, -1.0 + 2.0 * rng.uniform(k + 6));
            in.pn_ref_power_w =
                ratio * (in.n0 + in.sigma_gamma_psd) * g.bandwidth_hz / var;

            const NoisePsd sense = build_noise_psd(NoiseConvention::sense, in, g);
            const NoisePsd comm = build_noise_psd(NoiseConvention::comm, in, g);
            double diff = 0.0;
            for (int b = 0; b < g.n_bins; ++b)
                diff += sense.values[b] - comm.values[b];
            diff *= g.bin_spacing_hz();
            const double target = in.pn_ref_power_w * var;
            worst = std::max(worst, std::fabs(diff - target) / target);
        }
        return worst;
    }

    // ------------------------------------------------------------------
    // validate: the numerical-oracle suite; exit status reflects the
    // verdicts.

    inline ExperimentOutput run_validate(const Scenario& s, bool parallel)
    {
        ExperimentOutput out;
        auto verdict = [&](bool ok, const std::string& what) {
            out.summary.push_back(std::string(ok ? "PASS  " : "FAIL  ") + what);
            out.passed = out.passed && ok;
        };

        // 1) Whittle vs exact-time over the aperture / fractional-bandwidth
        //    grid.
        ValidationGridParams vp = s.validation;
        vp.n_threads = parallel ? 0 : 1;
        const ValidationGridResult grid_res = whittle_validation_grid(vp);
        CsvTable tg({"aperture_wavelengths", "frac_bandwidth", "j_whittle",
                     "j_exact", "rel_err"});
        for (const auto& p : grid_res.points)
            tg.add(p.aperture_wavelengths, p.frac_bandwidth, p.j_whittle, p.j_exact,
                   p.rel_err);
        out.tables.emplace_back("validation_grid.csv", tg);
        verdict(grid_res.max_rel_err < 0.02,
                "whittle grid max error " + detail::fmt(grid_res.max_rel_err) +
                    " < 0.02");
        verdict(grid_res.slope_vs_log_frac_bw > 0.0,
                "error grows with fractional bandwidth (slope " +
                    detail::fmt(grid_res.slope_vs_log_frac_bw) + ")");

        // 2) Reference geometry, matching the headline fractional bandwidth.
        const ValidationPoint base = validation_point(
            s.array.aperture_wavelengths(), 0.143, vp);
        verdict(std::fabs(base.rel_err - 0.018) <= 0.01,
                "reference-geometry error " + detail::fmt(base.rel_err) +
                    " within 0.018 +/- 0.010");

        // 3) White-noise closed form, both routes.
        {
            const SpectralGrid g4{4096, s.array.bandwidth_hz};
            const NoisePsd white4 =
                build_noise_psd(NoiseConvention::sense, NoiseInputs{}, g4);
            const double jw =
                whittle_fim_tau(make_flat_signal(1.0, g4), white4).j_tau_tau;
            const double ja = fim_awgn_closed(1.0, 1.0, s.array.bandwidth_hz);
            verdict(std::fabs(jw - ja) / ja < 1e-3,
                    "whittle white-noise agreement " +
                        detail::fmt(std::fabs(jw - ja) / ja) + " < 1e-3");

            const SpectralGrid g2{2048, s.array.bandwidth_hz};
            const NoisePsd white2 =
                build_noise_psd(NoiseConvention::sense, NoiseInputs{}, g2);
            const double je =
                exact_time_fim(make_flat_signal(1.0, g2), white2).j_tau_tau;
            verdict(std::fabs(je - ja) / ja < 5e-3,
                    "exact-time white-noise agreement " +
                        detail::fmt(std::fabs(je - ja) / ja) + " < 5e-3");
        }

        // 4) Bussgang Monte Carlo at three phase-noise levels.
        CsvTable tb({"sigma_phi_var", "n_samples", "gain_est", "gain_theory",
                     "gain_se", "dist_power_est", "dist_power_theory",
                     "dist_power_se", "cross_abs", "cross_se", "pass"});
        for (double var : {0.01, 0.1, 0.5}) {
            const BussgangMcResult r = mc_bussgang(var, s.mc.n_samples, s.seed);
            tb.add(r.sigma_phi_var, static_cast<std::int64_t>(r.n_samples),
                   r.gain_est, r.gain_theory, r.gain_se, r.dist_power_est,
                   r.dist_power_theory, r.dist_power_se,
                   std::hypot(r.cross_re, r.cross_im), r.cross_se, r.all_ok());
            verdict(r.all_ok(), "bussgang sigma^2 " + detail::fmt(var) +
                                    ": gain " + detail::fmt(r.gain_est) + " vs " +
                                    detail::fmt(r.gain_theory) +
                                    ", distortion power " +
                                    detail::fmt(r.dist_power_est) + " vs " +
                                    detail::fmt(r.dist_power_theory));
        }
        out.tables.emplace_back("bussgang.csv", tb);

        // 5) Spectral bookkeeping: the two PSD conventions differ by exactly
        //    the residual phase-noise power.
        const double worst_spectral = spectral_consistency_check(s.seed, 20);
        verdict(worst_spectral < 1e-6,
                "sense/comm PSD difference integrates to the residual "
                "phase-noise power (worst rel err " +
                    detail::fmt(worst_spectral) + ")");

        if (!out.passed)
            out.summary.push_back("validation FAILED");
        return out;
    }

    // ------------------------------------------------------------------

    inline ExperimentOutput run_experiment(const std::string& name, const Scenario& s,
                                           bool parallel = false)
    {
        if (name == "link-budget")
            return run_link_budget(s);
        if (name == "capacity-sweep")
            return run_capacity_sweep(s);
        if (name == "sensing-sweep")
            return run_sensing_sweep(s);
        if (name == "alpha-sweep")
            return run_alpha_sweep(s);
        if (name == "pareto")
            return run_pareto(s);
        if (name == "mimo-scaling")
            return run_mimo_scaling(s);
        if (name == "ablation")
            return run_ablation(s);
        if (name == "validate")
            return run_validate(s, parallel);
        throw ConfigError("unknown experiment '" + name + "'");
    }

    inline std::vector<std::string> experiment_names()
    {
        return {"link-budget", "capacity-sweep", "sensing-sweep", "alpha-sweep",
                "pareto",      "mimo-scaling",   "ablation",      "validate"};
    }
}
