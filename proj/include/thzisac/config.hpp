#pragma once

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thzisac/array_model.hpp"
#include "thzisac/errors.hpp"
#include "thzisac/montecarlo.hpp"
#include "thzisac/noise.hpp"
#include "thzisac/spectral.hpp"
#include "thzisac/tradeoff.hpp"
#include "thzisac/util.hpp"

namespace thzisac
{
    using json = nlohmann::json;

    struct TrackingSpec {
        double target_var = 0.01;   // residual variance at full pilot share
        double loop_bw_hz = 1e7;
        double k3 = 0.0;
        double floor = 0.0;
    };

    struct ResourceModel {
        double c_pn = 0.01;
        double c_dse = 6.5536e-6;
        double t_obs_s = 3.498e-5;
        double alpha_min = 0.01;
        int alpha_points = 200;
    };

    struct SweepSpec {
        double snr_db_min = -30.0;
        double snr_db_max = 30.0;
        int snr_points = 61;
    };

    struct McSpec {
        std::uint64_t n_samples = 1000000;
    };

    struct Scenario {
        std::string tier = "baseline";
        std::uint64_t seed = 20260823;
        // Unit transmit SNR: the array gain (~31 dB) supplies the link
        // margin at the headline operating point.
        double snr0_db = 0.0;
        int grid_bins = 2048;
        double gamma_total_override = 0.006;   // linear; <= 0 disables
        ArrayConfig array{};
        HardwareProfile hardware{};
        TrackingSpec tracking{};
        RsmModel rsm{};
        ResourceModel resource{};
        SweepSpec sweep{};
        std::vector<int> mimo_n{8, 11, 16, 23, 32};
        ValidationGridParams validation{};
        McSpec mc{};

        SpectralGrid grid() const { return SpectralGrid{grid_bins, array.bandwidth_hz}; }
        double snr0() const { return db_to_linear(snr0_db); }
        // Effective distortion frequency for the LO-jitter term: the mean
        // |f| of a flat baseband occupation, B/4.
        double f_eff_hz() const { return array.bandwidth_hz / 4.0; }

        DistortionBudget budget() const
        {
            DistortionBudget b = distortion_budget(hardware, f_eff_hz());
            if (gamma_total_override > 0.0)
                b = with_total(b, gamma_total_override);
            return b;
        }

        PhaseNoiseModel tracking_model() const
        {
            return calibrated_phase_noise(tracking.target_var, grid(),
                                          tracking.loop_bw_hz, tracking.k3,
                                          tracking.floor);
        }
    };

    // ------------------------------------------------------------------
    // JSON plumbing. The config format is JSON with // and /* */ comments.

    inline json parse_config_text(const std::string& text, const std::string& origin)
    {
        try {
            return json::parse(text, nullptr, true, /*ignore_comments=*/true);
        } catch (const json::parse_error& e) {
            throw ConfigError(origin + ": " + e.what());
        }
    }

    inline json load_config_file(const std::filesystem::path& path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw ConfigError("cannot read config file " + path.string());
        std::string text((std::istreambuf_iterator<char>(f)),
                         std::istreambuf_iterator<char>());
        return parse_config_text(text, path.string());
    }

    // Objects merge recursively; anything else in `over` replaces the base
    // value.
    inline void deep_merge(json& base, const json& over)
    {
        if (!base.is_object() || !over.is_object()) {
            base = over;
            return;
        }
        for (auto it = over.begin(); it != over.end(); ++it) {
            if (base.contains(it.key()))
                deep_merge(base[it.key()], it.value());
            else
                base[it.key()] = it.value();
        }
    }

    // --set a.b.c=value override; the value parses as a JSON literal when it
    // can, otherwise it is taken as a string.
    inline void apply_set(json& cfg, const std::string& assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--set needs key.path=value, got '" + assignment + "'");
        const std::string path = assignment.substr(0, eq);
        const std::string raw = assignment.substr(eq + 1);
        json value;
        try {
            value = json::parse(raw);
        } catch (const json::parse_error&) {
            value = raw;
        }
        json* node = &cfg;
        std::size_t start = 0;
        for (;;) {
            const auto dot = path.find('.', start);
            const std::string key = path.substr(start, dot - start);
            if (key.empty())
                throw ConfigError("--set: empty key segment in '" + path + "'");
            if (dot == std::string::npos) {
                (*node)[key] = value;
                return;
            }
            if (!node->contains(key) || !(*node)[key].is_object())
                (*node)[key] = json::object();
            node = &(*node)[key];
            start = dot + 1;
        }
    }

    // Canonical form for hashing: compact dump with object keys in sorted
    // order (the default object representation already sorts keys).
    inline std::string canonical_dump(const json& cfg) { return cfg.dump(); }

    inline std::uint64_t fnv1a64(std::string_view s)
    {
        std::uint64_t h = 14695981039346656037ULL;
        for (unsigned char c : s) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

    inline std::string config_hash(const json& cfg)
    {
        char buf[19];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(fnv1a64(canonical_dump(cfg))));
        return buf;
    }

    // ------------------------------------------------------------------
    // Tier presets. Baseline carries the headline parameter set, including
    // the directly specified total distortion that the per-component sum
    // does not reproduce; low_cost relaxes the PA linearization and drops
    // the total override; ideal zeroes every impairment knob.

    inline json tier_preset(const std::string& tier)
    {
        json c = {
            {"tier", tier},
            {"seed", 20260823},
            {"snr0_db", 0.0},
            {"grid_bins", 2048},
            {"gamma_total_override", 0.006},
            {"array",
             {{"n_tx", 64},
              {"n_rx", 64},
              {"spacing_wavelengths", 0.5},
              {"steer_angle_deg", 30.0},
              {"carrier_hz", 140e9},
              {"bandwidth_hz", 20e9},
              {"range_m", 1e6}}},
            {"hardware",
             {{"gamma_pa_db", -22.0},
              {"adc_bits", 7},
              {"irr_db", 20.0},
              {"ps_bits", 4},
              {"jitter_s", 50e-15},
              {"diff_jitter_s", 50e-15},
              {"amp_err_rms", 0.0},
              {"point_err_rad", 0.0},
              {"rel_pn_var_tx", 0.0},
              {"rel_pn_var_rx", 0.0},
              {"loop_loss_db", 3.0}}},
            {"tracking",
             {{"target_var", 0.01},
              {"loop_bw_hz", 1e7},
              {"k3", 0.0},
              {"floor", 0.0}}},
            {"rsm",
             {{"symbol_rate_hz", 1e9},
              {"total_power_ratio", 0.0},
              {"line_width_hz", 1e6},
              {"n_harmonics", 0}}},
            {"resource",
             {{"c_pn", 0.01},
              {"c_dse", 6.5536e-6},
              {"t_obs_s", 3.498e-5},
              {"alpha_min", 0.01},
              {"alpha_points", 200}}},
            {"sweep",
             {{"snr_db_min", -30.0}, {"snr_db_max", 30.0}, {"snr_points", 61}}},
            {"mimo", {{"n_values", json::array({8, 11, 16, 23, 32})}}},
            {"validation",
             {{"n_bins", 2048},
              {"aperture_min", 3.0},
              {"aperture_max", 25.0},
              {"frac_bw_min", 0.02},
              {"frac_bw_max", 0.15},
              {"n_aperture", 10},
              {"n_frac_bw", 10},
              {"pn_power_fraction", 0.025}}},
            {"mc", {{"n_samples", 1000000}}},
        };
        if (tier == "baseline" || tier == "custom")
            return c;
        if (tier == "low_cost") {
            c["hardware"]["gamma_pa_db"] = -8.0;
            c["gamma_total_override"] = 0.0;
            return c;
        }
        if (tier == "ideal") {
            c["hardware"] = {{"gamma_pa_db", -300.0}, {"adc_bits", 30},
                             {"irr_db", 300.0},       {"ps_bits", 30},
                             {"jitter_s", 0.0},       {"diff_jitter_s", 0.0},
                             {"amp_err_rms", 0.0},    {"point_err_rad", 0.0},
                             {"rel_pn_var_tx", 0.0},  {"rel_pn_var_rx", 0.0},
                             {"loop_loss_db", 0.0}};
            c["gamma_total_override"] = 0.0;
            return c;
        }
        throw ConfigError("unknown tier '" + tier +
                          "' (expected baseline, low_cost, ideal, or custom)");
    }

    // ------------------------------------------------------------------
    // Schema-checked extraction with field paths in every error message.

    namespace detail
    {
        inline const json* find_node(const json& root, const std::string& path)
        {
            const json* node = &root;
            std::size_t start = 0;
            for (;;) {
                const auto dot = path.find('.', start);
                const std::string key = path.substr(start, dot - start);
                if (!node->is_object() || !node->contains(key))
                    return nullptr;
                node = &(*node)[key];
                if (dot == std::string::npos)
                    return node;
                start = dot + 1;
            }
        }

        inline double get_num(const json& root, const std::string& path, double dflt)
        {
            const json* n = find_node(root, path);
            if (!n)
                return dflt;
            if (!n->is_number())
                throw ConfigError("config field '" + path + "': expected a number");
            return n->get<double>();
        }

        inline int get_int(const json& root, const std::string& path, int dflt)
        {
            const json* n = find_node(root, path);
            if (!n)
                return dflt;
            if (!n->is_number_integer())
                throw ConfigError("config field '" + path + "': expected an integer");
            return n->get<int>();
        }

        inline std::uint64_t get_u64(const json& root, const std::string& path,
                                     std::uint64_t dflt)
        {
            const json* n = find_node(root, path);
            if (!n)
                return dflt;
            if (!n->is_number_integer() ||
                (n->is_number_integer() && !n->is_number_unsigned() &&
                 n->get<std::int64_t>() < 0))
                throw ConfigError("config field '" + path +
                                  "': expected a non-negative integer");
            return n->get<std::uint64_t>();
        }

        inline std::string get_str(const json& root, const std::string& path,
                                   const std::string& dflt)
        {
            const json* n = find_node(root, path);
            if (!n)
                return dflt;
            if (!n->is_string())
                throw ConfigError("config field '" + path + "': expected a string");
            return n->get<std::string>();
        }

        inline std::vector<int> get_int_list(const json& root, const std::string& path,
                                             std::vector<int> dflt)
        {
            const json* n = find_node(root, path);
            if (!n)
                return dflt;
            if (!n->is_array())
                throw ConfigError("config field '" + path + "': expected an array");
            std::vector<int> out;
            for (const auto& v : *n) {
                if (!v.is_number_integer())
                    throw ConfigError("config field '" + path +
                                      "': expected integer entries");
                out.push_back(v.get<int>());
            }
            return out;
        }

        inline void check_keys(const json& node, const std::string& prefix,
                               std::initializer_list<const char*> allowed)
        {
            if (!node.is_object())
                return;
            for (auto it = node.begin(); it != node.end(); ++it) {
                bool ok = false;
                for (const char* a : allowed)
                    if (it.key() == a)
                        ok = true;
                if (!ok)
                    throw ConfigError("unknown config field '" +
                                      (prefix.empty() ? it.key()
                                                      : prefix + "." + it.key()) +
                                      "'");
            }
        }
    }

    inline Scenario scenario_from_json(const json& cfg)
    {
        using namespace detail;
        if (!cfg.is_object())
            throw ConfigError("config root must be an object");
        check_keys(cfg, "",
                   {"tier", "seed", "snr0_db", "grid_bins", "gamma_total_override",
                    "array", "hardware", "tracking", "rsm", "resource", "sweep",
                    "mimo", "validation", "mc"});
        if (cfg.contains("array"))
            check_keys(cfg["array"], "array",
                       {"n_tx", "n_rx", "spacing_wavelengths", "steer_angle_deg",
                        "carrier_hz", "bandwidth_hz", "range_m"});
        if (cfg.contains("hardware"))
            check_keys(cfg["hardware"], "hardware",
                       {"gamma_pa_db", "adc_bits", "irr_db", "ps_bits", "jitter_s",
                        "diff_jitter_s", "amp_err_rms", "point_err_rad",
                        "rel_pn_var_tx", "rel_pn_var_rx", "loop_loss_db"});
        if (cfg.contains("tracking"))
            check_keys(cfg["tracking"], "tracking",
                       {"target_var", "loop_bw_hz", "k3", "floor"});
        if (cfg.contains("rsm"))
            check_keys(cfg["rsm"], "rsm",
                       {"symbol_rate_hz", "total_power_ratio", "line_width_hz",
                        "n_harmonics"});
        if (cfg.contains("resource"))
            check_keys(cfg["resource"], "resource",
                       {"c_pn", "c_dse", "t_obs_s", "alpha_min", "alpha_points"});
        if (cfg.contains("sweep"))
            check_keys(cfg["sweep"], "sweep",
                       {"snr_db_min", "snr_db_max", "snr_points"});
        if (cfg.contains("mimo"))
            check_keys(cfg["mimo"], "mimo", {"n_values"});
        if (cfg.contains("validation"))
            check_keys(cfg["validation"], "validation",
                       {"n_bins", "aperture_min", "aperture_max", "frac_bw_min",
                        "frac_bw_max", "n_aperture", "n_frac_bw",
                        "pn_power_fraction"});
        if (cfg.contains("mc"))
            check_keys(cfg["mc"], "mc", {"n_samples"});

        Scenario s;
        s.tier = get_str(cfg, "tier", "baseline");
        s.seed = get_u64(cfg, "seed", s.seed);
        s.snr0_db = get_num(cfg, "snr0_db", s.snr0_db);
        s.grid_bins = get_int(cfg, "grid_bins", s.grid_bins);
        s.gamma_total_override =
            get_num(cfg, "gamma_total_override", s.gamma_total_override);

        s.array.n_tx = get_int(cfg, "array.n_tx", s.array.n_tx);
        s.array.n_rx = get_int(cfg, "array.n_rx", s.array.n_rx);
        s.array.spacing_wavelengths =
            get_num(cfg, "array.spacing_wavelengths", s.array.spacing_wavelengths);
        s.array.steer_angle_rad = deg_to_rad(
            get_num(cfg, "array.steer_angle_deg", rad_to_deg(s.array.steer_angle_rad)));
        s.array.carrier_hz = get_num(cfg, "array.carrier_hz", s.array.carrier_hz);
        s.array.bandwidth_hz = get_num(cfg, "array.bandwidth_hz", s.array.bandwidth_hz);
        s.array.range_m = get_num(cfg, "array.range_m", s.array.range_m);

        s.hardware.gamma_pa = db_to_linear(get_num(cfg, "hardware.gamma_pa_db", -22.0));
        s.hardware.adc_bits = get_int(cfg, "hardware.adc_bits", s.hardware.adc_bits);
        s.hardware.irr_db = get_num(cfg, "hardware.irr_db", s.hardware.irr_db);
        s.hardware.ps_bits = get_int(cfg, "hardware.ps_bits", s.hardware.ps_bits);
        s.hardware.jitter_s = get_num(cfg, "hardware.jitter_s", 50e-15);
        s.hardware.diff_jitter_s = get_num(cfg, "hardware.diff_jitter_s", 50e-15);
        s.hardware.amp_err_rms = get_num(cfg, "hardware.amp_err_rms", 0.0);
        s.hardware.point_err_rad = get_num(cfg, "hardware.point_err_rad", 0.0);
        s.hardware.rel_pn_var_tx = get_num(cfg, "hardware.rel_pn_var_tx", 0.0);
        s.hardware.rel_pn_var_rx = get_num(cfg, "hardware.rel_pn_var_rx", 0.0);
        s.hardware.loop_loss = db_to_linear(get_num(cfg, "hardware.loop_loss_db", 3.0));

        s.tracking.target_var = get_num(cfg, "tracking.target_var", 0.01);
        s.tracking.loop_bw_hz = get_num(cfg, "tracking.loop_bw_hz", 1e7);
        s.tracking.k3 = get_num(cfg, "tracking.k3", 0.0);
        s.tracking.floor = get_num(cfg, "tracking.floor", 0.0);

        s.rsm.symbol_rate_hz = get_num(cfg, "rsm.symbol_rate_hz", 1e9);
        s.rsm.total_power_ratio = get_num(cfg, "rsm.total_power_ratio", 0.0);
        s.rsm.line_width_hz = get_num(cfg, "rsm.line_width_hz", 1e6);
        s.rsm.n_harmonics = get_int(cfg, "rsm.n_harmonics", 0);

        s.resource.c_pn = get_num(cfg, "resource.c_pn", s.resource.c_pn);
        s.resource.c_dse = get_num(cfg, "resource.c_dse", s.resource.c_dse);
        s.resource.t_obs_s = get_num(cfg, "resource.t_obs_s", s.resource.t_obs_s);
        s.resource.alpha_min = get_num(cfg, "resource.alpha_min", s.resource.alpha_min);
        s.resource.alpha_points =
            get_int(cfg, "resource.alpha_points", s.resource.alpha_points);

        s.sweep.snr_db_min = get_num(cfg, "sweep.snr_db_min", s.sweep.snr_db_min);
        s.sweep.snr_db_max = get_num(cfg, "sweep.snr_db_max", s.sweep.snr_db_max);
        s.sweep.snr_points = get_int(cfg, "sweep.snr_points", s.sweep.snr_points);

        s.mimo_n = get_int_list(cfg, "mimo.n_values", s.mimo_n);

        s.validation.carrier_hz = s.array.carrier_hz;
        s.validation.steer_angle_rad = s.array.steer_angle_rad;
        s.validation.n_bins = get_int(cfg, "validation.n_bins", 2048);
        s.validation.aperture_min = get_num(cfg, "validation.aperture_min", 3.0);
        s.validation.aperture_max = get_num(cfg, "validation.aperture_max", 25.0);
        s.validation.frac_bw_min = get_num(cfg, "validation.frac_bw_min", 0.02);
        s.validation.frac_bw_max = get_num(cfg, "validation.frac_bw_max", 0.15);
        s.validation.n_aperture = get_int(cfg, "validation.n_aperture", 10);
        s.validation.n_frac_bw = get_int(cfg, "validation.n_frac_bw", 10);
        s.validation.pn_power_fraction =
            get_num(cfg, "validation.pn_power_fraction", 0.025);
        s.validation.pn_loop_bw_hz = s.tracking.loop_bw_hz;

        s.mc.n_samples = get_u64(cfg, "mc.n_samples", s.mc.n_samples);

        // Structural validation happens here so every experiment can assume
        // a coherent scenario.
        try {
            s.array.validate();
            s.hardware.validate();
            s.grid().validate();
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        if (s.grid_bins > 8192)
            throw ConfigError("config field 'grid_bins': at most 8192");
        return s;
    }

    // ------------------------------------------------------------------
    // Run manifest; the timestamp lives only here, never in the CSVs.

    struct RunManifest {
        std::string experiment;
        std::string config_hash;
        std::string tool_version;
        std::uint64_t seed = 0;
        std::string timestamp_utc;
        std::vector<std::string> outputs;

        json to_json() const
        {
            return json{{"experiment", experiment},
                        {"config_hash", config_hash},
                        {"tool_version", tool_version},
                        {"seed", seed},
                        {"timestamp_utc", timestamp_utc},
                        {"outputs", outputs}};
        }
    };

    inline std::string utc_timestamp_now()
    {
        const std::time_t t = std::time(nullptr);
        std::tm tm{};
#if defined(_WIN32)
        gmtime_s(&tm, &t);
#else
        gmtime_r(&t, &tm);
#endif
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }
}
