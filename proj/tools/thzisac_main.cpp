// Command-line front end: runs the named experiment on a structured config
// and writes CSV tables, gnuplot descriptions, and a run manifest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thzisac/thzisac.hpp"

namespace fs = std::filesystem;

#ifndef THZISAC_VERSION
#define THZISAC_VERSION "0.0.0"
#endif

namespace
{
    struct CliOptions {
        std::string experiment;
        std::string config_path;
        std::string out_dir;
        std::string tier;
        std::vector<std::string> sets;
        std::uint64_t seed = 0;
        bool seed_given = false;
        bool parallel = false;
    };

    thzisac::json assemble_config(const CliOptions& opt)
    {
        using namespace thzisac;
        json file_cfg = json::object();
        if (!opt.config_path.empty())
            file_cfg = load_config_file(opt.config_path);
        if (!file_cfg.is_object())
            throw ConfigError("config root must be an object");

        // Precedence: tier preset < config file < --set overrides; the
        // --tier flag wins over the file's tier field.
        std::string tier = "baseline";
        if (file_cfg.contains("tier")) {
            if (!file_cfg["tier"].is_string())
                throw ConfigError("config field 'tier': expected a string");
            tier = file_cfg["tier"].get<std::string>();
        }
        if (!opt.tier.empty())
            tier = opt.tier;

        json cfg = tier_preset(tier);
        deep_merge(cfg, file_cfg);
        cfg["tier"] = tier;
        for (const auto& s : opt.sets)
            apply_set(cfg, s);
        if (opt.seed_given)
            cfg["seed"] = opt.seed;
        return cfg;
    }

    int run(const CliOptions& opt)
    {
        using namespace thzisac;
        const json cfg = assemble_config(opt);
        const Scenario scen = scenario_from_json(cfg);

        fs::path out = opt.out_dir;
        if (out.empty()) {
            if (const char* env = std::getenv("THZISAC_OUT"))
                out = env;
            else
                out = "out";
        }
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec)
            throw ExperimentFailed("cannot create output directory " + out.string() +
                                   ": " + ec.message());

        const ExperimentOutput res = run_experiment(opt.experiment, scen, opt.parallel);

        RunManifest man;
        man.experiment = opt.experiment;
        man.config_hash = config_hash(cfg);
        man.tool_version = THZISAC_VERSION;
        man.seed = scen.seed;
        man.timestamp_utc = utc_timestamp_now();

        for (const auto& [name, table] : res.tables) {
            write_csv(out / name, table);
            man.outputs.push_back(name);
        }
        for (const auto& [name, text] : res.plots) {
            std::ofstream f(out / name, std::ios::binary);
            if (!f)
                throw ExperimentFailed("cannot write " + (out / name).string());
            f << text;
            man.outputs.push_back(name);
        }
        {
            std::ofstream f(out / "manifest.json", std::ios::binary);
            if (!f)
                throw ExperimentFailed("cannot write manifest.json");
            f << man.to_json().dump(2) << "\n";
        }

        std::cout << opt.experiment << "  [tier " << scen.tier << ", config "
                  << man.config_hash << ", seed " << scen.seed << "]\n";
        for (const auto& line : res.summary)
            std::cout << "  " << line << "\n";
        std::cout << "  wrote " << man.outputs.size() << " files to " << out.string()
                  << "\n";

        if (!res.passed)
            throw ExperimentFailed("validation checks failed");
        return 0;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Hardware-limited THz inter-satellite ISAC performance toolkit"};
    app.set_version_flag("--version", std::string(THZISAC_VERSION));

    CliOptions opt;
    app.add_option("experiment", opt.experiment,
                   "one of: link-budget, capacity-sweep, sensing-sweep, alpha-sweep, "
                   "pareto, mimo-scaling, ablation, validate")
        ->required();
    app.add_option("--config", opt.config_path, "config file (JSON, comments allowed)")
        ->check(CLI::ExistingFile);
    app.add_option("--out", opt.out_dir,
                   "output directory (default: $THZISAC_OUT or ./out)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed override");
    app.add_option("--tier", opt.tier, "hardware tier preset")
        ->check(CLI::IsMember({"baseline", "low_cost", "ideal", "custom"}));
    app.add_flag("--parallel", opt.parallel, "evaluate sweep points concurrently");
    app.add_option("--set", opt.sets, "config override key.path=value (repeatable)");

    CLI11_PARSE(app, argc, argv);
    opt.seed_given = seed_opt->count() > 0;

    try {
        return run(opt);
    } catch (const thzisac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const thzisac::ExperimentFailed& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
