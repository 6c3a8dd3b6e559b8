// Command-line front end: sll <experiment> --config <path> [--seed N] [--out DIR]
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>

#include <CLI11.hpp>

#include "sll/config.hpp"
#include "sll/errors.hpp"
#include "sll/harness.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Stochastic sine-Gordon laboratory"};
    app.require_subcommand(1, 1);
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    unsigned threads = 0;

    for (const char* name :
         {"converge", "energy-audit", "ou-check", "split-check", "bound-check", "simulate"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        sub->add_option("--config", config_path, "experiment config file")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out_dir, "override the output directory");
        sub->add_option("--threads", threads, "worker threads (default: all cores)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    const std::string name = app.get_subcommands().front()->get_name();
    sll::ExperimentConfig cfg;
    try {
        cfg = sll::load_config(config_path);
        const auto chosen = sll::parse_experiment(name);
        if (cfg.experiment && *cfg.experiment != chosen) {
            throw sll::ConfigError("config selects experiment '" + sll::to_string(*cfg.experiment) +
                                   "' but the subcommand is '" + name + "'");
        }
        cfg.experiment = chosen;
        if (seed) cfg.seed = *seed;
        if (out_dir) cfg.out_dir = *out_dir;
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "sll: config error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        const auto result = sll::run_experiment(cfg, {threads});
        sll::write_outputs(result, cfg, cfg.out_dir, utc_timestamp());
        for (const auto& c : result.checks) {
            std::printf("%s %-50s measured=%.6g threshold=%.6g%s\n", c.pass ? "PASS" : "FAIL",
                        c.name.c_str(), c.measured, c.threshold, c.gating ? "" : " (info)");
        }
        std::printf("%s: %s\n", name.c_str(), result.pass() ? "all checks passed" : "checks failed");
        return result.pass() ? kPass : kFail;
    } catch (const sll::ConfigError& e) {
        std::cerr << "sll: config error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "sll: " << e.what() << '\n';
        return kFail;
    }
}
