// SPDX-License-Identifier: Apache-2.0
//
// Experiment CLI: runs the benchmark schemes over power/user sweeps and
// writes result tables.

#include <cstdio>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "p6dma/harness.hpp"

namespace {

using namespace p6dma;

void print_summary(const std::vector<ResultRow>& rows) {
    // Mean rate per (scheme, sweep point).
    std::map<std::pair<std::string, double>, std::pair<double, int>> stats;
    for (const ResultRow& row : rows) {
        auto& entry = stats[{row.scheme, row.sweep}];
        entry.first += row.rate;
        entry.second += 1;
    }
    std::printf("%-28s %12s %14s %8s\n", "scheme", "sweep", "mean rate", "trials");
    for (const auto& [key, value] : stats) {
        std::printf("%-28s %12.4g %14.4f %8d\n", key.first.c_str(), key.second,
                    value.first / value.second, value.second);
    }
}

int run(HarnessConfig config, const std::string& out_override,
        const std::string& format_override) {
    if (!out_override.empty()) {
        config.experiment.output_path = out_override;
    }
    if (!format_override.empty()) {
        config.experiment.format = format_override;
    }
    const std::vector<ResultRow> rows = run_experiment(config);
    emit(rows, config.experiment.output_path, config.experiment.format);
    print_summary(rows);
    std::printf("wrote %zu rows to %s\n", rows.size(), config.experiment.output_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"P-6DMA polarforming and rotation optimization experiments"};
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand

    std::string config_path;
    std::string out_path;
    std::string format;
    std::vector<std::string> scheme_names;
    std::vector<double> sweep_values;
    int bits_phase = -1;
    int bits_amp = -1;
    int trials = -1;
    std::uint64_t seed = 0;
    bool have_seed = false;
    bool full_scale = false;

    app.add_option("--config", config_path, "JSON config file");
    app.add_option("--out", out_path, "output file path");
    app.add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json", ""}));
    app.add_option("--scheme", scheme_names,
                   "schemes to run (fixed, polarforming_only, rotation_only, joint)");
    app.add_option("--sweep", sweep_values, "sweep grid override");
    app.add_option("--bits-phase", bits_phase, "phase-shift control bits");
    app.add_option("--bits-amp", bits_amp, "amplitude control bits");
    app.add_option("--trials", trials, "Monte Carlo trials per sweep point");
    app.add_option("--seed", seed, "base seed")->each([&](const std::string&) { have_seed = true; });
    app.add_flag("--full-scale", full_scale, "full-scale defaults (N=64, mean 30 users)");

    auto* power = app.add_subcommand("power-sweep", "rate vs BS transmit power");
    auto* users = app.add_subcommand("user-sweep", "rate vs average number of users");
    auto* single = app.add_subcommand("single", "one run at the configured operating point");

    CLI11_PARSE(app, argc, argv);

    try {
        HarnessConfig config = full_scale ? full_scale_config() : default_desk_config();
        if (!config_path.empty()) {
            config = load_config(config_path);
        }

        if (power->parsed()) {
            config.experiment.kind = ExperimentSpec::Kind::kPowerSweep;
            if (config.experiment.sweep.empty()) {
                config.experiment.sweep = {0.01, 0.1, 1.0, 10.0};
            }
        } else if (users->parsed()) {
            config.experiment.kind = ExperimentSpec::Kind::kUserSweep;
            config.experiment.sweep = {4.0, 8.0, 16.0};
        } else if (single->parsed()) {
            config.experiment.kind = ExperimentSpec::Kind::kSingleRun;
            config.experiment.sweep = {config.scenario.power_budget};
        }

        if (!sweep_values.empty()) {
            config.experiment.sweep = sweep_values;
        }
        if (!scheme_names.empty()) {
            config.experiment.schemes.clear();
            for (const std::string& name : scheme_names) {
                config.experiment.schemes.push_back(scheme_from_name(name));
            }
        }
        if (bits_phase >= 0 || bits_amp >= 0) {
            QuantizationConfig quant;
            if (bits_phase >= 0) quant.phase_bits = bits_phase;
            if (bits_amp >= 0) quant.amplitude_bits = bits_amp;
            config.experiment.quantizations = {quant};
        }
        if (trials > 0) {
            config.experiment.trials = trials;
        }
        if (have_seed) {
            config.experiment.base_seed = seed;
        }
        return run(std::move(config), out_path, format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
