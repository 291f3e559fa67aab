// SPDX-License-Identifier: Apache-2.0

#include "p6dma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

namespace p6dma {

namespace {

using nlohmann::json;

struct TrialContext {
    ScenarioConfig scenario;
    ArrayGeometry geometry;
    RotationAngles fixed_rotation;
    std::vector<Drop> eval_drops;
    std::vector<Drop> stat_drops;
    // Randomly drawn codebook polarformers of the fixed-parameter scheme,
    // one BS vector and one vector per user for every drop.
    std::vector<PolarVec> eval_fixed_v;
    std::vector<std::vector<PolarVec>> eval_fixed_w;
    std::vector<PolarVec> stat_fixed_v;
    std::vector<std::vector<PolarVec>> stat_fixed_w;
};

ScenarioConfig apply_sweep(const HarnessConfig& config, double sweep_value) {
    ScenarioConfig scenario = config.scenario;
    switch (config.experiment.kind) {
        case ExperimentSpec::Kind::kPowerSweep:
            scenario.power_budget = sweep_value;
            break;
        case ExperimentSpec::Kind::kUserSweep:
            scenario.mean_users = sweep_value;
            break;
        case ExperimentSpec::Kind::kSingleRun:
            break;
    }
    return scenario;
}

PolarVec random_codebook_polarformer(const std::vector<Complex>& entries, Rng& rng) {
    std::uniform_int_distribution<size_t> pick(0, entries.size() - 1);
    PolarVec p;
    const Complex first = entries[pick(rng)];
    const Complex second = entries[pick(rng)];
    p << first, second;
    return p;
}

TrialContext make_trial(const HarnessConfig& config, double sweep_value,
                        std::uint64_t seed, const QuantizationConfig& quant) {
    TrialContext trial;
    trial.scenario = apply_sweep(config, sweep_value);
    trial.geometry = ArrayGeometry::uniform_planar(trial.scenario.num_bs_antennas,
                                                   trial.scenario.wavelength() / 2.0);

    Rng rng(seed);
    for (int i = 0; i < config.experiment.eval_samples; ++i) {
        trial.eval_drops.push_back(draw_drop(trial.scenario, rng));
    }
    for (int i = 0; i < config.pso.sample_count; ++i) {
        trial.stat_drops.push_back(draw_drop(trial.scenario, rng));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    trial.fixed_rotation =
        RotationAngles{kTwoPi * unit(rng), kTwoPi * unit(rng), kTwoPi * unit(rng)};

    const std::vector<Complex> entries = codebook(quant);
    for (const Drop& drop : trial.eval_drops) {
        trial.eval_fixed_v.push_back(random_codebook_polarformer(entries, rng));
        std::vector<PolarVec> per_user;
        for (size_t k = 0; k < drop.users.size(); ++k) {
            per_user.push_back(random_codebook_polarformer(entries, rng));
        }
        trial.eval_fixed_w.push_back(std::move(per_user));
    }
    for (const Drop& drop : trial.stat_drops) {
        trial.stat_fixed_v.push_back(random_codebook_polarformer(entries, rng));
        std::vector<PolarVec> per_user;
        for (size_t k = 0; k < drop.users.size(); ++k) {
            per_user.push_back(random_codebook_polarformer(entries, rng));
        }
        trial.stat_fixed_w.push_back(std::move(per_user));
    }
    return trial;
}

SolverConfig solver_for(const HarnessConfig& config, const TrialContext& trial) {
    SolverConfig solver = config.solver;
    solver.power_budget = trial.scenario.power_budget;
    solver.noise_power = trial.scenario.noise_power;
    return solver;
}

PsoConfig pso_for(const HarnessConfig& config, std::uint64_t seed) {
    PsoConfig pso = config.pso;
    pso.seed = seed;
    return pso;
}

std::vector<CVec> mrt_precoders(const std::vector<CVec>& channels, double power_budget) {
    const double per_user =
        channels.empty() ? 0.0 : power_budget / static_cast<double>(channels.size());
    std::vector<CVec> precoders(channels.size());
    for (size_t k = 0; k < channels.size(); ++k) {
        const double norm = channels[k].norm();
        precoders[k] = (norm > 0.0 && per_user > 0.0)
                           ? CVec(std::sqrt(per_user) * channels[k] / norm)
                           : CVec(CVec::Zero(channels[k].size()));
    }
    return precoders;
}

std::vector<double> drop_weights(const Drop& drop) {
    std::vector<double> weights;
    weights.reserve(drop.users.size());
    for (const UserState& user : drop.users) {
        weights.push_back(user.weight);
    }
    return weights;
}

// Rate of the fixed-parameter scheme on one drop: random codebook
// polarformers, MRT precoding at the given rotation.
double fixed_scheme_rate(const HarnessConfig& config, const TrialContext& trial,
                         const Drop& drop, const std::vector<PolarVec>& fixed_w,
                         const PolarVec& fixed_v, const RotationAngles& rotation) {
    const std::vector<ChannelSample> samples = build_channel_samples(
        drop, trial.geometry, config.pattern, rotation, trial.scenario.wavelength());
    std::vector<CVec> channels(samples.size());
    for (size_t k = 0; k < samples.size(); ++k) {
        channels[k] = effective_channel(samples[k], fixed_w[k], fixed_v);
    }
    const std::vector<CVec> precoders = mrt_precoders(channels, trial.scenario.power_budget);
    return achievable_rate(channels, precoders, trial.scenario.noise_power, drop_weights(drop))
        .weighted_sum;
}

double elapsed_ms(const std::chrono::steady_clock::time_point& start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
}

void parallel_for(size_t count, const std::function<void(size_t)>& body) {
    const unsigned hw = std::thread::hardware_concurrency();
    const size_t workers = std::min<size_t>(std::max(1u, hw), count);
    if (workers <= 1) {
        for (size_t i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(failure_mutex);
                    if (!failure) {
                        failure = std::current_exception();
                    }
                }
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

std::string scheme_name(Scheme scheme) {
    switch (scheme) {
        case Scheme::kFixed:
            return "fixed";
        case Scheme::kPolarformingOnly:
            return "polarforming_only";
        case Scheme::kRotationOnly:
            return "rotation_only";
        case Scheme::kJoint:
            return "joint";
    }
    return "unknown";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "fixed") return Scheme::kFixed;
    if (name == "polarforming_only") return Scheme::kPolarformingOnly;
    if (name == "rotation_only") return Scheme::kRotationOnly;
    if (name == "joint") return Scheme::kJoint;
    throw std::invalid_argument("unknown scheme: " + name);
}

HarnessConfig default_desk_config() {
    HarnessConfig config;
    config.scenario = ScenarioConfig{};
    config.pattern = RadiationPattern::directive(10.0, 2.0);
    config.solver = SolverConfig{};
    config.pso.swarm_size = 8;
    config.pso.iterations = 12;
    config.pso.sample_count = 4;
    config.experiment.kind = ExperimentSpec::Kind::kPowerSweep;
    config.experiment.sweep = {0.01, 0.1, 1.0, 10.0};
    config.experiment.trials = 20;
    config.experiment.eval_samples = 4;
    return config;
}

HarnessConfig full_scale_config() {
    HarnessConfig config = default_desk_config();
    config.scenario.num_bs_antennas = 64;
    config.scenario.mean_users = 30.0;
    config.pso.swarm_size = 16;
    config.pso.iterations = 30;
    config.pso.sample_count = 8;
    return config;
}

ResultRow run_fixed(const HarnessConfig& config, double sweep_value, std::uint64_t seed,
                    const QuantizationConfig& quant) {
    const auto start = std::chrono::steady_clock::now();
    const TrialContext trial = make_trial(config, sweep_value, seed, quant);
    double rate = 0.0;
    for (size_t i = 0; i < trial.eval_drops.size(); ++i) {
        rate += fixed_scheme_rate(config, trial, trial.eval_drops[i], trial.eval_fixed_w[i],
                                  trial.eval_fixed_v[i], trial.fixed_rotation);
    }
    rate /= static_cast<double>(trial.eval_drops.size());
    return ResultRow{scheme_name(Scheme::kFixed), sweep_value, seed, rate, 0, elapsed_ms(start)};
}

ResultRow run_polarforming_only(const HarnessConfig& config, double sweep_value,
                                std::uint64_t seed, const QuantizationConfig& quant) {
    const auto start = std::chrono::steady_clock::now();
    const TrialContext trial = make_trial(config, sweep_value, seed, quant);
    SolverConfig solver = solver_for(config, trial);
    solver.optimize_precoders = false;

    double rate = 0.0;
    int sweeps = 0;
    for (size_t i = 0; i < trial.eval_drops.size(); ++i) {
        const Drop& drop = trial.eval_drops[i];
        PddProblem problem;
        problem.samples = build_channel_samples(drop, trial.geometry, config.pattern,
                                                trial.fixed_rotation, trial.scenario.wavelength());
        problem.user_weights = drop_weights(drop);

        // Precoders frozen at the fixed scheme's MRT solution.
        std::vector<CVec> fixed_channels(problem.samples.size());
        for (size_t k = 0; k < problem.samples.size(); ++k) {
            fixed_channels[k] =
                effective_channel(problem.samples[k], trial.eval_fixed_w[i][k], trial.eval_fixed_v[i]);
        }
        PddState init = initial_state(problem, solver, quant);
        init.precoders = mrt_precoders(fixed_channels, trial.scenario.power_budget);

        const SolveResult result = solve(problem, solver, quant, init);
        rate += result.weighted_sum_rate;
        sweeps += result.inner_iterations;
    }
    rate /= static_cast<double>(trial.eval_drops.size());
    return ResultRow{scheme_name(Scheme::kPolarformingOnly), sweep_value, seed, rate, sweeps,
                     elapsed_ms(start)};
}

ResultRow run_rotation_only(const HarnessConfig& config, double sweep_value,
                            std::uint64_t seed, const QuantizationConfig& quant) {
    const auto start = std::chrono::steady_clock::now();
    const TrialContext trial = make_trial(config, sweep_value, seed, quant);

    const CachedFitness fitness(
        [&](const RotationAngles& s, int set_index) {
            const size_t l = static_cast<size_t>(set_index);
            return fixed_scheme_rate(config, trial, trial.stat_drops[l], trial.stat_fixed_w[l],
                                     trial.stat_fixed_v[l], s);
        },
        static_cast<int>(trial.stat_drops.size()));
    const PsoResult pso = optimize_rotation(fitness, pso_for(config, seed));

    double rate = 0.0;
    for (size_t i = 0; i < trial.eval_drops.size(); ++i) {
        rate += fixed_scheme_rate(config, trial, trial.eval_drops[i], trial.eval_fixed_w[i],
                                  trial.eval_fixed_v[i], pso.best_position);
    }
    rate /= static_cast<double>(trial.eval_drops.size());
    return ResultRow{scheme_name(Scheme::kRotationOnly), sweep_value, seed, rate, 0,
                     elapsed_ms(start)};
}

ResultRow run_joint(const HarnessConfig& config, double sweep_value, std::uint64_t seed,
                    const QuantizationConfig& quant) {
    const auto start = std::chrono::steady_clock::now();
    const TrialContext trial = make_trial(config, sweep_value, seed, quant);
    const TwoTimescaleResult result = two_timescale_run(
        trial.stat_drops, trial.eval_drops, trial.geometry, config.pattern,
        trial.scenario.wavelength(), solver_for(config, trial), pso_for(config, seed), quant);
    return ResultRow{scheme_name(Scheme::kJoint), sweep_value, seed, result.average_rate,
                     result.solver_sweeps, elapsed_ms(start)};
}

ResultRow run_scheme(Scheme scheme, const HarnessConfig& config, double sweep_value,
                     std::uint64_t seed, const QuantizationConfig& quant) {
    switch (scheme) {
        case Scheme::kFixed:
            return run_fixed(config, sweep_value, seed, quant);
        case Scheme::kPolarformingOnly:
            return run_polarforming_only(config, sweep_value, seed, quant);
        case Scheme::kRotationOnly:
            return run_rotation_only(config, sweep_value, seed, quant);
        case Scheme::kJoint:
            return run_joint(config, sweep_value, seed, quant);
    }
    throw std::invalid_argument("run_scheme: bad scheme");
}

std::vector<ResultRow> run_experiment(const HarnessConfig& config) {
    struct Task {
        Scheme scheme;
        QuantizationConfig quant;
        double sweep = 0.0;
        std::uint64_t seed = 0;
        bool tag_quant = false;
    };
    std::vector<double> sweep = config.experiment.sweep;
    if (sweep.empty()) {
        sweep = {config.scenario.power_budget};
    }
    const bool tag_quant = config.experiment.quantizations.size() > 1;

    std::vector<Task> tasks;
    for (const QuantizationConfig& quant : config.experiment.quantizations) {
        for (Scheme scheme : config.experiment.schemes) {
            for (double value : sweep) {
                for (int t = 0; t < config.experiment.trials; ++t) {
                    tasks.push_back({scheme, quant, value,
                                     config.experiment.base_seed + static_cast<std::uint64_t>(t),
                                     tag_quant});
                }
            }
        }
    }

    std::vector<ResultRow> rows(tasks.size());
    parallel_for(tasks.size(), [&](size_t i) {
        const Task& task = tasks[i];
        ResultRow row = run_scheme(task.scheme, config, task.sweep, task.seed, task.quant);
        if (task.tag_quant) {
            row.scheme += "/p" + std::to_string(task.quant.phase_bits) + "a" +
                          std::to_string(task.quant.amplitude_bits);
        }
        rows[i] = std::move(row);
    });

    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        if (a.scheme != b.scheme) return a.scheme < b.scheme;
        if (a.sweep != b.sweep) return a.sweep < b.sweep;
        return a.seed < b.seed;
    });
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out.precision(17);
    out << "scheme,sweep,seed,rate,iters,ms\n";
    for (const ResultRow& row : rows) {
        out << row.scheme << ',' << row.sweep << ',' << row.seed << ',' << row.rate << ','
            << row.iterations << ',' << row.wall_ms << '\n';
    }
    return out.str();
}

std::vector<ResultRow> rows_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        ResultRow row;
        std::string token;
        std::getline(fields, row.scheme, ',');
        std::getline(fields, token, ',');
        row.sweep = std::stod(token);
        std::getline(fields, token, ',');
        row.seed = std::stoull(token);
        std::getline(fields, token, ',');
        row.rate = std::stod(token);
        std::getline(fields, token, ',');
        row.iterations = std::stoi(token);
        std::getline(fields, token, ',');
        row.wall_ms = std::stod(token);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string rows_to_json(const std::vector<ResultRow>& rows) {
    json arr = json::array();
    for (const ResultRow& row : rows) {
        arr.push_back(json{{"scheme", row.scheme},
                           {"sweep", row.sweep},
                           {"seed", row.seed},
                           {"rate", row.rate},
                           {"iters", row.iterations},
                           {"ms", row.wall_ms}});
    }
    return json{{"results", arr}}.dump(2);
}

std::vector<ResultRow> rows_from_json(const std::string& text) {
    const json doc = json::parse(text);
    std::vector<ResultRow> rows;
    for (const json& j : doc.at("results")) {
        rows.push_back(ResultRow{j.at("scheme").get<std::string>(), j.at("sweep").get<double>(),
                                 j.at("seed").get<std::uint64_t>(), j.at("rate").get<double>(),
                                 j.at("iters").get<int>(), j.at("ms").get<double>()});
    }
    return rows;
}

void emit(const std::vector<ResultRow>& rows, const std::string& path,
          const std::string& format) {
    std::string payload;
    if (format == "csv") {
        payload = rows_to_csv(rows);
    } else if (format == "json") {
        payload = rows_to_json(rows);
    } else {
        throw std::invalid_argument("emit: unknown format '" + format + "'");
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    }
    out << payload;
    if (!out) {
        throw std::runtime_error("emit: write failed for '" + path + "'");
    }
}

namespace {

json region_to_json(const CoverageRegion& r) {
    return json{{"min_radius", r.min_radius},       {"max_radius", r.max_radius},
                {"min_azimuth", r.min_azimuth},     {"max_azimuth", r.max_azimuth},
                {"min_elevation", r.min_elevation}, {"max_elevation", r.max_elevation}};
}

CoverageRegion region_from_json(const json& j) {
    CoverageRegion r;
    r.min_radius = j.value("min_radius", r.min_radius);
    r.max_radius = j.value("max_radius", r.max_radius);
    r.min_azimuth = j.value("min_azimuth", r.min_azimuth);
    r.max_azimuth = j.value("max_azimuth", r.max_azimuth);
    r.min_elevation = j.value("min_elevation", r.min_elevation);
    r.max_elevation = j.value("max_elevation", r.max_elevation);
    return r;
}

std::string kind_name(ExperimentSpec::Kind kind) {
    switch (kind) {
        case ExperimentSpec::Kind::kPowerSweep:
            return "power_sweep";
        case ExperimentSpec::Kind::kUserSweep:
            return "user_sweep";
        case ExperimentSpec::Kind::kSingleRun:
            return "single";
    }
    return "single";
}

ExperimentSpec::Kind kind_from_name(const std::string& name) {
    if (name == "power_sweep") return ExperimentSpec::Kind::kPowerSweep;
    if (name == "user_sweep") return ExperimentSpec::Kind::kUserSweep;
    if (name == "single") return ExperimentSpec::Kind::kSingleRun;
    throw std::invalid_argument("unknown experiment kind: " + name);
}

}  // namespace

std::string config_to_json(const HarnessConfig& config) {
    json scenario{{"num_bs_antennas", config.scenario.num_bs_antennas},
                  {"mean_users", config.scenario.mean_users},
                  {"carrier_frequency_hz", config.scenario.carrier_frequency_hz},
                  {"region", region_to_json(config.scenario.region)},
                  {"power_budget", config.scenario.power_budget},
                  {"noise_power", config.scenario.noise_power},
                  {"sample_count", config.scenario.sample_count},
                  {"seed", config.scenario.seed}};
    json pattern{{"kind", config.pattern.kind == RadiationPattern::Kind::kIsotropic
                              ? "isotropic"
                              : "directive"},
                 {"boresight_gain_dbi", config.pattern.boresight_gain_dbi},
                 {"cosine_exponent", config.pattern.cosine_exponent},
                 {"gain_floor", config.pattern.gain_floor}};
    json solver{{"inner_tol", config.solver.inner_tol},
                {"outer_tol", config.solver.outer_tol},
                {"penalty_shrink", config.solver.penalty_shrink},
                {"initial_penalty", config.solver.initial_penalty},
                {"max_inner", config.solver.max_inner},
                {"max_outer", config.solver.max_outer},
                {"power_budget", config.solver.power_budget},
                {"noise_power", config.solver.noise_power},
                {"optimize_precoders", config.solver.optimize_precoders}};
    json pso{{"swarm_size", config.pso.swarm_size},
             {"iterations", config.pso.iterations},
             {"inertia", config.pso.inertia},
             {"c1", config.pso.c1},
             {"c2", config.pso.c2},
             {"sample_count", config.pso.sample_count},
             {"seed", config.pso.seed},
             {"compare_with_own_best", config.pso.compare_with_own_best}};
    json schemes = json::array();
    for (Scheme s : config.experiment.schemes) {
        schemes.push_back(scheme_name(s));
    }
    json quants = json::array();
    for (const QuantizationConfig& q : config.experiment.quantizations) {
        quants.push_back(json{{"phase_bits", q.phase_bits}, {"amplitude_bits", q.amplitude_bits}});
    }
    json experiment{{"kind", kind_name(config.experiment.kind)},
                    {"schemes", schemes},
                    {"sweep", config.experiment.sweep},
                    {"quantizations", quants},
                    {"trials", config.experiment.trials},
                    {"eval_samples", config.experiment.eval_samples},
                    {"base_seed", config.experiment.base_seed},
                    {"output_path", config.experiment.output_path},
                    {"format", config.experiment.format}};
    return json{{"scenario", scenario},
                {"pattern", pattern},
                {"solver", solver},
                {"pso", pso},
                {"experiment", experiment}}
        .dump(2);
}

HarnessConfig config_from_json(const std::string& text) {
    const json doc = json::parse(text);
    HarnessConfig config;

    if (doc.contains("scenario")) {
        const json& j = doc.at("scenario");
        ScenarioConfig& s = config.scenario;
        s.num_bs_antennas = j.value("num_bs_antennas", s.num_bs_antennas);
        s.mean_users = j.value("mean_users", s.mean_users);
        s.carrier_frequency_hz = j.value("carrier_frequency_hz", s.carrier_frequency_hz);
        if (j.contains("region")) {
            s.region = region_from_json(j.at("region"));
        }
        s.power_budget = j.value("power_budget", s.power_budget);
        s.noise_power = j.value("noise_power", s.noise_power);
        s.sample_count = j.value("sample_count", s.sample_count);
        s.seed = j.value("seed", s.seed);
    }
    if (doc.contains("pattern")) {
        const json& j = doc.at("pattern");
        RadiationPattern& p = config.pattern;
        const std::string kind = j.value("kind", std::string("directive"));
        p.kind = (kind == "isotropic") ? RadiationPattern::Kind::kIsotropic
                                       : RadiationPattern::Kind::kDirective;
        p.boresight_gain_dbi = j.value("boresight_gain_dbi", p.boresight_gain_dbi);
        p.cosine_exponent = j.value("cosine_exponent", p.cosine_exponent);
        p.gain_floor = j.value("gain_floor", p.gain_floor);
    }
    if (doc.contains("solver")) {
        const json& j = doc.at("solver");
        SolverConfig& s = config.solver;
        s.inner_tol = j.value("inner_tol", s.inner_tol);
        s.outer_tol = j.value("outer_tol", s.outer_tol);
        s.penalty_shrink = j.value("penalty_shrink", s.penalty_shrink);
        s.initial_penalty = j.value("initial_penalty", s.initial_penalty);
        s.max_inner = j.value("max_inner", s.max_inner);
        s.max_outer = j.value("max_outer", s.max_outer);
        s.power_budget = j.value("power_budget", s.power_budget);
        s.noise_power = j.value("noise_power", s.noise_power);
        s.optimize_precoders = j.value("optimize_precoders", s.optimize_precoders);
    }
    if (doc.contains("pso")) {
        const json& j = doc.at("pso");
        PsoConfig& p = config.pso;
        p.swarm_size = j.value("swarm_size", p.swarm_size);
        p.iterations = j.value("iterations", p.iterations);
        p.inertia = j.value("inertia", p.inertia);
        p.c1 = j.value("c1", p.c1);
        p.c2 = j.value("c2", p.c2);
        p.sample_count = j.value("sample_count", p.sample_count);
        p.seed = j.value("seed", p.seed);
        p.compare_with_own_best = j.value("compare_with_own_best", p.compare_with_own_best);
    }
    if (doc.contains("experiment")) {
        const json& j = doc.at("experiment");
        ExperimentSpec& e = config.experiment;
        e.kind = kind_from_name(j.value("kind", kind_name(e.kind)));
        if (j.contains("schemes")) {
            e.schemes.clear();
            for (const json& name : j.at("schemes")) {
                e.schemes.push_back(scheme_from_name(name.get<std::string>()));
            }
        }
        if (j.contains("sweep")) {
            e.sweep = j.at("sweep").get<std::vector<double>>();
        }
        if (j.contains("quantizations")) {
            e.quantizations.clear();
            for (const json& q : j.at("quantizations")) {
                e.quantizations.push_back(QuantizationConfig{
                    q.value("phase_bits", 2), q.value("amplitude_bits", 2)});
            }
        }
        e.trials = j.value("trials", e.trials);
        e.eval_samples = j.value("eval_samples", e.eval_samples);
        e.base_seed = j.value("base_seed", e.base_seed);
        e.output_path = j.value("output_path", e.output_path);
        e.format = j.value("format", e.format);
    }
    return config;
}

HarnessConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_config: cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return config_from_json(buffer.str());
}

void save_config(const HarnessConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw std::runtime_error("save_config: cannot open '" + path + "'");
    }
    out << config_to_json(config) << '\n';
}

}  // namespace p6dma
