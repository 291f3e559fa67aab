// SPDX-License-Identifier: Apache-2.0

#include "p6dma/rotation_pso.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace p6dma {

namespace {

struct CacheKey {
    long long a = 0, b = 0, c = 0;
    int set = 0;

    bool operator==(const CacheKey&) const = default;
};

struct CacheKeyHash {
    size_t operator()(const CacheKey& k) const {
        size_t h = std::hash<long long>{}(k.a);
        h ^= std::hash<long long>{}(k.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<long long>{}(k.c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<int>{}(k.set) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

CacheKey make_key(const RotationAngles& s, int set_index) {
    const RotationAngles w = s.normalized();
    auto quantize = [](double x) { return std::llround(x * 1e6); };
    return CacheKey{quantize(w.alpha), quantize(w.beta), quantize(w.gamma), set_index};
}

Rng split_rng(std::uint64_t master_seed, int index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master_seed),
                      static_cast<std::uint32_t>(master_seed >> 32),
                      static_cast<std::uint32_t>(index)};
    return Rng(seq);
}

}  // namespace

struct CachedFitness::Impl {
    SetEvaluator evaluator;
    int num_sets = 0;
    mutable std::unordered_map<CacheKey, double, CacheKeyHash> cache;
    mutable long misses = 0;
    mutable long calls = 0;
};

CachedFitness::CachedFitness(SetEvaluator evaluator, int num_sets)
    : impl_(std::make_shared<Impl>()) {
    impl_->evaluator = std::move(evaluator);
    impl_->num_sets = num_sets;
}

double CachedFitness::operator()(const RotationAngles& s) const {
    ++impl_->calls;
    const RotationAngles wrapped = s.normalized();  // consistent with the cache key
    double total = 0.0;
    for (int l = 0; l < impl_->num_sets; ++l) {
        const CacheKey key = make_key(wrapped, l);
        auto it = impl_->cache.find(key);
        if (it == impl_->cache.end()) {
            ++impl_->misses;
            it = impl_->cache.emplace(key, impl_->evaluator(wrapped, l)).first;
        }
        total += it->second;
    }
    return total / static_cast<double>(impl_->num_sets);
}

long CachedFitness::evaluations() const { return impl_->misses; }

long CachedFitness::calls() const { return impl_->calls; }

CachedFitness make_polarforming_fitness(const std::vector<Drop>& drops,
                                        const ArrayGeometry& geom,
                                        const RadiationPattern& pattern,
                                        double wavelength, const SolverConfig& solver,
                                        const QuantizationConfig& quant) {
    auto evaluator = [drops, geom, pattern, wavelength, solver, quant](
                         const RotationAngles& s, int set_index) {
        const Drop& drop = drops[static_cast<size_t>(set_index)];
        PddProblem problem;
        problem.samples = build_channel_samples(drop, geom, pattern, s, wavelength);
        problem.user_weights.reserve(drop.users.size());
        for (const UserState& user : drop.users) {
            problem.user_weights.push_back(user.weight);
        }
        return solve_multistart(problem, solver, quant).weighted_sum_rate;
    };
    return CachedFitness(std::move(evaluator), static_cast<int>(drops.size()));
}

void pso_step(std::vector<Particle>& particles, RotationAngles& global_best,
              double& global_best_fitness, const PsoConfig& config,
              std::vector<Rng>& particle_rngs, const FitnessFn& fitness) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (size_t j = 0; j < particles.size(); ++j) {
        Particle& p = particles[j];
        Rng& rng = particle_rngs[j];
        const double tau1 = unit(rng);
        const double tau2 = unit(rng);

        const Vec3 pos(p.position.alpha, p.position.beta, p.position.gamma);
        const Vec3 own_best(p.best_position.alpha, p.best_position.beta, p.best_position.gamma);
        const Vec3 swarm_best(global_best.alpha, global_best.beta, global_best.gamma);
        p.velocity = config.inertia * p.velocity + config.c1 * tau1 * (own_best - pos) +
                     config.c2 * tau2 * (swarm_best - pos);
        const Vec3 moved = pos + p.velocity;
        p.position = RotationAngles{moved.x(), moved.y(), moved.z()}.normalized();

        const double value = fitness(p.position);
        const double reference = config.compare_with_own_best ? p.best_fitness : p.last_fitness;
        if (value > reference) {
            p.best_fitness = value;  // keeps the (position, fitness) pair consistent
            p.best_position = p.position;
        }
        p.last_fitness = value;
    }
    for (const Particle& p : particles) {
        if (p.best_fitness > global_best_fitness) {
            global_best_fitness = p.best_fitness;
            global_best = p.best_position;
        }
    }
}

PsoResult optimize_rotation(const FitnessFn& fitness, const PsoConfig& config) {
    std::vector<Rng> rngs;
    rngs.reserve(static_cast<size_t>(config.swarm_size));
    for (int j = 0; j < config.swarm_size; ++j) {
        rngs.push_back(split_rng(config.seed, j));
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Particle> particles(static_cast<size_t>(config.swarm_size));
    PsoResult result;
    result.best_fitness = -std::numeric_limits<double>::infinity();
    long calls = 0;
    double fitness_sum = 0.0;
    for (int j = 0; j < config.swarm_size; ++j) {
        Particle& p = particles[static_cast<size_t>(j)];
        Rng& rng = rngs[static_cast<size_t>(j)];
        p.position = RotationAngles{kTwoPi * unit(rng), kTwoPi * unit(rng), kTwoPi * unit(rng)};
        p.best_position = p.position;
        p.best_fitness = fitness(p.position);
        p.last_fitness = p.best_fitness;
        ++calls;
        fitness_sum += p.best_fitness;
        if (p.best_fitness > result.best_fitness) {
            result.best_fitness = p.best_fitness;
            result.best_position = p.best_position;
        }
    }
    result.telemetry.push_back(
        {0, result.best_fitness, fitness_sum / static_cast<double>(config.swarm_size)});

    for (int iter = 1; iter <= config.iterations; ++iter) {
        pso_step(particles, result.best_position, result.best_fitness, config, rngs, fitness);
        calls += config.swarm_size;
        double mean = 0.0;
        for (const Particle& p : particles) {
            mean += p.last_fitness;
        }
        mean /= static_cast<double>(config.swarm_size);
        result.telemetry.push_back({iter, result.best_fitness, mean});
    }
    result.fitness_calls = calls;
    return result;
}

TwoTimescaleResult two_timescale_run(const std::vector<Drop>& statistical_drops,
                                     const std::vector<Drop>& fast_drops,
                                     const ArrayGeometry& geom,
                                     const RadiationPattern& pattern, double wavelength,
                                     const SolverConfig& solver, const PsoConfig& pso,
                                     const QuantizationConfig& quant) {
    const CachedFitness fitness =
        make_polarforming_fitness(statistical_drops, geom, pattern, wavelength, solver, quant);
    const PsoResult step1 = optimize_rotation(fitness, pso);

    TwoTimescaleResult result;
    result.rotation = step1.best_position;
    result.pso_best_fitness = step1.best_fitness;
    result.telemetry = step1.telemetry;

    for (const Drop& drop : fast_drops) {
        PddProblem problem;
        problem.samples = build_channel_samples(drop, geom, pattern, result.rotation, wavelength);
        for (const UserState& user : drop.users) {
            problem.user_weights.push_back(user.weight);
        }
        const SolveResult run = solve_multistart(problem, solver, quant);
        result.per_sample_rates.push_back(run.weighted_sum_rate);
        result.solver_sweeps += run.inner_iterations;
        result.average_rate += run.weighted_sum_rate;
    }
    if (!fast_drops.empty()) {
        result.average_rate /= static_cast<double>(fast_drops.size());
    }
    return result;
}

std::string telemetry_to_csv(const std::vector<SwarmTelemetryRow>& rows) {
    std::ostringstream out;
    out << "iteration,best_fitness,mean_fitness\n";
    out.precision(17);
    for (const SwarmTelemetryRow& row : rows) {
        out << row.iteration << ',' << row.best_fitness << ',' << row.mean_fitness << '\n';
    }
    return out.str();
}

}  // namespace p6dma
