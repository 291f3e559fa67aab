// SPDX-License-Identifier: Apache-2.0
//
// Slow-timescale rotation optimization over statistical CSI via particle
// swarm, and the two-timescale orchestration that fixes the found rotation
// and re-runs the fast-timescale solver per coherence block.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "p6dma/scenario.hpp"
#include "p6dma/wmmse_pdd.hpp"

namespace p6dma {

struct PsoConfig {
    int swarm_size = 16;
    int iterations = 30;
    double inertia = 0.7;
    double c1 = 1.5;
    double c2 = 1.5;
    int sample_count = 8;   // statistical channel-sample sets (L)
    std::uint64_t seed = 1;
    // Accept a new local best against the particle's own best fitness
    // (default) or, as literally printed in the reference update rule,
    // against its previous-iteration fitness.
    bool compare_with_own_best = true;
};

struct Particle {
    RotationAngles position;
    Vec3 velocity = Vec3::Zero();
    RotationAngles best_position;
    double best_fitness = 0.0;
    double last_fitness = 0.0;
};

struct SwarmTelemetryRow {
    int iteration = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
};

using FitnessFn = std::function<double(const RotationAngles&)>;

/// Fitness functor with a cache keyed by the rotation quantized to 1e-6 rad
/// and the sample-set index; evaluations() counts cache misses.
class CachedFitness {
  public:
    using SetEvaluator = std::function<double(const RotationAngles&, int set_index)>;

    CachedFitness(SetEvaluator evaluator, int num_sets);

    double operator()(const RotationAngles& s) const;
    long evaluations() const;
    long calls() const;

  private:
    struct Impl;
    std::shared_ptr<Impl> impl_;
};

/// Averaged solver weighted sum rate over the drops: one full fast-timescale
/// polarforming solve per sample set.
CachedFitness make_polarforming_fitness(const std::vector<Drop>& drops,
                                        const ArrayGeometry& geom,
                                        const RadiationPattern& pattern,
                                        double wavelength, const SolverConfig& solver,
                                        const QuantizationConfig& quant);

/// One velocity/position update of the whole swarm followed by fitness
/// evaluation and local/global best tracking. Positions are wrapped into
/// [0, 2*pi) componentwise. The global best only ever improves.
void pso_step(std::vector<Particle>& particles, RotationAngles& global_best,
              double& global_best_fitness, const PsoConfig& config,
              std::vector<Rng>& particle_rngs, const FitnessFn& fitness);

struct PsoResult {
    RotationAngles best_position;
    double best_fitness = 0.0;
    std::vector<SwarmTelemetryRow> telemetry;
    long fitness_calls = 0;
};

/// Runs swarm_size particles for the configured iteration count. Particle
/// RNG streams are split from the master seed, so runs are reproducible.
PsoResult optimize_rotation(const FitnessFn& fitness, const PsoConfig& config);

struct TwoTimescaleResult {
    RotationAngles rotation;
    double pso_best_fitness = 0.0;
    double average_rate = 0.0;
    std::vector<double> per_sample_rates;
    int solver_sweeps = 0;
    std::vector<SwarmTelemetryRow> telemetry;
};

/// Step 1: PSO rotation optimization on the statistical drops. Step 2: the
/// rotation is frozen and the polarforming solver is re-run on every
/// fast-timescale drop; the average achieved weighted sum rate is reported.
TwoTimescaleResult two_timescale_run(const std::vector<Drop>& statistical_drops,
                                     const std::vector<Drop>& fast_drops,
                                     const ArrayGeometry& geom,
                                     const RadiationPattern& pattern, double wavelength,
                                     const SolverConfig& solver, const PsoConfig& pso,
                                     const QuantizationConfig& quant);

/// CSV rows: iteration,best_fitness,mean_fitness.
std::string telemetry_to_csv(const std::vector<SwarmTelemetryRow>& rows);

}  // namespace p6dma
