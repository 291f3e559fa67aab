// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo scenario generation: Poisson user drops over a 3D annular
// sector, random terminal orientations, free-space path loss, and channel
// sample batches for both timescales.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "p6dma/channel.hpp"

namespace p6dma {

using Rng = std::mt19937_64;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// 3D annular sector around the BS. Users are placed uniformly over its
/// volume.
struct CoverageRegion {
    double min_radius = 20.0;
    double max_radius = 100.0;
    double min_azimuth = -kPi;
    double max_azimuth = kPi;
    double min_elevation = -kPi / 6.0;
    double max_elevation = kPi / 6.0;
};

struct ScenarioConfig {
    int num_bs_antennas = 16;
    double mean_users = 8.0;
    double carrier_frequency_hz = 24e9;
    CoverageRegion region;
    double power_budget = 1.0;     // watts
    double noise_power = 1e-12;    // watts (-90 dBm)
    int sample_count = 8;          // L
    std::uint64_t seed = 1;

    double wavelength() const { return kSpeedOfLight / carrier_frequency_hz; }
};

/// One realization of the user population.
struct Drop {
    std::vector<UserState> users;

    int num_users() const { return static_cast<int>(users.size()); }
};

/// Free-space path loss (lambda / (4 pi d))^2. Throws on d <= 0.
double path_loss(double distance, double wavelength);

/// Poisson(mean_users) drop, redrawn while empty, with volume-uniform user
/// positions and i.i.d. uniform rotations in [0, 2*pi)^3.
Drop draw_drop(const ScenarioConfig& config, Rng& rng);

/// Channel realizations for every user of a drop under array rotation u.
std::vector<ChannelSample> build_channel_samples(const Drop& drop,
                                                 const ArrayGeometry& geom,
                                                 const RadiationPattern& pattern,
                                                 const RotationAngles& u,
                                                 double wavelength);

enum class DropMode {
    kFixedDrop,    // one drop, replicated across the batch
    kFreshDrops,   // a new drop per sample set
};

struct SampleSet {
    Drop drop;
    std::vector<ChannelSample> channels;
};

/// L channel-sample sets for the given rotation. Fresh-drop mode models
/// the statistical-CSI distribution; fixed-drop mode models repeated
/// fast-timescale use of one realization.
std::vector<SampleSet> generate_samples(const ScenarioConfig& config, DropMode mode,
                                        const ArrayGeometry& geom,
                                        const RadiationPattern& pattern,
                                        const RotationAngles& u, Rng& rng);

// JSON round-trip for drops (layout shared with the channel sample format).
std::string drop_to_json(const Drop& drop);
Drop drop_from_json(const std::string& text);

}  // namespace p6dma
