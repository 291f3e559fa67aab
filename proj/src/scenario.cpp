// SPDX-License-Identifier: Apache-2.0

#include "p6dma/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace p6dma {

double path_loss(double distance, double wavelength) {
    if (distance <= 0.0) {
        throw std::invalid_argument("path_loss: distance must be positive");
    }
    const double amplitude = wavelength / (4.0 * kPi * distance);
    return amplitude * amplitude;
}

Drop draw_drop(const ScenarioConfig& config, Rng& rng) {
    std::poisson_distribution<int> count_dist(config.mean_users);
    int count = count_dist(rng);
    while (count == 0) {
        count = count_dist(rng);  // empty drops have no defined sum rate
    }

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const CoverageRegion& region = config.region;
    const double r3_min = std::pow(region.min_radius, 3);
    const double r3_max = std::pow(region.max_radius, 3);
    const double sin_el_min = std::sin(region.min_elevation);
    const double sin_el_max = std::sin(region.max_elevation);
    const double wavelength = config.wavelength();

    Drop drop;
    drop.users.reserve(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        UserState user;
        // Volume-uniform placement: cubic radius, uniform sin(elevation).
        const double radius = std::cbrt(r3_min + unit(rng) * (r3_max - r3_min));
        const double sin_el = sin_el_min + unit(rng) * (sin_el_max - sin_el_min);
        const double azimuth =
            region.min_azimuth + unit(rng) * (region.max_azimuth - region.min_azimuth);
        user.direction = Direction{std::asin(sin_el), azimuth};
        user.distance = radius;
        user.path_loss = path_loss(radius, wavelength);
        user.rotation =
            RotationAngles{kTwoPi * unit(rng), kTwoPi * unit(rng), kTwoPi * unit(rng)};
        user.weight = 1.0;
        drop.users.push_back(user);
    }
    return drop;
}

std::vector<ChannelSample> build_channel_samples(const Drop& drop,
                                                 const ArrayGeometry& geom,
                                                 const RadiationPattern& pattern,
                                                 const RotationAngles& u,
                                                 double wavelength) {
    const Mat3 bs_rotation = rotation_matrix(u);
    std::vector<ChannelSample> samples;
    samples.reserve(drop.users.size());
    for (const UserState& user : drop.users) {
        ChannelSample sample;
        sample.unpolarformed = unpolarformed_channel(user, geom, u, pattern, wavelength);
        sample.depolarization =
            depolarization_matrix(bs_rotation, rotation_matrix(user.rotation), user.direction);
        samples.push_back(std::move(sample));
    }
    return samples;
}

std::vector<SampleSet> generate_samples(const ScenarioConfig& config, DropMode mode,
                                        const ArrayGeometry& geom,
                                        const RadiationPattern& pattern,
                                        const RotationAngles& u, Rng& rng) {
    std::vector<SampleSet> sets;
    sets.reserve(static_cast<size_t>(config.sample_count));
    Drop fixed;
    if (mode == DropMode::kFixedDrop) {
        fixed = draw_drop(config, rng);
    }
    for (int l = 0; l < config.sample_count; ++l) {
        SampleSet set;
        set.drop = (mode == DropMode::kFixedDrop) ? fixed : draw_drop(config, rng);
        set.channels = build_channel_samples(set.drop, geom, pattern, u, config.wavelength());
        sets.push_back(std::move(set));
    }
    return sets;
}

namespace {

using nlohmann::json;

json user_to_json(const UserState& user) {
    return json{{"theta", user.direction.theta},
                {"phi", user.direction.phi},
                {"distance", user.distance},
                {"path_loss", user.path_loss},
                {"rotation", {user.rotation.alpha, user.rotation.beta, user.rotation.gamma}},
                {"weight", user.weight}};
}

UserState user_from_json(const json& j) {
    UserState user;
    user.direction = Direction{j.at("theta").get<double>(), j.at("phi").get<double>()};
    user.distance = j.at("distance").get<double>();
    user.path_loss = j.at("path_loss").get<double>();
    const json& rot = j.at("rotation");
    user.rotation = RotationAngles{rot.at(0).get<double>(), rot.at(1).get<double>(),
                                   rot.at(2).get<double>()};
    user.weight = j.at("weight").get<double>();
    return user;
}

}  // namespace

std::string drop_to_json(const Drop& drop) {
    json users = json::array();
    for (const UserState& user : drop.users) {
        users.push_back(user_to_json(user));
    }
    return json{{"users", users}}.dump();
}

Drop drop_from_json(const std::string& text) {
    const json doc = json::parse(text);
    Drop drop;
    for (const json& j : doc.at("users")) {
        drop.users.push_back(user_from_json(j));
    }
    return drop;
}

}  // namespace p6dma
