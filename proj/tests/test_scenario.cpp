// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "p6dma/scenario.hpp"

using namespace p6dma;

TEST_CASE("free-space path loss") {
    const double wavelength = 0.0125;
    SUBCASE("unit gain at d = lambda/(4 pi)") {
        CHECK(path_loss(wavelength / (4.0 * kPi), wavelength) == doctest::Approx(1.0));
    }
    SUBCASE("inverse-square law") {
        const double base = path_loss(30.0, wavelength);
        CHECK(path_loss(60.0, wavelength) == doctest::Approx(base / 4.0));
    }
    SUBCASE("24 GHz at 100 m") {
        const double lambda = kSpeedOfLight / 24e9;
        // (lambda / (4 pi 100))^2 evaluated independently
        CHECK(path_loss(100.0, lambda) == doctest::Approx(9.8806e-11).epsilon(1e-4));
    }
    SUBCASE("nonpositive distance throws") {
        CHECK_THROWS_AS(path_loss(0.0, wavelength), std::invalid_argument);
        CHECK_THROWS_AS(path_loss(-2.0, wavelength), std::invalid_argument);
    }
}

TEST_CASE("drop statistics and determinism") {
    ScenarioConfig config;
    config.mean_users = 8.0;

    SUBCASE("same seed gives the identical drop") {
        Rng rng_a(99), rng_b(99);
        const Drop a = draw_drop(config, rng_a);
        const Drop b = draw_drop(config, rng_b);
        REQUIRE(a.num_users() == b.num_users());
        for (int k = 0; k < a.num_users(); ++k) {
            const size_t uk = static_cast<size_t>(k);
            CHECK(a.users[uk].direction.theta == b.users[uk].direction.theta);
            CHECK(a.users[uk].direction.phi == b.users[uk].direction.phi);
            CHECK(a.users[uk].distance == b.users[uk].distance);
            CHECK(a.users[uk].rotation.alpha == b.users[uk].rotation.alpha);
        }
    }

    SUBCASE("drops are never empty and respect the region") {
        Rng rng(7);
        ScenarioConfig sparse = config;
        sparse.mean_users = 0.2;  // empty Poisson draws are frequent and redrawn
        for (int i = 0; i < 200; ++i) {
            const Drop drop = draw_drop(sparse, rng);
            CHECK(drop.num_users() >= 1);
            for (const UserState& user : drop.users) {
                CHECK(user.distance >= sparse.region.min_radius);
                CHECK(user.distance <= sparse.region.max_radius);
                CHECK(user.direction.theta >= sparse.region.min_elevation - 1e-12);
                CHECK(user.direction.theta <= sparse.region.max_elevation + 1e-12);
                CHECK(user.direction.phi >= sparse.region.min_azimuth - 1e-12);
                CHECK(user.direction.phi <= sparse.region.max_azimuth + 1e-12);
                CHECK(user.path_loss ==
                      doctest::Approx(path_loss(user.distance, sparse.wavelength())));
                CHECK(user.weight == 1.0);
            }
        }
    }

    SUBCASE("point-like region collapses directions and distances") {
        ScenarioConfig point = config;
        point.region.min_radius = 50.0;
        point.region.max_radius = 50.0 + 1e-12;
        point.region.min_azimuth = 0.7;
        point.region.max_azimuth = 0.7;
        point.region.min_elevation = -0.2;
        point.region.max_elevation = -0.2;
        Rng rng(3);
        const Drop drop = draw_drop(point, rng);
        for (const UserState& user : drop.users) {
            CHECK(user.distance == doctest::Approx(50.0));
            CHECK(user.direction.phi == doctest::Approx(0.7));
            CHECK(user.direction.theta == doctest::Approx(-0.2));
        }
    }

    SUBCASE("Poisson count mean over many drops") {
        Rng rng(12345);
        const int trials = 2000;
        double total = 0.0;
        for (int i = 0; i < trials; ++i) {
            total += draw_drop(config, rng).num_users();
        }
        const double mean = total / trials;
        const double standard_error = std::sqrt(config.mean_users / trials);
        CHECK(std::abs(mean - config.mean_users) < 3.0 * standard_error);
    }
}

TEST_CASE("channel sample generation") {
    ScenarioConfig config;
    config.mean_users = 4.0;
    config.sample_count = 3;
    const ArrayGeometry geom =
        ArrayGeometry::uniform_planar(config.num_bs_antennas, config.wavelength() / 2.0);
    const RadiationPattern pattern = RadiationPattern::directive(8.0, 2.0);

    SUBCASE("norm identity holds for every generated sample") {
        Rng rng(5);
        const RotationAngles u{0.3, 1.1, 4.0};
        const auto sets =
            generate_samples(config, DropMode::kFreshDrops, geom, pattern, u, rng);
        REQUIRE(sets.size() == 3);
        for (const SampleSet& set : sets) {
            REQUIRE(set.channels.size() == set.drop.users.size());
            for (size_t k = 0; k < set.channels.size(); ++k) {
                const double gain = effective_gain(pattern, u, set.drop.users[k].direction);
                const double expected =
                    config.num_bs_antennas * set.drop.users[k].path_loss * gain;
                CHECK(set.channels[k].unpolarformed.squaredNorm() ==
                      doctest::Approx(expected).epsilon(1e-10));
            }
        }
    }

    SUBCASE("fixed-drop mode replicates one drop") {
        Rng rng(6);
        const auto sets = generate_samples(config, DropMode::kFixedDrop, geom, pattern,
                                           RotationAngles{0, 0, 0}, rng);
        REQUIRE(sets.size() == 3);
        for (size_t l = 1; l < sets.size(); ++l) {
            REQUIRE(sets[l].drop.num_users() == sets[0].drop.num_users());
            for (size_t k = 0; k < sets[l].channels.size(); ++k) {
                CHECK((sets[l].channels[k].unpolarformed - sets[0].channels[k].unpolarformed)
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
            }
        }
    }

    SUBCASE("rotations change steering but keep the isotropic norm") {
        Rng rng(8);
        const Drop drop = draw_drop(config, rng);
        const RadiationPattern iso = RadiationPattern::isotropic();
        const auto a =
            build_channel_samples(drop, geom, iso, RotationAngles{0, 0, 0}, config.wavelength());
        const auto b = build_channel_samples(drop, geom, iso, RotationAngles{0.5, 1.0, 2.5},
                                             config.wavelength());
        bool any_entry_differs = false;
        for (size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].unpolarformed.norm() ==
                  doctest::Approx(b[k].unpolarformed.norm()).epsilon(1e-10));
            if ((a[k].unpolarformed - b[k].unpolarformed).cwiseAbs().maxCoeff() > 1e-9) {
                any_entry_differs = true;
            }
        }
        CHECK(any_entry_differs);
    }

    SUBCASE("fresh-drop batches are seed reproducible") {
        Rng rng_a(77), rng_b(77);
        const auto a = generate_samples(config, DropMode::kFreshDrops, geom, pattern,
                                        RotationAngles{1, 2, 3}, rng_a);
        const auto b = generate_samples(config, DropMode::kFreshDrops, geom, pattern,
                                        RotationAngles{1, 2, 3}, rng_b);
        REQUIRE(a.size() == b.size());
        for (size_t l = 0; l < a.size(); ++l) {
            REQUIRE(a[l].channels.size() == b[l].channels.size());
            for (size_t k = 0; k < a[l].channels.size(); ++k) {
                CHECK((a[l].channels[k].unpolarformed - b[l].channels[k].unpolarformed)
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
                CHECK((a[l].channels[k].depolarization - b[l].channels[k].depolarization)
                          .cwiseAbs()
                          .maxCoeff() == 0.0);
            }
        }
    }
}

TEST_CASE("drop JSON round trip") {
    ScenarioConfig config;
    Rng rng(21);
    const Drop drop = draw_drop(config, rng);
    const Drop parsed = drop_from_json(drop_to_json(drop));
    REQUIRE(parsed.num_users() == drop.num_users());
    for (int k = 0; k < drop.num_users(); ++k) {
        const size_t uk = static_cast<size_t>(k);
        CHECK(parsed.users[uk].direction.theta == drop.users[uk].direction.theta);
        CHECK(parsed.users[uk].direction.phi == drop.users[uk].direction.phi);
        CHECK(parsed.users[uk].distance == drop.users[uk].distance);
        CHECK(parsed.users[uk].path_loss == drop.users[uk].path_loss);
        CHECK(parsed.users[uk].rotation.alpha == drop.users[uk].rotation.alpha);
        CHECK(parsed.users[uk].rotation.beta == drop.users[uk].rotation.beta);
        CHECK(parsed.users[uk].rotation.gamma == drop.users[uk].rotation.gamma);
        CHECK(parsed.users[uk].weight == drop.users[uk].weight);
    }
}

TEST_CASE("wavelength is derived from the carrier") {
    ScenarioConfig config;
    config.carrier_frequency_hz = 24e9;
    CHECK(config.wavelength() == doctest::Approx(0.0124913524).epsilon(1e-9));
}
