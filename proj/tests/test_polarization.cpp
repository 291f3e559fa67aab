// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "p6dma/polarization.hpp"

using namespace p6dma;

namespace {

std::mt19937_64 make_rng(unsigned seed) { return std::mt19937_64(seed); }

Direction random_direction(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> theta(-kTwoPi / 4.0, kTwoPi / 4.0);
    std::uniform_real_distribution<double> phi(-kTwoPi / 2.0, kTwoPi / 2.0);
    return {theta(rng), phi(rng)};
}

RotationAngles random_angles(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    return {angle(rng), angle(rng), angle(rng)};
}

// Brute-force reference for the sequential projection rule.
Complex sequential_projection_reference(Complex target, const QuantizationConfig& q) {
    const double target_angle = std::arg(target);
    double best_phase = 0.0;
    double best_dist = 1e300;
    for (double theta : phase_set(q)) {
        double diff = std::abs(theta - target_angle);
        diff = std::fmod(diff, kTwoPi);
        diff = std::min(diff, kTwoPi - diff);
        if (diff < best_dist) {
            best_dist = diff;
            best_phase = theta;
        }
    }
    Complex best_value{0.0, 0.0};
    double best_amp_dist = 1e300;
    for (double rho : amplitude_set(q)) {
        const Complex candidate = rho * Complex(std::cos(best_phase), std::sin(best_phase));
        const double dist = std::abs(candidate - target);
        if (dist < best_amp_dist) {
            best_amp_dist = dist;
            best_value = candidate;
        }
    }
    return best_value;
}

}  // namespace

TEST_CASE("polarization basis at boresight directions") {
    const PolarizationBasis front = polarization_basis({0.0, 0.0});
    CHECK((front.z - Vec3{0, -1, 0}).norm() < 1e-15);
    CHECK((front.z_bar - Vec3{1, 0, 0}).norm() < 1e-15);

    const PolarizationBasis top = polarization_basis({kTwoPi / 4.0, 0.0});
    CHECK((top.z - Vec3{0, 0, 1}).norm() < 1e-15);
    CHECK((top.z_bar - Vec3{1, 0, 0}).norm() < 1e-15);
}

TEST_CASE("polarization basis is orthonormal with the closed-form cross product") {
    auto rng = make_rng(5);
    for (int i = 0; i < 1000; ++i) {
        const Direction d = random_direction(rng);
        const PolarizationBasis b = polarization_basis(d);
        CHECK(std::abs(b.z.norm() - 1.0) < 1e-14);
        CHECK(std::abs(b.z_bar.norm() - 1.0) < 1e-14);
        CHECK(std::abs(b.z.dot(b.z_bar)) < 1e-14);

        const Vec3 cross = b.z.cross(b.z_bar);
        const Vec3 expected{std::cos(d.theta) * std::sin(d.phi), std::sin(d.theta),
                            std::cos(d.theta) * std::cos(d.phi)};
        CHECK((cross - expected).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("tx projection at the reference configuration") {
    const Mat2 p = tx_projection(RotationAngles{0, 0, 0}, Direction{0, 0});
    Mat2 expected;
    expected << -1, 0, 0, 1;
    CHECK((p - expected).norm() < 1e-15);
}

TEST_CASE("tx projection entries equal the direct dot products") {
    auto rng = make_rng(6);
    for (int i = 0; i < 200; ++i) {
        const Direction d = random_direction(rng);
        const Mat2 p = tx_projection(RotationAngles{0, 0, 0}, d);
        const PolarizationBasis b = polarization_basis(d);
        CHECK(p(0, 0) == doctest::Approx(kVElementAxis.dot(b.z)).epsilon(1e-14));
        CHECK(p(0, 1) == doctest::Approx(kHElementAxis.dot(b.z)).epsilon(1e-14));
        CHECK(p(1, 0) == doctest::Approx(kVElementAxis.dot(b.z_bar)).epsilon(1e-14));
        CHECK(p(1, 1) == doctest::Approx(kHElementAxis.dot(b.z_bar)).epsilon(1e-14));
    }
}

TEST_CASE("projection entries stay in [-1, 1]") {
    auto rng = make_rng(7);
    for (int i = 0; i < 1000; ++i) {
        const RotationAngles u = random_angles(rng);
        const Direction d = random_direction(rng);
        CHECK(tx_projection(u, d).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
        CHECK(rx_projection(u, d).cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
    }
}

TEST_CASE("rx projection is the transposed tx projection") {
    const Mat2 q0 = rx_projection(RotationAngles{0, 0, 0}, Direction{0, 0});
    Mat2 expected;
    expected << -1, 0, 0, 1;
    CHECK((q0 - expected).norm() < 1e-15);

    auto rng = make_rng(8);
    for (int i = 0; i < 500; ++i) {
        const RotationAngles u = random_angles(rng);
        const Direction d = random_direction(rng);
        const Mat2 q = rx_projection(u, d);
        const Mat2 p = tx_projection(u, d);
        CHECK((q - p.transpose()).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("depolarization matrix is the Q*P product") {
    const Mat2 a0 =
        depolarization_matrix(RotationAngles{0, 0, 0}, RotationAngles{0, 0, 0}, Direction{0, 0});
    CHECK((a0 - Mat2::Identity()).norm() < 1e-15);

    auto rng = make_rng(9);
    for (int i = 0; i < 500; ++i) {
        const RotationAngles u = random_angles(rng);
        const RotationAngles ur = random_angles(rng);
        const Direction d = random_direction(rng);
        const Mat2 a = depolarization_matrix(u, ur, d);
        const Mat2 product = rx_projection(ur, d) * tx_projection(u, d);
        CHECK((a - product).cwiseAbs().maxCoeff() < 1e-15);
        CHECK(a.cwiseAbs().maxCoeff() <= 2.0 + 1e-12);
    }
}

TEST_CASE("aligned antennas rotated about the propagation axis keep A orthogonal") {
    // Both element planes coincide with the wavefront plane; an extra common
    // rotation about the propagation axis must keep A^T A diagonal.
    auto rng = make_rng(10);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    for (int i = 0; i < 200; ++i) {
        const Direction d = random_direction(rng);
        const PolarizationBasis b = polarization_basis(d);
        const Vec3 axis = b.z.cross(b.z_bar);
        Mat3 aligned;
        aligned.col(0) = b.z;       // H element axis maps onto z
        aligned.col(1) = b.z_bar;   // V element axis maps onto z_bar
        aligned.col(2) = axis;
        CHECK(std::abs(aligned.determinant() - 1.0) < 1e-12);

        const double psi = angle(rng);
        const Mat3 spin = Eigen::AngleAxisd(psi, axis).toRotationMatrix();
        const Mat3 frame = spin * aligned;
        const Mat2 a = depolarization_matrix(frame, frame, d);
        const Mat2 gram = a.transpose() * a;
        CHECK(std::abs(gram(0, 1)) < 1e-12);
        CHECK(std::abs(gram(1, 0)) < 1e-12);
        CHECK(gram(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(gram(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("codebook enumeration") {
    SUBCASE("one phase bit, one amplitude bit") {
        const auto values = codebook({1, 1});
        REQUIRE(values.size() == 3);  // {0, 1, -1} after merging duplicate zeros
        CHECK(std::abs(values[0]) == 0.0);
        CHECK(std::abs(values[1] - Complex(1.0, 0.0)) < 1e-15);
        CHECK(std::abs(values[2] - Complex(-1.0, 0.0)) < 1e-15);
    }
    SUBCASE("phase-only control") {
        const auto values = codebook({2, 0});
        REQUIRE(values.size() == 4);
        CHECK(std::abs(values[0] - Complex(1, 0)) < 1e-15);
        CHECK(std::abs(values[1] - Complex(0, 1)) < 1e-15);
        CHECK(std::abs(values[2] - Complex(-1, 0)) < 1e-15);
        CHECK(std::abs(values[3] - Complex(0, -1)) < 1e-15);
    }
    SUBCASE("amplitude-only control") {
        const auto values = codebook({0, 2});
        REQUIRE(values.size() == 4);
        for (size_t i = 0; i < values.size(); ++i) {
            CHECK(values[i].imag() == 0.0);
            CHECK(values[i].real() == doctest::Approx(static_cast<double>(i) / 3.0));
        }
    }
    SUBCASE("grid size before zero merging") {
        const QuantizationConfig q{3, 2};
        CHECK(phase_set(q).size() == 8);
        CHECK(amplitude_set(q).size() == 4);
        CHECK(codebook(q).size() == 8 * 4 - 7);  // 8 duplicate zeros collapse to one
    }
}

TEST_CASE("sequential codebook projection") {
    SUBCASE("phase first, then amplitude") {
        const Complex projected = project_to_codebook(Complex(0.9 * std::cos(0.1), 0.9 * std::sin(0.1)),
                                                      {1, 1});
        CHECK(std::abs(projected - Complex(1.0, 0.0)) < 1e-15);
    }
    SUBCASE("zero maps to zero") {
        CHECK(std::abs(project_to_codebook(Complex(0, 0), {2, 1})) == 0.0);
    }
    SUBCASE("matches the exhaustive sequential rule") {
        auto rng = make_rng(11);
        std::uniform_real_distribution<double> coord(-1.5, 1.5);
        const QuantizationConfig q{2, 2};
        for (int i = 0; i < 1000; ++i) {
            const Complex target(coord(rng), coord(rng));
            const Complex expected = sequential_projection_reference(target, q);
            CHECK(std::abs(project_to_codebook(target, q) - expected) < 1e-15);
        }
    }
    SUBCASE("idempotent on codebook members") {
        for (const QuantizationConfig q : {QuantizationConfig{1, 1}, QuantizationConfig{2, 2},
                                           QuantizationConfig{3, 0}, QuantizationConfig{0, 3}}) {
            for (const Complex member : codebook(q)) {
                CHECK(std::abs(project_to_codebook(member, q) - member) < 1e-12);
                CHECK(is_codebook_member(member, q));
            }
        }
    }
    SUBCASE("phase is decided by angle alone, then amplitude") {
        const QuantizationConfig q{1, 1};  // members {0, 1, -1}
        // angle ~2.63 rad picks phase pi; |-1 - t| = 0.51 beats |0 - t|.
        CHECK(std::abs(project_to_codebook(Complex(-0.9, 0.5), q) - Complex(-1.0, 0.0)) < 1e-15);
        // angle ~2.30 rad still picks phase pi, but amplitude 0 is nearer.
        CHECK(std::abs(project_to_codebook(Complex(-0.4, 0.45), q)) == 0.0);
    }
}
