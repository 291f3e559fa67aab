// SPDX-License-Identifier: Apache-2.0

#include "p6dma/polarization.hpp"

#include <cmath>
#include <limits>

namespace p6dma {

std::vector<double> phase_set(const QuantizationConfig& q) {
    const int count = 1 << q.phase_bits;
    std::vector<double> phases(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        phases[static_cast<size_t>(i)] = kTwoPi * static_cast<double>(i) / count;
    }
    return phases;
}

std::vector<double> amplitude_set(const QuantizationConfig& q) {
    if (q.amplitude_bits == 0) {
        return {1.0};  // phase-only control
    }
    const int count = 1 << q.amplitude_bits;
    std::vector<double> amps(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        amps[static_cast<size_t>(i)] = static_cast<double>(i) / (count - 1);
    }
    return amps;
}

std::vector<Complex> codebook(const QuantizationConfig& q) {
    std::vector<Complex> values;
    bool have_zero = false;
    for (double rho : amplitude_set(q)) {
        for (double theta : phase_set(q)) {
            if (rho == 0.0) {
                if (!have_zero) {
                    values.emplace_back(0.0, 0.0);
                    have_zero = true;
                }
                continue;
            }
            values.emplace_back(rho * std::cos(theta), rho * std::sin(theta));
        }
    }
    return values;
}

namespace {

double circular_distance(double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
}

}  // namespace

Complex project_to_codebook(Complex target, const QuantizationConfig& q) {
    const double target_angle = std::arg(target);

    // Ties keep the first candidate, i.e. the smaller phase / amplitude.
    double best_phase = 0.0;
    double best_phase_dist = std::numeric_limits<double>::infinity();
    for (double theta : phase_set(q)) {
        const double dist = circular_distance(theta, target_angle);
        if (dist < best_phase_dist) {
            best_phase_dist = dist;
            best_phase = theta;
        }
    }

    const Complex dir(std::cos(best_phase), std::sin(best_phase));
    double best_amp = 0.0;
    double best_amp_dist = std::numeric_limits<double>::infinity();
    for (double rho : amplitude_set(q)) {
        const double dist = std::abs(rho * dir - target);
        if (dist < best_amp_dist) {
            best_amp_dist = dist;
            best_amp = rho;
        }
    }
    return best_amp * dir;
}

bool is_codebook_member(Complex value, const QuantizationConfig& q, double tol) {
    return std::abs(value - project_to_codebook(value, q)) <= tol;
}

PolarizationBasis polarization_basis(const Direction& d) {
    const double st = std::sin(d.theta), ct = std::cos(d.theta);
    const double sp = std::sin(d.phi), cp = std::cos(d.phi);
    PolarizationBasis basis;
    basis.z = Vec3{st * sp, -ct, st * cp};
    basis.z_bar = Vec3{cp, 0.0, -sp};
    return basis;
}

Mat2 tx_projection(const RotationAngles& u, const Direction& d) {
    return tx_projection(rotation_matrix(u), d);
}

Mat2 tx_projection(const Mat3& rotation, const Direction& d) {
    const PolarizationBasis b = polarization_basis(d);
    const Vec3 ev = rotation * kVElementAxis;
    const Vec3 eh = rotation * kHElementAxis;
    Mat2 p;
    p << ev.dot(b.z), eh.dot(b.z),  //
        ev.dot(b.z_bar), eh.dot(b.z_bar);
    return p;
}

Mat2 rx_projection(const RotationAngles& u_rx, const Direction& d) {
    return rx_projection(rotation_matrix(u_rx), d);
}

Mat2 rx_projection(const Mat3& rotation, const Direction& d) {
    const PolarizationBasis b = polarization_basis(d);
    const Vec3 ev = rotation * kVElementAxis;
    const Vec3 eh = rotation * kHElementAxis;
    Mat2 q;
    q << b.z.dot(ev), b.z_bar.dot(ev),  //
        b.z.dot(eh), b.z_bar.dot(eh);
    return q;
}

Mat2 depolarization_matrix(const RotationAngles& u, const RotationAngles& u_rx,
                           const Direction& d) {
    return depolarization_matrix(rotation_matrix(u), rotation_matrix(u_rx), d);
}

Mat2 depolarization_matrix(const Mat3& tx_rotation, const Mat3& rx_rotation,
                           const Direction& d) {
    return rx_projection(rx_rotation, d) * tx_projection(tx_rotation, d);
}

}  // namespace p6dma
