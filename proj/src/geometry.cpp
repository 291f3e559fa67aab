// SPDX-License-Identifier: Apache-2.0

#include "p6dma/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace p6dma {

double wrap_angle(double x) {
    double w = std::fmod(x, kTwoPi);
    if (w < 0.0) {
        w += kTwoPi;
    }
    return w;
}

RotationAngles RotationAngles::normalized() const {
    return {wrap_angle(alpha), wrap_angle(beta), wrap_angle(gamma)};
}

ArrayGeometry ArrayGeometry::uniform_planar(int num_antennas, double spacing) {
    ArrayGeometry geom;
    geom.num_antennas = num_antennas;
    geom.spacing = spacing;
    geom.local_positions.reserve(static_cast<size_t>(num_antennas));

    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_antennas))));
    const int rows = (num_antennas + cols - 1) / cols;
    const double x0 = 0.5 * static_cast<double>(cols - 1);
    const double y0 = 0.5 * static_cast<double>(rows - 1);
    for (int n = 0; n < num_antennas; ++n) {
        const int r = n / cols;
        const int c = n % cols;
        geom.local_positions.emplace_back((static_cast<double>(c) - x0) * spacing,
                                          (static_cast<double>(r) - y0) * spacing, 0.0);
    }
    return geom;
}

Mat3 rotation_matrix(const RotationAngles& u) {
    const double ca = std::cos(u.alpha), sa = std::sin(u.alpha);
    const double cb = std::cos(u.beta), sb = std::sin(u.beta);
    const double cg = std::cos(u.gamma), sg = std::sin(u.gamma);

    Mat3 r;
    r << cb * cg, cb * sg, -sb,                              //
        sb * sa * cg - ca * sg, sb * sa * sg + ca * cg, cb * sa,  //
        ca * sb * cg + sa * sg, ca * sb * sg - sa * cg, ca * cb;
    return r;
}

std::vector<Vec3> global_antenna_positions(const ArrayGeometry& geom,
                                           const RotationAngles& u) {
    const Mat3 r = rotation_matrix(u);
    std::vector<Vec3> out;
    out.reserve(geom.local_positions.size());
    for (const Vec3& p : geom.local_positions) {
        out.emplace_back(r * p);
    }
    return out;
}

Vec3 pointing_vector(const Direction& d) {
    const double ct = std::cos(d.theta);
    return {ct * std::cos(d.phi), ct * std::sin(d.phi), std::sin(d.theta)};
}

Direction local_doa(const RotationAngles& u, const Vec3& f) {
    return local_doa(rotation_matrix(u), f);
}

Direction local_doa(const Mat3& rotation, const Vec3& f) {
    const Vec3 local = rotation.transpose() * f;
    const double sz = std::clamp(local.z(), -1.0, 1.0);
    Direction d;
    d.theta = std::asin(sz);
    const double ct = std::cos(d.theta);
    // Pole convention: azimuth undefined, fixed to 0.
    d.phi = (ct < 1e-15) ? 0.0 : std::atan2(local.y(), local.x());
    return d;
}

}  // namespace p6dma
