// SPDX-License-Identifier: Apache-2.0
//
// Coordinate systems, Euler rotations, array geometry and local
// direction-of-arrival computation for the movable-antenna array.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace p6dma {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Wrap an angle into [0, 2*pi).
double wrap_angle(double x);

/// Euler rotation angles about the global x-, y- and z-axes, in radians.
struct RotationAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    /// Componentwise wrap into [0, 2*pi).
    RotationAngles normalized() const;

    bool operator==(const RotationAngles&) const = default;
};

/// Signal direction seen from the array center: elevation in
/// [-pi/2, pi/2], azimuth in [-pi, pi].
struct Direction {
    double theta = 0.0;
    double phi = 0.0;

    bool operator==(const Direction&) const = default;
};

/// Antenna positions of the BS array expressed in the array's local frame.
struct ArrayGeometry {
    int num_antennas = 0;
    std::vector<Vec3> local_positions;
    double spacing = 0.0;

    /// Near-square uniform planar array in the local x-y plane, centered on
    /// the origin, row-major element order.
    static ArrayGeometry uniform_planar(int num_antennas, double spacing);
};

/// Rotation matrix for the x/y/z Euler angles. Orthogonal with det +1.
Mat3 rotation_matrix(const RotationAngles& u);

/// Antenna positions mapped into the global frame: R(u) * r_local.
std::vector<Vec3> global_antenna_positions(const ArrayGeometry& geom,
                                           const RotationAngles& u);

/// Unit pointing vector [cos(t)cos(p), cos(t)sin(p), sin(t)].
Vec3 pointing_vector(const Direction& d);

/// Direction of arrival in the array's local frame. The global unit vector
/// f is mapped through R^T (inverse of the orthogonal rotation) and
/// decomposed into spherical angles. At the poles (|sin(theta)| = 1) the
/// azimuth is fixed to 0.
Direction local_doa(const RotationAngles& u, const Vec3& f);
Direction local_doa(const Mat3& rotation, const Vec3& f);

}  // namespace p6dma
