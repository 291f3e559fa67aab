// SPDX-License-Identifier: Apache-2.0
//
// Polarforming coefficients, discrete amplitude/phase codebooks, wavefront
// polarization bases and the transmit/receive projection matrices that make
// up the dual-polarized antenna response.

#pragma once

#include <complex>
#include <vector>

#include "p6dma/geometry.hpp"

namespace p6dma {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2d;
using PolarVec = Eigen::Vector2cd;  // [0] = V-element, [1] = H-element

// Fixed prefactor of the BS transmit polarformer. The codebook constrains
// the per-element coefficients; this scale is applied outside of it.
inline const double kTxPolarformerScale = 1.0 / std::sqrt(2.0);

/// Bit widths of the discrete phase and amplitude control per element.
struct QuantizationConfig {
    int phase_bits = 2;
    int amplitude_bits = 2;

    bool operator==(const QuantizationConfig&) const = default;
};

/// Discrete phase values: 2^phase_bits points equally spaced in [0, 2*pi).
std::vector<double> phase_set(const QuantizationConfig& q);

/// Discrete amplitude values: 2^amplitude_bits points equally spaced in
/// [0, 1]. amplitude_bits = 0 is phase-only control and fixes the
/// amplitude at 1.
std::vector<double> amplitude_set(const QuantizationConfig& q);

/// All representable coefficients rho*exp(j*theta). The amplitude-zero
/// duplicates collapse to a single 0 entry.
std::vector<Complex> codebook(const QuantizationConfig& q);

/// Nearest codebook coefficient under the sequential rule: pick the phase
/// closest to arg(target) by circular distance first, then the amplitude
/// minimizing |rho*exp(j*phase) - target|. Ties break toward the smaller
/// phase and the smaller amplitude.
Complex project_to_codebook(Complex target, const QuantizationConfig& q);

/// True when |value - project_to_codebook(value)| <= tol.
bool is_codebook_member(Complex value, const QuantizationConfig& q,
                        double tol = 1e-12);

/// Orthonormal electric-field components on the wavefront for a direction.
struct PolarizationBasis {
    Vec3 z;
    Vec3 z_bar;
};

PolarizationBasis polarization_basis(const Direction& d);

// Antenna element axes in the local frame: V along y', H along x'.
inline const Vec3 kVElementAxis{0.0, 1.0, 0.0};
inline const Vec3 kHElementAxis{1.0, 0.0, 0.0};

/// Transmit-side projection of the rotated element axes onto the wavefront
/// basis: rows ((R e_v).z, (R e_h).z ; (R e_v).z_bar, (R e_h).z_bar).
Mat2 tx_projection(const RotationAngles& u, const Direction& d);
Mat2 tx_projection(const Mat3& rotation, const Direction& d);

/// Receive-side projection, the transposed layout of tx_projection.
Mat2 rx_projection(const RotationAngles& u_rx, const Direction& d);
Mat2 rx_projection(const Mat3& rotation, const Direction& d);

/// Dual-polarized response between the rotated transmit and receive
/// elements: A = Q(u_rx) * P(u).
Mat2 depolarization_matrix(const RotationAngles& u, const RotationAngles& u_rx,
                           const Direction& d);
Mat2 depolarization_matrix(const Mat3& tx_rotation, const Mat3& rx_rotation,
                           const Direction& d);

}  // namespace p6dma
