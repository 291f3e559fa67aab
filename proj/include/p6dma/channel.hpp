// SPDX-License-Identifier: Apache-2.0
//
// LoS channel assembly for the movable-antenna array: steering vector,
// effective element gain, unpolarformed channel, the full dual-polarized
// channel and the polarformed effective channel, plus the achievable rate.

#pragma once

#include <string>
#include <vector>

#include "p6dma/geometry.hpp"
#include "p6dma/polarization.hpp"

namespace p6dma {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

/// One served user: arrival direction at the BS, link distance, linear
/// path-loss power gain, the terminal's random orientation, and its rate
/// weight.
struct UserState {
    Direction direction;
    double distance = 0.0;
    double path_loss = 0.0;
    RotationAngles rotation;
    double weight = 1.0;
};

/// Per-user channel realization: the spatial LoS component (independent of
/// any polarforming) and the 2x2 polarization coupling.
struct ChannelSample {
    CVec unpolarformed;     // h_los, length N
    Mat2 depolarization;    // A
};

/// Element radiation pattern evaluated in the array's local frame.
/// The directive variant is a half-space cosine-power pattern with
/// boresight along the local +z axis:
///   G(dir) = boresight_gain_dbi + 10*log10(max(sin(theta_local), floor)^(2q))
struct RadiationPattern {
    enum class Kind { kIsotropic, kDirective };

    Kind kind = Kind::kIsotropic;
    double boresight_gain_dbi = 10.0;
    double cosine_exponent = 2.0;   // q
    double gain_floor = 1e-3;       // keeps the linear gain strictly positive

    static RadiationPattern isotropic();
    static RadiationPattern directive(double boresight_gain_dbi,
                                      double cosine_exponent);

    /// Gain in dBi toward a local direction.
    double gain_dbi(const Direction& local) const;

    /// Half-power angular offset from boresight, radians (directive only).
    double half_power_beamwidth() const;
};

/// Array steering vector: entry n is exp(-j*2*pi/lambda * f.r_n(u)).
CVec steering_vector(const ArrayGeometry& geom, const RotationAngles& u,
                     const Direction& d, double wavelength);

/// Linear element gain toward direction d for array rotation u.
double effective_gain(const RadiationPattern& pattern, const RotationAngles& u,
                      const Direction& d);
double effective_gain(const RadiationPattern& pattern, const Mat3& rotation,
                      const Direction& d);

/// Unpolarformed LoS channel sqrt(nu)*exp(-j*2*pi*d/lambda)*sqrt(g)*a(u).
CVec unpolarformed_channel(const UserState& user, const ArrayGeometry& geom,
                           const RotationAngles& u, const RadiationPattern& pattern,
                           double wavelength);

/// Full V/H-port channel h_los (Kronecker) A, of size 2N x 2.
CMat full_polarized_channel(const ChannelSample& sample);

/// Scalar polarformed gain (tx_scale*v)^H A w.
Complex polarformed_gain(const ChannelSample& sample, const PolarVec& w,
                         const PolarVec& v, double tx_scale = kTxPolarformerScale);

/// Effective channel h_los * polarformed_gain, length N.
CVec effective_channel(const ChannelSample& sample, const PolarVec& w,
                       const PolarVec& v, double tx_scale = kTxPolarformerScale);

struct RateReport {
    std::vector<double> per_user;   // bits/s/Hz
    double weighted_sum = 0.0;
};

/// Per-user achievable rates log2(1 + SINR) and their weighted sum.
/// Throws std::invalid_argument on a channel/precoder count mismatch.
RateReport achievable_rate(const std::vector<CVec>& channels,
                           const std::vector<CVec>& precoders,
                           double noise_power,
                           const std::vector<double>& weights);

// JSON layout for cross-implementation golden tests. Complex scalars are
// [re, im] pairs; a sample is {"unpolarformed": [[re,im],...],
// "depolarization": [[a11,a12],[a21,a22]]}; a batch wraps a "samples" list.
std::string channel_sample_to_json(const ChannelSample& sample);
ChannelSample channel_sample_from_json(const std::string& text);
std::string channel_batch_to_json(const std::vector<ChannelSample>& samples);
std::vector<ChannelSample> channel_batch_from_json(const std::string& text);

}  // namespace p6dma
