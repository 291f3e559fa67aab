// SPDX-License-Identifier: Apache-2.0

#include "p6dma/channel.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace p6dma {

RadiationPattern RadiationPattern::isotropic() { return RadiationPattern{}; }

RadiationPattern RadiationPattern::directive(double boresight_gain_dbi,
                                             double cosine_exponent) {
    RadiationPattern p;
    p.kind = Kind::kDirective;
    p.boresight_gain_dbi = boresight_gain_dbi;
    p.cosine_exponent = cosine_exponent;
    return p;
}

double RadiationPattern::gain_dbi(const Direction& local) const {
    if (kind == Kind::kIsotropic) {
        return 0.0;
    }
    // Boresight is the local +z axis, so the angle off boresight has
    // cosine sin(theta_local). The rear half-space falls to the floor.
    const double c = std::max(std::sin(local.theta), gain_floor);
    return boresight_gain_dbi + 20.0 * cosine_exponent * std::log10(c);
}

double RadiationPattern::half_power_beamwidth() const {
    if (kind == Kind::kIsotropic) {
        return kTwoPi;
    }
    return std::acos(std::pow(2.0, -1.0 / (2.0 * cosine_exponent)));
}

CVec steering_vector(const ArrayGeometry& geom, const RotationAngles& u,
                     const Direction& d, double wavelength) {
    const Vec3 f = pointing_vector(d);
    const Mat3 r = rotation_matrix(u);
    const double wavenumber = kTwoPi / wavelength;
    CVec a(geom.num_antennas);
    for (int n = 0; n < geom.num_antennas; ++n) {
        const double phase = -wavenumber * f.dot(r * geom.local_positions[static_cast<size_t>(n)]);
        a(n) = Complex(std::cos(phase), std::sin(phase));
    }
    return a;
}

double effective_gain(const RadiationPattern& pattern, const RotationAngles& u,
                      const Direction& d) {
    return effective_gain(pattern, rotation_matrix(u), d);
}

double effective_gain(const RadiationPattern& pattern, const Mat3& rotation,
                      const Direction& d) {
    const Direction local = local_doa(rotation, pointing_vector(d));
    return std::pow(10.0, pattern.gain_dbi(local) / 10.0);
}

CVec unpolarformed_channel(const UserState& user, const ArrayGeometry& geom,
                           const RotationAngles& u, const RadiationPattern& pattern,
                           double wavelength) {
    const double gain = effective_gain(pattern, u, user.direction);
    const double range_phase = -kTwoPi * user.distance / wavelength;
    const Complex scale = std::sqrt(user.path_loss) * std::sqrt(gain) *
                          Complex(std::cos(range_phase), std::sin(range_phase));
    return scale * steering_vector(geom, u, user.direction, wavelength);
}

CMat full_polarized_channel(const ChannelSample& sample) {
    const Eigen::Index n = sample.unpolarformed.size();
    CMat full(2 * n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        full.block<2, 2>(2 * i, 0) =
            sample.unpolarformed(i) * sample.depolarization.cast<Complex>();
    }
    return full;
}

Complex polarformed_gain(const ChannelSample& sample, const PolarVec& w,
                         const PolarVec& v, double tx_scale) {
    const PolarVec coupled = sample.depolarization.cast<Complex>() * w;
    return (tx_scale * v).dot(coupled);  // dot conjugates its first argument
}

CVec effective_channel(const ChannelSample& sample, const PolarVec& w,
                       const PolarVec& v, double tx_scale) {
    return sample.unpolarformed * polarformed_gain(sample, w, v, tx_scale);
}

RateReport achievable_rate(const std::vector<CVec>& channels,
                           const std::vector<CVec>& precoders,
                           double noise_power,
                           const std::vector<double>& weights) {
    const size_t num_users = channels.size();
    if (precoders.size() != num_users || weights.size() != num_users) {
        throw std::invalid_argument("achievable_rate: channel/precoder/weight count mismatch");
    }
    RateReport report;
    report.per_user.resize(num_users, 0.0);
    for (size_t k = 0; k < num_users; ++k) {
        double signal = 0.0;
        double interference = 0.0;
        for (size_t j = 0; j < num_users; ++j) {
            if (channels[k].size() != precoders[j].size()) {
                throw std::invalid_argument("achievable_rate: dimension mismatch");
            }
            const double p = std::norm(channels[k].dot(precoders[j]));
            if (j == k) {
                signal = p;
            } else {
                interference += p;
            }
        }
        const double sinr = signal / (interference + noise_power);
        report.per_user[k] = std::log2(1.0 + sinr);
        report.weighted_sum += weights[k] * report.per_user[k];
    }
    return report;
}

namespace {

using nlohmann::json;

json complex_to_json(const Complex& c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    return Complex(j.at(0).get<double>(), j.at(1).get<double>());
}

json sample_to_json_obj(const ChannelSample& sample) {
    json unpol = json::array();
    for (Eigen::Index i = 0; i < sample.unpolarformed.size(); ++i) {
        unpol.push_back(complex_to_json(sample.unpolarformed(i)));
    }
    json depol = json::array({
        json::array({sample.depolarization(0, 0), sample.depolarization(0, 1)}),
        json::array({sample.depolarization(1, 0), sample.depolarization(1, 1)}),
    });
    return json{{"unpolarformed", unpol}, {"depolarization", depol}};
}

ChannelSample sample_from_json_obj(const json& j) {
    ChannelSample sample;
    const json& unpol = j.at("unpolarformed");
    sample.unpolarformed.resize(static_cast<Eigen::Index>(unpol.size()));
    for (size_t i = 0; i < unpol.size(); ++i) {
        sample.unpolarformed(static_cast<Eigen::Index>(i)) = complex_from_json(unpol[i]);
    }
    const json& depol = j.at("depolarization");
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            sample.depolarization(r, c) = depol.at(static_cast<size_t>(r)).at(static_cast<size_t>(c)).get<double>();
        }
    }
    return sample;
}

}  // namespace

std::string channel_sample_to_json(const ChannelSample& sample) {
    return sample_to_json_obj(sample).dump();
}

ChannelSample channel_sample_from_json(const std::string& text) {
    return sample_from_json_obj(json::parse(text));
}

std::string channel_batch_to_json(const std::vector<ChannelSample>& samples) {
    json batch = json::array();
    for (const ChannelSample& s : samples) {
        batch.push_back(sample_to_json_obj(s));
    }
    return json{{"samples", batch}}.dump();
}

std::vector<ChannelSample> channel_batch_from_json(const std::string& text) {
    const json doc = json::parse(text);
    std::vector<ChannelSample> samples;
    for (const json& j : doc.at("samples")) {
        samples.push_back(sample_from_json_obj(j));
    }
    return samples;
}

}  // namespace p6dma
