#include "wpsn/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "wpsn/rng.hpp"

namespace wpsn {

namespace {
constexpr double kSpeedOfLight = 2.998e8;  // m/s
constexpr double kPi = 3.14159265358979323846;
constexpr std::uint64_t kLosAngleTag = 0x4c4f53414e474c45ULL;
}  // namespace

void ChannelConfig::validate() const {
    if (n_antennas < 1) throw std::invalid_argument("ChannelConfig: n_antennas >= 1 required");
    if (!(noise_power > 0.0)) throw std::invalid_argument("ChannelConfig: noise_power must be positive");
    if (!(rician_k >= 0.0)) throw std::invalid_argument("ChannelConfig: rician_k must be non-negative");
    if (!(carrier_hz > 0.0)) throw std::invalid_argument("ChannelConfig: carrier_hz must be positive");
}

double ChannelSample::norm2() const {
    double s = 0.0;
    for (const auto& z : h) s += std::norm(z);
    return s;
}

double friis_gain(double carrier_hz, double distance_m) {
    if (!(distance_m > 0.0)) {
        throw std::domain_error("friis_gain: distance must be positive");
    }
    const double lambda = kSpeedOfLight / carrier_hz;
    const double ratio = lambda / (4.0 * kPi * distance_m);
    return ratio * ratio;
}

ChannelSample draw_channel(const ChannelConfig& cfg, double distance_m,
                           std::uint64_t draw_index) {
    cfg.validate();
    const double path_gain = friis_gain(cfg.carrier_hz, distance_m);
    const double amp = std::sqrt(path_gain);

    // Broadside angle fixed per config seed; scattered part varies per draw.
    RandomStream los_stream(cfg.rng_seed, kLosAngleTag);
    const double sin_theta = 2.0 * los_stream.uniform01() - 1.0;

    double los_scale = 1.0;
    double scatter_scale = 0.0;
    if (std::isfinite(cfg.rician_k)) {
        los_scale = std::sqrt(cfg.rician_k / (cfg.rician_k + 1.0));
        scatter_scale = std::sqrt(1.0 / (cfg.rician_k + 1.0));
    }

    RandomStream draw_stream(cfg.rng_seed, draw_index);
    ChannelSample s;
    s.distance_m = distance_m;
    s.h.resize(static_cast<std::size_t>(cfg.n_antennas));
    for (int k = 0; k < cfg.n_antennas; ++k) {
        const double phi = -kPi * static_cast<double>(k) * sin_theta;  // lambda/2 spacing
        const std::complex<double> los(std::cos(phi), std::sin(phi));
        s.h[static_cast<std::size_t>(k)] =
            amp * (los_scale * los + scatter_scale * draw_stream.cnormal());
    }
    return s;
}

}  // namespace wpsn
