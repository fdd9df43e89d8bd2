#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace wpsn {

struct ChannelConfig {
    int n_antennas = 32;
    double carrier_hz = 915e6;
    double rician_k = 10.0;       // Rician factor; 0 = Rayleigh, inf = pure LOS
    double noise_power = 1e-12;   // sigma_n^2 in Watts (-90 dBm)
    std::uint64_t rng_seed = 1;

    void validate() const;
    bool operator==(const ChannelConfig&) const = default;
};

struct ChannelSample {
    std::vector<std::complex<double>> h;
    double distance_m = 0.0;

    double norm2() const;  // ||h||^2
};

// Free-space path gain (lambda / 4 pi d)^2 with unit antenna gains.
double friis_gain(double carrier_hz, double distance_m);

// One Rician block-fading channel draw.  Each element is
//   sqrt(path_gain) * (sqrt(K/(K+1)) e^{j phi_k} + sqrt(1/(K+1)) CN(0,1)),
// with phi_k the half-wavelength ULA phase profile for a broadside angle
// drawn once per (config seed).  Deterministic in (cfg.rng_seed, draw_index).
ChannelSample draw_channel(const ChannelConfig& cfg, double distance_m,
                           std::uint64_t draw_index = 0);

}  // namespace wpsn
