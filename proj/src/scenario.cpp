#include "wpsn/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "wpsn/rng.hpp"

namespace wpsn {

namespace {
constexpr std::uint64_t kPlacementTag = 0x504c4143454d4e54ULL;
}

void Geometry::validate() const {
    switch (kind) {
        case GeometryKind::Disk:
        case GeometryKind::FixedRing:
            if (!(radius_m > 0.0)) throw std::invalid_argument("Geometry: radius must be positive");
            break;
        case GeometryKind::Annulus:
            if (!(inner_m > 0.0) || !(outer_m > inner_m)) {
                throw std::invalid_argument("Geometry: need 0 < inner < outer");
            }
            break;
    }
}

void ScenarioConfig::validate() const {
    geometry.validate();
    channel.validate();
    if (n_nodes < 1) throw std::invalid_argument("ScenarioConfig: n_nodes >= 1 required");
    if (!(budget_e > 0.0)) throw std::invalid_argument("ScenarioConfig: budget_e must be positive");
    if (!(pilot_time > 0.0) || !(pilot_time < 1.0)) {
        throw std::invalid_argument("ScenarioConfig: pilot_time must be in (0, 1)");
    }
    if (!(e_coeff > 0.0)) throw std::invalid_argument("ScenarioConfig: e_coeff must be positive");
    if (!(c_static >= 0.0)) throw std::invalid_argument("ScenarioConfig: c_static >= 0 required");
    if (!(epsilon > 0.0)) throw std::invalid_argument("ScenarioConfig: epsilon must be positive");
    if (trials < 1) throw std::invalid_argument("ScenarioConfig: trials >= 1 required");
    if (mc_samples < 1) throw std::invalid_argument("ScenarioConfig: mc_samples >= 1 required");
}

std::vector<double> node_distances(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    cfg.validate();
    std::vector<double> d(static_cast<std::size_t>(cfg.n_nodes));
    for (std::size_t j = 0; j < d.size(); ++j) {
        RandomStream stream(mix_seed(cfg.master_seed, kPlacementTag),
                            mix_seed(trial_index, static_cast<std::uint64_t>(j)));
        const double u = stream.uniform01();
        switch (cfg.geometry.kind) {
            case GeometryKind::Disk:
                // Uniform in area: r = R sqrt(u).
                d[j] = cfg.geometry.radius_m * std::sqrt(u);
                break;
            case GeometryKind::Annulus: {
                const double r0sq = cfg.geometry.inner_m * cfg.geometry.inner_m;
                const double r1sq = cfg.geometry.outer_m * cfg.geometry.outer_m;
                d[j] = std::sqrt(r0sq + u * (r1sq - r0sq));
                break;
            }
            case GeometryKind::FixedRing:
                d[j] = cfg.geometry.radius_m;
                break;
        }
    }
    return d;
}

std::vector<double> node_sigma_elem2(const ScenarioConfig& cfg,
                                     const std::vector<double>& distances) {
    std::vector<double> s(distances.size());
    for (std::size_t j = 0; j < distances.size(); ++j) {
        s[j] = friis_gain(cfg.channel.carrier_hz, distances[j]);
    }
    return s;
}

ProblemInstance generate_instance(const ScenarioConfig& cfg, std::uint64_t trial_index) {
    const std::vector<double> d = node_distances(cfg, trial_index);

    ProblemInstance inst;
    inst.budget_e = cfg.budget_e;
    inst.pilot_time = cfg.pilot_time;
    inst.eh = cfg.eh;
    inst.epsilon = cfg.epsilon;
    inst.inner_tol = cfg.inner_tol;
    inst.nodes.reserve(d.size());

    for (std::size_t j = 0; j < d.size(); ++j) {
        NodeProfile node;
        node.e_per_bit = cfg.e_coeff * d[j] * d[j];
        node.c_static = cfg.c_static;

        const double elem2 = friis_gain(cfg.channel.carrier_hz, d[j]);
        const double sigma_h2 = static_cast<double>(cfg.channel.n_antennas) * elem2;
        switch (cfg.gain_backend) {
            case GainBackendKind::RationalApprox:
                node.gain = PebGainModel::rational_approx(sigma_h2, cfg.channel.n_antennas,
                                                          cfg.channel.noise_power);
                break;
            case GainBackendKind::Asymptotic:
                node.gain = PebGainModel::asymptotic(elem2, cfg.channel.n_antennas,
                                                     cfg.channel.noise_power);
                break;
            case GainBackendKind::MonteCarlo: {
                ChannelConfig ch = cfg.channel;
                ch.rng_seed = mix_seed(cfg.master_seed, trial_index,
                                       static_cast<std::uint64_t>(j));
                node.gain = PebGainModel::monte_carlo(cfg.estimator, ch, d[j], cfg.mc_samples);
                break;
            }
            case GainBackendKind::Broadcast:
                node.gain = PebGainModel::broadcast(sigma_h2, cfg.channel.n_antennas);
                break;
        }
        inst.nodes.push_back(std::move(node));
    }
    return inst;
}

}  // namespace wpsn
