#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpsn/channel.hpp"
#include "wpsn/solver.hpp"

namespace wpsn {

enum class GeometryKind { Disk, Annulus, FixedRing };

struct Geometry {
    GeometryKind kind = GeometryKind::Disk;
    double radius_m = 10.0;   // Disk / FixedRing
    double inner_m = 25.0;    // Annulus
    double outer_m = 50.0;    // Annulus

    void validate() const;
    bool operator==(const Geometry&) const = default;
};

enum class GainBackendKind { RationalApprox, Asymptotic, MonteCarlo, Broadcast };

struct ScenarioConfig {
    int n_nodes = 20;
    Geometry geometry{};
    double budget_e = 3.0;
    double pilot_time = 0.1;
    ChannelConfig channel{};               // Nt=32, 915 MHz, K=10, -90 dBm
    Estimator estimator = Estimator::LeastSquares;
    GainBackendKind gain_backend = GainBackendKind::RationalApprox;
    int mc_samples = 1000;
    double e_coeff = 1e-7;                 // J per bit per m^2
    double c_static = 3e-6;                // J per block
    EhModel eh = EhModel::saturating_exp(0.02, 0.3);
    double epsilon = 1e-3;
    double inner_tol = 1e-12;
    int trials = 1000;
    std::uint64_t master_seed = 1;

    void validate() const;
    bool operator==(const ScenarioConfig&) const = default;
};

// Node distances for one trial.  Placements are uniform in area and keyed by
// (master_seed, trial_index, node_index), so a larger n_nodes extends the same
// deployment instead of reshuffling it.
std::vector<double> node_distances(const ScenarioConfig& cfg, std::uint64_t trial_index);

// Build the solvable per-block problem for one trial.
ProblemInstance generate_instance(const ScenarioConfig& cfg, std::uint64_t trial_index);

// Per-element channel powers (for the asymptotic closed form).
std::vector<double> node_sigma_elem2(const ScenarioConfig& cfg,
                                     const std::vector<double>& distances);

}  // namespace wpsn
