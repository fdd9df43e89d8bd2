#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wpsn/eh_model.hpp"
#include "wpsn/gain.hpp"

namespace wpsn {

// Inconsistent numeric state (negative discriminant, failed plug-back check).
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct NodeProfile {
    double e_per_bit = 0.0;   // Joules per unit data
    double c_static = 0.0;    // Joules per block
    PebGainModel gain = PebGainModel::rational_approx(1.0, 1, 1.0);
};

struct ProblemInstance {
    std::vector<NodeProfile> nodes;
    double budget_e = 3.0;    // Joules per block
    double pilot_time = 0.1;  // fraction of the unit block
    EhModel eh = EhModel::linear(0.3);
    double epsilon = 1e-3;    // rate termination gap, bits/s
    double inner_tol = 1e-12; // relative tolerance of the pilot-power root search

    void validate() const;
};

struct IterationRecord {
    double w_lo = 0.0;
    double w_hi = 0.0;
    double w_mid = 0.0;
    double e_s_star = 0.0;   // +inf when the midpoint rate is unreachable
    double p_pilot = 0.0;
};

struct ConvergenceTrace {
    std::vector<IterationRecord> iterations;
    std::vector<int> inner_iteration_counts;
};

struct AllocationSolution {
    double w_min = 0.0;           // bits/s
    double p_pilot = 0.0;         // Watts
    std::vector<double> e_t;      // per-node transmit energies, Joules
    bool feasible = false;
    double upper_bound = 0.0;     // rate bound the bisection started from
    ConvergenceTrace trace;

    int outer_iterations() const { return static_cast<int>(trace.iterations.size()); }
    double sum_e_t() const;
};

// Minimum total energy to sustain rate w at pilot power p, and its slope.
struct InnerSolution {
    bool feasible = false;
    double e_s_star = 0.0;
    double p_pilot = 0.0;
    int iterations = 0;
};

// f_i = eta^{-1}(e_i w + c_i) / g_i(P^p).  Throws saturation_error when the
// demand exceeds the harvest ceiling and domain_error on zero gain.
double required_transmit_energy(const NodeProfile& node, const EhModel& eh, double w,
                                double p_pilot);

// Minimize E_s(P; w) = t^p P + sum_i f_i(P; w) over P in [0, E/t^p].
// Trichotomy on the monotone slope E_s'(P): non-negative at 0 -> P = 0;
// non-positive at E/t^p -> the rate is unreachable within the budget
// (feasible = false); otherwise bisect the slope to a root.
InnerSolution subproblem_min_energy(const ProblemInstance& inst, double w);

// Closed-form rate upper bound assuming maximal gain at zero pilot cost,
// capped below the saturation rate for bounded harvesters.  Returns 0 when
// the bound's numerator is non-positive.
double upper_bound_rate(const ProblemInstance& inst);

// Outer bisection on the rate with per-midpoint feasibility checks.
AllocationSolution solve(const ProblemInstance& inst);

// Same outer loop with the inner search replaced by the closed-form pilot
// power valid when every node shares sigma_h2 under the rational gain model.
AllocationSolution solve_closed_form_identical(const ProblemInstance& inst, double sigma_h2,
                                               int n_antennas, double noise_power);

// Fully closed-form solution for linear harvesting with asymptotic gains.
AllocationSolution solve_asymptotic(const ProblemInstance& inst,
                                    const std::vector<double>& sigma_elem2, int n_antennas,
                                    double alpha);

// Baselines -----------------------------------------------------------------

// Pilot power pinned to pilot_fraction * E / t^p, then the largest
// sustainable rate found by bisection.
AllocationSolution solve_fixed(const ProblemInstance& inst, double pilot_fraction);

// Pilot power drawn uniformly on [0, E/t^p].
AllocationSolution solve_random(const ProblemInstance& inst, std::uint64_t seed);

// No channel estimation: the station broadcasts at the given power for the
// whole block and all nodes harvest simultaneously through the incoherent
// per-element gain.
AllocationSolution solve_broadcast(const ProblemInstance& inst, double broadcast_power);

// True when the returned allocation satisfies every problem constraint at the
// stated tolerances (budget within 1e-9 relative, per-node causality within
// 1e-6 relative, non-negativity).  Intended for feasible optimizing solutions.
bool check_certificate(const ProblemInstance& inst, const AllocationSolution& sol);

}  // namespace wpsn
