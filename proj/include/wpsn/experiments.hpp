#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wpsn/scenario.hpp"

namespace wpsn {

enum class Method { Optimal, Fixed, Random, Broadcast, UpperBound };

struct MethodSpec {
    Method method = Method::Optimal;
    double param = 0.0;  // Fixed: pilot fraction; Broadcast: power in Watts

    bool operator==(const MethodSpec&) const = default;
};

std::string method_name(const MethodSpec& m);

enum class SweepParameter { Radius, NNodes, NoiseDbm, CStatic };

struct SweepSpec {
    SweepParameter parameter = SweepParameter::Radius;
    std::vector<double> values;
    std::vector<MethodSpec> methods;

    void validate() const;
    bool operator==(const SweepSpec&) const = default;
};

SweepSpec default_sweep_spec();

struct SweepRow {
    double parameter_value = 0.0;
    std::string method;
    double mean_w = 0.0;
    double stderr_w = 0.0;
    int trials = 0;
};

// Achieved rate of one method on one instance; the random baseline's draw is
// keyed by (master_seed, trial) so methods share instances within a trial.
double run_method(const ProblemInstance& inst, const MethodSpec& m, std::uint64_t master_seed,
                  std::uint64_t trial_index);

// Average w over trials for every (parameter value, method) pair, with common
// random numbers across methods and nested deployments across values.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec);

// Solve the trial-0 instance and keep the bisection trace.
AllocationSolution run_convergence(const ScenarioConfig& cfg);

struct CompareRow {
    std::uint64_t trial = 0;
    double w_nonlinear = 0.0;
    double w_linear = 0.0;
    double rel_err = 0.0;
};

// Per trial, solve the same instance under the configured harvester and under
// its linear bound Linear(alpha) and report |w_NL - w_L| / w_NL.
std::vector<CompareRow> compare_eh_models(const ScenarioConfig& cfg, double alpha);

double median(std::vector<double> v);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

// Worker count for trial-level parallelism; WPSN_THREADS, default 1.
int thread_count();

}  // namespace wpsn
