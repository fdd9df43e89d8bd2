#include "wpsn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "wpsn/rng.hpp"

namespace wpsn {

namespace {

constexpr std::uint64_t kRandomBaselineTag = 0x52414e44424c5345ULL;

// Index-addressed parallel loop; results land in caller-owned slots, so the
// outcome does not depend on scheduling.
template <typename F>
void parallel_for_index(std::size_t n, F&& f) {
    const int workers = thread_count();
    if (workers <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int count = std::min<int>(workers, static_cast<int>(n));
    pool.reserve(static_cast<std::size_t>(count));
    for (int t = 0; t < count; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) break;
                f(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

ScenarioConfig with_parameter(const ScenarioConfig& cfg, SweepParameter p, double value) {
    ScenarioConfig out = cfg;
    switch (p) {
        case SweepParameter::Radius:
            if (out.geometry.kind == GeometryKind::Annulus) {
                out.geometry.outer_m = value;
            } else {
                out.geometry.radius_m = value;
            }
            break;
        case SweepParameter::NNodes:
            out.n_nodes = static_cast<int>(std::llround(value));
            break;
        case SweepParameter::NoiseDbm:
            out.channel.noise_power = dbm_to_watts(value);
            break;
        case SweepParameter::CStatic:
            out.c_static = value;
            break;
    }
    return out;
}

}  // namespace

std::string method_name(const MethodSpec& m) {
    switch (m.method) {
        case Method::Optimal:
            return "optimal";
        case Method::Fixed:
            return "fixed";
        case Method::Random:
            return "random";
        case Method::Broadcast:
            return "broadcast";
        case Method::UpperBound:
            return "upper_bound";
    }
    return "?";
}

void SweepSpec::validate() const {
    if (values.empty()) throw std::invalid_argument("SweepSpec: values must be non-empty");
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (!(values[i] > values[i - 1])) {
            throw std::invalid_argument("SweepSpec: values must be strictly increasing");
        }
    }
    if (methods.empty()) throw std::invalid_argument("SweepSpec: methods must be non-empty");
}

SweepSpec default_sweep_spec() {
    SweepSpec s;
    s.parameter = SweepParameter::Radius;
    s.values = {10.0, 12.0, 14.0, 16.0};
    s.methods = {{Method::Optimal, 0.0},
                 {Method::Fixed, 0.1},
                 {Method::Random, 0.0},
                 {Method::Broadcast, 3.0},
                 {Method::UpperBound, 0.0}};
    return s;
}

double run_method(const ProblemInstance& inst, const MethodSpec& m, std::uint64_t master_seed,
                  std::uint64_t trial_index) {
    switch (m.method) {
        case Method::Optimal:
            return solve(inst).w_min;
        case Method::Fixed:
            return solve_fixed(inst, m.param).w_min;
        case Method::Random:
            return solve_random(inst, mix_seed(mix_seed(master_seed, kRandomBaselineTag),
                                               trial_index))
                .w_min;
        case Method::Broadcast:
            return solve_broadcast(inst, m.param).w_min;
        case Method::UpperBound:
            return upper_bound_rate(inst);
    }
    return 0.0;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec) {
    cfg.validate();
    spec.validate();

    std::vector<SweepRow> rows;
    for (double value : spec.values) {
        const ScenarioConfig cfg_v = with_parameter(cfg, spec.parameter, value);
        cfg_v.validate();

        // rates[trial][method]
        std::vector<std::vector<double>> rates(
            static_cast<std::size_t>(cfg.trials),
            std::vector<double>(spec.methods.size(), 0.0));
        parallel_for_index(static_cast<std::size_t>(cfg.trials), [&](std::size_t t) {
            const ProblemInstance inst = generate_instance(cfg_v, t);
            for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
                rates[t][mi] = run_method(inst, spec.methods[mi], cfg.master_seed, t);
            }
        });

        for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
            double sum = 0.0;
            double sum_sq = 0.0;
            for (int t = 0; t < cfg.trials; ++t) {
                sum += rates[static_cast<std::size_t>(t)][mi];
                sum_sq += rates[static_cast<std::size_t>(t)][mi] *
                          rates[static_cast<std::size_t>(t)][mi];
            }
            SweepRow row;
            row.parameter_value = value;
            row.method = method_name(spec.methods[mi]);
            row.trials = cfg.trials;
            row.mean_w = sum / cfg.trials;
            if (cfg.trials > 1) {
                const double var = (sum_sq - sum * sum / cfg.trials) / (cfg.trials - 1);
                row.stderr_w = std::sqrt(std::max(0.0, var) / cfg.trials);
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

AllocationSolution run_convergence(const ScenarioConfig& cfg) {
    cfg.validate();
    return solve(generate_instance(cfg, 0));
}

std::vector<CompareRow> compare_eh_models(const ScenarioConfig& cfg, double alpha) {
    cfg.validate();
    if (!(alpha > 0.0)) throw std::invalid_argument("compare_eh_models: alpha must be positive");

    std::vector<CompareRow> rows(static_cast<std::size_t>(cfg.trials));
    parallel_for_index(rows.size(), [&](std::size_t t) {
        ProblemInstance inst = generate_instance(cfg, t);
        const double w_nl = solve(inst).w_min;
        inst.eh = EhModel::linear(alpha);
        const double w_l = solve(inst).w_min;

        CompareRow row;
        row.trial = t;
        row.w_nonlinear = w_nl;
        row.w_linear = w_l;
        if (w_nl > 0.0) {
            row.rel_err = std::fabs(w_nl - w_l) / w_nl;
        } else {
            row.rel_err = w_l > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        }
        rows[t] = row;
    });
    return rows;
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median: empty input");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

int thread_count() {
    const char* env = std::getenv("WPSN_THREADS");
    if (env == nullptr || *env == '\0') return 1;
    const long v = std::strtol(env, nullptr, 10);
    if (v < 1) return 1;
    return static_cast<int>(std::min<long>(v, 64));
}

}  // namespace wpsn
