#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "test_support.hpp"
#include "wpsn/rng.hpp"
#include "wpsn/solver.hpp"

using namespace wpsn;
using namespace wpsn::testing;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Hand-specialized linear-harvester pipeline mirroring the general solver
// operation by operation.  Running the general code with a linear model must
// reproduce it bit for bit (same branches, same arithmetic).
AllocationSolution solve_linear_specialized(const ProblemInstance& inst, double alpha) {
    const double budget = inst.budget_e;
    const double tp = inst.pilot_time;
    const double p_top = budget / tp;

    auto demand_of = [&](const NodeProfile& n, double w) {
        return (n.e_per_bit * w + n.c_static) / alpha;
    };
    auto energy_at = [&](double w, double p) {
        double total = tp * p;
        for (const auto& n : inst.nodes) {
            const double inv = demand_of(n, w);
            if (inv == 0.0) continue;
            total += inv / n.gain.value(p);
        }
        return total;
    };
    auto slope_at = [&](double w, double p) {
        double s = tp;
        for (const auto& n : inst.nodes) {
            const double inv = demand_of(n, w);
            if (inv == 0.0) continue;
            s -= inv * n.gain.derivative_ratio(p);
        }
        return s;
    };
    auto inner = [&](double w) {
        InnerSolution out;
        out.feasible = true;
        if (slope_at(w, 0.0) >= 0.0) {
            out.p_pilot = 0.0;
            out.e_s_star = energy_at(w, 0.0);
            return out;
        }
        if (slope_at(w, p_top) <= 0.0) {
            out.feasible = false;
            return out;
        }
        double lo = 0.0;
        double hi = p_top;
        while (hi - lo > inst.inner_tol * p_top) {
            const double mid = 0.5 * (lo + hi);
            if (slope_at(w, mid) < 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.p_pilot = 0.5 * (lo + hi);
        out.e_s_star = energy_at(w, out.p_pilot);
        return out;
    };

    AllocationSolution sol;
    sol.e_t.assign(inst.nodes.size(), 0.0);

    double gate = 0.0;
    for (const auto& n : inst.nodes) gate += n.c_static / n.gain.value(p_top);
    if (gate > alpha * budget) return sol;

    double num = alpha * budget;
    double den = 0.0;
    for (const auto& n : inst.nodes) {
        const double g = n.gain.value(p_top);
        num -= n.c_static / g;
        den += n.e_per_bit / g;
    }
    double w_hi = num <= 0.0 ? 0.0 : num / den;
    sol.upper_bound = w_hi;

    const InnerSolution at_zero = inner(0.0);
    if (!at_zero.feasible || at_zero.e_s_star > budget) return sol;
    sol.feasible = true;

    double w_lo = 0.0;
    InnerSolution last_lo = at_zero;
    while (w_hi - w_lo >= inst.epsilon) {
        const double w_mid = 0.5 * (w_hi + w_lo);
        const InnerSolution is = inner(w_mid);
        const double es = is.feasible ? is.e_s_star : kInf;
        sol.trace.iterations.push_back({w_lo, w_hi, w_mid, es, is.p_pilot});
        if (es - budget > 0.0) {
            w_hi = w_mid;
        } else {
            w_lo = w_mid;
            last_lo = is;
        }
    }
    sol.w_min = w_lo;
    sol.p_pilot = last_lo.p_pilot;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        const double inv = demand_of(inst.nodes[i], w_lo);
        sol.e_t[i] = inv == 0.0 ? 0.0 : inv / inst.nodes[i].gain.value(last_lo.p_pilot);
    }
    return sol;
}

ProblemInstance constant_gain_instance() {
    // Broadcast-backed gains are flat in pilot power.
    ProblemInstance inst;
    inst.budget_e = 3.0;
    inst.pilot_time = 0.1;
    inst.epsilon = 1e-4;
    inst.eh = EhModel::linear(0.3);
    for (int i = 0; i < 3; ++i) {
        NodeProfile node;
        node.e_per_bit = 1e-5;
        node.c_static = 1e-6;
        node.gain = PebGainModel::broadcast(3e-4 * (i + 1), 32);
        inst.nodes.push_back(node);
    }
    return inst;
}

}  // namespace

TEST_CASE("required transmit energy") {
    NodeProfile node;
    node.e_per_bit = 1e-5;
    node.c_static = 0.0;
    node.gain = PebGainModel::broadcast(2e-4, 32);  // constant gain 6.25e-6

    SUBCASE("zero demand needs zero energy") {
        CHECK(required_transmit_energy(node, EhModel::linear(0.3), 0.0, 1.0) == 0.0);
    }

    SUBCASE("linear harvester with constant gain collapses algebraically") {
        node.c_static = 2e-6;
        const double alpha = 0.3;
        const double gamma = 2e-4 / 32.0;
        const double w = 1.7;
        const double expected = (node.e_per_bit * w + node.c_static) / (alpha * gamma);
        CHECK(required_transmit_energy(node, EhModel::linear(alpha), w, 0.5) ==
              doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("demand past saturation raises") {
        node.c_static = 0.025;  // above p_max below
        CHECK_THROWS_AS(
            required_transmit_energy(node, EhModel::saturating_exp(0.02, 0.3), 1.0, 0.5),
            saturation_error);
    }
}

TEST_CASE("inner subproblem") {
    SUBCASE("matches the massive-antenna closed form for one node") {
        AsymptoticInstance ai = random_asymptotic_instance(77);
        ai.inst.nodes.resize(1);
        ai.sigma_elem2.resize(1);
        const double w = 0.5;
        const InnerSolution is = subproblem_min_energy(ai.inst, w);
        REQUIRE(is.feasible);
        const double demand = ai.inst.nodes[0].e_per_bit * w + ai.inst.nodes[0].c_static;
        const double expected = std::sqrt(
            1e-12 * demand /
            (ai.alpha * ai.sigma_elem2[0] * ai.sigma_elem2[0] * ai.inst.pilot_time));
        CHECK(is.p_pilot == doctest::Approx(expected).epsilon(1e-6));
    }

    SUBCASE("never beaten by a fine pilot grid") {
        for (std::uint64_t seed = 0; seed < 25; ++seed) {
            const ProblemInstance inst = random_rational_instance(1000 + seed);
            RandomStream rng(seed);
            const double w_cap = oracle_rate_cap(inst);
            const double w = rng.uniform01() * w_cap;
            const InnerSolution is = subproblem_min_energy(inst, w);
            const double grid_min = grid_min_energy(inst, w, pilot_grid(inst, 20000));
            if (is.feasible) {
                CHECK(is.e_s_star <= grid_min * (1.0 + 1e-6));
            } else {
                CHECK(grid_min * (1.0 + 1e-9) >= inst.budget_e);
            }
        }
    }

    SUBCASE("flat gains make pilots pure cost") {
        const ProblemInstance inst = constant_gain_instance();
        const InnerSolution is = subproblem_min_energy(inst, 1.0);
        REQUIRE(is.feasible);
        CHECK(is.p_pilot == 0.0);
        CHECK(is.iterations == 0);
    }

    SUBCASE("demand beyond saturation is unreachable") {
        ProblemInstance inst = constant_gain_instance();
        inst.eh = EhModel::saturating_exp(0.02, 0.3);
        // e*w + c >= p_max at w = 2000 bits/s
        const InnerSolution is = subproblem_min_energy(inst, 2001.0);
        CHECK_FALSE(is.feasible);
    }
}

TEST_CASE("upper bound rate") {
    SUBCASE("single node algebra") {
        ProblemInstance inst = random_rational_instance(5);
        inst.nodes.resize(1);
        inst.eh = EhModel::linear(0.31);
        const double g = inst.nodes[0].gain.value(inst.budget_e / inst.pilot_time);
        const double expected =
            (0.31 * inst.budget_e * g - inst.nodes[0].c_static) / inst.nodes[0].e_per_bit;
        CHECK(upper_bound_rate(inst) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("identical gains reduce to the simplified form") {
        IdenticalInstance ii = random_identical_instance(6);
        ii.inst.eh = EhModel::linear(0.3);
        const double g =
            g_hat(ii.sigma_h2, ii.n_antennas, ii.noise_power,
                  ii.inst.budget_e / ii.inst.pilot_time);
        double sum_c = 0.0;
        double sum_e = 0.0;
        for (const auto& n : ii.inst.nodes) {
            sum_c += n.c_static;
            sum_e += n.e_per_bit;
        }
        const double simplified = (0.3 * g * ii.inst.budget_e - sum_c) / sum_e;
        CHECK(upper_bound_rate(ii.inst) == doctest::Approx(simplified).epsilon(1e-12));
    }

    SUBCASE("solved rate never exceeds the bound") {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const ProblemInstance inst = random_rational_instance(seed);
            const AllocationSolution sol = solve(inst);
            CHECK(sol.w_min <= upper_bound_rate(inst) * (1.0 + 1e-12) + 1e-15);
        }
    }

    SUBCASE("negative numerator clamps to zero") {
        ProblemInstance inst = random_rational_instance(7);
        for (auto& n : inst.nodes) n.c_static = 10.0;  // impossible statics
        CHECK(upper_bound_rate(inst) == 0.0);
    }
}

TEST_CASE("solve") {
    SUBCASE("infeasibility gate returns zero rate and zero allocations") {
        ProblemInstance inst = random_rational_instance(8);
        for (auto& n : inst.nodes) n.c_static = 1.0;
        const AllocationSolution sol = solve(inst);
        CHECK(sol.w_min == 0.0);
        CHECK_FALSE(sol.feasible);
        CHECK(sol.outer_iterations() == 0);
        for (double e : sol.e_t) CHECK(e == 0.0);
    }

    SUBCASE("two-node toy matches the exhaustive grid") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            InstanceOptions opt;
            opt.min_nodes = 2;
            opt.max_nodes = 2;
            const ProblemInstance inst = random_rational_instance(3000 + seed, opt);
            const AllocationSolution sol = solve(inst);
            const BruteForceResult bf = brute_force_rate(inst, 1000, 1000);
            CHECK(std::fabs(sol.w_min - bf.w) <= inst.epsilon + bf.w_step);
        }
    }

    SUBCASE("certificate holds on random instances") {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const ProblemInstance inst = random_rational_instance(4000 + seed);
            const AllocationSolution sol = solve(inst);
            CHECK(check_certificate(inst, sol));
        }
    }

    SUBCASE("outer and inner iteration bounds") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ProblemInstance inst = random_rational_instance(5000 + seed);
            const AllocationSolution sol = solve(inst);
            if (sol.upper_bound > inst.epsilon) {
                const int outer_bound =
                    static_cast<int>(std::ceil(std::log2(sol.upper_bound / inst.epsilon)));
                CHECK(sol.outer_iterations() <= outer_bound);
            }
            const int inner_bound = static_cast<int>(std::ceil(std::log2(1.0 / inst.inner_tol)));
            for (int c : sol.trace.inner_iteration_counts) {
                CHECK(c <= inner_bound);
            }
        }
    }

    SUBCASE("bisection gap certificate") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ProblemInstance inst = random_rational_instance(6000 + seed);
            const AllocationSolution sol = solve(inst);
            if (!sol.feasible) continue;
            const InnerSolution at_w = subproblem_min_energy(inst, sol.w_min);
            CHECK(at_w.feasible);
            CHECK(at_w.e_s_star <= inst.budget_e * (1.0 + 1e-12));
            if (sol.w_min < sol.upper_bound - inst.epsilon) {
                const InnerSolution above = subproblem_min_energy(inst, sol.w_min + inst.epsilon);
                const double es = above.feasible ? above.e_s_star : kInf;
                CHECK(es > inst.budget_e);
            }
        }
    }

    SUBCASE("trace spans halve") {
        const ProblemInstance inst = random_rational_instance(17);
        const AllocationSolution sol = solve(inst);
        REQUIRE(sol.outer_iterations() >= 2);
        for (std::size_t i = 1; i < sol.trace.iterations.size(); ++i) {
            const double prev = sol.trace.iterations[i - 1].w_hi - sol.trace.iterations[i - 1].w_lo;
            const double cur = sol.trace.iterations[i].w_hi - sol.trace.iterations[i].w_lo;
            CHECK(cur == doctest::Approx(0.5 * prev).epsilon(1e-9));
        }
    }
}

TEST_CASE("solver convexity and monotonicity properties") {
    SUBCASE("E_s has non-decreasing slopes on a grid") {
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const ProblemInstance inst = random_rational_instance(7000 + seed);
            const double w = 0.5 * oracle_rate_cap(inst);
            const double p_top = inst.budget_e / inst.pilot_time;
            double prev_e = oracle_energy(inst, w, 0.0);
            double prev_slope = -kInf;
            const int points = 1000;
            for (int k = 1; k < points; ++k) {
                const double p0 = p_top * (k - 1) / (points - 1);
                const double p1 = p_top * k / (points - 1);
                const double e1 = oracle_energy(inst, w, p1);
                const double slope = (e1 - prev_e) / (p1 - p0);
                CHECK(slope >= prev_slope - 1e-9 * std::max(1.0, std::fabs(prev_slope)));
                prev_slope = slope;
                prev_e = e1;
            }
        }
    }

    SUBCASE("feasibility is monotone in the rate") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const ProblemInstance inst = random_rational_instance(8000 + seed);
            RandomStream rng(seed);
            const double cap = oracle_rate_cap(inst);
            double w2 = rng.uniform01() * cap;
            double w1 = rng.uniform01() * w2;
            const InnerSolution s1 = subproblem_min_energy(inst, w1);
            const InnerSolution s2 = subproblem_min_energy(inst, w2);
            const double e1 = s1.feasible ? s1.e_s_star : kInf;
            const double e2 = s2.feasible ? s2.e_s_star : kInf;
            // E_s^* is non-decreasing in w, so feasibility propagates down.
            CHECK(e1 <= e2 * (1.0 + 1e-12));
            if (e2 <= inst.budget_e) CHECK(e1 <= inst.budget_e);
        }
    }
}

TEST_CASE("identical-gain closed form") {
    SUBCASE("stationarity residual at the closed-form pilot power") {
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            IdenticalInstance ii = random_identical_instance(900 + seed);
            const AllocationSolution sol =
                solve_closed_form_identical(ii.inst, ii.sigma_h2, ii.n_antennas, ii.noise_power);
            if (!sol.feasible || sol.p_pilot == 0.0) continue;

            // E'(P; w) = t^p - sum_i inv_i * Nt sn2 (Nt-1) / (P s2 + Nt sn2)^2
            double slope = ii.inst.pilot_time;
            const double nt = ii.n_antennas;
            const double den = sol.p_pilot * ii.sigma_h2 + nt * ii.noise_power;
            for (const auto& n : ii.inst.nodes) {
                const double demand = n.e_per_bit * sol.w_min + n.c_static;
                slope -= ii.inst.eh.inverse(demand) * nt * ii.noise_power * (nt - 1.0) /
                         (den * den);
            }
            CHECK(std::fabs(slope) <= 1e-6 * ii.inst.pilot_time);
        }
    }

    SUBCASE("single antenna clamps the pilot power to zero") {
        IdenticalInstance ii = random_identical_instance(33, [] {
            InstanceOptions o;
            o.n_antennas = 1;
            return o;
        }());
        const AllocationSolution sol =
            solve_closed_form_identical(ii.inst, ii.sigma_h2, 1, ii.noise_power);
        CHECK(sol.p_pilot == 0.0);
    }

    SUBCASE("agrees with the general solver within 2 epsilon") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            IdenticalInstance ii = random_identical_instance(1100 + seed);
            const AllocationSolution a = solve(ii.inst);
            const AllocationSolution b =
                solve_closed_form_identical(ii.inst, ii.sigma_h2, ii.n_antennas, ii.noise_power);
            CHECK(std::fabs(a.w_min - b.w_min) <= 2.0 * ii.inst.epsilon);
        }
    }

    SUBCASE("rejects mismatched gain models") {
        ProblemInstance inst = random_rational_instance(12);
        CHECK_THROWS_AS(solve_closed_form_identical(inst, 1e-4, 32, 1e-12),
                        std::invalid_argument);
    }
}

TEST_CASE("asymptotic closed form") {
    SUBCASE("plug-back identity and agreement with the solver") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            AsymptoticInstance ai = random_asymptotic_instance(2200 + seed);
            const AllocationSolution cf =
                solve_asymptotic(ai.inst, ai.sigma_elem2, ai.n_antennas, ai.alpha);
            if (!cf.feasible) continue;

            // Recompute the auxiliary constants independently.
            double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
            for (std::size_t i = 0; i < ai.inst.nodes.size(); ++i) {
                const double s2 = ai.sigma_elem2[i];
                const double s4 = s2 * s2;
                a += 1e-12 * ai.inst.nodes[i].e_per_bit * ai.inst.pilot_time / (ai.alpha * s4);
                b += 1e-12 * ai.inst.nodes[i].c_static * ai.inst.pilot_time / (ai.alpha * s4);
                c += ai.inst.nodes[i].e_per_bit / (ai.alpha * ai.n_antennas * s2);
                d += ai.inst.nodes[i].c_static / (ai.alpha * ai.n_antennas * s2);
            }
            const double plug = 2.0 * std::sqrt(a * cf.w_min + b) + c * cf.w_min + d;
            CHECK(std::fabs(plug - ai.inst.budget_e) <= 1e-8 * ai.inst.budget_e);

            const AllocationSolution gen = solve(ai.inst);
            CHECK(std::fabs(gen.w_min - cf.w_min) <= 2.0 * ai.inst.epsilon);
        }
    }

    SUBCASE("zero statics reduce to the simplified root") {
        AsymptoticInstance ai = random_asymptotic_instance(55);
        for (auto& n : ai.inst.nodes) n.c_static = 0.0;
        const AllocationSolution cf =
            solve_asymptotic(ai.inst, ai.sigma_elem2, ai.n_antennas, ai.alpha);
        REQUIRE(cf.feasible);

        double a = 0.0, c = 0.0;
        for (std::size_t i = 0; i < ai.inst.nodes.size(); ++i) {
            const double s4 = ai.sigma_elem2[i] * ai.sigma_elem2[i];
            a += 1e-12 * ai.inst.nodes[i].e_per_bit * ai.inst.pilot_time / (ai.alpha * s4);
            c += ai.inst.nodes[i].e_per_bit / (ai.alpha * ai.n_antennas * ai.sigma_elem2[i]);
        }
        const double e = ai.inst.budget_e;
        const double x = e * c + 2.0 * a;
        const double simplified = (x - std::sqrt(x * x - c * c * e * e)) / (c * c);
        CHECK(cf.w_min == doctest::Approx(simplified).epsilon(1e-9));
    }

    SUBCASE("requires the linear model") {
        AsymptoticInstance ai = random_asymptotic_instance(56);
        ai.inst.eh = EhModel::saturating_exp(0.02, 0.3);
        CHECK_THROWS_AS(solve_asymptotic(ai.inst, ai.sigma_elem2, ai.n_antennas, ai.alpha),
                        std::invalid_argument);
    }
}

TEST_CASE("fixed and random baselines") {
    SUBCASE("pinning the optimal split loses nothing") {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const ProblemInstance inst = random_rational_instance(3300 + seed);
            const AllocationSolution opt = solve(inst);
            if (!opt.feasible || opt.w_min == 0.0) continue;
            const double frac = inst.pilot_time * opt.p_pilot / inst.budget_e;
            const AllocationSolution pinned = solve_fixed(inst, frac);
            CHECK(std::fabs(pinned.w_min - opt.w_min) <= 2.0 * inst.epsilon);
        }
    }

    SUBCASE("fixed dominance") {
        RandomStream rng(91);
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const ProblemInstance inst = random_rational_instance(9000 + seed);
            const AllocationSolution opt = solve(inst);
            const AllocationSolution fixed = solve_fixed(inst, rng.uniform01() * 0.9);
            CHECK(fixed.w_min <= opt.w_min + inst.epsilon);
        }
    }

    SUBCASE("zero pilot fraction equals the bottom-gain allocation") {
        const ProblemInstance inst = random_rational_instance(44);
        const AllocationSolution zero_frac = solve_fixed(inst, 0.0);
        // Same search with every gain pinned to g(0).
        ProblemInstance pinned = inst;
        for (auto& n : pinned.nodes) {
            const double g0 = n.gain.value(0.0);
            n.gain = PebGainModel::broadcast(g0 * n.gain.n_antennas(), n.gain.n_antennas());
        }
        const AllocationSolution flat = solve_fixed(pinned, 0.0);
        CHECK(zero_frac.w_min == doctest::Approx(flat.w_min).epsilon(1e-12));
    }

    SUBCASE("baseline outputs satisfy the allocation certificate") {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const ProblemInstance inst = random_rational_instance(9500 + seed);
            CHECK(check_certificate(inst, solve_fixed(inst, 0.1)));
            CHECK(check_certificate(inst, solve_random(inst, seed)));
        }
    }

    SUBCASE("random baseline reproducibility and dominance") {
        const ProblemInstance inst = random_rational_instance(45);
        const AllocationSolution a = solve_random(inst, 1234);
        const AllocationSolution b = solve_random(inst, 1234);
        CHECK(a.w_min == b.w_min);
        CHECK(a.p_pilot == b.p_pilot);

        const AllocationSolution opt = solve(inst);
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const AllocationSolution r = solve_random(inst, seed);
            CHECK(r.w_min <= opt.w_min + inst.epsilon);
        }
    }

    SUBCASE("rejects a unit pilot fraction") {
        const ProblemInstance inst = random_rational_instance(46);
        CHECK_THROWS_AS(solve_fixed(inst, 1.0), std::invalid_argument);
    }
}

TEST_CASE("broadcast baseline") {
    SUBCASE("statics beyond the harvest zero the rate") {
        ProblemInstance inst = random_rational_instance(47);
        inst.eh = EhModel::linear(0.3);
        for (auto& n : inst.nodes) n.c_static = 3e-6;
        // Push one node far out so broadcasting cannot cover its static draw.
        inst.nodes.back().gain = PebGainModel::rational_approx(32 * friis_gain(915e6, 40.0), 32,
                                                               1e-12);
        const AllocationSolution sol = solve_broadcast(inst, 3.0);
        const double far_gain = inst.nodes.back().gain.ceiling() / 32.0;
        REQUIRE(inst.eh.eval(3.0 * far_gain) < 3e-6);
        CHECK(sol.w_min == 0.0);
        CHECK_FALSE(sol.feasible);
    }

    SUBCASE("single node with no statics") {
        ProblemInstance inst = random_rational_instance(48);
        inst.nodes.resize(1);
        inst.nodes[0].c_static = 0.0;
        const AllocationSolution sol = solve_broadcast(inst, 3.0);
        const double g_bc = inst.nodes[0].gain.ceiling() / inst.nodes[0].gain.n_antennas();
        const double expected = inst.eh.eval(3.0 * g_bc) / inst.nodes[0].e_per_bit;
        CHECK(sol.w_min == doctest::Approx(expected).epsilon(1e-12));
        CHECK(sol.p_pilot == 0.0);
    }

    SUBCASE("broadcast dominance on beam-favoring instances") {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            const ProblemInstance inst = random_rational_instance(9900 + seed);
            const AllocationSolution opt = solve(inst);
            const AllocationSolution bc = solve_broadcast(inst, inst.budget_e);
            CHECK(bc.w_min <= opt.w_min + inst.epsilon);
        }
    }
}

TEST_CASE("linear specialization is bit-identical to the general pipeline") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        InstanceOptions opt;
        opt.mix_eh_kinds = false;  // generator then always picks linear
        ProblemInstance inst = random_rational_instance(500 + seed, opt);
        REQUIRE(inst.eh.kind() == EhKind::Linear);
        const double alpha = inst.eh.alpha();

        const AllocationSolution general = solve(inst);
        const AllocationSolution specialized = solve_linear_specialized(inst, alpha);

        CHECK(general.w_min == specialized.w_min);
        CHECK(general.p_pilot == specialized.p_pilot);
        CHECK(general.feasible == specialized.feasible);
        CHECK(general.upper_bound == specialized.upper_bound);
        REQUIRE(general.trace.iterations.size() == specialized.trace.iterations.size());
        for (std::size_t i = 0; i < general.trace.iterations.size(); ++i) {
            CHECK(general.trace.iterations[i].w_mid == specialized.trace.iterations[i].w_mid);
            CHECK(general.trace.iterations[i].e_s_star ==
                  specialized.trace.iterations[i].e_s_star);
            CHECK(general.trace.iterations[i].p_pilot == specialized.trace.iterations[i].p_pilot);
        }
        REQUIRE(general.e_t.size() == specialized.e_t.size());
        for (std::size_t i = 0; i < general.e_t.size(); ++i) {
            CHECK(general.e_t[i] == specialized.e_t[i]);
        }
    }
}
