#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "wpsn/csv.hpp"
#include "wpsn/experiments.hpp"
#include "wpsn/scenario.hpp"

using namespace wpsn;

namespace {

ScenarioConfig small_cfg() {
    ScenarioConfig cfg;
    cfg.n_nodes = 6;
    cfg.geometry.kind = GeometryKind::Disk;
    cfg.geometry.radius_m = 10.0;
    cfg.trials = 30;
    cfg.epsilon = 1e-4;
    cfg.master_seed = 7;
    return cfg;
}

}  // namespace

TEST_CASE("instance generation") {
    SUBCASE("fixed ring pins every distance") {
        ScenarioConfig cfg = small_cfg();
        cfg.geometry.kind = GeometryKind::FixedRing;
        cfg.geometry.radius_m = 12.5;
        const auto d = node_distances(cfg, 0);
        REQUIRE(d.size() == 6);
        for (double x : d) CHECK(x == 12.5);
        const ProblemInstance inst = generate_instance(cfg, 0);
        for (const auto& n : inst.nodes) {
            CHECK(n.e_per_bit == doctest::Approx(1e-7 * 12.5 * 12.5).epsilon(1e-12));
            CHECK(n.c_static == cfg.c_static);
        }
    }

    SUBCASE("disk placements are uniform in area") {
        ScenarioConfig cfg = small_cfg();
        cfg.n_nodes = 1;
        const double r2 = cfg.geometry.radius_m * cfg.geometry.radius_m;
        double sum_d2 = 0.0;
        const int placements = 100000;
        for (int t = 0; t < placements; ++t) {
            const auto d = node_distances(cfg, static_cast<std::uint64_t>(t));
            sum_d2 += d[0] * d[0];
        }
        // E[d^2] = R^2/2 under uniform area density.
        CHECK(sum_d2 / placements == doctest::Approx(r2 / 2.0).epsilon(0.02));
    }

    SUBCASE("annulus stays inside its radii") {
        ScenarioConfig cfg = small_cfg();
        cfg.geometry.kind = GeometryKind::Annulus;
        cfg.geometry.inner_m = 8.0;
        cfg.geometry.outer_m = 12.0;
        for (std::uint64_t t = 0; t < 200; ++t) {
            for (double x : node_distances(cfg, t)) {
                CHECK(x >= 8.0);
                CHECK(x <= 12.0);
            }
        }
    }

    SUBCASE("same seed and trial reproduce the instance") {
        const ScenarioConfig cfg = small_cfg();
        const auto d1 = node_distances(cfg, 3);
        const auto d2 = node_distances(cfg, 3);
        CHECK(d1 == d2);
        const auto d3 = node_distances(cfg, 4);
        CHECK(d1 != d3);
    }

    SUBCASE("larger n_nodes extends the same deployment") {
        ScenarioConfig cfg = small_cfg();
        cfg.n_nodes = 4;
        const auto small = node_distances(cfg, 5);
        cfg.n_nodes = 9;
        const auto big = node_distances(cfg, 5);
        for (std::size_t i = 0; i < small.size(); ++i) {
            CHECK(small[i] == big[i]);
        }
    }
}

TEST_CASE("convergence run") {
    ScenarioConfig cfg = small_cfg();
    cfg.epsilon = 1e-3;
    const AllocationSolution sol = run_convergence(cfg);
    REQUIRE(sol.feasible);
    CHECK(sol.w_min > 0.0);

    // Termination bookkeeping: the final energy fits the budget, one epsilon
    // more does not (when the bound was not already reached).
    const ProblemInstance inst = generate_instance(cfg, 0);
    const InnerSolution at_w = subproblem_min_energy(inst, sol.w_min);
    REQUIRE(at_w.feasible);
    CHECK(at_w.e_s_star <= cfg.budget_e);
    if (sol.w_min < sol.upper_bound - cfg.epsilon) {
        const InnerSolution above = subproblem_min_energy(inst, sol.w_min + cfg.epsilon);
        CHECK((!above.feasible || above.e_s_star > cfg.budget_e));
    }

    // Iteration bound.
    const int bound = static_cast<int>(std::ceil(std::log2(sol.upper_bound / cfg.epsilon)));
    CHECK(sol.outer_iterations() <= bound);

    // Final rate within epsilon of the last feasible midpoint.
    double last_feasible = 0.0;
    for (const auto& it : sol.trace.iterations) {
        if (it.e_s_star <= cfg.budget_e) last_feasible = it.w_mid;
    }
    CHECK(std::fabs(sol.w_min - last_feasible) <= cfg.epsilon);
}

TEST_CASE("sweep harness") {
    ScenarioConfig cfg = small_cfg();
    cfg.trials = 20;

    SUBCASE("common random numbers and method dominance per row") {
        SweepSpec spec = default_sweep_spec();
        spec.values = {9.0, 11.0};
        const auto rows = run_sweep(cfg, spec);
        REQUIRE(rows.size() == spec.values.size() * spec.methods.size());

        for (double value : spec.values) {
            double opt = -1.0, fixed = -1.0, random_w = -1.0, bc = -1.0, ub = -1.0;
            for (const auto& r : rows) {
                if (r.parameter_value != value) continue;
                if (r.method == "optimal") opt = r.mean_w;
                if (r.method == "fixed") fixed = r.mean_w;
                if (r.method == "random") random_w = r.mean_w;
                if (r.method == "broadcast") bc = r.mean_w;
                if (r.method == "upper_bound") ub = r.mean_w;
            }
            REQUIRE(opt >= 0.0);
            CHECK(fixed <= opt + cfg.epsilon);
            CHECK(random_w <= opt + cfg.epsilon);
            CHECK(bc <= opt + cfg.epsilon);
            CHECK(opt <= ub + cfg.epsilon);
        }
    }

    SUBCASE("rates shrink as nodes are added") {
        SweepSpec spec;
        spec.parameter = SweepParameter::NNodes;
        spec.values = {3.0, 6.0, 9.0, 12.0};
        spec.methods = {{Method::Optimal, 0.0}};
        const auto rows = run_sweep(cfg, spec);
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].mean_w <= rows[i - 1].mean_w * (1.0 + 1e-12));
        }
    }

    SUBCASE("rates shrink with the static draw and reach zero") {
        SweepSpec spec;
        spec.parameter = SweepParameter::CStatic;
        spec.values = {0.0, 3e-6, 3e-5, 3e-3};
        spec.methods = {{Method::Optimal, 0.0}};
        const auto rows = run_sweep(cfg, spec);
        REQUIRE(rows.size() == 4);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].mean_w <= rows[i - 1].mean_w * (1.0 + 1e-12));
        }
        CHECK(rows.back().mean_w == 0.0);
    }

    SUBCASE("identical reruns are identical") {
        SweepSpec spec = default_sweep_spec();
        spec.values = {10.0};
        const auto a = run_sweep(cfg, spec);
        const auto b = run_sweep(cfg, spec);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean_w == b[i].mean_w);
            CHECK(a[i].stderr_w == b[i].stderr_w);
        }
    }

    SUBCASE("rates fall as the estimation noise rises") {
        SweepSpec spec;
        spec.parameter = SweepParameter::NoiseDbm;
        spec.values = {-90.0, -70.0, -50.0};
        spec.methods = {{Method::Optimal, 0.0}};
        const auto rows = run_sweep(cfg, spec);
        REQUIRE(rows.size() == 3);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].mean_w <= rows[i - 1].mean_w * (1.0 + 1e-12));
        }
    }

    SUBCASE("results do not depend on the worker count") {
        SweepSpec spec = default_sweep_spec();
        spec.values = {10.0};
        setenv("WPSN_THREADS", "1", 1);
        const auto serial = run_sweep(cfg, spec);
        setenv("WPSN_THREADS", "2", 1);
        const auto threaded = run_sweep(cfg, spec);
        unsetenv("WPSN_THREADS");
        REQUIRE(serial.size() == threaded.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(serial[i].mean_w == threaded[i].mean_w);
        }
    }
}

TEST_CASE("far deployments hit the infeasibility gate") {
    // At 915 MHz free-space loss with the default consumption constants, the
    // static draws alone exceed the best linearized harvest once nodes sit
    // tens of meters out; the solver must report that instead of a rate.
    ScenarioConfig cfg = small_cfg();
    cfg.n_nodes = 20;
    cfg.geometry.kind = GeometryKind::Annulus;
    cfg.geometry.inner_m = 25.0;
    cfg.geometry.outer_m = 50.0;
    cfg.epsilon = 1e-3;
    const AllocationSolution sol = run_convergence(cfg);
    CHECK_FALSE(sol.feasible);
    CHECK(sol.w_min == 0.0);
    CHECK(sol.outer_iterations() == 0);
}

TEST_CASE("monte carlo gain backend end to end") {
    ScenarioConfig cfg = small_cfg();
    cfg.n_nodes = 3;
    cfg.trials = 1;
    cfg.mc_samples = 400;
    cfg.gain_backend = GainBackendKind::MonteCarlo;

    const ProblemInstance mc_inst = generate_instance(cfg, 0);
    const AllocationSolution mc_sol = solve(mc_inst);
    REQUIRE(mc_sol.feasible);
    CHECK(check_certificate(mc_inst, mc_sol));

    // The sampled gains sit close to the rational form, so the solved rates
    // should land nearby as well.
    ScenarioConfig rational = cfg;
    rational.gain_backend = GainBackendKind::RationalApprox;
    const AllocationSolution ra_sol = solve(generate_instance(rational, 0));
    CHECK(std::fabs(mc_sol.w_min - ra_sol.w_min) / ra_sol.w_min < 0.1);
}

TEST_CASE("harvest model comparison") {
    ScenarioConfig cfg = small_cfg();
    cfg.trials = 40;

    SUBCASE("matched linear bound stays close at low demand") {
        const auto rows = compare_eh_models(cfg, cfg.eh.eta_max());
        REQUIRE(static_cast<int>(rows.size()) == cfg.trials);
        std::vector<double> errs;
        for (const auto& r : rows) {
            CHECK(r.w_nonlinear > 0.0);
            errs.push_back(r.rel_err);
        }
        CHECK(median(errs) <= 0.01);
    }

    SUBCASE("pushing demand toward saturation widens the gap") {
        const auto low = compare_eh_models(cfg, cfg.eh.eta_max());
        // Same geometry, but the converter saturates at twice the static
        // draw, so solved demands sit deep in the compressed region.
        ScenarioConfig stressed = cfg;
        stressed.eh = EhModel::saturating_exp(4e-5, 0.3);
        stressed.c_static = 0.5 * stressed.eh.p_max();
        const auto high = compare_eh_models(stressed, stressed.eh.eta_max());
        std::vector<double> low_errs, high_errs;
        for (const auto& r : low) low_errs.push_back(r.rel_err);
        for (const auto& r : high) high_errs.push_back(r.rel_err);
        CHECK(median(high_errs) > median(low_errs));
    }

    SUBCASE("mismatched slope at least doubles the error") {
        const auto matched = compare_eh_models(cfg, cfg.eh.eta_max());
        const auto mismatched = compare_eh_models(cfg, 0.5 * cfg.eh.eta_max());
        std::vector<double> em, eh;
        for (const auto& r : matched) em.push_back(r.rel_err);
        for (const auto& r : mismatched) eh.push_back(r.rel_err);
        CHECK(median(eh) >= 2.0 * median(em));
    }
}

TEST_CASE("dbm conversions") {
    CHECK(dbm_to_watts(-90.0) == doctest::Approx(1e-12).epsilon(1e-12));
    CHECK(dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(watts_to_dbm(1e-12) == doctest::Approx(-90.0).epsilon(1e-12));
}
