#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wpsn/config.hpp"
#include "wpsn/csv.hpp"
#include "wpsn/experiments.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "Scenario config file (key = value lines)");
    cmd->add_option("--out", args.out_dir, "Output directory for CSV files");
    cmd->add_option("--set", args.overrides, "Override config entries, key=value");
    cmd->add_option("--seed", args.seed, "Override the master seed")
        ->each([&args](const std::string&) { args.seed_set = true; });
}

wpsn::FullConfig load(const CommonArgs& args) {
    wpsn::FullConfig cfg = args.config_path.empty()
                               ? wpsn::parse_config_text("", args.overrides)
                               : wpsn::parse_config(args.config_path, args.overrides);
    if (args.seed_set) cfg.scenario.master_seed = args.seed;
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    std::filesystem::create_directories(args.out_dir);
    return (std::filesystem::path(args.out_dir) / name).string();
}

int run_solve(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const wpsn::ProblemInstance inst = wpsn::generate_instance(cfg.scenario, 0);
    const wpsn::AllocationSolution sol = wpsn::solve(inst);
    wpsn::write_file(out_path(args, "solution.csv"), wpsn::solution_csv(sol));
    std::cout << "solve: w_min=" << wpsn::format_g17(sol.w_min)
              << " bits/s, p_pilot=" << wpsn::format_g17(sol.p_pilot)
              << " W, sum_et=" << wpsn::format_g17(sol.sum_e_t())
              << " J, outer_iters=" << sol.outer_iterations()
              << ", feasible=" << (sol.feasible ? 1 : 0) << "\n";
    return sol.w_min == 0.0 ? 2 : 0;
}

int run_sweep_cmd(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const auto rows = wpsn::run_sweep(cfg.scenario, cfg.sweep);
    wpsn::write_file(out_path(args, "sweep.csv"), wpsn::sweep_csv(rows));
    std::cout << "sweep: " << rows.size() << " rows over " << cfg.sweep.values.size()
              << " parameter values, " << cfg.scenario.trials << " trials each\n";
    return 0;
}

int run_convergence_cmd(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const wpsn::AllocationSolution sol = wpsn::run_convergence(cfg.scenario);
    wpsn::write_file(out_path(args, "convergence.csv"), wpsn::convergence_csv(sol.trace));
    std::cout << "convergence: " << sol.outer_iterations()
              << " iterations, w_min=" << wpsn::format_g17(sol.w_min)
              << " bits/s, feasible=" << (sol.feasible ? 1 : 0) << "\n";
    return 0;
}

int run_peb_gain(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const wpsn::ScenarioConfig& sc = cfg.scenario;
    const double distance = cfg.resolved_peb_distance();

    wpsn::PebGainModel model = [&] {
        const double elem2 = wpsn::friis_gain(sc.channel.carrier_hz, distance);
        const double sigma_h2 = sc.channel.n_antennas * elem2;
        switch (sc.gain_backend) {
            case wpsn::GainBackendKind::Asymptotic:
                return wpsn::PebGainModel::asymptotic(elem2, sc.channel.n_antennas,
                                                      sc.channel.noise_power);
            case wpsn::GainBackendKind::MonteCarlo: {
                wpsn::ChannelConfig ch = sc.channel;
                ch.rng_seed = sc.master_seed;
                return wpsn::PebGainModel::monte_carlo(sc.estimator, ch, distance,
                                                       cfg.peb.samples);
            }
            case wpsn::GainBackendKind::Broadcast:
                return wpsn::PebGainModel::broadcast(sigma_h2, sc.channel.n_antennas);
            case wpsn::GainBackendKind::RationalApprox:
            default:
                return wpsn::PebGainModel::rational_approx(sigma_h2, sc.channel.n_antennas,
                                                           sc.channel.noise_power);
        }
    }();

    const auto curve = wpsn::gain_curve(model, cfg.peb.p_min, cfg.peb.p_max, cfg.peb.points);
    wpsn::write_file(out_path(args, "gain.csv"), wpsn::gain_csv(curve));
    std::cout << "peb-gain: " << curve.size() << " points at distance "
              << wpsn::format_g17(distance) << " m\n";
    return 0;
}

int run_compare(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const auto rows = wpsn::compare_eh_models(cfg.scenario, cfg.resolved_compare_alpha());
    wpsn::write_file(out_path(args, "compare.csv"), wpsn::compare_csv(rows));
    std::vector<double> errs;
    errs.reserve(rows.size());
    for (const auto& r : rows) errs.push_back(r.rel_err);
    std::cout << "compare-eh: " << rows.size()
              << " trials, median rel_err=" << wpsn::format_g17(wpsn::median(errs)) << "\n";
    return 0;
}

int run_validate(const CommonArgs& args) {
    const wpsn::FullConfig cfg = load(args);
    const wpsn::ScenarioConfig& sc = cfg.scenario;
    const double distance = cfg.resolved_peb_distance();
    const double elem2 = wpsn::friis_gain(sc.channel.carrier_hz, distance);
    const double sigma_h2 = sc.channel.n_antennas * elem2;

    wpsn::PebGainModel model = [&] {
        switch (sc.gain_backend) {
            case wpsn::GainBackendKind::Asymptotic:
                return wpsn::PebGainModel::asymptotic(elem2, sc.channel.n_antennas,
                                                      sc.channel.noise_power);
            case wpsn::GainBackendKind::MonteCarlo: {
                wpsn::ChannelConfig ch = sc.channel;
                ch.rng_seed = sc.master_seed;
                return wpsn::PebGainModel::monte_carlo(sc.estimator, ch, distance,
                                                       cfg.peb.samples);
            }
            case wpsn::GainBackendKind::Broadcast:
                return wpsn::PebGainModel::broadcast(sigma_h2, sc.channel.n_antennas);
            case wpsn::GainBackendKind::RationalApprox:
            default:
                return wpsn::PebGainModel::rational_approx(sigma_h2, sc.channel.n_antennas,
                                                           sc.channel.noise_power);
        }
    }();

    const double p_top = sc.budget_e / sc.pilot_time;
    const wpsn::QualifyReport rep = wpsn::qualify_gain(model, p_top);
    std::cout << "validate: monotone=" << (rep.monotone ? "true" : "false")
              << " concave=" << (rep.concave ? "true" : "false")
              << " bounded=" << (rep.bounded ? "true" : "false") << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Pilot-vs-energy power split simulator for wirelessly powered sensor networks"};
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one generated instance");
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Average rates over a parameter sweep");
    CLI::App* conv_cmd = app.add_subcommand("convergence", "Emit the bisection trace");
    CLI::App* peb_cmd = app.add_subcommand("peb-gain", "Export a gain curve as CSV");
    CLI::App* cmp_cmd = app.add_subcommand("compare-eh", "Nonlinear vs linear harvest comparison");
    CLI::App* val_cmd = app.add_subcommand("validate", "Check gain qualification conditions");
    for (CLI::App* c : {solve_cmd, sweep_cmd, conv_cmd, peb_cmd, cmp_cmd, val_cmd}) {
        add_common(c, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (solve_cmd->parsed()) return run_solve(args);
        if (sweep_cmd->parsed()) return run_sweep_cmd(args);
        if (conv_cmd->parsed()) return run_convergence_cmd(args);
        if (peb_cmd->parsed()) return run_peb_gain(args);
        if (cmp_cmd->parsed()) return run_compare(args);
        if (val_cmd->parsed()) return run_validate(args);
    } catch (const wpsn::config_error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const wpsn::numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
