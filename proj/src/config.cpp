#include "wpsn/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "wpsn/csv.hpp"

namespace wpsn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& key, int line, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || std::isnan(x)) {
        throw config_error(key, line, "expected a number, got '" + v + "'");
    }
    return x;
}

long long parse_int(const std::string& key, int line, const std::string& v) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        throw config_error(key, line, "expected an integer, got '" + v + "'");
    }
    return x;
}

std::uint64_t parse_u64(const std::string& key, int line, const std::string& v) {
    char* end = nullptr;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0') {
        throw config_error(key, line, "expected an unsigned integer, got '" + v + "'");
    }
    return static_cast<std::uint64_t>(x);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

// Keys set while parsing, so kind-dependent requirements can be checked at
// the end with the offending line attached.
struct ParseState {
    FullConfig cfg;
    std::map<std::string, int> seen;  // leaf name -> line

    bool has(const std::string& leaf) const { return seen.count(leaf) > 0; }
    int line_of(const std::string& leaf) const {
        auto it = seen.find(leaf);
        return it == seen.end() ? 0 : it->second;
    }
};

void apply_key(ParseState& st, const std::string& raw_key, const std::string& value, int line) {
    // Accept section.leaf or the bare leaf; leaves are globally unique.
    static const std::map<std::string, std::string> sections = {
        {"n_nodes", "scenario"},     {"geometry", "scenario"},   {"radius_m", "scenario"},
        {"inner_m", "scenario"},     {"outer_m", "scenario"},    {"budget_e", "scenario"},
        {"pilot_time", "scenario"},  {"trials", "scenario"},     {"master_seed", "scenario"},
        {"n_antennas", "channel"},   {"carrier_hz", "channel"},  {"noise_power", "channel"},
        {"noise_dbm", "channel"},    {"rician_k", "channel"},    {"estimator", "channel"},
        {"backend", "gain"},         {"mc_samples", "gain"},     {"e_coeff", "consumption"},
        {"c_static", "consumption"}, {"kind", "eh"},             {"alpha", "eh"},
        {"p_max", "eh"},             {"eta_max", "eh"},          {"table", "eh"},
        {"epsilon", "solver"},       {"inner_tol", "solver"},    {"parameter", "sweep"},
        {"values", "sweep"},         {"methods", "sweep"},       {"compare_alpha", "compare"},
        {"p_min", "peb"},            {"p_max_probe", "peb"},     {"points", "peb"},
        {"distance_m", "peb"},       {"samples", "peb"},
    };

    std::string leaf = raw_key;
    std::string section;
    if (const auto dot = raw_key.find('.'); dot != std::string::npos) {
        section = raw_key.substr(0, dot);
        leaf = raw_key.substr(dot + 1);
    }
    const auto it = sections.find(leaf);
    if (it == sections.end() || (!section.empty() && section != it->second)) {
        throw config_error(raw_key, line, "unknown key");
    }
    st.seen[leaf] = line;

    ScenarioConfig& sc = st.cfg.scenario;
    auto require_positive = [&](double x) {
        if (!(x > 0.0)) throw config_error(raw_key, line, "value must be positive");
        return x;
    };

    if (leaf == "n_nodes") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 1 || n > 100000) throw config_error(raw_key, line, "n_nodes out of range");
        sc.n_nodes = static_cast<int>(n);
    } else if (leaf == "geometry") {
        if (value == "disk") {
            sc.geometry.kind = GeometryKind::Disk;
        } else if (value == "annulus") {
            sc.geometry.kind = GeometryKind::Annulus;
        } else if (value == "fixed_ring") {
            sc.geometry.kind = GeometryKind::FixedRing;
        } else {
            throw config_error(raw_key, line, "expected disk|annulus|fixed_ring");
        }
    } else if (leaf == "radius_m") {
        sc.geometry.radius_m = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "inner_m") {
        sc.geometry.inner_m = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "outer_m") {
        sc.geometry.outer_m = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "budget_e") {
        sc.budget_e = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "pilot_time") {
        const double x = parse_double(raw_key, line, value);
        if (!(x > 0.0 && x < 1.0)) throw config_error(raw_key, line, "pilot_time must be in (0,1)");
        sc.pilot_time = x;
    } else if (leaf == "trials") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 1) throw config_error(raw_key, line, "trials must be >= 1");
        sc.trials = static_cast<int>(n);
    } else if (leaf == "master_seed") {
        sc.master_seed = parse_u64(raw_key, line, value);
    } else if (leaf == "n_antennas") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 1) throw config_error(raw_key, line, "n_antennas must be >= 1");
        sc.channel.n_antennas = static_cast<int>(n);
    } else if (leaf == "carrier_hz") {
        sc.channel.carrier_hz = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "noise_power") {
        sc.channel.noise_power = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "noise_dbm") {
        sc.channel.noise_power = dbm_to_watts(parse_double(raw_key, line, value));
    } else if (leaf == "rician_k") {
        const double x = parse_double(raw_key, line, value);
        if (!(x >= 0.0)) throw config_error(raw_key, line, "rician_k must be non-negative");
        sc.channel.rician_k = x;
    } else if (leaf == "estimator") {
        if (value == "ls") {
            sc.estimator = Estimator::LeastSquares;
        } else if (value == "mmse") {
            sc.estimator = Estimator::Mmse;
        } else {
            throw config_error(raw_key, line, "expected ls|mmse");
        }
    } else if (leaf == "backend") {
        if (value == "rational_approx") {
            sc.gain_backend = GainBackendKind::RationalApprox;
        } else if (value == "asymptotic") {
            sc.gain_backend = GainBackendKind::Asymptotic;
        } else if (value == "monte_carlo") {
            sc.gain_backend = GainBackendKind::MonteCarlo;
        } else if (value == "broadcast") {
            sc.gain_backend = GainBackendKind::Broadcast;
        } else {
            throw config_error(raw_key, line,
                               "expected rational_approx|asymptotic|monte_carlo|broadcast");
        }
    } else if (leaf == "mc_samples") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 1) throw config_error(raw_key, line, "mc_samples must be >= 1");
        sc.mc_samples = static_cast<int>(n);
    } else if (leaf == "e_coeff") {
        sc.e_coeff = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "c_static") {
        const double x = parse_double(raw_key, line, value);
        if (!(x >= 0.0)) throw config_error(raw_key, line, "c_static must be non-negative");
        sc.c_static = x;
    } else if (leaf == "kind" || leaf == "alpha" || leaf == "p_max" || leaf == "eta_max" ||
               leaf == "table") {
        // Harvest model pieces are assembled after all keys are read.
    } else if (leaf == "epsilon") {
        sc.epsilon = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "inner_tol") {
        sc.inner_tol = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "parameter") {
        if (value == "radius") {
            st.cfg.sweep.parameter = SweepParameter::Radius;
        } else if (value == "n_nodes") {
            st.cfg.sweep.parameter = SweepParameter::NNodes;
        } else if (value == "noise_dbm") {
            st.cfg.sweep.parameter = SweepParameter::NoiseDbm;
        } else if (value == "c_static") {
            st.cfg.sweep.parameter = SweepParameter::CStatic;
        } else {
            throw config_error(raw_key, line, "expected radius|n_nodes|noise_dbm|c_static");
        }
    } else if (leaf == "values") {
        std::vector<double> vals;
        for (const auto& tok : split(value, ',')) {
            if (!tok.empty()) vals.push_back(parse_double(raw_key, line, tok));
        }
        if (vals.empty()) throw config_error(raw_key, line, "no values given");
        st.cfg.sweep.values = std::move(vals);
    } else if (leaf == "methods") {
        std::vector<MethodSpec> ms;
        for (const auto& tok : split(value, ',')) {
            if (tok.empty()) continue;
            std::string name = tok;
            double param = 0.0;
            if (const auto colon = tok.find(':'); colon != std::string::npos) {
                name = tok.substr(0, colon);
                param = parse_double(raw_key, line, tok.substr(colon + 1));
            }
            if (name == "optimal") {
                ms.push_back({Method::Optimal, 0.0});
            } else if (name == "fixed") {
                ms.push_back({Method::Fixed, param});
            } else if (name == "random") {
                ms.push_back({Method::Random, 0.0});
            } else if (name == "broadcast") {
                ms.push_back({Method::Broadcast, param});
            } else if (name == "upper_bound") {
                ms.push_back({Method::UpperBound, 0.0});
            } else {
                throw config_error(raw_key, line, "unknown method '" + name + "'");
            }
        }
        if (ms.empty()) throw config_error(raw_key, line, "no methods given");
        st.cfg.sweep.methods = std::move(ms);
    } else if (leaf == "compare_alpha") {
        st.cfg.compare_alpha = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "p_min") {
        st.cfg.peb.p_min = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "p_max_probe") {
        st.cfg.peb.p_max = require_positive(parse_double(raw_key, line, value));
    } else if (leaf == "points") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 2) throw config_error(raw_key, line, "points must be >= 2");
        st.cfg.peb.points = static_cast<int>(n);
    } else if (leaf == "distance_m") {
        const double x = parse_double(raw_key, line, value);
        if (!(x >= 0.0)) throw config_error(raw_key, line, "distance_m must be non-negative");
        st.cfg.peb.distance_m = x;
    } else if (leaf == "samples") {
        const long long n = parse_int(raw_key, line, value);
        if (n < 1) throw config_error(raw_key, line, "samples must be >= 1");
        st.cfg.peb.samples = static_cast<int>(n);
    }
}

void finish_eh_model(ParseState& st, const std::map<std::string, std::string>& values) {
    if (!st.has("kind")) {
        // No harvester keys at all keeps the default model; stray parameter
        // keys without a kind are rejected to avoid silently ignoring them.
        for (const char* leaf : {"alpha", "p_max", "eta_max", "table"}) {
            if (st.has(leaf)) {
                throw config_error(std::string("eh.") + leaf, st.line_of(leaf),
                                   "eh.kind must be set when harvester parameters are given");
            }
        }
        return;
    }
    const int kind_line = st.line_of("kind");
    const std::string kind = values.at("kind");
    auto require = [&](const char* leaf) -> const std::string& {
        if (!st.has(leaf)) {
            throw config_error(std::string("eh.") + leaf, kind_line,
                               std::string("eh.kind=") + kind + " requires eh." + leaf);
        }
        return values.at(leaf);
    };
    if (kind == "linear") {
        st.cfg.scenario.eh =
            EhModel::linear(parse_double("eh.alpha", st.line_of("alpha"), require("alpha")));
    } else if (kind == "saturating_exp") {
        const double p_max = parse_double("eh.p_max", st.line_of("p_max"), require("p_max"));
        const double eta_max =
            parse_double("eh.eta_max", st.line_of("eta_max"), require("eta_max"));
        if (!(p_max > 0.0)) throw config_error("eh.p_max", st.line_of("p_max"), "must be positive");
        if (!(eta_max > 0.0)) {
            throw config_error("eh.eta_max", st.line_of("eta_max"), "must be positive");
        }
        st.cfg.scenario.eh = EhModel::saturating_exp(p_max, eta_max);
    } else if (kind == "tabulated") {
        const std::string& spec = require("table");
        std::vector<std::pair<double, double>> table;
        for (const auto& tok : split(spec, ',')) {
            if (tok.empty()) continue;
            const auto colon = tok.find(':');
            if (colon == std::string::npos) {
                throw config_error("eh.table", st.line_of("table"),
                                   "expected in:out pairs separated by commas");
            }
            table.emplace_back(parse_double("eh.table", st.line_of("table"), trim(tok.substr(0, colon))),
                               parse_double("eh.table", st.line_of("table"), trim(tok.substr(colon + 1))));
        }
        try {
            st.cfg.scenario.eh = EhModel::tabulated(std::move(table));
        } catch (const std::invalid_argument& e) {
            throw config_error("eh.table", st.line_of("table"), e.what());
        }
    } else {
        throw config_error("eh.kind", kind_line, "expected linear|saturating_exp|tabulated");
    }
}

}  // namespace

double FullConfig::resolved_compare_alpha() const {
    return compare_alpha > 0.0 ? compare_alpha : scenario.eh.eta_max();
}

double FullConfig::resolved_peb_distance() const {
    if (peb.distance_m > 0.0) return peb.distance_m;
    const Geometry& g = scenario.geometry;
    switch (g.kind) {
        case GeometryKind::FixedRing:
            return g.radius_m;
        case GeometryKind::Disk:
            return g.radius_m / std::sqrt(2.0);  // median distance, uniform in area
        case GeometryKind::Annulus:
            return std::sqrt(0.5 * (g.inner_m * g.inner_m + g.outer_m * g.outer_m));
    }
    return g.radius_m;
}

FullConfig parse_config_text(const std::string& text, const std::vector<std::string>& overrides) {
    ParseState st;
    std::map<std::string, std::string> eh_values;

    auto handle = [&](const std::string& entry, int line) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos) {
            throw config_error(entry, line, "expected key = value");
        }
        const std::string key = trim(entry.substr(0, eq));
        const std::string value = trim(entry.substr(eq + 1));
        if (key.empty()) throw config_error(entry, line, "empty key");

        // Harvest-model keys are collected and assembled once at the end.
        std::string leaf = key;
        if (const auto dot = key.find('.'); dot != std::string::npos) leaf = key.substr(dot + 1);
        apply_key(st, key, value, line);
        if (leaf == "kind" || leaf == "alpha" || leaf == "p_max" || leaf == "eta_max" ||
            leaf == "table") {
            eh_values[leaf] = value;
        }
    };

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string entry = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (entry.empty()) continue;
        handle(entry, line_no);
    }
    for (const auto& ov : overrides) handle(ov, 0);

    finish_eh_model(st, eh_values);

    try {
        st.cfg.scenario.validate();
        st.cfg.sweep.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error("config", 0, e.what());
    }
    return st.cfg;
}

FullConfig parse_config(const std::string& path, const std::vector<std::string>& overrides) {
    std::ifstream in(path);
    if (!in) throw config_error(path, 0, "cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), overrides);
}

std::string write_config(const FullConfig& cfg) {
    const ScenarioConfig& sc = cfg.scenario;
    std::ostringstream out;
    auto num = [](double x) { return format_g17(x); };

    out << "scenario.n_nodes = " << sc.n_nodes << "\n";
    switch (sc.geometry.kind) {
        case GeometryKind::Disk:
            out << "scenario.geometry = disk\n";
            out << "scenario.radius_m = " << num(sc.geometry.radius_m) << "\n";
            break;
        case GeometryKind::FixedRing:
            out << "scenario.geometry = fixed_ring\n";
            out << "scenario.radius_m = " << num(sc.geometry.radius_m) << "\n";
            break;
        case GeometryKind::Annulus:
            out << "scenario.geometry = annulus\n";
            out << "scenario.inner_m = " << num(sc.geometry.inner_m) << "\n";
            out << "scenario.outer_m = " << num(sc.geometry.outer_m) << "\n";
            break;
    }
    out << "scenario.budget_e = " << num(sc.budget_e) << "\n";
    out << "scenario.pilot_time = " << num(sc.pilot_time) << "\n";
    out << "scenario.trials = " << sc.trials << "\n";
    out << "scenario.master_seed = " << sc.master_seed << "\n";

    out << "channel.n_antennas = " << sc.channel.n_antennas << "\n";
    out << "channel.carrier_hz = " << num(sc.channel.carrier_hz) << "\n";
    out << "channel.noise_power = " << num(sc.channel.noise_power) << "\n";
    out << "channel.rician_k = " << num(sc.channel.rician_k) << "\n";
    out << "channel.estimator = " << (sc.estimator == Estimator::LeastSquares ? "ls" : "mmse")
        << "\n";

    out << "gain.backend = ";
    switch (sc.gain_backend) {
        case GainBackendKind::RationalApprox:
            out << "rational_approx";
            break;
        case GainBackendKind::Asymptotic:
            out << "asymptotic";
            break;
        case GainBackendKind::MonteCarlo:
            out << "monte_carlo";
            break;
        case GainBackendKind::Broadcast:
            out << "broadcast";
            break;
    }
    out << "\n";
    out << "gain.mc_samples = " << sc.mc_samples << "\n";

    out << "consumption.e_coeff = " << num(sc.e_coeff) << "\n";
    out << "consumption.c_static = " << num(sc.c_static) << "\n";

    switch (sc.eh.kind()) {
        case EhKind::Linear:
            out << "eh.kind = linear\n";
            out << "eh.alpha = " << num(sc.eh.alpha()) << "\n";
            break;
        case EhKind::SaturatingExponential:
            out << "eh.kind = saturating_exp\n";
            out << "eh.p_max = " << num(sc.eh.p_max()) << "\n";
            out << "eh.eta_max = " << num(sc.eh.eta_max_param()) << "\n";
            break;
        case EhKind::Tabulated: {
            out << "eh.kind = tabulated\n";
            out << "eh.table = ";
            bool first = true;
            for (const auto& [x, y] : sc.eh.table()) {
                if (!first) out << ",";
                out << num(x) << ":" << num(y);
                first = false;
            }
            out << "\n";
            break;
        }
    }

    out << "solver.epsilon = " << num(sc.epsilon) << "\n";
    out << "solver.inner_tol = " << num(sc.inner_tol) << "\n";

    out << "sweep.parameter = ";
    switch (cfg.sweep.parameter) {
        case SweepParameter::Radius:
            out << "radius";
            break;
        case SweepParameter::NNodes:
            out << "n_nodes";
            break;
        case SweepParameter::NoiseDbm:
            out << "noise_dbm";
            break;
        case SweepParameter::CStatic:
            out << "c_static";
            break;
    }
    out << "\n";
    out << "sweep.values = ";
    for (std::size_t i = 0; i < cfg.sweep.values.size(); ++i) {
        if (i) out << ",";
        out << num(cfg.sweep.values[i]);
    }
    out << "\n";
    out << "sweep.methods = ";
    for (std::size_t i = 0; i < cfg.sweep.methods.size(); ++i) {
        const MethodSpec& m = cfg.sweep.methods[i];
        if (i) out << ",";
        out << method_name(m);
        if (m.method == Method::Fixed || m.method == Method::Broadcast) {
            out << ":" << num(m.param);
        }
    }
    out << "\n";

    if (cfg.compare_alpha > 0.0) {
        out << "compare.compare_alpha = " << num(cfg.compare_alpha) << "\n";
    }
    out << "peb.p_min = " << num(cfg.peb.p_min) << "\n";
    out << "peb.p_max_probe = " << num(cfg.peb.p_max) << "\n";
    out << "peb.points = " << cfg.peb.points << "\n";
    if (cfg.peb.distance_m > 0.0) {
        out << "peb.distance_m = " << num(cfg.peb.distance_m) << "\n";
    }
    out << "peb.samples = " << cfg.peb.samples << "\n";
    return out.str();
}

}  // namespace wpsn
