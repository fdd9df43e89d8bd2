#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wpsn/experiments.hpp"
#include "wpsn/scenario.hpp"

namespace wpsn {

class config_error : public std::runtime_error {
public:
    config_error(std::string key, int line, const std::string& what)
        : std::runtime_error(line > 0 ? "config error at line " + std::to_string(line) + " (" +
                                            key + "): " + what
                                      : "config error (" + key + "): " + what),
          key_(std::move(key)),
          line_(line) {}

    const std::string& key() const { return key_; }
    int line() const { return line_; }

private:
    std::string key_;
    int line_;
};

struct PebCurveSpec {
    double p_min = 1e-4;
    double p_max = 0.1;
    int points = 50;
    double distance_m = 0.0;  // 0 = pick a representative distance from the geometry
    int samples = 1000;

    bool operator==(const PebCurveSpec&) const = default;
};

struct FullConfig {
    ScenarioConfig scenario{};
    SweepSpec sweep = default_sweep_spec();
    PebCurveSpec peb{};
    double compare_alpha = 0.0;  // 0 = use the harvester's eta_max

    double resolved_compare_alpha() const;
    double resolved_peb_distance() const;

    bool operator==(const FullConfig&) const = default;
};

// Flat key=value schema, one entry per line, '#' comments.  Keys are written
// section.name; the bare name is accepted too since every name is unique.
// Overrides are key=value strings applied after the file.
FullConfig parse_config_text(const std::string& text,
                             const std::vector<std::string>& overrides = {});
FullConfig parse_config(const std::string& path,
                        const std::vector<std::string>& overrides = {});

// Canonical text form; parse_config_text(write_config(c)) == c.
std::string write_config(const FullConfig& cfg);

}  // namespace wpsn
