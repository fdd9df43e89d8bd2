#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wpsn {

// Demanded harvest is at or above the converter's saturation level, so no
// finite received energy can supply it.
class saturation_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

enum class EhKind { Linear, SaturatingExponential, Tabulated };

// RF-DC conversion model: harvested = eta(received).  eta(0) = 0 and eta is
// strictly increasing on its domain; the tabulated form saturates at its last
// output, the exponential form at p_max.
class EhModel {
public:
    static EhModel linear(double alpha);
    static EhModel saturating_exp(double p_max, double eta_max);
    static EhModel tabulated(std::vector<std::pair<double, double>> table);

    double eval(double received) const;

    // eta^{-1}(harvested).  Throws saturation_error when the demand is not
    // reachable at any finite received energy.
    double inverse(double harvested) const;

    // Tightest linear bound slope: sup_{x>0} eta(x)/x.
    double eta_max() const;

    // sup eta over the domain; +inf for the linear model.
    double sup_harvest() const;

    EhKind kind() const { return kind_; }
    double alpha() const { return alpha_; }
    double p_max() const { return p_max_; }
    double eta_max_param() const { return eta_max_param_; }
    const std::vector<std::pair<double, double>>& table() const { return table_; }

    bool operator==(const EhModel&) const = default;

private:
    EhModel() = default;

    EhKind kind_ = EhKind::Linear;
    double alpha_ = 0.0;           // Linear
    double p_max_ = 0.0;           // SaturatingExponential
    double eta_max_param_ = 0.0;   // SaturatingExponential
    std::vector<std::pair<double, double>> table_;  // Tabulated, starts at (0,0)
};

// ---------------------------------------------------------------------------
// Two-sinewave rectifier surrogate used to check harvest monotonicity of
// waveform power-split strategies.

enum class ZdcStrategy { AdaptiveSingleSine, EqualRatio, OptimalGrid, RandomSplit };

struct ZdcToyModel {
    double k2 = 1.0;   // second-order rectifier coefficient, > 0
    double k4 = 1.0;   // fourth-order rectifier coefficient, > 0
    double a0 = 1.0;   // channel amplitude, tone 0
    double a1 = 1.0;   // channel amplitude, tone 1
    ZdcStrategy strategy = ZdcStrategy::AdaptiveSingleSine;
    double ratio = 1.0;         // EqualRatio: fixed s0/s1
    std::uint64_t seed = 0;     // RandomSplit: split derived from (seed, power)

    void validate() const;
};

struct ToneAmplitudes {
    double s0 = 0.0;
    double s1 = 0.0;
};

// z_DC(s0,s1) = k2(s0^2 A0^2 + s1^2 A1^2) + k4[(s0^2 A0^2 + s1^2 A1^2)^2
//               + 2 s0^2 s1^2 A0^2 A1^2].
double zdc_eval(const ZdcToyModel& m, double s0, double s1);

// Split the average RF power p across the two tones per the model's strategy,
// under the constraint 0.5 (s0^2 A0^2 + s1^2 A1^2) = p.
ToneAmplitudes zdc_allocate(const ZdcToyModel& m, double p_ave_rf);

}  // namespace wpsn
