#pragma once

#include <cstdint>
#include <vector>

#include "wpsn/channel.hpp"

namespace wpsn {

enum class Estimator { LeastSquares, Mmse };

// What the Monte Carlo average in peb_gain_mc runs over: fresh channel and
// noise per sample, or a single channel realization with noise-only samples.
enum class McAveraging { ChannelAndNoise, NoiseOnly };

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
};

// Rational approximation of the pilot-estimation-beamforming gain:
//   g_hat = sigma_h2 (P sigma_h2 + Nt sn2) / (P sigma_h2 + Nt^2 sn2).
double g_hat(double sigma_h2, int n_antennas, double noise_power, double p_pilot);

// d g_hat / dP = sigma_h2^2 Nt sn2 (Nt - 1) / (P sigma_h2 + Nt^2 sn2)^2.
double g_hat_derivative(double sigma_h2, int n_antennas, double noise_power, double p_pilot);

// Massive-antenna limit: Nt sigma_i^4 P / (sigma_i^2 P + Nt sn2), with
// sigma_elem2 the per-element channel power.
double g_asymptotic(double sigma_elem2, int n_antennas, double noise_power, double p_pilot);
double g_asymptotic_derivative(double sigma_elem2, int n_antennas, double noise_power,
                               double p_pilot);

// Pilot power above which the noise-averaged gain of a fixed channel with
// squared norm h_norm2 is concave (almost surely):
//   (2 sqrt(3) - 1) * Qinv(Nt, 0, 0.99) * Nt * sn2 / h_norm2,
// where a chi-square with 2 Nt degrees of freedom is below 2*Qinv with
// probability 0.99.
double concavity_threshold(int n_antennas, double noise_power, double h_norm2);

// Monte Carlo evaluation of the expected beamforming gain with the estimated
// channel as beamformer (least-squares or MMSE estimate).  Deterministic in
// (cfg.rng_seed, sample index); common draws across calls with different
// p_pilot, so curves sampled on a grid are smooth.
McEstimate peb_gain_mc_est(Estimator estimator, const ChannelConfig& cfg, double distance_m,
                           double p_pilot, int samples,
                           McAveraging averaging = McAveraging::ChannelAndNoise);
double peb_gain_mc(Estimator estimator, const ChannelConfig& cfg, double distance_m,
                   double p_pilot, int samples,
                   McAveraging averaging = McAveraging::ChannelAndNoise);

// Per-node gain function g_i(P^p) handed to the solver.
class PebGainModel {
public:
    enum class Backend { RationalApprox, Asymptotic, Broadcast, MonteCarlo };

    static PebGainModel rational_approx(double sigma_h2, int n_antennas, double noise_power);
    static PebGainModel asymptotic(double sigma_elem2, int n_antennas, double noise_power);
    static PebGainModel broadcast(double sigma_h2, int n_antennas);
    static PebGainModel monte_carlo(Estimator estimator, ChannelConfig cfg, double distance_m,
                                    int samples);

    // Gain at pilot power p.  The Monte Carlo backend re-runs its seeded
    // average, so this call is costly there and cheap everywhere else.
    double value(double p_pilot) const;

    // Analytic slope.  The Monte Carlo backend differentiates a rational
    // surrogate fitted to its large-P plateau instead of its noisy samples.
    double derivative(double p_pilot) const;

    // g'(p) / g(p)^2, the factor in d/dP of demand/g(P).  Evaluated in a
    // cancellation-free closed form per backend; +inf where the gain vanishes.
    double derivative_ratio(double p_pilot) const;

    // Point estimate with Monte Carlo standard error (zero for closed forms).
    McEstimate value_with_error(double p_pilot) const;

    double ceiling() const;  // array-gain bound sigma_h2
    Backend backend() const { return backend_; }
    int n_antennas() const { return n_antennas_; }
    double noise_power() const { return noise_power_; }

private:
    PebGainModel() = default;

    Backend backend_ = Backend::RationalApprox;
    double sigma_h2_ = 0.0;      // RationalApprox / Broadcast; MC: fitted plateau
    double sigma_elem2_ = 0.0;   // Asymptotic
    int n_antennas_ = 1;
    double noise_power_ = 0.0;
    Estimator estimator_ = Estimator::LeastSquares;  // MonteCarlo
    ChannelConfig cfg_{};                            // MonteCarlo
    double distance_m_ = 0.0;                        // MonteCarlo
    int samples_ = 0;                                // MonteCarlo
};

struct QualifyReport {
    bool monotone = false;
    bool concave = false;
    bool bounded = false;
};

// Probe the gain on a log grid over [p_min_probe, p_max_probe] and check the
// qualification conditions.  Tolerances absorb Monte Carlo noise (3 standard
// errors) and shrink to 1e-12 relative for closed forms.  A failing report is
// a valid output, not an error.
QualifyReport qualify_gain(const PebGainModel& g, double p_max_probe, int grid_points = 200);
QualifyReport qualify_gain(const PebGainModel& g, double p_min_probe, double p_max_probe,
                           int grid_points);

struct GainCurvePoint {
    double p_pilot = 0.0;
    double gain = 0.0;
    double std_error = 0.0;
};

// Log-spaced gain curve, ready for CSV export.
std::vector<GainCurvePoint> gain_curve(const PebGainModel& g, double p_lo, double p_hi,
                                       int points);

}  // namespace wpsn
