#include "wpsn/gain.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wpsn/gamma.hpp"
#include "wpsn/rng.hpp"

namespace wpsn {

namespace {
constexpr std::uint64_t kNoiseTag = 0x4e4f495345544147ULL;
}  // namespace

double g_hat(double sigma_h2, int n_antennas, double noise_power, double p_pilot) {
    const double nt = static_cast<double>(n_antennas);
    const double num = p_pilot * sigma_h2 + nt * noise_power;
    const double den = p_pilot * sigma_h2 + nt * nt * noise_power;
    return sigma_h2 * num / den;
}

double g_hat_derivative(double sigma_h2, int n_antennas, double noise_power, double p_pilot) {
    const double nt = static_cast<double>(n_antennas);
    const double den = p_pilot * sigma_h2 + nt * nt * noise_power;
    return sigma_h2 * sigma_h2 * nt * noise_power * (nt - 1.0) / (den * den);
}

double g_asymptotic(double sigma_elem2, int n_antennas, double noise_power, double p_pilot) {
    const double nt = static_cast<double>(n_antennas);
    return nt * sigma_elem2 * sigma_elem2 * p_pilot /
           (sigma_elem2 * p_pilot + nt * noise_power);
}

double g_asymptotic_derivative(double sigma_elem2, int n_antennas, double noise_power,
                               double p_pilot) {
    const double nt = static_cast<double>(n_antennas);
    const double den = sigma_elem2 * p_pilot + nt * noise_power;
    return nt * nt * sigma_elem2 * sigma_elem2 * noise_power / (den * den);
}

double concavity_threshold(int n_antennas, double noise_power, double h_norm2) {
    if (!(h_norm2 > 0.0)) {
        throw std::domain_error("concavity_threshold: h_norm2 must be positive");
    }
    const double nt = static_cast<double>(n_antennas);
    const double q = chi_square_half_quantile(nt, 0.99);
    return (2.0 * std::sqrt(3.0) - 1.0) * q * nt * noise_power / h_norm2;
}

// ---------------------------------------------------------------------------
// Monte Carlo gain

namespace {

using cvec = std::vector<std::complex<double>>;

std::complex<double> inner(const cvec& a, const cvec& b) {
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

double norm2(const cvec& a) {
    double s = 0.0;
    for (const auto& z : a) s += std::norm(z);
    return s;
}

// |b^H h|^2 / ||b||^2 with the least-squares estimate as beamformer.  The
// estimate h + sqrt(Nt/P) n enters only through the scale-invariant ratio, so
// it is evaluated as sqrt(P) h + sqrt(Nt) n, which stays finite at P = 0.
double ls_gain_sample(const cvec& h, const cvec& n, double p_pilot, int n_antennas) {
    const double sp = std::sqrt(p_pilot);
    const double snt = std::sqrt(static_cast<double>(n_antennas));
    cvec b(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) b[k] = sp * h[k] + snt * n[k];
    const double den = norm2(b);
    if (den == 0.0) return 0.0;
    return std::norm(inner(b, h)) / den;
}

// MMSE estimate via the Rician population covariance R = c1 a a^H + c2 I.
// (R ps/Nt R + sn2 I)^{-1} reduces by Sherman-Morrison, so no matrix algebra
// is needed; the estimate's overall scale drops out of the gain ratio.
double mmse_gain_sample(const cvec& h, const cvec& n, const cvec& steer, double c1, double c2,
                        double p_pilot, int n_antennas, double noise_power) {
    const double nt = static_cast<double>(n_antennas);
    const double ps = p_pilot / nt;
    const double sqps = std::sqrt(ps);

    // y = sqrt(P/Nt) h + n
    cvec y(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) y[k] = sqps * h[k] + n[k];

    // x = (beta a a^H + gamma I)^{-1} y
    const double beta = ps * c1;
    const double gamma = ps * c2 + noise_power;
    const std::complex<double> ay = inner(steer, y);
    const std::complex<double> coef = beta * ay / (gamma * (gamma + beta * nt));
    cvec x(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) x[k] = y[k] / gamma - coef * steer[k];

    // b = R x = c1 a (a^H x) + c2 x
    const std::complex<double> ax = inner(steer, x);
    cvec b(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) b[k] = c1 * ax * steer[k] + c2 * x[k];

    const double den = norm2(b);
    if (den == 0.0) return 0.0;
    return std::norm(inner(b, h)) / den;
}

}  // namespace

McEstimate peb_gain_mc_est(Estimator estimator, const ChannelConfig& cfg, double distance_m,
                           double p_pilot, int samples, McAveraging averaging) {
    cfg.validate();
    if (samples < 1) throw std::invalid_argument("peb_gain_mc: samples >= 1 required");
    if (!(p_pilot >= 0.0)) throw std::domain_error("peb_gain_mc: p_pilot must be non-negative");

    const double sn = std::sqrt(cfg.noise_power);
    const std::size_t nt = static_cast<std::size_t>(cfg.n_antennas);

    // Population covariance pieces and steering vector for the MMSE estimate.
    // The steering direction is the same channel's pure-LOS limit, so it stays
    // in lockstep with draw_channel's per-seed geometry.
    const double path_gain = friis_gain(cfg.carrier_hz, distance_m);
    double c1 = path_gain;
    double c2 = 0.0;
    if (std::isfinite(cfg.rician_k)) {
        c1 = path_gain * cfg.rician_k / (cfg.rician_k + 1.0);
        c2 = path_gain / (cfg.rician_k + 1.0);
    }
    ChannelConfig los_cfg = cfg;
    los_cfg.rician_k = std::numeric_limits<double>::infinity();
    cvec steer = draw_channel(los_cfg, distance_m, 0).h;
    const double amp = std::sqrt(path_gain);
    for (auto& z : steer) z /= amp;

    ChannelSample fixed;
    if (averaging == McAveraging::NoiseOnly) fixed = draw_channel(cfg, distance_m, 0);

    double sum = 0.0;
    double sum_sq = 0.0;
    cvec noise(nt);
    for (int i = 0; i < samples; ++i) {
        const ChannelSample cs = (averaging == McAveraging::NoiseOnly)
                                     ? fixed
                                     : draw_channel(cfg, distance_m, static_cast<std::uint64_t>(i));
        RandomStream noise_stream(mix_seed(cfg.rng_seed, kNoiseTag),
                                  static_cast<std::uint64_t>(i));
        for (std::size_t k = 0; k < nt; ++k) noise[k] = sn * noise_stream.cnormal();

        const double g = (estimator == Estimator::LeastSquares)
                             ? ls_gain_sample(cs.h, noise, p_pilot, cfg.n_antennas)
                             : mmse_gain_sample(cs.h, noise, steer, c1, c2, p_pilot,
                                                cfg.n_antennas, cfg.noise_power);
        sum += g;
        sum_sq += g * g;
    }

    McEstimate est;
    est.mean = sum / samples;
    if (samples > 1) {
        const double var = (sum_sq - sum * sum / samples) / (samples - 1);
        est.std_error = std::sqrt(std::max(0.0, var) / samples);
    }
    return est;
}

double peb_gain_mc(Estimator estimator, const ChannelConfig& cfg, double distance_m,
                   double p_pilot, int samples, McAveraging averaging) {
    return peb_gain_mc_est(estimator, cfg, distance_m, p_pilot, samples, averaging).mean;
}

// ---------------------------------------------------------------------------
// PebGainModel

PebGainModel PebGainModel::rational_approx(double sigma_h2, int n_antennas, double noise_power) {
    if (!(sigma_h2 > 0.0) || n_antennas < 1 || !(noise_power > 0.0)) {
        throw std::invalid_argument("PebGainModel::rational_approx: invalid parameters");
    }
    PebGainModel m;
    m.backend_ = Backend::RationalApprox;
    m.sigma_h2_ = sigma_h2;
    m.n_antennas_ = n_antennas;
    m.noise_power_ = noise_power;
    return m;
}

PebGainModel PebGainModel::asymptotic(double sigma_elem2, int n_antennas, double noise_power) {
    if (!(sigma_elem2 > 0.0) || n_antennas < 1 || !(noise_power > 0.0)) {
        throw std::invalid_argument("PebGainModel::asymptotic: invalid parameters");
    }
    PebGainModel m;
    m.backend_ = Backend::Asymptotic;
    m.sigma_elem2_ = sigma_elem2;
    m.n_antennas_ = n_antennas;
    m.noise_power_ = noise_power;
    return m;
}

PebGainModel PebGainModel::broadcast(double sigma_h2, int n_antennas) {
    if (!(sigma_h2 > 0.0) || n_antennas < 1) {
        throw std::invalid_argument("PebGainModel::broadcast: invalid parameters");
    }
    PebGainModel m;
    m.backend_ = Backend::Broadcast;
    m.sigma_h2_ = sigma_h2;
    m.n_antennas_ = n_antennas;
    return m;
}

PebGainModel PebGainModel::monte_carlo(Estimator estimator, ChannelConfig cfg, double distance_m,
                                       int samples) {
    cfg.validate();
    if (samples < 1) throw std::invalid_argument("PebGainModel::monte_carlo: samples >= 1");
    PebGainModel m;
    m.backend_ = Backend::MonteCarlo;
    m.n_antennas_ = cfg.n_antennas;
    m.noise_power_ = cfg.noise_power;
    m.estimator_ = estimator;
    m.cfg_ = cfg;
    m.distance_m_ = distance_m;
    m.samples_ = samples;
    // Surrogate plateau: mean ||h||^2 over the same seeded draws the gain
    // average uses, which is exactly where the gain saturates for large P.
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        sum += draw_channel(cfg, distance_m, static_cast<std::uint64_t>(i)).norm2();
    }
    m.sigma_h2_ = sum / samples;
    return m;
}

double PebGainModel::value(double p_pilot) const {
    switch (backend_) {
        case Backend::RationalApprox:
            return g_hat(sigma_h2_, n_antennas_, noise_power_, p_pilot);
        case Backend::Asymptotic:
            return g_asymptotic(sigma_elem2_, n_antennas_, noise_power_, p_pilot);
        case Backend::Broadcast:
            return sigma_h2_ / static_cast<double>(n_antennas_);
        case Backend::MonteCarlo:
            return peb_gain_mc(estimator_, cfg_, distance_m_, p_pilot, samples_);
    }
    return 0.0;
}

double PebGainModel::derivative(double p_pilot) const {
    switch (backend_) {
        case Backend::RationalApprox:
            return g_hat_derivative(sigma_h2_, n_antennas_, noise_power_, p_pilot);
        case Backend::Asymptotic:
            return g_asymptotic_derivative(sigma_elem2_, n_antennas_, noise_power_, p_pilot);
        case Backend::Broadcast:
            return 0.0;
        case Backend::MonteCarlo:
            return g_hat_derivative(sigma_h2_, n_antennas_, noise_power_, p_pilot);
    }
    return 0.0;
}

double PebGainModel::derivative_ratio(double p_pilot) const {
    const double nt = static_cast<double>(n_antennas_);
    switch (backend_) {
        case Backend::RationalApprox:
        case Backend::MonteCarlo: {
            // g'/g^2 for the rational form collapses to
            // Nt sn2 (Nt-1) / (P sigma_h2 + Nt sn2)^2.
            const double den = p_pilot * sigma_h2_ + nt * noise_power_;
            return nt * noise_power_ * (nt - 1.0) / (den * den);
        }
        case Backend::Asymptotic:
            // Collapses to sn2 / (sigma_i^4 P^2); infinite at P = 0.
            return noise_power_ / (sigma_elem2_ * sigma_elem2_ * p_pilot * p_pilot);
        case Backend::Broadcast:
            return 0.0;
    }
    return 0.0;
}

McEstimate PebGainModel::value_with_error(double p_pilot) const {
    if (backend_ == Backend::MonteCarlo) {
        return peb_gain_mc_est(estimator_, cfg_, distance_m_, p_pilot, samples_);
    }
    return {value(p_pilot), 0.0};
}

double PebGainModel::ceiling() const {
    if (backend_ == Backend::Asymptotic) {
        return static_cast<double>(n_antennas_) * sigma_elem2_;
    }
    return sigma_h2_;
}

// ---------------------------------------------------------------------------

QualifyReport qualify_gain(const PebGainModel& g, double p_max_probe, int grid_points) {
    return qualify_gain(g, p_max_probe * 1e-8, p_max_probe, grid_points);
}

QualifyReport qualify_gain(const PebGainModel& g, double p_min_probe, double p_max_probe,
                           int grid_points) {
    if (!(p_min_probe > 0.0) || !(p_max_probe > p_min_probe) || grid_points < 3) {
        throw std::invalid_argument("qualify_gain: bad probe range");
    }
    const bool mc = g.backend() == PebGainModel::Backend::MonteCarlo;

    std::vector<double> p(static_cast<std::size_t>(grid_points));
    std::vector<McEstimate> v(p.size());
    const double log_lo = std::log(p_min_probe);
    const double log_hi = std::log(p_max_probe);
    for (std::size_t k = 0; k < p.size(); ++k) {
        p[k] = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                     static_cast<double>(grid_points - 1));
        v[k] = g.value_with_error(p[k]);
    }

    QualifyReport rep;
    rep.monotone = true;
    rep.concave = true;

    auto closed_tol = [](double a, double b) {
        return 1e-12 * std::max({std::fabs(a), std::fabs(b), 1e-300});
    };

    std::vector<double> slope(p.size() - 1);
    std::vector<double> slope_var(p.size() - 1, 0.0);
    for (std::size_t k = 0; k + 1 < p.size(); ++k) {
        const double dp = p[k + 1] - p[k];
        slope[k] = (v[k + 1].mean - v[k].mean) / dp;
        if (mc) {
            const double se2 = v[k].std_error * v[k].std_error +
                               v[k + 1].std_error * v[k + 1].std_error;
            slope_var[k] = se2 / (dp * dp);
            const double tol = 3.0 * std::sqrt(se2);
            if (v[k + 1].mean - v[k].mean <= -tol) rep.monotone = false;
        } else {
            if (v[k + 1].mean - v[k].mean <= -closed_tol(v[k].mean, v[k + 1].mean)) {
                rep.monotone = false;
            }
        }
    }
    for (std::size_t k = 0; k + 1 < slope.size(); ++k) {
        const double d2 = slope[k + 1] - slope[k];
        if (mc) {
            const double tol = 3.0 * std::sqrt(slope_var[k] + slope_var[k + 1]);
            if (d2 >= tol) rep.concave = false;
        } else {
            const double scale = std::max({std::fabs(slope[k]), std::fabs(slope[k + 1]), 1e-300});
            if (d2 >= 1e-12 * scale) rep.concave = false;
        }
    }

    double vmax = 0.0;
    double se_at_max = 0.0;
    for (const auto& e : v) {
        if (e.mean > vmax) {
            vmax = e.mean;
            se_at_max = e.std_error;
        }
    }
    rep.bounded = vmax <= g.ceiling() * (1.0 + 1e-9) + (mc ? 3.0 * se_at_max : 0.0);
    return rep;
}

std::vector<GainCurvePoint> gain_curve(const PebGainModel& g, double p_lo, double p_hi,
                                       int points) {
    if (!(p_lo > 0.0) || !(p_hi > p_lo) || points < 2) {
        throw std::invalid_argument("gain_curve: bad grid");
    }
    std::vector<GainCurvePoint> out(static_cast<std::size_t>(points));
    const double log_lo = std::log(p_lo);
    const double log_hi = std::log(p_hi);
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double p = std::exp(log_lo + (log_hi - log_lo) * static_cast<double>(k) /
                                               static_cast<double>(points - 1));
        const McEstimate e = g.value_with_error(p);
        out[k] = {p, e.mean, e.std_error};
    }
    return out;
}

}  // namespace wpsn
