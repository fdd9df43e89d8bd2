#include "wpsn/eh_model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "wpsn/rng.hpp"

namespace wpsn {

EhModel EhModel::linear(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("EhModel::linear: alpha must be positive");
    }
    EhModel m;
    m.kind_ = EhKind::Linear;
    m.alpha_ = alpha;
    return m;
}

EhModel EhModel::saturating_exp(double p_max, double eta_max) {
    if (!(p_max > 0.0) || !(eta_max > 0.0)) {
        throw std::invalid_argument("EhModel::saturating_exp: p_max and eta_max must be positive");
    }
    EhModel m;
    m.kind_ = EhKind::SaturatingExponential;
    m.p_max_ = p_max;
    m.eta_max_param_ = eta_max;
    return m;
}

EhModel EhModel::tabulated(std::vector<std::pair<double, double>> table) {
    if (table.size() < 2) {
        throw std::invalid_argument("EhModel::tabulated: need at least two points");
    }
    if (table.front().first != 0.0 || table.front().second != 0.0) {
        throw std::invalid_argument("EhModel::tabulated: table must start at (0, 0)");
    }
    for (std::size_t i = 1; i < table.size(); ++i) {
        if (!(table[i].first > table[i - 1].first) || !(table[i].second > table[i - 1].second)) {
            throw std::invalid_argument(
                "EhModel::tabulated: inputs and outputs must be strictly increasing");
        }
    }
    EhModel m;
    m.kind_ = EhKind::Tabulated;
    m.table_ = std::move(table);
    return m;
}

double EhModel::eval(double received) const {
    if (!(received >= 0.0)) {
        throw std::domain_error("EhModel::eval: received energy must be non-negative");
    }
    switch (kind_) {
        case EhKind::Linear:
            return alpha_ * received;
        case EhKind::SaturatingExponential: {
            // Expanded via expm1 so the near-zero region keeps full precision;
            // clamped one ulp under p_max where the exponential underflows, so
            // the output stays strictly below saturation.
            const double y = -p_max_ * std::expm1(-eta_max_param_ * received / p_max_);
            return y < p_max_ ? y : std::nextafter(p_max_, 0.0);
        }
        case EhKind::Tabulated: {
            if (received >= table_.back().first) return table_.back().second;  // saturated
            auto it = std::upper_bound(table_.begin(), table_.end(), received,
                                       [](double x, const auto& p) { return x < p.first; });
            const auto& [x1, y1] = *it;
            const auto& [x0, y0] = *(it - 1);
            return y0 + (y1 - y0) * (received - x0) / (x1 - x0);
        }
    }
    return 0.0;
}

double EhModel::inverse(double harvested) const {
    if (!(harvested >= 0.0)) {
        throw std::domain_error("EhModel::inverse: harvested energy must be non-negative");
    }
    if (harvested >= sup_harvest()) {
        throw saturation_error("EhModel::inverse: demand at or above saturation level");
    }
    switch (kind_) {
        case EhKind::Linear:
            return harvested / alpha_;
        case EhKind::SaturatingExponential:
            return -(p_max_ / eta_max_param_) * std::log1p(-harvested / p_max_);
        case EhKind::Tabulated: {
            auto it = std::upper_bound(table_.begin(), table_.end(), harvested,
                                       [](double y, const auto& p) { return y < p.second; });
            const auto& [x1, y1] = *it;
            const auto& [x0, y0] = *(it - 1);
            return x0 + (x1 - x0) * (harvested - y0) / (y1 - y0);
        }
    }
    return 0.0;
}

double EhModel::eta_max() const {
    switch (kind_) {
        case EhKind::Linear:
            return alpha_;
        case EhKind::SaturatingExponential:
            // eta(x)/x decreases from eta_max_param at x -> 0, so the sup is
            // the parameter itself.
            return eta_max_param_;
        case EhKind::Tabulated: {
            // Piecewise linear, so the ratio from the origin peaks at a knot.
            double best = 0.0;
            for (std::size_t i = 1; i < table_.size(); ++i) {
                best = std::max(best, table_[i].second / table_[i].first);
            }
            return best;
        }
    }
    return 0.0;
}

double EhModel::sup_harvest() const {
    switch (kind_) {
        case EhKind::Linear:
            return std::numeric_limits<double>::infinity();
        case EhKind::SaturatingExponential:
            return p_max_;
        case EhKind::Tabulated:
            return table_.back().second;
    }
    return 0.0;
}

// ---------------------------------------------------------------------------

void ZdcToyModel::validate() const {
    if (!(k2 > 0.0) || !(k4 > 0.0) || !(a0 > 0.0) || !(a1 > 0.0)) {
        throw std::invalid_argument("ZdcToyModel: coefficients and amplitudes must be positive");
    }
    if (strategy == ZdcStrategy::EqualRatio && !(ratio > 0.0)) {
        throw std::invalid_argument("ZdcToyModel: EqualRatio needs a positive ratio");
    }
}

double zdc_eval(const ZdcToyModel& m, double s0, double s1) {
    const double q0 = s0 * s0 * m.a0 * m.a0;
    const double q1 = s1 * s1 * m.a1 * m.a1;
    const double lin = q0 + q1;
    return m.k2 * lin + m.k4 * (lin * lin + 2.0 * q0 * q1);
}

namespace {

// Amplitudes for a split fraction t of the tone-power budget 2p on tone 0.
ToneAmplitudes amplitudes_for_split(const ZdcToyModel& m, double p, double t) {
    ToneAmplitudes a;
    a.s0 = std::sqrt(2.0 * p * t) / m.a0;
    a.s1 = std::sqrt(2.0 * p * (1.0 - t)) / m.a1;
    return a;
}

}  // namespace

ToneAmplitudes zdc_allocate(const ZdcToyModel& m, double p_ave_rf) {
    m.validate();
    if (!(p_ave_rf >= 0.0)) {
        throw std::domain_error("zdc_allocate: power must be non-negative");
    }
    switch (m.strategy) {
        case ZdcStrategy::AdaptiveSingleSine:
            return amplitudes_for_split(m, p_ave_rf, m.a0 >= m.a1 ? 1.0 : 0.0);
        case ZdcStrategy::EqualRatio: {
            // s0 = ratio * s1 under s0^2 A0^2 + s1^2 A1^2 = 2p.
            ToneAmplitudes a;
            a.s1 = std::sqrt(2.0 * p_ave_rf / (m.ratio * m.ratio * m.a0 * m.a0 + m.a1 * m.a1));
            a.s0 = m.ratio * a.s1;
            return a;
        }
        case ZdcStrategy::OptimalGrid: {
            ToneAmplitudes best = amplitudes_for_split(m, p_ave_rf, 0.0);
            double best_val = zdc_eval(m, best.s0, best.s1);
            const int n = 10000;
            for (int i = 1; i <= n; ++i) {
                const double t = static_cast<double>(i) / n;
                const ToneAmplitudes cand = amplitudes_for_split(m, p_ave_rf, t);
                const double val = zdc_eval(m, cand.s0, cand.s1);
                if (val > best_val) {
                    best_val = val;
                    best = cand;
                }
            }
            return best;
        }
        case ZdcStrategy::RandomSplit: {
            // Split fraction redrawn per power value; deliberately violates the
            // harvest-monotonicity condition for some power pairs.
            std::uint64_t s = m.seed ^ std::bit_cast<std::uint64_t>(p_ave_rf);
            const double t = static_cast<double>(splitmix64(s) >> 11) * 0x1.0p-53;
            return amplitudes_for_split(m, p_ave_rf, t);
        }
    }
    return {};
}

}  // namespace wpsn
