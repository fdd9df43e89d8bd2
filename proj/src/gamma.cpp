#include "wpsn/gamma.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace wpsn {

namespace {

// P(a,x) by power series: P = x^a e^-x / Gamma(a+1) * sum_n x^n / ((a+1)...(a+n)).
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int n = 0; n < 10000; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-17) {
            return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("gamma_p: series did not converge");
}

// Q(a,x) by modified Lentz continued fraction.
double gamma_q_cf(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
        }
    }
    throw std::runtime_error("gamma_p: continued fraction did not converge");
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
        throw std::domain_error("gamma_p: requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_cf(a, x);
}

double gamma_p_inv(double a, double p) {
    if (!(a > 0.0) || p < 0.0 || p >= 1.0) {
        throw std::domain_error("gamma_p_inv: requires a > 0 and 0 <= p < 1");
    }
    if (p == 0.0) return 0.0;

    // Bracket the root.  P is increasing in x; start around the mean a.
    double lo = 0.0;
    double hi = a + 1.0;
    while (gamma_p(a, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("gamma_p_inv: bracket overflow");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (gamma_p(a, mid) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * hi) break;
    }
    return 0.5 * (lo + hi);
}

double chi_square_half_quantile(double half_dof, double p) {
    return gamma_p_inv(half_dof, p);
}

}  // namespace wpsn
