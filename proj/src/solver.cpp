#include "wpsn/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wpsn/rng.hpp"

namespace wpsn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// eta^{-1}(e_i w + c_i) for every node; reachable = false when some demand
// sits at or above the harvest ceiling.
struct Demands {
    bool reachable = true;
    std::vector<double> inv;
};

Demands demands_for(const ProblemInstance& inst, double w) {
    Demands d;
    d.inv.reserve(inst.nodes.size());
    const double sup = inst.eh.sup_harvest();
    for (const auto& node : inst.nodes) {
        const double y = node.e_per_bit * w + node.c_static;
        if (y >= sup) {
            d.reachable = false;
            return d;
        }
        d.inv.push_back(y > 0.0 ? inst.eh.inverse(y) : 0.0);
    }
    return d;
}

// E_s(P; w) = t^p P + sum_i inv_i / g_i(P); +inf where some needed gain is 0.
double energy_at(const ProblemInstance& inst, const std::vector<double>& inv, double p) {
    double total = inst.pilot_time * p;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        if (inv[i] == 0.0) continue;
        const double g = inst.nodes[i].gain.value(p);
        if (!(g > 0.0)) return kInf;
        total += inv[i] / g;
    }
    return total;
}

// E_s'(P; w) = t^p - sum_i inv_i g_i'(P) / g_i(P)^2.
double slope_at(const ProblemInstance& inst, const std::vector<double>& inv, double p) {
    double s = inst.pilot_time;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        if (inv[i] == 0.0) continue;
        const double r = inst.nodes[i].gain.derivative_ratio(p);
        if (std::isinf(r)) return -kInf;
        s -= inv[i] * r;
    }
    return s;
}

std::vector<double> allocations_at(const ProblemInstance& inst, const std::vector<double>& inv,
                                   double p) {
    std::vector<double> e_t(inst.nodes.size(), 0.0);
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        if (inv[i] == 0.0) continue;
        e_t[i] = inv[i] / inst.nodes[i].gain.value(p);
    }
    return e_t;
}

AllocationSolution infeasible_solution(const ProblemInstance& inst, double upper_bound) {
    AllocationSolution sol;
    sol.w_min = 0.0;
    sol.p_pilot = 0.0;
    sol.e_t.assign(inst.nodes.size(), 0.0);
    sol.feasible = false;
    sol.upper_bound = upper_bound;
    return sol;
}

// Shared outer bisection: inner(w) provides the minimum-energy oracle.
template <typename InnerFn>
AllocationSolution bisect_rate(const ProblemInstance& inst, InnerFn&& inner) {
    const double budget = inst.budget_e;

    // Infeasibility gate: even the most optimistic linearized harvest cannot
    // cover the static consumptions.
    const double p_top = budget / inst.pilot_time;
    double gate = 0.0;
    for (const auto& node : inst.nodes) {
        gate += node.c_static / node.gain.value(p_top);
    }
    if (gate > inst.eh.eta_max() * budget) {
        return infeasible_solution(inst, 0.0);
    }

    double w_hi = upper_bound_rate(inst);
    const double w_u0 = w_hi;

    const InnerSolution at_zero = inner(0.0);
    if (!at_zero.feasible || at_zero.e_s_star > budget) {
        return infeasible_solution(inst, w_u0);
    }

    AllocationSolution sol;
    sol.upper_bound = w_u0;
    sol.feasible = true;

    double w_lo = 0.0;
    InnerSolution last_lo = at_zero;
    while (w_hi - w_lo >= inst.epsilon) {
        const double w_mid = 0.5 * (w_hi + w_lo);
        const InnerSolution is = inner(w_mid);
        const double es = is.feasible ? is.e_s_star : kInf;
        sol.trace.iterations.push_back({w_lo, w_hi, w_mid, es, is.p_pilot});
        sol.trace.inner_iteration_counts.push_back(is.iterations);
        if (es - budget > 0.0) {
            w_hi = w_mid;
        } else {
            w_lo = w_mid;
            last_lo = is;
        }
    }

    sol.w_min = w_lo;
    sol.p_pilot = last_lo.p_pilot;
    const Demands d = demands_for(inst, w_lo);
    sol.e_t = allocations_at(inst, d.inv, last_lo.p_pilot);
    return sol;
}

}  // namespace

void ProblemInstance::validate() const {
    if (nodes.empty()) throw std::invalid_argument("ProblemInstance: at least one node");
    if (!(budget_e > 0.0)) throw std::invalid_argument("ProblemInstance: budget_e must be positive");
    if (!(pilot_time > 0.0) || !(pilot_time < 1.0)) {
        throw std::invalid_argument("ProblemInstance: pilot_time must be in (0, 1)");
    }
    if (!(epsilon > 0.0)) throw std::invalid_argument("ProblemInstance: epsilon must be positive");
    if (!(inner_tol > 0.0)) throw std::invalid_argument("ProblemInstance: inner_tol must be positive");
    for (const auto& node : nodes) {
        if (!(node.e_per_bit > 0.0)) throw std::invalid_argument("NodeProfile: e_per_bit > 0");
        if (!(node.c_static >= 0.0)) throw std::invalid_argument("NodeProfile: c_static >= 0");
    }
}

double AllocationSolution::sum_e_t() const {
    double s = 0.0;
    for (double e : e_t) s += e;
    return s;
}

double required_transmit_energy(const NodeProfile& node, const EhModel& eh, double w,
                                double p_pilot) {
    if (!(w >= 0.0) || !(p_pilot >= 0.0)) {
        throw std::domain_error("required_transmit_energy: w and p_pilot must be non-negative");
    }
    const double demand = node.e_per_bit * w + node.c_static;
    if (demand == 0.0) return 0.0;
    const double received = eh.inverse(demand);  // throws saturation_error when unreachable
    const double g = node.gain.value(p_pilot);
    if (!(g > 0.0)) {
        throw std::domain_error("required_transmit_energy: zero gain at this pilot power");
    }
    return received / g;
}

InnerSolution subproblem_min_energy(const ProblemInstance& inst, double w) {
    inst.validate();
    if (!(w >= 0.0)) throw std::domain_error("subproblem_min_energy: w must be non-negative");

    InnerSolution out;
    const Demands d = demands_for(inst, w);
    if (!d.reachable) return out;  // demand beyond the harvest ceiling

    const double p_hi = inst.budget_e / inst.pilot_time;

    if (slope_at(inst, d.inv, 0.0) >= 0.0) {
        out.feasible = true;
        out.p_pilot = 0.0;
        out.e_s_star = energy_at(inst, d.inv, 0.0);
        return out;
    }
    if (slope_at(inst, d.inv, p_hi) <= 0.0) {
        return out;  // rate unreachable within the budget
    }

    double lo = 0.0;
    double hi = p_hi;
    int iters = 0;
    while (hi - lo > inst.inner_tol * p_hi) {
        const double mid = 0.5 * (lo + hi);
        if (slope_at(inst, d.inv, mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        ++iters;
    }
    out.feasible = true;
    out.p_pilot = 0.5 * (lo + hi);
    out.e_s_star = energy_at(inst, d.inv, out.p_pilot);
    out.iterations = iters;
    return out;
}

double upper_bound_rate(const ProblemInstance& inst) {
    inst.validate();
    const double p_top = inst.budget_e / inst.pilot_time;
    double num = inst.eh.eta_max() * inst.budget_e;
    double den = 0.0;
    for (const auto& node : inst.nodes) {
        const double g = node.gain.value(p_top);
        num -= node.c_static / g;
        den += node.e_per_bit / g;
    }
    if (num <= 0.0) return 0.0;
    double w = num / den;

    const double sup = inst.eh.sup_harvest();
    if (std::isfinite(sup)) {
        double cap = kInf;
        for (const auto& node : inst.nodes) {
            cap = std::min(cap, (sup - node.c_static) / node.e_per_bit);
        }
        if (cap <= 0.0) return 0.0;
        w = std::min(w, cap * (1.0 - 1e-12));
    }
    return w;
}

AllocationSolution solve(const ProblemInstance& inst) {
    inst.validate();
    return bisect_rate(inst, [&](double w) { return subproblem_min_energy(inst, w); });
}

AllocationSolution solve_closed_form_identical(const ProblemInstance& inst, double sigma_h2,
                                               int n_antennas, double noise_power) {
    inst.validate();
    for (const auto& node : inst.nodes) {
        if (node.gain.backend() != PebGainModel::Backend::RationalApprox ||
            std::fabs(node.gain.ceiling() - sigma_h2) > 1e-9 * sigma_h2) {
            throw std::invalid_argument(
                "solve_closed_form_identical: nodes must share a rational gain with sigma_h2");
        }
    }
    const double nt = static_cast<double>(n_antennas);
    const double tp = inst.pilot_time;

    auto inner = [&](double w) {
        InnerSolution out;
        const Demands d = demands_for(inst, w);
        if (!d.reachable) return out;
        double sum_inv = 0.0;
        for (double v : d.inv) sum_inv += v;
        const double root = std::sqrt(sum_inv * nt * noise_power * (nt - 1.0) /
                                      (tp * sigma_h2 * sigma_h2));
        const double p = std::max(0.0, root - nt * noise_power / sigma_h2);
        out.feasible = true;
        out.p_pilot = p;
        out.e_s_star = energy_at(inst, d.inv, p);
        return out;
    };
    return bisect_rate(inst, inner);
}

AllocationSolution solve_asymptotic(const ProblemInstance& inst,
                                    const std::vector<double>& sigma_elem2, int n_antennas,
                                    double alpha) {
    inst.validate();
    if (sigma_elem2.size() != inst.nodes.size()) {
        throw std::invalid_argument("solve_asymptotic: one sigma_elem2 per node");
    }
    if (inst.eh.kind() != EhKind::Linear) {
        throw std::invalid_argument("solve_asymptotic: requires the linear harvesting model");
    }
    for (const auto& node : inst.nodes) {
        if (node.gain.backend() != PebGainModel::Backend::Asymptotic) {
            throw std::invalid_argument("solve_asymptotic: nodes need the asymptotic gain backend");
        }
    }
    const double nt = static_cast<double>(n_antennas);
    const double tp = inst.pilot_time;
    const double budget = inst.budget_e;

    double a_sum = 0.0, b_sum = 0.0, c_sum = 0.0, d_sum = 0.0;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        const double s2 = sigma_elem2[i];
        const double s4 = s2 * s2;
        const double e_i = inst.nodes[i].e_per_bit;
        const double c_i = inst.nodes[i].c_static;
        const double sn2 = inst.nodes[i].gain.noise_power();
        a_sum += sn2 * e_i * tp / (alpha * s4);
        b_sum += sn2 * c_i * tp / (alpha * s4);
        c_sum += e_i / (alpha * nt * s2);
        d_sum += c_i / (alpha * nt * s2);
    }

    AllocationSolution sol;
    sol.upper_bound = upper_bound_rate(inst);
    sol.e_t.assign(inst.nodes.size(), 0.0);

    // E_s*(w) = 2 sqrt(A w + B) + C w + D must reach the budget at some w >= 0.
    if (2.0 * std::sqrt(b_sum) + d_sum > budget) {
        sol.feasible = false;
        return sol;
    }

    // Discriminant in its expanded form 4(A^2 + AC(E-D) + BC^2); after the
    // feasibility gate E >= D, so a negative value signals corrupted inputs.
    const double ed = budget - d_sum;
    const double quarter_disc = a_sum * a_sum + a_sum * c_sum * ed + b_sum * c_sum * c_sum;
    if (!(quarter_disc >= 0.0) || !std::isfinite(quarter_disc)) {
        throw numeric_error("solve_asymptotic: negative or non-finite discriminant");
    }
    const double x = ed * c_sum + 2.0 * a_sum;
    const double sqrt_disc = 2.0 * std::sqrt(quarter_disc);
    // Rationalized smaller quadratic root; avoids cancellation as w -> 0.
    const double w_star = (ed * ed - 4.0 * b_sum) / (x + sqrt_disc);

    const double plug_back = 2.0 * std::sqrt(a_sum * w_star + b_sum) + c_sum * w_star + d_sum;
    if (std::fabs(plug_back - budget) > 1e-8 * budget) {
        throw numeric_error("solve_asymptotic: plug-back identity failed");
    }

    double p_sq = 0.0;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        const double s4 = sigma_elem2[i] * sigma_elem2[i];
        const double demand = inst.nodes[i].e_per_bit * w_star + inst.nodes[i].c_static;
        p_sq += inst.nodes[i].gain.noise_power() * demand / (alpha * s4 * tp);
    }
    const double p_star = std::sqrt(p_sq);

    sol.w_min = w_star;
    sol.p_pilot = p_star;
    sol.feasible = true;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        const double demand = inst.nodes[i].e_per_bit * w_star + inst.nodes[i].c_static;
        const double g = g_asymptotic(sigma_elem2[i], n_antennas,
                                      inst.nodes[i].gain.noise_power(), p_star);
        sol.e_t[i] = demand / (alpha * g);
    }
    return sol;
}

namespace {

// Fixed pilot power: bisect the largest rate whose transmit energies fit in
// what the pilots leave over.
AllocationSolution solve_pinned_pilot(const ProblemInstance& inst, double p_pilot) {
    const double budget = inst.budget_e;
    const double pilot_cost = inst.pilot_time * p_pilot;
    const double remaining = budget - pilot_cost;

    std::vector<double> g(inst.nodes.size());
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        g[i] = inst.nodes[i].gain.value(p_pilot);
    }

    AllocationSolution sol;
    sol.e_t.assign(inst.nodes.size(), 0.0);
    sol.p_pilot = p_pilot;
    if (remaining <= 0.0) return sol;

    auto sum_f = [&](const Demands& d) {
        double s = 0.0;
        for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
            if (d.inv[i] == 0.0) continue;
            if (!(g[i] > 0.0)) return kInf;
            s += d.inv[i] / g[i];
        }
        return s;
    };

    // Rate cap from the linear-bound relaxation at this pilot power.
    double num = inst.eh.eta_max() * remaining;
    double den = 0.0;
    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        if (!(g[i] > 0.0)) return sol;
        num -= inst.nodes[i].c_static / g[i];
        den += inst.nodes[i].e_per_bit / g[i];
    }
    double w_hi = num > 0.0 ? num / den : 0.0;
    const double sup = inst.eh.sup_harvest();
    if (std::isfinite(sup)) {
        double cap = kInf;
        for (const auto& node : inst.nodes) {
            cap = std::min(cap, (sup - node.c_static) / node.e_per_bit);
        }
        if (cap <= 0.0) return sol;
        w_hi = std::min(w_hi, cap * (1.0 - 1e-12));
    }
    sol.upper_bound = w_hi;

    const Demands at_zero = demands_for(inst, 0.0);
    if (!at_zero.reachable || sum_f(at_zero) > remaining) {
        return sol;  // not even a zero rate is sustainable here
    }
    sol.feasible = true;
    if (w_hi <= 0.0) {
        sol.e_t = allocations_at(inst, at_zero.inv, p_pilot);
        return sol;
    }

    double w_lo = 0.0;
    while (w_hi - w_lo >= inst.epsilon) {
        const double w_mid = 0.5 * (w_hi + w_lo);
        const Demands d = demands_for(inst, w_mid);
        const double fsum = d.reachable ? sum_f(d) : kInf;
        sol.trace.iterations.push_back({w_lo, w_hi, w_mid, pilot_cost + fsum, p_pilot});
        if (fsum > remaining) {
            w_hi = w_mid;
        } else {
            w_lo = w_mid;
        }
    }
    sol.w_min = w_lo;
    const Demands d = demands_for(inst, w_lo);
    sol.e_t = allocations_at(inst, d.inv, p_pilot);
    return sol;
}

}  // namespace

AllocationSolution solve_fixed(const ProblemInstance& inst, double pilot_fraction) {
    inst.validate();
    if (!(pilot_fraction >= 0.0) || !(pilot_fraction < 1.0)) {
        throw std::invalid_argument("solve_fixed: pilot_fraction must be in [0, 1)");
    }
    return solve_pinned_pilot(inst, pilot_fraction * inst.budget_e / inst.pilot_time);
}

AllocationSolution solve_random(const ProblemInstance& inst, std::uint64_t seed) {
    inst.validate();
    RandomStream stream(seed, 0);
    const double p = stream.uniform01() * inst.budget_e / inst.pilot_time;
    return solve_pinned_pilot(inst, p);
}

AllocationSolution solve_broadcast(const ProblemInstance& inst, double broadcast_power) {
    inst.validate();
    if (!(broadcast_power > 0.0)) {
        throw std::invalid_argument("solve_broadcast: broadcast_power must be positive");
    }
    AllocationSolution sol;
    sol.p_pilot = 0.0;
    sol.e_t.assign(inst.nodes.size(),
                   broadcast_power / static_cast<double>(inst.nodes.size()));

    // Incoherent exposure: all nodes harvest at once for the whole block, each
    // through its per-element average gain.
    double w = kInf;
    for (const auto& node : inst.nodes) {
        const double g_bc = node.gain.ceiling() / static_cast<double>(node.gain.n_antennas());
        const double received = broadcast_power * g_bc;
        const double harvested = inst.eh.eval(received);
        w = std::min(w, (harvested - node.c_static) / node.e_per_bit);
    }
    sol.feasible = w >= 0.0;
    sol.w_min = std::max(0.0, w);
    if (!sol.feasible) {
        sol.e_t.assign(inst.nodes.size(), 0.0);
    }
    return sol;
}

bool check_certificate(const ProblemInstance& inst, const AllocationSolution& sol) {
    if (!sol.feasible) return sol.w_min == 0.0;
    if (sol.e_t.size() != inst.nodes.size()) return false;
    if (!(sol.w_min >= 0.0) || !(sol.p_pilot >= 0.0)) return false;

    double spent = inst.pilot_time * sol.p_pilot;
    for (double e : sol.e_t) {
        if (!(e >= 0.0)) return false;
        spent += e;
    }
    if (spent > inst.budget_e * (1.0 + 1e-9)) return false;

    for (std::size_t i = 0; i < inst.nodes.size(); ++i) {
        const double need = inst.nodes[i].e_per_bit * sol.w_min + inst.nodes[i].c_static;
        const double harvested =
            inst.eh.eval(sol.e_t[i] * inst.nodes[i].gain.value(sol.p_pilot));
        if (need > harvested * (1.0 + 1e-6)) return false;
    }
    return true;
}

}  // namespace wpsn
