#include "wpsn/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wpsn {

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "parameter_value,method,mean_w,stderr_w,trials\n";
    for (const auto& r : rows) {
        out << format_g17(r.parameter_value) << "," << r.method << "," << format_g17(r.mean_w)
            << "," << format_g17(r.stderr_w) << "," << r.trials << "\n";
    }
    return out.str();
}

std::string convergence_csv(const ConvergenceTrace& trace) {
    std::ostringstream out;
    out << "iter,w_lo,w_hi,w_mid,e_s_star,p_pilot\n";
    for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
        const IterationRecord& it = trace.iterations[i];
        out << (i + 1) << "," << format_g17(it.w_lo) << "," << format_g17(it.w_hi) << ","
            << format_g17(it.w_mid) << "," << format_g17(it.e_s_star) << ","
            << format_g17(it.p_pilot) << "\n";
    }
    return out.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "trial,w_nl,w_l,rel_err\n";
    for (const auto& r : rows) {
        out << r.trial << "," << format_g17(r.w_nonlinear) << "," << format_g17(r.w_linear)
            << "," << format_g17(r.rel_err) << "\n";
    }
    return out.str();
}

std::string gain_csv(const std::vector<GainCurvePoint>& curve) {
    std::ostringstream out;
    out << "p_pilot_watts,gain,stderr\n";
    for (const auto& p : curve) {
        out << format_g17(p.p_pilot) << "," << format_g17(p.gain) << ","
            << format_g17(p.std_error) << "\n";
    }
    return out.str();
}

std::string solution_csv(const AllocationSolution& sol) {
    std::ostringstream out;
    out << "w_min_bits_s,p_pilot_w,sum_et_j";
    for (std::size_t i = 0; i < sol.e_t.size(); ++i) out << ",et_" << i;
    out << ",outer_iters,feasible\n";
    out << format_g17(sol.w_min) << "," << format_g17(sol.p_pilot) << ","
        << format_g17(sol.sum_e_t());
    for (const double e : sol.e_t) out << "," << format_g17(e);
    out << "," << sol.outer_iterations() << "," << (sol.feasible ? 1 : 0) << "\n";
    return out.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace wpsn
