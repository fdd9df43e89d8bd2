#pragma once

#include <string>
#include <vector>

#include "wpsn/experiments.hpp"
#include "wpsn/gain.hpp"
#include "wpsn/solver.hpp"

namespace wpsn {

// 17-significant-digit scientific/shortest form; '.' decimal, no locale.
std::string format_g17(double x);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string convergence_csv(const ConvergenceTrace& trace);
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string gain_csv(const std::vector<GainCurvePoint>& curve);
std::string solution_csv(const AllocationSolution& sol);

void write_file(const std::string& path, const std::string& content);

}  // namespace wpsn
