#pragma once
// Small numeric helpers shared by the protocol simulator and the auditor.

#include <cstdint>
#include <utility>

namespace dppac {

// Regularized incomplete beta I_x(a,b) via continued fraction.
double reg_inc_beta(double a, double b, double x);

// Two-sided Clopper-Pearson interval for k successes in n trials at the
// given confidence level (e.g. 0.99).
std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence);

}  // namespace dppac
