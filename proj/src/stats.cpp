#include "dppac/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace dppac {

namespace {

// ln Gamma via Lanczos
double lgamma_pos(double x) { return std::lgamma(x); }

// continued fraction for the incomplete beta (Lentz's method)
double betacf(double a, double b, double x) {
    const int kMaxIter = 300;
    const double kEps = 3e-14, kFpMin = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0, d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kFpMin) d = kFpMin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kFpMin) d = kFpMin;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kFpMin) c = kFpMin;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw std::runtime_error("incomplete beta: no convergence");
}

// Inverse of I_x(a,b) in x by bisection; monotone increasing in x.
double beta_inv(double p, double a, double b) {
    if (p <= 0) return 0.0;
    if (p >= 1) return 1.0;
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (reg_inc_beta(a, b, mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double reg_inc_beta(double a, double b, double x) {
    if (x < 0.0 || x > 1.0) throw std::invalid_argument("reg_inc_beta: x out of range");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    double front = std::exp(lgamma_pos(a + b) - lgamma_pos(a) - lgamma_pos(b) +
                            a * std::log(x) + b * std::log(1.0 - x));
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - std::exp(lgamma_pos(a + b) - lgamma_pos(a) - lgamma_pos(b) +
                          b * std::log(1.0 - x) + a * std::log(x)) *
                     betacf(b, a, 1.0 - x) / b;
}

std::pair<double, double> clopper_pearson(std::uint64_t k, std::uint64_t n, double confidence) {
    if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson: bad counts");
    double alpha = 1.0 - confidence;
    double lo = (k == 0) ? 0.0 : beta_inv(alpha / 2.0, double(k), double(n - k + 1));
    double hi = (k == n) ? 1.0 : beta_inv(1.0 - alpha / 2.0, double(k + 1), double(n - k));
    return {lo, hi};
}

}  // namespace dppac
