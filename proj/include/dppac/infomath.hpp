#pragma once
// Entropy, divergence, and distance toolbox over exact finite distributions:
// Shannon/Renyi-2/min entropies in bits, KL divergence (nats and bits) with
// the Pinsker check, statistical distance as an exact rational, the
// min-entropy conditioning tail bound, and the binary-entropy index bound.

#include <cstdint>
#include <vector>

#include "dppac/concepts.hpp"
#include "dppac/rat.hpp"

namespace dppac {

struct JointDistribution {
    std::size_t nx = 0, ny = 0;
    std::vector<Rat> weights;  // row-major, x * ny + y; sums to exactly 1

    const Rat& at(std::size_t x, std::size_t y) const { return weights[x * ny + y]; }
    void validate() const;
    FiniteDistribution marginal_x() const;
    FiniteDistribution marginal_y() const;
};

struct EntropyReport {
    double shannon = 0.0;      // bits
    double renyi2 = 0.0;       // collision entropy, bits
    double min_entropy = 0.0;  // bits
};

// All in bits with the 0 log 0 = 0 convention; the ordering
// log|X| >= H >= H2 >= Hmin is verified internally.
EntropyReport entropy_suite(const FiniteDistribution& d);

struct JointEntropyReport {
    EntropyReport flat;               // the joint as one flat distribution
    double cond_shannon = 0.0;        // H(x | y), bits
    double mutual_information = 0.0;  // I(x ; y), bits
};

JointEntropyReport entropy_suite(const JointDistribution& j);

struct DivergenceReport {
    bool finite = true;  // supp(p) within supp(q)
    double kl_nats = 0.0;
    double kl_bits = 0.0;
    Rat statistical_distance;  // half L1, exact
    bool pinsker_ok = true;    // sd <= sqrt(kl_nats / 2)
};

DivergenceReport divergence_and_distance(const FiniteDistribution& p, const FiniteDistribution& q);

struct TailReport {
    Rat probability;  // exact mass of y with Hmin(x|y) < Hmin(x) - s - t
    Rat threshold;    // 2^-t; probability < threshold is verified internally
};

// Requires |supp(y)| <= 2^s_bits.
TailReport min_entropy_conditioning_tail(const JointDistribution& j, std::size_t s_bits,
                                         std::size_t t);

// (1 - H(eps)) * d bits, eps in [0, 1/2].
double augindex_bound(std::size_t d, double eps);

}  // namespace dppac
