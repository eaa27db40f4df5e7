#pragma once
// One-way two-party protocols over finite evaluation problems: exact and
// Monte-Carlo error evaluation, exact distributional optima by subset DP,
// majority amplification, public-to-private coin sparsification, and the
// inner-product equality protocol.

#include <cstdint>
#include <vector>

#include "dppac/concepts.hpp"
#include "dppac/rng.hpp"

namespace dppac {

struct OneWayProtocol {
    enum class Flavor { deterministic, private_coin, public_coin };
    Flavor flavor = Flavor::deterministic;
    std::size_t n_alice_inputs = 0, n_bob_inputs = 0;
    std::size_t n_messages = 1;
    std::size_t cost_bits = 0;  // message length in bits
    // public_coin: one shared space, alice_coins == bob_coins, same index.
    std::size_t alice_coins = 1, bob_coins = 1;
    std::vector<Rat> coin_weights_a, coin_weights_b;  // empty = uniform
    std::vector<std::uint32_t> alice;  // [f * alice_coins + ra] -> message
    std::vector<std::uint8_t> bob;     // [(msg * n_bob_inputs + x) * bob_coins + rb] -> bit

    void validate() const;
    std::uint32_t alice_at(std::size_t f, std::size_t ra) const { return alice[f * alice_coins + ra]; }
    std::uint8_t bob_at(std::size_t msg, std::size_t x, std::size_t rb) const {
        return bob[(msg * n_bob_inputs + x) * bob_coins + rb];
    }
};

// Two-party evaluation problem as an explicit (possibly promise) table;
// entry -1 marks off-promise pairs excluded from error accounting.
struct EvalProblem {
    std::size_t n_alice = 0, n_bob = 0;
    std::vector<std::int8_t> table;  // row-major, n_alice * n_bob

    static EvalProblem from_class(const ConceptClass& c);
    // Alice holds x in {0,1}^d (row = x as d bits, first bit most
    // significant); Bob holds (i, prefix) at column (2^(i-1) - 1) + prefix;
    // the answer is bit i of x when prefix matches, off-promise otherwise.
    static EvalProblem augindex(std::size_t d);

    std::int8_t at(std::size_t f, std::size_t x) const { return table[f * n_bob + x]; }
};

// Uniform distribution over the on-promise cells of the (f,x) grid.
FiniteDistribution uniform_promise(const EvalProblem& g);

struct ErrorReport {
    bool exact = true;
    Rat value;  // exact error
    double estimate = 0.0, ci_low = 0.0, ci_high = 1.0;  // Monte-Carlo (99% CP)
    std::uint64_t trials = 0;
};

// Exact per-pair error probability over the protocol's coins.
Rat pair_error(const OneWayProtocol& p, const EvalProblem& g, std::size_t f, std::size_t x);

ErrorReport protocol_error_worst(const OneWayProtocol& p, const EvalProblem& g);
ErrorReport protocol_error_dist(const OneWayProtocol& p, const EvalProblem& g,
                                const FiniteDistribution& mu);
ErrorReport protocol_error_worst_mc(const OneWayProtocol& p, const EvalProblem& g,
                                    std::uint64_t trials, std::uint64_t seed);
ErrorReport protocol_error_dist_mc(const OneWayProtocol& p, const EvalProblem& g,
                                   const FiniteDistribution& mu, std::uint64_t trials,
                                   std::uint64_t seed);

// Deterministic protocol sending the full row index.
OneWayProtocol index_protocol(const EvalProblem& g);

struct OptimalProtocol {
    OneWayProtocol protocol;
    Rat error;  // exactly optimal for the budget
};

// Best deterministic one-way protocol under mu using at most 2^budget_bits
// messages: partition of Alice rows minimizing the mass Bob's per-(block, x)
// weighted-majority answer gets wrong (ties answer 0).
OptimalProtocol optimal_distributional_protocol(const EvalProblem& g, const FiniteDistribution& mu,
                                                std::size_t budget_bits);

// Minimum budget whose optimal error is <= eps.
std::size_t dist_cc(const EvalProblem& g, const FiniteDistribution& mu, const Rat& eps);

// k-fold independent repetition, Bob takes the majority vote.
OneWayProtocol amplify(const OneWayProtocol& p, std::size_t k);

// Replace the public coin by m seeds sampled from it; Alice picks one
// privately and prepends its index to the message.
OneWayProtocol newman_sparsify(const OneWayProtocol& p, std::size_t m, std::uint64_t seed);
// Same with an explicit seed list (deduplication is the caller's choice).
OneWayProtocol newman_sparsify_explicit(const OneWayProtocol& p,
                                        const std::vector<std::size_t>& seeds);

// Public-coin protocol for evaluating point functions: k shared b-bit seeds,
// Alice sends the k inner products <z, r_j> mod 2.
OneWayProtocol equality_protocol(std::size_t b, std::size_t k);

nlohmann::ordered_json protocol_to_json(const OneWayProtocol& p);
OneWayProtocol protocol_from_json(const nlohmann::ordered_json& j);

}  // namespace dppac
