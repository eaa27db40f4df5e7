#pragma once
// Hypothesis-set representations of finite concept classes: distribution-free
// checkers via zero-sum-game LPs, exact fixed-distribution checkers,
// conversions between representations and one-way protocols, minimum covers,
// maximal packings, and the packing-duality accounting.

#include <cstdint>
#include <vector>

#include "dppac/commsim.hpp"
#include "dppac/concepts.hpp"

namespace dppac {

struct DetRepresentation {
    std::size_t domain_size = 0;
    std::vector<BitRow> hypotheses;  // arbitrary rows, not necessarily in the class

    void validate() const;
};

struct ProbRepresentation {
    std::vector<DetRepresentation> support;
    FiniteDistribution probs;  // over the support

    void validate() const;
};

struct GameSolution {
    double value = 0.0;
    std::vector<double> row_strategy;  // maximizer, over matrix rows
    std::vector<double> col_strategy;  // minimizer, over matrix columns
};

// Value and optimal mixed strategies of the finite zero-sum game where the
// row player maximizes m[r][c]; the returned pair is certified by weak
// duality to within 1e-7.
GameSolution solve_matrix_game(const std::vector<std::vector<double>>& m);

struct DistfreeDetReport {
    bool pass = false;
    std::size_t worst_f = 0;
    double worst_value = 0.0;
    std::vector<double> worst_dist;  // over domain points
};

// For each concept f, the value of the game "adversary picks a distribution
// over points, learner picks a hypothesis, payoff = disagreement mass";
// passes iff every value is at most eps (+1e-9).
DistfreeDetReport check_det_rep_distfree(const DetRepresentation& h, const ConceptClass& c,
                                         double eps);

// Exact: every concept has a hypothesis within eps under d.
bool check_det_rep_fixed_dist(const DetRepresentation& h, const ConceptClass& c,
                              const FiniteDistribution& d, const Rat& eps);
// Exact: for every concept, the support sets containing an eps-close
// hypothesis carry probability at least 1 - delta.
bool check_prob_rep_fixed_dist(const ProbRepresentation& r, const ConceptClass& c,
                               const FiniteDistribution& d, const Rat& eps, const Rat& delta);

struct DistfreeProbReport {
    bool pass = false;
    std::size_t worst_f = 0;
    std::vector<std::size_t> worst_subfamily;  // support indices
    double worst_value = 0.0;
    std::vector<double> worst_dist;
};

// For each concept f and each subfamily S of the support with probability
// mass exceeding delta, checks that no distribution keeps every hypothesis
// in S strictly beyond eps (open polytope emptiness via the game LP).
DistfreeProbReport check_prob_rep_distfree(const ProbRepresentation& r, const ConceptClass& c,
                                           double eps, double delta);

// Per public coin r, the set of Bob's message-indexed response functions;
// probabilities follow the coin distribution.
ProbRepresentation protocol_to_prob_rep(const OneWayProtocol& p);

// Public coins select a support set; Alice sends the lowest index of a
// hypothesis within eps of f under mu's conditional given f (index 0 when
// none qualifies); cost is the largest support-set index width.
OneWayProtocol prob_rep_to_protocol(const ProbRepresentation& r, const ConceptClass& c,
                                    const FiniteDistribution& mu, const Rat& eps);

// Alice privately samples a hypothesis from the per-concept optimal mixed
// strategy of the game LP; requires the distribution-free check to pass at
// eps. Worst-case error is verified exactly to be at most eps + 1e-6.
OneWayProtocol det_rep_to_protocol(const DetRepresentation& h, const ConceptClass& c, double eps);

// One hypothesis per message: Bob's coin-majority response row (ties 0).
DetRepresentation protocol_to_det_rep(const OneWayProtocol& p);

struct CoverResult {
    DetRepresentation cover;
    bool optimal = true;  // false when the greedy fallback ran

    double drdim() const;  // log2 of the cover size
};

// Minimum-cardinality set of rows within eps of every concept under d.
// Candidate pool: the class's own rows when proper, all 2^|X| rows when
// improper and |X| <= 4; exact branch-and-bound within caps, greedy
// fallback (flagged) otherwise.
CoverResult min_cover(const ConceptClass& c, const FiniteDistribution& d, const Rat& eps,
                      bool proper);

struct PackingReport {
    std::vector<std::size_t> packing;  // concept indices, greedy from index 0
    bool cover_check = false;          // the packing is itself an eps-cover
    std::size_t min_cover_size = 0;
    bool min_cover_optimal = true;
    bool rep_checked = false;     // a representation was supplied
    bool rep_applicable = false;  // it passes the fixed-dist check at (eps/2, delta)
    Rat expected_size;            // sum over support of probs(H) * |H|
    bool duality_holds = false;   // expected_size >= (1 - delta) * |packing|
};

// Greedy maximal packing with pairwise distance strictly above eps, verified
// to be an eps-cover, plus the counting bound any (eps/2, delta)
// representation must satisfy against the packing.
PackingReport max_packing_and_duality(const ConceptClass& c, const FiniteDistribution& d,
                                      const Rat& eps, const Rat& delta,
                                      const ProbRepresentation* rep = nullptr);

nlohmann::ordered_json det_rep_to_json(const DetRepresentation& h);
DetRepresentation det_rep_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json prob_rep_to_json(const ProbRepresentation& r);
ProbRepresentation prob_rep_from_json(const nlohmann::ordered_json& j);

}  // namespace dppac
