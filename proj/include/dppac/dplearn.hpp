#pragma once
// Differentially private learners and their supporting mechanisms: Laplace
// noise, the exponential mechanism, the line learner over Z_p^2 (basic /
// overall / confidence-boosted), representation- and cover-driven learners,
// the label-private learner, closed-form stability probabilities for the
// random-sample-count trick, and a PAC evaluation harness.
//
// Every randomized routine draws from an explicit Rng stream, so a (seed,
// call-sequence) pair reproduces bit-identically.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dppac/bitrow.hpp"
#include "dppac/concepts.hpp"
#include "dppac/errors.hpp"
#include "dppac/infomath.hpp"
#include "dppac/rat.hpp"
#include "dppac/repdim.hpp"
#include "dppac/rng.hpp"

#include <json.hpp>

namespace dppac {

// ---------------------------------------------------------------------------
// Hypotheses

enum class HypKind : std::uint8_t { zero = 0, point = 1, line = 2, table = 3 };

// A hypothesis is one of: the constant-0 function, a single-point indicator
// on Z_p^2, a line y = a*x + b over Z_p, or an explicit truth table. Domain
// points of Z_p^2 are indexed as x*p + y, matching the line concept class.
struct Hypothesis {
    HypKind kind = HypKind::zero;
    std::uint32_t p = 0;  // modulus, point/line kinds only
    std::uint32_t a = 0;  // point: x coordinate; line: slope
    std::uint32_t b = 0;  // point: y coordinate; line: intercept
    BitRow table;         // table kind only
    // Diagnostic only (set when the basic learner saw inconsistent positive
    // labels); ignored by ordering, equality, and serialization identity.
    bool non_realizable = false;

    static Hypothesis zero_fn();
    static Hypothesis point_fn(std::uint32_t p, std::uint32_t x, std::uint32_t y);
    static Hypothesis line_fn(std::uint32_t p, std::uint32_t a, std::uint32_t b);
    static Hypothesis table_fn(BitRow bits);

    bool eval(std::size_t index) const;  // index = x*p + y for point/line kinds
    std::size_t domain_size() const;     // p*p for point/line, nbits for table, 0 for zero

    bool operator==(const Hypothesis& o) const;
    bool operator!=(const Hypothesis& o) const { return !(*this == o); }
};

// Total order: zero < point (lex on (x,y)) < line (lex on (a,b)) < table
// (lex on the bit string). Used for frequency tie-breaks.
bool hyp_less(const Hypothesis& lhs, const Hypothesis& rhs);

// Truth table of h over a concept-class domain of the given size.
BitRow hypothesis_row(const Hypothesis& h, std::size_t domain_size);

// ---------------------------------------------------------------------------
// Samples and oracles

struct LabeledSample {
    std::size_t index = 0;  // domain point; equals x*p + y over Z_p^2
    bool label = false;

    static LabeledSample from_xy(std::uint32_t p, std::uint32_t x, std::uint32_t y, bool label);
    std::uint32_t x(std::uint32_t p) const { return std::uint32_t(index / p); }
    std::uint32_t y(std::uint32_t p) const { return std::uint32_t(index % p); }
};

// One i.i.d. labeled draw per call, consuming entropy only from the passed
// stream. Learners never see the distribution behind an oracle.
using SampleOracle = std::function<LabeledSample(Rng&)>;

// x ~ d, label = f(x).
SampleOracle make_realizable_oracle(const FiniteDistribution& d, BitRow f);
// (x, label) ~ joint, for agnostic label distributions; requires ny == 2.
SampleOracle make_agnostic_oracle(const JointDistribution& joint);

// ---------------------------------------------------------------------------
// Private mechanisms

// One Laplace(scale) draw by inverse CDF: u ~ Uniform(-1/2, 1/2), result
// -scale * sgn(u) * ln(1 - 2|u|). Throws std::invalid_argument on scale <= 0.
double laplace_sample(double scale, Rng& rng);

// Pr[Laplace(scale) > x], the exact upper tail.
double laplace_tail(double scale, double x);

struct EmChoice {
    std::size_t index = 0;       // chosen element
    std::vector<double> probs;   // exact selection distribution
};

// Exponential mechanism over integer qualities (sensitivity 1): selection
// weight proportional to exp(alpha * q / 2), computed max-shifted. Throws
// std::invalid_argument on an empty quality list.
EmChoice exponential_mechanism(const std::vector<std::int64_t>& qualities, double alpha, Rng& rng);

// ---------------------------------------------------------------------------
// Representation- and cover-driven learners

// Draw one hypothesis set H from the representation, then run the
// exponential mechanism over H with quality = matches on n oracle samples.
// Arbitrary (agnostic) oracles are fine: only match counts are used.
Hypothesis prdim_learner(const ProbRepresentation& rep, const SampleOracle& oracle,
                         std::size_t n, double alpha, Rng& rng);

// Default exponential-mechanism sample count ceil((16/alpha)(ln|H| + ln 8)),
// sized so the EM tail |H| e^{-alpha t/2} at quality gap n/8 is below 1/8.
std::size_t dist_specific_default_n(std::size_t h_size, double alpha);

// Build the 1/8-cover of c under the known distribution, then select from it
// with the exponential mechanism on n labeled samples (n = 0 means an empty
// sample set, i.e. a uniform EM choice).
Hypothesis dist_specific_learner(const ConceptClass& c, const FiniteDistribution& d_known,
                                 const SampleOracle& oracle, std::size_t n, double alpha,
                                 Rng& rng);

// Number of unlabeled phase-1 draws the label-private learner uses:
// 64 * (VC(c xor c) + 1), the +-1/8 uniform-convergence scale for empirical
// disagreement estimates.
std::size_t label_private_phase1_count(const ConceptClass& c);

// Label-private learner: phase 1 draws unlabeled points (labels untouched)
// to form the empirical distribution, phase 2 takes a proper 1/8-cover of c
// under it, phase 3 selects from the cover with the exponential mechanism on
// fresh labeled samples. The output is bit-independent of phase-1 labels.
Hypothesis label_private_learner(const ConceptClass& c, const SampleOracle& oracle,
                                 double alpha, Rng& rng);

// ---------------------------------------------------------------------------
// The line learner over Z_p^2

struct LineLearnerConfig {
    std::uint32_t p = 5;  // prime modulus of the target class
    double eps = 0.25;    // accuracy
    double delta = 0.25;  // accuracy confidence
    double alpha = 0.5;   // privacy
    double beta = 0.05;   // privacy confidence
    // Replaces the 6/delta sampling-range width; needed because the paper
    // constants are computationally infeasible at small delta.
    std::optional<double> range_width_override;
    // Replaces the subsample-count formula.
    std::optional<double> ell_override;

    // Well-definedness: p >= 2, eps and delta in (0, 1), alpha > 0, beta in
    // (0, 1/2). The analyzed regime is (0, 1/2) for all four parameters;
    // settings outside it run fine and are flagged, not rejected.
    void validate() const;
    // {"range-width-override", "ell-override", "non-paper-constants"}; the
    // last also fires when a parameter leaves the analyzed (0, 1/2) regime.
    std::vector<std::string> deviation_flags() const;
};

// Deterministic on the sample sequence. Two distinct positive points define
// the output line (first such pair in sample order); exactly one distinct
// positive point gives its point function; no positives give the constant 0.
// Inconsistent positives (off-line third positive, or two positives sharing
// x) set non_realizable, keeping the first-two-points line when one exists.
Hypothesis line_basic_learner(const std::vector<LabeledSample>& samples, std::uint32_t p);

struct FreqReport {
    Hypothesis hbar;          // most frequent hypothesis, ties to the lex-least
    std::size_t changes = 0;  // least # of list entries whose change flips the winner
};

// Frequency winner plus its exact instability count, via the vote-transfer
// closed form c = min over challengers g of ceil((count(hbar) - count(g) +
// [g > hbar]) / 2), including a never-listed challenger.
FreqReport freq_and_instability(const std::vector<Hypothesis>& hs);

struct KRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;  // inclusive
};

// Integer exponent range {ceil(L), ..., ceil(L) + ceil(R)} with
// L = log2(ln(3/2)/eps) and R = 6/delta (or its override).
KRange overall_k_range(const LineLearnerConfig& cfg);

// ceil(max((12/alpha) ln(2/(beta delta)) + 13, 72 ln(4/delta))), or the override.
std::size_t overall_ell(const LineLearnerConfig& cfg);

struct OverallResult {
    Hypothesis h;
    std::int64_t k = 0;         // drawn exponent
    std::uint64_t t = 0;        // subsample size 2^k
    std::size_t ell = 0;        // subsample count
    std::size_t n_samples = 0;  // t * ell
    std::size_t changes = 0;    // instability of the frequency winner
    bool released = false;      // noisy threshold passed; otherwise h is zero
};

// Propose-test-release line learner: random subsample size t = 2^k, basic
// learner per subsample, release the frequency winner iff
// changes + Laplace(1/alpha) > (1/alpha) ln(1/(2 beta)) + 1.
OverallResult line_overall_learner(const LineLearnerConfig& cfg, const SampleOracle& oracle,
                                   Rng& rng);

// k = ceil(ln(2/delta) / ln(4/3)) independent overall runs.
std::size_t boosted_run_count(double delta);
// m = ceil((16/(eps alpha)) ln(4k/delta)) fresh selection samples.
std::size_t boosted_em_samples(double eps, double alpha, double delta, std::size_t k);

struct BoostedResult {
    Hypothesis h;
    std::vector<Hypothesis> candidates;  // one per overall run
    std::size_t em_samples = 0;
};

// Confidence boosting: run the overall learner k times at (eps/4, 1/4)
// accuracy on disjoint samples, then pick among the k outputs with the
// exponential mechanism on m fresh samples.
BoostedResult line_boosted_learner(const LineLearnerConfig& cfg, const SampleOracle& oracle,
                                   Rng& rng);

// ---------------------------------------------------------------------------
// Stability closed forms

struct StabilityReport {
    double none = 0.0;  // all t samples labeled 0
    double one = 0.0;   // positives exist but form a single repeated point
    double two = 0.0;   // two distinct positive points seen
    // Lower bounds evaluated at q = max atom:
    double bound_none = 0.0;       // 1 - r t
    double bound_one_poly = 0.0;   // (1-r+q)^t - (1-r)^t
    double bound_one_exp = 0.0;    // 1 - (r-q) t - e^{-rt}
    double bound_two_split = 0.0;  // best (1-(1-r)^{t1})(1-(1-r+q)^{t2}), t1+t2 = t
    double bound_two_exp = 0.0;    // (1-e^{-rt/2})(1-e^{-(r-q)t/2})
    bool bounds_ok = false;        // none/one/two dominate their bounds
};

// Exact event probabilities for t i.i.d. draws when the positive region has
// the given atom masses (summing to r): none = (1-r)^t, one = sum over atoms
// of ((1-r+q_i)^t - (1-r)^t), two = remainder. bounds_ok checks the
// closed-form lower bounds; the two-sided bound is checked in its integer
// split form, which is what the half-split argument yields for odd t.
StabilityReport stability_probs(double r, const std::vector<double>& q_atoms, std::uint64_t t);

struct StabilityInstance {
    double r = 0.0;              // total positive mass of f under d
    std::vector<double> atoms;   // positive-point masses, zeros dropped
};

// r and atom masses of concept row f under d.
StabilityInstance stability_instance(const BitRow& f, const FiniteDistribution& d);

// ---------------------------------------------------------------------------
// PAC evaluation harness

using Learner = std::function<Hypothesis(const SampleOracle&, Rng&)>;

struct PacReport {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    double ci_low = 0.0;   // 99% Clopper-Pearson
    double ci_high = 1.0;
};

// Per trial (independent derived stream): sample labeled data from (d, f),
// run the learner, succeed iff the exact error of its output under d is at
// most eps.
PacReport pac_evaluate(const Learner& learner, const ConceptClass& c, std::size_t f_index,
                       const FiniteDistribution& d, std::size_t trials, double eps, Rng& rng);

// Agnostic variant: (x, label) ~ joint; succeed iff the exact error of the
// output is at most min over concepts of their error, plus eps.
PacReport pac_evaluate_agnostic(const Learner& learner, const ConceptClass& c,
                                const JointDistribution& joint, std::size_t trials, double eps,
                                Rng& rng);

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json hypothesis_to_json(const Hypothesis& h);
Hypothesis hypothesis_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json line_config_to_json(const LineLearnerConfig& cfg);
LineLearnerConfig line_config_from_json(const nlohmann::ordered_json& j);

}  // namespace dppac
