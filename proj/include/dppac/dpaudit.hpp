// Differential-privacy auditing over finite mechanisms: exact ratio/slack
// analysis when the output distribution is available in closed form, and a
// Clopper-Pearson-adjusted Monte-Carlo check otherwise.
#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dppac/rng.hpp"

namespace dppac {

enum class AuditMode : std::uint8_t { exact, monte_carlo };
enum class AuditVerdict : std::uint8_t { pass, fail, inconclusive };

// A mechanism under audit. Inputs are abstract identifiers; outputs are
// binned into a shared finite alphabet of size n_outputs. Exact mode reads
// `distribution` (full output law per input); Monte-Carlo mode draws bins
// through `draw`.
struct AuditMechanism {
    std::size_t n_outputs = 0;
    std::function<std::vector<double>(std::size_t input)> distribution;
    std::function<std::size_t(std::size_t input, Rng&)> draw;
};

// Findings for one ordered neighbor pair (first -> second). The privacy
// check is directional: Pr_first[T] <= e^alpha Pr_second[T] + beta over all
// output sets T; supply both orientations to certify the symmetric
// guarantee. `max_ratio` is the largest single-output probability ratio
// (infinity when the second input never produces an output the first can);
// `slack` is the additive residual sum_o max(0, P[o] - e^alpha Q[o]), the
// greedy maximizer of Pr_first[T] - e^alpha Pr_second[T] over sets T.
struct PairFinding {
    std::size_t first = 0;
    std::size_t second = 0;
    double max_ratio = 0.0;
    double slack = 0.0;
    // Monte-Carlo only: the same residual evaluated at the CI corners most
    // and least favorable to the mechanism.
    double slack_low = 0.0;
    double slack_high = 0.0;
    bool pass = false;
    AuditVerdict verdict = AuditVerdict::inconclusive;
};

struct AuditReport {
    AuditMode mode = AuditMode::exact;
    double alpha = 0.0;
    double beta = 0.0;
    std::size_t trials = 0;  // per input per pair (Monte-Carlo mode)
    std::uint64_t seed = 0;
    std::vector<PairFinding> pairs;
    double max_ratio = 0.0;  // worst over pairs
    double slack = 0.0;      // worst over pairs
    bool pass = false;
    AuditVerdict verdict = AuditVerdict::inconclusive;
};

// Audits the mechanism on the given ordered neighbor pairs at budget
// (alpha, beta). Exact mode evaluates the closed-form distributions and
// returns a definite pass/fail verdict. Monte-Carlo mode draws `trials`
// samples per input per pair from per-pair derived seed streams (the result
// is independent of pair processing order), scores 99% Clopper-Pearson
// intervals per output bin, and returns:
//   fail          - the residual exceeds beta even at the CI corners most
//                   favorable to the mechanism;
//   inconclusive  - the point estimate violates the budget without CI
//                   certification, or some output's ratio interval hugs
//                   e^alpha too tightly (relative width <= 1e-3) to call;
//   pass          - no evidence of violation.
// A statistical pass is consistency, not proof.
AuditReport audit(const AuditMechanism& mech,
                  const std::vector<std::pair<std::size_t, std::size_t>>& neighbors, double alpha,
                  double beta, AuditMode mode, std::size_t trials = 0, std::uint64_t seed = 0);

// Closed-form two-branch output law {Pr[withhold], Pr[release]} of the noisy
// count-threshold release rule with instability count `changes` at privacy
// level (alpha, beta).
std::array<double, 2> release_branch_probs(std::size_t changes, double alpha, double beta);

// Mechanism whose input i runs softmax selection over quality_sets[i]
// (weights e^{alpha q / 2}); exposes both the exact law and a sampler.
AuditMechanism em_audit_mechanism(std::vector<std::vector<std::int64_t>> quality_sets,
                                  double alpha);

// Mechanism modelling the release step of the subsample-majority learner:
// input i has frequency winner `runs[i].first` (an identity in 1..n_winners;
// output bin 0 is the withheld constant-zero result) and instability count
// `runs[i].second`. Exposes the exact two-branch law mapped onto the shared
// output alphabet {0, 1, ..., n_winners}.
AuditMechanism release_audit_mechanism(std::vector<std::pair<std::size_t, std::size_t>> runs,
                                       std::size_t n_winners, double alpha, double beta);

nlohmann::ordered_json audit_report_to_json(const AuditReport& report);

}  // namespace dppac
