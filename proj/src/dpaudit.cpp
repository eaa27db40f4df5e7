#include "dppac/dpaudit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "dppac/dplearn.hpp"
#include "dppac/stats.hpp"

namespace dppac {

namespace {

constexpr double kSlackTol = 1e-9;
constexpr double kCiConfidence = 0.99;
constexpr double kBoundaryRelWidth = 1e-3;

const char* verdict_name(AuditVerdict v) {
    switch (v) {
        case AuditVerdict::pass: return "pass";
        case AuditVerdict::fail: return "fail";
        default: return "inconclusive";
    }
}

std::vector<double> checked_distribution(const AuditMechanism& mech, std::size_t input) {
    std::vector<double> p = mech.distribution(input);
    if (p.size() != mech.n_outputs)
        throw std::invalid_argument("audit: distribution size does not match the output alphabet");
    double total = 0.0;
    for (double v : p) {
        if (!(v >= 0.0)) throw std::invalid_argument("audit: negative output probability");
        total += v;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("audit: output probabilities do not sum to 1");
    return p;
}

// Directional exact analysis of (P, Q): the largest per-output ratio and the
// additive residual beyond the e^alpha envelope.
void exact_scores(const std::vector<double>& p, const std::vector<double>& q, double ealpha,
                  double& max_ratio, double& slack) {
    max_ratio = 0.0;
    slack = 0.0;
    for (std::size_t o = 0; o < p.size(); ++o) {
        if (p[o] > 0.0) {
            double ratio = q[o] > 0.0 ? p[o] / q[o] : std::numeric_limits<double>::infinity();
            max_ratio = std::max(max_ratio, ratio);
        }
        slack += std::max(0.0, p[o] - ealpha * q[o]);
    }
}

struct BinCounts {
    std::vector<std::uint64_t> hits;
    std::size_t trials = 0;
};

BinCounts tally(const AuditMechanism& mech, std::size_t input, std::size_t trials, Rng& rng) {
    BinCounts bc;
    bc.hits.assign(mech.n_outputs, 0);
    bc.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        std::size_t bin = mech.draw(input, rng);
        if (bin >= mech.n_outputs) throw std::invalid_argument("audit: draw outside the alphabet");
        ++bc.hits[bin];
    }
    return bc;
}

}  // namespace

AuditReport audit(const AuditMechanism& mech,
                  const std::vector<std::pair<std::size_t, std::size_t>>& neighbors, double alpha,
                  double beta, AuditMode mode, std::size_t trials, std::uint64_t seed) {
    if (mech.n_outputs == 0) throw std::invalid_argument("audit: empty output alphabet");
    if (!(alpha >= 0.0) || !(beta >= 0.0))
        throw std::invalid_argument("audit: alpha and beta must be nonnegative");
    if (mode == AuditMode::exact && !mech.distribution)
        throw std::invalid_argument("audit: exact mode needs an exposed output distribution");
    if (mode == AuditMode::monte_carlo) {
        if (!mech.draw) throw std::invalid_argument("audit: monte-carlo mode needs a sampler");
        if (trials == 0) throw std::invalid_argument("audit: monte-carlo mode needs trials > 0");
    }

    AuditReport report;
    report.mode = mode;
    report.alpha = alpha;
    report.beta = beta;
    report.trials = mode == AuditMode::monte_carlo ? trials : 0;
    report.seed = mode == AuditMode::monte_carlo ? seed : 0;
    const double ealpha = std::exp(alpha);

    Rng root(seed);
    report.pass = true;
    report.verdict = AuditVerdict::pass;
    for (std::size_t pi = 0; pi < neighbors.size(); ++pi) {
        PairFinding f;
        f.first = neighbors[pi].first;
        f.second = neighbors[pi].second;
        if (mode == AuditMode::exact) {
            std::vector<double> p = checked_distribution(mech, f.first);
            std::vector<double> q = checked_distribution(mech, f.second);
            exact_scores(p, q, ealpha, f.max_ratio, f.slack);
            f.slack_low = f.slack_high = f.slack;
            f.pass = f.slack <= beta + kSlackTol;
            f.verdict = f.pass ? AuditVerdict::pass : AuditVerdict::fail;
        } else {
            // Per-pair derived streams keep the tallies independent of the
            // order pairs are processed in.
            Rng rp = root.child(2 * pi);
            Rng rq = root.child(2 * pi + 1);
            BinCounts cp = tally(mech, f.first, trials, rp);
            BinCounts cq = tally(mech, f.second, trials, rq);
            f.max_ratio = 0.0;
            f.slack = f.slack_low = f.slack_high = 0.0;
            bool boundary_hug = false;
            for (std::size_t o = 0; o < mech.n_outputs; ++o) {
                double pe = double(cp.hits[o]) / double(trials);
                double qe = double(cq.hits[o]) / double(trials);
                auto [pl, pu] = clopper_pearson(cp.hits[o], trials, kCiConfidence);
                auto [ql, qu] = clopper_pearson(cq.hits[o], trials, kCiConfidence);
                if (pe > 0.0) {
                    double ratio = qe > 0.0 ? pe / qe : std::numeric_limits<double>::infinity();
                    f.max_ratio = std::max(f.max_ratio, ratio);
                }
                f.slack += std::max(0.0, pe - ealpha * qe);
                f.slack_low += std::max(0.0, pl - ealpha * qu);   // mechanism-favorable corner
                f.slack_high += std::max(0.0, pu - ealpha * ql);  // mechanism-adverse corner
                // Ratio interval hugging e^alpha: too close to call either way.
                double rlo = qu > 0.0 ? pl / qu : (pl > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
                double rhi = ql > 0.0 ? pu / ql
                                      : (pu > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
                if (rlo <= ealpha && ealpha <= rhi && std::isfinite(rhi) &&
                    (rhi - rlo) / ealpha <= kBoundaryRelWidth)
                    boundary_hug = true;
            }
            if (f.slack_low > beta + kSlackTol) {
                f.verdict = AuditVerdict::fail;  // violation certified at the CI level
            } else if (f.slack > beta + kSlackTol || boundary_hug) {
                f.verdict = AuditVerdict::inconclusive;
            } else {
                f.verdict = AuditVerdict::pass;
            }
            f.pass = f.verdict == AuditVerdict::pass;
        }
        report.max_ratio = std::max(report.max_ratio, f.max_ratio);
        report.slack = std::max(report.slack, f.slack);
        report.pass = report.pass && f.pass;
        // Overall verdict: fail dominates, then inconclusive, then pass.
        if (f.verdict == AuditVerdict::fail || report.verdict == AuditVerdict::fail)
            report.verdict = AuditVerdict::fail;
        else if (f.verdict == AuditVerdict::inconclusive)
            report.verdict = AuditVerdict::inconclusive;
        report.pairs.push_back(std::move(f));
    }
    return report;
}

std::array<double, 2> release_branch_probs(std::size_t changes, double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0) || !(beta < 0.5))
        throw std::invalid_argument("release audit: alpha must be positive and beta in (0, 1/2)");
    double threshold = (1.0 / alpha) * std::log(1.0 / (2.0 * beta)) + 1.0;
    double release = laplace_tail(1.0 / alpha, threshold - double(changes));
    return {1.0 - release, release};
}

AuditMechanism em_audit_mechanism(std::vector<std::vector<std::int64_t>> quality_sets,
                                  double alpha) {
    if (quality_sets.empty()) throw std::invalid_argument("audit: no quality sets");
    std::size_t n = quality_sets.front().size();
    for (const auto& qs : quality_sets)
        if (qs.size() != n || qs.empty())
            throw std::invalid_argument("audit: quality sets must share a nonempty size");
    AuditMechanism mech;
    mech.n_outputs = n;
    auto sets = std::make_shared<std::vector<std::vector<std::int64_t>>>(std::move(quality_sets));
    mech.distribution = [sets, alpha](std::size_t input) {
        Rng scratch(0);  // the probability vector is deterministic
        return exponential_mechanism(sets->at(input), alpha, scratch).probs;
    };
    mech.draw = [sets, alpha](std::size_t input, Rng& rng) {
        return exponential_mechanism(sets->at(input), alpha, rng).index;
    };
    return mech;
}

AuditMechanism release_audit_mechanism(std::vector<std::pair<std::size_t, std::size_t>> runs,
                                       std::size_t n_winners, double alpha, double beta) {
    if (runs.empty()) throw std::invalid_argument("audit: no release runs");
    for (const auto& [winner, changes] : runs) {
        (void)changes;
        if (winner < 1 || winner > n_winners)
            throw std::invalid_argument("audit: winner identity outside 1..n_winners");
    }
    AuditMechanism mech;
    mech.n_outputs = n_winners + 1;
    auto rs = std::make_shared<std::vector<std::pair<std::size_t, std::size_t>>>(std::move(runs));
    mech.distribution = [rs, n_winners, alpha, beta](std::size_t input) {
        const auto& [winner, changes] = rs->at(input);
        auto branches = release_branch_probs(changes, alpha, beta);
        std::vector<double> p(n_winners + 1, 0.0);
        p[0] = branches[0];
        p[winner] = branches[1];
        return p;
    };
    mech.draw = [rs, alpha, beta](std::size_t input, Rng& rng) -> std::size_t {
        const auto& [winner, changes] = rs->at(input);
        auto branches = release_branch_probs(changes, alpha, beta);
        return rng.next_unit() < branches[1] ? winner : 0;
    };
    return mech;
}

nlohmann::ordered_json audit_report_to_json(const AuditReport& report) {
    nlohmann::ordered_json j;
    j["mode"] = report.mode == AuditMode::exact ? "exact" : "monte_carlo";
    j["alpha"] = report.alpha;
    j["beta"] = report.beta;
    if (report.mode == AuditMode::monte_carlo) {
        j["trials"] = report.trials;
        j["seed"] = report.seed;
    }
    j["pass"] = report.pass;
    j["verdict"] = verdict_name(report.verdict);
    if (std::isfinite(report.max_ratio))
        j["max_ratio"] = report.max_ratio;
    else
        j["max_ratio"] = "infinite";
    j["slack"] = report.slack;
    nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
    for (const auto& f : report.pairs) {
        nlohmann::ordered_json pj;
        pj["first"] = f.first;
        pj["second"] = f.second;
        if (std::isfinite(f.max_ratio))
            pj["max_ratio"] = f.max_ratio;
        else
            pj["max_ratio"] = "infinite";
        pj["slack"] = f.slack;
        if (report.mode == AuditMode::monte_carlo) {
            pj["slack_ci"] = nlohmann::ordered_json::array({f.slack_low, f.slack_high});
        }
        pj["pass"] = f.pass;
        pj["verdict"] = verdict_name(f.verdict);
        pairs.push_back(std::move(pj));
    }
    j["pairs"] = std::move(pairs);
    return j;
}

}  // namespace dppac
