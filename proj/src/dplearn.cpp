#include "dppac/dplearn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "dppac/stats.hpp"

namespace dppac {

namespace {

constexpr std::uint64_t kMaxOverallSamples = 1ull << 24;

// CDF inversion over exact weights. The partial sums are accumulated once,
// in index order, so a binary search returns exactly the index the
// sequential scan would: the first i with u < w[0] + ... + w[i].
struct WeightedSampler {
    std::vector<double> cdf;

    explicit WeightedSampler(const std::vector<Rat>& w) {
        cdf.reserve(w.size());
        double acc = 0.0;
        for (const Rat& v : w) {
            acc += v.to_double();
            cdf.push_back(acc);
        }
    }

    std::size_t draw(Rng& rng) const {
        double u = rng.next_unit();
        std::size_t i = std::size_t(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        return i < cdf.size() ? i : cdf.size() - 1;
    }
};

std::size_t sample_weighted(Rng& rng, const std::vector<Rat>& w) {
    return WeightedSampler(w).draw(rng);
}

std::int64_t floor_mod(std::int64_t v, std::int64_t p) {
    std::int64_t r = v % p;
    return r < 0 ? r + p : r;
}

// Inverse of v modulo p via the extended Euclid recurrence.
std::int64_t mod_inverse(std::int64_t v, std::int64_t p) {
    std::int64_t old_r = floor_mod(v, p), r = p;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw std::invalid_argument("modulus is not prime: no inverse exists");
    return floor_mod(old_s, p);
}

int kind_rank(HypKind k) { return int(k); }

// Quality = number of samples the row classifies correctly.
std::vector<std::int64_t> match_counts(const std::vector<BitRow>& rows,
                                       const std::vector<LabeledSample>& samples) {
    std::vector<std::int64_t> q(rows.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (const auto& s : samples)
            if (rows[i].test(s.index) == s.label) ++q[i];
    return q;
}

// Shared selection core: exponential mechanism over explicit rows.
Hypothesis em_over_rows(const std::vector<BitRow>& rows, const SampleOracle& oracle,
                        std::size_t n, double alpha, Rng& rng) {
    std::vector<LabeledSample> samples;
    samples.reserve(n);
    for (std::size_t i = 0; i < n; ++i) samples.push_back(oracle(rng));
    EmChoice choice = exponential_mechanism(match_counts(rows, samples), alpha, rng);
    return Hypothesis::table_fn(rows[choice.index]);
}

}  // namespace

// ---------------------------------------------------------------------------
// Hypothesis

Hypothesis Hypothesis::zero_fn() { return Hypothesis{}; }

Hypothesis Hypothesis::point_fn(std::uint32_t p, std::uint32_t x, std::uint32_t y) {
    Hypothesis h;
    h.kind = HypKind::point;
    h.p = p;
    h.a = x % p;
    h.b = y % p;
    return h;
}

Hypothesis Hypothesis::line_fn(std::uint32_t p, std::uint32_t a, std::uint32_t b) {
    Hypothesis h;
    h.kind = HypKind::line;
    h.p = p;
    h.a = a % p;
    h.b = b % p;
    return h;
}

Hypothesis Hypothesis::table_fn(BitRow bits) {
    Hypothesis h;
    h.kind = HypKind::table;
    h.table = std::move(bits);
    return h;
}

bool Hypothesis::eval(std::size_t index) const {
    switch (kind) {
        case HypKind::zero:
            return false;
        case HypKind::point:
            return index == std::size_t(a) * p + b;
        case HypKind::line: {
            std::uint64_t x = index / p, y = index % p;
            return (std::uint64_t(a) * x + b) % p == y;
        }
        case HypKind::table:
            return table.test(index);
    }
    throw std::logic_error("bad hypothesis kind");
}

std::size_t Hypothesis::domain_size() const {
    switch (kind) {
        case HypKind::zero: return 0;
        case HypKind::point:
        case HypKind::line: return std::size_t(p) * p;
        case HypKind::table: return table.nbits;
    }
    throw std::logic_error("bad hypothesis kind");
}

bool Hypothesis::operator==(const Hypothesis& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case HypKind::zero: return true;
        case HypKind::point:
        case HypKind::line: return p == o.p && a == o.a && b == o.b;
        case HypKind::table: return table == o.table;
    }
    throw std::logic_error("bad hypothesis kind");
}

bool hyp_less(const Hypothesis& lhs, const Hypothesis& rhs) {
    if (kind_rank(lhs.kind) != kind_rank(rhs.kind))
        return kind_rank(lhs.kind) < kind_rank(rhs.kind);
    switch (lhs.kind) {
        case HypKind::zero:
            return false;
        case HypKind::point:
        case HypKind::line:
            if (lhs.a != rhs.a) return lhs.a < rhs.a;
            if (lhs.b != rhs.b) return lhs.b < rhs.b;
            return lhs.p < rhs.p;
        case HypKind::table:
            return lhs.table < rhs.table;
    }
    throw std::logic_error("bad hypothesis kind");
}

BitRow hypothesis_row(const Hypothesis& h, std::size_t domain_size) {
    if (h.kind == HypKind::table && h.table.nbits != domain_size)
        throw std::invalid_argument("hypothesis table does not match the domain size");
    if ((h.kind == HypKind::point || h.kind == HypKind::line) &&
        std::size_t(h.p) * h.p != domain_size)
        throw std::invalid_argument("hypothesis modulus does not match the domain size");
    BitRow r(domain_size);
    for (std::size_t i = 0; i < domain_size; ++i) r.set(i, h.eval(i));
    return r;
}

// ---------------------------------------------------------------------------
// Samples and oracles

LabeledSample LabeledSample::from_xy(std::uint32_t p, std::uint32_t x, std::uint32_t y,
                                     bool label) {
    return LabeledSample{std::size_t(x % p) * p + (y % p), label};
}

SampleOracle make_realizable_oracle(const FiniteDistribution& d, BitRow f) {
    d.validate();
    if (d.weights.size() != f.nbits)
        throw std::invalid_argument("oracle: distribution and concept sizes differ");
    WeightedSampler sampler(d.weights);
    return [sampler, f](Rng& rng) {
        std::size_t x = sampler.draw(rng);
        return LabeledSample{x, f.test(x)};
    };
}

SampleOracle make_agnostic_oracle(const JointDistribution& joint) {
    joint.validate();
    if (joint.ny != 2) throw std::invalid_argument("oracle: joint must have binary labels");
    WeightedSampler sampler(joint.weights);
    return [sampler](Rng& rng) {
        std::size_t cell = sampler.draw(rng);
        return LabeledSample{cell / 2, (cell % 2) == 1};
    };
}

// ---------------------------------------------------------------------------
// Private mechanisms

double laplace_sample(double scale, Rng& rng) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace scale must be positive");
    double u;
    do {
        u = rng.next_unit() - 0.5;
    } while (1.0 - 2.0 * std::abs(u) <= 0.0);
    if (u == 0.0) return 0.0;
    double sgn = u > 0.0 ? 1.0 : -1.0;
    return -scale * sgn * std::log(1.0 - 2.0 * std::abs(u));
}

double laplace_tail(double scale, double x) {
    if (!(scale > 0.0)) throw std::invalid_argument("laplace scale must be positive");
    if (x >= 0.0) return 0.5 * std::exp(-x / scale);
    return 1.0 - 0.5 * std::exp(x / scale);
}

EmChoice exponential_mechanism(const std::vector<std::int64_t>& qualities, double alpha,
                               Rng& rng) {
    if (qualities.empty()) throw std::invalid_argument("exponential mechanism: empty choice set");
    std::int64_t qmax = *std::max_element(qualities.begin(), qualities.end());
    EmChoice out;
    out.probs.resize(qualities.size());
    double total = 0.0;
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        out.probs[i] = std::exp(alpha * double(qualities[i] - qmax) / 2.0);
        total += out.probs[i];
    }
    for (double& w : out.probs) w /= total;
    double u = rng.next_unit();
    double acc = 0.0;
    out.index = qualities.size() - 1;
    for (std::size_t i = 0; i < qualities.size(); ++i) {
        acc += out.probs[i];
        if (u < acc) {
            out.index = i;
            break;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Representation- and cover-driven learners

Hypothesis prdim_learner(const ProbRepresentation& rep, const SampleOracle& oracle,
                         std::size_t n, double alpha, Rng& rng) {
    rep.validate();
    std::size_t which = sample_weighted(rng, rep.probs.weights);
    const auto& rows = rep.support[which].hypotheses;
    return em_over_rows(rows, oracle, n, alpha, rng);
}

std::size_t dist_specific_default_n(std::size_t h_size, double alpha) {
    double ln_h = std::log(double(std::max<std::size_t>(h_size, 1)));
    return std::size_t(std::ceil((16.0 / alpha) * (ln_h + std::log(8.0))));
}

Hypothesis dist_specific_learner(const ConceptClass& c, const FiniteDistribution& d_known,
                                 const SampleOracle& oracle, std::size_t n, double alpha,
                                 Rng& rng) {
    CoverResult cover = min_cover(c, d_known, Rat(1, 8), false);
    return em_over_rows(cover.cover.hypotheses, oracle, n, alpha, rng);
}

std::size_t label_private_phase1_count(const ConceptClass& c) {
    std::size_t vcx = vc_dimension(xor_class(c, c)).dim;
    return 64 * (vcx + 1);
}

Hypothesis label_private_learner(const ConceptClass& c, const SampleOracle& oracle,
                                 double alpha, Rng& rng) {
    c.validate();
    // Phase 1: unlabeled empirical distribution. Labels are never read here,
    // which is exactly what makes the learner label-private on these draws.
    std::size_t t = label_private_phase1_count(c);
    std::vector<std::uint64_t> counts(c.domain_size, 0);
    for (std::size_t i = 0; i < t; ++i) ++counts[oracle(rng).index];
    FiniteDistribution empirical;
    empirical.weights.reserve(counts.size());
    for (std::uint64_t k : counts)
        empirical.weights.push_back(Rat(std::int64_t(k), std::int64_t(t)));
    // Phase 2: proper cover of the class under the empirical distribution.
    CoverResult cover = min_cover(c, empirical, Rat(1, 8), true);
    const auto& rows = cover.cover.hypotheses;
    // Phase 3: exponential mechanism over the cover on fresh labeled samples.
    return em_over_rows(rows, oracle, dist_specific_default_n(rows.size(), alpha), alpha, rng);
}

// ---------------------------------------------------------------------------
// Line learner

void LineLearnerConfig::validate() const {
    if (p < 2) throw std::invalid_argument("line learner: p must be at least 2");
    // Well-definedness only: the analyzed regime for all four parameters is
    // (0, 1/2), but runs outside it are legitimate (e.g. a privacy budget of
    // 1) and get flagged by deviation_flags() instead of rejected here.
    if (!(eps > 0.0 && eps < 1.0) || !(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("line learner: eps and delta must lie in (0, 1)");
    if (!(alpha > 0.0)) throw std::invalid_argument("line learner: alpha must be positive");
    // The release threshold (1/alpha) ln(1/(2 beta)) + 1 needs beta < 1/2.
    if (!(beta > 0.0 && beta < 0.5))
        throw std::invalid_argument("line learner: beta must lie in (0, 1/2)");
    if (range_width_override && !(*range_width_override > 0.0))
        throw std::invalid_argument("line learner: range width override must be positive");
    if (ell_override && !(*ell_override >= 1.0))
        throw std::invalid_argument("line learner: ell override must be at least 1");
}

std::vector<std::string> LineLearnerConfig::deviation_flags() const {
    std::vector<std::string> flags;
    if (range_width_override) flags.push_back("range-width-override");
    if (ell_override) flags.push_back("ell-override");
    auto analyzed = [](double v) { return v > 0.0 && v < 0.5; };
    bool out_of_regime = !analyzed(eps) || !analyzed(delta) || !analyzed(alpha) || !analyzed(beta);
    if (!flags.empty() || out_of_regime) flags.push_back("non-paper-constants");
    return flags;
}

Hypothesis line_basic_learner(const std::vector<LabeledSample>& samples, std::uint32_t p) {
    if (p < 2) throw std::invalid_argument("line learner: p must be at least 2");
    bool have_first = false, have_second = false;
    std::uint32_t x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    for (const auto& s : samples) {
        if (!s.label) continue;
        if (s.index >= std::size_t(p) * p)
            throw std::invalid_argument("line learner: sample outside Z_p^2");
        std::uint32_t x = s.x(p), yy = s.y(p);
        if (!have_first) {
            x1 = x;
            y1 = yy;
            have_first = true;
        } else if (!have_second && (x != x1 || yy != y1)) {
            x2 = x;
            y2 = yy;
            have_second = true;
            break;
        }
    }
    if (!have_first) return Hypothesis::zero_fn();
    if (!have_second) return Hypothesis::point_fn(p, x1, y1);
    if (x1 == x2) {
        // Two distinct positives sharing x cannot lie on any line y = ax + b.
        Hypothesis h = Hypothesis::zero_fn();
        h.non_realizable = true;
        return h;
    }
    std::int64_t inv = mod_inverse(std::int64_t(x1) - std::int64_t(x2), p);
    std::int64_t a = floor_mod((std::int64_t(y1) - std::int64_t(y2)) * inv, p);
    std::int64_t b = floor_mod(std::int64_t(y1) - a * std::int64_t(x1), p);
    Hypothesis h = Hypothesis::line_fn(p, std::uint32_t(a), std::uint32_t(b));
    for (const auto& s : samples)
        if (s.label && !h.eval(s.index)) h.non_realizable = true;
    return h;
}

FreqReport freq_and_instability(const std::vector<Hypothesis>& hs) {
    if (hs.empty()) throw std::invalid_argument("frequency: empty hypothesis list");
    std::vector<Hypothesis> sorted = hs;
    std::sort(sorted.begin(), sorted.end(), hyp_less);
    // Run-length encode; the first maximal run is the lex-least winner.
    std::vector<std::pair<Hypothesis, std::size_t>> groups;
    for (const auto& h : sorted) {
        if (!groups.empty() && groups.back().first == h) ++groups.back().second;
        else groups.emplace_back(h, 1);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < groups.size(); ++i)
        if (groups[i].second > groups[best].second) best = i;
    FreqReport out;
    out.hbar = groups[best].first;
    std::size_t nbar = groups[best].second;
    // Vote transfer: moving one vote from the winner to a challenger closes
    // the count gap by two; a challenger that precedes the winner also wins
    // ties. Some hypothesis outside the list always exists on either side of
    // the winner except below the global minimum (the zero function).
    auto cost = [&](std::size_t gap_plus_tiebreak) {
        return std::max<std::size_t>(1, (gap_plus_tiebreak + 1) / 2);
    };
    std::size_t c = out.hbar.kind == HypKind::zero ? cost(nbar + 1) : cost(nbar);
    for (const auto& [g, cnt] : groups) {
        if (g == out.hbar) continue;
        std::size_t need = nbar - cnt + (hyp_less(out.hbar, g) ? 1 : 0);
        c = std::min(c, cost(need));
    }
    out.changes = c;
    return out;
}

// Formula evaluators: these accept any positive parameters so that boundary
// settings (e.g. delta = 1/2) can be inspected; the learner entry points
// apply cfg.validate() for well-definedness.
KRange overall_k_range(const LineLearnerConfig& cfg) {
    if (!(cfg.eps > 0.0) || !(cfg.delta > 0.0))
        throw std::invalid_argument("line learner: eps and delta must be positive");
    double lower = std::log2(std::log(1.5) / cfg.eps);
    double width = cfg.range_width_override ? *cfg.range_width_override : 6.0 / cfg.delta;
    KRange kr;
    kr.lo = std::int64_t(std::ceil(lower));
    kr.hi = kr.lo + std::int64_t(std::ceil(width));
    return kr;
}

std::size_t overall_ell(const LineLearnerConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.beta > 0.0) || !(cfg.delta > 0.0))
        throw std::invalid_argument("line learner: alpha, beta, delta must be positive");
    double raw = cfg.ell_override
                     ? *cfg.ell_override
                     : std::max((12.0 / cfg.alpha) * std::log(2.0 / (cfg.beta * cfg.delta)) + 13.0,
                                72.0 * std::log(4.0 / cfg.delta));
    return std::size_t(std::ceil(raw));
}

OverallResult line_overall_learner(const LineLearnerConfig& cfg, const SampleOracle& oracle,
                                   Rng& rng) {
    cfg.validate();
    KRange kr = overall_k_range(cfg);
    OverallResult out;
    out.k = kr.lo + std::int64_t(rng.next_below(std::uint64_t(kr.hi - kr.lo + 1)));
    if (out.k < 0 || out.k >= 40) throw cap_error("subsample size 2^k exceeds the budget");
    out.t = 1ull << out.k;
    out.ell = overall_ell(cfg);
    std::uint64_t n = out.t * std::uint64_t(out.ell);
    if (n > kMaxOverallSamples) throw cap_error("sample budget for the overall learner exceeded");
    out.n_samples = std::size_t(n);
    std::vector<Hypothesis> votes;
    votes.reserve(out.ell);
    std::vector<LabeledSample> block;
    block.reserve(out.t);
    for (std::size_t i = 0; i < out.ell; ++i) {
        block.clear();
        for (std::uint64_t j = 0; j < out.t; ++j) block.push_back(oracle(rng));
        votes.push_back(line_basic_learner(block, cfg.p));
    }
    FreqReport fr = freq_and_instability(votes);
    out.changes = fr.changes;
    double noise = laplace_sample(1.0 / cfg.alpha, rng);
    double threshold = (1.0 / cfg.alpha) * std::log(1.0 / (2.0 * cfg.beta)) + 1.0;
    out.released = double(fr.changes) + noise > threshold;
    out.h = out.released ? fr.hbar : Hypothesis::zero_fn();
    return out;
}

std::size_t boosted_run_count(double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw std::invalid_argument("boosting: delta must lie in (0, 1/2)");
    return std::size_t(std::ceil(std::log(2.0 / delta) / std::log(4.0 / 3.0)));
}

std::size_t boosted_em_samples(double eps, double alpha, double delta, std::size_t k) {
    if (!(eps > 0.0) || !(alpha > 0.0) || !(delta > 0.0) || k == 0)
        throw std::invalid_argument("boosting: bad selection-sample parameters");
    return std::size_t(std::ceil((16.0 / (eps * alpha)) * std::log(4.0 * double(k) / delta)));
}

BoostedResult line_boosted_learner(const LineLearnerConfig& cfg, const SampleOracle& oracle,
                                   Rng& rng) {
    cfg.validate();
    LineLearnerConfig weak = cfg;
    weak.eps = cfg.eps / 4.0;
    weak.delta = 0.25;
    BoostedResult out;
    std::size_t k = boosted_run_count(cfg.delta);
    out.candidates.reserve(k);
    for (std::size_t i = 0; i < k; ++i)
        out.candidates.push_back(line_overall_learner(weak, oracle, rng).h);
    out.em_samples = boosted_em_samples(cfg.eps, cfg.alpha, cfg.delta, k);
    std::vector<LabeledSample> fresh;
    fresh.reserve(out.em_samples);
    for (std::size_t i = 0; i < out.em_samples; ++i) fresh.push_back(oracle(rng));
    std::vector<std::int64_t> q(k, 0);
    for (std::size_t i = 0; i < k; ++i)
        for (const auto& s : fresh)
            if (out.candidates[i].eval(s.index) == s.label) ++q[i];
    EmChoice choice = exponential_mechanism(q, cfg.alpha, rng);
    out.h = out.candidates[choice.index];
    return out;
}

// ---------------------------------------------------------------------------
// Stability closed forms

StabilityReport stability_probs(double r, const std::vector<double>& q_atoms, std::uint64_t t) {
    if (t == 0) throw std::invalid_argument("stability: t must be at least 1");
    if (!(r >= 0.0 && r <= 1.0)) throw std::invalid_argument("stability: r must lie in [0, 1]");
    double sum = 0.0, q = 0.0;
    for (double a : q_atoms) {
        if (!(a >= 0.0)) throw std::invalid_argument("stability: atom masses must be nonnegative");
        sum += a;
        q = std::max(q, a);
    }
    if (std::abs(sum - r) > 1e-12)
        throw std::invalid_argument("stability: atom masses must sum to r");
    StabilityReport rep;
    double td = double(t);
    rep.none = std::pow(1.0 - r, td);
    rep.one = 0.0;
    for (double a : q_atoms) rep.one += std::pow(1.0 - r + a, td) - rep.none;
    rep.two = 1.0 - rep.none - rep.one;
    rep.bound_none = 1.0 - r * td;
    rep.bound_one_poly = std::pow(1.0 - r + q, td) - rep.none;
    rep.bound_one_exp = 1.0 - (r - q) * td - std::exp(-r * td);
    auto split = [&](std::uint64_t t1, std::uint64_t t2) {
        return (1.0 - std::pow(1.0 - r, double(t1))) * (1.0 - std::pow(1.0 - r + q, double(t2)));
    };
    rep.bound_two_split = std::max(split(t / 2, t - t / 2), split(t - t / 2, t / 2));
    rep.bound_two_exp =
        (1.0 - std::exp(-r * td / 2.0)) * (1.0 - std::exp(-(r - q) * td / 2.0));
    constexpr double tol = 1e-12;
    rep.bounds_ok = rep.none >= rep.bound_none - tol && rep.one >= rep.bound_one_poly - tol &&
                    rep.one >= rep.bound_one_exp - tol && rep.two >= rep.bound_two_split - tol;
    return rep;
}

StabilityInstance stability_instance(const BitRow& f, const FiniteDistribution& d) {
    d.validate();
    if (d.weights.size() != f.nbits)
        throw std::invalid_argument("stability: distribution and concept sizes differ");
    StabilityInstance inst;
    Rat r(0, 1);
    for (std::size_t i = 0; i < f.nbits; ++i) {
        if (!f.test(i)) continue;
        r = r + d.weights[i];
        if (d.weights[i].num != 0) inst.atoms.push_back(d.weights[i].to_double());
    }
    inst.r = r.to_double();
    return inst;
}

// ---------------------------------------------------------------------------
// PAC evaluation harness

namespace {

PacReport run_trials(const Learner& learner, const SampleOracle& oracle,
                     const std::function<bool(const Hypothesis&)>& succeeded,
                     std::size_t trials, Rng& rng) {
    PacReport rep;
    rep.trials = trials;
    for (std::size_t i = 0; i < trials; ++i) {
        Rng trial_rng = rng.child(i);
        Hypothesis h = learner(oracle, trial_rng);
        if (succeeded(h)) ++rep.successes;
    }
    rng.next_u64();  // advance the caller's stream past this evaluation
    if (trials > 0) {
        rep.success_rate = double(rep.successes) / double(trials);
        auto ci = clopper_pearson(rep.successes, trials, 0.99);
        rep.ci_low = ci.first;
        rep.ci_high = ci.second;
    }
    return rep;
}

}  // namespace

PacReport pac_evaluate(const Learner& learner, const ConceptClass& c, std::size_t f_index,
                       const FiniteDistribution& d, std::size_t trials, double eps, Rng& rng) {
    c.validate();
    if (f_index >= c.concepts.size()) throw std::invalid_argument("pac: target index out of range");
    const BitRow& f = c.concepts[f_index];
    SampleOracle oracle = make_realizable_oracle(d, f);
    auto succeeded = [&](const Hypothesis& h) {
        Rat err = disagreement(f, hypothesis_row(h, c.domain_size), d);
        return err.to_double() <= eps + 1e-12;
    };
    return run_trials(learner, oracle, succeeded, trials, rng);
}

PacReport pac_evaluate_agnostic(const Learner& learner, const ConceptClass& c,
                                const JointDistribution& joint, std::size_t trials, double eps,
                                Rng& rng) {
    c.validate();
    joint.validate();
    if (joint.ny != 2) throw std::invalid_argument("pac: joint must have binary labels");
    if (joint.nx != c.domain_size)
        throw std::invalid_argument("pac: joint and concept domains differ");
    // Pr[(x, l) ~ joint : row(x) != l], exactly.
    auto joint_error = [&](const BitRow& row) {
        Rat err(0, 1);
        for (std::size_t x = 0; x < joint.nx; ++x) err = err + joint.at(x, row.test(x) ? 0 : 1);
        return err;
    };
    Rat best = joint_error(c.concepts[0]);
    for (std::size_t i = 1; i < c.concepts.size(); ++i) {
        Rat e = joint_error(c.concepts[i]);
        if (e < best) best = e;
    }
    SampleOracle oracle = make_agnostic_oracle(joint);
    auto succeeded = [&, best](const Hypothesis& h) {
        Rat err = joint_error(hypothesis_row(h, c.domain_size));
        return err.to_double() <= best.to_double() + eps + 1e-12;
    };
    return run_trials(learner, oracle, succeeded, trials, rng);
}

// ---------------------------------------------------------------------------
// Serialization

nlohmann::ordered_json hypothesis_to_json(const Hypothesis& h) {
    nlohmann::ordered_json j;
    switch (h.kind) {
        case HypKind::zero:
            j["kind"] = "zero";
            break;
        case HypKind::point:
            j["kind"] = "point";
            j["p"] = h.p;
            j["x"] = h.a;
            j["y"] = h.b;
            break;
        case HypKind::line:
            j["kind"] = "line";
            j["p"] = h.p;
            j["a"] = h.a;
            j["b"] = h.b;
            break;
        case HypKind::table:
            j["kind"] = "table";
            j["bits"] = h.table.to_string();
            break;
    }
    if (h.non_realizable) j["non_realizable"] = true;
    return j;
}

Hypothesis hypothesis_from_json(const nlohmann::ordered_json& j) {
    std::string kind = j.at("kind").get<std::string>();
    Hypothesis h;
    if (kind == "zero") {
        h = Hypothesis::zero_fn();
    } else if (kind == "point") {
        h = Hypothesis::point_fn(j.at("p").get<std::uint32_t>(), j.at("x").get<std::uint32_t>(),
                                 j.at("y").get<std::uint32_t>());
    } else if (kind == "line") {
        h = Hypothesis::line_fn(j.at("p").get<std::uint32_t>(), j.at("a").get<std::uint32_t>(),
                                j.at("b").get<std::uint32_t>());
    } else if (kind == "table") {
        h = Hypothesis::table_fn(BitRow::from_string(j.at("bits").get<std::string>()));
    } else {
        throw std::invalid_argument("unknown hypothesis kind: " + kind);
    }
    if (j.contains("non_realizable")) h.non_realizable = j.at("non_realizable").get<bool>();
    return h;
}

nlohmann::ordered_json line_config_to_json(const LineLearnerConfig& cfg) {
    nlohmann::ordered_json j;
    j["p"] = cfg.p;
    j["eps"] = cfg.eps;
    j["delta"] = cfg.delta;
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    if (cfg.range_width_override) j["range_width_override"] = *cfg.range_width_override;
    if (cfg.ell_override) j["ell_override"] = *cfg.ell_override;
    return j;
}

LineLearnerConfig line_config_from_json(const nlohmann::ordered_json& j) {
    LineLearnerConfig cfg;
    cfg.p = j.at("p").get<std::uint32_t>();
    cfg.eps = j.at("eps").get<double>();
    cfg.delta = j.at("delta").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.beta = j.at("beta").get<double>();
    if (j.contains("range_width_override"))
        cfg.range_width_override = j.at("range_width_override").get<double>();
    if (j.contains("ell_override")) cfg.ell_override = j.at("ell_override").get<double>();
    cfg.validate();
    return cfg;
}

}  // namespace dppac
