#include "dppac/repdim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "dppac/errors.hpp"

namespace dppac {

namespace {

constexpr double kLpTol = 1e-9;
constexpr std::size_t kLpCap = 64;

std::size_t ceil_log2(std::size_t x) {
    std::size_t c = 0;
    while ((std::size_t(1) << c) < x) ++c;
    return c;
}

}  // namespace

void DetRepresentation::validate() const {
    if (hypotheses.empty()) throw std::invalid_argument("representation: no hypotheses");
    if (domain_size == 0) throw std::invalid_argument("representation: empty domain");
    for (const auto& h : hypotheses)
        if (h.nbits != domain_size) throw std::invalid_argument("representation: row width mismatch");
}

void ProbRepresentation::validate() const {
    if (support.empty()) throw std::invalid_argument("representation: empty support");
    if (probs.weights.size() != support.size())
        throw std::invalid_argument("representation: probs size mismatch");
    probs.validate();
    for (const auto& h : support) {
        h.validate();
        if (h.domain_size != support.front().domain_size)
            throw std::invalid_argument("representation: mixed domains");
    }
}

GameSolution solve_matrix_game(const std::vector<std::vector<double>>& m) {
    std::size_t nr = m.size();
    if (nr == 0 || m[0].empty()) throw std::invalid_argument("matrix game: empty matrix");
    std::size_t nc = m[0].size();
    if (nr > kLpCap || nc > kLpCap) throw cap_error("matrix game: size cap exceeded");

    double lo = m[0][0];
    for (const auto& row : m) {
        if (row.size() != nc) throw std::invalid_argument("matrix game: ragged matrix");
        for (double v : row) lo = std::min(lo, v);
    }
    double shift = 1.0 - lo;  // all entries >= 1 so the game value is positive

    // Column player's LP: max sum(w) s.t. (M + shift) w <= 1, w >= 0.
    // Optimal objective is 1/value; duals of the row constraints recover the
    // row player's strategy. Dense tableau simplex with Bland's rule.
    std::size_t cols = nc + nr + 1;  // structurals, slacks, rhs
    std::vector<std::vector<double>> t(nr + 1, std::vector<double>(cols, 0.0));
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) t[i][j] = m[i][j] + shift;
        t[i][nc + i] = 1.0;
        t[i][cols - 1] = 1.0;
    }
    for (std::size_t j = 0; j < nc; ++j) t[nr][j] = -1.0;  // z - c row

    std::vector<std::size_t> basis(nr);
    for (std::size_t i = 0; i < nr; ++i) basis[i] = nc + i;

    for (std::size_t iter = 0;; ++iter) {
        if (iter > 100000) throw std::runtime_error("matrix game: LP did not converge");
        std::size_t enter = cols - 1;
        for (std::size_t j = 0; j + 1 < cols; ++j)
            if (t[nr][j] < -kLpTol) {
                enter = j;
                break;  // Bland: lowest eligible index
            }
        if (enter == cols - 1) break;  // optimal
        std::size_t leave = nr;
        double best_ratio = 0.0;
        for (std::size_t i = 0; i < nr; ++i) {
            if (t[i][enter] <= kLpTol) continue;
            double ratio = t[i][cols - 1] / t[i][enter];
            if (leave == nr || ratio < best_ratio - 1e-12 ||
                (ratio < best_ratio + 1e-12 && basis[i] < basis[leave])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave == nr) throw std::runtime_error("matrix game: LP unbounded");
        double piv = t[leave][enter];
        for (auto& v : t[leave]) v /= piv;
        for (std::size_t i = 0; i <= nr; ++i) {
            if (i == leave) continue;
            double f = t[i][enter];
            if (f == 0.0) continue;
            for (std::size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
        }
        basis[leave] = enter;
    }

    double obj = t[nr][cols - 1];  // optimal sum(w) = 1/(value + shift) > 0
    if (obj <= 0) throw std::runtime_error("matrix game: degenerate objective");
    double vshift = 1.0 / obj;

    GameSolution g;
    g.value = vshift - shift;
    g.col_strategy.assign(nc, 0.0);
    for (std::size_t i = 0; i < nr; ++i)
        if (basis[i] < nc) g.col_strategy[basis[i]] = std::max(0.0, t[i][cols - 1]);
    g.row_strategy.assign(nr, 0.0);
    for (std::size_t i = 0; i < nr; ++i) g.row_strategy[i] = std::max(0.0, t[nr][nc + i]);
    for (auto* s : {&g.col_strategy, &g.row_strategy}) {
        double sum = std::accumulate(s->begin(), s->end(), 0.0);
        if (sum <= 0) throw std::runtime_error("matrix game: empty strategy");
        for (auto& v : *s) v /= sum;
    }

    // weak-duality certificate: row strategy guarantees >= value,
    // column strategy concedes <= value
    double guarantee = 1e300, concede = -1e300;
    for (std::size_t j = 0; j < nc; ++j) {
        double e = 0;
        for (std::size_t i = 0; i < nr; ++i) e += g.row_strategy[i] * m[i][j];
        guarantee = std::min(guarantee, e);
    }
    for (std::size_t i = 0; i < nr; ++i) {
        double e = 0;
        for (std::size_t j = 0; j < nc; ++j) e += g.col_strategy[j] * m[i][j];
        concede = std::max(concede, e);
    }
    if (concede - guarantee > 1e-7 || std::abs(g.value - guarantee) > 1e-7)
        throw std::runtime_error("matrix game: LP did not certify");
    return g;
}

namespace {

// disagreement payoff matrix for concept f against a hypothesis list
std::vector<std::vector<double>> disagree_matrix(const BitRow& f,
                                                 const std::vector<const BitRow*>& hs) {
    std::vector<std::vector<double>> m(f.nbits, std::vector<double>(hs.size(), 0.0));
    for (std::size_t x = 0; x < f.nbits; ++x)
        for (std::size_t j = 0; j < hs.size(); ++j)
            m[x][j] = f.test(x) != hs[j]->test(x) ? 1.0 : 0.0;
    return m;
}

}  // namespace

DistfreeDetReport check_det_rep_distfree(const DetRepresentation& h, const ConceptClass& c,
                                         double eps) {
    h.validate();
    c.validate();
    if (h.domain_size != c.domain_size) throw std::invalid_argument("distfree check: domain mismatch");
    if (h.hypotheses.size() > kLpCap || c.domain_size > kLpCap)
        throw cap_error("distfree check: LP cap exceeded");
    std::vector<const BitRow*> hs;
    for (const auto& row : h.hypotheses) hs.push_back(&row);
    DistfreeDetReport rep;
    rep.worst_value = -1.0;
    for (std::size_t f = 0; f < c.concepts.size(); ++f) {
        auto g = solve_matrix_game(disagree_matrix(c.concepts[f], hs));
        if (g.value > rep.worst_value) {
            rep.worst_f = f;
            rep.worst_value = g.value;
            rep.worst_dist = g.row_strategy;
        }
    }
    rep.pass = rep.worst_value <= eps + kLpTol;
    return rep;
}

bool check_det_rep_fixed_dist(const DetRepresentation& h, const ConceptClass& c,
                              const FiniteDistribution& d, const Rat& eps) {
    h.validate();
    if (h.domain_size != c.domain_size || d.weights.size() != c.domain_size)
        throw std::invalid_argument("fixed-dist check: size mismatch");
    for (const auto& f : c.concepts) {
        bool ok = false;
        for (const auto& hyp : h.hypotheses)
            if (disagreement(f, hyp, d) <= eps) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

bool check_prob_rep_fixed_dist(const ProbRepresentation& r, const ConceptClass& c,
                               const FiniteDistribution& d, const Rat& eps, const Rat& delta) {
    r.validate();
    if (r.support.front().domain_size != c.domain_size)
        throw std::invalid_argument("fixed-dist check: domain mismatch");
    Rat need = Rat(1) - delta;
    for (const auto& f : c.concepts) {
        Rat good(0);
        for (std::size_t i = 0; i < r.support.size(); ++i) {
            bool ok = false;
            for (const auto& hyp : r.support[i].hypotheses)
                if (disagreement(f, hyp, d) <= eps) {
                    ok = true;
                    break;
                }
            if (ok) good += r.probs.weights[i];
        }
        if (good < need) return false;
    }
    return true;
}

DistfreeProbReport check_prob_rep_distfree(const ProbRepresentation& r, const ConceptClass& c,
                                           double eps, double delta) {
    r.validate();
    c.validate();
    if (r.support.front().domain_size != c.domain_size)
        throw std::invalid_argument("distfree check: domain mismatch");
    if (r.support.size() > 12) throw cap_error("distfree check: support cap exceeded");
    if (c.domain_size > kLpCap) throw cap_error("distfree check: LP cap exceeded");

    // pool of distinct hypothesis rows; support sets become bitmasks over it
    std::vector<BitRow> pool;
    std::unordered_map<BitRow, std::size_t, BitRowHash> pool_idx;
    std::vector<std::uint64_t> mask(r.support.size(), 0);
    for (std::size_t i = 0; i < r.support.size(); ++i)
        for (const auto& row : r.support[i].hypotheses) {
            auto it = pool_idx.find(row);
            std::size_t id;
            if (it == pool_idx.end()) {
                id = pool.size();
                if (id >= kLpCap) throw cap_error("distfree check: LP cap exceeded");
                pool_idx.emplace(row, id);
                pool.push_back(row);
            } else {
                id = it->second;
            }
            mask[i] |= std::uint64_t(1) << id;
        }

    std::size_t k = r.support.size();
    DistfreeProbReport rep;
    rep.pass = true;
    rep.worst_value = -1.0;
    for (std::size_t f = 0; f < c.concepts.size(); ++f) {
        std::unordered_map<std::uint64_t, GameSolution> memo;
        for (std::size_t sub = 1; sub < (std::size_t(1) << k); ++sub) {
            Rat mass(0);
            std::uint64_t un = 0;
            for (std::size_t i = 0; i < k; ++i)
                if (sub >> i & 1) {
                    mass += r.probs.weights[i];
                    un |= mask[i];
                }
            if (!(mass.to_double() > delta)) continue;
            auto it = memo.find(un);
            if (it == memo.end()) {
                std::vector<const BitRow*> hs;
                for (std::size_t id = 0; id < pool.size(); ++id)
                    if (un >> id & 1) hs.push_back(&pool[id]);
                it = memo.emplace(un, solve_matrix_game(disagree_matrix(c.concepts[f], hs))).first;
            }
            double v = it->second.value;
            if (v > rep.worst_value) {
                rep.worst_value = v;
                rep.worst_f = f;
                rep.worst_dist = it->second.row_strategy;
                rep.worst_subfamily.clear();
                for (std::size_t i = 0; i < k; ++i)
                    if (sub >> i & 1) rep.worst_subfamily.push_back(i);
            }
            if (v > eps + kLpTol) rep.pass = false;
        }
    }
    return rep;
}

ProbRepresentation protocol_to_prob_rep(const OneWayProtocol& p) {
    p.validate();
    if (p.flavor == OneWayProtocol::Flavor::private_coin)
        throw std::invalid_argument("protocol_to_prob_rep: needs shared or no coins");
    if (p.alice_coins > (std::size_t(1) << 16))
        throw cap_error("protocol_to_prob_rep: coin space too large");
    ProbRepresentation r;
    for (std::size_t coin = 0; coin < p.alice_coins; ++coin) {
        DetRepresentation h;
        h.domain_size = p.n_bob_inputs;
        std::unordered_map<BitRow, bool, BitRowHash> seen;
        for (std::size_t msg = 0; msg < p.n_messages; ++msg) {
            BitRow row(p.n_bob_inputs);
            for (std::size_t x = 0; x < p.n_bob_inputs; ++x)
                if (p.bob_at(msg, x, coin)) row.set(x, true);
            if (!seen.emplace(row, true).second) continue;  // set semantics
            h.hypotheses.push_back(std::move(row));
        }
        if (ceil_log2(h.hypotheses.size()) > p.cost_bits)
            throw std::logic_error("protocol_to_prob_rep: size exceeds cost");  // unreachable
        r.support.push_back(std::move(h));
    }
    r.probs = p.coin_weights_a.empty() ? FiniteDistribution::uniform(p.alice_coins)
                                       : FiniteDistribution{p.coin_weights_a};
    r.validate();
    return r;
}

OneWayProtocol prob_rep_to_protocol(const ProbRepresentation& r, const ConceptClass& c,
                                    const FiniteDistribution& mu, const Rat& eps) {
    r.validate();
    c.validate();
    if (r.support.front().domain_size != c.domain_size)
        throw std::invalid_argument("prob_rep_to_protocol: domain mismatch");
    std::size_t nf = c.concepts.size(), nx = c.domain_size, k = r.support.size();
    if (mu.weights.size() != nf * nx)
        throw std::invalid_argument("prob_rep_to_protocol: mu size mismatch");
    mu.validate();

    // conditional over points given each concept (skip zero-mass concepts)
    std::vector<FiniteDistribution> cond(nf);
    std::vector<bool> has_mass(nf, false);
    for (std::size_t f = 0; f < nf; ++f) {
        Rat mass(0);
        for (std::size_t x = 0; x < nx; ++x) mass += mu.weights[f * nx + x];
        if (mass == Rat(0)) continue;
        has_mass[f] = true;
        cond[f].weights.resize(nx);
        for (std::size_t x = 0; x < nx; ++x) cond[f].weights[x] = mu.weights[f * nx + x] / mass;
    }

    OneWayProtocol p;
    p.flavor = OneWayProtocol::Flavor::public_coin;
    p.n_alice_inputs = nf;
    p.n_bob_inputs = nx;
    p.alice_coins = p.bob_coins = k;
    p.coin_weights_a = p.coin_weights_b = r.probs.weights;
    std::size_t biggest = 0;
    for (const auto& h : r.support) biggest = std::max(biggest, h.hypotheses.size());
    p.n_messages = biggest;
    p.cost_bits = ceil_log2(biggest);
    p.alice.assign(nf * k, 0);
    for (std::size_t f = 0; f < nf; ++f) {
        if (!has_mass[f]) continue;
        for (std::size_t i = 0; i < k; ++i) {
            std::uint32_t pick = 0;  // arbitrary-element convention: index 0
            const auto& hyp = r.support[i].hypotheses;
            for (std::size_t j = 0; j < hyp.size(); ++j)
                if (disagreement(c.concepts[f], hyp[j], cond[f]) <= eps) {
                    pick = std::uint32_t(j);
                    break;
                }
            p.alice[f * k + i] = pick;
        }
    }
    p.bob.assign(p.n_messages * nx * k, 0);
    for (std::size_t msg = 0; msg < p.n_messages; ++msg)
        for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t i = 0; i < k; ++i) {
                const auto& hyp = r.support[i].hypotheses;
                bool bit = msg < hyp.size() && hyp[msg].test(x);
                p.bob[(msg * nx + x) * k + i] = bit ? 1 : 0;
            }
    p.validate();
    return p;
}

namespace {

// largest-remainder rounding to exact rationals with denominator den
std::vector<Rat> rationalize(const std::vector<double>& p, std::int64_t den) {
    double total = std::accumulate(p.begin(), p.end(), 0.0);
    std::vector<std::int64_t> k(p.size());
    std::vector<std::pair<double, std::size_t>> frac(p.size());
    std::int64_t used = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double scaled = p[i] / total * double(den);
        k[i] = std::int64_t(std::floor(scaled));
        frac[i] = {scaled - double(k[i]), i};
        used += k[i];
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (std::int64_t r = 0; r < den - used; ++r) ++k[frac[std::size_t(r)].second];
    std::vector<Rat> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = Rat(k[i], den);
    return out;
}

}  // namespace

OneWayProtocol det_rep_to_protocol(const DetRepresentation& h, const ConceptClass& c, double eps) {
    h.validate();
    c.validate();
    if (h.domain_size != c.domain_size) throw std::invalid_argument("det_rep_to_protocol: domain mismatch");
    if (h.hypotheses.size() > kLpCap || c.domain_size > kLpCap)
        throw cap_error("det_rep_to_protocol: LP cap exceeded");
    std::vector<const BitRow*> hs;
    for (const auto& row : h.hypotheses) hs.push_back(&row);
    std::size_t nf = c.concepts.size(), nh = h.hypotheses.size();

    // per-concept optimal mixed strategies, rationalized exactly
    constexpr std::int64_t kDen = std::int64_t(1) << 30;
    std::vector<std::vector<Rat>> cdf(nf);  // prefix sums, cdf[f][j] = mass of first j
    for (std::size_t f = 0; f < nf; ++f) {
        auto g = solve_matrix_game(disagree_matrix(c.concepts[f], hs));
        if (g.value > eps + kLpTol)
            throw std::invalid_argument("det_rep_to_protocol: representation fails at eps");
        auto q = rationalize(g.col_strategy, kDen);
        cdf[f].resize(nh + 1);
        cdf[f][0] = Rat(0);
        for (std::size_t j = 0; j < nh; ++j) cdf[f][j + 1] = cdf[f][j] + q[j];
    }

    // shared coin space: the refinement of all per-concept inverse CDFs
    std::vector<Rat> cuts{Rat(0), Rat(1)};
    for (const auto& v : cdf)
        for (const auto& b : v) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    OneWayProtocol p;
    p.flavor = OneWayProtocol::Flavor::private_coin;
    p.n_alice_inputs = nf;
    p.n_bob_inputs = c.domain_size;
    p.n_messages = nh;
    p.cost_bits = ceil_log2(nh);
    p.alice_coins = cuts.size() - 1;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        p.coin_weights_a.push_back(cuts[i + 1] - cuts[i]);
    p.alice.resize(nf * p.alice_coins);
    for (std::size_t f = 0; f < nf; ++f)
        for (std::size_t i = 0; i < p.alice_coins; ++i) {
            // the hypothesis whose CDF interval contains [cuts[i], cuts[i+1])
            std::size_t j = std::size_t(std::upper_bound(cdf[f].begin(), cdf[f].end(), cuts[i]) -
                                        cdf[f].begin());
            p.alice[f * p.alice_coins + i] = std::uint32_t(j > 0 ? j - 1 : 0);
        }
    p.bob.resize(nh * c.domain_size);
    for (std::size_t j = 0; j < nh; ++j)
        for (std::size_t x = 0; x < c.domain_size; ++x)
            p.bob[j * c.domain_size + x] = h.hypotheses[j].test(x) ? 1 : 0;
    p.validate();

    auto worst = protocol_error_worst(p, EvalProblem::from_class(c));
    if (worst.value.to_double() > eps + 1e-6)
        throw std::runtime_error("det_rep_to_protocol: exact error check failed");
    return p;
}

DetRepresentation protocol_to_det_rep(const OneWayProtocol& p) {
    p.validate();
    if (p.bob_coins > (std::size_t(1) << 24))
        throw cap_error("protocol_to_det_rep: coin space too large");
    if (p.n_messages > (std::size_t(1) << 16))
        throw cap_error("protocol_to_det_rep: message space too large");
    DetRepresentation h;
    h.domain_size = p.n_bob_inputs;
    std::unordered_map<BitRow, bool, BitRowHash> seen;
    Rat half(1, 2);
    for (std::size_t msg = 0; msg < p.n_messages; ++msg) {
        BitRow row(p.n_bob_inputs);
        for (std::size_t x = 0; x < p.n_bob_inputs; ++x) {
            Rat mass1(0);
            if (p.coin_weights_b.empty()) {
                std::int64_t ones = 0;
                for (std::size_t rb = 0; rb < p.bob_coins; ++rb)
                    if (p.bob_at(msg, x, rb)) ++ones;
                mass1 = Rat(ones, std::int64_t(p.bob_coins));
            } else {
                for (std::size_t rb = 0; rb < p.bob_coins; ++rb)
                    if (p.bob_at(msg, x, rb)) mass1 += p.coin_weights_b[rb];
            }
            if (mass1 > half) row.set(x, true);  // exact majority, ties answer 0
        }
        if (seen.emplace(row, true).second) h.hypotheses.push_back(std::move(row));
    }
    h.validate();
    return h;
}

namespace {

struct CoverSearch {
    std::vector<std::uint64_t> cov;  // candidate -> universe mask
    std::uint64_t full = 0;
    std::size_t max_cov = 1;
    std::vector<std::size_t> best;

    std::vector<std::size_t> greedy() const {
        std::vector<std::size_t> picked;
        std::uint64_t uncov = full;
        while (uncov) {
            std::size_t arg = cov.size();
            int most = -1;
            for (std::size_t j = 0; j < cov.size(); ++j) {
                int gain = __builtin_popcountll(cov[j] & uncov);
                if (gain > most) {
                    most = gain;
                    arg = j;
                }
            }
            picked.push_back(arg);
            uncov &= ~cov[arg];
        }
        return picked;
    }

    void dfs(std::uint64_t uncov, std::vector<std::size_t>& chosen) {
        if (!uncov) {
            if (chosen.size() < best.size()) best = chosen;
            return;
        }
        std::size_t need = (std::size_t(__builtin_popcountll(uncov)) + max_cov - 1) / max_cov;
        if (chosen.size() + need >= best.size()) return;
        // branch on the uncovered element with the fewest candidates
        std::size_t pick = 0, fewest = SIZE_MAX;
        std::uint64_t rest = uncov;
        while (rest) {
            std::size_t e = std::size_t(__builtin_ctzll(rest));
            rest &= rest - 1;
            std::size_t cnt = 0;
            for (const auto& m : cov)
                if (m >> e & 1) ++cnt;
            if (cnt < fewest) {
                fewest = cnt;
                pick = e;
            }
        }
        for (std::size_t j = 0; j < cov.size(); ++j) {
            if (!(cov[j] >> pick & 1)) continue;
            chosen.push_back(j);
            dfs(uncov & ~cov[j], chosen);
            chosen.pop_back();
        }
    }
};

}  // namespace

CoverResult min_cover(const ConceptClass& c, const FiniteDistribution& d, const Rat& eps,
                      bool proper) {
    c.validate();
    if (d.weights.size() != c.domain_size) throw std::invalid_argument("min_cover: dist size mismatch");
    d.validate();

    // universe: distinct concept rows
    std::vector<BitRow> universe;
    std::unordered_map<BitRow, bool, BitRowHash> seen;
    for (const auto& f : c.concepts)
        if (seen.emplace(f, true).second) universe.push_back(f);

    // candidate pool
    std::vector<BitRow> pool;
    bool exact = true;
    if (proper) {
        pool = universe;
    } else if (c.domain_size <= 4) {
        for (std::size_t v = 0; v < (std::size_t(1) << c.domain_size); ++v) {
            BitRow row(c.domain_size);
            for (std::size_t x = 0; x < c.domain_size; ++x)
                if (v >> x & 1) row.set(x, true);
            pool.push_back(row);
        }
    } else {
        pool = universe;  // greedy fallback pool
        exact = false;
    }
    if (pool.size() > (std::size_t(1) << 16)) throw cap_error("min_cover: candidate pool too large");
    if (universe.size() > 64) exact = false;  // bitmask search width

    CoverResult out;
    out.cover.domain_size = c.domain_size;
    if (!exact) {
        // greedy over exact rational distances, flagged non-optimal
        std::vector<bool> covered(universe.size(), false);
        std::size_t left = universe.size();
        while (left) {
            std::size_t arg = pool.size(), most = 0;
            for (std::size_t j = 0; j < pool.size(); ++j) {
                std::size_t gain = 0;
                for (std::size_t e = 0; e < universe.size(); ++e)
                    if (!covered[e] && disagreement(pool[j], universe[e], d) <= eps) ++gain;
                if (gain > most) {
                    most = gain;
                    arg = j;
                }
            }
            if (arg == pool.size()) throw std::logic_error("min_cover: uncoverable element");
            for (std::size_t e = 0; e < universe.size(); ++e)
                if (!covered[e] && disagreement(pool[arg], universe[e], d) <= eps) {
                    covered[e] = true;
                    --left;
                }
            out.cover.hypotheses.push_back(pool[arg]);
        }
        out.optimal = false;
        return out;
    }

    CoverSearch cs;
    cs.cov.resize(pool.size(), 0);
    for (std::size_t j = 0; j < pool.size(); ++j)
        for (std::size_t e = 0; e < universe.size(); ++e)
            if (disagreement(pool[j], universe[e], d) <= eps) cs.cov[j] |= std::uint64_t(1) << e;
    cs.full = universe.size() == 64 ? ~std::uint64_t(0)
                                    : (std::uint64_t(1) << universe.size()) - 1;
    for (const auto& m : cs.cov)
        cs.max_cov = std::max<std::size_t>(cs.max_cov, std::size_t(__builtin_popcountll(m)));
    cs.best = cs.greedy();
    std::vector<std::size_t> chosen;
    cs.dfs(cs.full, chosen);
    std::sort(cs.best.begin(), cs.best.end());
    for (auto j : cs.best) out.cover.hypotheses.push_back(pool[j]);
    out.optimal = true;
    return out;
}

double CoverResult::drdim() const { return std::log2(double(cover.hypotheses.size())); }

PackingReport max_packing_and_duality(const ConceptClass& c, const FiniteDistribution& d,
                                      const Rat& eps, const Rat& delta,
                                      const ProbRepresentation* rep) {
    c.validate();
    d.validate();
    if (d.weights.size() != c.domain_size)
        throw std::invalid_argument("max_packing: dist size mismatch");
    PackingReport out;
    // greedy maximal packing: pairwise distance strictly above eps
    for (std::size_t f = 0; f < c.concepts.size(); ++f) {
        bool far = true;
        for (auto g : out.packing)
            if (!(disagreement(c.concepts[f], c.concepts[g], d) > eps)) {
                far = false;
                break;
            }
        if (far) out.packing.push_back(f);
    }
    // maximality makes the packing a cover at the same radius
    out.cover_check = true;
    for (const auto& f : c.concepts) {
        bool near = false;
        for (auto g : out.packing)
            if (disagreement(f, c.concepts[g], d) <= eps) {
                near = true;
                break;
            }
        if (!near) out.cover_check = false;
    }
    auto mc = min_cover(c, d, eps, true);
    out.min_cover_size = mc.cover.hypotheses.size();
    out.min_cover_optimal = mc.optimal;
    if (rep != nullptr) {
        out.rep_checked = true;
        out.rep_applicable = check_prob_rep_fixed_dist(*rep, c, d, eps / Rat(2), delta);
        out.expected_size = Rat(0);
        for (std::size_t i = 0; i < rep->support.size(); ++i)
            out.expected_size +=
                rep->probs.weights[i] * Rat(std::int64_t(rep->support[i].hypotheses.size()));
        Rat needed = (Rat(1) - delta) * Rat(std::int64_t(out.packing.size()));
        out.duality_holds = out.expected_size >= needed;
    }
    return out;
}

nlohmann::ordered_json det_rep_to_json(const DetRepresentation& h) {
    h.validate();
    nlohmann::ordered_json j;
    j["domain_size"] = h.domain_size;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : h.hypotheses) rows.push_back(row.to_string());
    j["hypotheses"] = rows;
    return j;
}

DetRepresentation det_rep_from_json(const nlohmann::ordered_json& j) {
    DetRepresentation h;
    h.domain_size = j.at("domain_size").get<std::size_t>();
    for (const auto& s : j.at("hypotheses"))
        h.hypotheses.push_back(BitRow::from_string(s.get<std::string>()));
    h.validate();
    return h;
}

nlohmann::ordered_json prob_rep_to_json(const ProbRepresentation& r) {
    r.validate();
    nlohmann::ordered_json j;
    auto sup = nlohmann::ordered_json::array();
    for (const auto& h : r.support) sup.push_back(det_rep_to_json(h));
    j["support"] = sup;
    auto probs = nlohmann::ordered_json::array();
    for (const auto& w : r.probs.weights) probs.push_back(w.to_string());
    j["probs"] = probs;
    return j;
}

ProbRepresentation prob_rep_from_json(const nlohmann::ordered_json& j) {
    ProbRepresentation r;
    for (const auto& s : j.at("support")) r.support.push_back(det_rep_from_json(s));
    for (const auto& s : j.at("probs")) r.probs.weights.push_back(Rat::parse(s.get<std::string>()));
    r.validate();
    return r;
}

}  // namespace dppac
