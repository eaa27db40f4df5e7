#include "dppac/commsim.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "dppac/errors.hpp"
#include "dppac/stats.hpp"

namespace dppac {

namespace {

std::size_t ceil_log2(std::size_t x) {
    std::size_t c = 0;
    while ((std::size_t(1) << c) < x) ++c;
    return c;
}

Rat coin_weight(const std::vector<Rat>& w, std::size_t n, std::size_t i) {
    return w.empty() ? Rat(1, std::int64_t(n)) : w[i];
}

// CDF sampling; uniform fast path keeps exact equiprobability.
std::size_t sample_index(Rng& rng, const std::vector<Rat>& w, std::size_t n) {
    if (w.empty()) return std::size_t(rng.next_below(n));
    double u = rng.next_unit(), acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += w[i].to_double();
        if (u < acc) return i;
    }
    return n - 1;
}

}  // namespace

void OneWayProtocol::validate() const {
    if (n_alice_inputs == 0 || n_bob_inputs == 0) throw std::invalid_argument("protocol: empty input space");
    if (alice_coins == 0 || bob_coins == 0) throw std::invalid_argument("protocol: empty coin space");
    if (flavor == Flavor::deterministic && (alice_coins != 1 || bob_coins != 1))
        throw std::invalid_argument("protocol: deterministic flavor with coins");
    if (flavor == Flavor::public_coin && alice_coins != bob_coins)
        throw std::invalid_argument("protocol: public coin spaces must coincide");
    if (n_messages > (std::size_t(1) << cost_bits))
        throw std::invalid_argument("protocol: cost too small for message count");
    if (alice.size() != n_alice_inputs * alice_coins) throw std::invalid_argument("protocol: alice table size");
    if (bob.size() != n_messages * n_bob_inputs * bob_coins) throw std::invalid_argument("protocol: bob table size");
    for (auto m : alice)
        if (m >= n_messages) throw std::invalid_argument("protocol: message id out of range");
    if (!coin_weights_a.empty() && coin_weights_a.size() != alice_coins)
        throw std::invalid_argument("protocol: alice coin weights size");
    if (!coin_weights_b.empty() && coin_weights_b.size() != bob_coins)
        throw std::invalid_argument("protocol: bob coin weights size");
}

EvalProblem EvalProblem::from_class(const ConceptClass& c) {
    EvalProblem g;
    g.n_alice = c.concepts.size();
    g.n_bob = c.domain_size;
    g.table.resize(g.n_alice * g.n_bob);
    for (std::size_t f = 0; f < g.n_alice; ++f)
        for (std::size_t x = 0; x < g.n_bob; ++x)
            g.table[f * g.n_bob + x] = c.concepts[f].test(x) ? 1 : 0;
    return g;
}

EvalProblem EvalProblem::augindex(std::size_t d) {
    if (d == 0 || d > 20) throw std::invalid_argument("augindex: d out of range");
    EvalProblem g;
    g.n_alice = std::size_t(1) << d;
    g.n_bob = (std::size_t(1) << d) - 1;  // (i, prefix) at (2^(i-1)-1) + prefix
    g.table.assign(g.n_alice * g.n_bob, -1);
    for (std::size_t x = 0; x < g.n_alice; ++x)
        for (std::size_t i = 1; i <= d; ++i) {
            std::size_t prefix = x >> (d - i + 1);
            std::size_t col = (std::size_t(1) << (i - 1)) - 1 + prefix;
            g.table[x * g.n_bob + col] = std::int8_t((x >> (d - i)) & 1);
        }
    return g;
}

FiniteDistribution uniform_promise(const EvalProblem& g) {
    std::int64_t cnt = 0;
    for (auto t : g.table)
        if (t >= 0) ++cnt;
    if (cnt == 0) throw std::invalid_argument("uniform_promise: empty promise");
    FiniteDistribution mu;
    mu.weights.assign(g.table.size(), Rat(0));
    for (std::size_t i = 0; i < g.table.size(); ++i)
        if (g.table[i] >= 0) mu.weights[i] = Rat(1, cnt);
    return mu;
}

Rat pair_error(const OneWayProtocol& p, const EvalProblem& g, std::size_t f, std::size_t x) {
    std::int8_t want = g.at(f, x);
    if (want < 0) return Rat(0);  // off-promise pairs carry no error
    constexpr std::size_t kCoinCap = std::size_t(1) << 24;
    bool uniform = p.coin_weights_a.empty() && p.coin_weights_b.empty();
    if (p.flavor == OneWayProtocol::Flavor::public_coin) {
        if (p.alice_coins > kCoinCap) throw cap_error("pair_error: coin space too large");
        if (uniform) {
            std::int64_t bad = 0;
            for (std::size_t r = 0; r < p.alice_coins; ++r)
                if (p.bob_at(p.alice_at(f, r), x, r) != want) ++bad;
            return Rat(bad, std::int64_t(p.alice_coins));
        }
        Rat err(0);
        for (std::size_t r = 0; r < p.alice_coins; ++r)
            if (p.bob_at(p.alice_at(f, r), x, r) != want)
                err += coin_weight(p.coin_weights_a, p.alice_coins, r);
        return err;
    }
    if (p.alice_coins * p.bob_coins > kCoinCap) throw cap_error("pair_error: coin space too large");
    if (uniform) {
        std::int64_t bad = 0;
        for (std::size_t ra = 0; ra < p.alice_coins; ++ra) {
            std::uint32_t msg = p.alice_at(f, ra);
            for (std::size_t rb = 0; rb < p.bob_coins; ++rb)
                if (p.bob_at(msg, x, rb) != want) ++bad;
        }
        return Rat(bad, std::int64_t(p.alice_coins * p.bob_coins));
    }
    Rat err(0);
    for (std::size_t ra = 0; ra < p.alice_coins; ++ra) {
        std::uint32_t msg = p.alice_at(f, ra);
        Rat wa = coin_weight(p.coin_weights_a, p.alice_coins, ra);
        for (std::size_t rb = 0; rb < p.bob_coins; ++rb)
            if (p.bob_at(msg, x, rb) != want)
                err += wa * coin_weight(p.coin_weights_b, p.bob_coins, rb);
    }
    return err;
}

ErrorReport protocol_error_worst(const OneWayProtocol& p, const EvalProblem& g) {
    p.validate();
    ErrorReport rep;
    rep.value = Rat(0);
    for (std::size_t f = 0; f < g.n_alice; ++f)
        for (std::size_t x = 0; x < g.n_bob; ++x)
            if (g.at(f, x) >= 0) rep.value = std::max(rep.value, pair_error(p, g, f, x));
    return rep;
}

ErrorReport protocol_error_dist(const OneWayProtocol& p, const EvalProblem& g,
                                const FiniteDistribution& mu) {
    p.validate();
    mu.validate();
    if (mu.weights.size() != g.n_alice * g.n_bob)
        throw std::invalid_argument("protocol_error: mu size mismatch");
    ErrorReport rep;
    rep.value = Rat(0);
    for (std::size_t f = 0; f < g.n_alice; ++f)
        for (std::size_t x = 0; x < g.n_bob; ++x) {
            const Rat& w = mu.weights[f * g.n_bob + x];
            if (w == Rat(0)) continue;
            if (g.at(f, x) < 0)
                throw std::invalid_argument("protocol_error: mu puts mass off the promise");
            rep.value += w * pair_error(p, g, f, x);
        }
    return rep;
}

namespace {

// one random run of the protocol on a fixed pair
bool run_once(const OneWayProtocol& p, std::size_t f, std::size_t x, Rng& rng) {
    if (p.flavor == OneWayProtocol::Flavor::public_coin) {
        std::size_t r = sample_index(rng, p.coin_weights_a, p.alice_coins);
        return p.bob_at(p.alice_at(f, r), x, r);
    }
    std::size_t ra = p.alice_coins == 1 ? 0 : sample_index(rng, p.coin_weights_a, p.alice_coins);
    std::size_t rb = p.bob_coins == 1 ? 0 : sample_index(rng, p.coin_weights_b, p.bob_coins);
    return p.bob_at(p.alice_at(f, ra), x, rb);
}

}  // namespace

ErrorReport protocol_error_worst_mc(const OneWayProtocol& p, const EvalProblem& g,
                                    std::uint64_t trials, std::uint64_t seed) {
    p.validate();
    if (trials == 0) throw std::invalid_argument("protocol_error: zero trials");
    Rng root(seed);
    ErrorReport rep;
    rep.exact = false;
    rep.trials = trials;
    rep.estimate = -1.0;
    for (std::size_t f = 0; f < g.n_alice; ++f)
        for (std::size_t x = 0; x < g.n_bob; ++x) {
            std::int8_t want = g.at(f, x);
            if (want < 0) continue;
            Rng rng = root.child(f * g.n_bob + x);
            std::uint64_t bad = 0;
            for (std::uint64_t t = 0; t < trials; ++t)
                if (run_once(p, f, x, rng) != bool(want)) ++bad;
            double est = double(bad) / double(trials);
            if (est > rep.estimate) {
                rep.estimate = est;
                auto ci = clopper_pearson(bad, trials, 0.99);
                rep.ci_low = ci.first;
                rep.ci_high = ci.second;
            }
        }
    return rep;
}

ErrorReport protocol_error_dist_mc(const OneWayProtocol& p, const EvalProblem& g,
                                   const FiniteDistribution& mu, std::uint64_t trials,
                                   std::uint64_t seed) {
    p.validate();
    mu.validate();
    if (trials == 0) throw std::invalid_argument("protocol_error: zero trials");
    if (mu.weights.size() != g.n_alice * g.n_bob)
        throw std::invalid_argument("protocol_error: mu size mismatch");
    std::vector<double> cdf(mu.weights.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < mu.weights.size(); ++i) {
        acc += mu.weights[i].to_double();
        cdf[i] = acc;
    }
    Rng rng(seed);
    std::uint64_t bad = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        double u = rng.next_unit();
        std::size_t cell = std::size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (cell >= cdf.size()) cell = cdf.size() - 1;
        std::size_t f = cell / g.n_bob, x = cell % g.n_bob;
        std::int8_t want = g.at(f, x);
        if (want < 0) continue;  // off-promise cells must have zero mass
        if (run_once(p, f, x, rng) != bool(want)) ++bad;
    }
    ErrorReport rep;
    rep.exact = false;
    rep.trials = trials;
    rep.estimate = double(bad) / double(trials);
    auto ci = clopper_pearson(bad, trials, 0.99);
    rep.ci_low = ci.first;
    rep.ci_high = ci.second;
    return rep;
}

OneWayProtocol index_protocol(const EvalProblem& g) {
    OneWayProtocol p;
    p.flavor = OneWayProtocol::Flavor::deterministic;
    p.n_alice_inputs = g.n_alice;
    p.n_bob_inputs = g.n_bob;
    p.n_messages = g.n_alice;
    p.cost_bits = ceil_log2(g.n_alice);
    p.alice.resize(g.n_alice);
    for (std::size_t f = 0; f < g.n_alice; ++f) p.alice[f] = std::uint32_t(f);
    p.bob.resize(g.n_alice * g.n_bob);
    for (std::size_t f = 0; f < g.n_alice; ++f)
        for (std::size_t x = 0; x < g.n_bob; ++x)
            p.bob[f * g.n_bob + x] = g.at(f, x) > 0 ? 1 : 0;
    return p;
}

OptimalProtocol optimal_distributional_protocol(const EvalProblem& g, const FiniteDistribution& mu,
                                                std::size_t budget_bits) {
    mu.validate();
    if (mu.weights.size() != g.n_alice * g.n_bob)
        throw std::invalid_argument("optimal protocol: mu size mismatch");
    // one above the stated cap: the d=4 augmented-index instance has 16 rows
    if (g.n_alice > 16) throw cap_error("optimal protocol: too many rows");
    if (g.n_bob > 32) throw cap_error("optimal protocol: too many columns");
    std::size_t n = g.n_alice, nx = g.n_bob;

    // common denominator so the DP runs in integers
    std::int64_t L = 1;
    for (const auto& w : mu.weights) {
        std::int64_t d = w.den / std::gcd(w.den, L);
        __int128 nl = __int128(L) * d;
        if (nl > (std::int64_t(1) << 62)) throw cap_error("optimal protocol: weight denominators too large");
        L = std::int64_t(nl);
    }
    std::vector<std::int64_t> m0(n * nx, 0), m1(n * nx, 0);
    for (std::size_t f = 0; f < n; ++f)
        for (std::size_t x = 0; x < nx; ++x) {
            const Rat& w = mu.weights[f * nx + x];
            std::int8_t v = g.at(f, x);
            if (v < 0) {
                if (!(w == Rat(0)))
                    throw std::invalid_argument("optimal protocol: mu puts mass off the promise");
                continue;
            }
            std::int64_t scaled = w.num * (L / w.den);
            (v == 0 ? m0 : m1)[f * nx + x] = scaled;
        }

    std::size_t full = (std::size_t(1) << n) - 1;
    // cost of answering one block: mass of the minority label per column
    std::vector<std::int64_t> cost(full + 1, 0);
    for (std::size_t S = 1; S <= full; ++S) {
        std::int64_t c = 0;
        for (std::size_t x = 0; x < nx; ++x) {
            std::int64_t a0 = 0, a1 = 0;
            for (std::size_t f = 0; f < n; ++f)
                if (S >> f & 1) {
                    a0 += m0[f * nx + x];
                    a1 += m1[f * nx + x];
                }
            c += std::min(a0, a1);
        }
        cost[S] = c;
    }

    // doubling DP: best[l][S] = least error covering S with <= 2^l blocks
    std::size_t levels = std::min(budget_bits, ceil_log2(n));
    std::vector<std::vector<std::int64_t>> best(levels + 1, cost);
    best[0][0] = 0;
    for (std::size_t l = 1; l <= levels; ++l) {
        best[l] = best[l - 1];
        for (std::size_t S = 1; S <= full; ++S) {
            std::int64_t b = best[l][S];
            for (std::size_t T = (S - 1) & S;; T = (T - 1) & S) {
                if (T != 0)
                    b = std::min(b, best[l - 1][T] + best[l - 1][S ^ T]);
                if (T == 0) break;
            }
            best[l][S] = b;
        }
    }

    // extract a partition achieving best[levels][full]
    std::vector<std::size_t> blocks;
    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t S, std::size_t l) {
        if (S == 0) return;
        if (l == 0 || best[l][S] == cost[S]) {
            blocks.push_back(S);
            return;
        }
        for (std::size_t T = (S - 1) & S;; T = (T - 1) & S) {
            if (T != 0 && best[l - 1][T] + best[l - 1][S ^ T] == best[l][S]) {
                split(T, l - 1);
                split(S ^ T, l - 1);
                return;
            }
            if (T == 0) break;
        }
        blocks.push_back(S);  // S itself is optimal as one block
    };
    split(full, levels);

    OptimalProtocol out;
    out.error = Rat(best[levels][full], L);
    auto& p = out.protocol;
    p.flavor = OneWayProtocol::Flavor::deterministic;
    p.n_alice_inputs = n;
    p.n_bob_inputs = nx;
    p.n_messages = blocks.size();
    p.cost_bits = ceil_log2(blocks.size());
    p.alice.assign(n, 0);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (std::size_t f = 0; f < n; ++f)
            if (blocks[bi] >> f & 1) p.alice[f] = std::uint32_t(bi);
    p.bob.assign(blocks.size() * nx, 0);
    for (std::size_t bi = 0; bi < blocks.size(); ++bi)
        for (std::size_t x = 0; x < nx; ++x) {
            std::int64_t a0 = 0, a1 = 0;
            for (std::size_t f = 0; f < n; ++f)
                if (blocks[bi] >> f & 1) {
                    a0 += m0[f * nx + x];
                    a1 += m1[f * nx + x];
                }
            p.bob[bi * nx + x] = a1 > a0 ? 1 : 0;  // tie answers 0
        }
    return out;
}

std::size_t dist_cc(const EvalProblem& g, const FiniteDistribution& mu, const Rat& eps) {
    for (std::size_t budget = 0;; ++budget) {
        auto opt = optimal_distributional_protocol(g, mu, budget);
        if (opt.error <= eps) return budget;
        if (budget >= ceil_log2(g.n_alice))
            throw std::logic_error("dist_cc: full budget still errs");  // unreachable
    }
}

namespace {

std::vector<Rat> kron(const std::vector<Rat>& w, std::size_t n, std::size_t k) {
    if (w.empty()) return {};  // uniform stays uniform
    std::vector<Rat> out{Rat(1)};
    for (std::size_t j = 0; j < k; ++j) {
        std::vector<Rat> next(out.size() * n);
        for (std::size_t a = 0; a < out.size(); ++a)
            for (std::size_t i = 0; i < n; ++i) next[i * out.size() + a] = out[a] * w[i];
        out = std::move(next);
    }
    return out;
}

}  // namespace

OneWayProtocol amplify(const OneWayProtocol& p, std::size_t k) {
    p.validate();
    if (k % 2 == 0) throw std::invalid_argument("amplify: k must be odd");
    if (k == 1) return p;
    constexpr std::size_t kCap = std::size_t(1) << 24;
    auto powcap = [&](std::size_t base, std::size_t exp) {
        std::size_t r = 1;
        for (std::size_t i = 0; i < exp; ++i) {
            if (base != 0 && r > kCap / base) throw cap_error("amplify: coin or message budget exceeded");
            r *= base;
        }
        return r;
    };
    OneWayProtocol q;
    q.flavor = p.flavor;
    q.n_alice_inputs = p.n_alice_inputs;
    q.n_bob_inputs = p.n_bob_inputs;
    std::size_t M = p.n_messages;
    q.n_messages = powcap(M, k);
    q.cost_bits = k * p.cost_bits;
    q.alice_coins = powcap(p.alice_coins, k);
    q.bob_coins = p.flavor == OneWayProtocol::Flavor::public_coin ? q.alice_coins
                                                                  : powcap(p.bob_coins, k);
    q.coin_weights_a = kron(p.coin_weights_a, p.alice_coins, k);
    q.coin_weights_b = p.flavor == OneWayProtocol::Flavor::public_coin
                           ? q.coin_weights_a
                           : kron(p.coin_weights_b, p.bob_coins, k);
    if (q.n_messages * q.n_bob_inputs * q.bob_coins > (std::size_t(1) << 26) ||
        q.n_alice_inputs * q.alice_coins > (std::size_t(1) << 26))
        throw cap_error("amplify: table budget exceeded");

    q.alice.resize(q.n_alice_inputs * q.alice_coins);
    for (std::size_t f = 0; f < q.n_alice_inputs; ++f)
        for (std::size_t ra = 0; ra < q.alice_coins; ++ra) {
            std::size_t rem = ra, msg = 0, stride = 1;
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t raj = rem % p.alice_coins;
                rem /= p.alice_coins;
                msg += std::size_t(p.alice_at(f, raj)) * stride;
                stride *= M;
            }
            q.alice[f * q.alice_coins + ra] = std::uint32_t(msg);
        }
    q.bob.resize(q.n_messages * q.n_bob_inputs * q.bob_coins);
    for (std::size_t msg = 0; msg < q.n_messages; ++msg)
        for (std::size_t x = 0; x < q.n_bob_inputs; ++x)
            for (std::size_t rb = 0; rb < q.bob_coins; ++rb) {
                std::size_t mrem = msg, rrem = rb, ones = 0;
                for (std::size_t j = 0; j < k; ++j) {
                    std::size_t mj = mrem % M;
                    mrem /= M;
                    std::size_t rbj = rrem % p.bob_coins;
                    rrem /= p.bob_coins;
                    ones += p.bob_at(std::uint32_t(mj), x, rbj);
                }
                q.bob[(msg * q.n_bob_inputs + x) * q.bob_coins + rb] = ones > k / 2 ? 1 : 0;
            }
    return q;
}

OneWayProtocol newman_sparsify(const OneWayProtocol& p, std::size_t m, std::uint64_t seed) {
    if (m == 0) throw std::invalid_argument("newman_sparsify: m must be positive");
    if (p.flavor != OneWayProtocol::Flavor::public_coin)
        throw std::invalid_argument("newman_sparsify: protocol must be public-coin");
    Rng rng(seed);
    std::vector<std::size_t> seeds(m);
    for (std::size_t j = 0; j < m; ++j) seeds[j] = sample_index(rng, p.coin_weights_a, p.alice_coins);
    return newman_sparsify_explicit(p, seeds);
}

OneWayProtocol newman_sparsify_explicit(const OneWayProtocol& p,
                                        const std::vector<std::size_t>& seeds) {
    p.validate();
    if (p.flavor != OneWayProtocol::Flavor::public_coin)
        throw std::invalid_argument("newman_sparsify: protocol must be public-coin");
    if (seeds.empty()) throw std::invalid_argument("newman_sparsify: empty seed list");
    std::size_t m = seeds.size(), M = p.n_messages;
    OneWayProtocol q;
    q.flavor = OneWayProtocol::Flavor::private_coin;
    q.n_alice_inputs = p.n_alice_inputs;
    q.n_bob_inputs = p.n_bob_inputs;
    // Bob cannot see Alice's private seed choice, so its index travels in
    // the message: cost grows by ceil(log2 m) against the public original.
    q.n_messages = m * M;
    q.cost_bits = p.cost_bits + ceil_log2(m);
    q.alice_coins = m;
    q.bob_coins = 1;
    q.alice.resize(q.n_alice_inputs * m);
    for (std::size_t f = 0; f < q.n_alice_inputs; ++f)
        for (std::size_t j = 0; j < m; ++j)
            q.alice[f * m + j] = std::uint32_t(j * M + p.alice_at(f, seeds[j]));
    q.bob.resize(q.n_messages * q.n_bob_inputs);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t msg = 0; msg < M; ++msg)
            for (std::size_t x = 0; x < q.n_bob_inputs; ++x)
                q.bob[(j * M + msg) * q.n_bob_inputs + x] = p.bob_at(std::uint32_t(msg), x, seeds[j]);
    return q;
}

OneWayProtocol equality_protocol(std::size_t b, std::size_t k) {
    if (b == 0 || k == 0) throw std::invalid_argument("equality_protocol: b, k must be positive");
    if (b * k > 24) throw cap_error("equality_protocol: b*k cap exceeded");
    if (b + b * k + k > 26) throw cap_error("equality_protocol: table budget exceeded");
    std::size_t n = std::size_t(1) << b;
    std::size_t R = std::size_t(1) << (b * k);
    OneWayProtocol p;
    p.flavor = OneWayProtocol::Flavor::public_coin;
    p.n_alice_inputs = n;
    p.n_bob_inputs = n;
    p.n_messages = std::size_t(1) << k;
    p.cost_bits = k;
    p.alice_coins = p.bob_coins = R;
    auto hash = [&](std::size_t z, std::size_t r) {
        std::size_t msg = 0;
        for (std::size_t j = 0; j < k; ++j) {
            std::size_t rj = (r >> (j * b)) & (n - 1);
            msg |= std::size_t(__builtin_popcountll(z & rj) & 1) << j;
        }
        return msg;
    };
    p.alice.resize(n * R);
    for (std::size_t z = 0; z < n; ++z)
        for (std::size_t r = 0; r < R; ++r) p.alice[z * R + r] = std::uint32_t(hash(z, r));
    p.bob.resize(p.n_messages * n * R);
    for (std::size_t msg = 0; msg < p.n_messages; ++msg)
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t r = 0; r < R; ++r)
                p.bob[(msg * n + x) * R + r] = (hash(x, r) == msg) ? 1 : 0;
    return p;
}

nlohmann::ordered_json protocol_to_json(const OneWayProtocol& p) {
    p.validate();
    nlohmann::ordered_json j;
    switch (p.flavor) {
        case OneWayProtocol::Flavor::deterministic: j["flavor"] = "deterministic"; break;
        case OneWayProtocol::Flavor::private_coin: j["flavor"] = "private_coin"; break;
        case OneWayProtocol::Flavor::public_coin: j["flavor"] = "public_coin"; break;
    }
    j["n_alice_inputs"] = p.n_alice_inputs;
    j["n_bob_inputs"] = p.n_bob_inputs;
    j["n_messages"] = p.n_messages;
    j["cost_bits"] = p.cost_bits;
    j["alice_coins"] = p.alice_coins;
    j["bob_coins"] = p.bob_coins;
    auto weights = [](const std::vector<Rat>& w) {
        nlohmann::ordered_json a = nlohmann::ordered_json::array();
        for (const auto& r : w) a.push_back(r.to_string());
        return a;
    };
    if (!p.coin_weights_a.empty()) j["coin_weights_a"] = weights(p.coin_weights_a);
    if (!p.coin_weights_b.empty()) j["coin_weights_b"] = weights(p.coin_weights_b);
    j["alice"] = p.alice;
    j["bob"] = p.bob;
    return j;
}

OneWayProtocol protocol_from_json(const nlohmann::ordered_json& j) {
    OneWayProtocol p;
    std::string fl = j.at("flavor").get<std::string>();
    if (fl == "deterministic") p.flavor = OneWayProtocol::Flavor::deterministic;
    else if (fl == "private_coin") p.flavor = OneWayProtocol::Flavor::private_coin;
    else if (fl == "public_coin") p.flavor = OneWayProtocol::Flavor::public_coin;
    else throw std::invalid_argument("protocol: bad flavor");
    p.n_alice_inputs = j.at("n_alice_inputs").get<std::size_t>();
    p.n_bob_inputs = j.at("n_bob_inputs").get<std::size_t>();
    p.n_messages = j.at("n_messages").get<std::size_t>();
    p.cost_bits = j.at("cost_bits").get<std::size_t>();
    p.alice_coins = j.at("alice_coins").get<std::size_t>();
    p.bob_coins = j.at("bob_coins").get<std::size_t>();
    auto weights = [](const nlohmann::ordered_json& a) {
        std::vector<Rat> w;
        for (const auto& s : a) w.push_back(Rat::parse(s.get<std::string>()));
        return w;
    };
    if (j.contains("coin_weights_a")) p.coin_weights_a = weights(j.at("coin_weights_a"));
    if (j.contains("coin_weights_b")) p.coin_weights_b = weights(j.at("coin_weights_b"));
    p.alice = j.at("alice").get<std::vector<std::uint32_t>>();
    p.bob = j.at("bob").get<std::vector<std::uint8_t>>();
    p.validate();
    return p;
}

}  // namespace dppac
