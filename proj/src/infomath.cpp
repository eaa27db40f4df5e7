#include "dppac/infomath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dppac/errors.hpp"

namespace dppac {

namespace {

double plog2p(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

EntropyReport entropy_of(const std::vector<double>& w, std::size_t space) {
    EntropyReport r;
    double sq = 0.0, top = 0.0;
    for (double p : w) {
        r.shannon += plog2p(p);
        sq += p * p;
        top = std::max(top, p);
    }
    r.renyi2 = -std::log2(sq);
    r.min_entropy = -std::log2(top);
    double cap = std::log2(double(space));
    if (!(cap + 1e-9 >= r.shannon && r.shannon + 1e-9 >= r.renyi2 &&
          r.renyi2 + 1e-9 >= r.min_entropy && r.min_entropy >= -1e-9))
        throw std::runtime_error("entropy ordering violated");
    return r;
}

std::vector<double> to_doubles(const std::vector<Rat>& w) {
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i].to_double();
    return out;
}

}  // namespace

void JointDistribution::validate() const {
    if (nx == 0 || ny == 0) throw std::invalid_argument("joint: empty axis");
    if (weights.size() != nx * ny) throw std::invalid_argument("joint: size mismatch");
    Rat sum(0);
    for (const auto& w : weights) {
        if (w < Rat(0)) throw std::invalid_argument("joint: negative weight");
        sum += w;
    }
    if (!(sum == Rat(1))) throw std::invalid_argument("joint: weights must sum to 1");
}

FiniteDistribution JointDistribution::marginal_x() const {
    FiniteDistribution d;
    d.weights.assign(nx, Rat(0));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) d.weights[x] += at(x, y);
    return d;
}

FiniteDistribution JointDistribution::marginal_y() const {
    FiniteDistribution d;
    d.weights.assign(ny, Rat(0));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) d.weights[y] += at(x, y);
    return d;
}

EntropyReport entropy_suite(const FiniteDistribution& d) {
    d.validate();
    return entropy_of(to_doubles(d.weights), d.weights.size());
}

JointEntropyReport entropy_suite(const JointDistribution& j) {
    j.validate();
    JointEntropyReport r;
    r.flat = entropy_of(to_doubles(j.weights), j.weights.size());
    auto my = j.marginal_y();
    auto mx = j.marginal_x();
    double hx = 0.0;
    for (const auto& w : mx.weights) hx += plog2p(w.to_double());
    for (std::size_t y = 0; y < j.ny; ++y) {
        double py = my.weights[y].to_double();
        if (py <= 0.0) continue;
        double hxy = 0.0;
        for (std::size_t x = 0; x < j.nx; ++x) hxy += plog2p(j.at(x, y).to_double() / py);
        r.cond_shannon += py * hxy;
    }
    r.mutual_information = hx - r.cond_shannon;
    return r;
}

DivergenceReport divergence_and_distance(const FiniteDistribution& p,
                                         const FiniteDistribution& q) {
    p.validate();
    q.validate();
    if (p.weights.size() != q.weights.size())
        throw std::invalid_argument("divergence: size mismatch");
    DivergenceReport r;
    r.statistical_distance = Rat(0);
    for (std::size_t i = 0; i < p.weights.size(); ++i) {
        Rat diff = p.weights[i] - q.weights[i];
        r.statistical_distance += diff < Rat(0) ? Rat(0) - diff : diff;
        if (p.weights[i] > Rat(0)) {
            if (q.weights[i] == Rat(0)) {
                r.finite = false;
                continue;
            }
            double pi = p.weights[i].to_double();
            r.kl_nats += pi * std::log(pi / q.weights[i].to_double());
        }
    }
    r.statistical_distance = r.statistical_distance / Rat(2);
    if (!r.finite) {
        r.kl_nats = std::numeric_limits<double>::infinity();
        r.kl_bits = r.kl_nats;
        r.pinsker_ok = true;  // the bound is vacuous
        return r;
    }
    r.kl_nats = std::max(0.0, r.kl_nats);  // guard float cancellation at p = q
    r.kl_bits = r.kl_nats / std::log(2.0);
    r.pinsker_ok = r.statistical_distance.to_double() <= std::sqrt(r.kl_nats / 2.0) + 1e-12;
    return r;
}

TailReport min_entropy_conditioning_tail(const JointDistribution& j, std::size_t s_bits,
                                         std::size_t t) {
    j.validate();
    if (s_bits > 20 || t > 20) throw cap_error("conditioning tail: exponent cap exceeded");
    auto my = j.marginal_y();
    std::size_t support = 0;
    for (const auto& w : my.weights)
        if (w > Rat(0)) ++support;
    if (support > (std::size_t(1) << s_bits))
        throw std::invalid_argument("conditioning tail: y support exceeds 2^s");

    auto mx = j.marginal_x();
    Rat maxmarg(0);
    for (const auto& w : mx.weights) maxmarg = std::max(maxmarg, w);
    // Hmin(x|y) < Hmin(x) - s - t is exactly maxcond_y > maxmarg * 2^(s+t)
    Rat cut = maxmarg * Rat(std::int64_t(1) << (s_bits + t));
    TailReport rep;
    rep.probability = Rat(0);
    rep.threshold = Rat(1, std::int64_t(1) << t);
    for (std::size_t y = 0; y < j.ny; ++y) {
        const Rat& py = my.weights[y];
        if (!(py > Rat(0))) continue;
        Rat best(0);
        for (std::size_t x = 0; x < j.nx; ++x) best = std::max(best, j.at(x, y));
        if (best / py > cut) rep.probability += py;
    }
    if (!(rep.probability < rep.threshold))
        throw std::runtime_error("conditioning tail: bound violated");
    return rep;
}

double augindex_bound(std::size_t d, double eps) {
    if (!(eps >= 0.0 && eps <= 0.5)) throw std::invalid_argument("augindex_bound: eps outside [0, 1/2]");
    double h = plog2p(eps) + plog2p(1.0 - eps);
    return (1.0 - h) * double(d);
}

}  // namespace dppac
