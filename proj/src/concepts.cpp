#include "dppac/concepts.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace dppac {

namespace {

std::string join_ints(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += '_';
        s += std::to_string(v[i]);
    }
    return s;
}

bool is_prime(std::int64_t p) {
    if (p < 2) return false;
    for (std::int64_t q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

// Domain points of I_b^d in index order; coordinate 1 is the fastest-varying.
std::vector<std::vector<std::int64_t>> grid_points(std::int64_t b, std::int64_t d) {
    std::int64_t side = std::int64_t(1) << b;
    std::size_t n = 1;
    for (std::int64_t i = 0; i < d; ++i) n *= std::size_t(side);
    std::vector<std::vector<std::int64_t>> pts(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::vector<std::int64_t> x(d);
        std::size_t rem = idx;
        for (std::int64_t i = 0; i < d; ++i) {
            x[std::size_t(i)] = std::int64_t(rem % std::size_t(side));
            rem /= std::size_t(side);
        }
        pts[idx] = std::move(x);
    }
    return pts;
}

ConceptClass make_point(std::int64_t b) {
    std::size_t n = std::size_t(1) << b;
    ConceptClass c;
    c.domain_size = n;
    c.kind = "point";
    c.kind_params = {b};
    for (std::size_t i = 0; i < n; ++i) c.point_coords.push_back({std::int64_t(i)});
    for (std::size_t i = 0; i < n; ++i) {
        BitRow r(n);
        r.set(i, true);
        c.concepts.push_back(std::move(r));
        c.labels.push_back("p_" + std::to_string(i));
        c.concept_params.push_back({std::int64_t(i)});
    }
    return c;
}

ConceptClass make_threshold(std::int64_t b) {
    std::size_t n = std::size_t(1) << b;
    ConceptClass c;
    c.domain_size = n;
    c.kind = "threshold";
    c.kind_params = {b};
    for (std::size_t i = 0; i < n; ++i) c.point_coords.push_back({std::int64_t(i)});
    for (std::size_t x = 0; x < n; ++x) {
        BitRow r(n);
        for (std::size_t y = 0; y < n; ++y) r.set(y, y >= x);
        c.concepts.push_back(std::move(r));
        c.labels.push_back("t_" + std::to_string(x));
        c.concept_params.push_back({std::int64_t(x)});
    }
    return c;
}

ConceptClass make_line(std::int64_t p) {
    std::size_t n = std::size_t(p) * std::size_t(p);
    ConceptClass c;
    c.domain_size = n;
    c.kind = "line";
    c.kind_params = {p};
    for (std::int64_t x = 0; x < p; ++x)
        for (std::int64_t y = 0; y < p; ++y) c.point_coords.push_back({x, y});
    for (std::int64_t a = 0; a < p; ++a) {
        for (std::int64_t b = 0; b < p; ++b) {
            BitRow r(n);
            for (std::int64_t x = 0; x < p; ++x) {
                std::int64_t y = (a * x + b) % p;
                r.set(std::size_t(x * p + y), true);
            }
            c.concepts.push_back(std::move(r));
            c.labels.push_back("l_" + std::to_string(a) + "_" + std::to_string(b));
            c.concept_params.push_back({a, b});
        }
    }
    return c;
}

ConceptClass make_box(std::int64_t b, std::int64_t d) {
    std::int64_t side = std::int64_t(1) << b;
    // Distinct non-empty boxes are exactly the coordinatewise s <= t pairs;
    // budget-check their count before enumerating anything.
    double per_axis = double(side) * double(side + 1) / 2.0;
    double predicted = 1.0;
    for (std::int64_t i = 0; i < d; ++i) predicted *= per_axis;
    if (predicted + 1 > double(1 << 20)) throw cap_error("box enumeration budget exceeded");

    auto pts = grid_points(b, d);
    std::size_t n = pts.size();
    ConceptClass c;
    c.domain_size = n;
    c.kind = "box";
    c.kind_params = {b, d};
    c.point_coords = pts;

    // Sweep every (s,t) pair in lex order on the concatenated tuple so the
    // first parameter tuple seen for a truth table is the canonical name.
    std::size_t pairs = n * n;
    bool have_empty = false;
    for (std::size_t code = 0; code < pairs; ++code) {
        // code enumerates (s,t) lex: s varies slowest, within s the tuple t;
        // lex order on a tuple means leftmost coordinate most significant.
        std::size_t dim = std::size_t(d);
        std::vector<std::int64_t> s(dim), t(dim);
        std::size_t rem = code;
        for (std::int64_t i = d - 1; i >= 0; --i) {
            t[std::size_t(i)] = std::int64_t(rem % std::size_t(side));
            rem /= std::size_t(side);
        }
        for (std::int64_t i = d - 1; i >= 0; --i) {
            s[std::size_t(i)] = std::int64_t(rem % std::size_t(side));
            rem /= std::size_t(side);
        }
        bool empty = false;
        for (std::int64_t i = 0; i < d; ++i)
            if (s[std::size_t(i)] > t[std::size_t(i)]) { empty = true; break; }
        if (empty && have_empty) continue;
        BitRow r(n);
        if (!empty) {
            for (std::size_t idx = 0; idx < n; ++idx) {
                bool in = true;
                for (std::int64_t i = 0; i < d; ++i) {
                    std::int64_t xi = pts[idx][std::size_t(i)];
                    if (xi < s[std::size_t(i)] || xi > t[std::size_t(i)]) { in = false; break; }
                }
                if (in) r.set(idx, true);
            }
        } else {
            have_empty = true;
        }
        std::vector<std::int64_t> par = s;
        par.insert(par.end(), t.begin(), t.end());
        c.concepts.push_back(std::move(r));
        c.labels.push_back("box_" + join_ints(par));
        c.concept_params.push_back(std::move(par));
    }
    return c;
}

ConceptClass make_halfspace(std::int64_t b, std::int64_t d) {
    // Sweep capped where the weight-tuple count stays enumerable.
    bool feasible = (d == 1 && b <= 8) || (d == 2 && b <= 3) || (d == 3 && b <= 1);
    if (!feasible) throw cap_error("halfspace sweep budget exceeded");

    std::int64_t side = std::int64_t(1) << b;
    std::int64_t W = std::int64_t(3) << (b * (d + 1));
    std::int64_t B = W * d * (side - 1);  // |w.x| <= B for all grid x

    auto pts = grid_points(b, d);
    std::size_t n = pts.size();
    ConceptClass c;
    c.domain_size = n;
    c.kind = "halfspace";
    c.kind_params = {b, d};
    c.point_coords = pts;

    std::unordered_set<BitRow, BitRowHash> seen;
    std::vector<std::int64_t> w(std::size_t(d), -W);
    std::vector<std::int64_t> dots(n);
    std::vector<std::pair<std::int64_t, std::size_t>> order(n);
    for (;;) {
        for (std::size_t idx = 0; idx < n; ++idx) {
            std::int64_t dot = 0;
            for (std::int64_t i = 0; i < d; ++i) dot += w[std::size_t(i)] * pts[idx][std::size_t(i)];
            dots[idx] = dot;
            order[idx] = {dot, idx};
        }
        std::sort(order.begin(), order.end());
        // For fixed w, theta in [-B,B] yields one truth table per cut at a
        // distinct dot value, plus all-zeros when theta can exceed max dot;
        // the minimal theta per table is recorded so discovery order equals
        // lex order over the full (w, theta) sweep grid.
        std::size_t k = 0;
        std::int64_t prev = -B - 1;
        while (k < n) {
            std::int64_t v = order[k].first;
            BitRow r(n);
            for (std::size_t idx = 0; idx < n; ++idx) r.set(idx, dots[idx] >= v);
            if (seen.insert(r).second) {
                std::int64_t theta_min = (prev == -B - 1) ? -B : prev + 1;
                std::vector<std::int64_t> par = w;
                par.push_back(theta_min);
                c.concepts.push_back(std::move(r));
                c.labels.push_back("hs_" + join_ints(par));
                c.concept_params.push_back(std::move(par));
            }
            prev = v;
            while (k < n && order[k].first == v) ++k;
        }
        if (prev < B) {
            BitRow r(n);  // all zeros: theta above every dot
            if (seen.insert(r).second) {
                std::vector<std::int64_t> par = w;
                par.push_back(prev + 1);
                c.concepts.push_back(std::move(r));
                c.labels.push_back("hs_" + join_ints(par));
                c.concept_params.push_back(std::move(par));
            }
        }
        // advance w in lex order (leftmost most significant, so rightmost fastest)
        std::int64_t i = d - 1;
        while (i >= 0 && w[std::size_t(i)] == W) { w[std::size_t(i)] = -W; --i; }
        if (i < 0) break;
        ++w[std::size_t(i)];
    }
    return c;
}

}  // namespace

void ConceptClass::validate() const {
    if (concepts.empty()) throw std::invalid_argument("concept class: no concepts");
    for (const auto& r : concepts)
        if (r.nbits != domain_size) throw std::invalid_argument("concept class: row length mismatch");
    if (!multiset) {
        std::unordered_set<BitRow, BitRowHash> seen;
        for (const auto& r : concepts)
            if (!seen.insert(r).second) throw std::invalid_argument("concept class: duplicate row");
    }
    if (!labels.empty() && labels.size() != concepts.size())
        throw std::invalid_argument("concept class: label count mismatch");
    if (!point_coords.empty() && point_coords.size() != domain_size)
        throw std::invalid_argument("concept class: point coord count mismatch");
}

std::optional<std::size_t> ConceptClass::find_concept(const BitRow& table) const {
    for (std::size_t i = 0; i < concepts.size(); ++i)
        if (concepts[i] == table) return i;
    return std::nullopt;
}

FiniteDistribution FiniteDistribution::uniform(std::size_t n) {
    if (n == 0) throw std::invalid_argument("distribution: empty support");
    FiniteDistribution d;
    d.weights.assign(n, Rat(1, std::int64_t(n)));
    return d;
}

void FiniteDistribution::validate() const {
    Rat sum(0);
    for (const auto& w : weights) {
        if (w < Rat(0)) throw std::invalid_argument("distribution: negative weight");
        sum += w;
    }
    if (!(sum == Rat(1))) throw std::invalid_argument("distribution: weights do not sum to 1");
}

BuiltinKind parse_kind(const std::string& name) {
    if (name == "point") return BuiltinKind::point;
    if (name == "thr" || name == "threshold") return BuiltinKind::threshold;
    if (name == "line") return BuiltinKind::line;
    if (name == "box") return BuiltinKind::box;
    if (name == "hs" || name == "halfspace") return BuiltinKind::halfspace;
    throw std::invalid_argument("unknown class kind: " + name);
}

std::string kind_name(BuiltinKind k) {
    switch (k) {
        case BuiltinKind::point: return "point";
        case BuiltinKind::threshold: return "threshold";
        case BuiltinKind::line: return "line";
        case BuiltinKind::box: return "box";
        case BuiltinKind::halfspace: return "halfspace";
    }
    throw std::logic_error("bad kind");
}

ConceptClass make_builtin(BuiltinKind kind, const std::vector<std::int64_t>& params) {
    switch (kind) {
        case BuiltinKind::point:
        case BuiltinKind::threshold: {
            if (params.size() != 1) throw std::invalid_argument("point/threshold: expected params {b}");
            std::int64_t b = params[0];
            if (b < 1) throw std::invalid_argument("b must be >= 1");
            if (b > 16) throw cap_error("b > 16 exceeds cap");
            return kind == BuiltinKind::point ? make_point(b) : make_threshold(b);
        }
        case BuiltinKind::line: {
            if (params.size() != 1) throw std::invalid_argument("line: expected params {p}");
            std::int64_t p = params[0];
            if (p > 251) throw cap_error("p > 251 exceeds cap");
            if (!is_prime(p)) throw std::invalid_argument("line: p must be prime");
            return make_line(p);
        }
        case BuiltinKind::box:
        case BuiltinKind::halfspace: {
            if (params.size() != 2) throw std::invalid_argument("box/halfspace: expected params {b, d}");
            std::int64_t b = params[0], d = params[1];
            if (b < 1 || d < 1) throw std::invalid_argument("b and d must be >= 1");
            if (b * d > 12) throw cap_error("b*d > 12 exceeds cap");
            return kind == BuiltinKind::box ? make_box(b, d) : make_halfspace(b, d);
        }
    }
    throw std::logic_error("bad kind");
}

namespace {

// True iff subset (given as domain-point indices) is shattered by c.
bool shattered(const ConceptClass& c, const std::vector<std::size_t>& subset) {
    std::size_t k = subset.size();
    std::size_t want = std::size_t(1) << k;
    std::vector<bool> seen(want, false);
    std::size_t found = 0;
    for (const auto& row : c.concepts) {
        std::size_t pat = 0;
        for (std::size_t j = 0; j < k; ++j)
            if (row.test(subset[j])) pat |= std::size_t(1) << j;
        if (!seen[pat]) {
            seen[pat] = true;
            if (++found == want) return true;
        }
    }
    return false;
}

// Visits k-subsets of {0..n-1} in lex order until f returns true.
bool first_subset(std::size_t n, std::size_t k, const std::function<bool(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        if (f(idx)) return true;
        // next combination
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (idx[i] != i + n - k) break;
            if (i == 0) return false;
        }
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

VcResult vc_dimension(const ConceptClass& c) {
    c.validate();
    if (c.domain_size > 24) throw cap_error("vc_dimension: domain_size > 24");
    VcResult res;  // empty set is always shattered by a nonempty class
    for (std::size_t k = 1; k <= c.domain_size; ++k) {
        std::vector<std::size_t> hit;
        bool any = first_subset(c.domain_size, k, [&](const std::vector<std::size_t>& s) {
            if (shattered(c, s)) { hit = s; return true; }
            return false;
        });
        if (!any) break;
        res.dim = k;
        res.witness = hit;
    }
    return res;
}

ConceptClass xor_class(const ConceptClass& a, const ConceptClass& b) {
    a.validate();
    b.validate();
    if (a.domain_size != b.domain_size) throw std::invalid_argument("xor_class: mismatched domains");
    ConceptClass c;
    c.domain_size = a.domain_size;
    c.kind = "xor";
    c.point_coords = a.point_coords;
    std::unordered_set<BitRow, BitRowHash> seen;
    for (std::size_t i = 0; i < a.concepts.size(); ++i) {
        for (std::size_t j = 0; j < b.concepts.size(); ++j) {
            BitRow r = a.concepts[i] ^ b.concepts[j];
            if (!seen.insert(r).second) continue;
            std::string la = a.labels.empty() ? "c" + std::to_string(i) : a.labels[i];
            std::string lb = b.labels.empty() ? "c" + std::to_string(j) : b.labels[j];
            c.concepts.push_back(std::move(r));
            c.labels.push_back(la + "^" + lb);
        }
    }
    return c;
}

Rat disagreement(const BitRow& f, const BitRow& h, const FiniteDistribution& d) {
    if (f.nbits != h.nbits || f.nbits != d.weights.size())
        throw std::invalid_argument("disagreement: length mismatch");
    Rat sum(0);
    for (std::size_t x = 0; x < f.nbits; ++x)
        if (f.test(x) != h.test(x)) sum += d.weights[x];
    return sum;
}

nlohmann::ordered_json concept_class_to_json(const ConceptClass& c) {
    nlohmann::ordered_json j;
    j["domain_size"] = c.domain_size;
    nlohmann::ordered_json pts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.domain_size; ++i) {
        if (c.point_coords.empty()) {
            pts.push_back(i);
        } else if (c.point_coords[i].size() == 1) {
            pts.push_back(c.point_coords[i][0]);
        } else {
            pts.push_back(c.point_coords[i]);
        }
    }
    j["points"] = std::move(pts);
    nlohmann::ordered_json cs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < c.concepts.size(); ++i) {
        nlohmann::ordered_json e;
        e["name"] = c.labels.empty() ? "c" + std::to_string(i) : c.labels[i];
        e["bits"] = c.concepts[i].to_string();
        cs.push_back(std::move(e));
    }
    j["concepts"] = std::move(cs);
    return j;
}

ConceptClass concept_class_from_json(const nlohmann::ordered_json& j) {
    ConceptClass c;
    c.domain_size = j.at("domain_size").get<std::size_t>();
    if (j.contains("points")) {
        for (const auto& p : j.at("points")) {
            if (p.is_array())
                c.point_coords.push_back(p.get<std::vector<std::int64_t>>());
            else
                c.point_coords.push_back({p.get<std::int64_t>()});
        }
    }
    for (const auto& e : j.at("concepts")) {
        c.labels.push_back(e.at("name").get<std::string>());
        c.concepts.push_back(BitRow::from_string(e.at("bits").get<std::string>()));
    }
    c.validate();
    return c;
}

}  // namespace dppac
