#include "dppac/mistaketree.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

namespace dppac {

MistakeTree MistakeTree::make_leaf(std::size_t concept_idx) {
    MistakeTree t;
    Node n;
    n.leaf = true;
    n.concept_idx = concept_idx;
    t.nodes.push_back(n);
    return t;
}

MistakeTree MistakeTree::make_node(std::size_t point, const MistakeTree& l, const MistakeTree& r) {
    MistakeTree t;
    Node root;
    root.point = point;
    root.left = 1;
    root.right = std::int32_t(1 + l.nodes.size());
    t.nodes.push_back(root);
    for (auto n : l.nodes) {
        if (!n.leaf) { n.left += 1; n.right += 1; }
        t.nodes.push_back(n);
    }
    std::int32_t off = std::int32_t(1 + l.nodes.size());
    for (auto n : r.nodes) {
        if (!n.leaf) { n.left += off; n.right += off; }
        t.nodes.push_back(n);
    }
    return t;
}

namespace {

void check_structure(const MistakeTree& t) {
    if (t.nodes.empty()) throw std::invalid_argument("tree: empty");
    std::vector<bool> seen(t.nodes.size(), false);
    std::function<void(std::size_t)> walk = [&](std::size_t i) {
        if (i >= t.nodes.size()) throw std::out_of_range("tree: child index out of range");
        if (seen[i]) throw std::invalid_argument("tree: node reachable twice");
        seen[i] = true;
        const auto& n = t.nodes[i];
        if (n.leaf) return;
        if (n.left < 0 || n.right < 0) throw std::invalid_argument("tree: internal node missing child");
        walk(std::size_t(n.left));
        walk(std::size_t(n.right));
    };
    walk(0);
    for (bool s : seen)
        if (!s) throw std::invalid_argument("tree: unreachable node");
}

}  // namespace

std::size_t MistakeTree::depth() const {
    check_structure(*this);
    std::size_t best = 0;
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t d) {
        const auto& n = nodes[i];
        if (n.leaf) { best = std::max(best, d); return; }
        walk(std::size_t(n.left), d + 1);
        walk(std::size_t(n.right), d + 1);
    };
    walk(0, 0);
    return best;
}

bool MistakeTree::complete() const {
    check_structure(*this);
    std::optional<std::size_t> leaf_depth;
    bool ok = true;
    std::function<void(std::size_t, std::size_t)> walk = [&](std::size_t i, std::size_t d) {
        if (!ok) return;
        const auto& n = nodes[i];
        if (n.leaf) {
            if (!leaf_depth) leaf_depth = d;
            else if (*leaf_depth != d) ok = false;
            return;
        }
        walk(std::size_t(n.left), d + 1);
        walk(std::size_t(n.right), d + 1);
    };
    walk(0, 0);
    return ok;
}

TreeCheck validate_tree(const MistakeTree& t, const ConceptClass& c) {
    check_structure(t);
    for (const auto& n : t.nodes) {
        if (n.leaf && n.concept_idx >= c.concepts.size())
            throw std::out_of_range("tree: concept index out of range");
        if (!n.leaf && n.point >= c.domain_size)
            throw std::out_of_range("tree: point index out of range");
    }
    // leaves under each arena index, in DFS order
    std::vector<std::vector<std::size_t>> leaves(t.nodes.size());
    std::function<void(std::size_t)> collect = [&](std::size_t i) {
        const auto& n = t.nodes[i];
        if (n.leaf) { leaves[i] = {i}; return; }
        collect(std::size_t(n.left));
        collect(std::size_t(n.right));
        leaves[i] = leaves[std::size_t(n.left)];
        leaves[i].insert(leaves[i].end(), leaves[std::size_t(n.right)].begin(),
                         leaves[std::size_t(n.right)].end());
    };
    collect(0);
    TreeCheck res;
    std::function<bool(std::size_t)> check = [&](std::size_t i) {
        const auto& n = t.nodes[i];
        if (n.leaf) return true;
        for (bool side : {false, true}) {
            std::size_t child = std::size_t(side ? n.right : n.left);
            for (std::size_t leaf_idx : leaves[child]) {
                bool val = c.concepts[t.nodes[leaf_idx].concept_idx].test(n.point);
                if (val != side) {
                    res.first_violation = {i, leaf_idx};
                    return false;
                }
            }
        }
        return check(std::size_t(n.left)) && check(std::size_t(n.right));
    };
    res.valid = check(0);
    return res;
}

LdimResult ldim(const ConceptClass& c) {
    c.validate();
    std::size_t nc = c.concepts.size(), nx = c.domain_size;
    // column masks over the concept set
    std::vector<BitRow> col1(nx, BitRow(nc)), col0(nx, BitRow(nc));
    for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t i = 0; i < nc; ++i) {
            if (c.concepts[i].test(x)) col1[x].set(i, true);
            else col0[x].set(i, true);
        }
    constexpr std::size_t kBudget = std::size_t(1) << 20;
    std::unordered_map<BitRow, std::size_t, BitRowHash> memo;
    std::function<std::size_t(const BitRow&)> rec = [&](const BitRow& s) -> std::size_t {
        auto it = memo.find(s);
        if (it != memo.end()) return it->second;
        if (memo.size() >= kBudget) throw cap_error("ldim: memoization budget exceeded");
        std::size_t best = 0;
        if (s.count() > 1) {
            for (std::size_t x = 0; x < nx; ++x) {
                BitRow s0 = s & col0[x], s1 = s & col1[x];
                std::size_t n0 = s0.count(), n1 = s1.count();
                if (n0 == 0 || n1 == 0) continue;
                std::size_t cand = 1 + std::min(rec(s0), rec(s1));
                best = std::max(best, cand);
            }
        }
        memo[s] = best;
        return best;
    };
    BitRow full(nc);
    for (std::size_t i = 0; i < nc; ++i) full.set(i, true);
    LdimResult res;
    res.dim = rec(full);

    // witness: first splitting point whose restrictions reach target-1
    std::function<MistakeTree(const BitRow&, std::size_t)> build =
        [&](const BitRow& s, std::size_t target) -> MistakeTree {
        if (target == 0) {
            for (std::size_t i = 0; i < nc; ++i)
                if (s.test(i)) return MistakeTree::make_leaf(i);
            throw std::logic_error("ldim: empty subset");
        }
        for (std::size_t x = 0; x < nx; ++x) {
            BitRow s0 = s & col0[x], s1 = s & col1[x];
            if (s0.count() == 0 || s1.count() == 0) continue;
            if (rec(s0) >= target - 1 && rec(s1) >= target - 1)
                return MistakeTree::make_node(x, build(s0, target - 1), build(s1, target - 1));
        }
        throw std::logic_error("ldim: witness target unreachable");
    };
    res.witness = build(full, res.dim);
    return res;
}

namespace {

std::int64_t chk_mul(std::int64_t a, std::int64_t b) {
    return detail::narrow(__int128(a) * b, "collision_free_halfspace: overflow");
}
std::int64_t chk_add(std::int64_t a, std::int64_t b) {
    return detail::narrow(__int128(a) + b, "collision_free_halfspace: overflow");
}

// exhaustive check over I_b^d: same table as (w_ref, th_ref), distinct dots
bool cf_holds(const std::vector<std::int64_t>& w, std::int64_t th,
              const std::vector<std::int64_t>& w_ref, std::int64_t th_ref, std::int64_t b) {
    std::size_t d = w.size();
    std::int64_t side = std::int64_t(1) << b;
    std::size_t n = 1;
    for (std::size_t i = 0; i < d; ++i) n *= std::size_t(side);
    std::vector<std::int64_t> dots;
    dots.reserve(n);
    for (std::size_t idx = 0; idx < n; ++idx) {
        std::size_t rem = idx;
        __int128 dot = 0, ref = 0;
        for (std::size_t i = 0; i < d; ++i) {
            std::int64_t xi = std::int64_t(rem % std::size_t(side));
            rem /= std::size_t(side);
            dot += __int128(w[i]) * xi;
            ref += __int128(w_ref[i]) * xi;
        }
        if ((dot >= th) != (ref >= th_ref)) return false;
        dots.push_back(detail::narrow(dot, "collision_free_halfspace: overflow"));
    }
    std::sort(dots.begin(), dots.end());
    return std::adjacent_find(dots.begin(), dots.end()) == dots.end();
}

}  // namespace

IntHalfspace collision_free_halfspace(const std::vector<std::int64_t>& w_in,
                                      std::int64_t theta_in, std::int64_t b) {
    std::int64_t d = std::int64_t(w_in.size());
    if (d < 1) throw std::invalid_argument("collision_free_halfspace: empty weight vector");
    if (b < 0) throw std::invalid_argument("collision_free_halfspace: b must be >= 0");
    bool verifiable = b * d <= 20;  // (2^b)^d grid enumerable

    // Margin-then-offset rewrite: scale by 2^(d+1) to open a gap of 2^d
    // around the boundary, then add 2^i to w_i. The offsets stay inside the
    // gap on part of the input space only, so the result is kept solely when
    // the exhaustive check passes.
    if (verifiable && d <= 60) {
        IntHalfspace cand;
        cand.w.resize(std::size_t(d));
        std::int64_t scale = std::int64_t(1) << (d + 1);
        bool ok = true;
        try {
            for (std::size_t i = 0; i < std::size_t(d); ++i)
                cand.w[i] = chk_add(chk_mul(scale, w_in[i]), std::int64_t(1) << (i + 1));
            cand.theta = chk_add(chk_mul(scale, theta_in), -(std::int64_t(1) << d));
        } catch (const overflow_error&) {
            ok = false;
        }
        if (ok && cf_holds(cand.w, cand.theta, w_in, theta_in, b)) return cand;
    }

    // Base-2^b digit rewrite: scale by 2^(bd+1) for a gap of 2^(bd), then add
    // 2^(b(i-1)) to w_i. The offset sum over the grid is the base-2^b digit
    // encoding of x: at most 2^(bd)-1 (inside the gap) and injective, so the
    // table is preserved and dot products are pairwise distinct.
    std::int64_t k = b * d + 1;
    if (k >= 63) throw overflow_error("collision_free_halfspace: overflow");
    IntHalfspace out;
    out.w.resize(std::size_t(d));
    std::int64_t scale = std::int64_t(1) << k;
    for (std::size_t i = 0; i < std::size_t(d); ++i)
        out.w[i] = chk_add(chk_mul(scale, w_in[i]), std::int64_t(1) << (b * std::int64_t(i)));
    out.theta = chk_add(chk_mul(scale, theta_in), -(std::int64_t(1) << (b * d)));
    if (verifiable && !cf_holds(out.w, out.theta, w_in, theta_in, b))
        throw std::logic_error("collision_free_halfspace: verification failed");
    return out;
}

namespace {

// balanced search tree over positions [lo, hi]: the node queries the point
// of position m = (lo+hi-1)/2 and puts positions <= m (which evaluate 1 on
// it) in the right subtree.
MistakeTree threshold_bst(std::size_t lo, std::size_t hi,
                          const std::function<std::size_t(std::size_t)>& point_of,
                          const std::function<std::size_t(std::size_t)>& concept_of) {
    if (lo == hi) return MistakeTree::make_leaf(concept_of(lo));
    std::size_t m = (lo + hi - 1) / 2;
    return MistakeTree::make_node(point_of(m),
                                  threshold_bst(m + 1, hi, point_of, concept_of),
                                  threshold_bst(lo, m, point_of, concept_of));
}

}  // namespace

HalfspaceTree build_halfspace_tree(std::int64_t d, std::int64_t b) {
    if (d < 1 || b < 1) throw std::invalid_argument("build_halfspace_tree: d and b must be >= 1");
    std::int64_t depth_claim = (d * (d - 1) / 2 + 1) * b;
    if (depth_claim > 14) throw cap_error("build_halfspace_tree: depth cap exceeded");

    HalfspaceTree out;
    out.cls = make_builtin(BuiltinKind::halfspace, {b, d});
    std::int64_t side = std::int64_t(1) << b;

    if (d == 1) {
        // leaves are the up-thresholds [x >= j] for j = 0..2^b-1
        std::size_t uside = std::size_t(side);
        std::vector<std::size_t> thr_idx(uside);
        for (std::int64_t j = 0; j < side; ++j) {
            BitRow table(uside);
            for (std::int64_t x = 0; x < side; ++x) table.set(std::size_t(x), x >= j);
            auto found = out.cls.find_concept(table);
            if (!found) throw std::logic_error("build_halfspace_tree: threshold missing from class");
            thr_idx[std::size_t(j)] = *found;
        }
        out.tree = threshold_bst(
            0, std::size_t(side) - 1, [&](std::size_t m) { return m; },
            [&](std::size_t j) { return thr_idx[j]; });
        return out;
    }

    HalfspaceTree sub = build_halfspace_tree(d - 1, b);
    std::size_t sub_n = 1;
    for (std::int64_t i = 0; i < d - 1; ++i) sub_n *= std::size_t(side);

    // Points of I_b^(d-1) keep their grid index when embedded as (y, 0), so
    // only the leaves of the sub-tree need rewriting.
    std::function<MistakeTree(std::size_t)> rebuild = [&](std::size_t i) -> MistakeTree {
        const auto& n = sub.tree.nodes[i];
        if (!n.leaf)
            return MistakeTree::make_node(n.point, rebuild(std::size_t(n.left)),
                                          rebuild(std::size_t(n.right)));

        // collision-free representation of the leaf halfspace, from its
        // canonical enumerated parameters
        const auto& par = sub.cls.concept_params[n.concept_idx];
        std::vector<std::int64_t> w_can(par.begin(), par.end() - 1);
        IntHalfspace rep = collision_free_halfspace(w_can, par.back(), b);

        // order the (d-1)-grid by dot product; collision-freeness makes the
        // order strict
        std::vector<std::pair<std::int64_t, std::size_t>> order(sub_n);
        for (std::size_t idx = 0; idx < sub_n; ++idx) {
            std::size_t rem = idx;
            __int128 dot = 0;
            for (std::int64_t i2 = 0; i2 < d - 1; ++i2) {
                dot += __int128(rep.w[std::size_t(i2)]) * std::int64_t(rem % std::size_t(side));
                rem /= std::size_t(side);
            }
            order[idx] = {detail::narrow(dot, "build_halfspace_tree: overflow"), idx};
        }
        std::sort(order.begin(), order.end());
        for (std::size_t j = 1; j < sub_n; ++j)
            if (order[j].first == order[j - 1].first)
                throw std::logic_error("build_halfspace_tree: dot collision");

        // position j's concept: w_d = theta - z_j, slice x_d=0 equals the
        // leaf halfspace, slice x_d=1 equals [w.y >= z_j]
        auto concept_of = [&](std::size_t j) -> std::size_t {
            std::int64_t wd = chk_add(rep.theta, -order[j].first);
            BitRow table(sub_n * std::size_t(side));
            for (std::size_t idx = 0; idx < sub_n * std::size_t(side); ++idx) {
                std::size_t rem = idx;
                __int128 dot = 0;
                for (std::int64_t i2 = 0; i2 < d - 1; ++i2) {
                    dot += __int128(rep.w[std::size_t(i2)]) * std::int64_t(rem % std::size_t(side));
                    rem /= std::size_t(side);
                }
                dot += __int128(wd) * std::int64_t(rem % std::size_t(side));
                table.set(idx, dot >= rep.theta);
            }
            auto found = out.cls.find_concept(table);
            if (!found) throw std::logic_error("build_halfspace_tree: leaf halfspace missing from class");
            return *found;
        };
        // position m's query point: (y^m, 1); appending x_d = 1 adds one
        // stride of the (d-1)-grid to the index
        auto point_of = [&](std::size_t m) -> std::size_t {
            return order[m].second + sub_n;
        };
        return threshold_bst(0, sub_n - 1, point_of, concept_of);
    };
    out.tree = rebuild(0);

    if (out.tree.depth() != std::size_t(depth_claim) || !out.tree.complete())
        throw std::logic_error("build_halfspace_tree: depth mismatch");
    auto chk = validate_tree(out.tree, out.cls);
    if (!chk.valid) throw std::logic_error("build_halfspace_tree: invalid tree");
    return out;
}

AugIndexEmbedding augindex_embedding(const MistakeTree& t, const ConceptClass& c) {
    auto chk = validate_tree(t, c);
    if (!chk.valid || !t.complete())
        throw std::invalid_argument("augindex_embedding: invalid or incomplete tree");
    std::size_t D = t.depth();
    AugIndexEmbedding emb;
    emb.depth = D;
    if (D == 0) return emb;  // empty maps
    if (D > 20) throw cap_error("augindex_embedding: depth cap exceeded");
    emb.concept_map.assign(std::size_t(1) << D, 0);
    emb.point_map.assign((std::size_t(1) << D) - 1, 0);
    std::function<void(std::size_t, std::size_t, std::size_t)> walk =
        [&](std::size_t i, std::size_t dep, std::size_t path) {
        const auto& n = t.nodes[i];
        if (n.leaf) { emb.concept_map[path] = n.concept_idx; return; }
        emb.point_map[(std::size_t(1) << dep) - 1 + path] = n.point;
        walk(std::size_t(n.left), dep + 1, path << 1);
        walk(std::size_t(n.right), dep + 1, (path << 1) | 1);
    };
    walk(0, 0, 0);
    // exhaustive invariant check
    for (std::size_t x = 0; x < (std::size_t(1) << D); ++x) {
        const BitRow& row = c.concepts[emb.concept_map[x]];
        for (std::size_t i = 1; i <= D; ++i) {
            std::size_t prefix = x >> (D - i + 1);
            std::size_t pt = emb.point_map[(std::size_t(1) << (i - 1)) - 1 + prefix];
            bool bit = (x >> (D - i)) & 1;
            if (row.test(pt) != bit)
                throw std::logic_error("augindex_embedding: invariant violated");
        }
    }
    return emb;
}

nlohmann::ordered_json mistake_tree_to_json(const MistakeTree& t) {
    check_structure(t);
    std::function<nlohmann::ordered_json(std::size_t)> conv = [&](std::size_t i) {
        const auto& n = t.nodes[i];
        nlohmann::ordered_json j;
        if (n.leaf) {
            j["leaf"] = n.concept_idx;
            return j;
        }
        j["point"] = n.point;
        j["left"] = conv(std::size_t(n.left));
        j["right"] = conv(std::size_t(n.right));
        return j;
    };
    return conv(0);
}

MistakeTree mistake_tree_from_json(const nlohmann::ordered_json& j) {
    if (j.contains("leaf")) return MistakeTree::make_leaf(j.at("leaf").get<std::size_t>());
    return MistakeTree::make_node(j.at("point").get<std::size_t>(),
                                  mistake_tree_from_json(j.at("left")),
                                  mistake_tree_from_json(j.at("right")));
}

}  // namespace dppac
