#include <doctest.h>

#include <algorithm>
#include <set>

#include "dppac/concepts.hpp"
#include "dppac/rng.hpp"

using namespace dppac;

namespace {

// Independent separability oracle: a dichotomy of {0,1}^2 is a halfspace iff
// some small integer (w, theta) witnesses it; the grid is exhaustive for this
// domain since any separator can be scaled and rounded into it.
bool separable_2x1(const BitRow& table) {
    for (int w1 = -3; w1 <= 3; ++w1)
        for (int w2 = -3; w2 <= 3; ++w2)
            for (int th = -4; th <= 4; ++th) {
                bool ok = true;
                for (int x = 0; x < 4 && ok; ++x) {
                    int x1 = x & 1, x2 = x >> 1;
                    bool val = w1 * x1 + w2 * x2 >= th;
                    if (val != table.test(std::size_t(x))) ok = false;
                }
                if (ok) return true;
            }
    return false;
}

std::uint64_t binom(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

}  // namespace

TEST_CASE("builtin point class") {
    auto c = make_builtin(BuiltinKind::point, {2});
    c.validate();
    CHECK(c.domain_size == 4);
    CHECK(c.concepts.size() == 4);
    for (const auto& r : c.concepts) CHECK(r.count() == 1);
    CHECK(c.labels[0] == "p_0");
}

TEST_CASE("builtin threshold class") {
    auto c = make_builtin(BuiltinKind::threshold, {2});
    c.validate();
    CHECK(c.concepts.size() == 4);
    CHECK(c.labels[0] == "t_0");
    CHECK(c.concepts[0].to_string() == "1111");
    CHECK(c.concepts[3].to_string() == "0001");
}

TEST_CASE("builtin line class") {
    auto c = make_builtin(BuiltinKind::line, {3});
    c.validate();
    CHECK(c.domain_size == 9);
    CHECK(c.concepts.size() == 9);
    for (const auto& r : c.concepts) CHECK(r.count() == 3);
    // row for (a,b) marks exactly the points y = a*x + b mod p
    for (std::size_t i = 0; i < 9; ++i) {
        auto a = c.concept_params[i][0], b = c.concept_params[i][1];
        for (std::int64_t x = 0; x < 3; ++x)
            for (std::int64_t y = 0; y < 3; ++y)
                CHECK(c.concepts[i].test(std::size_t(x * 3 + y)) == ((a * x + b) % 3 == y));
    }
}

TEST_CASE("builtin parameter validation") {
    CHECK_THROWS_AS(make_builtin(BuiltinKind::line, {4}), std::invalid_argument);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::line, {257}), cap_error);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::point, {17}), cap_error);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::box, {7, 2}), cap_error);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::halfspace, {4, 2}), cap_error);
    CHECK_THROWS_AS(make_builtin(BuiltinKind::point, {0}), std::invalid_argument);
}

TEST_CASE("box class small instances") {
    auto c = make_builtin(BuiltinKind::box, {1, 2});
    c.validate();
    // nonempty boxes over {0,1}^2: 3 intervals per axis -> 9, plus one empty
    CHECK(c.concepts.size() == 10);
    bool has_full = false, has_empty = false;
    for (const auto& r : c.concepts) {
        if (r.count() == 4) has_full = true;
        if (r.count() == 0) has_empty = true;
    }
    CHECK(has_full);
    CHECK(has_empty);
}

TEST_CASE("halfspace enumeration completeness at (d=2, b=1)") {
    auto c = make_builtin(BuiltinKind::halfspace, {1, 2});
    c.validate();
    std::set<std::string> swept;
    for (const auto& r : c.concepts) swept.insert(r.to_string());
    std::set<std::string> oracle;
    for (int m = 0; m < 16; ++m) {
        BitRow t(4);
        for (int x = 0; x < 4; ++x) t.set(std::size_t(x), (m >> x) & 1);
        if (separable_2x1(t)) oracle.insert(t.to_string());
    }
    CHECK(oracle.size() == 14);  // all dichotomies of {0,1}^2 except XOR/XNOR
    CHECK(swept == oracle);
}

TEST_CASE("halfspaces on an interval are up- and down-thresholds") {
    for (std::int64_t b = 1; b <= 4; ++b) {
        auto c = make_builtin(BuiltinKind::halfspace, {b, 1});
        c.validate();
        CHECK(c.concepts.size() == std::size_t(2) << b);
        for (const auto& r : c.concepts) {
            // each row is a suffix or prefix of ones
            std::string s = r.to_string();
            bool suffix = true, prefix = true;
            for (std::size_t i = 1; i < s.size(); ++i) {
                if (s[i - 1] == '1' && s[i] == '0') suffix = false;
                if (s[i - 1] == '0' && s[i] == '1') prefix = false;
            }
            CHECK((suffix || prefix));
        }
    }
}

TEST_CASE("vc dimension frozen values") {
    CHECK(vc_dimension(make_builtin(BuiltinKind::threshold, {3})).dim == 1);
    CHECK(vc_dimension(make_builtin(BuiltinKind::point, {2})).dim == 1);
    CHECK(vc_dimension(make_builtin(BuiltinKind::line, {3})).dim == 2);
}

TEST_CASE("vc witness is shattered") {
    auto c = make_builtin(BuiltinKind::line, {3});
    auto res = vc_dimension(c);
    REQUIRE(res.witness.size() == res.dim);
    // re-check shattering directly
    std::set<std::string> pats;
    for (const auto& row : c.concepts) {
        std::string p;
        for (auto x : res.witness) p += row.test(x) ? '1' : '0';
        pats.insert(p);
    }
    CHECK(pats.size() == (std::size_t(1) << res.dim));
}

TEST_CASE("vc domain cap") {
    CHECK_THROWS_AS(vc_dimension(make_builtin(BuiltinKind::line, {5})), cap_error);
}

TEST_CASE("sauer bound for small builtins") {
    std::vector<ConceptClass> cs;
    for (std::int64_t b : {1, 2, 3, 4}) {
        cs.push_back(make_builtin(BuiltinKind::point, {b}));
        cs.push_back(make_builtin(BuiltinKind::threshold, {b}));
    }
    for (std::int64_t p : {2, 3}) cs.push_back(make_builtin(BuiltinKind::line, {p}));
    cs.push_back(make_builtin(BuiltinKind::box, {1, 2}));
    cs.push_back(make_builtin(BuiltinKind::box, {2, 1}));
    cs.push_back(make_builtin(BuiltinKind::box, {1, 3}));
    cs.push_back(make_builtin(BuiltinKind::box, {2, 2}));
    cs.push_back(make_builtin(BuiltinKind::halfspace, {1, 2}));
    cs.push_back(make_builtin(BuiltinKind::halfspace, {2, 1}));
    cs.push_back(make_builtin(BuiltinKind::halfspace, {1, 3}));
    cs.push_back(make_builtin(BuiltinKind::halfspace, {2, 2}));
    for (const auto& c : cs) {
        if (c.domain_size > 24) continue;
        auto vc = vc_dimension(c).dim;
        std::uint64_t bound = 0;
        for (std::size_t i = 0; i <= vc; ++i) bound += binom(c.domain_size, i);
        CHECK(c.concepts.size() <= bound);
    }
}

TEST_CASE("vc monotone under subclass") {
    Rng rng(20240817);
    auto c = make_builtin(BuiltinKind::line, {3});
    auto full = vc_dimension(c).dim;
    for (int trial = 0; trial < 20; ++trial) {
        ConceptClass sub;
        sub.domain_size = c.domain_size;
        for (std::size_t i = 0; i < c.concepts.size(); ++i)
            if (rng.next_bool()) {
                sub.concepts.push_back(c.concepts[i]);
                sub.labels.push_back(c.labels[i]);
            }
        if (sub.concepts.empty()) continue;
        CHECK(vc_dimension(sub).dim <= full);
    }
}

TEST_CASE("xor class frozen values") {
    auto p1 = make_builtin(BuiltinKind::point, {1});
    auto x = xor_class(p1, p1);
    x.validate();
    REQUIRE(x.concepts.size() == 2);
    std::set<std::string> rows{x.concepts[0].to_string(), x.concepts[1].to_string()};
    CHECK(rows == std::set<std::string>{"00", "11"});
}

TEST_CASE("xor with zero row is identity; self-xor is zero") {
    auto c = make_builtin(BuiltinKind::threshold, {2});
    ConceptClass zero;
    zero.domain_size = 4;
    zero.concepts.push_back(BitRow(4));
    zero.labels.push_back("z");
    auto same = xor_class(c, zero);
    REQUIRE(same.concepts.size() == c.concepts.size());
    for (std::size_t i = 0; i < c.concepts.size(); ++i)
        CHECK(same.concepts[i] == c.concepts[i]);

    ConceptClass single;
    single.domain_size = 4;
    single.concepts.push_back(c.concepts[2]);
    single.labels.push_back("f");
    auto z = xor_class(single, single);
    REQUIRE(z.concepts.size() == 1);
    CHECK(z.concepts[0].count() == 0);
}

TEST_CASE("disagreement exact values") {
    FiniteDistribution u = FiniteDistribution::uniform(4);
    BitRow f = BitRow::from_string("1111");
    BitRow h = BitRow::from_string("0001");
    CHECK(disagreement(f, h, u) == Rat(3, 4));
    CHECK(disagreement(f, f, u) == Rat(0));
    FiniteDistribution point;
    point.weights = {Rat(0), Rat(0), Rat(1), Rat(0)};
    CHECK(disagreement(f, h, point) == Rat(1));
}

TEST_CASE("disagreement is a pseudometric") {
    Rng rng(7);
    FiniteDistribution d;
    d.weights = {Rat(1, 8), Rat(3, 8), Rat(1, 4), Rat(1, 4)};
    d.validate();
    for (int trial = 0; trial < 100; ++trial) {
        BitRow a(4), b(4), c(4);
        for (std::size_t i = 0; i < 4; ++i) {
            a.set(i, rng.next_bool());
            b.set(i, rng.next_bool());
            c.set(i, rng.next_bool());
        }
        auto ab = disagreement(a, b, d), ba = disagreement(b, a, d);
        auto ac = disagreement(a, c, d), cb = disagreement(c, b, d);
        CHECK(ab == ba);
        CHECK(disagreement(a, a, d) == Rat(0));
        CHECK(ab <= ac + cb);
    }
}

TEST_CASE("json round trip") {
    auto c = make_builtin(BuiltinKind::line, {3});
    auto j = concept_class_to_json(c);
    CHECK(j.dump() == concept_class_to_json(c).dump());  // byte-stable
    auto back = concept_class_from_json(j);
    REQUIRE(back.concepts.size() == c.concepts.size());
    for (std::size_t i = 0; i < c.concepts.size(); ++i) {
        CHECK(back.concepts[i] == c.concepts[i]);
        CHECK(back.labels[i] == c.labels[i]);
    }
    CHECK(back.domain_size == c.domain_size);
}

TEST_CASE("distribution validation") {
    FiniteDistribution d;
    d.weights = {Rat(1, 2), Rat(1, 2)};
    d.validate();
    d.weights = {Rat(1, 2), Rat(1, 3)};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
    d.weights = {Rat(3, 2), Rat(-1, 2)};
    CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}
