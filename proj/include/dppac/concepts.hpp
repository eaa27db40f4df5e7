#pragma once
// Finite concept classes over finite domains: built-in families (point
// functions, thresholds, lines over Z_p^2, axis-parallel boxes, halfspaces
// over the integer grid), the XOR combinator, exact VC dimension, and the
// disagreement pseudometric. All values are immutable after construction.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dppac/bitrow.hpp"
#include "dppac/errors.hpp"
#include "dppac/rat.hpp"

#include <json.hpp>

namespace dppac {

struct ConceptClass {
    std::size_t domain_size = 0;
    std::vector<BitRow> concepts;        // one bit per domain point
    std::vector<std::string> labels;     // canonical name per concept
    // Coordinates per domain point (empty, or one tuple per point).
    std::vector<std::vector<std::int64_t>> point_coords;
    // Canonical parameter tuple per concept, e.g. (a,b) for a line or
    // (w_1..w_d, theta) for a halfspace; empty when the class has none.
    std::vector<std::vector<std::int64_t>> concept_params;
    std::string kind = "custom";            // "point","threshold","line","box","halfspace","xor","custom"
    std::vector<std::int64_t> kind_params;  // builder parameters, e.g. {b} or {b,d} or {p}
    bool multiset = false;

    // Row lengths, dedup (unless multiset), |concepts| >= 1.
    void validate() const;
    std::optional<std::size_t> find_concept(const BitRow& table) const;
};

struct FiniteDistribution {
    std::vector<Rat> weights;  // exact, >= 0, sum exactly 1

    static FiniteDistribution uniform(std::size_t n);
    void validate() const;
};

enum class BuiltinKind { point, threshold, line, box, halfspace };

BuiltinKind parse_kind(const std::string& name);
std::string kind_name(BuiltinKind k);

// params: point/threshold {b}, line {p}, box/halfspace {b, d}.
ConceptClass make_builtin(BuiltinKind kind, const std::vector<std::int64_t>& params);

struct VcResult {
    std::size_t dim = 0;
    std::vector<std::size_t> witness;  // lex-first shattered subset of max size
};

VcResult vc_dimension(const ConceptClass& c);

ConceptClass xor_class(const ConceptClass& a, const ConceptClass& b);

// Exact Pr_{x~d}[f(x) != h(x)].
Rat disagreement(const BitRow& f, const BitRow& h, const FiniteDistribution& d);

nlohmann::ordered_json concept_class_to_json(const ConceptClass& c);
ConceptClass concept_class_from_json(const nlohmann::ordered_json& j);

}  // namespace dppac
