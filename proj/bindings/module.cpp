// Python bindings: a thin veneer over the C++ library exposing the class
// builders, dimension computations, the augmented-index cost and its entropy
// bound, stability closed forms, the private line learner with its PAC
// harness, and the exact privacy audit. Results cross the boundary as plain
// dicts and ints so the Python side stays dependency-free.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "dppac/commsim.hpp"
#include "dppac/concepts.hpp"
#include "dppac/dpaudit.hpp"
#include "dppac/dplearn.hpp"
#include "dppac/errors.hpp"
#include "dppac/infomath.hpp"
#include "dppac/mistaketree.hpp"
#include "dppac/repdim.hpp"
#include "dppac/rng.hpp"

namespace py = pybind11;
using namespace dppac;

namespace {

LineLearnerConfig build_line_config(std::uint32_t p, double eps, double delta, double alpha,
                                    double beta, std::optional<double> scale_range,
                                    std::optional<double> scale_ell) {
    LineLearnerConfig cfg;
    cfg.p = p;
    cfg.eps = eps;
    cfg.delta = delta;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.range_width_override = scale_range;
    cfg.ell_override = scale_ell;
    cfg.validate();
    return cfg;
}

py::dict hypothesis_dict(const Hypothesis& h) {
    py::dict d;
    switch (h.kind) {
        case HypKind::zero: d["kind"] = "zero"; break;
        case HypKind::point: d["kind"] = "point"; break;
        case HypKind::line: d["kind"] = "line"; break;
        case HypKind::table: d["kind"] = "table"; break;
    }
    if (h.kind == HypKind::point || h.kind == HypKind::line) {
        d["a"] = h.a;
        d["b"] = h.b;
    }
    return d;
}

}  // namespace

PYBIND11_MODULE(dppac, m) {
    m.doc() = "finite-scale private learning and communication toolkit";

    py::register_exception<cap_error>(m, "CapError", PyExc_RuntimeError);

    py::class_<ConceptClass>(m, "ConceptClass")
        .def_readonly("domain_size", &ConceptClass::domain_size)
        .def_property_readonly(
            "n_concepts", [](const ConceptClass& c) { return c.concepts.size(); })
        .def("__repr__", [](const ConceptClass& c) {
            return "<ConceptClass domain=" + std::to_string(c.domain_size) +
                   " concepts=" + std::to_string(c.concepts.size()) + ">";
        });

    m.def(
        "make_class",
        [](const std::string& kind, const std::vector<std::int64_t>& params) {
            return make_builtin(parse_kind(kind), params);
        },
        py::arg("kind"), py::arg("params"),
        "Build a named class: point/thr take [b], line takes [p], box/hs take [b, d].");

    m.def(
        "vc", [](const ConceptClass& c) { return vc_dimension(c).dim; }, py::arg("cls"),
        "VC dimension by exhaustive shattering search.");

    m.def(
        "ldim", [](const ConceptClass& c) { return ldim(c).dim; }, py::arg("cls"),
        "Mistake-tree dimension; the witness is validated internally.");

    m.def(
        "augindex_cc",
        [](std::size_t d, std::int64_t eps_num, std::int64_t eps_den) {
            EvalProblem g = EvalProblem::augindex(d);
            return dist_cc(g, uniform_promise(g), Rat(eps_num, eps_den));
        },
        py::arg("d"), py::arg("eps_num") = 0, py::arg("eps_den") = 1,
        "Exact one-way distributional cost of the augmented-index problem.");

    m.def("augindex_bound", &augindex_bound, py::arg("d"), py::arg("eps"),
          "The (1 - H(eps)) * d lower bound in bits.");

    m.def(
        "min_cover_size",
        [](const ConceptClass& c, std::int64_t eps_num, std::int64_t eps_den, bool proper) {
            FiniteDistribution uni = FiniteDistribution::uniform(c.domain_size);
            CoverResult res = min_cover(c, uni, Rat(eps_num, eps_den), proper);
            return py::make_tuple(res.cover.hypotheses.size(), res.optimal);
        },
        py::arg("cls"), py::arg("eps_num"), py::arg("eps_den"), py::arg("proper") = false,
        "(size, optimal) of a minimum eps-cover under the uniform distribution.");

    m.def(
        "stability",
        [](double r, const std::vector<double>& atoms, std::uint64_t t) {
            StabilityReport rep = stability_probs(r, atoms, t);
            py::dict d;
            d["none"] = rep.none;
            d["one"] = rep.one;
            d["two"] = rep.two;
            d["bound_none"] = rep.bound_none;
            d["bound_one_poly"] = rep.bound_one_poly;
            d["bound_one_exp"] = rep.bound_one_exp;
            d["bound_two_split"] = rep.bound_two_split;
            d["bound_two_exp"] = rep.bound_two_exp;
            d["bounds_ok"] = rep.bounds_ok;
            return d;
        },
        py::arg("r"), py::arg("atoms"), py::arg("t"),
        "Exact none/one/two event probabilities and their closed-form bounds.");

    m.def(
        "em_probabilities",
        [](const std::vector<std::int64_t>& qualities, double alpha) {
            Rng scratch(0);
            return exponential_mechanism(qualities, alpha, scratch).probs;
        },
        py::arg("qualities"), py::arg("alpha"),
        "Exact selection distribution of the exponential mechanism.");

    m.def(
        "entropy",
        [](const std::vector<std::int64_t>& nums, std::int64_t den) {
            FiniteDistribution d;
            d.weights.reserve(nums.size());
            for (auto n : nums) d.weights.push_back(Rat(n, den));
            EntropyReport rep = entropy_suite(d);
            py::dict out;
            out["shannon"] = rep.shannon;
            out["renyi2"] = rep.renyi2;
            out["min_entropy"] = rep.min_entropy;
            return out;
        },
        py::arg("weight_nums"), py::arg("den"),
        "Shannon / collision / min entropy in bits of an exact distribution.");

    m.def(
        "learn_line",
        [](std::uint32_t p, double eps, double delta, double alpha, double beta,
           std::optional<double> scale_range, std::optional<double> scale_ell,
           std::uint64_t seed, std::uint32_t target_a, std::uint32_t target_b,
           std::size_t trials) {
            LineLearnerConfig cfg =
                build_line_config(p, eps, delta, alpha, beta, scale_range, scale_ell);
            Hypothesis target = Hypothesis::line_fn(p, target_a % p, target_b % p);
            std::size_t domain = std::size_t(p) * p;
            BitRow target_row = hypothesis_row(target, domain);
            FiniteDistribution uni = FiniteDistribution::uniform(domain);
            SampleOracle oracle = make_realizable_oracle(uni, target_row);
            Rng rng(seed);
            BoostedResult run = line_boosted_learner(cfg, oracle, rng);
            Rat err = disagreement(target_row, hypothesis_row(run.h, domain), uni);
            py::dict d;
            d["hypothesis"] = hypothesis_dict(run.h);
            d["error_num"] = err.num;
            d["error_den"] = err.den;
            d["deviation_flags"] = cfg.deviation_flags();
            if (trials > 0) {
                ConceptClass lines = make_builtin(BuiltinKind::line, {std::int64_t(p)});
                Learner learner = [cfg](const SampleOracle& orc, Rng& r) {
                    return line_boosted_learner(cfg, orc, r).h;
                };
                Rng prng(seed);
                PacReport rep = pac_evaluate(learner, lines,
                                             std::size_t(target_a % p) * p + (target_b % p), uni,
                                             trials, cfg.eps, prng);
                py::dict pac;
                pac["trials"] = rep.trials;
                pac["successes"] = rep.successes;
                pac["success_rate"] = rep.success_rate;
                pac["ci_low"] = rep.ci_low;
                pac["ci_high"] = rep.ci_high;
                d["pac"] = pac;
            }
            return d;
        },
        py::arg("p"), py::arg("eps") = 0.2, py::arg("delta") = 0.25, py::arg("alpha") = 0.49,
        py::arg("beta") = 0.05, py::arg("scale_range") = std::nullopt,
        py::arg("scale_ell") = std::nullopt, py::arg("seed") = 1, py::arg("target_a") = 1,
        py::arg("target_b") = 0, py::arg("trials") = 0,
        "Run the boosted private line learner once (and optionally PAC-evaluate it).");

    m.def(
        "audit_em",
        [](double alpha, std::size_t n_pairs, std::uint64_t seed) {
            Rng rng(seed);
            std::vector<std::vector<std::int64_t>> sets;
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (std::size_t i = 0; i < n_pairs; ++i) {
                std::vector<std::int64_t> q(4);
                for (auto& v : q) v = std::int64_t(rng.next_below(21));
                std::vector<std::int64_t> qn = q;
                std::size_t slot = rng.next_below(qn.size());
                qn[slot] += rng.next_bool() ? 1 : -1;
                sets.push_back(q);
                sets.push_back(qn);
                pairs.push_back({2 * i, 2 * i + 1});
                pairs.push_back({2 * i + 1, 2 * i});
            }
            AuditReport rep =
                audit(em_audit_mechanism(sets, alpha), pairs, alpha, 0.0, AuditMode::exact);
            py::dict d;
            d["pass"] = rep.pass;
            d["max_ratio"] = rep.max_ratio;
            d["slack"] = rep.slack;
            return d;
        },
        py::arg("alpha") = 1.0, py::arg("n_pairs") = 20, py::arg("seed") = 1,
        "Exact privacy audit of the exponential mechanism on random "
        "sensitivity-1 neighbor profiles.");
}
