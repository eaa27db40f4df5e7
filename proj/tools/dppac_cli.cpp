// Command-line batch runner: builds concept classes, computes dimensions,
// runs protocols, covers, learners, privacy audits, and stability tables.
// Every run prints one JSON document (which embeds the CSV rendering) to
// stdout; --out <base> additionally writes <base>.json and <base>.csv.
// Exit codes: 0 success, 1 audit failure, 2 invalid usage, 3 resource cap.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
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
#include "dppac/stats.hpp"

using namespace dppac;
using nlohmann::ordered_json;

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Accepts "3", "1/4", and decimals such as "0.125".
Rat parse_rat(const std::string& s) {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        std::int64_t num = std::stoll(s.substr(0, slash));
        std::int64_t den = std::stoll(s.substr(slash + 1));
        return Rat(num, den);
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rat(std::stoll(s), 1);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::size_t places = s.size() - dot - 1;
    if (places > 12) throw std::invalid_argument("too many decimal places: " + s);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < places; ++i) den *= 10;
    return Rat(std::stoll(digits), den);
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

// Common option record shared by the subcommands; JSON config files override
// these field by field.
struct Options {
    std::string cls = "thr";
    std::int64_t b = 2;
    std::int64_t d = 1;
    std::int64_t p = 5;
    std::size_t k = 1;
    std::string eps;  // rational or decimal; per-command defaults
    double delta = 0.25;
    double alpha = 1.0;
    double beta = 0.05;
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string out;
    std::string config_path;
    double scale_range = 0.0;  // 0 = unset
    double scale_ell = 0.0;    // 0 = unset
    bool proper = false;
    std::string problem = "eval";
    std::string mode = "exact";
    std::string target;
    // stability
    double r = 0.5;
    std::string atoms = "0.5";
    std::uint64_t t = 8;
};

void add_common_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--class", o.cls, "concept class: point|thr|line|box|hs");
    cmd->add_option("--b", o.b, "bits per coordinate");
    cmd->add_option("--d", o.d, "dimension / index length");
    cmd->add_option("--p", o.p, "prime modulus for the line class");
    cmd->add_option("--eps", o.eps, "accuracy parameter (rational like 1/4, or decimal)");
    cmd->add_option("--delta", o.delta, "confidence parameter");
    cmd->add_option("--alpha", o.alpha, "privacy parameter");
    cmd->add_option("--beta", o.beta, "privacy failure budget");
    cmd->add_option("--trials", o.trials, "evaluation trial count");
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output base path (writes <out>.json and <out>.csv)");
    cmd->add_option("--config", o.config_path, "JSON config file overriding flags field-by-field");
    cmd->add_option("--scale-range", o.scale_range, "override the sampling-exponent range width");
    cmd->add_option("--scale-ell", o.scale_ell, "override the subsample count");
}

// Applies a JSON config document on top of flag values, field by field.
void apply_config(Options& o) {
    if (o.config_path.empty()) return;
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
    ordered_json j = ordered_json::parse(in);
    if (j.contains("class")) o.cls = j["class"].get<std::string>();
    if (j.contains("b")) o.b = j["b"].get<std::int64_t>();
    if (j.contains("d")) o.d = j["d"].get<std::int64_t>();
    if (j.contains("p")) o.p = j["p"].get<std::int64_t>();
    if (j.contains("k")) o.k = j["k"].get<std::size_t>();
    if (j.contains("eps")) {
        o.eps = j["eps"].is_string() ? j["eps"].get<std::string>()
                                     : fmt_double(j["eps"].get<double>());
    }
    if (j.contains("delta")) o.delta = j["delta"].get<double>();
    if (j.contains("alpha")) o.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) o.beta = j["beta"].get<double>();
    if (j.contains("trials")) o.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) o.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("out")) o.out = j["out"].get<std::string>();
    if (j.contains("scale_range")) o.scale_range = j["scale_range"].get<double>();
    if (j.contains("scale_ell")) o.scale_ell = j["scale_ell"].get<double>();
    if (j.contains("proper")) o.proper = j["proper"].get<bool>();
    if (j.contains("problem")) o.problem = j["problem"].get<std::string>();
    if (j.contains("mode")) o.mode = j["mode"].get<std::string>();
    if (j.contains("target")) {
        o.target = j["target"].is_string() ? j["target"].get<std::string>()
                                           : std::to_string(j["target"].get<std::int64_t>());
    }
    if (j.contains("r")) o.r = j["r"].get<double>();
    if (j.contains("atoms")) o.atoms = j["atoms"].get<std::string>();
    if (j.contains("t")) o.t = j["t"].get<std::uint64_t>();
}

ConceptClass build_class(const Options& o) {
    BuiltinKind kind = parse_kind(o.cls);
    switch (kind) {
        case BuiltinKind::point:
        case BuiltinKind::threshold: return make_builtin(kind, {o.b});
        case BuiltinKind::line: return make_builtin(kind, {o.p});
        case BuiltinKind::box:
        case BuiltinKind::halfspace: return make_builtin(kind, {o.b, o.d});
    }
    throw std::invalid_argument("unknown class kind");
}

ordered_json class_config_json(const Options& o) {
    ordered_json c;
    c["class"] = o.cls;
    BuiltinKind kind = parse_kind(o.cls);
    if (kind == BuiltinKind::line)
        c["p"] = o.p;
    else
        c["b"] = o.b;
    if (kind == BuiltinKind::box || kind == BuiltinKind::halfspace) c["d"] = o.d;
    return c;
}

// Every run emits exactly one JSON document; the tabular rendering rides
// along in the "csv" field and lands in <out>.csv when requested.
int emit(const Options& o, ordered_json& doc, const std::string& csv, int code = 0) {
    doc["csv"] = csv;
    std::string text = doc.dump(2);
    std::cout << text << "\n";
    if (!o.out.empty()) {
        std::ofstream jf(o.out + ".json");
        if (!jf) throw std::invalid_argument("cannot write output file: " + o.out + ".json");
        jf << text << "\n";
        std::ofstream cf(o.out + ".csv");
        if (!cf) throw std::invalid_argument("cannot write output file: " + o.out + ".csv");
        cf << csv;
    }
    return code;
}

Rat eps_or(const Options& o, const char* dflt) { return parse_rat(o.eps.empty() ? dflt : o.eps); }

double eps_double_or(const Options& o, double dflt) {
    return o.eps.empty() ? dflt : parse_rat(o.eps).to_double();
}

// ---------------------------------------------------------------------------
// dims / ldim

int run_dims(const Options& o) {
    ConceptClass c = build_class(o);
    VcResult vc = vc_dimension(c);
    LdimResult ld = ldim(c);
    ordered_json doc;
    doc["command"] = "dims";
    doc["config"] = class_config_json(o);
    doc["domain_size"] = c.domain_size;
    doc["n_concepts"] = c.concepts.size();
    doc["vc"] = vc.dim;
    doc["ldim"] = ld.dim;
    std::ostringstream csv;
    csv << "class,b,d,p,domain,concepts,vc,ldim\n";
    csv << o.cls << "," << o.b << "," << o.d << "," << o.p << "," << c.domain_size << ","
        << c.concepts.size() << "," << vc.dim << "," << ld.dim << "\n";
    Options oo = o;
    ordered_json d = doc;
    return emit(oo, d, csv.str());
}

int run_ldim(const Options& o) {
    ConceptClass c = build_class(o);
    LdimResult ld = ldim(c);
    TreeCheck chk = validate_tree(ld.witness, c);
    ordered_json doc;
    doc["command"] = "ldim";
    doc["config"] = class_config_json(o);
    doc["ldim"] = ld.dim;
    doc["witness_depth"] = ld.witness.depth();
    doc["witness_complete"] = ld.witness.complete();
    doc["witness_valid"] = chk.valid;
    doc["witness"] = mistake_tree_to_json(ld.witness);
    std::ostringstream csv;
    csv << "class,b,d,p,ldim,witness_depth,witness_complete,witness_valid\n";
    csv << o.cls << "," << o.b << "," << o.d << "," << o.p << "," << ld.dim << ","
        << ld.witness.depth() << "," << (ld.witness.complete() ? 1 : 0) << ","
        << (chk.valid ? 1 : 0) << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

// ---------------------------------------------------------------------------
// cc

int run_cc(const Options& o) {
    ordered_json doc;
    doc["command"] = "cc";
    std::ostringstream csv;
    if (o.problem == "equality") {
        OneWayProtocol pr = equality_protocol(std::size_t(o.b), o.k);
        // Equality over b-bit strings: evaluate against the explicit table.
        EvalProblem g;
        g.n_alice = std::size_t(1) << o.b;
        g.n_bob = g.n_alice;
        g.table.assign(g.n_alice * g.n_bob, 0);
        for (std::size_t f = 0; f < g.n_alice; ++f)
            for (std::size_t x = 0; x < g.n_bob; ++x) g.table[f * g.n_bob + x] = (f == x) ? 1 : 0;
        ErrorReport worst = protocol_error_worst(pr, g);
        ordered_json cfg;
        cfg["problem"] = "equality";
        cfg["b"] = o.b;
        cfg["k"] = o.k;
        doc["config"] = cfg;
        doc["cost_bits"] = pr.cost_bits;
        doc["worst_error_num"] = worst.value.num;
        doc["worst_error_den"] = worst.value.den;
        csv << "problem,b,k,cost_bits,worst_error\n";
        csv << "equality," << o.b << "," << o.k << "," << pr.cost_bits << ","
            << worst.value.to_string() << "\n";
    } else {
        EvalProblem g;
        ordered_json cfg;
        cfg["problem"] = o.problem;
        if (o.problem == "augindex") {
            g = EvalProblem::augindex(std::size_t(o.d));
            cfg["d"] = o.d;
        } else if (o.problem == "eval") {
            ConceptClass c = build_class(o);
            g = EvalProblem::from_class(c);
            cfg.update(class_config_json(o));
        } else {
            throw std::invalid_argument("unknown problem: " + o.problem);
        }
        Rat eps = eps_or(o, "0");
        cfg["eps"] = eps.to_string();
        doc["config"] = cfg;
        FiniteDistribution mu = uniform_promise(g);
        std::size_t cost = dist_cc(g, mu, eps);
        doc["dist_cc"] = cost;
        csv << "problem,class,b,d,p,eps,dist_cc\n";
        csv << o.problem << "," << (o.problem == "eval" ? o.cls : "") << "," << o.b << "," << o.d
            << "," << o.p << "," << eps.to_string() << "," << cost << "\n";
    }
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

// ---------------------------------------------------------------------------
// cover / repdim

int run_cover(const Options& o) {
    ConceptClass c = build_class(o);
    Rat eps = eps_or(o, "1/4");
    FiniteDistribution uni = FiniteDistribution::uniform(c.domain_size);
    CoverResult res = min_cover(c, uni, eps, o.proper);
    ordered_json doc;
    doc["command"] = "cover";
    ordered_json cfg = class_config_json(o);
    cfg["eps"] = eps.to_string();
    cfg["proper"] = o.proper;
    doc["config"] = cfg;
    doc["cover_size"] = res.cover.hypotheses.size();
    doc["optimal"] = res.optimal;
    doc["drdim"] = res.drdim();
    doc["cover"] = det_rep_to_json(res.cover);
    std::ostringstream csv;
    csv << "index,bits\n";
    for (std::size_t i = 0; i < res.cover.hypotheses.size(); ++i)
        csv << i << "," << res.cover.hypotheses[i].to_string() << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

int run_repdim(const Options& o) {
    ConceptClass c = build_class(o);
    Rat eps = eps_or(o, "1/4");
    Rat delta = parse_rat(fmt_double(o.delta));
    FiniteDistribution uni = FiniteDistribution::uniform(c.domain_size);
    CoverResult cover = min_cover(c, uni, eps, false);
    // Point-mass representation on the half-radius cover: it answers the
    // (eps/2, delta) check for any delta, so the packing counting bound
    // expected_size >= (1 - delta) * |packing| must hold against it.
    CoverResult half = min_cover(c, uni, Rat(eps.num, eps.den * 2), false);
    ProbRepresentation rep;
    rep.support.push_back(half.cover);
    rep.probs = FiniteDistribution{{Rat(1, 1)}};
    PackingReport pack = max_packing_and_duality(c, uni, eps, delta, &rep);
    ordered_json doc;
    doc["command"] = "repdim";
    ordered_json cfg = class_config_json(o);
    cfg["eps"] = eps.to_string();
    cfg["delta"] = delta.to_string();
    doc["config"] = cfg;
    doc["cover_size"] = cover.cover.hypotheses.size();
    doc["cover_optimal"] = cover.optimal;
    doc["drdim"] = cover.drdim();
    doc["packing_size"] = pack.packing.size();
    doc["packing_is_cover"] = pack.cover_check;
    doc["rep_applicable"] = pack.rep_applicable;
    doc["rep_expected_size"] = pack.expected_size.to_string();
    doc["duality_holds"] = pack.duality_holds;
    std::ostringstream csv;
    csv << "class,b,d,p,eps,delta,cover_size,cover_optimal,drdim,packing_size,duality_holds\n";
    csv << o.cls << "," << o.b << "," << o.d << "," << o.p << "," << eps.to_string() << ","
        << delta.to_string() << "," << cover.cover.hypotheses.size() << ","
        << (cover.optimal ? 1 : 0) << "," << fmt_double(cover.drdim()) << ","
        << pack.packing.size() << "," << (pack.duality_holds ? 1 : 0) << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

// ---------------------------------------------------------------------------
// learners

ordered_json pac_json(const PacReport& rep) {
    ordered_json j;
    j["trials"] = rep.trials;
    j["successes"] = rep.successes;
    j["success_rate"] = rep.success_rate;
    j["ci_low"] = rep.ci_low;
    j["ci_high"] = rep.ci_high;
    return j;
}

int run_learn_line(const Options& o) {
    LineLearnerConfig cfg;
    cfg.p = std::uint32_t(o.p);
    cfg.eps = eps_double_or(o, 0.2);
    cfg.delta = o.delta;
    cfg.alpha = o.alpha;
    cfg.beta = o.beta;
    if (o.scale_range > 0.0) cfg.range_width_override = o.scale_range;
    if (o.scale_ell > 0.0) cfg.ell_override = o.scale_ell;
    cfg.validate();

    std::uint32_t ta = 1, tb = 0;
    if (!o.target.empty()) {
        auto comma = o.target.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("learn-line target must be 'a,b'");
        ta = std::uint32_t(std::stoul(o.target.substr(0, comma)) % cfg.p);
        tb = std::uint32_t(std::stoul(o.target.substr(comma + 1)) % cfg.p);
    }
    Hypothesis target = Hypothesis::line_fn(cfg.p, ta, tb);
    std::size_t domain = std::size_t(cfg.p) * cfg.p;
    BitRow target_row = hypothesis_row(target, domain);
    FiniteDistribution uni = FiniteDistribution::uniform(domain);
    SampleOracle oracle = make_realizable_oracle(uni, target_row);

    Rng rng(o.seed);
    BoostedResult run = line_boosted_learner(cfg, oracle, rng);
    Rat err = disagreement(target_row, hypothesis_row(run.h, domain), uni);

    ordered_json doc;
    doc["command"] = "learn-line";
    ordered_json cj = line_config_to_json(cfg);
    cj["target_a"] = ta;
    cj["target_b"] = tb;
    cj["trials"] = o.trials;
    doc["config"] = cj;
    doc["deviation_flags"] = cfg.deviation_flags();
    doc["hypothesis"] = hypothesis_to_json(run.h);
    doc["exact_error_num"] = err.num;
    doc["exact_error_den"] = err.den;
    doc["seed"] = o.seed;
    std::string rate = "";
    if (o.trials > 0) {
        ConceptClass lines = make_builtin(BuiltinKind::line, {o.p});
        Learner learner = [cfg](const SampleOracle& orc, Rng& r) {
            return line_boosted_learner(cfg, orc, r).h;
        };
        Rng prng(o.seed);
        PacReport rep =
            pac_evaluate(learner, lines, std::size_t(ta) * cfg.p + tb, uni, o.trials, cfg.eps, prng);
        doc["pac"] = pac_json(rep);
        rate = fmt_double(rep.success_rate);
    }
    std::ostringstream csv;
    csv << "p,eps,delta,alpha,beta,seed,kind,error_num,error_den,success_rate\n";
    csv << cfg.p << "," << fmt_double(cfg.eps) << "," << fmt_double(cfg.delta) << ","
        << fmt_double(cfg.alpha) << "," << fmt_double(cfg.beta) << "," << o.seed << ","
        << hypothesis_to_json(run.h)["kind"].get<std::string>() << "," << err.num << "," << err.den
        << "," << rate << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

int run_learn_dist(const Options& o) {
    ConceptClass c = build_class(o);
    FiniteDistribution uni = FiniteDistribution::uniform(c.domain_size);
    std::size_t target = o.target.empty() ? 0 : std::stoull(o.target);
    if (target >= c.concepts.size()) throw std::invalid_argument("target concept out of range");
    double eps = eps_double_or(o, 0.25);
    std::size_t n = dist_specific_default_n(c.concepts.size(), o.alpha);
    SampleOracle oracle = make_realizable_oracle(uni, c.concepts[target]);
    Rng rng(o.seed);
    Hypothesis h = dist_specific_learner(c, uni, oracle, n, o.alpha, rng);
    Rat err = disagreement(c.concepts[target], hypothesis_row(h, c.domain_size), uni);

    ordered_json doc;
    doc["command"] = "learn-dist";
    ordered_json cfg = class_config_json(o);
    cfg["alpha"] = o.alpha;
    cfg["eps"] = eps;
    cfg["n"] = n;
    cfg["target"] = target;
    cfg["trials"] = o.trials;
    doc["config"] = cfg;
    doc["deviation_flags"] = ordered_json::array();
    doc["hypothesis"] = hypothesis_to_json(h);
    doc["exact_error_num"] = err.num;
    doc["exact_error_den"] = err.den;
    doc["seed"] = o.seed;
    std::string rate = "";
    if (o.trials > 0) {
        double alpha = o.alpha;
        ConceptClass cc = c;
        Learner learner = [cc, uni, n, alpha](const SampleOracle& orc, Rng& r) {
            return dist_specific_learner(cc, uni, orc, n, alpha, r);
        };
        Rng prng(o.seed);
        PacReport rep = pac_evaluate(learner, c, target, uni, o.trials, eps, prng);
        doc["pac"] = pac_json(rep);
        rate = fmt_double(rep.success_rate);
    }
    std::ostringstream csv;
    csv << "class,b,d,p,alpha,eps,seed,target,error_num,error_den,success_rate\n";
    csv << o.cls << "," << o.b << "," << o.d << "," << o.p << "," << fmt_double(o.alpha) << ","
        << fmt_double(eps) << "," << o.seed << "," << target << "," << err.num << "," << err.den
        << "," << rate << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

int run_learn_label(const Options& o) {
    ConceptClass c = build_class(o);
    FiniteDistribution uni = FiniteDistribution::uniform(c.domain_size);
    std::size_t target = o.target.empty() ? 0 : std::stoull(o.target);
    if (target >= c.concepts.size()) throw std::invalid_argument("target concept out of range");
    double eps = eps_double_or(o, 0.25);
    SampleOracle oracle = make_realizable_oracle(uni, c.concepts[target]);
    Rng rng(o.seed);
    Hypothesis h = label_private_learner(c, oracle, o.alpha, rng);
    Rat err = disagreement(c.concepts[target], hypothesis_row(h, c.domain_size), uni);

    ordered_json doc;
    doc["command"] = "learn-label";
    ordered_json cfg = class_config_json(o);
    cfg["alpha"] = o.alpha;
    cfg["eps"] = eps;
    cfg["phase1_samples"] = label_private_phase1_count(c);
    cfg["target"] = target;
    cfg["trials"] = o.trials;
    doc["config"] = cfg;
    doc["deviation_flags"] = ordered_json::array();
    doc["hypothesis"] = hypothesis_to_json(h);
    doc["exact_error_num"] = err.num;
    doc["exact_error_den"] = err.den;
    doc["seed"] = o.seed;
    std::string rate = "";
    if (o.trials > 0) {
        double alpha = o.alpha;
        ConceptClass cc = c;
        Learner learner = [cc, alpha](const SampleOracle& orc, Rng& r) {
            return label_private_learner(cc, orc, alpha, r);
        };
        Rng prng(o.seed);
        PacReport rep = pac_evaluate(learner, c, target, uni, o.trials, eps, prng);
        doc["pac"] = pac_json(rep);
        rate = fmt_double(rep.success_rate);
    }
    std::ostringstream csv;
    csv << "class,b,d,p,alpha,eps,seed,target,error_num,error_den,success_rate\n";
    csv << o.cls << "," << o.b << "," << o.d << "," << o.p << "," << fmt_double(o.alpha) << ","
        << fmt_double(eps) << "," << o.seed << "," << target << "," << err.num << "," << err.den
        << "," << rate << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

// ---------------------------------------------------------------------------
// audit

// Sensitivity-1 neighbor profiles: 100 random quality vectors, each paired
// with a copy whose single perturbed entry moved by one.
void em_suite(std::vector<std::vector<std::int64_t>>& sets,
              std::vector<std::pair<std::size_t, std::size_t>>& pairs, std::uint64_t seed,
              std::size_t n_pairs) {
    Rng rng(seed);
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
}

int run_audit(const Options& o) {
    AuditMode mode;
    if (o.mode == "exact")
        mode = AuditMode::exact;
    else if (o.mode == "mc" || o.mode == "monte_carlo")
        mode = AuditMode::monte_carlo;
    else
        throw std::invalid_argument("audit mode must be exact or mc");
    std::size_t trials = o.trials == 0 ? 20000 : o.trials;

    ordered_json doc;
    doc["command"] = "audit";
    ordered_json cfg;
    cfg["mode"] = o.mode;
    cfg["alpha"] = o.alpha;
    cfg["beta"] = o.beta;
    cfg["trials"] = mode == AuditMode::monte_carlo ? trials : 0;
    cfg["seed"] = o.seed;
    doc["config"] = cfg;

    std::vector<std::vector<std::int64_t>> sets;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    em_suite(sets, pairs, o.seed, 100);
    AuditReport em =
        audit(em_audit_mechanism(sets, o.alpha), pairs, o.alpha, 0.0, mode, trials, o.seed);

    // Release step: same-winner neighbors across consecutive instability
    // counts, then a different-winner pair at instability 1 on both sides.
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t c = 1; c <= 10; ++c) runs.push_back({1, c});
    runs.push_back({2, 1});  // index 10
    std::vector<std::pair<std::size_t, std::size_t>> rpairs;
    for (std::size_t i = 0; i + 1 < 10; ++i) {
        rpairs.push_back({i, i + 1});
        rpairs.push_back({i + 1, i});
    }
    rpairs.push_back({0, 10});
    rpairs.push_back({10, 0});
    AuditReport release = audit(release_audit_mechanism(runs, 2, o.alpha, o.beta), rpairs, o.alpha,
                                o.beta, mode, trials, o.seed + 1);

    bool any_fail =
        em.verdict == AuditVerdict::fail || release.verdict == AuditVerdict::fail;
    ordered_json suites = ordered_json::array();
    {
        ordered_json s;
        s["name"] = "em-neighbors";
        s["report"] = audit_report_to_json(em);
        suites.push_back(std::move(s));
    }
    {
        ordered_json s;
        s["name"] = "release-step";
        s["report"] = audit_report_to_json(release);
        suites.push_back(std::move(s));
    }
    doc["suites"] = std::move(suites);
    doc["any_fail"] = any_fail;

    auto verdict_str = [](const AuditReport& r) {
        return r.verdict == AuditVerdict::pass ? "pass"
               : r.verdict == AuditVerdict::fail ? "fail"
                                                 : "inconclusive";
    };
    std::ostringstream csv;
    csv << "suite,mode,alpha,beta,pass,verdict,max_ratio,slack\n";
    csv << "em-neighbors," << o.mode << "," << fmt_double(o.alpha) << ",0,"
        << (em.pass ? 1 : 0) << "," << verdict_str(em) << ","
        << (std::isfinite(em.max_ratio) ? fmt_double(em.max_ratio) : "inf") << ","
        << fmt_double(em.slack) << "\n";
    csv << "release-step," << o.mode << "," << fmt_double(o.alpha) << "," << fmt_double(o.beta)
        << "," << (release.pass ? 1 : 0) << "," << verdict_str(release) << ","
        << (std::isfinite(release.max_ratio) ? fmt_double(release.max_ratio) : "inf") << ","
        << fmt_double(release.slack) << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str(), any_fail ? 1 : 0);
}

// ---------------------------------------------------------------------------
// stability

int run_stability(const Options& o) {
    std::vector<double> atoms = parse_doubles(o.atoms);
    StabilityReport rep = stability_probs(o.r, atoms, o.t);
    ordered_json doc;
    doc["command"] = "stability";
    ordered_json cfg;
    cfg["r"] = o.r;
    cfg["atoms"] = atoms;
    cfg["t"] = o.t;
    doc["config"] = cfg;
    doc["none"] = rep.none;
    doc["one"] = rep.one;
    doc["two"] = rep.two;
    doc["bound_none"] = rep.bound_none;
    doc["bound_one_poly"] = rep.bound_one_poly;
    doc["bound_one_exp"] = rep.bound_one_exp;
    doc["bound_two_split"] = rep.bound_two_split;
    doc["bound_two_exp"] = rep.bound_two_exp;
    doc["bounds_ok"] = rep.bounds_ok;
    std::ostringstream csv;
    csv << "r,t,none,one,two,bound_none,bound_one_poly,bound_one_exp,bound_two_split,"
           "bound_two_exp,bounds_ok\n";
    csv << fmt_double(o.r) << "," << o.t << "," << fmt_double(rep.none) << ","
        << fmt_double(rep.one) << "," << fmt_double(rep.two) << "," << fmt_double(rep.bound_none)
        << "," << fmt_double(rep.bound_one_poly) << "," << fmt_double(rep.bound_one_exp) << ","
        << fmt_double(rep.bound_two_split) << "," << fmt_double(rep.bound_two_exp) << ","
        << (rep.bounds_ok ? 1 : 0) << "\n";
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

// ---------------------------------------------------------------------------
// report: a deterministic battery across the modules

int run_report(const Options& o) {
    ordered_json doc;
    doc["command"] = "report";
    ordered_json cfg;
    cfg["seed"] = o.seed;
    doc["config"] = cfg;
    std::vector<std::tuple<std::string, std::string, std::string>> rows;

    for (std::int64_t b : {1, 2, 3}) {
        ConceptClass c = make_builtin(BuiltinKind::threshold, {b});
        rows.emplace_back("dims", "thr_" + std::to_string(b) + "_vc",
                          std::to_string(vc_dimension(c).dim));
        rows.emplace_back("dims", "thr_" + std::to_string(b) + "_ldim",
                          std::to_string(ldim(c).dim));
    }
    for (std::int64_t p : {2, 3, 5}) {
        ConceptClass c = make_builtin(BuiltinKind::line, {p});
        rows.emplace_back("dims", "line_" + std::to_string(p) + "_ldim",
                          std::to_string(ldim(c).dim));
    }
    for (std::size_t d = 1; d <= 3; ++d) {
        EvalProblem g = EvalProblem::augindex(d);
        std::size_t cost = dist_cc(g, uniform_promise(g), Rat(0, 1));
        rows.emplace_back("cc", "augindex_" + std::to_string(d) + "_dcc0", std::to_string(cost));
    }
    {
        auto rep = stability_probs(0.5, {0.5}, 3);
        rows.emplace_back("stability", "single_atom_t3_none", fmt_double(rep.none));
        rows.emplace_back("stability", "single_atom_t3_one", fmt_double(rep.one));
        auto rep8 = stability_probs(0.5, {0.25, 0.25}, 8);
        rows.emplace_back("stability", "pair_t8_two", fmt_double(rep8.two));
        rows.emplace_back("stability", "pair_t8_bounds_ok", rep8.bounds_ok ? "1" : "0");
    }
    {
        std::vector<std::vector<std::int64_t>> sets;
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        em_suite(sets, pairs, o.seed, 20);
        AuditReport em = audit(em_audit_mechanism(sets, 1.0), pairs, 1.0, 0.0, AuditMode::exact);
        rows.emplace_back("audit", "em_exact_pass", em.pass ? "1" : "0");
        rows.emplace_back("audit", "em_exact_max_ratio", fmt_double(em.max_ratio));
    }
    {
        LineLearnerConfig lc;
        lc.p = 5;
        lc.eps = 0.2;
        lc.delta = 0.25;
        lc.alpha = 0.49;
        lc.beta = 0.05;
        lc.range_width_override = 2.0;
        lc.ell_override = 15.0;
        std::size_t domain = 25;
        BitRow target_row = hypothesis_row(Hypothesis::line_fn(5, 1, 0), domain);
        FiniteDistribution uni = FiniteDistribution::uniform(domain);
        SampleOracle oracle = make_realizable_oracle(uni, target_row);
        Rng rng(o.seed);
        BoostedResult run = line_boosted_learner(lc, oracle, rng);
        Rat err = disagreement(target_row, hypothesis_row(run.h, domain), uni);
        rows.emplace_back("learn", "line5_boosted_error", err.to_string());
        rows.emplace_back("learn", "line5_deviation_flags",
                          std::to_string(lc.deviation_flags().size()));
    }

    ordered_json sections = ordered_json::array();
    std::ostringstream csv;
    csv << "section,name,value\n";
    for (const auto& [section, name, value] : rows) {
        ordered_json r;
        r["section"] = section;
        r["name"] = name;
        r["value"] = value;
        sections.push_back(std::move(r));
        csv << section << "," << name << "," << value << "\n";
    }
    doc["rows"] = std::move(sections);
    ordered_json d = doc;
    return emit(o, d, csv.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite-scale private learning and communication toolkit"};
    app.require_subcommand(1);
    Options o;

    auto* dims = app.add_subcommand("dims", "VC and mistake-tree dimensions of a class");
    auto* ldimc = app.add_subcommand("ldim", "mistake-tree dimension with witness checks");
    auto* cc = app.add_subcommand("cc", "one-way distributional communication cost");
    cc->add_option("--problem", o.problem, "eval|augindex|equality");
    cc->add_option("--k", o.k, "repetition count for the equality protocol");
    auto* repdimc = app.add_subcommand("repdim", "cover and packing representation accounting");
    auto* cover = app.add_subcommand("cover", "minimum eps-cover of a class");
    cover->add_flag("--proper", o.proper, "restrict cover rows to the class itself");
    auto* lline = app.add_subcommand("learn-line", "private line learner (boosted)");
    lline->add_option("--target", o.target, "target line as 'a,b'");
    auto* ldist = app.add_subcommand("learn-dist", "distribution-specific private learner");
    ldist->add_option("--target", o.target, "target concept index");
    auto* llabel = app.add_subcommand("learn-label", "label-private learner");
    llabel->add_option("--target", o.target, "target concept index");
    auto* auditc = app.add_subcommand("audit", "privacy audits of the built-in mechanisms");
    auditc->add_option("--mode", o.mode, "exact|mc");
    auto* stab = app.add_subcommand("stability", "subsample-stability event probabilities");
    stab->add_option("--r", o.r, "total positive mass");
    stab->add_option("--atoms", o.atoms, "comma-separated positive atom masses");
    stab->add_option("--t", o.t, "subsample size");
    auto* reportc = app.add_subcommand("report", "deterministic battery across modules");

    for (CLI::App* cmd : {dims, ldimc, cc, repdimc, cover, lline, ldist, llabel, auditc, stab,
                          reportc})
        add_common_flags(cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        apply_config(o);
        if (dims->parsed()) return run_dims(o);
        if (ldimc->parsed()) return run_ldim(o);
        if (cc->parsed()) return run_cc(o);
        if (repdimc->parsed()) return run_repdim(o);
        if (cover->parsed()) return run_cover(o);
        if (lline->parsed()) return run_learn_line(o);
        if (ldist->parsed()) return run_learn_dist(o);
        if (llabel->parsed()) return run_learn_label(o);
        if (auditc->parsed()) return run_audit(o);
        if (stab->parsed()) return run_stability(o);
        if (reportc->parsed()) return run_report(o);
        std::cerr << "no command selected\n";
        return 2;
    } catch (const cap_error& e) {
        ordered_json err;
        err["error"]["type"] = "cap";
        err["error"]["message"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
