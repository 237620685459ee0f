#include "loglab/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "loglab/error.hpp"

namespace loglab {

using Json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ConfigError(where + ": " + what); }

void reject_unknown(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(where, "expected an object");
    std::set<std::string> ok;
    for (const char* k : allowed) ok.insert(k);
    for (const auto& [key, value] : j.items()) {
        if (!ok.contains(key)) fail(where, "unknown key '" + key + "'");
    }
}

double get_number(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
    const Json& v = j.at(key);
    if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(where, std::string("'") + key + "' must be finite");
    return x;
}

int get_int(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
    const Json& v = j.at(key);
    if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
    return v.get<int>();
}

std::string get_string(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) fail(where, std::string("missing '") + key + "'");
    const Json& v = j.at(key);
    if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

std::vector<double> get_numbers(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (const Json& v : j) {
        if (!v.is_number()) fail(where, "expected an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

// ---- domain -----------------------------------------------------------------

Json domain_to_json(const Domain& d) {
    Json j;
    switch (d.kind()) {
        case DomainKind::interval:
            j["kind"] = "interval";
            j["halfwidth"] = d.halfwidths()[0];
            break;
        case DomainKind::box:
            j["kind"] = "box";
            j["halfwidths"] = std::vector<double>(d.halfwidths().begin(), d.halfwidths().end());
            break;
        case DomainKind::ball:
            j["kind"] = "ball";
            j["radius"] = d.radius();
            j["dim"] = d.ambient_dim();
            break;
    }
    return j;
}

Domain domain_from_json(const Json& j) {
    const std::string where = "domain";
    if (!j.is_object()) fail(where, "expected an object");
    const std::string kind = get_string(j, "kind", where);
    try {
        if (kind == "interval") {
            reject_unknown(j, where, {"kind", "halfwidth"});
            return Domain::interval(get_number(j, "halfwidth", where));
        }
        if (kind == "box") {
            reject_unknown(j, where, {"kind", "halfwidths"});
            if (!j.contains("halfwidths")) fail(where, "missing 'halfwidths'");
            return Domain::box(get_numbers(j.at("halfwidths"), where + ".halfwidths"));
        }
        if (kind == "ball") {
            reject_unknown(j, where, {"kind", "radius", "dim"});
            return Domain::ball(get_number(j, "radius", where), get_int(j, "dim", where));
        }
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    fail(where, "unknown kind '" + kind + "'");
}

// ---- reaction ---------------------------------------------------------------

Json reaction_to_json(const Reaction& r) {
    Json j;
    switch (r.kind()) {
        case ReactionKind::lane_emden:
            j["kind"] = "lane_emden";
            break;
        case ReactionKind::log_schrodinger:
            j["kind"] = "log_schrodinger";
            return j;
        case ReactionKind::dispersive_lane_emden:
            j["kind"] = "dispersive_lane_emden";
            break;
        case ReactionKind::dispersive_log:
            j["kind"] = "dispersive_log";
            return j;
    }
    j["q"] = r.q();
    j["sigma"] = r.sigma();
    return j;
}

Reaction reaction_from_json(const Json& j) {
    const std::string where = "reaction";
    if (!j.is_object()) fail(where, "expected an object");
    const std::string kind = get_string(j, "kind", where);
    try {
        if (kind == "log_schrodinger" || kind == "dispersive_log") {
            reject_unknown(j, where, {"kind"});
            return kind == "log_schrodinger" ? Reaction::log_schrodinger() : Reaction::dispersive_log();
        }
        if (kind == "lane_emden" || kind == "dispersive_lane_emden") {
            reject_unknown(j, where, {"kind", "q", "sigma"});
            const double q = get_number(j, "q", where);
            const double s = get_number(j, "sigma", where);
            return kind == "lane_emden" ? Reaction::lane_emden(q, s) : Reaction::dispersive_lane_emden(q, s);
        }
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    fail(where, "unknown kind '" + kind + "'");
}

// ---- transforms -------------------------------------------------------------

Json transform_to_json(const TransformSpec& spec) {
    const Transform& t = spec.transform;
    Json j;
    switch (t.kind()) {
        case TransformKind::power:
            j["kind"] = "power";
            j["alpha"] = t.parameter();
            break;
        case TransformKind::log:
            j["kind"] = "log";
            break;
        case TransformKind::sqrt_log:
            j["kind"] = "sqrt_log";
            j["m"] = t.parameter();
            break;
        case TransformKind::atanh_poly:
            j["kind"] = "atanh_poly";
            j["q"] = t.parameter();
            break;
        case TransformKind::sqrt_one_minus_log:
            j["kind"] = "sqrt_one_minus_log";
            break;
    }
    j["negated"] = t.is_negated();
    if (spec.expect) j["expect"] = to_string(*spec.expect);
    return j;
}

Verdict verdict_from_string(const std::string& s, const std::string& where) {
    for (Verdict v : {Verdict::holds_strictly, Verdict::holds_weakly, Verdict::fails}) {
        if (to_string(v) == s) return v;
    }
    fail(where, "unknown verdict '" + s + "'");
}

TransformSpec transform_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    const std::string kind = get_string(j, "kind", where);
    TransformSpec spec;
    try {
        if (kind == "power") {
            reject_unknown(j, where, {"kind", "alpha", "negated", "expect"});
            spec.transform = Transform::power(get_number(j, "alpha", where));
        } else if (kind == "log") {
            reject_unknown(j, where, {"kind", "negated", "expect"});
            spec.transform = Transform::log();
        } else if (kind == "sqrt_log") {
            reject_unknown(j, where, {"kind", "m", "negated", "expect"});
            spec.transform = Transform::sqrt_log(get_number(j, "m", where));
        } else if (kind == "atanh_poly") {
            reject_unknown(j, where, {"kind", "q", "negated", "expect"});
            spec.transform = Transform::atanh_poly(get_number(j, "q", where));
        } else if (kind == "sqrt_one_minus_log") {
            reject_unknown(j, where, {"kind", "negated", "expect"});
            spec.transform = Transform::sqrt_one_minus_log();
        } else {
            fail(where, "unknown kind '" + kind + "'");
        }
    } catch (const DomainError& e) {
        fail(where, e.what());
    }
    if (j.contains("negated")) {
        if (!j.at("negated").is_boolean()) fail(where, "'negated' must be a boolean");
        if (j.at("negated").get<bool>()) spec.transform = spec.transform.negated();
    }
    if (j.contains("expect")) spec.expect = verdict_from_string(get_string(j, "expect", where), where);
    return spec;
}

// ---- whole config -----------------------------------------------------------

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["experiment"] = c.experiment;
    if (c.domain) j["domain"] = domain_to_json(*c.domain);
    if (c.reaction) j["reaction"] = reaction_to_json(*c.reaction);
    j["resolutions"] = c.resolutions;
    if (!c.q_schedule.empty()) j["q_schedule"] = c.q_schedule;
    if (c.sigma_rule) {
        Json s;
        if (c.sigma_rule->kind == SigmaRuleKind::fixed) {
            s["kind"] = "fixed";
            s["sigma"] = c.sigma_rule->sigma;
        } else {
            s["kind"] = "log_path";
        }
        j["sigma_rule"] = s;
    }
    if (!c.transforms.empty()) {
        Json arr = Json::array();
        for (const auto& t : c.transforms) arr.push_back(transform_to_json(t));
        j["transforms"] = arr;
    }
    if (!c.alphas.empty()) j["alphas"] = c.alphas;
    if (c.b_grid) j["b_grid"] = Json{{"lo", c.b_grid->lo}, {"hi", c.b_grid->hi}, {"points", c.b_grid->points}};
    if (!c.levels.empty()) {
        j["levels"] = c.levels;
        j["sample_pairs"] = c.sample_pairs;
    }
    if (c.seed) j["seed"] = *c.seed;
    j["field_source"] = c.field_source;
    const Tolerances& t = c.tolerances;
    j["tolerances"] = Json{{"newton", t.newton},
                           {"eigen", t.eigen},
                           {"quadrature", t.quadrature},
                           {"m_of_b", t.m_of_b},
                           {"limit_error", t.limit_error},
                           {"field_error", t.field_error},
                           {"residual_factor", t.residual_factor},
                           {"energy_factor", t.energy_factor}};
    const ConcavityOptions& o = c.concavity;
    j["concavity"] = Json{{"eps_floor_rel", o.eps_floor_rel},
                          {"layer_k", o.layer_k},
                          {"strict_margin_rel", o.strict_margin_rel},
                          {"weak_tol_rel", o.weak_tol_rel},
                          {"exclude_near_max_rel", o.exclude_near_max_rel}};
    j["output_dir"] = c.output_dir;
    return j;
}

ExperimentConfig from_json(const Json& j) {
    reject_unknown(j, "config",
                   {"experiment", "domain", "reaction", "resolutions", "q_schedule", "sigma_rule", "transforms", "alphas",
                    "b_grid", "levels", "sample_pairs", "seed", "field_source", "tolerances", "concavity",
                    "output_dir"});
    ExperimentConfig c;
    c.experiment = get_string(j, "experiment", "config");
    if (j.contains("domain")) c.domain = domain_from_json(j.at("domain"));
    if (j.contains("reaction")) c.reaction = reaction_from_json(j.at("reaction"));
    if (j.contains("resolutions")) {
        const Json& r = j.at("resolutions");
        if (!r.is_array()) fail("resolutions", "expected an array of integers");
        for (const Json& v : r) {
            if (!v.is_number_integer()) fail("resolutions", "expected an array of integers");
            c.resolutions.push_back(v.get<int>());
        }
    }
    if (j.contains("q_schedule")) c.q_schedule = get_numbers(j.at("q_schedule"), "q_schedule");
    if (j.contains("sigma_rule")) {
        const Json& s = j.at("sigma_rule");
        const std::string kind = get_string(s, "kind", "sigma_rule");
        if (kind == "fixed") {
            reject_unknown(s, "sigma_rule", {"kind", "sigma"});
            c.sigma_rule = SigmaRule::fixed(get_number(s, "sigma", "sigma_rule"));
        } else if (kind == "log_path") {
            reject_unknown(s, "sigma_rule", {"kind"});
            c.sigma_rule = SigmaRule::log_path();
        } else {
            fail("sigma_rule", "unknown kind '" + kind + "'");
        }
    }
    if (j.contains("transforms")) {
        const Json& arr = j.at("transforms");
        if (!arr.is_array()) fail("transforms", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            c.transforms.push_back(transform_from_json(arr[i], "transforms[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("alphas")) c.alphas = get_numbers(j.at("alphas"), "alphas");
    if (j.contains("b_grid")) {
        const Json& b = j.at("b_grid");
        reject_unknown(b, "b_grid", {"lo", "hi", "points"});
        c.b_grid = BGrid{get_number(b, "lo", "b_grid"), get_number(b, "hi", "b_grid"), get_int(b, "points", "b_grid")};
    }
    if (j.contains("levels")) c.levels = get_numbers(j.at("levels"), "levels");
    if (j.contains("sample_pairs")) {
        const Json& v = j.at("sample_pairs");
        if (!v.is_number_unsigned()) fail("sample_pairs", "must be a non-negative integer");
        c.sample_pairs = v.get<std::size_t>();
    }
    if (j.contains("seed")) {
        const Json& v = j.at("seed");
        if (!v.is_number_unsigned()) fail("seed", "must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("field_source")) c.field_source = get_string(j, "field_source", "config");
    if (j.contains("tolerances")) {
        const Json& t = j.at("tolerances");
        reject_unknown(t, "tolerances",
                       {"newton", "eigen", "quadrature", "m_of_b", "limit_error", "field_error", "residual_factor",
                        "energy_factor"});
        auto opt = [&](const char* key, double& dst) {
            if (t.contains(key)) dst = get_number(t, key, "tolerances");
        };
        opt("newton", c.tolerances.newton);
        opt("eigen", c.tolerances.eigen);
        opt("quadrature", c.tolerances.quadrature);
        opt("m_of_b", c.tolerances.m_of_b);
        opt("limit_error", c.tolerances.limit_error);
        opt("field_error", c.tolerances.field_error);
        opt("residual_factor", c.tolerances.residual_factor);
        opt("energy_factor", c.tolerances.energy_factor);
    }
    if (j.contains("concavity")) {
        const Json& o = j.at("concavity");
        reject_unknown(o, "concavity",
                       {"eps_floor_rel", "layer_k", "strict_margin_rel", "weak_tol_rel", "exclude_near_max_rel"});
        if (o.contains("eps_floor_rel")) c.concavity.eps_floor_rel = get_number(o, "eps_floor_rel", "concavity");
        if (o.contains("layer_k")) c.concavity.layer_k = get_int(o, "layer_k", "concavity");
        if (o.contains("strict_margin_rel"))
            c.concavity.strict_margin_rel = get_number(o, "strict_margin_rel", "concavity");
        if (o.contains("weak_tol_rel")) c.concavity.weak_tol_rel = get_number(o, "weak_tol_rel", "concavity");
        if (o.contains("exclude_near_max_rel"))
            c.concavity.exclude_near_max_rel = get_number(o, "exclude_near_max_rel", "concavity");
    }
    if (j.contains("output_dir")) c.output_dir = get_string(j, "output_dir", "config");
    return c;
}

bool needs(const std::string& experiment, std::initializer_list<const char*> names) {
    for (const char* n : names) {
        if (experiment == n) return true;
    }
    return false;
}

}  // namespace

std::vector<double> BGrid::values() const {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double a = std::log(lo);
    const double b = std::log(hi);
    for (int i = 0; i < points; ++i) out.push_back(std::exp(a + (b - a) * i / (points - 1)));
    out.front() = lo;
    out.back() = hi;
    return out;
}

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"solve",          "branch",         "converge-eigen", "converge-log",
                                                "concavity",      "quasiconcavity", "pohozaev",       "dispersive",
                                                "oned-table",     "tensor-check",   "gausson-residual",
                                                "energy-bound"};
    return names;
}

void validate(const ExperimentConfig& c) {
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end()) {
        fail("experiment", "unknown experiment '" + c.experiment + "'");
    }
    const Tolerances& t = c.tolerances;
    for (double v : {t.newton, t.eigen, t.quadrature, t.m_of_b, t.limit_error, t.field_error, t.residual_factor,
                     t.energy_factor}) {
        if (!(v > 0.0)) fail("tolerances", "all tolerances must be positive");
    }
    const ConcavityOptions& o = c.concavity;
    if (!(o.eps_floor_rel > 0.0 && o.eps_floor_rel < 1.0)) fail("concavity", "eps_floor_rel must lie in (0,1)");
    if (o.layer_k < 2) fail("concavity", "layer_k must be at least 2");
    if (!(o.strict_margin_rel > 0.0)) fail("concavity", "strict_margin_rel must be positive");
    if (!(o.weak_tol_rel > 0.0) && o.weak_tol_rel != -1.0) {
        fail("concavity", "weak_tol_rel must be positive, or -1 for the h^2 default");
    }
    if (!(o.exclude_near_max_rel >= 0.0 && o.exclude_near_max_rel < 1.0)) {
        fail("concavity", "exclude_near_max_rel must lie in [0,1)");
    }
    for (int n : c.resolutions) {
        if (n < 3) fail("resolutions", "each resolution needs at least 3 nodes");
    }
    if (c.field_source != "solve" && c.field_source != "tensor" && c.field_source != "oned" &&
        c.field_source != "gausson") {
        fail("field_source", "must be one of solve, tensor, oned, gausson");
    }
    if (c.b_grid && !(c.b_grid->lo > 0.0 && c.b_grid->hi > c.b_grid->lo && c.b_grid->points >= 2)) {
        fail("b_grid", "need 0 < lo < hi and points >= 2");
    }
    for (double a : c.alphas) {
        if (!(a > 0.0 && a < 1.0)) fail("alphas", "alphas must lie in (0,1)");
    }
    for (std::size_t i = 1; i < c.alphas.size(); ++i) {
        if (!(c.alphas[i] > c.alphas[i - 1])) fail("alphas", "alphas must be strictly increasing");
    }
    for (double l : c.levels) {
        if (!(l > 0.0 && l < 1.0)) fail("levels", "levels are fractions of sup u in (0,1)");
    }

    const std::string& e = c.experiment;
    const bool pde = !needs(e, {"oned-table"});
    if (pde && !c.domain) fail(e, "requires a domain");
    if (pde && c.resolutions.empty()) fail(e, "requires at least one resolution");
    if (needs(e, {"solve", "energy-bound"}) && !c.reaction) fail(e, "requires a reaction");
    if (needs(e, {"branch", "converge-eigen", "converge-log"})) {
        if (c.q_schedule.empty()) fail(e, "requires a q_schedule");
        if (e == "branch" && !c.sigma_rule) fail(e, "requires a sigma_rule");
        if (e == "converge-eigen" && (!c.sigma_rule || c.sigma_rule->kind != SigmaRuleKind::fixed)) {
            fail(e, "requires a fixed sigma_rule");
        }
    }
    if (needs(e, {"concavity"}) && c.transforms.empty() && c.alphas.empty()) {
        fail(e, "requires transforms or alphas");
    }
    if (needs(e, {"concavity", "quasiconcavity"}) && c.field_source == "solve" && !c.reaction) {
        fail(e, "field_source 'solve' requires a reaction");
    }
    if (needs(e, {"concavity", "quasiconcavity", "tensor-check"}) && c.domain && c.field_source != "solve" &&
        c.field_source != "gausson" && c.domain->kind() == DomainKind::ball) {
        fail(e, "tensor and 1D profile fields need an interval or box domain");
    }
    if (e == "quasiconcavity") {
        if (c.levels.empty()) fail(e, "requires levels");
        if (c.sample_pairs == 0) fail(e, "sample_pairs must be positive");
        if (!c.seed) fail(e, "sampling requires a seed");
    }
    if (e == "dispersive" && (!c.reaction || c.reaction->kind() != ReactionKind::dispersive_lane_emden)) {
        fail(e, "requires a dispersive_lane_emden reaction (the dispersive log partner is implied)");
    }
    if (e == "oned-table" && !c.b_grid) fail(e, "requires a b_grid");
    if (needs(e, {"tensor-check", "gausson-residual"})) {
        if (c.domain->kind() == DomainKind::ball) fail(e, "requires an interval or box domain");
    }
    if (c.domain && c.reaction) {
        try {
            c.reaction->validate_for_dimension(c.domain->ambient_dim());
        } catch (const DomainError& err) {
            fail("reaction", err.what());
        }
    }
}

ExperimentConfig parse_config(const std::string& json_text) {
    Json j;
    try {
        j = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        fail("config", std::string("JSON parse error: ") + e.what());
    }
    ExperimentConfig c;
    try {
        c = from_json(j);
    } catch (const Json::exception& e) {
        fail("config", e.what());
    }
    validate(c);
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("config", "cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& config) { return to_json(config).dump(2); }

std::string config_hash(const ExperimentConfig& config) {
    // The output location does not change the experiment.
    Json j = to_json(config);
    j.erase("output_dir");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

}  // namespace loglab
