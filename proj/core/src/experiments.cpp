#include "loglab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <sstream>

#include "artifacts.hpp"
#include "loglab/concavity.hpp"
#include "loglab/error.hpp"
#include "loglab/linops.hpp"
#include "loglab/oned.hpp"
#include "loglab/solver.hpp"

namespace loglab {

using detail::ArtifactWriter;
using detail::Cell;
using detail::Json;
using detail::number;

namespace {

constexpr double kSqrtE = 1.6487212707001282;

class Context {
public:
    Context(const ExperimentConfig& config, ArtifactWriter& writer) : config(config), writer(writer) {}

    const ExperimentConfig& config;
    ArtifactWriter& writer;
    std::vector<Check> checks;

    void require(std::string name, bool pass, double value, double limit) {
        checks.push_back({std::move(name), pass, value, limit, false});
    }
    void warn(std::string name, bool pass, double value, double limit) {
        checks.push_back({std::move(name), pass, value, limit, true});
    }

    Json checks_json() const {
        Json arr = Json::array();
        for (const Check& c : checks) {
            arr.push_back(Json{{"name", c.name},
                               {"kind", c.warning ? "warning" : "assertion"},
                               {"pass", c.pass},
                               {"value", number(c.value)},
                               {"limit", number(c.limit)}});
        }
        return arr;
    }

    NewtonOptions newton() const {
        NewtonOptions o;
        o.tol = config.tolerances.newton;
        return o;
    }
    int base_resolution() const { return config.resolutions.front(); }
};

double h_squared(const Grid& g) { return g.max_spacing() * g.max_spacing(); }

// Fans independent per-resolution work out to worker threads; results keep input order.
template <class Fn>
auto parallel_map(const std::vector<int>& inputs, Fn fn) {
    using R = decltype(fn(inputs.front()));
    std::vector<std::future<R>> futures;
    futures.reserve(inputs.size());
    for (int n : inputs) futures.push_back(std::async(std::launch::async, fn, n));
    std::vector<R> out;
    out.reserve(inputs.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

Json array3(const std::array<double, 3>& a, int d) {
    Json j = Json::array();
    for (int i = 0; i < d; ++i) j.push_back(number(a[static_cast<std::size_t>(i)]));
    return j;
}

Json solve_json(const SolveResult& r) {
    return Json{{"status", to_string(r.status)},
                {"newton_iters", r.newton_iters},
                {"residual_sup", number(r.residual_sup)},
                {"residual_threshold", number(r.residual_threshold)},
                {"sup_norm", number(r.sup_norm)},
                {"energy", number(r.energy)},
                {"nehari_residual", number(r.nehari_residual)}};
}

Json report_json(const ConcavityReport& r, int d) {
    return Json{{"transform", r.transform},
                {"orientation", r.concavity ? "concavity" : "convexity"},
                {"verdict", to_string(r.verdict)},
                {"extreme_eigenvalue", number(r.extreme_eigenvalue)},
                {"witness_node", r.witness_node},
                {"witness_coordinates", array3(r.witness_coordinates, d)},
                {"scale", number(r.scale)},
                {"strict_margin", number(r.strict_margin)},
                {"weak_tolerance", number(r.weak_tolerance)},
                {"eps_floor", number(r.eps_floor)},
                {"layer_width", number(r.layer_width)},
                {"check_set_size", r.check_set_size}};
}

Json sweep_json(const AlphaSweepResult& s) {
    Json v = Json::array();
    for (const AlphaVerdict& a : s.verdicts) {
        v.push_back(Json{{"alpha", number(a.alpha)},
                         {"verdict", to_string(a.verdict)},
                         {"extreme_eigenvalue", number(a.extreme_eigenvalue)}});
    }
    Json j;
    j["largest_passing"] = s.largest_passing ? number(*s.largest_passing) : Json(nullptr);
    j["consistent"] = s.consistent;
    j["verdicts"] = v;
    return j;
}

std::vector<std::string> coordinate_columns(const Grid& g) {
    if (g.radial()) return {"r"};
    std::vector<std::string> cols;
    for (int a = 0; a < g.dim(); ++a) cols.push_back("x" + std::to_string(a));
    return cols;
}

// Field samples plus transform values, one row per node (figure data).
void write_field_csv(Context& ctx, const std::string& name, FieldView u, const std::vector<TransformSpec>& transforms) {
    const Grid& g = *u.grid;
    std::vector<std::string> cols = coordinate_columns(g);
    cols.emplace_back("u");
    std::vector<std::vector<double>> tv;
    for (const auto& t : transforms) {
        cols.push_back(t.transform.describe());
        tv.push_back(transform_values(u, t.transform));
    }
    std::vector<std::vector<Cell>> rows;
    rows.reserve(g.size());
    for (std::size_t node = 0; node < g.size(); ++node) {
        std::vector<Cell> row;
        const auto x = g.coordinates(node);
        for (int a = 0; a < g.dim(); ++a) row.emplace_back(x[static_cast<std::size_t>(a)]);
        row.emplace_back(u.values[node]);
        for (const auto& v : tv) row.emplace_back(v[node]);
        rows.push_back(std::move(row));
    }
    ctx.writer.write_csv(name, cols, rows);
}

SolveResult solve_on(const GridPtr& grid, const Reaction& reaction, const NewtonOptions& opts, double eigen_tol) {
    const Eigenpair eig = principal_eigenpair(grid, eigen_tol);
    return newton_solve(reaction, initial_guess(eig, reaction), opts);
}

// Field for the concavity-type experiments, chosen by field_source.
struct SourceField {
    GridPtr grid;
    std::vector<double> values;
    std::optional<SolveResult> solve;

    FieldView view() const { return FieldView(*grid, values); }
};

SourceField make_source_field(Context& ctx, int resolution) {
    const ExperimentConfig& c = ctx.config;
    SourceField s;
    s.grid = make_grid(*c.domain, resolution);
    if (c.field_source == "solve") {
        SolveResult r = solve_on(s.grid, *c.reaction, ctx.newton(), c.tolerances.eigen);
        ctx.require("solve_converged", r.converged(), r.residual_sup, r.residual_threshold);
        s.values.assign(r.field.values().begin(), r.field.values().end());
        s.solve = std::move(r);
    } else if (c.field_source == "tensor" || c.field_source == "oned") {
        if (c.field_source == "oned" && c.domain->kind() != DomainKind::interval) {
            throw ConfigError("field_source 'oned' requires an interval domain");
        }
        const Field f = oned::tensor_solution(s.grid);
        s.values.assign(f.values().begin(), f.values().end());
    } else {
        s.values = oned::gausson_samples(*s.grid);
    }
    return s;
}

Json domain_header(const ExperimentConfig& c) {
    Json j;
    j["experiment"] = c.experiment;
    if (c.domain) j["domain"] = c.domain->describe();
    if (c.reaction) j["reaction"] = c.reaction->describe();
    return j;
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

// Ratios e_k / e_{k+1} for successive refinements.
std::vector<double> ratios(const std::vector<double>& errors) {
    std::vector<double> r;
    for (std::size_t i = 1; i < errors.size(); ++i) r.push_back(errors[i - 1] / errors[i]);
    return r;
}

void require_ratios(Context& ctx, const std::string& name, const std::vector<double>& errors) {
    const std::vector<double> r = ratios(errors);
    for (std::size_t i = 0; i < r.size(); ++i) {
        ctx.require(name + "_ratio_" + std::to_string(i), r[i] >= 3.5 && r[i] <= 4.5, r[i], 4.0);
    }
}

// Terminal sup-norm threshold for log solutions: sqrt(e) in 1D, e^{N/4} otherwise.
double log_sup_threshold(int N) { return N == 1 ? kSqrtE : std::exp(N / 4.0); }

std::vector<std::string> branch_columns() {
    return {"q", "sigma", "sup_norm", "sup_norm_pow_qm1", "energy", "nehari_residual", "residual_sup", "newton_iters"};
}

std::vector<Cell> branch_row(const BranchPoint& p) {
    const SolveResult& r = p.result;
    return {p.q,
            p.sigma,
            r.sup_norm,
            std::pow(r.sup_norm, p.q - 1.0),
            r.energy,
            r.nehari_residual,
            r.residual_sup,
            static_cast<long long>(r.newton_iters)};
}

Json branch_json(const Branch& b) {
    return Json{{"sigma_rule", b.rule.describe()},
                {"lambda1", number(b.lambda1)},
                {"points", b.points.size()},
                {"complete", b.complete},
                {"failure", b.failure}};
}

// ---- subcommands ---------------------------------------------------------------

void run_solve(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const Eigenpair eig = principal_eigenpair(grid, c.tolerances.eigen);
    const SolveResult r = newton_solve(*c.reaction, initial_guess(eig, *c.reaction), ctx.newton());
    ctx.require("converged", r.converged(), r.residual_sup, r.residual_threshold);
    Json body = domain_header(c);
    body["resolution"] = ctx.base_resolution();
    body["lambda1"] = number(eig.lambda1);
    body["result"] = solve_json(r);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("solve.json", body);
    write_field_csv(ctx, "field.csv", r.field, c.transforms);
}

Branch branch_for(Context& ctx, SigmaRule rule) {
    const GridPtr grid = make_grid(*ctx.config.domain, ctx.base_resolution());
    return continuation_branch(grid, ctx.config.q_schedule, rule, ctx.newton());
}

void run_branch(Context& ctx) {
    const Branch b = branch_for(ctx, *ctx.config.sigma_rule);
    ctx.require("branch_complete", b.complete, static_cast<double>(b.points.size()),
                static_cast<double>(ctx.config.q_schedule.size()));
    std::vector<std::vector<Cell>> rows;
    for (const auto& p : b.points) rows.push_back(branch_row(p));
    ctx.writer.write_csv("branch.csv", branch_columns(), rows);
    Json body = domain_header(ctx.config);
    body["branch"] = branch_json(b);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("branch.json", body);
}

void run_converge_eigen(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const Branch b = continuation_branch(grid, c.q_schedule, *c.sigma_rule, ctx.newton());
    const Eigenpair eig = principal_eigenpair(grid, c.tolerances.eigen);
    ctx.require("branch_complete", b.complete, static_cast<double>(b.points.size()),
                static_cast<double>(c.q_schedule.size()));

    std::vector<std::string> cols = branch_columns();
    cols.emplace_back("limit_error");
    cols.emplace_back("field_error");
    std::vector<std::vector<Cell>> rows;
    std::vector<double> limit_errors;
    double last_field_error = HUGE_VAL;
    for (const auto& p : b.points) {
        const double target = 1.0 + b.lambda1 / p.sigma;
        const double err = std::abs(std::pow(p.result.sup_norm, p.q - 1.0) - target);
        double ferr = 0.0;
        for (std::size_t i = 0; i < grid->size(); ++i) {
            ferr = std::max(ferr, std::abs(p.result.field[i] / p.result.sup_norm - eig.phi1[i]));
        }
        limit_errors.push_back(err);
        last_field_error = ferr;
        std::vector<Cell> row = branch_row(p);
        row.emplace_back(err);
        row.emplace_back(ferr);
        rows.push_back(std::move(row));
    }
    ctx.writer.write_csv("converge_eigen.csv", cols, rows);
    const double last = limit_errors.empty() ? HUGE_VAL : limit_errors.back();
    ctx.require("limit_error_decreasing", strictly_decreasing(limit_errors), last, 0.0);
    ctx.require("limit_error_final", last < c.tolerances.limit_error, last, c.tolerances.limit_error);
    ctx.require("field_error_final", last_field_error < c.tolerances.field_error, last_field_error,
                c.tolerances.field_error);
    Json body = domain_header(c);
    body["branch"] = branch_json(b);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("converge_eigen.json", body);
}

void run_converge_log(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    if (c.sigma_rule && c.sigma_rule->kind != SigmaRuleKind::log_path) {
        throw ConfigError("converge-log: sigma_rule must be log_path (or omitted)");
    }
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const Branch b = continuation_branch(grid, c.q_schedule, SigmaRule::log_path(), ctx.newton());
    ctx.require("branch_complete", b.complete, static_cast<double>(b.points.size()),
                static_cast<double>(c.q_schedule.size()));
    const Reaction log = Reaction::log_schrodinger();
    std::vector<std::string> cols = branch_columns();
    cols.emplace_back("log_residual");
    cols.emplace_back("log_residual_core");
    std::vector<std::vector<Cell>> rows;
    std::vector<double> res;
    for (const auto& p : b.points) {
        const double r = residual_sup(p.result.field, log);
        res.push_back(r);
        std::vector<Cell> row = branch_row(p);
        row.emplace_back(r);
        row.emplace_back(residual_sup(p.result.field, log, 0.1));
        rows.push_back(std::move(row));
    }
    ctx.writer.write_csv("converge_log.csv", cols, rows);
    const double limit = c.tolerances.residual_factor * h_squared(*grid);
    const double last = res.empty() ? HUGE_VAL : res.back();
    ctx.require("log_residual_decreasing", strictly_decreasing(res), last, 0.0);
    ctx.require("log_residual_final", last < limit, last, limit);
    const double threshold = log_sup_threshold(c.domain->ambient_dim());
    const double sup = b.points.empty() ? 0.0 : b.points.back().result.sup_norm;
    ctx.require("terminal_sup_norm", sup > threshold, sup, threshold);
    Json body = domain_header(c);
    body["branch"] = branch_json(b);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("converge_log.json", body);
}

Json concavity_reports(Context& ctx, FieldView u, const std::string& prefix) {
    const ExperimentConfig& c = ctx.config;
    Json reports = Json::array();
    for (const TransformSpec& t : c.transforms) {
        const ConcavityReport r = check_transform_concavity(u, t.transform, c.concavity);
        reports.push_back(report_json(r, u.grid->dim()));
        if (t.expect) {
            ctx.require(prefix + r.transform + "_verdict", r.verdict == *t.expect, r.extreme_eigenvalue,
                        t.expect == Verdict::fails ? 0.0 : -r.weak_tolerance);
        }
    }
    return reports;
}

void run_concavity(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const SourceField s = make_source_field(ctx, ctx.base_resolution());
    const FieldView u = s.view();
    Json body = domain_header(c);
    body["field_source"] = c.field_source;
    body["resolution"] = ctx.base_resolution();
    if (s.solve) body["solve"] = solve_json(*s.solve);
    body["reports"] = concavity_reports(ctx, u, "");
    if (!c.alphas.empty()) {
        const AlphaSweepResult sweep = alpha_sweep(u, c.alphas, c.concavity);
        body["alpha_sweep"] = sweep_json(sweep);
        ctx.warn("alpha_sweep_consistent", sweep.consistent, sweep.largest_passing.value_or(0.0), 0.0);
    }
    if (s.solve && c.reaction->kind() == ReactionKind::log_schrodinger) {
        const Reaction& reaction = *c.reaction;
        const Transform w = Transform::log().negated();
        const double res = transformed_equation_residual(u, reaction, w, c.concavity);
        const double limit = c.tolerances.residual_factor * h_squared(*s.grid);
        ctx.require("transformed_equation_residual", res < limit, res, limit);
        body["transformed_equation_residual"] = Json{{"value", number(res)}, {"limit", number(limit)}};

        // Level sets of w = -log u: mean curvature and the Laplacian identity.
        const std::vector<double> wv = transform_values(u, w);
        const FieldView wf(*s.grid, wv);
        double k_min = HUGE_VAL;
        double identity_max = 0.0;
        std::size_t used = 0;
        for (std::size_t node : check_set(u, c.concavity)) {
            try {
                const LevelSetCurvature lc = level_set_curvature(wf, node);
                k_min = std::min(k_min, lc.mean_curvature);
                identity_max = std::max(identity_max, lc.identity_residual);
                ++used;
            } catch (const DomainError&) {
                // critical point of w: no level-set geometry
            }
        }
        body["level_set_curvature"] =
            Json{{"nodes", used}, {"min_mean_curvature", number(k_min)}, {"max_identity_residual", number(identity_max)}};
        if (s.grid->dim() > 1 || s.grid->radial()) ctx.warn("mean_curvature_positive", k_min > 0.0, k_min, 0.0);

        // sqrt_log(sup u) is singular at the maximum; reported only, never asserted.
        ConcavityOptions near_max = c.concavity;
        if (near_max.exclude_near_max_rel == 0.0) near_max.exclude_near_max_rel = 1e-2;
        try {
            const ConcavityReport r = check_transform_concavity(u, Transform::sqrt_log(u.sup_norm()), near_max);
            body["sqrt_log_diagnostic"] = report_json(r, u.grid->dim());
        } catch (const DomainError& e) {
            body["sqrt_log_diagnostic"] = Json{{"error", e.what()}};
        }
    }
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("concavity.json", body);
    write_field_csv(ctx, "concavity_field.csv", u, c.transforms);
}

void run_quasiconcavity(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const SourceField s = make_source_field(ctx, ctx.base_resolution());
    const FieldView u = s.view();
    std::vector<double> levels;
    for (double l : c.levels) levels.push_back(l * u.sup_norm());
    const QuasiConcavityReport r = quasiconcavity_check(u, levels, c.sample_pairs, *c.seed);
    ctx.require("quasiconcave", r.pass, 0.0, 0.0);
    Json lv = Json::array();
    for (const LevelCheck& l : r.levels) {
        lv.push_back(Json{{"level", number(l.level)},
                          {"set_size", l.set_size},
                          {"pairs", l.pairs},
                          {"violations", l.violations},
                          {"worst_deficit", number(l.worst_deficit)}});
    }
    Json body = domain_header(c);
    body["field_source"] = c.field_source;
    body["seed"] = *c.seed;
    body["slack"] = number(r.slack);
    body["pass"] = r.pass;
    body["levels"] = lv;
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("quasiconcavity.json", body);
}

void run_pohozaev(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const Reaction reaction = c.reaction.value_or(Reaction::log_schrodinger());
    if (reaction.kind() != ReactionKind::log_schrodinger) {
        throw ConfigError("pohozaev: reaction must be log_schrodinger (or omitted)");
    }
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const SolveResult r = solve_on(grid, reaction, ctx.newton(), c.tolerances.eigen);
    const PohozaevReport p = pohozaev_check(r, *c.domain);
    ctx.require("converged", r.converged(), r.residual_sup, r.residual_threshold);
    ctx.require("sup_norm_above_threshold", p.pass, p.sup_norm, p.threshold);
    Json body = domain_header(c);
    body["reaction"] = reaction.describe();
    body["result"] = solve_json(r);
    body["pohozaev"] = Json{{"sup_norm", number(p.sup_norm)}, {"threshold", number(p.threshold)}, {"pass", p.pass}};
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("pohozaev.json", body);
}

void run_dispersive(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const Eigenpair eig = principal_eigenpair(grid, c.tolerances.eigen);
    const double q = c.reaction->q();
    const std::vector<std::pair<Reaction, Transform>> pairs{
        {*c.reaction, Transform::atanh_poly(q)},
        {Reaction::dispersive_log(), Transform::sqrt_one_minus_log()},
    };
    Json solutions = Json::array();
    for (const auto& [reaction, transform] : pairs) {
        const std::string tag = reaction.kind() == ReactionKind::dispersive_log ? "dispersive_log" : "dispersive_lane_emden";
        Json entry{{"reaction", reaction.describe()}, {"lambda1", number(eig.lambda1)}};
        std::optional<SolveResult> r;
        try {
            r = newton_solve(reaction, initial_guess(eig, reaction), ctx.newton());
        } catch (const NumericalError& e) {
            entry["error"] = e.what();
        }
        if (reaction.kind() == ReactionKind::dispersive_lane_emden && !(reaction.sigma() > eig.lambda1)) {
            entry["note"] = "sigma <= lambda1: testing the equation against phi1 rules out a positive solution";
        }
        const bool ok = r && r->converged();
        ctx.require(tag + "_converged", ok, r ? r->residual_sup : HUGE_VAL, r ? r->residual_threshold : 0.0);
        if (r) entry["result"] = solve_json(*r);
        if (ok) {
            const double limit = 1.0 - 1e-3;
            ctx.require(tag + "_sup_below_one", r->sup_norm < limit, r->sup_norm, limit);
            const ConcavityReport rep = check_transform_concavity(r->field, transform, c.concavity);
            ctx.require(tag + "_" + rep.transform + "_strict", rep.verdict == Verdict::holds_strictly,
                        rep.extreme_eigenvalue, rep.strict_margin);
            entry["report"] = report_json(rep, grid->dim());
            write_field_csv(ctx, tag + "_field.csv", r->field, {TransformSpec{transform, std::nullopt}});
        }
        solutions.push_back(entry);
    }
    Json body = domain_header(c);
    body["solutions"] = solutions;
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("dispersive.json", body);
}

void run_oned_table(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const std::vector<double> bs = c.b_grid->values();
    const int n = c.resolutions.empty() ? 100000 : c.resolutions.front();
    std::vector<double> ms, slopes, alphas;
    std::vector<std::vector<Cell>> rows;
    double worst_roundtrip = 0.0, worst_shoot = 0.0, worst_drift_rel = 0.0, worst_slope_rel = 0.0,
           worst_inflection = 0.0;
    for (double b : bs) {
        const double m = oned::solve_m_of_b(b, c.tolerances.m_of_b);
        const double slope = oned::boundary_slope(m);
        const double a = oned::alpha_star(b);
        const oned::ShotProfile shot = oned::shoot_profile(m, n);
        const double fm = oned::F(m);
        worst_roundtrip = std::max(worst_roundtrip, std::abs(oned::time_map(m, c.tolerances.quadrature) - b));
        worst_shoot = std::max(worst_shoot, std::abs(shot.b_shoot - b));
        worst_drift_rel = std::max(worst_drift_rel, shot.energy_drift / std::max(1.0, fm));
        worst_slope_rel = std::max(worst_slope_rel, std::abs(shot.slope - slope) / std::max(1.0, slope));
        // Relative to max |u''| = m log m^2, attained at x = 0.
        worst_inflection = std::max(worst_inflection, std::abs(shot.d2u_at_x_star) / std::max(1.0, 2.0 * m * std::log(m)));
        ms.push_back(m);
        slopes.push_back(slope);
        alphas.push_back(a);
        rows.push_back({b, m, slope, a, shot.x_star, std::abs(shot.b_shoot - b), shot.energy_drift});
    }
    ctx.writer.write_csv("oned_table.csv", {"b", "m", "slope", "alpha_star", "x_star", "b_shoot_error", "energy_drift"},
                         rows);
    ctx.require("m_strictly_decreasing", strictly_decreasing(ms), ms.back(), ms.front());
    ctx.require("slope_strictly_decreasing", strictly_decreasing(slopes), slopes.back(), slopes.front());
    ctx.require("alpha_star_strictly_decreasing", strictly_decreasing(alphas), alphas.back(), alphas.front());
    ctx.require("m_above_sqrt_e", ms.back() > kSqrtE, ms.back(), kSqrtE);
    ctx.require("time_map_roundtrip", worst_roundtrip <= 1e-8, worst_roundtrip, 1e-8);
    ctx.require("shooting_agreement", worst_shoot <= 1e-6, worst_shoot, 1e-6);
    ctx.require("energy_drift_relative", worst_drift_rel <= 1e-8, worst_drift_rel, 1e-8);
    ctx.require("slope_agreement_relative", worst_slope_rel <= 1e-6, worst_slope_rel, 1e-6);
    ctx.warn("inflection_at_unit_level_relative", worst_inflection < 1e-6, worst_inflection, 1e-6);
    Json body;
    body["experiment"] = c.experiment;
    body["b_grid"] = Json{{"lo", c.b_grid->lo}, {"hi", c.b_grid->hi}, {"points", c.b_grid->points}};
    body["shoot_steps"] = n;
    body["limits"] = Json{{"m_at_b_lo", number(ms.front())},
                          {"m_at_b_hi", number(ms.back())},
                          {"slope_at_b_lo", number(slopes.front())},
                          {"slope_at_b_hi", number(slopes.back())},
                          {"alpha_at_b_lo", number(alphas.front())},
                          {"alpha_at_b_hi", number(alphas.back())}};
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("oned_table.json", body);
}

struct TensorLevel {
    int resolution = 0;
    double h = 0.0;
    double residual = 0.0;
    double residual_core = 0.0;
    double sup_error = 0.0;
};

void run_tensor_check(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const auto hw = c.domain->halfwidths();
    double expected_sup = 1.0;
    for (double b : hw) expected_sup *= oned::solve_m_of_b(b, c.tolerances.m_of_b);
    const Reaction log = Reaction::log_schrodinger();
    const std::vector<TensorLevel> levels = parallel_map(c.resolutions, [&](int n) {
        const GridPtr g = make_grid(*c.domain, n);
        const Field f = oned::tensor_solution(g);
        return TensorLevel{n, g->max_spacing(), residual_sup(f, log), residual_sup(f, log, 0.1),
                           std::abs(f.sup_norm() - expected_sup)};
    });
    std::vector<std::vector<Cell>> rows;
    std::vector<double> core;
    double worst_sup = 0.0;
    for (const auto& l : levels) {
        rows.push_back({static_cast<long long>(l.resolution), l.h, l.residual, l.residual_core, l.sup_error});
        core.push_back(l.residual_core);
        worst_sup = std::max(worst_sup, l.sup_error);
    }
    ctx.writer.write_csv("tensor.csv", {"resolution", "h", "residual", "residual_core", "sup_error"}, rows);
    ctx.require("sup_norm_product", worst_sup <= 1e-6, worst_sup, 1e-6);
    require_ratios(ctx, "core_residual", core);

    Json body = domain_header(c);
    body["expected_sup"] = number(expected_sup);
    if (!c.transforms.empty() || !c.alphas.empty()) {
        const GridPtr g = make_grid(*c.domain, c.resolutions.back());
        const Field f = oned::tensor_solution(g);
        body["reports"] = concavity_reports(ctx, f, "");
        if (!c.alphas.empty()) {
            const AlphaSweepResult sweep = alpha_sweep(f, c.alphas, c.concavity);
            body["alpha_sweep"] = sweep_json(sweep);
            ctx.warn("alpha_sweep_consistent", sweep.consistent, sweep.largest_passing.value_or(0.0), 0.0);
        }
    }
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("tensor.json", body);
}

void run_gausson_residual(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const Reaction log = Reaction::log_schrodinger();
    struct Level {
        int n;
        double h;
        double residual;
    };
    const std::vector<Level> levels = parallel_map(c.resolutions, [&](int n) {
        const GridPtr g = make_grid(*c.domain, n);
        const std::vector<double> v = oned::gausson_samples(*g);
        return Level{n, g->max_spacing(), residual_sup(FieldView(*g, v), log)};
    });
    std::vector<std::vector<Cell>> rows;
    std::vector<double> res;
    for (const auto& l : levels) {
        rows.push_back({static_cast<long long>(l.n), l.h, l.residual});
        res.push_back(l.residual);
    }
    ctx.writer.write_csv("gausson.csv", {"resolution", "h", "residual"}, rows);
    require_ratios(ctx, "residual", res);
    Json body = domain_header(c);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("gausson.json", body);
}

void run_energy_bound(Context& ctx) {
    const ExperimentConfig& c = ctx.config;
    const Reaction& reaction = *c.reaction;
    if (reaction.dispersive()) throw ConfigError("energy-bound: reaction must be lane_emden or log_schrodinger");
    const GridPtr grid = make_grid(*c.domain, ctx.base_resolution());
    const Eigenpair eig = principal_eigenpair(grid, c.tolerances.eigen);
    const SolveResult r = newton_solve(reaction, initial_guess(eig, reaction), ctx.newton());
    ctx.require("converged", r.converged(), r.residual_sup, r.residual_threshold);

    double identity = 0.0;
    double bound = 0.0;
    if (reaction.kind() == ReactionKind::lane_emden) {
        const double q = reaction.q();
        const double s = reaction.sigma();
        identity = s * (0.5 - 1.0 / (q + 1.0)) * integrate(r.field, [q](double t) { return std::pow(t, q + 1.0); });
        bound = energy_upper_bound(q, s, eig.phi1);
    } else {
        identity = 0.5 * integrate(r.field, [](double t) { return t * t; });
        bound = energy_upper_bound_log_limit(eig.phi1);
    }
    const double scale = std::max(1.0, std::abs(r.energy));
    const double limit = c.tolerances.energy_factor * h_squared(*grid) * scale;
    const double gap = std::abs(r.energy - identity);
    ctx.require("energy_identity", gap <= limit, gap, limit);
    ctx.require("energy_below_bound", r.energy <= bound, r.energy, bound);
    Json body = domain_header(c);
    body["result"] = solve_json(r);
    body["lambda1"] = number(eig.lambda1);
    body["identity_energy"] = number(identity);
    body["upper_bound"] = number(bound);
    body["checks"] = ctx.checks_json();
    ctx.writer.write_json("energy_bound.json", body);
}

using Runner = void (*)(Context&);

const std::map<std::string, Runner>& runners() {
    static const std::map<std::string, Runner> table{
        {"solve", run_solve},
        {"branch", run_branch},
        {"converge-eigen", run_converge_eigen},
        {"converge-log", run_converge_log},
        {"concavity", run_concavity},
        {"quasiconcavity", run_quasiconcavity},
        {"pohozaev", run_pohozaev},
        {"dispersive", run_dispersive},
        {"oned-table", run_oned_table},
        {"tensor-check", run_tensor_check},
        {"gausson-residual", run_gausson_residual},
        {"energy-bound", run_energy_bound},
    };
    return table;
}

}  // namespace

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOverrides& overrides) {
    if (overrides.out_dir) config.output_dir = *overrides.out_dir;
    if (overrides.seed) config.seed = *overrides.seed;
    if (overrides.resolution) {
        const int n = *overrides.resolution;
        if (n < 3) throw ConfigError("--resolution: need at least 3 nodes");
        if (config.resolutions.empty()) {
            config.resolutions = {n};
        } else {
            const double base = config.resolutions.front() - 1;
            for (int& r : config.resolutions) {
                r = static_cast<int>(std::lround((r - 1) / base * (n - 1))) + 1;
            }
        }
    }
    validate(config);
    return config;
}

RunOutcome run(const ExperimentConfig& config, bool strict) {
    RunOutcome out;
    try {
        validate(config);
    } catch (const ConfigError& e) {
        out.exit_code = kExitInvalidConfig;
        out.error = e.what();
        return out;
    }
    out.config_hash = config_hash(config);
    ArtifactWriter writer(config.output_dir, out.config_hash);
    Context ctx(config, writer);
    writer.write_json("config.json", Json::parse(serialize_config(config)));
    try {
        runners().at(config.experiment)(ctx);
    } catch (const ConfigError& e) {
        out.exit_code = kExitInvalidConfig;
        out.error = e.what();
    } catch (const std::exception& e) {
        out.exit_code = kExitFailure;
        out.error = e.what();
    }
    out.checks = ctx.checks;
    if (out.exit_code == kExitOk) {
        for (const Check& c : out.checks) {
            if (!c.pass && (!c.warning || strict)) out.exit_code = kExitFailure;
        }
    }
    if (out.exit_code == kExitFailure) {
        Json diag;
        diag["experiment"] = config.experiment;
        diag["error"] = out.error;
        diag["strict"] = strict;
        diag["checks"] = ctx.checks_json();
        writer.write_json("diagnostic.json", diag);
    }
    out.artifacts = writer.written();
    return out;
}

}  // namespace loglab
