// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "loglab/concavity.hpp"
#include "loglab/config.hpp"
#include "loglab/error.hpp"
#include "loglab/experiments.hpp"
#include "loglab/linops.hpp"
#include "loglab/oned.hpp"
#include "loglab/solver.hpp"

using namespace loglab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        if (!detail.empty()) detail += "; ";
        detail += (ok ? "" : "!") + what;
    }
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::string list(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt("%.4g", v[i]);
    return s + "]";
}

bool strictly_decreasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] < v[i - 1])) return false;
    }
    return true;
}

bool ratios_in(const std::vector<double>& v, double lo, double hi) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        const double r = v[i - 1] / v[i];
        if (!(r >= lo && r <= hi)) return false;
    }
    return true;
}

std::vector<double> ratios(const std::vector<double>& v) {
    std::vector<double> r;
    for (std::size_t i = 1; i < v.size(); ++i) r.push_back(v[i - 1] / v[i]);
    return r;
}

Field solve_on(const GridPtr& g, const Reaction& r) {
    const SolveResult s = newton_solve(r, initial_guess(g, r));
    if (!s.converged()) throw NumericalError("Newton failed: " + to_string(s.status));
    return s.field;
}

Outcome c1() {
    Outcome o;
    std::vector<double> e1;
    for (int n : {501, 1001, 2001}) {
        e1.push_back(std::abs(principal_eigenpair(make_grid(Domain::interval(1.0), n), 1e-13).lambda1 -
                              std::numbers::pi * std::numbers::pi / 4.0));
    }
    o.require(e1.back() < 1e-4, "interval err(2001)=" + fmt("%.3g", e1.back()));
    o.require(ratios_in(e1, 3.5, 4.5), "interval ratios " + list(ratios(e1)));
    std::vector<double> e2;
    for (int n : {101, 201, 401}) {
        e2.push_back(std::abs(principal_eigenpair(make_grid(Domain::box({1.0, 1.0}), n), 1e-13).lambda1 -
                              std::numbers::pi * std::numbers::pi / 2.0));
    }
    o.require(e2.back() < 1e-3, "box err(401^2)=" + fmt("%.3g", e2.back()));
    o.require(ratios_in(e2, 3.5, 4.5), "box ratios " + list(ratios(e2)));
    return o;
}

Outcome c2() {
    Outcome o;
    const Reaction r = Reaction::log_schrodinger();
    for (const Domain& d : {Domain::interval(1.0), Domain::box({1.0, 1.0})}) {
        std::vector<double> res;
        for (int n : {41, 81, 161}) {
            const GridPtr g = make_grid(d, n);
            const auto v = oned::gausson_samples(*g);
            res.push_back(residual_sup(FieldView(*g, v), r));
        }
        o.require(ratios_in(res, 3.5, 4.5), d.describe() + " residuals " + list(res) + " ratios " + list(ratios(res)));
    }
    return o;
}

Outcome c3() {
    Outcome o;
    const GridPtr g = make_grid(Domain::interval(1.0), 2001);
    const std::vector<double> qs{1.5, 1.25, 1.1, 1.05};
    const Branch b = continuation_branch(g, qs, SigmaRule::fixed(1.0));
    o.require(b.complete, "branch complete");
    if (!b.complete) return o;
    const double target = 1.0 + std::numbers::pi * std::numbers::pi / 4.0;
    std::vector<double> err;
    for (const auto& p : b.points) err.push_back(std::abs(std::pow(p.result.sup_norm, p.q - 1.0) - target));
    o.require(strictly_decreasing(err), "limit errors " + list(err) + " decreasing");
    o.require(err.back() < 0.02, "final limit error < 0.02");
    const Field& u = b.points.back().result.field;
    double ferr = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        const double x = g->coordinates(i)[0];
        ferr = std::max(ferr, std::abs(u[i] / u.sup_norm() - std::cos(0.5 * std::numbers::pi * x)));
    }
    o.require(ferr < 0.01, "field error " + fmt("%.3g", ferr));
    return o;
}

Outcome c4() {
    Outcome o;
    const std::vector<double> qs{1.1, 1.05, 1.02, 1.01};
    const Reaction lg = Reaction::log_schrodinger();
    struct Case {
        Domain domain;
        int n;
        double threshold;
    };
    for (const Case& c : {Case{Domain::interval(1.0), 2001, std::exp(0.5)}, Case{Domain::box({1.0, 1.0}), 201, std::exp(0.5)}}) {
        const GridPtr g = make_grid(c.domain, c.n);
        const Branch b = continuation_branch(g, qs, SigmaRule::log_path());
        o.require(b.complete, c.domain.describe() + " branch complete");
        if (!b.complete) continue;
        std::vector<double> res;
        for (const auto& p : b.points) res.push_back(residual_sup(p.result.field, lg));
        const double h = g->max_spacing();
        o.require(strictly_decreasing(res), c.domain.describe() + " residuals " + list(res) + " decreasing");
        o.require(res.back() < 10.0 * h * h, "final < 10h^2=" + fmt("%.3g", 10.0 * h * h));
        const double sup = b.points.back().result.sup_norm;
        o.require(sup > c.threshold, "sup " + fmt("%.4g", sup) + " > " + fmt("%.4g", c.threshold));
    }
    return o;
}

Outcome c5() {
    Outcome o;
    double round_trip = 0.0, shoot = 0.0, drift = 0.0, slope = 0.0;
    for (double m : {1.7, 2.0, std::exp(1.0), 5.0}) {
        const double b = oned::time_map(m);
        round_trip = std::max(round_trip, std::abs(oned::solve_m_of_b(b) - m));
        const oned::ShotProfile s = oned::shoot_profile(m, 100000);
        shoot = std::max(shoot, std::abs(s.b_shoot - b));
        drift = std::max(drift, s.energy_drift);
        slope = std::max(slope, std::abs(s.slope - oned::boundary_slope(m)));
    }
    o.require(round_trip <= 1e-8, "round trip " + fmt("%.2g", round_trip));
    o.require(shoot <= 1e-6, "shooting " + fmt("%.2g", shoot));
    o.require(drift <= 1e-8, "energy drift " + fmt("%.2g", drift));
    o.require(slope <= 1e-6, "slope " + fmt("%.2g", slope));

    const std::vector<double> bs = BGrid{0.35, 4.0, 20}.values();
    std::vector<double> ms, slopes, alphas;
    for (double b : bs) {
        ms.push_back(oned::solve_m_of_b(b));
        slopes.push_back(oned::boundary_slope(ms.back()));
        alphas.push_back(oned::alpha_star(b));
    }
    const double sqrt_e = std::exp(0.5);
    o.require(strictly_decreasing(ms) && ms.back() > sqrt_e, "m decreasing, above sqrt(e)");
    o.require(ms.back() - sqrt_e < 1e-2 * (ms.front() - sqrt_e), "m(b)->sqrt(e) as b grows: m(4)-sqrt(e)=" +
                                                                    fmt("%.3g", ms.back() - sqrt_e));
    o.require(strictly_decreasing(slopes) && slopes.back() < 1e-2 * slopes.front(),
              "slope decreasing to 0: " + fmt("%.3g", slopes.back()));
    o.require(strictly_decreasing(alphas) && alphas.front() > 0.9 && alphas.back() < 0.2,
              "alpha* decreasing from " + fmt("%.3g", alphas.front()) + " to " + fmt("%.3g", alphas.back()));
    return o;
}

Field profile_field(double b, int n) {
    const GridPtr g = make_grid(Domain::interval(b), n);
    const oned::HalfProfile p(b);
    return Field::from_function(g, [&](std::span<const double> x) { return p(x[0]); });
}

Outcome c6() {
    Outcome o;
    for (double a : {0.25, 0.5, 0.75}) {
        const double b = oned::halfwidth_for_alpha(a);
        const Field u = profile_field(b, 20001);
        const std::vector<double> alphas{a - 0.02, a + 0.02};
        const AlphaSweepResult s = alpha_sweep(u, alphas);
        const bool below = s.verdicts[0].verdict != Verdict::fails;
        const bool above = s.verdicts[1].verdict == Verdict::fails;
        o.require(below && above, "alpha*=" + fmt("%.2f", a) + " b=" + fmt("%.6f", b) + " below:" +
                                      to_string(s.verdicts[0].verdict) + " above:" + to_string(s.verdicts[1].verdict));
    }
    return o;
}

Outcome c7() {
    Outcome o;
    const double b = oned::halfwidth_for_alpha(0.6);
    const double m = oned::solve_m_of_b(b);
    const Reaction lg = Reaction::log_schrodinger();
    std::vector<double> full, core;
    double sup_err = 0.0;
    Field finest(make_grid(Domain::interval(1.0), 3));
    for (int n : {201, 401, 801}) {
        const GridPtr g = make_grid(Domain::box({b, b}), n);
        Field t = oned::tensor_solution(g);
        full.push_back(residual_sup(t, lg));
        core.push_back(residual_sup(t, lg, 0.1));
        sup_err = std::max(sup_err, std::abs(t.sup_norm() - m * m));
        finest = std::move(t);
    }
    // The full-grid sup is O(h) from the boundary layer; O(h^2) is checked on {u >= 0.1 sup u}.
    o.require(ratios_in(core, 3.5, 4.5), "core residual ratios " + list(ratios(core)) + " (full-grid ratios " +
                                             list(ratios(full)) + ")");
    o.require(sup_err <= 1e-6, "sup vs m(b)^2 " + fmt("%.2g", sup_err));
    const std::vector<double> alphas{0.3, 0.33};
    const AlphaSweepResult s = alpha_sweep(finest, alphas);
    o.require(s.verdicts[0].verdict != Verdict::fails && s.verdicts[1].verdict == Verdict::fails,
              "alpha 0.3:" + to_string(s.verdicts[0].verdict) + " 0.33:" + to_string(s.verdicts[1].verdict));
    return o;
}

Outcome c8() {
    Outcome o;
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 101);
    const Field ul = solve_on(g, Reaction::log_schrodinger());
    const ConcavityReport rl = check_transform_concavity(ul, Transform::log());
    o.require(rl.verdict == Verdict::holds_strictly, "log: " + to_string(rl.verdict));
    const Field ue = solve_on(g, Reaction::lane_emden(2.0, 1.0));
    const ConcavityReport re = check_transform_concavity(ue, Transform::power(-0.5));
    o.require(!re.concavity && re.verdict == Verdict::holds_strictly, "power(-1/2) convexity: " + to_string(re.verdict));
    const double h = g->max_spacing();
    const double res = transformed_equation_residual(ul, Reaction::log_schrodinger(), Transform::log().negated());
    o.require(res < 10.0 * h * h, "transformed residual " + fmt("%.3g", res) + " < 10h^2=" + fmt("%.3g", 10.0 * h * h));
    return o;
}

Outcome c9() {
    Outcome o;
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 101);
    struct Case {
        Reaction reaction;
        Transform transform;
    };
    for (const Case& c : {Case{Reaction::dispersive_lane_emden(2.0, 4.0), Transform::atanh_poly(2.0)},
                          Case{Reaction::dispersive_log(), Transform::sqrt_one_minus_log()}}) {
        const std::string name = c.reaction.describe();
        try {
            const Field u = solve_on(g, c.reaction);
            o.require(u.sup_norm() < 1.0 - 1e-3, name + " sup " + fmt("%.4g", u.sup_norm()));
            const ConcavityReport r = check_transform_concavity(u, c.transform);
            o.require(!r.concavity && r.verdict == Verdict::holds_strictly,
                      c.transform.describe() + " convexity: " + to_string(r.verdict));
        } catch (const NumericalError& e) {
            o.require(false, name + ": " + e.what());
        }
    }
    return o;
}

Outcome c10() {
    Outcome o;
    const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 101);
    const double h = g->max_spacing();
    const Eigenpair eig = principal_eigenpair(g, 1e-13);
    const double q = 2.0, sigma = 1.0;
    const Reaction le = Reaction::lane_emden(q, sigma);
    const SolveResult s = newton_solve(le, initial_guess(eig, le));
    o.require(s.converged(), "lane-emden converged");
    const double neq = sigma * (0.5 - 1.0 / (q + 1.0)) * integrate(s.field, [&](double t) { return std::pow(t, q + 1.0); });
    const double scale_le = std::max(1.0, std::abs(s.energy));
    o.require(std::abs(s.energy - neq) <= 5.0 * h * h * scale_le,
              "LE energy gap " + fmt("%.2g", std::abs(s.energy - neq)));
    const Reaction lg = Reaction::log_schrodinger();
    const SolveResult sl = newton_solve(lg, initial_guess(eig, lg));
    o.require(sl.converged(), "log converged");
    const double half_l2 = 0.5 * integrate(sl.field, [](double t) { return t * t; });
    const double scale_lg = std::max(1.0, std::abs(sl.energy));
    o.require(std::abs(sl.energy - half_l2) <= 5.0 * h * h * scale_lg,
              "log energy gap " + fmt("%.2g", std::abs(sl.energy - half_l2)));
    const double bound = energy_upper_bound(q, sigma, eig.phi1);
    o.require(s.energy <= bound, "E=" + fmt("%.4g", s.energy) + " <= bound " + fmt("%.4g", bound));
    return o;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome c11() {
    Outcome o;
    const std::vector<std::string> configs{
        R"({"experiment": "quasiconcavity", "domain": {"kind": "box", "halfwidths": [1, 1]},
            "reaction": {"kind": "log_schrodinger"}, "resolutions": [41], "levels": [0.2, 0.5, 0.8], "seed": 17})",
        R"({"experiment": "concavity", "domain": {"kind": "box", "halfwidths": [1, 1]},
            "reaction": {"kind": "lane_emden", "q": 2, "sigma": 1}, "resolutions": [41],
            "transforms": [{"kind": "power", "alpha": -0.5}], "alphas": [0.2, 0.4]})",
        R"({"experiment": "oned-table", "resolutions": [20000], "b_grid": {"lo": 0.5, "hi": 3, "points": 4}})"};
    int compared = 0;
    for (std::size_t k = 0; k < configs.size(); ++k) {
        ExperimentConfig c = parse_config(configs[k]);
        const std::string base = "acceptance_c11_" + c.experiment;
        std::vector<std::filesystem::path> dirs{base + "_a", base + "_b"};
        for (const auto& d : dirs) {
            std::filesystem::remove_all(d);
            c.output_dir = d.string();
            const RunOutcome r = run(c);
            if (r.exit_code == kExitInvalidConfig) o.require(false, c.experiment + ": " + r.error);
        }
        bool same = true;
        for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
            const auto name = entry.path().filename();
            if (name == "config.json") continue;  // records output_dir
            same = same && std::filesystem::exists(dirs[1] / name) && read_file(entry.path()) == read_file(dirs[1] / name);
            ++compared;
        }
        o.require(same, c.experiment + " identical");
    }
    o.require(compared > 0, std::to_string(compared) + " artifacts compared");
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::function<Outcome()>> criteria{c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11};
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
            return 2;
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", criteria.size());
        return 2;
    }
    int failed = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        if (only != 0 && static_cast<int>(k) + 1 != only) continue;
        Outcome r;
        try {
            r = criteria[k]();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %zu: %s %s\n", k + 1, r.pass ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
        if (!r.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
