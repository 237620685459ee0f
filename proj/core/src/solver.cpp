#include "loglab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "loglab/error.hpp"

namespace loglab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double sup_abs(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// G(u) = -Δ_h u - f(u) on the unknowns.
Eigen::VectorXd newton_residual(const DirichletLaplacian& lap, const Reaction& reaction, const Eigen::VectorXd& u) {
    Eigen::VectorXd g = lap.matrix() * u;
    for (Eigen::Index i = 0; i < u.size(); ++i) g[i] -= reaction.f(u[i]);
    return g;
}

double reaction_scale(const Reaction& reaction, const Eigen::VectorXd& u) {
    double m = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) m = std::max(m, std::abs(reaction.f(u[i])));
    return m;
}

double clamped_derivative(const Reaction& reaction, double t, double floor) {
    if (t <= 0.0) {
        if (reaction.logarithmic()) return reaction.kind() == ReactionKind::log_schrodinger ? floor : -floor;
        return reaction.f_prime(0.0);
    }
    return std::max(reaction.f_prime(t), floor);
}

double unit_sphere_area(int n) {
    // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged:
            return "converged";
        case SolveStatus::max_iterations:
            return "max_iterations";
        case SolveStatus::trivial_solution:
            return "trivial_solution";
        case SolveStatus::line_search_failed:
            return "line_search_failed";
    }
    return "unknown";
}

double residual_sup(FieldView u, const Reaction& reaction) {
    const std::vector<double> lap = apply_laplacian(u);
    double r = 0.0;
    for (std::size_t node : u.grid->interior_nodes()) {
        r = std::max(r, std::abs(-lap[node] - reaction.f(u.values[node])));
    }
    return r;
}

double residual_sup(FieldView u, const Reaction& reaction, double floor_rel) {
    if (!(floor_rel >= 0.0 && floor_rel < 1.0)) throw DomainError("residual_sup: floor_rel must lie in [0,1)");
    const double floor = floor_rel * u.sup_norm();
    const std::vector<double> lap = apply_laplacian(u);
    double r = 0.0;
    for (std::size_t node : u.grid->interior_nodes()) {
        if (u.values[node] < floor) continue;
        r = std::max(r, std::abs(-lap[node] - reaction.f(u.values[node])));
    }
    return r;
}

// Edge-based form sum_edges w_e ((u_+ - u_-)/h)^2, the discrete Dirichlet form
// that pairs with the finite-difference operator.
double dirichlet_integral(FieldView u) {
    const Grid& g = *u.grid;
    const auto shape = g.shape();
    const auto& v = u.values;
    double sum = 0.0;
    if (g.radial()) {
        const int N = g.ambient_dim();
        const double h = g.spacing(0);
        const double area = unit_sphere_area(N);
        for (int i = 0; i + 1 < shape[0]; ++i) {
            const double rm = (i + 0.5) * h;
            const double d = (v[static_cast<std::size_t>(i) + 1] - v[static_cast<std::size_t>(i)]) / h;
            sum += area * std::pow(rm, N - 1) * h * d * d;
        }
        return sum;
    }
    for (std::size_t node = 0; node < g.size(); ++node) {
        const MultiIndex idx = g.multi_index(node);
        for (int a = 0; a < g.dim(); ++a) {
            if (idx[static_cast<std::size_t>(a)] + 1 >= shape[static_cast<std::size_t>(a)]) continue;
            double w = g.spacing(a);
            for (int c = 0; c < g.dim(); ++c) {
                if (c == a) continue;
                const int ic = idx[static_cast<std::size_t>(c)];
                const bool end = ic == 0 || ic == shape[static_cast<std::size_t>(c)] - 1;
                w *= end ? 0.5 * g.spacing(c) : g.spacing(c);
            }
            const double d = (v[node + g.stride(a)] - v[node]) / g.spacing(a);
            sum += w * d * d;
        }
    }
    return sum;
}

double energy(FieldView u, const Reaction& reaction) {
    return 0.5 * dirichlet_integral(u) - integrate(u, [&](double t) { return reaction.F(std::max(t, 0.0)); });
}

double nehari_residual(FieldView u, const Reaction& reaction) {
    const std::vector<double> lap = apply_laplacian(u);
    const auto w = u.grid->quadrature_weights();
    double sum = 0.0;
    for (std::size_t node : u.grid->interior_nodes()) {
        const double t = u.values[node];
        sum += w[node] * (-lap[node] - reaction.f(std::max(t, 0.0))) * t;
    }
    return sum;
}

double nehari_fiber(const Field& phi, const Reaction& reaction, double c) {
    const std::vector<double> lap = apply_laplacian(phi);
    const auto w = phi.grid().quadrature_weights();
    double sum = 0.0;
    for (std::size_t node : phi.grid().interior_nodes()) {
        const double p = phi[node];
        sum += w[node] * (-lap[node] * p - reaction.f(c * p) * p / c);
    }
    return sum;
}

Field initial_guess(const Eigenpair& eigen, const Reaction& reaction) {
    const Field& phi = eigen.phi1;
    reaction.validate_for_dimension(phi.grid().ambient_dim());
    if (reaction.kind() == ReactionKind::lane_emden) {
        const double q = reaction.q();
        const double l2 = integrate(phi, [](double t) { return t * t; });
        const double lq = integrate(phi, [q](double t) { return std::pow(std::abs(t), q + 1.0); });
        const double tbar = std::pow((1.0 + eigen.lambda1 / reaction.sigma()) * l2 / lq, 1.0 / (q - 1.0));
        std::vector<double> v(phi.values().begin(), phi.values().end());
        for (double& x : v) x *= tbar;
        return Field(phi.grid_ptr(), std::move(v));
    }

    // Bisection in s = log c of the scalar Nehari condition.
    auto g = [&](double s) { return nehari_fiber(phi, reaction, std::exp(s)); };
    double lo = -40.0;
    double hi = 40.0;
    double glo = g(lo);
    double ghi = g(hi);
    if (!(glo * ghi < 0.0)) {
        std::ostringstream os;
        os << "initial_guess: Nehari condition has no sign change for " << reaction.describe()
           << " (no nontrivial scaling of phi1)";
        throw NumericalError(os.str());
    }
    for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    const double c = std::exp(0.5 * (lo + hi));
    std::vector<double> v(phi.values().begin(), phi.values().end());
    for (double& x : v) x *= c;
    return Field(phi.grid_ptr(), std::move(v));
}

Field initial_guess(const GridPtr& grid, const Reaction& reaction) {
    return initial_guess(principal_eigenpair(grid, 1e-12), reaction);
}

SolveResult newton_solve(const Reaction& reaction, const Field& guess, const NewtonOptions& options) {
    if (!(options.tol > 0.0)) throw DomainError("newton_solve: tol must be positive");
    const Grid& grid = guess.grid();
    reaction.validate_for_dimension(grid.ambient_dim());
    for (double v : guess.values()) {
        if (v < 0.0) throw DomainError("newton_solve: initial guess must be non-negative");
    }

    const DirichletLaplacian lap(guess.grid_ptr());
    Eigen::VectorXd u = lap.restrict_to_unknowns(guess.values());
    Eigen::VectorXd g = newton_residual(lap, reaction, u);

    auto threshold_for = [&](const Eigen::VectorXd& x) {
        const double m = sup_abs(x);
        const double floor = 64.0 * kEps * (lap.operator_norm() * m + reaction_scale(reaction, x));
        return std::max(options.tol * std::max(1.0, m), floor);
    };

    SolveStatus status = SolveStatus::max_iterations;
    int iters = 0;
    for (;; ++iters) {
        if (sup_abs(g) <= threshold_for(u)) {
            status = SolveStatus::converged;
            break;
        }
        if (iters == options.max_iterations) break;

        SparseMatrix jac = lap.matrix();
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            jac.coeffRef(i, i) -= clamped_derivative(reaction, u[i], options.jacobian_floor);
        }
        const SparseFactorization factor(jac, lap.symmetric());
        const Eigen::VectorXd step = factor.solve(-g);

        const double g_norm = g.norm();
        double alpha = 1.0;
        bool accepted = false;
        for (int k = 0; k <= options.max_halvings; ++k, alpha *= options.backtrack) {
            Eigen::VectorXd trial = (u + alpha * step).cwiseMax(0.0);
            Eigen::VectorXd g_trial = newton_residual(lap, reaction, trial);
            if (g_trial.norm() < g_norm) {
                u = std::move(trial);
                g = std::move(g_trial);
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            status = SolveStatus::line_search_failed;
            break;
        }
    }

    const double threshold = threshold_for(u);
    Field field(guess.grid_ptr(), lap.to_nodal(u));
    const double sup = field.sup_norm();
    if (sup < options.trivial_threshold) status = SolveStatus::trivial_solution;

    SolveResult result{std::move(field), 0.0, iters, sup, 0.0, 0.0, status, threshold};
    result.residual_sup = residual_sup(result.field, reaction);
    result.energy = energy(result.field, reaction);
    result.nehari_residual = nehari_residual(result.field, reaction);
    return result;
}

double SigmaRule::sigma_for(double q) const {
    if (kind == SigmaRuleKind::fixed) return sigma;
    return 2.0 / (q - 1.0);
}

std::string SigmaRule::describe() const {
    if (kind == SigmaRuleKind::log_path) return "log_path";
    std::ostringstream os;
    os.precision(17);
    os << "fixed(" << sigma << ")";
    return os.str();
}

std::vector<double> geometric_schedule(double q_hi, double q_lo, int steps) {
    if (!(q_lo > 1.0) || !(q_hi > q_lo)) throw DomainError("geometric_schedule: need 1 < q_lo < q_hi");
    if (steps < 1) throw DomainError("geometric_schedule: steps must be positive");
    std::vector<double> qs;
    const double a = std::log(q_hi - 1.0);
    const double b = std::log(q_lo - 1.0);
    for (int k = 0; k <= steps; ++k) {
        if (k == 0) {
            qs.push_back(q_hi);
        } else if (k == steps) {
            qs.push_back(q_lo);
        } else {
            qs.push_back(1.0 + std::exp(a + (b - a) * k / steps));
        }
    }
    return qs;
}

int default_branch_steps(double q_hi, double q_lo) {
    const double decades = std::log10((q_hi - 1.0) / (q_lo - 1.0));
    return std::max(1, static_cast<int>(std::ceil(kStepsPerDecade * decades)));
}

Branch continuation_branch(const GridPtr& grid, std::span<const double> q_schedule, SigmaRule rule,
                           const NewtonOptions& options) {
    if (q_schedule.empty()) throw DomainError("continuation_branch: empty q schedule");
    const double q_cap = critical_exponent(grid->ambient_dim());
    for (double q : q_schedule) {
        if (!(q > 1.0) || !(q < q_cap)) throw DomainError("continuation_branch: q outside (1, 2*-1)");
    }
    if (q_schedule.size() > 1) {
        const bool down = q_schedule[1] < q_schedule[0];
        for (std::size_t i = 1; i < q_schedule.size(); ++i) {
            const bool ok = down ? q_schedule[i] < q_schedule[i - 1] : q_schedule[i] > q_schedule[i - 1];
            if (!ok) throw DomainError("continuation_branch: q schedule must be strictly monotone");
        }
    }
    if (rule.kind == SigmaRuleKind::fixed && !(rule.sigma > 0.0)) {
        throw DomainError("continuation_branch: sigma must be positive");
    }

    const Eigenpair eigen = principal_eigenpair(grid, 1e-12);
    Branch branch{rule, eigen.lambda1, {}, false, {}};
    auto predicted_log_sup = [&](double q) {
        return std::log1p(eigen.lambda1 / rule.sigma_for(q)) / (q - 1.0);
    };

    for (std::size_t k = 0; k < q_schedule.size(); ++k) {
        const double q = q_schedule[k];
        const double sigma = rule.sigma_for(q);
        const Reaction reaction = Reaction::lane_emden(q, sigma);

        Field guess = [&] {
            if (k == 0) return initial_guess(eigen, reaction);
            const BranchPoint& prev = branch.points.back();
            const double scale = std::exp(predicted_log_sup(q) - predicted_log_sup(prev.q));
            std::vector<double> v(prev.result.field.values().begin(), prev.result.field.values().end());
            for (double& x : v) x *= scale;
            return Field(grid, std::move(v));
        }();

        SolveResult result = newton_solve(reaction, guess, options);
        const bool ok = result.converged();
        const SolveStatus status = result.status;
        branch.points.push_back(BranchPoint{q, sigma, std::move(result)});
        if (!ok) {
            std::ostringstream os;
            os.precision(17);
            os << "solve failed at q=" << q << " (" << to_string(status) << ")";
            branch.failure = os.str();
            return branch;
        }
    }
    branch.complete = true;
    return branch;
}

Branch continuation_branch(const GridPtr& grid, double q_hi, double q_lo, int steps, SigmaRule rule,
                           const NewtonOptions& options) {
    const std::vector<double> qs = geometric_schedule(q_hi, q_lo, steps);
    return continuation_branch(grid, qs, rule, options);
}

PohozaevReport pohozaev_check(const SolveResult& result, const Domain& domain) {
    const double threshold = std::exp(domain.ambient_dim() / 4.0);
    return {result.sup_norm, threshold, result.converged() && result.sup_norm > threshold};
}

namespace {

struct TestFunctionMoments {
    double l2 = 0.0;       // ‖φ‖₂²
    double grad = 0.0;     // ‖Dφ‖₂²
    double entropy = 0.0;  // ∫φ² log φ²
};

TestFunctionMoments moments(FieldView phi) {
    TestFunctionMoments m;
    m.l2 = integrate(phi, [](double t) { return t * t; });
    m.grad = dirichlet_integral(phi);
    m.entropy = integrate(phi, [](double t) { return t == 0.0 ? 0.0 : t * t * 2.0 * std::log(t); });
    if (!(m.l2 > 0.0)) throw DomainError("energy bound: test function must be nonzero");
    return m;
}

}  // namespace

double energy_upper_bound(double q, double sigma, FieldView test_field) {
    if (!(q > 1.0)) throw DomainError("energy_upper_bound: q must exceed 1");
    if (!(sigma > 0.0)) throw DomainError("energy_upper_bound: sigma must be positive");
    const TestFunctionMoments m = moments(test_field);
    if (!(m.l2 > 0.5 * (1.0 - q) * m.entropy)) {
        throw DomainError("energy_upper_bound: admissibility condition ∫φ² > (1-q)/2 ∫φ² log φ² violated");
    }
    const double e = 2.0 / (q - 1.0);
    const double bracket = 1.0 + 0.5 * (q - 1.0) * m.entropy / m.l2;
    // Powers with exponent 2/(q-1) are combined in log space to stay finite near q = 1.
    const double log_factor = e * std::log1p(m.grad / (sigma * m.l2)) - e * std::log(bracket);
    return (q - 1.0) / (2.0 * q + 2.0) * (m.grad + sigma * m.l2) * std::exp(log_factor);
}

double energy_upper_bound_log_limit(FieldView test_field) {
    const TestFunctionMoments m = moments(test_field);
    return 0.5 * m.l2 * std::exp(m.grad / m.l2) * std::exp(-m.entropy / m.l2);
}

}  // namespace loglab
