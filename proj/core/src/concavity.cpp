#include "loglab/concavity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "loglab/error.hpp"

namespace loglab {

namespace {

void require_stencil_room(const Grid& g, std::size_t node) {
    if (g.boundary_distance(node) < 2) {
        throw DomainError("hessian_at: node closer than two grid steps to the boundary");
    }
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

// Random unit vector in R^n (Box-Muller on the engine's raw output, so the
// stream is identical across standard libraries).
Eigen::VectorXd random_direction(std::mt19937_64& rng, int n) {
    Eigen::VectorXd v(n);
    double norm = 0.0;
    do {
        for (int i = 0; i < n; ++i) {
            const double a = std::max(uniform01(rng), 1e-300);
            const double b = uniform01(rng);
            v[i] = std::sqrt(-2.0 * std::log(a)) * std::cos(2.0 * 3.141592653589793 * b);
        }
        norm = v.norm();
    } while (norm == 0.0);
    return v / norm;
}

}  // namespace

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::holds_strictly:
            return "holds_strictly";
        case Verdict::holds_weakly:
            return "holds_weakly";
        case Verdict::fails:
            return "fails";
    }
    return "unknown";
}

Eigen::MatrixXd hessian_at(FieldView u, std::size_t node) {
    const Grid& g = *u.grid;
    require_stencil_room(g, node);
    const auto& v = u.values;
    if (g.radial()) {
        const int N = g.ambient_dim();
        const double h = g.spacing(0);
        const int k = g.multi_index(node)[0];
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
        if (k == 0) {
            const double upp = 2.0 * (v[1] - v[0]) / (h * h);
            H.diagonal().setConstant(upp);
            return H;
        }
        const double r = g.coordinate(0, k);
        H(0, 0) = (v[node + 1] - 2.0 * v[node] + v[node - 1]) / (h * h);
        const double up = (v[node + 1] - v[node - 1]) / (2.0 * h);
        for (int i = 1; i < N; ++i) H(i, i) = up / r;
        return H;
    }
    const int d = g.dim();
    Eigen::MatrixXd H(d, d);
    for (int a = 0; a < d; ++a) {
        const double ha = g.spacing(a);
        const std::size_t sa = g.stride(a);
        H(a, a) = (v[node + sa] - 2.0 * v[node] + v[node - sa]) / (ha * ha);
        for (int b = a + 1; b < d; ++b) {
            const double hb = g.spacing(b);
            const std::size_t sb = g.stride(b);
            const double cross =
                (v[node + sa + sb] - v[node + sa - sb] - v[node - sa + sb] + v[node - sa - sb]) / (4.0 * ha * hb);
            H(a, b) = cross;
            H(b, a) = cross;
        }
    }
    return H;
}

Eigen::VectorXd gradient_at(FieldView u, std::size_t node) {
    const Grid& g = *u.grid;
    if (g.is_boundary(node)) throw DomainError("gradient_at: boundary node");
    const auto& v = u.values;
    if (g.radial()) {
        Eigen::VectorXd p = Eigen::VectorXd::Zero(g.ambient_dim());
        const int k = g.multi_index(node)[0];
        if (k > 0) p[0] = (v[node + 1] - v[node - 1]) / (2.0 * g.spacing(0));
        return p;
    }
    Eigen::VectorXd p(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        const std::size_t s = g.stride(a);
        p[a] = (v[node + s] - v[node - s]) / (2.0 * g.spacing(a));
    }
    return p;
}

std::vector<std::size_t> check_set(FieldView u, const ConcavityOptions& options) {
    const Grid& g = *u.grid;
    const double sup = u.sup_norm();
    const double floor = options.eps_floor_rel * sup;
    const double ceiling = (1.0 - options.exclude_near_max_rel) * sup;
    const int layer = std::max(2, options.layer_k);
    std::vector<std::size_t> nodes;
    for (std::size_t node : g.interior_nodes()) {
        if (g.boundary_distance(node) < layer) continue;
        const double t = u.values[node];
        if (!(t >= floor)) continue;
        if (options.exclude_near_max_rel > 0.0 && t > ceiling) continue;
        nodes.push_back(node);
    }
    return nodes;
}

ConcavityReport check_transform_concavity(FieldView u, const Transform& transform, const ConcavityOptions& options) {
    const Grid& g = *u.grid;
    const std::vector<std::size_t> nodes = check_set(u, options);
    if (nodes.empty()) throw DomainError("check_transform_concavity: empty check set");

    ConcavityReport report;
    report.transform = transform.describe();
    report.concavity = transform.increasing();
    report.check_set_size = nodes.size();
    report.eps_floor = options.eps_floor_rel * u.sup_norm();
    report.layer_width = std::max(2, options.layer_k) * g.max_spacing();

    // Orientation-adjusted slack: -λmax for concavity, λmin for convexity.
    double worst_slack = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (std::size_t node : nodes) {
        const double t = u.values[node];
        if (!transform.valid(t)) {
            std::ostringstream os;
            os.precision(17);
            os << "check_transform_concavity: u=" << t << " outside the validity interval of " << report.transform;
            throw DomainError(os.str());
        }
        const double d1 = transform.d1(t);
        const double d2 = transform.d2(t);
        if (!std::isfinite(d1) || !std::isfinite(d2)) {
            throw DomainError("check_transform_concavity: transform derivative diverges on the check set");
        }
        const Eigen::VectorXd p = gradient_at(u, node);
        const Eigen::MatrixXd H = d2 * p * p.transpose() + d1 * hessian_at(u, node);
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(H, Eigen::EigenvaluesOnly);
        const double lmin = eig.eigenvalues().minCoeff();
        const double lmax = eig.eigenvalues().maxCoeff();
        scale = std::max({scale, std::abs(lmin), std::abs(lmax)});
        const double slack = report.concavity ? -lmax : lmin;
        if (slack < worst_slack) {
            worst_slack = slack;
            report.extreme_eigenvalue = report.concavity ? lmax : lmin;
            report.witness_node = node;
        }
    }
    report.witness_coordinates = g.coordinates(report.witness_node);
    report.scale = scale;
    report.strict_margin = options.strict_margin_rel * scale;
    const double h = g.max_spacing();
    const double weak_rel = options.weak_tol_rel >= 0.0 ? options.weak_tol_rel : h * h;
    report.weak_tolerance = weak_rel * scale;
    if (worst_slack > report.strict_margin) {
        report.verdict = Verdict::holds_strictly;
    } else if (worst_slack >= -report.weak_tolerance) {
        report.verdict = Verdict::holds_weakly;
    } else {
        report.verdict = Verdict::fails;
    }
    return report;
}

AlphaSweepResult alpha_sweep(FieldView u, std::span<const double> alphas, const ConcavityOptions& options) {
    AlphaSweepResult out;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (!(alphas[i] > 0.0 && alphas[i] < 1.0)) throw DomainError("alpha_sweep: alphas must lie in (0,1)");
        if (i > 0 && !(alphas[i] > alphas[i - 1])) throw DomainError("alpha_sweep: alphas must be sorted");
    }
    bool seen_failure = false;
    for (double alpha : alphas) {
        const ConcavityReport r = check_transform_concavity(u, Transform::power(alpha), options);
        const bool pass = r.verdict != Verdict::fails;
        out.verdicts.push_back({alpha, r.verdict, r.extreme_eigenvalue});
        if (pass) {
            out.largest_passing = alpha;
            if (seen_failure) out.consistent = false;
        } else {
            seen_failure = true;
        }
    }
    return out;
}

QuasiConcavityReport quasiconcavity_check(FieldView u, std::span<const double> levels, std::size_t sample_pairs,
                                          std::uint64_t seed) {
    if (sample_pairs == 0) throw DomainError("quasiconcavity_check: sample_pairs must be positive");
    const Grid& g = *u.grid;
    const double sup = u.sup_norm();

    double max_grad = 0.0;
    for (std::size_t node : g.interior_nodes()) max_grad = std::max(max_grad, gradient_at(u, node).norm());
    QuasiConcavityReport report;
    report.slack = 2.0 * g.max_spacing() * max_grad;

    std::mt19937_64 rng(seed);
    for (double t : levels) {
        if (!(t > 0.0 && t < sup)) throw DomainError("quasiconcavity_check: levels must lie in (0, sup u)");
        std::vector<std::size_t> members;
        for (std::size_t node = 0; node < g.size(); ++node) {
            if (u.values[node] >= t) members.push_back(node);
        }
        LevelCheck lc;
        lc.level = t;
        lc.set_size = members.size();
        lc.worst_deficit = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < sample_pairs; ++k) {
            const std::size_t a = members[uniform_index(rng, members.size())];
            const std::size_t b = members[uniform_index(rng, members.size())];
            std::size_t mid = 0;
            if (g.radial()) {
                const int N = g.ambient_dim();
                const double ra = g.coordinate(0, g.multi_index(a)[0]);
                const double rb = g.coordinate(0, g.multi_index(b)[0]);
                const Eigen::VectorXd xa = ra * random_direction(rng, N);
                const Eigen::VectorXd xb = rb * random_direction(rng, N);
                const double rm = 0.5 * (xa + xb).norm();
                const int km = static_cast<int>(std::lround(rm / g.spacing(0)));
                mid = static_cast<std::size_t>(std::min(km, g.shape()[0] - 1));
            } else {
                const MultiIndex ia = g.multi_index(a);
                const MultiIndex ib = g.multi_index(b);
                MultiIndex im{0, 0, 0};
                for (int ax = 0; ax < g.dim(); ++ax) {
                    const auto s = static_cast<std::size_t>(ax);
                    im[s] = (ia[s] + ib[s]) / 2;
                }
                mid = g.linear_index(im);
            }
            const double deficit = (t - report.slack) - u.values[mid];
            lc.worst_deficit = std::max(lc.worst_deficit, deficit);
            ++lc.pairs;
            if (deficit > 0.0) ++lc.violations;
        }
        if (lc.violations > 0) report.pass = false;
        report.levels.push_back(lc);
    }
    return report;
}

LevelSetCurvature level_set_curvature(FieldView u, std::size_t node, double grad_floor) {
    const Grid& g = *u.grid;
    const Eigen::MatrixXd H = hessian_at(u, node);
    const Eigen::VectorXd p = gradient_at(u, node);
    LevelSetCurvature out;
    out.grad_norm = p.norm();
    if (!(out.grad_norm > grad_floor)) throw DomainError("level_set_curvature: gradient below floor");
    const int n = static_cast<int>(p.size());
    const Eigen::VectorXd normal = p / out.grad_norm;

    if (n > 1) {
        // Orthonormal completion of the normal; columns 1..n-1 span the tangent space.
        const Eigen::HouseholderQR<Eigen::MatrixXd> qr(normal);
        const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
        const Eigen::MatrixXd T = Q.rightCols(n - 1);
        const Eigen::MatrixXd II = T.transpose() * H * T / out.grad_norm;
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(II, Eigen::EigenvaluesOnly);
        out.ii_min = eig.eigenvalues().minCoeff();
        out.ii_max = eig.eigenvalues().maxCoeff();
        out.mean_curvature = II.trace();
    }

    // Δ_h from the grid stencil at the node, compared with the decomposition.
    double lap = 0.0;
    const auto& v = u.values;
    if (g.radial()) {
        const double h = g.spacing(0);
        const int k = g.multi_index(node)[0];
        const int N = g.ambient_dim();
        if (k == 0) {
            lap = N * 2.0 * (v[1] - v[0]) / (h * h);
        } else {
            const double r = g.coordinate(0, k);
            lap = (v[node + 1] - 2.0 * v[node] + v[node - 1]) / (h * h) +
                  (N - 1) / r * (v[node + 1] - v[node - 1]) / (2.0 * h);
        }
    } else {
        for (int a = 0; a < g.dim(); ++a) {
            const std::size_t s = g.stride(a);
            lap += (v[node + s] - 2.0 * v[node] + v[node - s]) / (g.spacing(a) * g.spacing(a));
        }
    }
    const double normal_part = normal.dot(H * normal);
    out.identity_residual = std::abs(lap - (normal_part + out.mean_curvature * out.grad_norm));
    return out;
}

std::vector<double> transform_values(FieldView u, const Transform& transform) {
    std::vector<double> w(u.values.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (transform.valid(u.values[i])) w[i] = transform.value(u.values[i]);
    }
    return w;
}

double transformed_equation_residual(FieldView u, const Reaction& reaction, const Transform& transform,
                                     const ConcavityOptions& options) {
    const Grid& g = *u.grid;
    const std::vector<std::size_t> nodes = check_set(u, options);
    if (nodes.empty()) throw DomainError("transformed_equation_residual: empty check set");
    const std::vector<double> w = transform_values(u, transform);
    const FieldView wv(g, w);
    double worst = 0.0;
    for (std::size_t node : nodes) {
        const Eigen::MatrixXd H = hessian_at(wv, node);
        const Eigen::VectorXd p = gradient_at(wv, node);
        const double lap = H.trace();
        const double b = transformed_rhs(reaction, transform, u.values[node], p.squaredNorm());
        worst = std::max(worst, std::abs(lap - b));
    }
    return worst;
}

}  // namespace loglab
