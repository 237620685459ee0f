#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loglab/concavity.hpp"
#include "loglab/error.hpp"
#include "loglab/oned.hpp"

using namespace loglab;

namespace {

std::size_t centre_node(const Grid& g) {
    MultiIndex idx{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) idx[static_cast<std::size_t>(a)] = g.shape()[static_cast<std::size_t>(a)] / 2;
    return g.linear_index(idx);
}

std::vector<double> sample(const Grid& g, double (*fn)(double, double)) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const auto x = g.coordinates(i);
        v[i] = fn(x[0], x[1]);
    }
    return v;
}

}  // namespace

TEST_SUITE("concavity") {
    TEST_CASE("finite-difference Hessian is exact on quadratics") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 21);
        const auto sq = sample(*g, [](double x, double y) { return x * x + 3.0 * y * y + 0.5 * x * y + x; });
        const std::size_t n = g->linear_index({7, 12, 0});
        const Eigen::MatrixXd H = hessian_at(FieldView(*g, sq), n);
        CHECK(H(0, 0) == doctest::Approx(2.0));
        CHECK(H(1, 1) == doctest::Approx(6.0));
        CHECK(H(0, 1) == doctest::Approx(0.5));
        CHECK(H(1, 0) == doctest::Approx(0.5));
        const Eigen::VectorXd p = gradient_at(FieldView(*g, sq), n);
        const auto x = g->coordinates(n);
        CHECK(p(0) == doctest::Approx(2.0 * x[0] + 0.5 * x[1] + 1.0));
        CHECK(p(1) == doctest::Approx(6.0 * x[1] + 0.5 * x[0]));
        CHECK_THROWS_AS(hessian_at(FieldView(*g, sq), g->linear_index({1, 10, 0})), DomainError);
    }

    TEST_CASE("radial Hessian of r^2 is twice the identity") {
        const GridPtr g = make_grid(Domain::ball(1.0, 3), 41);
        std::vector<double> v(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) v[i] = g->coordinate(0, static_cast<int>(i)) * g->coordinate(0, static_cast<int>(i));
        for (std::size_t n : {std::size_t{0}, std::size_t{17}}) {
            const Eigen::MatrixXd H = hessian_at(FieldView(*g, v), n);
            REQUIRE(H.rows() == 3);
            CHECK((H - 2.0 * Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
        }
    }

    TEST_CASE("log of the Gausson has Hessian minus the identity") {
        const GridPtr g = make_grid(Domain::box({2.0, 2.0}), 41);
        const auto gs = oned::gausson_samples(*g);
        const ConcavityReport r = check_transform_concavity(FieldView(*g, gs), Transform::log());
        CHECK(r.concavity);
        CHECK(r.verdict == Verdict::holds_strictly);
        CHECK(r.extreme_eigenvalue == doctest::Approx(-1.0).epsilon(1e-2));
    }

    TEST_CASE("chain rule agrees with differencing the transformed samples") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 81);
        const auto bump = sample(*g, [](double x, double y) { return std::cos(0.5 * std::numbers::pi * x) * std::cos(0.5 * std::numbers::pi * y) + 0.1; });
        const Transform t = Transform::power(0.5);
        const auto w = transform_values(FieldView(*g, bump), t);
        const std::size_t n = g->linear_index({30, 50, 0});
        const Eigen::MatrixXd direct = hessian_at(FieldView(*g, w), n);
        const Eigen::VectorXd p = gradient_at(FieldView(*g, bump), n);
        const Eigen::MatrixXd chain = t.d2(bump[n]) * p * p.transpose() + t.d1(bump[n]) * hessian_at(FieldView(*g, bump), n);
        CHECK((direct - chain).cwiseAbs().maxCoeff() < 1e-3);
    }

    TEST_CASE("orientation follows the monotonicity of the transform") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 41);
        const auto bump = sample(*g, [](double x, double y) { return (1.0 - x * x) * (1.0 - y * y); });
        const ConcavityReport inc = check_transform_concavity(FieldView(*g, bump), Transform::power(0.5));
        CHECK(inc.concavity);
        CHECK(inc.verdict == Verdict::holds_strictly);
        const ConcavityReport neg = check_transform_concavity(FieldView(*g, bump), Transform::power(0.5).negated());
        CHECK_FALSE(neg.concavity);
        CHECK(neg.verdict == Verdict::holds_strictly);
        CHECK(neg.extreme_eigenvalue == doctest::Approx(-inc.extreme_eigenvalue));
        const ConcavityReport cvx = check_transform_concavity(FieldView(*g, bump), Transform::power(-0.5));
        CHECK_FALSE(cvx.concavity);
        CHECK(cvx.verdict == Verdict::holds_strictly);
    }

    TEST_CASE("Gausson is not alpha-concave on a large box") {
        const GridPtr g = make_grid(Domain::box({4.0, 4.0}), 81);
        const auto gs = oned::gausson_samples(*g);
        // u^alpha = c exp(-alpha |x|^2/2) is convex once alpha |x|^2 > 1.
        const ConcavityReport r = check_transform_concavity(FieldView(*g, gs), Transform::power(0.5));
        CHECK(r.verdict == Verdict::fails);
        const std::vector<double> alphas{0.1, 0.5, 0.9};
        const AlphaSweepResult s = alpha_sweep(FieldView(*g, gs), alphas);
        CHECK_FALSE(s.largest_passing.has_value());
        CHECK(s.consistent);
        const std::vector<double> unsorted{0.5, 0.1};
        CHECK_THROWS_AS(alpha_sweep(FieldView(*g, gs), unsorted), DomainError);
    }

    TEST_CASE("check set excludes the floor and the boundary layer") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 21);
        const auto bump = sample(*g, [](double x, double y) { return (1.0 - x * x) * (1.0 - y * y); });
        ConcavityOptions o;
        o.eps_floor_rel = 0.0;
        o.layer_k = 3;
        CHECK(check_set(FieldView(*g, bump), o).size() == 15u * 15u);
        o.layer_k = 0;
        CHECK(check_set(FieldView(*g, bump), o).size() == 17u * 17u);
        o.eps_floor_rel = 0.995;
        CHECK(check_set(FieldView(*g, bump), o).size() == 1u);
        o.eps_floor_rel = 2.0;
        CHECK_THROWS_AS(check_transform_concavity(FieldView(*g, bump), Transform::log(), o), DomainError);
    }

    TEST_CASE("superlevel sets of a radial profile are convex") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 61);
        const auto bump = sample(*g, [](double x, double y) { return std::exp(-2.0 * (x * x + y * y)); });
        const std::vector<double> levels{0.2, 0.5, 0.8};
        const QuasiConcavityReport r = quasiconcavity_check(FieldView(*g, bump), levels, 2000, 7);
        CHECK(r.pass);
        REQUIRE(r.levels.size() == 3);
        for (const auto& l : r.levels) {
            CHECK(l.violations == 0);
            CHECK(l.worst_deficit <= 0.0);
        }
    }

    TEST_CASE("two separated bumps have a non-convex superlevel set") {
        const GridPtr g = make_grid(Domain::box({2.0, 1.0}), {121, 61});
        const auto two = sample(*g, [](double x, double y) {
            return std::exp(-8.0 * ((x - 1.0) * (x - 1.0) + y * y)) + std::exp(-8.0 * ((x + 1.0) * (x + 1.0) + y * y));
        });
        const std::vector<double> levels{0.5};
        const QuasiConcavityReport a = quasiconcavity_check(FieldView(*g, two), levels, 2000, 11);
        CHECK_FALSE(a.pass);
        CHECK(a.levels[0].violations > 0);
        const QuasiConcavityReport b = quasiconcavity_check(FieldView(*g, two), levels, 2000, 11);
        CHECK(a.levels[0].violations == b.levels[0].violations);
        CHECK(a.levels[0].worst_deficit == b.levels[0].worst_deficit);
    }

    TEST_CASE("level sets of |x|^2 are spheres with mean curvature (d-1)/r") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0, 1.0}), 41);
        std::vector<double> v(g->size());
        for (std::size_t i = 0; i < g->size(); ++i) {
            const auto x = g->coordinates(i);
            v[i] = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
        }
        const std::size_t n = g->linear_index({30, 24, 20});
        const auto x = g->coordinates(n);
        const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
        const LevelSetCurvature c = level_set_curvature(FieldView(*g, v), n);
        CHECK(c.mean_curvature == doctest::Approx(2.0 / r).epsilon(1e-8));
        CHECK(c.ii_min == doctest::Approx(1.0 / r).epsilon(1e-8));
        CHECK(c.ii_max == doctest::Approx(1.0 / r).epsilon(1e-8));
        CHECK(c.identity_residual < 1e-8);
        CHECK_THROWS_AS(level_set_curvature(FieldView(*g, v), centre_node(*g)), DomainError);
    }

    TEST_CASE("transformed equation holds for -log of the Gausson") {
        const GridPtr g = make_grid(Domain::box({1.5, 1.5}), 31);
        const auto gs = oned::gausson_samples(*g);
        const double res =
            transformed_equation_residual(FieldView(*g, gs), Reaction::log_schrodinger(), Transform::log().negated());
        CHECK(res < 1e-9);
    }
}
