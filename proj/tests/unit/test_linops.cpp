#include <cmath>
#include <numbers>

#include "doctest.h"
#include "loglab/linops.hpp"

using namespace loglab;

namespace {

constexpr double kPi = std::numbers::pi;

// First zero of J_0 by bisection on the standard-library Bessel function.
double bessel_j0_zero() {
    double lo = 2.0, hi = 3.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (std::cyl_bessel_j(0.0, mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Exact eigenvalue of the 3-point Dirichlet matrix on [-b, b] with n nodes.
double discrete_lambda(double b, int n) {
    const double h = 2.0 * b / (n - 1);
    const double s = std::sin(kPi * h / (4.0 * b));
    return 4.0 / (h * h) * s * s;
}

}  // namespace

TEST_SUITE("linops") {
    TEST_CASE("stencil is exact on quadratics") {
        const GridPtr g = make_grid(Domain::box({1.0, 2.0}), {11, 21});
        std::vector<double> v(g->size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto x = g->coordinates(i);
            v[i] = x[0] * x[0] + 3.0 * x[1] * x[1];
        }
        const auto lap = apply_laplacian(FieldView(*g, v));
        for (std::size_t node : g->interior_nodes()) CHECK(lap[node] == doctest::Approx(8.0).epsilon(1e-10));
    }

    TEST_CASE("radial stencil is exact on r^2, including the origin") {
        for (int N : {2, 3}) {
            const GridPtr g = make_grid(Domain::ball(1.0, N), 21);
            std::vector<double> v(g->size());
            for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::pow(g->coordinate(0, static_cast<int>(i)), 2);
            const auto lap = apply_laplacian(FieldView(*g, v));
            for (std::size_t node : g->interior_nodes()) CHECK(lap[node] == doctest::Approx(2.0 * N).epsilon(1e-10));
        }
    }

    TEST_CASE("assembled operator matches the matrix-free stencil") {
        const GridPtr g = make_grid(Domain::box({1.0, 1.0}), 9);
        const DirichletLaplacian A(g);
        CHECK(A.symmetric());
        CHECK((A.matrix() - SparseMatrix(A.matrix().transpose())).norm() == 0.0);
        std::vector<double> v(g->size(), 0.0);
        for (std::size_t node : g->interior_nodes()) v[node] = std::sin(static_cast<double>(node));
        const auto lap = apply_laplacian(FieldView(*g, v));
        const Eigen::VectorXd Au = A.matrix() * A.restrict_to_unknowns(v);
        const auto back = A.to_nodal(Au);
        for (std::size_t node : g->interior_nodes()) CHECK(back[node] == doctest::Approx(-lap[node]).epsilon(1e-12));
        // Row sum: diagonal 4/h^2 plus four neighbours of 1/h^2.
        CHECK(A.operator_norm() == doctest::Approx(8.0 / (0.25 * 0.25)));
    }

    TEST_CASE("Poisson solve converges at second order") {
        auto error = [](int n) {
            const GridPtr g = make_grid(Domain::box({1.0, 1.0}), n);
            const auto exact = [](std::span<const double> x) {
                return std::cos(kPi * x[0] / 2.0) * std::cos(kPi * x[1] / 2.0);
            };
            const Field u = Field::from_function(g, exact);
            std::vector<double> rhs(g->size());
            for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = kPi * kPi / 2.0 * u[i];
            const PoissonResult r = solve_poisson(Field::with_zero_trace(g, rhs), 1e-12);
            CHECK(r.converged);
            double e = 0.0;
            for (std::size_t i = 0; i < rhs.size(); ++i) e = std::max(e, std::abs(r.solution[i] - u[i]));
            return e;
        };
        CHECK(error(21) / error(41) == doctest::Approx(4.0).epsilon(0.03));
    }

    TEST_CASE("principal eigenpair matches the discrete closed form") {
        for (int n : {51, 201}) {
            const Eigenpair e = principal_eigenpair(make_grid(Domain::interval(1.0), n), 1e-13);
            CHECK(e.lambda1 == doctest::Approx(discrete_lambda(1.0, n)).epsilon(1e-11));
            CHECK(e.phi1.sup_norm() == doctest::Approx(1.0));
            for (double v : e.phi1.values()) CHECK(v >= 0.0);
        }
        const Eigenpair e2 = principal_eigenpair(make_grid(Domain::box({1.0, 2.0}), {41, 81}), 1e-13);
        CHECK(e2.lambda1 == doctest::Approx(discrete_lambda(1.0, 41) + discrete_lambda(2.0, 81)).epsilon(1e-10));
    }

    TEST_CASE("disc eigenvalue converges to j01^2") {
        const double target = std::pow(bessel_j0_zero(), 2);
        auto err = [&](int n) {
            return std::abs(principal_eigenpair(make_grid(Domain::ball(1.0, 2), n), 1e-13).lambda1 - target);
        };
        const double e1 = err(101);
        const double e2 = err(201);
        CHECK(e1 < 1e-3);
        CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
    }

    TEST_CASE("3-ball eigenvalue converges to pi^2") {
        const Eigenpair e = principal_eigenpair(make_grid(Domain::ball(1.0, 3), 401), 1e-13);
        CHECK(e.lambda1 == doctest::Approx(kPi * kPi).epsilon(1e-4));
    }

    TEST_CASE("weighted inner product") {
        const GridPtr g = make_grid(Domain::interval(1.0), 101);
        const Field one = Field::from_function(g, [](std::span<const double> x) { return 1.0 - x[0] * x[0]; });
        CHECK(inner(*g, one.values(), one.values()) == doctest::Approx(16.0 / 15.0).epsilon(1e-3));
    }
}
