#include <cmath>
#include <vector>

#include "doctest.h"
#include "icos/quadrature.hpp"
#include "oracles.hpp"

using namespace icos;

namespace {

std::vector<double> uniform_nodes(double a, double b, int n) {
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i) k[i] = a + (b - a) * i / (n - 1);
    return k;
}

double integrate_fn(const std::function<double(double)>& f, QuadScheme s, double a, double b, int n) {
    auto nodes = uniform_nodes(a, b, n);
    std::vector<double> samples(n);
    for (int i = 0; i < n; ++i) samples[i] = f(nodes[i]);
    return quad_integrate(samples, s, nodes, GridKind::of(nodes));
}

}  // namespace

TEST_CASE("weights match the tabulated coefficients") {
    auto trap = quad_weights(QuadScheme::trapezoid, 4);
    CHECK(trap == std::vector<double>{0.5, 1.0, 1.0, 0.5});

    auto simp = quad_weights(QuadScheme::simpson13, 5);
    REQUIRE(simp.size() == 5);
    CHECK(simp[0] == doctest::Approx(1.0 / 3.0));
    CHECK(simp[1] == doctest::Approx(4.0 / 3.0));
    CHECK(simp[2] == doctest::Approx(2.0 / 3.0));
    CHECK(simp[3] == doctest::Approx(4.0 / 3.0));
    CHECK(simp[4] == doctest::Approx(1.0 / 3.0));

    auto left = quad_weights(QuadScheme::left_riemann, 3);
    CHECK(left == std::vector<double>{1.0, 1.0, 0.0});
    auto right = quad_weights(QuadScheme::right_riemann, 3);
    CHECK(right == std::vector<double>{0.0, 1.0, 1.0});
}

TEST_CASE("simpson with even node count is rejected") {
    CHECK_THROWS_AS(quad_weights(QuadScheme::simpson13, 6), std::invalid_argument);
    CHECK_THROWS_AS(quad_weights(QuadScheme::simpson13, 200), std::invalid_argument);
}

TEST_CASE("simpson is exact on cubics") {
    double v = integrate_fn([](double x) { return x * x; }, QuadScheme::simpson13, 0.0, 1.0, 5);
    CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    double v3 = integrate_fn([](double x) { return x * x * x; }, QuadScheme::simpson13, 0.0, 2.0, 9);
    CHECK(v3 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("constants integrate back to the interval width for every scheme") {
    for (auto s : {QuadScheme::trapezoid, QuadScheme::simpson13}) {
        double v = integrate_fn([](double) { return 1.0; }, s, 3400.0, 4400.0, 201);
        CHECK(v == doctest::Approx(1000.0).epsilon(1e-12));
    }
    // Riemann endpoint rules drop one half-open cell but keep sum w_i = n-1.
    double vl = integrate_fn([](double) { return 1.0; }, QuadScheme::left_riemann, 3400.0, 4400.0, 201);
    CHECK(vl == doctest::Approx(1000.0).epsilon(1e-12));
}

TEST_CASE("smooth integrand matches the high-resolution oracle") {
    auto f = [](double k) { return std::sin(k / 300.0); };
    double truth = oracle::integrate(f, 3400.0, 4400.0, 100001);
    double simp = integrate_fn(f, QuadScheme::simpson13, 3400.0, 4400.0, 201);
    CHECK(std::abs(simp - truth) / std::abs(truth) < 1e-6);
}

TEST_CASE("empirical convergence orders match the tabulated error orders") {
    auto f = [](double k) { return std::sin(k / 300.0); };
    double truth = oracle::integrate(f, 3400.0, 4400.0, 200001);
    struct Case {
        QuadScheme s;
        int order;
    } cases[] = {{QuadScheme::left_riemann, 1},
                 {QuadScheme::right_riemann, 1},
                 {QuadScheme::trapezoid, 2},
                 {QuadScheme::simpson13, 4}};
    for (auto c : cases) {
        double e1 = std::abs(integrate_fn(f, c.s, 3400.0, 4400.0, 51) - truth);
        double e2 = std::abs(integrate_fn(f, c.s, 3400.0, 4400.0, 101) - truth);
        double ratio = e1 / e2;
        double expected = std::pow(2.0, c.order);
        // Halving the mesh should cut the error by ~2^order, within a factor of 2.
        CHECK(ratio > expected / 2.0);
        CHECK(ratio < expected * 2.0);
    }
}

TEST_CASE("non-uniform grids fall back to folded trapezoid weights") {
    std::vector<double> nodes = {0.0, 0.5, 1.5, 2.0, 4.0};
    auto grid = GridKind::of(nodes);
    CHECK_FALSE(grid.uniform);
    auto w = quad_node_weights(QuadScheme::simpson13, nodes, grid);
    CHECK(w[0] == doctest::Approx(0.25));
    CHECK(w[1] == doctest::Approx(0.75));
    CHECK(w[2] == doctest::Approx(0.75));
    CHECK(w[3] == doctest::Approx(1.25));
    CHECK(w[4] == doctest::Approx(1.0));
    // Linear functions integrate exactly under the trapezoid rule.
    std::vector<double> samples;
    for (double x : nodes) samples.push_back(2.0 * x + 1.0);
    CHECK(quad_integrate(samples, QuadScheme::trapezoid, nodes, grid) ==
          doctest::Approx(4.0 * 4.0 + 4.0 - 0.0));
}

TEST_CASE("length mismatch is rejected") {
    std::vector<double> nodes = uniform_nodes(0.0, 1.0, 5);
    std::vector<double> samples(4, 1.0);
    CHECK_THROWS(quad_integrate(samples, QuadScheme::trapezoid, nodes, GridKind::of(nodes)));
}

TEST_CASE("uniformity detection tolerates 1e-9 relative jitter only") {
    std::vector<double> nodes = uniform_nodes(3400.0, 4400.0, 11);
    CHECK(GridKind::of(nodes).uniform);
    nodes[5] += 1e-3;
    CHECK_FALSE(GridKind::of(nodes).uniform);
}
