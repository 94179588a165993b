#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "dilatron/lp.hpp"
#include "dilatron/target_grid.hpp"

using namespace dilatron;

namespace {

// Radial reach of conv(V_k) in direction theta via a small LP over the k
// vertex weights: max r s.t. r e^{i theta} = sum lambda_m v_m, lambda in the
// simplex. Independent second route against polygon_radius.
double lp_polygon_radius(int k, double theta) {
    const std::vector<Complex> v = vertices(k);
    RealMatrix a = RealMatrix::Zero(3, k + 1);
    RealVector b = RealVector::Zero(3);
    RealVector c = RealVector::Zero(k + 1);
    for (int m = 0; m < k; ++m) {
        a(0, m) = v[m].real();
        a(1, m) = v[m].imag();
        a(2, m) = 1.0;
    }
    a(0, k) = -std::cos(theta);
    a(1, k) = -std::sin(theta);
    b(2) = 1.0;
    c(k) = 1.0;
    const LpResult lp = lp_maximize(a, b, c);
    REQUIRE(lp.status == LpResult::Status::optimal);
    return lp.value;
}

}  // namespace

TEST_CASE("vertices: fixed sets and validity gate") {
    const std::vector<Complex> v4 = vertices(4);
    REQUIRE(v4.size() == 4);
    CHECK(std::abs(v4[0] - Complex(1, 0)) < 1e-15);
    CHECK(std::abs(v4[1] - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(v4[2] - Complex(-1, 0)) < 1e-15);
    CHECK(std::abs(v4[3] - Complex(0, -1)) < 1e-15);

    for (const Complex& z : vertices(3))
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-15);

    CHECK_THROWS_AS(vertices(2), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1), std::invalid_argument);
}

TEST_CASE("product of all k-th roots of unity is (-1)^(k-1)") {
    for (int k = 3; k <= 12; ++k) {
        Complex prod(1.0, 0.0);
        for (const Complex& z : vertices(k)) prod *= z;
        const double expected = (k % 2 == 1) ? 1.0 : -1.0;
        CHECK(std::abs(prod - Complex(expected, 0.0)) < 1e-12);
    }
}

TEST_CASE("build_grid: counts, row-major ordering, unimodularity") {
    CHECK(build_grid(3).pairs.size() == 9);

    const GridTarget g4 = build_grid(4);
    // index 5 = (m1, m2) = (1, 1) -> (i, i)
    CHECK(std::abs(g4.pairs[5].first - Complex(0, 1)) < 1e-15);
    CHECK(std::abs(g4.pairs[5].second - Complex(0, 1)) < 1e-15);

    const GridTarget g20 = build_grid(20);
    CHECK(g20.pairs.size() == 400);
    const std::vector<Complex> v20 = vertices(20);
    for (int j = 0; j < 400; ++j) {
        CHECK(std::abs(g20.pairs[j].first - v20[j / 20]) < 1e-15);
        CHECK(std::abs(g20.pairs[j].second - v20[j % 20]) < 1e-15);
        CHECK(std::abs(std::abs(g20.pairs[j].first) - 1.0) < 1e-12);
        CHECK(std::abs(std::abs(g20.pairs[j].second) - 1.0) < 1e-12);
    }
}

TEST_CASE("grid permutation helper validates and relabels") {
    const GridTarget g = build_grid(3);
    std::vector<int> perm(9);
    for (int i = 0; i < 9; ++i) perm[i] = (i + 4) % 9;
    const GridTarget p = g.permuted(perm);
    for (int i = 0; i < 9; ++i) CHECK(p.pairs[i] == g.pairs[perm[i]]);
    CHECK_THROWS_AS(g.permuted(std::vector<int>{0, 0, 1, 2, 3, 4, 5, 6, 7}),
                    std::invalid_argument);
}

TEST_CASE("polygon correction values") {
    CHECK(1.0 - polygon_correction(20) == doctest::Approx(0.0123).epsilon(0.01));
    CHECK(polygon_correction(4) ==
          doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(std::abs(polygon_correction(1000000) - 1.0) < 1e-10);
}

TEST_CASE("vertex nesting for divisible grid sizes") {
    const std::pair<int, int> cases[] = {{4, 8}, {3, 12}, {5, 20}, {8, 16}};
    for (const auto& [k, kp] : cases) {
        const std::vector<Complex> coarse = vertices(k);
        const std::vector<Complex> fine = vertices(kp);
        for (const Complex& z : coarse) {
            double best = 2.0;
            for (const Complex& w : fine) best = std::min(best, std::abs(z - w));
            CHECK(best < 1e-12);
        }
    }
}

TEST_CASE("polygon radius: geometry matches the LP oracle on a fine sample") {
    for (int k : {3, 4, 8, 20}) {
        for (int i = 0; i < 180; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / 180.0;
            const double geom = polygon_radius(k, theta);
            const double lp = lp_polygon_radius(k, theta);
            CHECK(std::abs(geom - lp) < 1e-9);
        }
    }
}

TEST_CASE("scaled bidisk boundary lies inside the polygon") {
    // cos(pi/k) * (distinguished boundary of the bidisk) sits in P_k x P_k;
    // per coordinate: cos(pi/k) e^{i theta} is inside conv(V_k).
    for (int k : {3, 5, 8, 20}) {
        const double scale = polygon_correction(k);
        for (int i = 0; i < 720; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / 720.0;
            CHECK(polygon_radius(k, theta) >= scale - 1e-12);
        }
        // And every vertex is on the unit circle (P_k^2 inside the bidisk).
        for (const Complex& z : vertices(k))
            CHECK(std::abs(z) <= 1.0 + 1e-12);
    }
}
