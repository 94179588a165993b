#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <numbers>

#include "dilatron/appendix.hpp"
#include "dilatron/ensembles.hpp"
#include "dilatron/experiment.hpp"
#include "test_util.hpp"

using namespace dilatron;
using namespace dilatron::testutil;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

ComplexMatrix haar(int n, std::uint64_t seed) {
    return sample_haar_unitary(EnsembleSpec{EnsembleKind::haar_unitary, n, seed});
}
}  // namespace

TEST_CASE("build_s_t: scalar case and substitution identity") {
    const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    const auto [s, t] = build_s_t(one, one, Complex(-1.0, 0.0));
    CHECK(s(0, 0) == Complex(1, 0));
    CHECK(s(0, 1) == Complex(-1, 0));
    CHECK(s(1, 0) == Complex(1, 0));
    CHECK(s(1, 1) == Complex(1, 0));
    CHECK(operator_norm(s) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

    // a = b: the (1,1) block of ST is 2 A^2.
    const ComplexMatrix a = haar(4, 31);
    const auto [s2, t2] = build_s_t(a, a, Complex(0, 1));
    const ComplexMatrix st = s2 * t2;
    CHECK(max_abs(ComplexMatrix(st.topLeftCorner(4, 4) - 2.0 * a * a)) < 1e-12);

    CHECK_THROWS_AS(build_s_t(a, a, Complex(0.5, 0)), std::invalid_argument);
    CHECK_THROWS_AS(build_s_t(a, haar(5, 32), Complex(1, 0)),
                    std::invalid_argument);
}

TEST_CASE("S and T commute for 200 random (a, b, lambda) triples") {
    CounterRng rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(8));
        const ComplexMatrix a = haar(n, split_seed(5000, 2 * trial));
        const ComplexMatrix b = haar(n, split_seed(5000, 2 * trial + 1));
        const Complex lambda = std::polar(1.0, kTwoPi * rng.next_double());
        const auto [s, t] = build_s_t(a, b, lambda);
        CHECK(max_abs(ComplexMatrix(s * t - t * s)) <= 1e-10);
    }
}

TEST_CASE("norm identity: right multiplication by a unitary maps T to S") {
    CounterRng rng(43);
    const int n = 5;
    const ComplexMatrix a = haar(n, 61);
    const ComplexMatrix b = haar(n, 62);
    const Complex lambda = std::polar(1.0, kTwoPi * rng.next_double());
    const auto [s, t] = build_s_t(a, b, lambda);
    ComplexMatrix j = ComplexMatrix::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = lambda * ComplexMatrix::Identity(n, n);
    j.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
    CHECK(max_abs(ComplexMatrix(t * j - s)) < 1e-12);
    CHECK(std::abs(operator_norm(s) - operator_norm(t)) < 1e-10);
}

TEST_CASE("shortest covering arc: fixed cases and brute-force oracle") {
    // Single point: empty arc.
    const Arc trivial = shortest_covering_arc({1.25});
    CHECK(trivial.length == doctest::Approx(0.0));
    CHECK(trivial.start == doctest::Approx(1.25));

    // Angles {0, pi}: two gaps of length pi; either complement works and the
    // arc has length exactly pi.
    const Arc half = shortest_covering_arc({0.0, std::numbers::pi});
    CHECK(half.length == doctest::Approx(std::numbers::pi).epsilon(1e-12));

    CounterRng rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const int count = 2 + static_cast<int>(rng.next_below(12));
        std::vector<double> angles(count);
        for (double& t : angles) t = kTwoPi * rng.next_double();
        const Arc arc = shortest_covering_arc(angles);
        for (double t : angles) CHECK(arc.contains(t));

        // Oracle: every minimal covering arc starts at one of the angles;
        // try each start and take the smallest span that covers the rest.
        double best = kTwoPi;
        for (double start : angles) {
            double span = 0.0;
            for (double t : angles) {
                double rel = std::fmod(t - start, kTwoPi);
                if (rel < 0) rel += kTwoPi;
                span = std::max(span, rel);
            }
            best = std::min(best, span);
        }
        CHECK(arc.length == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("optimal lambda: equal inputs and the antipodal tie") {
    const ComplexMatrix a = haar(6, 71);
    CHECK(std::abs(optimal_lambda(a, a) - Complex(-1.0, 0.0)) < 1e-9);

    // (B*A)^2 with spectrum {1, -1}: lambda must be one of -e^{+-i pi/2}.
    ComplexMatrix da = ComplexMatrix::Zero(2, 2);
    da(0, 0) = 1.0;
    da(1, 1) = Complex(0, 1);
    const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
    const Complex lambda = optimal_lambda(da, id);
    const bool is_minus_i = std::abs(lambda - Complex(0, -1)) < 1e-9;
    const bool is_plus_i = std::abs(lambda - Complex(0, 1)) < 1e-9;
    CHECK((is_minus_i || is_plus_i));
}

TEST_CASE("covering arc of the spectrum is within the pigeonhole bound") {
    for (int n : {2, 5, 10}) {
        for (int trial = 0; trial < 10; ++trial) {
            const ComplexMatrix a = haar(n, split_seed(900 + n, trial * 2));
            const ComplexMatrix b = haar(n, split_seed(900 + n, trial * 2 + 1));
            ComplexMatrix w = b.adjoint() * a;
            w = w * w;
            Eigen::ComplexEigenSolver<ComplexMatrix> es(w, false);
            std::vector<double> angles;
            for (int i = 0; i < n; ++i) {
                double t = std::arg(es.eigenvalues()(i));
                if (t < 0) t += kTwoPi;
                angles.push_back(t);
            }
            const Arc arc = shortest_covering_arc(angles);
            CHECK(arc.length <= kTwoPi * (1.0 - 1.0 / n) + 1e-9);
            const Complex lambda = optimal_lambda(a, b);
            CHECK(std::abs(std::abs(lambda) - 1.0) < 1e-12);
        }
    }
}

TEST_CASE("verify_theorem: scalar equality case and random pairs") {
    const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    const AppendixWitness w = verify_theorem(one, one);
    CHECK(w.bound == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(std::abs(w.max_norm - w.bound) < 1e-9);
    CHECK(std::abs(w.lambda - Complex(-1, 0)) < 1e-12);

    for (int n : {1, 2, 3, 5, 8, 12}) {
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexMatrix a = haar(n, split_seed(1300 + n, 2 * trial));
            const ComplexMatrix b = haar(n, split_seed(1300 + n, 2 * trial + 1));
            const AppendixWitness wit = verify_theorem(a, b);
            CHECK(wit.commute_residual <= 1e-10);
            CHECK(wit.max_norm <= wit.bound + 1e-9);

            // Proof chain: ||S||^2 <= 2 + ||lambda + (B*A)^2||, and for the
            // unitary W that norm is the spectral sup of |lambda + mu|.
            ComplexMatrix wsq = b.adjoint() * a;
            wsq = wsq * wsq;
            const ComplexMatrix shifted =
                wit.lambda * ComplexMatrix::Identity(n, n) + wsq;
            Eigen::ComplexEigenSolver<ComplexMatrix> es(wsq, false);
            double sup = 0.0;
            for (int i = 0; i < n; ++i)
                sup = std::max(sup, std::abs(wit.lambda + es.eigenvalues()(i)));
            CHECK(std::abs(operator_norm(shifted) - sup) < 1e-10);
            CHECK(operator_norm(wit.s) * operator_norm(wit.s) <=
                  2.0 + sup + 1e-8);
        }
    }
}

TEST_CASE("unitary_dilation_2n: fixed points of the construction") {
    const int n = 3;
    const ComplexMatrix zero = ComplexMatrix::Zero(n, n);
    const ComplexMatrix u0 = unitary_dilation_2n(zero);
    ComplexMatrix expected = ComplexMatrix::Zero(2 * n, 2 * n);
    expected.topRightCorner(n, n) = ComplexMatrix::Identity(n, n);
    expected.bottomLeftCorner(n, n) = ComplexMatrix::Identity(n, n);
    CHECK(max_abs(ComplexMatrix(u0 - expected)) == 0.0);

    const ComplexMatrix u = haar(4, 83);
    const ComplexMatrix lifted = unitary_dilation_2n(u);
    CHECK(max_abs(ComplexMatrix(lifted.topRightCorner(4, 4))) == 0.0);
    CHECK(max_abs(ComplexMatrix(lifted.bottomLeftCorner(4, 4))) == 0.0);
    CHECK(max_abs(ComplexMatrix(lifted.bottomRightCorner(4, 4) + u.adjoint())) ==
          0.0);
    CHECK(unitarity_residual(lifted) <= 1e-9);

    CounterRng rng(87);
    const ComplexMatrix contraction = sample_contraction(5, 91);
    const ComplexMatrix big = unitary_dilation_2n(contraction);
    CHECK(unitarity_residual(big) <= 1e-9);
    CHECK(max_abs(ComplexMatrix(big.topLeftCorner(5, 5) - contraction)) == 0.0);

    CHECK_THROWS_AS(unitary_dilation_2n(ComplexMatrix(2.0 * u)),
                    std::invalid_argument);
}

TEST_CASE("c2n_bound: values, monotonicity, strict ceiling") {
    CHECK(c2n_bound(1) ==
          doctest::Approx(std::sqrt(2.0 + std::sqrt(2.0))).epsilon(1e-15));
    double prev = 0.0;
    for (int n = 1; n <= 50; ++n) {
        const double b = c2n_bound(n);
        CHECK(b > prev);
        CHECK(b < 2.0);
        prev = b;
    }
    CHECK(c2n_bound(1000000) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("end-to-end contraction pipeline") {
    const ComplexMatrix zero = ComplexMatrix::Zero(3, 3);
    const AppendixWitness w0 = end_to_end_contraction_dilation(zero, zero);
    CHECK(max_abs(ComplexMatrix(w0.s.topLeftCorner(3, 3))) == 0.0);
    CHECK(w0.commute_residual <= 1e-10);

    for (int n : {1, 2, 5}) {
        for (int trial = 0; trial < 5; ++trial) {
            const ComplexMatrix a =
                sample_contraction(n, split_seed(1700 + n, 2 * trial));
            const ComplexMatrix b =
                sample_contraction(n, split_seed(1700 + n, 2 * trial + 1));
            const AppendixWitness w = end_to_end_contraction_dilation(a, b);
            CHECK(max_abs(ComplexMatrix(w.s.topLeftCorner(n, n) - a)) < 1e-12);
            CHECK(max_abs(ComplexMatrix(w.t.topLeftCorner(n, n) - b)) < 1e-12);
            CHECK(w.max_norm <= c2n_bound(n) + 1e-9);
            CHECK(w.commute_residual <= 1e-10);
        }
    }
}
