#include "dilatron/appendix.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dilatron {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_unitary(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || !is_unitary(m))
        throw std::invalid_argument(std::string(who) +
                                    ": input fails the unitarity gate");
}

double principal_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t > std::numbers::pi) t -= kTwoPi;
    return t;
}

}  // namespace

std::pair<ComplexMatrix, ComplexMatrix> build_s_t(const ComplexMatrix& a,
                                                  const ComplexMatrix& b,
                                                  Complex lambda) {
    require_unitary(a, "build_s_t");
    require_unitary(b, "build_s_t");
    if (a.rows() != b.rows())
        throw std::invalid_argument("build_s_t: dimension mismatch");
    if (std::abs(std::abs(lambda) - 1.0) > 1e-12)
        throw std::invalid_argument("build_s_t: lambda must be unimodular");
    const Eigen::Index n = a.rows();
    ComplexMatrix s(2 * n, 2 * n), t(2 * n, 2 * n);
    s.topLeftCorner(n, n) = a;
    s.topRightCorner(n, n) = lambda * b;
    s.bottomLeftCorner(n, n) = b;
    s.bottomRightCorner(n, n) = a;
    t.topLeftCorner(n, n) = b;
    t.topRightCorner(n, n) = a;
    t.bottomLeftCorner(n, n) = std::conj(lambda) * a;
    t.bottomRightCorner(n, n) = b;
    return {s, t};
}

bool Arc::contains(double theta, double tol) const {
    double rel = std::fmod(theta - start, kTwoPi);
    if (rel < 0) rel += kTwoPi;
    return rel <= length + tol || rel >= kTwoPi - tol;
}

Arc shortest_covering_arc(const std::vector<double>& angles) {
    if (angles.empty())
        throw std::invalid_argument("shortest_covering_arc: no angles");
    std::vector<double> sorted(angles);
    for (double& t : sorted) {
        t = std::fmod(t, kTwoPi);
        if (t < 0) t += kTwoPi;
    }
    std::sort(sorted.begin(), sorted.end());
    const int n = static_cast<int>(sorted.size());

    int best = -1;
    double best_gap = -1.0;
    double best_mid = 0.0;
    for (int i = 0; i < n; ++i) {
        const double next = (i + 1 < n) ? sorted[i + 1] : sorted[0] + kTwoPi;
        const double gap = next - sorted[i];
        const double mid = std::abs(principal_angle(sorted[i] + gap / 2.0));
        if (gap > best_gap + 1e-12 ||
            (gap > best_gap - 1e-12 && mid < best_mid)) {
            best = i;
            best_gap = std::max(gap, best_gap);
            best_mid = mid;
        }
    }
    Arc arc;
    arc.length = kTwoPi - best_gap;
    const double start = (best + 1 < n) ? sorted[best + 1] : sorted[0];
    arc.start = start;
    return arc;
}

Complex optimal_lambda(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_unitary(a, "optimal_lambda");
    require_unitary(b, "optimal_lambda");
    if (a.rows() != b.rows())
        throw std::invalid_argument("optimal_lambda: dimension mismatch");
    ComplexMatrix w = b.adjoint() * a;
    w = w * w;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(w, false);
    std::vector<double> angles(w.rows());
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
        double t = std::arg(es.eigenvalues()(i));
        if (t < 0) t += kTwoPi;
        angles[static_cast<std::size_t>(i)] = t;
    }
    const Arc arc = shortest_covering_arc(angles);
    return -std::polar(1.0, arc.start + arc.length / 2.0);
}

AppendixWitness verify_theorem(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_unitary(a, "verify_theorem");
    require_unitary(b, "verify_theorem");
    if (a.rows() != b.rows())
        throw std::invalid_argument("verify_theorem: dimension mismatch");
    const int n = static_cast<int>(a.rows());
    const Tolerances& tol = default_tolerances();

    AppendixWitness w;
    w.a = a;
    w.b = b;
    w.lambda = optimal_lambda(a, b);
    std::tie(w.s, w.t) = build_s_t(a, b, w.lambda);
    w.commute_residual = max_abs(ComplexMatrix(w.s * w.t - w.t * w.s));
    w.max_norm = std::max(operator_norm(w.s), operator_norm(w.t));
    w.bound = std::sqrt(
        2.0 + 2.0 * std::sin(std::numbers::pi / 2.0 * (1.0 - 1.0 / n)));

    if (w.commute_residual > tol.commute)
        throw std::runtime_error("verify_theorem: dilation pair does not commute");
    ComplexMatrix wsq = b.adjoint() * a;
    wsq = wsq * wsq;
    const ComplexMatrix shifted =
        w.lambda * ComplexMatrix::Identity(n, n) + wsq;
    const double intermediate = std::sqrt(2.0 + operator_norm(shifted));
    if (operator_norm(w.s) > intermediate + tol.appendix_bound_slack)
        throw std::runtime_error(
            "verify_theorem: intermediate norm estimate violated");
    if (w.max_norm > w.bound + tol.appendix_bound_slack)
        throw std::runtime_error("verify_theorem: norm bound violated");
    return w;
}

namespace {

// sqrt of a Hermitian PSD defect I - M with a dead-band: eigenvalues in
// [-3e-10, 1e-13] flush to zero so that unitary inputs give exactly zero
// defect blocks instead of sqrt-of-noise artifacts.
ComplexMatrix defect_sqrt(const ComplexMatrix& defect) {
    const HermitianEig eig = hermitian_eig(defect, 1e-8);
    RealVector vals = eig.eigenvalues;
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        if (vals(i) < -3e-10)
            throw std::runtime_error(
                "unitary_dilation_2n: defect operator significantly indefinite");
        vals(i) = (vals(i) <= 1e-13) ? 0.0 : std::sqrt(vals(i));
    }
    ComplexMatrix scaled = eig.eigenvectors;
    for (Eigen::Index i = 0; i < vals.size(); ++i) scaled.col(i) *= vals(i);
    ComplexMatrix out = scaled * eig.eigenvectors.adjoint();
    return (out + out.adjoint()) / 2.0;
}

}  // namespace

ComplexMatrix unitary_dilation_2n(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw std::invalid_argument("unitary_dilation_2n: matrix not square");
    if (operator_norm(a) > 1.0 + 1e-10)
        throw std::invalid_argument("unitary_dilation_2n: input is not a contraction");
    const Eigen::Index n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix top_defect = defect_sqrt(id - a * a.adjoint());
    const ComplexMatrix bottom_defect = defect_sqrt(id - a.adjoint() * a);
    ComplexMatrix u(2 * n, 2 * n);
    u.topLeftCorner(n, n) = a;
    u.topRightCorner(n, n) = top_defect;
    u.bottomLeftCorner(n, n) = bottom_defect;
    u.bottomRightCorner(n, n) = -a.adjoint();
    return u;
}

double c2n_bound(int n) {
    if (n < 1) throw std::invalid_argument("c2n_bound: n must be >= 1");
    return std::sqrt(2.0 + 2.0 * std::sin(std::numbers::pi / 2.0 *
                                          (1.0 - 1.0 / (2.0 * n))));
}

AppendixWitness end_to_end_contraction_dilation(const ComplexMatrix& a,
                                                const ComplexMatrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols() || a.rows() != b.rows())
        throw std::invalid_argument(
            "end_to_end_contraction_dilation: inputs must be square, equal-sized");
    const int n = static_cast<int>(a.rows());
    const ComplexMatrix lifted_a = unitary_dilation_2n(a);
    const ComplexMatrix lifted_b = unitary_dilation_2n(b);
    AppendixWitness w = verify_theorem(lifted_a, lifted_b);
    const double corner_a = max_abs(ComplexMatrix(w.s.topLeftCorner(n, n) - a));
    const double corner_b = max_abs(ComplexMatrix(w.t.topLeftCorner(n, n) - b));
    if (corner_a > 1e-12 || corner_b > 1e-12)
        throw std::runtime_error(
            "end_to_end_contraction_dilation: corner compression mismatch");
    if (w.max_norm > c2n_bound(n) + default_tolerances().appendix_bound_slack)
        throw std::runtime_error(
            "end_to_end_contraction_dilation: corollary bound violated");
    return w;
}

}  // namespace dilatron
