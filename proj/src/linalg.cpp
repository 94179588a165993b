#include "dilatron/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace dilatron {

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs(const RealMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_residual(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    ComplexMatrix g = m.adjoint() * m;
    g -= ComplexMatrix::Identity(m.cols(), m.cols());
    return max_abs(g);
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    return unitarity_residual(m) <= tol;
}

double hermiticity_residual(const ComplexMatrix& m) {
    if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
    return max_abs(ComplexMatrix(m - m.adjoint()));
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions disagree");
    return a * b;
}

HermitianEig hermitian_eig(const ComplexMatrix& m, double tol) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian_eig: matrix not square");
    if (hermiticity_residual(m) > tol)
        throw std::invalid_argument("hermitian_eig: input not Hermitian");
    const int n = static_cast<int>(m.rows());
    HermitianEig out;
    out.eigenvalues.resize(n);
    // Work on the Hermitian average so round-off in the input cannot leak
    // through the strict-triangle LAPACK reads.
    out.eigenvectors = (m + m.adjoint()) / 2.0;
    if (n == 0) return out;
    int info = LAPACKE_zheevd(
        LAPACK_COL_MAJOR, 'V', 'L', n,
        reinterpret_cast<lapack_complex_double*>(out.eigenvectors.data()), n,
        out.eigenvalues.data());
    if (info != 0)
        throw std::runtime_error("hermitian_eig: zheevd failed, info=" +
                                 std::to_string(info));
    return out;
}

SymmetricEig symmetric_eig(const RealMatrix& m, double tol) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("symmetric_eig: matrix not square");
    if (max_abs(RealMatrix(m - m.transpose())) > tol)
        throw std::invalid_argument("symmetric_eig: input not symmetric");
    const int n = static_cast<int>(m.rows());
    SymmetricEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = (m + m.transpose()) / 2.0;
    if (n == 0) return out;
    int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                              out.eigenvectors.data(), n,
                              out.eigenvalues.data());
    if (info != 0)
        throw std::runtime_error("symmetric_eig: dsyevd failed, info=" +
                                 std::to_string(info));
    return out;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    ComplexMatrix g = m.adjoint() * m;
    HermitianEig eig = hermitian_eig(g, 1e-8 * std::max(1.0, max_abs(g)));
    double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
    return std::sqrt(std::max(top, 0.0));
}

double operator_norm(const RealMatrix& m) {
    if (m.size() == 0) return 0.0;
    RealMatrix g = m.transpose() * m;
    SymmetricEig eig = symmetric_eig(g, 1e-8 * std::max(1.0, max_abs(g)));
    double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
    return std::sqrt(std::max(top, 0.0));
}

namespace {

template <typename Mat>
Mat scale_cols(const Mat& v, const RealVector& d) {
    Mat out = v;
    for (Eigen::Index i = 0; i < out.cols(); ++i) out.col(i) *= d(i);
    return out;
}

// Reassemble from the smaller spectral side: with no negative eigenvalues the
// input is returned untouched, and a negative-definite input projects to an
// exact zero matrix.
template <typename Mat, typename Eig>
Mat clamp_negative_part(const Mat& m, const Eig& eig) {
    const auto& vals = eig.eigenvalues;
    const int n = static_cast<int>(vals.size());
    int nneg = 0;
    while (nneg < n && vals(nneg) < 0.0) ++nneg;
    if (nneg == 0) return m;
    const int npos = n - nneg;
    if (npos <= nneg) {
        Mat vpos = eig.eigenvectors.rightCols(npos);
        Mat out = scale_cols(vpos, vals.tail(npos)) * vpos.adjoint();
        return Mat((out + out.adjoint()) / 2.0);
    }
    Mat vneg = eig.eigenvectors.leftCols(nneg);
    Mat out = m - Mat(scale_cols(vneg, vals.head(nneg)) * vneg.adjoint());
    return Mat((out + out.adjoint()) / 2.0);
}

}  // namespace

ComplexMatrix psd_project(const ComplexMatrix& m) {
    return clamp_negative_part(m, hermitian_eig(m));
}

RealMatrix psd_project(const RealMatrix& m) {
    return clamp_negative_part(m, symmetric_eig(m));
}

RealMatrix complex_to_real_embed(const ComplexMatrix& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("complex_to_real_embed: matrix not square");
    const Eigen::Index n = m.rows();
    RealMatrix e(2 * n, 2 * n);
    e.topLeftCorner(n, n) = m.real();
    e.topRightCorner(n, n) = -m.imag();
    e.bottomLeftCorner(n, n) = m.imag();
    e.bottomRightCorner(n, n) = m.real();
    return e;
}

}  // namespace dilatron
