#pragma once

#include <Eigen/Dense>
#include <complex>

#include "dilatron/tolerances.hpp"

namespace dilatron {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Entrywise max-modulus norm ||M||_max.
double max_abs(const ComplexMatrix& m);
double max_abs(const RealMatrix& m);

// ||M*M - I||_max; zero for exact unitaries.
double unitarity_residual(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m,
                double tol = default_tolerances().unitarity);

// ||M - M*||_max.
double hermiticity_residual(const ComplexMatrix& m);

// Plain dense product with an explicit dimension check.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
// orthonormal eigenvectors (columns). Delegates to LAPACK zheevd. Throws
// std::invalid_argument when the input fails the hermiticity gate.
struct HermitianEig {
    RealVector eigenvalues;
    ComplexMatrix eigenvectors;
};
HermitianEig hermitian_eig(const ComplexMatrix& m,
                           double tol = default_tolerances().hermiticity);

// Real symmetric counterpart (LAPACK dsyevd); used heavily by the conic
// solver on the embedded PSD blocks.
struct SymmetricEig {
    RealVector eigenvalues;
    RealMatrix eigenvectors;
};
SymmetricEig symmetric_eig(const RealMatrix& m,
                           double tol = default_tolerances().hermiticity);

// Largest singular value, computed as sqrt(lambda_max(M*M)).
double operator_norm(const ComplexMatrix& m);
double operator_norm(const RealMatrix& m);

// Frobenius-nearest PSD matrix: eigendecompose, clamp negatives to zero,
// reassemble. Input must be Hermitian (resp. symmetric).
ComplexMatrix psd_project(const ComplexMatrix& m);
RealMatrix psd_project(const RealMatrix& m);

// [[Re M, -Im M], [Im M, Re M]]. For Hermitian M the embedding is symmetric
// and has the spectrum of M with doubled multiplicities; M is PSD iff the
// embedding is.
RealMatrix complex_to_real_embed(const ComplexMatrix& m);

}  // namespace dilatron
