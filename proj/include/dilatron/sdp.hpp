#pragma once

#include <Eigen/Sparse>
#include <cstdint>
#include <string>
#include <vector>

#include "dilatron/linalg.hpp"
#include "dilatron/target_grid.hpp"

namespace dilatron {

// Packed symmetric storage: upper triangle, column-major, off-diagonal
// entries scaled by sqrt(2) so <svec(S), svec(T)> = <S, T>_F. Euclidean
// projection of an svec is then the svec of the matrix projection.
int svec_dim(int order);
int svec_index(int i, int j);  // i <= j
RealVector svec(const RealMatrix& s);
RealMatrix smat(const RealVector& v);

// Cone layout of the slack vector: equality (zero-cone) rows first, then the
// PSD blocks in svec coordinates.
struct ConeLayout {
    int zero_rows = 0;
    std::vector<int> psd_orders;

    int psd_rows() const;
    int total_rows() const;
    int psd_offset(int block) const;  // absolute row offset of a block
};

// Offsets of the real decision vector: per block the svec of its 2N x 2N
// embedding, then the scalar r last.
struct VariableLayout {
    int n = 0;
    int k2 = 0;
    int block_svec_dim = 0;

    int block_offset(int j) const { return j * block_svec_dim; }
    int r_offset() const { return k2 * block_svec_dim; }
    int num_vars() const { return k2 * block_svec_dim + 1; }
};

struct DilationSDP {
    int n = 0;
    int k2 = 0;
    GridTarget grid;
    ComplexMatrix u1, u2;
    VariableLayout layout;
};

// Standard conic form min <c,x> s.t. Ax + s = b, s in K. The equality rows
// were scaled to unit Euclidean norm on construction; row_scales keeps the
// factor divided out of each row (1 for cone rows) so residuals can be
// reported in original constraint units.
struct ConicProblem {
    RealVector c;
    Eigen::SparseMatrix<double> A;
    RealVector b;
    ConeLayout cones;
    RealVector row_scales;
};

enum class SolveStatus { solved, max_iters, infeasible_detected };

const char* to_string(SolveStatus s);

struct SolveResult {
    double r_opt = 0.0;
    std::vector<ComplexMatrix> blocks;
    SolveStatus status = SolveStatus::max_iters;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;
    double wall_time_seconds = 0.0;
};

// Builds the SDP
//     maximize r
//     subject to  C_j >= 0,  sum_j C_j = I_N,
//                 sum_j a_j C_j = r U_1,  sum_j b_j C_j = r U_2,
// over Hermitian N x N blocks C_j indexed by the grid pairs (a_j, b_j).
DilationSDP formulate(const ComplexMatrix& u1, const ComplexMatrix& u2,
                      const GridTarget& grid,
                      double unitarity_tol = default_tolerances().unitarity);

// Real standard form. Each Hermitian block is carried as the svec of its
// 2N x 2N real embedding; the embedding's internal redundancy (equal diagonal
// blocks, skew off-diagonal block) is pinned by explicit equality rows. The
// mechanical complex->real expansion produces duplicate and zero rows; a
// presolve pass drops/merges them before row normalization.
ConicProblem to_conic(const DilationSDP& sdp);

// Number of equality rows the mechanical expansion emits before presolve:
// 2N^2 (unital) + 4N^2 (images) + k^2 N(N+1) (embedding redundancy).
std::int64_t raw_equality_row_count(int n, int k2);

// r and the Hermitian blocks from a solution vector; blocks are symmetrized
// to kill round-off from the embedding. Partial: solver metadata is filled
// by the caller.
SolveResult extract(const DilationSDP& sdp, const RealVector& x);

// Post-solve feasibility check, independent of solver internals and of any
// scaling: block eigenvalue floor and max-norm equality residuals measured
// directly on (U, grid, C_j, r).
struct CertificateReport {
    double min_block_eig = 0.0;
    double unital_residual = 0.0;
    double image1_residual = 0.0;
    double image2_residual = 0.0;

    double worst_equality() const;
    bool pass(double tol_feas) const;
};
CertificateReport check_certificate(const DilationSDP& sdp, double r,
                                    const std::vector<ComplexMatrix>& blocks);

// Probabilistic full-row-rank test via a random projection: rank(M) equals
// rank(M * Omega) for a Gaussian Omega with a few spare columns, with
// probability 1. Meant for the presolved equality block on test-sized
// problems.
bool likely_full_row_rank(const Eigen::SparseMatrix<double>& rows,
                          int oversample = 8, std::uint64_t seed = 12345);

// Debug dump for cross-checking against external solvers: triplets, cones,
// layout, row scales, grid tag.
std::string conic_to_json_string(const ConicProblem& p,
                                 const DilationSDP* sdp = nullptr);
void save_conic_json(const ConicProblem& p, const DilationSDP* sdp,
                     const std::string& path);

}  // namespace dilatron
