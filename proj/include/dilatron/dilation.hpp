#pragma once

#include <string>

#include "dilatron/sdp.hpp"
#include "dilatron/solver.hpp"

namespace dilatron {

// Outcome of one dilation-constant computation: c = 1/r with the polygon
// bracket cos(pi/k) * c <= c(U, u0) <= c, the feasibility certificate, and
// solver metadata. `trusted` is false when the solver did not reach the
// solved status; the value is still reported.
struct DilationReport {
    double c_value = 0.0;
    double r_opt = 0.0;
    int k = 0;
    int n = 0;
    double bracket_lower = 0.0;
    double bracket_upper = 0.0;
    CertificateReport certificate;
    bool certificate_ok = false;
    double certificate_tolerance = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    bool trusted = false;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double gap = 0.0;
    int iterations = 0;
    double wall_time_seconds = 0.0;

    std::string to_json_string() const;
};

// Formulate, solve, extract, certify, invert. Throws when r_opt comes back
// nonpositive: the instance is feasible with r >= cos(pi/k) by construction,
// so that can only be a formulation or solver defect.
DilationReport dilation_constant(const ComplexMatrix& u1,
                                 const ComplexMatrix& u2, int k,
                                 const SolverConfig& cfg);

// Level-1 specialization: for scalars the constraints collapse to
// (r u1, r u2) in P_k x P_k, so r factorizes through the polygon's radial
// support in each coordinate. Returns c = 1/r.
double scalar_oracle(Complex u1, Complex u2, int k);

// Second opinion on the same number via a small LP over the k^2 convex
// weights (independent of both the geometry above and the SDP pipeline).
double scalar_oracle_lp(Complex u1, Complex u2, int k);

// Closed-form constants for d-tuples:
//   free_lower/free_upper: 2 sqrt(1 - 1/d) <= c(u_f, u_0) <= 2 sqrt(1 - 1/(2d))
//   c_uu_uf = d / sqrt(2d - 1)
//   cd_lower/cd_upper: sqrt(d) <= C_d <= sqrt(2d)
//   conjectured_bound = c_uu_uf * free_lower (= 2 sqrt(2/3) at d = 2)
struct TheoryBounds {
    double free_lower = 0.0;
    double free_upper = 0.0;
    double c_uu_uf = 0.0;
    double cd_lower = 0.0;
    double cd_upper = 0.0;
    double conjectured_bound = 0.0;
};
TheoryBounds theory_bounds(int d);

// sqrt(2)/cos(pi/k): the grid-corrected hypothetical limit drawn in the
// sweep and histogram plots.
double reference_line(int k);

}  // namespace dilatron
