#pragma once

#include <string>

#include "dilatron/sdp.hpp"

namespace dilatron {

// First-order operator-splitting solver for the standard conic form
//     min <c,x>  s.t.  Ax + s = b,  s in K,
// with K a zero cone stacked over PSD blocks. Each iteration solves a
// quasidefinite KKT system with a factorization computed once and reused,
// projects the slack onto K (per-block PSD projections), and updates the
// dual with over-relaxation.
struct SolverConfig {
    double tolerance = 1e-4;
    int max_iterations = 100000;
    double over_relaxation = 1.5;  // in (0,2)
    enum class Scaling { none, ruiz };
    Scaling scaling = Scaling::ruiz;
    int check_interval = 25;

    // Residual trace streamed per checkpoint when non-empty:
    // iteration,primal,dual,gap,rho
    std::string trace_csv;

    // Method parameters. Fixed defaults; the iteration is deterministic
    // given (problem, config, initial point). rho is rebalanced against the
    // primal/dual residual ratio unless adaptive_rho is off.
    double rho = 0.1;
    double sigma = 1e-6;
    double eq_rho_scale = 1e3;
    bool adaptive_rho = true;
    int projection_threads = 0;  // 0 = hardware concurrency
};

struct SolverState {
    RealVector x, s, y;
    int iteration = 0;
};

struct Residuals {
    double primal = 0.0;
    double dual = 0.0;
    double gap = 0.0;

    double worst() const;
};

// Raw conic solution: y is reported in the dual-feasible convention
// (y in K*, A'y + c ~ 0, <s,y> = 0 exactly by construction).
struct ConicSolution {
    RealVector x, s, y;
    SolveStatus status = SolveStatus::max_iters;
    Residuals residuals;
    int iterations = 0;
    double wall_time_seconds = 0.0;
};

ConicSolution solve(const ConicProblem& p, const SolverConfig& cfg);
ConicSolution solve(const ConicProblem& p, const SolverConfig& cfg,
                    const SolverState& init);

// Euclidean projection onto K: zero-cone coordinates are zeroed (their duals
// absorb the remainder), PSD blocks are projected independently.
RealVector project_cone(const RealVector& s, const ConeLayout& layout);
RealVector project_cone_parallel(const RealVector& s, const ConeLayout& layout,
                                 int threads);

// Relative residuals of an iterate, reported in original constraint units
// (the row normalization recorded in row_scales is undone). primal and dual
// take the larger of the 2-norm and max-norm relative forms; gap is
// |c'x + b'y| / (1 + |c'x| + |b'y|).
Residuals residuals(const ConicProblem& p, const SolverState& state);

}  // namespace dilatron
