#pragma once

#include <utility>
#include <vector>

#include "dilatron/linalg.hpp"

namespace dilatron {

// Numerical witness for the explicit commuting-dilation construction: the
// block pair (S, T) at the chosen lambda, its worst operator norm, the
// closed-form bound it must stay under, and the commutation residual.
struct AppendixWitness {
    ComplexMatrix a, b;
    Complex lambda;
    ComplexMatrix s, t;
    double max_norm = 0.0;
    double bound = 0.0;
    double commute_residual = 0.0;
};

// S = [[A, lambda B], [B, A]] and T = [[B, A], [conj(lambda) A, B]]; these
// commute for every unimodular lambda and unitary A, B.
std::pair<ComplexMatrix, ComplexMatrix> build_s_t(const ComplexMatrix& a,
                                                  const ComplexMatrix& b,
                                                  Complex lambda);

// Shortest circular arc covering a set of angles: the complement of the
// largest gap between consecutive sorted angles. Ties on the gap width are
// broken toward the gap whose midpoint has the smallest principal angle.
struct Arc {
    double start = 0.0;   // in [0, 2*pi)
    double length = 0.0;  // in [0, 2*pi]

    bool contains(double theta, double tol = 1e-9) const;
};
Arc shortest_covering_arc(const std::vector<double>& angles);

// lambda = -exp(i * midpoint) of the shortest arc covering the spectrum of
// (B*A)^2. With at most n distinct eigenvalues the arc has length at most
// 2*pi*(1 - 1/n), which drives the norm bound.
Complex optimal_lambda(const ComplexMatrix& a, const ComplexMatrix& b);

// Builds (S, T) at the optimal lambda and checks, hard-failing on violation:
// commutation, max{||S||, ||T||} <= sqrt(2 + 2 sin(pi/2 (1 - 1/n))), and the
// intermediate estimate ||S||^2 <= 2 + ||lambda I + (B*A)^2||.
AppendixWitness verify_theorem(const ComplexMatrix& a, const ComplexMatrix& b);

// [[A, sqrt(I-AA*)], [sqrt(I-A*A), -A*]] for a contraction A; unitary with
// the top-left corner equal to A. Defect eigenvalues inside a small
// dead-band around zero are flushed to zero before the square root so that
// unitary inputs produce exactly vanishing defect blocks.
ComplexMatrix unitary_dilation_2n(const ComplexMatrix& a);

// sqrt(2 + 2 sin(pi/2 (1 - 1/(2n)))): the bound with n x n contractions
// routed through their 2n x 2n unitary dilations. Strictly below 2.
double c2n_bound(int n);

// Full pipeline for a contraction pair: lift both to 2n x 2n unitaries, run
// the theorem verification on the lifted pair, and check that the corners of
// the commuting 4n x 4n pair reproduce the inputs.
AppendixWitness end_to_end_contraction_dilation(const ComplexMatrix& a,
                                                const ComplexMatrix& b);

}  // namespace dilatron
