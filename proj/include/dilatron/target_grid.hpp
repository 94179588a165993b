#pragma once

#include <utility>
#include <vector>

#include "dilatron/linalg.hpp"

namespace dilatron {

// The k-th roots of unity exp(2*pi*i*m/k), m = 0..k-1. Requires k >= 3; the
// polygon degenerates below that.
std::vector<Complex> vertices(int k);

// Inradius of the regular k-gon: cos(pi/k). The bracket
// cos(pi/k) * c(U,N) <= c(U,u0) <= c(U,N) hangs off this number.
double polygon_correction(int k);

// Largest t such that t*exp(i*theta) stays inside the k-gon (radial support).
double polygon_radius(int k, double theta);

// The k^2 diagonal eigenvalue pairs (a_j, b_j) defining the commuting normal
// target pair. Ordering is fixed: row-major over V_k x V_k with the first
// coordinate varying slowest, so pair j = (m1*k + m2) is
// (exp(2*pi*i*m1/k), exp(2*pi*i*m2/k)). Serialized results carry the tag
// "row-major-v1" for this ordering.
struct GridTarget {
    int k = 0;
    std::vector<std::pair<Complex, Complex>> pairs;

    // Relabeled copy (pairs[perm[j]] at position j). The SDP is symmetric
    // under relabeling; solves over a permuted grid must give the same
    // optimum, and tests exercise exactly that.
    GridTarget permuted(const std::vector<int>& perm) const;
};

GridTarget build_grid(int k);

inline const char* kGridOrderingTag = "row-major-v1";

}  // namespace dilatron
