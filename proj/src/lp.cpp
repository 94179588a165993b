#include "dilatron/lp.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace dilatron {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau simplex on max c'z, A z = b, z >= 0, with given starting basis.
// Returns false when unbounded. Bland's rule: smallest eligible index.
bool run_simplex(RealMatrix& tab, std::vector<int>& basis, int ncols) {
    const int m = static_cast<int>(tab.rows()) - 1;
    for (;;) {
        int enter = -1;
        for (int j = 0; j < ncols; ++j) {
            if (tab(m, j) > kPivotTol) {  // reduced cost row stores c_j - z_j
                enter = j;
                break;
            }
        }
        if (enter < 0) return true;
        int leave = -1;
        double best_ratio = 0.0;
        for (int i = 0; i < m; ++i) {
            const double a = tab(i, enter);
            if (a > kPivotTol) {
                const double ratio = tab(i, ncols) / a;
                if (leave < 0 || ratio < best_ratio - kPivotTol ||
                    (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
                    leave = i;
                    best_ratio = ratio;
                }
            }
        }
        if (leave < 0) return false;
        // Pivot
        tab.row(leave) /= tab(leave, enter);
        for (int i = 0; i <= m; ++i) {
            if (i == leave) continue;
            const double f = tab(i, enter);
            if (f != 0.0) tab.row(i) -= f * tab.row(leave);
        }
        basis[leave] = enter;
    }
}

}  // namespace

LpResult lp_maximize(const RealMatrix& a_in, const RealVector& b_in,
                     const RealVector& c) {
    const int m = static_cast<int>(a_in.rows());
    const int n = static_cast<int>(a_in.cols());
    if (b_in.size() != m || c.size() != n)
        throw std::invalid_argument("lp_maximize: shape mismatch");

    RealMatrix a = a_in;
    RealVector b = b_in;
    for (int i = 0; i < m; ++i) {
        if (b(i) < 0) {
            a.row(i) = -a.row(i);
            b(i) = -b(i);
        }
    }

    // Phase 1: minimize the sum of artificials == maximize -(sum).
    const int total = n + m;
    RealMatrix tab = RealMatrix::Zero(m + 1, total + 1);
    tab.topLeftCorner(m, n) = a;
    tab.block(0, n, m, m) = RealMatrix::Identity(m, m);
    tab.col(total).head(m) = b;
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) basis[i] = n + i;
    // Phase-1 objective: maximize -(sum of artificials). With the identity
    // basis the reduced cost of structural column j is the column sum.
    for (int j = 0; j < total; ++j) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += tab(i, j);
        tab(m, j) = (j < n) ? s : 0.0;
    }
    tab(m, total) = b.sum();
    run_simplex(tab, basis, total);
    double artificial_level = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[i] >= n) artificial_level += std::abs(tab(i, total));
    if (artificial_level > 1e-9) {
        LpResult r;
        r.status = LpResult::Status::infeasible;
        return r;
    }

    // Drive any artificial still in the basis out (degenerate rows).
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            int enter = -1;
            for (int j = 0; j < n; ++j) {
                if (std::abs(tab(i, j)) > kPivotTol) {
                    enter = j;
                    break;
                }
            }
            if (enter < 0) continue;  // redundant row; harmless
            tab.row(i) /= tab(i, enter);
            for (int r2 = 0; r2 <= m; ++r2) {
                if (r2 == i) continue;
                const double f = tab(r2, enter);
                if (f != 0.0) tab.row(r2) -= f * tab.row(i);
            }
            basis[i] = enter;
        }
    }

    // Phase 2 on the structural columns only.
    RealMatrix tab2 = RealMatrix::Zero(m + 1, n + 1);
    tab2.topLeftCorner(m, n) = tab.topLeftCorner(m, n);
    tab2.col(n).head(m) = tab.col(total).head(m);
    for (int j = 0; j < n; ++j) tab2(m, j) = c(j);
    tab2(m, n) = 0.0;
    // Reduce the cost row against the current basis.
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) {
            const double f = tab2(m, basis[i]);
            if (f != 0.0) tab2.row(m) -= f * tab2.row(i);
        }
    }
    const bool bounded = run_simplex(tab2, basis, n);

    LpResult r;
    if (!bounded) {
        r.status = LpResult::Status::unbounded;
        return r;
    }
    r.status = LpResult::Status::optimal;
    r.z = RealVector::Zero(n);
    for (int i = 0; i < m; ++i)
        if (basis[i] < n) r.z(basis[i]) = tab2(i, n);
    r.value = c.dot(r.z);
    return r;
}

}  // namespace dilatron
