#pragma once

#include "dilatron/linalg.hpp"

namespace dilatron {

// Dense two-phase simplex for small equality-form programs:
//     maximize c'z   subject to  A z = b,  z >= 0.
// Bland's rule throughout, so it cannot cycle. Meant for oracle-sized
// problems (a few hundred variables), where it is exact to round-off.
struct LpResult {
    enum class Status { optimal, infeasible, unbounded };
    Status status = Status::infeasible;
    double value = 0.0;
    RealVector z;
};

LpResult lp_maximize(const RealMatrix& a, const RealVector& b,
                     const RealVector& c);

}  // namespace dilatron
