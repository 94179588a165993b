#pragma once

namespace dilatron {

// Every numerical tolerance used across the library, in one place.
// Individual operations take these as defaults; tests pin them explicitly.
struct Tolerances {
    double unitarity = 1e-10;        // ||U*U - I||_max for anything claimed unitary
    double hermiticity = 1e-10;      // ||M - M*||_max gate for Hermitian-only routines
    double eig = 1e-9;               // eigendecomposition reconstruction residual
    double psd_fixed_point = 1e-10;  // PSD projection idempotence / fixed-point slack
    double embed = 1e-10;            // real-embedding homomorphism checks
    double commute = 1e-10;          // commutation residual for the dilation pair
    double appendix_bound_slack = 1e-9;
    double solver_default = 1e-4;    // conic solver termination (relative residuals)
    double certificate_factor = 10.0;  // feasibility certificate = factor x solver tol
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

}  // namespace dilatron
