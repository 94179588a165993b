#include "dilatron/dilation.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "dilatron/lp.hpp"
#include "dilatron/target_grid.hpp"

namespace dilatron {

std::string DilationReport::to_json_string() const {
    nlohmann::json j;
    j["c"] = c_value;
    j["r"] = r_opt;
    j["k"] = k;
    j["n"] = n;
    j["bracket"] = {bracket_lower, bracket_upper};
    j["certificate"] = {{"min_block_eig", certificate.min_block_eig},
                        {"unital_residual", certificate.unital_residual},
                        {"image1_residual", certificate.image1_residual},
                        {"image2_residual", certificate.image2_residual},
                        {"tolerance", certificate_tolerance},
                        {"pass", certificate_ok}};
    j["status"] = to_string(status);
    j["trusted"] = trusted;
    j["primal_residual"] = primal_residual;
    j["dual_residual"] = dual_residual;
    j["gap"] = gap;
    j["iterations"] = iterations;
    j["wall_time_seconds"] = wall_time_seconds;
    j["grid_ordering"] = kGridOrderingTag;
    return j.dump(2);
}

DilationReport dilation_constant(const ComplexMatrix& u1,
                                 const ComplexMatrix& u2, int k,
                                 const SolverConfig& cfg) {
    const GridTarget grid = build_grid(k);
    const DilationSDP sdp = formulate(u1, u2, grid);
    const ConicProblem problem = to_conic(sdp);
    const ConicSolution solution = solve(problem, cfg);
    SolveResult result = extract(sdp, solution.x);

    DilationReport rep;
    rep.k = k;
    rep.n = sdp.n;
    rep.r_opt = result.r_opt;
    rep.status = solution.status;
    rep.trusted = solution.status == SolveStatus::solved;
    rep.primal_residual = solution.residuals.primal;
    rep.dual_residual = solution.residuals.dual;
    rep.gap = solution.residuals.gap;
    rep.iterations = solution.iterations;
    rep.wall_time_seconds = solution.wall_time_seconds;

    if (result.r_opt <= 0.0) {
        // The instance is feasible with r >= cos(pi/k); a converged solve
        // returning nonpositive r can only be a formulation defect. An
        // unconverged iterate is just not there yet: surface it untrusted.
        if (solution.status == SolveStatus::solved)
            throw std::runtime_error(
                "dilation_constant: nonpositive r on a feasible instance "
                "(formulation defect)");
        rep.c_value = std::numeric_limits<double>::quiet_NaN();
        rep.bracket_lower = rep.bracket_upper = rep.c_value;
        rep.certificate_tolerance =
            default_tolerances().certificate_factor * cfg.tolerance;
        return rep;
    }

    rep.c_value = 1.0 / result.r_opt;
    rep.bracket_lower = polygon_correction(k) * rep.c_value;
    rep.bracket_upper = rep.c_value;
    rep.certificate = check_certificate(sdp, result.r_opt, result.blocks);
    rep.certificate_tolerance =
        default_tolerances().certificate_factor * cfg.tolerance;
    rep.certificate_ok = rep.certificate.pass(rep.certificate_tolerance);
    return rep;
}

double scalar_oracle(Complex u1, Complex u2, int k) {
    if (std::abs(std::abs(u1) - 1.0) > 1e-12 ||
        std::abs(std::abs(u2) - 1.0) > 1e-12)
        throw std::invalid_argument("scalar_oracle: inputs must be unimodular");
    const double r1 = polygon_radius(k, std::arg(u1));
    const double r2 = polygon_radius(k, std::arg(u2));
    return 1.0 / std::min(r1, r2);
}

double scalar_oracle_lp(Complex u1, Complex u2, int k) {
    if (std::abs(std::abs(u1) - 1.0) > 1e-12 ||
        std::abs(std::abs(u2) - 1.0) > 1e-12)
        throw std::invalid_argument("scalar_oracle_lp: inputs must be unimodular");
    const GridTarget grid = build_grid(k);
    const int k2 = static_cast<int>(grid.pairs.size());
    // Variables: k^2 convex weights, then r. Rows: the two complex image
    // equations (split) and the weight normalization.
    RealMatrix a = RealMatrix::Zero(5, k2 + 1);
    RealVector b = RealVector::Zero(5);
    RealVector c = RealVector::Zero(k2 + 1);
    for (int j = 0; j < k2; ++j) {
        a(0, j) = grid.pairs[j].first.real();
        a(1, j) = grid.pairs[j].first.imag();
        a(2, j) = grid.pairs[j].second.real();
        a(3, j) = grid.pairs[j].second.imag();
        a(4, j) = 1.0;
    }
    a(0, k2) = -u1.real();
    a(1, k2) = -u1.imag();
    a(2, k2) = -u2.real();
    a(3, k2) = -u2.imag();
    b(4) = 1.0;
    c(k2) = 1.0;
    const LpResult lp = lp_maximize(a, b, c);
    if (lp.status != LpResult::Status::optimal)
        throw std::runtime_error("scalar_oracle_lp: LP did not solve");
    if (lp.value <= 0.0)
        throw std::runtime_error("scalar_oracle_lp: nonpositive optimum");
    return 1.0 / lp.value;
}

TheoryBounds theory_bounds(int d) {
    if (d < 1) throw std::invalid_argument("theory_bounds: d must be >= 1");
    const double dd = static_cast<double>(d);
    TheoryBounds t;
    t.free_lower = 2.0 * std::sqrt(1.0 - 1.0 / dd);
    t.free_upper = 2.0 * std::sqrt(1.0 - 1.0 / (2.0 * dd));
    t.c_uu_uf = dd / std::sqrt(2.0 * dd - 1.0);
    t.cd_lower = std::sqrt(dd);
    t.cd_upper = std::sqrt(2.0 * dd);
    t.conjectured_bound = t.c_uu_uf * t.free_lower;
    return t;
}

double reference_line(int k) {
    return std::numbers::sqrt2 / polygon_correction(k);
}

}  // namespace dilatron
