#include "dilatron/solver.hpp"

#include <Eigen/SparseCholesky>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace dilatron {

double Residuals::worst() const {
    return std::max({primal, dual, std::abs(gap)});
}

RealVector project_cone(const RealVector& s, const ConeLayout& layout) {
    if (s.size() != layout.total_rows())
        throw std::invalid_argument("project_cone: layout mismatch");
    RealVector out(s.size());
    out.head(layout.zero_rows).setZero();
    int off = layout.zero_rows;
    for (int d : layout.psd_orders) {
        const int q = svec_dim(d);
        out.segment(off, q) = svec(psd_project(smat(s.segment(off, q))));
        off += q;
    }
    return out;
}

RealVector project_cone_parallel(const RealVector& s, const ConeLayout& layout,
                                 int threads) {
    if (s.size() != layout.total_rows())
        throw std::invalid_argument("project_cone_parallel: layout mismatch");
    const int nblocks = static_cast<int>(layout.psd_orders.size());
    threads = std::max(1, std::min(threads, nblocks));
    if (threads == 1) return project_cone(s, layout);

    RealVector out(s.size());
    out.head(layout.zero_rows).setZero();
    std::vector<int> offsets(nblocks);
    {
        int off = layout.zero_rows;
        for (int i = 0; i < nblocks; ++i) {
            offsets[i] = off;
            off += svec_dim(layout.psd_orders[i]);
        }
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&, t]() {
            for (int i = t; i < nblocks; i += threads) {
                const int q = svec_dim(layout.psd_orders[i]);
                out.segment(offsets[i], q) =
                    svec(psd_project(smat(s.segment(offsets[i], q))));
            }
        });
    }
    for (auto& th : pool) th.join();
    return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double relative_norm(const RealVector& v, const RealVector& ref) {
    const double two = v.norm() / (1.0 + ref.norm());
    const double inf =
        (v.size() ? v.cwiseAbs().maxCoeff() : 0.0) /
        (1.0 + (ref.size() ? ref.cwiseAbs().maxCoeff() : 0.0));
    return std::max(two, inf);
}

struct Scaling {
    RealVector d;  // rows
    RealVector e;  // cols
};

// Ruiz equilibration on the scaled matrix's row/column max-norms. Rows of
// one PSD block must share a factor or the scaled slack would leave the
// cone; the geometric mean of the block's row norms is used.
Scaling ruiz_equilibrate(SpMat& a, const ConeLayout& cones, int iters) {
    const int m = static_cast<int>(a.rows());
    const int n = static_cast<int>(a.cols());
    Scaling sc{RealVector::Ones(m), RealVector::Ones(n)};
    RealVector rownorm(m), colnorm(n);
    for (int pass = 0; pass < iters; ++pass) {
        rownorm.setZero();
        colnorm.setZero();
        for (int k = 0; k < a.outerSize(); ++k)
            for (SpMat::InnerIterator it(a, k); it; ++it) {
                const double v = std::abs(it.value());
                rownorm(it.row()) = std::max(rownorm(it.row()), v);
                colnorm(it.col()) = std::max(colnorm(it.col()), v);
            }
        double drift = 0.0;
        for (int i = 0; i < m; ++i)
            if (rownorm(i) > 0) drift = std::max(drift, std::abs(1.0 - rownorm(i)));
        for (int j = 0; j < n; ++j)
            if (colnorm(j) > 0) drift = std::max(drift, std::abs(1.0 - colnorm(j)));
        if (drift < 0.1) break;

        RealVector dr = RealVector::Ones(m);
        for (int i = 0; i < cones.zero_rows; ++i)
            if (rownorm(i) > 0) dr(i) = 1.0 / std::sqrt(rownorm(i));
        int off = cones.zero_rows;
        for (int d : cones.psd_orders) {
            const int q = svec_dim(d);
            double logsum = 0.0;
            int cnt = 0;
            for (int t = 0; t < q; ++t)
                if (rownorm(off + t) > 0) {
                    logsum += std::log(rownorm(off + t));
                    ++cnt;
                }
            const double g = cnt ? std::exp(logsum / cnt) : 1.0;
            const double f = (g > 0) ? 1.0 / std::sqrt(g) : 1.0;
            for (int t = 0; t < q; ++t) dr(off + t) = f;
            off += q;
        }
        RealVector de = RealVector::Ones(n);
        for (int j = 0; j < n; ++j)
            if (colnorm(j) > 0) de(j) = 1.0 / std::sqrt(colnorm(j));

        for (int k = 0; k < a.outerSize(); ++k)
            for (SpMat::InnerIterator it(a, k); it; ++it)
                it.valueRef() *= dr(it.row()) * de(it.col());
        sc.d.array() *= dr.array();
        sc.e.array() *= de.array();
    }
    return sc;
}

struct Kkt {
    SpMat mat;  // lower triangle of [[sigma I, A'], [A, -diag(1/rho)]]
    Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt;
    int n = 0, m = 0;
    bool analyzed = false;

    void build(const SpMat& a, double sigma, const RealVector& rho) {
        n = static_cast<int>(a.cols());
        m = static_cast<int>(a.rows());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(n + m + a.nonZeros());
        for (int j = 0; j < n; ++j) trip.emplace_back(j, j, sigma);
        for (int k = 0; k < a.outerSize(); ++k)
            for (SpMat::InnerIterator it(a, k); it; ++it)
                trip.emplace_back(n + static_cast<int>(it.row()),
                                  static_cast<int>(it.col()), it.value());
        for (int i = 0; i < m; ++i)
            trip.emplace_back(n + i, n + i, -1.0 / rho(i));
        mat.resize(n + m, n + m);
        mat.setFromTriplets(trip.begin(), trip.end());
        mat.makeCompressed();
        if (!analyzed) {
            ldlt.analyzePattern(mat);
            analyzed = true;
        }
        factorize();
    }

    // rho enters only through the tail diagonal; those columns hold a single
    // entry in the lower triangle, so updates are in-place.
    void update_rho(const RealVector& rho) {
        for (int i = 0; i < m; ++i) {
            const int col = n + i;
            mat.valuePtr()[mat.outerIndexPtr()[col]] = -1.0 / rho(i);
        }
        factorize();
    }

    void factorize() {
        ldlt.factorize(mat);
        if (ldlt.info() != Eigen::Success)
            throw std::runtime_error("conic solver: KKT factorization failed");
    }
};

}  // namespace

ConicSolution solve(const ConicProblem& p, const SolverConfig& cfg) {
    SolverState init;
    init.x = RealVector::Zero(p.A.cols());
    init.s = RealVector::Zero(p.A.rows());
    init.y = RealVector::Zero(p.A.rows());
    return solve(p, cfg, init);
}

ConicSolution solve(const ConicProblem& p, const SolverConfig& cfg,
                    const SolverState& init) {
    const auto t_start = std::chrono::steady_clock::now();
    const int n = static_cast<int>(p.A.cols());
    const int m = static_cast<int>(p.A.rows());
    if (p.cones.total_rows() != m || p.b.size() != m || p.c.size() != n)
        throw std::invalid_argument("solve: malformed problem");
    if (init.x.size() != n || init.s.size() != m || init.y.size() != m)
        throw std::invalid_argument("solve: initial point has wrong shape");
    if (cfg.over_relaxation <= 0.0 || cfg.over_relaxation >= 2.0)
        throw std::invalid_argument("solve: over_relaxation must be in (0,2)");
    if (cfg.tolerance <= 0.0)
        throw std::invalid_argument("solve: tolerance must be positive");

    // Scale a private copy of the data.
    SpMat a = p.A;
    Scaling sc{RealVector::Ones(m), RealVector::Ones(n)};
    if (cfg.scaling == SolverConfig::Scaling::ruiz)
        sc = ruiz_equilibrate(a, p.cones, 15);
    const RealVector bs = sc.d.asDiagonal() * p.b;
    const RealVector cs = sc.e.asDiagonal() * p.c;

    double rho = cfg.rho;
    auto rho_vector = [&](double r) {
        RealVector v = RealVector::Constant(m, r);
        v.head(p.cones.zero_rows).setConstant(r * cfg.eq_rho_scale);
        return v;
    };
    RealVector rho_vec = rho_vector(rho);

    Kkt kkt;
    kkt.build(a, cfg.sigma, rho_vec);

    const int threads = cfg.projection_threads > 0
                            ? cfg.projection_threads
                            : static_cast<int>(std::thread::hardware_concurrency());

    // Scaled iterates; the ADMM multiplier lives in the polar cone, the
    // reported dual is its negation.
    RealVector x = sc.e.cwiseInverse().asDiagonal() * init.x;
    RealVector s = sc.d.asDiagonal() * init.s;
    RealVector y = -(sc.d.cwiseInverse().asDiagonal() * init.y);
    const double alpha = cfg.over_relaxation;

    std::ofstream trace;
    if (!cfg.trace_csv.empty()) {
        trace.open(cfg.trace_csv);
        trace << "iteration,primal,dual,gap,rho\n";
    }

    ConicSolution sol;
    sol.status = SolveStatus::max_iters;

    RealVector rhs(n + m), kkt_sol(n + m), xt(n), nu(m), st(m), w(m);

    auto unscale_and_report = [&](int iter) {
        sol.x = sc.e.asDiagonal() * x;
        sol.s = sc.d.cwiseInverse().asDiagonal() * s;
        sol.y = -(sc.d.asDiagonal() * y);
        sol.iterations = iter;
        SolverState st_out{sol.x, sol.s, sol.y, iter};
        sol.residuals = residuals(p, st_out);
    };

    int next_rho_check = 2 * cfg.check_interval;
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        rhs.head(n) = cfg.sigma * x - cs;
        rhs.tail(m) = bs - s + y.cwiseQuotient(rho_vec);
        kkt_sol = kkt.ldlt.solve(rhs);
        xt = kkt_sol.head(n);
        nu = kkt_sol.tail(m);
        st = s - (nu + y).cwiseQuotient(rho_vec);
        x = alpha * xt + (1.0 - alpha) * x;
        w = alpha * st + (1.0 - alpha) * s + y.cwiseQuotient(rho_vec);
        s = (threads > 1) ? project_cone_parallel(w, p.cones, threads)
                          : project_cone(w, p.cones);
        y = rho_vec.asDiagonal() * (w - s);

        if (iter % cfg.check_interval != 0 && iter != cfg.max_iterations)
            continue;

        unscale_and_report(iter);
        const Residuals& res = sol.residuals;
        if (!std::isfinite(res.primal) || !std::isfinite(res.dual) ||
            !std::isfinite(res.gap))
            throw std::runtime_error("conic solver: iterates lost finiteness");
        if (trace.is_open())
            trace << iter << ',' << res.primal << ',' << res.dual << ','
                  << res.gap << ',' << rho << '\n';

        if (res.worst() <= cfg.tolerance) {
            sol.status = SolveStatus::solved;
            break;
        }

        // Divergence heuristic: the dilation problems are always feasible,
        // so a blow-up signals a malformed instance.
        const double magnitude =
            std::max(x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff());
        if (magnitude > 1e12 * (1.0 + bs.cwiseAbs().maxCoeff() +
                                cs.cwiseAbs().maxCoeff())) {
            sol.status = SolveStatus::infeasible_detected;
            break;
        }

        // Residual balancing with a bounded step and geometric backoff:
        // later windows are ever longer, so the update schedule cannot trap
        // the iteration in a rho limit cycle.
        if (cfg.adaptive_rho && iter >= next_rho_check &&
            iter < cfg.max_iterations) {
            next_rho_check = iter + std::max(2 * cfg.check_interval, iter / 2);
            const double pr = std::max(res.primal, 1e-16);
            const double du = std::max(res.dual, 1e-16);
            const double ratio = pr / du;
            if (ratio > 5.0 || ratio < 0.2) {
                const double factor = std::clamp(std::sqrt(ratio), 0.2, 5.0);
                const double fresh = std::clamp(rho * factor, 1e-6, 1e6);
                if (fresh != rho) {
                    rho = fresh;
                    rho_vec = rho_vector(rho);
                    kkt.update_rho(rho_vec);
                }
            }
        }
    }

    if (sol.x.size() == 0) unscale_and_report(cfg.max_iterations);
    sol.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    if (trace.is_open()) trace.flush();
    return sol;
}

Residuals residuals(const ConicProblem& p, const SolverState& state) {
    if (state.x.size() != p.A.cols() || state.s.size() != p.A.rows() ||
        state.y.size() != p.A.rows())
        throw std::invalid_argument("residuals: dimension mismatch");
    Residuals out;
    const RealVector rp =
        p.row_scales.asDiagonal() * (p.A * state.x + state.s - p.b);
    const RealVector b_orig = p.row_scales.asDiagonal() * p.b;
    out.primal = relative_norm(rp, b_orig);
    const RealVector rd = p.A.transpose() * state.y + p.c;
    out.dual = relative_norm(rd, p.c);
    const double cx = p.c.dot(state.x);
    const double by = p.b.dot(state.y);
    out.gap = std::abs(cx + by) / (1.0 + std::abs(cx) + std::abs(by));
    return out;
}

}  // namespace dilatron
