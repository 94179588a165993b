// Acceptance suite: end-to-end checks of the full pipeline at pinned
// tolerances, one pass/fail line per criterion.
//
//   acceptance                 runs every criterion
//   acceptance --criterion N   runs a single criterion
//
// Exit code 0 iff everything that ran passed.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <string>
#include <vector>

#include "dilatron/appendix.hpp"
#include "dilatron/dilation.hpp"
#include "dilatron/ensembles.hpp"
#include "dilatron/experiment.hpp"

namespace {

using namespace dilatron;

struct SolvedEntry {
    int n = 0;
    int k = 0;
    double c = 0.0;
    bool certificate_ok = false;
};

struct Context {
    std::vector<SolvedEntry> solved;
    int checks = 0;
    int failures = 0;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failures;
            std::printf("    FAILED: %s\n", what.c_str());
            std::fflush(stdout);
        }
    }

    void note_records(const std::vector<TrialRecord>& records) {
        for (const TrialRecord& r : records)
            if (r.status == SolveStatus::solved)
                solved.push_back({r.n, r.k, r.c_value, r.certificate_ok});
    }

    void note_report(int n, int k, const DilationReport& rep) {
        if (rep.status == SolveStatus::solved)
            solved.push_back({n, k, rep.c_value, rep.certificate_ok});
    }
};

ComplexMatrix scalar(Complex z) {
    ComplexMatrix m(1, 1);
    m(0, 0) = z;
    return m;
}

std::vector<TrialRecord> batch(int n, int k, int trials, std::uint64_t seed,
                               double tol) {
    ExperimentConfig cfg;
    cfg.n_values = {n};
    cfg.k = k;
    cfg.trials = trials;
    cfg.master_seed = seed;
    cfg.solver.tolerance = tol;
    return run_batch(cfg);
}

// ---------------------------------------------------------------------------
// 1. Scalar-oracle equivalence at solver tolerance 1e-4.
void criterion1(Context& ctx) {
    SolverConfig cfg;
    cfg.tolerance = 1e-4;
    CounterRng rng(101);
    double worst = 0.0;
    for (int k : {4, 8, 12}) {
        for (int trial = 0; trial < 50; ++trial) {
            const Complex u1 =
                std::polar(1.0, 2 * std::numbers::pi * rng.next_double());
            const Complex u2 =
                std::polar(1.0, 2 * std::numbers::pi * rng.next_double());
            const DilationReport rep =
                dilation_constant(scalar(u1), scalar(u2), k, cfg);
            ctx.note_report(1, k, rep);
            ctx.expect(rep.status == SolveStatus::solved,
                       "scalar instance not solved");
            const double diff = std::abs(rep.c_value - scalar_oracle(u1, u2, k));
            worst = std::max(worst, diff);
            ctx.expect(diff <= 2e-3, "oracle gap " + std::to_string(diff) +
                                         " at k=" + std::to_string(k));
        }
    }
    std::printf("    worst |c_sdp - c_oracle| = %.3e over 150 pairs\n", worst);
}

// ---------------------------------------------------------------------------
// 2. Desk-scale reproduction of the k=8 clustering.
void criterion2(Context& ctx) {
    const std::vector<TrialRecord> n50 = batch(50, 8, 20, 20, 1e-4);
    ctx.note_records(n50);
    double sum = 0.0;
    int solved = 0;
    for (const TrialRecord& r : n50) {
        ctx.expect(r.status == SolveStatus::solved, "N=50 trial not solved");
        if (r.status == SolveStatus::solved) {
            ++solved;
            sum += r.c_value;
        }
    }
    const std::vector<SummaryRow> rows = summarize(n50);
    ctx.expect(solved == 20, "expected 20 solved N=50 trials");
    ctx.expect(rows[0].mean_c >= 1.38 && rows[0].mean_c <= 1.50,
               "N=50 mean_c " + std::to_string(rows[0].mean_c) +
                   " outside [1.38, 1.50]");
    ctx.expect(rows[0].std_c <= 0.03,
               "N=50 std_c " + std::to_string(rows[0].std_c) + " > 0.03");
    std::printf("    N=50,k=8: mean=%.4f std=%.4f (20 trials)\n", rows[0].mean_c,
                rows[0].std_c);

    const std::vector<TrialRecord> n125 = batch(125, 8, 5, 125, 1e-4);
    ctx.note_records(n125);
    for (const TrialRecord& r : n125) {
        ctx.expect(r.status == SolveStatus::solved, "N=125 trial not solved");
        ctx.expect(std::abs(r.c_value - 1.439) <= 0.02,
                   "N=125 c=" + std::to_string(r.c_value) +
                       " further than 0.02 from 1.439");
        std::printf("    N=125,k=8: c=%.4f (trial %d, %d iters, %.0fs)\n",
                    r.c_value, r.trial_index, r.iterations,
                    r.wall_time_seconds);
    }
}

// ---------------------------------------------------------------------------
// 3. Reference-line bound for every solved trial with N >= 40, k in {8, 20}.
void criterion3(Context& ctx) {
    bool have_k8 = false;
    for (const SolvedEntry& e : ctx.solved)
        have_k8 = have_k8 || (e.k == 8 && e.n >= 40);
    if (!have_k8) {
        ctx.note_records(batch(50, 8, 1, 20, 1e-4));
        ctx.note_records(batch(40, 8, 1, 40, 1e-4));
    }
    for (int n : {40, 55}) {
        const std::vector<TrialRecord> k20 = batch(n, 20, 1, 300 + n, 1e-4);
        ctx.note_records(k20);
        for (const TrialRecord& r : k20) {
            ctx.expect(r.status == SolveStatus::solved,
                       "k=20 trial not solved");
            std::printf("    N=%d,k=20: c=%.5f (limit %.5f, %d iters, %.0fs)\n",
                        r.n, r.c_value, reference_line(20), r.iterations,
                        r.wall_time_seconds);
        }
    }
    int considered = 0;
    for (const SolvedEntry& e : ctx.solved) {
        if (e.n < 40 || (e.k != 8 && e.k != 20)) continue;
        ++considered;
        ctx.expect(e.c < reference_line(e.k),
                   "c=" + std::to_string(e.c) + " at N=" + std::to_string(e.n) +
                       ",k=" + std::to_string(e.k) + " is not below " +
                       std::to_string(reference_line(e.k)));
    }
    ctx.expect(considered > 0, "no trials with N >= 40 available");
    std::printf("    %d solved trials with N >= 40 checked\n", considered);
}

// ---------------------------------------------------------------------------
// 4. Certificate validity for 100% of solved runs.
void criterion4(Context& ctx) {
    if (ctx.solved.empty()) ctx.note_records(batch(10, 8, 3, 4, 1e-4));
    int checked = 0;
    for (const SolvedEntry& e : ctx.solved) {
        ++checked;
        ctx.expect(e.certificate_ok,
                   "certificate failed at N=" + std::to_string(e.n) + ",k=" +
                       std::to_string(e.k));
    }
    ctx.expect(checked > 0, "no solved runs to certify");
    std::printf("    %d solved runs, all certified\n", checked);
}

// ---------------------------------------------------------------------------
// 5. Two-run agreement at tolerance 1e-6 from different starting points.
void criterion5(Context& ctx) {
    struct Instance {
        int n, k;
    };
    for (const Instance inst :
         {Instance{10, 8}, Instance{20, 10}, Instance{30, 14},
          Instance{35, 14}}) {
        const auto [u1, u2] =
            sample_haar_pair(inst.n, 500 + inst.n);
        const DilationSDP sdp = formulate(u1, u2, build_grid(inst.k));
        const ConicProblem prob = to_conic(sdp);
        SolverConfig cfg;
        cfg.tolerance = 1e-6;
        const ConicSolution cold = solve(prob, cfg);
        ctx.expect(cold.status == SolveStatus::solved, "cold run not solved");

        CounterRng rng(777 + inst.n);
        SolverState init;
        init.x = RealVector::Zero(prob.A.cols());
        init.s = RealVector::Zero(prob.A.rows());
        init.y = RealVector::Zero(prob.A.rows());
        for (int i = 0; i < init.x.size(); ++i) init.x(i) = rng.next_gaussian();
        for (int i = 0; i < init.s.size(); ++i) init.s(i) = rng.next_gaussian();
        for (int i = 0; i < init.y.size(); ++i) init.y(i) = rng.next_gaussian();
        const ConicSolution warm = solve(prob, cfg, init);
        ctx.expect(warm.status == SolveStatus::solved, "restarted run not solved");

        const SolveResult a = extract(sdp, cold.x);
        const SolveResult b = extract(sdp, warm.x);
        const double ca = 1.0 / a.r_opt;
        const double cb = 1.0 / b.r_opt;
        const CertificateReport cert = check_certificate(sdp, a.r_opt, a.blocks);
        ctx.solved.push_back({inst.n, inst.k, ca, cert.pass(1e-3)});
        ctx.expect(std::abs(ca - cb) <= 1e-3,
                   "two-run disagreement " + std::to_string(std::abs(ca - cb)) +
                       " at N=" + std::to_string(inst.n));
        std::printf("    N=%d,k=%d: |c1-c2| = %.2e\n", inst.n, inst.k,
                    std::abs(ca - cb));
    }
}

// ---------------------------------------------------------------------------
// 6. Appendix theorem: 100 Haar pairs per n in 1..20.
void criterion6(Context& ctx) {
    double worst_commute = 0.0;
    double worst_slack = -10.0;
    for (int n = 1; n <= 20; ++n) {
        for (int trial = 0; trial < 100; ++trial) {
            const auto [a, b] = sample_haar_pair(n, trial_seed(600, n, trial));
            try {
                const AppendixWitness w = verify_theorem(a, b);
                worst_commute = std::max(worst_commute, w.commute_residual);
                worst_slack = std::max(worst_slack, w.max_norm - w.bound);
                ctx.expect(w.commute_residual <= 1e-10, "commutation residual");
                ctx.expect(w.max_norm <= w.bound + 1e-9, "norm bound");
            } catch (const std::exception& e) {
                ctx.expect(false, std::string("verify_theorem threw: ") + e.what());
            }
        }
    }
    const ComplexMatrix one = ComplexMatrix::Identity(1, 1);
    const AppendixWitness w1 = verify_theorem(one, one);
    ctx.expect(std::abs(w1.max_norm - w1.bound) <= 1e-9,
               "n=1 equality case is not tight");
    std::printf("    worst commute %.2e, worst norm slack %.2e\n", worst_commute,
                worst_slack);
}

// ---------------------------------------------------------------------------
// 7. Corollary pipeline: 50 contraction pairs per n in 1..10.
void criterion7(Context& ctx) {
    double worst_unitarity = 0.0, worst_corner = 0.0;
    for (int n = 1; n <= 10; ++n) {
        ctx.expect(c2n_bound(n) < 2.0, "c2n bound not below 2");
        for (int trial = 0; trial < 50; ++trial) {
            const std::uint64_t seed = trial_seed(700, n, trial);
            const ComplexMatrix a = sample_contraction(n, split_seed(seed, 0));
            const ComplexMatrix b = sample_contraction(n, split_seed(seed, 1));
            try {
                const ComplexMatrix la = unitary_dilation_2n(a);
                const ComplexMatrix lb = unitary_dilation_2n(b);
                worst_unitarity = std::max({worst_unitarity,
                                            unitarity_residual(la),
                                            unitarity_residual(lb)});
                ctx.expect(unitarity_residual(la) <= 1e-9 &&
                               unitarity_residual(lb) <= 1e-9,
                           "lifting not unitary to 1e-9");
                const AppendixWitness w = end_to_end_contraction_dilation(a, b);
                ctx.expect(w.commute_residual <= 1e-10,
                           "4n pair commutation residual");
                const double corner = std::max(
                    max_abs(ComplexMatrix(w.s.topLeftCorner(n, n) - a)),
                    max_abs(ComplexMatrix(w.t.topLeftCorner(n, n) - b)));
                worst_corner = std::max(worst_corner, corner);
                ctx.expect(corner <= 1e-12, "corner compression residual");
                ctx.expect(w.max_norm <= c2n_bound(n) + 1e-9,
                           "corollary norm bound");
            } catch (const std::exception& e) {
                ctx.expect(false, std::string("pipeline threw: ") + e.what());
            }
        }
    }
    std::printf("    worst lifting unitarity %.2e, worst corner %.2e\n",
                worst_unitarity, worst_corner);
}

// ---------------------------------------------------------------------------
// 8. Structural invariants of the SDP pipeline.
void criterion8(Context& ctx) {
    SolverConfig cfg;
    cfg.tolerance = 1e-4;

    // Contractivity floor.
    if (ctx.solved.empty()) ctx.note_records(batch(8, 8, 2, 8, 1e-4));
    for (const SolvedEntry& e : ctx.solved)
        ctx.expect(e.c >= 1.0 - 1e-3, "c below the UCP floor");

    // Unitary-conjugation invariance.
    {
        const auto [u1, u2] = sample_haar_pair(10, 808);
        const DilationReport base = dilation_constant(u1, u2, 8, cfg);
        const ComplexMatrix v = sample_haar_unitary(
            EnsembleSpec{EnsembleKind::haar_unitary, 10, 888});
        const DilationReport conj = dilation_constant(
            ComplexMatrix(v.adjoint() * u1 * v),
            ComplexMatrix(v.adjoint() * u2 * v), 8, cfg);
        ctx.note_report(10, 8, base);
        ctx.note_report(10, 8, conj);
        ctx.expect(std::abs(base.c_value - conj.c_value) <= 2e-3,
                   "conjugation shift " +
                       std::to_string(std::abs(base.c_value - conj.c_value)));
        std::printf("    conjugation shift %.2e\n",
                    std::abs(base.c_value - conj.c_value));
    }

    // Grid refinement monotonicity along k=4 | k=8 | k=16.
    {
        const auto [u1, u2] = sample_haar_pair(8, 816);
        const DilationReport c4 = dilation_constant(u1, u2, 4, cfg);
        const DilationReport c8 = dilation_constant(u1, u2, 8, cfg);
        const DilationReport c16 = dilation_constant(u1, u2, 16, cfg);
        ctx.note_report(8, 4, c4);
        ctx.note_report(8, 8, c8);
        ctx.note_report(8, 16, c16);
        ctx.expect(c8.c_value <= c4.c_value + 2e-3, "refinement k=4 -> k=8");
        ctx.expect(c16.c_value <= c8.c_value + 2e-3, "refinement k=8 -> k=16");
        std::printf("    c(k=4)=%.4f c(k=8)=%.4f c(k=16)=%.4f\n", c4.c_value,
                    c8.c_value, c16.c_value);
    }

    // Grid relabeling is an exact symmetry.
    {
        const auto [u1, u2] = sample_haar_pair(5, 824);
        const GridTarget grid = build_grid(5);
        std::vector<int> perm(25);
        for (int i = 0; i < 25; ++i) perm[i] = (7 * i + 3) % 25;
        const DilationSDP sdp = formulate(u1, u2, grid);
        const DilationSDP sdp_perm = formulate(u1, u2, grid.permuted(perm));
        const ConicSolution a = solve(to_conic(sdp), cfg);
        const ConicSolution b = solve(to_conic(sdp_perm), cfg);
        const double ra = extract(sdp, a.x).r_opt;
        const double rb = extract(sdp_perm, b.x).r_opt;
        const double shift = std::abs(1.0 / ra - 1.0 / rb);
        ctx.expect(shift <= cfg.tolerance, "relabel shift " + std::to_string(shift));
        std::printf("    relabel shift %.2e\n", shift);
    }
}

// ---------------------------------------------------------------------------
// 9. Theory-bounds calculator at d=2.
void criterion9(Context& ctx) {
    const TheoryBounds t = theory_bounds(2);
    ctx.expect(std::abs(t.free_lower - std::sqrt(2.0)) <= 1e-12, "free_lower");
    ctx.expect(std::abs(t.free_upper - std::sqrt(3.0)) <= 1e-12, "free_upper");
    ctx.expect(std::abs(t.c_uu_uf - 2.0 / std::sqrt(3.0)) <= 1e-12, "c_uu_uf");
    ctx.expect(std::abs(t.conjectured_bound - 2.0 * std::sqrt(2.0 / 3.0)) <=
                   1e-12,
               "conjectured bound");
    ctx.expect(t.conjectured_bound < 2.0, "bound below 2");
    std::printf("    free in [%.12f, %.12f], c_uu_uf=%.12f, bound=%.12f\n",
                t.free_lower, t.free_upper, t.c_uu_uf, t.conjectured_bound);
}

using CriterionFn = void (*)(Context&);

struct Criterion {
    int id;
    const char* text;
    CriterionFn fn;
};

const Criterion kCriteria[] = {
    {1, "scalar-oracle equivalence (|c_sdp - c_oracle| <= 2e-3)", criterion1},
    {2, "desk-scale k=8 clustering (N=50 mean/std, N=125 near 1.439)",
     criterion2},
    {3, "reference-line bound c < sqrt(2)/cos(pi/k) for N >= 40", criterion3},
    {4, "feasibility certificate on 100% of solved runs", criterion4},
    {5, "two-run agreement at tol 1e-6 within 1e-3", criterion5},
    {6, "appendix theorem bound over 100 Haar pairs per n <= 20", criterion6},
    {7, "corollary contraction pipeline per n <= 10", criterion7},
    {8, "structural invariants (floor, conjugation, refinement, relabel)",
     criterion8},
    {9, "theory-bounds calculator exact values", criterion9},
};

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    Context ctx;
    int failed_criteria = 0;
    for (const Criterion& c : kCriteria) {
        if (only != 0 && c.id != only) continue;
        std::printf("criterion %d: %s\n", c.id, c.text);
        std::fflush(stdout);
        const int before = ctx.failures;
        try {
            c.fn(ctx);
        } catch (const std::exception& e) {
            ctx.expect(false, std::string("unhandled exception: ") + e.what());
        }
        const bool ok = ctx.failures == before;
        if (!ok) ++failed_criteria;
        std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", c.id,
                    c.text);
        std::fflush(stdout);
    }
    if (failed_criteria == 0) {
        std::printf("all criteria passed (%d checks)\n", ctx.checks);
        return 0;
    }
    std::printf("%d criteria failed\n", failed_criteria);
    return 1;
}
