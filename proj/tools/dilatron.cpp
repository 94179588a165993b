// Experiment runner: batches of dilation-constant trials over (N, k),
// single-shot sweeps, the explicit-dilation verification batch, and the
// closed-form bound calculator.
//
// Exit codes: 0 success, 2 configuration error, 3 hard certificate or bound
// violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dilatron/dilation.hpp"
#include "dilatron/ensembles.hpp"
#include "dilatron/experiment.hpp"
#include "dilatron/plots.hpp"

namespace {

using namespace dilatron;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

void load_solver_config(const std::string& path, SolverConfig& cfg) {
    std::ifstream in(path);
    if (!in) throw CLI::ValidationError("--solver-config", "cannot open " + path);
    nlohmann::json j;
    in >> j;
    cfg.tolerance = j.value("tolerance", cfg.tolerance);
    cfg.max_iterations = j.value("max_iterations", cfg.max_iterations);
    cfg.over_relaxation = j.value("over_relaxation", cfg.over_relaxation);
    cfg.check_interval = j.value("check_interval", cfg.check_interval);
    cfg.rho = j.value("rho", cfg.rho);
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.eq_rho_scale = j.value("eq_rho_scale", cfg.eq_rho_scale);
    cfg.adaptive_rho = j.value("adaptive_rho", cfg.adaptive_rho);
    cfg.projection_threads = j.value("projection_threads", cfg.projection_threads);
    const std::string scaling = j.value("scaling", std::string("ruiz"));
    if (scaling == "ruiz")
        cfg.scaling = SolverConfig::Scaling::ruiz;
    else if (scaling == "none")
        cfg.scaling = SolverConfig::Scaling::none;
    else
        throw CLI::ValidationError("--solver-config", "unknown scaling " + scaling);
}

std::vector<int> parse_range(const std::string& spec) {
    const auto dots = spec.find("..");
    std::vector<int> out;
    if (dots == std::string::npos) {
        out.push_back(std::stoi(spec));
        return out;
    }
    const int lo = std::stoi(spec.substr(0, dots));
    const int hi = std::stoi(spec.substr(dots + 2));
    if (lo < 1 || hi < lo)
        throw CLI::ValidationError("--n", "bad range " + spec);
    for (int n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

int finish_records(const std::vector<TrialRecord>& records,
                   const std::string& out_dir) {
    const std::vector<SummaryRow> rows = summarize(records);
    if (!out_dir.empty()) emit_plots(records, rows, out_dir);
    std::printf("%-6s %-4s %-8s %-12s %-12s %-12s %-12s\n", "n", "k", "solved",
                "mean_c", "std_c", "min_c", "max_c");
    for (const SummaryRow& r : rows)
        std::printf("%-6d %-4d %3d/%-4d %-12.6f %-12.6f %-12.6f %-12.6f\n",
                    r.n, r.k, r.count_solved, r.count_total, r.mean_c, r.std_c,
                    r.min_c, r.max_c);
    for (const TrialRecord& r : records) {
        if (r.status == SolveStatus::solved && !r.certificate_ok) {
            std::fprintf(stderr,
                         "certificate violation: n=%d k=%d trial=%d\n", r.n,
                         r.k, r.trial_index);
            return kExitViolation;
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dilation-constant experiments"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string solver_config_path;
    std::string n_spec;
    int n_start = 25, n_step = 25, n_end = 300;
    int single_n = 0;
    std::string dump_sdp, trace_csv;
    int bounds_d = 2;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--tol", cfg.solver.tolerance, "solver tolerance");
        cmd->add_option("--max-iters", cfg.solver.max_iterations,
                        "iteration cap");
        cmd->add_option("--solver-config", solver_config_path,
                        "JSON file with solver settings (flags override it)");
    };

    CLI::App* run = app.add_subcommand("run", "batch of random-unitary trials");
    run->add_option("--n", cfg.n_values, "matrix sizes")
        ->required()
        ->delimiter(',');
    run->add_option("--k", cfg.k, "grid size");
    run->add_option("--trials", cfg.trials, "trials per N");
    run->add_option("--seed", cfg.master_seed, "master seed");
    run->add_option("--out", cfg.out_dir, "output directory");
    run->add_option("--workers", cfg.workers, "concurrent trials (0=auto)");
    add_solver_flags(run);

    CLI::App* sweep = app.add_subcommand("sweep", "single-shot sweep over N");
    sweep->add_option("--n-start", n_start, "first N")->required();
    sweep->add_option("--n-step", n_step, "N increment");
    sweep->add_option("--n-end", n_end, "last N")->required();
    sweep->add_option("--k", cfg.k, "grid size");
    sweep->add_option("--seed", cfg.master_seed, "master seed");
    sweep->add_option("--out", cfg.out_dir, "output directory");
    sweep->add_flag("--traces", cfg.keep_traces, "keep per-run residual traces");
    add_solver_flags(sweep);

    CLI::App* single = app.add_subcommand("single", "one instance, full report");
    single->add_option("--n", single_n, "matrix size")->required();
    single->add_option("--k", cfg.k, "grid size");
    single->add_option("--seed", cfg.master_seed, "seed");
    single->add_option("--dump-sdp", dump_sdp, "write the conic problem JSON");
    single->add_option("--trace", trace_csv, "write residual trace CSV");
    add_solver_flags(single);

    CLI::App* appendix =
        app.add_subcommand("appendix", "verify the explicit dilation bounds");
    appendix->add_option("--n", n_spec, "size or range, e.g. 1..20")->required();
    appendix->add_option("--trials", cfg.trials, "trials per n");
    appendix->add_option("--seed", cfg.master_seed, "master seed");
    appendix->add_option("--out", cfg.out_dir, "report JSON path");

    CLI::App* bounds =
        app.add_subcommand("bounds", "closed-form theoretical constants");
    bounds->add_option("--d", bounds_d, "tuple length");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (!solver_config_path.empty()) {
            // Flags override the file: load the file, then keep any value
            // that was given explicitly on the command line.
            SolverConfig merged;
            load_solver_config(solver_config_path, merged);
            CLI::App* active = app.get_subcommands().front();
            const CLI::Option* tol = active->get_option_no_throw("--tol");
            if (tol != nullptr && tol->count() > 0)
                merged.tolerance = cfg.solver.tolerance;
            const CLI::Option* mi = active->get_option_no_throw("--max-iters");
            if (mi != nullptr && mi->count() > 0)
                merged.max_iterations = cfg.solver.max_iterations;
            merged.trace_csv = cfg.solver.trace_csv;
            cfg.solver = merged;
        }

        if (run->parsed()) {
            cfg.mode = RunMode::batch;
            return finish_records(run_batch(cfg), cfg.out_dir);
        }
        if (sweep->parsed()) {
            cfg.mode = RunMode::single_shot_sweep;
            if (n_step < 1)
                throw std::invalid_argument("sweep: --n-step must be >= 1");
            cfg.n_values.clear();
            for (int n = n_start; n <= n_end; n += n_step)
                cfg.n_values.push_back(n);
            return finish_records(single_shot_sweep(cfg), cfg.out_dir);
        }
        if (single->parsed()) {
            cfg.solver.trace_csv = trace_csv;
            const std::uint64_t seed = trial_seed(cfg.master_seed, single_n, 0);
            const auto [u1, u2] = sample_haar_pair(single_n, seed);
            if (!dump_sdp.empty()) {
                const DilationSDP sdp = formulate(u1, u2, build_grid(cfg.k));
                save_conic_json(to_conic(sdp), &sdp, dump_sdp);
            }
            const DilationReport rep =
                dilation_constant(u1, u2, cfg.k, cfg.solver);
            std::cout << rep.to_json_string() << "\n";
            if (rep.status == SolveStatus::solved && !rep.certificate_ok)
                return kExitViolation;
            return kExitOk;
        }
        if (appendix->parsed()) {
            cfg.mode = RunMode::appendix_verify;
            cfg.n_values = parse_range(n_spec);
            const std::vector<AppendixBatchRow> rows =
                run_appendix_verification(cfg);
            if (!cfg.out_dir.empty())
                write_appendix_report(cfg.out_dir, rows, cfg);
            bool all = true;
            for (const AppendixBatchRow& r : rows) {
                std::printf(
                    "n=%-3d commute<=%.2e norm_slack<=%.2e corner<=%.2e %s\n",
                    r.n, std::max(r.theorem_max_commute, r.corollary_max_commute),
                    std::max(r.theorem_max_norm_slack, r.corollary_max_norm_slack),
                    r.corollary_max_corner_residual,
                    r.all_pass ? "pass" : "FAIL");
                all = all && r.all_pass;
            }
            return all ? kExitOk : kExitViolation;
        }
        if (bounds->parsed()) {
            const TheoryBounds t = theory_bounds(bounds_d);
            nlohmann::json j = {{"d", bounds_d},
                                {"free_lower", t.free_lower},
                                {"free_upper", t.free_upper},
                                {"c_uu_uf", t.c_uu_uf},
                                {"cd_lower", t.cd_lower},
                                {"cd_upper", t.cd_upper},
                                {"conjectured_bound", t.conjectured_bound}};
            std::cout << j.dump(2) << "\n";
            return kExitOk;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "hard violation: %s\n", e.what());
        return kExitViolation;
    }
    return kExitOk;
}
