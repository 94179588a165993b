#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dilatron/dilation.hpp"
#include "dilatron/solver.hpp"

namespace dilatron {

enum class RunMode { batch, single_shot_sweep, appendix_verify };

struct ExperimentConfig {
    std::vector<int> n_values;
    int k = 8;
    int trials = 1;
    std::uint64_t master_seed = 0;
    SolverConfig solver;
    std::string out_dir;  // empty: keep records in memory only
    RunMode mode = RunMode::batch;
    int workers = 0;  // 0 = available parallelism minus one
    bool keep_traces = false;

    void validate() const;
};

struct TrialRecord {
    int n = 0;
    int k = 0;
    int trial_index = 0;
    std::uint64_t seed = 0;
    double c_value = 0.0;
    double r_opt = 0.0;
    SolveStatus status = SolveStatus::max_iters;
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double wall_time_seconds = 0.0;
    bool certificate_ok = false;
};

// Statistics are over solved trials only; count_solved records how many that
// was. A single solved trial reports std 0.
struct SummaryRow {
    int n = 0;
    int k = 0;
    int count_solved = 0;
    int count_total = 0;
    double mean_c = 0.0;
    double std_c = 0.0;
    double min_c = 0.0;
    double max_c = 0.0;
};

// Per-trial seed derivation: split_seed(master, n * 2^20 + trial_index).
// Reruns of the same config therefore reproduce every trial exactly, and
// trials are independent streams.
std::uint64_t trial_seed(std::uint64_t master, int n, int trial_index);

// One Haar pair and one dilation-constant computation per (n, trial). Trials
// run concurrently up to the worker cap; completed rows are appended (and
// flushed) to out_dir/records.csv as they land, then the file is rewritten
// in deterministic (n, trial) order at the end.
std::vector<TrialRecord> run_batch(const ExperimentConfig& cfg);

// One trial per N, run chronologically; per-run solver residual traces kept
// next to the records when keep_traces is set.
std::vector<TrialRecord> single_shot_sweep(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records);

extern const char* kRecordsCsvHeader;
void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records);
std::vector<TrialRecord> read_records_csv(const std::string& path);
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows);
void write_config_sidecar(const std::string& path,
                          const ExperimentConfig& cfg);

// Appendix verification batch: for each n, `trials` Haar pairs through the
// theorem check and `trials` contraction pairs through the corollary
// pipeline. Slacks are (measured - bound); all nonpositive means pass.
struct AppendixBatchRow {
    int n = 0;
    int trials = 0;
    double theorem_max_commute = 0.0;
    double theorem_max_norm_slack = 0.0;
    double corollary_max_commute = 0.0;
    double corollary_max_norm_slack = 0.0;
    double corollary_max_corner_residual = 0.0;
    double corollary_max_unitarity_residual = 0.0;
    bool all_pass = false;
};
std::vector<AppendixBatchRow> run_appendix_verification(
    const ExperimentConfig& cfg);
void write_appendix_report(const std::string& path,
                           const std::vector<AppendixBatchRow>& rows,
                           const ExperimentConfig& cfg);

// Random strict contraction used by the corollary batch: a Ginibre sample
// scaled to a uniform operator norm in [0, 1).
ComplexMatrix sample_contraction(int n, std::uint64_t seed);

}  // namespace dilatron
