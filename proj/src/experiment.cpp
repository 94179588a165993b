#include "dilatron/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dilatron/appendix.hpp"
#include "dilatron/ensembles.hpp"
#include "dilatron/target_grid.hpp"

namespace dilatron {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (n_values.empty())
        throw std::invalid_argument("experiment: n_values must be nonempty");
    for (int n : n_values)
        if (n < 1) throw std::invalid_argument("experiment: N must be >= 1");
    if (trials < 1) throw std::invalid_argument("experiment: trials must be >= 1");
    if (mode != RunMode::appendix_verify && k < 3)
        throw std::invalid_argument("experiment: k must be >= 3");
    if (workers < 0)
        throw std::invalid_argument("experiment: workers must be nonnegative");
}

std::uint64_t trial_seed(std::uint64_t master, int n, int trial_index) {
    const std::uint64_t stream =
        (static_cast<std::uint64_t>(n) << 20) +
        static_cast<std::uint64_t>(trial_index);
    return split_seed(master, stream);
}

namespace {

TrialRecord run_one_trial(const ExperimentConfig& cfg, int n, int trial,
                          const SolverConfig& solver) {
    TrialRecord rec;
    rec.n = n;
    rec.k = cfg.k;
    rec.trial_index = trial;
    rec.seed = trial_seed(cfg.master_seed, n, trial);
    const auto [u1, u2] = sample_haar_pair(n, rec.seed);
    const DilationReport rep = dilation_constant(u1, u2, cfg.k, solver);
    rec.c_value = rep.c_value;
    rec.r_opt = rep.r_opt;
    rec.status = rep.status;
    rec.iterations = rep.iterations;
    rec.primal_residual = rep.primal_residual;
    rec.dual_residual = rep.dual_residual;
    rec.wall_time_seconds = rep.wall_time_seconds;
    rec.certificate_ok = rep.certificate_ok;
    return rec;
}

void append_record(std::ostream& out, const TrialRecord& r) {
    std::ostringstream line;
    line.precision(17);
    line << r.n << ',' << r.k << ',' << r.trial_index << ',' << r.seed << ','
         << r.c_value << ',' << r.r_opt << ',' << to_string(r.status) << ','
         << r.iterations << ',' << r.primal_residual << ','
         << r.dual_residual << ',' << r.wall_time_seconds << '\n';
    out << line.str();
    out.flush();
}

}  // namespace

const char* kRecordsCsvHeader =
    "n,k,trial,seed,c,r,status,iters,primal_res,dual_res,wall_s";

std::vector<TrialRecord> run_batch(const ExperimentConfig& cfg) {
    cfg.validate();
    struct Job {
        int n;
        int trial;
    };
    std::vector<Job> jobs;
    for (int n : cfg.n_values)
        for (int t = 0; t < cfg.trials; ++t) jobs.push_back({n, t});
    std::vector<TrialRecord> records(jobs.size());

    std::ofstream live;
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_config_sidecar(cfg.out_dir + "/config.json", cfg);
        live.open(cfg.out_dir + "/records.csv");
        live << kRecordsCsvHeader << '\n';
    }

    int workers = cfg.workers;
    if (workers == 0)
        workers = std::max(
            1, static_cast<int>(std::thread::hardware_concurrency()) - 1);
    workers = std::min<int>(workers, static_cast<int>(jobs.size()));

    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    std::exception_ptr failure;

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                TrialRecord rec =
                    run_one_trial(cfg, jobs[i].n, jobs[i].trial, cfg.solver);
                std::lock_guard<std::mutex> lock(io_mutex);
                records[i] = rec;
                if (live.is_open()) append_record(live, rec);
            } catch (...) {
                std::lock_guard<std::mutex> lock(io_mutex);
                if (!failure) failure = std::current_exception();
                next.store(jobs.size());
                return;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    if (!cfg.out_dir.empty()) {
        live.close();
        write_records_csv(cfg.out_dir + "/records.csv", records);
    }
    return records;
}

std::vector<TrialRecord> single_shot_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    if (cfg.mode != RunMode::single_shot_sweep)
        throw std::invalid_argument("single_shot_sweep: wrong mode");
    std::ofstream live;
    if (!cfg.out_dir.empty()) {
        fs::create_directories(cfg.out_dir);
        write_config_sidecar(cfg.out_dir + "/config.json", cfg);
        live.open(cfg.out_dir + "/records.csv");
        live << kRecordsCsvHeader << '\n';
    }
    std::vector<TrialRecord> records;
    records.reserve(cfg.n_values.size());
    for (int n : cfg.n_values) {
        SolverConfig solver = cfg.solver;
        if (cfg.keep_traces && !cfg.out_dir.empty())
            solver.trace_csv = cfg.out_dir + "/trace_n" + std::to_string(n) +
                               "_k" + std::to_string(cfg.k) + ".csv";
        TrialRecord rec = run_one_trial(cfg, n, 0, solver);
        if (live.is_open()) append_record(live, rec);
        records.push_back(rec);
    }
    if (!cfg.out_dir.empty()) {
        live.close();
        write_records_csv(cfg.out_dir + "/records.csv", records);
    }
    return records;
}

std::vector<SummaryRow> summarize(const std::vector<TrialRecord>& records) {
    if (records.empty())
        throw std::invalid_argument("summarize: no records");
    std::map<std::pair<int, int>, std::vector<const TrialRecord*>> groups;
    for (const TrialRecord& r : records)
        groups[{r.n, r.k}].push_back(&r);
    std::vector<SummaryRow> rows;
    rows.reserve(groups.size());
    for (const auto& [key, group] : groups) {
        SummaryRow row;
        row.n = key.first;
        row.k = key.second;
        row.count_total = static_cast<int>(group.size());
        double sum = 0.0;
        for (const TrialRecord* r : group) {
            if (r->status != SolveStatus::solved) continue;
            ++row.count_solved;
            sum += r->c_value;
            if (row.count_solved == 1) {
                row.min_c = row.max_c = r->c_value;
            } else {
                row.min_c = std::min(row.min_c, r->c_value);
                row.max_c = std::max(row.max_c, r->c_value);
            }
        }
        if (row.count_solved > 0) {
            row.mean_c = sum / row.count_solved;
            double sq = 0.0;
            for (const TrialRecord* r : group)
                if (r->status == SolveStatus::solved)
                    sq += (r->c_value - row.mean_c) * (r->c_value - row.mean_c);
            row.std_c =
                row.count_solved > 1 ? std::sqrt(sq / (row.count_solved - 1)) : 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

void write_records_csv(const std::string& path,
                       const std::vector<TrialRecord>& records) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_records_csv: cannot open " + path);
    out << kRecordsCsvHeader << '\n';
    for (const TrialRecord& r : records) append_record(out, r);
}

std::vector<TrialRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_records_csv: cannot open " + path);
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("read_records_csv: empty file");
    if (line != kRecordsCsvHeader)
        throw std::runtime_error("read_records_csv: unexpected header: " + line);
    std::vector<TrialRecord> records;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string field;
        std::vector<std::string> fields;
        while (std::getline(ss, field, ',')) fields.push_back(field);
        if (fields.size() != 11)
            throw std::runtime_error("read_records_csv: malformed row: " + line);
        TrialRecord r;
        r.n = std::stoi(fields[0]);
        r.k = std::stoi(fields[1]);
        r.trial_index = std::stoi(fields[2]);
        r.seed = std::stoull(fields[3]);
        r.c_value = std::stod(fields[4]);
        r.r_opt = std::stod(fields[5]);
        if (fields[6] == "solved")
            r.status = SolveStatus::solved;
        else if (fields[6] == "max_iters")
            r.status = SolveStatus::max_iters;
        else
            r.status = SolveStatus::infeasible_detected;
        r.iterations = std::stoi(fields[7]);
        r.primal_residual = std::stod(fields[8]);
        r.dual_residual = std::stod(fields[9]);
        r.wall_time_seconds = std::stod(fields[10]);
        records.push_back(r);
    }
    return records;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_summary_csv: cannot open " + path);
    out << "n,k,count_solved,count_total,mean_c,std_c,min_c,max_c\n";
    out.precision(17);
    for (const SummaryRow& r : rows)
        out << r.n << ',' << r.k << ',' << r.count_solved << ','
            << r.count_total << ',' << r.mean_c << ',' << r.std_c << ','
            << r.min_c << ',' << r.max_c << '\n';
}

namespace {

const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::batch: return "batch";
        case RunMode::single_shot_sweep: return "single_shot_sweep";
        case RunMode::appendix_verify: return "appendix_verify";
    }
    return "unknown";
}

}  // namespace

void write_config_sidecar(const std::string& path,
                          const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["format"] = "dilatron-config-v1";
    j["csv_schema"] = kRecordsCsvHeader;
    j["mode"] = mode_name(cfg.mode);
    j["n_values"] = cfg.n_values;
    j["k"] = cfg.k;
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    j["workers"] = cfg.workers;
    j["grid"] = {{"k", cfg.k}, {"ordering", kGridOrderingTag}};
    j["solver"] = {
        {"tolerance", cfg.solver.tolerance},
        {"max_iterations", cfg.solver.max_iterations},
        {"over_relaxation", cfg.solver.over_relaxation},
        {"scaling",
         cfg.solver.scaling == SolverConfig::Scaling::ruiz ? "ruiz" : "none"},
        {"check_interval", cfg.solver.check_interval},
        {"rho", cfg.solver.rho},
        {"sigma", cfg.solver.sigma},
        {"eq_rho_scale", cfg.solver.eq_rho_scale},
        {"adaptive_rho", cfg.solver.adaptive_rho}};
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_config_sidecar: cannot open " + path);
    out << j.dump(2) << '\n';
}

ComplexMatrix sample_contraction(int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_contraction: n must be >= 1");
    CounterRng rng(seed);
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.next_complex_gaussian();
    const double target = rng.next_double();
    const double norm = operator_norm(g);
    if (norm == 0.0) return ComplexMatrix::Zero(n, n);
    return g * (target / norm);
}

std::vector<AppendixBatchRow> run_appendix_verification(
    const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<AppendixBatchRow> rows;
    rows.reserve(cfg.n_values.size());
    for (int n : cfg.n_values) {
        AppendixBatchRow row;
        row.n = n;
        row.trials = cfg.trials;
        bool pass = true;
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t seed = trial_seed(cfg.master_seed, n, t);
            {
                const auto [a, b] = sample_haar_pair(n, seed);
                const AppendixWitness w = verify_theorem(a, b);
                row.theorem_max_commute =
                    std::max(row.theorem_max_commute, w.commute_residual);
                row.theorem_max_norm_slack = std::max(
                    row.theorem_max_norm_slack, w.max_norm - w.bound);
            }
            {
                const ComplexMatrix a =
                    sample_contraction(n, split_seed(seed, 2));
                const ComplexMatrix b =
                    sample_contraction(n, split_seed(seed, 3));
                const ComplexMatrix la = unitary_dilation_2n(a);
                const ComplexMatrix lb = unitary_dilation_2n(b);
                row.corollary_max_unitarity_residual =
                    std::max({row.corollary_max_unitarity_residual,
                              unitarity_residual(la), unitarity_residual(lb)});
                const AppendixWitness w = end_to_end_contraction_dilation(a, b);
                row.corollary_max_commute =
                    std::max(row.corollary_max_commute, w.commute_residual);
                row.corollary_max_norm_slack =
                    std::max(row.corollary_max_norm_slack,
                             w.max_norm - c2n_bound(n));
                const int sz = n;
                row.corollary_max_corner_residual = std::max(
                    {row.corollary_max_corner_residual,
                     max_abs(ComplexMatrix(w.s.topLeftCorner(sz, sz) - a)),
                     max_abs(ComplexMatrix(w.t.topLeftCorner(sz, sz) - b))});
            }
        }
        const Tolerances& tol = default_tolerances();
        pass = row.theorem_max_commute <= tol.commute &&
               row.theorem_max_norm_slack <= tol.appendix_bound_slack &&
               row.corollary_max_commute <= tol.commute &&
               row.corollary_max_norm_slack <= tol.appendix_bound_slack &&
               row.corollary_max_corner_residual <= 1e-12 &&
               row.corollary_max_unitarity_residual <= 1e-9;
        row.all_pass = pass;
        rows.push_back(row);
    }
    return rows;
}

void write_appendix_report(const std::string& path,
                           const std::vector<AppendixBatchRow>& rows,
                           const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["format"] = "dilatron-appendix-v1";
    j["trials"] = cfg.trials;
    j["master_seed"] = cfg.master_seed;
    nlohmann::json arr = nlohmann::json::array();
    for (const AppendixBatchRow& r : rows) {
        arr.push_back(
            {{"n", r.n},
             {"trials", r.trials},
             {"theorem_max_commute", r.theorem_max_commute},
             {"theorem_max_norm_slack", r.theorem_max_norm_slack},
             {"corollary_max_commute", r.corollary_max_commute},
             {"corollary_max_norm_slack", r.corollary_max_norm_slack},
             {"corollary_max_corner_residual", r.corollary_max_corner_residual},
             {"corollary_max_unitarity_residual",
              r.corollary_max_unitarity_residual},
             {"all_pass", r.all_pass}});
    }
    j["rows"] = std::move(arr);
    bool all = true;
    for (const AppendixBatchRow& r : rows) all = all && r.all_pass;
    j["all_pass"] = all;
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_appendix_report: cannot open " + path);
    out << j.dump(2) << '\n';
}

}  // namespace dilatron
