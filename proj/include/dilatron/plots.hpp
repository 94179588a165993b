#pragma once

#include <string>
#include <vector>

#include "dilatron/experiment.hpp"

namespace dilatron {

// Freedman-Diaconis binning with a floor on the bin width (the constants
// span ~0.1, so unfloored widths can collapse on tight clusters).
struct Histogram {
    double bin_width = 0.0;
    std::vector<double> edges;  // size counts.size() + 1
    std::vector<int> counts;
};
Histogram make_histogram(const std::vector<double>& values,
                         double floor_width = 0.002);

// Writes, per (n, k) group: histogram CSV + SVG with the sqrt(2) and
// sqrt(2)/cos(pi/k) reference lines; per k: mean +/- std vs N (CSV + SVG)
// and the single-shot path series (CSV + SVG). Throws when records is empty.
void emit_plots(const std::vector<TrialRecord>& records,
                const std::vector<SummaryRow>& summaries,
                const std::string& out_dir);

}  // namespace dilatron
