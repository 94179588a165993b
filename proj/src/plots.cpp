#include "dilatron/plots.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "dilatron/dilation.hpp"

namespace dilatron {

namespace {

double quantile(std::vector<double> sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double pos = p * (n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double frac = pos - lo;
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

Histogram make_histogram(const std::vector<double>& values,
                         double floor_width) {
    if (values.empty())
        throw std::invalid_argument("make_histogram: no values");
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    const double lo = sorted.front();
    const double hi = sorted.back();
    const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);
    double width = 2.0 * iqr /
                   std::cbrt(static_cast<double>(sorted.size()));
    width = std::max(width, floor_width);
    int nbins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    if (hi == lo) nbins = 1;

    Histogram h;
    h.bin_width = width;
    h.counts.assign(nbins, 0);
    h.edges.resize(nbins + 1);
    for (int i = 0; i <= nbins; ++i) h.edges[i] = lo + i * width;
    for (double v : sorted) {
        int bin = static_cast<int>((v - lo) / width);
        bin = std::clamp(bin, 0, nbins - 1);
        ++h.counts[bin];
    }
    return h;
}

namespace {

// Minimal SVG canvas with a linear data-to-pixel map.
class SvgCanvas {
public:
    SvgCanvas(double x0, double x1, double y0, double y1)
        : x0_(x0), x1_(x1), y0_(y0), y1_(y1) {
        body_.precision(6);
    }

    double px(double x) const {
        return kMargin + (x - x0_) / (x1_ - x0_) * (kWidth - 2 * kMargin);
    }
    double py(double y) const {
        return kHeight - kMargin -
               (y - y0_) / (y1_ - y0_) * (kHeight - 2 * kMargin);
    }

    void rect(double x, double y, double w, double h, const char* fill) {
        body_ << "<rect x='" << x << "' y='" << y << "' width='" << w
              << "' height='" << h << "' fill='" << fill
              << "' stroke='#333' stroke-width='0.5'/>\n";
    }
    void line(double xa, double ya, double xb, double yb, const char* stroke,
              bool dashed = false) {
        body_ << "<line x1='" << xa << "' y1='" << ya << "' x2='" << xb
              << "' y2='" << yb << "' stroke='" << stroke
              << "' stroke-width='1'"
              << (dashed ? " stroke-dasharray='4 3'" : "") << "/>\n";
    }
    void circle(double x, double y, const char* fill) {
        body_ << "<circle cx='" << x << "' cy='" << y
              << "' r='2.5' fill='" << fill << "'/>\n";
    }
    void polyline(const std::vector<std::pair<double, double>>& pts,
                  const char* stroke) {
        body_ << "<polyline fill='none' stroke='" << stroke
              << "' stroke-width='1.5' points='";
        for (const auto& [x, y] : pts) body_ << x << ',' << y << ' ';
        body_ << "'/>\n";
    }
    void text(double x, double y, const std::string& s, int size = 11,
              const char* anchor = "middle") {
        body_ << "<text x='" << x << "' y='" << y << "' font-size='" << size
              << "' font-family='sans-serif' text-anchor='" << anchor << "'>"
              << s << "</text>\n";
    }

    void axes(const std::string& xlabel, const std::string& ylabel,
              const std::string& title) {
        line(kMargin, kHeight - kMargin, kWidth - kMargin, kHeight - kMargin,
             "#000");
        line(kMargin, kMargin, kMargin, kHeight - kMargin, "#000");
        for (int i = 0; i <= 5; ++i) {
            const double fx = x0_ + (x1_ - x0_) * i / 5.0;
            const double fy = y0_ + (y1_ - y0_) * i / 5.0;
            std::ostringstream lx, ly;
            lx.precision(4);
            ly.precision(4);
            lx << fx;
            ly << fy;
            text(px(fx), kHeight - kMargin + 16, lx.str(), 10);
            text(kMargin - 8, py(fy) + 4, ly.str(), 10, "end");
            line(px(fx), kHeight - kMargin, px(fx), kHeight - kMargin + 4,
                 "#000");
            line(kMargin - 4, py(fy), kMargin, py(fy), "#000");
        }
        text(kWidth / 2.0, kHeight - 8, xlabel);
        text(14, kHeight / 2.0, ylabel, 11, "middle");
        text(kWidth / 2.0, 18, title, 13);
    }

    void vline_with_label(double x, const char* stroke,
                          const std::string& label) {
        line(px(x), kMargin, px(x), kHeight - kMargin, stroke, true);
        text(px(x), kMargin - 4, label, 10);
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("SvgCanvas: cannot open " + path);
        out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << kWidth
            << "' height='" << kHeight << "' viewBox='0 0 " << kWidth << ' '
            << kHeight << "'>\n<rect width='100%' height='100%' fill='white'/>\n"
            << body_.str() << "</svg>\n";
    }

    static constexpr double kWidth = 560;
    static constexpr double kHeight = 360;
    static constexpr double kMargin = 52;

private:
    double x0_, x1_, y0_, y1_;
    std::ostringstream body_;
};

std::string format_double(double v, int prec = 5) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

void emit_histogram(const std::vector<const TrialRecord*>& group, int n, int k,
                    const std::string& out_dir) {
    std::vector<double> values;
    values.reserve(group.size());
    for (const TrialRecord* r : group) values.push_back(r->c_value);
    const Histogram h = make_histogram(values);

    const std::string stem =
        out_dir + "/hist_n" + std::to_string(n) + "_k" + std::to_string(k);
    {
        std::ofstream csv(stem + ".csv");
        csv << "bin_lo,bin_hi,count\n";
        csv.precision(12);
        for (std::size_t i = 0; i < h.counts.size(); ++i)
            csv << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.counts[i]
                << '\n';
    }
    const double ref_lo = std::numbers::sqrt2;
    const double ref_hi = reference_line(k);
    const double x0 = std::min({h.edges.front(), ref_lo - 0.01});
    const double x1 = std::max({h.edges.back(), ref_hi + 0.01});
    const int cmax = *std::max_element(h.counts.begin(), h.counts.end());
    SvgCanvas svg(x0, x1, 0.0, cmax * 1.15 + 1.0);
    svg.axes("dilation constant", "count",
             "N=" + std::to_string(n) + ", k=" + std::to_string(k) + " (" +
                 std::to_string(values.size()) + " trials)");
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        if (h.counts[i] == 0) continue;
        const double xa = svg.px(h.edges[i]);
        const double xb = svg.px(h.edges[i + 1]);
        const double yt = svg.py(h.counts[i]);
        svg.rect(xa, yt, xb - xa, svg.py(0) - yt, "#7a9ec8");
    }
    svg.vline_with_label(ref_lo, "#444", "sqrt(2)=" + format_double(ref_lo));
    svg.vline_with_label(ref_hi, "#a33",
                         "sqrt(2)/cos(pi/k)=" + format_double(ref_hi));
    svg.save(stem + ".svg");
}

void emit_mean_series(const std::vector<SummaryRow>& rows, int k,
                      const std::string& out_dir) {
    std::vector<const SummaryRow*> series;
    for (const SummaryRow& r : rows)
        if (r.k == k && r.count_solved > 0) series.push_back(&r);
    if (series.empty()) return;
    const std::string stem = out_dir + "/mean_vs_n_k" + std::to_string(k);
    {
        std::ofstream csv(stem + ".csv");
        csv << "n,k,count_solved,mean_c,std_c,min_c,max_c\n";
        csv.precision(12);
        for (const SummaryRow* r : series)
            csv << r->n << ',' << r->k << ',' << r->count_solved << ','
                << r->mean_c << ',' << r->std_c << ',' << r->min_c << ','
                << r->max_c << '\n';
    }
    double ymin = std::numbers::sqrt2 - 0.02, ymax = reference_line(k) + 0.02;
    double xmin = series.front()->n, xmax = series.back()->n;
    for (const SummaryRow* r : series) {
        ymin = std::min(ymin, r->mean_c - r->std_c - 0.01);
        ymax = std::max(ymax, r->mean_c + r->std_c + 0.01);
        xmin = std::min<double>(xmin, r->n);
        xmax = std::max<double>(xmax, r->n);
    }
    SvgCanvas svg(xmin - 2, xmax + 2, ymin, ymax);
    svg.axes("N", "dilation constant",
             "mean and std vs N (k=" + std::to_string(k) + ")");
    std::vector<std::pair<double, double>> pts;
    for (const SummaryRow* r : series) {
        const double x = svg.px(r->n);
        svg.line(x, svg.py(r->mean_c - r->std_c), x, svg.py(r->mean_c + r->std_c),
                 "#555");
        svg.circle(x, svg.py(r->mean_c), "#2b5d8c");
        pts.emplace_back(x, svg.py(r->mean_c));
    }
    svg.polyline(pts, "#2b5d8c");
    svg.line(svg.px(xmin - 2), svg.py(std::numbers::sqrt2), svg.px(xmax + 2),
             svg.py(std::numbers::sqrt2), "#444", true);
    svg.line(svg.px(xmin - 2), svg.py(reference_line(k)), svg.px(xmax + 2),
             svg.py(reference_line(k)), "#a33", true);
    svg.save(stem + ".svg");
}

void emit_path_series(const std::vector<TrialRecord>& records, int k,
                      const std::string& out_dir) {
    std::vector<const TrialRecord*> path;
    for (const TrialRecord& r : records)
        if (r.k == k && r.trial_index == 0) path.push_back(&r);
    if (path.size() < 2) return;
    std::sort(path.begin(), path.end(),
              [](const TrialRecord* a, const TrialRecord* b) {
                  return a->n < b->n;
              });
    const std::string stem = out_dir + "/sweep_path_k" + std::to_string(k);
    {
        std::ofstream csv(stem + ".csv");
        csv << "n,k,c,status\n";
        csv.precision(12);
        for (const TrialRecord* r : path)
            csv << r->n << ',' << r->k << ',' << r->c_value << ','
                << to_string(r->status) << '\n';
    }
    double ymin = std::numbers::sqrt2 - 0.02,
           ymax = reference_line(k) + 0.02;
    for (const TrialRecord* r : path) {
        ymin = std::min(ymin, r->c_value - 0.01);
        ymax = std::max(ymax, r->c_value + 0.01);
    }
    SvgCanvas svg(path.front()->n - 2, path.back()->n + 2, ymin, ymax);
    svg.axes("N", "dilation constant",
             "single-shot path (k=" + std::to_string(k) + ")");
    std::vector<std::pair<double, double>> pts;
    for (const TrialRecord* r : path) {
        pts.emplace_back(svg.px(r->n), svg.py(r->c_value));
        svg.circle(svg.px(r->n), svg.py(r->c_value), "#2b5d8c");
    }
    svg.polyline(pts, "#2b5d8c");
    svg.line(svg.px(path.front()->n - 2), svg.py(std::numbers::sqrt2),
             svg.px(path.back()->n + 2), svg.py(std::numbers::sqrt2), "#444",
             true);
    svg.line(svg.px(path.front()->n - 2), svg.py(reference_line(k)),
             svg.px(path.back()->n + 2), svg.py(reference_line(k)), "#a33",
             true);
    svg.save(stem + ".svg");
}

}  // namespace

void emit_plots(const std::vector<TrialRecord>& records,
                const std::vector<SummaryRow>& summaries,
                const std::string& out_dir) {
    if (records.empty())
        throw std::invalid_argument("emit_plots: no records");
    std::filesystem::create_directories(out_dir);

    std::map<std::pair<int, int>, std::vector<const TrialRecord*>> groups;
    std::map<int, bool> ks;
    for (const TrialRecord& r : records) {
        groups[{r.n, r.k}].push_back(&r);
        ks[r.k] = true;
    }
    for (const auto& [key, group] : groups)
        emit_histogram(group, key.first, key.second, out_dir);
    for (const auto& [k, unused] : ks) {
        emit_mean_series(summaries, k, out_dir);
        emit_path_series(records, k, out_dir);
    }
    write_summary_csv(out_dir + "/summary.csv", summaries);
}

}  // namespace dilatron
