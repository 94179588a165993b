#include "dilatron/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "dilatron/rng.hpp"

namespace dilatron {

namespace {
const double kSqrt2 = std::sqrt(2.0);
constexpr double kDropTol = 1e-14;
}  // namespace

int svec_dim(int order) { return order * (order + 1) / 2; }

int svec_index(int i, int j) { return j * (j + 1) / 2 + i; }

RealVector svec(const RealMatrix& s) {
    const int d = static_cast<int>(s.rows());
    RealVector v(svec_dim(d));
    int t = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i)
            v(t++) = (i == j) ? s(i, j) : kSqrt2 * s(i, j);
    return v;
}

RealMatrix smat(const RealVector& v) {
    const int d =
        static_cast<int>((std::sqrt(8.0 * static_cast<double>(v.size()) + 1.0) - 1.0) / 2.0 + 0.5);
    if (svec_dim(d) != v.size())
        throw std::invalid_argument("smat: length is not a triangular number");
    RealMatrix s(d, d);
    int t = 0;
    for (int j = 0; j < d; ++j)
        for (int i = 0; i <= j; ++i) {
            const double x = (i == j) ? v(t) : v(t) / kSqrt2;
            s(i, j) = x;
            s(j, i) = x;
            ++t;
        }
    return s;
}

int ConeLayout::psd_rows() const {
    int total = 0;
    for (int d : psd_orders) total += svec_dim(d);
    return total;
}

int ConeLayout::total_rows() const { return zero_rows + psd_rows(); }

int ConeLayout::psd_offset(int block) const {
    int off = zero_rows;
    for (int i = 0; i < block; ++i) off += svec_dim(psd_orders[i]);
    return off;
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::solved: return "solved";
        case SolveStatus::max_iters: return "max_iters";
        case SolveStatus::infeasible_detected: return "infeasible_detected";
    }
    return "unknown";
}

DilationSDP formulate(const ComplexMatrix& u1, const ComplexMatrix& u2,
                      const GridTarget& grid, double unitarity_tol) {
    if (u1.rows() != u1.cols() || u2.rows() != u2.cols() ||
        u1.rows() != u2.rows())
        throw std::invalid_argument("formulate: unitaries must be square and equal-sized");
    if (unitarity_residual(u1) > unitarity_tol ||
        unitarity_residual(u2) > unitarity_tol)
        throw std::invalid_argument("formulate: input matrices fail the unitarity gate");
    if (grid.k < 3 ||
        grid.pairs.size() != static_cast<std::size_t>(grid.k) * grid.k)
        throw std::invalid_argument("formulate: invalid grid");
    for (const auto& [a, b] : grid.pairs)
        if (std::abs(std::abs(a) - 1.0) > 1e-12 ||
            std::abs(std::abs(b) - 1.0) > 1e-12)
            throw std::invalid_argument("formulate: grid point off the unit circle");

    DilationSDP sdp;
    sdp.n = static_cast<int>(u1.rows());
    sdp.k2 = static_cast<int>(grid.pairs.size());
    sdp.grid = grid;
    sdp.u1 = u1;
    sdp.u2 = u2;
    sdp.layout.n = sdp.n;
    sdp.layout.k2 = sdp.k2;
    sdp.layout.block_svec_dim = svec_dim(2 * sdp.n);
    return sdp;
}

std::int64_t raw_equality_row_count(int n, int k2) {
    return 6LL * n * n + static_cast<std::int64_t>(k2) * n * (n + 1);
}

namespace {

// One equality row under construction: svec-coordinate coefficients
// accumulated from matrix-entry references, combined on finalize().
struct RawRow {
    std::vector<std::pair<int, double>> cols;
    double rhs = 0.0;

    // Adds w * E(i,j) of block `blk` (matrix-entry units; the svec sqrt(2)
    // scaling is applied here).
    void add_entry(const VariableLayout& layout, int blk, int i, int j,
                   double w) {
        if (i > j) std::swap(i, j);
        const int col = layout.block_offset(blk) + svec_index(i, j);
        cols.emplace_back(col, (i == j) ? w : w / kSqrt2);
    }

    void add_r(const VariableLayout& layout, double w) {
        cols.emplace_back(layout.r_offset(), w);
    }

    void finalize() {
        std::sort(cols.begin(), cols.end());
        std::size_t out = 0;
        for (std::size_t i = 0; i < cols.size();) {
            int col = cols[i].first;
            double v = 0.0;
            while (i < cols.size() && cols[i].first == col) v += cols[i++].second;
            if (std::abs(v) > kDropTol) cols[out++] = {col, v};
        }
        cols.resize(out);
    }
};

std::uint64_t pattern_hash(const std::vector<std::pair<int, double>>& cols) {
    std::uint64_t h = 1469598103934665603ULL;
    for (const auto& [c, v] : cols) {
        h ^= static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL;
        h *= 1099511628211ULL;
    }
    return h;
}

// Symmetrized entry references for the Hermitian block hiding inside the
// embedding E = [[P, Q], [Q', R]]:  X(p,q) = (P(p,q) + R(p,q)) / 2 and
// Y(p,q) = (Q(q,p) - Q(p,q)) / 2, with C = X + iY.
void add_x(RawRow& row, const VariableLayout& lo, int blk, int p, int q,
           double w) {
    const int n = lo.n;
    row.add_entry(lo, blk, p, q, w / 2.0);
    row.add_entry(lo, blk, n + p, n + q, w / 2.0);
}

void add_y(RawRow& row, const VariableLayout& lo, int blk, int p, int q,
           double w) {
    if (p == q) return;  // Y(p,p) = 0 identically
    const int n = lo.n;
    row.add_entry(lo, blk, q, n + p, w / 2.0);
    row.add_entry(lo, blk, p, n + q, -w / 2.0);
}

struct Presolved {
    std::vector<RawRow> rows;
    std::vector<double> norms;  // 2-norm divided out of each kept row
};

Presolved presolve_and_normalize(std::vector<RawRow>&& raw) {
    // Drop numerically empty rows, merge exactly proportional ones, then
    // scale the survivors to unit Euclidean norm.
    std::vector<RawRow> kept;
    kept.reserve(raw.size());
    std::unordered_map<std::uint64_t, std::vector<int>> buckets;
    for (RawRow& row : raw) {
        row.finalize();
        if (row.cols.empty()) {
            if (std::abs(row.rhs) > kDropTol)
                throw std::runtime_error("to_conic: contradictory empty row");
            continue;
        }
        bool merged = false;
        for (int idx : buckets[pattern_hash(row.cols)]) {
            const RawRow& prev = kept[idx];
            if (prev.cols.size() != row.cols.size()) continue;
            const double ratio = row.cols[0].second / prev.cols[0].second;
            bool proportional = true;
            for (std::size_t t = 0; t < row.cols.size(); ++t) {
                if (row.cols[t].first != prev.cols[t].first ||
                    std::abs(row.cols[t].second - ratio * prev.cols[t].second) >
                        1e-12 * std::abs(row.cols[t].second) + kDropTol) {
                    proportional = false;
                    break;
                }
            }
            if (proportional) {
                if (std::abs(row.rhs - ratio * prev.rhs) >
                    1e-10 * (1.0 + std::abs(row.rhs)))
                    throw std::runtime_error(
                        "to_conic: contradictory duplicate rows");
                merged = true;
                break;
            }
        }
        if (merged) continue;
        buckets[pattern_hash(row.cols)].push_back(static_cast<int>(kept.size()));
        kept.push_back(std::move(row));
    }

    Presolved out;
    out.norms.reserve(kept.size());
    for (RawRow& row : kept) {
        double sq = 0.0;
        for (const auto& [c, v] : row.cols) sq += v * v;
        const double norm = std::sqrt(sq);
        for (auto& [c, v] : row.cols) v /= norm;
        row.rhs /= norm;
        out.norms.push_back(norm);
    }
    out.rows = std::move(kept);
    return out;
}

}  // namespace

ConicProblem to_conic(const DilationSDP& sdp) {
    const int n = sdp.n;
    const int k2 = sdp.k2;
    const VariableLayout& lo = sdp.layout;
    const int nvars = lo.num_vars();

    std::vector<RawRow> raw;
    raw.reserve(static_cast<std::size_t>(raw_equality_row_count(n, k2)));

    // Unital rows: sum_j C_j = I_N, expanded entrywise (Re then Im per
    // entry). The Im rows on the diagonal vanish and the (p,q)/(q,p) rows
    // duplicate; presolve cleans that up.
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            RawRow re, im;
            for (int j = 0; j < k2; ++j) {
                add_x(re, lo, j, p, q, 1.0);
                add_y(im, lo, j, p, q, 1.0);
            }
            re.rhs = (p == q) ? 1.0 : 0.0;
            im.rhs = 0.0;
            raw.push_back(std::move(re));
            raw.push_back(std::move(im));
        }

    // Image rows: sum_j a_j C_j - r U_i = 0 for the two grid coordinates.
    for (int which = 0; which < 2; ++which) {
        const ComplexMatrix& u = (which == 0) ? sdp.u1 : sdp.u2;
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                RawRow re, im;
                for (int j = 0; j < k2; ++j) {
                    const Complex a = (which == 0) ? sdp.grid.pairs[j].first
                                                   : sdp.grid.pairs[j].second;
                    add_x(re, lo, j, p, q, a.real());
                    add_y(re, lo, j, p, q, -a.imag());
                    add_x(im, lo, j, p, q, a.imag());
                    add_y(im, lo, j, p, q, a.real());
                }
                re.add_r(lo, -u(p, q).real());
                im.add_r(lo, -u(p, q).imag());
                raw.push_back(std::move(re));
                raw.push_back(std::move(im));
            }
    }

    // Embedding redundancy, per block: equal diagonal blocks and a skew
    // off-diagonal block.
    for (int j = 0; j < k2; ++j)
        for (int q = 0; q < n; ++q)
            for (int p = 0; p <= q; ++p) {
                RawRow diag_eq;
                diag_eq.add_entry(lo, j, p, q, 1.0);
                diag_eq.add_entry(lo, j, n + p, n + q, -1.0);
                raw.push_back(std::move(diag_eq));
                RawRow skew;
                if (p == q) {
                    skew.add_entry(lo, j, p, n + p, 1.0);
                } else {
                    skew.add_entry(lo, j, p, n + q, 1.0);
                    skew.add_entry(lo, j, q, n + p, 1.0);
                }
                raw.push_back(std::move(skew));
            }

    Presolved pre = presolve_and_normalize(std::move(raw));
    const int m0 = static_cast<int>(pre.rows.size());

    ConicProblem out;
    out.cones.zero_rows = m0;
    out.cones.psd_orders.assign(k2, 2 * n);
    const int m = out.cones.total_rows();

    out.c = RealVector::Zero(nvars);
    out.c(lo.r_offset()) = -1.0;  // maximize r
    out.b = RealVector::Zero(m);
    out.row_scales = RealVector::Ones(m);

    std::vector<Eigen::Triplet<double>> trip;
    std::size_t nnz = 0;
    for (const RawRow& row : pre.rows) nnz += row.cols.size();
    trip.reserve(nnz + static_cast<std::size_t>(m - m0));
    for (int i = 0; i < m0; ++i) {
        for (const auto& [c, v] : pre.rows[i].cols) trip.emplace_back(i, c, v);
        out.b(i) = pre.rows[i].rhs;
        out.row_scales(i) = pre.norms[i];
    }
    // PSD slack rows: s_block = x_block.
    for (int j = 0; j < k2; ++j) {
        const int roff = out.cones.psd_offset(j);
        const int coff = lo.block_offset(j);
        for (int t = 0; t < lo.block_svec_dim; ++t)
            trip.emplace_back(roff + t, coff + t, -1.0);
    }
    out.A.resize(m, nvars);
    out.A.setFromTriplets(trip.begin(), trip.end());
    out.A.makeCompressed();
    return out;
}

SolveResult extract(const DilationSDP& sdp, const RealVector& x) {
    if (x.size() != sdp.layout.num_vars())
        throw std::invalid_argument("extract: vector does not match layout");
    const int n = sdp.n;
    SolveResult res;
    res.blocks.reserve(sdp.k2);
    for (int j = 0; j < sdp.k2; ++j) {
        const RealMatrix e = smat(
            x.segment(sdp.layout.block_offset(j), sdp.layout.block_svec_dim));
        const RealMatrix p = e.topLeftCorner(n, n);
        const RealMatrix r = e.bottomRightCorner(n, n);
        const RealMatrix q = e.topRightCorner(n, n);
        const RealMatrix xr = (p + r) / 2.0;
        const RealMatrix yi = (q.transpose() - q) / 2.0;
        ComplexMatrix c = xr.cast<Complex>() + Complex(0.0, 1.0) * yi.cast<Complex>();
        res.blocks.push_back((c + c.adjoint()) / 2.0);
    }
    res.r_opt = x(sdp.layout.r_offset());
    return res;
}

double CertificateReport::worst_equality() const {
    return std::max({unital_residual, image1_residual, image2_residual});
}

bool CertificateReport::pass(double tol_feas) const {
    return min_block_eig >= -tol_feas && worst_equality() <= tol_feas;
}

CertificateReport check_certificate(const DilationSDP& sdp, double r,
                                    const std::vector<ComplexMatrix>& blocks) {
    if (blocks.size() != static_cast<std::size_t>(sdp.k2))
        throw std::invalid_argument("check_certificate: block count mismatch");
    const int n = sdp.n;
    CertificateReport rep;
    ComplexMatrix unital = ComplexMatrix::Zero(n, n);
    ComplexMatrix img1 = ComplexMatrix::Zero(n, n);
    ComplexMatrix img2 = ComplexMatrix::Zero(n, n);
    double min_eig = std::numeric_limits<double>::infinity();
    for (int j = 0; j < sdp.k2; ++j) {
        const ComplexMatrix& c = blocks[j];
        unital += c;
        img1 += sdp.grid.pairs[j].first * c;
        img2 += sdp.grid.pairs[j].second * c;
        const HermitianEig eig = hermitian_eig(c, 1e-8);
        min_eig = std::min(min_eig, eig.eigenvalues(0));
    }
    rep.min_block_eig = min_eig;
    rep.unital_residual =
        max_abs(ComplexMatrix(unital - ComplexMatrix::Identity(n, n)));
    rep.image1_residual = max_abs(ComplexMatrix(img1 - r * sdp.u1));
    rep.image2_residual = max_abs(ComplexMatrix(img2 - r * sdp.u2));
    return rep;
}

bool likely_full_row_rank(const Eigen::SparseMatrix<double>& rows,
                          int oversample, std::uint64_t seed) {
    const int m = static_cast<int>(rows.rows());
    if (m == 0) return true;
    CounterRng rng(seed);
    RealMatrix omega(rows.cols(), m + oversample);
    for (Eigen::Index j = 0; j < omega.cols(); ++j)
        for (Eigen::Index i = 0; i < omega.rows(); ++i)
            omega(i, j) = rng.next_gaussian();
    RealMatrix proj = rows * omega;
    Eigen::ColPivHouseholderQR<RealMatrix> qr(proj);
    qr.setThreshold(1e-10);
    return qr.rank() == m;
}

namespace {

nlohmann::json conic_json(const ConicProblem& p, const DilationSDP* sdp) {
    nlohmann::json j;
    j["format"] = "dilatron-conic-v1";
    j["num_vars"] = p.A.cols();
    j["num_rows"] = p.A.rows();
    nlohmann::json trips = nlohmann::json::array();
    for (int k = 0; k < p.A.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(p.A, k); it; ++it)
            trips.push_back({it.row(), it.col(), it.value()});
    j["A"] = std::move(trips);
    j["b"] = std::vector<double>(p.b.data(), p.b.data() + p.b.size());
    j["c"] = std::vector<double>(p.c.data(), p.c.data() + p.c.size());
    j["cones"] = {{"zero", p.cones.zero_rows}, {"psd", p.cones.psd_orders}};
    j["row_scales"] = std::vector<double>(
        p.row_scales.data(), p.row_scales.data() + p.row_scales.size());
    if (sdp != nullptr) {
        j["layout"] = {{"n", sdp->n},
                       {"k2", sdp->k2},
                       {"block_svec_dim", sdp->layout.block_svec_dim},
                       {"r_offset", sdp->layout.r_offset()}};
        j["grid"] = {{"k", sdp->grid.k}, {"ordering", kGridOrderingTag}};
    }
    return j;
}

}  // namespace

std::string conic_to_json_string(const ConicProblem& p,
                                 const DilationSDP* sdp) {
    return conic_json(p, sdp).dump();
}

void save_conic_json(const ConicProblem& p, const DilationSDP* sdp,
                     const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_conic_json: cannot open " + path);
    out << conic_json(p, sdp).dump(2) << "\n";
}

}  // namespace dilatron
