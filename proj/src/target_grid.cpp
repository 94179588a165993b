#include "dilatron/target_grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dilatron {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_valid_k(int k, const char* who) {
    if (k < 3)
        throw std::invalid_argument(std::string(who) +
                                    ": k must be at least 3");
}
}  // namespace

std::vector<Complex> vertices(int k) {
    require_valid_k(k, "vertices");
    std::vector<Complex> v(k);
    for (int m = 0; m < k; ++m)
        v[m] = std::polar(1.0, kTwoPi * static_cast<double>(m) / k);
    return v;
}

double polygon_correction(int k) {
    require_valid_k(k, "polygon_correction");
    return std::cos(std::numbers::pi / k);
}

double polygon_radius(int k, double theta) {
    require_valid_k(k, "polygon_radius");
    // Fold theta into the sector [2*pi*m/k, 2*pi*(m+1)/k) and measure from
    // the sector midline; the supporting edge satisfies
    // t * cos(theta - midline) = cos(pi/k).
    const double sector = kTwoPi / k;
    double t = std::fmod(theta, sector);
    if (t < 0) t += sector;
    const double from_midline = t - sector / 2.0;
    return std::cos(std::numbers::pi / k) / std::cos(from_midline);
}

GridTarget build_grid(int k) {
    require_valid_k(k, "build_grid");
    const std::vector<Complex> v = vertices(k);
    GridTarget grid;
    grid.k = k;
    grid.pairs.reserve(static_cast<std::size_t>(k) * k);
    for (int m1 = 0; m1 < k; ++m1)
        for (int m2 = 0; m2 < k; ++m2) grid.pairs.emplace_back(v[m1], v[m2]);
    return grid;
}

GridTarget GridTarget::permuted(const std::vector<int>& perm) const {
    if (perm.size() != pairs.size())
        throw std::invalid_argument("GridTarget::permuted: bad permutation size");
    GridTarget out;
    out.k = k;
    out.pairs.resize(pairs.size());
    std::vector<char> seen(pairs.size(), 0);
    for (std::size_t j = 0; j < perm.size(); ++j) {
        const int p = perm[j];
        if (p < 0 || static_cast<std::size_t>(p) >= pairs.size() || seen[p])
            throw std::invalid_argument("GridTarget::permuted: not a permutation");
        seen[p] = 1;
        out.pairs[j] = pairs[p];
    }
    return out;
}

}  // namespace dilatron
