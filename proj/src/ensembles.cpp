#include "dilatron/ensembles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace dilatron {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
}

}  // namespace

std::uint64_t CounterRng::next_u64() {
    ++counter_;
    return mix64(seed_ + counter_ * kGoldenGamma);
}

double CounterRng::next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_double_open() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_below: empty range");
    const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
    for (;;) {
        std::uint64_t x = next_u64();
        if (x >= threshold) return x % n;
    }
}

double CounterRng::next_gaussian() {
    const double u1 = next_double_open();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

std::complex<double> CounterRng::next_complex_gaussian() {
    const double u1 = next_double_open();
    const double u2 = next_double();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    return {radius * std::cos(2.0 * std::numbers::pi * u2),
            radius * std::sin(2.0 * std::numbers::pi * u2)};
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + kGoldenGamma));
}

ComplexMatrix sample_haar_unitary(const EnsembleSpec& spec) {
    if (spec.kind != EnsembleKind::haar_unitary)
        throw std::invalid_argument("sample_haar_unitary: wrong ensemble kind");
    if (spec.dimension < 1)
        throw std::invalid_argument("sample_haar_unitary: dimension must be >= 1");
    const int n = spec.dimension;
    CounterRng rng(spec.seed);
    ComplexMatrix g(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = rng.next_complex_gaussian();
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= (a > 0.0) ? d / a : Complex(1.0, 0.0);
    }
    return q;
}

ComplexMatrix sample_permutation(const EnsembleSpec& spec) {
    if (spec.kind != EnsembleKind::permutation)
        throw std::invalid_argument("sample_permutation: wrong ensemble kind");
    if (spec.dimension < 1)
        throw std::invalid_argument("sample_permutation: dimension must be >= 1");
    const int n = spec.dimension;
    CounterRng rng(spec.seed);
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    for (int i = n - 1; i > 0; --i) {
        const int j = static_cast<int>(rng.next_below(i + 1));
        std::swap(perm[i], perm[j]);
    }
    ComplexMatrix p = ComplexMatrix::Zero(n, n);
    for (int col = 0; col < n; ++col) p(perm[col], col) = 1.0;
    return p;
}

ComplexMatrix sample(const EnsembleSpec& spec) {
    switch (spec.kind) {
        case EnsembleKind::haar_unitary:
            return sample_haar_unitary(spec);
        case EnsembleKind::permutation:
            return sample_permutation(spec);
    }
    throw std::invalid_argument("sample: unknown ensemble kind");
}

std::pair<ComplexMatrix, ComplexMatrix> sample_pair(const EnsembleSpec& a,
                                                    const EnsembleSpec& b) {
    if (a.dimension != b.dimension)
        throw std::invalid_argument("sample_pair: dimension mismatch");
    return {sample(a), sample(b)};
}

std::pair<ComplexMatrix, ComplexMatrix> sample_haar_pair(
    int n, std::uint64_t master) {
    EnsembleSpec a{EnsembleKind::haar_unitary, n, split_seed(master, 0)};
    EnsembleSpec b{EnsembleKind::haar_unitary, n, split_seed(master, 1)};
    return sample_pair(a, b);
}

}  // namespace dilatron
