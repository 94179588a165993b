#pragma once

#include <cstdint>
#include <utility>

#include "dilatron/linalg.hpp"
#include "dilatron/rng.hpp"

namespace dilatron {

enum class EnsembleKind { haar_unitary, permutation };

// A sample is a pure function of its spec: identical spec, identical matrix.
struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::haar_unitary;
    int dimension = 0;
    std::uint64_t seed = 0;
};

// Ginibre matrix (i.i.d. standard complex Gaussians), QR, then the Q factor
// is multiplied on the right by diag(r_jj/|r_jj|). Without that phase fix the
// QR map is not measurable-invariant and the law is not Haar.
ComplexMatrix sample_haar_unitary(const EnsembleSpec& spec);

// Uniform over S_N via Fisher-Yates; exact 0/1 entries.
ComplexMatrix sample_permutation(const EnsembleSpec& spec);

ComplexMatrix sample(const EnsembleSpec& spec);

// Two independent samples; dimensions must agree. Callers derive the two
// seeds from a master via split_seed(master, 0) and split_seed(master, 1).
std::pair<ComplexMatrix, ComplexMatrix> sample_pair(const EnsembleSpec& a,
                                                    const EnsembleSpec& b);

// Convenience: an independent Haar pair from one master seed, using the
// split rule above.
std::pair<ComplexMatrix, ComplexMatrix> sample_haar_pair(int n,
                                                         std::uint64_t master);

}  // namespace dilatron
