#pragma once

#include <cstdint>
#include <random>

#include "dilation/linalg.hpp"

namespace dilation {

// Seeded source of random test and generator matrices.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform(double lo = 0.0, double hi = 1.0);
    int uniform_int(int lo, int hi);  // inclusive
    double gaussian();
    cplx phase();

    CMatrix gaussian_matrix(Index rows, Index cols);
    // Haar distributed unitary
    CMatrix unitary(Index n);
    // orthogonal projection of the given rank onto a random subspace
    CMatrix projection(Index n, Index rank);
    // random matrix with operator norm exactly `norm`
    CMatrix contraction(Index n, double norm);
    CMatrix hermitian(Index n);

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
};

}  // namespace dilation
