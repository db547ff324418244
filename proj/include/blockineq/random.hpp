#pragma once

// Seeded sampling helpers. Every stream is derived from a 64-bit seed with
// splitmix64 so runs are reproducible bit-for-bit.

#include "linalg.hpp"

#include <cstdint>
#include <random>

namespace blockineq {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Child seed for stream `index` of `seed`: splitmix64(seed ^ splitmix64(index)).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(seed ^ splitmix64(index));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }

    /// Standard complex Gaussian: (N(0,1) + i N(0,1)) / sqrt(2).
    cplx complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * M_SQRT1_2, im * M_SQRT1_2};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

inline Mat ginibre(Index rows, Index cols, Rng& rng) {
    Mat g(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
    }
    return g;
}

/// The unitary polar factor of a square Ginibre matrix is Haar distributed.
inline UnitaryMatrix haar_unitary(Index n, Rng& rng) {
    return polar_unitary(ginibre(n, n, rng));
}

inline PsdMatrix random_psd(Index n, Rng& rng) {
    const Mat g = ginibre(n, n, rng);
    return PsdMatrix::trusted(g.adjoint() * g);
}

inline HermitianMatrix random_hermitian(Index n, Rng& rng) {
    return HermitianMatrix::symmetrized(ginibre(n, n, rng));
}

/// Normal matrix U diag(z) U* with Haar U and complex Gaussian z.
inline Mat random_normal_matrix(Index n, Rng& rng) {
    const Mat u = haar_unitary(n, rng).mat();
    Mat d = Mat::Zero(n, n);
    for (Index i = 0; i < n; ++i) d(i, i) = rng.complex_normal();
    return u * d * u.adjoint();
}

/// Clips singular values at 1, the spectral-norm projection onto contractions.
inline Mat clip_to_contraction(const Mat& m) {
    const SvdDecomposition s = svd(m);
    Mat scaled = s.u.mat();
    for (Index i = 0; i < scaled.cols(); ++i) scaled.col(i) *= std::min(1.0, s.sigma.values()[i]);
    return scaled * s.w.mat().adjoint();
}

inline Mat random_contraction(Index n, Rng& rng) {
    return clip_to_contraction(ginibre(n, n, rng));
}

}  // namespace blockineq
