#pragma once

// Positive semidefinite 2n x 2n matrices [[A, X], [X*, B]] with n x n
// blocks: validated construction, the standard constructions (Gram, polar,
// dominance, dilation) and seeded sampling.

#include "linalg.hpp"
#include "random.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace blockineq {

class PsdBlock {
public:
    Index n() const noexcept { return x_.rows(); }
    const PsdMatrix& a() const noexcept { return a_; }
    const Mat& x() const noexcept { return x_; }
    const PsdMatrix& b() const noexcept { return b_; }
    /// lambda_min of the assembled matrix at construction.
    double margin() const noexcept { return margin_; }

    Mat assembled() const {
        const Index k = n();
        Mat m(2 * k, 2 * k);
        m.topLeftCorner(k, k) = a_.mat();
        m.topRightCorner(k, k) = x_;
        m.bottomLeftCorner(k, k) = x_.adjoint();
        m.bottomRightCorner(k, k) = b_.mat();
        return m;
    }

    /// [[B, X*], [X, A]], the congruence by the block swap.
    PsdBlock swapped() const { return PsdBlock(b_, x_.adjoint(), a_, margin_); }

    friend PsdBlock make_block(const Mat& a, const Mat& x, const Mat& b, const Tolerance& tol);
    friend PsdBlock block_from_assembled(const Mat& m, const Tolerance& tol);

private:
    PsdBlock(PsdMatrix a, Mat x, PsdMatrix b, double margin)
        : a_(std::move(a)), x_(std::move(x)), b_(std::move(b)), margin_(margin) {}

    PsdMatrix a_;
    Mat x_;
    PsdMatrix b_;
    double margin_ = 0.0;
};

/// Validates the assembled matrix: NotPsd carries the offending lambda_min.
inline PsdBlock make_block(const Mat& a, const Mat& x, const Mat& b, const Tolerance& tol = {}) {
    require_square(a, "block A");
    require_square(x, "block X");
    require_square(b, "block B");
    require_same_dim(a, x, "block A vs X");
    require_same_dim(a, b, "block A vs B");
    const PsdMatrix pa = PsdMatrix::from(a, tol);
    const PsdMatrix pb = PsdMatrix::from(b, tol);
    PsdBlock blk(pa, x, pb, 0.0);
    const Spectrum s = eigvalsh(HermitianMatrix::symmetrized(blk.assembled()));
    if (s.min() < -tol.rel * std::max(1.0, s.max())) {
        throw Error(ErrorKind::not_psd, "block matrix lambda_min = " + std::to_string(s.min()), s.min());
    }
    blk.margin_ = s.min();
    return blk;
}

/// Splits a 2n x 2n PSD matrix into its four n x n blocks.
inline PsdBlock block_from_assembled(const Mat& m, const Tolerance& tol = {}) {
    require_square(m, "block matrix");
    if (m.rows() % 2 != 0) {
        throw Error(ErrorKind::dimension_mismatch, "block matrix must have even dimension");
    }
    const Index k = m.rows() / 2;
    const Mat h = hermitian_part(m);
    return make_block(h.topLeftCorner(k, k), h.topRightCorner(k, k), h.bottomRightCorner(k, k), tol);
}

struct FactorPair {
    Mat a;
    Mat b;
};

/// Pairs (A_i, B_i) of d x d matrices sharing one dimension.
class FactorList {
public:
    FactorList() = default;
    explicit FactorList(std::vector<FactorPair> pairs) : pairs_(std::move(pairs)) { validate(); }

    const std::vector<FactorPair>& pairs() const noexcept { return pairs_; }
    bool empty() const noexcept { return pairs_.empty(); }
    Index dim() const { return pairs_.empty() ? 0 : pairs_.front().a.rows(); }

    Mat sum_aa() const { return accumulate([](const FactorPair& p) { return Mat(p.a.adjoint() * p.a); }); }
    Mat sum_ab() const { return accumulate([](const FactorPair& p) { return Mat(p.a.adjoint() * p.b); }); }
    Mat sum_ba() const { return accumulate([](const FactorPair& p) { return Mat(p.b.adjoint() * p.a); }); }
    Mat sum_bb() const { return accumulate([](const FactorPair& p) { return Mat(p.b.adjoint() * p.b); }); }

private:
    void validate() const {
        for (const FactorPair& p : pairs_) {
            require_square(p.a, "factor A_i");
            require_square(p.b, "factor B_i");
            require_same_dim(p.a, pairs_.front().a, "factor list");
            require_same_dim(p.b, pairs_.front().a, "factor list");
        }
    }

    template <typename F>
    Mat accumulate(F&& term) const {
        if (pairs_.empty()) throw Error(ErrorKind::empty_input, "factor list is empty");
        Mat sum = Mat::Zero(dim(), dim());
        for (const FactorPair& p : pairs_) sum += term(p);
        return sum;
    }

    std::vector<FactorPair> pairs_;
};

/// [[sum A_i* A_i, sum A_i* B_i], [sum B_i* A_i, sum B_i* B_i]].
inline PsdBlock gram_block(const FactorList& f, const Tolerance& tol = {}) {
    if (f.empty()) throw Error(ErrorKind::empty_input, "gram_block needs at least one pair");
    return make_block(f.sum_aa(), f.sum_ab(), f.sum_bb(), tol);
}

/// [[A*A, A*B], [B*A, B*B]].
inline PsdBlock gram_pair_block(const Mat& a, const Mat& b, const Tolerance& tol = {}) {
    return gram_block(FactorList({{a, b}}), tol);
}

/// [[|Z*|, Z], [Z*, |Z|]].
inline PsdBlock polar_block(const Mat& z, const Tolerance& tol = {}) {
    require_square(z, "polar_block operand");
    return make_block(matrix_abs(z.adjoint()).mat(), z, matrix_abs(z).mat(), tol);
}

/// [[T, S], [S, T]], positive exactly when +-S <= T.
inline PsdBlock dominance_block(const HermitianMatrix& s, const HermitianMatrix& t, const Tolerance& tol = {}) {
    require_same_dim(s.mat(), t.mat(), "dominance_block");
    const LoewnerResult plus = loewner_leq(s, t, tol);
    if (!plus.pass) {
        throw Error(ErrorKind::dominance_violated, "S <= T fails by " + std::to_string(-plus.margin), plus.margin);
    }
    const LoewnerResult minus = loewner_leq(HermitianMatrix::symmetrized(-s.mat()), t, tol);
    if (!minus.pass) {
        throw Error(ErrorKind::dominance_violated, "-S <= T fails by " + std::to_string(-minus.margin),
                    minus.margin);
    }
    return make_block(t.mat(), s.mat(), t.mat(), tol);
}

/// [[0, A], [A*, 0]].
inline HermitianMatrix hermitian_dilation(const Mat& a) {
    require_square(a, "dilation operand");
    const Index n = a.rows();
    Mat d = Mat::Zero(2 * n, 2 * n);
    d.topRightCorner(n, n) = a;
    d.bottomLeftCorner(n, n) = a.adjoint();
    return HermitianMatrix::symmetrized(d);
}

/// Partition of G*G for a rank x 2n complex Ginibre G drawn from `seed`.
inline PsdBlock sample_psd_block(Index n, Index rank, std::uint64_t seed, const Tolerance& tol = {}) {
    if (n < 1 || rank < 1 || rank > 2 * n) {
        throw Error(ErrorKind::invalid_rank,
                    "rank " + std::to_string(rank) + " outside [1, " + std::to_string(2 * n) + "]");
    }
    Rng rng(seed);
    const Mat g = ginibre(rank, 2 * n, rng);
    return block_from_assembled(g.adjoint() * g, tol);
}

}  // namespace blockineq
