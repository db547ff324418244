#pragma once

// Dense complex primitives: Jacobi eigensolver and SVD, matrix absolute
// value, PSD square root, polar and sign factors, the geometric mean and the
// order/majorization predicates built on top of them.

#include "core.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace blockineq {

inline constexpr int kJacobiSweepCap = 64;

struct EigenDecomposition {
    Spectrum values;        // non-increasing
    UnitaryMatrix vectors;  // column i belongs to values.values()[i]
};

struct SvdDecomposition {
    UnitaryMatrix u;
    Spectrum sigma;
    UnitaryMatrix w;  // M = u diag(sigma) w*
};

namespace detail {

template <typename R>
using CMat = Eigen::Matrix<std::complex<R>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename R>
R off_diagonal_norm(const CMat<R>& a) {
    R s = 0;
    for (Index q = 0; q < a.cols(); ++q) {
        for (Index p = 0; p < a.rows(); ++p) {
            if (p != q) s += std::norm(a(p, q));
        }
    }
    return std::sqrt(s);
}

// Rotation parameters that annihilate the (p,q) entry of the 2x2 Hermitian
// [[app, apq], [conj(apq), aqq]] under J* A J with
// J = [[c, s w], [-s conj(w), c]].
template <typename R>
struct RotationT {
    R c;
    R s;
    std::complex<R> w;
};
using Rotation = RotationT<double>;

template <typename R>
RotationT<R> jacobi_rotation(R app, R aqq, std::complex<R> apq) {
    const R mag = std::abs(apq);
    const std::complex<R> w = apq / mag;
    const R theta = (aqq - app) / (2 * mag);
    R t;
    if (std::abs(theta) > R(1e150)) {
        t = R(0.5) / theta;
    } else {
        t = (theta >= 0 ? R(1) : R(-1)) / (std::abs(theta) + std::sqrt(theta * theta + 1));
    }
    const R c = 1 / std::sqrt(t * t + 1);
    return {c, t * c, w};
}

// Columns p, q of m <- columns of m * J.
template <typename R>
void rotate_columns(CMat<R>& m, Index p, Index q, const RotationT<R>& r) {
    const std::complex<R> sw = r.s * r.w;
    const std::complex<R> swc = r.s * std::conj(r.w);
    for (Index k = 0; k < m.rows(); ++k) {
        const std::complex<R> mp = m(k, p);
        const std::complex<R> mq = m(k, q);
        m(k, p) = r.c * mp - swc * mq;
        m(k, q) = sw * mp + r.c * mq;
    }
}

// Rows p, q of m <- rows of J* * m.
template <typename R>
void rotate_rows(CMat<R>& m, Index p, Index q, const RotationT<R>& r) {
    const std::complex<R> sw = r.s * r.w;
    const std::complex<R> swc = r.s * std::conj(r.w);
    for (Index k = 0; k < m.cols(); ++k) {
        const std::complex<R> mp = m(p, k);
        const std::complex<R> mq = m(q, k);
        m(p, k) = r.c * mp - sw * mq;
        m(q, k) = swc * mp + r.c * mq;
    }
}

// Cyclic Jacobi sweeps on Hermitian `a` (diagonalized in place), rotations
// accumulated into `v`. Returns false when `sweep_cap` sweeps are not enough.
template <typename R>
bool jacobi_diagonalize(CMat<R>& a, CMat<R>& v, int sweep_cap) {
    const Index n = a.rows();
    const R fro = a.norm();
    const R eps = std::numeric_limits<R>::epsilon();
    for (int sweep = 0; sweep <= sweep_cap; ++sweep) {
        const R off = off_diagonal_norm<R>(a);
        if (off == 0 || off <= eps * fro) return true;
        if (sweep == sweep_cap) break;
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const std::complex<R> apq = a(p, q);
                const R mag = std::abs(apq);
                if (mag == 0) continue;
                const R app = a(p, p).real();
                const R aqq = a(q, q).real();
                // negligible against both diagonal entries
                if (sweep > 3 && std::abs(app) + 100 * mag == std::abs(app) &&
                    std::abs(aqq) + 100 * mag == std::abs(aqq)) {
                    a(p, q) = 0;
                    a(q, p) = 0;
                    continue;
                }
                const RotationT<R> r = jacobi_rotation<R>(app, aqq, apq);
                rotate_columns<R>(a, p, q, r);
                rotate_rows<R>(a, p, q, r);
                a(p, q) = 0;
                a(q, p) = 0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                rotate_columns<R>(v, p, q, r);
            }
        }
    }
    return false;
}

inline std::vector<Index> descending_order(const std::vector<double>& v) {
    std::vector<Index> order(v.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return v[a] > v[b]; });
    return order;
}

// Extends the orthonormal columns flagged in `filled` to a full unitary by
// Gram-Schmidt against the standard basis, in index order.
inline void complete_orthonormal(Mat& u, std::vector<bool>& filled) {
    const Index n = u.rows();
    Index candidate = 0;
    for (Index col = 0; col < u.cols(); ++col) {
        if (filled[col]) continue;
        while (candidate < n) {
            Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
            v(candidate++) = 1.0;
            for (int pass = 0; pass < 2; ++pass) {
                for (Index j = 0; j < u.cols(); ++j) {
                    if (filled[j]) v -= u.col(j) * u.col(j).dot(v);
                }
            }
            const double nv = v.norm();
            if (nv > 1e-8) {
                u.col(col) = v / nv;
                filled[col] = true;
                break;
            }
        }
    }
}

}  // namespace detail

/// Cyclic Jacobi eigendecomposition H = U diag(lambda) U*, lambda sorted
/// non-increasing. Throws NonConvergence carrying the off-diagonal norm when
/// `sweep_cap` sweeps are not enough.
inline EigenDecomposition eigh(const HermitianMatrix& h, int sweep_cap = kJacobiSweepCap) {
    Mat a = h.mat();
    const Index n = a.rows();
    Mat v = Mat::Identity(n, n);
    if (!detail::jacobi_diagonalize<double>(a, v, sweep_cap)) {
        const double off = detail::off_diagonal_norm<double>(a);
        throw Error(ErrorKind::non_convergence,
                    "Jacobi eigensolver exceeded " + std::to_string(sweep_cap) +
                        " sweeps, off-diagonal residual " + std::to_string(off),
                    off);
    }

    std::vector<double> diag(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) diag[i] = a(i, i).real();
    const auto order = detail::descending_order(diag);
    Mat sorted(n, n);
    std::vector<double> lambda(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        sorted.col(i) = v.col(order[i]);
        lambda[i] = diag[order[i]];
    }
    return {Spectrum(std::move(lambda)), UnitaryMatrix::trusted(std::move(sorted))};
}

inline Spectrum eigvalsh(const HermitianMatrix& h) {
    return eigh(h).values;
}

/// Spectrum of |H|: the moduli of the eigenvalues of H.
inline Spectrum abs_spectrum(const HermitianMatrix& h) {
    std::vector<double> v = eigvalsh(h).values();
    for (double& x : v) x = std::abs(x);
    return Spectrum(std::move(v));
}

/// One-sided (Hestenes) Jacobi SVD, M = U diag(sigma) W*, sigma sorted
/// non-increasing. Columns of U for exactly vanishing singular values are
/// completed from the standard basis.
inline SvdDecomposition svd(const Mat& m, int sweep_cap = kJacobiSweepCap) {
    require_square(m, "SVD operand");
    const Index n = m.rows();
    Mat g = m;
    Mat w = Mat::Identity(n, n);
    const double eps = std::numeric_limits<double>::epsilon();
    // columns below this norm are rounding noise: never rotated, and their
    // left vectors come from the orthonormal completion
    const double negligible = static_cast<double>(n) * eps * m.norm();
    const double negligible2 = negligible * negligible;
    // rounding leaves a coupling of a few eps after each rotation
    const double coupling_tol = static_cast<double>(n) * eps;

    bool converged = n < 2;
    double worst = 0.0;
    for (int sweep = 0; sweep < sweep_cap && !converged; ++sweep) {
        bool rotated = false;
        worst = 0.0;
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const double alpha = g.col(p).squaredNorm();
                const double beta = g.col(q).squaredNorm();
                const cplx gamma = g.col(p).dot(g.col(q));  // conj(g_p) . g_q
                const double mag = std::abs(gamma);
                if (alpha <= negligible2 || beta <= negligible2) continue;
                if (mag == 0.0 || mag <= coupling_tol * std::sqrt(alpha * beta)) continue;
                worst = std::max(worst, mag / std::sqrt(alpha * beta));
                rotated = true;
                const detail::Rotation r = detail::jacobi_rotation(alpha, beta, gamma);
                detail::rotate_columns(g, p, q, r);
                detail::rotate_columns(w, p, q, r);
            }
        }
        converged = !rotated;
    }
    if (!converged) {
        throw Error(ErrorKind::non_convergence,
                    "one-sided Jacobi SVD exceeded " + std::to_string(sweep_cap) +
                        " sweeps, column coupling " + std::to_string(worst),
                    worst);
    }

    std::vector<double> norms(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) norms[i] = g.col(i).norm();
    const auto order = detail::descending_order(norms);
    Mat u = Mat::Zero(n, n);
    Mat ws(n, n);
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<bool> filled(static_cast<std::size_t>(n), false);
    for (Index i = 0; i < n; ++i) {
        const Index src = order[i];
        sigma[i] = norms[src];
        ws.col(i) = w.col(src);
        if (sigma[i] > negligible) {
            u.col(i) = g.col(src) / sigma[i];
            filled[i] = true;
        }
    }
    detail::complete_orthonormal(u, filled);
    return {UnitaryMatrix::trusted(std::move(u)), Spectrum(std::move(sigma)), UnitaryMatrix::trusted(std::move(ws))};
}

inline Spectrum singular_values(const Mat& m) {
    return svd(m).sigma;
}

inline Mat diag_matrix(const std::vector<double>& d) {
    Mat out = Mat::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) out(static_cast<Index>(i), static_cast<Index>(i)) = d[i];
    return out;
}

/// Reassembles U diag(f(lambda)) U* from an eigendecomposition.
template <typename F>
Mat spectral_function(const EigenDecomposition& e, F&& f) {
    const Mat& u = e.vectors.mat();
    Mat scaled = u;
    const auto& lambda = e.values.values();
    for (Index i = 0; i < u.cols(); ++i) scaled.col(i) *= f(lambda[i]);
    return scaled * u.adjoint();
}

/// |M| = (M*M)^{1/2}, assembled from the SVD as W diag(sigma) W*.
inline PsdMatrix matrix_abs(const Mat& m) {
    const SvdDecomposition s = svd(m);
    Mat scaled = s.w.mat();
    for (Index i = 0; i < scaled.cols(); ++i) scaled.col(i) *= s.sigma.values()[i];
    return PsdMatrix::trusted(scaled * s.w.mat().adjoint());
}

inline double op_norm(const Mat& m) {
    return singular_values(m).max();
}

/// Spectral norm of a Hermitian matrix, max |lambda|.
inline double hermitian_norm(const HermitianMatrix& h) {
    const Spectrum s = eigvalsh(h);
    return std::max(std::abs(s.max()), std::abs(s.min()));
}

namespace detail {

inline void require_psd_spectrum(const Spectrum& s, const Tolerance& tol, const char* what) {
    const double floor = -tol.rel * std::max(1.0, s.max());
    if (s.natural_dim() > 0 && s.min() < floor) {
        throw Error(ErrorKind::not_psd,
                    std::string(what) + ": lambda_min = " + std::to_string(s.min()), s.min());
    }
}

}  // namespace detail

inline PsdMatrix PsdMatrix::from(const Mat& m, const Tolerance& tol) {
    const HermitianMatrix h = HermitianMatrix::from(m, tol);
    detail::require_psd_spectrum(eigvalsh(h), tol, "PSD operand");
    return PsdMatrix(h.mat());
}

/// Principal square root. Eigenvalues inside the tolerance band below 0 are
/// clamped; anything lower is NotPsd.
inline PsdMatrix sqrt_psd(const HermitianMatrix& p, const Tolerance& tol = {}) {
    const EigenDecomposition e = eigh(p);
    detail::require_psd_spectrum(e.values, tol, "sqrt_psd");
    return PsdMatrix::trusted(spectral_function(e, [](double x) { return std::sqrt(std::max(x, 0.0)); }));
}

/// Unitary polar factor U = U_svd W_svd*, so that M = U |M|.
inline UnitaryMatrix polar_unitary(const Mat& m) {
    const SvdDecomposition s = svd(m);
    return UnitaryMatrix::trusted(s.u.mat() * s.w.mat().adjoint());
}

struct SignDecomposition {
    SymmetryMatrix sign;  // V with H = V |H|
    PsdMatrix abs;        // |H|
};

/// V = sum sign(lambda_i) u_i u_i*, with sign(lambda) := +1 when
/// |lambda| <= tol.abs * max(1, ||H||). Also returns |H| from the same basis.
inline SignDecomposition hermitian_sign_decomposition(const HermitianMatrix& h, const Tolerance& tol = {}) {
    const EigenDecomposition e = eigh(h);
    const double scale = std::max({1.0, std::abs(e.values.max()), std::abs(e.values.min())});
    const double zero = tol.abs * scale;
    Mat v = spectral_function(e, [zero](double x) { return (x < 0.0 && -x > zero) ? -1.0 : 1.0; });
    Mat a = spectral_function(e, [](double x) { return std::abs(x); });
    return {SymmetryMatrix::trusted(hermitian_part(v)), PsdMatrix::trusted(a)};
}

inline SymmetryMatrix hermitian_sign_symmetry(const HermitianMatrix& h, const Tolerance& tol = {}) {
    return hermitian_sign_decomposition(h, tol).sign;
}

inline Mat congruence(const Mat& v, const Mat& m) {
    return v * m * v.adjoint();
}

namespace detail {

// f applied to the eigenvalues of Hermitian h, at working precision R.
template <typename R, typename F>
CMat<R> hermitian_function(const CMat<R>& h, F&& f) {
    CMat<R> a = (h + h.adjoint()) / R(2);
    CMat<R> v = CMat<R>::Identity(h.rows(), h.cols());
    if (!jacobi_diagonalize<R>(a, v, kJacobiSweepCap)) {
        throw Error(ErrorKind::non_convergence, "Jacobi eigensolver did not converge in geometric_mean");
    }
    CMat<R> scaled = v;
    for (Index i = 0; i < v.cols(); ++i) scaled.col(i) *= f(a(i, i).real());
    return scaled * v.adjoint();
}

// A^{1/2} (A^{-1/2} B A^{-1/2})^{1/2} A^{1/2} at precision R; A definite.
template <typename R>
Mat geometric_mean_kernel(const Mat& am, const Mat& bm) {
    const CMat<R> a = am.cast<std::complex<R>>();
    const CMat<R> b = bm.cast<std::complex<R>>();
    const CMat<R> a_half = hermitian_function<R>(a, [](R x) { return std::sqrt(std::max(x, R(0))); });
    const CMat<R> a_mhalf = hermitian_function<R>(a, [](R x) { return 1 / std::sqrt(x); });
    const CMat<R> root =
        hermitian_function<R>(a_mhalf * b * a_mhalf, [](R x) { return std::sqrt(std::max(x, R(0))); });
    const CMat<R> g = a_half * root * a_half;
    return g.template cast<cplx>();
}

}  // namespace detail

/// A#B. Singular operands are regularized by eps = 1e-12 max(1, ||A||, ||B||)
/// added to both (A#B is monotone, so this can only enlarge the result);
/// operands with condition number beyond 1e6 are evaluated in extended
/// precision, since the double route loses ~1e-10 there.
inline PsdMatrix geometric_mean(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol = {}) {
    require_same_dim(a.mat(), b.mat(), "geometric_mean");
    const Index n = a.dim();
    const Spectrum sa = eigvalsh(a);
    const Spectrum sb = eigvalsh(b);
    detail::require_psd_spectrum(sa, tol, "geometric_mean left operand");
    detail::require_psd_spectrum(sb, tol, "geometric_mean right operand");
    const double scale = std::max({1.0, sa.max(), sb.max()});
    const double eps = 1e-12 * scale;

    Mat am = a.mat();
    Mat bm = b.mat();
    if (sa.min() <= eps || sb.min() <= eps) {
        am += eps * Mat::Identity(n, n);
        bm += eps * Mat::Identity(n, n);
    }
    const bool ill_conditioned = std::min(sa.min(), sb.min()) <= 1e-6 * scale;
    const Mat g = ill_conditioned ? detail::geometric_mean_kernel<long double>(am, bm)
                                  : detail::geometric_mean_kernel<double>(am, bm);
    return PsdMatrix::trusted(hermitian_part(g));
}

/// W = A^{-1/2} (A#B) B^{-1/2}, the unitary with A#B = A^{1/2} W B^{1/2}.
inline UnitaryMatrix geo_mean_unitary_link(const PsdMatrix& a, const PsdMatrix& b, const Tolerance& tol = {}) {
    require_same_dim(a.mat(), b.mat(), "geo_mean_unitary_link");
    const EigenDecomposition ea = eigh(a);
    const EigenDecomposition eb = eigh(b);
    for (const auto* e : {&ea, &eb}) {
        if (!(e->values.min() > tol.rel * e->values.max())) {
            throw Error(ErrorKind::singular_input, "geo_mean_unitary_link needs definite operands",
                        e->values.min());
        }
    }
    const Mat a_mhalf = spectral_function(ea, [](double x) { return 1.0 / std::sqrt(x); });
    const Mat b_mhalf = spectral_function(eb, [](double x) { return 1.0 / std::sqrt(x); });
    return UnitaryMatrix::trusted(a_mhalf * geometric_mean(a, b, tol).mat() * b_mhalf);
}

struct LoewnerResult {
    bool pass;
    double margin;  // lambda_min(R - L)
};

/// L <= R in the Loewner order, up to -tol.rel * max(1, ||R - L||).
inline LoewnerResult loewner_leq(const HermitianMatrix& lhs, const HermitianMatrix& rhs, const Tolerance& tol = {}) {
    require_same_dim(lhs.mat(), rhs.mat(), "loewner_leq");
    const Spectrum d = eigvalsh(HermitianMatrix::symmetrized(rhs.mat() - lhs.mat()));
    const double norm = std::max(std::abs(d.max()), std::abs(d.min()));
    const double margin = d.min();
    return {margin >= -tol.rel * std::max(1.0, norm), margin};
}

inline bool is_psd(const HermitianMatrix& h, const Tolerance& tol = {}) {
    const Spectrum s = eigvalsh(h);
    return s.min() >= -tol.rel * std::max(1.0, s.max());
}

namespace detail {

inline void require_nonnegative(const Spectrum& s, const Tolerance& tol) {
    const double floor = -tol.abs * std::max(1.0, s.max());
    if (s.natural_dim() > 0 && s.min() < floor) {
        throw Error(ErrorKind::invalid_spectrum, "majorization needs nonnegative entries", s.min());
    }
}

}  // namespace detail

/// Largest ratio prod_{i<=k} x_i / prod_{i<=k} y_i over k, computed with
/// log-sums. Entries at or below tol.abs * max(1, x_1, y_1) count as 0; a
/// zero partial product of y against a positive one of x yields +inf, 0/0
/// counts as 0.
inline double log_majorization_ratio(const Spectrum& x, const Spectrum& y, const Tolerance& tol = {}) {
    detail::require_nonnegative(x, tol);
    detail::require_nonnegative(y, tol);
    // x below `zero` counts as exactly 0; y is floored at the relative
    // tolerance so rounding noise in x over an exact zero of y stays benign
    const double scale = std::max({1.0, x.max(), y.max()});
    const double zero = tol.abs * scale;
    const double floor = tol.rel * scale;
    const std::size_t len = std::max(x.natural_dim(), y.natural_dim());
    const double neg_inf = -std::numeric_limits<double>::infinity();
    double lx = 0.0;
    double ly = 0.0;
    double worst = 0.0;
    for (std::size_t k = 1; k <= len; ++k) {
        const double xk = x.largest(k);
        const double yk = std::max(y.largest(k), floor);
        lx = (lx == neg_inf || xk <= zero) ? neg_inf : lx + std::log(xk);
        ly = (ly == neg_inf || yk <= zero) ? neg_inf : ly + std::log(yk);
        double ratio;
        if (lx == neg_inf) {
            ratio = 0.0;
        } else if (ly == neg_inf) {
            ratio = std::numeric_limits<double>::infinity();
        } else {
            ratio = std::exp(lx - ly);
        }
        worst = std::max(worst, ratio);
    }
    return worst;
}

/// x weakly log-majorized by y: every leading partial product of x is at
/// most (1 + tol.rel) times that of y.
inline bool weak_log_majorization(const Spectrum& x, const Spectrum& y, const Tolerance& tol = {}) {
    return log_majorization_ratio(x, y, tol) <= 1.0 + tol.rel;
}

/// x weakly majorized by y: sum_{i<=k} x_i <= sum_{i<=k} y_i + tol.rel * max(1, sum_{i<=k} y_i).
inline bool kyfan_weak_majorization(const Spectrum& x, const Spectrum& y, const Tolerance& tol = {}) {
    detail::require_nonnegative(x, tol);
    detail::require_nonnegative(y, tol);
    const std::size_t len = std::max(x.natural_dim(), y.natural_dim());
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t k = 1; k <= len; ++k) {
        sx += x.largest(k);
        sy += y.largest(k);
        if (sx > sy + tol.rel * std::max(1.0, sy)) return false;
    }
    return true;
}

inline Mat schur_product(const Mat& a, const Mat& b) {
    require_same_dim(a, b, "schur_product");
    return a.cwiseProduct(b);
}

inline Mat direct_sum(const Mat& a, const Mat& b) {
    Mat out = Mat::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    out.topLeftCorner(a.rows(), a.cols()) = a;
    out.bottomRightCorner(b.rows(), b.cols()) = b;
    return out;
}

/// delta^down: real diagonal entries sorted non-increasing.
inline Spectrum diag_entries_desc(const HermitianMatrix& h) {
    std::vector<double> d(static_cast<std::size_t>(h.dim()));
    for (Index i = 0; i < h.dim(); ++i) d[i] = h.mat()(i, i).real();
    return Spectrum(std::move(d));
}

}  // namespace blockineq
