#pragma once

// Scalar consequences of the block inequalities: eigenvalue, diagonal-entry,
// Ky Fan / log-majorization and determinant bounds. Each checker returns a
// CheckReport with the two sides at the worst index it examined.

#include "block.hpp"
#include "linalg.hpp"
#include "witness.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace blockineq {

enum class CheckId {
    tao,
    weyl_geo,
    gram_geo,
    norm_wlog,
    gram_norm,
    diag_entries,
    zpolar_wlog,
    akext,
    audeh_kittaneh,
    akext2,
    bhatia_davis,
    det_schwarz,
};

inline const char* to_string(CheckId id) {
    switch (id) {
    case CheckId::tao: return "tao";
    case CheckId::weyl_geo: return "weyl_geo";
    case CheckId::gram_geo: return "gram_geo";
    case CheckId::norm_wlog: return "norm_wlog";
    case CheckId::gram_norm: return "gram_norm";
    case CheckId::diag_entries: return "diag_entries";
    case CheckId::zpolar_wlog: return "zpolar_wlog";
    case CheckId::akext: return "akext";
    case CheckId::audeh_kittaneh: return "audeh_kittaneh";
    case CheckId::akext2: return "akext2";
    case CheckId::bhatia_davis: return "bhatia_davis";
    case CheckId::det_schwarz: return "det_schwarz";
    }
    return "?";
}

using Params = std::vector<std::pair<std::string, double>>;

struct CheckReport {
    CheckId check{};
    std::string op;  // "plus", "schur", "minus" where a diamond applies
    Params params;
    double lhs_value = 0.0;
    double rhs_value = 0.0;
    bool pass = false;             // lhs <= rhs + tol.rel * max(1, |rhs|)
    double worst_violation = 0.0;  // lhs - rhs at the reported index
    std::vector<std::string> notes;

    double param(const std::string& key) const {
        for (const auto& [k, v] : params) {
            if (k == key) return v;
        }
        throw Error(ErrorKind::invalid_config, "no parameter " + key);
    }
};

/// lhs <= rhs + tol.rel * max(1, |rhs|); -inf <= -inf holds.
inline bool within(double lhs, double rhs, const Tolerance& tol) {
    if (std::isinf(rhs) && rhs < 0.0) return std::isinf(lhs) && lhs < 0.0;
    return lhs <= rhs + tol.rel * std::max(1.0, std::abs(rhs));
}

namespace detail {

// Normalized slack, used to pick the worst index among several comparisons.
inline double slack(double lhs, double rhs) {
    if (std::isinf(rhs) && rhs < 0.0) return (std::isinf(lhs) && lhs < 0.0) ? 0.0 : -std::numeric_limits<double>::infinity();
    return (rhs - lhs) / std::max(1.0, std::abs(rhs));
}

inline CheckReport make_check(CheckId id, Params params, double lhs, double rhs, const Tolerance& tol) {
    CheckReport r;
    r.check = id;
    r.params = std::move(params);
    r.lhs_value = lhs;
    r.rhs_value = rhs;
    r.pass = within(lhs, rhs, tol);
    r.worst_violation = (std::isinf(lhs) && std::isinf(rhs)) ? 0.0 : lhs - rhs;
    return r;
}

// Keeps whichever comparison has the smaller normalized slack.
struct WorstTracker {
    bool any = false;
    double lhs = 0.0;
    double rhs = 0.0;
    Params params;

    void offer(double l, double r, Params p) {
        if (!any || slack(l, r) < slack(lhs, rhs)) {
            any = true;
            lhs = l;
            rhs = r;
            params = std::move(p);
        }
    }
};

inline std::size_t to_index(int i) {
    if (i < 0) throw Error(ErrorKind::index_constraint, "indices must be nonnegative");
    return static_cast<std::size_t>(i);
}

}  // namespace detail

/// 2 lambda_j(|X|) <= lambda_j(block) for j = 1..n; reports the worst j.
inline CheckReport tao_bound(const PsdBlock& blk, const Tolerance& tol = {}) {
    const Spectrum sx = singular_values(blk.x());
    const Spectrum sm = eigvalsh(HermitianMatrix::symmetrized(blk.assembled()));
    detail::WorstTracker w;
    for (std::size_t j = 1; j <= static_cast<std::size_t>(blk.n()); ++j) {
        w.offer(2.0 * sx.largest(j), sm.largest(j), {{"j", static_cast<double>(j)}});
    }
    return detail::make_check(CheckId::tao, w.params, w.lhs, w.rhs, tol);
}

/// lambda_{1+j+k}(|X o X*|)^2 <= lambda_{1+j}(A o B) lambda_{1+k}(A o B);
/// for o = minus the right side uses A + B.
inline CheckReport weyl_geo_check(const PsdBlock& blk, Diamond op, int j, int k, const Tolerance& tol = {}) {
    const std::size_t jj = detail::to_index(j);
    const std::size_t kk = detail::to_index(k);
    const Spectrum lhs = eigvalsh(hermitian_sign_decomposition(combine_offdiag(blk.x(), op), tol).abs);
    const Spectrum rhs = eigvalsh(combine_diag(blk.a(), blk.b(), op));
    const double l = lhs.largest(1 + jj + kk);
    CheckReport r = detail::make_check(CheckId::weyl_geo, {{"j", double(j)}, {"k", double(k)}}, l * l,
                                       rhs.largest(1 + jj) * rhs.largest(1 + kk), tol);
    r.op = to_string(op);
    if (op == Diamond::minus) r.notes.emplace_back("minus case read with A+B on the right");
    return r;
}

/// weyl_geo_check on the Gram block [[A*A, A*B], [B*A, B*B]].
inline CheckReport gram_geo_check(const Mat& a, const Mat& b, Diamond op, int j, int k, const Tolerance& tol = {}) {
    detail::require_op(op, {Diamond::plus, Diamond::schur}, "gram_geo_check");
    CheckReport r = weyl_geo_check(gram_pair_block(a, b, tol), op, j, k, tol);
    r.check = CheckId::gram_geo;
    return r;
}

/// Log-majorization x <_wlog y as a CheckReport: lhs is the worst partial
/// product ratio, rhs is 1. Ky Fan spot checks on `alpha_grid` run as well;
/// a passing log-majorization with a failing spot check is flagged.
inline CheckReport wlog_report(CheckId id, Params params, const Spectrum& x, const Spectrum& y,
                               const std::vector<double>& alpha_grid, const Tolerance& tol) {
    const double ratio = log_majorization_ratio(x, y, tol);
    CheckReport r = detail::make_check(id, std::move(params), ratio, 1.0, tol);
    bool kyfan_all = true;
    // small powers blow rounding noise up (1e-16^0.1 ~ 0.03), so zero it first
    const double noise = tol.rel * std::max({1.0, x.max(), y.max()});
    const Spectrum xs = x.zero_below(noise);
    const Spectrum ys = y.zero_below(noise);
    for (double alpha : alpha_grid) {
        const bool ok = kyfan_weak_majorization(xs.pow(alpha), ys.pow(alpha), tol);
        kyfan_all = kyfan_all && ok;
        if (!ok) r.notes.emplace_back("Ky Fan spot check failed at alpha=" + std::to_string(alpha));
    }
    r.params.emplace_back("kyfan_ok", kyfan_all ? 1.0 : 0.0);
    if (r.pass && !kyfan_all) {
        r.pass = false;
        r.notes.emplace_back("inconsistent: log-majorization holds but a Ky Fan spot check fails");
    }
    return r;
}

inline const std::vector<double>& default_alpha_grid() {
    static const std::vector<double> grid{0.1, 0.5, 1.0, 2.0, 4.0};
    return grid;
}

/// ||  |X o X*|^alpha || <= || (A o B)^alpha || for all alpha > 0 and all
/// unitarily invariant norms, i.e. |X o X*| <_wlog A o B.
inline CheckReport norm_check(const PsdBlock& blk, Diamond op, const Tolerance& tol = {}) {
    detail::require_op(op, {Diamond::plus, Diamond::schur}, "norm_check");
    const Spectrum x = eigvalsh(hermitian_sign_decomposition(combine_offdiag(blk.x(), op), tol).abs);
    const Spectrum y = eigvalsh(combine_diag(blk.a(), blk.b(), op));
    CheckReport r = wlog_report(CheckId::norm_wlog, {}, x, y, default_alpha_grid(), tol);
    r.op = to_string(op);
    return r;
}

inline CheckReport gram_norm_check(const Mat& a, const Mat& b, Diamond op, const Tolerance& tol = {}) {
    CheckReport r = norm_check(gram_pair_block(a, b, tol), op, tol);
    r.check = CheckId::gram_norm;
    return r;
}

/// lambda_{1+2j}(|Z o Z*|) <= min(delta_{1+j}(Z*Z), delta_{1+j}(ZZ*)).
inline CheckReport diag_check(const Mat& z, int j, const Tolerance& tol = {}) {
    require_square(z, "diag_check operand");
    const std::size_t jj = detail::to_index(j);
    if (jj >= static_cast<std::size_t>(z.rows())) {
        throw Error(ErrorKind::index_constraint, "diag_check needs 0 <= j <= n-1");
    }
    const Spectrum lhs = abs_spectrum(combine_offdiag(z, Diamond::schur));
    const Spectrum d1 = diag_entries_desc(HermitianMatrix::symmetrized(z.adjoint() * z));
    const Spectrum d2 = diag_entries_desc(HermitianMatrix::symmetrized(z * z.adjoint()));
    return detail::make_check(CheckId::diag_entries, {{"j", double(j)}}, lhs.largest(1 + 2 * jj),
                              std::min(d1.largest(1 + jj), d2.largest(1 + jj)), tol);
}

struct ZPolarReports {
    CheckReport wlog;     // |Z o Z*| <_wlog |Z| o |Z*|
    WitnessReport geo;    // |Z o Z*| <= (|Z| o |Z*|) # V (|Z| o |Z*|) V
};

inline ZPolarReports zpolar_checks(const Mat& z, Diamond op, const Tolerance& tol = {}) {
    detail::require_op(op, {Diamond::plus, Diamond::schur}, "zpolar_checks");
    const PsdBlock blk = polar_block(z, tol);
    const Spectrum x = abs_spectrum(combine_offdiag(z, op));
    const Spectrum y = eigvalsh(combine_diag(blk.b(), blk.a(), op));
    ZPolarReports out{
        wlog_report(CheckId::zpolar_wlog, {}, x, y, default_alpha_grid(), tol),
        theorem_witness(blk, op, tol).geo_form,
    };
    out.wlog.op = to_string(op);
    out.geo.claim = op == Diamond::plus ? ClaimId::zpolar_plus_geo : ClaimId::zpolar_schur_geo;
    return out;
}

/// lambda_{j+1}(|X|) <= sqrt(lambda_{k+1}(A(+)B) lambda_{l+1}(A(+)B)) for 2j = k + l,
/// with lambda_i := 0 past the dimension.
inline CheckReport akext_check(const PsdBlock& blk, int j, int k, int l, const Tolerance& tol = {}) {
    const std::size_t jj = detail::to_index(j);
    const std::size_t kk = detail::to_index(k);
    const std::size_t ll = detail::to_index(l);
    if (2 * jj != kk + ll) {
        throw Error(ErrorKind::index_constraint, "akext_check needs 2j = k + l");
    }
    const Spectrum sx = singular_values(blk.x());
    const Spectrum sd = eigvalsh(HermitianMatrix::symmetrized(direct_sum(blk.a().mat(), blk.b().mat())));
    const double rhs = std::sqrt(std::max(0.0, sd.largest(kk + 1)) * std::max(0.0, sd.largest(ll + 1)));
    return detail::make_check(CheckId::akext, {{"j", double(j)}, {"k", double(k)}, {"l", double(l)}},
                              sx.largest(jj + 1), rhs, tol);
}

/// lambda_{j+1}(|X|) <= lambda_{j+1}(A(+)B) evaluated directly.
inline CheckReport audeh_kittaneh_check(const PsdBlock& blk, int j, const Tolerance& tol = {}) {
    const std::size_t jj = detail::to_index(j);
    const Spectrum sx = singular_values(blk.x());
    const Spectrum sd = eigvalsh(HermitianMatrix::symmetrized(direct_sum(blk.a().mat(), blk.b().mat())));
    return detail::make_check(CheckId::audeh_kittaneh, {{"j", double(j)}}, sx.largest(jj + 1),
                              sd.largest(jj + 1), tol);
}

/// akext_check on [[|A*|+|B*|, A+B], [A*+B*, |A|+|B|]], the sum of two polar blocks.
inline CheckReport akext2_check(const Mat& a, const Mat& b, int j, int k, int l, const Tolerance& tol = {}) {
    require_square(a, "A");
    require_same_dim(a, b, "akext2_check");
    const Mat m = polar_block(a, tol).assembled() + polar_block(b, tol).assembled();
    CheckReport r = akext_check(block_from_assembled(m, tol), j, k, l, tol);
    r.check = CheckId::akext2;
    return r;
}

/// || |sum B_i* A_i|^alpha ||^2 <= || |sum B_i* B_i|^alpha || || |sum A_i* A_i|^alpha ||
/// for every Ky Fan k-norm and every alpha in the grid; reports the worst (k, alpha).
inline CheckReport bhatia_davis_check(const FactorList& f, const std::vector<double>& alpha_grid,
                                      const Tolerance& tol = {}) {
    if (f.empty()) throw Error(ErrorKind::empty_input, "bhatia_davis_check needs at least one pair");
    auto denoise = [&](const Spectrum& s) { return s.zero_below(tol.rel * std::max(1.0, s.max())); };
    const Spectrum sy = denoise(singular_values(f.sum_ba()));
    const Spectrum sb = denoise(eigvalsh(HermitianMatrix::symmetrized(f.sum_bb())));
    const Spectrum sa = denoise(eigvalsh(HermitianMatrix::symmetrized(f.sum_aa())));
    detail::WorstTracker w;
    for (double alpha : alpha_grid) {
        if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_config, "alpha must be positive");
        const Spectrum y = sy.pow(alpha);
        const Spectrum b = sb.pow(alpha);
        const Spectrum a = sa.pow(alpha);
        double ny = 0.0;
        double nb = 0.0;
        double na = 0.0;
        for (std::size_t k = 1; k <= sy.natural_dim(); ++k) {
            ny += y.largest(k);
            nb += b.largest(k);
            na += a.largest(k);
            w.offer(ny * ny, nb * na, {{"k", double(k)}, {"alpha", alpha}});
        }
    }
    return detail::make_check(CheckId::bhatia_davis, w.params, w.lhs, w.rhs, tol);
}

/// log det^2 |sum B_i* A_i| <= log det(sum B_i* B_i) + log det(sum A_i* A_i),
/// summed over spectra; eigenvalues at or below tol.abs * scale count as 0
/// and give -inf.
inline CheckReport det_schwarz_check(const FactorList& f, const Tolerance& tol = {}) {
    if (f.empty()) throw Error(ErrorKind::empty_input, "det_schwarz_check needs at least one pair");
    const Spectrum sy = singular_values(f.sum_ba());
    const Spectrum sb = eigvalsh(HermitianMatrix::symmetrized(f.sum_bb()));
    const Spectrum sa = eigvalsh(HermitianMatrix::symmetrized(f.sum_aa()));
    const double neg_inf = -std::numeric_limits<double>::infinity();
    auto log_det = [&](const Spectrum& s, double scale) {
        double acc = 0.0;
        for (double v : s.values()) {
            if (v <= tol.abs * std::max(1.0, scale)) return neg_inf;
            acc += std::log(v);
        }
        return acc;
    };
    const double lhs = 2.0 * log_det(sy, std::sqrt(std::max(sa.max(), 0.0) * std::max(sb.max(), 0.0)));
    const double rhs = log_det(sb, sb.max()) + log_det(sa, sa.max());
    return detail::make_check(CheckId::det_schwarz, {}, lhs, rhs, tol);
}

struct ProjectionRatio {
    double ratio;             // lambda_2(|P - Q|) / lambda_2(P + Q)
    double closed_form;       // sin a / (1 - |cos a|), valid on all of (0, pi)
    double small_angle_form;  // sin a / (1 - cos a); equals closed_form only for a <= pi/2
};

/// Rank-one projections P = e1 e1*, Q onto (cos a, sin a).
inline ProjectionRatio projection_ratio(double angle) {
    if (!(angle > 0.0) || !(angle < M_PI)) {
        throw Error(ErrorKind::degenerate_angle, "angle must lie in (0, pi)", angle);
    }
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    Mat p = Mat::Zero(2, 2);
    p(0, 0) = 1.0;
    Mat q(2, 2);
    q << c * c, c * s, c * s, s * s;
    const Spectrum diff = eigvalsh(HermitianMatrix::symmetrized(matrix_abs(p - q).mat()));
    const Spectrum sum = eigvalsh(HermitianMatrix::symmetrized(p + q));
    return {diff.largest(2) / sum.largest(2), s / (1.0 - std::abs(c)), s / (1.0 - c)};
}

}  // namespace blockineq
