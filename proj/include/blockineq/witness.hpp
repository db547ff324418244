#pragma once

// Explicit witnesses for the "there is a unitary (symmetry) V" inequalities
// on PSD blocks. Each operation builds the canonical V (sign symmetry or
// polar unitary of the relevant matrix) and certifies lhs <= rhs in the
// Loewner order, reporting the margin lambda_min(rhs - lhs).

#include "block.hpp"
#include "linalg.hpp"

#include <string>
#include <utility>
#include <vector>

namespace blockineq {

/// The binary operation joining X with X* and A with B.
enum class Diamond { plus, schur, minus };

inline const char* to_string(Diamond op) {
    switch (op) {
    case Diamond::plus: return "plus";
    case Diamond::schur: return "schur";
    case Diamond::minus: return "minus";
    }
    return "?";
}

/// X + X*, X o X*, or i(X - X*) (the Hermitian matrix whose modulus is |X - X*|).
inline HermitianMatrix combine_offdiag(const Mat& x, Diamond op) {
    switch (op) {
    case Diamond::plus: return HermitianMatrix::symmetrized(x + x.adjoint());
    case Diamond::schur: return HermitianMatrix::symmetrized(x.cwiseProduct(x.adjoint()));
    case Diamond::minus: return HermitianMatrix::symmetrized(kI * (x - x.adjoint()));
    }
    throw Error(ErrorKind::invalid_config, "unknown diamond op");
}

/// A + B, or A o B for the Schur product. The minus case uses A + B.
inline PsdMatrix combine_diag(const PsdMatrix& a, const PsdMatrix& b, Diamond op) {
    if (op == Diamond::schur) return PsdMatrix::trusted(schur_product(a.mat(), b.mat()));
    return PsdMatrix::trusted(a.mat() + b.mat());
}

enum class ClaimId {
    theorem_plus_agm,
    theorem_plus_geo,
    theorem_schur_agm,
    theorem_schur_geo,
    minus_agm,
    minus_geo,
    mean_plus,
    mean_minus,
    offdiag_adjoint,
    offdiag_abs,
    bhatia_kittaneh,
    ando_geo,
    ando_mean,
    prop0,
    normal_schur,
    pm_dominance,
    triangle,
    zpolar_plus_geo,
    zpolar_schur_geo,
};

inline const char* to_string(ClaimId id) {
    switch (id) {
    case ClaimId::theorem_plus_agm: return "theorem_plus_agm";
    case ClaimId::theorem_plus_geo: return "theorem_plus_geo";
    case ClaimId::theorem_schur_agm: return "theorem_schur_agm";
    case ClaimId::theorem_schur_geo: return "theorem_schur_geo";
    case ClaimId::minus_agm: return "minus_agm";
    case ClaimId::minus_geo: return "minus_geo";
    case ClaimId::mean_plus: return "mean_plus";
    case ClaimId::mean_minus: return "mean_minus";
    case ClaimId::offdiag_adjoint: return "offdiag_adjoint";
    case ClaimId::offdiag_abs: return "offdiag_abs";
    case ClaimId::bhatia_kittaneh: return "bhatia_kittaneh";
    case ClaimId::ando_geo: return "ando_geo";
    case ClaimId::ando_mean: return "ando_mean";
    case ClaimId::prop0: return "prop0";
    case ClaimId::normal_schur: return "normal_schur";
    case ClaimId::pm_dominance: return "pm_dominance";
    case ClaimId::triangle: return "triangle";
    case ClaimId::zpolar_plus_geo: return "zpolar_plus_geo";
    case ClaimId::zpolar_schur_geo: return "zpolar_schur_geo";
    }
    return "?";
}

enum class WitnessClass { unitary, symmetry };

struct WitnessReport {
    ClaimId claim{};
    WitnessClass witness_class = WitnessClass::unitary;
    std::vector<Mat> witnesses;
    Mat lhs;
    Mat rhs;
    double margin = 0.0;  // lambda_min(rhs - lhs)
    double scale = 1.0;   // max(1, ||rhs - lhs||_op)
    bool pass = false;    // margin >= -tol.rel * scale
    double witness_defect = 0.0;
    std::vector<std::pair<std::string, double>> aux_values;
    std::vector<std::pair<std::string, std::vector<double>>> aux_spectra;

    /// V V* = I (and V = V* for symmetries) within `tol` for every witness.
    bool witness_ok(double tol = 1e-9) const { return witness_defect <= tol; }
    double normalized_margin() const { return margin / scale; }

    double aux(const std::string& key) const {
        for (const auto& [k, v] : aux_values) {
            if (k == key) return v;
        }
        throw Error(ErrorKind::invalid_config, "no aux value " + key);
    }
};

namespace detail {

inline double witness_defect(const std::vector<Mat>& ws, WitnessClass cls) {
    double worst = 0.0;
    for (const Mat& v : ws) {
        worst = std::max(worst, UnitaryMatrix::unitarity_defect(v));
        if (cls == WitnessClass::symmetry) worst = std::max(worst, max_abs(v - v.adjoint()));
    }
    return worst;
}

inline WitnessReport certify(ClaimId claim, const Mat& lhs, const Mat& rhs, std::vector<Mat> witnesses,
                             WitnessClass cls, const Tolerance& tol) {
    WitnessReport r;
    r.claim = claim;
    r.witness_class = cls;
    r.lhs = hermitian_part(lhs);
    r.rhs = hermitian_part(rhs);
    const Spectrum d = eigvalsh(HermitianMatrix::symmetrized(r.rhs - r.lhs));
    r.margin = d.min();
    r.scale = std::max({1.0, std::abs(d.max()), std::abs(d.min())});
    r.pass = r.margin >= -tol.rel * r.scale;
    r.witness_defect = witness_defect(witnesses, cls);
    r.witnesses = std::move(witnesses);
    r.aux_spectra.emplace_back("lhs", eigvalsh(HermitianMatrix::symmetrized(r.lhs)).values());
    r.aux_spectra.emplace_back("rhs", eigvalsh(HermitianMatrix::symmetrized(r.rhs)).values());
    return r;
}

inline void require_op(Diamond op, std::initializer_list<Diamond> allowed, const char* what) {
    for (Diamond a : allowed) {
        if (a == op) return;
    }
    throw Error(ErrorKind::invalid_config, std::string(what) + " does not admit op " + to_string(op));
}

}  // namespace detail

struct FormPair {
    WitnessReport agm_form;  // |H| <= D + (1/4) V D V
    WitnessReport geo_form;  // |H| <= D # V D V
};

namespace detail {

// Shared body of the theorem and its minus variant: H is X+X*, X o X* or
// i(X-X*), D the matching diagonal combination.
inline FormPair sign_witness(const HermitianMatrix& h, const PsdMatrix& d, ClaimId agm_id, ClaimId geo_id,
                             const Tolerance& tol) {
    const SignDecomposition sd = hermitian_sign_decomposition(h, tol);
    const Mat& v = sd.sign.mat();
    const PsdMatrix vdv = PsdMatrix::trusted(congruence(v, d.mat()));
    FormPair out{
        certify(agm_id, sd.abs.mat(), d.mat() + 0.25 * vdv.mat(), {v}, WitnessClass::symmetry, tol),
        certify(geo_id, sd.abs.mat(), geometric_mean(d, vdv, tol).mat(), {v}, WitnessClass::symmetry, tol),
    };
    // eigenvalue form: lambda_1(|H| - D) against lambda_1(D) / 4
    const double top = eigvalsh(HermitianMatrix::symmetrized(sd.abs.mat() - d.mat())).max();
    const double cap = 0.25 * eigvalsh(d).max();
    out.agm_form.aux_values.emplace_back("eig_form_lhs", top);
    out.agm_form.aux_values.emplace_back("eig_form_rhs", cap);
    return out;
}

}  // namespace detail

/// V = sign(X o X*) with o in {+, Schur}; certifies both
/// |X o X*| <= A o B + (1/4) V (A o B) V and |X o X*| <= (A o B) # V (A o B) V.
inline FormPair theorem_witness(const PsdBlock& blk, Diamond op, const Tolerance& tol = {}) {
    detail::require_op(op, {Diamond::plus, Diamond::schur}, "theorem_witness");
    const bool plus = op == Diamond::plus;
    return detail::sign_witness(combine_offdiag(blk.x(), op), combine_diag(blk.a(), blk.b(), op),
                                plus ? ClaimId::theorem_plus_agm : ClaimId::theorem_schur_agm,
                                plus ? ClaimId::theorem_plus_geo : ClaimId::theorem_schur_geo, tol);
}

/// V = sign(i(X - X*)); certifies |X - X*| against A + B in both forms.
/// aux "congruence_imag" is ||Im(V (A+B) V)||_max, which vanishes for real
/// blocks of even order (V itself is then purely imaginary).
inline FormPair minus_witness(const PsdBlock& blk, const Tolerance& tol = {}) {
    const PsdMatrix d = combine_diag(blk.a(), blk.b(), Diamond::minus);
    FormPair out = detail::sign_witness(combine_offdiag(blk.x(), Diamond::minus), d, ClaimId::minus_agm,
                                        ClaimId::minus_geo, tol);
    const Mat& v = out.agm_form.witnesses.front();
    const double imag = max_abs(Mat(congruence(v, d.mat()).imag().cast<cplx>()));
    out.agm_form.aux_values.emplace_back("congruence_imag", imag);
    out.geo_form.aux_values.emplace_back("congruence_imag", imag);
    return out;
}

/// |X o X*| <= ((A+B) + V (A+B) V) / 2 for o in {+, -}.
inline WitnessReport mean_witness(const PsdBlock& blk, Diamond op, const Tolerance& tol = {}) {
    detail::require_op(op, {Diamond::plus, Diamond::minus}, "mean_witness");
    const PsdMatrix d = combine_diag(blk.a(), blk.b(), op);
    const SignDecomposition sd = hermitian_sign_decomposition(combine_offdiag(blk.x(), op), tol);
    const Mat& v = sd.sign.mat();
    return detail::certify(op == Diamond::plus ? ClaimId::mean_plus : ClaimId::mean_minus, sd.abs.mat(),
                           0.5 * (d.mat() + congruence(v, d.mat())), {v}, WitnessClass::symmetry, tol);
}

struct OffdiagReports {
    WitnessReport adjoint_form;  // |X*| <= A # (W B W*)
    WitnessReport abs_form;      // |X|  <= B # (W* A W)
};

/// W = polar_unitary(X). The arithmetic relaxations (A + W B W*)/2 and
/// (B + W* A W)/2 are certified too and stored as aux "mean_margin".
inline OffdiagReports offdiag_bound(const PsdBlock& blk, const Tolerance& tol = {}) {
    const Mat w = polar_unitary(blk.x()).mat();
    const PsdMatrix wbw = PsdMatrix::trusted(congruence(w, blk.b().mat()));
    const PsdMatrix waw = PsdMatrix::trusted(congruence(w.adjoint(), blk.a().mat()));
    const Mat abs_adj = matrix_abs(blk.x().adjoint()).mat();
    const Mat abs_x = matrix_abs(blk.x()).mat();

    OffdiagReports out{
        detail::certify(ClaimId::offdiag_adjoint, abs_adj, geometric_mean(blk.a(), wbw, tol).mat(), {w},
                        WitnessClass::unitary, tol),
        detail::certify(ClaimId::offdiag_abs, abs_x, geometric_mean(blk.b(), waw, tol).mat(), {w},
                        WitnessClass::unitary, tol),
    };
    const LoewnerResult m1 = loewner_leq(HermitianMatrix::symmetrized(abs_adj),
                                         HermitianMatrix::symmetrized(0.5 * (blk.a().mat() + wbw.mat())), tol);
    const LoewnerResult m2 = loewner_leq(HermitianMatrix::symmetrized(abs_x),
                                         HermitianMatrix::symmetrized(0.5 * (blk.b().mat() + waw.mat())), tol);
    out.adjoint_form.aux_values.emplace_back("mean_margin", m1.margin);
    out.adjoint_form.aux_values.emplace_back("mean_pass", m1.pass ? 1.0 : 0.0);
    out.abs_form.aux_values.emplace_back("mean_margin", m2.margin);
    out.abs_form.aux_values.emplace_back("mean_pass", m2.pass ? 1.0 : 0.0);
    return out;
}

/// |AB| <= U (A*A + BB*)/2 U*. The stack C = [A; B*] has CC* equal to the
/// Gram block of the pair (A*, B), [[AA*, AB], [B*A*, B*B]], and C*C = A*A + BB*,
/// so the block inequality 2 lambda_j(|AB|) <= lambda_j(CC*) aligns the two
/// eigenbases: U = U_{|AB|} U_S*. aux "gram_route_margin" certifies the
/// off-diagonal bound on that Gram block, |AB| <= (B*B + (W*P) A*A (W*P)*)/2
/// with W, P the polar unitaries of AB and A.
inline WitnessReport bhatia_kittaneh_witness(const Mat& a, const Mat& b, const Tolerance& tol = {}) {
    require_square(a, "A");
    require_same_dim(a, b, "bhatia_kittaneh_witness");
    const Mat ab = a * b;
    const PsdMatrix lhs = matrix_abs(ab);
    const HermitianMatrix s = HermitianMatrix::symmetrized(0.5 * (a.adjoint() * a + b * b.adjoint()));
    const EigenDecomposition el = eigh(lhs);
    const EigenDecomposition es = eigh(s);
    const Mat u = el.vectors.mat() * es.vectors.mat().adjoint();
    WitnessReport r =
        detail::certify(ClaimId::bhatia_kittaneh, lhs.mat(), congruence(u, s.mat()), {u}, WitnessClass::unitary, tol);

    const PsdBlock blk = gram_pair_block(a.adjoint(), b, tol);
    const OffdiagReports od = offdiag_bound(blk, tol);
    const Mat wp = polar_unitary(ab).mat().adjoint() * polar_unitary(a).mat();
    const LoewnerResult route = loewner_leq(
        lhs, HermitianMatrix::symmetrized(0.5 * (b.adjoint() * b + congruence(wp, a.adjoint() * a))), tol);
    r.aux_values.emplace_back("gram_route_margin", route.margin);
    r.aux_values.emplace_back("gram_offdiag_margin", od.abs_form.margin);
    return r;
}

struct AndoReports {
    WitnessReport geo_form;   // |sum B_i* A_i| <= (sum A_i* A_i) # V*(sum B_i* B_i)V
    WitnessReport mean_form;  // ... <= (sum A_i* A_i + V*(sum B_i* B_i)V) / 2
};

inline AndoReports ando_sum_bound(const FactorList& f, const Tolerance& tol = {}) {
    if (f.empty()) throw Error(ErrorKind::empty_input, "ando_sum_bound needs at least one pair");
    const Mat y = f.sum_ba();
    const Mat v = polar_unitary(y).mat();
    const PsdMatrix aa = PsdMatrix::trusted(f.sum_aa());
    const PsdMatrix vbv = PsdMatrix::trusted(congruence(v.adjoint(), f.sum_bb()));
    const Mat lhs = matrix_abs(y).mat();
    return {
        detail::certify(ClaimId::ando_geo, lhs, geometric_mean(aa, vbv, tol).mat(), {v}, WitnessClass::unitary, tol),
        detail::certify(ClaimId::ando_mean, lhs, 0.5 * (aa.mat() + vbv.mat()), {v}, WitnessClass::unitary, tol),
    };
}

/// |X| (+) |X| <= U1 (A(+)B) U1* # U2 (A(+)B) U2*, with U1 = W* (+) I and
/// U2 = [[0, W* V1], [V2*, 0]] built from the off-diagonal bounds
/// |X*| <= A # V1 B V1* and |X| <= B # V2* A V2 (V1 = V2 = W =
/// polar_unitary(X)), using |X| = W* |X*| W. The single-unitary form
/// (A(+)B) # U (A(+)B) U* with U = U1* U2 has the same spectrum; aux spectrum
/// "single_unitary_rhs" and aux value "single_unitary_spectrum_gap" record it.
inline WitnessReport prop0_witness(const PsdBlock& blk, const Tolerance& tol = {}) {
    const Index n = blk.n();
    const Mat w = polar_unitary(blk.x()).mat();
    const Mat& v1 = w;
    const Mat& v2 = w;
    const Mat u1 = direct_sum(w.adjoint(), Mat::Identity(n, n));
    Mat u2 = Mat::Zero(2 * n, 2 * n);
    u2.topRightCorner(n, n) = w.adjoint() * v1;
    u2.bottomLeftCorner(n, n) = v2.adjoint();
    const Mat c = direct_sum(blk.a().mat(), blk.b().mat());
    const Mat abs_x = matrix_abs(blk.x()).mat();
    const PsdMatrix left = PsdMatrix::trusted(congruence(u1, c));
    const PsdMatrix right = PsdMatrix::trusted(congruence(u2, c));
    WitnessReport r = detail::certify(ClaimId::prop0, direct_sum(abs_x, abs_x), geometric_mean(left, right, tol).mat(),
                                      {u1, u2}, WitnessClass::unitary, tol);

    const Mat u = u1.adjoint() * u2;
    const Spectrum single = eigvalsh(
        geometric_mean(PsdMatrix::trusted(c), PsdMatrix::trusted(congruence(u, c)), tol));
    const Spectrum two = eigvalsh(HermitianMatrix::symmetrized(r.rhs));
    double gap = 0.0;
    for (std::size_t i = 1; i <= two.natural_dim(); ++i) {
        gap = std::max(gap, std::abs(single.largest(i) - two.largest(i)));
    }
    r.aux_spectra.emplace_back("single_unitary_rhs", single.values());
    r.aux_values.emplace_back("single_unitary_spectrum_gap", gap);
    return r;
}

inline double commutator_defect(const Mat& a) {
    return max_abs(a * a.adjoint() - a.adjoint() * a);
}

/// |A o B + A* o B*| / 2 <= |A| o |B| + (1/4) V (|A| o |B|) V for normal A, B,
/// via the theorem applied to the Schur product of the polar blocks of A and B.
inline WitnessReport normal_schur_witness(const Mat& a, const Mat& b, const Tolerance& tol = {}) {
    require_square(a, "A");
    require_same_dim(a, b, "normal_schur_witness");
    for (const Mat* m : {&a, &b}) {
        const double defect = commutator_defect(*m);
        if (defect > tol.rel * std::max(1.0, max_abs(*m) * max_abs(*m))) {
            throw Error(ErrorKind::not_normal, "||MM* - M*M||_max = " + std::to_string(defect), defect);
        }
    }
    const Mat prod = schur_product(polar_block(a, tol).assembled(), polar_block(b, tol).assembled());
    const PsdBlock blk = block_from_assembled(prod, tol);
    const FormPair tw = theorem_witness(blk, Diamond::plus, tol);
    WitnessReport r = detail::certify(ClaimId::normal_schur, 0.5 * tw.agm_form.lhs, 0.5 * tw.agm_form.rhs,
                                      tw.agm_form.witnesses, WitnessClass::symmetry, tol);
    r.aux_values.emplace_back("block_margin", blk.margin());
    return r;
}

/// |S| <= T + (1/4) V T V for +-S <= T: the theorem on [[T, S], [S, T]],
/// whose X + X* = 2S, read with both sides halved.
inline WitnessReport pm_dominance_witness(const HermitianMatrix& s, const HermitianMatrix& t,
                                          const Tolerance& tol = {}) {
    const PsdBlock blk = dominance_block(s, t, tol);
    const FormPair tw = theorem_witness(blk, Diamond::plus, tol);
    return detail::certify(ClaimId::pm_dominance, 0.5 * tw.agm_form.lhs, 0.5 * tw.agm_form.rhs,
                           tw.agm_form.witnesses, WitnessClass::symmetry, tol);
}

inline void require_contractions(const std::vector<Mat>& ms, const Tolerance& tol) {
    std::string bad;
    double worst = 0.0;
    for (std::size_t j = 0; j < ms.size(); ++j) {
        require_square(ms[j], "contraction");
        require_same_dim(ms[j], ms.front(), "contraction list");
        const double top = op_norm(ms[j]);
        if (top > 1.0 + tol.rel) {
            bad += (bad.empty() ? "" : ", ") + std::string("A_") + std::to_string(j + 1) + ": " + std::to_string(top);
            worst = std::max(worst, top);
        }
    }
    if (!bad.empty()) throw Error(ErrorKind::not_contraction, "sigma_max > 1 for " + bad, worst);
}

/// |A_1 + ... + A_k| <= (k/4) I + sum |A_j| for contractions. Hermitian lists
/// go through pm_dominance_witness with S = sum A_j, T = sum |A_j|; general
/// lists through the Hermitian dilations [[0, A_j], [A_j*, 0]]. The witness is
/// the intermediate symmetry; aux "dominance_margin" is that step's margin.
inline WitnessReport triangle_bound(const std::vector<Mat>& contractions, const Tolerance& tol = {}) {
    if (contractions.size() < 2) throw Error(ErrorKind::invalid_config, "triangle_bound needs k > 1");
    require_contractions(contractions, tol);
    const Index n = contractions.front().rows();
    const double k = static_cast<double>(contractions.size());

    bool hermitian = true;
    for (const Mat& m : contractions) {
        hermitian = hermitian && max_abs(m - m.adjoint()) <= tol.abs * std::max(1.0, max_abs(m));
    }
    Mat sum = Mat::Zero(n, n);
    Mat sum_abs = Mat::Zero(n, n);
    for (const Mat& m : contractions) {
        sum += m;
        sum_abs += matrix_abs(m).mat();
    }

    WitnessReport step;
    if (hermitian) {
        step = pm_dominance_witness(HermitianMatrix::symmetrized(sum), HermitianMatrix::symmetrized(sum_abs), tol);
    } else {
        Mat s = Mat::Zero(2 * n, 2 * n);
        Mat t = Mat::Zero(2 * n, 2 * n);
        for (const Mat& m : contractions) {
            const HermitianMatrix h = hermitian_dilation(m);
            s += h.mat();
            t += matrix_abs(h.mat()).mat();
        }
        step = pm_dominance_witness(HermitianMatrix::symmetrized(s), HermitianMatrix::symmetrized(t), tol);
    }
    WitnessReport r = detail::certify(ClaimId::triangle, matrix_abs(sum).mat(),
                                      0.25 * k * Mat::Identity(n, n) + sum_abs, step.witnesses,
                                      WitnessClass::symmetry, tol);
    r.aux_values.emplace_back("dominance_margin", step.margin);
    r.aux_values.emplace_back("hermitian_route", hermitian ? 1.0 : 0.0);
    return r;
}

}  // namespace blockineq
