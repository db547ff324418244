#include "blockineq/checks.hpp"
#include "blockineq/extremal.hpp"
#include "oracles.hpp"

#include <Eigen/SVD>
#include <gtest/gtest.h>

#include <cmath>

using namespace blockineq;

namespace {

PsdBlock identity_block(Index n) {
    const Mat id = Mat::Identity(n, n);
    return make_block(id, id, id);
}

PsdBlock zero_offdiag_block(Index n) {
    const Mat id = Mat::Identity(n, n);
    return make_block(id, Mat::Zero(n, n), id);
}

std::vector<double> oracle_singular_values(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    const auto& s = svd.singularValues();
    return std::vector<double>(s.data(), s.data() + s.size());
}

// Eigenvalues of |H| for Hermitian H, i.e. |eigenvalues| sorted.
std::vector<double> oracle_abs_eigenvalues(const Mat& h) {
    std::vector<double> v = oracle::reference_eigenvalues(h);
    for (double& x : v) x = std::abs(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

double at(const std::vector<double>& v, std::size_t i) {
    return i < v.size() ? v[i] : 0.0;
}

Mat random_psd_mat(Index n, Rng& rng) {
    const Mat g = ginibre(n, n, rng);
    return g.adjoint() * g;
}

}  // namespace

TEST(Tao, NiceexEquality) {
    const CheckReport r = tao_bound(niceex_block(1.0));
    EXPECT_NEAR(r.lhs_value, 2.0, 1e-12);
    EXPECT_NEAR(r.rhs_value, 2.0, 1e-12);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(r.param("j"), 1.0);
    EXPECT_TRUE(tao_bound(zero_offdiag_block(3)).pass);
}

TEST(Tao, RandomAgainstOracle) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Index n = 1 + seed % 5;
        const PsdBlock blk = sample_psd_block(n, 1 + seed % (2 * n), seed);
        const CheckReport r = tao_bound(blk);
        ASSERT_TRUE(r.pass) << seed;
        const std::vector<double> sx = oracle_singular_values(blk.x());
        const std::vector<double> sm = oracle::reference_eigenvalues(blk.assembled());
        for (Index j = 0; j < n; ++j) ASSERT_LE(2.0 * sx[j], sm[j] + 1e-9 * std::max(1.0, sm[0]));
        const std::size_t j = static_cast<std::size_t>(r.param("j")) - 1;
        EXPECT_NEAR(r.lhs_value, 2.0 * sx[j], 1e-9);
        EXPECT_NEAR(r.rhs_value, sm[j], 1e-9);
    }
}

TEST(WeylGeo, NiceexAndZero) {
    const CheckReport r = weyl_geo_check(niceex_block(0.5), Diamond::plus, 0, 0);
    EXPECT_NEAR(r.lhs_value, 1.0, 1e-12);
    EXPECT_NEAR(r.rhs_value, 4.0, 1e-12);
    EXPECT_TRUE(r.pass);
    for (Diamond op : {Diamond::plus, Diamond::schur, Diamond::minus}) {
        const CheckReport z = weyl_geo_check(zero_offdiag_block(2), op, 0, 1);
        EXPECT_EQ(z.lhs_value, 0.0);
        EXPECT_TRUE(z.pass);
    }
    EXPECT_FALSE(weyl_geo_check(zero_offdiag_block(2), Diamond::minus, 0, 0).notes.empty());
}

TEST(WeylGeo, RandomAgainstOracle) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Index n = 1 + seed % 4;
        const PsdBlock blk = sample_psd_block(n, 1 + seed % (2 * n), seed + 100);
        const Mat x = blk.x();
        const std::vector<double> lhs = oracle_abs_eigenvalues(x + x.adjoint());
        const std::vector<double> rhs = oracle::reference_eigenvalues(blk.a().mat() + blk.b().mat());
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < n; ++k) {
                const CheckReport r = weyl_geo_check(blk, Diamond::plus, j, k);
                ASSERT_TRUE(r.pass);
                const double l = at(lhs, j + k);
                ASSERT_NEAR(r.lhs_value, l * l, 1e-9 * std::max(1.0, l * l));
                ASSERT_NEAR(r.rhs_value, at(rhs, j) * at(rhs, k), 1e-9 * std::max(1.0, r.rhs_value));
            }
        }
    }
}

TEST(GramGeo, Examples) {
    const Mat id = Mat::Identity(3, 3);
    const CheckReport r = gram_geo_check(id, id, Diamond::plus, 0, 0);
    EXPECT_NEAR(r.lhs_value, 4.0, 1e-12);
    EXPECT_NEAR(r.rhs_value, 4.0, 1e-12);
    EXPECT_TRUE(r.pass);
    const CheckReport z = gram_geo_check(Mat::Zero(3, 3), id, Diamond::schur, 0, 0);
    EXPECT_EQ(z.lhs_value, 0.0);
    EXPECT_THROW(gram_geo_check(id, id, Diamond::minus, 0, 0), Error);
}

TEST(GramGeo, IntroductionInequality) {
    // lambda_3(|AB o BA|) <= lambda_2(A^2 o B^2) for PSD A, B
    Rng rng(21);
    for (int it = 0; it < 40; ++it) {
        const Index n = 3 + it % 3;
        const Mat a = random_psd_mat(n, rng);
        const Mat b = random_psd_mat(n, rng);
        const CheckReport r = gram_geo_check(a, b, Diamond::schur, 1, 1);
        ASSERT_TRUE(r.pass);
        const std::vector<double> lhs = oracle_abs_eigenvalues((a * b).cwiseProduct(b * a));
        const std::vector<double> rhs = oracle::reference_eigenvalues((a * a).cwiseProduct(b * b));
        ASSERT_LE(lhs[2], rhs[1] * (1.0 + 1e-9));
        ASSERT_NEAR(r.lhs_value, lhs[2] * lhs[2], 1e-8 * std::max(1.0, r.lhs_value));
        ASSERT_NEAR(r.rhs_value, rhs[1] * rhs[1], 1e-8 * std::max(1.0, r.rhs_value));
    }
}

TEST(NormCheck, Examples) {
    const CheckReport id = norm_check(identity_block(3), Diamond::plus);
    EXPECT_TRUE(id.pass);
    EXPECT_NEAR(id.lhs_value, 1.0, 1e-12);
    EXPECT_EQ(id.param("kyfan_ok"), 1.0);
    EXPECT_TRUE(norm_check(zero_offdiag_block(3), Diamond::schur).pass);
    EXPECT_THROW(norm_check(identity_block(2), Diamond::minus), Error);
}

TEST(NormCheck, RandomCorpusWithKyFanOracle) {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const Index n = 1 + seed % 5;
        const PsdBlock blk = sample_psd_block(n, 1 + seed % (2 * n), seed + 7);
        for (Diamond op : {Diamond::plus, Diamond::schur}) {
            const CheckReport r = norm_check(blk, op);
            ASSERT_TRUE(r.pass) << seed << " " << r.lhs_value;
            ASSERT_EQ(r.param("kyfan_ok"), 1.0);
        }
        // Ky Fan 1- and n-norms of |X+X*| against those of A+B, computed with Eigen
        const Mat x = blk.x();
        const std::vector<double> l = oracle_abs_eigenvalues(x + x.adjoint());
        const std::vector<double> rr = oracle::reference_eigenvalues(blk.a().mat() + blk.b().mat());
        double sl = 0.0;
        double sr = 0.0;
        for (Index i = 0; i < n; ++i) {
            sl += l[i];
            sr += rr[i];
            ASSERT_LE(sl, sr + 1e-9 * std::max(1.0, sr));
        }
    }
}

TEST(GramNorm, Examples) {
    const Mat id = Mat::Identity(2, 2);
    EXPECT_TRUE(gram_norm_check(id, id, Diamond::plus).pass);
    EXPECT_TRUE(gram_norm_check(Mat::Zero(2, 2), id, Diamond::schur).pass);
    Rng rng(31);
    for (int it = 0; it < 20; ++it) {
        const CheckReport r = gram_norm_check(ginibre(3, 3, rng), ginibre(3, 3, rng), Diamond::schur);
        EXPECT_EQ(r.check, CheckId::gram_norm);
        EXPECT_TRUE(r.pass);
    }
}

TEST(DiagCheck, Examples) {
    const CheckReport id = diag_check(Mat::Identity(3, 3), 0);
    EXPECT_NEAR(id.lhs_value, 1.0, 1e-14);
    EXPECT_NEAR(id.rhs_value, 1.0, 1e-14);
    EXPECT_TRUE(id.pass);

    Mat perm = Mat::Zero(3, 3);
    perm(0, 1) = perm(1, 2) = perm(2, 0) = 1.0;
    for (int j = 0; j < 3; ++j) EXPECT_TRUE(diag_check(perm, j).pass);
    EXPECT_THROW(diag_check(perm, 3), Error);
}

TEST(DiagCheck, RandomAgainstOracle) {
    Rng rng(41);
    for (int it = 0; it < 40; ++it) {
        const Index n = 1 + it % 5;
        const Mat z = ginibre(n, n, rng);
        const std::vector<double> lhs = oracle_abs_eigenvalues(z.cwiseProduct(z.adjoint()));
        std::vector<double> d1;
        std::vector<double> d2;
        const Mat g1 = z.adjoint() * z;
        const Mat g2 = z * z.adjoint();
        for (Index i = 0; i < n; ++i) {
            d1.push_back(g1(i, i).real());
            d2.push_back(g2(i, i).real());
        }
        std::sort(d1.begin(), d1.end(), std::greater<>());
        std::sort(d2.begin(), d2.end(), std::greater<>());
        for (int j = 0; j < n; ++j) {
            const CheckReport r = diag_check(z, j);
            ASSERT_TRUE(r.pass);
            ASSERT_NEAR(r.lhs_value, at(lhs, 2 * j), 1e-9);
            ASSERT_NEAR(r.rhs_value, std::min(d1[j], d2[j]), 1e-9);
        }
    }
}

TEST(ZPolar, Examples) {
    Rng rng(51);
    const Mat h = random_hermitian(3, rng).mat();
    const ZPolarReports hr = zpolar_checks(h, Diamond::plus);
    EXPECT_NEAR(hr.wlog.lhs_value, 1.0, 1e-9);
    EXPECT_TRUE(hr.wlog.pass);
    EXPECT_TRUE(hr.geo.pass);

    const ZPolarReports ur = zpolar_checks(haar_unitary(3, rng).mat(), Diamond::schur);
    EXPECT_TRUE(ur.wlog.pass);
    EXPECT_TRUE(ur.geo.pass);

    for (int it = 0; it < 30; ++it) {
        for (Diamond op : {Diamond::plus, Diamond::schur}) {
            const ZPolarReports r = zpolar_checks(ginibre(1 + it % 4, 1 + it % 4, rng), op);
            ASSERT_TRUE(r.wlog.pass);
            ASSERT_TRUE(r.geo.pass);
        }
    }
}

TEST(Akext, Examples) {
    const CheckReport r = akext_check(identity_block(2), 0, 0, 0);
    EXPECT_NEAR(r.lhs_value, 1.0, 1e-14);
    EXPECT_NEAR(r.rhs_value, 1.0, 1e-14);
    const PsdBlock rank1 = sample_psd_block(3, 1, 3);
    const CheckReport beyond = akext_check(rank1, 2, 2, 2);
    EXPECT_LE(beyond.lhs_value, 1e-9);
    EXPECT_TRUE(beyond.pass);
    EXPECT_THROW(akext_check(rank1, 1, 0, 1), Error);
}

TEST(Akext, AdmissibleSweepAndAudehKittanehAgreement) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Index n = 1 + seed % 5;
        const PsdBlock blk = sample_psd_block(n, 1 + seed % (2 * n), seed + 900);
        const std::vector<double> sx = oracle_singular_values(blk.x());
        for (int j = 0; j < 2 * n; ++j) {
            for (int k = 0; k <= 2 * j; ++k) {
                const CheckReport r = akext_check(blk, j, k, 2 * j - k);
                ASSERT_TRUE(r.pass) << "seed " << seed << " j=" << j << " k=" << k;
                ASSERT_NEAR(r.lhs_value, at(sx, j), 1e-9);
            }
            const CheckReport ext = akext_check(blk, j, j, j);
            const CheckReport ak = audeh_kittaneh_check(blk, j);
            ASSERT_NEAR(ext.lhs_value, ak.lhs_value, 1e-12);
            ASSERT_NEAR(ext.rhs_value, ak.rhs_value, 1e-12);
        }
    }
}

TEST(Akext2, Examples) {
    Rng rng(61);
    const Mat a = ginibre(3, 3, rng);
    const CheckReport single = akext2_check(a, Mat::Zero(3, 3), 1, 1, 1);
    EXPECT_TRUE(single.pass);
    EXPECT_NEAR(single.lhs_value, oracle_singular_values(a)[1], 1e-9);

    const Mat id = Mat::Identity(2, 2);
    const CheckReport ii = akext2_check(id, id, 0, 0, 0);
    EXPECT_NEAR(ii.lhs_value, 2.0, 1e-12);
    EXPECT_NEAR(ii.rhs_value, 2.0, 1e-12);
    EXPECT_THROW(akext2_check(id, id, 0, 1, 0), Error);

    for (int it = 0; it < 20; ++it) {
        const Mat p = ginibre(3, 3, rng);
        const Mat q = ginibre(3, 3, rng);
        for (int j = 0; j < 3; ++j) ASSERT_TRUE(akext2_check(p, q, j, 0, 2 * j).pass);
    }
}

TEST(BhatiaDavis, Examples) {
    const Mat id = Mat::Identity(2, 2);
    const CheckReport one = bhatia_davis_check(FactorList({{id, id}}), {0.3, 1.0, 3.0});
    EXPECT_NEAR(one.lhs_value, one.rhs_value, 1e-12);
    EXPECT_TRUE(one.pass);

    Rng rng(71);
    std::vector<FactorPair> same;
    for (int i = 0; i < 3; ++i) {
        const Mat a = ginibre(3, 3, rng);
        same.push_back({a, a});
    }
    const CheckReport eq = bhatia_davis_check(FactorList(same), default_alpha_grid());
    EXPECT_TRUE(eq.pass);
    EXPECT_NEAR(eq.lhs_value, eq.rhs_value, 1e-9 * std::max(1.0, eq.rhs_value));

    for (int it = 0; it < 20; ++it) {
        std::vector<FactorPair> pairs;
        for (int i = 0; i < 1 + it % 3; ++i) pairs.push_back({ginibre(3, 3, rng), ginibre(3, 3, rng)});
        ASSERT_TRUE(bhatia_davis_check(FactorList(pairs), default_alpha_grid()).pass);
    }
    EXPECT_THROW(bhatia_davis_check(FactorList({{id, id}}), {0.0}), Error);
}

TEST(DetSchwarz, Examples) {
    const Mat id = Mat::Identity(2, 2);
    const CheckReport one = det_schwarz_check(FactorList({{id, id}}));
    EXPECT_NEAR(one.lhs_value, 0.0, 1e-14);
    EXPECT_NEAR(one.rhs_value, 0.0, 1e-14);
    EXPECT_TRUE(one.pass);

    Mat sing = Mat::Zero(2, 2);
    sing(0, 0) = 1.0;
    const CheckReport s = det_schwarz_check(FactorList({{sing, id}}));
    EXPECT_TRUE(std::isinf(s.rhs_value) && s.rhs_value < 0);
    EXPECT_TRUE(std::isinf(s.lhs_value) && s.lhs_value < 0);
    EXPECT_TRUE(s.pass);

    Rng rng(81);
    for (int it = 0; it < 20; ++it) {
        std::vector<FactorPair> pairs;
        for (int i = 0; i < 1 + it % 3; ++i) pairs.push_back({ginibre(3, 3, rng), ginibre(3, 3, rng)});
        const FactorList f(pairs);
        const CheckReport r = det_schwarz_check(f);
        ASSERT_TRUE(r.pass);
        const Mat y = f.sum_ba();
        const double want = 2.0 * std::log(std::abs(y.determinant()));
        ASSERT_NEAR(r.lhs_value, want, 1e-8 * std::max(1.0, std::abs(want)));
    }
}

TEST(Projection, ClosedForm) {
    const ProjectionRatio half = projection_ratio(M_PI / 2);
    EXPECT_NEAR(half.ratio, 1.0, 1e-12);
    const ProjectionRatio small = projection_ratio(0.02);
    EXPECT_NEAR(small.ratio / 100.0, 1.0, 0.01);
    for (double a = 0.01; a <= 3.0; a += 0.01) {
        const ProjectionRatio r = projection_ratio(a);
        ASSERT_NEAR(r.ratio / r.closed_form, 1.0, 1e-8) << a;
        // lambda_2(P + Q) = 1 - |cos a|, so the small-angle expression only matches up to pi/2
        if (a <= M_PI / 2) ASSERT_NEAR(r.ratio * (1.0 - std::cos(a)) / std::sin(a), 1.0, 1e-8) << a;
        ASSERT_NEAR(r.ratio, projection_ratio(M_PI - a).ratio, 1e-8 * r.ratio);
    }
    double prev = projection_ratio(3.0).small_angle_form;
    for (double a = 3.02; a < M_PI; a += 0.02) {
        const double cur = projection_ratio(a).small_angle_form;
        EXPECT_LT(cur, prev);
        prev = cur;
    }
    EXPECT_GT(prev, 0.0);
    EXPECT_THROW(projection_ratio(0.0), Error);
    EXPECT_THROW(projection_ratio(M_PI), Error);
}
