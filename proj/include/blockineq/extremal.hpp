#pragma once

// Sharpness probes on the explicit extremal families and a multi-restart
// (1+1) random search over contraction tuples or PSD blocks that tries to
// push the ratio up against the proved constants 1/4 and k/4.

#include "block.hpp"
#include "checks.hpp"
#include "random.hpp"
#include "witness.hpp"

#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace blockineq {

enum class ProbeFamily { niceex, schur_niceex, dominance_pair, normal_schur_pair, referee, projection };

inline const char* to_string(ProbeFamily f) {
    switch (f) {
    case ProbeFamily::niceex: return "niceex";
    case ProbeFamily::schur_niceex: return "schur_niceex";
    case ProbeFamily::dominance_pair: return "dominance_pair";
    case ProbeFamily::normal_schur_pair: return "normal_schur_pair";
    case ProbeFamily::referee: return "referee";
    case ProbeFamily::projection: return "projection";
    }
    return "?";
}

struct ProbeResult {
    ProbeFamily family{};
    double param = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    double gap = 0.0;  // bound - ratio
    std::vector<std::pair<std::string, std::vector<double>>> details;
};

inline double top_eigenvalue(const Mat& h) {
    return eigvalsh(HermitianMatrix::symmetrized(h)).max();
}

/// lambda_1(|X o X*| - A o B) / lambda_1(A o B), the quantity capped by 1/4.
inline double theorem_ratio(const PsdBlock& blk, Diamond op) {
    const PsdMatrix d = combine_diag(blk.a(), blk.b(), op);
    const SignDecomposition sd = hermitian_sign_decomposition(combine_offdiag(blk.x(), op));
    const double denom = eigvalsh(d).max();
    if (!(denom > 0.0)) return 0.0;
    return top_eigenvalue(sd.abs.mat() - d.mat()) / denom;
}

/// A = diag(t, 0), X = e1 e2^T, B = diag(0, 1/t).
inline PsdBlock niceex_block(double t, const Tolerance& tol = {}) {
    if (!(t > 0.0)) throw Error(ErrorKind::nonpositive_param, "t must be positive", t);
    Mat a = Mat::Zero(2, 2);
    Mat x = Mat::Zero(2, 2);
    Mat b = Mat::Zero(2, 2);
    a(0, 0) = t;
    x(0, 1) = 1.0;
    b(1, 1) = 1.0 / t;
    return make_block(a, x, b, tol);
}

/// A = B = diag(sqrt t, 1/sqrt t), X = [[0, 1], [1, 0]].
inline PsdBlock schur_niceex_block(double t, const Tolerance& tol = {}) {
    if (!(t > 0.0)) throw Error(ErrorKind::nonpositive_param, "t must be positive", t);
    Mat a = Mat::Zero(2, 2);
    a(0, 0) = std::sqrt(t);
    a(1, 1) = 1.0 / std::sqrt(t);
    Mat x(2, 2);
    x << 0.0, 1.0, 1.0, 0.0;
    return make_block(a, x, a, tol);
}

inline ProbeResult probe_niceex(double t, Diamond op) {
    detail::require_op(op, {Diamond::plus, Diamond::schur}, "probe_niceex");
    const bool plus = op == Diamond::plus;
    const PsdBlock blk = plus ? niceex_block(t) : schur_niceex_block(t);
    const double ratio = theorem_ratio(blk, op);
    return {plus ? ProbeFamily::niceex : ProbeFamily::schur_niceex, t, ratio, 0.25, 0.25 - ratio, {}};
}

struct RefereeConstruction {
    Mat p;
    Mat q;
    Mat v;
    Mat c1;
    Mat c2;
};

/// Two orthogonal rank-one projections P, Q in M_3, V = diag(1, 1, -1),
/// C1 = P - Q and C2 = V C1 V*.
inline RefereeConstruction referee_construction() {
    const double r3 = std::sqrt(3.0);
    Mat p(3, 3);
    p << 1.0, 0.5, r3 / 2.0, 0.5, 0.25, r3 / 4.0, r3 / 2.0, r3 / 4.0, 0.75;
    p *= 0.5;
    Mat q(3, 3);
    q << 1.0, -0.5, -r3 / 2.0, -0.5, 0.25, r3 / 4.0, -r3 / 2.0, r3 / 4.0, 0.75;
    q *= 0.5;
    Mat v = Mat::Identity(3, 3);
    v(2, 2) = -1.0;
    const Mat c1 = p - q;
    const Mat c2 = v * c1 * v.adjoint();
    return {p, q, v, c1, c2};
}

/// lambda_max(|sum A_j| - sum |A_j|), bounded by k/4 for contractions.
inline double triangle_objective(const std::vector<Mat>& contractions, const Tolerance& tol = {}) {
    if (contractions.empty()) throw Error(ErrorKind::empty_input, "triangle_objective needs matrices");
    require_contractions(contractions, tol);
    const Index n = contractions.front().rows();
    Mat sum = Mat::Zero(n, n);
    Mat sum_abs = Mat::Zero(n, n);
    for (const Mat& m : contractions) {
        sum += m;
        sum_abs += matrix_abs(m).mat();
    }
    return top_eigenvalue(matrix_abs(sum).mat() - sum_abs);
}

inline ProbeResult probe_referee() {
    const RefereeConstruction rc = referee_construction();
    const double ratio = triangle_objective({rc.c1, rc.c2});
    ProbeResult r{ProbeFamily::referee, 2.0, ratio, 0.5, 0.5 - ratio, {}};
    r.details.emplace_back("pq_qp_norm", std::vector<double>{op_norm(rc.p * rc.q), op_norm(rc.q * rc.p)});
    r.details.emplace_back("abs_of_sum", eigvalsh(matrix_abs(rc.c1 + rc.c2)).values());
    r.details.emplace_back("sum_of_abs",
                           eigvalsh(HermitianMatrix::symmetrized(matrix_abs(rc.c1).mat() + matrix_abs(rc.c2).mat()))
                               .values());
    return r;
}

/// T = diag(2, 1/2) + shift I, S = [[0, 1], [1, 0]];
/// ratio lambda_1(|S| - T) / lambda_1(T).
inline ProbeResult probe_dominance_pair(double shift = 0.0) {
    Mat t = Mat::Zero(2, 2);
    t(0, 0) = 2.0 + shift;
    t(1, 1) = 0.5 + shift;
    Mat s(2, 2);
    s << 0.0, 1.0, 1.0, 0.0;
    const double ratio = top_eigenvalue(matrix_abs(s).mat() - t) / top_eigenvalue(t);
    return {ProbeFamily::dominance_pair, shift, ratio, 0.25, 0.25 - ratio, {}};
}

/// A = [[2, 1], [1, 1/2]], B = [[0, 1], [1, 0]];
/// ratio lambda_1(|A o B + A* o B*|/2 - |A| o |B|) / lambda_1(|A| o |B|).
inline ProbeResult probe_normal_schur_pair() {
    Mat a(2, 2);
    a << 2.0, 1.0, 1.0, 0.5;
    Mat b(2, 2);
    b << 0.0, 1.0, 1.0, 0.0;
    const Mat d = schur_product(matrix_abs(a).mat(), matrix_abs(b).mat());
    const Mat h = 0.5 * (schur_product(a, b) + schur_product(a.adjoint(), b.adjoint()));
    const double ratio = top_eigenvalue(matrix_abs(h).mat() - d) / top_eigenvalue(d);
    return {ProbeFamily::normal_schur_pair, 0.0, ratio, 0.25, 0.25 - ratio, {}};
}

/// The ratio is unbounded as a -> 0; "bound" holds the closed form sin a / (1 - cos a).
inline ProbeResult probe_projection(double angle) {
    const ProjectionRatio pr = projection_ratio(angle);
    return {ProbeFamily::projection, angle, pr.ratio, pr.closed_form, pr.closed_form - pr.ratio, {}};
}

// ---------------------------------------------------------------------------
// search

enum class SearchKind { triangle, theorem_plus, theorem_schur };

inline const char* to_string(SearchKind k) {
    switch (k) {
    case SearchKind::triangle: return "triangle";
    case SearchKind::theorem_plus: return "theorem_plus";
    case SearchKind::theorem_schur: return "theorem_schur";
    }
    return "?";
}

inline constexpr double kBoundSlack = 1e-9;
inline constexpr int kFailureStreak = 20;
inline constexpr long kTrajectoryStride = 100;
inline constexpr double kStepGrowth = 1.5;  // step factor on an accepted move
inline constexpr double kStepCap = 4.0;     // in units of step_init

struct SearchConfig {
    SearchKind kind = SearchKind::triangle;
    int k = 2;
    int n = 3;
    long budget = 10000;
    int restarts = 4;
    std::uint64_t seed = 0;
    double step_init = 0.3;
    double step_decay = 0.5;
    /// Optional start for restart 0: k contractions (triangle) or a single
    /// Gram factor G with block G*G (theorem kinds).
    std::optional<std::vector<Mat>> start;

    void validate() const {
        if (n < 1) throw Error(ErrorKind::invalid_config, "n must be >= 1");
        if (restarts < 1) throw Error(ErrorKind::invalid_config, "restarts must be >= 1");
        if (budget < restarts) throw Error(ErrorKind::invalid_config, "budget must be >= restarts");
        if (kind == SearchKind::triangle && k < 2) throw Error(ErrorKind::invalid_config, "triangle needs k >= 2");
        if (!(step_init > 0.0)) throw Error(ErrorKind::invalid_config, "step_init must be positive");
        if (!(step_decay > 0.0 && step_decay < 1.0)) {
            throw Error(ErrorKind::invalid_config, "step_decay must lie in (0, 1)");
        }
        if (start) {
            const auto& s = *start;
            if (kind == SearchKind::triangle && static_cast<int>(s.size()) != k) {
                throw Error(ErrorKind::invalid_config, "start point must hold k matrices");
            }
            if (kind != SearchKind::triangle && s.size() != 1) {
                throw Error(ErrorKind::invalid_config, "start point must hold one Gram factor");
            }
            for (const Mat& m : s) {
                const Index cols = kind == SearchKind::triangle ? n : 2 * n;
                if (m.cols() != cols || (kind == SearchKind::triangle && m.rows() != n) || m.rows() < 1) {
                    throw Error(ErrorKind::invalid_config, "start point has the wrong shape");
                }
            }
        }
    }

    double bound() const { return kind == SearchKind::triangle ? 0.25 * k : 0.25; }
};

struct TrajectoryPoint {
    long eval_index;
    double value;
};

struct RestartSummary {
    std::uint64_t seed;
    double best_value;
    long evals;
    int rank;  // Gram factor rows for theorem kinds, 0 for triangle
};

struct SearchResult {
    SearchConfig config;
    double best_value = 0.0;
    double bound = 0.0;
    /// triangle: the k contractions; theorem kinds: {A, X, B}.
    std::vector<Mat> best_point;
    long eval_count = 0;
    std::vector<TrajectoryPoint> trajectory;  // eval_index counts across restarts
    std::vector<RestartSummary> restarts;
    bool bound_exceeded = false;
    int best_restart = 0;
};

namespace detail {

struct Candidate {
    std::vector<Mat> params;  // projected parametrization
    double value = 0.0;
};

inline std::vector<Mat> project_point(SearchKind kind, std::vector<Mat> params) {
    if (kind == SearchKind::triangle) {
        for (Mat& m : params) m = clip_to_contraction(m);
    } else {
        const double norm = params.front().norm();
        if (norm > 0.0) params.front() /= norm;
    }
    return params;
}

inline PsdBlock block_of_factor(const Mat& g) {
    // G*G is PSD by construction; the loose tolerance only absorbs rounding
    return block_from_assembled(g.adjoint() * g, Tolerance{1e-6, 1e-9});
}

inline double evaluate(SearchKind kind, const std::vector<Mat>& params) {
    switch (kind) {
    case SearchKind::triangle: return triangle_objective(params, Tolerance{1e-6, 1e-12});
    case SearchKind::theorem_plus: return theorem_ratio(block_of_factor(params.front()), Diamond::plus);
    case SearchKind::theorem_schur: return theorem_ratio(block_of_factor(params.front()), Diamond::schur);
    }
    return 0.0;
}

struct RestartOutcome {
    Candidate best;
    std::vector<TrajectoryPoint> trajectory;  // local eval indices
    RestartSummary summary;
    bool exceeded = false;
};

inline RestartOutcome run_restart(const SearchConfig& cfg, int restart, long budget) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(restart));
    Rng rng(seed);
    const Index n = cfg.n;
    int rank = 0;

    std::vector<Mat> start;
    if (restart == 0 && cfg.start) {
        start = *cfg.start;
        if (cfg.kind != SearchKind::triangle) rank = static_cast<int>(start.front().rows());
    } else if (cfg.kind == SearchKind::triangle) {
        for (int j = 0; j < cfg.k; ++j) start.push_back(ginibre(n, n, rng));
    } else {
        rank = rng.uniform_int(1, static_cast<int>(2 * n));
        start.push_back(ginibre(rank, 2 * n, rng));
    }

    RestartOutcome out;
    out.best.params = project_point(cfg.kind, std::move(start));
    out.best.value = evaluate(cfg.kind, out.best.params);
    long evals = 1;
    long improvements = 0;
    const double bound = cfg.bound();
    out.exceeded = out.best.value > bound + kBoundSlack;
    out.trajectory.push_back({0, out.best.value});

    double step = cfg.step_init;
    int failures = 0;
    while (evals < budget && !out.exceeded) {
        std::vector<Mat> trial = out.best.params;
        // one summand at a time: isotropic moves in all k matrices at once
        // stall on the ridge where singular values coalesce
        Mat& m = trial[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(trial.size()) - 1))];
        const double scale = step / std::sqrt(static_cast<double>(m.size()));
        for (Index j = 0; j < m.cols(); ++j) {
            for (Index i = 0; i < m.rows(); ++i) m(i, j) += scale * rng.complex_normal();
        }
        trial = project_point(cfg.kind, std::move(trial));
        const double value = evaluate(cfg.kind, trial);
        const long index = evals++;
        if (value > bound + kBoundSlack) {
            out.best = {std::move(trial), value};
            out.exceeded = true;
            out.trajectory.push_back({index, value});
            break;
        }
        if (value > out.best.value) {
            out.best = {std::move(trial), value};
            failures = 0;
            step = std::min(step * kStepGrowth, kStepCap * cfg.step_init);
            if (++improvements % kTrajectoryStride == 0) out.trajectory.push_back({index, value});
        } else if (++failures == kFailureStreak) {
            failures = 0;
            step *= cfg.step_decay;
            // a collapsed step can no longer move the point; start the schedule over
            if (step < 1e-9 * cfg.step_init) step = cfg.step_init;
        }
    }
    if (out.trajectory.back().value != out.best.value) {
        out.trajectory.push_back({evals - 1, out.best.value});
    }
    out.summary = {seed, out.best.value, evals, rank};
    return out;
}

}  // namespace detail

/// Restart r draws its own stream from derive_seed(seed, r) and gets
/// budget / restarts evaluations (the remainder goes to the first restarts).
/// Restarts run concurrently and merge by index, so the result depends only
/// on the config.
inline SearchResult search(const SearchConfig& cfg) {
    cfg.validate();
    std::vector<std::future<detail::RestartOutcome>> jobs;
    for (int r = 0; r < cfg.restarts; ++r) {
        const long share = cfg.budget / cfg.restarts + (r < cfg.budget % cfg.restarts ? 1 : 0);
        jobs.push_back(std::async(std::launch::async, detail::run_restart, std::cref(cfg), r, share));
    }

    SearchResult res;
    res.config = cfg;
    res.bound = cfg.bound();
    long offset = 0;
    bool have_best = false;
    for (int r = 0; r < cfg.restarts; ++r) {
        detail::RestartOutcome o = jobs[r].get();
        for (const TrajectoryPoint& p : o.trajectory) res.trajectory.push_back({offset + p.eval_index, p.value});
        offset += o.summary.evals;
        res.restarts.push_back(o.summary);
        res.bound_exceeded = res.bound_exceeded || o.exceeded;
        if (!have_best || o.best.value > res.best_value) {
            have_best = true;
            res.best_value = o.best.value;
            res.best_restart = r;
            if (cfg.kind == SearchKind::triangle) {
                res.best_point = o.best.params;
            } else {
                const PsdBlock blk = detail::block_of_factor(o.best.params.front());
                res.best_point = {blk.a().mat(), blk.x(), blk.b().mat()};
            }
        }
    }
    res.eval_count = offset;
    return res;
}

struct ConjectureSummary {
    int k = 0;
    int n = 0;
    double best_value = 0.0;
    double conjectured_bound = 0.0;  // k/4
    double fraction_of_bound = 0.0;  // best_value / (k/4)
    bool exceeded = false;
    /// Margin of triangle_bound re-run on the best point (independent route).
    double reverified_margin = 0.0;
    bool reverified_pass = false;
    std::string statement;
};

struct ConjectureReport {
    SearchResult search;
    ConjectureSummary summary;
};

/// Triangle search for odd k > 1. The output is evidence only: it records how
/// close the search came to k/4 and never claims a resolution either way.
inline ConjectureReport conjecture_report(int k, int n, SearchConfig cfg) {
    if (k % 2 == 0) {
        throw Error(ErrorKind::even_k, "k/4 is already known to be sharp for even k (n >= 3)", k);
    }
    if (k < 3) throw Error(ErrorKind::invalid_config, "conjecture needs odd k > 1");
    cfg.kind = SearchKind::triangle;
    cfg.k = k;
    cfg.n = n;
    ConjectureReport rep{search(cfg), {}};
    ConjectureSummary& s = rep.summary;
    s.k = k;
    s.n = n;
    s.best_value = rep.search.best_value;
    s.conjectured_bound = 0.25 * k;
    s.fraction_of_bound = s.best_value / s.conjectured_bound;
    s.exceeded = rep.search.bound_exceeded;
    const WitnessReport check = triangle_bound(rep.search.best_point, Tolerance{1e-12, 1e-14});
    s.reverified_margin = check.margin;
    s.reverified_pass = check.pass;
    if (s.exceeded) {
        s.statement = "best value exceeds the proved bound k/4: treat as a numerical defect; reproducer saved";
    } else {
        s.statement = "search reached " + std::to_string(s.best_value) + " of the bound " +
                      std::to_string(s.conjectured_bound) + "; heuristic coverage, no resolution claimed";
    }
    return rep;
}

}  // namespace blockineq
