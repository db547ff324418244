#pragma once

// Seeded verification corpus: samples blocks (full rank and rank deficient)
// per dimension and runs every witness and spectral check of a suite over
// them, collecting one flat entry per comparison.

#include "block.hpp"
#include "checks.hpp"
#include "random.hpp"
#include "witness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace blockineq {

enum class Suite { all, theorem, corollaries, norms, gram };

inline const char* to_string(Suite s) {
    switch (s) {
    case Suite::all: return "all";
    case Suite::theorem: return "theorem";
    case Suite::corollaries: return "corollaries";
    case Suite::norms: return "norms";
    case Suite::gram: return "gram";
    }
    return "?";
}

inline std::optional<Suite> suite_from_string(const std::string& s) {
    for (Suite v : {Suite::all, Suite::theorem, Suite::corollaries, Suite::norms, Suite::gram}) {
        if (s == to_string(v)) return v;
    }
    return std::nullopt;
}

struct CorpusConfig {
    std::vector<int> dims;
    int trials = 1;
    std::uint64_t seed = 0;
    Suite suite = Suite::all;
    Tolerance tol;

    void validate() const {
        if (dims.empty()) throw Error(ErrorKind::invalid_config, "no dimensions given");
        for (int n : dims) {
            if (n < 1 || n > 16) throw Error(ErrorKind::invalid_config, "dimensions must lie in 1..16", n);
        }
        if (trials < 1) throw Error(ErrorKind::invalid_config, "trials must be >= 1", trials);
        tol.validate();
    }
};

struct CorpusEntry {
    std::string check_id;
    int n = 0;
    int trial = 0;
    std::uint64_t trial_seed = 0;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;      // rhs - lhs for checks, lambda_min(rhs - lhs) for witnesses
    double normalized = 0.0;  // margin / scale
    bool pass = false;
    bool witness = false;
};

struct CorpusSummary {
    long checks_run = 0;
    long failures = 0;
    double worst_margin = 0.0;  // smallest normalized margin
    std::string worst_check;
    struct Reproducer {
        std::string check_id;
        int n;
        int trial;
        std::uint64_t trial_seed;
    };
    std::optional<Reproducer> first_failure;
};

struct CorpusResult {
    CorpusConfig config;
    std::vector<CorpusEntry> entries;
    CorpusSummary summary;
};

/// Trial seeds are derive_seed(derive_seed(seed, n), trial), so any single
/// (n, trial) can be re-run on its own.
inline std::uint64_t trial_seed(std::uint64_t seed, int n, int trial) {
    return derive_seed(derive_seed(seed, static_cast<std::uint64_t>(n)), static_cast<std::uint64_t>(trial));
}

/// Cycles through ranks 1..2n, so one trial in 2n is full rank.
inline Index trial_rank(int n, int trial) { return 1 + trial % (2 * n); }

namespace detail {

class EntrySink {
public:
    EntrySink(std::vector<CorpusEntry>& out, int n, int trial, std::uint64_t seed)
        : out_(out), n_(n), trial_(trial), seed_(seed) {}

    void witness(const WitnessReport& r, const std::string& params = {}) {
        CorpusEntry e = base(to_string(r.claim), params);
        e.witness = true;
        e.lhs = r.lhs.size() ? eigvalsh(HermitianMatrix::symmetrized(r.lhs)).max() : 0.0;
        e.rhs = r.rhs.size() ? eigvalsh(HermitianMatrix::symmetrized(r.rhs)).max() : 0.0;
        e.margin = r.margin;
        e.normalized = r.normalized_margin();
        e.pass = r.pass && r.witness_ok();
        out_.push_back(std::move(e));
    }

    void check(const CheckReport& r, std::string params = {}) {
        if (!r.op.empty()) params = "op=" + r.op + (params.empty() ? "" : ";" + params);
        const std::string p = params_to_text(r.params);
        if (!p.empty()) params += (params.empty() ? "" : ";") + p;
        CorpusEntry e = base(to_string(r.check), params);
        e.lhs = r.lhs_value;
        e.rhs = r.rhs_value;
        e.margin = (std::isinf(r.lhs_value) && std::isinf(r.rhs_value)) ? 0.0 : r.rhs_value - r.lhs_value;
        e.normalized = slack(r.lhs_value, r.rhs_value);
        if (std::isinf(e.normalized) && e.normalized > 0.0) e.normalized = 1.0;
        e.pass = r.pass;
        out_.push_back(std::move(e));
    }

    void flag(const std::string& id, bool ok, double lhs, double rhs, const std::string& params = {}) {
        CorpusEntry e = base(id, params);
        e.lhs = lhs;
        e.rhs = rhs;
        e.margin = rhs - lhs;
        e.normalized = ok ? 0.0 : -1.0;
        e.pass = ok;
        out_.push_back(std::move(e));
    }

    void error(const std::string& group, const Error& err) {
        CorpusEntry e = base(std::string("error:") + group, std::string("kind=") + to_string(err.kind()));
        e.normalized = -std::numeric_limits<double>::infinity();
        e.margin = -std::numeric_limits<double>::infinity();
        e.pass = false;
        out_.push_back(std::move(e));
    }

    static std::string params_to_text(const Params& p) {
        std::ostringstream ss;
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (i) ss << ';';
            ss << p[i].first << '=' << p[i].second;
        }
        return ss.str();
    }

private:
    CorpusEntry base(std::string id, std::string params) const {
        CorpusEntry e;
        e.check_id = std::move(id);
        e.n = n_;
        e.trial = trial_;
        e.trial_seed = seed_;
        e.params = std::move(params);
        return e;
    }

    std::vector<CorpusEntry>& out_;
    int n_;
    int trial_;
    std::uint64_t seed_;
};

// Inputs shared by every group of one trial.
struct TrialInputs {
    PsdBlock blk;
    Mat fa, fb;    // a factor pair
    Mat fa2, fb2;  // a second pair for the sum forms
    Mat z;
    Mat na, nb;  // normal matrices
    std::vector<Mat> contractions;
    std::vector<Mat> hermitian_contractions;
};

inline TrialInputs draw_inputs(int n, int trial, std::uint64_t seed, const Tolerance& tol) {
    const Index nn = n;
    TrialInputs in{sample_psd_block(nn, trial_rank(n, trial), derive_seed(seed, 0), tol), {}, {}, {}, {}, {}, {}, {},
                   {}, {}};
    Rng rng(derive_seed(seed, 1));
    in.fa = ginibre(nn, nn, rng);
    in.fb = ginibre(nn, nn, rng);
    in.fa2 = ginibre(nn, nn, rng);
    in.fb2 = ginibre(nn, nn, rng);
    // every other trial makes the second factor rank one
    if (trial % 2 == 1) in.fb = ginibre(nn, 1, rng) * ginibre(1, nn, rng);
    in.z = ginibre(nn, nn, rng);
    in.na = random_normal_matrix(nn, rng);
    in.nb = random_normal_matrix(nn, rng);
    for (int j = 0; j < 3; ++j) in.contractions.push_back(random_contraction(nn, rng));
    for (int j = 0; j < 2; ++j) {
        in.hermitian_contractions.push_back(
            HermitianMatrix::symmetrized(clip_to_contraction(random_hermitian(nn, rng).mat())).mat());
    }
    return in;
}

template <typename F>
void guarded(EntrySink& sink, const char* group, F&& body) {
    try {
        body();
    } catch (const Error& e) {
        sink.error(group, e);
    }
}

inline void run_theorem_group(const TrialInputs& in, EntrySink& sink, const Tolerance& tol) {
    const PsdBlock& blk = in.blk;
    guarded(sink, "theorem", [&] {
        for (Diamond op : {Diamond::plus, Diamond::schur}) {
            const FormPair fp = theorem_witness(blk, op, tol);
            sink.witness(fp.agm_form);
            sink.witness(fp.geo_form);
            const double top = fp.agm_form.aux("eig_form_lhs");
            const double cap = fp.agm_form.aux("eig_form_rhs");
            sink.flag("theorem_eig_form", within(top, cap, tol), top, cap, std::string("op=") + to_string(op));
            // the geometric form implies the AGM form
            sink.flag("geo_implies_agm", !fp.geo_form.pass || fp.agm_form.pass, 0.0, 0.0,
                      std::string("op=") + to_string(op));
        }
        const FormPair mf = minus_witness(blk, tol);
        sink.witness(mf.agm_form);
        sink.witness(mf.geo_form);
        sink.flag("geo_implies_agm", !mf.geo_form.pass || mf.agm_form.pass, 0.0, 0.0, "op=minus");
        sink.witness(mean_witness(blk, Diamond::plus, tol), "op=plus");
        sink.witness(mean_witness(blk, Diamond::minus, tol), "op=minus");
    });
}

inline void run_corollary_group(const TrialInputs& in, EntrySink& sink, const Tolerance& tol) {
    const PsdBlock& blk = in.blk;
    const int n = static_cast<int>(blk.n());
    guarded(sink, "offdiag", [&] {
        const OffdiagReports od = offdiag_bound(blk, tol);
        sink.witness(od.adjoint_form);
        sink.witness(od.abs_form);
        sink.witness(prop0_witness(blk, tol));
    });
    guarded(sink, "eigenvalues", [&] {
        sink.check(tao_bound(blk, tol));
        for (Diamond op : {Diamond::plus, Diamond::schur, Diamond::minus}) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) sink.check(weyl_geo_check(blk, op, j, k, tol));
            }
        }
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k <= 2 * j; ++k) sink.check(akext_check(blk, j, k, 2 * j - k, tol));
        }
        for (int j = 0; j < 2 * n; ++j) sink.check(audeh_kittaneh_check(blk, j, tol));
        for (int j = 0; j < n; ++j) sink.check(diag_check(in.z, j, tol));
    });
    guarded(sink, "zpolar", [&] {
        for (Diamond op : {Diamond::plus, Diamond::schur}) {
            const ZPolarReports zr = zpolar_checks(in.z, op, tol);
            sink.check(zr.wlog);
            sink.witness(zr.geo);
        }
    });
    guarded(sink, "normal_schur", [&] { sink.witness(normal_schur_witness(in.na, in.nb, tol)); });
    guarded(sink, "pm_dominance", [&] {
        // +-(X + X*) <= A + B holds for every PSD block
        const Mat s = blk.x() + blk.x().adjoint();
        const Mat t = blk.a().mat() + blk.b().mat();
        sink.witness(pm_dominance_witness(HermitianMatrix::symmetrized(s), HermitianMatrix::symmetrized(t), tol));
    });
    guarded(sink, "triangle", [&] {
        sink.witness(triangle_bound(in.contractions, tol), "k=3");
        sink.witness(triangle_bound(in.hermitian_contractions, tol), "k=2;hermitian");
    });
    guarded(sink, "bhatia_kittaneh", [&] { sink.witness(bhatia_kittaneh_witness(in.fa, in.fb, tol)); });
}

inline void run_norm_group(const TrialInputs& in, EntrySink& sink, const Tolerance& tol) {
    guarded(sink, "norms", [&] {
        for (Diamond op : {Diamond::plus, Diamond::schur}) sink.check(norm_check(in.blk, op, tol));
        sink.check(bhatia_davis_check(FactorList({{in.fa, in.fb}, {in.fa2, in.fb2}}), default_alpha_grid(), tol));
    });
}

inline void run_gram_group(const TrialInputs& in, EntrySink& sink, const Tolerance& tol) {
    const int n = static_cast<int>(in.fa.rows());
    guarded(sink, "gram", [&] {
        for (Diamond op : {Diamond::plus, Diamond::schur}) {
            for (int j = 0; j < n; ++j) {
                for (int k = 0; k < n; ++k) sink.check(gram_geo_check(in.fa, in.fb, op, j, k, tol));
            }
            sink.check(gram_norm_check(in.fa, in.fb, op, tol));
        }
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k <= 2 * j; ++k) sink.check(akext2_check(in.fa, in.fb, j, k, 2 * j - k, tol));
        }
        const FactorList f({{in.fa, in.fb}, {in.fa2, in.fb2}});
        const AndoReports ar = ando_sum_bound(f, tol);
        sink.witness(ar.geo_form);
        sink.witness(ar.mean_form);
        sink.check(det_schwarz_check(f, tol));
        sink.check(det_schwarz_check(FactorList({{in.fa, in.fb}}), tol), "pairs=1");
    });
}

}  // namespace detail

/// Runs the suite over dims x trials. Entries come out grouped by check id
/// (stable within a group), the order being independent of scheduling.
inline CorpusResult run_corpus(const CorpusConfig& cfg) {
    cfg.validate();
    CorpusResult res;
    res.config = cfg;
    const bool all = cfg.suite == Suite::all;
    for (int n : cfg.dims) {
        for (int t = 0; t < cfg.trials; ++t) {
            const std::uint64_t seed = trial_seed(cfg.seed, n, t);
            detail::EntrySink sink(res.entries, n, t, seed);
            std::optional<detail::TrialInputs> in;
            detail::guarded(sink, "sampling", [&] { in = detail::draw_inputs(n, t, seed, cfg.tol); });
            if (!in) continue;
            if (all || cfg.suite == Suite::theorem) detail::run_theorem_group(*in, sink, cfg.tol);
            if (all || cfg.suite == Suite::corollaries) detail::run_corollary_group(*in, sink, cfg.tol);
            if (all || cfg.suite == Suite::norms) detail::run_norm_group(*in, sink, cfg.tol);
            if (all || cfg.suite == Suite::gram) detail::run_gram_group(*in, sink, cfg.tol);
        }
    }
    std::stable_sort(res.entries.begin(), res.entries.end(),
                     [](const CorpusEntry& a, const CorpusEntry& b) { return a.check_id < b.check_id; });

    CorpusSummary& s = res.summary;
    s.checks_run = static_cast<long>(res.entries.size());
    s.worst_margin = std::numeric_limits<double>::infinity();
    for (const CorpusEntry& e : res.entries) {
        if (e.normalized < s.worst_margin) {
            s.worst_margin = e.normalized;
            s.worst_check = e.check_id;
        }
        if (!e.pass) {
            ++s.failures;
            if (!s.first_failure) s.first_failure = CorpusSummary::Reproducer{e.check_id, e.n, e.trial, e.trial_seed};
        }
    }
    if (res.entries.empty()) s.worst_margin = 0.0;
    return res;
}

}  // namespace blockineq
