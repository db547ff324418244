// blockineq: verification corpus, witness inspection, sharpness probes,
// triangle/theorem search and Gram-block construction from the command line.
//
// Exit codes: 0 all pass, 1 inequality violated, 2 usage or input error,
// 3 a proved bound was exceeded during search (reproducer saved).

#include "blockineq/blockineq.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace blockineq;

namespace {

enum Exit { kPass = 0, kViolation = 1, kUsage = 2, kBreach = 3 };

struct Common {
    std::vector<std::string> argv;
    std::string out;
    double tol_rel = 1e-9;
    double tol_abs = 1e-12;
    bool timing = false;

    Tolerance tol() const { return Tolerance{tol_rel, tol_abs}; }
};

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return ss.str();
}

std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

RunManifest make_manifest(const Common& c, std::optional<std::uint64_t> seed) {
    RunManifest m;
    m.command = c.argv;
    m.seed = seed;
    m.tol = c.tol();
    if (c.timing) m.timestamp = utc_now();
    return m;
}

// Reads an input file and records its digest in the manifest.
std::string read_input(const std::string& path, RunManifest& m) {
    const std::string text = read_text_file(path);
    m.input_digests.emplace_back(path, sha256_hex(text));
    return text;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void emit(const Json& report, const std::string& out) {
    const std::string text = report.dump(2) + "\n";
    if (out.empty() || out == "-") {
        std::cout << text;
    } else {
        write_text_file(out, text);
    }
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << std::setprecision(12) << v;
    return ss.str();
}

// "2..4", "1,3,5" or "3"
std::vector<int> parse_dims(const std::string& s) {
    std::vector<int> out;
    auto to_int = [&](const std::string& t) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != t.size()) throw Error(ErrorKind::invalid_config, "bad dimension list: " + s);
        return v;
    };
    const std::size_t dots = s.find("..");
    if (dots != std::string::npos) {
        const int lo = to_int(s.substr(0, dots));
        const int hi = to_int(s.substr(dots + 2));
        if (lo > hi) throw Error(ErrorKind::invalid_config, "empty dimension range: " + s);
        for (int n = lo; n <= hi; ++n) out.push_back(n);
        return out;
    }
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(to_int(part));
    if (out.empty()) throw Error(ErrorKind::invalid_config, "empty dimension list");
    return out;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string dims = "1..5";
    int trials = 100;
    std::uint64_t seed = 0;
    std::string suite = "all";
};

int cmd_verify(const Common& c, const VerifyArgs& a) {
    CorpusConfig cfg;
    cfg.dims = parse_dims(a.dims);
    cfg.trials = a.trials;
    cfg.seed = a.seed;
    const std::optional<Suite> suite = suite_from_string(a.suite);
    if (!suite) throw Error(ErrorKind::invalid_config, "unknown suite " + a.suite);
    cfg.suite = *suite;
    cfg.tol = c.tol();
    cfg.validate();

    const auto t0 = std::chrono::steady_clock::now();
    const CorpusResult res = run_corpus(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json report;
    report["manifest"] = manifest_to_json(make_manifest(c, a.seed));
    if (ends_with(c.out, ".csv")) {
        // the CSV columns are fixed, so the manifest and summary go next to it
        write_text_file(c.out, corpus_to_csv(res));
        report["summary"] = corpus_summary_to_json(res.summary);
        report["csv"] = c.out;
        if (c.timing) report["wall_time_s"] = secs;
        emit(report, c.out + ".json");
    } else {
        const Json body = corpus_to_json(res);
        for (const auto& [k, v] : body.items()) report[k] = v;
        if (c.timing) report["wall_time_s"] = secs;
        if (!c.out.empty()) emit(report, c.out);
    }

    const CorpusSummary& s = res.summary;
    std::cout << "checks_run " << s.checks_run << "\nfailures " << s.failures << "\nworst_margin "
              << fmt(s.worst_margin) << " (" << s.worst_check << ")\n";
    if (c.timing) std::cout << "wall_time_s " << fmt(secs) << "\n";
    if (s.failures > 0) {
        const auto& r = *s.first_failure;
        std::cout << "VIOLATION " << r.check_id << " n=" << r.n << " trial=" << r.trial
                  << " trial_seed=" << r.trial_seed << "\nreproduce: blockineq verify --seed " << a.seed
                  << " --dims " << r.n << " --trials " << (r.trial + 1) << " --suite " << a.suite << "\n";
        return kViolation;
    }
    return kPass;
}

// --- witness ----------------------------------------------------------------

std::string matrix_text(const Mat& m) {
    std::ostringstream ss;
    for (Index i = 0; i < m.rows(); ++i) {
        ss << "  [";
        for (Index j = 0; j < m.cols(); ++j) {
            const cplx z = m(i, j);
            if (j) ss << ", ";
            ss << fmt(z.real());
            if (z.imag() != 0.0) ss << (z.imag() < 0 ? "-" : "+") << fmt(std::abs(z.imag())) << "i";
        }
        ss << "]\n";
    }
    return ss.str();
}

void print_witness(const std::string& label, const WitnessReport& r) {
    std::cout << label << " (" << to_string(r.claim) << "): margin " << fmt(r.margin) << ", "
              << (r.pass && r.witness_ok() ? "pass" : "FAIL") << "\n";
    std::cout << " lhs\n" << matrix_text(r.lhs) << " rhs\n" << matrix_text(r.rhs);
}

int cmd_witness(const Common& c, const std::string& block_path, const std::string& op) {
    RunManifest m = make_manifest(c, std::nullopt);
    const PsdBlock blk = block_from_json(parse_json_text(read_input(block_path, m)), c.tol());
    const Tolerance tol = c.tol();

    std::vector<std::pair<std::string, WitnessReport>> forms;
    if (op == "plus" || op == "schur") {
        const FormPair fp = theorem_witness(blk, op == "plus" ? Diamond::plus : Diamond::schur, tol);
        forms = {{"agm_form", fp.agm_form}, {"geo_form", fp.geo_form}};
    } else if (op == "minus") {
        const FormPair fp = minus_witness(blk, tol);
        forms = {{"agm_form", fp.agm_form}, {"geo_form", fp.geo_form}};
    } else if (op == "mean-plus" || op == "mean-minus") {
        forms = {{"mean_form", mean_witness(blk, op == "mean-plus" ? Diamond::plus : Diamond::minus, tol)}};
    } else {
        throw Error(ErrorKind::invalid_config, "unknown op " + op + " (plus, schur, minus, mean-plus, mean-minus)");
    }

    Json report;
    report["manifest"] = manifest_to_json(m);
    report["op"] = op;
    report["block_margin"] = real_to_json(blk.margin());
    bool ok = true;
    const Mat& v = forms.front().second.witnesses.front();
    std::cout << "V\n" << matrix_text(v);
    for (const auto& [label, r] : forms) {
        report[label] = witness_to_json(r);
        print_witness(label, r);
        ok = ok && r.pass && r.witness_ok();
    }
    if (!c.out.empty()) emit(report, c.out);
    return ok ? kPass : kViolation;
}

// --- probe ------------------------------------------------------------------

struct ProbeArgs {
    std::string family = "niceex";
    std::optional<double> t_min;
    std::optional<double> t_max;
    int t_steps = 199;
};

int cmd_probe(const Common& c, const ProbeArgs& a) {
    std::vector<ProbeResult> rows;
    const bool grid = a.family == "niceex" || a.family == "schur" || a.family == "projection";
    if (grid) {
        const bool proj = a.family == "projection";
        const double lo = a.t_min.value_or(proj ? 0.01 : 0.1);
        const double hi = a.t_max.value_or(proj ? 3.0 : 10.0);
        if (a.t_steps < 1) throw Error(ErrorKind::invalid_config, "--t-steps must be >= 1");
        if (!(lo <= hi)) throw Error(ErrorKind::invalid_config, "--t-min must not exceed --t-max");
        if (a.t_steps == 1 && lo != hi) throw Error(ErrorKind::invalid_config, "one step needs --t-min == --t-max");
        for (int i = 0; i < a.t_steps; ++i) {
            const double t = a.t_steps == 1 ? lo : lo + (hi - lo) * i / (a.t_steps - 1);
            if (proj) {
                rows.push_back(probe_projection(t));
            } else {
                rows.push_back(probe_niceex(t, a.family == "niceex" ? Diamond::plus : Diamond::schur));
            }
        }
    } else if (a.family == "referee") {
        rows.push_back(probe_referee());
    } else if (a.family == "dominance") {
        rows.push_back(probe_dominance_pair());
    } else if (a.family == "normal-schur") {
        rows.push_back(probe_normal_schur_pair());
    } else {
        throw Error(ErrorKind::invalid_config,
                    "unknown family " + a.family + " (niceex, schur, dominance, normal-schur, referee, projection)");
    }

    Json report;
    report["manifest"] = manifest_to_json(make_manifest(c, std::nullopt));
    report["family"] = a.family;
    Json table = Json::array();
    for (const ProbeResult& r : rows) table.push_back(probe_to_json(r));
    report["rows"] = std::move(table);

    bool ok = true;
    std::cout << std::left << std::setw(14) << "param" << std::setw(20) << "ratio" << std::setw(20) << "bound"
              << "gap\n";
    for (const ProbeResult& r : rows) {
        std::cout << std::setw(14) << fmt(r.param) << std::setw(20) << fmt(r.ratio) << std::setw(20) << fmt(r.bound)
                  << fmt(r.gap) << "\n";
        // the projection family is unbounded by design; its "bound" is the closed form
        if (r.family != ProbeFamily::projection && r.gap < -c.tol_rel * std::max(1.0, r.bound)) ok = false;
    }
    if (grid && rows.size() > 1 && a.family != "projection") {
        double best = rows.front().ratio;
        for (const ProbeResult& r : rows) best = std::max(best, r.ratio);
        // t and 1/t give the same ratio, so ties are listed; the first one is the argmax
        Json ties = Json::array();
        std::optional<double> argmax;
        for (const ProbeResult& r : rows) {
            if (r.ratio >= best - 1e-12) {
                if (!argmax) argmax = r.param;
                ties.push_back(r.param);
            }
        }
        report["argmax"] = {{"param", *argmax}, {"ratio", real_to_json(best)}, {"ties", ties}};
        std::cout << "argmax t=" << fmt(*argmax) << " ratio=" << fmt(best) << "\n";
    }
    if (!c.out.empty()) emit(report, c.out);
    return ok ? kPass : kViolation;
}

// --- search -----------------------------------------------------------------

struct SearchArgs {
    std::string kind = "triangle";
    int k = 2;
    int n = 3;
    long budget = 10000;
    int restarts = 4;
    std::uint64_t seed = 0;
    std::string start;
};

int cmd_search(const Common& c, const SearchArgs& a) {
    SearchConfig cfg;
    if (a.kind == "triangle") {
        cfg.kind = SearchKind::triangle;
    } else if (a.kind == "theorem-plus") {
        cfg.kind = SearchKind::theorem_plus;
    } else if (a.kind == "theorem-schur") {
        cfg.kind = SearchKind::theorem_schur;
    } else {
        throw Error(ErrorKind::invalid_config, "unknown kind " + a.kind + " (triangle, theorem-plus, theorem-schur)");
    }
    cfg.k = a.k;
    cfg.n = a.n;
    cfg.budget = a.budget;
    cfg.restarts = a.restarts;
    cfg.seed = a.seed;
    if (!a.start.empty()) {
        if (a.start != "referee") throw Error(ErrorKind::invalid_config, "unknown start " + a.start + " (referee)");
        if (cfg.kind != SearchKind::triangle || cfg.k != 2 || cfg.n != 3) {
            throw Error(ErrorKind::invalid_config, "--start referee needs triangle with k=2, n=3");
        }
        const RefereeConstruction rc = referee_construction();
        cfg.start = std::vector<Mat>{rc.c1, rc.c2};
    }
    cfg.validate();

    const bool conjecture = cfg.kind == SearchKind::triangle && cfg.k % 2 == 1;
    const auto t0 = std::chrono::steady_clock::now();
    std::optional<ConjectureReport> conj;
    SearchResult res;
    if (conjecture) {
        conj = conjecture_report(cfg.k, cfg.n, cfg);
        res = conj->search;
    } else {
        res = search(cfg);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json report;
    report["manifest"] = manifest_to_json(make_manifest(c, a.seed));
    report["search"] = search_to_json(res);
    if (conj) report["conjecture"] = conjecture_summary_to_json(conj->summary);
    if (c.timing) report["wall_time_s"] = secs;

    std::cout << "best_value " << fmt(res.best_value) << "\nbound " << fmt(res.bound) << "\nevals " << res.eval_count
              << "\n";
    if (conj) std::cout << conj->summary.statement << "\n";
    if (c.timing) std::cout << "wall_time_s " << fmt(secs) << "\n";

    if (res.bound_exceeded) {
        const std::string path = c.out.empty() ? "search-reproducer-" + std::to_string(a.seed) + ".json" : c.out;
        emit(report, path);
        std::cout << "BOUND EXCEEDED: reproducer saved to " << path << "\n";
        return kBreach;
    }
    if (!c.out.empty()) emit(report, c.out);
    return kPass;
}

// --- gram -------------------------------------------------------------------

int cmd_gram(const Common& c, const std::string& factors_path) {
    RunManifest m = make_manifest(c, std::nullopt);
    const FactorList f = factors_from_json(parse_json_text(read_input(factors_path, m)));
    const PsdBlock blk = gram_block(f, c.tol());
    // loads straight back as a block file; the extra keys are ignored
    Json report = block_to_json(blk);
    report["manifest"] = manifest_to_json(m);
    report["pairs"] = f.pairs().size();
    report["block_margin"] = real_to_json(blk.margin());
    emit(report, c.out);
    if (!c.out.empty()) {
        std::cout << "block of order " << 2 * blk.n() << " from " << f.pairs().size() << " pair(s), lambda_min "
                  << fmt(blk.margin()) << "\n";
    }
    return kPass;
}

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--out", c.out, "Report path (.json; .csv for verify; '-' for stdout)");
    sub->add_option("--tol-rel", c.tol_rel, "Relative tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-abs", c.tol_abs, "Absolute tolerance")->check(CLI::PositiveNumber);
    sub->add_flag("--timing", c.timing, "Add wall time and a timestamp (reports stop being byte-identical)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of block-matrix inequalities and their sharpness constants"};
    app.require_subcommand(1);

    Common common;
    common.argv.assign(argv, argv + argc);
    if (!common.argv.empty()) common.argv.front() = "blockineq";

    VerifyArgs va;
    CLI::App* verify = app.add_subcommand("verify", "Run the seeded property corpus");
    verify->add_option("--dims", va.dims, "Dimensions: 2..4, 1,3,5 or 3")->capture_default_str();
    verify->add_option("--trials", va.trials, "Blocks per dimension")->capture_default_str();
    verify->add_option("--seed", va.seed, "Corpus seed")->required();
    verify->add_option("--suite", va.suite, "all, theorem, corollaries, norms or gram")->capture_default_str();
    add_common(verify, common);

    std::string block_path;
    std::string op = "plus";
    CLI::App* witness = app.add_subcommand("witness", "Construct and check the witness for a block file");
    witness->add_option("--block", block_path, "Block JSON {A, X, B}")->required();
    witness->add_option("--op", op, "plus, schur, minus, mean-plus or mean-minus")->capture_default_str();
    add_common(witness, common);

    ProbeArgs pa;
    CLI::App* probe = app.add_subcommand("probe", "Evaluate an extremal family");
    probe->add_option("--family", pa.family, "niceex, schur, dominance, normal-schur, referee, projection")
        ->capture_default_str();
    probe->add_option("--t-min", pa.t_min, "Grid start (t, or the angle a for projection)");
    probe->add_option("--t-max", pa.t_max, "Grid end");
    probe->add_option("--t-steps", pa.t_steps, "Grid points")->capture_default_str();
    add_common(probe, common);

    SearchArgs sa;
    CLI::App* search_cmd = app.add_subcommand("search", "Random search against 1/4 or k/4");
    search_cmd->add_option("--kind", sa.kind, "triangle, theorem-plus or theorem-schur")->capture_default_str();
    search_cmd->add_option("--k", sa.k, "Number of contractions (triangle)")->capture_default_str();
    search_cmd->add_option("--n", sa.n, "Matrix order")->capture_default_str();
    search_cmd->add_option("--budget", sa.budget, "Objective evaluations in total")->capture_default_str();
    search_cmd->add_option("--restarts", sa.restarts, "Independent restarts")->capture_default_str();
    search_cmd->add_option("--seed", sa.seed, "Search seed")->required();
    search_cmd->add_option("--start", sa.start, "Seed restart 0 at a known point: referee");
    add_common(search_cmd, common);

    std::string factors_path;
    CLI::App* gram = app.add_subcommand("gram", "Build [[sum A*A, sum A*B], [sum B*A, sum B*B]] from a factor list");
    gram->add_option("--factors", factors_path, "Factor list JSON {\"pairs\": [{A, B}, ...]}")->required();
    add_common(gram, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(common, va);
        if (witness->parsed()) return cmd_witness(common, block_path, op);
        if (probe->parsed()) return cmd_probe(common, pa);
        if (search_cmd->parsed()) return cmd_search(common, sa);
        if (gram->parsed()) return cmd_gram(common, factors_path);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what();
        if (!std::isnan(e.value())) std::cerr << " (value " << fmt(e.value()) << ")";
        std::cerr << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
