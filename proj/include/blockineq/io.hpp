#pragma once

// JSON and CSV (de)serialization: matrix {"n", "re", "im"}, block
// {"A", "X", "B"}, factor lists {"pairs": [{"A", "B"}]}, and the report
// types. Needs nlohmann/json on the include path.

#include "block.hpp"
#include "checks.hpp"
#include "corpus.hpp"
#include "extremal.hpp"
#include "witness.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace blockineq {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "1.0.0";

// JSON has no NaN/Inf; they are written as the strings "nan", "inf", "-inf".
inline Json real_to_json(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

inline double real_from_json(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
    }
    throw Error(ErrorKind::parse_error, "expected a number");
}

inline Json reals_to_json(const std::vector<double>& v) {
    Json out = Json::array();
    for (double x : v) out.push_back(real_to_json(x));
    return out;
}

inline Json matrix_to_json(const Mat& m) {
    Json re = Json::array();
    Json im = Json::array();
    bool real = true;
    for (Index i = 0; i < m.rows(); ++i) {
        Json rr = Json::array();
        Json ii = Json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            rr.push_back(real_to_json(m(i, j).real()));
            ii.push_back(real_to_json(m(i, j).imag()));
            real = real && m(i, j).imag() == 0.0;
        }
        re.push_back(std::move(rr));
        im.push_back(std::move(ii));
    }
    Json out;
    out["n"] = m.rows();
    if (m.rows() != m.cols()) out["cols"] = m.cols();
    out["re"] = std::move(re);
    if (!real) out["im"] = std::move(im);
    return out;
}

inline Mat matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("re")) throw Error(ErrorKind::parse_error, "matrix needs \"re\"");
    const Json& re = j.at("re");
    if (!re.is_array()) throw Error(ErrorKind::parse_error, "\"re\" must be an array of rows");
    const Index rows = static_cast<Index>(re.size());
    const Index n = j.contains("n") ? j.at("n").get<Index>() : rows;
    const Index cols = j.contains("cols") ? j.at("cols").get<Index>() : n;
    if (rows != n || n < 1) throw Error(ErrorKind::parse_error, "\"n\" disagrees with the row count");
    const Json* im = j.contains("im") ? &j.at("im") : nullptr;
    if (im && (!im->is_array() || static_cast<Index>(im->size()) != rows)) {
        throw Error(ErrorKind::parse_error, "\"im\" has the wrong shape");
    }
    Mat m(rows, cols);
    for (Index r = 0; r < rows; ++r) {
        if (!re[r].is_array() || static_cast<Index>(re[r].size()) != cols) {
            throw Error(ErrorKind::parse_error, "row " + std::to_string(r) + " has the wrong length");
        }
        if (im && (!(*im)[r].is_array() || static_cast<Index>((*im)[r].size()) != cols)) {
            throw Error(ErrorKind::parse_error, "imaginary row " + std::to_string(r) + " has the wrong length");
        }
        for (Index c = 0; c < cols; ++c) {
            m(r, c) = cplx(real_from_json(re[r][c]), im ? real_from_json((*im)[r][c]) : 0.0);
        }
    }
    if (!all_finite(m)) throw Error(ErrorKind::non_finite, "matrix has NaN or Inf entries");
    return m;
}

inline Json block_to_json(const PsdBlock& blk) {
    Json out;
    out["A"] = matrix_to_json(blk.a().mat());
    out["X"] = matrix_to_json(blk.x());
    out["B"] = matrix_to_json(blk.b().mat());
    return out;
}

/// Validates PSD; NotPsd carries lambda_min of the assembled matrix.
inline PsdBlock block_from_json(const Json& j, const Tolerance& tol = {}) {
    if (!j.is_object() || !j.contains("A") || !j.contains("X") || !j.contains("B")) {
        throw Error(ErrorKind::parse_error, "block needs \"A\", \"X\" and \"B\"");
    }
    return make_block(matrix_from_json(j.at("A")), matrix_from_json(j.at("X")), matrix_from_json(j.at("B")), tol);
}

inline Json factors_to_json(const FactorList& f) {
    Json pairs = Json::array();
    for (const FactorPair& p : f.pairs()) {
        Json e;
        e["A"] = matrix_to_json(p.a);
        e["B"] = matrix_to_json(p.b);
        pairs.push_back(std::move(e));
    }
    Json out;
    out["pairs"] = std::move(pairs);
    return out;
}

inline FactorList factors_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("pairs") || !j.at("pairs").is_array()) {
        throw Error(ErrorKind::parse_error, "factor list needs a \"pairs\" array");
    }
    std::vector<FactorPair> pairs;
    for (const Json& p : j.at("pairs")) {
        if (!p.is_object() || !p.contains("A") || !p.contains("B")) {
            throw Error(ErrorKind::parse_error, "each pair needs \"A\" and \"B\"");
        }
        pairs.push_back({matrix_from_json(p.at("A")), matrix_from_json(p.at("B"))});
    }
    return FactorList(std::move(pairs));
}

inline Json parse_json_text(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::parse_error, std::string("malformed JSON: ") + e.what());
    }
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::parse_error, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::parse_error, "cannot write " + path);
    out << text;
    if (!out) throw Error(ErrorKind::parse_error, "write failed for " + path);
}

inline Json load_json_file(const std::string& path) { return parse_json_text(read_text_file(path)); }

// --- reports ---------------------------------------------------------------

inline Json spectra_to_json(const std::vector<std::pair<std::string, std::vector<double>>>& spectra) {
    Json out = Json::object();
    for (const auto& [k, v] : spectra) out[k] = reals_to_json(v);
    return out;
}

inline Json witness_to_json(const WitnessReport& r) {
    Json out;
    out["claim_id"] = to_string(r.claim);
    out["witness_class"] = r.witness_class == WitnessClass::symmetry ? "symmetry" : "unitary";
    out["margin"] = real_to_json(r.margin);
    out["scale"] = real_to_json(r.scale);
    out["pass"] = r.pass;
    out["witness_defect"] = real_to_json(r.witness_defect);
    Json vs = Json::array();
    for (const Mat& v : r.witnesses) vs.push_back(matrix_to_json(v));
    out["V"] = std::move(vs);
    out["lhs"] = matrix_to_json(r.lhs);
    out["rhs"] = matrix_to_json(r.rhs);
    Json aux = Json::object();
    for (const auto& [k, v] : r.aux_values) aux[k] = real_to_json(v);
    out["aux"] = std::move(aux);
    out["spectra"] = spectra_to_json(r.aux_spectra);
    return out;
}

inline std::string params_to_string(const Params& p) {
    std::ostringstream ss;
    ss << std::setprecision(6);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) ss << ';';
        ss << p[i].first << '=' << p[i].second;
    }
    return ss.str();
}

inline Json check_to_json(const CheckReport& r) {
    Json out;
    out["check_id"] = to_string(r.check);
    if (!r.op.empty()) out["op"] = r.op;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = real_to_json(v);
    out["params"] = std::move(params);
    out["lhs"] = real_to_json(r.lhs_value);
    out["rhs"] = real_to_json(r.rhs_value);
    out["pass"] = r.pass;
    out["worst_violation"] = real_to_json(r.worst_violation);
    if (!r.notes.empty()) out["notes"] = r.notes;
    return out;
}

inline Json probe_to_json(const ProbeResult& p) {
    Json out;
    out["family"] = to_string(p.family);
    out["param"] = real_to_json(p.param);
    out["ratio"] = real_to_json(p.ratio);
    out["bound"] = real_to_json(p.bound);
    out["gap"] = real_to_json(p.gap);
    if (!p.details.empty()) out["details"] = spectra_to_json(p.details);
    return out;
}

inline Json search_config_to_json(const SearchConfig& c) {
    Json out;
    out["kind"] = to_string(c.kind);
    out["k"] = c.k;
    out["n"] = c.n;
    out["budget"] = c.budget;
    out["restarts"] = c.restarts;
    out["seed"] = c.seed;
    out["step_init"] = c.step_init;
    out["step_decay"] = c.step_decay;
    out["seeded_start"] = c.start.has_value();
    return out;
}

inline Json search_to_json(const SearchResult& r) {
    Json out;
    out["config"] = search_config_to_json(r.config);
    out["best_value"] = real_to_json(r.best_value);
    out["bound"] = real_to_json(r.bound);
    out["bound_exceeded"] = r.bound_exceeded;
    out["eval_count"] = r.eval_count;
    out["best_restart"] = r.best_restart;
    Json pt = Json::array();
    for (const Mat& m : r.best_point) pt.push_back(matrix_to_json(m));
    out["best_point"] = std::move(pt);
    Json lineage = Json::array();
    for (const RestartSummary& s : r.restarts) {
        Json e;
        e["seed"] = s.seed;
        e["best_value"] = real_to_json(s.best_value);
        e["evals"] = s.evals;
        if (s.rank > 0) e["rank"] = s.rank;
        lineage.push_back(std::move(e));
    }
    out["restarts"] = std::move(lineage);
    Json traj = Json::array();
    for (const TrajectoryPoint& p : r.trajectory) traj.push_back(Json::array({p.eval_index, real_to_json(p.value)}));
    out["trajectory"] = std::move(traj);
    return out;
}

inline Json conjecture_summary_to_json(const ConjectureSummary& s) {
    Json out;
    out["k"] = s.k;
    out["n"] = s.n;
    out["best_value"] = real_to_json(s.best_value);
    out["conjectured_bound"] = real_to_json(s.conjectured_bound);
    out["fraction_of_bound"] = real_to_json(s.fraction_of_bound);
    out["exceeded"] = s.exceeded;
    out["reverified_margin"] = real_to_json(s.reverified_margin);
    out["reverified_pass"] = s.reverified_pass;
    out["statement"] = s.statement;
    return out;
}

/// Everything needed to reproduce a report. Identical manifests give
/// identical reports, so nothing time-dependent goes in unless asked for.
struct RunManifest {
    std::vector<std::string> command;
    std::optional<std::uint64_t> seed;
    Tolerance tol;
    std::string version = kToolVersion;
    std::vector<std::pair<std::string, std::string>> input_digests;  // path, sha256 hex
    std::optional<std::string> timestamp;
};

inline Json manifest_to_json(const RunManifest& m) {
    Json out;
    out["command"] = m.command;
    if (m.seed) {
        out["seed"] = *m.seed;
    } else {
        out["seed"] = nullptr;
    }
    out["tolerance"] = {{"rel", m.tol.rel}, {"abs", m.tol.abs}};
    out["version"] = m.version;
    Json inputs = Json::array();
    for (const auto& [path, digest] : m.input_digests) inputs.push_back({{"path", path}, {"sha256", digest}});
    out["inputs"] = std::move(inputs);
    if (m.timestamp) out["timestamp"] = *m.timestamp;
    return out;
}

// --- CSV -------------------------------------------------------------------

inline constexpr const char* kCsvHeader = "check_id,n,params,lhs,rhs,margin,pass";

inline std::string csv_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream ss;
    ss << std::setprecision(17) << v;
    return ss.str();
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct CsvRow {
    std::string check_id;
    Index n = 0;
    std::string params;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool pass = false;
};

inline std::string csv_line(const CsvRow& r) {
    return csv_field(r.check_id) + ',' + std::to_string(r.n) + ',' + csv_field(r.params) + ',' + csv_real(r.lhs) +
           ',' + csv_real(r.rhs) + ',' + csv_real(r.margin) + ',' + (r.pass ? "true" : "false");
}

inline CsvRow csv_row(const CorpusEntry& e) {
    return {e.check_id, e.n, e.params, e.lhs, e.rhs, e.margin, e.pass};
}

inline std::string corpus_to_csv(const CorpusResult& r) {
    std::string out = std::string(kCsvHeader) + '\n';
    for (const CorpusEntry& e : r.entries) out += csv_line(csv_row(e)) + '\n';
    return out;
}

inline Json corpus_summary_to_json(const CorpusSummary& s) {
    Json out;
    out["checks_run"] = s.checks_run;
    out["failures"] = s.failures;
    out["worst_margin"] = real_to_json(s.worst_margin);
    out["worst_check"] = s.worst_check;
    if (s.first_failure) {
        out["reproducer"] = {{"check_id", s.first_failure->check_id},
                             {"n", s.first_failure->n},
                             {"trial", s.first_failure->trial},
                             {"trial_seed", s.first_failure->trial_seed}};
    }
    return out;
}

inline Json corpus_to_json(const CorpusResult& r) {
    Json out;
    out["config"] = {{"dims", r.config.dims},
                     {"trials", r.config.trials},
                     {"seed", r.config.seed},
                     {"suite", to_string(r.config.suite)}};
    out["summary"] = corpus_summary_to_json(r.summary);
    Json entries = Json::array();
    for (const CorpusEntry& e : r.entries) {
        Json j;
        j["check_id"] = e.check_id;
        j["n"] = e.n;
        j["trial"] = e.trial;
        j["params"] = e.params;
        j["lhs"] = real_to_json(e.lhs);
        j["rhs"] = real_to_json(e.rhs);
        j["margin"] = real_to_json(e.margin);
        j["pass"] = e.pass;
        entries.push_back(std::move(j));
    }
    out["entries"] = std::move(entries);
    return out;
}

}  // namespace blockineq
