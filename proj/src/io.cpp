#include "theicp/io.hpp"

#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace theicp::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
    throw std::runtime_error(origin + ": " + what);
}

// Flattens a depth-m nested array into row-major order, checking shape.
void flatten_nested(const json& node, int order, int dim, int depth,
                    const std::string& path, std::vector<double>& out,
                    const std::string& origin) {
    if (!node.is_array())
        fail(origin, path + ": expected an array at depth " + std::to_string(depth));
    if (static_cast<int>(node.size()) != dim)
        fail(origin, path + ": expected " + std::to_string(dim) + " entries, got " +
                         std::to_string(node.size()));
    for (int i = 0; i < dim; ++i) {
        const std::string sub = path + "[" + std::to_string(i) + "]";
        if (depth + 1 == order) {
            if (!node[i].is_number())
                fail(origin, sub + ": expected a number");
            out.push_back(node[i].get<double>());
        } else {
            flatten_nested(node[i], order, dim, depth + 1, sub, out, origin);
        }
    }
}

json nest_tensor(const Tensor& T, std::size_t& cursor, int depth) {
    json node = json::array();
    if (depth + 1 == T.order()) {
        for (int i = 0; i < T.dim(); ++i) node.push_back(T.data()[cursor++]);
    } else {
        for (int i = 0; i < T.dim(); ++i) node.push_back(nest_tensor(T, cursor, depth + 1));
    }
    return node;
}

Tensor tensor_from_field(const json& doc, const std::string& name, int m, int n,
                         bool symmetrize_flag, bool strict, const std::string& origin) {
    const json& node = doc.at(name);
    if (node.is_string()) {
        const std::string lit = node.get<std::string>();
        if (lit == "identity") return identity_tensor(m, n);
        if (lit == "neg_identity") {
            Tensor id = identity_tensor(m, n);
            std::vector<double> data = id.data();
            for (double& v : data) v = -v;
            return Tensor::raw(m, n, std::move(data));
        }
        if (lit == "zero") return zero_tensor(m, n);
        fail(origin, name + ": unknown tensor literal '" + lit + "'");
    }
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(std::pow(n, m)));
    flatten_nested(node, m, n, 0, name, data, origin);
    try {
        if (symmetrize_flag) return symmetrize(m, n, data);
        if (strict) return Tensor::symmetric(m, n, std::move(data));
        return Tensor::raw(m, n, std::move(data));
    } catch (const std::invalid_argument& e) {
        fail(origin, name + ": " + e.what());
    }
}

json vector_to_json(const Vector& x) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < x.size(); ++i) arr.push_back(x[i]);
    return arr;
}

Vector vector_from_json(const json& arr) {
    Vector x(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) x[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
    return x;
}

}  // namespace

ProblemTriple parse_problem(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("parse error: ") + e.what());
    }
    try {
        if (doc.value("format", 1) != 1)
            fail(origin, "unsupported document format " + doc["format"].dump());
        const int m = doc.at("m").get<int>();
        const int n = doc.at("n").get<int>();
        const bool symmetrize_flag = doc.value("symmetrize", false);
        const bool strict = doc.value("strict_symmetry", true);

        Tensor A = tensor_from_field(doc, "A", m, n, symmetrize_flag, strict, origin);
        Tensor B = tensor_from_field(doc, "B", m, n, symmetrize_flag, strict, origin);
        Tensor C = tensor_from_field(doc, "C", m, n, symmetrize_flag, strict, origin);

        Cone cone = Cone::orthant();
        if (doc.contains("cone")) {
            const json& cn = doc["cone"];
            const std::string type = cn.at("type").get<std::string>();
            if (type == "polyhedral") {
                const json& hn = cn.at("H");
                if (!hn.is_array() || hn.empty()) fail(origin, "cone.H: expected a matrix");
                const int p = static_cast<int>(hn.size());
                Matrix H(p, n);
                for (int r = 0; r < p; ++r) {
                    if (!hn[r].is_array() || static_cast<int>(hn[r].size()) != n)
                        fail(origin, "cone.H[" + std::to_string(r) + "]: expected " +
                                         std::to_string(n) + " entries");
                    for (int c = 0; c < n; ++c) H(r, c) = hn[r][c].get<double>();
                }
                cone = Cone::polyhedral(std::move(H));
            } else if (type != "orthant") {
                fail(origin, "cone.type: unknown value '" + type + "'");
            }
        }
        return ProblemTriple::make(std::move(A), std::move(B), std::move(C), std::move(cone));
    } catch (const json::exception& e) {
        fail(origin, std::string("invalid document: ") + e.what());
    } catch (const std::invalid_argument& e) {
        fail(origin, e.what());
    }
}

ProblemTriple load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open problem file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str(), path.string());
}

namespace {

json tensor_to_json_or_literal(const Tensor& T) {
    // Collapse +-identity back to literals when exact.
    const Tensor id = identity_tensor(T.order(), T.dim());
    bool is_id = true, is_neg = true;
    for (std::size_t k = 0; k < T.data().size(); ++k) {
        if (T.data()[k] != id.data()[k]) is_id = false;
        if (T.data()[k] != -id.data()[k]) is_neg = false;
    }
    if (is_id) return "identity";
    if (is_neg) return "neg_identity";
    std::size_t cursor = 0;
    return nest_tensor(T, cursor, 0);
}

}  // namespace

std::string problem_to_text(const ProblemTriple& Q) {
    json doc;
    doc["format"] = 1;
    doc["m"] = Q.order();
    doc["n"] = Q.dim();
    doc["A"] = tensor_to_json_or_literal(Q.A);
    doc["B"] = tensor_to_json_or_literal(Q.B);
    doc["C"] = tensor_to_json_or_literal(Q.C);
    if (!Q.A.is_symmetric() || !Q.B.is_symmetric() || !Q.C.is_symmetric())
        doc["strict_symmetry"] = false;
    if (Q.cone.kind == ConeKind::polyhedral) {
        json h = json::array();
        for (Eigen::Index r = 0; r < Q.cone.H.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < Q.cone.H.cols(); ++c) row.push_back(Q.cone.H(r, c));
            h.push_back(row);
        }
        doc["cone"] = {{"type", "polyhedral"}, {"H", h}};
    } else {
        doc["cone"] = {{"type", "orthant"}};
    }
    return doc.dump(2) + "\n";
}

void save_problem(const ProblemTriple& Q, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write problem file: " + path.string());
    out << problem_to_text(Q);
}

namespace {

json record_to_json(const ResultRecord& r) {
    json j;
    j["status"] = r.status;
    if (r.initial_point.size()) j["initial_point"] = vector_to_json(r.initial_point);
    if (r.has_pair) {
        j["lambda"] = r.lambda;
        j["x"] = vector_to_json(r.x);
        j["x_unit_sum"] = vector_to_json(r.x_unit_sum);
        j["rho"] = vector_to_json(r.rho);
        j["residuals"] = {{"primal_neg", r.residuals.primal_neg},
                          {"dual_neg", r.residuals.dual_neg},
                          {"compl", r.residuals.compl_}};
        j["passed"] = r.passed;
    }
    if (r.iterations) j["iterations"] = r.iterations;
    if (r.total_iterations) j["total_iterations"] = r.total_iterations;
    if (r.time_seconds > 0.0) j["time_seconds"] = r.time_seconds;
    if (!r.support.empty()) j["support"] = r.support;
    if (!r.method.empty()) j["method"] = r.method;
    if (r.margins.size()) j["margins"] = vector_to_json(r.margins);
    if (r.zeta != 0.0) j["zeta"] = r.zeta;
    return j;
}

ResultRecord record_from_json(const json& j) {
    ResultRecord r;
    r.status = j.at("status").get<std::string>();
    if (j.contains("initial_point")) r.initial_point = vector_from_json(j["initial_point"]);
    if (j.contains("lambda")) {
        r.has_pair = true;
        r.lambda = j["lambda"].get<double>();
        r.x = vector_from_json(j.at("x"));
        if (j.contains("x_unit_sum")) r.x_unit_sum = vector_from_json(j["x_unit_sum"]);
        if (j.contains("rho")) r.rho = vector_from_json(j["rho"]);
        if (j.contains("residuals")) {
            r.residuals.primal_neg = j["residuals"].value("primal_neg", 0.0);
            r.residuals.dual_neg = j["residuals"].value("dual_neg", 0.0);
            r.residuals.compl_ = j["residuals"].value("compl", 0.0);
        }
        r.passed = j.value("passed", false);
    }
    r.iterations = j.value("iterations", 0);
    r.total_iterations = j.value("total_iterations", 0);
    r.time_seconds = j.value("time_seconds", 0.0);
    if (j.contains("support")) r.support = j["support"].get<std::vector<int>>();
    r.method = j.value("method", "");
    if (j.contains("margins")) r.margins = vector_from_json(j["margins"]);
    r.zeta = j.value("zeta", 0.0);
    return r;
}

}  // namespace

std::string result_to_text(const ResultDocument& doc) {
    json j;
    j["format"] = 1;
    j["kind"] = doc.kind;
    j["m"] = doc.m;
    j["n"] = doc.n;
    j["records"] = json::array();
    for (const auto& r : doc.records) j["records"].push_back(record_to_json(r));
    return j.dump(2) + "\n";
}

void save_result(const ResultDocument& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write result file: " + path.string());
    out << result_to_text(doc);
}

ResultDocument load_result(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open result file: " + path.string());
    json j = json::parse(in);
    ResultDocument doc;
    doc.kind = j.value("kind", "");
    doc.m = j.value("m", 0);
    doc.n = j.value("n", 0);
    for (const auto& rj : j.at("records")) doc.records.push_back(record_from_json(rj));
    return doc;
}

ResultRecord record_from_outcome(const SolveOutcome& outcome, const Vector& u0) {
    ResultRecord r;
    r.status = to_string(outcome.status);
    r.initial_point = u0;
    r.iterations = outcome.iterations;
    r.total_iterations = outcome.total_iterations;
    r.time_seconds = outcome.elapsed_seconds;
    r.zeta = outcome.zeta;
    if (outcome.eigenpair) {
        const Eigenpair& p = *outcome.eigenpair;
        r.has_pair = true;
        r.lambda = p.lambda;
        r.x = p.x;
        const double total = p.x.sum();
        r.x_unit_sum = total != 0.0 ? Vector(p.x / total) : p.x;
        r.rho = p.rho;
        r.residuals = p.residuals;
        r.passed = p.passed;
        for (Eigen::Index i = 0; i < p.x.size(); ++i)
            if (p.x[i] > 1e-4 * std::max(1.0, p.x.cwiseAbs().maxCoeff()))
                r.support.push_back(static_cast<int>(i) + 1);
    }
    return r;
}

ResultRecord record_from_entry(const SpectrumEntry& entry) {
    ResultRecord r;
    r.status = "enumerated";
    r.has_pair = true;
    r.lambda = entry.system.lambda;
    r.x = entry.pair.x;
    const double total = entry.pair.x.sum();
    r.x_unit_sum = total != 0.0 ? Vector(entry.pair.x / total) : entry.pair.x;
    r.rho = entry.pair.rho;
    r.residuals = entry.pair.residuals;
    r.passed = entry.pair.passed;
    r.margins = entry.system.off_support_margins;
    r.method = entry.system.method == RootMethod::closed_form_univariate
                   ? "closed_form_univariate"
                   : "newton_multistart";
    for (int i : entry.system.support) r.support.push_back(i + 1);
    return r;
}

void save_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write trace file: " + path.string());
    out << "iter,relerr,objective,violation\n";
    char buf[160];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", row.iter, row.relerr,
                      row.objective, row.violation);
        out << buf;
    }
}

void apply_env_overrides() {
    if (const char* guard = std::getenv("THEICP_SIZE_GUARD")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(guard, &end, 10);
        if (end && *end == '\0' && v > 0) set_tensor_size_guard(static_cast<std::size_t>(v));
    }
}

}  // namespace theicp::io
