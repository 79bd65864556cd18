#include <cmath>
#include <fstream>
#include <sstream>

#include "dilation/io.hpp"
#include "json.hpp"

namespace dilation {

using json = nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
    throw Error(ErrorCode::ParseError, where + ": " + what);
}

json matrix_json(const CMatrix& m) {
    json data = json::array();
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) data.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from(const json& j, const std::string& where) {
    if (!j.is_object()) parse_fail(where, "expected an object with rows, cols, data");
    for (const char* key : {"rows", "cols", "data"})
        if (!j.contains(key)) parse_fail(where, std::string("missing field '") + key + "'");
    if (!j["rows"].is_number_unsigned() || !j["cols"].is_number_unsigned())
        parse_fail(where, "rows and cols must be nonnegative integers");
    const auto rows = j["rows"].get<Index>();
    const auto cols = j["cols"].get<Index>();
    const json& data = j["data"];
    if (!data.is_array()) parse_fail(where + ".data", "expected an array");
    if (static_cast<Index>(data.size()) != rows * cols) {
        std::ostringstream os;
        os << "expected " << rows * cols << " entries, found " << data.size();
        parse_fail(where + ".data", os.str());
    }
    CMatrix m(rows, cols);
    for (Index k = 0; k < rows * cols; ++k) {
        const json& e = data[static_cast<size_t>(k)];
        const std::string at = where + ".data[" + std::to_string(k) + "]";
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            parse_fail(at, "expected [re, im]");
        const double re = e[0].get<double>();
        const double im = e[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im)) parse_fail(at, "entry is not finite");
        m(k / cols, k % cols) = cplx(re, im);
    }
    return m;
}

std::vector<CMatrix> matrix_list(const json& j, const std::string& where) {
    if (!j.is_array()) parse_fail(where, "expected an array of matrices");
    std::vector<CMatrix> out;
    for (size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

json list_json(const std::vector<CMatrix>& v) {
    json a = json::array();
    for (const auto& m : v) a.push_back(matrix_json(m));
    return a;
}

CertificateData certificate_from(const json& j, const std::string& where, Index n, Index dim) {
    if (!j.is_object() || !j.contains("U") || !j.contains("P")) parse_fail(where, "expected {\"U\": [...], \"P\": [...]}");
    CertificateData c;
    c.u = matrix_list(j["U"], where + ".U");
    c.p = matrix_list(j["P"], where + ".P");
    if (static_cast<Index>(c.u.size()) != n || static_cast<Index>(c.p.size()) != n)
        parse_fail(where, "certificate must list one U and one P per operator");
    for (size_t i = 0; i < c.u.size(); ++i)
        if (c.u[i].rows() != dim || c.u[i].cols() != dim || c.p[i].rows() != dim || c.p[i].cols() != dim)
            parse_fail(where, "certificate operators must be dim x dim (ambient coordinates)");
    return c;
}

json vec_json(const std::vector<double>& v) { return json(v); }

json report_object(const ConditionReport& r) {
    return json{{"mode", to_string(r.mode)},
                {"side", r.adjoint ? "adjoint" : "primal"},
                {"dim", r.dim},
                {"defect_rank", r.defect_rank},
                {"pass", r.pass},
                {"failed", r.failed},
                {"decisive", r.decisive()},
                {"r1", vec_json(r.r1)},
                {"r2", vec_json(r.r2)},
                {"r3", vec_json(r.r3)},
                {"r4", vec_json(r.r4)},
                {"r5", r.r5},
                {"unitarity", r.unitarity},
                {"projection", r.projection},
                {"commutation", r.commutation},
                {"product_identity", r.product_identity},
                {"conditioning_warning", r.conditioning_warning}};
}

json dilation_object(const DilationReport& r) {
    return json{{"maxdeg", r.maxdeg},
                {"multi_indices", r.compressions.size()},
                {"max_compression_residual", r.max_compression},
                {"worst_index", r.worst_index},
                {"interior_unitarity", vec_json(r.unitarity)},
                {"product_unitarity", r.product_unitarity},
                {"interior_commutation", r.commutation},
                {"minimality_defect", r.minimality_defect},
                {"window_dim", r.window_dim},
                {"pass", r.pass}};
}

}  // namespace

Tolerances TupleDocument::tolerances() const {
    Tolerances t{settings.rank_tol, settings.check_tol};
    t.validate();
    return t;
}

PipelineOptions TupleDocument::pipeline_options() const {
    PipelineOptions o;
    o.n_blocks = settings.n_blocks;
    o.maxdeg = settings.maxdeg;
    o.grid = settings.grid;
    if (primal) o.primal = std::make_pair(primal->u, primal->p);
    if (adjoint) o.adjoint = std::make_pair(adjoint->u, adjoint->p);
    return o;
}

TupleDocument parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail("document", e.what());
    }
    if (!j.is_object()) parse_fail("document", "expected a JSON object");
    TupleDocument doc;
    if (j.contains("name")) {
        if (!j["name"].is_string()) parse_fail("name", "expected a string");
        doc.name = j["name"].get<std::string>();
    }
    if (!j.contains("matrices")) parse_fail("document", "missing field 'matrices'");
    doc.matrices = matrix_list(j["matrices"], "matrices");
    if (doc.matrices.empty()) parse_fail("matrices", "at least one matrix is required");
    const Index dim = doc.matrices.front().rows();
    for (size_t i = 0; i < doc.matrices.size(); ++i)
        if (doc.matrices[i].rows() != dim || doc.matrices[i].cols() != dim)
            parse_fail("matrices[" + std::to_string(i) + "]", "all matrices must be square of the same size");
    if (j.contains("n") && (!j["n"].is_number_integer() || j["n"].get<Index>() != doc.n()))
        parse_fail("n", "does not match the number of matrices");
    if (j.contains("dim") && (!j["dim"].is_number_integer() || j["dim"].get<Index>() != dim))
        parse_fail("dim", "does not match the matrix size");
    if (j.contains("certificate")) {
        const json& c = j["certificate"];
        if (!c.is_object()) parse_fail("certificate", "expected an object");
        for (auto it = c.begin(); it != c.end(); ++it)
            if (it.key() != "primal" && it.key() != "adjoint")
                parse_fail("certificate", "unknown side '" + it.key() + "' (use primal or adjoint)");
        if (c.contains("primal")) doc.primal = certificate_from(c["primal"], "certificate.primal", doc.n(), dim);
        if (c.contains("adjoint")) doc.adjoint = certificate_from(c["adjoint"], "certificate.adjoint", doc.n(), dim);
    }
    if (j.contains("settings")) {
        const json& s = j["settings"];
        if (!s.is_object()) parse_fail("settings", "expected an object");
        auto get_int = [&](const char* key, int& out) {
            if (!s.contains(key)) return;
            if (!s[key].is_number_integer()) parse_fail(std::string("settings.") + key, "expected an integer");
            out = s[key].get<int>();
        };
        auto get_double = [&](const char* key, double& out) {
            if (!s.contains(key)) return;
            if (!s[key].is_number()) parse_fail(std::string("settings.") + key, "expected a number");
            out = s[key].get<double>();
        };
        get_int("N", doc.settings.n_blocks);
        get_int("maxdeg", doc.settings.maxdeg);
        get_int("grid", doc.settings.grid);
        get_double("rank_tol", doc.settings.rank_tol);
        get_double("check_tol", doc.settings.check_tol);
        if (s.contains("seed")) {
            if (!s["seed"].is_number_unsigned()) parse_fail("settings.seed", "expected a nonnegative integer");
            doc.settings.seed = s["seed"].get<std::uint64_t>();
        }
    }
    return doc;
}

std::string emit_document(const TupleDocument& doc) {
    json j;
    if (!doc.name.empty()) j["name"] = doc.name;
    j["n"] = doc.n();
    j["dim"] = doc.dim();
    j["matrices"] = list_json(doc.matrices);
    if (doc.primal || doc.adjoint) {
        json c = json::object();
        if (doc.primal) c["primal"] = json{{"U", list_json(doc.primal->u)}, {"P", list_json(doc.primal->p)}};
        if (doc.adjoint) c["adjoint"] = json{{"U", list_json(doc.adjoint->u)}, {"P", list_json(doc.adjoint->p)}};
        j["certificate"] = std::move(c);
    }
    json s{{"N", doc.settings.n_blocks},
           {"maxdeg", doc.settings.maxdeg},
           {"grid", doc.settings.grid},
           {"rank_tol", doc.settings.rank_tol},
           {"check_tol", doc.settings.check_tol}};
    if (doc.settings.seed) s["seed"] = *doc.settings.seed;
    j["settings"] = std::move(s);
    return j.dump(2) + "\n";
}

TupleDocument load_document(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_document(os.str());
}

ContractionTuple to_tuple(const TupleDocument& doc) { return build_tuple(doc.matrices, doc.tolerances()); }

std::string to_json(const ConditionReport& rep) { return report_object(rep).dump(2); }

std::string to_json(const DilationReport& rep) { return dilation_object(rep).dump(2); }

std::string to_json(const PipelineReport& rep) {
    json j{{"verdict", to_string(rep.verdict)},
           {"route", to_string(rep.route)},
           {"hypothesis", rep.hypothesis},
           {"fundamental_residual", rep.fundamental_residual},
           {"primal_full", report_object(rep.primal_full)},
           {"adjoint_full", report_object(rep.adjoint_full)},
           {"unitary_part_dim", rep.unitary_dim},
           {"cnu_part_dim", rep.cnu_dim}};
    if (rep.primal_relaxed) {
        j["primal_relaxed"] = report_object(*rep.primal_relaxed);
        j["primal_relaxed_source"] = rep.primal_source;
    }
    if (rep.adjoint_relaxed) {
        j["adjoint_relaxed"] = report_object(*rep.adjoint_relaxed);
        j["adjoint_relaxed_source"] = rep.adjoint_source;
    }
    if (rep.dilation) j["dilation"] = dilation_object(*rep.dilation);
    if (rep.telescoping)
        j["telescoping"] = json{{"partial", rep.telescoping->partial},
                                {"final", rep.telescoping->final_residual},
                                {"max", rep.telescoping->max()}};
    return j.dump(2);
}

std::string to_json(const DilationTuple& dil, const std::string& kind) {
    json blocks = json::array();
    if (!dil.ops.empty())
        for (const auto& b : dil.ops.front().blocks)
            blocks.push_back(json{{"space", b.space},
                                  {"index", b.index},
                                  {"offset", b.offset},
                                  {"size", b.size},
                                  {"boundary_distance", b.boundary_distance}});
    json ops = json::array();
    for (const auto& op : dil.ops) ops.push_back(matrix_json(op.matrix));
    json j{{"kind", kind},
           {"layout", dil.ops.empty() ? "none" : to_string(dil.ops.front().layout)},
           {"N", dil.depth()},
           {"blocks", std::move(blocks)},
           {"operators", std::move(ops)},
           {"product", matrix_json(dil.product.matrix)},
           {"embedding", matrix_json(dil.embedding)}};
    return j.dump(2);
}

std::string to_json(const CanonicalSplit& split) {
    return json{{"unitary_dim", split.basis_unitary.cols()},
                {"cnu_dim", split.basis_cnu.cols()},
                {"basis_unitary", matrix_json(split.basis_unitary)},
                {"basis_cnu", matrix_json(split.basis_cnu)}}
        .dump(2);
}

std::string to_json(const CharacteristicSample& sample) {
    json theta = json::array();
    json delta = json::array();
    for (const auto& m : sample.theta) theta.push_back(matrix_json(m));
    for (const auto& m : sample.delta) delta.push_back(matrix_json(m));
    return json{{"grid", sample.grid},
                {"theta", std::move(theta)},
                {"delta", std::move(delta)},
                {"max_delta", sample.max_delta},
                {"max_delta_residual", sample.max_delta_residual}}
        .dump(2);
}

}  // namespace dilation
