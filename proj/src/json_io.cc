#include "upoblab/json_io.h"

#include <fstream>
#include <sstream>

#include "upoblab/errors.h"

namespace upoblab {

namespace {

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(std::string("missing field \"") + key + "\"");
    }
    return j.at(key);
}

std::size_t positive_size(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() <= 0) {
        throw ParseError(std::string(what) + " must be a positive integer");
    }
    return j.get<std::size_t>();
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        throw ParseError("complex number must be [re, im]");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

Json to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (const auto& z : m.entries()) entries.push_back(to_json(z));
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
    const std::size_t rows = positive_size(field(j, "rows"), "rows");
    const std::size_t cols = positive_size(field(j, "cols"), "cols");
    const Json& e = field(j, "entries");
    if (!e.is_array() || e.size() != rows * cols) {
        throw ParseError("matrix needs rows * cols entries");
    }
    std::vector<Complex> entries;
    entries.reserve(e.size());
    for (const auto& z : e) entries.push_back(complex_from_json(z));
    try {
        return ComplexMatrix(rows, cols, std::move(entries));
    } catch (const Error& err) {
        throw ParseError(err.what());
    }
}

Json to_json(const ProductOperator& p) {
    Json factors = Json::array();
    for (const auto& f : p.factors()) factors.push_back(to_json(f));
    return Json{{"label", p.label()}, {"factors", std::move(factors)}};
}

ProductOperator product_operator_from_json(const Json& j) {
    const Json& f = field(j, "factors");
    if (!f.is_array()) throw ParseError("factors must be an array");
    std::vector<ComplexMatrix> factors;
    for (const auto& m : f) factors.push_back(matrix_from_json(m));
    std::string label;
    if (j.contains("label")) {
        if (!j["label"].is_string()) throw ParseError("label must be a string");
        label = j["label"].get<std::string>();
    }
    try {
        return ProductOperator(std::move(factors), std::move(label));
    } catch (const Error& err) {
        throw ParseError(err.what());
    }
}

Json to_json(const OperatorSet& s) {
    Json shape = Json::array();
    for (const auto& p : s.shape().parties()) shape.push_back(Json::array({p.rows, p.cols}));
    Json members = Json::array();
    for (const auto& m : s.members()) members.push_back(to_json(m));
    return Json{{"shape", std::move(shape)}, {"members", std::move(members)}};
}

OperatorSet operator_set_from_json(const Json& j) {
    const Json& shape = field(j, "shape");
    if (!shape.is_array() || shape.empty()) throw ParseError("shape must be a non-empty array");
    std::vector<LocalShape> parties;
    for (const auto& p : shape) {
        if (!p.is_array() || p.size() != 2) throw ParseError("each shape entry must be [rows, cols]");
        parties.push_back({positive_size(p[0], "rows"), positive_size(p[1], "cols")});
    }
    const Json& members = field(j, "members");
    if (!members.is_array()) throw ParseError("members must be an array");
    std::vector<ProductOperator> ops;
    for (std::size_t k = 0; k < members.size(); ++k) {
        ProductOperator p = product_operator_from_json(members[k]);
        if (p.label().empty()) p = p.with_label("member_" + std::to_string(k + 1));
        ops.push_back(std::move(p));
    }
    try {
        return OperatorSet(PartyShape(std::move(parties)), std::move(ops));
    } catch (const Error& err) {
        throw ParseError(err.what());
    }
}

Json to_json(const ExtendibilityVerdict& v) {
    Json j{{"status", to_string(v.status)},
           {"nodes_explored", v.nodes_explored},
           {"budget", v.budget}};
    if (v.witness) j["witness"] = to_json(*v.witness);
    if (v.partition) j["partition"] = v.partition->party_of_member;
    return j;
}

Json to_json(const Classification& c) {
    Json j{{"is_product_set", c.is_product_set},
           {"is_orthonormal", c.is_orthonormal},
           {"is_all_unitary", c.is_all_unitary},
           {"upob", to_json(c.upob)},
           {"unitary_search_ran", c.unitary_search_ran}};
    if (c.unitary_witness) j["unitary_witness"] = to_json(*c.unitary_witness);
    j["verdict_labels"] = Json(c.verdict_labels);
    return j;
}

namespace {

Json to_json(const Check& c) {
    return Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}};
}

}  // namespace

Json to_json(const ProtocolTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) {
        Json probs = Json::object();
        for (const auto& [k, p] : s.probability) probs[std::to_string(k)] = p;
        steps.push_back(Json{{"party", s.party}, {"effect", s.effect}, {"probability", probs}});
    }
    Json branches = Json::array();
    for (const auto& b : t.branches) {
        Json bj{{"name", b.name}, {"survivors", b.survivors}};
        if (!b.disposition.empty()) bj["disposition"] = b.disposition;
        branches.push_back(std::move(bj));
    }
    Json ledger = Json::array();
    for (const auto& e : t.ledger) ledger.push_back(Json{{"reason", e.reason}, {"ebits", e.ebits}});
    Json checks = Json::array();
    for (const auto& c : t.checks) checks.push_back(to_json(c));
    return Json{{"steps", std::move(steps)},
                {"branches", std::move(branches)},
                {"ledger", std::move(ledger)},
                {"ebits_consumed", t.ebits_consumed},
                {"checks", std::move(checks)},
                {"all_passed", t.all_passed()}};
}

Json to_json(const NonlocalityEvidence& e) {
    Json cuts = Json::array();
    for (const auto& c : e.cuts) {
        cuts.push_back(Json{{"cut", c.side_a + "|" + c.side_b},
                            {"all_product", c.all_product},
                            {"all_maximally_entangled", c.all_maximally_entangled},
                            {"bound_violated", c.bound_violated}});
    }
    Json j{{"cuts", std::move(cuts)},
           {"fact_a", to_json(e.fact_a)},
           {"fact_b", to_json(e.fact_b)},
           {"embedded_members", e.embedded_members}};
    if (e.upb_verdict) j["upb_verdict"] = to_json(*e.upb_verdict);
    j["all_passed"] = e.all_passed();
    return j;
}

Json to_json(const ReportEnvelope& r) {
    return Json{{"command", r.command},
                {"inputs", r.inputs},
                {"tolerance", r.tolerance.eps()},
                {"result", r.result},
                {"version", r.version}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_json_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << j.dump(2) << '\n';
}

}  // namespace upoblab
