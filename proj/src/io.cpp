#include "evoclass/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "evoclass/bruteforce.hpp"
#include "evoclass/error.hpp"

namespace evoclass {

namespace {

[[noreturn]] void parse_error(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::ParseError, where + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& where) {
    if (!j.is_object()) parse_error(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) parse_error(where, std::string("missing \"") + key + "\"");
    return *it;
}

std::string sub(const std::string& where, const std::string& key) { return where.empty() ? key : where + "." + key; }
std::string sub(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

}  // namespace

FieldSpec parse_field_name(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "q" || t == "rationals") return FieldSpec::rationals();
    if (t.size() > 1 && t[0] == 'f' && std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        if (t.size() > 10) parse_error("field", "prime too large");
        std::uint64_t p = std::stoull(t.substr(1));
        if (!is_prime_number(p)) parse_error("field", std::to_string(p) + " is not prime");
        return FieldSpec::prime(p);
    }
    parse_error("field", "unknown field '" + s + "'");
}

FieldSpec parse_field(const json& j) {
    if (j.is_string()) return parse_field_name(j.get<std::string>());
    const json& kind = member(j, "kind", "field");
    if (!kind.is_string()) parse_error("field.kind", "expected a string");
    std::string k = kind.get<std::string>();
    if (k == "Q") return FieldSpec::rationals();
    if (k == "Fp") {
        const json& p = member(j, "p", "field");
        if (!p.is_number_unsigned()) parse_error("field.p", "expected a positive integer");
        auto v = p.get<std::uint64_t>();
        if (!is_prime_number(v)) parse_error("field.p", std::to_string(v) + " is not prime");
        return FieldSpec::prime(v);
    }
    parse_error("field.kind", "expected \"Q\" or \"Fp\"");
}

json field_json(const FieldSpec& f) {
    if (f.is_rationals()) return json{{"kind", "Q"}};
    return json{{"kind", "Fp"}, {"p", f.p}};
}

json scalar_json(const Scalar& s) { return s.to_string(); }

json vec_json(const Vec& v) {
    json out = json::array();
    for (const auto& s : v) out.push_back(scalar_json(s));
    return out;
}

json matrix_json(const Matrix& m) {
    json out = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(vec_json(m.row(i)));
    return out;
}

json subspace_json(const Subspace& s) {
    json out = json::array();
    for (const auto& v : s.basis()) out.push_back(vec_json(v));
    return out;
}

Scalar parse_scalar(const FieldSpec& f, const json& j, const std::string& where) {
    std::string text;
    if (j.is_string()) text = j.get<std::string>();
    else if (j.is_number_integer()) text = std::to_string(j.get<long long>());
    else parse_error(where, "expected a scalar string");
    try {
        return Scalar::parse(f, text);
    } catch (const Error& e) {
        parse_error(where, e.what());
    }
}

Vec parse_vec(const FieldSpec& f, const json& j, const std::string& where) {
    if (!j.is_array()) parse_error(where, "expected an array");
    Vec v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(parse_scalar(f, j[i], sub(where, i)));
    return v;
}

Matrix parse_matrix(const FieldSpec& f, const json& j, const std::string& where) {
    if (!j.is_array()) parse_error(where, "expected an array of rows");
    std::vector<Vec> rows;
    for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(parse_vec(f, j[i], sub(where, i)));
    std::size_t cols = rows.empty() ? 0 : rows[0].size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i].size() != cols) parse_error(sub(where, i), "ragged row");
    return Matrix::from_rows(f, rows, cols);
}

Algebra parse_algebra(const json& j, const std::optional<FieldSpec>& field_override) {
    FieldSpec f = field_override ? *field_override : parse_field(member(j, "field", ""));
    const json& dim = member(j, "dim", "");
    if (!dim.is_number_unsigned()) parse_error("dim", "expected a non-negative integer");
    std::size_t n = dim.get<std::size_t>();
    if (auto c = j.find("convention"); c != j.end() && *c != "columns-are-squares")
        parse_error("convention", "only \"columns-are-squares\" is supported");
    bool has_matrix = j.contains("structure_matrix"), has_tensor = j.contains("general_tensor");
    if (has_matrix == has_tensor) parse_error("", "expected exactly one of structure_matrix and general_tensor");
    if (has_matrix) {
        Matrix m = parse_matrix(f, j["structure_matrix"], "structure_matrix");
        if (m.rows() != n || m.cols() != n) parse_error("structure_matrix", "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
        return Algebra::evolution(m);
    }
    const json& t = j["general_tensor"];
    if (!t.is_array() || t.size() != n) parse_error("general_tensor", "expected " + std::to_string(n) + " rows");
    std::vector<Scalar> c(n * n * n);
    for (std::size_t a = 0; a < n; ++a) {
        if (!t[a].is_array() || t[a].size() != n) parse_error(sub("general_tensor", a), "expected " + std::to_string(n) + " products");
        for (std::size_t b = 0; b < n; ++b) {
            Vec v = parse_vec(f, t[a][b], sub(sub("general_tensor", a), b));
            if (v.size() != n) parse_error(sub(sub("general_tensor", a), b), "expected " + std::to_string(n) + " coordinates");
            for (std::size_t k = 0; k < n; ++k) c[(a * n + b) * n + k] = v[k];
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t k = 0; k < n; ++k)
                if (!(c[(a * n + b) * n + k] == c[(b * n + a) * n + k]))
                    parse_error("general_tensor", "product is not commutative");
    return Algebra(f, n, c);
}

Algebra parse_algebra_text(const std::string& text, const std::optional<FieldSpec>& field_override) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_error("json", e.what());
    }
    return parse_algebra(j, field_override);
}

json algebra_json(const Algebra& a) {
    json out{{"field", field_json(a.field())}, {"dim", a.dim()}, {"convention", "columns-are-squares"}};
    if (a.is_diagonal()) {
        out["structure_matrix"] = matrix_json(a.structure_matrix());
        return out;
    }
    json t = json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < a.dim(); ++j) row.push_back(vec_json(a.basis_product(i, j)));
        t.push_back(row);
    }
    out["general_tensor"] = t;
    return out;
}

AdjunctionSpec parse_adjunction_spec(const json& j, const std::optional<FieldSpec>& field_override) {
    const json& tag_j = member(j, "tag", "");
    if (!tag_j.is_string()) parse_error("tag", "expected a string");
    AdjunctionTag tag;
    try {
        tag = parse_adjunction_tag(tag_j.get<std::string>());
    } catch (const Error& e) {
        parse_error("tag", e.what());
    }
    Algebra b = parse_algebra(member(j, "base", ""), field_override);
    FieldSpec f = b.field();
    AdjunctionSpec s;
    switch (tag) {
        case AdjunctionTag::Ad: {
            Matrix form = parse_matrix(f, member(j, "form", ""), "form");
            Vec d;
            for (std::size_t i = 0; i < std::min(form.rows(), form.cols()); ++i) d.push_back(form(i, i));
            s = AdjunctionSpec::ad(b, d);
            s.form = form;
            break;
        }
        case AdjunctionTag::Au:
            s = AdjunctionSpec::au(b, parse_matrix(f, member(j, "phi", ""), "phi"), parse_vec(f, member(j, "b0", ""), "b0"),
                                   parse_scalar(f, member(j, "k0", ""), "k0"));
            break;
        case AdjunctionTag::Av:
            s = AdjunctionSpec::av(b, parse_matrix(f, member(j, "form", ""), "form"));
            break;
        case AdjunctionTag::Aw:
            s = AdjunctionSpec::aw(b, parse_matrix(f, member(j, "form", ""), "form"),
                                   parse_vec(f, member(j, "functional", ""), "functional"));
            break;
    }
    s.validate();
    return s;
}

json adjunction_spec_json(const AdjunctionSpec& s) {
    json out{{"tag", adjunction_tag_name(s.tag)}, {"base", algebra_json(s.base)}};
    switch (s.tag) {
        case AdjunctionTag::Ad:
        case AdjunctionTag::Av:
            out["form"] = matrix_json(s.form);
            break;
        case AdjunctionTag::Au:
            out["phi"] = matrix_json(s.phi);
            out["b0"] = vec_json(s.b0);
            out["k0"] = scalar_json(s.k0);
            break;
        case AdjunctionTag::Aw:
            out["form"] = matrix_json(s.form);
            out["functional"] = vec_json(s.functional);
            break;
    }
    return out;
}

ModuliPoint parse_moduli_point(const json& j, std::optional<ActionId> action, const std::optional<FieldSpec>& field_override) {
    ModuliPoint x;
    if (auto a = j.find("action"); a != j.end()) {
        if (!a->is_string()) parse_error("action", "expected a string");
        try {
            x.id = parse_action(a->get<std::string>());
        } catch (const Error& e) {
            parse_error("action", e.what());
        }
        if (action && *action != x.id) parse_error("action", "point belongs to a different action");
    } else if (action) {
        x.id = *action;
    } else {
        parse_error("", "missing \"action\"");
    }
    if (j.contains("base")) x.base = parse_algebra(j["base"], field_override);
    FieldSpec f = x.base ? x.base->field() : field_override ? *field_override : parse_field(member(j, "field", ""));
    x.values = parse_vec(f, member(j, "values", ""), "values");
    if (j.contains("functional")) x.functional = parse_vec(f, j["functional"], "functional");
    validate(x);
    return x;
}

json moduli_point_json(const ModuliPoint& x) {
    json out{{"action", action_name(x.id)}, {"field", field_json(x.field())}, {"values", vec_json(x.values)}};
    if (x.base) out["base"] = algebra_json(*x.base);
    if (!x.functional.empty()) out["functional"] = vec_json(x.functional);
    return out;
}

json group_element_json(const GroupElement& g) {
    json out{{"scalars", vec_json(g.scalars)}, {"flip", g.flip}};
    if (g.map.rows() > 0) out["map"] = matrix_json(g.map);
    if (!g.shift.empty()) out["shift"] = vec_json(g.shift);
    return out;
}

json invariants_json(const Algebra& a) {
    auto series = ann_series(a);
    json chain = json::array();
    for (const auto& s : series.chain) chain.push_back(json{{"dim", s.dim()}, {"basis", subspace_json(s)}});
    json out{{"field", field_json(a.field())},
             {"dim", a.dim()},
             {"dim_square", square(a).dim()},
             {"nondegenerate", is_nondegenerate(a)},
             {"perfect", is_perfect(a)},
             {"ann_series", {{"asi", series.asi}, {"chain", chain}, {"radical", subspace_json(series.radical)}}}};
    auto soc = socle(a);
    json mins = json::array();
    for (const auto& m : soc.minimal_ideals) mins.push_back(subspace_json(m));
    json schain = json::array();
    for (const auto& s : soc.chain) schain.push_back(json{{"dim", s.dim()}, {"basis", subspace_json(s)}});
    out["socle"] = {{"dim", soc.socle.dim()}, {"basis", subspace_json(soc.socle)}, {"minimal_ideals", mins}, {"chain", schain}, {"ssi", soc.ssi}};
    return out;
}

json report_json(const ClassificationReport& r) {
    const auto& inv = r.invariants;
    json invj{{"dim_ann", inv.dim_ann},
              {"asi", inv.asi},
              {"dim_soc", inv.dim_soc ? json(*inv.dim_soc) : json(nullptr)},
              {"ssi", inv.ssi ? json(*inv.ssi) : json(nullptr)},
              {"nondegenerate", inv.nondegenerate},
              {"perfect", inv.perfect},
              {"dim_square", inv.dim_square}};
    json canonical;
    if (r.canonical_matrix) canonical = {{"kind", "matrix"}, {"structure_matrix", matrix_json(*r.canonical_matrix)}};
    else if (r.canonical_spec) canonical = {{"kind", "adjunction"}, {"spec", adjunction_spec_json(*r.canonical_spec)}};
    else canonical = {{"kind", "nilpotent"}};
    json out{{"field", field_json(r.source.field())},
             {"invariants", invj},
             {"case", case_label_name(r.label)},
             {"canonical", canonical},
             {"moduli_point", r.moduli_point ? moduli_point_json(*r.moduli_point) : json(nullptr)},
             {"witness", r.witness ? matrix_json(*r.witness) : json(nullptr)}};
    if (r.label == CaseLabel::SocleMinimalSingle || r.label == CaseLabel::SocleMinimalSingleWeighted)
        out["socle_swapped"] = r.socle_swapped;
    return out;
}

json iso_json(const Algebra& a, const Algebra& b) {
    if (!(a.field() == b.field())) throw Error(ErrorKind::FieldMismatch, "the two algebras are over different fields");
    json out{{"field", field_json(a.field())}};
    Verdict v = Verdict::Unknown;
    if (a.dim() != b.dim()) {
        v = Verdict::No;
        out["method"] = "dimension";
    } else if (brute_force_supported(a.field(), a.dim())) {
        auto r = brute_force_iso(a, b);
        v = r.witness ? Verdict::Yes : Verdict::No;
        out["method"] = "brute_force";
        out["candidates"] = r.candidates;
        if (r.witness) out["witness"] = matrix_json(*r.witness);
    } else if (a.dim() == 3 && a.is_diagonal() && b.is_diagonal()) {
        auto r1 = classify(a), r2 = classify(b);
        v = canonical_equal(r1, r2);
        out["method"] = "classification";
        out["cases"] = {case_label_name(r1.label), case_label_name(r2.label)};
    } else {
        out["method"] = "unsupported";
    }
    out["verdict"] = verdict_name(v);
    return out;
}

json catalog_json(const Catalog& c, bool verify) {
    json leaves = json::object();
    for (const auto& [label, count] : c.leaf_counts) leaves[case_label_name(label)] = count;
    json table = json::array();
    for (std::size_t i = 0; i < c.classes.size(); ++i) {
        const auto& cl = c.classes[i];
        table.push_back({{"class", i},
                         {"case", case_label_name(cl.label)},
                         {"size", cl.size},
                         {"representative", matrix_json(c.matrices[cl.representative])}});
    }
    json methods = json::object();
    for (const auto& [m, k] : c.comparison_methods) methods[m] = k;
    json out{{"field", field_json(c.field)},
             {"dim", 3},
             {"matrices", c.matrices.size()},
             {"classes", c.classes.size()},
             {"unknown_comparisons", c.unknown_comparisons},
             {"leaf_counts", leaves},
             {"comparison_methods", methods}};
    if (verify) {
        std::map<std::vector<Scalar>, std::size_t> oracle;
        std::map<std::size_t, std::size_t> to_oracle, from_oracle;
        std::size_t mismatches = 0;
        for (std::size_t i = 0; i < c.matrices.size(); ++i) {
            auto key = canonical_form(Algebra::evolution(c.matrices[i])).algebra.tensor();
            std::size_t k = oracle.emplace(key, oracle.size()).first->second;
            bool ok = to_oracle.emplace(c.class_of[i], k).first->second == k;
            ok = from_oracle.emplace(k, c.class_of[i]).first->second == c.class_of[i] && ok;
            mismatches += !ok;
        }
        out["brute_force_classes"] = oracle.size();
        out["partition_mismatches"] = mismatches;
    }
    out["table"] = table;
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::ParseError, path + ": cannot open");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace evoclass
