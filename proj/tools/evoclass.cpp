#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "evoclass/classify3d.hpp"
#include "evoclass/error.hpp"
#include "evoclass/io.hpp"

using namespace evoclass;

namespace {

enum Exit { Ok = 0, Failure = 1, Undecided = 2 };

struct Options {
    std::string field;
    std::string format = "json";
    std::size_t jobs = 0;
};

std::optional<FieldSpec> override_of(const Options& o) {
    if (o.field.empty()) return std::nullopt;
    return parse_field_name(o.field);
}

/// Dotted key paths, one leaf per line.
void print_text(const json& j, const std::string& prefix, std::ostream& out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) print_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        return;
    }
    if (j.is_array() && !j.empty() && (j[0].is_object() || (j[0].is_array() && !j[0].empty() && j[0][0].is_array()))) {
        for (std::size_t i = 0; i < j.size(); ++i) print_text(j[i], prefix + "[" + std::to_string(i) + "]", out);
        return;
    }
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
}

void emit(const json& j, const Options& o) {
    if (o.format == "text") print_text(j, "", std::cout);
    else std::cout << j.dump(2) << "\n";
}

Algebra load(const std::string& path, const Options& o) { return parse_algebra_text(read_file(path), override_of(o)); }

json load_json(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, path + ": " + e.what());
    }
}

int run_invariants(const std::string& path, const Options& o) {
    emit(invariants_json(load(path, o)), o);
    return Ok;
}

int run_classify(const std::string& path, const Options& o) {
    emit(report_json(classify(load(path, o))), o);
    return Ok;
}

int run_iso(const std::string& p1, const std::string& p2, const Options& o) {
    json out = iso_json(load(p1, o), load(p2, o));
    emit(out, o);
    return out["verdict"] == verdict_name(Verdict::Unknown) ? Undecided : Ok;
}

int run_construct(const std::string& path, const Options& o) {
    auto spec = parse_adjunction_spec(load_json(path), override_of(o));
    emit(algebra_json(build(spec)), o);
    return Ok;
}

int run_orbit(const std::string& action, const std::string& p1, const std::string& p2, const Options& o) {
    ActionId id = parse_action(action);
    auto x = parse_moduli_point(load_json(p1), id, override_of(o));
    auto y = parse_moduli_point(load_json(p2), id, override_of(o));
    auto d = same_orbit(x, y);
    json out{{"action", action_name(id)}, {"verdict", verdict_name(d.verdict)}};
    if (d.witness) out["witness"] = group_element_json(*d.witness);
    emit(out, o);
    return d.verdict == Verdict::Unknown ? Undecided : Ok;
}

int run_catalog(const std::string& field, std::size_t dim, bool verify, const Options& o) {
    if (dim != 3) throw Error(ErrorKind::Unsupported, "the catalog covers dimension 3 only");
    emit(catalog_json(catalog(parse_field_name(field), o.jobs), verify), o);
    return Ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Invariants, classification and isomorphism tests for evolution algebras"};
    app.require_subcommand(1);
    Options o;
    if (const char* env = std::getenv("EVOCLASS_JOBS")) o.jobs = std::strtoul(env, nullptr, 10);
    app.add_option("--field", o.field, "Reinterpret input scalars over this field (q, f2, f3, ...)");
    app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    app.add_option("--jobs", o.jobs, "Worker threads (default EVOCLASS_JOBS or all cores)");

    std::string file, file2, action;
    std::size_t dim = 3;
    bool verify = false;
    auto* inv = app.add_subcommand("invariants", "Annihilator series and socle");
    inv->add_option("file", file)->required();
    auto* cls = app.add_subcommand("classify", "Classification report of a 3-dim evolution algebra");
    cls->add_option("file", file)->required();
    auto* iso = app.add_subcommand("iso", "Decide isomorphism of two algebras");
    iso->add_option("a", file)->required();
    iso->add_option("b", file2)->required();
    auto* con = app.add_subcommand("construct", "Build the algebra of an adjunction spec");
    con->add_option("spec", file)->required();
    auto* orb = app.add_subcommand("orbit", "Decide whether two moduli points share an orbit");
    orb->add_option("--action", action)->required();
    orb->add_option("x", file)->required();
    orb->add_option("y", file2)->required();
    auto* cat = app.add_subcommand("catalog", "Classify every structure matrix over F_p");
    cat->add_option("--dim", dim);
    cat->add_flag("--verify", verify, "Compare against the brute-force partition");
    for (auto* sub : {inv, cls, iso, con, orb, cat}) {
        sub->add_option("--field", o.field, "Reinterpret input scalars over this field");
        sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    }
    cat->add_option("--jobs", o.jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? Ok : Failure;
    }
    try {
        if (*inv) return run_invariants(file, o);
        if (*cls) return run_classify(file, o);
        if (*iso) return run_iso(file, file2, o);
        if (*con) return run_construct(file, o);
        if (*orb) return run_orbit(action, file, file2, o);
        if (*cat) {
            if (o.field.empty()) throw Error(ErrorKind::InvalidArgument, "catalog needs --field f2 or f3");
            std::string f = o.field;
            o.field.clear();
            return run_catalog(f, dim, verify, o);
        }
    } catch (const std::exception& e) {
        std::cerr << "evoclass: " << e.what() << "\n";
        return Failure;
    }
    return Failure;
}
