#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "evoclass/classify3d.hpp"
#include "evoclass/error.hpp"
#include "evoclass/io.hpp"

namespace py = pybind11;
using namespace evoclass;

namespace {

std::optional<FieldSpec> override_of(const std::optional<std::string>& field) {
    if (!field) return std::nullopt;
    return parse_field_name(*field);
}

json parse_text(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::ParseError, e.what());
    }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "JSON-in, JSON-out bindings of the evoclass library";
#ifdef VERSION_INFO
#define EVOCLASS_STR(x) #x
#define EVOCLASS_XSTR(x) EVOCLASS_STR(x)
    m.attr("__version__") = EVOCLASS_XSTR(VERSION_INFO);
#else
    m.attr("__version__") = "dev";
#endif

    py::register_exception<Error>(m, "EvoclassError", PyExc_ValueError);

    m.def(
        "invariants",
        [](const std::string& algebra, std::optional<std::string> field) {
            return invariants_json(parse_algebra_text(algebra, override_of(field))).dump();
        },
        py::arg("algebra"), py::arg("field") = py::none());
    m.def(
        "classify",
        [](const std::string& algebra, std::optional<std::string> field) {
            return report_json(classify(parse_algebra_text(algebra, override_of(field)))).dump();
        },
        py::arg("algebra"), py::arg("field") = py::none());
    m.def(
        "iso",
        [](const std::string& a, const std::string& b, std::optional<std::string> field) {
            return iso_json(parse_algebra_text(a, override_of(field)), parse_algebra_text(b, override_of(field))).dump();
        },
        py::arg("a"), py::arg("b"), py::arg("field") = py::none());
    m.def(
        "construct",
        [](const std::string& spec, std::optional<std::string> field) {
            return algebra_json(build(parse_adjunction_spec(parse_text(spec), override_of(field)))).dump();
        },
        py::arg("spec"), py::arg("field") = py::none());
    m.def(
        "same_orbit",
        [](const std::string& action, const std::string& x, const std::string& y) {
            ActionId id = parse_action(action);
            auto d = same_orbit(parse_moduli_point(parse_text(x), id), parse_moduli_point(parse_text(y), id));
            json out{{"action", action_name(id)}, {"verdict", verdict_name(d.verdict)}};
            if (d.witness) out["witness"] = group_element_json(*d.witness);
            return out.dump();
        },
        py::arg("action"), py::arg("x"), py::arg("y"));
    m.def(
        "catalog",
        [](const std::string& field, std::size_t jobs, bool verify) {
            Catalog c;
            {
                py::gil_scoped_release release;
                c = catalog(parse_field_name(field), jobs);
            }
            return catalog_json(c, verify).dump();
        },
        py::arg("field"), py::arg("jobs") = 0, py::arg("verify") = false);
}
