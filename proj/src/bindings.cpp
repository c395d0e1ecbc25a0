#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fliplab/errors.hpp"
#include "fliplab/lift.hpp"
#include "fliplab/meta.hpp"
#include "fliplab/rational.hpp"
#include "fliplab/scheme_io.hpp"
#include "fliplab/search.hpp"

namespace py = pybind11;
using namespace fliplab;

namespace {

// "Z2", "Z3", "Zp:5", "Z2k:16" or "Q".
Ring ring_from_text(const std::string& text)
{
    if (text == "Z2")
        return Ring::z2();
    if (text == "Q")
        return Ring::rationals();
    if (text.rfind("Z2k:", 0) == 0)
        return Ring::z2k(static_cast<std::uint32_t>(std::stoul(text.substr(4))));
    if (text.rfind("Zp:", 0) == 0)
        return Ring::zp(static_cast<std::uint32_t>(std::stoul(text.substr(3))));
    if (text.size() > 1 && text[0] == 'Z')
        return Ring::zp(static_cast<std::uint32_t>(std::stoul(text.substr(1))));
    throw UnsupportedRingError("ring", "unknown ring '" + text + "'");
}

py::tuple format_tuple(const Format& f) { return py::make_tuple(f.n, f.m, f.p); }

} // namespace

PYBIND11_MODULE(_fliplab, m)
{
    m.doc() = "Matrix multiplication schemes: flip graph search, meta moves and lifting";
    m.attr("__version__") = FLIPLAB_VERSION;

    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<StructuralError>(m, "StructuralError", PyExc_ValueError);
    py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);

    py::class_<Scheme>(m, "Scheme")
        .def_property_readonly("format", [](const Scheme& s) { return format_tuple(s.format()); })
        .def_property_readonly("rank", &Scheme::rank)
        .def_property_readonly("ring", [](const Scheme& s) { return s.ring().tag(); })
        .def("to_json", &scheme_to_string, "Scheme exchange JSON text")
        .def("__eq__", [](const Scheme& a, const Scheme& b) { return a == b; })
        .def("__repr__", [](const Scheme& s) {
            return "<Scheme " + s.format().str() + " rank=" + std::to_string(s.rank()) + " over " + s.ring().tag() + ">";
        });

    m.def("scheme_from_json", &scheme_from_string, py::arg("text"));
    m.def(
        "standard_scheme",
        [](std::size_t n, std::size_t mm, std::size_t p, const std::string& ring) {
            return standard_scheme(Format(n, mm, p), ring_from_text(ring));
        },
        py::arg("n"), py::arg("m"), py::arg("p"), py::arg("ring") = "Z2");
    m.def(
        "strassen_scheme", [](const std::string& ring) { return strassen_scheme(ring_from_text(ring)); },
        py::arg("ring") = "Z2");
    m.def(
        "verify", [](const Scheme& s) { return verify(s).ok; }, py::arg("scheme"),
        "Exact check of all Brent equations");

    m.def(
        "extend", [](const Scheme& s, const std::string& axis) { return extend(s, parse_axis(axis)); },
        py::arg("scheme"), py::arg("axis"));
    m.def(
        "project", [](const Scheme& s, const std::string& axis) { return project(s, parse_axis(axis)); },
        py::arg("scheme"), py::arg("axis"));
    m.def(
        "combine",
        [](const Scheme& a, const Scheme& b, const std::string& axis) { return combine(a, b, parse_axis(axis)); },
        py::arg("first"), py::arg("second"), py::arg("axis"));

    m.def(
        "search",
        [](const std::vector<Scheme>& pool, std::uint64_t seed, std::uint64_t paths_multiplier,
           std::uint64_t length_multiplier, unsigned workers, std::optional<std::size_t> target_rank) {
            SearchConfig cfg;
            cfg.seed = seed;
            cfg.paths_multiplier = paths_multiplier;
            cfg.length_multiplier = length_multiplier;
            cfg.workers = workers;
            cfg.target_rank = target_rank;
            py::gil_scoped_release release;
            return search_to_minimum(pool, cfg).final_pool;
        },
        py::arg("pool"), py::arg("seed") = 0, py::arg("paths_multiplier") = 100,
        py::arg("length_multiplier") = 100000, py::arg("workers") = 1, py::arg("target_rank") = py::none(),
        "Random-walk search down to a minimum; returns the final pool");

    m.def(
        "lift",
        [](const Scheme& s, unsigned level) {
            LiftResult r = lift_and_reconstruct(s, level);
            return py::make_tuple(r.rational ? py::cast(*r.rational) : py::none(), r.report().dump());
        },
        py::arg("scheme"), py::arg("level") = 32,
        "Hensel lifting and rational reconstruction; returns (scheme or None, report JSON text)");

    m.def(
        "rat_reconstruct",
        [](std::uint64_t u, unsigned level) -> py::object {
            auto q = rat_reconstruct(u, level);
            if (!q)
                return py::none();
            return py::make_tuple(q->get_num().get_si(), q->get_den().get_si());
        },
        py::arg("u"), py::arg("level"));
}
