#include <sstream>

#include <pybind11/gil_safe_call_once.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fitch/cli.hpp"
#include "fitch/error.hpp"
#include "fitch/metatheory.hpp"
#include "fitch/rewrite.hpp"
#include "fitch/suites.hpp"
#include "fitch/surface.hpp"
#include "fitch/typecheck.hpp"

namespace py = pybind11;
using namespace fitch;

namespace {

Mode mode_of(const std::string& s) {
    auto m = parse_mode(s);
    if (!m) throw Error(ErrorKind::PreconditionViolated, "unknown mode '" + s + "'");
    return *m;
}

Derivation derive(const std::string& mode, const std::string& ctx, const std::string& term,
                  const std::optional<std::string>& ty) {
    Mode m = mode_of(mode);
    Ctx c = parse_ctx(ctx);
    Term t = parse_term(term);
    return ty ? check(m, c, t, parse_type(*ty)) : infer(m, c, t).deriv;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Fitch-style modal lambda calculi: checking, reduction, models and property suites";

    PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
    error_type.call_once_and_store_result([&] { return py::object(py::exception<Error>(m, "FitchError")); });
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            const py::object& cls = error_type.get_stored();
            py::object exc = cls(e.describe());
            exc.attr("kind") = error_kind_name(e.kind());
            PyErr_SetObject(cls.ptr(), exc.ptr());
        }
    });

    m.def("modes", [] { return std::vector<std::string>{"ik", "ikd", "is4", "is4d", "ir", "ird"}; });

    m.def(
        "check",
        [](const std::string& mode, const std::string& ctx, const std::string& term,
           const std::optional<std::string>& ty) { return print(derive(mode, ctx, term, ty).ty); },
        py::arg("mode"), py::arg("ctx"), py::arg("term"), py::arg("type") = py::none(),
        "Type of `term` in `ctx`, checked against `type` when given.");

    m.def(
        "derivation",
        [](const std::string& mode, const std::string& ctx, const std::string& term,
           const std::optional<std::string>& ty) { return print_derivation(derive(mode, ctx, term, ty)); },
        py::arg("mode"), py::arg("ctx"), py::arg("term"), py::arg("type") = py::none());

    m.def(
        "count_derivations",
        [](const std::string& mode, const std::string& ctx, const std::string& term, const std::string& ty,
           std::size_t bound) {
            return enumerate_derivations(mode_of(mode), parse_ctx(ctx), parse_term(term), parse_type(ty), bound).size();
        },
        py::arg("mode"), py::arg("ctx"), py::arg("term"), py::arg("type"), py::arg("bound") = 64);

    m.def(
        "normalize",
        [](const std::string& term, std::optional<std::size_t> fuel, const std::string& strategy) {
            Term t = parse_term(term);
            Strategy s = strategy == "innermost" ? Strategy::Innermost : Strategy::Outermost;
            if (strategy != "innermost" && strategy != "outermost")
                throw Error(ErrorKind::PreconditionViolated, "unknown strategy '" + strategy + "'");
            Normalized n = normalize(t, fuel ? *fuel : default_fuel(t), s, true);
            py::list trace;
            for (const auto& c : n.trace) trace.append(py::make_tuple(redex_name(c.tag), print(c.term)));
            py::dict d;
            d["normal"] = print(n.term);
            d["steps"] = n.steps;
            d["trace"] = trace;
            return d;
        },
        py::arg("term"), py::arg("fuel") = py::none(), py::arg("strategy") = "outermost");

    m.def(
        "def_eq",
        [](const std::string& mode, const std::string& ctx, const std::string& lhs, const std::string& rhs,
           const std::string& ty, std::size_t bound) {
            EqResult r = def_eq(mode_of(mode), parse_ctx(ctx), parse_term(lhs), parse_term(rhs), parse_type(ty), bound);
            py::list trace;
            for (const auto& mv : r.trace) trace.append(py::make_tuple(mv.rule, print(mv.term)));
            py::dict d;
            d["verdict"] = verdict_name(r.verdict);
            d["states"] = r.states;
            d["trace"] = trace;
            return d;
        },
        py::arg("mode"), py::arg("ctx"), py::arg("lhs"), py::arg("rhs"), py::arg("type"), py::arg("bound") = 32);

    m.def("suite_names", &suite_names);

    m.def(
        "run_suite_json",
        [](const std::string& name, const std::optional<std::string>& mode, std::size_t samples, std::uint64_t seed,
           std::size_t max_size, unsigned workers) {
            SuiteConfig c;
            c.name = name;
            if (mode) c.mode = mode_of(*mode);
            c.samples = samples;
            c.seed = seed;
            c.max_size = max_size;
            c.workers = workers;
            SuiteReport r;
            {
                py::gil_scoped_release nogil;
                r = run_suite(c);
            }
            return report_json(r);
        },
        py::arg("name"), py::arg("mode") = py::none(), py::arg("samples") = 1000, py::arg("seed") = 1,
        py::arg("max_size") = 30, py::arg("workers") = 0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release nogil;
                code = run_cli(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs fitchcalc in-process; returns (exit code, stdout, stderr).");
}
