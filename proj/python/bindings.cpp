#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ghm/harness.hpp"
#include "ghm/precision.hpp"

namespace py = pybind11;
using namespace ghm;

namespace {

py::dict substDict(const Subst& s) {
    py::dict d;
    for (auto& [x, t] : s.bindings()) d[py::str(x)] = show(t);
    return d;
}

Mode parseMode(const std::string& m) {
    if (m == "dti") return Mode::DTI;
    if (m == "baseline") return Mode::Baseline;
    throw py::value_error("mode must be 'dti' or 'baseline'");
}

py::dict outcomeDict(const EvalOutcome& o, const Type& type) {
    py::dict d;
    d["outcome"] = outcomeKindName(o.kind);
    d["steps"] = o.steps;
    d["subst"] = substDict(o.accum);
    d["type"] = show(o.accum.apply(type));
    d["value"] = o.kind == EvalOutcome::Val ? py::cast(printTerm(o.value)) : py::none();
    d["label"] = o.kind == EvalOutcome::Blame ? py::cast(o.label.show()) : py::none();
    py::list trace;
    for (auto& e : o.trace) trace.append(py::make_tuple(e.rule, e.subst.show(), printTerm(e.term)));
    d["trace"] = trace;
    return d;
}

}  // namespace

PYBIND11_MODULE(_gradualhm, m) {
    m.doc() = "gradual typing with dynamic type inference";

    py::register_exception<SyntaxError>(m, "SyntaxError");
    py::register_exception<TypeError>(m, "TypeError");
    py::register_exception<IllTyped>(m, "IllTyped");
    py::register_exception<StuckError>(m, "StuckError");

    m.def("parse", [](const std::string& src) { return printExpr(programToExpr(parseProgram(src))); },
          py::arg("source"), "Parse a program and print it back.");

    m.def(
        "infer",
        [](const std::string& src) {
            Compiled c = compileSource(src);
            py::dict d;
            d["type"] = show(c.inference.type);
            d["residual"] = c.inference.residual;
            d["subst"] = substDict(c.inference.subst);
            return d;
        },
        py::arg("source"));

    m.def(
        "translate",
        [](const std::string& src) {
            Compiled c = compileSource(src);
            return py::make_tuple(printTerm(c.term), show(c.type));
        },
        py::arg("source"), "Cast-inserted term and its type.");

    m.def(
        "typecheck",
        [](const std::string& term) -> py::object {
            Type t = typecheckDTI({}, parseTerm(term));
            return t ? py::cast(show(t)) : py::none();
        },
        py::arg("term"));

    m.def(
        "run",
        [](const std::string& src, const std::string& mode, long maxSteps) {
            EvalOptions o;
            o.mode = parseMode(mode);
            o.maxSteps = maxSteps;
            RunResult r = runSource(src, o);
            return outcomeDict(r.outcome, r.compiled.type);
        },
        py::arg("source"), py::arg("mode") = "dti", py::arg("max_steps") = 100000);

    m.def(
        "eval_term",
        [](const std::string& term, const std::string& mode, long maxSteps) {
            EvalOptions o;
            o.mode = parseMode(mode);
            o.maxSteps = maxSteps;
            Term f = parseTerm(term);
            Type t = typecheckDTI({}, f);
            return outcomeDict(eval(f, o), t ? t : dyn());
        },
        py::arg("term"), py::arg("mode") = "dti", py::arg("max_steps") = 100000);

    m.def(
        "type_precision",
        [](const std::string& u, const std::string& u2) -> py::object {
            auto s = inferPrecSubst(parseType(u), parseType(u2));
            if (!s) return py::none();
            return substDict(*s);
        },
        py::arg("precise"), py::arg("imprecise"));

    m.def(
        "term_precision",
        [](const std::string& a, const std::string& b) -> py::object {
            auto w = inferTermPrecITGL(programToExpr(parseProgram(a)), programToExpr(parseProgram(b)));
            if (!w) return py::none();
            return substDict(w->subst);
        },
        py::arg("precise"), py::arg("imprecise"));

    m.def(
        "vocabulary",
        [](int depth) {
            Vocabulary v;
            v.depth = depth;
            std::vector<std::string> out;
            for (auto& t : v.types()) out.push_back(show(t));
            return out;
        },
        py::arg("depth") = 2);

    m.def(
        "generate",
        [](uint64_t seed, int size) {
            GenOptions g;
            g.size = size;
            return printExpr(generateWellTyped(seed, g));
        },
        py::arg("seed"), py::arg("size") = 4);

    m.def(
        "check_property",
        [](const std::string& name, long cases, uint64_t seed, long fuel, int depth) {
            SuiteOptions o;
            o.cases = cases;
            o.seed = seed;
            o.fuel = fuel;
            o.depth = depth;
            PropertyReport r;
            {
                py::gil_scoped_release release;
                r = runProperty(name, o);
            }
            py::dict d;
            d["property"] = r.property;
            d["cases"] = r.cases;
            d["failures"] = r.failures;
            d["inconclusive"] = r.inconclusive;
            d["seed"] = r.seed;
            d["counterexample"] = r.counterexample ? py::cast(*r.counterexample) : py::none();
            return d;
        },
        py::arg("name"), py::arg("cases") = 100, py::arg("seed") = 0, py::arg("fuel") = 10000, py::arg("depth") = 2);

    m.def("properties", &propertyNames);

    py::class_<Session>(m, "Session")
        .def(py::init<>())
        .def("handle", &Session::handle, py::arg("line"))
        .def_property_readonly("done", &Session::done);
}
