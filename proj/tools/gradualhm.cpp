#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghm/harness.hpp"
#include "ghm/pipeline.hpp"
#include "ghm/precision.hpp"

using namespace ghm;

namespace {

std::string readFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string describe(const std::exception& e) {
    if (dynamic_cast<const SyntaxError*>(&e)) return std::string("syntax error: ") + e.what();
    if (auto te = dynamic_cast<const TypeError*>(&e)) {
        std::string where = te->span.line > 0 ? "line " + std::to_string(te->span.line) + ", column " +
                                                    std::to_string(te->span.col) + ": "
                                              : "";
        return "type error: " + where + e.what();
    }
    return std::string("error: ") + e.what();
}

uint64_t effectiveSeed(uint64_t seed) {
    if (const char* env = std::getenv("GRADUALHM_SEED")) return std::strtoull(env, nullptr, 10);
    return seed;
}

struct RunArgs {
    std::string file;
    std::string mode = "dti";
    long maxSteps = 100000;
    std::string trace;
    uint64_t seed = 0;
    bool json = false;
    bool dumpTypes = false;
    bool dumpCast = false;
};

int runFile(const RunArgs& a) {
    effectiveSeed(a.seed);
    Compiled c;
    try {
        c = compileSource(readFile(a.file));
    } catch (const std::exception& e) {
        std::cerr << describe(e) << "\n";
        return 1;
    }
    for (auto& n : c.notes) std::cerr << "note: " << n << "\n";
    if (a.dumpTypes) {
        std::cout << "type: " << show(c.inference.type) << "\n";
        std::cout << "substitution: " << c.inference.subst.show() << "\n";
    }
    if (a.dumpCast) std::cout << printTerm(c.term) << "\n";

    EvalOptions opts;
    opts.mode = a.mode == "baseline" ? Mode::Baseline : Mode::DTI;
    opts.maxSteps = a.maxSteps;
    opts.traceLimit = a.trace == "full" ? 0 : 1000;
    EvalOutcome out;
    try {
        out = eval(c.term, opts);
    } catch (const std::exception& e) {
        std::cerr << describe(e) << "\n";
        return 1;
    }
    if (!a.trace.empty()) std::cout << printTrace(out);

    Type t = out.accum.apply(c.type);
    if (a.json) {
        nlohmann::json j;
        j["type"] = show(t);
        j["outcome"] = outcomeKindName(out.kind);
        nlohmann::json s = nlohmann::json::object();
        for (auto& [x, u] : out.accum.bindings()) s[x] = show(u);
        j["subst"] = s;
        j["steps"] = out.steps;
        if (out.kind == EvalOutcome::Val) j["value"] = printTerm(out.value);
        if (out.kind == EvalOutcome::Blame) j["label"] = out.label.show();
        std::cout << j.dump() << "\n";
    } else {
        switch (out.kind) {
            case EvalOutcome::Val: {
                std::cout << "- : " << show(t) << " = " << printTerm(out.value) << "\n";
                std::string w = showWhere(out.accum, ftv(c.term));
                if (!w.empty()) std::cout << w << "\n";
                break;
            }
            case EvalOutcome::Blame: std::cout << showBlame(out.label) << "\n"; break;
            case EvalOutcome::Timeout: std::cout << "timeout after " << out.steps << " steps\n"; break;
        }
    }
    switch (out.kind) {
        case EvalOutcome::Val: return 0;
        case EvalOutcome::Blame: return 2;
        case EvalOutcome::Timeout: return 3;
    }
    return 1;
}

int repl(long fuel, const std::string& mode) {
    Session s;
    s.options().maxSteps = fuel;
    s.options().mode = mode == "baseline" ? Mode::Baseline : Mode::DTI;
    std::string line;
    for (;;) {
        std::cout << "# " << std::flush;
        if (!std::getline(std::cin, line)) break;
        std::cout << s.handle(line) << std::flush;
        if (s.done()) break;
    }
    return 0;
}

int prec(const std::string& f1, const std::string& f2) {
    try {
        Expr e1 = programToExpr(parseProgram(readFile(f1)));
        Expr e2 = programToExpr(parseProgram(readFile(f2)));
        auto w = inferTermPrecITGL(e1, e2);
        if (!w) {
            std::cout << "unrelated\n";
            return 4;
        }
        std::cout << w->subst.show() << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << describe(e) << "\n";
        return 1;
    }
}

int prop(const std::string& name, const SuiteOptions& o, bool json) {
    PropertyReport r;
    try {
        r = runProperty(name, o);
    } catch (const std::exception& e) {
        std::cerr << describe(e) << "\n";
        return 1;
    }
    if (json) {
        std::cout << r.toJson() << "\n";
    } else {
        std::cout << r.property << ": cases " << r.cases << ", failures " << r.failures << ", inconclusive "
                  << r.inconclusive << ", seed " << r.seed << "\n";
        if (r.counterexample) std::cout << "counterexample: " << *r.counterexample << "\n";
    }
    return r.failures == 0 ? 0 : 5;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradualhm: gradual typing with dynamic type inference"};
    app.require_subcommand(1);

    RunArgs ra;
    auto* run = app.add_subcommand("run", "evaluate a program file");
    run->add_option("file", ra.file, "program file")->required();
    run->add_option("--mode", ra.mode, "dti or baseline")->check(CLI::IsMember({"dti", "baseline"}));
    run->add_option("--max-steps", ra.maxSteps, "step budget")->check(CLI::PositiveNumber);
    run->add_flag("--trace{last}", ra.trace, "print the trace; --trace=full keeps every step");
    run->add_option("--seed", ra.seed, "seed");
    run->add_flag("--json", ra.json, "machine-readable result");
    run->add_flag("--dump-types", ra.dumpTypes, "print the inferred type and substitution");
    run->add_flag("--dump-cast", ra.dumpCast, "print the translation with casts");

    long replFuel = 100000;
    std::string replMode = "dti";
    auto* rp = app.add_subcommand("repl", "interactive session");
    rp->add_option("--max-steps", replFuel, "step budget")->check(CLI::PositiveNumber);
    rp->add_option("--mode", replMode, "dti or baseline")->check(CLI::IsMember({"dti", "baseline"}));

    std::string p1, p2;
    auto* pr = app.add_subcommand("prec", "precision witness between two programs");
    pr->add_option("file1", p1, "more precise program")->required();
    pr->add_option("file2", p2, "less precise program")->required();

    std::string propName;
    SuiteOptions so;
    bool propJson = false;
    auto* pp = app.add_subcommand("prop", "run a property suite");
    std::vector<std::string> names = propertyNames();
    pp->add_option("name", propName, "property")->required()->check(CLI::IsMember(names));
    pp->add_option("--seeds", so.cases, "number of cases")->check(CLI::PositiveNumber);
    pp->add_option("--depth", so.depth, "grounding vocabulary depth")->check(CLI::NonNegativeNumber);
    pp->add_option("--fuel", so.fuel, "step budget")->check(CLI::PositiveNumber);
    pp->add_option("--size", so.size, "generator size")->check(CLI::NonNegativeNumber);
    pp->add_option("--seed", so.seed, "base seed");
    pp->add_flag("--json", propJson, "JSON report");

    CLI11_PARSE(app, argc, argv);

    if (*run) return runFile(ra);
    if (*rp) return repl(replFuel, replMode);
    if (*pr) return prec(p1, p2);
    if (*pp) {
        so.seed = effectiveSeed(so.seed);
        return prop(propName, so, propJson);
    }
    return 1;
}
