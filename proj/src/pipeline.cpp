#include "ghm/pipeline.hpp"

#include <sstream>

namespace ghm {

Compiled compileExpr(const Expr& e) {
    Compiled c;
    c.source = e;
    Inferencer inf;
    c.inference = inf.infer({}, e);
    CastInserter ci;
    TranslationResult tr = ci.translate({}, c.inference.annotated);
    c.term = tr.term;
    c.type = tr.type;
    return c;
}

Compiled compileSource(const std::string& src, ParseOptions opts) {
    Program p = parseProgram(src, opts);
    std::vector<std::string> notes = p.notes;
    Expr e = programToExpr(p, &notes);
    Compiled c = compileExpr(e);
    c.notes = notes;
    return c;
}

RunResult runSource(const std::string& src, const EvalOptions& opts) {
    RunResult r;
    r.compiled = compileSource(src);
    r.outcome = eval(r.compiled.term, opts);
    return r;
}

std::string showWhere(const Subst& s, const std::set<std::string>& vars) {
    std::string out;
    for (auto& [x, t] : s.bindings()) {
        if (!vars.count(x)) continue;
        out += out.empty() ? "where " : ", ";
        out += "'" + x + " := " + show(t);
    }
    return out;
}

std::string showBlame(const Label& l) {
    std::string s = "blame " + l.show();
    if (l.span.line > 0) s += " at line " + std::to_string(l.span.line) + ", column " + std::to_string(l.span.col);
    s += std::string(" (polarity ") + (l.neg ? "negative" : "positive") + ")";
    return s;
}

// ---- session ----

namespace {

std::string showScheme(const Scheme& sc) {
    std::string s;
    if (!sc.binders.empty()) {
        s = "forall";
        for (auto& b : sc.binders) s += " '" + b;
        s += ". ";
    }
    return s + show(sc.body);
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

const char* helpText =
    "  e                 evaluate an expression\n"
    "  let x = e         declare a top-level binding\n"
    "  :type e           show the inferred type\n"
    "  :cast e           show the translation with casts\n"
    "  :trace e          evaluate and show every step\n"
    "  :set fuel N       step budget\n"
    "  :set mode M       dti or baseline\n"
    "  :quit             leave\n";

}  // namespace

Session::Session() = default;

void Session::applyToSession(const Subst& s) {
    if (s.empty()) return;
    inferEnv_ = applySubst(s, inferEnv_);
    ciEnv_ = applySubst(s, ciEnv_);
    for (auto& st : stored_) st.value = applySubst(s, mkLet(st.name, st.binders, st.value, mkConst(Const::unit())))->a;
}

Term Session::closeOver(Term body) const {
    for (auto it = stored_.rbegin(); it != stored_.rend(); ++it) body = mkLet(it->name, it->binders, it->value, body);
    return body;
}

Compiled Session::translate(const Expr& e) {
    Compiled c;
    c.source = e;
    c.inference = inferencer_.infer(inferEnv_, e);
    applyToSession(c.inference.subst);
    CastInserter ci(nextLabel_);
    TranslationResult tr = ci.translate(ciEnv_, c.inference.annotated);
    nextLabel_ = ci.nextLabel();
    c.term = tr.term;
    c.type = tr.type;
    return c;
}

std::string Session::evalExpr(const Expr& e, bool trace) {
    Compiled c = translate(e);
    Term whole = closeOver(c.term);
    EvalOptions o = opts_;
    if (trace) o.traceLimit = 0;
    EvalOutcome out = eval(whole, o, &runtime_);
    applyToSession(out.accum);
    std::ostringstream os;
    if (trace) os << printTrace(out);
    switch (out.kind) {
        case EvalOutcome::Val: {
            os << "- : " << show(out.accum.apply(c.type)) << " = " << printTerm(out.value, false) << "\n";
            std::string w = showWhere(out.accum, ftv(whole));
            if (!w.empty()) os << w << "\n";
            break;
        }
        case EvalOutcome::Blame: os << showBlame(out.label) << "\n"; break;
        case EvalOutcome::Timeout: os << "timeout after " << out.steps << " steps\n"; break;
    }
    return os.str();
}

std::string Session::declare(const Decl& d) {
    std::ostringstream os;
    if (!d.rec && isSyntacticValue(d.rhs)) {
        auto dr = inferencer_.inferLet(inferEnv_, d.name, d.rhs);
        applyToSession(dr.subst);
        CastInserter ci(nextLabel_);
        auto lr = ci.translateLetValue(ciEnv_, dr.annotated, dr.scheme.binders);
        nextLabel_ = ci.nextLabel();
        inferEnv_[d.name] = dr.scheme;
        ciEnv_[d.name] = Scheme{lr.binders, lr.type};
        stored_.push_back({d.name, lr.binders, lr.value});
        os << "val " << d.name << " : " << showScheme(dr.scheme) << "\n";
        return os.str();
    }
    Compiled c = translate(declToExpr(d, eVar(d.name, d.span)));
    Term whole = closeOver(c.term);
    EvalOutcome out = eval(whole, opts_, &runtime_);
    applyToSession(out.accum);
    if (out.kind == EvalOutcome::Blame) return showBlame(out.label) + "\n";
    if (out.kind == EvalOutcome::Timeout) return "timeout after " + std::to_string(out.steps) + " steps\n";
    Type t = out.accum.apply(c.type);
    inferEnv_[d.name] = Scheme{{}, t};
    ciEnv_[d.name] = Scheme{{}, t};
    stored_.push_back({d.name, {}, out.value});
    os << "val " << d.name << " : " << show(t) << " = " << printTerm(out.value, false) << "\n";
    return os.str();
}

std::string Session::handle(const std::string& raw) {
    std::string line = trim(raw);
    if (line.empty()) return "";
    try {
        if (line[0] == ':') {
            std::istringstream is(line);
            std::string cmd;
            is >> cmd;
            std::string rest;
            std::getline(is, rest);
            rest = trim(rest);
            if (cmd == ":quit" || cmd == ":q") {
                done_ = true;
                return "";
            }
            if (cmd == ":help") return helpText;
            if (cmd == ":set") {
                std::istringstream rs(rest);
                std::string key, val;
                rs >> key >> val;
                if (key == "fuel") {
                    long n = std::stol(val);
                    if (n <= 0) return "error: fuel must be positive\n";
                    opts_.maxSteps = n;
                    return "fuel = " + std::to_string(n) + "\n";
                }
                if (key == "mode") {
                    if (val == "dti") opts_.mode = Mode::DTI;
                    else if (val == "baseline") opts_.mode = Mode::Baseline;
                    else return "error: mode must be dti or baseline\n";
                    return "mode = " + val + "\n";
                }
                return "error: unknown setting " + key + "\n";
            }
            if (cmd == ":type") {
                Inferencer probe;
                probe.avoid(ftv(inferEnv_));
                Expr e = parseExpr(rest);
                auto r = probe.infer(inferEnv_, e);
                std::string res;
                for (auto& x : r.residual) res += (res.empty() ? "'" : ", '") + x;
                return printExpr(e) + " : " + show(r.type) + "  with residual {" + res + "}\n";
            }
            if (cmd == ":cast") {
                Compiled c = translate(parseExpr(rest));
                return printTerm(c.term) + "\n";
            }
            if (cmd == ":trace") return evalExpr(parseExpr(rest), true);
            return "error: unknown directive " + cmd + " (try :help)\n";
        }
        std::string out;
        Program p = parseProgram(line);
        for (auto& n : p.notes) out += n + "\n";
        for (auto& d : p.decls) out += declare(d);
        if (p.body) out += evalExpr(p.body, false);
        return out;
    } catch (const SyntaxError& e) {
        return std::string("syntax error: ") + e.what() + "\n";
    } catch (const TypeError& e) {
        std::string where = e.span.line > 0 ? "line " + std::to_string(e.span.line) + ", column " +
                                                  std::to_string(e.span.col) + ": "
                                            : "";
        return "type error: " + where + e.what() + "\n";
    } catch (const std::exception& e) {
        return std::string("error: ") + e.what() + "\n";
    }
}

}  // namespace ghm
