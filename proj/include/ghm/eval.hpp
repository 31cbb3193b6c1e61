#pragma once

#include <deque>
#include <stdexcept>
#include <string>

#include "ghm/terms.hpp"

namespace ghm {

enum class Mode { DTI, Baseline };

struct StuckError : std::logic_error {
    using std::logic_error::logic_error;
};

struct InvariantViolation : std::logic_error {
    using std::logic_error::logic_error;
};

struct StepResult {
    enum Kind { Stepped, IsValue, Aborted } kind = IsValue;
    Subst subst;
    Term next;
    std::string rule;
    Label label;  // for Aborted
};

// One reduction step under the evaluation-context decomposition.
StepResult step(const Term& f, Mode mode, Fresh& fresh);

struct TraceEntry {
    long index = 0;
    std::string rule;
    Subst subst;
    Term term;
};

struct EvalOptions {
    Mode mode = Mode::DTI;
    long maxSteps = 100000;
    size_t traceLimit = 1000;  // 0 keeps every step
};

struct EvalOutcome {
    enum Kind { Val, Blame, Timeout } kind = Timeout;
    Term initial;
    Term value;    // final value for Val
    Label label;   // blame label for Blame
    long steps = 0;
    Subst accum;   // S_n o ... o S_1
    std::deque<TraceEntry> trace;
    long traceDropped = 0;
};

// Runs to a value, blame, or until the step budget is used up. The fresh generator is
// seeded with every type name of f before the first step.
EvalOutcome eval(const Term& f, const EvalOptions& opts = {}, Fresh* fresh = nullptr);

std::string printTrace(const EvalOutcome& out, bool labels = true);
std::string outcomeKindName(EvalOutcome::Kind k);

enum class ValueShape { Constant, Lambda, Wrapped, Injection };

ValueShape classifyValue(const Term& w);
// Checks the canonical shape of a value w at type u.
ValueShape canonicalForm(const Term& w, const Type& u);

}  // namespace ghm
