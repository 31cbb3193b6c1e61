#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ghm/eval.hpp"
#include "ghm/pipeline.hpp"

namespace ghm {

// All static types without type variables of arrow depth at most `depth` over `bases`.
struct Vocabulary {
    int depth = 2;
    std::vector<Base> bases{Base::Int, Base::Bool};
    std::vector<Type> types() const;
};

// Every map from vars to vocabulary types when there are at most `limit` of them,
// otherwise `samples` maps drawn with the given seed.
std::vector<Subst> groundings(const std::vector<std::string>& vars, const std::vector<Type>& vocab,
                              size_t limit = 2000, size_t samples = 500, uint64_t seed = 0);

// Rename run-time variables (r0, r1, ...) by order of first occurrence.
Term canonicalRuntime(const Term& f);
bool isRuntimeVar(const std::string& name);
// type variables of f in order of first occurrence
std::vector<std::string> tyVarsInOrder(const Term& f);

// One-way matching: a substitution S with S(pattern) = target (labels compared as well).
std::optional<Subst> matchTerm(const Term& pattern, const Term& target);

struct PropertyReport {
    std::string property;
    long cases = 0;
    long failures = 0;
    long inconclusive = 0;
    uint64_t seed = 0;
    std::optional<std::string> counterexample;

    void fail(const std::string& what) {
        ++failures;
        if (!counterexample) counterexample = what;
    }
    void merge(const PropertyReport& o);
    std::string toJson() const;
};

PropertyReport checkSoundness(const Term& f, const Vocabulary& vocab, long fuel);
PropertyReport checkCompleteness(const Term& f, const Vocabulary& vocab, long fuel);
// e is the more precisely annotated program
PropertyReport checkGradualGuarantee(const Expr& e, const Expr& e2, long fuel);

struct GenOptions {
    int size = 4;
    double dynProb = 0.3;
    bool annotateAll = false;  // no inference variables, no generalization
    int maxResidual = -1;      // reject programs with more residual variables
    int minResidual = 0;
    int retries = 100;
    bool allowIf = true;
};

// A closed ITGL program accepted by inference. Throws std::runtime_error after too many retries.
Expr generateWellTyped(uint64_t seed, const GenOptions& opts = {});
// A less precisely annotated variant of e.
Expr loosen(const Expr& e, std::mt19937_64& rng);

uint64_t caseSeed(uint64_t seed, long i);

struct SuiteOptions {
    long cases = 100;
    uint64_t seed = 0;
    long fuel = 10000;
    int depth = 2;
    int size = 6;
};

PropertyReport runConservative(const SuiteOptions& o);
PropertyReport runSafety(const SuiteOptions& o);
PropertyReport runCastPreservation(const SuiteOptions& o);
PropertyReport runSoundness(const SuiteOptions& o);
PropertyReport runCompleteness(const SuiteOptions& o);
PropertyReport runGradualGuarantee(const SuiteOptions& o);
PropertyReport runRoundTrip(const SuiteOptions& o);

// dispatch by name: soundness, completeness, conservative, safety, gg, cast, roundtrip
PropertyReport runProperty(const std::string& name, const SuiteOptions& o);
std::vector<std::string> propertyNames();

}  // namespace ghm
