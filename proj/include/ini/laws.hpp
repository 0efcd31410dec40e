// The equational theory as executable law schemas, plus the soundness and
// full-abstraction corpus suites. Laws are verified semantically: both
// sides of each random instantiation are evaluated exactly and compared
// with the model's value equality.

#ifndef INI_LAWS_HPP
#define INI_LAWS_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ini/ast.hpp"
#include "ini/generate.hpp"
#include "ini/models.hpp"
#include "ini/translate.hpp"

namespace ini::laws {

struct LawInstance {
    ast::TermPtr lhs, rhs;
    ast::Layer layer;
    // Free variables (at most one, boolean-typed); both sides are compared
    // under every assignment.
    std::vector<std::pair<std::string, ast::TypePtr>> free_vars;
};

struct LawSchema {
    std::string name;
    ast::Layer layer;
    bool commutativity_sensitive;  // the sample laws
    std::function<LawInstance(gen::Rng&, const gen::GenConfig&)> instantiate;
};

/// The shipped schema set, in a fixed order:
/// ni-case-inl, ni-case-inr, let-id-body, let-id-subject, let-assoc,
/// i-beta-app, i-let-tensor-beta, i-case-inl, i-case-inr, sample-id,
/// sample-fusion, sample-assoc, sample-unit-left, sample-unit-right.
const std::vector<LawSchema>& law_schemas();

struct LawFailure {
    std::string lhs, rhs;
    std::string detail;
};

struct LawReport {
    std::string law;
    sem::ModelId model;
    int checked = 0;
    std::vector<LawFailure> failures;

    bool ok() const { return failures.empty(); }
};

LawReport check_law(const LawSchema& schema, const gen::GenConfig& cfg);

struct EquationsReport {
    std::vector<LawReport> laws;
    bool ok() const {
        for (const auto& l : laws)
            if (!l.ok()) return false;
        return true;
    }
};

/// Runs every schema against every model that provides the instantiation's
/// primitives (the generator is model-aware, so that is all three).
EquationsReport run_equations_suite(uint64_t seed, int count, int depth);

struct SoundnessEntry {
    std::string term;
    std::string detail;
};

struct SoundnessReport {
    sem::ModelId model;
    ast::Layer layer;
    int checked = 0;
    std::vector<SoundnessEntry> failures;
    bool negative_control_flagged = false;  // the correlated pair is caught

    bool ok() const { return failures.empty() && negative_control_flagged; }
};

/// layer Ini: closed one-level terms at separating-pair types, exact
/// factorization. layer I: closed two-level terms at M _ (x) M _, erased
/// joint against the product of the components.
SoundnessReport run_soundness_suite(sem::ModelId model, ast::Layer layer, uint64_t seed,
                                    int count, int depth);

struct FullAbstractionReport {
    trans::Fragment fragment;
    int pairs = 0;
    int typing_failures = 0;
    int semantic_failures = 0;
    std::vector<trans::AbstractionViolation> violations;
    bool ok() const {
        return violations.empty() && typing_failures == 0 && semantic_failures == 0;
    }
};

/// Typing preservation and exact semantic preservation on generated
/// fragment corpora, then the full-abstraction biconditional on pairs
/// (reflexive pairs, pairs made equal by beta/let rewrites, and pairs
/// perturbed in one leaf).
FullAbstractionReport run_full_abstraction_suite(trans::Fragment f, uint64_t seed, int count,
                                                 int depth);

}  // namespace ini::laws

#endif
