// The two embeddings of the one-level language into the two-level one:
// T maps the arrow-free fragment into the sharing layer (merging both
// products into the sharing product), and T' maps the multiplicative
// fragment into the independent layer (boxing the base type).

#ifndef INI_TRANSLATE_HPP
#define INI_TRANSLATE_HPP

#include <optional>
#include <string>

#include "ini/ast.hpp"
#include "ini/models.hpp"

namespace ini::trans {

enum class Fragment { ArrowFree, Multiplicative };

struct Classification {
    bool arrow_free = false;
    bool multiplicative = false;

    bool in_fragment(Fragment f) const {
        return f == Fragment::ArrowFree ? arrow_free : multiplicative;
    }
    bool any() const { return arrow_free || multiplicative; }
};

/// Syntactic fragment membership: arrow-free terms contain no lambda,
/// application, or arrow type; multiplicative terms contain no sharing
/// pair, projection, or sharing-product type. Both may hold at once.
Classification classify_fragment(const ast::TermPtr& t);

struct TranslationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ast::TypePtr translate_type_t(const ast::TypePtr& t);
ast::TypePtr translate_type_tprime(const ast::TypePtr& t);

/// T: identity on terms up to syntax. Separating pairs become sharing
/// pairs; let-pair becomes a let plus projections. Throws TranslationError
/// when the term is outside the arrow-free fragment.
ast::TermPtr translate_t(const ast::TermPtr& t);

/// T': identity up to boxing. Constants and coin become nullary samples
/// inhabiting M Bool; let is expanded to an application first (its typing
/// is needed for the lambda annotation, so the term must typecheck).
/// Throws TranslationError outside the multiplicative fragment.
ast::TermPtr translate_tprime(const ast::TermPtr& t, sem::ModelId model);

struct AbstractionPair {
    ast::TermPtr t1, t2;
};

struct AbstractionViolation {
    AbstractionPair pair;
    bool source_equal;
    bool target_equal;
};

struct AbstractionReport {
    int checked = 0;
    int skipped_unobservable = 0;
    std::vector<AbstractionViolation> violations;
};

/// For each closed same-type pair, compares source equality with equality
/// of the translations (sharing-layer evaluation for T, erased evaluation
/// for T'). A violation is any failure of the biconditional.
AbstractionReport check_full_abstraction(const sem::Model& m,
                                         const std::vector<AbstractionPair>& pairs, Fragment f);

}  // namespace ini::trans

#endif
