// Syntax-directed typecheckers: the affine judgment of the one-level
// language, and the two judgments (sharing / independent) of the two-level
// language.
//
// Context splitting at multiplicative nodes is not guessed: a usage state
// threads through the premises left to right, each use consumes its
// variable, and the second premise simply sees what the first one left.
// Additive nodes instead restore the incoming state for every premise and
// merge the consumption afterwards. Sharing-layer checking does no usage
// tracking at all.

#ifndef INI_TYPECHECK_HPP
#define INI_TYPECHECK_HPP

#include <optional>
#include <string>
#include <vector>

#include "ini/ast.hpp"
#include "ini/models.hpp"
#include "ini/parser.hpp"

namespace ini::types {

enum class ErrorKind {
    UnboundVar,
    ReusedVar,
    SharedAcrossTensor,
    LayerMismatch,
    Mismatch,
    NonFunctionApplied,
    BadSampleArity,
    PrimUnknown,
};

const char* error_kind_name(ErrorKind k);

struct TypeError {
    ErrorKind kind;
    ast::Span span;
    std::string explanation;
    // For ReusedVar / SharedAcrossTensor: the variable and both use sites.
    std::string var;
    std::optional<ast::Span> first_use;
};

/// One step of the derivation; rule names follow the typing figures.
struct RuleApp {
    std::string rule;
    ast::Span span;
    ast::TypePtr type;
};

struct TypingResult {
    std::optional<TypeError> error;
    ast::TypePtr type;
    std::vector<RuleApp> trace;  // post-order, one entry per node

    bool ok() const { return !error.has_value(); }
};

/// Usage-threaded typing context. Entries are ordered; shadowing resolves
/// to the most recently pushed entry.
struct UsageContext {
    struct Entry {
        std::string name;
        ast::TypePtr type;
        bool consumed = false;
        ast::Span use_span{};
        int use_epoch = 0;
    };
    std::vector<Entry> entries;
    int epoch = 0;

    void push(std::string name, ast::TypePtr type) {
        entries.push_back(Entry{std::move(name), std::move(type)});
    }
};

/// expected may be null (pure synthesis). The model determines which
/// primitives are in scope.
TypingResult check_ini(UsageContext& ctx, const ast::TermPtr& t, const ast::TypePtr& expected,
                       sem::ModelId model);
TypingResult check_ni(UsageContext& ctx, const ast::TermPtr& t, const ast::TypePtr& expected,
                      sem::ModelId model);
TypingResult check_i(UsageContext& ctx, const ast::TermPtr& t, const ast::TypePtr& expected,
                     sem::ModelId model);

/// Dispatches on the file's language/layer with an empty context.
TypingResult check_program(const parse::SourceFile& f, sem::ModelId model);

std::string render_error(const TypeError& e, const std::string& source);

}  // namespace ini::types

#endif
