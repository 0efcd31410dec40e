// Concrete surface syntax for .ini files.
//
// A file starts with a header line
//     #lang ini1
//     #lang ini2 layer=I
//     #lang ini2 layer=NI
// followed by zero or more declarations `def name : Type = term` and one
// main term. Comments run from `--` to end of line.
//
// Token cheatsheet: `*` and `+` are the sharing product/sum, `(x)` and `(+)`
// the separating ones, `-o` the linear arrow, `M T` the modality. Terms use
// `fn x: T => t`, juxtaposition application, `(t, u)` / `fst` / `snd`,
// `t (x) u` / `let x (x) y = t in u`, `inl[T] t`, `case t of inl x => u |
// inr y => v`, `let x = t in u`, `sample t1, ..., tn as x1, ..., xn in M`
// (`send` is an accepted alias), and `if t then u else v` as case sugar.
// The unicode spellings ⊗, ⊕, ⊸, × are accepted as aliases on input.

#ifndef INI_PARSER_HPP
#define INI_PARSER_HPP

#include <optional>
#include <string>
#include <vector>

#include "ini/ast.hpp"

namespace ini::parse {

enum class Language { Ini1, Ini2 };

struct Decl {
    std::string name;
    ast::TypePtr type;
    ast::TermPtr body;
};

struct SourceFile {
    Language language = Language::Ini1;
    ast::Layer layer = ast::Layer::Ini;  // NI or I for ini2, Ini for ini1
    std::vector<Decl> decls;
    ast::TermPtr main;  // with declarations already inlined
};

struct ParseError {
    ast::Span span;
    std::vector<std::string> expected;
    std::string message;

    std::string render(const std::string& source) const;
};

struct ParseResult {
    std::optional<SourceFile> file;
    std::optional<ParseError> error;

    bool ok() const { return file.has_value(); }
};

/// Parses a whole source file. Never throws; any malformed input yields a
/// ParseError positioned at the first failure.
ParseResult parse_source(const std::string& text);

/// Parses a bare term (no header, no declarations) in the given layer.
ParseResult parse_term(const std::string& text, ast::Layer layer);

std::string term_to_string(const ast::TermPtr& t);
std::string print_source(const SourceFile& f);

}  // namespace ini::parse

#endif
