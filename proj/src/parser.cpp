#include "ini/parser.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace ini::parse {

using ast::Layer;
using ast::Span;
using ast::Term;
using ast::TermKind;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident,
    KwLet, KwIn, KwFn, KwFst, KwSnd, KwInl, KwInr, KwCase, KwOf,
    KwSample, KwSend, KwAs, KwIf, KwThen, KwElse, KwTrue, KwFalse, KwDef,
    KwBool, KwName, KwM,
    Prim,       // coin amb fresh not and or xor eqb eqn
    LParen, RParen, LBrack, RBrack,
    Comma, Colon, Eq, Arrow, Semi,
    Otimes, Oplus, Lolli, Star, Plus, Bar, Underscore,
    Header,     // the whole #lang line, text in `text`
    End,
    Error,
};

struct Token {
    Tok kind;
    Span span;
    std::string text;
};

const std::map<std::string, Tok> kKeywords = {
    {"let", Tok::KwLet},   {"in", Tok::KwIn},     {"fn", Tok::KwFn},
    {"fst", Tok::KwFst},   {"snd", Tok::KwSnd},   {"inl", Tok::KwInl},
    {"inr", Tok::KwInr},   {"case", Tok::KwCase}, {"of", Tok::KwOf},
    {"sample", Tok::KwSample}, {"send", Tok::KwSend}, {"as", Tok::KwAs},
    {"if", Tok::KwIf},     {"then", Tok::KwThen}, {"else", Tok::KwElse},
    {"true", Tok::KwTrue}, {"false", Tok::KwFalse}, {"def", Tok::KwDef},
    {"Bool", Tok::KwBool}, {"Name", Tok::KwName}, {"M", Tok::KwM},
    {"coin", Tok::Prim},   {"amb", Tok::Prim},    {"fresh", Tok::Prim},
    {"not", Tok::Prim},    {"and", Tok::Prim},    {"or", Tok::Prim},
    {"xor", Tok::Prim},    {"eqb", Tok::Prim},    {"eqn", Tok::Prim},
    {"_", Tok::Underscore},
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    std::vector<Token> out;
    std::optional<ParseError> err;

    explicit Lexer(const std::string& s) : src(s) {}

    bool starts_with(const char* s) const {
        size_t n = std::char_traits<char>::length(s);
        return src.compare(pos, n, s) == 0;
    }

    void push(Tok k, size_t lo, size_t hi, std::string text = {}) {
        out.push_back({k, Span{(uint32_t)lo, (uint32_t)hi}, std::move(text)});
    }

    void fail(size_t at, std::string msg) {
        if (!err) err = ParseError{Span{(uint32_t)at, (uint32_t)(at + 1)}, {}, std::move(msg)};
        pos = src.size();
    }

    void run() {
        while (pos < src.size()) {
            char c = src[pos];
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { ++pos; continue; }
            if (starts_with("--")) {
                while (pos < src.size() && src[pos] != '\n') ++pos;
                continue;
            }
            size_t lo = pos;
            if (c == '#') {
                while (pos < src.size() && src[pos] != '\n') ++pos;
                push(Tok::Header, lo, pos, src.substr(lo, pos - lo));
                continue;
            }
            if (starts_with("(x)")) { pos += 3; push(Tok::Otimes, lo, pos); continue; }
            if (starts_with("(+)")) { pos += 3; push(Tok::Oplus, lo, pos); continue; }
            if (starts_with("\xE2\x8A\x97")) { pos += 3; push(Tok::Otimes, lo, pos); continue; }  // ⊗
            if (starts_with("\xE2\x8A\x95")) { pos += 3; push(Tok::Oplus, lo, pos); continue; }   // ⊕
            if (starts_with("\xE2\x8A\xB8")) { pos += 3; push(Tok::Lolli, lo, pos); continue; }   // ⊸
            if (starts_with("\xC3\x97")) { pos += 2; push(Tok::Star, lo, pos); continue; }        // ×
            if (starts_with("=>")) { pos += 2; push(Tok::Arrow, lo, pos); continue; }
            if (starts_with("-o")) { pos += 2; push(Tok::Lolli, lo, pos); continue; }
            switch (c) {
                case '(': ++pos; push(Tok::LParen, lo, pos); continue;
                case ')': ++pos; push(Tok::RParen, lo, pos); continue;
                case '[': ++pos; push(Tok::LBrack, lo, pos); continue;
                case ']': ++pos; push(Tok::RBrack, lo, pos); continue;
                case ',': ++pos; push(Tok::Comma, lo, pos); continue;
                case ';': ++pos; push(Tok::Semi, lo, pos); continue;
                case ':': ++pos; push(Tok::Colon, lo, pos); continue;
                case '=': ++pos; push(Tok::Eq, lo, pos); continue;
                case '*': ++pos; push(Tok::Star, lo, pos); continue;
                case '+': ++pos; push(Tok::Plus, lo, pos); continue;
                case '|': ++pos; push(Tok::Bar, lo, pos); continue;
                default: break;
            }
            if (std::isalpha((unsigned char)c) || c == '_') {
                while (pos < src.size() &&
                       (std::isalnum((unsigned char)src[pos]) || src[pos] == '_' ||
                        src[pos] == '\''))
                    ++pos;
                std::string word = src.substr(lo, pos - lo);
                auto it = kKeywords.find(word);
                if (it != kKeywords.end())
                    push(it->second, lo, pos, word);
                else
                    push(Tok::Ident, lo, pos, word);
                continue;
            }
            fail(lo, std::string("unexpected character '") + c + "'");
            return;
        }
        push(Tok::End, src.size(), src.size());
    }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    std::optional<ParseError> err;
    Layer layer = Layer::Ini;

    const Token& cur() const { return toks[at]; }
    const Token& next() const { return toks[std::min(at + 1, toks.size() - 1)]; }

    bool peek(Tok k) const { return cur().kind == k; }

    bool eat(Tok k) {
        if (!peek(k)) return false;
        ++at;
        return true;
    }

    std::nullptr_t fail(std::vector<std::string> expected, const std::string& msg = {}) {
        if (!err) {
            std::string m = msg.empty() ? "unexpected token" : msg;
            err = ParseError{cur().span, std::move(expected), std::move(m)};
        }
        return nullptr;
    }

    bool expect(Tok k, const char* what) {
        if (eat(k)) return true;
        fail({what});
        return false;
    }

    Span span_from(size_t lo_idx) const {
        Span s = toks[lo_idx].span;
        Span e = toks[at > 0 ? at - 1 : 0].span;
        return Span{s.lo, e.hi};
    }

    // ---- types -----------------------------------------------------------
    //
    // Precedence, loosest first: -o (right), (+), (x), +, * (all right-assoc),
    // then M, then atoms.

    TypePtr parse_type() { return parse_lolli(); }

    TypePtr parse_lolli() {
        TypePtr lhs = parse_oplus();
        if (!lhs) return nullptr;
        if (eat(Tok::Lolli)) {
            TypePtr rhs = parse_lolli();
            if (!rhs) return nullptr;
            return Type::lolli(lhs, rhs);
        }
        return lhs;
    }

    TypePtr parse_oplus() {
        TypePtr lhs = parse_tensor_type();
        if (!lhs) return nullptr;
        if (eat(Tok::Oplus)) {
            TypePtr rhs = parse_oplus();
            if (!rhs) return nullptr;
            return Type::oplus(lhs, rhs);
        }
        return lhs;
    }

    TypePtr parse_tensor_type() {
        TypePtr lhs = parse_sum_type();
        if (!lhs) return nullptr;
        if (eat(Tok::Otimes)) {
            TypePtr rhs = parse_tensor_type();
            if (!rhs) return nullptr;
            return Type::tensor(lhs, rhs);
        }
        return lhs;
    }

    TypePtr parse_sum_type() {
        TypePtr lhs = parse_prod_type();
        if (!lhs) return nullptr;
        if (eat(Tok::Plus)) {
            TypePtr rhs = parse_sum_type();
            if (!rhs) return nullptr;
            return Type::sum(lhs, rhs);
        }
        return lhs;
    }

    TypePtr parse_prod_type() {
        TypePtr lhs = parse_type_atom();
        if (!lhs) return nullptr;
        if (eat(Tok::Star)) {
            TypePtr rhs = parse_prod_type();
            if (!rhs) return nullptr;
            return Type::prod(lhs, rhs);
        }
        return lhs;
    }

    TypePtr parse_type_atom() {
        if (eat(Tok::KwBool)) return Type::boolean();
        if (eat(Tok::KwName)) return Type::name();
        if (eat(Tok::KwM)) {
            TypePtr inner = parse_type_atom();
            if (!inner) return nullptr;
            return Type::modal(inner);
        }
        if (eat(Tok::LParen)) {
            TypePtr inner = parse_type();
            if (!inner) return nullptr;
            if (!expect(Tok::RParen, ")")) return nullptr;
            return inner;
        }
        return fail({"type"}, "expected a type");
    }

    // ---- terms -----------------------------------------------------------

    bool binder_name(std::string& out) {
        if (peek(Tok::Ident)) {
            out = cur().text;
            ++at;
            return true;
        }
        if (eat(Tok::Underscore)) {
            out = "_";
            return true;
        }
        fail({"identifier"});
        return false;
    }

    TermPtr parse_term_top() { return parse_low(); }

    TermPtr parse_low() {
        size_t lo = at;
        if (peek(Tok::KwFn)) return parse_fn(lo);
        if (peek(Tok::KwLet)) return parse_let(lo);
        if (peek(Tok::KwCase)) return parse_case(lo);
        if (peek(Tok::KwSample) || peek(Tok::KwSend)) return parse_sample(lo);
        if (peek(Tok::KwIf)) return parse_if(lo);
        return parse_tensor_term();
    }

    TermPtr parse_fn(size_t lo) {
        eat(Tok::KwFn);
        std::string x;
        if (!binder_name(x)) return nullptr;
        if (!expect(Tok::Colon, ":")) return nullptr;
        TypePtr ann = parse_type();
        if (!ann) return nullptr;
        if (!expect(Tok::Arrow, "=>")) return nullptr;
        TermPtr body = parse_low();
        if (!body) return nullptr;
        return Term::lam(x, ann, body, layer, span_from(lo));
    }

    TermPtr parse_let(size_t lo) {
        eat(Tok::KwLet);
        std::string x;
        if (!binder_name(x)) return nullptr;
        if (eat(Tok::Otimes)) {
            std::string y;
            if (!binder_name(y)) return nullptr;
            if (!expect(Tok::Eq, "=")) return nullptr;
            TermPtr subj = parse_low();
            if (!subj) return nullptr;
            if (!expect(Tok::KwIn, "in")) return nullptr;
            TermPtr body = parse_low();
            if (!body) return nullptr;
            return Term::let_tensor(x, y, subj, body, layer, span_from(lo));
        }
        if (!expect(Tok::Eq, "=")) return nullptr;
        TermPtr bound = parse_low();
        if (!bound) return nullptr;
        if (!expect(Tok::KwIn, "in")) return nullptr;
        TermPtr body = parse_low();
        if (!body) return nullptr;
        return Term::let(x, bound, body, layer, span_from(lo));
    }

    TermPtr parse_case(size_t lo) {
        eat(Tok::KwCase);
        TermPtr scrut = parse_low();
        if (!scrut) return nullptr;
        if (!expect(Tok::KwOf, "of")) return nullptr;
        if (!expect(Tok::KwInl, "inl")) return nullptr;
        std::string x;
        if (!binder_name(x)) return nullptr;
        if (!expect(Tok::Arrow, "=>")) return nullptr;
        TermPtr u1 = parse_low();
        if (!u1) return nullptr;
        if (!expect(Tok::Bar, "|")) return nullptr;
        if (!expect(Tok::KwInr, "inr")) return nullptr;
        std::string y;
        if (!binder_name(y)) return nullptr;
        if (!expect(Tok::Arrow, "=>")) return nullptr;
        TermPtr u2 = parse_low();
        if (!u2) return nullptr;
        return Term::case_of(scrut, x, u1, y, u2, layer, span_from(lo));
    }

    // `if t then u else v` is sugar for a case with wildcard binders.
    TermPtr parse_if(size_t lo) {
        eat(Tok::KwIf);
        TermPtr scrut = parse_low();
        if (!scrut) return nullptr;
        if (!expect(Tok::KwThen, "then")) return nullptr;
        TermPtr u1 = parse_low();
        if (!u1) return nullptr;
        if (!expect(Tok::KwElse, "else")) return nullptr;
        TermPtr u2 = parse_low();
        if (!u2) return nullptr;
        return Term::case_of(scrut, "_", u1, "_", u2, layer, span_from(lo));
    }

    TermPtr parse_sample(size_t lo) {
        ++at;  // sample / send
        std::vector<TermPtr> bound;
        if (!peek(Tok::KwAs)) {
            // The bound terms are I-layer computations.
            do {
                TermPtr t = parse_low();
                if (!t) return nullptr;
                bound.push_back(t);
            } while (eat(Tok::Comma));
        }
        if (!expect(Tok::KwAs, "as")) return nullptr;
        std::vector<std::string> names;
        if (!peek(Tok::KwIn)) {
            do {
                std::string x;
                if (!binder_name(x)) return nullptr;
                names.push_back(x);
            } while (eat(Tok::Comma));
        }
        if (!expect(Tok::KwIn, "in")) return nullptr;
        if (names.size() != bound.size()) {
            fail({}, "sample binds " + std::to_string(bound.size()) + " terms to " +
                         std::to_string(names.size()) + " names");
            return nullptr;
        }
        Layer saved = layer;
        layer = Layer::NI;  // sample bodies live in the sharing layer
        TermPtr body = parse_low();
        layer = saved;
        if (!body) return nullptr;
        return Term::sample(std::move(bound), std::move(names), body, saved, span_from(lo));
    }

    TermPtr parse_tensor_term() {
        size_t lo = at;
        TermPtr lhs = parse_app();
        if (!lhs) return nullptr;
        while (eat(Tok::Otimes)) {
            TermPtr rhs = parse_app();
            if (!rhs) return nullptr;
            lhs = Term::pair_tensor(lhs, rhs, layer, span_from(lo));
        }
        return lhs;
    }

    TermPtr parse_app() {
        size_t lo = at;
        TermPtr head = parse_unary();
        if (!head) return nullptr;
        while (starts_unary()) {
            TermPtr arg = parse_unary();
            if (!arg) return nullptr;
            head = Term::app(head, arg, layer, span_from(lo));
        }
        return head;
    }

    bool starts_unary() const {
        switch (cur().kind) {
            case Tok::Ident:
            case Tok::KwTrue:
            case Tok::KwFalse:
            case Tok::Prim:
            case Tok::KwFst:
            case Tok::KwSnd:
            case Tok::KwInl:
            case Tok::KwInr:
            case Tok::LParen:
                return true;
            default:
                return false;
        }
    }

    TermPtr parse_unary() {
        size_t lo = at;
        if (eat(Tok::KwFst)) {
            TermPtr t = parse_unary();
            if (!t) return nullptr;
            return Term::proj(1, t, layer, span_from(lo));
        }
        if (eat(Tok::KwSnd)) {
            TermPtr t = parse_unary();
            if (!t) return nullptr;
            return Term::proj(2, t, layer, span_from(lo));
        }
        if (peek(Tok::KwInl) || peek(Tok::KwInr)) {
            int idx = peek(Tok::KwInl) ? 1 : 2;
            ++at;
            TypePtr other;
            if (eat(Tok::LBrack)) {
                other = parse_type();
                if (!other) return nullptr;
                if (!expect(Tok::RBrack, "]")) return nullptr;
            }
            TermPtr t = parse_unary();
            if (!t) return nullptr;
            return Term::inj(idx, t, other, layer, span_from(lo));
        }
        if (peek(Tok::Prim)) {
            std::string op = cur().text;
            ++at;
            if (op == "coin" || op == "amb" || op == "fresh")
                return Term::prim(op, {}, layer, span_from(lo));
            TermPtr arg = parse_unary();
            if (!arg) return nullptr;
            return Term::prim(op, {arg}, layer, span_from(lo));
        }
        return parse_atom();
    }

    TermPtr parse_atom() {
        size_t lo = at;
        if (eat(Tok::KwTrue)) return Term::constant(true, layer, span_from(lo));
        if (eat(Tok::KwFalse)) return Term::constant(false, layer, span_from(lo));
        if (peek(Tok::Ident)) {
            std::string n = cur().text;
            ++at;
            return Term::var(std::move(n), layer, span_from(lo));
        }
        if (eat(Tok::LParen)) {
            TermPtr first = parse_low();
            if (!first) return nullptr;
            if (eat(Tok::Comma)) {
                TermPtr second = parse_low();
                if (!second) return nullptr;
                if (!expect(Tok::RParen, ")")) return nullptr;
                return Term::pair_shared(first, second, layer, span_from(lo));
            }
            if (!expect(Tok::RParen, ")")) return nullptr;
            return first;
        }
        return fail({"term"}, "expected a term");
    }

    // ---- files -----------------------------------------------------------

    std::optional<SourceFile> parse_file() {
        SourceFile f;
        if (!peek(Tok::Header)) {
            fail({"#lang header"}, "expected '#lang ini1' or '#lang ini2 layer=...'");
            return std::nullopt;
        }
        std::string h = cur().text;
        ++at;
        std::istringstream hs(h);
        std::string tag, lang, layer_kv;
        hs >> tag >> lang >> layer_kv;
        if (tag != "#lang" || (lang != "ini1" && lang != "ini2")) {
            err = ParseError{toks[at - 1].span, {"#lang ini1", "#lang ini2"}, "bad header"};
            return std::nullopt;
        }
        if (lang == "ini1") {
            f.language = Language::Ini1;
            f.layer = Layer::Ini;
        } else {
            f.language = Language::Ini2;
            if (layer_kv == "layer=I")
                f.layer = Layer::I;
            else if (layer_kv == "layer=NI")
                f.layer = Layer::NI;
            else {
                err = ParseError{toks[at - 1].span, {"layer=I", "layer=NI"}, "bad header"};
                return std::nullopt;
            }
        }
        layer = f.layer;

        while (eat(Tok::KwDef)) {
            Decl d;
            if (!binder_name(d.name)) return std::nullopt;
            if (!expect(Tok::Colon, ":")) return std::nullopt;
            d.type = parse_type();
            if (!d.type) return std::nullopt;
            if (!expect(Tok::Eq, "=")) return std::nullopt;
            d.body = parse_low();
            if (!d.body) return std::nullopt;
            if (!expect(Tok::Semi, ";")) return std::nullopt;
            for (const auto& prev : f.decls)
                if (prev.name == d.name) {
                    err = ParseError{cur().span, {}, "duplicate declaration '" + d.name + "'"};
                    return std::nullopt;
                }
            f.decls.push_back(std::move(d));
        }

        TermPtr main = parse_low();
        if (!main) return std::nullopt;
        if (!peek(Tok::End)) {
            fail({"end of file"}, "trailing input after main term");
            return std::nullopt;
        }

        // Declarations are closed definitions; inline them into later decls
        // and into the main term.
        std::vector<Decl> resolved;
        for (auto& d : f.decls) {
            TermPtr b = d.body;
            for (const auto& prev : resolved) b = ast::substitute(b, prev.name, prev.body);
            resolved.push_back(Decl{d.name, d.type, b});
        }
        for (const auto& d : resolved) main = ast::substitute(main, d.name, d.body);
        f.decls = std::move(resolved);
        f.main = main;
        return f;
    }
};

}  // namespace

ParseResult parse_source(const std::string& text) {
    Lexer lx(text);
    lx.run();
    if (lx.err) return ParseResult{std::nullopt, lx.err};
    Parser p{std::move(lx.out)};
    auto f = p.parse_file();
    if (!f) {
        if (!p.err) p.err = ParseError{Span{0, 0}, {}, "parse failed"};
        return ParseResult{std::nullopt, p.err};
    }
    return ParseResult{std::move(f), std::nullopt};
}

ParseResult parse_term(const std::string& text, Layer layer) {
    Lexer lx(text);
    lx.run();
    if (lx.err) return ParseResult{std::nullopt, lx.err};
    Parser p{std::move(lx.out)};
    p.layer = layer;
    TermPtr t = p.parse_term_top();
    if (!t || !p.peek(Tok::End)) {
        if (!p.err) p.err = ParseError{p.cur().span, {"end of input"}, "trailing input"};
        return ParseResult{std::nullopt, p.err};
    }
    SourceFile f;
    f.language = layer == Layer::Ini ? Language::Ini1 : Language::Ini2;
    f.layer = layer;
    f.main = t;
    return ParseResult{std::move(f), std::nullopt};
}

// ---------------------------------------------------------------------------
// Pretty printer
// ---------------------------------------------------------------------------

namespace {

// 0: binder forms, 1: (x), 2: application, 3: unary prefix, 4: atoms.
int term_prec(const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Lam:
        case TermKind::Let:
        case TermKind::LetTensor:
        case TermKind::Case:
        case TermKind::Sample:
            return 0;
        case TermKind::PairTensor:
            return 1;
        case TermKind::App:
            return 2;
        case TermKind::Proj:
        case TermKind::Inj:
            return 3;
        case TermKind::Prim:
            return t->kids.empty() ? 4 : 3;
        default:
            return 4;
    }
}

void print_term(const TermPtr& t, int min_prec, std::string& out) {
    const int p = term_prec(t);
    const bool parens = p < min_prec;
    if (parens) out += "(";
    switch (t->kind) {
        case TermKind::Var:
            out += t->name;
            break;
        case TermKind::Const:
            out += t->bval ? "true" : "false";
            break;
        case TermKind::Prim:
            out += t->name;
            if (!t->kids.empty()) {
                out += " ";
                print_term(t->kids[0], 4, out);
            }
            break;
        case TermKind::PairShared:
            out += "(";
            print_term(t->kids[0], 0, out);
            out += ", ";
            print_term(t->kids[1], 0, out);
            out += ")";
            break;
        case TermKind::Proj:
            out += t->index == 1 ? "fst " : "snd ";
            print_term(t->kids[0], 4, out);
            break;
        case TermKind::PairTensor:
            print_term(t->kids[0], 1, out);
            out += " (x) ";
            print_term(t->kids[1], 2, out);
            break;
        case TermKind::LetTensor:
            out += "let " + t->name + " (x) " + t->name2 + " = ";
            print_term(t->kids[0], 0, out);
            out += " in ";
            print_term(t->kids[1], 0, out);
            break;
        case TermKind::Inj:
            out += t->index == 1 ? "inl" : "inr";
            if (t->annot) out += "[" + ast::type_to_string(t->annot) + "]";
            out += " ";
            print_term(t->kids[0], 4, out);
            break;
        case TermKind::Case:
            if (t->name == "_" && t->name2 == "_") {
                out += "if ";
                print_term(t->kids[0], 0, out);
                out += " then ";
                print_term(t->kids[1], 0, out);
                out += " else ";
                print_term(t->kids[2], 0, out);
            } else {
                out += "case ";
                print_term(t->kids[0], 0, out);
                out += " of inl " + t->name + " => ";
                print_term(t->kids[1], 0, out);
                out += " | inr " + t->name2 + " => ";
                print_term(t->kids[2], 0, out);
            }
            break;
        case TermKind::Lam:
            out += "fn " + t->name + ": " + ast::type_to_string(t->annot) + " => ";
            print_term(t->kids[0], 0, out);
            break;
        case TermKind::App:
            print_term(t->kids[0], 2, out);
            out += " ";
            print_term(t->kids[1], 3, out);
            break;
        case TermKind::Let:
            out += "let " + t->name + " = ";
            print_term(t->kids[0], 0, out);
            out += " in ";
            print_term(t->kids[1], 0, out);
            break;
        case TermKind::Sample: {
            out += "sample ";
            const size_t n = t->binders.size();
            for (size_t i = 0; i < n; ++i) {
                if (i) out += ", ";
                // Binder forms get parens so the comma / `as` is not
                // swallowed by their body.
                print_term(t->kids[i], 1, out);
            }
            out += n ? " as " : "as";
            for (size_t i = 0; i < n; ++i) {
                if (i) out += ", ";
                out += t->binders[i];
            }
            out += " in ";
            print_term(t->kids[n], 0, out);
            break;
        }
    }
    if (parens) out += ")";
}

}  // namespace

std::string term_to_string(const ast::TermPtr& t) {
    std::string out;
    print_term(t, 0, out);
    return out;
}

std::string print_source(const SourceFile& f) {
    std::string out;
    if (f.language == Language::Ini1)
        out += "#lang ini1\n";
    else
        out += std::string("#lang ini2 layer=") + (f.layer == Layer::I ? "I" : "NI") + "\n";
    for (const auto& d : f.decls)
        out += "def " + d.name + " : " + ast::type_to_string(d.type) + " = " +
               term_to_string(d.body) + ";\n";
    out += term_to_string(f.main);
    out += "\n";
    return out;
}

std::string ParseError::render(const std::string& source) const {
    // Translate the byte offset to a line:column pair.
    uint32_t line = 1, col = 1;
    for (uint32_t i = 0; i < span.lo && i < source.size(); ++i) {
        if (source[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    std::ostringstream os;
    os << "parse error at " << line << ":" << col << ": " << message;
    if (!expected.empty()) {
        os << " (expected ";
        for (size_t i = 0; i < expected.size(); ++i) {
            if (i) os << ", ";
            os << expected[i];
        }
        os << ")";
    }
    return os.str();
}

}  // namespace ini::parse
