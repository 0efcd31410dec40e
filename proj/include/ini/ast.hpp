// Abstract syntax shared by both calculi: the one-level affine language
// (lang "ini1") and the stratified two-level language (lang "ini2").
//
// There is a single Term node set with per-node layer tags rather than three
// separate term types; the grammars overlap almost entirely and the layer
// discipline is enforced by the typechecker, not by construction.

#ifndef INI_AST_HPP
#define INI_AST_HPP

#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace ini::ast {

/// Half-open byte range [lo, hi) into the source text.
struct Span {
    uint32_t lo = 0;
    uint32_t hi = 0;

    bool operator==(const Span&) const = default;
};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind {
    Bool,    // base type, all layers
    Name,    // generated-symbol type, NI layer under the name model
    Prod,    // sharing product  *      (ini1 and NI)
    Sum,     // sharing sum      +      (NI)
    Tensor,  // separating product (x)  (ini1 and I)
    Oplus,   // separating sum   (+)    (I)
    Lolli,   // linear arrow     -o     (ini1 and I)
    Modal,   // M T : NI computation imported into the I layer
};

struct Type;
using TypePtr = std::shared_ptr<const Type>;

struct Type {
    TypeKind kind;
    TypePtr a;  // left child / Modal payload
    TypePtr b;  // right child

    static TypePtr boolean();
    static TypePtr name();
    static TypePtr prod(TypePtr a, TypePtr b);
    static TypePtr sum(TypePtr a, TypePtr b);
    static TypePtr tensor(TypePtr a, TypePtr b);
    static TypePtr oplus(TypePtr a, TypePtr b);
    static TypePtr lolli(TypePtr a, TypePtr b);
    static TypePtr modal(TypePtr a);
};

bool type_eq(const TypePtr& a, const TypePtr& b);

/// Renders with the concrete-syntax operators: *, +, (x), (+), -o, M.
std::string type_to_string(const TypePtr& t);

/// Layer grammars. An ini1 type is Bool/*/(x)/-o; an NI type is
/// Bool/Name/*/+; an I type is built from M-leaves with (x)/(+)/-o.
bool is_ini_type(const TypePtr& t);
bool is_ni_type(const TypePtr& t);
bool is_i_type(const TypePtr& t);

// ---------------------------------------------------------------------------
// Terms
// ---------------------------------------------------------------------------

enum class Layer { Ini, NI, I };

enum class TermKind {
    Var,
    Const,       // boolean literal
    Prim,        // primitive op application: coin, amb, fresh, not, eqb, ...
    PairShared,  // (t, u)
    Proj,        // fst / snd
    PairTensor,  // t (x) u
    LetTensor,   // let x (x) y = t in u
    Inj,         // inl / inr, optional ascription of the other branch type
    Case,        // case t of inl x => u1 | inr y => u2
    Lam,         // fn x: T => t
    App,         // t u
    Let,         // let x = t in u
    Sample,      // sample t1, ..., tn as x1, ..., xn in M   (n >= 0)
};

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
    TermKind kind;
    Layer layer = Layer::Ini;
    Span span;

    std::string name;    // Var name; binder of Lam/Let/LetTensor; Case inl binder; Prim op name
    std::string name2;   // LetTensor second binder; Case inr binder
    bool bval = false;   // Const payload
    int index = 0;       // Proj / Inj index, 1 or 2
    TypePtr annot;       // Lam annotation; Inj other-branch ascription (may be null)

    // Children. Sample stores its n bound terms first and the body last;
    // `binders` then has exactly n entries.
    std::vector<TermPtr> kids;
    std::vector<std::string> binders;

    static TermPtr var(std::string n, Layer l = Layer::Ini, Span s = {});
    static TermPtr constant(bool v, Layer l = Layer::Ini, Span s = {});
    static TermPtr prim(std::string op, std::vector<TermPtr> args, Layer l, Span s = {});
    static TermPtr pair_shared(TermPtr t, TermPtr u, Layer l, Span s = {});
    static TermPtr proj(int i, TermPtr t, Layer l, Span s = {});
    static TermPtr pair_tensor(TermPtr t, TermPtr u, Layer l, Span s = {});
    static TermPtr let_tensor(std::string x, std::string y, TermPtr t, TermPtr u, Layer l,
                              Span s = {});
    static TermPtr inj(int i, TermPtr t, TypePtr other, Layer l, Span s = {});
    static TermPtr case_of(TermPtr t, std::string x, TermPtr u1, std::string y, TermPtr u2,
                           Layer l, Span s = {});
    static TermPtr lam(std::string x, TypePtr ann, TermPtr body, Layer l, Span s = {});
    static TermPtr app(TermPtr t, TermPtr u, Layer l, Span s = {});
    static TermPtr let(std::string x, TermPtr t, TermPtr u, Layer l, Span s = {});
    static TermPtr sample(std::vector<TermPtr> bound, std::vector<std::string> names,
                          TermPtr body, Layer l, Span s = {});
};

/// Free variables of t. The wildcard binder "_" never counts as a variable.
std::set<std::string> free_vars(const TermPtr& t);

/// Capture-avoiding substitution of s for free occurrences of x in t.
/// Bound variables are freshened when they would capture a free variable
/// of s. Layer tags and spans of untouched nodes are preserved.
TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s);

/// Equality up to consistent renaming of bound variables.
bool alpha_eq(const TermPtr& t, const TermPtr& u);

/// A variable name based on `base` that avoids everything in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace ini::ast

#endif
