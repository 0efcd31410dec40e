#include "ini/ast.hpp"

#include <algorithm>
#include <cassert>
#include <map>

namespace ini::ast {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

static TypePtr mk_type(TypeKind k, TypePtr a = nullptr, TypePtr b = nullptr) {
    auto t = std::make_shared<Type>();
    t->kind = k;
    t->a = std::move(a);
    t->b = std::move(b);
    return t;
}

TypePtr Type::boolean() {
    static const TypePtr t = mk_type(TypeKind::Bool);
    return t;
}
TypePtr Type::name() {
    static const TypePtr t = mk_type(TypeKind::Name);
    return t;
}
TypePtr Type::prod(TypePtr a, TypePtr b) { return mk_type(TypeKind::Prod, std::move(a), std::move(b)); }
TypePtr Type::sum(TypePtr a, TypePtr b) { return mk_type(TypeKind::Sum, std::move(a), std::move(b)); }
TypePtr Type::tensor(TypePtr a, TypePtr b) { return mk_type(TypeKind::Tensor, std::move(a), std::move(b)); }
TypePtr Type::oplus(TypePtr a, TypePtr b) { return mk_type(TypeKind::Oplus, std::move(a), std::move(b)); }
TypePtr Type::lolli(TypePtr a, TypePtr b) { return mk_type(TypeKind::Lolli, std::move(a), std::move(b)); }
TypePtr Type::modal(TypePtr a) { return mk_type(TypeKind::Modal, std::move(a)); }

bool type_eq(const TypePtr& a, const TypePtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case TypeKind::Bool:
        case TypeKind::Name:
            return true;
        case TypeKind::Modal:
            return type_eq(a->a, b->a);
        default:
            return type_eq(a->a, b->a) && type_eq(a->b, b->b);
    }
}

namespace {

// Binding strength, loosest first. Binary connectives are printed
// right-associatively; a child on the left at the same level gets parens.
int type_prec(TypeKind k) {
    switch (k) {
        case TypeKind::Lolli: return 0;
        case TypeKind::Oplus: return 1;
        case TypeKind::Tensor: return 2;
        case TypeKind::Sum: return 3;
        case TypeKind::Prod: return 4;
        case TypeKind::Modal: return 5;
        default: return 6;
    }
}

void type_print(const TypePtr& t, int parent_prec, bool left_child, std::string& out) {
    const int p = type_prec(t->kind);
    const bool parens = p < parent_prec || (p == parent_prec && left_child);
    if (parens) out += "(";
    switch (t->kind) {
        case TypeKind::Bool: out += "Bool"; break;
        case TypeKind::Name: out += "Name"; break;
        case TypeKind::Modal:
            out += "M ";
            type_print(t->a, type_prec(TypeKind::Modal) + 1, false, out);
            break;
        case TypeKind::Prod:
            type_print(t->a, p, true, out);
            out += " * ";
            type_print(t->b, p, false, out);
            break;
        case TypeKind::Sum:
            type_print(t->a, p, true, out);
            out += " + ";
            type_print(t->b, p, false, out);
            break;
        case TypeKind::Tensor:
            type_print(t->a, p, true, out);
            out += " (x) ";
            type_print(t->b, p, false, out);
            break;
        case TypeKind::Oplus:
            type_print(t->a, p, true, out);
            out += " (+) ";
            type_print(t->b, p, false, out);
            break;
        case TypeKind::Lolli:
            type_print(t->a, p + 1, true, out);
            out += " -o ";
            type_print(t->b, p, false, out);
            break;
    }
    if (parens) out += ")";
}

}  // namespace

std::string type_to_string(const TypePtr& t) {
    std::string out;
    type_print(t, 0, false, out);
    return out;
}

bool is_ini_type(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Bool: return true;
        case TypeKind::Prod:
        case TypeKind::Tensor:
        case TypeKind::Lolli:
            return is_ini_type(t->a) && is_ini_type(t->b);
        default: return false;
    }
}

bool is_ni_type(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Bool:
        case TypeKind::Name:
            return true;
        case TypeKind::Prod:
        case TypeKind::Sum:
            return is_ni_type(t->a) && is_ni_type(t->b);
        default: return false;
    }
}

bool is_i_type(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Modal: return is_ni_type(t->a);
        case TypeKind::Tensor:
        case TypeKind::Oplus:
        case TypeKind::Lolli:
            return is_i_type(t->a) && is_i_type(t->b);
        default: return false;
    }
}

// ---------------------------------------------------------------------------
// Term constructors
// ---------------------------------------------------------------------------

static std::shared_ptr<Term> mk_term(TermKind k, Layer l, Span s) {
    auto t = std::make_shared<Term>();
    t->kind = k;
    t->layer = l;
    t->span = s;
    return t;
}

TermPtr Term::var(std::string n, Layer l, Span s) {
    auto t = mk_term(TermKind::Var, l, s);
    t->name = std::move(n);
    return t;
}

TermPtr Term::constant(bool v, Layer l, Span s) {
    auto t = mk_term(TermKind::Const, l, s);
    t->bval = v;
    return t;
}

TermPtr Term::prim(std::string op, std::vector<TermPtr> args, Layer l, Span s) {
    auto t = mk_term(TermKind::Prim, l, s);
    t->name = std::move(op);
    t->kids = std::move(args);
    return t;
}

TermPtr Term::pair_shared(TermPtr a, TermPtr b, Layer l, Span s) {
    auto t = mk_term(TermKind::PairShared, l, s);
    t->kids = {std::move(a), std::move(b)};
    return t;
}

TermPtr Term::proj(int i, TermPtr a, Layer l, Span s) {
    assert(i == 1 || i == 2);
    auto t = mk_term(TermKind::Proj, l, s);
    t->index = i;
    t->kids = {std::move(a)};
    return t;
}

TermPtr Term::pair_tensor(TermPtr a, TermPtr b, Layer l, Span s) {
    auto t = mk_term(TermKind::PairTensor, l, s);
    t->kids = {std::move(a), std::move(b)};
    return t;
}

TermPtr Term::let_tensor(std::string x, std::string y, TermPtr a, TermPtr b, Layer l, Span s) {
    auto t = mk_term(TermKind::LetTensor, l, s);
    t->name = std::move(x);
    t->name2 = std::move(y);
    t->kids = {std::move(a), std::move(b)};
    return t;
}

TermPtr Term::inj(int i, TermPtr a, TypePtr other, Layer l, Span s) {
    assert(i == 1 || i == 2);
    auto t = mk_term(TermKind::Inj, l, s);
    t->index = i;
    t->annot = std::move(other);
    t->kids = {std::move(a)};
    return t;
}

TermPtr Term::case_of(TermPtr scrut, std::string x, TermPtr u1, std::string y, TermPtr u2,
                      Layer l, Span s) {
    auto t = mk_term(TermKind::Case, l, s);
    t->name = std::move(x);
    t->name2 = std::move(y);
    t->kids = {std::move(scrut), std::move(u1), std::move(u2)};
    return t;
}

TermPtr Term::lam(std::string x, TypePtr ann, TermPtr body, Layer l, Span s) {
    auto t = mk_term(TermKind::Lam, l, s);
    t->name = std::move(x);
    t->annot = std::move(ann);
    t->kids = {std::move(body)};
    return t;
}

TermPtr Term::app(TermPtr f, TermPtr a, Layer l, Span s) {
    auto t = mk_term(TermKind::App, l, s);
    t->kids = {std::move(f), std::move(a)};
    return t;
}

TermPtr Term::let(std::string x, TermPtr a, TermPtr b, Layer l, Span s) {
    auto t = mk_term(TermKind::Let, l, s);
    t->name = std::move(x);
    t->kids = {std::move(a), std::move(b)};
    return t;
}

TermPtr Term::sample(std::vector<TermPtr> bound, std::vector<std::string> names, TermPtr body,
                     Layer l, Span s) {
    assert(bound.size() == names.size());
    auto t = mk_term(TermKind::Sample, l, s);
    t->kids = std::move(bound);
    t->kids.push_back(std::move(body));
    t->binders = std::move(names);
    return t;
}

// ---------------------------------------------------------------------------
// Free variables
// ---------------------------------------------------------------------------

static bool is_wildcard(const std::string& n) { return n == "_"; }

static void fv(const TermPtr& t, std::set<std::string>& bound, std::set<std::string>& out) {
    switch (t->kind) {
        case TermKind::Var:
            if (!bound.count(t->name)) out.insert(t->name);
            return;
        case TermKind::Const:
            return;
        case TermKind::Lam: {
            bool added = !is_wildcard(t->name) && bound.insert(t->name).second;
            fv(t->kids[0], bound, out);
            if (added) bound.erase(t->name);
            return;
        }
        case TermKind::Let: {
            fv(t->kids[0], bound, out);
            bool added = !is_wildcard(t->name) && bound.insert(t->name).second;
            fv(t->kids[1], bound, out);
            if (added) bound.erase(t->name);
            return;
        }
        case TermKind::LetTensor: {
            fv(t->kids[0], bound, out);
            bool a1 = !is_wildcard(t->name) && bound.insert(t->name).second;
            bool a2 = !is_wildcard(t->name2) && bound.insert(t->name2).second;
            fv(t->kids[1], bound, out);
            if (a1) bound.erase(t->name);
            if (a2) bound.erase(t->name2);
            return;
        }
        case TermKind::Case: {
            fv(t->kids[0], bound, out);
            bool a1 = !is_wildcard(t->name) && bound.insert(t->name).second;
            fv(t->kids[1], bound, out);
            if (a1) bound.erase(t->name);
            bool a2 = !is_wildcard(t->name2) && bound.insert(t->name2).second;
            fv(t->kids[2], bound, out);
            if (a2) bound.erase(t->name2);
            return;
        }
        case TermKind::Sample: {
            const size_t n = t->binders.size();
            for (size_t i = 0; i < n; ++i) fv(t->kids[i], bound, out);
            std::vector<std::string> added;
            for (const auto& x : t->binders)
                if (!is_wildcard(x) && bound.insert(x).second) added.push_back(x);
            fv(t->kids[n], bound, out);
            for (const auto& x : added) bound.erase(x);
            return;
        }
        default:
            for (const auto& k : t->kids) fv(k, bound, out);
            return;
    }
}

std::set<std::string> free_vars(const TermPtr& t) {
    std::set<std::string> bound, out;
    fv(t, bound, out);
    return out;
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
    if (!taken.count(base)) return base;
    for (int i = 1;; ++i) {
        std::string cand = base + "'" + (i == 1 ? "" : std::to_string(i));
        if (!taken.count(cand)) return cand;
    }
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

namespace {

struct Subst {
    const std::string& x;
    const TermPtr& s;
    std::set<std::string> fv_s;

    // Renames binder `b` (and its occurrences in `body`) when it would
    // capture a free variable of s. Returns the binder to use.
    std::string avoid(const std::string& b, TermPtr& body) {
        if (is_wildcard(b) || !fv_s.count(b)) return b;
        auto taken = free_vars(body);
        taken.insert(fv_s.begin(), fv_s.end());
        taken.insert(x);
        std::string nb = fresh_name(b, taken);
        body = substitute(body, b, Term::var(nb, body->layer, body->span));
        return nb;
    }

    TermPtr go(const TermPtr& t) {
        switch (t->kind) {
            case TermKind::Var:
                return t->name == x ? s : t;
            case TermKind::Const:
                return t;
            case TermKind::Lam: {
                if (t->name == x) return t;  // shadowed
                TermPtr body = t->kids[0];
                std::string b = avoid(t->name, body);
                return Term::lam(b, t->annot, go(body), t->layer, t->span);
            }
            case TermKind::Let: {
                TermPtr bound = go(t->kids[0]);
                if (t->name == x) return Term::let(t->name, bound, t->kids[1], t->layer, t->span);
                TermPtr body = t->kids[1];
                std::string b = avoid(t->name, body);
                return Term::let(b, bound, go(body), t->layer, t->span);
            }
            case TermKind::LetTensor: {
                TermPtr subj = go(t->kids[0]);
                if (t->name == x || t->name2 == x)
                    return Term::let_tensor(t->name, t->name2, subj, t->kids[1], t->layer, t->span);
                TermPtr body = t->kids[1];
                std::string b1 = avoid(t->name, body);
                std::string b2 = avoid(t->name2, body);
                return Term::let_tensor(b1, b2, subj, go(body), t->layer, t->span);
            }
            case TermKind::Case: {
                TermPtr scrut = go(t->kids[0]);
                std::string b1 = t->name;
                TermPtr u1 = t->kids[1];
                if (b1 != x) {
                    b1 = avoid(b1, u1);
                    u1 = go(u1);
                }
                std::string b2 = t->name2;
                TermPtr u2 = t->kids[2];
                if (b2 != x) {
                    b2 = avoid(b2, u2);
                    u2 = go(u2);
                }
                return Term::case_of(scrut, b1, u1, b2, u2, t->layer, t->span);
            }
            case TermKind::Sample: {
                const size_t n = t->binders.size();
                std::vector<TermPtr> bound;
                bound.reserve(n);
                for (size_t i = 0; i < n; ++i) bound.push_back(go(t->kids[i]));
                bool shadowed = false;
                for (const auto& b : t->binders) shadowed |= (b == x);
                TermPtr body = t->kids[n];
                std::vector<std::string> names = t->binders;
                if (!shadowed) {
                    for (auto& b : names) b = avoid(b, body);
                    body = go(body);
                }
                return Term::sample(std::move(bound), std::move(names), body, t->layer, t->span);
            }
            default: {
                auto r = std::make_shared<Term>(*t);
                for (auto& k : r->kids) k = go(k);
                return r;
            }
        }
    }

};

}  // namespace

TermPtr substitute(const TermPtr& t, const std::string& x, const TermPtr& s) {
    Subst st{x, s, free_vars(s)};
    return st.go(t);
}

// ---------------------------------------------------------------------------
// Alpha equality
// ---------------------------------------------------------------------------

namespace {

// Maps from binder names to shared de-Bruijn-style levels.
struct AlphaCtx {
    std::map<std::string, int> left, right;
    int next = 0;

    bool var_eq(const std::string& a, const std::string& b) const {
        auto ia = left.find(a);
        auto ib = right.find(b);
        if (ia == left.end() && ib == right.end()) return a == b;  // both free
        if (ia == left.end() || ib == right.end()) return false;
        return ia->second == ib->second;
    }
};

bool aeq(const TermPtr& t, const TermPtr& u, AlphaCtx& ctx);

bool aeq_under(const TermPtr& t, const TermPtr& u, AlphaCtx& ctx,
               const std::vector<std::pair<std::string, std::string>>& binders) {
    AlphaCtx inner = ctx;
    for (const auto& [a, b] : binders) {
        if (is_wildcard(a) != is_wildcard(b)) return false;
        if (is_wildcard(a)) continue;
        inner.left[a] = inner.next;
        inner.right[b] = inner.next;
        ++inner.next;
    }
    return aeq(t, u, inner);
}

bool aeq(const TermPtr& t, const TermPtr& u, AlphaCtx& ctx) {
    if (t->kind != u->kind) return false;
    switch (t->kind) {
        case TermKind::Var:
            return ctx.var_eq(t->name, u->name);
        case TermKind::Const:
            return t->bval == u->bval;
        case TermKind::Prim:
            if (t->name != u->name || t->kids.size() != u->kids.size()) return false;
            for (size_t i = 0; i < t->kids.size(); ++i)
                if (!aeq(t->kids[i], u->kids[i], ctx)) return false;
            return true;
        case TermKind::Proj:
            return t->index == u->index && aeq(t->kids[0], u->kids[0], ctx);
        case TermKind::Inj:
            if (t->index != u->index) return false;
            if ((t->annot == nullptr) != (u->annot == nullptr)) return false;
            if (t->annot && !type_eq(t->annot, u->annot)) return false;
            return aeq(t->kids[0], u->kids[0], ctx);
        case TermKind::PairShared:
        case TermKind::PairTensor:
        case TermKind::App:
            return aeq(t->kids[0], u->kids[0], ctx) && aeq(t->kids[1], u->kids[1], ctx);
        case TermKind::Lam:
            if (!type_eq(t->annot, u->annot)) return false;
            return aeq_under(t->kids[0], u->kids[0], ctx, {{t->name, u->name}});
        case TermKind::Let:
            return aeq(t->kids[0], u->kids[0], ctx) &&
                   aeq_under(t->kids[1], u->kids[1], ctx, {{t->name, u->name}});
        case TermKind::LetTensor:
            return aeq(t->kids[0], u->kids[0], ctx) &&
                   aeq_under(t->kids[1], u->kids[1], ctx,
                             {{t->name, u->name}, {t->name2, u->name2}});
        case TermKind::Case:
            return aeq(t->kids[0], u->kids[0], ctx) &&
                   aeq_under(t->kids[1], u->kids[1], ctx, {{t->name, u->name}}) &&
                   aeq_under(t->kids[2], u->kids[2], ctx, {{t->name2, u->name2}});
        case TermKind::Sample: {
            if (t->binders.size() != u->binders.size()) return false;
            const size_t n = t->binders.size();
            for (size_t i = 0; i < n; ++i)
                if (!aeq(t->kids[i], u->kids[i], ctx)) return false;
            std::vector<std::pair<std::string, std::string>> bs;
            for (size_t i = 0; i < n; ++i) bs.emplace_back(t->binders[i], u->binders[i]);
            return aeq_under(t->kids[n], u->kids[n], ctx, bs);
        }
    }
    return false;
}

}  // namespace

bool alpha_eq(const TermPtr& t, const TermPtr& u) {
    AlphaCtx ctx;
    return aeq(t, u, ctx);
}

}  // namespace ini::ast
