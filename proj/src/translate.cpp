#include "ini/translate.hpp"

#include "ini/eval.hpp"
#include "ini/typecheck.hpp"

namespace ini::trans {

using ast::Layer;
using ast::Term;
using ast::TermKind;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;

namespace {

bool type_arrow_free(const TypePtr& t) {
    if (!t) return true;
    if (t->kind == TypeKind::Lolli) return false;
    return type_arrow_free(t->a) && type_arrow_free(t->b);
}

bool type_multiplicative(const TypePtr& t) {
    if (!t) return true;
    if (t->kind == TypeKind::Prod) return false;
    return type_multiplicative(t->a) && type_multiplicative(t->b);
}

}  // namespace

Classification classify_fragment(const TermPtr& t) {
    Classification c{true, true};
    std::function<void(const TermPtr&)> go = [&](const TermPtr& u) {
        switch (u->kind) {
            case TermKind::Lam:
                c.arrow_free = false;
                if (!type_multiplicative(u->annot)) c.multiplicative = false;
                break;
            case TermKind::App:
                c.arrow_free = false;
                break;
            case TermKind::PairShared:
            case TermKind::Proj:
                c.multiplicative = false;
                break;
            default:
                break;
        }
        if (u->annot && !type_arrow_free(u->annot)) c.arrow_free = false;
        for (const auto& k : u->kids) go(k);
    };
    go(t);
    return c;
}

// ---------------------------------------------------------------------------
// T: into the sharing layer
// ---------------------------------------------------------------------------

TypePtr translate_type_t(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Bool:
            return Type::boolean();
        case TypeKind::Prod:
        case TypeKind::Tensor:
            // Both products collapse onto the sharing product.
            return Type::prod(translate_type_t(t->a), translate_type_t(t->b));
        default:
            throw TranslationError("type " + ast::type_to_string(t) +
                                   " is outside the arrow-free fragment");
    }
}

namespace {

TermPtr t_go(const TermPtr& t) {
    const Layer L = Layer::NI;
    switch (t->kind) {
        case TermKind::Var:
            return Term::var(t->name, L, t->span);
        case TermKind::Const:
            return Term::constant(t->bval, L, t->span);
        case TermKind::Prim: {
            std::vector<TermPtr> args;
            for (const auto& k : t->kids) args.push_back(t_go(k));
            return Term::prim(t->name, std::move(args), L, t->span);
        }
        case TermKind::PairShared:
            return Term::pair_shared(t_go(t->kids[0]), t_go(t->kids[1]), L, t->span);
        case TermKind::PairTensor:
            // The separating pair maps onto the sharing pair.
            return Term::pair_shared(t_go(t->kids[0]), t_go(t->kids[1]), L, t->span);
        case TermKind::Proj:
            return Term::proj(t->index, t_go(t->kids[0]), L, t->span);
        case TermKind::Let:
            return Term::let(t->name, t_go(t->kids[0]), t_go(t->kids[1]), L, t->span);
        case TermKind::LetTensor: {
            // let x (x) y = t in u  ~>  let p = t in let x = fst p in
            // let y = snd p in u, with p fresh.
            TermPtr subj = t_go(t->kids[0]);
            TermPtr body = t_go(t->kids[1]);
            auto taken = ast::free_vars(t->kids[1]);
            taken.insert(t->name);
            taken.insert(t->name2);
            std::string p = ast::fresh_name("p", taken);
            TermPtr inner = Term::let(
                t->name, Term::proj(1, Term::var(p, L), L),
                Term::let(t->name2, Term::proj(2, Term::var(p, L), L), body, L), L);
            return Term::let(p, subj, inner, L, t->span);
        }
        default:
            throw TranslationError("term outside the arrow-free fragment");
    }
}

}  // namespace

TermPtr translate_t(const TermPtr& t) {
    if (!classify_fragment(t).arrow_free)
        throw TranslationError("term is outside the arrow-free fragment");
    return t_go(t);
}

// ---------------------------------------------------------------------------
// T': into the independent layer
// ---------------------------------------------------------------------------

TypePtr translate_type_tprime(const TypePtr& t) {
    switch (t->kind) {
        case TypeKind::Bool:
            return Type::modal(Type::boolean());
        case TypeKind::Tensor:
            return Type::tensor(translate_type_tprime(t->a), translate_type_tprime(t->b));
        case TypeKind::Lolli:
            return Type::lolli(translate_type_tprime(t->a), translate_type_tprime(t->b));
        default:
            throw TranslationError("type " + ast::type_to_string(t) +
                                   " is outside the multiplicative fragment");
    }
}

namespace {

// Wraps a sharing-layer leaf as a nullary sample, the only way the image
// can inhabit M Bool.
TermPtr boxed(TermPtr ni_leaf, ast::Span span) {
    return Term::sample({}, {}, std::move(ni_leaf), Layer::I, span);
}

struct TPrime {
    sem::ModelId model;
    // Binder types of the original term in scope, for desugaring let.
    std::vector<std::pair<std::string, TypePtr>> scope;

    TypePtr synth(const TermPtr& t) {
        types::UsageContext ctx;
        for (const auto& [n, ty] : scope) ctx.push(n, ty);
        auto r = types::check_ini(ctx, t, nullptr, model);
        if (!r.ok()) throw TranslationError("translation source does not typecheck");
        return r.type;
    }

    TermPtr go(const TermPtr& t) {
        const Layer L = Layer::I;
        switch (t->kind) {
            case TermKind::Var:
                return Term::var(t->name, L, t->span);
            case TermKind::Const:
                return boxed(Term::constant(t->bval, Layer::NI, t->span), t->span);
            case TermKind::Prim:
                if (t->name == "coin" && t->kids.empty())
                    return boxed(Term::prim("coin", {}, Layer::NI, t->span), t->span);
                throw TranslationError("primitive '" + t->name +
                                       "' has no multiplicative-fragment image");
            case TermKind::PairTensor:
                return Term::pair_tensor(go(t->kids[0]), go(t->kids[1]), L, t->span);
            case TermKind::LetTensor: {
                TermPtr subj = go(t->kids[0]);
                TypePtr subj_ty = synth(t->kids[0]);
                scope.emplace_back(t->name, subj_ty->a);
                scope.emplace_back(t->name2, subj_ty->b);
                TermPtr body = go(t->kids[1]);
                scope.pop_back();
                scope.pop_back();
                return Term::let_tensor(t->name, t->name2, subj, body, L, t->span);
            }
            case TermKind::Lam: {
                scope.emplace_back(t->name, t->annot);
                TermPtr body = go(t->kids[0]);
                scope.pop_back();
                return Term::lam(t->name, translate_type_tprime(t->annot), body, L, t->span);
            }
            case TermKind::App:
                return Term::app(go(t->kids[0]), go(t->kids[1]), L, t->span);
            case TermKind::Let: {
                // The independent layer has no let; expand the sugar
                // let x = t in u ~> (fn x: T => u) t first.
                TypePtr bound_ty = synth(t->kids[0]);
                TermPtr bound = go(t->kids[0]);
                scope.emplace_back(t->name, bound_ty);
                TermPtr body = go(t->kids[1]);
                scope.pop_back();
                TermPtr fn = Term::lam(t->name, translate_type_tprime(bound_ty), body, L, t->span);
                return Term::app(fn, bound, L, t->span);
            }
            default:
                throw TranslationError("term outside the multiplicative fragment");
        }
    }
};

}  // namespace

TermPtr translate_tprime(const TermPtr& t, sem::ModelId model) {
    if (!classify_fragment(t).multiplicative)
        throw TranslationError("term is outside the multiplicative fragment");
    TPrime tr{model, {}};
    return tr.go(t);
}

// ---------------------------------------------------------------------------
// Full abstraction
// ---------------------------------------------------------------------------

AbstractionReport check_full_abstraction(const sem::Model& m,
                                         const std::vector<AbstractionPair>& pairs, Fragment f) {
    AbstractionReport rep;
    for (const auto& pr : pairs) {
        sem::MonadicValue s1 = sem::eval_ini(m, {}, pr.t1);
        sem::MonadicValue s2 = sem::eval_ini(m, {}, pr.t2);
        bool source_equal = m.value_eq(s1, s2);

        bool target_equal;
        if (f == Fragment::ArrowFree) {
            sem::MonadicValue u1 = sem::eval_ni(m, {}, translate_t(pr.t1));
            sem::MonadicValue u2 = sem::eval_ni(m, {}, translate_t(pr.t2));
            target_equal = m.value_eq(u1, u2);
        } else {
            sem::MonadicValue u1 = sem::eval_erased(m, {}, translate_tprime(pr.t1, m.id()));
            sem::MonadicValue u2 = sem::eval_erased(m, {}, translate_tprime(pr.t2, m.id()));
            target_equal = m.value_eq(u1, u2);
        }
        ++rep.checked;
        if (source_equal != target_equal)
            rep.violations.push_back(AbstractionViolation{pr, source_equal, target_equal});
    }
    return rep;
}

}  // namespace ini::trans
