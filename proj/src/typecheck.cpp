#include "ini/typecheck.hpp"

#include <sstream>

#include "ini/prims.hpp"

namespace ini::types {

using ast::Layer;
using ast::Span;
using ast::Term;
using ast::TermKind;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;
using sem::ModelId;

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::UnboundVar: return "UnboundVar";
        case ErrorKind::ReusedVar: return "ReusedVar";
        case ErrorKind::SharedAcrossTensor: return "SharedAcrossTensor";
        case ErrorKind::LayerMismatch: return "LayerMismatch";
        case ErrorKind::Mismatch: return "Mismatch";
        case ErrorKind::NonFunctionApplied: return "NonFunctionApplied";
        case ErrorKind::BadSampleArity: return "BadSampleArity";
        case ErrorKind::PrimUnknown: return "PrimUnknown";
    }
    return "?";
}

namespace {

enum class Judgment { Ini, NI, I };

bool is_wild(const std::string& n) { return n == "_"; }

bool contains_name_type(const TypePtr& t) {
    if (!t) return false;
    if (t->kind == TypeKind::Name) return true;
    return contains_name_type(t->a) || contains_name_type(t->b);
}

struct Checker {
    Judgment judgment;
    ModelId model;
    UsageContext& ctx;
    std::vector<RuleApp> trace;
    std::optional<TypeError> error;
    int epoch_counter = 0;

    Checker(Judgment j, ModelId m, UsageContext& c) : judgment(j), model(m), ctx(c) {
        epoch_counter = ctx.epoch;
    }

    bool affine() const { return judgment != Judgment::NI; }

    TypePtr fail(ErrorKind k, Span span, std::string msg) {
        if (!error) error = TypeError{k, span, std::move(msg), {}, std::nullopt};
        return nullptr;
    }

    TypePtr fail_var(ErrorKind k, Span span, std::string msg, std::string var, Span first) {
        if (!error) error = TypeError{k, span, std::move(msg), std::move(var), first};
        return nullptr;
    }

    void bump_epoch() { ctx.epoch = ++epoch_counter; }

    // Checks the node's type against `expected` (when given), records the
    // rule application, and returns the final type.
    TypePtr done(const char* rule, const TermPtr& t, TypePtr ty, const TypePtr& expected) {
        if (!ty) return nullptr;
        if (expected && !ast::type_eq(ty, expected))
            return fail(ErrorKind::Mismatch, t->span,
                        "expected " + ast::type_to_string(expected) + ", got " +
                            ast::type_to_string(ty));
        trace.push_back(RuleApp{rule, t->span, ty});
        return ty;
    }

    bool annot_ok(const TypePtr& ty, Span span) {
        bool layered = judgment == Judgment::Ini   ? ast::is_ini_type(ty)
                       : judgment == Judgment::NI  ? ast::is_ni_type(ty)
                                                   : ast::is_i_type(ty);
        if (!layered) {
            fail(ErrorKind::LayerMismatch, span,
                 ast::type_to_string(ty) + " is not a valid type for this layer");
            return false;
        }
        if (contains_name_type(ty) && model != ModelId::Name) {
            fail(ErrorKind::Mismatch, span, "the Name type requires the name model");
            return false;
        }
        return true;
    }

    TypePtr layer_mismatch(const TermPtr& t, const char* what) {
        const char* where = judgment == Judgment::Ini  ? "the one-level language"
                            : judgment == Judgment::NI ? "the sharing layer"
                                                       : "the independent layer";
        return fail(ErrorKind::LayerMismatch, t->span,
                    std::string(what) + " is not part of " + where);
    }

    // ---- additive bookkeeping ---------------------------------------------

    using Snapshot = std::vector<UsageContext::Entry>;

    Snapshot snapshot() const { return ctx.entries; }

    void restore(const Snapshot& s) { ctx.entries = s; }

    // Folds the consumption of a finished premise into the running merge.
    static void merge_consumption(Snapshot& acc, const Snapshot& premise) {
        for (size_t i = 0; i < acc.size(); ++i) {
            if (!acc[i].consumed && premise[i].consumed) acc[i] = premise[i];
        }
    }

    // ---- variables ---------------------------------------------------------

    TypePtr check_var(const TermPtr& t, const TypePtr& expected) {
        for (auto it = ctx.entries.rbegin(); it != ctx.entries.rend(); ++it) {
            if (it->name != t->name) continue;
            if (affine() && it->consumed) {
                ErrorKind k = it->use_epoch == ctx.epoch ? ErrorKind::ReusedVar
                                                         : ErrorKind::SharedAcrossTensor;
                return fail_var(k, t->span,
                                "variable '" + t->name + "' is already consumed", t->name,
                                it->use_span);
            }
            if (affine()) {
                it->consumed = true;
                it->use_span = t->span;
                it->use_epoch = ctx.epoch;
            }
            return done("Var", t, it->type, expected);
        }
        return fail(ErrorKind::UnboundVar, t->span, "unbound variable '" + t->name + "'");
    }

    // ---- primitives --------------------------------------------------------

    TypePtr check_prim(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::I)
            return fail(ErrorKind::PrimUnknown, t->span,
                        "no independent-layer primitives are provided");
        const sem::PrimSig* sig = sem::prim_sig(t->name);
        if (!sig)
            return fail(ErrorKind::PrimUnknown, t->span, "unknown primitive '" + t->name + "'");
        if (judgment == Judgment::Ini && !sig->in_ini)
            return fail(ErrorKind::PrimUnknown, t->span,
                        "primitive '" + t->name + "' is not available in ini1");
        if (!sig->available_in(model))
            return fail(ErrorKind::PrimUnknown, t->span,
                        "primitive '" + t->name + "' is not provided by the " +
                            sem::model_name(model) + " model");
        if (sig->effectful()) {
            if (!t->kids.empty())
                return fail(ErrorKind::Mismatch, t->span,
                            "'" + t->name + "' takes no argument");
            const char* rule = judgment == Judgment::Ini ? "Coin" : "Primitive";
            return done(rule, t, sig->result, expected);
        }
        if (t->kids.size() != 1)
            return fail(ErrorKind::Mismatch, t->span, "'" + t->name + "' takes one argument");
        if (!check(t->kids[0], sig->arg)) return nullptr;
        return done("Primitive", t, sig->result, expected);
    }

    // ---- composite nodes ----------------------------------------------------

    TypePtr check_pair_shared(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::I) return layer_mismatch(t, "the sharing pair");
        TypePtr e1, e2;
        if (expected) {
            if (expected->kind != TypeKind::Prod)
                return fail(ErrorKind::Mismatch, t->span,
                            "expected " + ast::type_to_string(expected) + ", got a sharing pair");
            e1 = expected->a;
            e2 = expected->b;
        }
        // Both components see the same context.
        Snapshot before = snapshot();
        TypePtr t1 = check(t->kids[0], e1);
        if (!t1) return nullptr;
        Snapshot after1 = snapshot();
        restore(before);
        TypePtr t2 = check(t->kids[1], e2);
        if (!t2) return nullptr;
        Snapshot merged = ctx.entries;
        merge_consumption(merged, after1);
        ctx.entries = std::move(merged);
        return done("Prod-Intro", t, Type::prod(t1, t2), nullptr);
    }

    TypePtr check_proj(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::I) return layer_mismatch(t, "projection");
        TypePtr ty = check(t->kids[0], nullptr);
        if (!ty) return nullptr;
        if (ty->kind != TypeKind::Prod)
            return fail(ErrorKind::Mismatch, t->kids[0]->span,
                        "projection needs a sharing product, got " + ast::type_to_string(ty));
        return done("Prod-Elim", t, t->index == 1 ? ty->a : ty->b, expected);
    }

    TypePtr check_pair_tensor(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::NI) return layer_mismatch(t, "the separating pair");
        TypePtr e1, e2;
        if (expected) {
            if (expected->kind != TypeKind::Tensor)
                return fail(ErrorKind::Mismatch, t->span,
                            "expected " + ast::type_to_string(expected) +
                                ", got a separating pair");
            e1 = expected->a;
            e2 = expected->b;
        }
        TypePtr t1 = check(t->kids[0], e1);
        if (!t1) return nullptr;
        bump_epoch();
        TypePtr t2 = check(t->kids[1], e2);
        if (!t2) return nullptr;
        return done("Tensor-Intro", t, Type::tensor(t1, t2), nullptr);
    }

    TypePtr check_let_tensor(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::NI) return layer_mismatch(t, "let-pair");
        if (!is_wild(t->name) && t->name == t->name2)
            return fail(ErrorKind::Mismatch, t->span,
                        "let-pair binders must be distinct, got '" + t->name + "' twice");
        TypePtr subj = check(t->kids[0], nullptr);
        if (!subj) return nullptr;
        if (subj->kind != TypeKind::Tensor)
            return fail(ErrorKind::Mismatch, t->kids[0]->span,
                        "let-pair needs a separating product, got " + ast::type_to_string(subj));
        bump_epoch();
        size_t pushed = 0;
        if (!is_wild(t->name)) { ctx.push(t->name, subj->a); ++pushed; }
        if (!is_wild(t->name2)) { ctx.push(t->name2, subj->b); ++pushed; }
        TypePtr body = check(t->kids[1], expected);
        for (size_t i = 0; i < pushed; ++i) ctx.entries.pop_back();
        if (!body) return nullptr;
        return done("Tensor-Elim", t, body, nullptr);
    }

    TypePtr check_inj(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::Ini) return layer_mismatch(t, "injection");
        const bool ni = judgment == Judgment::NI;
        const TypeKind sum_kind = ni ? TypeKind::Sum : TypeKind::Oplus;
        const char* rule = ni ? "Sum-Intro" : "Oplus-Intro";
        TypePtr e_payload, other;
        if (expected) {
            if (expected->kind != sum_kind)
                return fail(ErrorKind::Mismatch, t->span,
                            "expected " + ast::type_to_string(expected) + ", got an injection");
            e_payload = t->index == 1 ? expected->a : expected->b;
            other = t->index == 1 ? expected->b : expected->a;
        } else if (t->annot) {
            if (!annot_ok(t->annot, t->span)) return nullptr;
            other = t->annot;
        } else {
            return fail(ErrorKind::Mismatch, t->span,
                        "cannot infer the sum type of a bare injection; ascribe the other "
                        "branch as inl[T] / inr[T]");
        }
        TypePtr payload = check(t->kids[0], e_payload);
        if (!payload) return nullptr;
        TypePtr full = t->index == 1
                           ? (ni ? Type::sum(payload, other) : Type::oplus(payload, other))
                           : (ni ? Type::sum(other, payload) : Type::oplus(other, payload));
        return done(rule, t, full, nullptr);
    }

    TypePtr check_case(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::Ini) return layer_mismatch(t, "case analysis");
        TypePtr scrut = check(t->kids[0], nullptr);
        if (!scrut) return nullptr;
        TypePtr bind1, bind2;
        if (judgment == Judgment::NI) {
            // Booleans eliminate like a two-way sum; the binder sees the
            // scrutinee value itself.
            if (scrut->kind == TypeKind::Sum) {
                bind1 = scrut->a;
                bind2 = scrut->b;
            } else if (scrut->kind == TypeKind::Bool) {
                bind1 = bind2 = Type::boolean();
            } else {
                return fail(ErrorKind::Mismatch, t->kids[0]->span,
                            "case needs a sum (or boolean) scrutinee, got " +
                                ast::type_to_string(scrut));
            }
        } else {
            if (scrut->kind != TypeKind::Oplus)
                return fail(ErrorKind::Mismatch, t->kids[0]->span,
                            "case needs a separating-sum scrutinee, got " +
                                ast::type_to_string(scrut));
            bind1 = scrut->a;
            bind2 = scrut->b;
        }

        if (affine()) bump_epoch();
        Snapshot before = snapshot();

        bool pushed1 = !is_wild(t->name);
        if (pushed1) ctx.push(t->name, bind1);
        TypePtr u1 = check(t->kids[1], expected);
        if (pushed1) ctx.entries.pop_back();
        if (!u1) return nullptr;
        Snapshot after1 = snapshot();

        restore(before);
        bool pushed2 = !is_wild(t->name2);
        if (pushed2) ctx.push(t->name2, bind2);
        TypePtr u2 = check(t->kids[2], u1);
        if (pushed2) ctx.entries.pop_back();
        if (!u2) return nullptr;

        Snapshot merged = ctx.entries;
        merge_consumption(merged, after1);
        ctx.entries = std::move(merged);

        const char* rule = judgment == Judgment::NI ? "Sum-Elim" : "Oplus-Elim";
        return done(rule, t, u1, nullptr);
    }

    TypePtr check_lam(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::NI) return layer_mismatch(t, "lambda abstraction");
        if (!annot_ok(t->annot, t->span)) return nullptr;
        TypePtr e_body;
        if (expected) {
            if (expected->kind != TypeKind::Lolli)
                return fail(ErrorKind::Mismatch, t->span,
                            "expected " + ast::type_to_string(expected) + ", got a function");
            if (!ast::type_eq(expected->a, t->annot))
                return fail(ErrorKind::Mismatch, t->span,
                            "parameter annotated " + ast::type_to_string(t->annot) +
                                " but expected domain is " + ast::type_to_string(expected->a));
            e_body = expected->b;
        }
        bool pushed = !is_wild(t->name);
        if (pushed) ctx.push(t->name, t->annot);
        TypePtr body = check(t->kids[0], e_body);
        if (pushed) ctx.entries.pop_back();
        if (!body) return nullptr;
        return done("Abstraction", t, Type::lolli(t->annot, body), nullptr);
    }

    TypePtr check_app(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::NI) return layer_mismatch(t, "application");
        TypePtr fn = check(t->kids[0], nullptr);
        if (!fn) return nullptr;
        if (fn->kind != TypeKind::Lolli)
            return fail(ErrorKind::NonFunctionApplied, t->kids[0]->span,
                        "cannot apply a value of type " + ast::type_to_string(fn));
        bump_epoch();
        if (!check(t->kids[1], fn->a)) return nullptr;
        return done("Application", t, fn->b, expected);
    }

    TypePtr check_let(const TermPtr& t, const TypePtr& expected) {
        if (judgment == Judgment::I) return layer_mismatch(t, "let-binding");
        TypePtr bound = check(t->kids[0], nullptr);
        if (!bound) return nullptr;
        // In the one-level language let is sugar for application, so the
        // bound term and the body split the context; the sharing layer's
        // let is additive instead.
        if (judgment == Judgment::Ini) bump_epoch();
        bool pushed = !is_wild(t->name);
        if (pushed) ctx.push(t->name, bound);
        TypePtr body = check(t->kids[1], expected);
        if (pushed) ctx.entries.pop_back();
        if (!body) return nullptr;
        return done("Let", t, body, nullptr);
    }

    TypePtr check_sample(const TermPtr& t, const TypePtr& expected) {
        if (judgment != Judgment::I) return layer_mismatch(t, "sample");
        const size_t n = t->binders.size();
        if (t->kids.size() != n + 1)
            return fail(ErrorKind::BadSampleArity, t->span,
                        "sample binds " + std::to_string(t->kids.size() - 1) + " terms to " +
                            std::to_string(n) + " names");
        for (size_t i = 0; i < n; ++i)
            for (size_t j = i + 1; j < n; ++j)
                if (!is_wild(t->binders[i]) && t->binders[i] == t->binders[j])
                    return fail(ErrorKind::Mismatch, t->span,
                                "sample binders must be distinct, got '" + t->binders[i] +
                                    "' twice");

        std::vector<TypePtr> payloads;
        for (size_t i = 0; i < n; ++i) {
            if (i > 0) bump_epoch();
            TypePtr ti = check(t->kids[i], nullptr);
            if (!ti) return nullptr;
            if (ti->kind != TypeKind::Modal)
                return fail(ErrorKind::Mismatch, t->kids[i]->span,
                            "sample needs boxed computations, got " + ast::type_to_string(ti));
            payloads.push_back(ti->a);
        }

        TypePtr e_body;
        if (expected) {
            if (expected->kind != TypeKind::Modal)
                return fail(ErrorKind::Mismatch, t->span,
                            "expected " + ast::type_to_string(expected) +
                                ", got a boxed computation");
            e_body = expected->a;
        }

        // The body is a sharing-layer program over exactly the bound names.
        UsageContext body_ctx;
        for (size_t i = 0; i < n; ++i)
            if (!is_wild(t->binders[i])) body_ctx.push(t->binders[i], payloads[i]);
        Checker body_checker(Judgment::NI, model, body_ctx);
        TypePtr body = body_checker.check(t->kids[n], e_body);
        trace.insert(trace.end(), body_checker.trace.begin(), body_checker.trace.end());
        if (!body) {
            error = body_checker.error;
            return nullptr;
        }
        return done("Sample", t, Type::modal(body), nullptr);
    }

    TypePtr check(const TermPtr& t, const TypePtr& expected) {
        if (error) return nullptr;
        switch (t->kind) {
            case TermKind::Var: return check_var(t, expected);
            case TermKind::Const:
                if (judgment == Judgment::I) return layer_mismatch(t, "a boolean constant");
                return done("Const", t, Type::boolean(), expected);
            case TermKind::Prim: return check_prim(t, expected);
            case TermKind::PairShared: return check_pair_shared(t, expected);
            case TermKind::Proj: return check_proj(t, expected);
            case TermKind::PairTensor: return check_pair_tensor(t, expected);
            case TermKind::LetTensor: return check_let_tensor(t, expected);
            case TermKind::Inj: return check_inj(t, expected);
            case TermKind::Case: return check_case(t, expected);
            case TermKind::Lam: return check_lam(t, expected);
            case TermKind::App: return check_app(t, expected);
            case TermKind::Let: return check_let(t, expected);
            case TermKind::Sample: return check_sample(t, expected);
        }
        return fail(ErrorKind::Mismatch, t->span, "malformed term");
    }
};

TypingResult run(Judgment j, UsageContext& ctx, const TermPtr& t, const TypePtr& expected,
                 ModelId model) {
    Checker c(j, model, ctx);
    TypePtr ty = c.check(t, expected);
    TypingResult r;
    r.type = ty;
    r.trace = std::move(c.trace);
    if (!ty) {
        r.error = c.error ? *c.error
                          : TypeError{ErrorKind::Mismatch, t->span, "typechecking failed", {}, {}};
    }
    return r;
}

}  // namespace

TypingResult check_ini(UsageContext& ctx, const TermPtr& t, const TypePtr& expected,
                       ModelId model) {
    return run(Judgment::Ini, ctx, t, expected, model);
}

TypingResult check_ni(UsageContext& ctx, const TermPtr& t, const TypePtr& expected,
                      ModelId model) {
    return run(Judgment::NI, ctx, t, expected, model);
}

TypingResult check_i(UsageContext& ctx, const TermPtr& t, const TypePtr& expected, ModelId model) {
    return run(Judgment::I, ctx, t, expected, model);
}

TypingResult check_program(const parse::SourceFile& f, ModelId model) {
    UsageContext ctx;
    switch (f.layer) {
        case Layer::Ini: return check_ini(ctx, f.main, nullptr, model);
        case Layer::NI: return check_ni(ctx, f.main, nullptr, model);
        case Layer::I: return check_i(ctx, f.main, nullptr, model);
    }
    return TypingResult{};
}

std::string render_error(const TypeError& e, const std::string& source) {
    uint32_t line = 1, col = 1;
    for (uint32_t i = 0; i < e.span.lo && i < source.size(); ++i) {
        if (source[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    std::ostringstream os;
    os << "type error [" << error_kind_name(e.kind) << "] at " << line << ":" << col << ": "
       << e.explanation;
    if (e.first_use) {
        uint32_t l2 = 1, c2 = 1;
        for (uint32_t i = 0; i < e.first_use->lo && i < source.size(); ++i) {
            if (source[i] == '\n') { ++l2; c2 = 1; } else { ++c2; }
        }
        os << " (first use at " << l2 << ":" << c2 << ")";
    }
    return os.str();
}

}  // namespace ini::types
