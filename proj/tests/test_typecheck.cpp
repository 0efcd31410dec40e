#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "ini/generate.hpp"
#include "ini/parser.hpp"
#include "ini/typecheck.hpp"
#include "support/brute_force.hpp"

using namespace ini;
using ast::Layer;
using ast::Term;
using ast::TermKind;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;
using sem::ModelId;
using types::ErrorKind;

namespace {

TermPtr mk_term(const std::string& src, Layer layer = Layer::Ini) {
    auto r = parse::parse_term(src, layer);
    REQUIRE_MESSAGE(r.ok(), src);
    return r.file->main;
}

types::TypingResult check(const TermPtr& t, Layer layer, ModelId model = ModelId::Dist,
                          const std::vector<std::pair<std::string, TypePtr>>& scope = {}) {
    types::UsageContext ctx;
    for (const auto& [n, ty] : scope) ctx.push(n, ty);
    switch (layer) {
        case Layer::Ini: return types::check_ini(ctx, t, nullptr, model);
        case Layer::NI: return types::check_ni(ctx, t, nullptr, model);
        case Layer::I: return types::check_i(ctx, t, nullptr, model);
    }
    return {};
}

// --------------------------------------------------------------------------
// Derivation replayer: walks the term post-order alongside the trace and
// verifies each rule application is an instance of the declarative rule.
// --------------------------------------------------------------------------

struct Replayer {
    const std::vector<types::RuleApp>& trace;
    size_t at = 0;
    bool ok = true;

    const types::RuleApp* next() {
        if (at >= trace.size()) {
            ok = false;
            return nullptr;
        }
        return &trace[at++];
    }

    void fail() { ok = false; }

    // Returns the node's type from the trace while checking rule names and
    // the local typing relation against the children's types.
    TypePtr walk(const TermPtr& t, Layer layer) {
        switch (t->kind) {
            case TermKind::Var: {
                auto* e = next();
                if (!e || e->rule != "Var") fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Const: {
                auto* e = next();
                if (!e || e->rule != "Const" || e->type->kind != TypeKind::Bool) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Prim: {
                std::vector<TypePtr> kids;
                for (const auto& k : t->kids) kids.push_back(walk(k, layer));
                auto* e = next();
                if (!e) return nullptr;
                if (layer == Layer::Ini && t->name == "coin") {
                    if (e->rule != "Coin") fail();
                } else if (e->rule != "Primitive") {
                    fail();
                }
                return e->type;
            }
            case TermKind::PairShared: {
                TypePtr a = walk(t->kids[0], layer);
                TypePtr b = walk(t->kids[1], layer);
                auto* e = next();
                if (!e || e->rule != "Prod-Intro") fail();
                if (e && a && b && !ast::type_eq(e->type, Type::prod(a, b))) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Proj: {
                TypePtr p = walk(t->kids[0], layer);
                auto* e = next();
                if (!e || e->rule != "Prod-Elim") fail();
                if (e && p) {
                    if (p->kind != TypeKind::Prod) fail();
                    else if (!ast::type_eq(e->type, t->index == 1 ? p->a : p->b)) fail();
                }
                return e ? e->type : nullptr;
            }
            case TermKind::PairTensor: {
                TypePtr a = walk(t->kids[0], layer);
                TypePtr b = walk(t->kids[1], layer);
                auto* e = next();
                if (!e || e->rule != "Tensor-Intro") fail();
                if (e && a && b && !ast::type_eq(e->type, Type::tensor(a, b))) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::LetTensor: {
                TypePtr s = walk(t->kids[0], layer);
                TypePtr body = walk(t->kids[1], layer);
                auto* e = next();
                if (!e || e->rule != "Tensor-Elim") fail();
                if (e && s && s->kind != TypeKind::Tensor) fail();
                if (e && body && !ast::type_eq(e->type, body)) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Inj: {
                TypePtr p = walk(t->kids[0], layer);
                auto* e = next();
                const char* rule = layer == Layer::NI ? "Sum-Intro" : "Oplus-Intro";
                if (!e || e->rule != rule) fail();
                if (e && p) {
                    TypePtr side = t->index == 1 ? e->type->a : e->type->b;
                    if (!ast::type_eq(side, p)) fail();
                }
                return e ? e->type : nullptr;
            }
            case TermKind::Case: {
                TypePtr s = walk(t->kids[0], layer);
                TypePtr u1 = walk(t->kids[1], layer);
                TypePtr u2 = walk(t->kids[2], layer);
                auto* e = next();
                const char* rule = layer == Layer::NI ? "Sum-Elim" : "Oplus-Elim";
                if (!e || e->rule != rule) fail();
                if (e && u1 && u2 && (!ast::type_eq(u1, u2) || !ast::type_eq(e->type, u1)))
                    fail();
                if (e && s && layer == Layer::NI && s->kind != TypeKind::Sum &&
                    s->kind != TypeKind::Bool)
                    fail();
                if (e && s && layer == Layer::I && s->kind != TypeKind::Oplus) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Lam: {
                TypePtr body = walk(t->kids[0], layer);
                auto* e = next();
                if (!e || e->rule != "Abstraction") fail();
                if (e && body && !ast::type_eq(e->type, Type::lolli(t->annot, body))) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::App: {
                TypePtr f = walk(t->kids[0], layer);
                TypePtr a = walk(t->kids[1], layer);
                auto* e = next();
                if (!e || e->rule != "Application") fail();
                if (e && f && a) {
                    if (f->kind != TypeKind::Lolli || !ast::type_eq(f->a, a) ||
                        !ast::type_eq(e->type, f->b))
                        fail();
                }
                return e ? e->type : nullptr;
            }
            case TermKind::Let: {
                TypePtr bound = walk(t->kids[0], layer);
                TypePtr body = walk(t->kids[1], layer);
                (void)bound;
                auto* e = next();
                if (!e || e->rule != "Let") fail();
                if (e && body && !ast::type_eq(e->type, body)) fail();
                return e ? e->type : nullptr;
            }
            case TermKind::Sample: {
                const size_t n = t->binders.size();
                std::vector<TypePtr> boxes;
                for (size_t i = 0; i < n; ++i) boxes.push_back(walk(t->kids[i], Layer::I));
                TypePtr body = walk(t->kids[n], Layer::NI);
                auto* e = next();
                if (!e || e->rule != "Sample") fail();
                for (const auto& b : boxes)
                    if (b && b->kind != TypeKind::Modal) fail();
                if (e && body && !ast::type_eq(e->type, Type::modal(body))) fail();
                return e ? e->type : nullptr;
            }
        }
        fail();
        return nullptr;
    }
};

bool replay(const TermPtr& t, Layer layer, const types::TypingResult& r) {
    REQUIRE(r.ok());
    Replayer rp{r.trace};
    TypePtr ty = rp.walk(t, layer);
    return rp.ok && rp.at == r.trace.size() && ty && ast::type_eq(ty, r.type);
}

}  // namespace

// --------------------------------------------------------------------------
// Paper program verdicts and per-judgment examples
// --------------------------------------------------------------------------

TEST_CASE("one-level judgment: spec examples") {
    auto ok = check(mk_term("let x = coin in (x, x)"), Layer::Ini);
    REQUIRE(ok.ok());
    CHECK(ast::type_to_string(ok.type) == "Bool * Bool");

    auto bad = check(mk_term("let x = coin in (fn y: Bool => x (x) y) x"), Layer::Ini);
    REQUIRE(!bad.ok());
    CHECK(bad.error->kind == ErrorKind::SharedAcrossTensor);
    CHECK(bad.error->var == "x");
    CHECK(bad.error->first_use.has_value());

    auto coerce = check(mk_term("fn z: Bool (x) Bool => let a (x) b = z in (a, b)"), Layer::Ini);
    REQUIRE(coerce.ok());
    CHECK(ast::type_to_string(coerce.type) == "Bool (x) Bool -o Bool * Bool");
}

TEST_CASE("sharing judgment: spec examples") {
    auto shared = check(mk_term("(x, x)", Layer::NI), Layer::NI, ModelId::Dist,
                        {{"x", Type::boolean()}});
    REQUIRE(shared.ok());
    CHECK(ast::type_to_string(shared.type) == "Bool * Bool");

    auto both = check(mk_term("let x = fst m in let y = snd m in eqb (x, y)", Layer::NI), Layer::NI,
                      ModelId::Dist, {{"m", Type::prod(Type::boolean(), Type::boolean())}});
    REQUIRE(both.ok());
    CHECK(ast::type_to_string(both.type) == "Bool");

    auto case_bool = check(mk_term("case coin of inl x => true | inr y => false", Layer::NI),
                           Layer::NI);
    REQUIRE(case_bool.ok());
    CHECK(ast::type_to_string(case_bool.type) == "Bool");
}

TEST_CASE("independent judgment: spec examples") {
    auto rejected = check(
        mk_term("if dist then (sample as in true) (x) (sample as in true) else (sample as in false) "
           "(x) (sample as in false)",
           Layer::I),
        Layer::I, ModelId::Dist, {{"dist", Type::modal(Type::boolean())}});
    REQUIRE(!rejected.ok());
    CHECK((rejected.error->kind == ErrorKind::Mismatch ||
           rejected.error->kind == ErrorKind::LayerMismatch));

    auto accepted = check(
        mk_term("sample dist as x in (if x then (true, true) else (false, false))", Layer::I),
        Layer::I, ModelId::Dist, {{"dist", Type::modal(Type::boolean())}});
    REQUIRE(accepted.ok());
    CHECK(ast::type_to_string(accepted.type) == "M (Bool * Bool)");

    auto swap = check(mk_term("fn p: M Bool (x) M Bool => let a (x) b = p in a (x) b", Layer::I),
                      Layer::I);
    REQUIRE(swap.ok());
    CHECK(ast::type_to_string(swap.type) == "M Bool (x) M Bool -o M Bool (x) M Bool");
}

TEST_CASE("error taxonomy") {
    CHECK(check(mk_term("x"), Layer::Ini).error->kind == ErrorKind::UnboundVar);
    CHECK(check(mk_term("x (x) x"), Layer::Ini, ModelId::Dist, {{"x", Type::boolean()}})
              .error->kind == ErrorKind::SharedAcrossTensor);
    CHECK(check(mk_term("true true"), Layer::Ini).error->kind == ErrorKind::NonFunctionApplied);
    CHECK(check(mk_term("fst coin"), Layer::Ini).error->kind == ErrorKind::Mismatch);
    CHECK(check(mk_term("amb", Layer::Ini), Layer::Ini).error->kind == ErrorKind::PrimUnknown);
    CHECK(check(mk_term("coin", Layer::NI), Layer::NI, ModelId::PSet).error->kind ==
          ErrorKind::PrimUnknown);
    CHECK(check(mk_term("fresh", Layer::NI), Layer::NI, ModelId::Dist).error->kind ==
          ErrorKind::PrimUnknown);
    // Sharing nodes in the independent layer and vice versa.
    CHECK(check(mk_term("(true, true)", Layer::I), Layer::I).error->kind == ErrorKind::LayerMismatch);
    CHECK(check(mk_term("sample as in true", Layer::NI), Layer::NI).error->kind ==
          ErrorKind::LayerMismatch);
    CHECK(check(mk_term("case coin of inl x => true | inr y => false", Layer::Ini), Layer::Ini)
              .error->kind == ErrorKind::LayerMismatch);
    // An AST-level arity mismatch (unreachable from the parser).
    auto bad_sample = Term::sample({mk_term("t", Layer::I)}, {"x"}, mk_term("true", Layer::NI), Layer::I);
    auto broken = std::make_shared<Term>(*bad_sample);
    broken->binders.clear();
    CHECK(check(broken, Layer::I).error->kind == ErrorKind::BadSampleArity);
    // Bare injections need an ascription to synthesize.
    CHECK(check(mk_term("inl true", Layer::NI), Layer::NI).error->kind == ErrorKind::Mismatch);
    // The Name type needs the name model.
    CHECK(check(mk_term("fn x: M Name => x", Layer::I), Layer::I, ModelId::Dist).error->kind ==
          ErrorKind::Mismatch);
    CHECK(check(mk_term("fn x: M Name => x", Layer::I), Layer::I, ModelId::Name).ok());
}

TEST_CASE("weakening: an extra unused variable never breaks typing") {
    gen::GenConfig cfg;
    cfg.seed = 31;
    cfg.count = 80;
    cfg.max_depth = 4;
    for (const auto& t : gen::generate_terms(cfg)) {
        auto plain = check(t, Layer::Ini);
        REQUIRE(plain.ok());
        auto weakened = check(t, Layer::Ini, ModelId::Dist, {{"zfresh", Type::boolean()}});
        REQUIRE(weakened.ok());
        CHECK(ast::type_eq(plain.type, weakened.type));
    }
}

TEST_CASE("substitution preserves typing") {
    gen::GenConfig cfg;
    cfg.seed = 37;
    cfg.count = 60;
    cfg.max_depth = 4;
    gen::Rng rng(371);
    for (int i = 0; i < cfg.count; ++i) {
        TypePtr a = gen::random_type_ini_observable(rng, 1 + rng.below(2));
        TypePtr target = gen::random_type_ini_observable(rng, 1 + rng.below(2));
        TermPtr body = gen::generate_term(rng, cfg, target, Layer::Ini, {{"x", a}});
        TermPtr s = gen::generate_term(rng, cfg, a, Layer::Ini);
        auto before = check(body, Layer::Ini, ModelId::Dist, {{"x", a}});
        REQUIRE(before.ok());
        auto after = check(ast::substitute(body, "x", s), Layer::Ini);
        REQUIRE(after.ok());
        CHECK(ast::type_eq(before.type, after.type));
    }
}

TEST_CASE("success traces replay as declarative derivations") {
    for (auto layer : {Layer::Ini, Layer::NI, Layer::I}) {
        gen::GenConfig cfg;
        cfg.seed = 41 + (int)layer;
        cfg.count = 60;
        cfg.max_depth = 5;
        cfg.layer = layer;
        for (const auto& t : gen::generate_terms(cfg)) {
            auto r = check(t, layer);
            REQUIRE_MESSAGE(r.ok(), parse::term_to_string(t));
            CHECK_MESSAGE(replay(t, layer, r), parse::term_to_string(t));
        }
    }
}

// --------------------------------------------------------------------------
// Lazy threading vs. brute-force splitting
// --------------------------------------------------------------------------

TEST_CASE("lazy usage threading matches brute-force context splitting") {
    gen::Rng rng(53);
    gen::GenConfig cfg;
    cfg.max_depth = 4;
    cfg.count = 1;

    test_support::DeclCtx scope = {{"a", Type::boolean()},
                     {"b", Type::boolean()},
                     {"c", Type::tensor(Type::boolean(), Type::boolean())},
                     {"d", Type::prod(Type::boolean(), Type::boolean())}};
    std::vector<std::string> names = {"a", "b", "c", "d"};

    int disagreements = 0;
    int accepted = 0, rejected = 0;
    for (int i = 0; i < 150; ++i) {
        TypePtr target = gen::random_type_ini_observable(rng, 1 + rng.below(2));
        TermPtr t = gen::generate_term(rng, cfg, target, Layer::Ini, scope);
        // Half the corpus gets mutated, often breaking affinity.
        if (i % 2 == 1) t = test_support::mutate_var(rng, t, names);
        auto lazy = check(t, Layer::Ini, ModelId::Dist, scope);
        auto decl = test_support::decl_types(scope, t);
        bool lazy_ok = lazy.ok();
        bool decl_ok = !decl.empty();
        if (lazy_ok != decl_ok) ++disagreements;
        if (lazy_ok && decl_ok) {
            ++accepted;
            CHECK(decl.count(ast::type_to_string(lazy.type)) == 1);
        }
        if (!lazy_ok) ++rejected;
    }
    CHECK(disagreements == 0);
    // The corpus must exercise both verdicts to mean anything.
    CHECK(accepted > 20);
    CHECK(rejected >= 15);
}
