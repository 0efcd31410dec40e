#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ini/eval.hpp"
#include "ini/generate.hpp"
#include "ini/parser.hpp"
#include "ini/translate.hpp"
#include "ini/typecheck.hpp"

using namespace ini;
using namespace ini::sem;
using ast::Layer;
using ast::TermPtr;
using ast::Type;
using trans::Fragment;

namespace {

TermPtr mk_term(const std::string& src, Layer layer = Layer::Ini) {
    auto r = parse::parse_term(src, layer);
    REQUIRE_MESSAGE(r.ok(), src);
    return r.file->main;
}

}  // namespace

TEST_CASE("fragment classification") {
    auto both = trans::classify_fragment(mk_term("coin (x) coin"));
    CHECK(both.arrow_free);
    CHECK(both.multiplicative);

    auto lam = trans::classify_fragment(mk_term("fn x: Bool => x"));
    CHECK(!lam.arrow_free);
    CHECK(lam.multiplicative);

    auto mixed = trans::classify_fragment(mk_term("fn p: Bool * Bool => fst p"));
    CHECK(!mixed.arrow_free);
    CHECK(!mixed.multiplicative);
    CHECK(!mixed.any());
}

TEST_CASE("T merges both products into the sharing product") {
    CHECK(ast::type_to_string(trans::translate_type_t(
              Type::tensor(Type::boolean(), Type::boolean()))) == "Bool * Bool");
    CHECK(ast::type_to_string(trans::translate_type_t(Type::prod(
              Type::tensor(Type::boolean(), Type::boolean()), Type::boolean()))) ==
          "(Bool * Bool) * Bool");

    auto img = trans::translate_t(mk_term("coin (x) coin"));
    CHECK(parse::term_to_string(img) == "(coin, coin)");

    auto id = trans::translate_t(mk_term("true"));
    CHECK(parse::term_to_string(id) == "true");
}

TEST_CASE("T image typechecks at the translated type") {
    gen::GenConfig cfg;
    cfg.seed = 81;
    cfg.count = 80;
    cfg.max_depth = 5;
    cfg.forbid_arrows = true;
    for (const auto& t : gen::generate_terms(cfg)) {
        types::UsageContext ctx;
        auto src = types::check_ini(ctx, t, nullptr, ModelId::Dist);
        REQUIRE(src.ok());
        TermPtr img = trans::translate_t(t);
        types::UsageContext ctx2;
        auto tgt = types::check_ni(ctx2, img, trans::translate_type_t(src.type), ModelId::Dist);
        REQUIRE_MESSAGE(tgt.ok(), parse::term_to_string(img));
    }
}

TEST_CASE("T preserves semantics, including the let-pair expansion") {
    Model m(ModelId::Dist);
    auto t = mk_term("let x (x) y = coin (x) coin in (x, y)");
    auto img = trans::translate_t(t);
    CHECK(m.value_eq(eval_ini(m, {}, t), eval_ni(m, {}, img)));

    gen::GenConfig cfg;
    cfg.seed = 83;
    cfg.count = 80;
    cfg.max_depth = 5;
    cfg.forbid_arrows = true;
    for (const auto& u : gen::generate_terms(cfg)) {
        CHECK(m.value_eq(eval_ini(m, {}, u), eval_ni(m, {}, trans::translate_t(u))));
    }
}

TEST_CASE("T' boxes the base type") {
    CHECK(ast::type_to_string(trans::translate_type_tprime(Type::boolean())) == "M Bool");
    CHECK(ast::type_to_string(trans::translate_type_tprime(Type::lolli(
              Type::boolean(), Type::boolean()))) == "M Bool -o M Bool");

    CHECK(parse::term_to_string(trans::translate_tprime(mk_term("coin"), ModelId::Dist)) ==
          "sample as in coin");
    CHECK(parse::term_to_string(trans::translate_tprime(mk_term("fn x: Bool => x"), ModelId::Dist)) ==
          "fn x: M Bool => x");
    CHECK(parse::term_to_string(trans::translate_tprime(mk_term("coin (x) true"), ModelId::Dist)) ==
          "(sample as in coin) (x) (sample as in true)");
}

TEST_CASE("T' image typechecks at the translated type") {
    gen::GenConfig cfg;
    cfg.seed = 87;
    cfg.count = 80;
    cfg.max_depth = 5;
    cfg.forbid_sharing = true;
    for (const auto& t : gen::generate_terms(cfg)) {
        types::UsageContext ctx;
        auto src = types::check_ini(ctx, t, nullptr, ModelId::Dist);
        REQUIRE(src.ok());
        TermPtr img = trans::translate_tprime(t, ModelId::Dist);
        types::UsageContext ctx2;
        auto tgt =
            types::check_i(ctx2, img, trans::translate_type_tprime(src.type), ModelId::Dist);
        REQUIRE_MESSAGE(tgt.ok(), parse::term_to_string(img));
    }
}

TEST_CASE("T' preserves semantics at observable types via erasure") {
    Model m(ModelId::Dist);
    gen::GenConfig cfg;
    cfg.seed = 89;
    cfg.count = 80;
    cfg.max_depth = 5;
    cfg.forbid_sharing = true;
    gen::Rng rng(891);
    for (int i = 0; i < cfg.count; ++i) {
        // Observable multiplicative types: Bool and tensors thereof.
        ast::TypePtr ty = rng.below(2) ? Type::boolean()
                                       : Type::tensor(Type::boolean(), Type::boolean());
        TermPtr t = gen::generate_term(rng, cfg, ty, Layer::Ini);
        TermPtr img = trans::translate_tprime(t, ModelId::Dist);
        CHECK(m.value_eq(eval_ini(m, {}, t), eval_erased(m, {}, img)));
    }
}

TEST_CASE("translations reject terms outside their fragment") {
    CHECK_THROWS_AS(trans::translate_t(mk_term("fn x: Bool => x")), trans::TranslationError);
    CHECK_THROWS_AS(trans::translate_tprime(mk_term("fst (true, true)"), ModelId::Dist),
                    trans::TranslationError);
}

TEST_CASE("full abstraction on curated pairs") {
    Model m(ModelId::Dist);
    // Source-unequal pair: correlated vs independent; the biconditional
    // needs the translations unequal too.
    std::vector<trans::AbstractionPair> pairs;
    pairs.push_back({mk_term("let x = coin in (x, x)"), mk_term("(coin, coin)")});
    pairs.push_back({mk_term("(coin, true)"), mk_term("(coin, true)")});
    auto rep = trans::check_full_abstraction(m, pairs, Fragment::ArrowFree);
    CHECK(rep.checked == 2);
    CHECK(rep.violations.empty());

    std::vector<trans::AbstractionPair> mult;
    mult.push_back({mk_term("(fn x: Bool => x) coin"), mk_term("coin")});  // beta-equal
    mult.push_back({mk_term("coin (x) true"), mk_term("true (x) true")});  // weight-perturbed
    auto rep2 = trans::check_full_abstraction(m, mult, Fragment::Multiplicative);
    CHECK(rep2.checked == 2);
    CHECK(rep2.violations.empty());
}
