#include "ini/laws.hpp"

#include "ini/eval.hpp"
#include "ini/oracle.hpp"
#include "ini/parser.hpp"
#include "ini/typecheck.hpp"

namespace ini::laws {

using ast::Layer;
using ast::Term;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;
using gen::GenConfig;
using gen::Rng;
using sem::Model;
using sem::ModelId;

namespace {

TermPtr gen_closed(Rng& rng, const GenConfig& cfg, const TypePtr& ty, Layer layer) {
    return gen::generate_term(rng, cfg, ty, layer);
}

TermPtr gen_open(Rng& rng, const GenConfig& cfg, const TypePtr& ty, Layer layer,
                 const gen::Scope& scope) {
    return gen::generate_term(rng, cfg, ty, layer, scope);
}

TypePtr rnd_ni(Rng& rng, const GenConfig& cfg, int depth = 2) {
    return gen::random_type_ni(rng, depth, cfg.model);
}

TypePtr rnd_i(Rng& rng, const GenConfig& cfg, int depth = 2) {
    return gen::random_type_i_observable(rng, std::max(2, depth), cfg.model);
}

}  // namespace

const std::vector<LawSchema>& law_schemas() {
    static const std::vector<LawSchema> schemas = [] {
        std::vector<LawSchema> v;

        // case (inl M) of inl x => N1 | inr y => N2  ==  let x = M in N1.
        // The let form is the sound reading for effectful scrutinees;
        // for value scrutinees it coincides with substitution.
        v.push_back(LawSchema{"ni-case-inl", Layer::NI, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_ni(rng, cfg), b = rnd_ni(rng, cfg);
                                  TypePtr u = rnd_ni(rng, cfg);
                                  TermPtr m = gen_closed(rng, cfg, a, Layer::NI);
                                  TermPtr n1 =
                                      gen_open(rng, cfg, u, Layer::NI, {{"x", a}});
                                  TermPtr n2 =
                                      gen_open(rng, cfg, u, Layer::NI, {{"y", b}});
                                  TermPtr scrut = Term::inj(1, m, b, Layer::NI);
                                  return LawInstance{
                                      Term::case_of(scrut, "x", n1, "y", n2, Layer::NI),
                                      Term::let("x", m, n1, Layer::NI), Layer::NI, {}};
                              }});

        v.push_back(LawSchema{"ni-case-inr", Layer::NI, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_ni(rng, cfg), b = rnd_ni(rng, cfg);
                                  TypePtr u = rnd_ni(rng, cfg);
                                  TermPtr m = gen_closed(rng, cfg, b, Layer::NI);
                                  TermPtr n1 =
                                      gen_open(rng, cfg, u, Layer::NI, {{"x", a}});
                                  TermPtr n2 =
                                      gen_open(rng, cfg, u, Layer::NI, {{"y", b}});
                                  TermPtr scrut = Term::inj(2, m, a, Layer::NI);
                                  return LawInstance{
                                      Term::case_of(scrut, "x", n1, "y", n2, Layer::NI),
                                      Term::let("y", m, n2, Layer::NI), Layer::NI, {}};
                              }});

        // let x = t in x == t.
        v.push_back(LawSchema{"let-id-body", Layer::NI, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_ni(rng, cfg);
                                  TermPtr t = gen_closed(rng, cfg, a, Layer::NI);
                                  return LawInstance{
                                      Term::let("x", t, Term::var("x", Layer::NI), Layer::NI),
                                      t, Layer::NI, {}};
                              }});

        // let x = x in t == t, with x free on both sides.
        v.push_back(LawSchema{"let-id-subject", Layer::NI, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr b = Type::boolean();
                                  TermPtr t = gen_open(rng, cfg, rnd_ni(rng, cfg), Layer::NI,
                                                       {{"x", b}});
                                  return LawInstance{
                                      Term::let("x", Term::var("x", Layer::NI), t, Layer::NI),
                                      t, Layer::NI, {{"x", b}}};
                              }});

        // let y = (let x = M1 in M2) in M3 == let x = M1 in let y = M2 in M3.
        v.push_back(LawSchema{"let-assoc", Layer::NI, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_ni(rng, cfg), b = rnd_ni(rng, cfg);
                                  TypePtr c = rnd_ni(rng, cfg);
                                  TermPtr m1 = gen_closed(rng, cfg, a, Layer::NI);
                                  TermPtr m2 =
                                      gen_open(rng, cfg, b, Layer::NI, {{"x", a}});
                                  TermPtr m3 =
                                      gen_open(rng, cfg, c, Layer::NI, {{"y", b}});
                                  TermPtr lhs = Term::let(
                                      "y", Term::let("x", m1, m2, Layer::NI), m3, Layer::NI);
                                  TermPtr rhs = Term::let(
                                      "x", m1, Term::let("y", m2, m3, Layer::NI), Layer::NI);
                                  return LawInstance{lhs, rhs, Layer::NI, {}};
                              }});

        // (fn x => t) u == t[x/u]; affine binding makes substitution exact.
        v.push_back(LawSchema{"i-beta-app", Layer::I, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_i(rng, cfg);
                                  TypePtr b = rnd_i(rng, cfg);
                                  TermPtr u = gen_closed(rng, cfg, a, Layer::I);
                                  TermPtr t = gen_open(rng, cfg, b, Layer::I, {{"x", a}});
                                  TermPtr lhs = Term::app(Term::lam("x", a, t, Layer::I), u,
                                                          Layer::I);
                                  return LawInstance{lhs, ast::substitute(t, "x", u), Layer::I,
                                                     {}};
                              }});

        // let x1 (x) x2 = t1 (x) t2 in u == u[x1/t1][x2/t2].
        v.push_back(LawSchema{"i-let-tensor-beta", Layer::I, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_i(rng, cfg), b = rnd_i(rng, cfg);
                                  TypePtr u_ty = rnd_i(rng, cfg);
                                  TermPtr t1 = gen_closed(rng, cfg, a, Layer::I);
                                  TermPtr t2 = gen_closed(rng, cfg, b, Layer::I);
                                  TermPtr u = gen_open(rng, cfg, u_ty, Layer::I,
                                                       {{"x1", a}, {"x2", b}});
                                  TermPtr lhs = Term::let_tensor(
                                      "x1", "x2", Term::pair_tensor(t1, t2, Layer::I), u,
                                      Layer::I);
                                  TermPtr rhs = ast::substitute(
                                      ast::substitute(u, "x1", t1), "x2", t2);
                                  return LawInstance{lhs, rhs, Layer::I, {}};
                              }});

        v.push_back(LawSchema{"i-case-inl", Layer::I, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_i(rng, cfg), b = rnd_i(rng, cfg);
                                  TypePtr u_ty = rnd_i(rng, cfg);
                                  TermPtr t = gen_closed(rng, cfg, a, Layer::I);
                                  TermPtr u1 = gen_open(rng, cfg, u_ty, Layer::I, {{"x", a}});
                                  TermPtr u2 = gen_open(rng, cfg, u_ty, Layer::I, {{"y", b}});
                                  TermPtr scrut = Term::inj(1, t, b, Layer::I);
                                  return LawInstance{
                                      Term::case_of(scrut, "x", u1, "y", u2, Layer::I),
                                      ast::substitute(u1, "x", t), Layer::I, {}};
                              }});

        v.push_back(LawSchema{"i-case-inr", Layer::I, false,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr a = rnd_i(rng, cfg), b = rnd_i(rng, cfg);
                                  TypePtr u_ty = rnd_i(rng, cfg);
                                  TermPtr t = gen_closed(rng, cfg, b, Layer::I);
                                  TermPtr u1 = gen_open(rng, cfg, u_ty, Layer::I, {{"x", a}});
                                  TermPtr u2 = gen_open(rng, cfg, u_ty, Layer::I, {{"y", b}});
                                  TermPtr scrut = Term::inj(2, t, a, Layer::I);
                                  return LawInstance{
                                      Term::case_of(scrut, "x", u1, "y", u2, Layer::I),
                                      ast::substitute(u2, "y", t), Layer::I, {}};
                              }});

        // sample t as x in x == t.
        v.push_back(LawSchema{"sample-id", Layer::I, true,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr sigma = rnd_ni(rng, cfg);
                                  TermPtr t =
                                      gen_closed(rng, cfg, Type::modal(sigma), Layer::I);
                                  TermPtr lhs = Term::sample(
                                      {t}, {"x"}, Term::var("x", Layer::NI), Layer::I);
                                  return LawInstance{lhs, t, Layer::I, {}};
                              }});

        // sample (sample t as x in M) as y in N
        //   == sample t as x in (let y = M in N).
        v.push_back(LawSchema{"sample-fusion", Layer::I, true,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr s1 = rnd_ni(rng, cfg), s2 = rnd_ni(rng, cfg);
                                  TypePtr s3 = rnd_ni(rng, cfg);
                                  TermPtr t =
                                      gen_closed(rng, cfg, Type::modal(s1), Layer::I);
                                  TermPtr m = gen_open(rng, cfg, s2, Layer::NI, {{"x", s1}});
                                  TermPtr n = gen_open(rng, cfg, s3, Layer::NI, {{"y", s2}});
                                  TermPtr inner = Term::sample({t}, {"x"}, m, Layer::I);
                                  TermPtr lhs = Term::sample({inner}, {"y"}, n, Layer::I);
                                  TermPtr rhs = Term::sample(
                                      {t}, {"x"}, Term::let("y", m, n, Layer::NI), Layer::I);
                                  return LawInstance{lhs, rhs, Layer::I, {}};
                              }});

        // Binary-sample associativity, stated on right-nested triples.
        v.push_back(LawSchema{"sample-assoc", Layer::I, true,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr s1 = rnd_ni(rng, cfg), s2 = rnd_ni(rng, cfg);
                                  TypePtr s3 = rnd_ni(rng, cfg);
                                  TermPtr t1 = gen_closed(rng, cfg, Type::modal(s1), Layer::I);
                                  TermPtr t2 = gen_closed(rng, cfg, Type::modal(s2), Layer::I);
                                  TermPtr t3 = gen_closed(rng, cfg, Type::modal(s3), Layer::I);
                                  auto nv = [](const char* n) {
                                      return Term::var(n, Layer::NI);
                                  };
                                  // sample t2, t3 as x2, x3 in (x2, x3)
                                  TermPtr right = Term::sample(
                                      {t2, t3}, {"x2", "x3"},
                                      Term::pair_shared(nv("x2"), nv("x3"), Layer::NI),
                                      Layer::I);
                                  // lhs: sample t1, right as x1, y in (x1, (fst y, snd y))
                                  TermPtr lhs_body = Term::pair_shared(
                                      nv("x1"),
                                      Term::pair_shared(Term::proj(1, nv("y"), Layer::NI),
                                                        Term::proj(2, nv("y"), Layer::NI),
                                                        Layer::NI),
                                      Layer::NI);
                                  TermPtr lhs = Term::sample({t1, right}, {"x1", "y"}, lhs_body,
                                                             Layer::I);
                                  // sample t1, t2 as x1, x2 in (x1, x2)
                                  TermPtr left = Term::sample(
                                      {t1, t2}, {"x1", "x2"},
                                      Term::pair_shared(nv("x1"), nv("x2"), Layer::NI),
                                      Layer::I);
                                  // rhs: sample left, t3 as y, x3 in (fst y, (snd y, x3))
                                  TermPtr rhs_body = Term::pair_shared(
                                      Term::proj(1, nv("y"), Layer::NI),
                                      Term::pair_shared(Term::proj(2, nv("y"), Layer::NI),
                                                        nv("x3"), Layer::NI),
                                      Layer::NI);
                                  TermPtr rhs = Term::sample({left, t3}, {"y", "x3"}, rhs_body,
                                                             Layer::I);
                                  return LawInstance{lhs, rhs, Layer::I, {}};
                              }});

        // sample t, (sample as in true) as x, y in x == t.
        v.push_back(LawSchema{"sample-unit-left", Layer::I, true,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr sigma = rnd_ni(rng, cfg);
                                  TermPtr t =
                                      gen_closed(rng, cfg, Type::modal(sigma), Layer::I);
                                  TermPtr unit_box = Term::sample(
                                      {}, {}, Term::constant(true, Layer::NI), Layer::I);
                                  TermPtr lhs = Term::sample({t, unit_box}, {"x", "y"},
                                                             Term::var("x", Layer::NI),
                                                             Layer::I);
                                  return LawInstance{lhs, t, Layer::I, {}};
                              }});

        // sample (sample as in true), t as y, x in x == t.
        v.push_back(LawSchema{"sample-unit-right", Layer::I, true,
                              [](Rng& rng, const GenConfig& cfg) {
                                  TypePtr sigma = rnd_ni(rng, cfg);
                                  TermPtr t =
                                      gen_closed(rng, cfg, Type::modal(sigma), Layer::I);
                                  TermPtr unit_box = Term::sample(
                                      {}, {}, Term::constant(true, Layer::NI), Layer::I);
                                  TermPtr lhs = Term::sample({unit_box, t}, {"y", "x"},
                                                             Term::var("x", Layer::NI),
                                                             Layer::I);
                                  return LawInstance{lhs, t, Layer::I, {}};
                              }});

        return v;
    }();
    return schemas;
}

// ---------------------------------------------------------------------------
// Law checking
// ---------------------------------------------------------------------------

namespace {

// Typechecks one side in the instance's judgment.
std::optional<TypePtr> type_of_side(const LawInstance& inst, const TermPtr& side,
                                    ModelId model) {
    types::UsageContext ctx;
    for (const auto& [n, ty] : inst.free_vars) ctx.push(n, ty);
    types::TypingResult r = inst.layer == Layer::NI
                                ? types::check_ni(ctx, side, nullptr, model)
                                : types::check_i(ctx, side, nullptr, model);
    if (!r.ok()) return std::nullopt;
    return r.type;
}

bool instance_holds(const Model& m, const LawInstance& inst, std::string& detail) {
    auto lt = type_of_side(inst, inst.lhs, m.id());
    auto rt = type_of_side(inst, inst.rhs, m.id());
    if (!lt || !rt) {
        detail = "instantiation does not typecheck";
        return false;
    }
    if (!ast::type_eq(*lt, *rt)) {
        detail = "sides have different types";
        return false;
    }

    if (inst.layer == Layer::NI) {
        // Enumerate boolean environments for the (at most one) free var.
        std::vector<sem::Env> envs;
        if (inst.free_vars.empty()) {
            envs.push_back({});
        } else {
            for (bool bv : {false, true}) {
                sem::Env e;
                e.emplace(inst.free_vars[0].first, sem::Value::boolean(bv));
                envs.push_back(std::move(e));
            }
        }
        for (const auto& e : envs) {
            sem::MonadicValue l = sem::eval_ni(m, e, inst.lhs);
            sem::MonadicValue r = sem::eval_ni(m, e, inst.rhs);
            if (!m.value_eq(l, r)) {
                detail = "lhs " + m.to_string(l) + " != rhs " + m.to_string(r);
                return false;
            }
        }
        return true;
    }

    sem::Value l = sem::eval_i(m, {}, inst.lhs);
    sem::Value r = sem::eval_i(m, {}, inst.rhs);
    if (!sem::sem_value_eq(m, l, r)) {
        detail = "lhs " + sem::sem_value_to_string(m, l) + " != rhs " +
                 sem::sem_value_to_string(m, r);
        return false;
    }
    return true;
}

}  // namespace

LawReport check_law(const LawSchema& schema, const GenConfig& cfg) {
    LawReport rep;
    rep.law = schema.name;
    rep.model = cfg.model;
    Rng rng(cfg.seed);
    Model m(cfg.model);
    for (int i = 0; i < cfg.count; ++i) {
        LawInstance inst = schema.instantiate(rng, cfg);
        std::string detail;
        ++rep.checked;
        if (!instance_holds(m, inst, detail)) {
            rep.failures.push_back(LawFailure{parse::term_to_string(inst.lhs),
                                              parse::term_to_string(inst.rhs), detail});
        }
    }
    return rep;
}

EquationsReport run_equations_suite(uint64_t seed, int count, int depth) {
    EquationsReport rep;
    for (const auto& schema : law_schemas()) {
        for (ModelId model : {ModelId::Dist, ModelId::PSet, ModelId::Name}) {
            GenConfig cfg;
            cfg.seed = seed ^ (std::hash<std::string>{}(schema.name) +
                               0x9e3779b97f4a7c15ull * (int)model);
            cfg.count = count;
            cfg.max_depth = std::max(3, depth);
            cfg.model = model;
            rep.laws.push_back(check_law(schema, cfg));
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Soundness suites
// ---------------------------------------------------------------------------

SoundnessReport run_soundness_suite(ModelId model, Layer layer, uint64_t seed, int count,
                                    int depth) {
    SoundnessReport rep;
    rep.model = model;
    rep.layer = layer;
    Model m(model);
    Rng rng(seed);
    GenConfig cfg;
    cfg.model = model;
    cfg.max_depth = depth;
    cfg.seed = seed;

    for (int i = 0; i < count; ++i) {
        if (layer == Layer::Ini) {
            TypePtr t1 = gen::random_type_ini_observable(rng, 1 + rng.below(2));
            TypePtr t2 = gen::random_type_ini_observable(rng, 1 + rng.below(2));
            TypePtr target = Type::tensor(t1, t2);
            TermPtr term = gen::generate_term(rng, cfg, target, Layer::Ini);
            ++rep.checked;
            auto frep = oracle::check_tensor_soundness_ini(m, term);
            if (!frep.is_product)
                rep.failures.push_back(
                    SoundnessEntry{parse::term_to_string(term), frep.to_string(m)});
        } else {
            TypePtr s1 = gen::random_type_ni(rng, 1 + rng.below(2), model);
            TypePtr s2 = gen::random_type_ni(rng, 1 + rng.below(2), model);
            TypePtr target = Type::tensor(Type::modal(s1), Type::modal(s2));
            TermPtr term = gen::generate_term(rng, cfg, target, Layer::I);
            ++rep.checked;
            auto frep = oracle::check_tensor_soundness_i(m, term);
            if (!frep.is_product)
                rep.failures.push_back(
                    SoundnessEntry{parse::term_to_string(term), frep.to_string(m)});
        }
    }

    // Negative control: the correlated sharing pair must be flagged, which
    // shows the factorization check is not vacuous.
    if (model == ModelId::Dist) {
        auto parsed = parse::parse_term("let x = coin in (x, x)", Layer::Ini);
        sem::MonadicValue joint = sem::eval_ini(m, {}, parsed.file->main);
        auto frep = oracle::check_factorization(m, joint);
        rep.negative_control_flagged = !frep.is_product && frep.counterexample.has_value();
    } else {
        rep.negative_control_flagged = true;  // control is dist-specific
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Full abstraction suite
// ---------------------------------------------------------------------------

namespace {

// Replaces the first coin with true (or flips the first constant): a
// one-leaf weight perturbation.
TermPtr perturb(const TermPtr& t, bool& done) {
    if (done) return t;
    if (t->kind == ast::TermKind::Prim && t->name == "coin") {
        done = true;
        return Term::constant(true, t->layer, t->span);
    }
    if (t->kind == ast::TermKind::Const) {
        done = true;
        return Term::constant(!t->bval, t->layer, t->span);
    }
    auto copy = std::make_shared<Term>(*t);
    for (auto& k : copy->kids) {
        k = perturb(k, done);
        if (done) break;
    }
    return copy;
}

}  // namespace

FullAbstractionReport run_full_abstraction_suite(trans::Fragment f, uint64_t seed, int count,
                                                 int depth) {
    FullAbstractionReport rep;
    rep.fragment = f;
    Model m(ModelId::Dist);
    Rng rng(seed);
    GenConfig cfg;
    cfg.model = ModelId::Dist;
    cfg.max_depth = depth;
    cfg.forbid_arrows = f == trans::Fragment::ArrowFree;
    cfg.forbid_sharing = f == trans::Fragment::Multiplicative;

    std::vector<trans::AbstractionPair> pairs;
    for (int i = 0; i < count; ++i) {
        TypePtr obs;
        do {
            obs = gen::random_type_ini_observable(rng, 1 + rng.below(2));
        } while (f == trans::Fragment::Multiplicative && obs->kind == TypeKind::Prod);

        // Typing and semantic preservation on a fresh corpus term.
        TermPtr t = gen::generate_term(rng, cfg, obs, Layer::Ini);
        types::UsageContext ctx;
        auto src = types::check_ini(ctx, t, nullptr, ModelId::Dist);
        if (!src.ok()) {
            ++rep.typing_failures;
            continue;
        }
        if (f == trans::Fragment::ArrowFree) {
            TermPtr img = trans::translate_t(t);
            types::UsageContext c2;
            auto tgt = types::check_ni(c2, img, trans::translate_type_t(src.type),
                                       ModelId::Dist);
            if (!tgt.ok()) {
                ++rep.typing_failures;
                continue;
            }
            if (!m.value_eq(sem::eval_ini(m, {}, t), sem::eval_ni(m, {}, img)))
                ++rep.semantic_failures;
        } else {
            TermPtr img = trans::translate_tprime(t, ModelId::Dist);
            types::UsageContext c2;
            auto tgt = types::check_i(c2, img, trans::translate_type_tprime(src.type),
                                      ModelId::Dist);
            if (!tgt.ok()) {
                ++rep.typing_failures;
                continue;
            }
            if (!m.value_eq(sem::eval_ini(m, {}, t), sem::eval_erased(m, {}, img)))
                ++rep.semantic_failures;
        }

        // Biconditional pairs: rotate through reflexive, rewrite-equal,
        // and perturbed shapes.
        switch (i % 3) {
            case 0:
                pairs.push_back({t, t});
                break;
            case 1: {
                // A let/beta redex against its contractum.
                TypePtr a = gen::random_type_ini_observable(rng, 1);
                TermPtr s = gen::generate_term(rng, cfg, a, Layer::Ini);
                TermPtr body =
                    gen::generate_term(rng, cfg, obs, Layer::Ini, {{"x", a}});
                TermPtr redex =
                    f == trans::Fragment::ArrowFree
                        ? Term::let("x", s, body, Layer::Ini)
                        : Term::app(Term::lam("x", a, body, Layer::Ini), s, Layer::Ini);
                pairs.push_back({redex, ast::substitute(body, "x", s)});
                break;
            }
            default: {
                bool done = false;
                pairs.push_back({t, perturb(t, done)});
                break;
            }
        }
    }

    auto ab = trans::check_full_abstraction(m, pairs, f);
    rep.pairs = ab.checked;
    rep.violations = ab.violations;
    return rep;
}

}  // namespace ini::laws
