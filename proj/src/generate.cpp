#include "ini/generate.hpp"

#include <functional>

#include "ini/typecheck.hpp"

namespace ini::gen {

using ast::Layer;
using ast::Term;
using ast::TermPtr;
using ast::Type;
using ast::TypeKind;
using ast::TypePtr;
using sem::ModelId;

namespace {

constexpr int kUnreachable = 1000;

}  // namespace

int min_depth(const TypePtr& t, Layer layer, ModelId model) {
    switch (t->kind) {
        case TypeKind::Bool:
            return 1;
        case TypeKind::Name:
            // Only the name model can conjure a name out of nothing.
            return (layer == Layer::NI && model == ModelId::Name) ? 1 : kUnreachable;
        case TypeKind::Prod:
        case TypeKind::Tensor:
            return 1 + std::max(min_depth(t->a, layer, model), min_depth(t->b, layer, model));
        case TypeKind::Sum:
        case TypeKind::Oplus:
            return 1 + std::min(min_depth(t->a, layer, model), min_depth(t->b, layer, model));
        case TypeKind::Lolli:
            return 1 + min_depth(t->b, layer, model);
        case TypeKind::Modal:
            // A nullary sample whose body builds the payload.
            return 1 + min_depth(t->a, Layer::NI, model);
    }
    return kUnreachable;
}

namespace {

struct Gen {
    Rng& rng;
    const GenConfig& cfg;
    ModelId model;
    int name_counter = 0;

    struct Entry {
        std::string name;
        TypePtr type;
        bool consumed = false;
    };
    std::vector<Entry> entries;

    std::string fresh() { return "v" + std::to_string(name_counter++); }

    int md(const TypePtr& t, Layer l) const { return min_depth(t, l, model); }

    // ---- random types. The returned type's min_depth never exceeds the
    // ---- structural depth budget (2 is the floor for independent types).

    TypePtr rnd_type_ini(int depth, bool observable) {
        if (depth <= 1) return Type::boolean();
        int n = rng.below(observable ? 5 : 6);
        switch (n) {
            case 0:
            case 1:
                return Type::boolean();
            case 2:
                if (cfg.forbid_sharing)
                    return Type::tensor(rnd_type_ini(depth - 1, observable),
                                        rnd_type_ini(depth - 1, observable));
                return Type::prod(rnd_type_ini(depth - 1, observable),
                                  rnd_type_ini(depth - 1, observable));
            case 3:
            case 4:
                return Type::tensor(rnd_type_ini(depth - 1, observable),
                                    rnd_type_ini(depth - 1, observable));
            default:
                return Type::lolli(rnd_type_ini(depth - 1, observable),
                                   rnd_type_ini(depth - 1, observable));
        }
    }

    TypePtr rnd_type_ni(int depth) {
        const bool names = model == ModelId::Name;
        if (depth <= 1) return names && rng.chance(1, 3) ? Type::name() : Type::boolean();
        switch (rng.below(names ? 5 : 4)) {
            case 0:
                return Type::boolean();
            case 1:
                return Type::prod(rnd_type_ni(depth - 1), rnd_type_ni(depth - 1));
            case 2:
                return Type::sum(rnd_type_ni(depth - 1), rnd_type_ni(depth - 1));
            case 3:
                return names ? Type::name() : Type::boolean();
            default:
                return Type::name();
        }
    }

    TypePtr rnd_type_i(int depth, bool observable) {
        if (depth <= 2) return Type::modal(rnd_type_ni(depth - 1));
        switch (rng.below(observable ? 4 : 5)) {
            case 0:
            case 3:
                return Type::modal(rnd_type_ni(depth - 1));
            case 1:
                return Type::tensor(rnd_type_i(depth - 1, observable),
                                    rnd_type_i(depth - 1, observable));
            case 2:
                return Type::oplus(rnd_type_i(depth - 1, observable),
                                   rnd_type_i(depth - 1, observable));
            default:
                return Type::lolli(rnd_type_i(depth - 1, observable),
                                   rnd_type_i(depth - 1, observable));
        }
    }

    // Auxiliary types for binders and subjects, capped so the caller's
    // depth budget always accommodates them.
    TypePtr small_ini_type(int budget) {
        int depth = std::max(1, std::min(budget, 1 + rng.below(2)));
        return rnd_type_ini(depth, true);
    }

    TypePtr small_ni_type(int budget) {
        int depth = std::max(1, std::min(budget, 1 + rng.below(2)));
        return rnd_type_ni(depth);
    }

    TypePtr small_i_type(int budget) {
        int depth = std::max(2, std::min(budget, 2 + rng.below(2)));
        return rnd_type_i(depth, true);
    }

    // ---- weighted choice ----------------------------------------------------

    using Builder = std::function<TermPtr()>;

    struct Option {
        int weight;
        Builder build;
    };

    TermPtr pick(std::vector<Option>& options, const TypePtr& type) {
        if (options.empty())
            throw GenExhausted("no inhabitant of " + ast::type_to_string(type) +
                               " at this depth");
        int total = 0;
        for (const auto& o : options) total += o.weight;
        int roll = rng.below(total);
        for (const auto& o : options) {
            roll -= o.weight;
            if (roll < 0) return o.build();
        }
        return options.back().build();
    }

    // Variables of the wanted type. Affine layers consume; the sharing
    // layer does not.
    void var_options(std::vector<Option>& out, const TypePtr& type, Layer layer) {
        for (size_t i = 0; i < entries.size(); ++i) {
            if (!ast::type_eq(entries[i].type, type)) continue;
            if (layer != Layer::NI && entries[i].consumed) continue;
            bool shadowed = false;
            for (size_t j = i + 1; j < entries.size(); ++j)
                if (entries[j].name == entries[i].name) shadowed = true;
            if (shadowed) continue;
            out.push_back(Option{cfg.weight_var, [this, i, layer]() {
                                     if (layer != Layer::NI) entries[i].consumed = true;
                                     return Term::var(entries[i].name, layer);
                                 }});
        }
    }

    TermPtr gen(const TypePtr& type, Layer layer, int depth) {
        switch (layer) {
            case Layer::Ini: return gen_ini(type, depth);
            case Layer::NI: return gen_ni(type, depth);
            case Layer::I: return gen_i(type, depth);
        }
        throw GenExhausted("bad layer");
    }

    // ---- one-level language -------------------------------------------------

    TermPtr gen_ini(const TypePtr& type, int depth) {
        std::vector<Option> opts;
        var_options(opts, type, Layer::Ini);
        const int need = md(type, Layer::Ini);

        if (type->kind == TypeKind::Bool) {
            opts.push_back(Option{cfg.weight_leaf, [this]() {
                                      return Term::constant(rng.below(2) == 0, Layer::Ini);
                                  }});
            if (model == ModelId::Dist)
                opts.push_back(Option{cfg.weight_leaf + 2,
                                      []() { return Term::prim("coin", {}, Layer::Ini); }});
        }
        if (type->kind == TypeKind::Prod &&
            depth > std::max(md(type->a, Layer::Ini), md(type->b, Layer::Ini))) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                // Additive pair: both components see the same context.
                auto before = entries;
                TermPtr a = gen_ini(type->a, depth - 1);
                auto after1 = entries;
                entries = before;
                TermPtr b = gen_ini(type->b, depth - 1);
                for (size_t i = 0; i < entries.size(); ++i)
                    entries[i].consumed = entries[i].consumed || after1[i].consumed;
                return Term::pair_shared(a, b, Layer::Ini);
            }});
        }
        if (type->kind == TypeKind::Tensor &&
            depth > std::max(md(type->a, Layer::Ini), md(type->b, Layer::Ini))) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                TermPtr a = gen_ini(type->a, depth - 1);
                TermPtr b = gen_ini(type->b, depth - 1);
                return Term::pair_tensor(a, b, Layer::Ini);
            }});
        }
        if (type->kind == TypeKind::Lolli && depth > md(type->b, Layer::Ini) &&
            !cfg.forbid_arrows) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                std::string x = fresh();
                entries.push_back(Entry{x, type->a});
                TermPtr body = gen_ini(type->b, depth - 1);
                entries.pop_back();
                return Term::lam(x, type->a, body, Layer::Ini);
            }});
        }
        if (depth >= 3 && depth > need) {
            // let x = s in t, multiplicative.
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                TypePtr a = small_ini_type(depth - 1);
                TermPtr s = gen_ini(a, depth - 1);
                std::string x = fresh();
                entries.push_back(Entry{x, a});
                TermPtr body = gen_ini(type, depth - 1);
                entries.pop_back();
                return Term::let(x, s, body, Layer::Ini);
            }});
            // let x (x) y = s in t.
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                TypePtr a = small_ini_type(depth - 2);
                TypePtr b = small_ini_type(depth - 2);
                TermPtr s = gen_ini(Type::tensor(a, b), depth - 1);
                std::string x = fresh(), y = fresh();
                entries.push_back(Entry{x, a});
                entries.push_back(Entry{y, b});
                TermPtr body = gen_ini(type, depth - 1);
                entries.pop_back();
                entries.pop_back();
                return Term::let_tensor(x, y, s, body, Layer::Ini);
            }});
            if (!cfg.forbid_sharing && depth > need + 1) {
                opts.push_back(Option{cfg.weight_leaf, [this, type, depth, need]() {
                    TypePtr other = small_ini_type(depth - 1 - need);
                    bool left = rng.below(2) == 0;
                    TypePtr pt = left ? Type::prod(type, other) : Type::prod(other, type);
                    TermPtr p = gen_ini(pt, depth - 1);
                    return Term::proj(left ? 1 : 2, p, Layer::Ini);
                }});
            }
            if (!cfg.forbid_arrows) {
                // A beta redex: the only application with a closed head.
                opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                    TypePtr a = small_ini_type(depth - 1);
                    std::string x = fresh();
                    entries.push_back(Entry{x, a});
                    TermPtr body = gen_ini(type, depth - 1);
                    entries.pop_back();
                    TermPtr fn = Term::lam(x, a, body, Layer::Ini);
                    TermPtr arg = gen_ini(a, depth - 1);
                    return Term::app(fn, arg, Layer::Ini);
                }});
            }
        }
        return pick(opts, type);
    }

    // ---- sharing layer --------------------------------------------------------

    TermPtr gen_ni(const TypePtr& type, int depth) {
        std::vector<Option> opts;
        var_options(opts, type, Layer::NI);
        const int need = md(type, Layer::NI);

        if (type->kind == TypeKind::Bool) {
            opts.push_back(Option{cfg.weight_leaf, [this]() {
                                      return Term::constant(rng.below(2) == 0, Layer::NI);
                                  }});
            if (model == ModelId::Dist)
                opts.push_back(Option{cfg.weight_leaf + 2,
                                      []() { return Term::prim("coin", {}, Layer::NI); }});
            if (model == ModelId::PSet)
                opts.push_back(Option{cfg.weight_leaf + 2,
                                      []() { return Term::prim("amb", {}, Layer::NI); }});
        }
        if (type->kind == TypeKind::Name && model == ModelId::Name) {
            opts.push_back(
                Option{cfg.weight_leaf + 2, []() { return Term::prim("fresh", {}, Layer::NI); }});
        }
        if (type->kind == TypeKind::Bool && depth >= 2) {
            opts.push_back(Option{cfg.weight_leaf, [this, depth]() {
                TermPtr arg = gen_ni(Type::boolean(), depth - 1);
                return Term::prim("not", {arg}, Layer::NI);
            }});
        }
        if (type->kind == TypeKind::Bool && depth >= 3) {
            opts.push_back(Option{cfg.weight_leaf, [this, depth]() {
                static const char* ops[] = {"and", "or", "xor", "eqb"};
                std::string op = ops[rng.below(4)];
                TermPtr arg = gen_ni(Type::prod(Type::boolean(), Type::boolean()), depth - 1);
                return Term::prim(op, {arg}, Layer::NI);
            }});
            if (model == ModelId::Name)
                opts.push_back(Option{cfg.weight_leaf, [this, depth]() {
                    TermPtr arg = gen_ni(Type::prod(Type::name(), Type::name()), depth - 1);
                    return Term::prim("eqn", {arg}, Layer::NI);
                }});
        }
        if (type->kind == TypeKind::Prod &&
            depth > std::max(md(type->a, Layer::NI), md(type->b, Layer::NI))) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                TermPtr a = gen_ni(type->a, depth - 1);
                TermPtr b = gen_ni(type->b, depth - 1);
                return Term::pair_shared(a, b, Layer::NI);
            }});
        }
        if (type->kind == TypeKind::Sum) {
            if (depth > md(type->a, Layer::NI))
                opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                    return Term::inj(1, gen_ni(type->a, depth - 1), type->b, Layer::NI);
                }});
            if (depth > md(type->b, Layer::NI))
                opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                    return Term::inj(2, gen_ni(type->b, depth - 1), type->a, Layer::NI);
                }});
        }
        if (depth >= 3 && depth > need) {
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                TypePtr a = small_ni_type(depth - 1);
                TermPtr s = gen_ni(a, depth - 1);
                std::string x = fresh();
                entries.push_back(Entry{x, a});
                TermPtr body = gen_ni(type, depth - 1);
                entries.pop_back();
                return Term::let(x, s, body, Layer::NI);
            }});
            if (depth > need + 1) {
                opts.push_back(Option{cfg.weight_leaf, [this, type, depth, need]() {
                    TypePtr other = small_ni_type(depth - 1 - need);
                    bool left = rng.below(2) == 0;
                    TypePtr pt = left ? Type::prod(type, other) : Type::prod(other, type);
                    TermPtr p = gen_ni(pt, depth - 1);
                    return Term::proj(left ? 1 : 2, p, Layer::NI);
                }});
            }
            // Case over a sum or a boolean.
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                bool over_bool = rng.below(3) == 0;
                TypePtr a, b;
                TermPtr scrut;
                if (over_bool) {
                    a = b = Type::boolean();
                    scrut = gen_ni(Type::boolean(), depth - 1);
                } else {
                    a = small_ni_type(depth - 2);
                    b = small_ni_type(depth - 2);
                    scrut = gen_ni(Type::sum(a, b), depth - 1);
                }
                std::string x = fresh(), y = fresh();
                entries.push_back(Entry{x, a});
                TermPtr u1 = gen_ni(type, depth - 1);
                entries.pop_back();
                entries.push_back(Entry{y, b});
                TermPtr u2 = gen_ni(type, depth - 1);
                entries.pop_back();
                return Term::case_of(scrut, x, u1, y, u2, Layer::NI);
            }});
        }
        return pick(opts, type);
    }

    // ---- independent layer ------------------------------------------------------

    TermPtr gen_i(const TypePtr& type, int depth) {
        std::vector<Option> opts;
        var_options(opts, type, Layer::I);
        const int need = md(type, Layer::I);

        if (type->kind == TypeKind::Modal && depth > md(type->a, Layer::NI)) {
            opts.push_back(Option{cfg.weight_binder + 2, [this, type, depth]() {
                // sample t1, ..., tn as x1, ..., xn in body; n in 0..2.
                int want = rng.below(3);
                std::vector<TermPtr> bound;
                std::vector<std::string> names;
                std::vector<std::pair<std::string, TypePtr>> binders;
                for (int i = 0; i < want; ++i) {
                    TypePtr sigma = small_ni_type(depth - 2);
                    if (depth - 1 < md(Type::modal(sigma), Layer::I)) continue;
                    TermPtr ti = gen_i(Type::modal(sigma), depth - 1);
                    std::string x = fresh();
                    bound.push_back(ti);
                    names.push_back(x);
                    binders.emplace_back(x, sigma);
                }
                // The body sees exactly the bound names.
                auto saved = std::move(entries);
                entries.clear();
                for (auto& [n, ty] : binders) entries.push_back(Entry{n, ty});
                TermPtr body = gen_ni(type->a, depth - 1);
                entries = std::move(saved);
                return Term::sample(std::move(bound), std::move(names), body, Layer::I);
            }});
        }
        if (type->kind == TypeKind::Tensor &&
            depth > std::max(md(type->a, Layer::I), md(type->b, Layer::I))) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                TermPtr a = gen_i(type->a, depth - 1);
                TermPtr b = gen_i(type->b, depth - 1);
                return Term::pair_tensor(a, b, Layer::I);
            }});
        }
        if (type->kind == TypeKind::Oplus) {
            if (depth > md(type->a, Layer::I))
                opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                    return Term::inj(1, gen_i(type->a, depth - 1), type->b, Layer::I);
                }});
            if (depth > md(type->b, Layer::I))
                opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                    return Term::inj(2, gen_i(type->b, depth - 1), type->a, Layer::I);
                }});
        }
        if (type->kind == TypeKind::Lolli && depth > md(type->b, Layer::I) &&
            !cfg.forbid_arrows) {
            opts.push_back(Option{cfg.weight_intro, [this, type, depth]() {
                std::string x = fresh();
                entries.push_back(Entry{x, type->a});
                TermPtr body = gen_i(type->b, depth - 1);
                entries.pop_back();
                return Term::lam(x, type->a, body, Layer::I);
            }});
        }
        if (depth >= 4 && depth > need) {
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                TypePtr a = small_i_type(depth - 2);
                TypePtr b = small_i_type(depth - 2);
                TermPtr s = gen_i(Type::tensor(a, b), depth - 1);
                std::string x = fresh(), y = fresh();
                entries.push_back(Entry{x, a});
                entries.push_back(Entry{y, b});
                TermPtr body = gen_i(type, depth - 1);
                entries.pop_back();
                entries.pop_back();
                return Term::let_tensor(x, y, s, body, Layer::I);
            }});
            if (!cfg.forbid_arrows) {
                opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                    TypePtr a = small_i_type(depth - 1);
                    std::string x = fresh();
                    entries.push_back(Entry{x, a});
                    TermPtr body = gen_i(type, depth - 1);
                    entries.pop_back();
                    TermPtr fn = Term::lam(x, a, body, Layer::I);
                    TermPtr arg = gen_i(a, depth - 1);
                    return Term::app(fn, arg, Layer::I);
                }});
            }
            // Case over a separating sum; the branches share the residual.
            opts.push_back(Option{cfg.weight_binder, [this, type, depth]() {
                TypePtr a = small_i_type(depth - 2);
                TypePtr b = small_i_type(depth - 2);
                TermPtr scrut = gen_i(Type::oplus(a, b), depth - 1);
                std::string x = fresh(), y = fresh();
                auto before = entries;
                entries.push_back(Entry{x, a});
                TermPtr u1 = gen_i(type, depth - 1);
                entries.pop_back();
                auto after1 = entries;
                entries = before;
                entries.push_back(Entry{y, b});
                TermPtr u2 = gen_i(type, depth - 1);
                entries.pop_back();
                for (size_t i = 0; i < entries.size(); ++i)
                    entries[i].consumed = entries[i].consumed || after1[i].consumed;
                return Term::case_of(scrut, x, u1, y, u2, Layer::I);
            }});
        }
        return pick(opts, type);
    }
};

}  // namespace

TermPtr generate_term(Rng& rng, const GenConfig& cfg, const TypePtr& type, Layer layer,
                      const Scope& scope) {
    if (min_depth(type, layer, cfg.model) > cfg.max_depth)
        throw GenExhausted("type " + ast::type_to_string(type) + " needs depth " +
                           std::to_string(min_depth(type, layer, cfg.model)) + " > max_depth " +
                           std::to_string(cfg.max_depth));
    Gen g{rng, cfg, cfg.model};
    for (const auto& [n, t] : scope) g.entries.push_back(Gen::Entry{n, t});
    return g.gen(type, layer, cfg.max_depth);
}

std::vector<TermPtr> generate_terms(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    std::vector<TermPtr> out;
    out.reserve(cfg.count);
    for (int i = 0; i < cfg.count; ++i) {
        TypePtr target = cfg.target;
        if (!target) {
            Gen g{rng, cfg, cfg.model};
            int d = std::min(cfg.max_depth - 1, 3);
            switch (cfg.layer) {
                case Layer::Ini: target = g.rnd_type_ini(std::max(1, d), true); break;
                case Layer::NI: target = g.rnd_type_ni(std::max(1, d)); break;
                case Layer::I: target = g.rnd_type_i(std::max(2, d), true); break;
            }
        }
        out.push_back(generate_term(rng, cfg, target, cfg.layer));
    }
    return out;
}

TypePtr random_type_ini_observable(Rng& rng, int depth) {
    GenConfig cfg;
    Gen g{rng, cfg, ModelId::Dist};
    return g.rnd_type_ini(depth, true);
}

TypePtr random_type_ni(Rng& rng, int depth, ModelId model) {
    GenConfig cfg;
    Gen g{rng, cfg, model};
    return g.rnd_type_ni(depth);
}

TypePtr random_type_i_observable(Rng& rng, int depth, ModelId model) {
    GenConfig cfg;
    Gen g{rng, cfg, model};
    return g.rnd_type_i(depth, true);
}

}  // namespace ini::gen
