#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "ini/models.hpp"

using namespace ini::sem;

namespace {

Value tt() { return Value::boolean(true); }
Value ff() { return Value::boolean(false); }

Model dist() { return Model(ModelId::Dist); }
Model pset() { return Model(ModelId::PSet); }
Model name() { return Model(ModelId::Name); }

MonadicValue fair(const Model& m) { return m.effectful_prim("coin"); }

// Random first-order values and monadic values for the law properties.
Value rnd_value(uint64_t& s, int depth) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    int k = (int)((s >> 33) % (depth > 1 ? 4 : 2));
    switch (k) {
        case 0: return Value::boolean((s >> 7) & 1);
        case 1: return Value::boolean(!((s >> 8) & 1));
        case 2: return Value::pair(rnd_value(s, depth - 1), rnd_value(s, depth - 1));
        default: return Value::tag((int)((s >> 9) % 2) + 1, rnd_value(s, depth - 1));
    }
}

MonadicValue rnd_monadic(const Model& m, uint64_t& s, int depth) {
    switch (m.id()) {
        case ModelId::Dist: {
            // A random dyadic distribution over a few values.
            MonadicValue out;
            out.model = ModelId::Dist;
            int n = 1 + (int)((s >> 11) % 3);
            Rat left(1);
            for (int i = 0; i < n; ++i) {
                Rat w = i + 1 == n ? left : left / 2;
                auto [it, fresh] = out.dist.weights.try_emplace(rnd_value(s, depth), w);
                if (!fresh) it->second += w;
                left -= w;
            }
            return out;
        }
        case ModelId::PSet: {
            MonadicValue out;
            out.model = ModelId::PSet;
            int n = 1 + (int)((s >> 13) % 3);
            for (int i = 0; i < n; ++i) out.pset.elems.insert(rnd_value(s, depth));
            return out;
        }
        case ModelId::Name: {
            // fresh-seeded computations with value payloads.
            MonadicValue f = m.effectful_prim("fresh");
            Value extra = rnd_value(s, depth);
            return m.bind(f, [extra, m](const Value& n) {
                bool use_name = extra.kind() == Value::Kind::Bool && extra.as_bool();
                Model self(ModelId::Name);
                return self.unit(use_name ? Value::pair(n, extra) : extra);
            });
        }
    }
    return m.unit(tt());
}

}  // namespace

TEST_CASE("unit per model") {
    CHECK(dist().to_string(dist().unit(tt())) == "{tt: 1}");
    CHECK(pset().to_string(pset().unit(tt())) == "{tt}");
    auto nv = name().observe_name(name().unit(Value::pair(tt(), ff())));
    CHECK(nv.count == 0);
    CHECK(value_to_string(nv.payload) == "(tt,ff)");
}

TEST_CASE("effectful primitives") {
    CHECK(dist().to_string(fair(dist())) == "{ff: 1/2, tt: 1/2}");
    CHECK(pset().to_string(pset().effectful_prim("amb")) == "{ff, tt}");
    auto fr = name().observe_name(name().effectful_prim("fresh"));
    CHECK(fr.count == 1);
    CHECK(value_to_string(fr.payload) == "n0");
    CHECK_THROWS_AS(pset().effectful_prim("coin"), EvalError);
    CHECK_THROWS_AS(dist().effectful_prim("fresh"), EvalError);
}

TEST_CASE("bind on distributions") {
    Model m = dist();
    // Right unit.
    auto r = m.bind(fair(m), [&](const Value& v) { return m.unit(v); });
    CHECK(m.value_eq(r, fair(m)));
    // The correlated pair from flipping once and duplicating.
    auto dup = m.bind(fair(m), [&](const Value& v) { return m.unit(Value::pair(v, v)); });
    CHECK(m.to_string(dup) == "{(ff,ff): 1/2, (tt,tt): 1/2}");
}

TEST_CASE("bind on powersets") {
    Model m = pset();
    auto amb = m.effectful_prim("amb");
    auto r = m.bind(amb, [&](const Value& v) {
        MonadicValue out;
        out.model = ModelId::PSet;
        out.pset.elems.insert(v);
        out.pset.elems.insert(apply_pure_prim("not", v));
        return out;
    });
    CHECK(m.to_string(r) == "{ff, tt}");
}

TEST_CASE("bind on name computations offsets fresh names") {
    Model m = name();
    auto two = m.bind(m.effectful_prim("fresh"), [m](const Value& a) {
        Model self(ModelId::Name);
        return self.bind(self.effectful_prim("fresh"), [a](const Value& b) {
            Model inner(ModelId::Name);
            return inner.unit(apply_pure_prim("eqn", Value::pair(a, b)));
        });
    });
    auto nv = m.observe_name(two);
    // Two names were generated but none occurs in the payload, so the
    // canonical count is 0 and the comparison is ff.
    CHECK(value_to_string(nv.payload) == "ff");
    CHECK(nv.count == 0);

    auto refl = m.bind(m.effectful_prim("fresh"), [](const Value& a) {
        Model self(ModelId::Name);
        return self.unit(apply_pure_prim("eqn", Value::pair(a, a)));
    });
    CHECK(value_to_string(m.observe_name(refl).payload) == "tt");

    auto pair = m.pair_product(m.effectful_prim("fresh"), m.effectful_prim("fresh"));
    CHECK(value_to_string(m.observe_name(pair).payload) == "(n0,n1)");
    CHECK(m.observe_name(pair).count == 2);
}

TEST_CASE("pair products") {
    Model m = dist();
    auto p = m.pair_product(fair(m), fair(m));
    CHECK(m.to_string(p) == "{(ff,ff): 1/4, (ff,tt): 1/4, (tt,ff): 1/4, (tt,tt): 1/4}");

    Model s = pset();
    auto q = s.pair_product(s.effectful_prim("amb"), s.unit(tt()));
    CHECK(s.to_string(q) == "{(ff,tt), (tt,tt)}");
}

TEST_CASE("value equality is exact") {
    Model m = dist();
    MonadicValue a, b;
    a.model = b.model = ModelId::Dist;
    a.dist.weights.emplace(tt(), Rat(1, 2));
    a.dist.weights.emplace(ff(), Rat(1, 2));
    b.dist.weights.emplace(ff(), Rat(1, 2));
    b.dist.weights.emplace(tt(), Rat(1, 2));
    CHECK(m.value_eq(a, b));  // map ordering is canonical
    b.dist.weights[tt()] = Rat(1, 3);
    b.dist.weights[ff()] = Rat(2, 3);
    CHECK(!m.value_eq(a, b));
}

TEST_CASE("name equality is equality of canonical forms") {
    Model m = name();
    // (n0, n1) and (n1, n0) differ only by an injective renaming.
    auto mk = [&](bool swapped) {
        return m.bind(m.effectful_prim("fresh"), [swapped](const Value& a) {
            Model self(ModelId::Name);
            return self.bind(self.effectful_prim("fresh"), [swapped, a](const Value& b) {
                Model inner(ModelId::Name);
                return inner.unit(swapped ? Value::pair(b, a) : Value::pair(a, b));
            });
        });
    };
    CHECK(m.value_eq(mk(false), mk(true)));

    // Shared vs distinct names are genuinely different.
    auto shared = m.bind(m.effectful_prim("fresh"), [](const Value& a) {
        Model self(ModelId::Name);
        return self.unit(Value::pair(a, a));
    });
    CHECK(!m.value_eq(shared, mk(false)));
}

TEST_CASE("canonicalization is idempotent and matches bijection search") {
    // Brute-force oracle: two runs are equivalent iff some bijection of
    // the payload names makes the payloads equal.
    auto support_vec = [](const Value& v) {
        auto s = name_support(v);
        return std::vector<int>(s.begin(), s.end());
    };
    std::function<Value(const Value&, const std::map<int, int>&)> apply_perm =
        [&](const Value& v, const std::map<int, int>& p) -> Value {
        switch (v.kind()) {
            case Value::Kind::Name: return Value::name_index(p.at(v.as_name()));
            case Value::Kind::Pair:
                return Value::pair(apply_perm(v.first(), p), apply_perm(v.second(), p));
            case Value::Kind::Tag: return Value::tag(v.tag_index(), apply_perm(v.tagged(), p));
            default: return v;
        }
    };
    auto bijection_equiv = [&](const NameRun& a, const NameRun& b) {
        auto sa = support_vec(a.payload), sb = support_vec(b.payload);
        if (sa.size() != sb.size()) return false;
        std::sort(sb.begin(), sb.end());
        do {
            std::map<int, int> p;
            for (size_t i = 0; i < sa.size(); ++i) p[sa[i]] = sb[i];
            if (value_cmp(apply_perm(a.payload, p), b.payload) == 0) return true;
        } while (std::next_permutation(sb.begin(), sb.end()));
        return false;
    };

    uint64_t s = 2024;
    for (int i = 0; i < 50; ++i) {
        // Build payloads over up to 5 names with random shapes.
        int k = 1 + (int)((s >> 5) % 4);
        std::vector<Value> names;
        for (int j = 0; j < k; ++j) names.push_back(Value::name_index(j + (int)(s % 3)));
        Value payload = names[0];
        for (int j = 1; j < k; ++j) {
            s = s * 48271 + 11;
            payload = (s >> 9) % 2 ? Value::pair(payload, names[j])
                                   : Value::pair(names[j], payload);
        }
        NameRun run{k + 2, payload};
        NameVal c1 = canonicalize_name(run);
        NameVal c2 = canonicalize_name(NameRun{c1.count, c1.payload});
        CHECK(c1.count == c2.count);
        CHECK(value_cmp(c1.payload, c2.payload) == 0);

        // Shuffled-name variant stays in the same class.
        std::map<int, int> shift;
        for (int n : support_vec(payload)) shift[n] = 7 - n;
        NameRun shuffled{k + 2, apply_perm(payload, shift)};
        CHECK(bijection_equiv(run, shuffled));
        CHECK(value_cmp(canonicalize_name(run).payload,
                        canonicalize_name(shuffled).payload) == 0);
        s = s * 6364136223846793005ull + 1;
    }
}

TEST_CASE("monad laws hold exactly in all three models") {
    for (ModelId id : {ModelId::Dist, ModelId::PSet, ModelId::Name}) {
        Model m(id);
        uint64_t s = 42 + (int)id;
        for (int i = 0; i < 40; ++i) {
            Value v = rnd_value(s, 2);
            MonadicValue mv = rnd_monadic(m, s, 2);
            auto f = [&m, &s](const Value& x) {
                Model self = m;
                return self.bind(self.unit(x), [self, x](const Value&) {
                    return self.unit(Value::pair(x, x));
                });
            };
            auto g = [&m](const Value& x) {
                Model self = m;
                return self.unit(Value::tag(1, x));
            };
            // Left unit: bind(unit v, f) = f v.
            CHECK(m.value_eq(m.bind(m.unit(v), f), f(v)));
            // Right unit: bind(m, unit) = m.
            CHECK(m.value_eq(m.bind(mv, [&m](const Value& x) { return m.unit(x); }), mv));
            // Associativity.
            auto lhs = m.bind(m.bind(mv, f), g);
            auto rhs = m.bind(mv, [&](const Value& x) { return m.bind(f(x), g); });
            CHECK(m.value_eq(lhs, rhs));
        }
    }
}

TEST_CASE("commutativity: independent binds swap") {
    for (ModelId id : {ModelId::Dist, ModelId::PSet, ModelId::Name}) {
        Model m(id);
        uint64_t s = 77 + (int)id;
        for (int i = 0; i < 30; ++i) {
            MonadicValue a = rnd_monadic(m, s, 2);
            MonadicValue b = rnd_monadic(m, s, 2);
            auto lhs = m.bind(a, [&](const Value& x) {
                return m.bind(b, [&m, x](const Value& y) { return m.unit(Value::pair(x, y)); });
            });
            auto rhs = m.bind(b, [&](const Value& y) {
                return m.bind(a, [&m, y](const Value& x) { return m.unit(Value::pair(x, y)); });
            });
            CHECK(m.value_eq(lhs, rhs));
            // pair_product is the same computation as the nested binds.
            CHECK(m.value_eq(m.pair_product(a, b), lhs));
        }
    }
}

TEST_CASE("distribution weights always sum to one") {
    Model m = dist();
    uint64_t s = 9;
    for (int i = 0; i < 40; ++i) {
        MonadicValue mv = rnd_monadic(m, s, 2);
        MonadicValue chained = m.bind(mv, [&m](const Value& v) {
            return m.bind(m.effectful_prim("coin"),
                          [&m, v](const Value& c) { return m.unit(Value::pair(v, c)); });
        });
        Rat total(0);
        for (const auto& [v, w] : chained.dist.weights) {
            CHECK(w > 0);
            total += w;
        }
        CHECK(total == Rat(1));
    }
}

TEST_CASE("pure primitive table") {
    CHECK(apply_pure_prim("not", tt()).as_bool() == false);
    CHECK(apply_pure_prim("and", Value::pair(tt(), ff())).as_bool() == false);
    CHECK(apply_pure_prim("or", Value::pair(tt(), ff())).as_bool() == true);
    CHECK(apply_pure_prim("xor", Value::pair(tt(), tt())).as_bool() == false);
    CHECK(apply_pure_prim("eqb", Value::pair(ff(), ff())).as_bool() == true);
    CHECK(apply_pure_prim("eqn", Value::pair(Value::name_index(0), Value::name_index(1)))
              .as_bool() == false);
}

TEST_CASE("rationals render as p/q") {
    CHECK(rat_to_string(Rat(1, 2)) == "1/2");
    CHECK(rat_to_string(Rat(2, 4)) == "1/2");  // canonical form
    CHECK(rat_to_string(Rat(1)) == "1");
    CHECK(rat_to_string(Rat(3, 8)) == "3/8");
}

TEST_CASE("comparing closures is an error") {
    Value c = Value::closure({}, "x", nullptr, ini::ast::Layer::Ini);
    CHECK_THROWS_AS((void)value_cmp(c, c), EvalError);
}
