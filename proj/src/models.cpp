#include "ini/models.hpp"

#include <sstream>

namespace ini::sem {

std::string rat_to_string(const Rat& r) {
    std::ostringstream os;
    os << boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) != 1)
        os << "/" << boost::multiprecision::denominator(r);
    return os.str();
}

const char* model_name(ModelId id) {
    switch (id) {
        case ModelId::Dist: return "dist";
        case ModelId::PSet: return "pset";
        case ModelId::Name: return "name";
    }
    return "?";
}

std::optional<ModelId> model_from_name(const std::string& s) {
    if (s == "dist") return ModelId::Dist;
    if (s == "pset") return ModelId::PSet;
    if (s == "name") return ModelId::Name;
    return std::nullopt;
}

NameComp make_name_comp(std::function<NameRun(int)> f) {
    return NameComp{std::make_shared<const std::function<NameRun(int)>>(std::move(f))};
}

// ---------------------------------------------------------------------------
// Name canonicalization
// ---------------------------------------------------------------------------

namespace {

Value renumber(const Value& v, std::map<int, int>& perm) {
    switch (v.kind()) {
        case Value::Kind::Name: {
            auto [it, fresh] = perm.try_emplace(v.as_name(), (int)perm.size());
            return Value::name_index(it->second);
        }
        case Value::Kind::Pair: {
            Value a = renumber(v.first(), perm);
            Value b = renumber(v.second(), perm);
            return Value::pair(std::move(a), std::move(b));
        }
        case Value::Kind::Tag:
            return Value::tag(v.tag_index(), renumber(v.tagged(), perm));
        default:
            return v;
    }
}

}  // namespace

NameVal canonicalize_name(const NameRun& r) {
    // Names that were generated but do not occur in the payload are
    // invisible under the quotient by injective renaming; the canonical
    // count is the number of names the payload actually mentions.
    std::map<int, int> perm;
    Value p = renumber(r.payload, perm);
    return NameVal{(int)perm.size(), std::move(p)};
}

std::set<int> name_support(const Value& v) {
    std::set<int> out;
    std::function<void(const Value&)> go = [&](const Value& w) {
        switch (w.kind()) {
            case Value::Kind::Name: out.insert(w.as_name()); break;
            case Value::Kind::Pair:
                go(w.first());
                go(w.second());
                break;
            case Value::Kind::Tag: go(w.tagged()); break;
            default: break;
        }
    };
    go(v);
    return out;
}

// ---------------------------------------------------------------------------
// Monad operations
// ---------------------------------------------------------------------------

MonadicValue Model::unit(const Value& v) const {
    MonadicValue out;
    out.model = id_;
    switch (id_) {
        case ModelId::Dist:
            out.dist.weights.emplace(v, Rat(1));
            break;
        case ModelId::PSet:
            out.pset.elems.insert(v);
            break;
        case ModelId::Name:
            out.name = make_name_comp([v](int) { return NameRun{0, v}; });
            break;
    }
    return out;
}

MonadicValue Model::bind(const MonadicValue& mv,
                         const std::function<MonadicValue(const Value&)>& f) const {
    MonadicValue out;
    out.model = id_;
    switch (id_) {
        case ModelId::Dist: {
            for (const auto& [v, w] : mv.dist.weights) {
                MonadicValue img = f(v);
                for (const auto& [v2, w2] : img.dist.weights) {
                    Rat add = w * w2;
                    auto [it, fresh] = out.dist.weights.try_emplace(v2, add);
                    if (!fresh) it->second += add;
                }
            }
            // Weights are products and sums of positive rationals, so no
            // zero entries can appear; nothing to prune.
            break;
        }
        case ModelId::PSet: {
            for (const auto& v : mv.pset.elems) {
                MonadicValue img = f(v);
                out.pset.elems.insert(img.pset.elems.begin(), img.pset.elems.end());
            }
            break;
        }
        case ModelId::Name: {
            NameComp m = mv.name;
            out.name = make_name_comp([m, f](int base) {
                NameRun r1 = m(base);
                MonadicValue img = f(r1.payload);
                NameRun r2 = img.name(base + r1.count);
                return NameRun{r1.count + r2.count, r2.payload};
            });
            break;
        }
    }
    return out;
}

MonadicValue Model::pair_product(const MonadicValue& m1, const MonadicValue& m2) const {
    MonadicValue out;
    out.model = id_;
    switch (id_) {
        case ModelId::Dist:
            for (const auto& [a, wa] : m1.dist.weights)
                for (const auto& [b, wb] : m2.dist.weights)
                    out.dist.weights.emplace(Value::pair(a, b), wa * wb);
            break;
        case ModelId::PSet:
            for (const auto& a : m1.pset.elems)
                for (const auto& b : m2.pset.elems) out.pset.elems.insert(Value::pair(a, b));
            break;
        case ModelId::Name: {
            // Capture a model copy by value: these lambdas outlive the call.
            const Model self(ModelId::Name);
            return self.bind(m1, [self, m2](const Value& a) {
                return self.bind(m2, [self, a](const Value& b) {
                    return self.unit(Value::pair(a, b));
                });
            });
        }
    }
    return out;
}

bool Model::value_eq(const MonadicValue& a, const MonadicValue& b) const {
    switch (id_) {
        case ModelId::Dist: {
            if (a.dist.weights.size() != b.dist.weights.size()) return false;
            auto ia = a.dist.weights.begin();
            auto ib = b.dist.weights.begin();
            for (; ia != a.dist.weights.end(); ++ia, ++ib) {
                if (value_cmp(ia->first, ib->first) != 0) return false;
                if (ia->second != ib->second) return false;
            }
            return true;
        }
        case ModelId::PSet: {
            if (a.pset.elems.size() != b.pset.elems.size()) return false;
            auto ia = a.pset.elems.begin();
            auto ib = b.pset.elems.begin();
            for (; ia != a.pset.elems.end(); ++ia, ++ib)
                if (value_cmp(*ia, *ib) != 0) return false;
            return true;
        }
        case ModelId::Name: {
            NameVal va = observe_name(a), vb = observe_name(b);
            return va.count == vb.count && value_cmp(va.payload, vb.payload) == 0;
        }
    }
    return false;
}

MonadicValue Model::effectful_prim(const std::string& op) const {
    if (op == "coin" && id_ == ModelId::Dist) {
        MonadicValue out;
        out.model = id_;
        out.dist.weights.emplace(Value::boolean(false), Rat(1, 2));
        out.dist.weights.emplace(Value::boolean(true), Rat(1, 2));
        return out;
    }
    if (op == "amb" && id_ == ModelId::PSet) {
        MonadicValue out;
        out.model = id_;
        out.pset.elems.insert(Value::boolean(false));
        out.pset.elems.insert(Value::boolean(true));
        return out;
    }
    if (op == "fresh" && id_ == ModelId::Name) {
        MonadicValue out;
        out.model = id_;
        out.name = make_name_comp([](int base) { return NameRun{1, Value::name_index(base)}; });
        return out;
    }
    throw EvalError(EvalError::Kind::PrimUnknown, "primitive '" + op +
                                                      "' is not provided by the " +
                                                      model_name(id_) + " model");
}

NameVal Model::observe_name(const MonadicValue& mv) const {
    return canonicalize_name(mv.name(0));
}

MonadicValue Model::name_value_as_comp(const NameVal& v) {
    MonadicValue out;
    out.model = ModelId::Name;
    Value payload = v.payload;
    int count = v.count;
    out.name = make_name_comp([payload, count](int base) {
        std::function<Value(const Value&)> shift = [&](const Value& w) -> Value {
            switch (w.kind()) {
                case Value::Kind::Name: return Value::name_index(w.as_name() + base);
                case Value::Kind::Pair: {
                    Value a = shift(w.first());
                    Value b = shift(w.second());
                    return Value::pair(std::move(a), std::move(b));
                }
                case Value::Kind::Tag: return Value::tag(w.tag_index(), shift(w.tagged()));
                default: return w;
            }
        };
        return NameRun{count, shift(payload)};
    });
    return out;
}

std::string Model::to_string(const MonadicValue& mv) const {
    std::ostringstream os;
    switch (id_) {
        case ModelId::Dist: {
            os << "{";
            bool first = true;
            for (const auto& [v, w] : mv.dist.weights) {
                if (!first) os << ", ";
                first = false;
                os << value_to_string(v) << ": " << rat_to_string(w);
            }
            os << "}";
            break;
        }
        case ModelId::PSet: {
            os << "{";
            bool first = true;
            for (const auto& v : mv.pset.elems) {
                if (!first) os << ", ";
                first = false;
                os << value_to_string(v);
            }
            os << "}";
            break;
        }
        case ModelId::Name: {
            NameVal nv = observe_name(mv);
            os << "{names: " << nv.count << ", value: " << value_to_string(nv.payload) << "}";
            break;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Deterministic primitives
// ---------------------------------------------------------------------------

namespace {

std::pair<bool, bool> two_bools(const std::string& op, const Value& arg) {
    if (arg.kind() != Value::Kind::Pair || arg.first().kind() != Value::Kind::Bool ||
        arg.second().kind() != Value::Kind::Bool)
        throw EvalError(EvalError::Kind::Internal, op + " expects a pair of booleans");
    return {arg.first().as_bool(), arg.second().as_bool()};
}

}  // namespace

Value apply_pure_prim(const std::string& op, const Value& arg) {
    if (op == "not") {
        if (arg.kind() != Value::Kind::Bool)
            throw EvalError(EvalError::Kind::Internal, "not expects a boolean");
        return Value::boolean(!arg.as_bool());
    }
    if (op == "and") {
        auto [a, b] = two_bools(op, arg);
        return Value::boolean(a && b);
    }
    if (op == "or") {
        auto [a, b] = two_bools(op, arg);
        return Value::boolean(a || b);
    }
    if (op == "xor") {
        auto [a, b] = two_bools(op, arg);
        return Value::boolean(a != b);
    }
    if (op == "eqb") {
        auto [a, b] = two_bools(op, arg);
        return Value::boolean(a == b);
    }
    if (op == "eqn") {
        if (arg.kind() != Value::Kind::Pair || arg.first().kind() != Value::Kind::Name ||
            arg.second().kind() != Value::Kind::Name)
            throw EvalError(EvalError::Kind::Internal, "eqn expects a pair of names");
        return Value::boolean(arg.first().as_name() == arg.second().as_name());
    }
    throw EvalError(EvalError::Kind::PrimUnknown, "unknown primitive '" + op + "'");
}

bool sem_value_eq(const Model& m, const Value& a, const Value& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Value::Kind::Bool:
            return a.as_bool() == b.as_bool();
        case Value::Kind::Name:
            return a.as_name() == b.as_name();
        case Value::Kind::Pair:
            return sem_value_eq(m, a.first(), b.first()) && sem_value_eq(m, a.second(), b.second());
        case Value::Kind::Tag:
            return a.tag_index() == b.tag_index() && sem_value_eq(m, a.tagged(), b.tagged());
        case Value::Kind::Mon:
            return m.value_eq(a.mon(), b.mon());
        case Value::Kind::Clos:
            throw EvalError(EvalError::Kind::IncomparableValue,
                            "cannot compare closures for equality");
    }
    return false;
}

std::string sem_value_to_string(const Model& m, const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Pair:
            return "(" + sem_value_to_string(m, v.first()) + "," +
                   sem_value_to_string(m, v.second()) + ")";
        case Value::Kind::Tag:
            return (v.tag_index() == 1 ? "inl " : "inr ") + sem_value_to_string(m, v.tagged());
        case Value::Kind::Mon:
            return m.to_string(v.mon());
        default:
            return value_to_string(v);
    }
}

}  // namespace ini::sem
