#include "ini/oracle.hpp"

#include <sstream>

#include "ini/eval.hpp"
#include "ini/typecheck.hpp"

namespace ini::oracle {

using sem::EvalError;
using sem::ModelId;
using sem::NameVal;

bool observable_type(const ast::TypePtr& t) {
    if (!t) return false;
    if (t->kind == ast::TypeKind::Lolli) return false;
    bool ok = true;
    if (t->a) ok = ok && observable_type(t->a);
    if (t->b) ok = ok && observable_type(t->b);
    return ok;
}

std::pair<MonadicValue, MonadicValue> marginals(const Model& m, const MonadicValue& joint) {
    switch (m.id()) {
        case ModelId::Dist: {
            MonadicValue m1, m2;
            m1.model = m2.model = ModelId::Dist;
            for (const auto& [v, w] : joint.dist.weights) {
                if (v.kind() != Value::Kind::Pair)
                    throw EvalError(EvalError::Kind::NotAPairSupport,
                                    "marginals of a non-pair support value " +
                                        sem::value_to_string(v));
                auto [i1, f1] = m1.dist.weights.try_emplace(v.first(), w);
                if (!f1) i1->second += w;
                auto [i2, f2] = m2.dist.weights.try_emplace(v.second(), w);
                if (!f2) i2->second += w;
            }
            return {std::move(m1), std::move(m2)};
        }
        case ModelId::PSet: {
            MonadicValue m1, m2;
            m1.model = m2.model = ModelId::PSet;
            for (const auto& v : joint.pset.elems) {
                if (v.kind() != Value::Kind::Pair)
                    throw EvalError(EvalError::Kind::NotAPairSupport,
                                    "marginals of a non-pair support value " +
                                        sem::value_to_string(v));
                m1.pset.elems.insert(v.first());
                m2.pset.elems.insert(v.second());
            }
            return {std::move(m1), std::move(m2)};
        }
        case ModelId::Name: {
            NameVal joint_val = m.observe_name(joint);
            if (joint_val.payload.kind() != Value::Kind::Pair)
                throw EvalError(EvalError::Kind::NotAPairSupport,
                                "marginals of a non-pair name payload");
            // Restrict each component to its own names and re-canonicalize.
            NameVal v1 = sem::canonicalize_name(
                sem::NameRun{(int)sem::name_support(joint_val.payload.first()).size(),
                             joint_val.payload.first()});
            NameVal v2 = sem::canonicalize_name(
                sem::NameRun{(int)sem::name_support(joint_val.payload.second()).size(),
                             joint_val.payload.second()});
            return {Model::name_value_as_comp(v1), Model::name_value_as_comp(v2)};
        }
    }
    throw EvalError(EvalError::Kind::Internal, "unreachable");
}

FactorizationReport check_factorization(const Model& m, const MonadicValue& joint) {
    FactorizationReport rep;
    auto [m1, m2] = marginals(m, joint);
    rep.marginal1 = m1;
    rep.marginal2 = m2;
    switch (m.id()) {
        case ModelId::Dist: {
            rep.is_product = true;
            // Prefer a missing-cell witness (joint weight zero against a
            // positive product weight); it is the sharpest evidence.
            std::optional<Counterexample> fallback;
            for (const auto& [a, wa] : m1.dist.weights) {
                for (const auto& [b, wb] : m2.dist.weights) {
                    Rat prod = wa * wb;
                    Rat jw(0);
                    auto it = joint.dist.weights.find(Value::pair(a, b));
                    if (it != joint.dist.weights.end()) jw = it->second;
                    if (jw != prod) {
                        rep.is_product = false;
                        if (jw == 0) {
                            rep.counterexample = Counterexample{a, b, jw, prod};
                            return rep;
                        }
                        if (!fallback) fallback = Counterexample{a, b, jw, prod};
                    }
                }
            }
            rep.counterexample = fallback;
            return rep;
        }
        case ModelId::PSet: {
            rep.is_product = true;
            // S = S1 x S2, given S1/S2 are the projections of S: only the
            // inclusion S1 x S2 <= S can fail.
            for (const auto& a : m1.pset.elems) {
                for (const auto& b : m2.pset.elems) {
                    if (!joint.pset.elems.count(Value::pair(a, b))) {
                        rep.is_product = false;
                        rep.counterexample = Counterexample{a, b, Rat(0), Rat(0)};
                        return rep;
                    }
                }
            }
            return rep;
        }
        case ModelId::Name: {
            NameVal joint_val = m.observe_name(joint);
            auto s1 = sem::name_support(joint_val.payload.first());
            auto s2 = sem::name_support(joint_val.payload.second());
            for (int n : s1)
                if (s2.count(n)) rep.name_overlap.push_back(n);
            rep.name_disjoint = rep.name_overlap.empty();
            MonadicValue recombined = m.pair_product(m1, m2);
            // The marginals drop generated-but-unused names, so compare
            // payloads (up to renaming) rather than total counts.
            NameVal r = m.observe_name(recombined);
            rep.recombination_equal = sem::value_cmp(r.payload, joint_val.payload) == 0;
            rep.is_product = rep.name_disjoint && rep.recombination_equal;
            return rep;
        }
    }
    throw EvalError(EvalError::Kind::Internal, "unreachable");
}

FactorizationReport check_tensor_soundness_ini(const Model& m, const ast::TermPtr& t) {
    types::UsageContext ctx;
    auto typing = types::check_ini(ctx, t, nullptr, m.id());
    if (!typing.ok())
        throw EvalError(EvalError::Kind::Internal, "soundness check on an ill-typed term");
    if (typing.type->kind != ast::TypeKind::Tensor || !observable_type(typing.type))
        throw EvalError(EvalError::Kind::UnsupportedType,
                        "soundness check needs an observable separating-pair type, got " +
                            ast::type_to_string(typing.type));
    MonadicValue joint = sem::eval_ini(m, {}, t);
    return check_factorization(m, joint);
}

FactorizationReport check_tensor_soundness_i(const Model& m, const ast::TermPtr& t) {
    Value pair = sem::eval_i(m, {}, t);
    if (pair.kind() != Value::Kind::Pair || pair.first().kind() != Value::Kind::Mon ||
        pair.second().kind() != Value::Kind::Mon)
        throw EvalError(EvalError::Kind::UnsupportedType,
                        "two-level soundness check needs a pair of boxed computations");
    MonadicValue mu1 = pair.first().mon();
    MonadicValue mu2 = pair.second().mon();
    MonadicValue erased = sem::eval_erased(m, {}, t);

    FactorizationReport rep;
    rep.marginal1 = mu1;
    rep.marginal2 = mu2;
    MonadicValue product = m.pair_product(mu1, mu2);
    rep.is_product = m.value_eq(erased, product);

    if (m.id() == ModelId::Name) {
        NameVal joint_val = m.observe_name(erased);
        if (joint_val.payload.kind() == Value::Kind::Pair) {
            auto s1 = sem::name_support(joint_val.payload.first());
            auto s2 = sem::name_support(joint_val.payload.second());
            for (int n : s1)
                if (s2.count(n)) rep.name_overlap.push_back(n);
            rep.name_disjoint = rep.name_overlap.empty();
        }
        rep.recombination_equal = rep.is_product;
        rep.is_product = rep.is_product && rep.name_disjoint;
    } else if (!rep.is_product) {
        // Dig out a concrete witness for the report.
        if (m.id() == ModelId::Dist) {
            for (const auto& [v, w] : product.dist.weights) {
                Rat jw(0);
                auto it = erased.dist.weights.find(v);
                if (it != erased.dist.weights.end()) jw = it->second;
                if (jw != w) {
                    rep.counterexample = Counterexample{v.first(), v.second(), jw, w};
                    break;
                }
            }
        }
    }
    return rep;
}

std::string FactorizationReport::to_string(const Model& m) const {
    std::ostringstream os;
    os << (is_product ? "product: yes" : "product: NO") << "\n";
    os << "marginal 1: " << m.to_string(marginal1) << "\n";
    os << "marginal 2: " << m.to_string(marginal2) << "\n";
    if (counterexample) {
        os << "counterexample: value (" << sem::value_to_string(counterexample->a) << ","
           << sem::value_to_string(counterexample->b) << ")";
        if (m.id() == sem::ModelId::Dist)
            os << " has joint weight " << sem::rat_to_string(counterexample->joint_weight)
               << " but product weight " << sem::rat_to_string(counterexample->product_weight);
        else
            os << " is missing from the joint";
        os << "\n";
    }
    if (m.id() == sem::ModelId::Name) {
        os << "name supports disjoint: " << (name_disjoint ? "yes" : "NO");
        if (!name_overlap.empty()) {
            os << " (overlap:";
            for (int n : name_overlap) os << " n" << n;
            os << ")";
        }
        os << "\n";
        os << "joint equals recombination: " << (recombination_equal ? "yes" : "NO") << "\n";
    }
    return os.str();
}

}  // namespace ini::oracle
