// Decides, exactly and per model, whether a joint monadic value over pairs
// factorizes as the product of its marginals. This is the executable
// counterpart of the tensor-soundness theorems: every closed, well-typed
// program at a separating-pair type must come out as a product.

#ifndef INI_ORACLE_HPP
#define INI_ORACLE_HPP

#include <optional>
#include <string>
#include <vector>

#include "ini/ast.hpp"
#include "ini/models.hpp"

namespace ini::oracle {

using sem::Model;
using sem::MonadicValue;
using sem::Rat;
using sem::Value;

struct Counterexample {
    Value a, b;
    Rat joint_weight;    // dist only
    Rat product_weight;  // dist only
};

struct FactorizationReport {
    bool is_product = false;
    MonadicValue marginal1, marginal2;
    std::optional<Counterexample> counterexample;  // dist / pset witness

    // Name-model evidence, reported separately: whether the two payload
    // components use disjoint name sets, and whether the joint equals the
    // recombination of its marginals.
    bool name_disjoint = true;
    bool recombination_equal = true;
    std::vector<int> name_overlap;

    std::string to_string(const Model& m) const;
};

/// Exact marginals of a joint over pairs. Throws NotAPairSupport if any
/// support value is not a pair.
std::pair<MonadicValue, MonadicValue> marginals(const Model& m, const MonadicValue& joint);

FactorizationReport check_factorization(const Model& m, const MonadicValue& joint);

/// Typechecks nothing: callers are expected to have checked `t` closed at
/// a separating-pair type. Evaluates via the one-level semantics and runs
/// the factorization check. Components must be observation-friendly (no
/// arrows); otherwise UnsupportedType is thrown.
FactorizationReport check_tensor_soundness_ini(const Model& m, const ast::TermPtr& t);

/// Two-level check at M t1 (x) M t2: evaluates the pair componentwise and
/// compares the erased joint with the product of the components.
FactorizationReport check_tensor_soundness_i(const Model& m, const ast::TermPtr& t);

/// True when a type is equality-observable (contains no arrow).
bool observable_type(const ast::TypePtr& t);

}  // namespace ini::oracle

#endif
