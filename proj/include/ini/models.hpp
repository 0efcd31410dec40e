// The pluggable commutative-effect models: finite distributions over exact
// rationals, finite powersets, and name generation. Each exposes the monad
// operations (unit/bind/pairing) plus exact value equality.
//
// All arithmetic is exact; there is no floating point anywhere in the
// semantics. Distribution weights are arbitrary-precision rationals, kept
// canonical (gcd 1, positive denominator) by the underlying representation.

#ifndef INI_MODELS_HPP
#define INI_MODELS_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ini/value.hpp"

namespace ini::sem {

using Rat = boost::multiprecision::cpp_rational;

/// "p/q", or just "p" when the denominator is 1.
std::string rat_to_string(const Rat& r);

enum class ModelId { Dist, PSet, Name };

const char* model_name(ModelId id);
std::optional<ModelId> model_from_name(const std::string& s);

/// Finite distribution: support values map to strictly positive weights
/// that sum to exactly 1. Keys are first-order values in canonical order.
struct Dist {
    std::map<Value, Rat> weights;
};

/// Finite, deduplicated set of first-order values.
struct PSet {
    std::set<Value> elems;
};

/// One finished run of a name-generation computation: `count` names were
/// generated and `payload` may mention them by global index.
struct NameRun {
    int count = 0;
    Value payload;
};

/// A name-generation computation. `run(base)` executes it in a world that
/// already contains `base` names; the names it generates are the global
/// indices base, base+1, ..., base+count-1. Uniform in `base` by
/// construction, so a single representative determines the computation.
struct NameComp {
    std::shared_ptr<const std::function<NameRun(int)>> run;

    NameRun operator()(int base) const { return (*run)(base); }
};

NameComp make_name_comp(std::function<NameRun(int)> f);

/// Canonical observable form of a closed name computation: names renumbered
/// 0,1,... in first-use order of a left-to-right payload traversal. Names
/// that were generated but do not occur in the payload keep contributing to
/// `count` but have no identity of their own.
struct NameVal {
    int count = 0;
    Value payload;
};

NameVal canonicalize_name(const NameRun& r);

/// The indices occurring in NameV leaves of a value.
std::set<int> name_support(const Value& v);

struct MonadicValue {
    ModelId model;
    // Exactly one is populated, matching `model`.
    Dist dist;
    PSet pset;
    NameComp name;
};

/// A commutative-effect model instance. Stateless; methods are pure.
class Model {
  public:
    explicit Model(ModelId id) : id_(id) {}

    ModelId id() const { return id_; }

    MonadicValue unit(const Value& v) const;

    MonadicValue bind(const MonadicValue& mv,
                      const std::function<MonadicValue(const Value&)>& f) const;

    /// bind(m1, a. bind(m2, b. unit (a, b))), provided directly.
    MonadicValue pair_product(const MonadicValue& m1, const MonadicValue& m2) const;

    /// Exact equality of monadic values: equal weight maps, equal sets, or
    /// equal canonical name forms. Payloads must be closure-free.
    bool value_eq(const MonadicValue& a, const MonadicValue& b) const;

    /// Effectful nullary primitives: coin (dist), amb (pset), fresh (name).
    /// Throws EvalError::PrimUnknown if this model does not provide `op`.
    MonadicValue effectful_prim(const std::string& op) const;

    /// Runs a name computation at world 0 and canonicalizes.
    NameVal observe_name(const MonadicValue& mv) const;

    /// Lifts a canonical name value back into a computation.
    static MonadicValue name_value_as_comp(const NameVal& v);

    std::string to_string(const MonadicValue& mv) const;

  private:
    ModelId id_;
};

/// Deterministic primitives shared by every model: not, and, or, xor, eqb
/// on booleans (binary ones take a pair), eqn on a pair of names.
Value apply_pure_prim(const std::string& op, const Value& arg);

/// Structural equality that descends into monadic payloads using the
/// model's exact equality. Throws on closures.
bool sem_value_eq(const Model& m, const Value& a, const Value& b);

std::string sem_value_to_string(const Model& m, const Value& v);

}  // namespace ini::sem

#endif
