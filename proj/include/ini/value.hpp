// Semantic values shared by all evaluators. Values are immutable trees;
// copies are shared-pointer shallow and safe to use across threads.

#ifndef INI_VALUE_HPP
#define INI_VALUE_HPP

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "ini/ast.hpp"

namespace ini::sem {

struct MonadicValue;  // defined in models.hpp

struct EvalError : std::runtime_error {
    enum class Kind {
        PrimUnknown,
        IncomparableValue,
        NotAPairSupport,
        UnsupportedType,
        Internal,
    };
    Kind kind;
    EvalError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct ValueNode;

class Value {
  public:
    Value() = default;

    static Value boolean(bool b);
    static Value name_index(int i);
    static Value pair(Value a, Value b);
    static Value tag(int i, Value v);
    static Value closure(std::map<std::string, Value> env, std::string param, ast::TermPtr body,
                         ast::Layer layer);
    static Value monadic(MonadicValue mv);

    enum class Kind { Bool, Name, Pair, Tag, Clos, Mon };

    Kind kind() const;
    bool as_bool() const;
    int as_name() const;
    const Value& first() const;   // Pair
    const Value& second() const;  // Pair
    int tag_index() const;        // Tag
    const Value& tagged() const;  // Tag
    const MonadicValue& mon() const;

    // Closure pieces.
    const std::map<std::string, Value>& clos_env() const;
    const std::string& clos_param() const;
    const ast::TermPtr& clos_body() const;
    ast::Layer clos_layer() const;

    bool valid() const { return node_ != nullptr; }

  private:
    explicit Value(std::shared_ptr<const ValueNode> n) : node_(std::move(n)) {}
    std::shared_ptr<const ValueNode> node_;
};

using Env = std::map<std::string, Value>;

/// Total order on first-order values (Bool < Name < Pair < Tag), used for
/// canonical map/set keys. Throws EvalError::IncomparableValue on closures
/// or monadic payloads.
int value_cmp(const Value& a, const Value& b);

inline bool operator<(const Value& a, const Value& b) { return value_cmp(a, b) < 0; }
inline bool operator==(const Value& a, const Value& b) { return value_cmp(a, b) == 0; }

/// First-order printer: tt, ff, n0, (a,b), inl v, inr v.
std::string value_to_string(const Value& v);

}  // namespace ini::sem

#endif
