#include "ini/value.hpp"

#include <sstream>

#include "ini/models.hpp"

namespace ini::sem {

struct ValueNode {
    Value::Kind kind;
    bool b = false;
    int idx = 0;  // name index or tag index
    Value a, c;   // pair components / tagged payload in `a`
    Env env;
    std::string param;
    ast::TermPtr body;
    ast::Layer layer = ast::Layer::Ini;
    std::shared_ptr<const MonadicValue> mon;
};

Value Value::boolean(bool b) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Bool;
    n->b = b;
    return Value(std::move(n));
}

Value Value::name_index(int i) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Name;
    n->idx = i;
    return Value(std::move(n));
}

Value Value::pair(Value a, Value b) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Pair;
    n->a = std::move(a);
    n->c = std::move(b);
    return Value(std::move(n));
}

Value Value::tag(int i, Value v) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Tag;
    n->idx = i;
    n->a = std::move(v);
    return Value(std::move(n));
}

Value Value::closure(Env env, std::string param, ast::TermPtr body, ast::Layer layer) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Clos;
    n->env = std::move(env);
    n->param = std::move(param);
    n->body = std::move(body);
    n->layer = layer;
    return Value(std::move(n));
}

Value Value::monadic(MonadicValue mv) {
    auto n = std::make_shared<ValueNode>();
    n->kind = Kind::Mon;
    n->mon = std::make_shared<const MonadicValue>(std::move(mv));
    return Value(std::move(n));
}

Value::Kind Value::kind() const { return node_->kind; }
bool Value::as_bool() const { return node_->b; }
int Value::as_name() const { return node_->idx; }
const Value& Value::first() const { return node_->a; }
const Value& Value::second() const { return node_->c; }
int Value::tag_index() const { return node_->idx; }
const Value& Value::tagged() const { return node_->a; }
const MonadicValue& Value::mon() const { return *node_->mon; }
const Env& Value::clos_env() const { return node_->env; }
const std::string& Value::clos_param() const { return node_->param; }
const ast::TermPtr& Value::clos_body() const { return node_->body; }
ast::Layer Value::clos_layer() const { return node_->layer; }

static int kind_rank(Value::Kind k) {
    switch (k) {
        case Value::Kind::Bool: return 0;
        case Value::Kind::Name: return 1;
        case Value::Kind::Pair: return 2;
        case Value::Kind::Tag: return 3;
        default: return 4;
    }
}

int value_cmp(const Value& a, const Value& b) {
    if (a.kind() == Value::Kind::Clos || b.kind() == Value::Kind::Clos ||
        a.kind() == Value::Kind::Mon || b.kind() == Value::Kind::Mon)
        throw EvalError(EvalError::Kind::IncomparableValue,
                        "cannot order closures or monadic payloads");
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Value::Kind::Bool:
            if (a.as_bool() == b.as_bool()) return 0;
            return a.as_bool() < b.as_bool() ? -1 : 1;
        case Value::Kind::Name:
            if (a.as_name() == b.as_name()) return 0;
            return a.as_name() < b.as_name() ? -1 : 1;
        case Value::Kind::Pair: {
            int c = value_cmp(a.first(), b.first());
            if (c) return c;
            return value_cmp(a.second(), b.second());
        }
        case Value::Kind::Tag: {
            if (a.tag_index() != b.tag_index()) return a.tag_index() < b.tag_index() ? -1 : 1;
            return value_cmp(a.tagged(), b.tagged());
        }
        default:
            return 0;  // unreachable
    }
}

std::string value_to_string(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Bool:
            return v.as_bool() ? "tt" : "ff";
        case Value::Kind::Name:
            return "n" + std::to_string(v.as_name());
        case Value::Kind::Pair:
            return "(" + value_to_string(v.first()) + "," + value_to_string(v.second()) + ")";
        case Value::Kind::Tag:
            return (v.tag_index() == 1 ? "inl " : "inr ") + value_to_string(v.tagged());
        case Value::Kind::Clos:
            return "<closure>";
        case Value::Kind::Mon:
            return "<computation>";
    }
    return "?";
}

}  // namespace ini::sem
