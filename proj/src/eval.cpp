#include "ini/eval.hpp"

namespace ini::sem {

using ast::Layer;
using ast::TermKind;
using ast::TermPtr;

namespace {

Value env_lookup(const Env& env, const std::string& name) {
    auto it = env.find(name);
    if (it == env.end())
        throw EvalError(EvalError::Kind::Internal, "unbound variable '" + name + "' at runtime");
    return it->second;
}

Env extend(Env env, const std::string& name, Value v) {
    if (name != "_") env.insert_or_assign(name, std::move(v));
    return env;
}

// Restricts a closure environment to the free variables of the body.
Env restrict_env(const Env& env, const TermPtr& body, const std::string& param) {
    Env out;
    for (const auto& v : ast::free_vars(body)) {
        if (v == param) continue;
        auto it = env.find(v);
        if (it != env.end()) out.emplace(it->first, it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Kleisli evaluation, shared by the one-level language, the sharing layer,
// and the erased two-level semantics. The three differ only in which node
// kinds can occur, which typechecking already settled.
//
// Every lambda handed to Model::bind captures by value: under the name
// model, bind defers the continuation into a thunk that outlives the
// current stack frame.
// ---------------------------------------------------------------------------

MonadicValue eval_kleisli(const Model& m, const Env& env, const TermPtr& t);

MonadicValue apply_kleisli(const Model& m, const Value& fn, const Value& arg) {
    if (fn.kind() != Value::Kind::Clos)
        throw EvalError(EvalError::Kind::Internal, "application of a non-closure");
    Env inner = extend(fn.clos_env(), fn.clos_param(), arg);
    return eval_kleisli(m, inner, fn.clos_body());
}

// Binds the sample subjects one after another into `inner`, then runs the
// body. The subjects themselves are evaluated in the enclosing env.
MonadicValue erased_sample_go(Model m, TermPtr t, Env outer, size_t i, Env inner) {
    const size_t n = t->binders.size();
    if (i == n) return eval_kleisli(m, inner, t->kids[n]);
    MonadicValue mi = eval_kleisli(m, outer, t->kids[i]);
    std::string x = t->binders[i];
    return m.bind(mi, [m, t, outer, i, inner, x](const Value& v) {
        return erased_sample_go(m, t, outer, i + 1, extend(inner, x, v));
    });
}

MonadicValue eval_kleisli(const Model& m, const Env& env, const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return m.unit(env_lookup(env, t->name));
        case TermKind::Const:
            return m.unit(Value::boolean(t->bval));
        case TermKind::Prim: {
            if (t->kids.empty()) return m.effectful_prim(t->name);
            std::string op = t->name;
            return m.bind(eval_kleisli(m, env, t->kids[0]), [m, op](const Value& v) {
                return m.unit(apply_pure_prim(op, v));
            });
        }
        case TermKind::PairShared:
        case TermKind::PairTensor: {
            // Both pair forms sample each component and pair the results.
            MonadicValue m1 = eval_kleisli(m, env, t->kids[0]);
            TermPtr rhs = t->kids[1];
            Env env_copy = env;
            return m.bind(m1, [m, env_copy, rhs](const Value& a) {
                return m.bind(eval_kleisli(m, env_copy, rhs), [m, a](const Value& b) {
                    return m.unit(Value::pair(a, b));
                });
            });
        }
        case TermKind::Proj: {
            int idx = t->index;
            return m.bind(eval_kleisli(m, env, t->kids[0]), [m, idx](const Value& v) {
                return m.unit(idx == 1 ? v.first() : v.second());
            });
        }
        case TermKind::LetTensor: {
            MonadicValue subj = eval_kleisli(m, env, t->kids[0]);
            Env env_copy = env;
            TermPtr body = t->kids[1];
            std::string x = t->name, y = t->name2;
            return m.bind(subj, [m, env_copy, body, x, y](const Value& v) {
                Env inner = extend(extend(env_copy, x, v.first()), y, v.second());
                return eval_kleisli(m, inner, body);
            });
        }
        case TermKind::Inj: {
            int idx = t->index;
            return m.bind(eval_kleisli(m, env, t->kids[0]), [m, idx](const Value& v) {
                return m.unit(Value::tag(idx, v));
            });
        }
        case TermKind::Case: {
            MonadicValue scrut = eval_kleisli(m, env, t->kids[0]);
            Env env_copy = env;
            TermPtr u1 = t->kids[1], u2 = t->kids[2];
            std::string x = t->name, y = t->name2;
            return m.bind(scrut, [m, env_copy, u1, u2, x, y](const Value& v) {
                if (v.kind() == Value::Kind::Bool) {
                    // Booleans eliminate as a two-way sum; the binder is
                    // bound to the scrutinee value.
                    return v.as_bool() ? eval_kleisli(m, extend(env_copy, x, v), u1)
                                       : eval_kleisli(m, extend(env_copy, y, v), u2);
                }
                if (v.tag_index() == 1)
                    return eval_kleisli(m, extend(env_copy, x, v.tagged()), u1);
                return eval_kleisli(m, extend(env_copy, y, v.tagged()), u2);
            });
        }
        case TermKind::Lam:
            return m.unit(Value::closure(restrict_env(env, t->kids[0], t->name), t->name,
                                         t->kids[0], t->layer));
        case TermKind::App: {
            MonadicValue fn = eval_kleisli(m, env, t->kids[0]);
            Env env_copy = env;
            TermPtr arg = t->kids[1];
            return m.bind(fn, [m, env_copy, arg](const Value& f) {
                return m.bind(eval_kleisli(m, env_copy, arg),
                              [m, f](const Value& a) { return apply_kleisli(m, f, a); });
            });
        }
        case TermKind::Let: {
            MonadicValue bound = eval_kleisli(m, env, t->kids[0]);
            Env env_copy = env;
            TermPtr body = t->kids[1];
            std::string x = t->name;
            return m.bind(bound, [m, env_copy, body, x](const Value& v) {
                return eval_kleisli(m, extend(env_copy, x, v), body);
            });
        }
        case TermKind::Sample:
            // Erased reading: the modality is transparent and sample is a
            // block of sequential binds feeding the body.
            return erased_sample_go(m, t, env, 0, Env{});
    }
    throw EvalError(EvalError::Kind::Internal, "malformed term in evaluation");
}

// Environment-sampling prefix: x1 <- mu1; ...; xn <- mun; then evaluate.
MonadicValue sample_env_go(Model m,
                           std::shared_ptr<const std::vector<std::pair<std::string, MonadicValue>>> items,
                           size_t i, Env acc, TermPtr t) {
    if (i == items->size()) return eval_kleisli(m, acc, t);
    std::string x = (*items)[i].first;
    return m.bind((*items)[i].second, [m, items, i, acc, t, x](const Value& v) {
        return sample_env_go(m, items, i + 1, extend(acc, x, v), t);
    });
}

}  // namespace

MonadicValue eval_ini_sampled(const Model& m, const Env& env, const TermPtr& t) {
    return eval_kleisli(m, env, t);
}

MonadicValue eval_ini(const Model& m, const MonEnv& env, const TermPtr& t) {
    auto items = std::make_shared<const std::vector<std::pair<std::string, MonadicValue>>>(
        env.begin(), env.end());
    return sample_env_go(m, items, 0, Env{}, t);
}

MonadicValue eval_ni(const Model& m, const Env& env, const TermPtr& t) {
    return eval_kleisli(m, env, t);
}

MonadicValue eval_erased(const Model& m, const Env& env, const TermPtr& t) {
    return eval_kleisli(m, env, t);
}

// ---------------------------------------------------------------------------
// Concrete two-level semantics of the independent layer.
// ---------------------------------------------------------------------------

namespace {

Value apply_plain(const Model& m, const Value& fn, const Value& arg) {
    if (fn.kind() != Value::Kind::Clos)
        throw EvalError(EvalError::Kind::Internal, "application of a non-closure");
    Env inner = extend(fn.clos_env(), fn.clos_param(), arg);
    return eval_i(m, inner, fn.clos_body());
}

}  // namespace

Value eval_i(const Model& m, const Env& env, const TermPtr& t) {
    switch (t->kind) {
        case TermKind::Var:
            return env_lookup(env, t->name);
        case TermKind::PairTensor:
            return Value::pair(eval_i(m, env, t->kids[0]), eval_i(m, env, t->kids[1]));
        case TermKind::LetTensor: {
            Value subj = eval_i(m, env, t->kids[0]);
            Env inner = extend(extend(env, t->name, subj.first()), t->name2, subj.second());
            return eval_i(m, inner, t->kids[1]);
        }
        case TermKind::Inj:
            return Value::tag(t->index, eval_i(m, env, t->kids[0]));
        case TermKind::Case: {
            Value scrut = eval_i(m, env, t->kids[0]);
            if (scrut.tag_index() == 1)
                return eval_i(m, extend(env, t->name, scrut.tagged()), t->kids[1]);
            return eval_i(m, extend(env, t->name2, scrut.tagged()), t->kids[2]);
        }
        case TermKind::Lam:
            return Value::closure(restrict_env(env, t->kids[0], t->name), t->name, t->kids[0],
                                  t->layer);
        case TermKind::App:
            return apply_plain(m, eval_i(m, env, t->kids[0]), eval_i(m, env, t->kids[1]));
        case TermKind::Sample: {
            // Evaluate each bound term to a boxed computation, take their
            // left-nested pairing, and map the body over the joint tuple.
            const size_t n = t->binders.size();
            std::vector<MonadicValue> boxes;
            boxes.reserve(n);
            for (size_t i = 0; i < n; ++i) {
                Value b = eval_i(m, env, t->kids[i]);
                if (b.kind() != Value::Kind::Mon)
                    throw EvalError(EvalError::Kind::Internal, "sample of an unboxed value");
                boxes.push_back(b.mon());
            }
            TermPtr body = t->kids[n];
            std::vector<std::string> binders = t->binders;
            if (n == 0) return Value::monadic(eval_ni(m, Env{}, body));
            MonadicValue joint = boxes[0];
            for (size_t i = 1; i < n; ++i) joint = m.pair_product(joint, boxes[i]);
            MonadicValue out = m.bind(joint, [m, body, binders, n](const Value& tuple) {
                // The joint is left-nested: (((v1, v2), v3), ..., vn).
                std::vector<Value> flat(n);
                Value cur = tuple;
                for (size_t i = n; i-- > 1;) {
                    flat[i] = cur.second();
                    Value next = cur.first();
                    cur = next;
                }
                flat[0] = cur;
                Env inner;
                for (size_t i = 0; i < n; ++i)
                    if (binders[i] != "_") inner.emplace(binders[i], flat[i]);
                return eval_ni(m, inner, body);
            });
            return Value::monadic(std::move(out));
        }
        default:
            throw EvalError(EvalError::Kind::Internal,
                            "node kind outside the independent layer in eval_i");
    }
}

}  // namespace ini::sem
