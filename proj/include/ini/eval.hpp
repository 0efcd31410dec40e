// Denotational evaluators. Everything is computed exactly and
// compositionally over whole monadic values; there is no sampling.
//
//  - eval_ini: Kleisli semantics of the one-level language. The public
//    entry point takes an environment of monadic values and performs the
//    environment-sampling prefix before the structural recursion.
//  - eval_ni: Kleisli semantics of the sharing layer.
//  - eval_i: concrete two-level semantics of the independent layer; the
//    result is a plain value (boxed computations appear as payloads).
//  - eval_erased: collapses the independent layer into one joint monadic
//    computation, treating the modality as transparent and separating
//    pairs as sequential monadic pairing.

#ifndef INI_EVAL_HPP
#define INI_EVAL_HPP

#include "ini/ast.hpp"
#include "ini/models.hpp"

namespace ini::sem {

using MonEnv = std::map<std::string, MonadicValue>;

/// Samples each environment entry, then evaluates the term with the
/// sampled values in scope.
MonadicValue eval_ini(const Model& m, const MonEnv& env, const ast::TermPtr& t);

/// The structural worker of eval_ini: the environment binds plain values.
MonadicValue eval_ini_sampled(const Model& m, const Env& env, const ast::TermPtr& t);

MonadicValue eval_ni(const Model& m, const Env& env, const ast::TermPtr& t);

Value eval_i(const Model& m, const Env& env, const ast::TermPtr& t);

MonadicValue eval_erased(const Model& m, const Env& env, const ast::TermPtr& t);

}  // namespace ini::sem

#endif
