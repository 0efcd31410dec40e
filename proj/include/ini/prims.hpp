// Primitive registry: which operations exist, at which types, in which
// layers, and under which models. The effectful primitives are model
// specific (coin/amb/fresh); the boolean ones are available everywhere.

#ifndef INI_PRIMS_HPP
#define INI_PRIMS_HPP

#include <optional>
#include <string>

#include "ini/ast.hpp"
#include "ini/models.hpp"

namespace ini::sem {

struct PrimSig {
    std::string name;
    ast::TypePtr arg;     // null for nullary primitives
    ast::TypePtr result;
    bool in_ini;          // usable in the one-level language
    bool in_ni;           // usable in the sharing layer
    bool model_dist;
    bool model_pset;
    bool model_name;

    bool available_in(ModelId m) const {
        switch (m) {
            case ModelId::Dist: return model_dist;
            case ModelId::PSet: return model_pset;
            case ModelId::Name: return model_name;
        }
        return false;
    }
    bool effectful() const { return arg == nullptr; }
};

/// Null if the name is not a primitive at all.
const PrimSig* prim_sig(const std::string& name);

}  // namespace ini::sem

#endif
