#include "ini/prims.hpp"

#include <vector>

namespace ini::sem {

namespace {

using ast::Type;

std::vector<PrimSig> build_table() {
    auto B = Type::boolean();
    auto N = Type::name();
    auto BB = Type::prod(B, B);
    auto NN = Type::prod(N, N);
    //        name     arg      result  ini    ni     dist   pset   name
    return {
        {"coin", nullptr, B, true, true, true, false, false},
        {"amb", nullptr, B, false, true, false, true, false},
        {"fresh", nullptr, N, false, true, false, false, true},
        {"not", B, B, false, true, true, true, true},
        {"and", BB, B, false, true, true, true, true},
        {"or", BB, B, false, true, true, true, true},
        {"xor", BB, B, false, true, true, true, true},
        {"eqb", BB, B, false, true, true, true, true},
        {"eqn", NN, B, false, true, false, false, true},
    };
}

}  // namespace

const PrimSig* prim_sig(const std::string& name) {
    static const std::vector<PrimSig> table = build_table();
    for (const auto& p : table)
        if (p.name == name) return &p;
    return nullptr;
}

}  // namespace ini::sem
