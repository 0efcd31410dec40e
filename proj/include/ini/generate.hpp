// Type-directed random term generation. Generation mirrors the typing
// rules: an affine usage context threads through multiplicative positions
// and is restored around additive ones, so every emitted term typechecks
// by construction.

#ifndef INI_GENERATE_HPP
#define INI_GENERATE_HPP

#include <random>
#include <stdexcept>
#include <vector>

#include "ini/ast.hpp"
#include "ini/models.hpp"

namespace ini::gen {

struct Rng {
    std::mt19937_64 engine;
    explicit Rng(uint64_t seed) : engine(seed) {}

    int below(int n) { return n <= 1 ? 0 : (int)(engine() % (uint64_t)n); }
    bool chance(int num, int den) { return below(den) < num; }
};

struct GenConfig {
    int max_depth = 4;
    uint64_t seed = 0;
    ast::TypePtr target;  // null: draw a random type per term
    ast::Layer layer = ast::Layer::Ini;
    sem::ModelId model = sem::ModelId::Dist;
    int count = 10;

    // Relative production weights; binders are favored so corpora exercise
    // context splitting and the sample path.
    int weight_var = 3;
    int weight_leaf = 2;
    int weight_intro = 3;
    int weight_binder = 4;

    // Fragment restrictions for translation corpora.
    bool forbid_arrows = false;       // no Lam/App/Lolli anywhere
    bool forbid_sharing = false;      // no PairShared/Proj/Prod anywhere
};

struct GenExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Smallest depth at which the type is inhabited by the generator in the
/// given layer/model. A large sentinel (>= 1000) means uninhabited.
int min_depth(const ast::TypePtr& t, ast::Layer layer, sem::ModelId model);

using Scope = std::vector<std::pair<std::string, ast::TypePtr>>;

/// One term of `type` in `layer` with at most cfg.max_depth nesting; the
/// scope seeds free variables (treated affinely outside the sharing
/// layer). Throws GenExhausted when the type is out of reach at this
/// depth.
ast::TermPtr generate_term(Rng& rng, const GenConfig& cfg, const ast::TypePtr& type,
                           ast::Layer layer, const Scope& scope = {});

/// cfg.count closed terms; same config, same corpus.
std::vector<ast::TermPtr> generate_terms(const GenConfig& cfg);

ast::TypePtr random_type_ini_observable(Rng& rng, int depth);
ast::TypePtr random_type_ni(Rng& rng, int depth, sem::ModelId model);
ast::TypePtr random_type_i_observable(Rng& rng, int depth, sem::ModelId model);

}  // namespace ini::gen

#endif
