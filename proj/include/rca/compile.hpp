#pragma once

#include "rca/ccra.hpp"
#include "rca/expr.hpp"

namespace rca {

struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Expression → machine pipeline. Composition and chained sums concatenate
// stages; every other combinator needs single-stage children and builds one
// machine (with regular look-ahead for the split and iteration cases).
Cascade compile(const ExprPtr& e);

// Per-node builders, exposed for tests.
Stage compile_base(const Dfa& lang, const MonoidValue& d, MonoidSpec monoid);
Stage compile_product(FuncExpr::Kind kind, const Stage& f, const Stage& g);
Stage compile_split(FuncExpr::Kind kind, const Stage& f, const Stage& g);
Stage compile_iter(FuncExpr::Kind kind, const Stage& f);
Cascade compile_chained(FuncExpr::Kind kind, const ExprPtr& body,
                        const Dfa& lang);
// One-register stage that reverses its input string.
Stage reversal_stage(std::vector<std::string> alphabet);

}  // namespace rca
