#pragma once

#include <map>
#include <tuple>

#include "rca/expr.hpp"
#include "rca/shape.hpp"

namespace rca {

// Per-shape table of function expressions: component (v,k) gives the k-th
// constant slot of register v's update row as a function of the input.
struct ExpressionVector {
  Shape shape;
  std::vector<std::vector<ExprPtr>> comp;  // [register][patch-1]
  DfaPtr dom;                              // summarized path language
};

enum class EvShift { Restrict, LShift, RShift };
ExpressionVector ev_restrict_shift(const ExpressionVector& v, EvShift mode,
                                   DfaPtr lang);
ExpressionVector ev_concat(const ExpressionVector& a,
                           const ExpressionVector& b);
// Same shape, disjoint domains required.
ExpressionVector ev_choice(const ExpressionVector& a,
                           const ExpressionVector& b);

// Normalized CCRA → function expression over the Thm V.1 operator set.
// The machine is re-normalized first when its letter shapes (or their
// compositions) leave the normalized-shape space.
ExprPtr extract_noncommutative(const Ccra& m);

// Level-0 summaries (single letters), exposed for the soundness tests:
// table[(q,q',shape)] for shapes realized by some single transition.
std::map<std::tuple<int, int, Shape>, ExpressionVector> build_r0(const Ccra& m);

// The summarization table after `level` elimination steps (0 ≤ level ≤ |Q|),
// exposed so tests can check every intermediate level against direct machine
// simulation. The machine must already satisfy the normalized-closure
// requirement.
std::map<std::tuple<int, int, Shape>, ExpressionVector> summarize_level(
    const Ccra& m, int level);

}  // namespace rca
