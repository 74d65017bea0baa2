#pragma once

#include "rca/ccra.hpp"
#include "rca/expr.hpp"

namespace rca {

// Register-flow NFA of an ACRA: states Q×V, letters a_d for the updates
// v' := v + d that actually occur. Start states {q0}×V; a state (q,v) accepts
// iff the output at q reads v. Annotated letters are rendered "a_d"; the
// annotation table recovers (symbol, increment).
struct FlowNfa {
  Nfa nfa;
  std::vector<std::pair<std::string, MonoidValue>> letter_info;  // per alphabet entry
  std::vector<std::pair<int, int>> state_info;                   // (state, register)
};

FlowNfa acra_to_flow_nfa(const Acra& m);

// Thm IV.1: state-eliminate the flow NFA and reinterpret the unambiguous
// regex over {Const, choice, split sum, iterated sum}.
ExprPtr extract_commutative(const Acra& m);

}  // namespace rca
