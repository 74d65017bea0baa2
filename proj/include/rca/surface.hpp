#pragma once

#include <optional>
#include <string>

#include "rca/expr.hpp"

namespace rca {

// Surface syntax:
//   L / d               constant function (L a regex literal)
//   f |> g              conditional choice
//   f + g               sum
//   f (+) g             split sum          f (<+) g   left-split sum
//   sum f   lsum f      iterated sums
//   chain[L] f          chained sum        lchain[L] f
//   rev f               input reverse
//   g o f               composition
//   let x = f in e      local binding
// Precedence: o > sum/lsum/rev/chain/lchain > (+)/(<+) > + > |> .
// A regex literal must be glued to its `/`; values are integers, bare words,
// or quoted strings ("" is ε).

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg), position(pos) {}
};

struct ParseOptions {
  std::optional<std::vector<std::string>> alphabet;  // inferred when absent
  std::optional<MonoidKind> monoid;                  // inferred when absent
};

ExprPtr parse_surface(const std::string& text, const ParseOptions& opts = {});

// Canonical printer emitting the same grammar; parse(print(e)) is
// structurally equal to e.
std::string print_surface(const ExprPtr& e);

}  // namespace rca
