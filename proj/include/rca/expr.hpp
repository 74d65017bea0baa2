#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rca/monoid.hpp"
#include "rca/relang.hpp"

namespace rca {

struct FuncExpr;
using ExprPtr = std::shared_ptr<const FuncExpr>;
using DfaPtr = std::shared_ptr<const Dfa>;

// Combinator AST. Every node carries the input alphabet Σ and the value
// monoid; Compose is the one place where the two sides differ (the inner
// function must produce strings over the outer function's input alphabet).
struct FuncExpr {
  enum class Kind {
    Const,
    Choice,
    Sum,
    SplitSum,
    LeftSplitSum,
    IterSum,
    LeftIterSum,
    ChainedSum,
    LeftChainedSum,
    Reverse,
    Compose,
  };

  Kind kind = Kind::Const;
  std::vector<std::string> alphabet;
  MonoidSpec monoid;

  // Const
  DfaPtr lang;
  MonoidValue value;
  std::string lang_text;  // remembered literal, used by the printer

  // children: unary ops use f; Compose stores outer in f, inner in g
  ExprPtr f, g;

  // ChainedSum / LeftChainedSum
  DfaPtr chain_lang;
  std::string chain_lang_text;

  size_t id = 0;  // unique per node, used for evaluation memoization
};

ExprPtr make_const(std::vector<std::string> alphabet, MonoidSpec m, DfaPtr lang,
                   MonoidValue d, std::string lang_text = "");
ExprPtr make_binary(FuncExpr::Kind k, ExprPtr f, ExprPtr g);
ExprPtr make_unary(FuncExpr::Kind k, ExprPtr f);
ExprPtr make_chained(FuncExpr::Kind k, ExprPtr f, DfaPtr lang,
                     std::string lang_text = "");
// outer ∘ inner; inner's values are strings over outer's input alphabet
ExprPtr make_compose(ExprPtr outer, ExprPtr inner);

// Derived forms; each elaborates to core nodes.
ExprPtr make_bottom(std::vector<std::string> alphabet, MonoidSpec m);
ExprPtr restrict_to(ExprPtr f, DfaPtr lang);           // f + (L / 0)
ExprPtr left_shift(ExprPtr f, DfaPtr lang);            // f ⊕ (L / 0)
ExprPtr right_shift(DfaPtr lang, ExprPtr f);           // (L / 0) ⊕ f

// The paper's semantics, computed by explicit decomposition enumeration with
// uniqueness counting. Memoized per (node, span); complexity is fine at desk
// scale only.
MonoidValue eval_naive(const ExprPtr& e, const Word& sigma);

// DFA accepting exactly { σ : eval_naive(e,σ) ≠ ⊥ }, built structurally.
// For Compose the result is the inner domain refined by a bounded check and
// may over-approximate; corpus expressions under test avoid Compose here.
Dfa domain_dfa(const ExprPtr& e);

// Structural equality; Const languages compared as languages.
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

// All operators appearing in e (for operator-set checks).
std::vector<FuncExpr::Kind> expr_operators(const ExprPtr& e);

std::string kind_name(FuncExpr::Kind k);

}  // namespace rca
