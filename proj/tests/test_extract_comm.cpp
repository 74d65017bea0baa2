#include <doctest.h>

#include "fixtures.hpp"
#include "rca/extract_comm.hpp"

using namespace rca;

namespace {
Word W(const std::string& s) { return word_from_chars(s); }
}

TEST_CASE("flow nfa of the fig 4a machine") {
  Acra m = fixtures::fig4a_acra();
  FlowNfa flow = acra_to_flow_nfa(m);
  // states (q0,x),(q0,y); both start; (q0,x) accepting
  CHECK(flow.nfa.num_states == 2);
  CHECK(flow.nfa.starts.size() == 2);
  CHECK(flow.nfa.accepting[0] == 1);  // (q0, x)
  CHECK(flow.nfa.accepting[1] == 0);
  // letters a_1, b_0, b_1, e_1
  CHECK(flow.nfa.alphabet.size() == 4);
  CHECK(nfa_is_unambiguous(flow.nfa));
}

TEST_CASE("flow nfa of a one-register counter") {
  FlowNfa flow = acra_to_flow_nfa(fixtures::counter_acra());
  CHECK(flow.nfa.num_states == 1);
  CHECK(flow.nfa.alphabet.size() == 1);
  CHECK(flow.nfa.alphabet[0] == "a_1");
}

TEST_CASE("extraction requires a commutative monoid") {
  Acra m = fixtures::counter_acra();
  m.monoid = MonoidSpec::strings({"a"});
  CHECK_THROWS_AS(extract_commutative(m), std::invalid_argument);
}

TEST_CASE("fig 4a roundtrip") {
  Acra m = fixtures::fig4a_acra();
  ExprPtr e = extract_commutative(m);
  CHECK(eval_naive(e, W("abeb")) == MonoidValue::integer(3));
  for (const auto& w : words_up_to(m.alphabet, 6))
    CHECK(eval_naive(e, w) == eval_acra(m, w));
}

TEST_CASE("coffee acra roundtrip") {
  Acra m = fixtures::coffee_acra();
  ExprPtr e = extract_commutative(m);
  for (const auto& w : words_up_to(m.alphabet, 6))
    CHECK(eval_naive(e, w) == eval_acra(m, w));
}

TEST_CASE("counter roundtrip") {
  Acra m = fixtures::counter_acra();
  ExprPtr e = extract_commutative(m);
  for (const auto& w : words_up_to(m.alphabet, 8))
    CHECK(eval_naive(e, w) == eval_acra(m, w));
}

TEST_CASE("extracted expressions stay in the Thm IV.1 operator set") {
  for (Acra m : {fixtures::fig4a_acra(), fixtures::coffee_acra(),
                 fixtures::counter_acra()}) {
    ExprPtr e = extract_commutative(m);
    for (auto k : expr_operators(e)) {
      bool allowed = k == FuncExpr::Kind::Const ||
                     k == FuncExpr::Kind::Choice ||
                     k == FuncExpr::Kind::SplitSum ||
                     k == FuncExpr::Kind::IterSum;
      CHECK(allowed);
    }
  }
}

TEST_CASE("flow NFAs of all corpus ACRAs are unambiguous") {
  for (const Acra& m : {fixtures::fig4a_acra(), fixtures::coffee_acra(),
                        fixtures::counter_acra()})
    CHECK(nfa_is_unambiguous(acra_to_flow_nfa(m).nfa));
}
