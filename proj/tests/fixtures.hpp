#pragma once

// The worked examples used across the test suites: combinator expressions
// and the hand-drawn machines they correspond to.

#include "rca/ccra.hpp"
#include "rca/expr.hpp"
#include "rca/surface.hpp"

namespace fixtures {

using namespace rca;

inline ExprPtr parse(const std::string& text,
                     std::optional<MonoidKind> monoid = {},
                     std::optional<std::vector<std::string>> alphabet = {}) {
  ParseOptions opts;
  opts.monoid = monoid;
  opts.alphabet = std::move(alphabet);
  return parse_surface(text, opts);
}

inline ExprPtr count_a() { return parse("sum (a/1 |> b/0)"); }
inline ExprPtr id_ab() { return parse("sum (a/a |> b/b)"); }
inline ExprPtr copy_ab() { return parse("let i = sum (a/a |> b/b) in i + i"); }
inline ExprPtr reverse_ab() { return parse("lsum (a/a |> b/b)"); }
inline ExprPtr indicator_a() { return parse("a/1 |> (a|b)*/0"); }

inline ExprPtr coffee() {
  return parse(
      "let m = sum C/2 |> (sum C/1 (+) (S/0 (+) sum (C/1 |> S/0))) in "
      "sum (m (+) #/0) (+) m",
      MonoidKind::Int, std::vector<std::string>{"C", "S", "#"});
}

inline ExprPtr swap() {
  return parse(
      "((a|b)*#/\"\" (+) sum (a/a |> b/b))"
      " + (a|b|#)*/\"#\""
      " + (sum (a/a |> b/b) (+) #(a|b)*/\"\")");
}

inline ExprPtr strip() {
  return parse("sum (a/a |> b/b |> #/\"#\") (+) #(a|b)*/\"\"");
}

inline ExprPtr shuffle() {
  return parse(
      "chain[a*b] ((sum a/b (+) b/\"\") (<+) (sum a/a (+) b/\"\"))");
}

inline std::vector<std::pair<std::string, ExprPtr>> expression_corpus() {
  return {{"count_a", count_a()}, {"id", id_ab()},
          {"copy", copy_ab()},    {"reverse", reverse_ab()},
          {"indicator", indicator_a()}, {"coffee", coffee()},
          {"swap", swap()},       {"strip", strip()},
          {"shuffle", shuffle()}};
}

// Streaming string transducer computing shuffle: states q0,q1,q2 over {a,b},
// registers x,y,z, accepting q2 with output x.
inline Ccra shuffle_sst() {
  Ccra m;
  m.states = {"q0", "q1", "q2"};
  m.alphabet = {"a", "b"};
  m.registers = {"x", "y", "z"};
  m.start = 0;
  m.accepting = {0, 0, 1};
  m.monoid = MonoidSpec::strings({"a", "b"});
  auto cst = [](const std::string& s) {
    return UpdateExpr::Tok::constant(MonoidValue::str(s));
  };
  auto reg = [](int r) { return UpdateExpr::Tok::regref(r); };
  // updates: on a (at q1/q2 targets): x:=xa, z:=zb; at q0: z:=zb
  UpdateExpr xa{{reg(0), cst("a")}};
  UpdateExpr zb{{reg(2), cst("b")}};
  UpdateExpr xy{{reg(0), reg(1)}};
  UpdateExpr y_from_z{{reg(2)}};
  UpdateExpr empty{};
  auto ident = [&](int r) { return UpdateExpr::reg(r); };

  m.delta = {{0, 1}, {1, 2}, {1, 2}};
  m.mu.assign(3, std::vector<std::vector<UpdateExpr>>(2));
  // q0 --a--> q0 : z := zb
  m.mu[0][0] = {ident(0), ident(1), zb};
  // q0 --b--> q1 : x := xy, y := z, z := ε
  m.mu[0][1] = {xy, y_from_z, empty};
  // q1 --a--> q1 : x := xa, z := zb
  m.mu[1][0] = {xa, ident(1), zb};
  // q1 --b--> q2
  m.mu[1][1] = {xy, y_from_z, empty};
  // q2 --a--> q1 : x := xa, z := zb
  m.mu[2][0] = {xa, ident(1), zb};
  // q2 --b--> q2
  m.mu[2][1] = {xy, y_from_z, empty};
  m.nu.assign(3, UpdateExpr{});
  m.nu[2] = UpdateExpr::reg(0);
  m.check();
  return m;
}

// ACRA computing coffee: states q_ns (initial, output x), q_s (output x).
inline Acra coffee_acra() {
  Acra m;
  m.states = {"qns", "qs"};
  m.alphabet = {"C", "S", "#"};
  m.registers = {"x", "y"};
  m.start = 0;
  m.accepting = {1, 1};
  m.monoid = MonoidSpec::integers();
  auto I = [&](int r) { return std::make_pair(r, MonoidValue::integer(0)); };
  auto P = [&](int r, long long d) {
    return std::make_pair(r, MonoidValue::integer(d));
  };
  m.delta = {{0, 1, 0}, {1, 1, 0}};
  m.mu.assign(2, std::vector<std::vector<std::pair<int, MonoidValue>>>(3));
  // qns: C: x+=2, y+=1 ; S->qs: x:=y ; #: y:=x
  m.mu[0][0] = {P(0, 2), P(1, 1)};
  m.mu[0][1] = {I(1), I(1)};
  m.mu[0][2] = {I(0), I(0)};
  // qs: C: x+=1 ; S: id ; #->qns: y:=x
  m.mu[1][0] = {P(0, 1), I(1)};
  m.mu[1][1] = {I(0), I(1)};
  m.mu[1][2] = {I(0), I(0)};
  m.nu = {{0, MonoidValue::integer(0)}, {0, MonoidValue::integer(0)}};
  m.check();
  return m;
}

// Single-state ACRA over {a,b,e} (the running commutative-extraction
// example): a: x+=1,y+=1; b: y+=1; e: x:=y+1, y:=y+1. Output x.
inline Acra fig4a_acra() {
  Acra m;
  m.states = {"q0"};
  m.alphabet = {"a", "b", "e"};
  m.registers = {"x", "y"};
  m.start = 0;
  m.accepting = {1};
  m.monoid = MonoidSpec::integers();
  auto P = [&](int r, long long d) {
    return std::make_pair(r, MonoidValue::integer(d));
  };
  m.delta = {{0, 0, 0}};
  m.mu.assign(1, std::vector<std::vector<std::pair<int, MonoidValue>>>(3));
  m.mu[0][0] = {P(0, 1), P(1, 1)};
  m.mu[0][1] = {P(0, 0), P(1, 1)};
  m.mu[0][2] = {P(1, 1), P(1, 1)};
  m.nu = {{0, MonoidValue::integer(0)}};
  m.check();
  return m;
}

// Counter ACRA: x += 1 on a.
inline Acra counter_acra() {
  Acra m;
  m.states = {"q0"};
  m.alphabet = {"a"};
  m.registers = {"x"};
  m.start = 0;
  m.accepting = {1};
  m.monoid = MonoidSpec::integers();
  m.delta = {{0}};
  m.mu.assign(1, std::vector<std::vector<std::pair<int, MonoidValue>>>(1));
  m.mu[0][0] = {{0, MonoidValue::integer(1)}};
  m.nu = {{0, MonoidValue::integer(0)}};
  m.check();
  return m;
}

// One-state echo SST: x := xa on a, x := xb on b.
inline Ccra echo_sst() {
  Ccra m;
  m.states = {"q0"};
  m.alphabet = {"a", "b"};
  m.registers = {"x"};
  m.start = 0;
  m.accepting = {1};
  m.monoid = MonoidSpec::strings({"a", "b"});
  m.delta = {{0, 0}};
  m.mu.assign(1, std::vector<std::vector<UpdateExpr>>(2));
  UpdateExpr xa{{UpdateExpr::Tok::regref(0),
                 UpdateExpr::Tok::constant(MonoidValue::str("a"))}};
  UpdateExpr xb{{UpdateExpr::Tok::regref(0),
                 UpdateExpr::Tok::constant(MonoidValue::str("b"))}};
  m.mu[0][0] = {xa};
  m.mu[0][1] = {xb};
  m.nu = {UpdateExpr::reg(0)};
  m.check();
  return m;
}

// Two-state, two-register SST: collects a-runs in y, flushes on b.
//   p: a: y := ya        ; b -> q: x := xyb, y := ε
//   q: a -> p: y := a    ; b: x := xb
// Accepting q with output xy.
inline Ccra two_state_sst() {
  Ccra m;
  m.states = {"p", "q"};
  m.alphabet = {"a", "b"};
  m.registers = {"x", "y"};
  m.start = 0;
  m.accepting = {0, 1};
  m.monoid = MonoidSpec::strings({"a", "b"});
  auto cst = [](const std::string& s) {
    return UpdateExpr::Tok::constant(MonoidValue::str(s));
  };
  auto reg = [](int r) { return UpdateExpr::Tok::regref(r); };
  m.delta = {{0, 1}, {0, 1}};
  m.mu.assign(2, std::vector<std::vector<UpdateExpr>>(2));
  m.mu[0][0] = {UpdateExpr::reg(0), UpdateExpr{{reg(1), cst("a")}}};
  m.mu[0][1] = {UpdateExpr{{reg(0), reg(1), cst("b")}}, UpdateExpr{}};
  m.mu[1][0] = {UpdateExpr::reg(0), UpdateExpr{{cst("a")}}};
  m.mu[1][1] = {UpdateExpr{{reg(0), cst("b")}}, UpdateExpr{{reg(1)}}};
  m.nu.assign(2, UpdateExpr{});
  m.nu[1] = UpdateExpr{{reg(0), reg(1)}};
  m.check();
  return m;
}

// Two-register machine with a crossing update (the 5d shape): on a,
// x := y a and y := x. Output x at the accepting single state.
inline Ccra crossing_sst() {
  Ccra m;
  m.states = {"q0"};
  m.alphabet = {"a", "b"};
  m.registers = {"x", "y"};
  m.start = 0;
  m.accepting = {1};
  m.monoid = MonoidSpec::strings({"a", "b"});
  auto cst = [](const std::string& s) {
    return UpdateExpr::Tok::constant(MonoidValue::str(s));
  };
  auto reg = [](int r) { return UpdateExpr::Tok::regref(r); };
  m.delta = {{0, 0}};
  m.mu.assign(1, std::vector<std::vector<UpdateExpr>>(2));
  m.mu[0][0] = {UpdateExpr{{reg(1), cst("a")}}, UpdateExpr{{reg(0)}}};
  m.mu[0][1] = {UpdateExpr{{reg(0), cst("b")}}, UpdateExpr{{reg(1)}}};
  m.nu = {UpdateExpr::reg(0)};
  m.check();
  return m;
}

}  // namespace fixtures
