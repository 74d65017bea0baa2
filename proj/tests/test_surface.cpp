#include <doctest.h>

#include "fixtures.hpp"
#include "rca/surface.hpp"

using namespace rca;

TEST_CASE("basic parses") {
  ExprPtr e = parse_surface("sum (a/1 |> b/0)");
  CHECK(e->kind == FuncExpr::Kind::IterSum);
  CHECK(e->f->kind == FuncExpr::Kind::Choice);
  CHECK(e->monoid.kind == MonoidKind::Int);

  ExprPtr s = parse_surface("(a*b)/x (+) b*/y");
  CHECK(s->kind == FuncExpr::Kind::SplitSum);
  CHECK(s->f->kind == FuncExpr::Kind::Const);
  CHECK(s->f->value == MonoidValue::str("x"));
  CHECK(s->monoid.kind == MonoidKind::Str);

  ExprPtr c = parse_surface("let f = a/a |> b/b in chain[a*b] f");
  CHECK(c->kind == FuncExpr::Kind::ChainedSum);
  CHECK(c->f->kind == FuncExpr::Kind::Choice);
}

TEST_CASE("precedence") {
  // compose > prefixes > split family > sum > choice
  ExprPtr e = parse_surface("a/a |> a/a + a/a (+) a/a");
  CHECK(e->kind == FuncExpr::Kind::Choice);
  CHECK(e->g->kind == FuncExpr::Kind::Sum);
  CHECK(e->g->g->kind == FuncExpr::Kind::SplitSum);

  ExprPtr f = parse_surface("sum a/a o b/b");
  CHECK(f->kind == FuncExpr::Kind::IterSum);
  CHECK(f->f->kind == FuncExpr::Kind::Compose);
}

TEST_CASE("errors carry positions") {
  CHECK_THROWS_AS(parse_surface("sum (a/1"), ParseError);
  CHECK_THROWS_AS(parse_surface("unknown_name"), ParseError);
  CHECK_THROWS_AS(parse_surface("a/1 |> b/0 trailing"), ParseError);
}

TEST_CASE("alphabet control") {
  ParseOptions opts;
  opts.alphabet = std::vector<std::string>{"a"};
  CHECK_THROWS_AS(parse_surface("a/1 |> b/0", opts), ParseError);
  opts.alphabet = std::vector<std::string>{"a", "b", "c"};
  ExprPtr e = parse_surface("a/1 |> b/0", opts);
  CHECK(e->alphabet.size() == 3);
}

TEST_CASE("print/parse round trip on the corpus") {
  for (auto& [name, e] : fixtures::expression_corpus()) {
    std::string text = print_surface(e);
    ParseOptions opts;
    opts.alphabet = e->alphabet;
    opts.monoid = e->monoid.kind;
    ExprPtr back = parse_surface(text, opts);
    CHECK_MESSAGE(expr_equal(e, back), name, ": ", text);
  }
}

TEST_CASE("monoid inference") {
  CHECK(parse_surface("a/1 + b/2")->monoid.kind == MonoidKind::Int);
  CHECK(parse_surface("a/1 + b/x")->monoid.kind == MonoidKind::Str);
  CHECK(parse_surface("a/\"1\"")->monoid.kind == MonoidKind::Str);
}
