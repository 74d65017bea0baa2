#include <doctest.h>

#include "fixtures.hpp"
#include "rca/compile.hpp"

using namespace rca;

namespace {
MonoidValue S(const std::string& s) { return MonoidValue::str(s); }
MonoidValue I(long long n) { return MonoidValue::integer(n); }
Word W(const std::string& s) { return word_from_chars(s); }

void sweep(const std::string& name, const ExprPtr& e, int max_len) {
  Cascade c = compile(e);
  for (const auto& w : words_up_to(e->alphabet, max_len)) {
    MonoidValue expect = eval_naive(e, w);
    MonoidValue got = eval_cascade(c, w);
    CHECK_MESSAGE(expect == got, name, " at '", word_to_chars(w), "': naive=",
                  render(expect), " cascade=", render(got));
    if (!(expect == got)) return;  // keep the log short
  }
}
}  // namespace

TEST_CASE("base machines") {
  auto astar = regex_to_dfa(*parse_regex("a*"), {"a", "b"});
  Stage s = compile_base(astar, I(7), MonoidSpec::integers());
  CHECK(eval_stage(s, W("aa")) == I(7));
  CHECK(eval_stage(s, W("ab")).is_bottom());
  Stage none = compile_base(dfa_empty({"a"}), I(0), MonoidSpec::integers());
  CHECK(eval_stage(none, W("a")).is_bottom());
  auto ab = regex_to_dfa(*parse_regex("ab"), {"a", "b"});
  Stage sx = compile_base(ab, S("x"), MonoidSpec::strings({"x"}));
  CHECK(eval_stage(sx, W("ab")) == S("x"));
}

TEST_CASE("products: indicator and copy") {
  sweep("indicator", fixtures::indicator_a(), 6);
  sweep("copy", fixtures::copy_ab(), 6);
}

TEST_CASE("split: strip") { sweep("strip", fixtures::strip(), 6); }

TEST_CASE("split machine on two constants with lookahead path") {
  ExprPtr e = fixtures::parse("a/x (+) b/y");
  Cascade c = compile(e);
  REQUIRE(c.stages.size() == 1);
  REQUIRE(c.stages[0].look.has_value());
  CHECK(eval_with_lookahead(c.stages[0].m, *c.stages[0].look, W("ab")) ==
        S("xy"));
  sweep("xy", e, 5);
}

TEST_CASE("iter: identity and count") {
  sweep("id", fixtures::id_ab(), 6);
  sweep("count_a", fixtures::count_a(), 6);
  sweep("reverse(lsum)", fixtures::reverse_ab(), 6);
}

TEST_CASE("ambiguous split rejected") {
  ExprPtr e = fixtures::parse("a*/1 (+) a*/2", {}, {{"a"}});
  Cascade c = compile(e);
  CHECK(eval_cascade(c, W("a")).is_bottom());
  sweep("a*1a*2", e, 5);
}

TEST_CASE("swap") { sweep("swap", fixtures::swap(), 6); }

TEST_CASE("coffee") { sweep("coffee", fixtures::coffee(), 6); }

TEST_CASE("reverse combinator via reversal stage") {
  ExprPtr e = fixtures::parse("rev (a/x (+) b/y)");
  sweep("rev-split", e, 5);
}

TEST_CASE("compose cascades") {
  // swap after reversal: rev then swap of names
  ExprPtr inner = fixtures::id_ab();
  ExprPtr e = make_compose(fixtures::reverse_ab(), inner);
  sweep("rev o id", e, 5);
}

TEST_CASE("shuffle pipeline") { sweep("shuffle", fixtures::shuffle(), 6); }

TEST_CASE("shuffle expression matches the hand-written SST") {
  Cascade c = compile(fixtures::shuffle());
  Ccra sst = fixtures::shuffle_sst();
  for (const auto& w : words_up_to({"a", "b"}, 8))
    CHECK(eval_cascade(c, w) == eval_ccra(sst, w));
}

TEST_CASE("every compiled stage is copyless") {
  for (auto& [name, e] : fixtures::expression_corpus()) {
    Cascade c = compile(e);
    for (const auto& st : c.stages)
      CHECK_MESSAGE(validate_copyless(st.m).empty(), name);
  }
}

TEST_CASE("compose nested under binary combinators") {
  ExprPtr revid = make_compose(fixtures::reverse_ab(), fixtures::id_ab());
  sweep("sum with composed child",
        make_binary(FuncExpr::Kind::Sum, revid, fixtures::id_ab()), 6);
  sweep("choice of split with composed child",
        make_binary(FuncExpr::Kind::Choice,
                    make_binary(FuncExpr::Kind::SplitSum, revid,
                                fixtures::parse("b/\"\"", {}, {{"a", "b"}})),
                    fixtures::id_ab()),
        6);
  sweep("reverse of strip",
        make_unary(FuncExpr::Kind::Reverse, fixtures::strip()), 5);
}
