#include <doctest.h>

#include "fixtures.hpp"
#include "rca/ccra.hpp"
#include "rca/machine_io.hpp"
#include "rca/shape.hpp"
#include "rca/extract_noncomm.hpp"

using namespace rca;

namespace {
MonoidValue S(const std::string& s) { return MonoidValue::str(s); }
MonoidValue I(long long n) { return MonoidValue::integer(n); }
Word W(const std::string& s) { return word_from_chars(s); }
}  // namespace

TEST_CASE("copyless validation") {
  Ccra sst = fixtures::shuffle_sst();
  CHECK(validate_copyless(sst).empty());

  // x := x, y := x — x feeds two registers
  Ccra cross = sst;
  cross.states = {"q"};
  cross.alphabet = {"a"};
  cross.registers = {"x", "y"};
  cross.start = 0;
  cross.accepting = {1};
  cross.delta = {{0}};
  cross.mu.assign(1, std::vector<std::vector<UpdateExpr>>(1));
  cross.mu[0][0] = {UpdateExpr::reg(0), UpdateExpr::reg(0)};
  cross.nu = {UpdateExpr::reg(0)};
  auto v1 = validate_copyless(cross);
  REQUIRE(!v1.empty());
  CHECK(v1[0].kind == CopylessViolation::Kind::ReusedAcrossUpdates);

  // x := xx — x twice in one rhs
  Ccra dup = cross;
  dup.registers = {"x"};
  dup.mu[0][0] = {UpdateExpr{{UpdateExpr::Tok::regref(0),
                              UpdateExpr::Tok::regref(0)}}};
  auto v2 = validate_copyless(dup);
  REQUIRE(!v2.empty());
  CHECK(v2[0].kind == CopylessViolation::Kind::ReusedWithinUpdate);
}

TEST_CASE("shuffle SST evaluation") {
  Ccra m = fixtures::shuffle_sst();
  CHECK(eval_ccra(m, W("abab")) == S("ab"));
  CHECK(eval_ccra(m, W("ab")).is_bottom());
  CHECK(eval_ccra(m, {}).is_bottom());
  CHECK(eval_ccra(m, W("aababb")) == S("abbb"));
}

TEST_CASE("coffee ACRA evaluation") {
  Acra m = fixtures::coffee_acra();
  CHECK(eval_acra(m, W("CCSC#C")) == I(5));
  CHECK(eval_acra(m, {}) == I(0));
}

TEST_CASE("fig 4a ACRA evaluation") {
  Acra m = fixtures::fig4a_acra();
  CHECK(eval_acra(m, W("abeb")) == I(3));
}

TEST_CASE("lookahead labelling and evaluation") {
  // A tracks "suffix in b*": state 0 = yes, 1 = no
  Dfa a;
  a.alphabet = {"a", "b"};
  a.num_states = 2;
  a.start = 0;
  a.accepting = {1, 0};
  a.next = {{1, 0}, {1, 1}};
  Word lab = lookahead_labelling(a, W("ab"));
  REQUIRE(lab.size() == 3);
  // positions: suffix "ab" (not in b*), "b" (in b*), ε (in b*)
  CHECK(lab[0] == "L1");
  CHECK(lab[1] == "L0");
  CHECK(lab[2] == "L0");
  CHECK(lookahead_labelling(a, {}).size() == 1);

  // unary machine vs relabeled machine over a one-state lookahead
  Dfa one;
  one.alphabet = {"a"};
  one.num_states = 1;
  one.start = 0;
  one.accepting = {0};
  one.next = {{0}};
  Ccra m;  // counts a's mod nothing: x := xa
  m.states = {"q"};
  m.alphabet = {"a"};
  m.registers = {"x"};
  m.start = 0;
  m.accepting = {1};
  m.delta = {{0}};
  m.mu.assign(1, std::vector<std::vector<UpdateExpr>>(1));
  m.mu[0][0] = {UpdateExpr{{UpdateExpr::Tok::regref(0),
                            UpdateExpr::Tok::constant(S("a"))}}};
  m.nu = {UpdateExpr::reg(0)};
  m.monoid = MonoidSpec::strings({"a"});
  // relabel over "L0" with a pre-state absorbing the extra label
  Ccra r = m;
  r.states = {"pre", "q"};
  r.alphabet = {"L0"};
  r.start = 0;
  r.accepting = {0, 1};
  r.delta = {{1}, {1}};
  r.mu.assign(2, std::vector<std::vector<UpdateExpr>>(1));
  r.mu[0][0] = {UpdateExpr::reg(0)};
  r.mu[1][0] = m.mu[0][0];
  r.nu = {UpdateExpr{}, UpdateExpr::reg(0)};
  for (const auto& w : words_up_to({"a"}, 5))
    CHECK(eval_with_lookahead(r, one, w) == eval_ccra(m, w));
}

TEST_CASE("cascade evaluation") {
  Cascade single{{Stage{fixtures::shuffle_sst(), {}, {}}}};
  for (const auto& w : words_up_to({"a", "b"}, 5))
    CHECK(eval_cascade(single, w) == eval_ccra(fixtures::shuffle_sst(), w));

  // reverse then echo = reverse
  Cascade two;
  two.stages.push_back(Stage{fixtures::echo_sst(), {}, {}});
  // a one-register reverser: x := c x
  Ccra rev = fixtures::echo_sst();
  rev.mu[0][0] = {UpdateExpr{{UpdateExpr::Tok::constant(S("a")),
                              UpdateExpr::Tok::regref(0)}}};
  rev.mu[0][1] = {UpdateExpr{{UpdateExpr::Tok::constant(S("b")),
                              UpdateExpr::Tok::regref(0)}}};
  two.stages.insert(two.stages.begin(), Stage{rev, {}, {}});
  CHECK(eval_cascade(two, W("abc"[0] == 'a' ? "ab" : "ab")) == S("ba"));
  CHECK(eval_cascade(two, W("abb")) == S("bba"));
}

TEST_CASE("normalization") {
  SUBCASE("shuffle SST") {
    Ccra m = fixtures::shuffle_sst();
    CHECK(!is_normalized(m));
    Ccra n = normalize(m);
    CHECK(is_normalized(n));
    CHECK(validate_copyless(n).empty());
    for (const auto& w : words_up_to({"a", "b"}, 6))
      CHECK(eval_ccra(n, w) == eval_ccra(m, w));
  }
  SUBCASE("crossing updates (5d shape)") {
    Ccra m = fixtures::crossing_sst();
    CHECK(!is_normalized(m));
    Ccra n = normalize(m);
    CHECK(is_normalized(n));
    for (const auto& w : words_up_to({"a", "b"}, 6))
      CHECK(eval_ccra(n, w) == eval_ccra(m, w));
  }
  SUBCASE("already-normalized machine stays normalized and equivalent") {
    Ccra m = fixtures::echo_sst();
    CHECK(is_normalized(m));
    Ccra n = normalize(m);
    CHECK(is_normalized(n));
    for (const auto& w : words_up_to({"a", "b"}, 6))
      CHECK(eval_ccra(n, w) == eval_ccra(m, w));
  }
}

TEST_CASE("def V.3 shape checks") {
  // x:=x; y:=yz; z:=ε is normalized, x:=yz; y:=x; z:=ε is not
  Shape fine = {{0}, {1, 2}, {}};
  Shape weird = {{1, 2}, {0}, {}};
  CHECK(shape_is_normalized(fine));
  CHECK(!shape_is_normalized(weird));
  CHECK(shape_is_normalized(shape_identity(3)));
}

TEST_CASE("machine json round trip") {
  Ccra m = fixtures::shuffle_sst();
  std::string j = save_ccra_json(m);
  Ccra back = load_ccra_json(j);
  for (const auto& w : words_up_to({"a", "b"}, 6))
    CHECK(eval_ccra(back, w) == eval_ccra(m, w));
  CHECK(!json_is_acra(j));
  CHECK(!json_is_cascade(j));
}

TEST_CASE("loader rejects copyful machines") {
  std::string bad = R"({
    "states": ["q"], "alphabet": ["a"], "registers": ["x", "y"],
    "start": "q", "accepting": ["q"],
    "delta": [{"from": "q", "symbol": "a", "to": "q"}],
    "mu": [
      {"state": "q", "symbol": "a", "register": "x", "rhs": [{"reg": "x"}]},
      {"state": "q", "symbol": "a", "register": "y", "rhs": [{"reg": "x"}]}
    ],
    "nu": [{"state": "q", "rhs": [{"reg": "x"}]}]
  })";
  CHECK_THROWS_AS(load_ccra_json(bad), std::invalid_argument);
}
