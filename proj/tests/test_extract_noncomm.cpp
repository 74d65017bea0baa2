#include <doctest.h>

#include "fixtures.hpp"
#include "rca/extract_noncomm.hpp"

using namespace rca;

namespace {
// every subpath shape is ⊏ or ∼ the whole shape; the shortest prefix that is
// not strictly below has the full shape exactly
void check_claims(const Ccra& m, int max_len) {
  for (const auto& w : words_up_to(m.alphabet, max_len)) {
    for (size_t q = 0; q < m.states.size(); ++q) {
      Shape full = shape_of_run(m, static_cast<int>(q), w);
      // claim V.3 over all subpaths
      for (size_t i = 0; i <= w.size(); ++i) {
        int cur = static_cast<int>(q);
        for (size_t p = 0; p < i; ++p) cur = m.delta[cur][m.sym_index(w[p])];
        for (size_t j = i; j <= w.size(); ++j) {
          Shape sub = shape_of_run(m, cur, Word(w.begin() + i, w.begin() + j));
          auto ord = shape_order(sub, full);
          CHECK((ord == ShapeOrd::Less || ord == ShapeOrd::EqualSupport));
        }
      }
      // claim V.4 over prefixes
      for (size_t i = 0; i <= w.size(); ++i) {
        Shape pre = shape_of_run(m, static_cast<int>(q),
                                 Word(w.begin(), w.begin() + i));
        auto ord = shape_order(pre, full);
        if (ord != ShapeOrd::Less) {
          CHECK(pre == full);
          break;
        }
      }
    }
  }
}

void roundtrip(const std::string& name, const Ccra& m, int max_len) {
  ExprPtr e = extract_noncommutative(m);
  for (const auto& w : words_up_to(m.alphabet, max_len)) {
    MonoidValue want = eval_ccra(m, w);
    MonoidValue got = eval_naive(e, w);
    CHECK_MESSAGE(want == got, name, " at '", word_to_chars(w),
                  "': machine=", render(want), " extracted=", render(got));
    if (!(want == got)) return;
  }
}
}  // namespace

TEST_CASE("shape concat") {
  int R = 3;
  Shape id = shape_identity(R);
  Shape s1 = {{0}, {1, 2}, {}};  // x:=x, y:=yz, z:=ε  (5e)
  Shape s2 = {{0, 2}, {1}, {}};  // x:=xz, y:=y, z:=ε  (5f)
  CHECK(shape_concat(id, s1) == s1);
  CHECK(shape_concat(s1, id) == s1);
  CHECK(shape_concat(s1, s2) == s1);
  CHECK(shape_concat(s2, s1) == s2);

  // shuffle b-edge twice: everything flows into x
  Shape b = {{0, 1}, {2}, {}};
  Shape top = {{0, 1, 2}, {}, {}};
  CHECK(shape_concat(b, b) == top);
}

TEST_CASE("shape order") {
  Shape id = shape_identity(3);
  Shape s1 = {{0}, {1, 2}, {}};
  Shape s2 = {{0, 2}, {1}, {}};
  Shape top = {{0, 1, 2}, {}, {}};
  CHECK(shape_order(id, s1) == ShapeOrd::Less);
  CHECK(shape_order(id, top) == ShapeOrd::Less);
  CHECK(shape_order(s1, s2) == ShapeOrd::EqualSupport);
  CHECK(shape_order(top, id) == ShapeOrd::Greater);
  Shape sx = {{0}, {1, 2}, {}};   // supp {x,y}
  Shape sy = {{0, 1}, {}, {2}};   // supp {x,z}
  CHECK(shape_order(sx, sy) == ShapeOrd::Incomparable);
}

TEST_CASE("strings_with_shape on the shuffle SST") {
  Ccra m = fixtures::shuffle_sst();
  // q1 -> q1, identity shape, level 0: exactly {a} plus ε
  Dfa d = strings_with_shape(m, 1, 1, shape_identity(3), 0);
  for (const auto& w : words_up_to({"a", "b"}, 4)) {
    bool expect = w.empty() || (w.size() == 1 && w[0] == "a");
    CHECK(d.accepts(w) == expect);
  }
  // impossible shape: y collects everything
  Shape imp = {{}, {0, 1, 2}, {}};
  CHECK(dfa_is_empty(strings_with_shape(m, 0, 2, imp, 3)));
  // full level: membership matches brute-force shape computation
  Shape top = {{0, 1, 2}, {}, {}};
  Dfa dt = strings_with_shape(m, 0, 2, top, 3);
  for (const auto& w : words_up_to({"a", "b"}, 6)) {
    bool expect = m.graph_dfa().run(w) == 2 && shape_of_run(m, 0, w) == top;
    CHECK(dt.accepts(w) == expect);
  }
}

TEST_CASE("prop V.3: run shape equals shape concatenation of pieces") {
  for (const Ccra& m :
       {fixtures::shuffle_sst(), fixtures::two_state_sst(),
        fixtures::crossing_sst()}) {
    for (const auto& w : words_up_to(m.alphabet, 6)) {
      for (size_t cut = 0; cut <= w.size(); ++cut) {
        Word w1(w.begin(), w.begin() + cut), w2(w.begin() + cut, w.end());
        int mid = 0;
        for (size_t p = 0; p < cut; ++p) mid = m.delta[mid][m.sym_index(w[p])];
        CHECK(shape_of_run(m, 0, w) ==
              shape_concat(shape_of_run(m, 0, w1), shape_of_run(m, mid, w2)));
      }
    }
  }
}

TEST_CASE("claims V.3 and V.4 on normalized corpus machines") {
  check_claims(normalize(fixtures::shuffle_sst()), 5);
  check_claims(normalize(fixtures::two_state_sst()), 5);
  check_claims(normalize(fixtures::crossing_sst()), 6);
}

TEST_CASE("level-0 summaries match the machine's update constants") {
  Ccra m = normalize(fixtures::two_state_sst());
  auto r0 = build_r0(m);
  for (auto& [key, ev] : r0) {
    auto [q, q2, sh] = key;
    for (const auto& w : words_up_to(m.alphabet, 1)) {
      if (w.empty()) continue;
      int s = m.sym_index(w[0]);
      if (m.delta[q][s] != q2) continue;
      if (shape_of_transition(m, q, s) != sh) continue;
      for (size_t v = 0; v < m.registers.size(); ++v) {
        auto patches = m.mu[q][s][v].patches(m.monoid);
        REQUIRE(patches.size() == ev.comp[v].size());
        for (size_t k = 0; k < patches.size(); ++k)
          CHECK(eval_naive(ev.comp[v][k], w) == patches[k]);
      }
    }
  }
}

TEST_CASE("roundtrip: echo machine") {
  roundtrip("echo", fixtures::echo_sst(), 8);
}

TEST_CASE("roundtrip: machine with empty accepting set") {
  Ccra m = fixtures::echo_sst();
  m.accepting = {0};
  ExprPtr e = extract_noncommutative(m);
  for (const auto& w : words_up_to(m.alphabet, 4))
    CHECK(eval_naive(e, w).is_bottom());
}

TEST_CASE("roundtrip: crossing machine") {
  roundtrip("crossing", fixtures::crossing_sst(), 6);
}

TEST_CASE("roundtrip: two-state two-register machine") {
  roundtrip("two-state", fixtures::two_state_sst(), 6);
}

TEST_CASE("roundtrip: normalized shuffle SST") {
  roundtrip("shuffle", normalize(fixtures::shuffle_sst()), 6);
}

TEST_CASE("extracted expressions stay in the Thm V.1 operator set") {
  ExprPtr e = extract_noncommutative(fixtures::two_state_sst());
  for (auto k : expr_operators(e)) {
    bool allowed =
        k == FuncExpr::Kind::Const || k == FuncExpr::Kind::Choice ||
        k == FuncExpr::Kind::Sum || k == FuncExpr::Kind::SplitSum ||
        k == FuncExpr::Kind::LeftSplitSum || k == FuncExpr::Kind::IterSum ||
        k == FuncExpr::Kind::LeftIterSum || k == FuncExpr::Kind::ChainedSum ||
        k == FuncExpr::Kind::LeftChainedSum;
    CHECK(allowed);
  }
}

namespace {
// σ ∈ r^(level)(q,q') iff the run stays inside {q_0..q_{level-1}} between its
// endpoints
bool in_r_level(const Ccra& m, int q, int q2, const Word& w, int level) {
  int cur = q;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i > 0 && cur >= level) return false;
    cur = m.delta[cur][m.sym_index(w[i])];
  }
  return cur == q2 && !w.empty();
}
}  // namespace

TEST_CASE("summarization soundness at every level") {
  for (const Ccra& m :
       {fixtures::echo_sst(), normalize(fixtures::crossing_sst()),
        normalize(fixtures::two_state_sst())}) {
    int n = static_cast<int>(m.states.size());
    for (int level = 0; level <= n; ++level) {
      auto table = summarize_level(m, level);
      for (const auto& w : words_up_to(m.alphabet, 5)) {
        if (w.empty()) continue;
        for (int q = 0; q < n; ++q) {
          int q2 = q;
          for (const auto& sym : w) q2 = m.delta[q2][m.sym_index(sym)];
          if (!in_r_level(m, q, q2, w, level)) continue;
          Shape sh = shape_of_run(m, q, w);
          auto it = table.find({q, q2, sh});
          REQUIRE_MESSAGE(it != table.end(), "missing entry level ", level);
          // compose the run's update expressions and compare constant slots
          std::vector<UpdateExpr> comp(m.registers.size());
          for (size_t v = 0; v < m.registers.size(); ++v)
            comp[v] = UpdateExpr::reg(static_cast<int>(v));
          int cur = q;
          for (const auto& sym : w) {
            int s = m.sym_index(sym);
            std::vector<UpdateExpr> nxt(m.registers.size());
            for (size_t v = 0; v < m.registers.size(); ++v)
              nxt[v] = subst_update(m.mu[cur][s][v], comp, m.monoid);
            comp = std::move(nxt);
            cur = m.delta[cur][s];
          }
          for (size_t v = 0; v < m.registers.size(); ++v) {
            auto patches = comp[v].patches(m.monoid);
            REQUIRE(patches.size() == it->second.comp[v].size());
            CHECK(it->second.dom->accepts(w));
            for (size_t k = 0; k < patches.size(); ++k) {
              MonoidValue got = eval_naive(it->second.comp[v][k], w);
              CHECK_MESSAGE(got == patches[k], "level ", level, " q", q, "->q",
                            q2, " reg ", v, " slot ", k, " at '",
                            word_to_chars(w), "': ", render(got), " vs ",
                            render(patches[k]));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("expression vector operations") {
  Ccra m = normalize(fixtures::two_state_sst());
  auto r0 = build_r0(m);
  std::vector<std::string> sig = m.alphabet;
  DfaPtr all = std::make_shared<Dfa>(dfa_all(sig));
  DfaPtr none = std::make_shared<Dfa>(dfa_empty(sig));

  auto& first = r0.begin()->second;
  SUBCASE("restrict to the full language keeps values") {
    ExpressionVector r = ev_restrict_shift(first, EvShift::Restrict, all);
    for (const auto& w : words_up_to(sig, 2))
      for (size_t v = 0; v < r.comp.size(); ++v)
        for (size_t k = 0; k < r.comp[v].size(); ++k)
          CHECK(eval_naive(r.comp[v][k], w) ==
                eval_naive(first.comp[v][k], w));
  }
  SUBCASE("restrict to the empty language is everywhere undefined") {
    ExpressionVector r = ev_restrict_shift(first, EvShift::Restrict, none);
    CHECK(dfa_is_empty(*r.dom));
    for (const auto& w : words_up_to(sig, 2))
      CHECK(eval_naive(r.comp[0][0], w).is_bottom());
  }
  SUBCASE("left shift reads the prefix") {
    // single-letter vector shifted by the whole language: component values
    // on w = prefix · rest equal the unshifted value on the prefix, when the
    // split is unique
    ExpressionVector sh = ev_restrict_shift(first, EvShift::LShift, all);
    for (const auto& w : words_up_to(sig, 3)) {
      MonoidValue got = eval_naive(sh.comp[0][0], w);
      // unique split demands exactly one prefix in the letter domain
      int in_dom = 0;
      for (size_t c = 0; c <= w.size(); ++c)
        if (first.dom->accepts(Word(w.begin(), w.begin() + c))) ++in_dom;
      if (in_dom == 1 && !w.empty() && first.dom->accepts({w[0]}))
        CHECK(got == eval_naive(first.comp[0][0], {w[0]}));
    }
  }
  SUBCASE("choice requires disjoint domains") {
    CHECK_THROWS_AS(ev_choice(first, first), std::invalid_argument);
  }
  SUBCASE("concat with the empty-path vector preserves values") {
    ExpressionVector eps;
    eps.shape = shape_identity(static_cast<int>(m.registers.size()));
    eps.dom = std::make_shared<Dfa>(dfa_epsilon(sig));
    eps.comp.resize(m.registers.size());
    for (size_t v = 0; v < m.registers.size(); ++v)
      for (int k = 0; k < 2; ++k)
        eps.comp[v].push_back(make_const(sig, m.monoid, eps.dom,
                                         m.monoid.identity(), "()"));
    ExpressionVector cat = ev_concat(eps, first);
    CHECK(cat.shape == first.shape);
    for (const auto& w : words_up_to(sig, 1)) {
      if (!first.dom->accepts(w)) continue;
      for (size_t v = 0; v < cat.comp.size(); ++v)
        for (size_t k = 0; k < cat.comp[v].size(); ++k)
          CHECK(eval_naive(cat.comp[v][k], w) ==
                eval_naive(first.comp[v][k], w));
    }
  }
}

TEST_CASE("concat of two shuffle a-loop vectors summarizes aa") {
  // the a-loop at q1 of the shuffle SST: x gains "aa", z gains "bb"
  Ccra m = fixtures::shuffle_sst();
  auto r0 = build_r0(m);
  Shape ident = shape_identity(3);
  auto it = r0.find({1, 1, ident});
  REQUIRE(it != r0.end());
  ExpressionVector aa = ev_concat(it->second, it->second);
  Word w = word_from_chars("aa");
  CHECK(aa.dom->accepts(w));
  CHECK(eval_naive(aa.comp[0][1], w) == MonoidValue::str("aa"));
  CHECK(eval_naive(aa.comp[2][1], w) == MonoidValue::str("bb"));
  CHECK(eval_naive(aa.comp[1][0], w) == MonoidValue::str(""));
}
