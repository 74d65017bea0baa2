#include <doctest.h>

#include "rca/relang.hpp"

using namespace rca;

namespace {
const std::vector<std::string> AB = {"a", "b"};

Dfa lang(const std::string& re, std::vector<std::string> sigma = AB) {
  return regex_to_dfa(*parse_regex(re), std::move(sigma));
}

// brute-force split counter for the unambiguity oracles
int count_splits(const Dfa& l1, const Dfa& l2, const Word& w) {
  int hits = 0;
  for (size_t k = 0; k <= w.size(); ++k) {
    Word u(w.begin(), w.begin() + k), v(w.begin() + k, w.end());
    if (l1.accepts(u) && l2.accepts(v)) ++hits;
  }
  return hits;
}

int count_decomps(const Dfa& l, const Word& w, size_t from = 0) {
  if (from == w.size()) return 1;
  int total = 0;
  for (size_t k = from + 1; k <= w.size(); ++k) {
    Word piece(w.begin() + from, w.begin() + k);
    if (l.accepts(piece)) total += count_decomps(l, w, k);
    if (total > 4) return total;
  }
  return total;
}
}  // namespace

TEST_CASE("dfa algebra basics") {
  Dfa astar = lang("a*"), astarb = lang("a*b");
  Dfa inter = dfa_intersect(astar, astarb);
  for (const auto& w : words_up_to(AB, 5)) CHECK(!inter.accepts(w));

  Dfa none = dfa_empty(AB);
  Dfa all = dfa_complement(none);
  for (const auto& w : words_up_to(AB, 4)) CHECK(all.accepts(w));

  Dfa rev = dfa_reverse(lang("ab"));
  CHECK(rev.accepts(word_from_chars("ba")));
  for (const auto& w : words_up_to(AB, 4))
    CHECK(rev.accepts(w) == (word_to_chars(w) == "ba"));

  CHECK_THROWS(dfa_intersect(astar, lang("a*", {"a"})));
}

TEST_CASE("determinize agrees with the NFA on short strings") {
  // (a|b)*a
  Nfa n;
  n.alphabet = AB;
  n.num_states = 2;
  n.starts = {0};
  n.accepting = {0, 1};
  n.edges.assign(2, {});
  n.edges[0] = {{0, 0}, {1, 0}, {0, 1}};
  n.edges[1] = {{0, 0}, {1, 0}, {0, 1}};
  Dfa d = determinize(n);
  for (const auto& w : words_up_to(AB, 5))
    CHECK(d.accepts(w) == (!w.empty() && w.back() == "a"));

  Nfa no_accept = n;
  no_accept.accepting = {0, 0};
  CHECK(dfa_is_empty(determinize(no_accept)));

  Nfa eps;
  eps.alphabet = AB;
  eps.num_states = 1;
  eps.starts = {0};
  eps.accepting = {1};
  eps.edges.assign(1, {});
  Dfa deps = determinize(eps);
  for (const auto& w : words_up_to(AB, 3)) CHECK(deps.accepts(w) == w.empty());
}

TEST_CASE("nfa unambiguity") {
  // two parallel a-edges: ambiguous
  Nfa two;
  two.alphabet = {"a"};
  two.num_states = 3;
  two.starts = {0};
  two.accepting = {0, 1, 1};
  two.edges.assign(3, {});
  two.edges[0] = {{0, 1}, {0, 2}};
  CHECK(!nfa_is_unambiguous(two));

  CHECK(nfa_is_unambiguous(dfa_to_nfa(lang("(a|b)*ab"))));
}

TEST_CASE("unambiguous concat dfa") {
  Dfa d = unambiguous_concat_dfa(lang("a*"), lang("b*"));
  CHECK(d.accepts(word_from_chars("ab")));
  Dfa d2 = unambiguous_concat_dfa(lang("a*"), lang("a*b"));
  CHECK(!d2.accepts(word_from_chars("aab")));
  Dfa d3 = unambiguous_concat_dfa(dfa_empty(AB), lang("a*"));
  for (const auto& w : words_up_to(AB, 4)) CHECK(!d3.accepts(w));

  // oracle sweep
  for (const auto& l1 : {lang("a*"), lang("a*b"), lang("(a|b)*"), lang("ab")})
    for (const auto& l2 : {lang("b*"), lang("a*b"), lang("(ab)*")})
      for (const auto& w : words_up_to(AB, 6)) {
        Dfa u = unambiguous_concat_dfa(l1, l2);
        CHECK(u.accepts(w) == (count_splits(l1, l2, w) == 1));
      }
}

TEST_CASE("unambiguous star dfa") {
  Dfa d = unambiguous_star_dfa(lang("a*b"));
  CHECK(d.accepts(word_from_chars("abab")));
  Dfa d2 = unambiguous_star_dfa(lang("a|aa", {"a"}));
  CHECK(!d2.accepts(word_from_chars("aaa")));
  for (const auto& l : {lang("a*b"), lang("a|aa"), lang("(a|b)b*")}) {
    Dfa u = unambiguous_star_dfa(l);
    CHECK(u.accepts({}));
    for (const auto& w : words_up_to(AB, 6))
      CHECK(u.accepts(w) == (count_decomps(l, w) == 1));
  }
}

TEST_CASE("state elimination: language and parse uniqueness") {
  Dfa astarb = lang("a*b");
  RegexPtr r = state_elimination(dfa_to_nfa(astarb));
  for (const auto& w : words_up_to(AB, 5))
    CHECK(regex_matches(*r, w) == astarb.accepts(w));

  RegexPtr empty = state_elimination(dfa_to_nfa(dfa_empty(AB)));
  CHECK(empty->kind == Regex::Kind::Empty);

  // parse uniqueness on unambiguous inputs
  for (const auto& d : {lang("a*b"), lang("(a|b)*ab"), lang("(ab|b)*")}) {
    Nfa n = dfa_to_nfa(d);
    REQUIRE(nfa_is_unambiguous(n));
    RegexPtr re = state_elimination(n);
    for (const auto& w : words_up_to(AB, 5)) {
      long long c = regex_parse_count(*re, w);
      CHECK(c == (d.accepts(w) ? 1 : 0));
    }
  }
}

TEST_CASE("fig 4b flow nfa: elimination regex matches on annotated letters") {
  // states: 0 = (q0,x) accepting, 1 = (q0,y); both initial
  Nfa n;
  n.alphabet = {"a_1", "b_0", "b_1", "e_1"};
  n.num_states = 2;
  n.starts = {0, 1};
  n.accepting = {1, 0};
  n.edges.assign(2, {});
  n.edges[0] = {{0, 0}, {1, 0}};          // a_1, b_0 loops on (q0,x)
  n.edges[1] = {{0, 1}, {2, 1}, {3, 1}};  // a_1, b_1, e_1 loops on (q0,y)
  n.edges[1].push_back({3, 0});           // e_1 from (q0,y) to (q0,x)
  CHECK(nfa_is_unambiguous(n));
  RegexPtr re = state_elimination(n);
  for (const auto& w : words_up_to(n.alphabet, 4)) {
    CHECK(regex_matches(*re, w) == n.accepts(w));
    if (n.accepts(w)) CHECK(regex_parse_count(*re, w) == 1);
  }
}

TEST_CASE("regex literal parsing") {
  Dfa d = lang("(a|b)*#((a|b)*#)*(a|b)*", {"a", "b", "#"});
  CHECK(d.accepts(word_from_chars("ab#a")));
  CHECK(!d.accepts(word_from_chars("ab")));
  Dfa eps = lang("()", AB);
  CHECK(eps.accepts({}));
  CHECK(!eps.accepts(word_from_chars("a")));
  Dfa none = lang("{}", AB);
  CHECK(dfa_is_empty(none));
  Dfa plus = lang("a+b?");
  CHECK(plus.accepts(word_from_chars("aa")));
  CHECK(plus.accepts(word_from_chars("aab")));
  CHECK(!plus.accepts(word_from_chars("b")));
}

TEST_CASE("dfa language ops") {
  CHECK(dfa_equal(dfa_concat(lang("a*"), lang("b*")), lang("a*b*")));
  CHECK(dfa_equal(dfa_star(lang("ab")), lang("(ab)*")));
  CHECK(dfa_equal(dfa_plus(lang("a")), lang("aa*")));
  Dfa ext = dfa_extend_alphabet(lang("a*"), {"a", "b", "c"});
  CHECK(ext.accepts(word_from_chars("aa")));
  CHECK(!ext.accepts({"a", "c"}));
}

TEST_CASE("boolean ops agree with per-string evaluation") {
  std::vector<Dfa> langs = {lang("a*"), lang("a*b"), lang("(ab|b)*"),
                            lang("(a|b)*a")};
  for (const auto& l1 : langs)
    for (const auto& l2 : langs) {
      Dfa u = dfa_union(l1, l2);
      Dfa i = dfa_intersect(l1, l2);
      Dfa c = dfa_complement(l1);
      Dfa r = dfa_reverse(l1);
      Dfa via_algebra = dfa_algebra(DfaOp::Union, {l1, l2});
      for (const auto& w : words_up_to(AB, 6)) {
        CHECK(u.accepts(w) == (l1.accepts(w) || l2.accepts(w)));
        CHECK(i.accepts(w) == (l1.accepts(w) && l2.accepts(w)));
        CHECK(c.accepts(w) == !l1.accepts(w));
        Word rev(w.rbegin(), w.rend());
        CHECK(r.accepts(w) == l1.accepts(rev));
        CHECK(via_algebra.accepts(w) == u.accepts(w));
      }
    }
}
