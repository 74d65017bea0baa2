#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace rca {

// Input words are sequences of symbols; symbols are short strings so that
// annotated letters (a_1, b_0, ...) and look-ahead labels fit the same mold.
using Word = std::vector<std::string>;

Word word_from_chars(const std::string& s);
std::string word_to_chars(const Word& w);

// Enumerates all words over `alphabet` with length <= max_len, shortlex order.
std::vector<Word> words_up_to(const std::vector<std::string>& alphabet,
                              int max_len);

// Deterministic, total automaton. `next[q][s]` indexes states; `accepting`
// is a 0/1 mask.
struct Dfa {
  std::vector<std::string> alphabet;
  int num_states = 0;
  int start = 0;
  std::vector<char> accepting;
  std::vector<std::vector<int>> next;

  int sym_index(const std::string& s) const;
  int step(int q, int sym_idx) const { return next[q][sym_idx]; }
  int run(const Word& w) const;
  bool accepts(const Word& w) const;
  void check() const;  // totality / shape invariants
};

struct Nfa {
  std::vector<std::string> alphabet;
  int num_states = 0;
  std::vector<int> starts;
  std::vector<char> accepting;
  // edges[q] = list of (symbol index, target)
  std::vector<std::vector<std::pair<int, int>>> edges;

  int sym_index(const std::string& s) const;
  bool accepts(const Word& w) const;
  // number of accepting paths for w, capped at `cap`
  long long count_paths(const Word& w, long long cap = 8) const;
};

// ---- DFA constructions ----

Dfa dfa_empty(std::vector<std::string> alphabet);
Dfa dfa_all(std::vector<std::string> alphabet);
Dfa dfa_epsilon(std::vector<std::string> alphabet);   // { ε }
Dfa dfa_nonempty(std::vector<std::string> alphabet);  // Σ+
Dfa dfa_word(std::vector<std::string> alphabet, const Word& w);

Dfa dfa_intersect(const Dfa& a, const Dfa& b);
Dfa dfa_union(const Dfa& a, const Dfa& b);
Dfa dfa_complement(const Dfa& a);
Dfa dfa_difference(const Dfa& a, const Dfa& b);
// Accepts w iff reverse(w) ∈ L(a); goes through determinization.
Dfa dfa_reverse(const Dfa& a);
// Language concatenation and Kleene closure (plain, not unambiguous).
Dfa dfa_concat(const Dfa& a, const Dfa& b);
Dfa dfa_star(const Dfa& a);
Dfa dfa_plus(const Dfa& a);

enum class DfaOp { Intersect, Union, Complement, Reverse };
Dfa dfa_algebra(DfaOp op, const std::vector<Dfa>& args);

bool dfa_is_empty(const Dfa& a);
bool dfa_equal(const Dfa& a, const Dfa& b);  // exact language equality
// Drops unreachable states and merges language-equivalent ones. Used to keep
// intermediate products small; not part of the artifact's public contract.
Dfa dfa_reduce(const Dfa& a);
// Extends the alphabet; new symbols lead to a rejecting sink.
Dfa dfa_extend_alphabet(const Dfa& a, const std::vector<std::string>& sigma);

Dfa determinize(const Nfa& n);
Nfa dfa_to_nfa(const Dfa& a);

// true iff every accepted word has exactly one accepting path (self-product
// restricted to pairs of distinct runs).
bool nfa_is_unambiguous(const Nfa& n);

// Accepts w iff w has exactly one split w = uv with u ∈ L1, v ∈ L2 (empty
// parts allowed). Split counts tracked in {0,1,≥2}.
Dfa unambiguous_concat_dfa(const Dfa& l1, const Dfa& l2);

// Accepts ε, and nonempty w iff w has exactly one decomposition into
// nonempty pieces each in L.
Dfa unambiguous_star_dfa(const Dfa& l);

// ---- Regexes ----

struct Regex;
using RegexPtr = std::shared_ptr<const Regex>;

struct Regex {
  enum class Kind { Empty, Eps, Sym, Union, Concat, Star };
  Kind kind = Kind::Empty;
  std::string sym;
  RegexPtr a, b;

  static RegexPtr empty();
  static RegexPtr eps();
  static RegexPtr symbol(std::string s);
  static RegexPtr make_union(RegexPtr x, RegexPtr y);
  static RegexPtr make_concat(RegexPtr x, RegexPtr y);
  static RegexPtr make_star(RegexPtr x);
};

std::string regex_to_string(const Regex& r);
bool regex_matches(const Regex& r, const Word& w);
// Number of parse trees of w against r, capped. Star parses use nonempty
// pieces so the count is finite.
long long regex_parse_count(const Regex& r, const Word& w, long long cap = 8);
Dfa regex_to_dfa(const Regex& r, std::vector<std::string> alphabet);
std::vector<std::string> regex_symbols(const Regex& r);

// Classic r^(i) recursion, states eliminated in index order. Result is the
// union over start/accept pairs (plus ε when a start state accepts).
RegexPtr state_elimination(const Nfa& n);
// Per-pair table r^(n)(q,q') over ε-free base cells; used by extraction.
std::vector<std::vector<RegexPtr>> state_elimination_table(const Nfa& n);

// Textual regex literals for the surface syntax: symbols, `|`, juxtaposition,
// `*`, `+`, `?`, parentheses, `()` for ε.
RegexPtr parse_regex(const std::string& text);

std::string dfa_to_dot(const Dfa& a, const std::string& name = "dfa");
std::string nfa_to_dot(const Nfa& n, const std::string& name = "nfa");

}  // namespace rca
