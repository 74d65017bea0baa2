#include "rca/relang.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace rca {

Word word_from_chars(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) w.push_back(std::string(1, c));
  return w;
}

std::string word_to_chars(const Word& w) {
  std::string s;
  for (const auto& sym : w) s += sym;
  return s;
}

std::vector<Word> words_up_to(const std::vector<std::string>& alphabet,
                              int max_len) {
  std::vector<Word> out;
  out.push_back({});
  size_t level_begin = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t level_end = out.size();
    for (size_t i = level_begin; i < level_end; ++i)
      for (const auto& s : alphabet) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    level_begin = level_end;
  }
  return out;
}

// ---- Dfa basics ----

int Dfa::sym_index(const std::string& s) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == s) return static_cast<int>(i);
  return -1;
}

int Dfa::run(const Word& w) const {
  int q = start;
  for (const auto& s : w) {
    int i = sym_index(s);
    if (i < 0) throw std::invalid_argument("Dfa::run: symbol not in alphabet: " + s);
    q = next[q][i];
  }
  return q;
}

bool Dfa::accepts(const Word& w) const { return accepting[run(w)] != 0; }

void Dfa::check() const {
  if (num_states <= 0) throw std::logic_error("Dfa: no states");
  if (start < 0 || start >= num_states) throw std::logic_error("Dfa: bad start");
  if (static_cast<int>(accepting.size()) != num_states ||
      static_cast<int>(next.size()) != num_states)
    throw std::logic_error("Dfa: size mismatch");
  for (const auto& row : next) {
    if (row.size() != alphabet.size()) throw std::logic_error("Dfa: transition not total");
    for (int t : row)
      if (t < 0 || t >= num_states) throw std::logic_error("Dfa: bad target");
  }
}

int Nfa::sym_index(const std::string& s) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == s) return static_cast<int>(i);
  return -1;
}

bool Nfa::accepts(const Word& w) const { return count_paths(w, 1) >= 1; }

long long Nfa::count_paths(const Word& w, long long cap) const {
  std::vector<long long> cnt(num_states, 0);
  for (int s : starts) cnt[s] = std::min(cnt[s] + 1, cap);
  for (const auto& sym : w) {
    int si = sym_index(sym);
    if (si < 0) return 0;
    std::vector<long long> nxt(num_states, 0);
    for (int q = 0; q < num_states; ++q) {
      if (cnt[q] == 0) continue;
      for (const auto& [es, et] : edges[q])
        if (es == si) nxt[et] = std::min(nxt[et] + cnt[q], cap);
    }
    cnt.swap(nxt);
  }
  long long total = 0;
  for (int q = 0; q < num_states; ++q)
    if (accepting[q]) total = std::min(total + cnt[q], cap);
  return total;
}

// ---- constructions ----

static void require_same_alphabet(const Dfa& a, const Dfa& b) {
  if (a.alphabet != b.alphabet)
    throw std::invalid_argument("dfa: alphabet mismatch");
}

Dfa dfa_empty(std::vector<std::string> alphabet) {
  Dfa d;
  d.alphabet = std::move(alphabet);
  d.num_states = 1;
  d.start = 0;
  d.accepting = {0};
  d.next = {std::vector<int>(d.alphabet.size(), 0)};
  return d;
}

Dfa dfa_all(std::vector<std::string> alphabet) {
  Dfa d = dfa_empty(std::move(alphabet));
  d.accepting = {1};
  return d;
}

Dfa dfa_epsilon(std::vector<std::string> alphabet) {
  Dfa d;
  d.alphabet = std::move(alphabet);
  d.num_states = 2;
  d.start = 0;
  d.accepting = {1, 0};
  d.next = {std::vector<int>(d.alphabet.size(), 1),
            std::vector<int>(d.alphabet.size(), 1)};
  return d;
}

Dfa dfa_nonempty(std::vector<std::string> alphabet) {
  Dfa d = dfa_epsilon(std::move(alphabet));
  d.accepting = {0, 1};
  for (size_t i = 0; i < d.alphabet.size(); ++i) d.next[1][i] = 1;
  return d;
}

Dfa dfa_word(std::vector<std::string> alphabet, const Word& w) {
  Dfa d;
  d.alphabet = std::move(alphabet);
  int n = static_cast<int>(w.size());
  d.num_states = n + 2;  // positions 0..n plus dead
  int dead = n + 1;
  d.start = 0;
  d.accepting.assign(d.num_states, 0);
  d.accepting[n] = 1;
  d.next.assign(d.num_states, std::vector<int>(d.alphabet.size(), dead));
  for (int i = 0; i < n; ++i) {
    int si = -1;
    for (size_t k = 0; k < d.alphabet.size(); ++k)
      if (d.alphabet[k] == w[i]) si = static_cast<int>(k);
    if (si < 0) throw std::invalid_argument("dfa_word: symbol outside alphabet");
    d.next[i][si] = i + 1;
  }
  return d;
}

static Dfa product(const Dfa& a, const Dfa& b, bool acc_and, bool acc_or) {
  require_same_alphabet(a, b);
  Dfa d;
  d.alphabet = a.alphabet;
  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> stack;
  auto get = [&](int x, int y) {
    auto it = id.find({x, y});
    if (it != id.end()) return it->second;
    int k = static_cast<int>(id.size());
    id[{x, y}] = k;
    stack.push_back({x, y});
    return k;
  };
  d.start = get(a.start, b.start);
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [x, y] = stack[qi];
    bool ok = acc_and ? (a.accepting[x] && b.accepting[y])
                      : acc_or ? (a.accepting[x] || b.accepting[y])
                               : (a.accepting[x] && !b.accepting[y]);
    acc.push_back(ok ? 1 : 0);
    std::vector<int> row(d.alphabet.size());
    for (size_t s = 0; s < d.alphabet.size(); ++s)
      row[s] = get(a.next[x][s], b.next[y][s]);
    rows.push_back(std::move(row));
  }
  d.num_states = static_cast<int>(rows.size());
  d.accepting = std::move(acc);
  d.next = std::move(rows);
  return d;
}

Dfa dfa_intersect(const Dfa& a, const Dfa& b) { return product(a, b, true, false); }
Dfa dfa_union(const Dfa& a, const Dfa& b) { return product(a, b, false, true); }
Dfa dfa_difference(const Dfa& a, const Dfa& b) { return product(a, b, false, false); }

Dfa dfa_complement(const Dfa& a) {
  Dfa d = a;
  for (auto& f : d.accepting) f = f ? 0 : 1;
  return d;
}

Nfa dfa_to_nfa(const Dfa& a) {
  Nfa n;
  n.alphabet = a.alphabet;
  n.num_states = a.num_states;
  n.starts = {a.start};
  n.accepting = a.accepting;
  n.edges.assign(a.num_states, {});
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      n.edges[q].push_back({static_cast<int>(s), a.next[q][s]});
  return n;
}

Dfa determinize(const Nfa& n) {
  Dfa d;
  d.alphabet = n.alphabet;
  std::map<std::set<int>, int> id;
  std::vector<std::set<int>> stack;
  auto get = [&](const std::set<int>& s) {
    auto it = id.find(s);
    if (it != id.end()) return it->second;
    int k = static_cast<int>(id.size());
    id[s] = k;
    stack.push_back(s);
    return k;
  };
  d.start = get(std::set<int>(n.starts.begin(), n.starts.end()));
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    std::set<int> cur = stack[qi];
    bool ok = false;
    for (int q : cur)
      if (n.accepting[q]) ok = true;
    acc.push_back(ok ? 1 : 0);
    std::vector<int> row(d.alphabet.size());
    for (size_t s = 0; s < d.alphabet.size(); ++s) {
      std::set<int> nxt;
      for (int q : cur)
        for (const auto& [es, et] : n.edges[q])
          if (es == static_cast<int>(s)) nxt.insert(et);
      row[s] = get(nxt);
    }
    rows.push_back(std::move(row));
  }
  d.num_states = static_cast<int>(rows.size());
  d.accepting = std::move(acc);
  d.next = std::move(rows);
  return d;
}

Dfa dfa_reverse(const Dfa& a) {
  Nfa n;
  n.alphabet = a.alphabet;
  n.num_states = a.num_states;
  n.accepting.assign(a.num_states, 0);
  n.accepting[a.start] = 1;
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) n.starts.push_back(q);
  n.edges.assign(a.num_states, {});
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      n.edges[a.next[q][s]].push_back({static_cast<int>(s), q});
  return determinize(n);
}

Dfa dfa_concat(const Dfa& a, const Dfa& b) {
  require_same_alphabet(a, b);
  Nfa n;
  n.alphabet = a.alphabet;
  n.num_states = a.num_states + b.num_states;
  auto bq = [&](int q) { return a.num_states + q; };
  n.starts = {a.start};
  if (a.accepting[a.start]) n.starts.push_back(bq(b.start));
  n.accepting.assign(n.num_states, 0);
  for (int q = 0; q < b.num_states; ++q) n.accepting[bq(q)] = b.accepting[q];
  n.edges.assign(n.num_states, {});
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < a.alphabet.size(); ++s) {
      int t = a.next[q][s];
      n.edges[q].push_back({static_cast<int>(s), t});
      if (a.accepting[t]) n.edges[q].push_back({static_cast<int>(s), bq(b.start)});
    }
  for (int q = 0; q < b.num_states; ++q)
    for (size_t s = 0; s < b.alphabet.size(); ++s)
      n.edges[bq(q)].push_back({static_cast<int>(s), bq(b.next[q][s])});
  return dfa_reduce(determinize(n));
}

Dfa dfa_star(const Dfa& a) {
  // piece-free star: fresh accepting start, restart edges from accepting
  Nfa n;
  n.alphabet = a.alphabet;
  n.num_states = a.num_states + 1;
  int fresh = a.num_states;
  n.starts = {fresh};
  n.accepting.assign(n.num_states, 0);
  n.accepting[fresh] = 1;
  for (int q = 0; q < a.num_states; ++q) n.accepting[q] = a.accepting[q];
  n.edges.assign(n.num_states, {});
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      n.edges[q].push_back({static_cast<int>(s), a.next[q][s]});
  auto add_restarts = [&](int from) {
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      n.edges[from].push_back({static_cast<int>(s), a.next[a.start][s]});
  };
  add_restarts(fresh);
  for (int q = 0; q < a.num_states; ++q)
    if (a.accepting[q]) add_restarts(q);
  return dfa_reduce(determinize(n));
}

Dfa dfa_plus(const Dfa& a) { return dfa_reduce(dfa_concat(a, dfa_star(a))); }

Dfa dfa_algebra(DfaOp op, const std::vector<Dfa>& args) {
  switch (op) {
    case DfaOp::Intersect:
      if (args.size() != 2) throw std::invalid_argument("intersect: need 2 args");
      return dfa_intersect(args[0], args[1]);
    case DfaOp::Union:
      if (args.size() != 2) throw std::invalid_argument("union: need 2 args");
      return dfa_union(args[0], args[1]);
    case DfaOp::Complement:
      if (args.size() != 1) throw std::invalid_argument("complement: need 1 arg");
      return dfa_complement(args[0]);
    case DfaOp::Reverse:
      if (args.size() != 1) throw std::invalid_argument("reverse: need 1 arg");
      return dfa_reverse(args[0]);
  }
  throw std::invalid_argument("dfa_algebra: bad op");
}

bool dfa_is_empty(const Dfa& a) {
  std::vector<char> seen(a.num_states, 0);
  std::queue<int> bfs;
  bfs.push(a.start);
  seen[a.start] = 1;
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    if (a.accepting[q]) return false;
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      if (!seen[a.next[q][s]]) {
        seen[a.next[q][s]] = 1;
        bfs.push(a.next[q][s]);
      }
  }
  return true;
}

bool dfa_equal(const Dfa& a, const Dfa& b) {
  return dfa_is_empty(dfa_difference(a, b)) && dfa_is_empty(dfa_difference(b, a));
}

Dfa dfa_reduce(const Dfa& a) {
  // reachable restriction
  std::vector<int> reach;
  std::vector<int> idx(a.num_states, -1);
  std::queue<int> bfs;
  bfs.push(a.start);
  idx[a.start] = 0;
  reach.push_back(a.start);
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (size_t s = 0; s < a.alphabet.size(); ++s) {
      int t = a.next[q][s];
      if (idx[t] < 0) {
        idx[t] = static_cast<int>(reach.size());
        reach.push_back(t);
        bfs.push(t);
      }
    }
  }
  int n = static_cast<int>(reach.size());
  // Moore refinement over the reachable part
  std::vector<int> cls(n);
  for (int i = 0; i < n; ++i) cls[i] = a.accepting[reach[i]] ? 1 : 0;
  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::vector<int>, int> sig;
    std::vector<int> ncls(n);
    for (int i = 0; i < n; ++i) {
      std::vector<int> key;
      key.push_back(cls[i]);
      for (size_t s = 0; s < a.alphabet.size(); ++s)
        key.push_back(cls[idx[a.next[reach[i]][s]]]);
      auto it = sig.find(key);
      if (it == sig.end()) {
        int k = static_cast<int>(sig.size());
        sig[key] = k;
        ncls[i] = k;
      } else {
        ncls[i] = it->second;
      }
    }
    int old_count = *std::max_element(cls.begin(), cls.end()) + 1;
    int new_count = static_cast<int>(sig.size());
    if (new_count != old_count) changed = true;
    cls = std::move(ncls);
  }
  int m = *std::max_element(cls.begin(), cls.end()) + 1;
  Dfa d;
  d.alphabet = a.alphabet;
  d.num_states = m;
  d.start = cls[0];
  d.accepting.assign(m, 0);
  d.next.assign(m, std::vector<int>(a.alphabet.size(), 0));
  for (int i = 0; i < n; ++i) {
    d.accepting[cls[i]] = a.accepting[reach[i]];
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      d.next[cls[i]][s] = cls[idx[a.next[reach[i]][s]]];
  }
  return d;
}

Dfa dfa_extend_alphabet(const Dfa& a, const std::vector<std::string>& sigma) {
  for (const auto& s : a.alphabet)
    if (std::find(sigma.begin(), sigma.end(), s) == sigma.end())
      throw std::invalid_argument("dfa_extend_alphabet: not a superset");
  Dfa d;
  d.alphabet = sigma;
  d.num_states = a.num_states + 1;
  int dead = a.num_states;
  d.start = a.start;
  d.accepting = a.accepting;
  d.accepting.push_back(0);
  d.next.assign(d.num_states, std::vector<int>(sigma.size(), dead));
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < sigma.size(); ++s) {
      int old = a.sym_index(sigma[s]);
      if (old >= 0) d.next[q][s] = a.next[q][old];
    }
  return d;
}

bool nfa_is_unambiguous(const Nfa& n) {
  // pairs (p,q,diverged); ambiguous iff some reachable diverged pair is
  // doubly accepting
  std::map<std::tuple<int, int, bool>, int> id;
  std::vector<std::tuple<int, int, bool>> stack;
  auto get = [&](int p, int q, bool d) {
    if (p > q) std::swap(p, q);
    auto key = std::make_tuple(p, q, d);
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int k = static_cast<int>(id.size());
    id[key] = k;
    stack.push_back(key);
    return k;
  };
  for (int p : n.starts)
    for (int q : n.starts) get(p, q, p != q);
  for (size_t i = 0; i < stack.size(); ++i) {
    auto [p, q, d] = stack[i];
    if (d && n.accepting[p] && n.accepting[q]) return false;
    for (const auto& [s1, t1] : n.edges[p])
      for (const auto& [s2, t2] : n.edges[q])
        if (s1 == s2) get(t1, t2, d || t1 != t2);
  }
  return true;
}

Dfa unambiguous_concat_dfa(const Dfa& l1, const Dfa& l2) {
  require_same_alphabet(l1, l2);
  // state: l1 state plus capped split counts per l2 state
  using Key = std::pair<int, std::vector<int>>;
  std::map<Key, int> id;
  std::vector<Key> stack;
  auto get = [&](const Key& k) {
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[k] = v;
    stack.push_back(k);
    return v;
  };
  std::vector<int> c0(l2.num_states, 0);
  if (l1.accepting[l1.start]) c0[l2.start] = 1;
  Dfa d;
  d.alphabet = l1.alphabet;
  d.start = get({l1.start, c0});
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [q1, counts] = stack[qi];
    int live = 0;
    for (int q = 0; q < l2.num_states; ++q)
      if (l2.accepting[q]) live = std::min(live + counts[q], 2);
    acc.push_back(live == 1 ? 1 : 0);
    std::vector<int> row(d.alphabet.size());
    for (size_t s = 0; s < d.alphabet.size(); ++s) {
      std::vector<int> nc(l2.num_states, 0);
      for (int q = 0; q < l2.num_states; ++q)
        if (counts[q]) {
          int t = l2.next[q][s];
          nc[t] = std::min(nc[t] + counts[q], 2);
        }
      int q1n = l1.next[q1][s];
      if (l1.accepting[q1n]) nc[l2.start] = std::min(nc[l2.start] + 1, 2);
      row[s] = get({q1n, nc});
    }
    rows.push_back(std::move(row));
  }
  d.num_states = static_cast<int>(rows.size());
  d.accepting = std::move(acc);
  d.next = std::move(rows);
  return dfa_reduce(d);
}

Dfa unambiguous_star_dfa(const Dfa& l) {
  // m = capped count of complete decompositions of the prefix,
  // n[q] = capped count of decompositions with a nonempty partial piece at q
  using Key = std::pair<int, std::vector<int>>;
  std::map<Key, int> id;
  std::vector<Key> stack;
  auto get = [&](const Key& k) {
    auto it = id.find(k);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[k] = v;
    stack.push_back(k);
    return v;
  };
  Dfa d;
  d.alphabet = l.alphabet;
  d.start = get({1, std::vector<int>(l.num_states, 0)});
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [m, partial] = stack[qi];
    acc.push_back(m == 1 ? 1 : 0);
    std::vector<int> row(d.alphabet.size());
    for (size_t s = 0; s < d.alphabet.size(); ++s) {
      std::vector<int> np(l.num_states, 0);
      for (int q = 0; q < l.num_states; ++q)
        if (partial[q]) {
          int t = l.next[q][s];
          np[t] = std::min(np[t] + partial[q], 2);
        }
      if (m) {
        int t = l.next[l.start][s];
        np[t] = std::min(np[t] + m, 2);
      }
      int nm = 0;
      for (int q = 0; q < l.num_states; ++q)
        if (l.accepting[q]) nm = std::min(nm + np[q], 2);
      row[s] = get({nm, np});
    }
    rows.push_back(std::move(row));
  }
  d.num_states = static_cast<int>(rows.size());
  d.accepting = std::move(acc);
  d.next = std::move(rows);
  return dfa_reduce(d);
}

// ---- regexes ----

RegexPtr Regex::empty() {
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Empty;
  return r;
}
RegexPtr Regex::eps() {
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Eps;
  return r;
}
RegexPtr Regex::symbol(std::string s) {
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Sym;
  r->sym = std::move(s);
  return r;
}
RegexPtr Regex::make_union(RegexPtr x, RegexPtr y) {
  if (x->kind == Kind::Empty) return y;
  if (y->kind == Kind::Empty) return x;
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Union;
  r->a = std::move(x);
  r->b = std::move(y);
  return r;
}
RegexPtr Regex::make_concat(RegexPtr x, RegexPtr y) {
  if (x->kind == Kind::Empty || y->kind == Kind::Empty) return empty();
  if (x->kind == Kind::Eps) return y;
  if (y->kind == Kind::Eps) return x;
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Concat;
  r->a = std::move(x);
  r->b = std::move(y);
  return r;
}
RegexPtr Regex::make_star(RegexPtr x) {
  if (x->kind == Kind::Empty || x->kind == Kind::Eps) return eps();
  auto r = std::make_shared<Regex>();
  r->kind = Kind::Star;
  r->a = std::move(x);
  return r;
}

std::string regex_to_string(const Regex& r) {
  switch (r.kind) {
    case Regex::Kind::Empty: return "{}";
    case Regex::Kind::Eps: return "()";
    case Regex::Kind::Sym: return r.sym;
    case Regex::Kind::Union:
      return "(" + regex_to_string(*r.a) + "|" + regex_to_string(*r.b) + ")";
    case Regex::Kind::Concat:
      return "(" + regex_to_string(*r.a) + regex_to_string(*r.b) + ")";
    case Regex::Kind::Star: return "(" + regex_to_string(*r.a) + ")*";
  }
  return "{}";
}

// parse counting over spans; memoized per call
namespace {
struct ParseCounter {
  const Word& w;
  long long cap;
  std::map<std::pair<const Regex*, std::pair<int, int>>, long long> memo;

  long long count(const Regex* r, int i, int j) {
    auto key = std::make_pair(r, std::make_pair(i, j));
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    long long res = 0;
    switch (r->kind) {
      case Regex::Kind::Empty: res = 0; break;
      case Regex::Kind::Eps: res = (i == j) ? 1 : 0; break;
      case Regex::Kind::Sym: res = (j == i + 1 && w[i] == r->sym) ? 1 : 0; break;
      case Regex::Kind::Union:
        res = std::min(count(r->a.get(), i, j) + count(r->b.get(), i, j), cap);
        break;
      case Regex::Kind::Concat:
        for (int k = i; k <= j && res < cap; ++k)
          res = std::min(res + count(r->a.get(), i, k) * count(r->b.get(), k, j), cap);
        break;
      case Regex::Kind::Star:
        if (i == j) {
          res = 1;
        } else {
          // first nonempty piece, remainder re-starred
          for (int k = i + 1; k <= j && res < cap; ++k)
            res = std::min(res + count(r->a.get(), i, k) * count(r, k, j), cap);
        }
        break;
    }
    memo[key] = res;
    return res;
  }
};
}  // namespace

long long regex_parse_count(const Regex& r, const Word& w, long long cap) {
  ParseCounter pc{w, cap, {}};
  return pc.count(&r, 0, static_cast<int>(w.size()));
}

bool regex_matches(const Regex& r, const Word& w) {
  return regex_parse_count(r, w, 1) >= 1;
}

std::vector<std::string> regex_symbols(const Regex& r) {
  std::set<std::string> syms;
  std::function<void(const Regex&)> walk = [&](const Regex& x) {
    if (x.kind == Regex::Kind::Sym) syms.insert(x.sym);
    if (x.a) walk(*x.a);
    if (x.b) walk(*x.b);
  };
  walk(r);
  return std::vector<std::string>(syms.begin(), syms.end());
}

Dfa regex_to_dfa(const Regex& r, std::vector<std::string> alphabet) {
  // Glushkov construction: one state per symbol occurrence, then determinize.
  std::vector<std::string> state_sym;
  std::vector<std::pair<int, int>> follow_pairs;
  struct G {
    std::vector<int> first, last;
    bool null;
  };
  std::function<G(const Regex&)> glush = [&](const Regex& x) -> G {
    switch (x.kind) {
      case Regex::Kind::Empty: return {{}, {}, false};
      case Regex::Kind::Eps: return {{}, {}, true};
      case Regex::Kind::Sym: {
        int q = static_cast<int>(state_sym.size());
        state_sym.push_back(x.sym);
        return {{q}, {q}, false};
      }
      case Regex::Kind::Union: {
        G a = glush(*x.a), b = glush(*x.b);
        G g;
        g.first = a.first;
        g.first.insert(g.first.end(), b.first.begin(), b.first.end());
        g.last = a.last;
        g.last.insert(g.last.end(), b.last.begin(), b.last.end());
        g.null = a.null || b.null;
        return g;
      }
      case Regex::Kind::Concat: {
        G a = glush(*x.a), b = glush(*x.b);
        for (int l : a.last)
          for (int f : b.first) follow_pairs.push_back({l, f});
        G g;
        g.first = a.first;
        if (a.null) g.first.insert(g.first.end(), b.first.begin(), b.first.end());
        g.last = b.last;
        if (b.null) g.last.insert(g.last.end(), a.last.begin(), a.last.end());
        g.null = a.null && b.null;
        return g;
      }
      case Regex::Kind::Star: {
        G a = glush(*x.a);
        for (int l : a.last)
          for (int f : a.first) follow_pairs.push_back({l, f});
        return {a.first, a.last, true};
      }
    }
    return {{}, {}, false};
  };
  G top = glush(r);
  Nfa n;
  n.alphabet = std::move(alphabet);
  int start = static_cast<int>(state_sym.size());
  n.num_states = start + 1;
  n.edges.assign(n.num_states, {});
  n.accepting.assign(n.num_states, 0);
  auto sym_idx = [&](const std::string& s) {
    int i = n.sym_index(s);
    if (i < 0) throw std::invalid_argument("regex symbol outside alphabet: " + s);
    return i;
  };
  for (int f : top.first) n.edges[start].push_back({sym_idx(state_sym[f]), f});
  for (auto& [l, f] : follow_pairs)
    n.edges[l].push_back({sym_idx(state_sym[f]), f});
  for (int l : top.last) n.accepting[l] = 1;
  if (top.null) n.accepting[start] = 1;
  n.starts = {start};
  return dfa_reduce(determinize(n));
}

// ---- state elimination ----

std::vector<std::vector<RegexPtr>> state_elimination_table(const Nfa& n) {
  int k = n.num_states;
  // r^(0)(q,q'): union of letters only (no ε term); ε handled by callers.
  std::vector<std::vector<RegexPtr>> r(k, std::vector<RegexPtr>(k, Regex::empty()));
  for (int q = 0; q < k; ++q)
    for (const auto& [s, t] : n.edges[q])
      r[q][t] = Regex::make_union(r[q][t], Regex::symbol(n.alphabet[s]));
  for (int mid = 0; mid < k; ++mid) {
    std::vector<std::vector<RegexPtr>> nr(k, std::vector<RegexPtr>(k));
    RegexPtr loop = Regex::make_star(r[mid][mid]);
    for (int q = 0; q < k; ++q)
      for (int q2 = 0; q2 < k; ++q2)
        nr[q][q2] = Regex::make_union(
            r[q][q2],
            Regex::make_concat(r[q][mid],
                               Regex::make_concat(loop, r[mid][q2])));
    r = std::move(nr);
  }
  return r;
}

RegexPtr state_elimination(const Nfa& n) {
  auto r = state_elimination_table(n);
  RegexPtr out = Regex::empty();
  bool eps_in = false;
  for (int s : n.starts) {
    if (n.accepting[s]) eps_in = true;
    for (int q = 0; q < n.num_states; ++q)
      if (n.accepting[q]) out = Regex::make_union(out, r[s][q]);
  }
  if (eps_in) out = Regex::make_union(Regex::eps(), out);
  return out;
}

// ---- textual regex literals ----

namespace {
struct RegexParser {
  const std::string& text;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    throw std::invalid_argument("regex literal: " + msg + " at offset " +
                                std::to_string(pos) + " in '" + text + "'");
  }
  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  static bool is_sym_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '#' || c == '@' ||
           c == '_' || c == '$' || c == '.';
  }

  RegexPtr parse_union() {
    RegexPtr r = parse_concat();
    while (!eof() && peek() == '|') {
      ++pos;
      r = Regex::make_union(r, parse_concat());
    }
    return r;
  }
  RegexPtr parse_concat() {
    RegexPtr r = Regex::eps();
    while (!eof() && peek() != '|' && peek() != ')')
      r = Regex::make_concat(r, parse_postfix());
    return r;
  }
  RegexPtr parse_postfix() {
    RegexPtr r = parse_atom();
    while (!eof()) {
      if (peek() == '*') {
        ++pos;
        r = Regex::make_star(r);
      } else if (peek() == '+') {
        ++pos;
        r = Regex::make_concat(r, Regex::make_star(r));
      } else if (peek() == '?') {
        ++pos;
        r = Regex::make_union(r, Regex::eps());
      } else {
        break;
      }
    }
    return r;
  }
  RegexPtr parse_atom() {
    if (eof()) fail("unexpected end");
    char c = peek();
    if (c == '{') {  // `{}` is the empty language
      ++pos;
      if (eof() || peek() != '}') fail("expected '}'");
      ++pos;
      return Regex::empty();
    }
    if (c == '(') {
      ++pos;
      if (!eof() && peek() == ')') {  // `()` is ε
        ++pos;
        return Regex::eps();
      }
      RegexPtr r = parse_union();
      if (eof() || peek() != ')') fail("expected ')'");
      ++pos;
      return r;
    }
    if (is_sym_char(c)) {
      ++pos;
      return Regex::symbol(std::string(1, c));
    }
    fail("unexpected character");
  }
};
}  // namespace

RegexPtr parse_regex(const std::string& text) {
  RegexParser p{text};
  RegexPtr r = p.parse_union();
  if (!p.eof()) p.fail("trailing input");
  return r;
}

// ---- DOT export ----

std::string dfa_to_dot(const Dfa& a, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  hidden [shape=point];\n";
  for (int q = 0; q < a.num_states; ++q)
    os << "  q" << q << " [shape=" << (a.accepting[q] ? "doublecircle" : "circle")
       << "];\n";
  os << "  hidden -> q" << a.start << ";\n";
  for (int q = 0; q < a.num_states; ++q)
    for (size_t s = 0; s < a.alphabet.size(); ++s)
      os << "  q" << q << " -> q" << a.next[q][s] << " [label=\"" << a.alphabet[s]
         << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string nfa_to_dot(const Nfa& n, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  hidden [shape=point];\n";
  for (int q = 0; q < n.num_states; ++q)
    os << "  q" << q << " [shape=" << (n.accepting[q] ? "doublecircle" : "circle")
       << "];\n";
  for (int s : n.starts) os << "  hidden -> q" << s << ";\n";
  for (int q = 0; q < n.num_states; ++q)
    for (const auto& [s, t] : n.edges[q])
      os << "  q" << q << " -> q" << t << " [label=\"" << n.alphabet[s] << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace rca
