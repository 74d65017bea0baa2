#include "rca/expr.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <set>
#include <stdexcept>
#include <tuple>

namespace rca {

namespace {
std::atomic<size_t> next_id{1};

ExprPtr finish(std::shared_ptr<FuncExpr> e) {
  e->id = next_id.fetch_add(1);
  return e;
}
}  // namespace

ExprPtr make_const(std::vector<std::string> alphabet, MonoidSpec m, DfaPtr lang,
                   MonoidValue d, std::string lang_text) {
  if (d.is_bottom()) throw std::invalid_argument("const: value may not be bot");
  if (lang->alphabet != alphabet)
    throw std::invalid_argument("const: language alphabet mismatch");
  auto e = std::make_shared<FuncExpr>();
  e->kind = FuncExpr::Kind::Const;
  e->alphabet = std::move(alphabet);
  e->monoid = std::move(m);
  e->lang = std::move(lang);
  e->value = std::move(d);
  e->lang_text = std::move(lang_text);
  return finish(e);
}

ExprPtr make_binary(FuncExpr::Kind k, ExprPtr f, ExprPtr g) {
  if (f->alphabet != g->alphabet)
    throw std::invalid_argument("combinator: input alphabet mismatch");
  if (!(f->monoid == g->monoid))
    throw std::invalid_argument("combinator: value monoid mismatch");
  auto e = std::make_shared<FuncExpr>();
  e->kind = k;
  e->alphabet = f->alphabet;
  e->monoid = f->monoid;
  e->f = std::move(f);
  e->g = std::move(g);
  return finish(e);
}

ExprPtr make_unary(FuncExpr::Kind k, ExprPtr f) {
  auto e = std::make_shared<FuncExpr>();
  e->kind = k;
  e->alphabet = f->alphabet;
  e->monoid = f->monoid;
  e->f = std::move(f);
  return finish(e);
}

ExprPtr make_chained(FuncExpr::Kind k, ExprPtr f, DfaPtr lang,
                     std::string lang_text) {
  if (lang->alphabet != f->alphabet)
    throw std::invalid_argument("chained sum: language alphabet mismatch");
  auto e = std::make_shared<FuncExpr>();
  e->kind = k;
  e->alphabet = f->alphabet;
  e->monoid = f->monoid;
  e->f = std::move(f);
  e->chain_lang = std::move(lang);
  e->chain_lang_text = std::move(lang_text);
  return finish(e);
}

ExprPtr make_compose(ExprPtr outer, ExprPtr inner) {
  if (inner->monoid.kind != MonoidKind::Str)
    throw std::invalid_argument("compose: inner function must produce strings");
  auto e = std::make_shared<FuncExpr>();
  e->kind = FuncExpr::Kind::Compose;
  e->alphabet = inner->alphabet;
  e->monoid = outer->monoid;
  e->f = std::move(outer);
  e->g = std::move(inner);
  return finish(e);
}

ExprPtr make_bottom(std::vector<std::string> alphabet, MonoidSpec m) {
  auto empty = std::make_shared<Dfa>(dfa_empty(alphabet));
  return make_const(alphabet, std::move(m), empty, m.identity(), "{}");
}

ExprPtr restrict_to(ExprPtr f, DfaPtr lang) {
  auto c = make_const(f->alphabet, f->monoid, std::move(lang),
                      f->monoid.identity());
  return make_binary(FuncExpr::Kind::Sum, std::move(f), std::move(c));
}

ExprPtr left_shift(ExprPtr f, DfaPtr lang) {
  auto c = make_const(f->alphabet, f->monoid, std::move(lang),
                      f->monoid.identity());
  return make_binary(FuncExpr::Kind::SplitSum, std::move(f), std::move(c));
}

ExprPtr right_shift(DfaPtr lang, ExprPtr f) {
  auto c = make_const(f->alphabet, f->monoid, std::move(lang),
                      f->monoid.identity());
  return make_binary(FuncExpr::Kind::SplitSum, std::move(c), std::move(f));
}

// ---- evaluation ----

namespace {

class Evaluator {
 public:
  explicit Evaluator(const Word& w) : w_(w) {}

  MonoidValue eval(const FuncExpr* e, int i, int j) {
    auto key = std::make_tuple(e->id, i, j);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    MonoidValue v = compute(e, i, j);
    memo_.emplace(key, v);
    return v;
  }

 private:
  const Word& w_;
  std::map<std::tuple<size_t, int, int>, MonoidValue> memo_;

  Word slice(int i, int j) const {
    return Word(w_.begin() + i, w_.begin() + j);
  }

  bool defined(const FuncExpr* e, int i, int j) {
    return !eval(e, i, j).is_bottom();
  }

  MonoidValue compute(const FuncExpr* e, int i, int j) {
    using K = FuncExpr::Kind;
    switch (e->kind) {
      case K::Const:
        return e->lang->accepts(slice(i, j)) ? e->value : MonoidValue::bottom();
      case K::Choice: {
        MonoidValue a = eval(e->f.get(), i, j);
        return a.is_bottom() ? eval(e->g.get(), i, j) : a;
      }
      case K::Sum:
        return mplus(eval(e->f.get(), i, j), eval(e->g.get(), i, j));
      case K::SplitSum:
      case K::LeftSplitSum: {
        int hits = 0, split = -1;
        for (int k = i; k <= j; ++k)
          if (defined(e->f.get(), i, k) && defined(e->g.get(), k, j)) {
            ++hits;
            split = k;
            if (hits > 1) break;
          }
        if (hits != 1) return MonoidValue::bottom();
        MonoidValue a = eval(e->f.get(), i, split);
        MonoidValue b = eval(e->g.get(), split, j);
        return e->kind == K::SplitSum ? mplus(a, b) : mplus(b, a);
      }
      case K::IterSum:
      case K::LeftIterSum: {
        // decompositions into nonempty pieces with f defined on each
        auto piece_ok = [&](int a, int b) { return defined(e->f.get(), a, b); };
        auto pieces = unique_decomposition(i, j, piece_ok);
        if (pieces.first != 1) return MonoidValue::bottom();
        MonoidValue acc = e->monoid.identity();
        const auto& cuts = pieces.second;
        if (e->kind == K::IterSum) {
          for (size_t p = 0; p + 1 < cuts.size(); ++p)
            acc = mplus(acc, eval(e->f.get(), cuts[p], cuts[p + 1]));
        } else {
          for (size_t p = cuts.size(); p >= 2; --p)
            acc = mplus(acc, eval(e->f.get(), cuts[p - 2], cuts[p - 1]));
        }
        return acc;
      }
      case K::ChainedSum:
      case K::LeftChainedSum: {
        // uniqueness is over all decompositions into nonempty L-pieces;
        // the unique one must additionally have k >= 2 pieces
        auto piece_ok = [&](int a, int b) {
          return e->chain_lang->accepts(slice(a, b));
        };
        auto pieces = unique_decomposition(i, j, piece_ok);
        if (pieces.first != 1) return MonoidValue::bottom();
        const auto& cuts = pieces.second;
        int k = static_cast<int>(cuts.size()) - 1;
        if (k < 2) return MonoidValue::bottom();
        MonoidValue acc = e->monoid.identity();
        if (e->kind == K::ChainedSum) {
          for (int p = 1; p <= k - 1; ++p)
            acc = mplus(acc, eval(e->f.get(), cuts[p - 1], cuts[p + 1]));
        } else {
          for (int p = k - 1; p >= 1; --p)
            acc = mplus(acc, eval(e->f.get(), cuts[p - 1], cuts[p + 1]));
        }
        return acc;
      }
      case K::Reverse: {
        Word rev(w_.begin() + i, w_.begin() + j);
        std::reverse(rev.begin(), rev.end());
        Evaluator sub(rev);
        return sub.eval(e->f.get(), 0, static_cast<int>(rev.size()));
      }
      case K::Compose: {
        MonoidValue inner = eval(e->g.get(), i, j);
        if (inner.is_bottom()) return MonoidValue::bottom();
        Word mid = word_from_chars(inner.str_value());
        for (const auto& s : mid)
          if (std::find(e->f->alphabet.begin(), e->f->alphabet.end(), s) ==
              e->f->alphabet.end())
            return MonoidValue::bottom();
        Evaluator sub(mid);
        return sub.eval(e->f.get(), 0, static_cast<int>(mid.size()));
      }
    }
    return MonoidValue::bottom();
  }

  // Counts decompositions of w[i..j) into nonempty pieces satisfying ok,
  // capped at 2; on a unique decomposition also returns its cut positions
  // (cuts[0]=i, cuts.back()=j). ε has exactly the empty decomposition.
  std::pair<int, std::vector<int>> unique_decomposition(
      int i, int j, const std::function<bool(int, int)>& ok) {
    int n = j - i;
    std::vector<int> cnt(n + 1, 0);
    cnt[0] = 1;
    for (int b = 1; b <= n; ++b)
      for (int a = 0; a < b; ++a)
        if (cnt[a] && ok(i + a, i + b)) cnt[b] = std::min(cnt[b] + cnt[a], 2);
    if (cnt[n] != 1) return {cnt[n], {}};
    std::vector<int> cuts = {j};
    int b = n;
    while (b > 0) {
      for (int a = 0; a < b; ++a)
        if (cnt[a] && ok(i + a, i + b)) {
          cuts.push_back(i + a);
          b = a;
          break;
        }
    }
    std::reverse(cuts.begin(), cuts.end());
    return {1, cuts};
  }
};

}  // namespace

MonoidValue eval_naive(const ExprPtr& e, const Word& sigma) {
  for (const auto& s : sigma)
    if (std::find(e->alphabet.begin(), e->alphabet.end(), s) ==
        e->alphabet.end())
      throw std::invalid_argument("eval_naive: symbol outside alphabet: " + s);
  Evaluator ev(sigma);
  return ev.eval(e.get(), 0, static_cast<int>(sigma.size()));
}

// ---- domains ----

namespace {

// Domain of a chained sum over L with body domain Df: guess piece boundaries
// and track the Dom(f) run over each adjacent pair of pieces. Intersected by
// the caller with the unique-decomposition language, where the guess is
// forced.
Dfa chained_pairs_dfa(const Dfa& l, const Dfa& df) {
  // NFA state: (piece run, pair run A = previous+current, pair run B =
  // current+next, first piece flag). A is df.num_states for "inactive".
  Nfa n;
  n.alphabet = l.alphabet;
  int DF = df.num_states;
  auto enc = [&](int dl, int a, int b, int first) {
    return ((dl * (DF + 1) + a) * DF + b) * 2 + first;
  };
  n.num_states = l.num_states * (DF + 1) * DF * 2;
  n.accepting.assign(n.num_states, 0);
  n.edges.assign(n.num_states, {});
  for (int dl = 0; dl < l.num_states; ++dl)
    for (int a = 0; a <= DF; ++a)
      for (int b = 0; b < DF; ++b)
        for (int first = 0; first < 2; ++first) {
          int from = enc(dl, a, b, first);
          if (!first && a < DF && l.accepting[dl] && df.accepting[a])
            n.accepting[from] = 1;
          for (size_t s = 0; s < n.alphabet.size(); ++s) {
            // continue current piece
            int a2 = (a == DF) ? DF : df.next[a][s];
            n.edges[from].push_back(
                {static_cast<int>(s), enc(l.next[dl][s], a2, df.next[b][s], first)});
            // close the piece here, start a new one with this symbol
            bool closable = l.accepting[dl] && (first || (a < DF && df.accepting[a]));
            if (closable) {
              int na = df.next[b][s];
              int nb = df.next[df.start][s];
              n.edges[from].push_back(
                  {static_cast<int>(s), enc(l.next[l.start][s], na, nb, 0)});
            }
          }
        }
  // initial: first symbol starts piece 1
  // represent by a virtual pre-state: starts = successors of the empty prefix
  // (ε itself is rejected: k >= 2 needs nonempty input anyway)
  Nfa n2 = n;
  n2.num_states = n.num_states + 1;
  int pre = n.num_states;
  n2.edges.push_back({});
  n2.accepting.push_back(0);
  for (size_t s = 0; s < n.alphabet.size(); ++s)
    n2.edges[pre].push_back(
        {static_cast<int>(s),
         enc(l.next[l.start][s], DF, df.next[df.start][s], 1)});
  n2.starts = {pre};
  return dfa_reduce(determinize(n2));
}

}  // namespace

Dfa domain_dfa(const ExprPtr& e) {
  using K = FuncExpr::Kind;
  switch (e->kind) {
    case K::Const: return *e->lang;
    case K::Choice: return dfa_reduce(dfa_union(domain_dfa(e->f), domain_dfa(e->g)));
    case K::Sum:
      return dfa_reduce(dfa_intersect(domain_dfa(e->f), domain_dfa(e->g)));
    case K::SplitSum:
    case K::LeftSplitSum:
      return unambiguous_concat_dfa(domain_dfa(e->f), domain_dfa(e->g));
    case K::IterSum:
    case K::LeftIterSum: return unambiguous_star_dfa(domain_dfa(e->f));
    case K::ChainedSum:
    case K::LeftChainedSum: {
      Dfa uni = unambiguous_star_dfa(*e->chain_lang);
      Dfa multi = dfa_difference(
          dfa_difference(uni, *e->chain_lang), dfa_epsilon(e->alphabet));
      Dfa pairs = chained_pairs_dfa(*e->chain_lang, domain_dfa(e->f));
      return dfa_reduce(dfa_intersect(multi, pairs));
    }
    case K::Reverse: return dfa_reverse(domain_dfa(e->f));
    case K::Compose: {
      // exact preimages are out of scope; report the inner domain minus a
      // bounded set of strings observed to evaluate to ⊥
      Dfa base = domain_dfa(e->g);
      Dfa bad = dfa_empty(e->alphabet);
      for (const auto& w : words_up_to(e->alphabet, 4))
        if (base.accepts(w) && eval_naive(e, w).is_bottom())
          bad = dfa_union(bad, dfa_word(e->alphabet, w));
      return dfa_reduce(dfa_difference(base, bad));
    }
  }
  return dfa_empty(e->alphabet);
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->alphabet != b->alphabet) return false;
  if (!(a->monoid == b->monoid)) return false;
  switch (a->kind) {
    case FuncExpr::Kind::Const:
      return a->value == b->value && dfa_equal(*a->lang, *b->lang);
    case FuncExpr::Kind::ChainedSum:
    case FuncExpr::Kind::LeftChainedSum:
      return dfa_equal(*a->chain_lang, *b->chain_lang) &&
             expr_equal(a->f, b->f);
    case FuncExpr::Kind::Reverse:
    case FuncExpr::Kind::IterSum:
    case FuncExpr::Kind::LeftIterSum: return expr_equal(a->f, b->f);
    default: return expr_equal(a->f, b->f) && expr_equal(a->g, b->g);
  }
}

std::vector<FuncExpr::Kind> expr_operators(const ExprPtr& e) {
  std::set<FuncExpr::Kind> out;
  std::function<void(const ExprPtr&)> walk = [&](const ExprPtr& x) {
    out.insert(x->kind);
    if (x->f) walk(x->f);
    if (x->g) walk(x->g);
  };
  walk(e);
  return std::vector<FuncExpr::Kind>(out.begin(), out.end());
}

std::string kind_name(FuncExpr::Kind k) {
  using K = FuncExpr::Kind;
  switch (k) {
    case K::Const: return "const";
    case K::Choice: return "choice";
    case K::Sum: return "sum";
    case K::SplitSum: return "split-sum";
    case K::LeftSplitSum: return "left-split-sum";
    case K::IterSum: return "iter-sum";
    case K::LeftIterSum: return "left-iter-sum";
    case K::ChainedSum: return "chained-sum";
    case K::LeftChainedSum: return "left-chained-sum";
    case K::Reverse: return "reverse";
    case K::Compose: return "compose";
  }
  return "?";
}

}  // namespace rca
