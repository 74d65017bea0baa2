#include "rca/extract_noncomm.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace rca {

namespace {
using K = FuncExpr::Kind;

ExprPtr shifted(const ExpressionVector& a, int v, int k, EvShift mode,
                const DfaPtr& lang) {
  ExprPtr tight = restrict_to(a.comp[v][k], a.dom);
  if (mode == EvShift::LShift) return left_shift(tight, lang);
  if (mode == EvShift::RShift) return right_shift(lang, tight);
  return restrict_to(tight, lang);
}
}  // namespace

ExpressionVector ev_restrict_shift(const ExpressionVector& v, EvShift mode,
                                   DfaPtr lang) {
  ExpressionVector out;
  out.shape = v.shape;
  out.comp.resize(v.comp.size());
  for (size_t r = 0; r < v.comp.size(); ++r)
    for (size_t k = 0; k < v.comp[r].size(); ++k)
      out.comp[r].push_back(shifted(v, static_cast<int>(r),
                                    static_cast<int>(k), mode, lang));
  switch (mode) {
    case EvShift::Restrict:
      out.dom = std::make_shared<Dfa>(dfa_reduce(dfa_intersect(*v.dom, *lang)));
      break;
    case EvShift::LShift:
      out.dom = std::make_shared<Dfa>(unambiguous_concat_dfa(*v.dom, *lang));
      break;
    case EvShift::RShift:
      out.dom = std::make_shared<Dfa>(unambiguous_concat_dfa(*lang, *v.dom));
      break;
  }
  return out;
}

ExpressionVector ev_concat(const ExpressionVector& a,
                           const ExpressionVector& b) {
  ExpressionVector out;
  out.shape = shape_concat(a.shape, b.shape);
  out.dom = std::make_shared<Dfa>(unambiguous_concat_dfa(*a.dom, *b.dom));
  int R = static_cast<int>(a.shape.size());
  out.comp.resize(R);
  auto aPart = [&](int v, int k) {
    return shifted(a, v, k, EvShift::LShift, b.dom);
  };
  auto bPart = [&](int v, int k) {
    return shifted(b, v, k, EvShift::RShift, a.dom);
  };
  for (int v = 0; v < R; ++v) {
    // substitute a's rows into b's row of v; concatenation becomes +
    ExprPtr pending = bPart(v, 0);
    const auto& row = b.shape[v];
    for (size_t j = 0; j < row.size(); ++j) {
      int u = row[j];
      const auto& urow = a.shape[u];
      if (urow.empty()) {
        pending = make_binary(K::Sum, pending, aPart(u, 0));
      } else {
        out.comp[v].push_back(make_binary(K::Sum, pending, aPart(u, 0)));
        for (size_t t = 1; t < urow.size(); ++t)
          out.comp[v].push_back(aPart(u, static_cast<int>(t)));
        pending = aPart(u, static_cast<int>(urow.size()));
      }
      pending = make_binary(K::Sum, pending, bPart(v, static_cast<int>(j) + 1));
    }
    out.comp[v].push_back(pending);
  }
  return out;
}

ExpressionVector ev_choice(const ExpressionVector& a,
                           const ExpressionVector& b) {
  if (a.shape != b.shape) throw std::invalid_argument("ev_choice: shape mismatch");
  if (!dfa_is_empty(dfa_intersect(*a.dom, *b.dom)))
    throw std::invalid_argument("ev_choice: domains overlap");
  ExpressionVector out;
  out.shape = a.shape;
  out.dom = std::make_shared<Dfa>(dfa_reduce(dfa_union(*a.dom, *b.dom)));
  out.comp.resize(a.comp.size());
  for (size_t v = 0; v < a.comp.size(); ++v)
    for (size_t k = 0; k < a.comp[v].size(); ++k)
      out.comp[v].push_back(make_binary(
          K::Choice, restrict_to(a.comp[v][k], a.dom),
          restrict_to(b.comp[v][k], b.dom)));
  return out;
}

std::map<std::tuple<int, int, Shape>, ExpressionVector> build_r0(const Ccra& m) {
  std::map<std::tuple<int, int, Shape>, ExpressionVector> out;
  int R = static_cast<int>(m.registers.size());
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      Shape sh = shape_of_transition(m, static_cast<int>(q), static_cast<int>(s));
      int q2 = m.delta[q][s];
      ExpressionVector ev;
      ev.shape = sh;
      ev.dom = std::make_shared<Dfa>(dfa_word(m.alphabet, {m.alphabet[s]}));
      ev.comp.resize(R);
      for (int v = 0; v < R; ++v)
        for (const auto& c : m.mu[q][s][v].patches(m.monoid))
          ev.comp[v].push_back(make_const(m.alphabet, m.monoid, ev.dom, c,
                                          m.alphabet[s]));
      auto key = std::make_tuple(static_cast<int>(q), q2, sh);
      auto it = out.find(key);
      if (it == out.end())
        out.emplace(key, std::move(ev));
      else
        it->second = ev_choice(it->second, ev);
    }
  return out;
}

namespace {

struct Extractor {
  const Ccra& m;
  std::vector<std::string> sigma;
  MonoidSpec mono;
  int R;
  int n;  // number of states

  std::vector<Shape> shapes;  // realizable closure, identity included
  std::map<Shape, int> shape_id;
  int id_shape = -1;
  std::vector<std::vector<int>> concat_tab;  // shape composition
  std::vector<std::vector<int>> supp_of;

  using Key = std::tuple<int, int, int>;  // (q, q2, shape id)
  std::map<Key, ExpressionVector> r;      // current level

  explicit Extractor(const Ccra& machine)
      : m(machine), sigma(machine.alphabet), mono(machine.monoid),
        R(static_cast<int>(machine.registers.size())),
        n(static_cast<int>(machine.states.size())) {}

  int sid(const Shape& s) {
    auto it = shape_id.find(s);
    return it == shape_id.end() ? -1 : it->second;
  }

  void close_shapes() {
    std::set<Shape> seen;
    std::vector<Shape> work;
    auto add = [&](const Shape& s) {
      if (seen.insert(s).second) work.push_back(s);
    };
    add(shape_identity(R));
    for (size_t q = 0; q < m.states.size(); ++q)
      for (size_t s = 0; s < m.alphabet.size(); ++s)
        add(shape_of_transition(m, static_cast<int>(q), static_cast<int>(s)));
    for (size_t i = 0; i < work.size(); ++i)
      for (size_t j = 0; j < work.size(); ++j) {
        add(shape_concat(work[i], work[j]));
        if (work.size() > 4096)
          throw std::runtime_error("shape closure unexpectedly large");
      }
    shapes.assign(seen.begin(), seen.end());
    for (size_t i = 0; i < shapes.size(); ++i) {
      shape_id[shapes[i]] = static_cast<int>(i);
      supp_of.push_back(shape_support(shapes[i]));
      if (!shape_is_normalized(shapes[i]))
        throw std::runtime_error("non-normalized composite shape");
    }
    id_shape = shape_id.at(shape_identity(R));
    int S = static_cast<int>(shapes.size());
    concat_tab.assign(S, std::vector<int>(S, -1));
    for (int i = 0; i < S; ++i)
      for (int j = 0; j < S; ++j)
        concat_tab[i][j] = shape_id.at(shape_concat(shapes[i], shapes[j]));
  }

  bool strictly_below(int a, int b) const {  // shapes[a] ⊏ shapes[b]
    const auto& sa = supp_of[a];
    const auto& sb = supp_of[b];
    return sa.size() > sb.size() &&
           std::includes(sa.begin(), sa.end(), sb.begin(), sb.end());
  }
  bool support_equal(int a, int b) const { return supp_of[a] == supp_of[b]; }

  std::optional<ExpressionVector> lookup(int q, int q2, int s) const {
    auto it = r.find({q, q2, s});
    if (it == r.end()) return std::nullopt;
    return it->second;
  }

  static std::optional<ExpressionVector> join(
      std::optional<ExpressionVector> acc, const ExpressionVector& next) {
    if (dfa_is_empty(*next.dom)) return acc;
    if (!acc) return next;
    return ev_choice(*acc, next);
  }

  void init_r0() {
    for (auto& [key, ev] : build_r0(m)) {
      auto [q, q2, sh] = key;
      int s = sid(sh);
      r.emplace(Key{q, q2, s}, std::move(ev));
    }
  }

  // one elimination step at pivot state `piv` (tables currently at level piv)
  void step(int piv) {
    int S = static_cast<int>(shapes.size());
    int level = piv + 1;

    // languages at this pivot
    auto lang = [&](const std::function<bool(const Shape&)>& pred,
                    std::optional<std::vector<int>> block = std::nullopt) {
      return shape_language(m, piv, piv, level, pred, block);
    };
    std::vector<DfaPtr> w_dfa(S);
    for (int s = 0; s < S; ++s)
      w_dfa[s] = std::make_shared<Dfa>(
          lang([&](const Shape& t) { return t == shapes[s]; }));

    // group realizable shapes into support classes, largest support first
    std::map<std::vector<int>, std::vector<int>> by_supp;
    for (int s = 0; s < S; ++s) by_supp[supp_of[s]].push_back(s);
    std::vector<std::pair<std::vector<int>, std::vector<int>>> classes(
        by_supp.begin(), by_supp.end());
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) {
                return a.first.size() > b.first.size();
              });

    std::map<int, ExpressionVector> B;  // per shape id
    std::map<int, ExpressionVector> A;  // per shape id (class-scoped, rebuilt)

    for (const auto& [supp, members] : classes) {
      bool full = static_cast<int>(supp.size()) == R;
      // languages for this class
      Dfa lf_dfa = lang([&](const Shape& t) { return shape_support(t) == supp; },
                        supp);
      DfaPtr lf = std::make_shared<Dfa>(lf_dfa);
      DfaPtr lf_plus = std::make_shared<Dfa>(dfa_plus(lf_dfa));
      Dfa under_dfa = full ? dfa_epsilon(sigma)
                           : lang([&](const Shape& t) {
                               auto ts = shape_support(t);
                               return ts.size() > supp.size() &&
                                      std::includes(ts.begin(), ts.end(),
                                                    supp.begin(), supp.end());
                             });
      DfaPtr under = std::make_shared<Dfa>(under_dfa);
      DfaPtr lfplus_under =
          std::make_shared<Dfa>(dfa_reduce(dfa_concat(*lf_plus, under_dfa)));

      // A vectors: first-reach blocks of this class
      A.clear();
      for (int t : members) {
        std::optional<ExpressionVector> acc;
        if (full) {
          if (auto rv = lookup(piv, piv, t)) acc = join(acc, *rv);
        } else {
          for (int pre = 0; pre < S; ++pre) {
            if (!strictly_below(pre, t)) continue;
            auto itb = B.find(pre);
            if (itb == B.end()) continue;
            for (int post = 0; post < S; ++post) {
              if (concat_tab[pre][post] != t) continue;
              auto rv = lookup(piv, piv, post);
              if (!rv) continue;
              acc = join(acc, ev_concat(itb->second, *rv));
            }
          }
        }
        if (acc && !dfa_is_empty(*acc->dom)) A.emplace(t, std::move(*acc));
      }

      // B vectors for every member shape
      for (int sId : members) {
        auto ita = A.find(sId);
        const Shape& sh = shapes[sId];
        if (dfa_is_empty(*w_dfa[sId])) continue;

        // single-block branch: β1 has shape exactly S, the remainder stays
        // strictly below the class
        std::optional<ExpressionVector> v1;
        if (ita != A.end()) {
          if (full) {
            v1 = ita->second;
          } else {
            for (int sf = 0; sf < S; ++sf) {
              if (!strictly_below(sf, sId)) continue;
              auto itb = B.find(sf);
              if (itb == B.end()) continue;
              v1 = join(v1, ev_concat(ita->second, itb->second));
            }
          }
        }

        // multi-block branch, built per component
        std::optional<ExpressionVector> v2;
        if (ita != A.end()) {
          DfaPtr v1dom = v1 ? v1->dom : std::make_shared<Dfa>(dfa_empty(sigma));
          Dfa v2dom_d = dfa_reduce(dfa_difference(
              dfa_difference(*w_dfa[sId], *v1dom), dfa_epsilon(sigma)));
          if (!dfa_is_empty(v2dom_d)) {
            DfaPtr v2dom = std::make_shared<Dfa>(v2dom_d);
            ExpressionVector ev;
            ev.shape = sh;
            ev.dom = v2dom;
            ev.comp.resize(R);
            bool buildable = true;
            for (int v = 0; v < R && buildable; ++v) {
              int t = static_cast<int>(sh[v].size());
              for (int k = 0; k <= t && buildable; ++k) {
                ExprPtr c = multi_component(sId, v, k, A, B, lf, lf_plus,
                                            lfplus_under, under, full,
                                            buildable);
                if (!buildable) break;
                ev.comp[v].push_back(restrict_to(c, v2dom));
              }
            }
            if (buildable) v2 = std::move(ev);
          }
        }

        std::optional<ExpressionVector> b;
        if (sId == id_shape) {
          ExpressionVector eps;
          eps.shape = sh;
          eps.dom = std::make_shared<Dfa>(dfa_epsilon(sigma));
          eps.comp.resize(R);
          for (int v = 0; v < R; ++v)
            for (size_t k = 0; k <= sh[v].size(); ++k)
              eps.comp[v].push_back(make_const(sigma, mono, eps.dom,
                                               mono.identity(), "()"));
          b = eps;
        }
        if (v1) b = join(b, *v1);
        if (v2) b = join(b, *v2);
        if (b) B.emplace(sId, std::move(*b));
      }
    }

    // level step for every state pair
    std::map<Key, ExpressionVector> next = r;
    for (int q = 0; q < n; ++q)
      for (int q2 = 0; q2 < n; ++q2)
        for (int s = 0; s < S; ++s) {
          std::optional<ExpressionVector> acc = lookup(q, q2, s);
          for (int s1 = 0; s1 < S; ++s1) {
            auto r1 = lookup(q, piv, s1);
            if (!r1) continue;
            for (int s2 = 0; s2 < S; ++s2) {
              auto itb = B.find(s2);
              if (itb == B.end()) continue;
              int s12 = concat_tab[s1][s2];
              for (int s3 = 0; s3 < S; ++s3) {
                if (concat_tab[s12][s3] != s) continue;
                auto r3 = lookup(piv, q2, s3);
                if (!r3) continue;
                acc = join(acc,
                           ev_concat(ev_concat(*r1, itb->second), *r3));
              }
            }
          }
          if (acc && !dfa_is_empty(*acc->dom)) {
            next.erase({q, q2, s});
            next.emplace(Key{q, q2, s}, std::move(*acc));
          }
        }
    r = std::move(next);
  }

  // component (v, patch k; 0-based k) of the multi-block branch
  ExprPtr multi_component(int sId, int v, int k,
                          const std::map<int, ExpressionVector>& A,
                          const std::map<int, ExpressionVector>& B,
                          const DfaPtr& lf, const DfaPtr& lf_plus,
                          const DfaPtr& lfplus_under, const DfaPtr& under,
                          bool full, bool& ok) {
    const Shape& sh = shapes[sId];
    const auto& aS = A.at(sId);
    int t = static_cast<int>(sh[v].size());
    int S = static_cast<int>(shapes.size());

    auto bottom = [&] { return make_bottom(sigma, mono); };

    if (t == 0) {
      // reset register: value fixed by the last block and the tail
      std::optional<ExprPtr> f;
      for (int tt = 0; tt < S; ++tt) {
        if (!support_equal(tt, sId)) continue;
        auto ita = A.find(tt);
        if (ita == A.end()) continue;
        for (int sf = 0; sf < S; ++sf) {
          if (!strictly_below(sf, sId)) continue;
          auto itb = B.find(sf);
          if (itb == B.end()) continue;
          ExpressionVector pair = ev_concat(ita->second, itb->second);
          ExprPtr c = pair.comp[v][0];
          f = f ? make_binary(K::Choice, *f, c) : c;
        }
      }
      if (!f) {
        ok = full ? ok : false;  // full-support classes have no reset rows
        return bottom();
      }
      return right_shift(lf_plus, *f);
    }

    int pos = -1;
    for (int i = 0; i < t; ++i)
      if (sh[v][i] == v) pos = i;
    if (pos < 0) throw std::logic_error("support register missing from own row");

    if (k > 0 && k < t) {
      // internal patch: frozen after the first block
      return left_shift(restrict_to(aS.comp[v][k], aS.dom),
                        full ? lf_plus : lfplus_under);
    }

    bool trailing = (k == t);
    // pre: contribution of β1
    ExprPtr pre = left_shift(restrict_to(aS.comp[v][k], aS.dom),
                             full ? lf_plus : lfplus_under);

    // mid: chained sum over adjacent blocks
    std::optional<ExprPtr> g;
    for (int t1 = 0; t1 < S; ++t1) {
      if (!support_equal(t1, sId)) continue;
      auto a1 = A.find(t1);
      if (a1 == A.end()) continue;
      for (int t2 = 0; t2 < S; ++t2) {
        if (!support_equal(t2, sId)) continue;
        auto a2 = A.find(t2);
        if (a2 == A.end()) continue;
        ExprPtr gpair = seam_sum(a1->second, a2->second, v, trailing);
        g = g ? make_binary(K::Choice, *g, gpair) : gpair;
      }
    }
    if (!g) {
      ok = false;
      return bottom();
    }
    ExprPtr mid = make_chained(trailing ? K::ChainedSum : K::LeftChainedSum,
                               *g, lf);
    if (!full) mid = left_shift(mid, under);

    // post: contribution of the tail after the last block
    std::optional<ExprPtr> post;
    if (!full) {
      for (int tt = 0; tt < S; ++tt) {
        if (!support_equal(tt, sId)) continue;
        auto ita = A.find(tt);
        if (ita == A.end()) continue;
        for (int sf = 0; sf < S; ++sf) {
          if (!strictly_below(sf, sId)) continue;
          auto itb = B.find(sf);
          if (itb == B.end()) continue;
          ExprPtr h = tail_seam_sum(ita->second, itb->second, v, trailing);
          post = post ? make_binary(K::Choice, *post, h) : h;
        }
      }
      if (!post) {
        ok = false;
        return bottom();
      }
      post = right_shift(lf_plus, *post);
    }

    if (trailing) {
      ExprPtr out = make_binary(K::Sum, pre, mid);
      if (post) out = make_binary(K::Sum, out, *post);
      return out;
    }
    ExprPtr out = make_binary(K::Sum, mid, pre);
    if (post) out = make_binary(K::Sum, *post, out);
    return out;
  }

  // value appended to v's tail (or front) during the second block of a pair
  // of adjacent same-class blocks: patches of `b2` around v's position plus
  // the reset values accumulated in `b1`
  ExprPtr seam_sum(const ExpressionVector& a1, const ExpressionVector& a2,
                   int v, bool trailing) {
    const Shape& sh2 = a2.shape;
    int t = static_cast<int>(sh2[v].size());
    int pos = -1;
    for (int i = 0; i < t; ++i)
      if (sh2[v][i] == v) pos = i;
    if (pos < 0) throw std::logic_error("seam_sum: v not in own row");
    auto a1p = [&](int u, int k) {
      return shifted(a1, u, k, EvShift::LShift, a2.dom);
    };
    auto a2p = [&](int u, int k) {
      return shifted(a2, u, k, EvShift::RShift, a1.dom);
    };
    ExprPtr acc;
    if (trailing) {
      acc = a2p(v, pos + 1);
      for (int i = pos + 1; i < t; ++i) {
        acc = make_binary(K::Sum, acc, a1p(sh2[v][i], 0));
        acc = make_binary(K::Sum, acc, a2p(v, i + 1));
      }
    } else {
      acc = a2p(v, 0);
      for (int i = 0; i < pos; ++i) {
        acc = make_binary(K::Sum, acc, a1p(sh2[v][i], 0));
        acc = make_binary(K::Sum, acc, a2p(v, i + 1));
      }
    }
    return acc;
  }

  // same, for the tail piece: patches come from the B vector of the tail
  ExprPtr tail_seam_sum(const ExpressionVector& a1, const ExpressionVector& bf,
                        int v, bool trailing) {
    const Shape& shf = bf.shape;
    int t = static_cast<int>(shf[v].size());
    int pos = -1;
    for (int i = 0; i < t; ++i)
      if (shf[v][i] == v) pos = i;
    if (pos < 0) {
      // v not in the tail's row: the tail contributes nothing to v
      // (can happen only for reset rows, handled elsewhere)
      throw std::logic_error("tail_seam_sum: v not in tail row");
    }
    auto a1p = [&](int u, int k) {
      return shifted(a1, u, k, EvShift::LShift, bf.dom);
    };
    auto bfp = [&](int u, int k) {
      return shifted(bf, u, k, EvShift::RShift, a1.dom);
    };
    ExprPtr acc;
    if (trailing) {
      acc = bfp(v, pos + 1);
      for (int i = pos + 1; i < t; ++i) {
        acc = make_binary(K::Sum, acc, a1p(shf[v][i], 0));
        acc = make_binary(K::Sum, acc, bfp(v, i + 1));
      }
    } else {
      acc = bfp(v, 0);
      for (int i = 0; i < pos; ++i) {
        acc = make_binary(K::Sum, acc, a1p(shf[v][i], 0));
        acc = make_binary(K::Sum, acc, bfp(v, i + 1));
      }
    }
    return acc;
  }

  ExprPtr assemble() {
    ExprPtr acc;
    if (m.accepting[m.start]) {
      // ε: registers hold the identity, the output is ν's constant part
      MonoidValue val = mono.identity();
      for (const auto& tok : m.nu[m.start].toks)
        if (!tok.is_reg) val = mplus(val, tok.c);
      auto d = std::make_shared<Dfa>(dfa_epsilon(sigma));
      acc = make_const(sigma, mono, d, val, "()");
    }
    int S = static_cast<int>(shapes.size());
    for (int qf = 0; qf < n; ++qf) {
      if (!m.accepting[qf]) continue;
      for (int s = 0; s < S; ++s) {
        auto rv = lookup(m.start, qf, s);
        if (!rv || dfa_is_empty(*rv->dom)) continue;
        ExprPtr branch;
        for (const auto& tok : m.nu[qf].toks) {
          ExprPtr piece;
          if (tok.is_reg) {
            const auto& comps = rv->comp[tok.reg];
            piece = restrict_to(comps[0], rv->dom);
            for (size_t k = 1; k < comps.size(); ++k)
              piece = make_binary(K::Sum, piece,
                                  restrict_to(comps[k], rv->dom));
          } else {
            piece = make_const(sigma, mono, rv->dom, tok.c);
          }
          branch = branch ? make_binary(K::Sum, branch, piece) : piece;
        }
        if (!branch) branch = make_const(sigma, mono, rv->dom, mono.identity());
        acc = acc ? make_binary(K::Choice, acc, branch) : branch;
      }
    }
    if (!acc) return make_bottom(sigma, mono);
    return acc;
  }
};

}  // namespace

std::map<std::tuple<int, int, Shape>, ExpressionVector> summarize_level(
    const Ccra& m, int level) {
  Extractor ex(m);
  ex.close_shapes();
  ex.init_r0();
  for (int piv = 0; piv < level; ++piv) ex.step(piv);
  std::map<std::tuple<int, int, Shape>, ExpressionVector> out;
  for (const auto& [key, ev] : ex.r) {
    auto [q, q2, s] = key;
    out.emplace(std::make_tuple(q, q2, ex.shapes[s]), ev);
  }
  return out;
}

ExprPtr extract_noncommutative(const Ccra& m0) {
  auto viol = validate_copyless(m0);
  if (!viol.empty())
    throw std::invalid_argument("extract_noncommutative: not copyless: " +
                                viol[0].where);
  Ccra m = m0;
  auto closure_ok = [](const Ccra& mm) {
    if (!is_normalized(mm)) return false;
    std::set<Shape> seen;
    std::vector<Shape> work;
    auto add = [&](const Shape& s) {
      if (seen.insert(s).second) work.push_back(s);
    };
    add(shape_identity(static_cast<int>(mm.registers.size())));
    for (size_t q = 0; q < mm.states.size(); ++q)
      for (size_t s = 0; s < mm.alphabet.size(); ++s)
        add(shape_of_transition(mm, static_cast<int>(q), static_cast<int>(s)));
    for (size_t i = 0; i < work.size(); ++i)
      for (size_t j = 0; j < work.size(); ++j) {
        Shape c = shape_concat(work[i], work[j]);
        if (!shape_is_normalized(c)) return false;
        add(c);
        if (work.size() > 4096) return false;
      }
    return true;
  };
  if (!closure_ok(m)) m = normalize(m);

  Extractor ex(m);
  ex.close_shapes();
  ex.init_r0();
  for (int piv = 0; piv < ex.n; ++piv) ex.step(piv);
  return ex.assemble();
}

}  // namespace rca
