#include "rca/ccra.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rca {

UpdateExpr UpdateExpr::constant(MonoidValue v) {
  UpdateExpr u;
  u.toks.push_back(Tok::constant(std::move(v)));
  return u;
}

void UpdateExpr::append_const(const MonoidValue& v) {
  toks.push_back(Tok::constant(v));
}

void UpdateExpr::append(const UpdateExpr& other) {
  toks.insert(toks.end(), other.toks.begin(), other.toks.end());
}

std::vector<int> UpdateExpr::registers() const {
  std::vector<int> out;
  for (const auto& t : toks)
    if (t.is_reg) out.push_back(t.reg);
  return out;
}

std::vector<MonoidValue> UpdateExpr::patches(const MonoidSpec& m) const {
  std::vector<MonoidValue> out;
  MonoidValue cur = m.identity();
  for (const auto& t : toks) {
    if (t.is_reg) {
      out.push_back(cur);
      cur = m.identity();
    } else {
      cur = mplus(cur, t.c);
    }
  }
  out.push_back(cur);
  return out;
}

UpdateExpr canonicalize(const UpdateExpr& u, const MonoidSpec& m) {
  UpdateExpr out;
  MonoidValue pending = m.identity();
  bool have_pending = false;
  for (const auto& t : u.toks) {
    if (t.is_reg) {
      if (have_pending && !(pending == m.identity()))
        out.toks.push_back(UpdateExpr::Tok::constant(pending));
      pending = m.identity();
      have_pending = false;
      out.toks.push_back(t);
    } else {
      pending = mplus(pending, t.c);
      have_pending = true;
    }
  }
  if (have_pending && !(pending == m.identity()))
    out.toks.push_back(UpdateExpr::Tok::constant(pending));
  return out;
}

UpdateExpr subst_update(const UpdateExpr& u, const std::vector<UpdateExpr>& subst,
                        const MonoidSpec& m) {
  UpdateExpr out;
  for (const auto& t : u.toks) {
    if (t.is_reg)
      out.append(subst[t.reg]);
    else
      out.toks.push_back(t);
  }
  return canonicalize(out, m);
}

std::string update_to_string(const UpdateExpr& u,
                             const std::vector<std::string>& registers) {
  if (u.toks.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < u.toks.size(); ++i) {
    if (i) s += " ";
    const auto& t = u.toks[i];
    s += t.is_reg ? registers[t.reg] : render(t.c);
  }
  return s;
}

// ---- machines ----

int Ccra::sym_index(const std::string& s) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == s) return static_cast<int>(i);
  return -1;
}

int Ccra::state_index(const std::string& s) const {
  for (size_t i = 0; i < states.size(); ++i)
    if (states[i] == s) return static_cast<int>(i);
  return -1;
}

void Ccra::check() const {
  size_t q = states.size(), a = alphabet.size(), r = registers.size();
  if (!q) throw std::logic_error("ccra: no states");
  if (delta.size() != q || mu.size() != q || nu.size() != q ||
      accepting.size() != q)
    throw std::logic_error("ccra: table sizes");
  for (size_t i = 0; i < q; ++i) {
    if (delta[i].size() != a || mu[i].size() != a)
      throw std::logic_error("ccra: transition not total");
    for (size_t s = 0; s < a; ++s) {
      if (delta[i][s] < 0 || delta[i][s] >= static_cast<int>(q))
        throw std::logic_error("ccra: bad target");
      if (mu[i][s].size() != r) throw std::logic_error("ccra: update not total");
    }
  }
}

Dfa Ccra::graph_dfa() const {
  Dfa d;
  d.alphabet = alphabet;
  d.num_states = static_cast<int>(states.size());
  d.start = start;
  d.accepting = accepting;
  d.next = delta;
  return d;
}

int Acra::sym_index(const std::string& s) const {
  for (size_t i = 0; i < alphabet.size(); ++i)
    if (alphabet[i] == s) return static_cast<int>(i);
  return -1;
}

void Acra::check() const {
  size_t q = states.size(), a = alphabet.size(), r = registers.size();
  if (!q) throw std::logic_error("acra: no states");
  if (delta.size() != q || mu.size() != q || accepting.size() != q ||
      nu.size() != q)
    throw std::logic_error("acra: table sizes");
  for (size_t i = 0; i < q; ++i)
    for (size_t s = 0; s < a; ++s)
      if (mu[i][s].size() != r) throw std::logic_error("acra: update not total");
}

std::vector<CopylessViolation> validate_copyless(const Ccra& m) {
  std::vector<CopylessViolation> out;
  for (size_t q = 0; q < m.states.size(); ++q) {
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      std::vector<int> seen(m.registers.size(), -1);
      for (size_t v = 0; v < m.registers.size(); ++v) {
        std::set<int> within;
        for (int r : m.mu[q][s][v].registers()) {
          if (within.count(r)) {
            out.push_back({CopylessViolation::Kind::ReusedWithinUpdate,
                           m.states[q] + "/" + m.alphabet[s] + ": " +
                               m.registers[r] + " twice in " + m.registers[v]});
          }
          within.insert(r);
          if (seen[r] >= 0 && seen[r] != static_cast<int>(v)) {
            out.push_back({CopylessViolation::Kind::ReusedAcrossUpdates,
                           m.states[q] + "/" + m.alphabet[s] + ": " +
                               m.registers[r] + " feeds " +
                               m.registers[seen[r]] + " and " + m.registers[v]});
          }
          if (seen[r] < 0) seen[r] = static_cast<int>(v);
        }
      }
    }
    if (m.accepting[q]) {
      std::set<int> within;
      for (int r : m.nu[q].registers()) {
        if (within.count(r))
          out.push_back({CopylessViolation::Kind::ReusedInOutput,
                         "output at " + m.states[q] + ": " + m.registers[r] +
                             " twice"});
        within.insert(r);
      }
    }
  }
  return out;
}

namespace {
MonoidValue eval_update(const UpdateExpr& u,
                        const std::vector<MonoidValue>& val,
                        const MonoidSpec& m) {
  MonoidValue acc = m.identity();
  for (const auto& t : u.toks)
    acc = mplus(acc, t.is_reg ? val[t.reg] : t.c);
  return acc;
}
}  // namespace

MonoidValue eval_ccra(const Ccra& m, const Word& sigma) {
  int q = m.start;
  std::vector<MonoidValue> val(m.registers.size(), m.monoid.identity());
  for (const auto& sym : sigma) {
    int s = m.sym_index(sym);
    if (s < 0)
      throw std::invalid_argument("eval_ccra: symbol outside alphabet: " + sym);
    std::vector<MonoidValue> nv(val.size());
    for (size_t v = 0; v < val.size(); ++v)
      nv[v] = eval_update(m.mu[q][s][v], val, m.monoid);
    val.swap(nv);
    q = m.delta[q][s];
  }
  if (!m.accepting[q]) return MonoidValue::bottom();
  return eval_update(m.nu[q], val, m.monoid);
}

MonoidValue eval_acra(const Acra& m, const Word& sigma) {
  int q = m.start;
  std::vector<MonoidValue> val(m.registers.size(), m.monoid.identity());
  for (const auto& sym : sigma) {
    int s = m.sym_index(sym);
    if (s < 0)
      throw std::invalid_argument("eval_acra: symbol outside alphabet: " + sym);
    std::vector<MonoidValue> nv(val.size());
    for (size_t v = 0; v < val.size(); ++v) {
      const auto& [src, d] = m.mu[q][s][v];
      nv[v] = mplus(val[src], d);
    }
    val.swap(nv);
    q = m.delta[q][s];
  }
  if (!m.accepting[q]) return MonoidValue::bottom();
  const auto& [src, d] = m.nu[q];
  return mplus(val[src], d);
}

Word lookahead_labelling(const Dfa& a, const Word& sigma) {
  std::vector<int> visits;
  visits.push_back(a.start);
  int q = a.start;
  for (auto it = sigma.rbegin(); it != sigma.rend(); ++it) {
    int s = a.sym_index(*it);
    if (s < 0)
      throw std::invalid_argument("lookahead: symbol outside alphabet: " + *it);
    q = a.next[q][s];
    visits.push_back(q);
  }
  Word lab;
  for (auto it = visits.rbegin(); it != visits.rend(); ++it)
    lab.push_back("L" + std::to_string(*it));
  return lab;
}

MonoidValue eval_with_lookahead(const Ccra& m, const Dfa& a, const Word& sigma) {
  return eval_ccra(m, lookahead_labelling(a, sigma));
}

std::vector<std::string> Stage::input_alphabet() const {
  if (look) return look->alphabet;
  return m.alphabet;
}

MonoidValue eval_stage(const Stage& s, const Word& sigma) {
  if (s.look) return eval_with_lookahead(s.m, *s.look, sigma);
  return eval_ccra(s.m, sigma);
}

MonoidValue eval_cascade(const Cascade& c, const Word& sigma) {
  if (c.stages.empty()) throw std::logic_error("eval_cascade: empty cascade");
  Word cur = sigma;
  MonoidValue out;
  for (size_t i = 0; i < c.stages.size(); ++i) {
    out = eval_stage(c.stages[i], cur);
    if (out.is_bottom()) return MonoidValue::bottom();
    if (i + 1 < c.stages.size()) {
      if (out.tag() != MonoidValue::Tag::Str)
        throw std::logic_error("eval_cascade: intermediate stage not string-valued");
      cur = word_from_chars(out.str_value());
    }
  }
  return out;
}

Dfa stage_domain(const Stage& s) {
  if (!s.look) return dfa_reduce(s.m.graph_dfa());
  // Read σ reversed, tracking the look-ahead state exactly and the machine's
  // behaviour on the label suffix as a state transformer; then reverse back.
  const Dfa& a = *s.look;
  const Ccra& m = s.m;
  int nm = static_cast<int>(m.states.size());
  auto label_sym = [&](int look_state) {
    int i = m.sym_index("L" + std::to_string(look_state));
    if (i < 0) throw std::logic_error("stage_domain: missing label symbol");
    return i;
  };
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
  std::vector<int> ident(nm);
  for (int i = 0; i < nm; ++i) ident[i] = i;
  Dfa rev;
  rev.alphabet = a.alphabet;
  rev.start = get({a.start, ident});
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  int end_sym_start = label_sym(a.start);
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [qa, t] = stack[qi];
    // machine consumes the label suffix from m.start, then the end label
    int fin = m.delta[t[m.start]][end_sym_start];
    acc.push_back(m.accepting[fin] ? 1 : 0);
    std::vector<int> row(rev.alphabet.size());
    for (size_t sidx = 0; sidx < rev.alphabet.size(); ++sidx) {
      int qa2 = a.next[qa][sidx];
      int lbl = label_sym(qa2);
      std::vector<int> t2(nm);
      for (int i = 0; i < nm; ++i) t2[i] = t[m.delta[i][lbl]];
      row[sidx] = get({qa2, t2});
    }
    rows.push_back(std::move(row));
  }
  rev.num_states = static_cast<int>(rows.size());
  rev.accepting = std::move(acc);
  rev.next = std::move(rows);
  return dfa_reduce(dfa_reverse(rev));
}

// ---- normalization ----

namespace {
// shape of one update map: per register, the register projection of its rhs
std::vector<std::vector<int>> update_shape(const Ccra& m, int q, int s) {
  std::vector<std::vector<int>> shape(m.registers.size());
  for (size_t v = 0; v < m.registers.size(); ++v)
    shape[v] = m.mu[q][s][v].registers();
  return shape;
}

bool shape_normalized(const std::vector<std::vector<int>>& shape) {
  size_t n = shape.size();
  std::vector<char> occurs(n, 0);
  for (size_t u = 0; u < n; ++u) {
    bool self = false;
    for (int v : shape[u]) {
      if (v < static_cast<int>(u)) return false;  // flows must go upward
      if (v == static_cast<int>(u)) self = true;
      occurs[v] = 1;
    }
    if (!shape[u].empty() && !self) return false;  // self-flow accompanies inflows
  }
  for (size_t v = 0; v < n; ++v)
    if (!occurs[v]) return false;  // no value may be dropped
  return true;
}
}  // namespace

bool is_normalized(const Ccra& m) {
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s)
      if (!shape_normalized(update_shape(m, static_cast<int>(q),
                                         static_cast<int>(s))))
        return false;
  return true;
}

Ccra normalize(const Ccra& m, std::optional<std::vector<std::string>> fresh) {
  if (!validate_copyless(m).empty())
    throw std::invalid_argument("normalize: machine is not copyless");
  int k = static_cast<int>(m.registers.size());
  std::vector<std::string> names;
  if (fresh) {
    names = *fresh;
    if (static_cast<int>(names.size()) != k + 1)
      throw std::invalid_argument("normalize: need |V|+1 fresh names");
  } else {
    for (int i = 0; i <= k; ++i) names.push_back("x" + std::to_string(i));
  }

  // state = (orig state, perm) with perm[v] ∈ 1..k the home of orig register v
  using Perm = std::vector<int>;
  std::map<std::pair<int, Perm>, int> id;
  std::vector<std::pair<int, Perm>> stack;
  auto get = [&](int q, const Perm& f) {
    auto key = std::make_pair(q, f);
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[key] = v;
    stack.push_back(key);
    return v;
  };

  Perm f0(k);
  for (int i = 0; i < k; ++i) f0[i] = i + 1;
  Ccra out;
  out.alphabet = m.alphabet;
  out.registers = names;
  out.monoid = m.monoid;
  out.start = get(m.start, f0);

  auto rename_update = [&](const UpdateExpr& u, const Perm& f) {
    UpdateExpr r;
    for (const auto& t : u.toks) {
      if (t.is_reg)
        r.append_reg(f[t.reg]);
      else
        r.toks.push_back(t);
    }
    return canonicalize(r, m.monoid);
  };

  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [q, f] = stack[qi];
    out.states.push_back(m.states[q] + "~" + [&] {
      std::string s;
      for (int v : f) s += std::to_string(v);
      return s;
    }());
    out.accepting.push_back(m.accepting[q]);
    out.nu.push_back(m.accepting[q] ? rename_update(m.nu[q], f) : UpdateExpr{});
    out.delta.emplace_back(m.alphabet.size(), -1);
    out.mu.emplace_back(m.alphabet.size(),
                        std::vector<UpdateExpr>(k + 1));
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      // new home of orig register v: min over homes of its sources
      Perm f2(k, -1);
      std::vector<char> used(k + 1, 0);
      for (int v = 0; v < k; ++v) {
        auto regs = m.mu[q][s][v].registers();
        if (regs.empty()) continue;
        int best = k + 1;
        for (int u : regs) best = std::min(best, f[u]);
        f2[v] = best;
        used[best] = 1;
      }
      for (int v = 0; v < k; ++v) {
        if (f2[v] >= 0) continue;
        for (int cand = 1; cand <= k; ++cand)
          if (!used[cand]) {
            f2[v] = cand;
            used[cand] = 1;
            break;
          }
      }
      // registers of m whose value dies on this transition
      std::vector<char> flows(k, 0);
      for (int v = 0; v < k; ++v)
        for (int u : m.mu[q][s][v].registers()) flows[u] = 1;
      UpdateExpr sink = UpdateExpr::reg(0);
      for (int u = 0; u < k; ++u)
        if (!flows[u]) sink.append_reg(f[u]);

      int tgt = get(m.delta[q][s], f2);
      out.delta[qi][s] = tgt;
      auto& row = out.mu[qi][s];
      row[0] = sink;
      // f2 is a permutation of 1..k, so this covers every non-sink row
      for (int v = 0; v < k; ++v)
        row[f2[v]] = rename_update(m.mu[q][s][v], f);
    }
  }
  out.check();
  return out;
}

std::string ccra_to_dot(const Ccra& m, const std::string& name) {
  std::ostringstream os;
  os << "digraph " << name << " {\n  rankdir=LR;\n  hidden [shape=point];\n";
  for (size_t q = 0; q < m.states.size(); ++q) {
    os << "  q" << q << " [shape=" << (m.accepting[q] ? "doublecircle" : "circle")
       << ", label=\"" << m.states[q];
    if (m.accepting[q]) os << "\\nout: " << update_to_string(m.nu[q], m.registers);
    os << "\"];\n";
  }
  os << "  hidden -> q" << m.start << ";\n";
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      os << "  q" << q << " -> q" << m.delta[q][s] << " [label=\""
         << m.alphabet[s];
      for (size_t v = 0; v < m.registers.size(); ++v) {
        const auto& u = m.mu[q][s][v];
        bool identity = u.toks.size() == 1 && u.toks[0].is_reg &&
                        u.toks[0].reg == static_cast<int>(v);
        if (!identity)
          os << "\\n" << m.registers[v] << " := "
             << update_to_string(u, m.registers);
      }
      os << "\"];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace rca
