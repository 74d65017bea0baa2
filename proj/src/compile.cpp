#include "rca/compile.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

namespace rca {

namespace {

using K = FuncExpr::Kind;

UpdateExpr remap_regs(const UpdateExpr& u, int offset) {
  UpdateExpr out;
  for (const auto& t : u.toks) {
    if (t.is_reg)
      out.append_reg(t.reg + offset);
    else
      out.toks.push_back(t);
  }
  return out;
}

// Next-symbol automaton: state 0 is the initial end marker and is never
// re-entered; state i+1 means "the next input symbol is alphabet[i]".
Dfa next_symbol_automaton(const std::vector<std::string>& alphabet) {
  Dfa d;
  d.alphabet = alphabet;
  d.num_states = static_cast<int>(alphabet.size()) + 1;
  d.start = 0;
  d.accepting.assign(d.num_states, 0);
  d.next.assign(d.num_states, std::vector<int>(alphabet.size()));
  for (int q = 0; q < d.num_states; ++q)
    for (size_t s = 0; s < alphabet.size(); ++s)
      d.next[q][s] = static_cast<int>(s) + 1;
  return d;
}

// Reading the input reversed, a boundary symbol restarts the automaton, so a
// child's look-ahead sees each marked segment as if it were the whole input.
// The boundary itself is not part of any segment and is not consumed.
Dfa reset_on(const Dfa& d, const std::string& boundary) {
  Dfa out = d;
  int b = out.sym_index(boundary);
  if (b < 0) throw CompileError("reset_on: boundary not in alphabet");
  for (int q = 0; q < out.num_states; ++q) out.next[q][b] = d.start;
  return out;
}

// Product look-ahead with per-state component decode; component 0 is always
// the next-symbol automaton, so `next` is defined everywhere.
struct LookInfo {
  Dfa d;
  std::vector<std::string> next;        // "" on the initial end-marker state
  std::vector<std::vector<int>> comp;   // per state, component states
};

LookInfo look_product(const std::vector<std::string>& alphabet,
                      const std::vector<Dfa>& comps) {
  for (const auto& c : comps)
    if (c.alphabet != alphabet)
      throw CompileError("look_product: component alphabet mismatch");
  LookInfo li;
  li.d.alphabet = alphabet;
  std::map<std::vector<int>, int> id;
  std::vector<std::vector<int>> stack;
  auto get = [&](const std::vector<int>& t) {
    auto it = id.find(t);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[t] = v;
    stack.push_back(t);
    return v;
  };
  std::vector<int> init;
  for (const auto& c : comps) init.push_back(c.start);
  li.d.start = get(init);
  std::vector<std::vector<int>> rows;
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    std::vector<int> cur = stack[qi];
    std::vector<int> row(alphabet.size());
    for (size_t s = 0; s < alphabet.size(); ++s) {
      std::vector<int> nxt(cur.size());
      for (size_t c = 0; c < comps.size(); ++c) nxt[c] = comps[c].next[cur[c]][s];
      row[s] = get(nxt);
    }
    rows.push_back(std::move(row));
  }
  li.d.num_states = static_cast<int>(rows.size());
  li.d.accepting.assign(li.d.num_states, 0);
  li.d.next = std::move(rows);
  li.comp = stack;
  li.next.resize(li.d.num_states);
  for (int q = 0; q < li.d.num_states; ++q) {
    int a1 = li.comp[q][0];
    li.next[q] = a1 == 0 ? std::string() : alphabet[a1 - 1];
  }
  return li;
}

std::vector<std::string> label_alphabet(const Dfa& look) {
  std::vector<std::string> out;
  for (int q = 0; q < look.num_states; ++q) out.push_back("L" + std::to_string(q));
  return out;
}

// Uniform access to a child stage during embedding. For a look-bearing child
// the parent must supply the child's look-state; for a plain child the raw
// symbol suffices.
struct ChildSim {
  const Ccra* m = nullptr;
  bool has_look = false;
  int end_sym = -1;  // label index of the child's end label

  static ChildSim of(const Stage& s) {
    ChildSim c;
    c.m = &s.m;
    c.has_look = s.look.has_value();
    if (c.has_look) {
      c.end_sym = s.m.sym_index("L" + std::to_string(s.look->start));
      if (c.end_sym < 0) throw CompileError("child stage lacks end label");
    }
    return c;
  }
  int sym_for(const std::string& raw, int look_state) const {
    int i = has_look ? m->sym_index("L" + std::to_string(look_state))
                     : m->sym_index(raw);
    if (i < 0) throw CompileError("child stage: unknown symbol " + raw);
    return i;
  }
  int step(int q, int sym) const { return m->delta[q][sym]; }
  bool eff_acc(int q) const {
    int f = end_sym < 0 ? q : m->delta[q][end_sym];
    return m->accepting[f];
  }
  // ν after the end step, over the child's registers (to be remapped)
  UpdateExpr bank(int q, const MonoidSpec& mono) const {
    int f = end_sym < 0 ? q : m->delta[q][end_sym];
    if (!m->accepting[f]) return UpdateExpr{};
    if (end_sym < 0) return m->nu[f];
    return subst_update(m->nu[f], m->mu[q][end_sym], mono);
  }
  const std::vector<UpdateExpr>& mu(int q, int sym) const {
    return m->mu[q][sym];
  }
  int nregs() const { return static_cast<int>(m->registers.size()); }
};

std::vector<std::string> numbered_regs(int n, bool with_total) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("r" + std::to_string(i));
  if (with_total) out.push_back("total");
  return out;
}

std::vector<UpdateExpr> identity_row(int n) {
  std::vector<UpdateExpr> row(n);
  for (int i = 0; i < n; ++i) row[i] = UpdateExpr::reg(i);
  return row;
}

void place_child_updates(std::vector<UpdateExpr>& row, const ChildSim& c,
                         int q, int sym, int offset) {
  for (int v = 0; v < c.nregs(); ++v)
    row[offset + v] = remap_regs(c.mu(q, sym)[v], offset);
}

void reset_child_regs(std::vector<UpdateExpr>& row, const ChildSim& c,
                      int offset) {
  for (int v = 0; v < c.nregs(); ++v) row[offset + v] = UpdateExpr{};
}

// child takes its first step of a fresh run: updates read from the identity
// valuation, so registers in the rhs are replaced by identity constants
void place_child_first_step(std::vector<UpdateExpr>& row, const ChildSim& c,
                            int q0, int sym, int offset,
                            const MonoidSpec& mono) {
  std::vector<UpdateExpr> ident(c.nregs());
  for (int v = 0; v < c.nregs(); ++v)
    row[offset + v] = subst_update(c.mu(q0, sym)[v], ident, mono);
}

// Generic machine scaffold built over a parent look-ahead.
struct Builder {
  Ccra m;
  std::optional<Dfa> look;
  std::vector<std::string> label_next;

  Stage finish() {
    m.check();
    Stage s;
    s.m = std::move(m);
    s.look = std::move(look);
    s.label_next = std::move(label_next);
    return s;
  }
};

}  // namespace

// ---- plain constructions ----

Stage compile_base(const Dfa& lang, const MonoidValue& d, MonoidSpec monoid) {
  Stage s;
  s.m.states.clear();
  for (int q = 0; q < lang.num_states; ++q)
    s.m.states.push_back("q" + std::to_string(q));
  s.m.alphabet = lang.alphabet;
  s.m.registers = {};
  s.m.start = lang.start;
  s.m.accepting = lang.accepting;
  s.m.delta = lang.next;
  s.m.mu.assign(lang.num_states,
                std::vector<std::vector<UpdateExpr>>(lang.alphabet.size()));
  s.m.nu.assign(lang.num_states, UpdateExpr{});
  for (int q = 0; q < lang.num_states; ++q)
    if (lang.accepting[q]) s.m.nu[q] = UpdateExpr::constant(d);
  s.m.monoid = std::move(monoid);
  s.m.check();
  return s;
}

Stage reversal_stage(std::vector<std::string> alphabet) {
  Stage s;
  s.m.states = {"q0"};
  s.m.alphabet = alphabet;
  s.m.registers = {"x"};
  s.m.start = 0;
  s.m.accepting = {1};
  s.m.delta = {std::vector<int>(alphabet.size(), 0)};
  s.m.mu.assign(1, std::vector<std::vector<UpdateExpr>>(alphabet.size()));
  for (size_t a = 0; a < alphabet.size(); ++a) {
    UpdateExpr u = UpdateExpr::constant(MonoidValue::str(alphabet[a]));
    u.append_reg(0);
    s.m.mu[0][a] = {u};
  }
  s.m.nu = {UpdateExpr::reg(0)};
  s.m.monoid = MonoidSpec::strings(alphabet);
  s.m.check();
  return s;
}

// ---- replain: collapse a look-bearing stage whose reachable labels only
// matter through their next-symbol component ----

namespace {

std::optional<Stage> try_replain(const Stage& s) {
  if (!s.look) return s;
  const Dfa& a = *s.look;
  // reachable look states
  std::vector<char> seen(a.num_states, 0);
  std::vector<int> bfs = {a.start};
  seen[a.start] = 1;
  for (size_t i = 0; i < bfs.size(); ++i)
    for (size_t c = 0; c < a.alphabet.size(); ++c) {
      int t = a.next[bfs[i]][c];
      if (!seen[t]) {
        seen[t] = 1;
        bfs.push_back(t);
      }
    }
  // group reachable labels by next-symbol; require identical machine columns
  std::map<std::string, int> rep;  // next symbol -> representative look state
  for (int q = 0; q < a.num_states; ++q) {
    if (!seen[q]) continue;
    std::string nx = s.label_next[q];
    auto it = rep.find(nx);
    if (it == rep.end()) {
      rep[nx] = q;
      continue;
    }
    int r = it->second;
    int sq = s.m.sym_index("L" + std::to_string(q));
    int sr = s.m.sym_index("L" + std::to_string(r));
    for (size_t mq = 0; mq < s.m.states.size(); ++mq) {
      if (s.m.delta[mq][sq] != s.m.delta[mq][sr]) return std::nullopt;
      for (size_t v = 0; v < s.m.registers.size(); ++v) {
        const auto& u1 = s.m.mu[mq][sq][v].toks;
        const auto& u2 = s.m.mu[mq][sr][v].toks;
        if (u1.size() != u2.size()) return std::nullopt;
        for (size_t t = 0; t < u1.size(); ++t) {
          if (u1[t].is_reg != u2[t].is_reg) return std::nullopt;
          if (u1[t].is_reg && u1[t].reg != u2[t].reg) return std::nullopt;
          if (!u1[t].is_reg && !(u1[t].c == u2[t].c)) return std::nullopt;
        }
      }
    }
  }
  auto end_it = rep.find("");
  if (end_it == rep.end()) return std::nullopt;
  int end_sym = s.m.sym_index("L" + std::to_string(end_it->second));

  Stage out;
  out.m.states = s.m.states;
  out.m.alphabet = a.alphabet;
  out.m.registers = s.m.registers;
  out.m.start = s.m.start;
  out.m.monoid = s.m.monoid;
  out.m.delta.assign(s.m.states.size(), std::vector<int>(a.alphabet.size(), 0));
  out.m.mu.assign(s.m.states.size(),
                  std::vector<std::vector<UpdateExpr>>(a.alphabet.size()));
  out.m.accepting.assign(s.m.states.size(), 0);
  out.m.nu.assign(s.m.states.size(), UpdateExpr{});
  for (size_t q = 0; q < s.m.states.size(); ++q) {
    for (size_t c = 0; c < a.alphabet.size(); ++c) {
      auto it = rep.find(a.alphabet[c]);
      if (it == rep.end()) {
        // symbol never occurs; loop in place harmlessly
        out.m.delta[q][c] = static_cast<int>(q);
        out.m.mu[q][c] = identity_row(static_cast<int>(s.m.registers.size()));
        continue;
      }
      int sym = s.m.sym_index("L" + std::to_string(it->second));
      out.m.delta[q][c] = s.m.delta[q][sym];
      out.m.mu[q][c] = s.m.mu[q][sym];
    }
    int fin = s.m.delta[q][end_sym];
    if (s.m.accepting[fin]) {
      out.m.accepting[q] = 1;
      out.m.nu[q] = subst_update(s.m.nu[fin], s.m.mu[q][end_sym], s.m.monoid);
    }
  }
  out.m.check();
  return out;
}

Stage replain_or_self(const Stage& s) {
  if (auto p = try_replain(s)) return *p;
  return s;
}

}  // namespace

// ---- product (choice / sum) over single stages ----

Stage compile_product(K kind, const Stage& f0, const Stage& g0) {
  Stage fs = replain_or_self(f0), gs = replain_or_self(g0);
  if (fs.input_alphabet() != gs.input_alphabet())
    throw CompileError("product: alphabet mismatch");
  if (!(fs.m.monoid == gs.m.monoid))
    throw CompileError("product: monoid mismatch");
  std::vector<std::string> sigma = fs.input_alphabet();
  const MonoidSpec mono = fs.m.monoid;

  bool plain = !fs.look && !gs.look;
  std::vector<Dfa> comps;
  int fc = -1, gc = -1;
  if (!plain) {
    comps.push_back(next_symbol_automaton(sigma));
    if (fs.look) {
      fc = static_cast<int>(comps.size());
      comps.push_back(*fs.look);
    }
    if (gs.look) {
      gc = static_cast<int>(comps.size());
      comps.push_back(*gs.look);
    }
  }
  LookInfo li;
  if (!plain) li = look_product(sigma, comps);

  ChildSim F = ChildSim::of(fs), G = ChildSim::of(gs);
  int nf = F.nregs(), ng = G.nregs();
  int R = nf + ng;

  Builder b;
  b.m.alphabet = plain ? sigma : label_alphabet(li.d);
  b.m.registers = numbered_regs(R, false);
  b.m.monoid = mono;
  if (!plain) {
    b.look = li.d;
    b.label_next = li.next;
  }

  std::map<std::pair<int, int>, int> id;
  std::vector<std::pair<int, int>> stack;
  auto get = [&](int qf, int qg) {
    auto key = std::make_pair(qf, qg);
    auto it = id.find(key);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[key] = v;
    stack.push_back(key);
    return v;
  };
  get(fs.m.start, gs.m.start);
  b.m.start = 0;
  size_t nsym = b.m.alphabet.size();
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    auto [qf, qg] = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool af = F.eff_acc(qf), ag = G.eff_acc(qg);
    bool acc = kind == K::Choice ? (af || ag) : (af && ag);
    b.m.accepting.push_back(acc ? 1 : 0);
    UpdateExpr nu;
    if (acc) {
      if (kind == K::Choice) {
        nu = af ? remap_regs(F.bank(qf, mono), 0)
                : remap_regs(G.bank(qg, mono), nf);
      } else {
        nu = remap_regs(F.bank(qf, mono), 0);
        nu.append(remap_regs(G.bank(qg, mono), nf));
        nu = canonicalize(nu, mono);
      }
    }
    b.m.nu.push_back(nu);
    for (size_t s = 0; s < nsym; ++s) {
      std::string raw = plain ? b.m.alphabet[s] : li.next[s];
      int flook = plain ? -1 : (fc >= 0 ? li.comp[s][fc] : -1);
      int glook = plain ? -1 : (gc >= 0 ? li.comp[s][gc] : -1);
      std::vector<UpdateExpr> row = identity_row(R);
      int qf2 = qf, qg2 = qg;
      if (plain || !raw.empty()) {
        int sf = F.sym_for(raw, flook);
        int sg = G.sym_for(raw, glook);
        qf2 = F.step(qf, sf);
        qg2 = G.step(qg, sg);
        place_child_updates(row, F, qf, sf, 0);
        for (int v = 0; v < ng; ++v)
          row[nf + v] = remap_regs(G.mu(qg, sg)[v], nf);
      } else {
        // end label: children do their own end steps on their end labels
        if (F.end_sym >= 0) {
          qf2 = F.step(qf, F.end_sym);
          place_child_updates(row, F, qf, F.end_sym, 0);
        }
        if (G.end_sym >= 0) {
          qg2 = G.step(qg, G.end_sym);
          for (int v = 0; v < ng; ++v)
            row[nf + v] = remap_regs(G.mu(qg, G.end_sym)[v], nf);
        }
      }
      b.m.delta[qi][s] = get(qf2, qg2);
      b.m.mu[qi][s] = std::move(row);
    }
  }
  return b.finish();
}

// ---- direct split / iter (Lemma III.3 / III.4 shape): prefix side plain ----

namespace {
struct SplitState {
  int mode;  // 0 = f side, 1 = g side, 2 = done-ok, 3 = dead
  int q;     // child state
  int a3;    // unambiguity automaton state
  bool operator<(const SplitState& o) const {
    return std::tie(mode, q, a3) < std::tie(o.mode, o.q, o.a3);
  }
};
}  // namespace

Stage compile_split(K kind, const Stage& f0, const Stage& g0, const Dfa& lf,
                    const Dfa& lg) {
  Stage fs = replain_or_self(f0), gs = replain_or_self(g0);
  if (fs.look)
    throw CompileError(
        "compile_split: prefix side must be look-ahead free (compile() "
        "routes other cases through markers)");
  std::vector<std::string> sigma = fs.input_alphabet();
  if (gs.input_alphabet() != sigma) throw CompileError("split: alphabet mismatch");
  const MonoidSpec mono = fs.m.monoid;

  Dfa a2 = dfa_reverse(lg);
  Dfa a3 = unambiguous_concat_dfa(lf, lg);
  std::vector<Dfa> comps = {next_symbol_automaton(sigma), a2};
  int gcomp = -1;
  if (gs.look) {
    gcomp = static_cast<int>(comps.size());
    comps.push_back(*gs.look);
  }
  LookInfo li = look_product(sigma, comps);

  ChildSim F = ChildSim::of(fs), G = ChildSim::of(gs);
  int nf = F.nregs(), ng = G.nregs();
  int R = nf + ng + 1;
  int TOT = nf + ng;
  bool eps_in_lg = lg.accepts({});

  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(nf + ng, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;

  std::map<SplitState, int> id;
  std::vector<SplitState> stack;
  auto get = [&](SplitState st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  b.m.start = get({0, fs.m.start, a3.start});
  size_t nsym = b.m.alphabet.size();
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    SplitState st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    // acceptance and output encode end-of-input behaviour; the end label is a
    // structural no-op (identity self-loop)
    bool acc = false;
    UpdateExpr nu;
    if (st.mode == 0 && F.eff_acc(st.q) && eps_in_lg &&
        a3.accepting[st.a3] && G.eff_acc(gs.m.start)) {
      acc = true;
      UpdateExpr fpart = remap_regs(F.bank(st.q, mono), 0);
      UpdateExpr gpart = remap_regs(G.bank(gs.m.start, mono), nf);
      if (kind == K::SplitSum) {
        nu = fpart;
        nu.append(gpart);
      } else {
        nu = gpart;
        nu.append(fpart);
      }
      nu = canonicalize(nu, mono);
    } else if (st.mode == 1 && G.eff_acc(st.q) && a3.accepting[st.a3]) {
      acc = true;
      UpdateExpr gval = remap_regs(G.bank(st.q, mono), nf);
      if (kind == K::SplitSum) {
        nu = UpdateExpr::reg(TOT);
        nu.append(gval);
      } else {
        nu = gval;
        nu.append_reg(TOT);
      }
      nu = canonicalize(nu, mono);
    }
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(acc ? nu : UpdateExpr{});
    for (size_t s = 0; s < nsym; ++s) {
      std::string raw = li.next[s];
      bool in_lg = a2.accepting[li.comp[s][1]] != 0;
      int glook = gcomp >= 0 ? li.comp[s][gcomp] : -1;
      std::vector<UpdateExpr> row = identity_row(R);
      SplitState nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else {
        int a3n = a3.next[st.a3][a3.sym_index(raw)];
        if (st.mode == 0) {
          if (F.eff_acc(st.q) && in_lg) {
            // switch: bank f's output, feed this symbol to g's first step
            int sg = G.sym_for(raw, glook);
            row[TOT] = remap_regs(F.bank(st.q, mono), 0);
            reset_child_regs(row, F, 0);
            for (int v = 0; v < ng; ++v)
              row[nf + v] = remap_regs(G.mu(gs.m.start, sg)[v], nf);
            nx = {1, G.step(gs.m.start, sg), a3n};
          } else {
            int sf = F.sym_for(raw, -1);
            place_child_updates(row, F, st.q, sf, 0);
            nx = {0, F.step(st.q, sf), a3n};
          }
        } else if (st.mode == 1) {
          int sg = G.sym_for(raw, glook);
          for (int v = 0; v < ng; ++v)
            row[nf + v] = remap_regs(G.mu(st.q, sg)[v], nf);
          nx = {1, G.step(st.q, sg), a3n};
        } else {
          nx = {3, 0, 0};
        }
      }
      b.m.delta[qi][s] = get(nx);
      b.m.mu[qi][s] = std::move(row);
    }
  }
  return b.finish();
}

namespace {
struct IterState {
  int mode;  // 0 = fresh (no input yet), 1 = in piece, 2 = done-ok, 3 = dead
  int q;
  int a3;
  bool operator<(const IterState& o) const {
    return std::tie(mode, q, a3) < std::tie(o.mode, o.q, o.a3);
  }
};
}  // namespace

Stage compile_iter(K kind, const Stage& f0, const Dfa& lf) {
  Stage fs = replain_or_self(f0);
  if (fs.look)
    throw CompileError(
        "compile_iter: body must be look-ahead free (compile() routes other "
        "cases through markers)");
  std::vector<std::string> sigma = fs.input_alphabet();
  const MonoidSpec mono = fs.m.monoid;

  Dfa a2 = dfa_reverse(dfa_star(lf));
  Dfa a3 = unambiguous_star_dfa(lf);
  LookInfo li = look_product(sigma, {next_symbol_automaton(sigma), a2});

  ChildSim F = ChildSim::of(fs);
  int nf = F.nregs();
  int R = nf + 1;
  int TOT = nf;

  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(nf, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;

  std::map<IterState, int> id;
  std::vector<IterState> stack;
  auto get = [&](IterState st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  b.m.start = get({0, fs.m.start, a3.start});
  size_t nsym = b.m.alphabet.size();

  auto appended_total = [&](const UpdateExpr& piece) {
    UpdateExpr total;
    if (kind == K::IterSum) {
      total = UpdateExpr::reg(TOT);
      total.append(piece);
    } else {
      total = piece;
      total.append_reg(TOT);
    }
    return canonicalize(total, mono);
  };

  for (size_t qi = 0; qi < stack.size(); ++qi) {
    IterState st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool acc = false;
    UpdateExpr nu;
    if (st.mode == 0) {
      acc = true;  // ε: zero pieces, identity output
      nu = UpdateExpr{};
    } else if (st.mode == 1 && F.eff_acc(st.q) && a3.accepting[st.a3]) {
      acc = true;
      nu = appended_total(remap_regs(F.bank(st.q, mono), 0));
    }
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(nu);
    for (size_t s = 0; s < nsym; ++s) {
      std::string raw = li.next[s];
      bool decomposable = a2.accepting[li.comp[s][1]] != 0;
      std::vector<UpdateExpr> row = identity_row(R);
      IterState nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else {
        int a3n = a3.next[st.a3][a3.sym_index(raw)];
        int sf = F.sym_for(raw, -1);
        if (st.mode == 0) {
          place_child_updates(row, F, fs.m.start, sf, 0);
          nx = {1, F.step(fs.m.start, sf), a3n};
        } else if (st.mode == 1) {
          if (F.eff_acc(st.q) && decomposable) {
            // close the piece, bank, restart with this symbol
            row[TOT] = appended_total(remap_regs(F.bank(st.q, mono), 0));
            place_child_first_step(row, F, fs.m.start, sf, 0, mono);
            nx = {1, F.step(fs.m.start, sf), a3n};
          } else {
            place_child_updates(row, F, st.q, sf, 0);
            nx = {1, F.step(st.q, sf), a3n};
          }
        } else {
          nx = {3, 0, 0};
        }
      }
      b.m.delta[qi][s] = get(nx);
      b.m.mu[qi][s] = std::move(row);
    }
  }
  return b.finish();
}

// ---- marker-based pipeline machinery ----

namespace {

struct Compiler {
  std::set<std::string> used;
  int marker_count = 0;

  std::string fresh_marker() {
    // Stage outputs are re-tokenized one character at a time, so markers must
    // be single characters outside every alphabet in play.
    static const std::string pool =
        "@%^&~=:;<>[]{},.`'\\|/?-_+*()!0123456789"
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
    for (char c : pool) {
      std::string cand(1, c);
      if (!used.count(cand)) {
        used.insert(cand);
        return cand;
      }
    }
    throw CompileError("marker pool exhausted");
  }

  // expression helpers over a given alphabet / monoid
  ExprPtr ident_expr(const std::vector<std::string>& sigma,
                     const std::vector<std::string>& sub) {
    MonoidSpec mono = MonoidSpec::strings(sigma);
    ExprPtr acc;
    for (const auto& c : sub) {
      auto d = std::make_shared<Dfa>(dfa_word(sigma, {c}));
      ExprPtr e = make_const(sigma, mono, d, MonoidValue::str(c), c);
      acc = acc ? make_binary(K::Choice, acc, e) : e;
    }
    return make_unary(K::IterSum, acc);
  }

  ExprPtr const_expr(const std::vector<std::string>& sigma, const Dfa& lang,
                     const std::string& val) {
    MonoidSpec mono = MonoidSpec::strings(sigma);
    return make_const(sigma, mono, std::make_shared<Dfa>(lang),
                      MonoidValue::str(val));
  }

  // σ = σ1σ2 (unique split by lf/lg) ↦ σ1 @ σ2
  ExprPtr splitmark_expr(const std::vector<std::string>& sigma, const Dfa& lf,
                         const Dfa& lg, const std::string& marker,
                         const std::vector<std::string>& base) {
    ExprPtr idp = ident_expr(sigma, base);
    ExprPtr left = make_binary(
        K::Sum, restrict_to(idp, std::make_shared<Dfa>(lf)),
        const_expr(sigma, dfa_all(sigma), marker));
    ExprPtr right = restrict_to(ident_expr(sigma, base),
                                std::make_shared<Dfa>(lg));
    return make_binary(K::SplitSum, left, right);
  }

  // σ = σ1…σk (unique decomposition into lf pieces) ↦ σ1@σ2@…σk@
  ExprPtr piecemark_expr(const std::vector<std::string>& sigma, const Dfa& lf,
                         const std::string& marker,
                         const std::vector<std::string>& base) {
    ExprPtr idp = ident_expr(sigma, base);
    ExprPtr piece = make_binary(K::Sum, restrict_to(idp, std::make_shared<Dfa>(lf)),
                                const_expr(sigma, dfa_all(sigma), marker));
    return make_unary(K::IterSum, piece);
  }

  // σ ↦ σ@σ
  ExprPtr copymark_expr(const std::vector<std::string>& sigma,
                        const std::string& marker,
                        const std::vector<std::string>& base) {
    ExprPtr left = make_binary(K::Sum, ident_expr(sigma, base),
                               const_expr(sigma, dfa_all(sigma), marker));
    return make_binary(K::Sum, left, ident_expr(sigma, base));
  }

  Cascade go(const ExprPtr& e);
};

// extend a stage to a larger input alphabet (new symbols reject)
Stage extend_stage(const Stage& s, const std::vector<std::string>& sigma) {
  if (s.input_alphabet() == sigma) return s;
  if (!s.look) {
    Stage out = s;
    int dead = static_cast<int>(out.m.states.size());
    out.m.states.push_back("dead");
    out.m.accepting.push_back(0);
    out.m.nu.push_back(UpdateExpr{});
    size_t R = out.m.registers.size();
    std::vector<std::vector<int>> nd(out.m.states.size(),
                                     std::vector<int>(sigma.size(), dead));
    std::vector<std::vector<std::vector<UpdateExpr>>> nm(
        out.m.states.size(),
        std::vector<std::vector<UpdateExpr>>(
            sigma.size(), identity_row(static_cast<int>(R))));
    for (size_t q = 0; q + 1 < out.m.states.size(); ++q)
      for (size_t c = 0; c < sigma.size(); ++c) {
        int old = s.m.sym_index(sigma[c]);
        if (old >= 0) {
          nd[q][c] = s.m.delta[q][old];
          nm[q][c] = s.m.mu[q][old];
        }
      }
    for (size_t c = 0; c < sigma.size(); ++c)
      nm[dead][c] = identity_row(static_cast<int>(R));
    out.m.alphabet = sigma;
    out.m.delta = std::move(nd);
    out.m.mu = std::move(nm);
    out.m.check();
    return out;
  }
  // look-bearing: extend the look; machine gains a label column per new look
  // state (the extension sink), which sends the machine to a dead state
  Stage out;
  Dfa look2 = dfa_extend_alphabet(*s.look, sigma);
  out.look = look2;
  out.label_next.assign(look2.num_states, "?");
  for (int q = 0; q < s.look->num_states; ++q)
    out.label_next[q] = s.label_next[q];
  // the appended sink state carries no next-symbol information; the machine
  // dies on it, which is sound because real inputs never reach it mid-run
  out.m = s.m;
  int dead = static_cast<int>(out.m.states.size());
  out.m.states.push_back("dead");
  out.m.accepting.push_back(0);
  out.m.nu.push_back(UpdateExpr{});
  size_t R = out.m.registers.size();
  std::vector<std::string> labels = label_alphabet(look2);
  std::vector<std::vector<int>> nd(out.m.states.size(),
                                   std::vector<int>(labels.size(), dead));
  std::vector<std::vector<std::vector<UpdateExpr>>> nm(
      out.m.states.size(),
      std::vector<std::vector<UpdateExpr>>(labels.size(),
                                           identity_row(static_cast<int>(R))));
  for (size_t q = 0; q + 1 < out.m.states.size(); ++q)
    for (size_t c = 0; c < labels.size(); ++c) {
      int old = s.m.sym_index(labels[c]);
      if (old >= 0) {
        nd[q][c] = s.m.delta[q][old];
        nm[q][c] = s.m.mu[q][old];
      }
    }
  out.m.alphabet = labels;
  out.m.delta = std::move(nd);
  out.m.mu = std::move(nm);
  out.m.check();
  return out;
}

}  // namespace

Cascade compile(const ExprPtr& e) {
  Compiler c;
  for (const auto& s : e->alphabet) c.used.insert(s);
  return c.go(e);
}

namespace {

// region-extension kinds for prep stages of marked pipelines
enum class Ext { Before, After, Map };

// Applies a string-valued stage to the region(s) of a marked string:
//   Before: u @ v  ->  s(u) @ v
//   After:  u @ v  ->  u @ s(v)
//   Map:    u1@u2@…uk@ -> s(u1)@s(u2)@…s(uk)@
// Failures (region rejected, or already failed) yield the failure token, so
// choice-style fallbacks stay observable downstream.
Stage region_extend(const Stage& s0, Ext ext, const std::string& marker,
                    const std::string& fail,
                    const std::vector<std::string>& sigma) {
  Stage s = extend_stage(replain_or_self(s0), sigma);
  const MonoidSpec mono = MonoidSpec::strings(sigma);
  if (!(s.m.monoid.kind == MonoidKind::Str))
    throw CompileError("region_extend: stage must be string-valued");

  std::vector<Dfa> comps = {next_symbol_automaton(sigma)};
  int scomp = -1;
  if (s.look) {
    scomp = 1;
    comps.push_back(ext == Ext::After ? *s.look : reset_on(*s.look, marker));
  }
  LookInfo li = look_product(sigma, comps);
  ChildSim S = ChildSim::of(s);
  int ns = S.nregs();
  int TOT = ns;
  int R = ns + 1;

  // Modes:
  //   Before: 0 run-s on the region, 1 echo tail, 2 failed (consume to
  //           marker, then echo), 4 dead
  //   After:  3 echo head, 0 run-s on suffix region, 2 suffix failed, 4 dead
  //   Map:    5 at segment boundary, 0 run-s in segment, 2 segment failed,
  //           4 dead
  struct St {
    int mode, q;
    bool operator<(const St& o) const {
      return std::tie(mode, q) < std::tie(o.mode, o.q);
    }
  };
  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(ns, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;
  std::map<St, int> id;
  std::vector<St> stack;
  auto get = [&](St st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  switch (ext) {
    case Ext::Before: b.m.start = get({0, s.m.start}); break;
    case Ext::After: b.m.start = get({3, 0}); break;
    case Ext::Map: b.m.start = get({5, 0}); break;
  }
  size_t nsym = b.m.alphabet.size();
  auto echo_total = [&](const std::string& sym) {
    UpdateExpr u = UpdateExpr::reg(TOT);
    u.append_const(MonoidValue::str(sym));
    return canonicalize(u, mono);
  };
  auto banked_total = [&](int q, const std::string& suffix) {
    UpdateExpr u = UpdateExpr::reg(TOT);
    u.append(remap_regs(S.bank(q, mono), 0));
    if (!suffix.empty()) u.append_const(MonoidValue::str(suffix));
    return canonicalize(u, mono);
  };
  auto fail_total = [&](const std::string& suffix) {
    UpdateExpr u = UpdateExpr::reg(TOT);
    u.append_const(MonoidValue::str(fail));
    if (!suffix.empty()) u.append_const(MonoidValue::str(suffix));
    return canonicalize(u, mono);
  };

  for (size_t qi = 0; qi < stack.size(); ++qi) {
    St st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool acc = false;
    UpdateExpr nu = UpdateExpr::reg(TOT);
    switch (ext) {
      case Ext::Before:
        acc = st.mode == 1;  // the marker must have been seen
        break;
      case Ext::After:
        if (st.mode == 0) {
          acc = true;  // lenient: rejected regions become the failure token
          nu = S.eff_acc(st.q) ? banked_total(st.q, "") : fail_total("");
        } else if (st.mode == 2) {
          acc = true;
          nu = fail_total("");
        }
        break;
      case Ext::Map:
        acc = st.mode == 5;  // segments are closed by their markers
        break;
    }
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(acc ? nu : UpdateExpr{});

    for (size_t sy = 0; sy < nsym; ++sy) {
      std::string raw = li.next[sy];
      int slook = scomp >= 0 ? li.comp[sy][scomp] : -1;
      std::vector<UpdateExpr> row = identity_row(R);
      St nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else if (st.mode == 4) {
        nx = {4, 0};
      } else if (st.mode == 0 || st.mode == 5) {
        bool at_boundary = st.mode == 5;
        int q = at_boundary ? s.m.start : st.q;
        if (raw == marker && ext != Ext::After) {
          if (S.eff_acc(q)) {
            row[TOT] = banked_total(q, marker);
            reset_child_regs(row, S, 0);
          } else {
            row[TOT] = fail_total(marker);
            reset_child_regs(row, S, 0);
          }
          nx = ext == Ext::Map ? St{5, 0} : St{1, 0};
        } else if (raw == fail) {
          nx = {2, 0};
        } else {
          int sym = S.sym_for(raw, slook);
          place_child_updates(row, S, q, sym, 0);
          nx = {0, S.step(q, sym)};
        }
      } else if (st.mode == 2) {
        if (raw == marker && ext != Ext::After) {
          row[TOT] = fail_total(marker);
          nx = ext == Ext::Map ? St{5, 0} : St{1, 0};
        } else {
          nx = {2, 0};
        }
      } else if (st.mode == 1) {  // Before: echo tail verbatim
        row[TOT] = echo_total(raw);
        nx = {1, 0};
      } else if (st.mode == 3) {  // After: echo head up to the first marker
        row[TOT] = echo_total(raw);
        nx = raw == marker ? St{0, s.m.start} : St{3, 0};
      }
      b.m.delta[qi][sy] = get(nx);
      b.m.mu[qi][sy] = std::move(row);
    }
  }
  return b.finish();
}

}  // namespace

namespace {

// Final machines for marked pipelines. Input layouts:
//   split:   u @ v      f on u (look reset at marker), g on v
//   product: u @ v      both regions are copies of σ
//   iter:    u1@…uk@    f on each segment
Stage final_split(K kind, const Stage& f0, const Stage& g0,
                  const std::string& marker, const std::string& fail,
                  const std::vector<std::string>& sigma) {
  Stage fs = extend_stage(replain_or_self(f0), sigma);
  Stage gs = extend_stage(replain_or_self(g0), sigma);
  const MonoidSpec mono = fs.m.monoid;
  std::vector<Dfa> comps = {next_symbol_automaton(sigma)};
  int fcomp = -1, gcomp = -1;
  if (fs.look) {
    fcomp = static_cast<int>(comps.size());
    comps.push_back(reset_on(*fs.look, marker));
  }
  if (gs.look) {
    gcomp = static_cast<int>(comps.size());
    comps.push_back(*gs.look);
  }
  LookInfo li = look_product(sigma, comps);
  ChildSim F = ChildSim::of(fs), G = ChildSim::of(gs);
  int nf = F.nregs(), ng = G.nregs();
  int TOT = nf + ng;
  int R = TOT + 1;

  // modes: 0 = f region, 1 = g region, 2 = dead
  struct St {
    int mode, q;
    bool operator<(const St& o) const {
      return std::tie(mode, q) < std::tie(o.mode, o.q);
    }
  };
  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(TOT, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;
  std::map<St, int> id;
  std::vector<St> stack;
  auto get = [&](St st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  b.m.start = get({0, fs.m.start});
  size_t nsym = b.m.alphabet.size();

  for (size_t qi = 0; qi < stack.size(); ++qi) {
    St st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool acc = false;
    UpdateExpr nu;
    if (st.mode == 1 && G.eff_acc(st.q)) {
      acc = true;
      UpdateExpr gval = remap_regs(G.bank(st.q, mono), nf);
      if (kind == K::SplitSum) {
        nu = UpdateExpr::reg(TOT);
        nu.append(gval);
      } else {
        nu = gval;
        nu.append_reg(TOT);
      }
      nu = canonicalize(nu, mono);
    }
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(acc ? nu : UpdateExpr{});
    for (size_t sy = 0; sy < nsym; ++sy) {
      std::string raw = li.next[sy];
      int flook = fcomp >= 0 ? li.comp[sy][fcomp] : -1;
      int glook = gcomp >= 0 ? li.comp[sy][gcomp] : -1;
      std::vector<UpdateExpr> row = identity_row(R);
      St nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else if (st.mode == 2) {
        nx = {2, 0};
      } else if (st.mode == 0) {
        if (raw == marker) {
          if (F.eff_acc(st.q)) {
            row[TOT] = remap_regs(F.bank(st.q, mono), 0);
            reset_child_regs(row, F, 0);
            nx = {1, gs.m.start};
          } else {
            nx = {2, 0};
          }
        } else if (raw == fail) {
          nx = {2, 0};
        } else {
          int sf = F.sym_for(raw, flook);
          place_child_updates(row, F, st.q, sf, 0);
          nx = {0, F.step(st.q, sf)};
        }
      } else {
        if (raw == fail) {
          nx = {2, 0};
        } else {
          int sg = G.sym_for(raw, glook);
          for (int v = 0; v < ng; ++v)
            row[nf + v] = remap_regs(G.mu(st.q, sg)[v], nf);
          nx = {1, G.step(st.q, sg)};
        }
      }
      b.m.delta[qi][sy] = get(nx);
      b.m.mu[qi][sy] = std::move(row);
    }
  }
  return b.finish();
}

Stage final_product(K kind, const Stage& f0, const Stage& g0,
                    const std::string& marker, const std::string& fail,
                    const std::vector<std::string>& sigma) {
  Stage fs = extend_stage(replain_or_self(f0), sigma);
  Stage gs = extend_stage(replain_or_self(g0), sigma);
  const MonoidSpec mono = fs.m.monoid;
  std::vector<Dfa> comps = {next_symbol_automaton(sigma)};
  int fcomp = -1, gcomp = -1;
  if (fs.look) {
    fcomp = static_cast<int>(comps.size());
    comps.push_back(reset_on(*fs.look, marker));
  }
  if (gs.look) {
    gcomp = static_cast<int>(comps.size());
    comps.push_back(*gs.look);
  }
  LookInfo li = look_product(sigma, comps);
  ChildSim F = ChildSim::of(fs), G = ChildSim::of(gs);
  int nf = F.nregs(), ng = G.nregs();
  int TOT = nf + ng;
  int R = TOT + 1;

  // modes: 0 = f region, 1 = f region failed (consume to marker),
  //        2 = g region running, 3 = g region failed (consume), 4 = dead
  struct St {
    int mode, q;
    bool fok;
    bool operator<(const St& o) const {
      return std::tie(mode, q, fok) < std::tie(o.mode, o.q, o.fok);
    }
  };
  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(TOT, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;
  std::map<St, int> id;
  std::vector<St> stack;
  auto get = [&](St st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  b.m.start = get({0, fs.m.start, false});
  size_t nsym = b.m.alphabet.size();
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    St st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool acc = false;
    UpdateExpr nu;
    if (st.mode == 2 || st.mode == 3) {
      bool gok = st.mode == 2 && G.eff_acc(st.q);
      bool ok = kind == K::Sum ? (st.fok && gok) : (st.fok || gok);
      if (ok) {
        acc = true;
        if (kind == K::Sum) {
          nu = UpdateExpr::reg(TOT);
          nu.append(remap_regs(G.bank(st.q, mono), nf));
          nu = canonicalize(nu, mono);
        } else if (st.fok) {
          nu = UpdateExpr::reg(TOT);
        } else {
          nu = canonicalize(remap_regs(G.bank(st.q, mono), nf), mono);
        }
      }
    }
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(acc ? nu : UpdateExpr{});
    for (size_t sy = 0; sy < nsym; ++sy) {
      std::string raw = li.next[sy];
      int flook = fcomp >= 0 ? li.comp[sy][fcomp] : -1;
      int glook = gcomp >= 0 ? li.comp[sy][gcomp] : -1;
      std::vector<UpdateExpr> row = identity_row(R);
      St nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else if (st.mode == 4) {
        nx = {4, 0, false};
      } else if (st.mode == 0) {
        if (raw == marker) {
          bool ok = F.eff_acc(st.q);
          if (ok) row[TOT] = remap_regs(F.bank(st.q, mono), 0);
          reset_child_regs(row, F, 0);
          nx = {2, gs.m.start, ok};
        } else if (raw == fail) {
          nx = {1, 0, false};
        } else {
          int sf = F.sym_for(raw, flook);
          place_child_updates(row, F, st.q, sf, 0);
          nx = {0, F.step(st.q, sf), false};
        }
      } else if (st.mode == 1) {
        if (raw == marker)
          nx = {2, gs.m.start, false};
        else
          nx = {1, 0, false};
      } else if (st.mode == 2) {
        if (raw == fail) {
          nx = {3, 0, st.fok};
        } else {
          int sg = G.sym_for(raw, glook);
          for (int v = 0; v < ng; ++v)
            row[nf + v] = remap_regs(G.mu(st.q, sg)[v], nf);
          nx = {2, G.step(st.q, sg), st.fok};
        }
      } else if (st.mode == 3) {
        nx = {3, 0, st.fok};
      }
      b.m.delta[qi][sy] = get(nx);
      b.m.mu[qi][sy] = std::move(row);
    }
  }
  return b.finish();
}

Stage final_iter(K kind, const Stage& f0, const std::string& marker,
                 const std::string& fail,
                 const std::vector<std::string>& sigma) {
  Stage fs = extend_stage(replain_or_self(f0), sigma);
  const MonoidSpec mono = fs.m.monoid;
  std::vector<Dfa> comps = {next_symbol_automaton(sigma)};
  int fcomp = -1;
  if (fs.look) {
    fcomp = static_cast<int>(comps.size());
    comps.push_back(reset_on(*fs.look, marker));
  }
  LookInfo li = look_product(sigma, comps);
  ChildSim F = ChildSim::of(fs);
  int nf = F.nregs();
  int TOT = nf;
  int R = nf + 1;

  // modes: 0 = at segment boundary, 1 = inside segment, 2 = dead
  struct St {
    int mode, q;
    bool operator<(const St& o) const {
      return std::tie(mode, q) < std::tie(o.mode, o.q);
    }
  };
  Builder b;
  b.m.alphabet = label_alphabet(li.d);
  b.m.registers = numbered_regs(nf, true);
  b.m.monoid = mono;
  b.look = li.d;
  b.label_next = li.next;
  std::map<St, int> id;
  std::vector<St> stack;
  auto get = [&](St st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  b.m.start = get({0, fs.m.start});
  size_t nsym = b.m.alphabet.size();
  auto appended_total = [&](const UpdateExpr& piece) {
    UpdateExpr total;
    if (kind == K::IterSum) {
      total = UpdateExpr::reg(TOT);
      total.append(piece);
    } else {
      total = piece;
      total.append_reg(TOT);
    }
    return canonicalize(total, mono);
  };
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    St st = stack[qi];
    b.m.states.push_back("p" + std::to_string(qi));
    b.m.delta.emplace_back(nsym, -1);
    b.m.mu.emplace_back(nsym, std::vector<UpdateExpr>());
    bool acc = st.mode == 0;
    b.m.accepting.push_back(acc ? 1 : 0);
    b.m.nu.push_back(acc ? UpdateExpr::reg(TOT) : UpdateExpr{});
    for (size_t sy = 0; sy < nsym; ++sy) {
      std::string raw = li.next[sy];
      int flook = fcomp >= 0 ? li.comp[sy][fcomp] : -1;
      std::vector<UpdateExpr> row = identity_row(R);
      St nx = st;
      if (raw.empty()) {
        nx = st;  // end label: no-op
      } else if (st.mode == 2) {
        nx = {2, 0};
      } else if (raw == fail) {
        nx = {2, 0};
      } else if (raw == marker) {
        if (F.eff_acc(st.q)) {
          row[TOT] = appended_total(remap_regs(F.bank(st.q, mono), 0));
          reset_child_regs(row, F, 0);
          nx = {0, fs.m.start};
        } else {
          nx = {2, 0};
        }
      } else {
        int sf = F.sym_for(raw, flook);
        if (st.mode == 0) {
          // registers were reset at the previous boundary, so a literal read
          // of the child's updates starts the new run correctly
          place_child_updates(row, F, fs.m.start, sf, 0);
          nx = {1, F.step(fs.m.start, sf)};
        } else {
          place_child_updates(row, F, st.q, sf, 0);
          nx = {1, F.step(st.q, sf)};
        }
      }
      b.m.delta[qi][sy] = get(nx);
      b.m.mu[qi][sy] = std::move(row);
    }
  }
  return b.finish();
}

}  // namespace

// ---- the compiler ----

namespace {

ExprPtr extend_expr(const ExprPtr& e, const std::vector<std::string>& sigma) {
  if (e->alphabet == sigma) return e;
  switch (e->kind) {
    case K::Const: {
      auto d = std::make_shared<Dfa>(dfa_extend_alphabet(*e->lang, sigma));
      MonoidSpec mono = e->monoid;
      if (mono.kind == MonoidKind::Str && mono.alphabet == e->alphabet)
        mono.alphabet = sigma;
      return make_const(sigma, mono, d, e->value, e->lang_text);
    }
    case K::ChainedSum:
    case K::LeftChainedSum: {
      auto d = std::make_shared<Dfa>(dfa_extend_alphabet(*e->chain_lang, sigma));
      return make_chained(e->kind, extend_expr(e->f, sigma), d,
                          e->chain_lang_text);
    }
    case K::Reverse:
    case K::IterSum:
    case K::LeftIterSum:
      return make_unary(e->kind, extend_expr(e->f, sigma));
    case K::Compose:
      return make_compose(e->f, extend_expr(e->g, sigma));
    default:
      return make_binary(e->kind, extend_expr(e->f, sigma),
                         extend_expr(e->g, sigma));
  }
}

std::vector<std::string> cascade_symbols(const Cascade& c) {
  std::set<std::string> out;
  for (const auto& s : c.stages)
    for (const auto& sym : s.input_alphabet()) out.insert(sym);
  if (!c.stages.empty()) {
    const auto& last = c.stages.back();
    for (const auto& sym : last.m.monoid.alphabet) out.insert(sym);
  }
  return {out.begin(), out.end()};
}

}  // namespace

Cascade Compiler::go(const ExprPtr& e) {
  switch (e->kind) {
    case K::Const: {
      Cascade c;
      c.stages.push_back(compile_base(*e->lang, e->value, e->monoid));
      return c;
    }
    case K::Reverse: {
      Cascade c;
      c.stages.push_back(reversal_stage(e->alphabet));
      Cascade body = go(e->f);
      for (auto& s : body.stages) c.stages.push_back(std::move(s));
      return c;
    }
    case K::Compose: {
      Cascade c = go(e->g);
      Cascade outer = go(e->f);
      for (auto& s : outer.stages) c.stages.push_back(std::move(s));
      return c;
    }
    case K::Choice:
    case K::Sum: {
      Cascade cf = go(e->f), cg = go(e->g);
      if (cf.stages.size() == 1 && cg.stages.size() == 1)
        return Cascade{{compile_product(e->kind, cf.stages[0], cg.stages[0])}};
      // marked pipeline: σ -> σ@σ, region-extend preps, combine at the end
      std::string mk = fresh_marker();
      std::string fail_sym = fresh_marker();
      std::vector<std::string> base = e->alphabet;
      ExprPtr cm = copymark_expr(e->alphabet, mk, base);
      Cascade out = go(cm);
      std::set<std::string> symset;
      for (const auto& s : e->alphabet) symset.insert(s);
      symset.insert(mk);
      symset.insert(fail_sym);
      for (const auto& c : {std::cref(cf), std::cref(cg)})
        for (const auto& sym : cascade_symbols(c.get())) symset.insert(sym);
      std::vector<std::string> sigma(symset.begin(), symset.end());
      for (size_t i = 0; i + 1 < cf.stages.size(); ++i)
        out.stages.push_back(
            region_extend(cf.stages[i], Ext::Before, mk, fail_sym, sigma));
      for (size_t i = 0; i + 1 < cg.stages.size(); ++i)
        out.stages.push_back(
            region_extend(cg.stages[i], Ext::After, mk, fail_sym, sigma));
      out.stages.push_back(final_product(e->kind, cf.stages.back(),
                                         cg.stages.back(), mk, fail_sym,
                                         sigma));
      return out;
    }
    case K::SplitSum:
    case K::LeftSplitSum: {
      Cascade cf = go(e->f), cg = go(e->g);
      Dfa lf = domain_dfa(e->f), lg = domain_dfa(e->g);
      if (cf.stages.size() == 1 && cg.stages.size() == 1) {
        Stage fp = replain_or_self(cf.stages[0]);
        if (!fp.look)
          return Cascade{{compile_split(e->kind, fp, cg.stages[0], lf, lg)}};
      }
      std::string mk = fresh_marker();
      std::string fail_sym = fresh_marker();
      ExprPtr sm = splitmark_expr(e->alphabet, lf, lg, mk, e->alphabet);
      Cascade out = go(sm);
      std::set<std::string> symset;
      for (const auto& s : e->alphabet) symset.insert(s);
      symset.insert(mk);
      symset.insert(fail_sym);
      for (const auto& c : {std::cref(cf), std::cref(cg)})
        for (const auto& sym : cascade_symbols(c.get())) symset.insert(sym);
      std::vector<std::string> sigma(symset.begin(), symset.end());
      for (size_t i = 0; i + 1 < cf.stages.size(); ++i)
        out.stages.push_back(
            region_extend(cf.stages[i], Ext::Before, mk, fail_sym, sigma));
      for (size_t i = 0; i + 1 < cg.stages.size(); ++i)
        out.stages.push_back(
            region_extend(cg.stages[i], Ext::After, mk, fail_sym, sigma));
      out.stages.push_back(final_split(e->kind, cf.stages.back(),
                                       cg.stages.back(), mk, fail_sym, sigma));
      return out;
    }
    case K::IterSum:
    case K::LeftIterSum: {
      Cascade cf = go(e->f);
      Dfa lf = domain_dfa(e->f);
      if (cf.stages.size() == 1) {
        Stage fp = replain_or_self(cf.stages[0]);
        if (!fp.look) return Cascade{{compile_iter(e->kind, fp, lf)}};
      }
      std::string mk = fresh_marker();
      std::string fail_sym = fresh_marker();
      ExprPtr pm = piecemark_expr(e->alphabet, lf, mk, e->alphabet);
      Cascade out = go(pm);
      std::set<std::string> symset;
      for (const auto& s : e->alphabet) symset.insert(s);
      symset.insert(mk);
      symset.insert(fail_sym);
      for (const auto& sym : cascade_symbols(cf)) symset.insert(sym);
      std::vector<std::string> sigma(symset.begin(), symset.end());
      for (size_t i = 0; i + 1 < cf.stages.size(); ++i)
        out.stages.push_back(
            region_extend(cf.stages[i], Ext::Map, mk, fail_sym, sigma));
      out.stages.push_back(
          final_iter(e->kind, cf.stages.back(), mk, fail_sym, sigma));
      return out;
    }
    case K::ChainedSum:
    case K::LeftChainedSum: {
      // Prop II.2 pipeline: Σ copy_L ; drop_L ; ensurelen ; Σ(f ⊕ @/ε)
      std::string mk = fresh_marker();
      std::vector<std::string> sigma = e->alphabet;
      std::vector<std::string> sigma_mk = sigma;
      sigma_mk.push_back(mk);
      std::sort(sigma_mk.begin(), sigma_mk.end());
      MonoidSpec strm = MonoidSpec::strings(sigma_mk);

      ExprPtr idp = ident_expr(sigma, sigma);
      auto lang = std::make_shared<Dfa>(*e->chain_lang);
      ExprPtr copy_piece = make_binary(
          K::Sum,
          make_binary(K::Sum, restrict_to(idp, lang),
                      const_expr(sigma, dfa_all(sigma), mk)),
          make_binary(K::Sum, restrict_to(ident_expr(sigma, sigma), lang),
                      const_expr(sigma, dfa_all(sigma), mk)));
      // copy_piece maps u∈L to u@u@; iterate over the L-decomposition
      ExprPtr stage1 = make_unary(K::IterSum, copy_piece);

      // over Σ∪{@}
      Dfa l_at = dfa_concat(dfa_extend_alphabet(*e->chain_lang, sigma_mk),
                            dfa_word(sigma_mk, {mk}));
      ExprPtr id_mk = ident_expr(sigma_mk, sigma_mk);
      ExprPtr id_base = ident_expr(sigma_mk, sigma);
      auto word_at = std::make_shared<Dfa>(dfa_word(sigma_mk, {mk}));
      ExprPtr mid = make_binary(
          K::SplitSum, id_base,
          make_binary(K::SplitSum,
                      make_const(sigma_mk, strm, word_at, MonoidValue::str(""),
                                 mk),
                      make_binary(K::SplitSum, id_base,
                                  make_const(sigma_mk, strm, word_at,
                                             MonoidValue::str(mk), mk))));
      auto l_at_ptr = std::make_shared<Dfa>(l_at);
      ExprPtr drop = make_binary(
          K::SplitSum,
          make_const(sigma_mk, strm, l_at_ptr, MonoidValue::str(""), ""),
          make_binary(K::SplitSum, make_unary(K::IterSum, mid),
                      make_const(sigma_mk, strm, l_at_ptr,
                                 MonoidValue::str(""), "")));
      ExprPtr ensure = make_binary(
          K::Sum, id_mk,
          make_const(sigma_mk, strm,
                     std::make_shared<Dfa>(dfa_nonempty(sigma_mk)),
                     MonoidValue::str(""), ""));
      ExprPtr body_mk = extend_expr(e->f, sigma_mk);
      ExprPtr inner = make_binary(
          K::SplitSum, body_mk,
          make_const(sigma_mk, body_mk->monoid, word_at,
                     body_mk->monoid.identity(), mk));
      ExprPtr stage4 = make_unary(
          e->kind == K::ChainedSum ? K::IterSum : K::LeftIterSum, inner);

      Cascade out = go(stage1);
      for (const auto& part : {drop, ensure, stage4}) {
        Cascade c = go(part);
        for (auto& s : c.stages) out.stages.push_back(std::move(s));
      }
      return out;
    }
  }
  throw CompileError("compile: unsupported node");
}

}  // namespace rca
