#include "rca/extract_comm.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace rca {

FlowNfa acra_to_flow_nfa(const Acra& m) {
  if (!m.monoid.commutative())
    throw std::invalid_argument("acra_to_flow_nfa: monoid must be commutative");
  FlowNfa out;
  int V = static_cast<int>(m.registers.size());
  int Q = static_cast<int>(m.states.size());
  auto enc = [&](int q, int v) { return q * V + v; };

  std::map<std::pair<int, MonoidValue::Tag>, int> dummy;  // not used; letters below
  std::map<std::pair<std::string, std::string>, int> letter_id;
  auto letter = [&](int sym, const MonoidValue& d) {
    std::string name = m.alphabet[sym] + "_" + (d.tag() == MonoidValue::Tag::Int
                                                    ? d.int_value().str()
                                                    : d.str_value());
    auto key = std::make_pair(m.alphabet[sym], name);
    auto it = letter_id.find(key);
    if (it != letter_id.end()) return it->second;
    int id = static_cast<int>(out.nfa.alphabet.size());
    letter_id[key] = id;
    out.nfa.alphabet.push_back(name);
    out.letter_info.push_back({m.alphabet[sym], d});
    return id;
  };

  out.nfa.num_states = Q * V;
  out.nfa.accepting.assign(Q * V, 0);
  out.nfa.edges.assign(Q * V, {});
  for (int q = 0; q < Q; ++q)
    for (int v = 0; v < V; ++v) out.state_info.push_back({q, v});
  for (int v = 0; v < V; ++v) out.nfa.starts.push_back(enc(m.start, v));
  for (int q = 0; q < Q; ++q) {
    if (m.accepting[q]) out.nfa.accepting[enc(q, m.nu[q].first)] = 1;
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      int q2 = m.delta[q][s];
      for (int tgt = 0; tgt < V; ++tgt) {
        const auto& [src, d] = m.mu[q][s][tgt];
        out.nfa.edges[enc(q, src)].push_back(
            {letter(static_cast<int>(s), d), enc(q2, tgt)});
      }
    }
  }
  // state_info was appended per (q,v) in encoding order
  return out;
}

namespace {

ExprPtr regex_to_expr(const Regex& r, const std::vector<std::string>& sigma,
                      const MonoidSpec& mono,
                      const std::map<std::string, std::pair<std::string, MonoidValue>>&
                          letters) {
  switch (r.kind) {
    case Regex::Kind::Empty: {
      auto d = std::make_shared<Dfa>(dfa_empty(sigma));
      return make_const(sigma, mono, d, mono.identity(), "{}");
    }
    case Regex::Kind::Eps: {
      auto d = std::make_shared<Dfa>(dfa_epsilon(sigma));
      return make_const(sigma, mono, d, mono.identity(), "()");
    }
    case Regex::Kind::Sym: {
      auto it = letters.find(r.sym);
      if (it == letters.end())
        throw std::logic_error("extract: unknown flow letter " + r.sym);
      auto d = std::make_shared<Dfa>(dfa_word(sigma, {it->second.first}));
      return make_const(sigma, mono, d, it->second.second, it->second.first);
    }
    case Regex::Kind::Union:
      return make_binary(FuncExpr::Kind::Choice,
                         regex_to_expr(*r.a, sigma, mono, letters),
                         regex_to_expr(*r.b, sigma, mono, letters));
    case Regex::Kind::Concat:
      return make_binary(FuncExpr::Kind::SplitSum,
                         regex_to_expr(*r.a, sigma, mono, letters),
                         regex_to_expr(*r.b, sigma, mono, letters));
    case Regex::Kind::Star:
      return make_unary(FuncExpr::Kind::IterSum,
                        regex_to_expr(*r.a, sigma, mono, letters));
  }
  throw std::logic_error("extract: bad regex");
}

}  // namespace

ExprPtr extract_commutative(const Acra& m) {
  if (!m.monoid.commutative())
    throw std::invalid_argument("extract_commutative: monoid must be commutative");
  FlowNfa flow = acra_to_flow_nfa(m);
  if (!nfa_is_unambiguous(flow.nfa))
    throw std::invalid_argument(
        "extract_commutative: flow NFA is ambiguous (non-conforming machine)");
  auto table = state_elimination_table(flow.nfa);

  std::map<std::string, std::pair<std::string, MonoidValue>> letters;
  for (size_t i = 0; i < flow.nfa.alphabet.size(); ++i)
    letters[flow.nfa.alphabet[i]] = flow.letter_info[i];

  int V = static_cast<int>(m.registers.size());

  // ▷-union over (start register, accept state, accept register), ordered
  // lexicographically; domains are disjoint by flow unambiguity.
  struct Pair {
    int v0, qf, vf;
  };
  std::vector<Pair> pairs;
  for (int v0 = 0; v0 < V; ++v0)
    for (int qf = 0; qf < static_cast<int>(m.states.size()); ++qf)
      if (m.accepting[qf]) pairs.push_back({v0, qf, m.nu[qf].first});

  ExprPtr acc;
  auto enc = [&](int q, int v) { return q * V + v; };
  for (const auto& p : pairs) {
    RegexPtr r = table[enc(m.start, p.v0)][enc(p.qf, p.vf)];
    // ε-path: start state doubles as an accepting state
    if (enc(m.start, p.v0) == enc(p.qf, p.vf))
      r = Regex::make_union(Regex::eps(), r);
    if (r->kind == Regex::Kind::Empty) continue;
    ExprPtr e = regex_to_expr(*r, m.alphabet, m.monoid, letters);
    const MonoidValue& offset = m.nu[p.qf].second;
    if (!(offset == m.monoid.identity())) {
      auto d = std::make_shared<Dfa>(dfa_epsilon(m.alphabet));
      ExprPtr off = make_const(m.alphabet, m.monoid, d, offset, "()");
      e = make_binary(FuncExpr::Kind::SplitSum, e, off);
    }
    acc = acc ? make_binary(FuncExpr::Kind::Choice, acc, e) : e;
  }
  if (!acc) return make_bottom(m.alphabet, m.monoid);
  return acc;
}

}  // namespace rca
