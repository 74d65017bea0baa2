#include "rca/shape.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace rca {

Shape shape_identity(int num_regs) {
  Shape s(num_regs);
  for (int v = 0; v < num_regs; ++v) s[v] = {v};
  return s;
}

Shape shape_of_transition(const Ccra& m, int state, int sym) {
  Shape s(m.registers.size());
  for (size_t v = 0; v < m.registers.size(); ++v)
    s[v] = m.mu[state][sym][v].registers();
  return s;
}

Shape shape_concat(const Shape& s1, const Shape& s2) {
  Shape out(s2.size());
  for (size_t v = 0; v < s2.size(); ++v)
    for (int u : s2[v])
      out[v].insert(out[v].end(), s1[u].begin(), s1[u].end());
  return out;
}

Shape shape_of_run(const Ccra& m, int state, const Word& sigma) {
  Shape acc = shape_identity(static_cast<int>(m.registers.size()));
  int q = state;
  for (const auto& sym : sigma) {
    int s = m.sym_index(sym);
    if (s < 0) throw std::invalid_argument("shape_of_run: bad symbol " + sym);
    acc = shape_concat(acc, shape_of_transition(m, q, s));
    q = m.delta[q][s];
  }
  return acc;
}

std::vector<int> shape_support(const Shape& s) {
  std::vector<int> out;
  for (size_t v = 0; v < s.size(); ++v)
    if (std::find(s[v].begin(), s[v].end(), static_cast<int>(v)) != s[v].end())
      out.push_back(static_cast<int>(v));
  return out;
}

ShapeOrd shape_order(const Shape& s1, const Shape& s2) {
  auto a = shape_support(s1), b = shape_support(s2);
  bool a_sub_b = std::includes(b.begin(), b.end(), a.begin(), a.end());
  bool b_sub_a = std::includes(a.begin(), a.end(), b.begin(), b.end());
  if (a_sub_b && b_sub_a) return ShapeOrd::EqualSupport;
  if (b_sub_a) return ShapeOrd::Less;     // supp(s1) ⊃ supp(s2)
  if (a_sub_b) return ShapeOrd::Greater;
  return ShapeOrd::Incomparable;
}

bool shape_copyless(const Shape& s) {
  std::vector<char> seen(s.size(), 0);
  for (const auto& row : s)
    for (int v : row) {
      if (seen[v]) return false;
      seen[v] = 1;
    }
  return true;
}

bool shape_is_normalized(const Shape& s) {
  std::vector<char> occurs(s.size(), 0);
  for (size_t u = 0; u < s.size(); ++u) {
    bool self = false;
    for (int v : s[u]) {
      if (v < static_cast<int>(u)) return false;
      if (v == static_cast<int>(u)) self = true;
      occurs[v] = 1;
    }
    if (!s[u].empty() && !self) return false;
  }
  for (size_t v = 0; v < s.size(); ++v)
    if (!occurs[v]) return false;
  return true;
}

std::string shape_to_string(const Shape& s,
                            const std::vector<std::string>& registers) {
  std::string out = "{";
  for (size_t v = 0; v < s.size(); ++v) {
    if (v) out += ", ";
    out += registers[v] + ":";
    for (int u : s[v]) out += registers[u];
  }
  return out + "}";
}

Dfa shape_language(const Ccra& m, int q, int q2, int level,
                   const std::function<bool(const Shape&)>& pred,
                   const std::optional<std::vector<int>>& block_class_support) {
  // Deterministic product of the machine's state graph with shape
  // accumulation. `pending` marks a state outside the allowed interior set:
  // continuing from it kills the run, ending on it is fine. `blocked` marks
  // a premature support-equal visit of q2 when L_first filtering is on.
  struct St {
    int state;
    Shape acc;
    bool pending;
    bool blocked;
    bool dead;
    bool operator<(const St& o) const {
      return std::tie(state, acc, pending, blocked, dead) <
             std::tie(o.state, o.acc, o.pending, o.blocked, o.dead);
    }
  };
  auto allowed = [&](int s) { return s < level; };
  std::map<St, int> id;
  std::vector<St> stack;
  auto get = [&](const St& st) {
    auto it = id.find(st);
    if (it != id.end()) return it->second;
    int v = static_cast<int>(id.size());
    id[st] = v;
    stack.push_back(st);
    return v;
  };
  Dfa d;
  d.alphabet = m.alphabet;
  int R = static_cast<int>(m.registers.size());
  d.start = get({q, shape_identity(R), false, false, false});
  std::vector<std::vector<int>> rows;
  std::vector<char> acc;
  auto supp_equal = [&](const Shape& s) {
    if (!block_class_support) return false;
    return shape_support(s) == *block_class_support;
  };
  for (size_t qi = 0; qi < stack.size(); ++qi) {
    St st = stack[qi];
    bool ok = !st.dead && st.state == q2 && pred(st.acc);
    acc.push_back(ok ? 1 : 0);
    std::vector<int> row(m.alphabet.size());
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      St nx = st;
      if (st.dead || st.pending || st.blocked) {
        nx = {0, Shape(R), false, false, true};
      } else {
        nx.state = m.delta[st.state][s];
        nx.acc = shape_concat(st.acc, shape_of_transition(m, st.state,
                                                          static_cast<int>(s)));
        nx.pending = !allowed(nx.state);
        nx.blocked = nx.state == q2 && supp_equal(nx.acc);
        nx.dead = false;
      }
      row[s] = get(nx);
    }
    rows.push_back(std::move(row));
  }
  d.num_states = static_cast<int>(rows.size());
  d.accepting = std::move(acc);
  d.next = std::move(rows);
  return dfa_reduce(d);
}

Dfa strings_with_shape(const Ccra& m, int q, int q2, const Shape& s,
                       int level) {
  return shape_language(m, q, q2, level, [&](const Shape& t) { return t == s; });
}

}  // namespace rca
