#include "rca/machine_io.hpp"

#include <json.hpp>

#include <stdexcept>

namespace rca {

using nlohmann::json;

namespace {

MonoidSpec monoid_of(const json& j) {
  std::string kind = j.value("monoid", "str");
  if (kind == "int") return MonoidSpec::integers();
  if (kind == "str") return MonoidSpec::strings();
  throw std::invalid_argument("machine json: monoid must be str or int");
}

MonoidValue const_of(const json& j, const MonoidSpec& m) {
  if (m.kind == MonoidKind::Int) {
    if (j.is_number_integer()) return MonoidValue::integer(j.get<long long>());
    if (j.is_string()) return MonoidValue::integer(BigInt(j.get<std::string>()));
    throw std::invalid_argument("machine json: integer constant expected");
  }
  if (!j.is_string())
    throw std::invalid_argument("machine json: string constant expected");
  return MonoidValue::str(j.get<std::string>());
}

json const_to_json(const MonoidValue& v) {
  if (v.tag() == MonoidValue::Tag::Int) return v.int_value().str();
  return v.str_value();
}

int index_of(const std::vector<std::string>& xs, const std::string& x,
             const char* what) {
  for (size_t i = 0; i < xs.size(); ++i)
    if (xs[i] == x) return static_cast<int>(i);
  throw std::invalid_argument(std::string("machine json: unknown ") + what +
                              ": " + x);
}

struct Core {
  std::vector<std::string> states, alphabet, registers;
  int start;
  std::vector<char> accepting;
  std::vector<std::vector<int>> delta;
  MonoidSpec monoid;
};

Core load_core(const json& j) {
  Core c;
  c.monoid = monoid_of(j);
  c.states = j.at("states").get<std::vector<std::string>>();
  c.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  c.registers = j.value("registers", std::vector<std::string>{});
  c.start = index_of(c.states, j.at("start").get<std::string>(), "state");
  c.accepting.assign(c.states.size(), 0);
  for (const auto& s : j.at("accepting"))
    c.accepting[index_of(c.states, s.get<std::string>(), "state")] = 1;
  c.delta.assign(c.states.size(), std::vector<int>(c.alphabet.size(), -1));
  for (const auto& t : j.at("delta")) {
    int from = index_of(c.states, t.at("from").get<std::string>(), "state");
    int sym = index_of(c.alphabet, t.at("symbol").get<std::string>(), "symbol");
    int to = index_of(c.states, t.at("to").get<std::string>(), "state");
    if (c.delta[from][sym] != -1)
      throw std::invalid_argument("machine json: duplicate transition");
    c.delta[from][sym] = to;
  }
  for (size_t q = 0; q < c.states.size(); ++q)
    for (size_t s = 0; s < c.alphabet.size(); ++s)
      if (c.delta[q][s] < 0)
        throw std::invalid_argument("machine json: delta not total at " +
                                    c.states[q] + "/" + c.alphabet[s]);
  return c;
}

UpdateExpr rhs_of(const json& j, const Core& c) {
  UpdateExpr u;
  for (const auto& tok : j) {
    if (tok.contains("reg"))
      u.append_reg(index_of(c.registers, tok.at("reg").get<std::string>(),
                            "register"));
    else if (tok.contains("const"))
      u.append_const(const_of(tok.at("const"), c.monoid));
    else
      throw std::invalid_argument("machine json: rhs token needs reg or const");
  }
  return canonicalize(u, c.monoid);
}

}  // namespace

Ccra load_ccra_json(const std::string& text) {
  json j = json::parse(text);
  Core c = load_core(j);
  Ccra m;
  m.states = c.states;
  m.alphabet = c.alphabet;
  m.registers = c.registers;
  m.start = c.start;
  m.accepting = c.accepting;
  m.delta = c.delta;
  m.monoid = c.monoid;
  size_t R = m.registers.size();
  m.mu.assign(m.states.size(),
              std::vector<std::vector<UpdateExpr>>(m.alphabet.size()));
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      m.mu[q][s].resize(R);
      for (size_t v = 0; v < R; ++v)
        m.mu[q][s][v] = UpdateExpr::reg(static_cast<int>(v));
    }
  for (const auto& u : j.value("mu", json::array())) {
    int q = index_of(m.states, u.at("state").get<std::string>(), "state");
    int s = index_of(m.alphabet, u.at("symbol").get<std::string>(), "symbol");
    int v = index_of(m.registers, u.at("register").get<std::string>(),
                     "register");
    m.mu[q][s][v] = rhs_of(u.at("rhs"), c);
  }
  m.nu.assign(m.states.size(), UpdateExpr{});
  for (const auto& o : j.at("nu")) {
    int q = index_of(m.states, o.at("state").get<std::string>(), "state");
    m.nu[q] = rhs_of(o.at("rhs"), c);
    if (!m.accepting[q])
      throw std::invalid_argument("machine json: nu on non-accepting state");
  }
  for (size_t q = 0; q < m.states.size(); ++q)
    if (m.accepting[q] && !j.at("nu").empty()) {
      bool found = false;
      for (const auto& o : j.at("nu"))
        if (index_of(m.states, o.at("state").get<std::string>(), "state") ==
            static_cast<int>(q))
          found = true;
      if (!found)
        throw std::invalid_argument("machine json: accepting state " +
                                    m.states[q] + " lacks nu");
    }
  m.check();
  auto viol = validate_copyless(m);
  if (!viol.empty())
    throw std::invalid_argument("machine json: not copyless: " + viol[0].where);
  return m;
}

Acra load_acra_json(const std::string& text) {
  json j = json::parse(text);
  Core c = load_core(j);
  Acra m;
  m.states = c.states;
  m.alphabet = c.alphabet;
  m.registers = c.registers;
  m.start = c.start;
  m.accepting = c.accepting;
  m.delta = c.delta;
  m.monoid = c.monoid;
  size_t R = m.registers.size();
  m.mu.assign(m.states.size(),
              std::vector<std::vector<std::pair<int, MonoidValue>>>(
                  m.alphabet.size()));
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s) {
      m.mu[q][s].resize(R);
      for (size_t v = 0; v < R; ++v)
        m.mu[q][s][v] = {static_cast<int>(v), m.monoid.identity()};
    }
  auto pair_of = [&](const json& rhs) {
    int src = -1;
    MonoidValue d = m.monoid.identity();
    bool have_reg = false;
    for (const auto& tok : rhs) {
      if (tok.contains("reg")) {
        if (have_reg)
          throw std::invalid_argument("acra json: rhs needs exactly one register");
        src = index_of(m.registers, tok.at("reg").get<std::string>(), "register");
        have_reg = true;
      } else if (tok.contains("const")) {
        d = mplus(d, const_of(tok.at("const"), c.monoid));
      }
    }
    if (!have_reg)
      throw std::invalid_argument("acra json: rhs needs exactly one register");
    return std::make_pair(src, d);
  };
  for (const auto& u : j.value("mu", json::array())) {
    int q = index_of(m.states, u.at("state").get<std::string>(), "state");
    int s = index_of(m.alphabet, u.at("symbol").get<std::string>(), "symbol");
    int v = index_of(m.registers, u.at("register").get<std::string>(),
                     "register");
    m.mu[q][s][v] = pair_of(u.at("rhs"));
  }
  m.nu.assign(m.states.size(), {0, m.monoid.identity()});
  for (const auto& o : j.at("nu")) {
    int q = index_of(m.states, o.at("state").get<std::string>(), "state");
    m.nu[q] = pair_of(o.at("rhs"));
  }
  m.check();
  return m;
}

namespace {
json update_to_json(const UpdateExpr& u, const Ccra& m) {
  json rhs = json::array();
  for (const auto& t : u.toks) {
    if (t.is_reg)
      rhs.push_back({{"reg", m.registers[t.reg]}});
    else
      rhs.push_back({{"const", const_to_json(t.c)}});
  }
  return rhs;
}

json ccra_to_json(const Ccra& m) {
  json j;
  j["kind"] = "ccra";
  j["monoid"] = m.monoid.kind == MonoidKind::Int ? "int" : "str";
  j["states"] = m.states;
  j["alphabet"] = m.alphabet;
  j["registers"] = m.registers;
  j["start"] = m.states[m.start];
  json acc = json::array();
  for (size_t q = 0; q < m.states.size(); ++q)
    if (m.accepting[q]) acc.push_back(m.states[q]);
  j["accepting"] = acc;
  json delta = json::array();
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s)
      delta.push_back({{"from", m.states[q]},
                       {"symbol", m.alphabet[s]},
                       {"to", m.states[m.delta[q][s]]}});
  j["delta"] = delta;
  json mu = json::array();
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s)
      for (size_t v = 0; v < m.registers.size(); ++v) {
        const auto& u = m.mu[q][s][v];
        bool identity = u.toks.size() == 1 && u.toks[0].is_reg &&
                        u.toks[0].reg == static_cast<int>(v);
        if (identity) continue;
        mu.push_back({{"state", m.states[q]},
                      {"symbol", m.alphabet[s]},
                      {"register", m.registers[v]},
                      {"rhs", update_to_json(u, m)}});
      }
  j["mu"] = mu;
  json nu = json::array();
  for (size_t q = 0; q < m.states.size(); ++q)
    if (m.accepting[q])
      nu.push_back({{"state", m.states[q]}, {"rhs", update_to_json(m.nu[q], m)}});
  j["nu"] = nu;
  return j;
}

json dfa_to_json(const Dfa& d) {
  json j;
  j["alphabet"] = d.alphabet;
  j["num_states"] = d.num_states;
  j["start"] = d.start;
  json acc = json::array();
  for (int q = 0; q < d.num_states; ++q)
    if (d.accepting[q]) acc.push_back(q);
  j["accepting"] = acc;
  json delta = json::array();
  for (int q = 0; q < d.num_states; ++q)
    for (size_t s = 0; s < d.alphabet.size(); ++s)
      delta.push_back({{"from", q}, {"symbol", d.alphabet[s]}, {"to", d.next[q][s]}});
  j["delta"] = delta;
  return j;
}

Dfa dfa_from_json(const json& j) {
  Dfa d;
  d.alphabet = j.at("alphabet").get<std::vector<std::string>>();
  d.num_states = j.at("num_states").get<int>();
  d.start = j.at("start").get<int>();
  d.accepting.assign(d.num_states, 0);
  for (const auto& q : j.at("accepting")) d.accepting[q.get<int>()] = 1;
  d.next.assign(d.num_states, std::vector<int>(d.alphabet.size(), -1));
  for (const auto& t : j.at("delta")) {
    int s = -1;
    for (size_t i = 0; i < d.alphabet.size(); ++i)
      if (d.alphabet[i] == t.at("symbol").get<std::string>())
        s = static_cast<int>(i);
    d.next[t.at("from").get<int>()][s] = t.at("to").get<int>();
  }
  d.check();
  return d;
}
}  // namespace

std::string save_ccra_json(const Ccra& m) { return ccra_to_json(m).dump(2); }

std::string save_cascade_json(const Cascade& c) {
  json j;
  j["stages"] = json::array();
  for (const auto& st : c.stages) {
    json s = ccra_to_json(st.m);
    if (st.look) {
      s["lookahead"] = dfa_to_json(*st.look);
      s["label_next"] = st.label_next;
    }
    j["stages"].push_back(s);
  }
  return j.dump(2);
}

Cascade load_cascade_json(const std::string& text) {
  json j = json::parse(text);
  Cascade c;
  for (const auto& s : j.at("stages")) {
    Stage st;
    st.m = load_ccra_json(s.dump());
    if (s.contains("lookahead")) {
      st.look = dfa_from_json(s.at("lookahead"));
      st.label_next = s.value("label_next", std::vector<std::string>{});
    }
    c.stages.push_back(std::move(st));
  }
  return c;
}

bool json_is_cascade(const std::string& text) {
  json j = json::parse(text);
  return j.contains("stages");
}

bool json_is_acra(const std::string& text) {
  json j = json::parse(text);
  return j.value("kind", "ccra") == "acra";
}

}  // namespace rca
