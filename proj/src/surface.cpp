#include "rca/surface.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <memory>
#include <set>

namespace rca {

namespace {

// Intermediate tree: regex literals and values stay raw so that the alphabet
// and monoid can be settled before constants are built.
struct Surf;
using SurfPtr = std::shared_ptr<const Surf>;
struct Surf {
  FuncExpr::Kind kind = FuncExpr::Kind::Const;
  std::string regex_text;   // Const
  std::string value_raw;    // Const; quoted values keep their quotes
  std::string chain_text;   // ChainedSum family
  SurfPtr f, g;
};

bool is_regex_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '#' || c == '@' ||
         c == '_' || c == '$' || c == '.' || c == '|' || c == '*' || c == '?' ||
         c == '+' || c == '(' || c == ')' || c == '{' || c == '}';
}

struct Parser {
  const std::string& text;
  size_t pos = 0;
  std::map<std::string, SurfPtr> env;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, pos);
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= text.size();
  }
  bool lit(const std::string& s) {
    skip_ws();
    if (text.compare(pos, s.size(), s) == 0) {
      pos += s.size();
      return true;
    }
    return false;
  }
  bool peek_lit(const std::string& s) {
    skip_ws();
    return text.compare(pos, s.size(), s) == 0;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    if (pos == start) fail("expected identifier");
    return text.substr(start, pos - start);
  }
  bool peek_word(const std::string& w) {
    skip_ws();
    if (text.compare(pos, w.size(), w) != 0) return false;
    size_t after = pos + w.size();
    if (after < text.size() &&
        (std::isalnum(static_cast<unsigned char>(text[after])) ||
         text[after] == '_'))
      return false;
    return true;
  }
  bool word(const std::string& w) {
    if (!peek_word(w)) return false;
    pos += w.size();
    return true;
  }

  SurfPtr parse_expr() { return parse_choice(); }

  SurfPtr parse_choice() {
    SurfPtr r = parse_sum();
    while (lit("|>")) {
      auto e = std::make_shared<Surf>();
      e->kind = FuncExpr::Kind::Choice;
      e->f = r;
      e->g = parse_sum();
      r = e;
    }
    return r;
  }

  SurfPtr parse_sum() {
    SurfPtr r = parse_split();
    while (true) {
      skip_ws();
      // `+` only when not the start of `(+)`-like tokens (handled in split)
      if (pos < text.size() && text[pos] == '+') {
        ++pos;
        auto e = std::make_shared<Surf>();
        e->kind = FuncExpr::Kind::Sum;
        e->f = r;
        e->g = parse_split();
        r = e;
      } else {
        break;
      }
    }
    return r;
  }

  SurfPtr parse_split() {
    SurfPtr r = parse_prefix();
    while (true) {
      if (lit("(+)")) {
        auto e = std::make_shared<Surf>();
        e->kind = FuncExpr::Kind::SplitSum;
        e->f = r;
        e->g = parse_prefix();
        r = e;
      } else if (lit("(<+)")) {
        auto e = std::make_shared<Surf>();
        e->kind = FuncExpr::Kind::LeftSplitSum;
        e->f = r;
        e->g = parse_prefix();
        r = e;
      } else {
        break;
      }
    }
    return r;
  }

  std::string bracket_literal() {
    skip_ws();
    if (pos >= text.size() || text[pos] != '[') fail("expected [L]");
    ++pos;
    size_t start = pos;
    int depth = 0;
    while (pos < text.size() && (text[pos] != ']' || depth > 0)) {
      if (text[pos] == '[') ++depth;
      if (text[pos] == ']') --depth;
      ++pos;
    }
    if (pos >= text.size()) fail("unterminated [L]");
    std::string out = text.substr(start, pos - start);
    ++pos;
    return out;
  }

  SurfPtr parse_prefix() {
    if (word("sum")) return prefix1(FuncExpr::Kind::IterSum);
    if (word("lsum")) return prefix1(FuncExpr::Kind::LeftIterSum);
    if (word("rev")) return prefix1(FuncExpr::Kind::Reverse);
    if (peek_word("chain")) {
      word("chain");
      std::string l = bracket_literal();
      auto e = std::make_shared<Surf>();
      e->kind = FuncExpr::Kind::ChainedSum;
      e->chain_text = l;
      e->f = parse_prefix();
      return e;
    }
    if (peek_word("lchain")) {
      word("lchain");
      std::string l = bracket_literal();
      auto e = std::make_shared<Surf>();
      e->kind = FuncExpr::Kind::LeftChainedSum;
      e->chain_text = l;
      e->f = parse_prefix();
      return e;
    }
    return parse_compose();
  }

  SurfPtr prefix1(FuncExpr::Kind k) {
    auto e = std::make_shared<Surf>();
    e->kind = k;
    e->f = parse_prefix();
    return e;
  }

  SurfPtr parse_compose() {
    SurfPtr r = parse_atom();
    if (peek_word("o")) {
      word("o");
      auto e = std::make_shared<Surf>();
      e->kind = FuncExpr::Kind::Compose;
      e->f = r;                  // outer
      e->g = parse_compose();    // right-assoc
      return e;
    }
    return r;
  }

  // attempts `regex / value`; returns nullptr without consuming on failure
  SurfPtr try_const() {
    skip_ws();
    size_t save = pos;
    size_t p = pos;
    int depth = 0;
    while (p < text.size() && is_regex_char(text[p])) {
      if (text[p] == '(') ++depth;
      if (text[p] == ')') {
        if (depth == 0) break;
        --depth;
      }
      ++p;
    }
    if (p == pos || depth != 0) return nullptr;
    if (p >= text.size() || text[p] != '/') return nullptr;
    std::string regex_text = text.substr(pos, p - pos);
    pos = p + 1;
    std::string raw = value_token();
    if (raw.empty()) {
      pos = save;
      return nullptr;
    }
    auto e = std::make_shared<Surf>();
    e->kind = FuncExpr::Kind::Const;
    e->regex_text = regex_text;
    e->value_raw = raw;
    return e;
  }

  std::string value_token() {
    if (pos < text.size() && text[pos] == '"') {
      size_t end = text.find('"', pos + 1);
      if (end == std::string::npos) fail("unterminated string value");
      std::string out = text.substr(pos, end - pos + 1);
      pos = end + 1;
      return out;
    }
    size_t start = pos;
    if (pos < text.size() && text[pos] == '-') ++pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_'))
      ++pos;
    return text.substr(start, pos - start);
  }

  SurfPtr parse_atom() {
    skip_ws();
    if (word("let")) {
      std::string name = ident();
      if (!lit("=")) fail("expected = in let");
      SurfPtr bound = parse_expr();
      if (!word("in")) fail("expected in");
      auto saved = env;
      env[name] = bound;
      SurfPtr body = parse_expr();
      env = saved;
      return body;
    }
    if (SurfPtr c = try_const()) return c;
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      SurfPtr e = parse_expr();
      if (!lit(")")) fail("expected )");
      return e;
    }
    if (pos < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[pos])) ||
         text[pos] == '_')) {
      size_t at = pos;
      std::string name = ident();
      auto it = env.find(name);
      if (it == env.end()) {
        pos = at;
        fail("unknown name: " + name);
      }
      return it->second;
    }
    fail("expected expression");
  }
};

void collect(const SurfPtr& s, std::set<std::string>& syms, bool& all_int) {
  if (s->kind == FuncExpr::Kind::Const) {
    for (const auto& sym : regex_symbols(*parse_regex(s->regex_text)))
      syms.insert(sym);
    const std::string& v = s->value_raw;
    bool int_shaped = !v.empty() && v[0] != '"';
    for (size_t i = 0; i < v.size() && int_shaped; ++i)
      if (!std::isdigit(static_cast<unsigned char>(v[i])) &&
          !(i == 0 && v[i] == '-'))
        int_shaped = false;
    if (!int_shaped) all_int = false;
  }
  if (!s->chain_text.empty())
    for (const auto& sym : regex_symbols(*parse_regex(s->chain_text)))
      syms.insert(sym);
  if (s->f) collect(s->f, syms, all_int);
  if (s->g) collect(s->g, syms, all_int);
}

MonoidValue value_of(const std::string& raw, MonoidKind kind) {
  if (kind == MonoidKind::Int) {
    if (raw.empty() || raw[0] == '"')
      throw ParseError("integer value expected: " + raw, 0);
    return MonoidValue::integer(BigInt(raw));
  }
  if (!raw.empty() && raw[0] == '"')
    return MonoidValue::str(raw.substr(1, raw.size() - 2));
  return MonoidValue::str(raw);
}

ExprPtr build(const SurfPtr& s, const std::vector<std::string>& alphabet,
              const MonoidSpec& monoid,
              std::map<const Surf*, ExprPtr>& cache) {
  auto it = cache.find(s.get());
  if (it != cache.end()) return it->second;
  ExprPtr out;
  switch (s->kind) {
    case FuncExpr::Kind::Const: {
      auto dfa = std::make_shared<Dfa>(
          regex_to_dfa(*parse_regex(s->regex_text), alphabet));
      out = make_const(alphabet, monoid, dfa, value_of(s->value_raw, monoid.kind),
                       s->regex_text);
      break;
    }
    case FuncExpr::Kind::ChainedSum:
    case FuncExpr::Kind::LeftChainedSum: {
      auto dfa = std::make_shared<Dfa>(
          regex_to_dfa(*parse_regex(s->chain_text), alphabet));
      out = make_chained(s->kind, build(s->f, alphabet, monoid, cache), dfa,
                         s->chain_text);
      break;
    }
    case FuncExpr::Kind::Reverse:
    case FuncExpr::Kind::IterSum:
    case FuncExpr::Kind::LeftIterSum:
      out = make_unary(s->kind, build(s->f, alphabet, monoid, cache));
      break;
    case FuncExpr::Kind::Compose:
      out = make_compose(build(s->f, alphabet, monoid, cache),
                         build(s->g, alphabet, monoid, cache));
      break;
    default:
      out = make_binary(s->kind, build(s->f, alphabet, monoid, cache),
                        build(s->g, alphabet, monoid, cache));
  }
  cache[s.get()] = out;
  return out;
}

}  // namespace

ExprPtr parse_surface(const std::string& text, const ParseOptions& opts) {
  Parser p{text, 0, {}};
  SurfPtr s = p.parse_expr();
  if (!p.eof()) p.fail("trailing input");

  std::set<std::string> syms;
  bool all_int = true;
  collect(s, syms, all_int);

  std::vector<std::string> alphabet;
  if (opts.alphabet) {
    alphabet = *opts.alphabet;
    for (const auto& sym : syms)
      if (std::find(alphabet.begin(), alphabet.end(), sym) == alphabet.end())
        throw ParseError("literal symbol outside --alphabet: " + sym, 0);
  } else {
    alphabet.assign(syms.begin(), syms.end());
    if (alphabet.empty())
      throw ParseError("cannot infer alphabet from expression", 0);
  }
  MonoidSpec monoid = (opts.monoid ? *opts.monoid == MonoidKind::Int : all_int)
                          ? MonoidSpec::integers()
                          : MonoidSpec::strings(alphabet);
  std::map<const Surf*, ExprPtr> cache;
  return build(s, alphabet, monoid, cache);
}

// ---- printing ----

namespace {

std::string value_text(const MonoidValue& v) {
  if (v.tag() == MonoidValue::Tag::Int) return v.int_value().str();
  const std::string& s = v.str_value();
  bool bare = !s.empty();
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') bare = false;
  // bare words that read as integers must be quoted to round-trip
  bool int_shaped = !s.empty();
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) int_shaped = false;
  if (bare && !int_shaped) return s;
  return "\"" + s + "\"";
}

std::string lang_text_of(const FuncExpr& e) {
  if (!e.lang_text.empty()) return e.lang_text;
  return regex_to_string(*state_elimination(dfa_to_nfa(*e.lang)));
}

std::string print(const ExprPtr& e) {
  using K = FuncExpr::Kind;
  switch (e->kind) {
    case K::Const: return lang_text_of(*e) + "/" + value_text(e->value);
    case K::Choice: return "(" + print(e->f) + " |> " + print(e->g) + ")";
    case K::Sum: return "(" + print(e->f) + " + " + print(e->g) + ")";
    case K::SplitSum: return "(" + print(e->f) + " (+) " + print(e->g) + ")";
    case K::LeftSplitSum:
      return "(" + print(e->f) + " (<+) " + print(e->g) + ")";
    case K::IterSum: return "sum (" + print(e->f) + ")";
    case K::LeftIterSum: return "lsum (" + print(e->f) + ")";
    case K::Reverse: return "rev (" + print(e->f) + ")";
    case K::ChainedSum: {
      std::string l = e->chain_lang_text.empty()
                          ? regex_to_string(*state_elimination(
                                dfa_to_nfa(*e->chain_lang)))
                          : e->chain_lang_text;
      return "chain[" + l + "] (" + print(e->f) + ")";
    }
    case K::LeftChainedSum: {
      std::string l = e->chain_lang_text.empty()
                          ? regex_to_string(*state_elimination(
                                dfa_to_nfa(*e->chain_lang)))
                          : e->chain_lang_text;
      return "lchain[" + l + "] (" + print(e->f) + ")";
    }
    case K::Compose: return "(" + print(e->f) + " o " + print(e->g) + ")";
  }
  return "?";
}

}  // namespace

std::string print_surface(const ExprPtr& e) { return print(e); }

}  // namespace rca
