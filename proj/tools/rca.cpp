// Command-line front end for the regular-combinator toolkit: evaluate
// expressions and machines, compile expressions to machine pipelines,
// extract expressions back from machines, and cross-check by bounded
// exhaustive comparison.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "rca/compile.hpp"
#include "rca/extract_comm.hpp"
#include "rca/extract_noncomm.hpp"
#include "rca/machine_io.hpp"
#include "rca/surface.hpp"

using namespace rca;

namespace {

constexpr int kUsageError = 1;
constexpr int kParseError = 2;
constexpr int kSemanticError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct SemanticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw UsageError("cannot write " + out_path);
  out << text;
}

std::optional<std::vector<std::string>> parse_alphabet(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::vector<std::string> out;
  for (char c : s)
    if (c != ',') out.push_back(std::string(1, c));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ExprPtr parse_expr_arg(const std::string& text, const std::string& monoid,
                       const std::string& alphabet) {
  ParseOptions opts;
  if (monoid == "str")
    opts.monoid = MonoidKind::Str;
  else if (monoid == "int")
    opts.monoid = MonoidKind::Int;
  else if (!monoid.empty())
    throw UsageError("--monoid must be str or int");
  opts.alphabet = parse_alphabet(alphabet);
  return parse_surface(text, opts);
}

// One side of check-equiv, or the object of eval: an expression, a machine
// file, or a cascade file.
struct Side {
  ExprPtr expr;
  std::optional<Ccra> ccra;
  std::optional<Acra> acra;
  std::optional<Cascade> cascade;

  std::vector<std::string> alphabet() const {
    if (expr) return expr->alphabet;
    if (ccra) return ccra->alphabet;
    if (acra) return acra->alphabet;
    return cascade->stages.front().input_alphabet();
  }
  MonoidValue value(const Word& w) const {
    if (expr) return eval_naive(expr, w);
    if (ccra) return eval_ccra(*ccra, w);
    if (acra) return eval_acra(*acra, w);
    return eval_cascade(*cascade, w);
  }
};

Side load_side(const std::string& spec, const std::string& monoid,
               const std::string& alphabet) {
  Side s;
  if (spec.rfind("expr:", 0) == 0) {
    s.expr = parse_expr_arg(spec.substr(5), monoid, alphabet);
    return s;
  }
  std::string text = slurp(spec);
  if (json_is_cascade(text)) {
    s.cascade = load_cascade_json(text);
  } else if (json_is_acra(text)) {
    s.acra = load_acra_json(text);
  } else {
    s.ccra = load_ccra_json(text);
  }
  return s;
}

std::string plain_value(const MonoidValue& v) {
  if (v.is_bottom()) return "bot";
  if (v.tag() == MonoidValue::Tag::Int) return v.int_value().str();
  return v.str_value();
}

Ccra acra_as_ccra(const Acra& a) {
  Ccra m;
  m.states = a.states;
  m.alphabet = a.alphabet;
  m.registers = a.registers;
  m.start = a.start;
  m.accepting = a.accepting;
  m.delta = a.delta;
  m.monoid = a.monoid;
  m.mu.assign(m.states.size(),
              std::vector<std::vector<UpdateExpr>>(m.alphabet.size()));
  for (size_t q = 0; q < m.states.size(); ++q)
    for (size_t s = 0; s < m.alphabet.size(); ++s)
      for (const auto& [src, d] : a.mu[q][s]) {
        UpdateExpr u = UpdateExpr::reg(src);
        u.append_const(d);
        m.mu[q][s].push_back(canonicalize(u, m.monoid));
      }
  m.nu.assign(m.states.size(), UpdateExpr{});
  for (size_t q = 0; q < m.states.size(); ++q)
    if (m.accepting[q]) {
      UpdateExpr u = UpdateExpr::reg(a.nu[q].first);
      u.append_const(a.nu[q].second);
      m.nu[q] = canonicalize(u, m.monoid);
    }
  return m;
}

int run(int argc, char** argv) {
  CLI::App app{"regular combinators for string transformations"};
  app.require_subcommand(1);

  std::string expr_text, machine_path, input, monoid, alphabet, out_path;
  auto add_common = [&](CLI::App* cmd, bool need_input) {
    cmd->add_option("-e,--expr", expr_text, "expression in surface syntax");
    cmd->add_option("-m,--machine", machine_path, "machine or cascade JSON");
    if (need_input) cmd->add_option("-i,--input", input, "input word");
    cmd->add_option("--monoid", monoid, "str or int (default: inferred)");
    cmd->add_option("--alphabet", alphabet,
                    "input alphabet, e.g. ab# (default: inferred)");
    cmd->add_option("-o,--output", out_path, "write the result to a file");
  };

  auto* cmd_eval = app.add_subcommand("eval", "evaluate on an input word");
  add_common(cmd_eval, true);

  auto* cmd_compile =
      app.add_subcommand("compile", "compile an expression to a cascade");
  add_common(cmd_compile, false);
  std::string dot_dir;
  cmd_compile->add_option("--dot", dot_dir, "also write DOT files per stage");

  auto* cmd_domain =
      app.add_subcommand("domain", "domain DFA of an expression");
  add_common(cmd_domain, false);
  bool domain_dot = false;
  cmd_domain->add_flag("--dot", domain_dot, "emit DOT instead of a table");

  auto* cmd_dot = app.add_subcommand("dot", "DOT graph of a machine");
  add_common(cmd_dot, false);

  auto* cmd_xc = app.add_subcommand("extract-comm",
                                    "ACRA → expression (commutative case)");
  add_common(cmd_xc, false);

  auto* cmd_xn = app.add_subcommand(
      "extract-noncomm", "copyless machine → expression (general case)");
  add_common(cmd_xn, false);
  int self_check_len = 4;
  bool skip_normalize = false;
  cmd_xn->add_option("--max-len", self_check_len,
                     "length bound of the built-in roundtrip self-check");
  cmd_xn->add_flag("--skip-normalize", skip_normalize,
                   "fail instead of normalizing a non-normalized machine");

  auto* cmd_eq = app.add_subcommand(
      "check-equiv", "bounded exhaustive comparison of two sides");
  std::string lhs_spec, rhs_spec;
  int max_len = 6;
  long long max_strings = 2000000;
  cmd_eq->add_option("lhs", lhs_spec, "expr:<text> or a machine file")
      ->required();
  cmd_eq->add_option("rhs", rhs_spec, "expr:<text> or a machine file")
      ->required();
  cmd_eq->add_option("--max-len", max_len, "maximum input length");
  cmd_eq->add_option("--max-strings", max_strings, "resource cap");
  cmd_eq->add_option("--monoid", monoid, "str or int (default: inferred)");
  cmd_eq->add_option("--alphabet", alphabet, "alphabet override");
  cmd_eq->add_option("-o,--output", out_path, "write the report to a file");

  CLI11_PARSE(app, argc, argv);

  if (cmd_eval->parsed()) {
    if (expr_text.empty() == machine_path.empty())
      throw UsageError("eval needs exactly one of --expr / --machine");
    Side s = expr_text.empty()
                 ? load_side(machine_path, monoid, alphabet)
                 : load_side("expr:" + expr_text, monoid, alphabet);
    emit(out_path, plain_value(s.value(word_from_chars(input))));
    return 0;
  }

  if (cmd_compile->parsed()) {
    if (expr_text.empty()) throw UsageError("compile needs --expr");
    ExprPtr e = parse_expr_arg(expr_text, monoid, alphabet);
    Cascade c = compile(e);
    emit(out_path, save_cascade_json(c));
    if (!dot_dir.empty())
      for (size_t i = 0; i < c.stages.size(); ++i) {
        std::ofstream out(dot_dir + "/stage" + std::to_string(i) + ".dot");
        out << ccra_to_dot(c.stages[i].m, "stage" + std::to_string(i));
      }
    return 0;
  }

  if (cmd_domain->parsed()) {
    if (expr_text.empty()) throw UsageError("domain needs --expr");
    ExprPtr e = parse_expr_arg(expr_text, monoid, alphabet);
    Dfa d = dfa_reduce(domain_dfa(e));
    if (domain_dot) {
      emit(out_path, dfa_to_dot(d, "domain"));
      return 0;
    }
    std::ostringstream os;
    os << "states: " << d.num_states << "\nstart: " << d.start
       << "\naccepting:";
    for (int q = 0; q < d.num_states; ++q)
      if (d.accepting[q]) os << " " << q;
    os << "\n";
    for (int q = 0; q < d.num_states; ++q)
      for (size_t a = 0; a < d.alphabet.size(); ++a)
        os << q << " --" << d.alphabet[a] << "--> " << d.next[q][a] << "\n";
    emit(out_path, os.str());
    return 0;
  }

  if (cmd_dot->parsed()) {
    if (machine_path.empty()) throw UsageError("dot needs --machine");
    std::string text = slurp(machine_path);
    std::ostringstream os;
    if (json_is_cascade(text)) {
      Cascade c = load_cascade_json(text);
      for (size_t i = 0; i < c.stages.size(); ++i)
        os << ccra_to_dot(c.stages[i].m, "stage" + std::to_string(i));
    } else if (json_is_acra(text)) {
      os << ccra_to_dot(acra_as_ccra(load_acra_json(text)), "acra");
    } else {
      os << ccra_to_dot(load_ccra_json(text), "machine");
    }
    emit(out_path, os.str());
    return 0;
  }

  if (cmd_xc->parsed()) {
    if (machine_path.empty()) throw UsageError("extract-comm needs --machine");
    Acra a = load_acra_json(slurp(machine_path));
    emit(out_path, print_surface(extract_commutative(a)));
    return 0;
  }

  if (cmd_xn->parsed()) {
    if (machine_path.empty())
      throw UsageError("extract-noncomm needs --machine");
    Ccra m = load_ccra_json(slurp(machine_path));
    if (skip_normalize && !is_normalized(m))
      throw SemanticError("machine is not normalized (--skip-normalize)");
    ExprPtr e = extract_noncommutative(m);
    for (const auto& w : words_up_to(m.alphabet, self_check_len))
      if (!(eval_naive(e, w) == eval_ccra(m, w)))
        throw SemanticError("self-check failed at '" + word_to_chars(w) + "'");
    std::cerr << "self-check ok up to length " << self_check_len << "\n";
    emit(out_path, print_surface(e));
    return 0;
  }

  if (cmd_eq->parsed()) {
    Side lhs = load_side(lhs_spec, monoid, alphabet);
    Side rhs = load_side(rhs_spec, monoid, alphabet);
    std::vector<std::string> sigma = lhs.alphabet();
    if (auto a = parse_alphabet(alphabet)) sigma = *a;
    else if (sigma != rhs.alphabet())
      throw SemanticError("alphabets differ; pass --alphabet");
    long long budget = 0;
    for (const auto& w : words_up_to(sigma, max_len)) {
      if (++budget > max_strings)
        throw SemanticError("string budget exceeded; raise --max-strings");
      MonoidValue a = lhs.value(w), b = rhs.value(w);
      if (!(a == b)) {
        std::ostringstream os;
        os << "counterexample '" << word_to_chars(w) << "': lhs " << render(a)
           << ", rhs " << render(b);
        emit(out_path, os.str());
        return kSemanticError;
      }
    }
    emit(out_path, "equivalent up to length " + std::to_string(max_len));
    return 0;
  }

  throw UsageError("no subcommand");
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const SemanticError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemanticError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSemanticError;
  }
}
