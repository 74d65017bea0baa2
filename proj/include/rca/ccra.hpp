#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rca/monoid.hpp"
#include "rca/relang.hpp"

namespace rca {

// Right-hand side of a register update: alternating constants and register
// indices, kept canonical (no two adjacent constants, no identity constants).
struct UpdateExpr {
  struct Tok {
    bool is_reg = false;
    int reg = -1;
    MonoidValue c;
    static Tok regref(int r) {
      Tok t;
      t.is_reg = true;
      t.reg = r;
      return t;
    }
    static Tok constant(MonoidValue v) {
      Tok t;
      t.c = std::move(v);
      return t;
    }
  };
  std::vector<Tok> toks;

  static UpdateExpr reg(int r) { return UpdateExpr{{Tok::regref(r)}}; }
  static UpdateExpr constant(MonoidValue v);
  void append_reg(int r) { toks.push_back(Tok::regref(r)); }
  void append_const(const MonoidValue& v);
  void append(const UpdateExpr& other);
  std::vector<int> registers() const;
  // registers in order plus the constant slots around them; slot k (1-based)
  // sits before the k-th register, slot #regs+1 trails
  std::vector<MonoidValue> patches(const MonoidSpec& m) const;
};

UpdateExpr canonicalize(const UpdateExpr& u, const MonoidSpec& m);
// substitute each register r in `u` by subst[r]
UpdateExpr subst_update(const UpdateExpr& u, const std::vector<UpdateExpr>& subst,
                        const MonoidSpec& m);
std::string update_to_string(const UpdateExpr& u,
                             const std::vector<std::string>& registers);

struct Ccra {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::string> registers;
  int start = 0;
  std::vector<char> accepting;
  std::vector<std::vector<int>> delta;                  // [state][sym]
  std::vector<std::vector<std::vector<UpdateExpr>>> mu; // [state][sym][reg]
  std::vector<UpdateExpr> nu;                           // meaningful on accepting
  MonoidSpec monoid;

  int sym_index(const std::string& s) const;
  int state_index(const std::string& s) const;
  void check() const;
  // DFA over the machine's state graph with the machine's accepting set.
  Dfa graph_dfa() const;
};

struct Acra {
  std::vector<std::string> states;
  std::vector<std::string> alphabet;
  std::vector<std::string> registers;
  int start = 0;
  std::vector<char> accepting;
  std::vector<std::vector<int>> delta;
  // v := src + d
  std::vector<std::vector<std::vector<std::pair<int, MonoidValue>>>> mu;
  std::vector<std::pair<int, MonoidValue>> nu;
  MonoidSpec monoid;

  int sym_index(const std::string& s) const;
  void check() const;
};

struct CopylessViolation {
  enum class Kind { ReusedWithinUpdate, ReusedAcrossUpdates, ReusedInOutput };
  Kind kind;
  std::string where;
};

std::vector<CopylessViolation> validate_copyless(const Ccra& m);

MonoidValue eval_ccra(const Ccra& m, const Word& sigma);
MonoidValue eval_acra(const Acra& m, const Word& sigma);

// Look-ahead labelling per the right-to-left pass: lab(σ) = q_n q_{n-1} … q_0
// where q_i is A's state after reading i symbols of σ in reverse.
Word lookahead_labelling(const Dfa& a, const Word& sigma);

// Two passes: label σ with A, then run m on the label string.
MonoidValue eval_with_lookahead(const Ccra& m, const Dfa& a, const Word& sigma);

// One pipeline stage: a machine either over the input alphabet directly or
// over labels of its look-ahead automaton. `label_next` decodes each
// look-ahead state to the next input symbol it carries ("" for the initial
// end-marker state); only compiled stages populate it.
struct Stage {
  Ccra m;
  std::optional<Dfa> look;
  std::vector<std::string> label_next;

  std::vector<std::string> input_alphabet() const;
};

struct Cascade {
  std::vector<Stage> stages;
};

MonoidValue eval_stage(const Stage& s, const Word& sigma);
MonoidValue eval_cascade(const Cascade& c, const Word& sigma);
// Language of inputs a stage maps to a defined value.
Dfa stage_domain(const Stage& s);

// Prop-V.2-style normalization: adds a sink register x0, renames registers
// through per-state permutations, makes every transition's shape upward.
// `fresh_names`, when given, supplies the new register names (|V|+1 of them,
// sink first, in ascending register order).
Ccra normalize(const Ccra& m,
               std::optional<std::vector<std::string>> fresh_names = {});

// Def-V.3 check of every transition's shape against the register-vector order.
bool is_normalized(const Ccra& m);

std::string ccra_to_dot(const Ccra& m, const std::string& name = "machine");

}  // namespace rca
