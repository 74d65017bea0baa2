#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rca/ccra.hpp"

namespace rca {

// Register-flow summary of a path: for each register, the sequence of
// registers feeding it (the register projection of the update expression).
using Shape = std::vector<std::vector<int>>;

Shape shape_identity(int num_regs);
// Shape of one transition's update map.
Shape shape_of_transition(const Ccra& m, int state, int sym);
// Shape of the run of m on σ from `state` (composition of letter shapes).
Shape shape_of_run(const Ccra& m, int state, const Word& sigma);

// (s1 · s2)(v) substitutes s1's rows into s2's row of v; this is the shape of
// a path with first piece s1 and second piece s2.
Shape shape_concat(const Shape& s1, const Shape& s2);

// supp(S) = registers that flow into themselves.
std::vector<int> shape_support(const Shape& s);

enum class ShapeOrd { Less, EqualSupport, Greater, Incomparable };
// Less means s1 ⊏ s2, i.e. supp(s1) ⊃ supp(s2).
ShapeOrd shape_order(const Shape& s1, const Shape& s2);

// Def V.3 against the register index order: flows go upward, self-flow
// accompanies inflows, no register value is dropped.
bool shape_is_normalized(const Shape& s);

bool shape_copyless(const Shape& s);
std::string shape_to_string(const Shape& s,
                            const std::vector<std::string>& registers);

// DFA for { σ ∈ r^(level)(q,q') : shape of the σ-path is S }, where
// r^(level) constrains interior states to indices < level. The empty path is
// included when q == q' and S is the identity.
Dfa strings_with_shape(const Ccra& m, int q, int q2, const Shape& s, int level);

// Generalization used by the extraction: accepts σ ∈ r^(level)(q,q') whose
// shape satisfies `pred`. When `block_class_support` is given, runs that
// visit q' with a support-equal shape strictly before the end are rejected
// (the L_first languages).
Dfa shape_language(const Ccra& m, int q, int q2, int level,
                   const std::function<bool(const Shape&)>& pred,
                   const std::optional<std::vector<int>>& block_class_support =
                       std::nullopt);

}  // namespace rca
