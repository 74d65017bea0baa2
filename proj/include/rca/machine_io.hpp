#pragma once

#include <string>

#include "rca/ccra.hpp"

namespace rca {

// Machine files are JSON with fields `states`, `alphabet`, `registers`,
// `start`, `accepting`, `delta`, `mu`, `nu` (see README). `kind` selects
// "ccra" (default) or "acra"; `monoid` selects "str" (default) or "int".
// Unlisted (state, symbol, register) updates default to the identity v := v.
// The loader enforces totality and, for CCRAs, copylessness.

Ccra load_ccra_json(const std::string& text);
Acra load_acra_json(const std::string& text);
std::string save_ccra_json(const Ccra& m);

// Cascade files carry a `stages` array; each stage is a machine object with
// an optional `lookahead` DFA and `label_next` table.
Cascade load_cascade_json(const std::string& text);
std::string save_cascade_json(const Cascade& c);

bool json_is_cascade(const std::string& text);
bool json_is_acra(const std::string& text);

}  // namespace rca
