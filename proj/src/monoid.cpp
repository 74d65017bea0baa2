#include "rca/monoid.hpp"

namespace rca {

MonoidValue mplus(const MonoidValue& a, const MonoidValue& b) {
  if (a.is_bottom() || b.is_bottom()) return MonoidValue::bottom();
  if (a.tag() != b.tag())
    throw std::invalid_argument("mplus: mixing monoid instances");
  if (a.tag() == MonoidValue::Tag::Str)
    return MonoidValue::str(a.str_value() + b.str_value());
  return MonoidValue::integer(a.int_value() + b.int_value());
}

std::string render(const MonoidValue& v) {
  switch (v.tag()) {
    case MonoidValue::Tag::Bot: return "bot";
    case MonoidValue::Tag::Int: return v.int_value().str();
    case MonoidValue::Tag::Str: return "\"" + v.str_value() + "\"";
  }
  return "bot";
}

}  // namespace rca
