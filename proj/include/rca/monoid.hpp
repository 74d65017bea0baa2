#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <vector>

namespace rca {

using BigInt = boost::multiprecision::cpp_int;

enum class MonoidKind { Str, Int };

// An element of the value monoid, with the absorbing undefined value ⊥
// adjoined. Values are immutable; the string and integer instances never
// mix inside one expression or machine.
class MonoidValue {
 public:
  enum class Tag { Str, Int, Bot };

  MonoidValue() : tag_(Tag::Bot) {}

  static MonoidValue bottom() { return MonoidValue(); }

  static MonoidValue str(std::string s) {
    MonoidValue v;
    v.tag_ = Tag::Str;
    v.s_ = std::move(s);
    return v;
  }

  static MonoidValue integer(BigInt n) {
    MonoidValue v;
    v.tag_ = Tag::Int;
    v.n_ = std::move(n);
    return v;
  }

  Tag tag() const { return tag_; }
  bool is_bottom() const { return tag_ == Tag::Bot; }

  const std::string& str_value() const {
    if (tag_ != Tag::Str) throw std::logic_error("MonoidValue: not a string");
    return s_;
  }

  const BigInt& int_value() const {
    if (tag_ != Tag::Int) throw std::logic_error("MonoidValue: not an integer");
    return n_;
  }

  bool operator==(const MonoidValue& o) const {
    if (tag_ != o.tag_) return false;
    switch (tag_) {
      case Tag::Str: return s_ == o.s_;
      case Tag::Int: return n_ == o.n_;
      case Tag::Bot: return true;
    }
    return false;
  }
  bool operator!=(const MonoidValue& o) const { return !(*this == o); }

 private:
  Tag tag_;
  std::string s_;
  BigInt n_;
};

// Which monoid an artifact instance computes over. Only the two built-in
// instances exist: output strings under concatenation and arbitrary-precision
// integers under addition.
struct MonoidSpec {
  MonoidKind kind = MonoidKind::Str;
  std::vector<std::string> alphabet;  // output alphabet Γ, string instance only

  bool commutative() const { return kind == MonoidKind::Int; }

  MonoidValue identity() const {
    return kind == MonoidKind::Str ? MonoidValue::str("")
                                   : MonoidValue::integer(0);
  }

  static MonoidSpec strings(std::vector<std::string> gamma = {}) {
    MonoidSpec m;
    m.kind = MonoidKind::Str;
    m.alphabet = std::move(gamma);
    return m;
  }

  static MonoidSpec integers() {
    MonoidSpec m;
    m.kind = MonoidKind::Int;
    return m;
  }

  bool operator==(const MonoidSpec& o) const { return kind == o.kind; }
};

// Monoid sum with ⊥ absorbing. Mixing the string and integer instances is a
// usage error.
MonoidValue mplus(const MonoidValue& a, const MonoidValue& b);

// Text form: strings quoted, integers decimal, ⊥ as the literal token `bot`.
std::string render(const MonoidValue& v);

}  // namespace rca
