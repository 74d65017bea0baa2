#include <doctest.h>

#include "rca/monoid.hpp"

using namespace rca;

namespace {
std::vector<MonoidValue> str_samples() {
  return {MonoidValue::str(""), MonoidValue::str("a"), MonoidValue::str("b"),
          MonoidValue::str("ab"), MonoidValue::str("ba"),
          MonoidValue::str("abba")};
}
std::vector<MonoidValue> int_samples() {
  return {MonoidValue::integer(0), MonoidValue::integer(1),
          MonoidValue::integer(-3), MonoidValue::integer(7),
          MonoidValue::integer(BigInt("123456789012345678901234567890"))};
}
}  // namespace

TEST_CASE("mplus basics") {
  CHECK(mplus(MonoidValue::str("ab"), MonoidValue::str("ba")) ==
        MonoidValue::str("abba"));
  CHECK(mplus(MonoidValue::bottom(), MonoidValue::integer(5)).is_bottom());
  CHECK(mplus(MonoidValue::integer(5), MonoidValue::bottom()).is_bottom());
  CHECK(mplus(MonoidValue::integer(0), MonoidValue::integer(7)) ==
        MonoidValue::integer(7));
  CHECK_THROWS_AS(mplus(MonoidValue::integer(1), MonoidValue::str("x")),
                  std::invalid_argument);
}

TEST_CASE("associativity and identity on samples") {
  for (auto samples : {str_samples(), int_samples()}) {
    MonoidValue id = samples[0].tag() == MonoidValue::Tag::Str
                         ? MonoidSpec::strings().identity()
                         : MonoidSpec::integers().identity();
    for (const auto& x : samples) {
      CHECK(mplus(id, x) == x);
      CHECK(mplus(x, id) == x);
      CHECK(mplus(MonoidValue::bottom(), x).is_bottom());
      CHECK(mplus(x, MonoidValue::bottom()).is_bottom());
      for (const auto& y : samples)
        for (const auto& z : samples)
          CHECK(mplus(mplus(x, y), z) == mplus(x, mplus(y, z)));
    }
  }
}

TEST_CASE("commutativity: integers yes, strings no") {
  for (const auto& x : int_samples())
    for (const auto& y : int_samples()) CHECK(mplus(x, y) == mplus(y, x));
  CHECK(mplus(MonoidValue::str("ab"), MonoidValue::str("ba")) !=
        mplus(MonoidValue::str("ba"), MonoidValue::str("ab")));
  CHECK(MonoidSpec::integers().commutative());
  CHECK(!MonoidSpec::strings().commutative());
}

TEST_CASE("rendering") {
  CHECK(render(MonoidValue::bottom()) == "bot");
  CHECK(render(MonoidValue::integer(-12)) == "-12");
  CHECK(render(MonoidValue::str("ab")) == "\"ab\"");
}
