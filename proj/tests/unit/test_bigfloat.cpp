#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "csg/bigfloat.hpp"

using csg::BigFloat;

TEST_CASE("arithmetic agrees with double in the double range") {
  const double xs[] = {0.0, 1.0, -2.5, 3.25e10, -7.75e-11};
  for (double a : xs)
    for (double b : xs) {
      const BigFloat x(a, 128), y(b, 128);
      CHECK((x + y).to_double() == a + b);
      CHECK((x - y).to_double() == a - b);
      CHECK((x * y).to_double() == a * b);
      if (b != 0.0) CHECK((x / y).to_double() == a / b);
    }
  CHECK(sqrt(BigFloat(2.0, 256)).to_double() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(log(BigFloat(10.0, 256)).to_double() ==
        doctest::Approx(std::log(10.0)).epsilon(1e-15));
  CHECK(abs(BigFloat(-3.5, 64)).to_double() == 3.5);
  CHECK((-BigFloat(4.0, 64)).to_double() == -4.0);
}

TEST_CASE("comparisons and state queries") {
  const BigFloat a(1.5, 128), b(2.5, 128), z(128);
  CHECK(a < b);
  CHECK(b > a);
  CHECK(a <= a);
  CHECK(a == BigFloat(1.5, 64));
  CHECK(z.is_zero());
  CHECK(!a.is_zero());
  CHECK(a.sign() == 1);
  CHECK((-b).sign() == -1);
  CHECK(a.is_finite());
}

TEST_CASE("results keep the wider operand's precision") {
  const BigFloat narrow(1.0, 64), wide(1.0, 512);
  CHECK((narrow + wide).precision() == 512);
  CHECK((wide * narrow).precision() == 512);

  // 1 + 2^-200 is invisible at 64 bits but not at 512
  BigFloat tiny(1.0, 512);
  for (int i = 0; i < 200; ++i) tiny = tiny * BigFloat(0.5, 512);
  CHECK(((narrow + tiny) - narrow).is_zero() == false);
  const BigFloat coarse = BigFloat(1.0, 64) + tiny;
  CHECK((coarse - BigFloat(1.0, 64)).to_double() ==
        doctest::Approx(std::ldexp(1.0, -200)));
}

TEST_CASE("exponent range goes far past double") {
  BigFloat p(1.0, 128);
  const BigFloat three(3.0, 128);
  for (int i = 0; i < 3000; ++i) p = p * three; // 3^3000 ~ 10^1431
  CHECK(p.is_finite());
  CHECK(std::isinf(p.to_double()));
  CHECK(log(p).to_double() == doctest::Approx(3000.0 * std::log(3.0)));
  BigFloat inv = BigFloat(1.0, 128) / p;
  CHECK(inv.is_finite());
  CHECK(!inv.is_zero());
  CHECK(log(inv).to_double() == doctest::Approx(-3000.0 * std::log(3.0)));
}

TEST_CASE("value semantics: copies and moves are independent") {
  BigFloat a(42.0, 128);
  BigFloat b = a;
  b += BigFloat(1.0, 128);
  CHECK(a.to_double() == 42.0);
  CHECK(b.to_double() == 43.0);

  std::vector<BigFloat> pool;
  for (int i = 0; i < 40; ++i) pool.push_back(BigFloat(i, 96));
  for (int i = 0; i < 40; ++i) CHECK(pool[i].to_double() == i);

  BigFloat moved = std::move(b);
  CHECK(moved.to_double() == 43.0);
  CHECK(moved.str(4).substr(0, 2) == "43");
}
