#include "cachecalc/gf.hpp"

#include "cachecalc/sim.hpp"
#include "doctest.h"

using namespace cachecalc;
using gf::Fe;

TEST_SUITE("gf") {
  TEST_CASE("small-field arithmetic") {
    gf::PrimeScope scope(7);
    CHECK(Fe(3) + Fe(4) == Fe(0));
    CHECK(Fe(0) + Fe(5) == Fe(5));
    CHECK(Fe(3).inverse() == Fe(5));
    CHECK(Fe(3) * Fe(5) == Fe(1));
    CHECK(Fe(0).neg() == Fe(0));
    CHECK(Fe(2).neg() == Fe(5));
  }

  TEST_CASE("wraparound at p = 11") {
    gf::PrimeScope scope(11);
    CHECK(Fe(5) + Fe(5) == Fe(10));
  }

  TEST_CASE("inverse of zero rejected") {
    CHECK_THROWS_AS(Fe(0).inverse(), gf::DivisionByZero);
    CHECK_THROWS_AS(gf::inv_raw(0, gf::prime()), gf::DivisionByZero);
  }

  TEST_CASE("modulus configuration is validated") {
    CHECK_THROWS_AS(gf::set_prime(1), gf::ConfigError);
    CHECK_THROWS_AS(gf::set_prime(91), gf::ConfigError);  // 7 * 13
    CHECK_THROWS_AS(gf::set_prime(1ULL << 40), gf::ConfigError);
    CHECK(gf::prime() == gf::kDefaultPrime);
    CHECK(gf::is_prime(2));
    CHECK(gf::is_prime(2147483647ULL));
    CHECK_FALSE(gf::is_prime(2147483646ULL));
  }

  TEST_CASE("field axioms on random samples") {
    sim::Rng rng(42);
    for (int t = 0; t < 200; ++t) {
      const Fe a = rng.field_element();
      const Fe b = rng.field_element();
      const Fe c = rng.field_element();
      CHECK(a + b == b + a);
      CHECK(a * b == b * a);
      CHECK((a + b) + c == a + (b + c));
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + a.neg() == Fe(0));
      if (!a.is_zero()) {
        CHECK(a * a.inverse() == Fe(1));
        CHECK(a.inverse().inverse() == a);
      }
    }
  }

  TEST_CASE("from_signed reduces negatives") {
    gf::PrimeScope scope(13);
    CHECK(Fe::from_signed(-1) == Fe(12));
    CHECK(Fe::from_signed(-13) == Fe(0));
    CHECK(Fe::from_signed(27) == Fe(1));
  }
}
