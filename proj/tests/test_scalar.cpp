#include <doctest.h>

#include <cmath>
#include <random>

#include "padic/errors.hpp"
#include "padic/parallel.hpp"
#include "padic/scalar.hpp"

using namespace padic;

TEST_CASE("exact arithmetic stays rational") {
  const Scalar a = Scalar::fraction(1, 3, Mode::exact);
  const Scalar b = Scalar::fraction(1, 6, Mode::exact);
  CHECK(a + b == Scalar::fraction(1, 2, Mode::exact));
  CHECK(a * b == Scalar::fraction(1, 18, Mode::exact));
  CHECK(a / b == Scalar::integer(2, Mode::exact));
  CHECK((b - a).str() == "-1/6");
  CHECK(-a < b);
}

TEST_CASE("infinity rules") {
  for (Mode m : {Mode::exact, Mode::floating}) {
    const Scalar inf = Scalar::infinity(m);
    CHECK((inf * Scalar::zero(m)).is_zero());
    CHECK((inf + Scalar::one(m)).is_infinite());
    CHECK((inf - Scalar::one(m)).is_infinite());
    CHECK(Scalar::integer(1000000, m) < inf);
    CHECK_THROWS_AS(Scalar::one(m) - inf, DomainError);
    CHECK(inf.str() == "inf");
  }
}

TEST_CASE("modes never mix silently") {
  CHECK_THROWS_AS(Scalar::one(Mode::exact) + Scalar::one(Mode::floating), ModeError);
  CHECK_THROWS_AS(Scalar(0.5).to_mode(Mode::exact), ModeError);
  CHECK_THROWS_AS(Scalar(0.5).rational(), ModeError);
  CHECK(Scalar::fraction(1, 4, Mode::exact).to_mode(Mode::floating).to_double() == 0.25);
}

TEST_CASE("parse and print round trip") {
  CHECK(Scalar::parse("0.25", Mode::exact) == Scalar::fraction(1, 4, Mode::exact));
  CHECK(Scalar::parse("3/6", Mode::exact).str() == "1/2");
  CHECK(Scalar::parse("-7", Mode::exact) == Scalar::integer(-7, Mode::exact));
  CHECK(Scalar::parse("inf", Mode::floating).is_infinite());
  std::mt19937_64 gen(7);
  for (int i = 0; i < 200; ++i) {
    const Scalar q(Rational(static_cast<long>(gen() % 2001) - 1000, static_cast<long>(gen() % 97) + 1));
    CHECK(Scalar::parse(q.str(), Mode::exact) == q);
    const Scalar x(std::ldexp(static_cast<double>(gen() >> 11), -40));
    CHECK(Scalar::parse(x.str(), Mode::floating) == x);
  }
  CHECK_THROWS(Scalar::parse("1/0", Mode::exact));
  CHECK_THROWS(Scalar::parse("abc", Mode::exact));
}

TEST_CASE("powers of p") {
  CHECK(pow_p(2, -3, Mode::exact) == Scalar::fraction(1, 8, Mode::exact));
  CHECK(pow_p(3, 4, Mode::exact) == Scalar::integer(81, Mode::exact));
  CHECK(rational_power(5, 0) == 1);
}

TEST_CASE("blocked sums do not depend on the worker count") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  std::vector<double> xs(50000);
  for (auto& x : xs) x = u(gen);
  auto sum = [&] {
    return blocked_sum(xs.size(), Mode::floating, [&](std::size_t b, std::size_t e) {
      Scalar s(0.0);
      for (std::size_t i = b; i < e; ++i) s += Scalar(xs[i]);
      return s;
    });
  };
  set_max_threads(1);
  const Scalar one = sum();
  set_max_threads(7);
  const Scalar seven = sum();
  set_max_threads(0);
  CHECK(one.to_double() == seven.to_double());
}

TEST_CASE("worker exceptions reach the caller") {
  set_max_threads(4);
  CHECK_THROWS_AS(parallel_for(100, [](std::size_t i) {
                    if (i == 57) throw DomainError("boom");
                  }),
                  DomainError);
  set_max_threads(0);
}
