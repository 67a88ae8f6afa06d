#include <doctest.h>

#include <cmath>
#include <string>

#include "padic/errors.hpp"
#include "padic/radial_oracle.hpp"

using namespace padic;

namespace {

Scalar q(long n, long d = 1) { return Scalar(Rational(n, d)); }

}  // namespace

TEST_CASE("kernel parameters are validated") {
  CHECK_THROWS_AS(KernelParams(2, 2, 2.0, Mode::floating), ParameterError);
  CHECK_THROWS_AS(KernelParams(2, 2, 0.0, Mode::floating), ParameterError);
  CHECK_THROWS_AS(KernelParams(6, 2, 1.0, Mode::floating), ParameterError);
  CHECK_THROWS_AS(KernelParams(2, 3, 1.5, Mode::exact), ModeError);
  try {
    KernelParams(3, 2, 2.5, Mode::floating);
    FAIL("expected a ParameterError");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("d > alpha") != std::string::npos);
  }
}

TEST_CASE("closed-form constants") {
  CHECK(gamma_p(KernelParams::exact(2, 3, 1)) == q(3, 2));
  CHECK(c_dalpha(KernelParams::exact(2, 3, 1)) == q(-3, 2));
  CHECK(c_dalpha(KernelParams::exact(2, 2, 1)) == q(-1));
  CHECK(gamma_p(2, 2, 1.0, Mode::exact) == q(1));
  CHECK_THROWS_AS(gamma_p(2, 2, 2.0, Mode::exact), DomainError);
  CHECK_THROWS_AS(gamma_p(2, 2, 0.0, Mode::floating), DomainError);
  // Gamma is defined off (0, d) too.
  CHECK(gamma_p(2, 1, 2.0, Mode::exact) == q(-4, 3));
  const KernelParams f(5, 3, 1.3, Mode::floating);
  CHECK(c_dalpha(f).to_double() < 0);
  CHECK(gamma_p(f).to_double() ==
        doctest::Approx((1 - std::pow(5.0, 1.3 - 3)) / (1 - std::pow(5.0, -1.3))));
}

TEST_CASE("shell integral against sphere-by-sphere sums") {
  for (long p : {2L, 3L}) {
    for (int d = 2; d <= 3; ++d) {
      for (int a = 1; a < d; ++a) {
        const KernelParams k = KernelParams::exact(p, d, a);
        for (int r = -2; r <= 2; ++r) {
          const Scalar closed = shell_integral(k, r);
          Scalar prev = k.zero();
          for (int T = 0; T < 12; ++T) {
            const Scalar t = shell_integral_truncated(k, r, T);
            CHECK(prev < t);
            CHECK(t < closed);
            // The missing tail is an exact geometric remainder.
            CHECK(closed - t == k.power(r - T - 1, 0) * (k.one() - k.power(0, -d)) /
                                    (k.one() - k.power(-1, 0)));
            prev = t;
          }
        }
      }
    }
  }
}

TEST_CASE("ball potential against Monte Carlo") {
  const KernelParams k(2, 2, 1.0, Mode::floating);
  SeededRng rng(21);
  const PadicPoint inside = PadicPoint::from_rationals(2, 0, 20, {Rational(1), Rational(2)});
  const PadicPoint outside = PadicPoint::from_rationals(2, 2, 20, {Rational(1, 4), Rational(0)});
  for (const auto& x : {inside, outside}) {
    const auto mc = mc_ball_potential(k, 0, x, 40000, 20, rng);
    const double exact = uniform_ball_potential(k, 0, norm(x)).to_double();
    CHECK(std::fabs(mc.mean - exact) <= 4 * mc.std_error + 1e-12);
  }
  CHECK(uniform_ball_potential(KernelParams::exact(2, 2, 1), 0, Norm{2, 3}) == q(1, 8));
}

TEST_CASE("cell pair integrals sum to the ball energy") {
  // Brute-force double sum over all cell pairs of Z_2^2 at depth l.
  const KernelParams k = KernelParams::exact(2, 2, 1);
  for (int l = 0; l <= 3; ++l) {
    const CellGrid g(2, 2, 0, l);
    Scalar total = k.zero();
    for (std::uint64_t a = 0; a < g.size(); ++a)
      for (std::uint64_t b = 0; b < g.size(); ++b) {
        const Scalar v = pair_cell_interaction(k, g, a, b);
        CHECK(v == pair_cell_interaction(k, g, b, a));
        total += v;
      }
    CHECK(total == q(3, 2));
  }
  CHECK(same_cell_interaction(k, 0) == q(3, 2));
  CHECK(same_cell_interaction(k, 2) == Scalar(Rational(3, 2) / 64));
  const CellGrid g(2, 2, 0, 1);
  CHECK(pair_cell_interaction(k, g.cell(0), g.cell(3)) == pair_cell_interaction(k, g, 0, 3));
}

TEST_CASE("energy of the uniform ball against Monte Carlo pairs") {
  const KernelParams k(3, 2, 1.0, Mode::floating);
  SeededRng rng(4);
  const auto mc = mc_ball_energy(k, 1, 60000, 14, rng);
  const double exact = 1.0 / capacity_ball(k, 1).to_double();
  CHECK(std::fabs(mc.mean - exact) <= 4 * mc.std_error);
}

TEST_CASE("truncated radial reduction") {
  for (long p : {2L, 3L, 5L}) {
    for (int d = 2; d <= 4; ++d) {
      for (int a = 1; a < d; ++a) {
        const KernelParams k = KernelParams::exact(p, d, a);
        for (int e = -2; e <= 2; ++e) {
          const Norm s{p, e};
          const Scalar closed = lemma1_closed(k, s);
          for (int T : {0, 3, 10}) {
            CHECK(closed - lemma1_truncated(k, s, T) == closed * k.power(T + 1, -long(T + 1) * d));
          }
        }
      }
    }
  }
  const KernelParams f(2, 3, 1.7, Mode::floating);
  const double c = lemma1_closed(f, Norm{2, 1}).to_double();
  CHECK(lemma1_truncated(f, Norm{2, 1}, 60).to_double() == doctest::Approx(c).epsilon(1e-14));
  CHECK_THROWS_AS(lemma1_closed(f, Norm{2, std::nullopt}), DomainError);
  CHECK_THROWS_AS(lemma1_truncated(f, Norm{2, 0}, -1), DomainError);
}

TEST_CASE("fundamental solution is -g / C") {
  const KernelParams k = KernelParams::exact(3, 3, 2);
  for (int e = -3; e <= 3; ++e) {
    const Norm s{3, e};
    CHECK(fundamental_solution_eval(k, s) == -k.kernel(s) / c_dalpha(k));
  }
}

TEST_CASE("capacity of balls") {
  const KernelParams k = KernelParams::exact(2, 2, 1);
  CHECK(capacity_ball(k, 0) == q(2, 3));
  for (int r = -3; r <= 3; ++r)
    CHECK(capacity_ball(k, r) * shell_integral(k, r) == ball_volume(k, r));
}

TEST_CASE("Taibleson operator needs a declared tail") {
  const KernelParams k = KernelParams::exact(2, 2, 1);
  RadialTailFunction f{CellGrid(2, 2, 0, 1), std::vector<Scalar>(4, k.one()), std::nullopt};
  CHECK_THROWS_AS(taibleson_apply(f, k, std::uint64_t{0}), DomainError);
  f.tail = k.zero();
  CHECK_THROWS_AS(taibleson_apply(f, k, std::uint64_t{9}), DomainError);
}

TEST_CASE("Taibleson operator inverts the kernel for a ball mass") {
  // f = g * (unit mass spread over B_{-2}): the averaged kernel inside, the
  // plain kernel outside. D f = -C rho, so it vanishes off the small ball.
  const KernelParams k = KernelParams::exact(2, 2, 1);
  const CellGrid g(2, 2, 1, 2);
  std::vector<Scalar> v;
  for (std::uint64_t i = 0; i < g.size(); ++i) {
    const Norm n = g.center_norm(i);
    v.push_back(n.below_resolution() ? shell_integral(k, -2) / ball_volume(k, -2) : k.kernel(n));
  }
  const RadialTailFunction f{g, v, k.one()};
  CHECK(taibleson_apply(f, k, std::uint64_t{0}) == -c_dalpha(k) / ball_volume(k, -2));
  for (std::uint64_t i = 1; i < g.size(); ++i) CHECK(taibleson_apply(f, k, i).is_zero());
}
