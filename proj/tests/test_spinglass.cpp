#include <doctest.h>

#include "padic/errors.hpp"
#include "padic/spinglass.hpp"

using namespace padic;

namespace {

Scalar q(long n, long d = 1) { return Scalar(Rational(n, d)); }

CellDensity step(SeededRng& rng, int l0) {
  const CellGrid g(2, 2, 0, l0);
  std::vector<Scalar> v;
  for (std::uint64_t i = 0; i < g.size(); ++i) v.push_back(q(static_cast<long>(rng.below(7)), 1 + static_cast<long>(rng.below(4))));
  return CellDensity(g, v);
}

}  // namespace

TEST_CASE("coupling values") {
  const KernelParams k = KernelParams::exact(2, 2, 1);
  const CellGrid g0(2, 2, 0, 0);
  CHECK(coupling(k, 0, 0, g0.cell(0), g0.cell(0)) == q(3, 2));
  const CellGrid g1(2, 2, 1, 0);
  CHECK(coupling(k, 1, 0, g1.cell(0), g1.cell(1)) == q(1, 2));
  const CellGrid g(2, 2, 0, 1);
  CHECK(coupling(k, 0, 1, g.cell(0), g.cell(1)) == q(1));
  for (int l = 0; l <= 3; ++l) {
    const CouplingMatrix J(k, 0, l);
    const Scalar vol = ball_volume(k, -l);
    CHECK(vol * vol * J.diagonal() == same_cell_interaction(k, l));
    for (std::uint64_t a = 0; a < J.grid().size(); ++a)
      for (std::uint64_t b = 0; b < J.grid().size(); ++b) {
        CHECK(J(a, b) == J(b, a));
        CHECK(vol * vol * J(a, b) == pair_cell_interaction(k, J.grid(), a, b));
      }
  }
  CHECK_THROWS_AS(coupling(k, 0, 1, g.cell(0), g0.cell(0)), ParameterError);
}

TEST_CASE("coupling table materializes only small lattices") {
  const KernelParams k = KernelParams::exact(2, 2, 1);
  CHECK(CouplingMatrix(k, 0, 6).materialized());
  const CouplingMatrix big(k, 0, 7);
  CHECK_FALSE(big.materialized());
  CHECK(big(0, 1) == big.diagonal() * q(0) + k.kernel(-6));
}

TEST_CASE("spin-glass energy of the confined gas") {
  const KernelParams k = KernelParams::exact(2, 2, 1);
  for (int l = 0; l <= 4; ++l) {
    const CellGrid g(2, 2, 0, l);
    SpinGlassInstance inst{0, l, std::vector<Scalar>(g.size(), q(1)), std::vector<Scalar>(g.size(), q(1))};
    CHECK(discrete_energy(inst, k) == q(5, 2));
    CHECK(spin_glass_hamiltonian(inst, k) == q(-5, 2));
    SpinGlassInstance zero = inst;
    for (auto& r : zero.rho) r = q(0);
    CHECK(discrete_energy(zero, k).is_zero());
    SpinGlassInstance twice = inst;
    for (auto& r : twice.rho) r = q(2);
    // 4 * (3/2) + 2 * 1.
    CHECK(discrete_energy(twice, k) == q(8));
  }
  SpinGlassInstance bad{0, 1, std::vector<Scalar>(4, q(1)), std::vector<Scalar>(3, q(1))};
  CHECK_THROWS_AS(discrete_energy(bad, k), ParameterError);
  bad.v0.push_back(q(1));
  bad.rho[0] = q(-1);
  CHECK_THROWS_AS(discrete_energy(bad, k), DomainError);
}

TEST_CASE("spin-glass sum equals the continuum cell energy") {
  SeededRng rng(5);
  const KernelParams k = KernelParams::exact(2, 2, 1);
  for (int t = 0; t < 3; ++t) {
    const CellDensity rho = step(rng, 2);
    const CellDensity v0 = step(rng, 2);
    const Scalar ref = continuum_energy(rho, v0, k);
    for (int l = 2; l <= 4; ++l) {
      const auto inst = SpinGlassInstance::from_densities(approximate(rho, l), approximate(v0, l));
      CHECK(discrete_energy(inst, k) == ref);
      CHECK(mutual_energy(rho, rho, k) + potential_integral(rho, Potential::cell_table(v0, q(0))) == ref);
    }
  }
}

TEST_CASE("continuum limit study") {
  SeededRng rng(9);
  const KernelParams k = KernelParams::exact(2, 2, 1);
  const CellDensity rho = step(rng, 2);
  const CellDensity v0 = step(rng, 2);
  const auto rows = continuum_limit_study(rho, v0, k, {0, 1, 2, 3, 4});
  REQUIRE(rows.size() == 5);
  CHECK_FALSE(rows[0].gap.is_zero());
  CHECK_FALSE(rows[1].gap.is_zero());
  for (int i = 2; i < 5; ++i) CHECK(rows[i].gap.is_zero());

  const CellDensity flat = CellDensity::constant(CellGrid(2, 2, 0, 0), q(3));
  for (const auto& r : continuum_limit_study(flat, flat, k, {0, 1, 2, 3})) CHECK(r.gap.is_zero());

  const KernelParams f(2, 2, 1.0, Mode::floating);
  const auto frows = continuum_limit_study(rho.to_mode(Mode::floating), v0.to_mode(Mode::floating), f, {0, 1, 2, 3, 4});
  for (std::size_t i = 0; i < rows.size(); ++i)
    CHECK(relative_difference(rows[i].energy.to_mode(Mode::floating), frows[i].energy) <= 1e-12);
}

TEST_CASE("approximation samples cell centers") {
  SeededRng rng(3);
  const CellDensity rho = step(rng, 2);
  CHECK(approximate(rho, 2) == rho);
  CHECK(approximate(rho, 4).mass() == rho.mass());
  const CellDensity coarse = approximate(rho, 1);
  for (std::uint64_t c = 0; c < coarse.grid().size(); ++c) CHECK(coarse.value(c) == rho.value(c * 4));
  const Potential omega = Potential::radial_step(2, 2, {{0, q(1)}}, q(0));
  const CellDensity one = approximate(omega, CellGrid(2, 2, 0, 3));
  for (const auto& v : one.values()) CHECK(v == q(1));
  CHECK_THROWS_AS(approximate(Potential::confined(2, 2, 0, q(1)), CellGrid(2, 2, 1, 0)), DomainError);
  // Riemann sums of a radial step converge from above as cells shrink.
  const Potential bump = Potential::radial_step(2, 2, {{-3, q(8)}, {0, q(0)}}, q(0));
  Scalar prev = Scalar::infinity(Mode::exact);
  for (int l = 0; l <= 3; ++l) {
    const Scalar m = approximate(bump, CellGrid(2, 2, 0, l)).mass();
    CHECK(m <= prev);
    prev = m;
  }
  CHECK(prev == q(8, 64));
}
