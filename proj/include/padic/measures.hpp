#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "padic/padic_core.hpp"
#include "padic/radial_oracle.hpp"
#include "padic/scalar.hpp"

namespace padic {

struct Atom {
  PadicPoint point;
  Scalar weight;
};

// Weighted atoms sharing one precision window; signed weights are allowed.
class DiscreteMeasure {
 public:
  explicit DiscreteMeasure(std::vector<Atom> atoms);
  // (1/n) sum of delta_{x_i}.
  static DiscreteMeasure empirical(const std::vector<PadicPoint>& points, Mode mode);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  Mode mode() const { return mode_; }

  Scalar mass() const;
  bool is_nonnegative() const;
  // Nonnegative with unit mass: exactly in exact mode, within tol in float mode.
  bool is_probability(double tol = 1e-12) const;

 private:
  std::vector<Atom> atoms_;
  Mode mode_ = Mode::exact;
};

// Piecewise-constant density on the cells of G_l inside B_L; zero outside B_L.
class CellDensity {
 public:
  CellDensity(CellGrid grid, std::vector<Scalar> values);
  static CellDensity constant(const CellGrid& grid, const Scalar& value);
  // Omega(||x||), the indicator of Z_p^d, tabulated at depth l.
  static CellDensity unit_ball(long p, int d, int l, Mode mode);

  const CellGrid& grid() const { return grid_; }
  const std::vector<Scalar>& values() const { return values_; }
  const Scalar& value(std::uint64_t index) const { return values_.at(index); }
  Mode mode() const { return mode_; }

  Scalar cell_volume() const;
  Scalar cell_mass(std::uint64_t index) const { return values_[index] * cell_volume(); }
  Scalar mass() const;
  bool is_zero() const;
  bool is_nonnegative() const;
  bool is_probability(double tol = 1e-12) const;
  // Density at x; zero outside B_L.
  Scalar value_at(const PadicPoint& x) const;

  // Same function on a deeper lattice (children inherit the parent value).
  CellDensity refined(int depth) const;
  // Same function on a larger ball (zero on the new cells).
  CellDensity lifted(int outer_scale) const;

  CellDensity operator+(const CellDensity& other) const;
  CellDensity operator-(const CellDensity& other) const;
  CellDensity scaled(const Scalar& factor) const;
  CellDensity to_mode(Mode mode) const;

  friend bool operator==(const CellDensity& a, const CellDensity& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  CellGrid grid_;
  std::vector<Scalar> values_;
  Mode mode_;
};

// Both densities re-expressed on the smallest common (L, l) lattice.
std::pair<CellDensity, CellDensity> on_common_grid(const CellDensity& a, const CellDensity& b);

// External potential V: a radial step function or a cell table on a finite
// ball B_L, with a constant (possibly +inf) value outside.
class Potential {
 public:
  enum class Kind { radial_step, cell_table };

  // thresholds[k] is the value on p^{k'} < ||x|| <= p^k, where k' is the next
  // smaller key; the smallest key covers the whole ball below it. The largest
  // key is the radius exponent L of the finite region.
  static Potential radial_step(long p, int d, std::map<int, Scalar> thresholds, Scalar outside);
  // V0 on B_L, +inf outside: the confining potential of the unit-ball gas when L = 0.
  static Potential confined(long p, int d, int L, const Scalar& inside);
  static Potential cell_table(CellDensity table, Scalar outside);

  Kind kind() const { return kind_; }
  long p() const { return p_; }
  int dimension() const { return d_; }
  int region_scale() const { return region_; }
  Mode mode() const { return outside_.mode(); }
  const Scalar& outside() const { return outside_; }
  const std::map<int, Scalar>& thresholds() const { return thresholds_; }
  const std::optional<CellDensity>& table() const { return table_; }

  Scalar at(const PadicPoint& x) const;
  // Radial potentials only.
  Scalar at_norm(const Norm& n) const;
  // Exact integral of V over one cell of `grid`.
  Scalar cell_integral(const CellGrid& grid, std::uint64_t index) const;
  Scalar lower_bound() const;

 private:
  Potential(Kind kind, long p, int d, int region, Scalar outside);
  Scalar radial_ball_integral(int top) const;

  Kind kind_;
  long p_;
  int d_;
  int region_;
  Scalar outside_;
  std::map<int, Scalar> thresholds_;
  std::optional<CellDensity> table_;
};

// E(mu, nu) for cell densities, including the exact same-cell integrals.
// Evaluated level by level over the ball hierarchy.
Scalar mutual_energy(const CellDensity& mu, const CellDensity& nu, const KernelParams& params);
// The same double integral as an explicit sum of pair_cell_interaction terms.
Scalar mutual_energy_pairwise(const CellDensity& mu, const CellDensity& nu,
                              const KernelParams& params);
// Sum of w_i v_j g(x_i - y_j). InfiniteEnergyError when two atoms coincide.
Scalar mutual_energy(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const KernelParams& params);
Scalar mutual_energy(const DiscreteMeasure& mu, const CellDensity& nu, const KernelParams& params);
// Sum over i != j of w_i w_j g(x_i - x_j): the energy off the diagonal.
Scalar offdiagonal_energy(const DiscreteMeasure& mu, const KernelParams& params);

// H_n = sum_{i != j} g(x_i - x_j) + n sum_i V(x_i), ordered pairs.
// PrecisionError on a below-resolution pair; +inf when some V(x_i) is +inf.
Scalar hamiltonian(const std::vector<PadicPoint>& points, const Potential& V,
                   const KernelParams& params);

Scalar potential_integral(const CellDensity& mu, const Potential& V);
Scalar potential_integral(const DiscreteMeasure& mu, const Potential& V);

// I(mu) = E(mu, mu) + integral of V dmu. For a discrete measure the energy is
// taken off the diagonal, so I of an empirical measure equals H_n / n^2.
Scalar mean_field_I(const CellDensity& mu, const Potential& V, const KernelParams& params);
Scalar mean_field_I(const DiscreteMeasure& mu, const Potential& V, const KernelParams& params);

// h(x) = integral of g(x - y) dmu(y).
Scalar potential_h(const CellDensity& mu, const PadicPoint& x, const KernelParams& params);
Scalar potential_h(const DiscreteMeasure& mu, const PadicPoint& x, const KernelParams& params);
// h at every cell center of mu's own lattice.
std::vector<Scalar> potential_h_on_grid(const CellDensity& mu, const KernelParams& params);

// g * rho tabulated at the cells of B_R (R >= rho's L) at rho's depth, with
// tail coefficient equal to the mass of rho.
RadialTailFunction kernel_convolution(const CellDensity& rho, int R, const KernelParams& params);

struct FrostmanViolation {
  PadicPoint point;
  bool on_support;
  // value - C on the support; C - value off the support.
  Scalar deficit;
};

struct FrostmanReport {
  Scalar constant;  // C = I(mu) - (1/2) integral of V dmu
  std::optional<Scalar> support_min;
  std::optional<Scalar> support_max;
  std::optional<Scalar> off_support_min;
  std::vector<FrostmanViolation> violations;
  Scalar tolerance;
  bool passed = false;
};

inline constexpr double kFrostmanFloatTolerance = 1e-9;

// Evaluates h + V/2 at the given points and tests the equilibrium conditions:
// constant on the support, at least C elsewhere. tol is ignored in exact mode.
FrostmanReport frostman_check(const CellDensity& mu, const Potential& V, const KernelParams& params,
                              const std::vector<PadicPoint>& support_points,
                              const std::vector<PadicPoint>& off_support_points,
                              double tol = kFrostmanFloatTolerance);

// mu * delta_n: the depth-n density p^{nd} * mu(cell) on the lattice of B_L.
CellDensity mollify(const DiscreteMeasure& mu, int L, int n);

struct PositivityReport {
  int trials = 0;
  int zero_measures = 0;
  int proportional_pairs = 0;
  std::vector<std::string> violations;
  bool passed() const { return violations.empty(); }
};

// Randomized exact checks of E(mu, mu) >= 0 (= 0 iff mu = 0), Cauchy-Schwarz
// (equality iff proportional) and the convexity identity
// lambda E(mu) + (1-lambda) E(nu) - E(lambda mu + (1-lambda) nu)
//   = lambda (1-lambda) E(mu - nu).
PositivityReport positivity_suite(const KernelParams& params, int max_depth, int trials,
                                  SeededRng& rng);

}  // namespace padic
