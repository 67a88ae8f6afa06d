#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "padic/padic_core.hpp"
#include "padic/scalar.hpp"

namespace padic {

// (p, d, alpha) with 0 < alpha < d, plus the arithmetic mode of every value
// derived from them. Exact mode needs an integer alpha so that p^{-alpha} is
// rational.
class KernelParams {
 public:
  KernelParams(long p, int d, double alpha, Mode mode);
  static KernelParams exact(long p, int d, int alpha) { return {p, d, double(alpha), Mode::exact}; }

  long p() const { return p_; }
  int d() const { return d_; }
  double alpha() const { return alpha_; }
  Mode mode() const { return mode_; }
  KernelParams with_mode(Mode mode) const { return {p_, d_, alpha_, mode}; }

  Scalar zero() const { return Scalar::zero(mode_); }
  Scalar one() const { return Scalar::one(mode_); }
  Scalar integer(long v) const { return Scalar::integer(v, mode_); }

  // p^{a*alpha + b}.
  Scalar power(long alpha_coeff, long constant) const;
  // g_alpha at norm p^e, i.e. p^{e(alpha - d)}.
  Scalar kernel(int norm_exponent) const { return power(norm_exponent, -long(norm_exponent) * d_); }
  // Throws PrecisionError when the norm is below resolution.
  Scalar kernel(const Norm& n) const;

  friend bool operator==(const KernelParams& a, const KernelParams& b) {
    return a.p_ == b.p_ && a.d_ == b.d_ && a.alpha_ == b.alpha_ && a.mode_ == b.mode_;
  }

 private:
  long p_;
  int d_;
  double alpha_;
  long alpha_int_ = 0;
  Mode mode_;
};

// Gamma_p^(d)(alpha) = (1 - p^{alpha-d}) / (1 - p^{-alpha}). Defined for any
// alpha outside {0, d}; DomainError otherwise.
Scalar gamma_p(long p, int d, double alpha, Mode mode);
Scalar gamma_p(const KernelParams& params);

// C_{d,alpha} = (p^{alpha-d} - 1) / (1 - p^{-alpha}), negative for alpha < d.
Scalar c_dalpha(const KernelParams& params);

Scalar ball_volume(const KernelParams& params, int r);
Scalar sphere_volume(const KernelParams& params, int r);

// Integral of ||z||^{alpha-d} over B_r, closed form.
Scalar shell_integral(const KernelParams& params, int r);
// Same integral summed sphere by sphere over S_r, S_{r-1}, ..., S_{r-T}.
Scalar shell_integral_truncated(const KernelParams& params, int r, int terms);

// Integral over y in B_r of ||x - y||^{alpha-d}, given ||x||. A norm below
// resolution counts as inside.
Scalar uniform_ball_potential(const KernelParams& params, int r, const Norm& x_norm);

// Double integral of the kernel over cell_a x cell_b of one lattice.
Scalar pair_cell_interaction(const KernelParams& params, const CellGrid& grid, std::uint64_t a,
                             std::uint64_t b);
Scalar pair_cell_interaction(const KernelParams& params, const LatticeCell& a,
                             const LatticeCell& b);
// Same-cell value p^{-l(d+alpha)} (1 - p^{-d}) / (1 - p^{-alpha}).
Scalar same_cell_interaction(const KernelParams& params, int depth);

// The integral of |t|^{2d-alpha-1} Omega(||t(z-x)||) Omega(||t(z-y)||) over
// t and z, as a function of s = ||x - y||.
Scalar lemma1_closed(const KernelParams& params, const Norm& s);
// The reduced one-dimensional integral over Z_p \ {0} summed over the shells
// |t| = p^0, ..., p^{-T}, times s^{alpha-d}. Increases to lemma1_closed.
Scalar lemma1_truncated(const KernelParams& params, const Norm& s, int T);

// G_alpha(s) = (1 - p^{-alpha}) / (1 - p^{alpha-d}) s^{alpha-d}.
Scalar fundamental_solution_eval(const KernelParams& params, const Norm& s);

// 1 / E(u_r, u_r) for the uniform probability u_r on B_r.
Scalar capacity_ball(const KernelParams& params, int r);

// A function that is locally constant at depth l on B_R (one value per cell
// of `grid`) and equals tail * ||x||^{alpha-d} for ||x|| > p^R.
struct RadialTailFunction {
  CellGrid grid;
  std::vector<Scalar> values;
  std::optional<Scalar> tail;
};

// D^alpha f(x) = (1-p^alpha)/(1-p^{-alpha-d}) * integral of
// ||y||^{-alpha-d} (f(x-y) - f(x)) dy, summed exactly: lattice shells inside
// the table plus the geometric series of the declared tail.
Scalar taibleson_apply(const RadialTailFunction& f, const KernelParams& params,
                       const PadicPoint& x);
Scalar taibleson_apply(const RadialTailFunction& f, const KernelParams& params,
                       std::uint64_t cell_index);

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
  std::uint64_t samples = 0;
  std::uint64_t below_resolution = 0;  // draws discarded as coincident
};

// Monte Carlo estimate of the integral over y in B_r of ||x-y||^{alpha-d},
// drawing y at precision M.
MonteCarloEstimate mc_ball_potential(const KernelParams& params, int r, const PadicPoint& x,
                                     std::uint64_t samples, int M, SeededRng& rng);
// Monte Carlo estimate of the mean of ||x-y||^{alpha-d} over independent
// uniform pairs in B_r, i.e. the energy of the uniform probability on B_r.
MonteCarloEstimate mc_ball_energy(const KernelParams& params, int r, std::uint64_t pairs, int M,
                                  SeededRng& rng);

}  // namespace padic
