#include "padic/radial_oracle.hpp"

#include <cmath>
#include <string>

#include "padic/errors.hpp"

namespace padic {

KernelParams::KernelParams(long p, int d, double alpha, Mode mode)
    : p_(p), d_(d), alpha_(alpha), mode_(mode) {
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw ParameterError("dimension d must be >= 1");
  if (!(alpha > 0.0 && alpha < static_cast<double>(d)))
    throw ParameterError("kernel requires d > alpha > 0 (got d = " + std::to_string(d) +
                         ", alpha = " + std::to_string(alpha) + ")");
  if (mode == Mode::exact) {
    if (alpha != std::floor(alpha))
      throw ModeError("exact mode requires an integer alpha");
    alpha_int_ = static_cast<long>(alpha);
  }
}

Scalar KernelParams::power(long alpha_coeff, long constant) const {
  if (mode_ == Mode::exact) return Scalar(rational_power(p_, alpha_coeff * alpha_int_ + constant));
  return Scalar(std::pow(static_cast<double>(p_),
                         static_cast<double>(alpha_coeff) * alpha_ + static_cast<double>(constant)));
}

Scalar KernelParams::kernel(const Norm& n) const {
  if (n.below_resolution())
    throw PrecisionError("kernel evaluated on a pair closer than the shared resolution");
  return kernel(*n.exponent);
}

Scalar gamma_p(long p, int d, double alpha, Mode mode) {
  if (alpha == 0.0 || alpha == static_cast<double>(d))
    throw DomainError("Gamma_p^(d)(alpha) is undefined for alpha = 0 or alpha = d");
  if (mode == Mode::exact) {
    if (alpha != std::floor(alpha)) throw ModeError("exact mode requires an integer alpha");
    const long a = static_cast<long>(alpha);
    const Rational num = Rational(1) - rational_power(p, a - d);
    const Rational den = Rational(1) - rational_power(p, -a);
    return Scalar(Rational(num / den));
  }
  const double pd = static_cast<double>(p);
  return Scalar((1.0 - std::pow(pd, alpha - d)) / (1.0 - std::pow(pd, -alpha)));
}

Scalar gamma_p(const KernelParams& params) {
  return gamma_p(params.p(), params.d(), params.alpha(), params.mode());
}

Scalar c_dalpha(const KernelParams& params) {
  return (params.power(1, -params.d()) - params.one()) / (params.one() - params.power(-1, 0));
}

Scalar ball_volume(const KernelParams& params, int r) { return params.power(0, long(r) * params.d()); }

Scalar sphere_volume(const KernelParams& params, int r) {
  return params.power(0, long(r) * params.d()) * (params.one() - params.power(0, -params.d()));
}

Scalar shell_integral(const KernelParams& params, int r) {
  return (params.one() - params.power(0, -params.d())) * params.power(r, 0) /
         (params.one() - params.power(-1, 0));
}

Scalar shell_integral_truncated(const KernelParams& params, int r, int terms) {
  Scalar sum = params.zero();
  for (int j = 0; j <= terms; ++j) sum += params.kernel(r - j) * sphere_volume(params, r - j);
  return sum;
}

Scalar uniform_ball_potential(const KernelParams& params, int r, const Norm& x_norm) {
  if (x_norm.below_resolution() || *x_norm.exponent <= r) return shell_integral(params, r);
  return ball_volume(params, r) * params.kernel(*x_norm.exponent);
}

Scalar same_cell_interaction(const KernelParams& params, int depth) {
  return ball_volume(params, -depth) * shell_integral(params, -depth);
}

Scalar pair_cell_interaction(const KernelParams& params, const CellGrid& grid, std::uint64_t a,
                             std::uint64_t b) {
  if (grid.p() != params.p() || grid.dimension() != params.d())
    throw ParameterError("lattice does not match kernel p, d");
  if (a == b) return same_cell_interaction(params, grid.depth());
  const Scalar vol = ball_volume(params, -grid.depth());
  return vol * vol * params.kernel(grid.center_distance(a, b));
}

Scalar pair_cell_interaction(const KernelParams& params, const LatticeCell& a,
                             const LatticeCell& b) {
  if (a.L != b.L || a.l != b.l) throw ParameterError("cells belong to different lattices");
  const CellGrid grid(params.p(), params.d(), a.L, a.l, ~std::uint64_t{0});
  return pair_cell_interaction(params, grid, grid.index_of(a), grid.index_of(b));
}

Scalar lemma1_closed(const KernelParams& params, const Norm& s) {
  if (s.below_resolution()) throw DomainError("lemma1 requires x != y");
  const Scalar coeff = (params.one() - Scalar::fraction(1, params.p(), params.mode())) /
                       (params.one() - params.power(1, -params.d()));
  return coeff * params.kernel(s);
}

Scalar lemma1_truncated(const KernelParams& params, const Norm& s, int T) {
  if (s.below_resolution()) throw DomainError("lemma1 requires x != y");
  if (T < 0) throw DomainError("truncation depth T must be >= 0");
  // Shell |t| = p^{-j} contributes p^{-j(d-alpha-1)} * p^{-j}(1 - p^{-1}).
  const Scalar shell_volume_factor = params.one() - Scalar::fraction(1, params.p(), params.mode());
  Scalar sum = params.zero();
  for (int j = 0; j <= T; ++j)
    sum += params.power(j, -long(j) * (params.d() - 1)) * params.power(0, -j) * shell_volume_factor;
  return sum * params.kernel(s);
}

Scalar fundamental_solution_eval(const KernelParams& params, const Norm& s) {
  if (s.below_resolution()) throw DomainError("fundamental solution evaluated at s = 0");
  return (params.one() - params.power(-1, 0)) / (params.one() - params.power(1, -params.d())) *
         params.kernel(s);
}

Scalar capacity_ball(const KernelParams& params, int r) {
  return params.power(-r, long(r) * params.d()) * (params.one() - params.power(-1, 0)) /
         (params.one() - params.power(0, -params.d()));
}

Scalar taibleson_apply(const RadialTailFunction& f, const KernelParams& params,
                       std::uint64_t x_index) {
  const CellGrid& grid = f.grid;
  if (grid.p() != params.p() || grid.dimension() != params.d())
    throw ParameterError("function table does not match kernel p, d");
  if (f.values.size() != grid.size()) throw ParameterError("function table has wrong size");
  if (!f.tail) throw DomainError("D^alpha needs a declared c*||x||^{alpha-d} tail outside the table");
  if (x_index >= grid.size()) throw DomainError("evaluation cell outside the table region");

  const int levels = grid.levels();
  const int R = grid.outer_scale();
  const int l = grid.depth();
  const Scalar& fx = f.values[x_index];

  // Table cells grouped by the length s of their common digit prefix with x;
  // every cell at prefix s sits at distance p^{R-s} from x.
  std::vector<Scalar> sums(static_cast<std::size_t>(levels), params.zero());
  std::vector<long> counts(static_cast<std::size_t>(levels), 0);
  for (std::uint64_t c = 0; c < grid.size(); ++c) {
    if (c == x_index) continue;
    const auto s = static_cast<std::size_t>(grid.shared_levels(x_index, c));
    sums[s] += f.values[c];
    ++counts[s];
  }
  const Scalar cell_volume = params.power(0, -long(l) * params.d());
  Scalar integral = params.zero();
  for (int s = 0; s < levels; ++s) {
    if (counts[static_cast<std::size_t>(s)] == 0) continue;
    const int e = R - s;
    const Scalar weight = cell_volume * params.power(-e, -long(e) * params.d());
    integral += weight * (sums[static_cast<std::size_t>(s)] -
                          params.integer(counts[static_cast<std::size_t>(s)]) * fx);
  }
  // Shells ||y|| = p^e, e > R: f(x-y) = c p^{e(alpha-d)}.
  integral += *f.tail * params.power(0, -long(R + 1) * params.d());
  integral -= fx * (params.one() - params.power(0, -params.d())) * params.power(-(R + 1), 0) /
              (params.one() - params.power(-1, 0));

  const Scalar kappa =
      (params.one() - params.power(1, 0)) / (params.one() - params.power(-1, -params.d()));
  return kappa * integral;
}

Scalar taibleson_apply(const RadialTailFunction& f, const KernelParams& params,
                       const PadicPoint& x) {
  return taibleson_apply(f, params, f.grid.locate(x));
}

namespace {

LatticeCell ball_as_cell(long p, int d, int r) {
  const int L = std::max(r, 0);
  return LatticeCell{L, -r, PadicPoint::zero(p, d, L, -r)};
}

struct Welford {
  std::uint64_t n = 0;
  double mean = 0;
  double m2 = 0;
  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (x - mean);
  }
  double std_error() const {
    if (n < 2) return 0.0;
    return std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  }
};

// Rewrites y in the window of x (both must represent values of B_L).
PadicPoint rewindow(const PadicPoint& y, int K, int M) {
  std::vector<BigInt> m;
  m.reserve(y.mantissas().size());
  BigInt modulus;
  mpz_ui_pow_ui(modulus.get_mpz_t(), static_cast<unsigned long>(y.p()),
                static_cast<unsigned long>(K + M));
  for (const auto& v : y.mantissas()) {
    BigInt c = v;
    if (K >= y.scale()) {
      BigInt f;
      mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(y.p()),
                    static_cast<unsigned long>(K - y.scale()));
      c *= f;
    } else {
      BigInt f;
      mpz_ui_pow_ui(f.get_mpz_t(), static_cast<unsigned long>(y.p()),
                    static_cast<unsigned long>(y.scale() - K));
      if (mpz_divisible_p(c.get_mpz_t(), f.get_mpz_t()) == 0)
        throw DomainError("point not representable at scale K");
      c /= f;
    }
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
    m.push_back(c);
  }
  return PadicPoint(y.p(), K, M, std::move(m));
}

}  // namespace

MonteCarloEstimate mc_ball_potential(const KernelParams& params, int r, const PadicPoint& x,
                                     std::uint64_t samples, int M, SeededRng& rng) {
  const LatticeCell ball = ball_as_cell(params.p(), params.d(), r);
  const KernelParams fp = params.with_mode(Mode::floating);
  const int K = std::max(ball.L, x.scale());
  const PadicPoint xw = rewindow(x, K, M);
  Welford acc;
  MonteCarloEstimate out;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const PadicPoint y = rewindow(sample_uniform(ball, M, rng), K, M);
    const Norm n = distance(xw, y);
    if (n.below_resolution()) {
      ++out.below_resolution;
      continue;
    }
    acc.add(fp.kernel(n).to_double());
  }
  const double vol = ball_volume(fp, r).to_double();
  out.mean = acc.mean * vol;
  out.std_error = acc.std_error() * vol;
  out.samples = acc.n;
  return out;
}

MonteCarloEstimate mc_ball_energy(const KernelParams& params, int r, std::uint64_t pairs, int M,
                                  SeededRng& rng) {
  const LatticeCell ball = ball_as_cell(params.p(), params.d(), r);
  const KernelParams fp = params.with_mode(Mode::floating);
  Welford acc;
  MonteCarloEstimate out;
  for (std::uint64_t i = 0; i < pairs; ++i) {
    const PadicPoint x = sample_uniform(ball, M, rng);
    const PadicPoint y = sample_uniform(ball, M, rng);
    const Norm n = distance(x, y);
    if (n.below_resolution()) {
      ++out.below_resolution;
      continue;
    }
    acc.add(fp.kernel(n).to_double());
  }
  out.mean = acc.mean;
  out.std_error = acc.std_error();
  out.samples = acc.n;
  return out;
}

}  // namespace padic
