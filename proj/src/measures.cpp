#include "padic/measures.hpp"

#include <algorithm>
#include <sstream>

#include "padic/errors.hpp"
#include "padic/parallel.hpp"

namespace padic {

// ---------------------------------------------------------------------------
// DiscreteMeasure

DiscreteMeasure::DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw ParameterError("a discrete measure needs at least one atom");
  mode_ = atoms_.front().weight.mode();
  const PadicPoint& ref = atoms_.front().point;
  for (const auto& a : atoms_) {
    if (!a.point.same_window(ref))
      throw ParameterError("atoms must share p, d, K and M");
    if (a.weight.mode() != mode_) throw ModeError("atoms mix exact and float weights");
    if (a.weight.is_infinite()) throw DomainError("atom weights must be finite");
  }
}

DiscreteMeasure DiscreteMeasure::empirical(const std::vector<PadicPoint>& points, Mode mode) {
  if (points.empty()) throw ParameterError("empirical measure of an empty configuration");
  const Scalar w = Scalar::fraction(1, static_cast<long>(points.size()), mode);
  std::vector<Atom> atoms;
  atoms.reserve(points.size());
  for (const auto& x : points) atoms.push_back(Atom{x, w});
  return DiscreteMeasure(std::move(atoms));
}

Scalar DiscreteMeasure::mass() const {
  Scalar m = Scalar::zero(mode_);
  for (const auto& a : atoms_) m += a.weight;
  return m;
}

bool DiscreteMeasure::is_nonnegative() const {
  return std::all_of(atoms_.begin(), atoms_.end(), [](const Atom& a) { return a.weight.sign() >= 0; });
}

bool DiscreteMeasure::is_probability(double tol) const {
  if (!is_nonnegative()) return false;
  if (mode_ == Mode::exact) return mass() == Scalar::one(mode_);
  return std::fabs(mass().to_double() - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// CellDensity

CellDensity::CellDensity(CellGrid grid, std::vector<Scalar> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_.size())
    throw ParameterError("density table has " + std::to_string(values_.size()) +
                         " values for " + std::to_string(grid_.size()) + " cells");
  mode_ = values_.front().mode();
  for (const auto& v : values_) {
    if (v.mode() != mode_) throw ModeError("density table mixes exact and float values");
    if (v.is_infinite()) throw DomainError("density values must be finite");
  }
}

CellDensity CellDensity::constant(const CellGrid& grid, const Scalar& value) {
  return CellDensity(grid, std::vector<Scalar>(grid.size(), value));
}

CellDensity CellDensity::unit_ball(long p, int d, int l, Mode mode) {
  return constant(CellGrid(p, d, 0, l), Scalar::one(mode));
}

Scalar CellDensity::cell_volume() const {
  return pow_p(grid_.p(), -long(grid_.depth()) * grid_.dimension(), mode_);
}

Scalar CellDensity::mass() const {
  std::vector<Scalar> terms(values_.begin(), values_.end());
  return tree_sum(std::move(terms), mode_) * cell_volume();
}

bool CellDensity::is_zero() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& v) { return v.is_zero(); });
}

bool CellDensity::is_nonnegative() const {
  return std::all_of(values_.begin(), values_.end(), [](const Scalar& v) { return v.sign() >= 0; });
}

bool CellDensity::is_probability(double tol) const {
  if (!is_nonnegative()) return false;
  if (mode_ == Mode::exact) return mass() == Scalar::one(mode_);
  return std::fabs(mass().to_double() - 1.0) <= tol;
}

Scalar CellDensity::value_at(const PadicPoint& x) const {
  const Norm n = norm(x);
  if (n.exponent && *n.exponent > grid_.outer_scale()) return Scalar::zero(mode_);
  return values_[grid_.locate(x)];
}

CellDensity CellDensity::refined(int depth) const {
  if (depth < grid_.depth()) throw DomainError("refinement depth below current depth");
  const CellGrid fine = grid_.at_depth(depth);
  const std::uint64_t children = fine.size() / grid_.size();
  std::vector<Scalar> v;
  v.reserve(fine.size());
  for (std::uint64_t j = 0; j < fine.size(); ++j) v.push_back(values_[j / children]);
  return CellDensity(fine, std::move(v));
}

CellDensity CellDensity::lifted(int outer_scale) const {
  if (outer_scale < grid_.outer_scale()) throw DomainError("cannot shrink the support ball");
  // The old index digits are the trailing digits of the new index, and the
  // new leading digits vanish exactly on the old ball.
  const CellGrid big(grid_.p(), grid_.dimension(), outer_scale, grid_.depth(), grid_.cap());
  std::vector<Scalar> v(big.size(), Scalar::zero(mode_));
  std::copy(values_.begin(), values_.end(), v.begin());
  return CellDensity(big, std::move(v));
}

std::pair<CellDensity, CellDensity> on_common_grid(const CellDensity& a, const CellDensity& b) {
  if (a.grid().p() != b.grid().p() || a.grid().dimension() != b.grid().dimension())
    throw ParameterError("densities live over different p or d");
  const int L = std::max(a.grid().outer_scale(), b.grid().outer_scale());
  const int l = std::max(a.grid().depth(), b.grid().depth());
  return {a.lifted(L).refined(l), b.lifted(L).refined(l)};
}

CellDensity CellDensity::operator+(const CellDensity& other) const {
  auto [a, b] = on_common_grid(*this, other);
  std::vector<Scalar> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b.values()[i];
  return CellDensity(a.grid(), std::move(v));
}

CellDensity CellDensity::operator-(const CellDensity& other) const {
  auto [a, b] = on_common_grid(*this, other);
  std::vector<Scalar> v(a.values());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= b.values()[i];
  return CellDensity(a.grid(), std::move(v));
}

CellDensity CellDensity::scaled(const Scalar& factor) const {
  std::vector<Scalar> v(values_);
  for (auto& x : v) x *= factor;
  return CellDensity(grid_, std::move(v));
}

CellDensity CellDensity::to_mode(Mode mode) const {
  std::vector<Scalar> v;
  v.reserve(values_.size());
  for (const auto& x : values_) v.push_back(x.to_mode(mode));
  return CellDensity(grid_, std::move(v));
}

// ---------------------------------------------------------------------------
// Potential

Potential::Potential(Kind kind, long p, int d, int region, Scalar outside)
    : kind_(kind), p_(p), d_(d), region_(region), outside_(std::move(outside)) {}

Potential Potential::radial_step(long p, int d, std::map<int, Scalar> thresholds, Scalar outside) {
  if (thresholds.empty()) throw ParameterError("radial potential needs at least one threshold");
  if (!is_prime(p)) throw ParameterError("p is not prime");
  for (const auto& [k, v] : thresholds) {
    if (v.mode() != outside.mode()) throw ModeError("potential mixes exact and float values");
    if (v.is_infinite()) throw DomainError("potential must be finite on its region");
  }
  Potential V(Kind::radial_step, p, d, thresholds.rbegin()->first, std::move(outside));
  V.thresholds_ = std::move(thresholds);
  return V;
}

Potential Potential::confined(long p, int d, int L, const Scalar& inside) {
  return radial_step(p, d, {{L, inside}}, Scalar::infinity(inside.mode()));
}

Potential Potential::cell_table(CellDensity table, Scalar outside) {
  if (table.mode() != outside.mode()) throw ModeError("potential mixes exact and float values");
  const CellGrid& g = table.grid();
  Potential V(Kind::cell_table, g.p(), g.dimension(), g.outer_scale(), std::move(outside));
  V.table_ = std::move(table);
  return V;
}

Scalar Potential::at_norm(const Norm& n) const {
  if (kind_ != Kind::radial_step) throw DomainError("at_norm on a non-radial potential");
  if (n.below_resolution()) return thresholds_.begin()->second;
  if (*n.exponent > region_) return outside_;
  return thresholds_.lower_bound(*n.exponent)->second;
}

Scalar Potential::at(const PadicPoint& x) const {
  if (x.p() != p_ || x.dimension() != d_) throw ParameterError("point does not match potential p, d");
  if (kind_ == Kind::radial_step) return at_norm(norm(x));
  const Norm n = norm(x);
  if (n.exponent && *n.exponent > region_) return outside_;
  return table_->values()[table_->grid().locate(x)];
}

Scalar Potential::radial_ball_integral(int top) const {
  const Mode m = mode();
  auto vol = [&](int e) { return pow_p(p_, long(e) * d_, m); };
  Scalar total = Scalar::zero(m);
  if (top > region_) {
    total += outside_ * (vol(top) - vol(region_));
    top = region_;
  }
  auto prev = thresholds_.end();
  for (auto it = thresholds_.begin(); it != thresholds_.end(); prev = it, ++it) {
    if (prev == thresholds_.end()) {
      total += it->second * vol(std::min(it->first, top));
      continue;
    }
    if (top <= prev->first) break;
    total += it->second * (vol(std::min(it->first, top)) - vol(prev->first));
  }
  return total;
}

Scalar Potential::cell_integral(const CellGrid& grid, std::uint64_t index) const {
  if (grid.p() != p_ || grid.dimension() != d_)
    throw ParameterError("lattice does not match potential p, d");
  const Mode m = mode();
  const int l = grid.depth();
  const Scalar vol = pow_p(p_, -long(l) * d_, m);
  const Norm cn = grid.center_norm(index);

  if (kind_ == Kind::radial_step) {
    if (cn.below_resolution()) return radial_ball_integral(-l);
    return at_norm(cn) * vol;
  }

  const CellDensity& tab = *table_;
  const CellGrid& tg = tab.grid();
  if (!cn.below_resolution() && *cn.exponent > region_) return outside_ * vol;
  if (-l > region_) {
    // The origin cell swallows the whole table region.
    Scalar inner = Scalar::zero(m);
    for (const auto& v : tab.values()) inner += v;
    inner *= tab.cell_volume();
    return inner + outside_ * (vol - pow_p(p_, long(region_) * d_, m));
  }
  const PadicPoint c = grid.center(index);
  if (l >= tg.depth()) return tab.values()[tg.locate(c)] * vol;
  const CellGrid coarse = tg.at_depth(l);
  const std::uint64_t ball = coarse.locate(c);
  const std::uint64_t per = tg.cells_per_ball(l);
  Scalar sum = Scalar::zero(m);
  for (std::uint64_t j = ball * per; j < (ball + 1) * per; ++j) sum += tab.values()[j];
  return sum * tab.cell_volume();
}

Scalar Potential::lower_bound() const {
  Scalar best = outside_;
  if (kind_ == Kind::radial_step) {
    for (const auto& [k, v] : thresholds_) best = std::min(best, v);
  } else {
    for (const auto& v : table_->values()) best = std::min(best, v);
  }
  return best;
}

// ---------------------------------------------------------------------------
// Energies

namespace {

void require_match(const CellGrid& g, const KernelParams& params) {
  if (g.p() != params.p() || g.dimension() != params.d())
    throw ParameterError("lattice does not match kernel p, d");
}

void require_mode(Mode m, const KernelParams& params) {
  if (m != params.mode()) throw ModeError("measure mode differs from kernel mode");
}

// masses[t][b]: mass of the b-th ball sharing t leading digits, t = 0..D.
std::vector<std::vector<Scalar>> ball_masses(const CellDensity& mu) {
  const CellGrid& g = mu.grid();
  const int D = g.levels();
  const std::uint64_t q = g.branching();
  std::vector<std::vector<Scalar>> masses(static_cast<std::size_t>(D) + 1);
  auto& leaf = masses[static_cast<std::size_t>(D)];
  leaf.reserve(g.size());
  for (std::uint64_t c = 0; c < g.size(); ++c) leaf.push_back(mu.cell_mass(c));
  for (int t = D - 1; t >= 0; --t) {
    const auto& child = masses[static_cast<std::size_t>(t) + 1];
    std::vector<Scalar> level(child.size() / q, Scalar::zero(mu.mode()));
    for (std::size_t b = 0; b < level.size(); ++b)
      for (std::uint64_t j = 0; j < q; ++j) level[b] += child[b * q + j];
    masses[static_cast<std::size_t>(t)] = std::move(level);
  }
  return masses;
}

Scalar dot(const std::vector<Scalar>& a, const std::vector<Scalar>& b, Mode mode) {
  return blocked_sum(a.size(), mode, [&](std::size_t begin, std::size_t end) {
    Scalar s = Scalar::zero(mode);
    for (std::size_t i = begin; i < end; ++i) s += a[i] * b[i];
    return s;
  });
}

// h at the center of cell `c`, from precomputed ball masses.
Scalar h_from_masses(const CellDensity& mu, const std::vector<std::vector<Scalar>>& masses,
                     std::uint64_t c, const KernelParams& params) {
  const CellGrid& g = mu.grid();
  const int D = g.levels();
  Scalar h = mu.value(c) * shell_integral(params, -g.depth());
  std::uint64_t width = g.size();  // cells per level-t ball
  for (int t = 0; t < D; ++t) {
    const std::uint64_t child_width = width / g.branching();
    const Scalar ring = masses[static_cast<std::size_t>(t)][c / width] -
                        masses[static_cast<std::size_t>(t) + 1][c / child_width];
    if (!ring.is_zero()) h += ring * params.kernel(g.outer_scale() - t);
    width = child_width;
  }
  return h;
}

}  // namespace

Scalar mutual_energy(const CellDensity& mu, const CellDensity& nu, const KernelParams& params) {
  require_mode(mu.mode(), params);
  require_mode(nu.mode(), params);
  auto [a, b] = on_common_grid(mu, nu);
  require_match(a.grid(), params);
  const CellGrid& g = a.grid();
  const int D = g.levels();
  const auto ma = ball_masses(a);
  const auto mb = ball_masses(b);
  // S_t = sum over level-t balls of mass_a * mass_b. Pairs first separated at
  // level t + 1 sit at distance p^{L - t}.
  std::vector<Scalar> S;
  S.reserve(static_cast<std::size_t>(D) + 1);
  for (int t = 0; t <= D; ++t)
    S.push_back(dot(ma[static_cast<std::size_t>(t)], mb[static_cast<std::size_t>(t)], params.mode()));
  Scalar energy = params.zero();
  for (int t = 0; t < D; ++t)
    energy += params.kernel(g.outer_scale() - t) *
              (S[static_cast<std::size_t>(t)] - S[static_cast<std::size_t>(t) + 1]);
  const Scalar vol = a.cell_volume();
  energy += S[static_cast<std::size_t>(D)] * same_cell_interaction(params, g.depth()) / (vol * vol);
  return energy;
}

Scalar mutual_energy_pairwise(const CellDensity& mu, const CellDensity& nu,
                              const KernelParams& params) {
  require_mode(mu.mode(), params);
  require_mode(nu.mode(), params);
  auto [a, b] = on_common_grid(mu, nu);
  const CellGrid& g = a.grid();
  require_match(g, params);
  const std::uint64_t n = g.size();
  return blocked_sum(n, params.mode(), [&](std::size_t begin, std::size_t end) {
    Scalar s = params.zero();
    for (std::size_t i = begin; i < end; ++i) {
      if (a.value(i).is_zero()) continue;
      for (std::uint64_t j = 0; j < n; ++j) {
        if (b.value(j).is_zero()) continue;
        s += a.value(i) * b.value(j) * pair_cell_interaction(params, g, i, j);
      }
    }
    return s;
  });
}

Scalar mutual_energy(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                     const KernelParams& params) {
  require_mode(mu.mode(), params);
  require_mode(nu.mode(), params);
  const auto& xs = mu.atoms();
  const auto& ys = nu.atoms();
  return blocked_sum(xs.size(), params.mode(), [&](std::size_t begin, std::size_t end) {
    Scalar s = params.zero();
    for (std::size_t i = begin; i < end; ++i) {
      for (const auto& y : ys) {
        const Norm n = distance(xs[i].point, y.point);
        if (n.below_resolution())
          throw InfiniteEnergyError("coincident atoms give infinite mutual energy");
        s += xs[i].weight * y.weight * params.kernel(n);
      }
    }
    return s;
  });
}

Scalar mutual_energy(const DiscreteMeasure& mu, const CellDensity& nu, const KernelParams& params) {
  require_mode(mu.mode(), params);
  Scalar s = params.zero();
  for (const auto& a : mu.atoms()) s += a.weight * potential_h(nu, a.point, params);
  return s;
}

Scalar offdiagonal_energy(const DiscreteMeasure& mu, const KernelParams& params) {
  require_mode(mu.mode(), params);
  const auto& xs = mu.atoms();
  return blocked_sum(xs.size(), params.mode(), [&](std::size_t begin, std::size_t end) {
    Scalar s = params.zero();
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = 0; j < xs.size(); ++j) {
        if (i == j) continue;
        const Norm n = distance(xs[i].point, xs[j].point);
        if (n.below_resolution())
          throw InfiniteEnergyError("coincident atoms give infinite energy");
        s += xs[i].weight * xs[j].weight * params.kernel(n);
      }
    }
    return s;
  });
}

Scalar hamiltonian(const std::vector<PadicPoint>& points, const Potential& V,
                   const KernelParams& params) {
  const std::size_t n = points.size();
  if (n == 0) return params.zero();
  for (const auto& x : points)
    if (!x.same_window(points.front())) throw ParameterError("points must share p, d, K and M");

  // Pair counts per distance exponent; integer counts make the sum order-free.
  const std::size_t blocks = (n + kReductionBlock - 1) / kReductionBlock;
  std::vector<std::map<int, long>> partial(blocks);
  parallel_for(blocks, [&](std::size_t blk) {
    const std::size_t end = std::min(n, (blk + 1) * kReductionBlock);
    for (std::size_t i = blk * kReductionBlock; i < end; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Norm d = distance(points[i], points[j]);
        if (d.below_resolution())
          throw PrecisionError("points " + std::to_string(i) + " and " + std::to_string(j) +
                               " are closer than the resolution p^{-M}");
        ++partial[blk][*d.exponent];
      }
    }
  });
  std::map<int, long> counts;
  for (const auto& m : partial)
    for (const auto& [e, c] : m) counts[e] += c;

  Scalar pair_sum = params.zero();
  for (const auto& [e, c] : counts) pair_sum += params.integer(2 * c) * params.kernel(e);

  Scalar confinement = params.zero();
  for (const auto& x : points) confinement += V.at(x);
  return pair_sum + params.integer(static_cast<long>(n)) * confinement;
}

Scalar potential_integral(const CellDensity& mu, const Potential& V) {
  Scalar s = Scalar::zero(mu.mode());
  for (std::uint64_t c = 0; c < mu.grid().size(); ++c) {
    if (mu.value(c).is_zero()) continue;
    s += mu.value(c) * V.cell_integral(mu.grid(), c);
  }
  return s;
}

Scalar potential_integral(const DiscreteMeasure& mu, const Potential& V) {
  Scalar s = Scalar::zero(mu.mode());
  for (const auto& a : mu.atoms()) {
    if (a.weight.is_zero()) continue;
    s += a.weight * V.at(a.point);
  }
  return s;
}

Scalar mean_field_I(const CellDensity& mu, const Potential& V, const KernelParams& params) {
  const Scalar external = potential_integral(mu, V);
  if (external.is_infinite()) return external;
  return mutual_energy(mu, mu, params) + external;
}

Scalar mean_field_I(const DiscreteMeasure& mu, const Potential& V, const KernelParams& params) {
  const Scalar external = potential_integral(mu, V);
  if (external.is_infinite()) return external;
  return offdiagonal_energy(mu, params) + external;
}

Scalar potential_h(const CellDensity& mu, const PadicPoint& x, const KernelParams& params) {
  require_mode(mu.mode(), params);
  const CellGrid& g = mu.grid();
  require_match(g, params);
  const Norm n = norm(x);
  if (n.exponent && *n.exponent > g.outer_scale()) return mu.mass() * params.kernel(n);
  const std::uint64_t cx = g.locate(x);
  return h_from_masses(mu, ball_masses(mu), cx, params);
}

std::vector<Scalar> potential_h_on_grid(const CellDensity& mu, const KernelParams& params) {
  require_mode(mu.mode(), params);
  require_match(mu.grid(), params);
  const auto masses = ball_masses(mu);
  std::vector<Scalar> h(mu.grid().size(), params.zero());
  parallel_for(h.size(), [&](std::size_t c) { h[c] = h_from_masses(mu, masses, c, params); });
  return h;
}

Scalar potential_h(const DiscreteMeasure& mu, const PadicPoint& x, const KernelParams& params) {
  require_mode(mu.mode(), params);
  Scalar h = params.zero();
  for (const auto& a : mu.atoms()) {
    const Norm n = distance(x, a.point);
    if (n.below_resolution())
      throw InfiniteEnergyError("potential evaluated on an atom is infinite");
    h += a.weight * params.kernel(n);
  }
  return h;
}

RadialTailFunction kernel_convolution(const CellDensity& rho, int R, const KernelParams& params) {
  const CellDensity big = rho.lifted(R);
  return RadialTailFunction{big.grid(), potential_h_on_grid(big, params), rho.mass()};
}

// ---------------------------------------------------------------------------
// Frostman conditions

FrostmanReport frostman_check(const CellDensity& mu, const Potential& V, const KernelParams& params,
                              const std::vector<PadicPoint>& support_points,
                              const std::vector<PadicPoint>& off_support_points, double tol) {
  require_mode(mu.mode(), params);
  const Scalar tolerance =
      params.mode() == Mode::exact ? params.zero() : Scalar(std::max(tol, 0.0));
  const Scalar half = Scalar::fraction(1, 2, params.mode());
  const Scalar external = potential_integral(mu, V);
  if (external.is_infinite()) throw DomainError("V is infinite on a set of positive mu-mass");

  FrostmanReport report{mutual_energy(mu, mu, params) + half * external, std::nullopt,
                        std::nullopt, std::nullopt, {}, tolerance, false};
  const Scalar& C = report.constant;
  const auto masses = ball_masses(mu);
  auto total_potential = [&](const PadicPoint& x) {
    const Norm n = norm(x);
    Scalar h = (n.exponent && *n.exponent > mu.grid().outer_scale())
                   ? mu.mass() * params.kernel(n)
                   : h_from_masses(mu, masses, mu.grid().locate(x), params);
    return h + half * V.at(x);
  };

  for (const auto& x : support_points) {
    const Scalar v = total_potential(x);
    if (!report.support_min || v < *report.support_min) report.support_min = v;
    if (!report.support_max || v > *report.support_max) report.support_max = v;
    if (v.is_infinite() || (v - C).abs() > tolerance)
      report.violations.push_back({x, true, v.is_infinite() ? v : v - C});
  }
  for (const auto& x : off_support_points) {
    const Scalar v = total_potential(x);
    if (!report.off_support_min || v < *report.off_support_min) report.off_support_min = v;
    if (v.is_finite() && v < C - tolerance) report.violations.push_back({x, false, C - v});
  }
  bool ok = true;
  if (report.support_min) {
    ok = ok && report.support_max->is_finite() &&
         *report.support_max - *report.support_min <= tolerance;
  }
  if (report.off_support_min) ok = ok && *report.off_support_min >= C - tolerance;
  report.passed = ok;
  return report;
}

// ---------------------------------------------------------------------------

CellDensity mollify(const DiscreteMeasure& mu, int L, int n) {
  if (!mu.is_nonnegative()) throw DomainError("mollify expects a nonnegative measure");
  const PadicPoint& ref = mu.atoms().front().point;
  const CellGrid grid(ref.p(), ref.dimension(), L, n);
  std::vector<Scalar> v(grid.size(), Scalar::zero(mu.mode()));
  const Scalar scale = pow_p(ref.p(), long(n) * ref.dimension(), mu.mode());
  for (const auto& a : mu.atoms()) v[grid.locate(a.point)] += a.weight * scale;
  return CellDensity(grid, std::move(v));
}

namespace {

CellDensity random_signed_density(long p, int d, int depth, SeededRng& rng) {
  const CellGrid grid(p, d, 0, depth);
  std::vector<Scalar> v;
  v.reserve(grid.size());
  for (std::uint64_t i = 0; i < grid.size(); ++i) {
    const long num = static_cast<long>(rng.below(13)) - 6;
    const long den = static_cast<long>(rng.below(3)) + 1;
    v.push_back(Scalar(Rational(num, den)));
  }
  return CellDensity(grid, std::move(v));
}

// True when b = c * a for some scalar c (a nonzero).
bool proportional(const CellDensity& a0, const CellDensity& b0) {
  auto [a, b] = on_common_grid(a0, b0);
  std::optional<Scalar> ratio;
  for (std::uint64_t i = 0; i < a.grid().size(); ++i) {
    if (a.value(i).is_zero()) {
      if (!b.value(i).is_zero()) return false;
      continue;
    }
    const Scalar r = b.value(i) / a.value(i);
    if (ratio && *ratio != r) return false;
    ratio = r;
  }
  return true;
}

}  // namespace

PositivityReport positivity_suite(const KernelParams& params, int max_depth, int trials,
                                  SeededRng& rng) {
  if (params.mode() != Mode::exact) throw ModeError("the positivity suite runs in exact mode");
  PositivityReport report;
  const long p = params.p();
  const int d = params.d();
  auto fail = [&](int trial, const std::string& what) {
    std::ostringstream os;
    os << "trial " << trial << ": " << what;
    report.violations.push_back(os.str());
  };

  for (int trial = 0; trial < trials; ++trial) {
    ++report.trials;
    CellDensity mu = random_signed_density(p, d, static_cast<int>(rng.below(max_depth + 1)), rng);
    if (trial % 25 == 0) {
      mu = mu.scaled(params.zero());
      ++report.zero_measures;
    }
    CellDensity nu = random_signed_density(p, d, static_cast<int>(rng.below(max_depth + 1)), rng);
    if (trial % 25 == 1) {
      nu = mu.scaled(Scalar(Rational(static_cast<long>(rng.below(7)) - 3, 2)));
      ++report.proportional_pairs;
    }

    const Scalar e_mu = mutual_energy(mu, mu, params);
    const Scalar e_nu = mutual_energy(nu, nu, params);
    const Scalar e_mn = mutual_energy(mu, nu, params);

    if (e_mu.sign() < 0) fail(trial, "E(mu,mu) = " + e_mu.str() + " < 0");
    if (e_mu.is_zero() != mu.is_zero()) fail(trial, "E(mu,mu) = 0 does not match mu = 0");

    const Scalar lhs = e_mn * e_mn;
    const Scalar rhs = e_mu * e_nu;
    if (lhs > rhs) fail(trial, "Cauchy-Schwarz violated");
    if (!nu.is_zero()) {
      const bool equal = lhs == rhs;
      if (equal != proportional(nu, mu)) fail(trial, "Cauchy-Schwarz equality case mismatch");
    }

    const long den = static_cast<long>(rng.below(9)) + 2;
    const long num = static_cast<long>(rng.below(static_cast<std::uint64_t>(den - 1))) + 1;
    const Scalar lambda(Rational(num, den));
    const Scalar co = params.one() - lambda;
    const CellDensity mix = mu.scaled(lambda) + nu.scaled(co);
    const Scalar gap = lambda * e_mu + co * e_nu - mutual_energy(mix, mix, params);
    const CellDensity diff = mu - nu;
    const Scalar identity = lambda * co * mutual_energy(diff, diff, params);
    if (gap != identity) fail(trial, "convexity identity mismatch");
    if (!diff.is_zero() && gap.sign() <= 0) fail(trial, "strict convexity violated");
  }
  return report;
}

}  // namespace padic
