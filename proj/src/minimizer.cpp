#include "padic/minimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "padic/errors.hpp"
#include "padic/parallel.hpp"

namespace padic {

namespace {

long ipow(long p, long k) {
  long r = 1;
  for (long i = 0; i < k; ++i) r *= p;
  return r;
}

Rational as_rational(const Scalar& s) {
  if (s.is_exact()) return s.rational();
  return Rational(s.to_double());
}

}  // namespace

long PlacementPlan::total() const {
  long t = 0;
  for (std::size_t k = 0; k < floors.size(); ++k) t += floors[k] + eps[k];
  return t;
}

PlacementPlan recovery_place(const CellDensity& mu, int K) {
  const CellGrid& g = mu.grid();
  const long p = g.p();
  const int d = g.dimension();
  const int M = g.depth();
  const int L = g.outer_scale();
  if (M < 0 || K < 0) throw DomainError("recovery placement needs M >= 0 and K >= 0");
  if (!mu.is_probability()) throw DomainError("mu must be a probability density");
  const Scalar upper = Scalar::integer(ipow(p, long(K) * d) - 1, mu.mode());
  for (const auto& v : mu.values()) {
    if (v.sign() <= 0 || v > upper)
      throw DomainError("density value " + v.str() + " outside (0, p^{Kd} - 1]; placement may overflow");
  }

  PlacementPlan plan;
  plan.M = M;
  plan.K = K;
  plan.L = L;
  const std::uint64_t balls = g.size();
  const long total = ipow(p, 2L * M * d);
  const Scalar scale = pow_p(p, long(M) * d, mu.mode());  // p^{2Md} * vol(cell)

  std::vector<Rational> frac(balls);
  long floor_sum = 0;
  plan.floors.resize(balls);
  plan.eps.assign(balls, 0);
  for (std::uint64_t k = 0; k < balls; ++k) {
    const Scalar t = mu.value(k) * scale;
    plan.targets.push_back(t);
    const Rational q = as_rational(t);
    BigInt f;
    mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    plan.floors[k] = f.get_si();
    frac[k] = q - Rational(f);
    floor_sum += plan.floors[k];
  }
  const long remainder = total - floor_sum;
  if (remainder < 0 || static_cast<std::uint64_t>(remainder) > balls)
    throw DomainError("target counts do not add up to p^{2Md}");
  std::vector<std::uint64_t> order(balls);
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return frac[a] > frac[b]; });
  for (long r = 0; r < remainder; ++r) plan.eps[order[static_cast<std::size_t>(r)]] = 1;

  const CellGrid fine(p, d, L, 2 * M + K);
  const std::uint64_t per = fine.size() / balls;
  for (std::uint64_t k = 0; k < balls; ++k) {
    const long c = plan.count(k);
    if (static_cast<std::uint64_t>(c) > per) throw DomainError("ball capacity p^{(M+K)d} exceeded");
    for (long j = 0; j < c; ++j) {
      const std::uint64_t idx = k * per + static_cast<std::uint64_t>(j);
      plan.sub_cells.push_back(idx);
      plan.points.push_back(fine.center(idx));
    }
  }
  return plan;
}

WeakGap weak_gap(const DiscreteMeasure& mu_M, const CellDensity& mu, const CellDensity& phi) {
  const CellGrid& g = mu.grid();
  if (phi.grid().depth() > g.depth()) throw DomainError("test function is finer than depth M");
  const Mode mode = mu.mode();
  Scalar empirical = Scalar::zero(mode);
  for (const auto& a : mu_M.atoms()) empirical += a.weight * phi.value_at(a.point);
  Scalar smooth = Scalar::zero(mode);
  for (std::uint64_t c = 0; c < g.size(); ++c) smooth += mu.cell_mass(c) * phi.value_at(g.center(c));
  Scalar sup = Scalar::zero(mode);
  for (const auto& v : phi.values()) sup = std::max(sup, v.abs());

  const int M = g.depth();
  const long d = g.dimension();
  WeakGap out{(empirical - smooth).abs(),
              pow_p(g.p(), (long(M) + g.outer_scale()) * d - 2L * M * d, mode) * sup, false};
  out.within = out.gap <= out.bound;
  return out;
}

void AnnealSchedule::validate() const {
  if (!(decay > 0.0 && decay < 1.0)) throw ParameterError("annealing decay must lie in (0, 1)");
  if (!(initial_temperature > 0.0)) throw ParameterError("initial temperature must be positive");
  if (temperatures < 1) throw ParameterError("need at least one temperature");
  if (recompute_every == 0) throw ParameterError("recompute interval must be positive");
}

namespace {

// Pair levels and kernel values of one lattice in double precision.
class LevelTable {
 public:
  LevelTable(const CellGrid& grid, const KernelParams& params) : grid_(grid) {
    const KernelParams fp = params.with_mode(Mode::floating);
    for (int s = 0; s < grid.levels(); ++s) g_.push_back(fp.kernel(grid.outer_scale() - s).to_double());
    g_.push_back(0.0);  // coincident cells never pair under the hard core
    const std::uint64_t n = grid.size();
    if (n <= 4096) {
      table_.resize(n * n);
      for (std::uint64_t a = 0; a < n; ++a)
        for (std::uint64_t b = 0; b < n; ++b)
          table_[a * n + b] = static_cast<std::uint8_t>(grid.shared_levels(a, b));
    }
  }

  double g(std::uint64_t a, std::uint64_t b) const {
    const int s = table_.empty() ? grid_.shared_levels(a, b) : table_[a * grid_.size() + b];
    return g_[static_cast<std::size_t>(s)];
  }

 private:
  const CellGrid& grid_;
  std::vector<double> g_;
  std::vector<std::uint8_t> table_;
};

double full_energy(const std::vector<std::uint64_t>& cells, const std::vector<double>& v,
                   const LevelTable& lt) {
  const std::size_t n = cells.size();
  double pairs = 0;
  double ext = 0;
  for (std::size_t i = 0; i < n; ++i) {
    ext += v[cells[i]];
    for (std::size_t j = i + 1; j < n; ++j) pairs += lt.g(cells[i], cells[j]);
  }
  return 2.0 * pairs + static_cast<double>(n) * ext;
}

std::vector<PadicPoint> centers(const CellGrid& grid, const std::vector<std::uint64_t>& cells) {
  std::vector<PadicPoint> pts;
  pts.reserve(cells.size());
  for (auto c : cells) pts.push_back(grid.center(c));
  return pts;
}

}  // namespace

AnnealResult anneal_minimize(int n, const Potential& V, const KernelParams& params, int L, int l,
                             const AnnealSchedule& schedule) {
  schedule.validate();
  const CellGrid grid(params.p(), params.d(), L, l);
  const std::uint64_t N = grid.size();
  std::vector<double> v(N);
  std::vector<std::uint64_t> admissible;
  for (std::uint64_t c = 0; c < N; ++c) {
    const Scalar val = V.at(grid.center(c));
    v[c] = val.is_infinite() ? INFINITY : val.to_double();
    if (val.is_finite()) admissible.push_back(c);
  }
  if (n < 1 || static_cast<std::uint64_t>(n) > admissible.size())
    throw DomainError("cannot place " + std::to_string(n) + " points in " +
                      std::to_string(admissible.size()) + " admissible cells");

  const LevelTable lt(grid, params);
  SeededRng rng(schedule.seed, 0);

  // Initial configuration: n distinct admissible cells by partial shuffle.
  std::vector<std::uint64_t> pool = admissible;
  std::vector<std::uint64_t> cells(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
    std::swap(pool[i], pool[j]);
    cells[i] = pool[i];
  }
  std::vector<char> occupied(N, 0);
  for (auto c : cells) occupied[c] = 1;

  AnnealResult out;
  const std::vector<std::uint64_t> initial = cells;
  double H = full_energy(cells, v, lt);
  double best = H;
  std::vector<std::uint64_t> best_cells = cells;
  const std::uint64_t steps =
      schedule.steps_per_temperature ? schedule.steps_per_temperature : 200ULL * static_cast<std::uint64_t>(n);
  const double nn = static_cast<double>(n);
  double T = schedule.initial_temperature;
  std::uint64_t step = 0;

  for (int stage = 0; stage < schedule.temperatures; ++stage) {
    for (std::uint64_t s = 0; s < steps; ++s, ++step) {
      ++out.proposals;
      const std::size_t i = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(n)));
      const std::uint64_t to = admissible[rng.below(admissible.size())];
      if (occupied[to]) continue;
      const std::uint64_t from = cells[i];
      double dpair = 0;
      for (std::size_t j = 0; j < cells.size(); ++j) {
        if (j == i) continue;
        dpair += lt.g(to, cells[j]) - lt.g(from, cells[j]);
      }
      const double delta = 2.0 * dpair + nn * (v[to] - v[from]);
      if (delta > 0 && rng.uniform01() >= std::exp(-delta / T)) continue;
      occupied[from] = 0;
      occupied[to] = 1;
      cells[i] = to;
      H += delta;
      ++out.accepted;
      if (out.accepted % schedule.recompute_every == 0) H = full_energy(cells, v, lt);
      if (H < best) {
        best = H;
        best_cells = cells;
      }
    }
    out.trace.push_back(TraceRow{step, T, H, best});
    T *= schedule.decay;
  }

  std::sort(best_cells.begin(), best_cells.end());
  out.cells = best_cells;
  out.points = centers(grid, out.cells);
  out.energy = hamiltonian(out.points, V, params);
  out.initial_energy = hamiltonian(centers(grid, initial), V, params);
  if (out.initial_energy < out.energy) {
    out.cells = initial;
    std::sort(out.cells.begin(), out.cells.end());
    out.points = centers(grid, out.cells);
    out.energy = out.initial_energy;
  }
  return out;
}

Scalar lattice_optimum(int n, const Potential& V, const KernelParams& params, int L, int l) {
  const CellGrid grid(params.p(), params.d(), L, l);
  const Mode mode = params.mode();
  const Scalar inf = Scalar::infinity(mode);
  const Scalar nS = params.integer(n);
  const std::size_t width = static_cast<std::size_t>(n) + 1;

  // f[b][k]: least energy of k points inside ball b, pairs within b only.
  std::vector<std::vector<Scalar>> f(grid.size(), std::vector<Scalar>(width, inf));
  std::uint64_t admissible = 0;
  for (std::uint64_t c = 0; c < grid.size(); ++c) {
    f[c][0] = params.zero();
    const Scalar val = V.at(grid.center(c));
    if (val.is_finite()) ++admissible;
    if (n >= 1) f[c][1] = nS * val;
  }
  if (n < 0 || static_cast<std::uint64_t>(n) > admissible)
    throw DomainError("more points than admissible cells");

  const std::uint64_t q = grid.branching();
  for (int t = grid.levels() - 1; t >= 0; --t) {
    // Pairs split between children of a level-t ball sit at distance p^{L-t}.
    const Scalar g = params.kernel(L - t);
    std::vector<std::vector<Scalar>> parent(f.size() / q);
    for (std::size_t b = 0; b < parent.size(); ++b) {
      std::vector<Scalar> acc(width, inf);
      acc[0] = params.zero();
      for (std::uint64_t c = 0; c < q; ++c) {
        const auto& child = f[b * q + c];
        std::vector<Scalar> next(width, inf);
        for (std::size_t a = 0; a < width; ++a) {
          if (acc[a].is_infinite()) continue;
          for (std::size_t k = 0; a + k < width; ++k) {
            if (child[k].is_infinite()) continue;
            const Scalar cand = acc[a] + child[k] - g * params.integer(long(k * k));
            if (next[a + k].is_infinite() || cand < next[a + k]) next[a + k] = cand;
          }
        }
        acc = std::move(next);
      }
      for (std::size_t k = 0; k < width; ++k)
        if (acc[k].is_finite()) acc[k] += g * params.integer(long(k * k));
      parent[b] = std::move(acc);
    }
    f = std::move(parent);
  }
  return f[0][static_cast<std::size_t>(n)];
}

Scalar count_deviation(const std::vector<PadicPoint>& points, const CellDensity& mu0, int j) {
  const CellGrid& g0 = mu0.grid();
  const CellDensity fine = mu0.refined(std::max(j, g0.depth()));
  const CellGrid coarse = g0.at_depth(j);
  const std::uint64_t per = fine.grid().size() / coarse.size();
  const Mode mode = mu0.mode();
  std::vector<long> counts(coarse.size(), 0);
  for (const auto& x : points) {
    const Norm nx = norm(x);
    if (nx.exponent && *nx.exponent > g0.outer_scale()) continue;
    ++counts[coarse.locate(x)];
  }
  const Scalar n = Scalar::integer(static_cast<long>(points.size()), mode);
  Scalar worst = Scalar::zero(mode);
  for (std::uint64_t c = 0; c < coarse.size(); ++c) {
    Scalar mass = Scalar::zero(mode);
    for (std::uint64_t k = c * per; k < (c + 1) * per; ++k) mass += fine.cell_mass(k);
    worst = std::max(worst, (Scalar::integer(counts[c], mode) - n * mass).abs());
  }
  return worst;
}

std::vector<GammaRow> gamma_experiment(const Potential& V, const KernelParams& params,
                                       const CellDensity& mu0, const std::vector<int>& levels,
                                       const AnnealSchedule& schedule) {
  const Scalar reference = mean_field_I(mu0, V, params);
  const int L = mu0.grid().outer_scale();
  std::vector<GammaRow> rows;
  for (int l : levels) {
    const long n = ipow(params.p(), long(l) * params.d());
    const auto start = std::chrono::steady_clock::now();
    const AnnealResult r = anneal_minimize(static_cast<int>(n), V, params, L, l + 1, schedule);
    const Scalar nS = params.integer(n);
    const Scalar achieved = r.energy / (nS * nS);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    GammaRow row{l, n, achieved, reference, achieved - reference, secs, {}};
    for (int j = 0; j <= l; ++j) row.count_deviation.push_back(count_deviation(r.points, mu0, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::map<Norm, long> sphere_support_histogram(const std::vector<PadicPoint>& points) {
  std::map<Norm, long> h;
  for (const auto& x : points) ++h[norm(x)];
  return h;
}

}  // namespace padic
