#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "padic/measures.hpp"
#include "padic/padic_core.hpp"
#include "padic/radial_oracle.hpp"
#include "padic/scalar.hpp"

namespace padic {

// Proportional placement of p^{2Md} points: ball k (a depth-M cell of B_L)
// gets floor(p^{2Md} mu(B_k)) + eps_k points, one per depth-(2M+K) sub-cell.
struct PlacementPlan {
  int M = 0;
  int K = 0;
  int L = 0;
  std::vector<long> floors;
  std::vector<int> eps;
  std::vector<Scalar> targets;
  std::vector<std::uint64_t> sub_cells;  // indices in the depth-(2M+K) lattice
  std::vector<PadicPoint> points;

  long count(std::uint64_t ball) const { return floors[ball] + eps[ball]; }
  long total() const;
};

// mu lives at depth M on B_L; values must lie in (0, p^{Kd} - 1] and mu must
// be a probability density.
PlacementPlan recovery_place(const CellDensity& mu, int K);

struct WeakGap {
  Scalar gap;    // |int phi dmu_M - int phi dmu|
  Scalar bound;  // p^{(M+L)d} p^{-2Md} max|phi|
  bool within = false;
};

// phi must be locally constant at a depth no finer than mu's.
WeakGap weak_gap(const DiscreteMeasure& mu_M, const CellDensity& mu, const CellDensity& phi);

struct AnnealSchedule {
  double initial_temperature = 1.0;
  double decay = 0.95;
  std::uint64_t steps_per_temperature = 0;  // 0 means 200 n
  int temperatures = 60;
  std::uint64_t seed = 42;
  std::uint64_t recompute_every = 10000;  // accepted moves between full recomputes

  void validate() const;
};

struct TraceRow {
  std::uint64_t step;
  double temperature;
  double H;
  double best_H;
};

struct AnnealResult {
  std::vector<std::uint64_t> cells;  // occupied cells of the lattice
  std::vector<PadicPoint> points;    // their centers
  Scalar energy;                     // exact H_n of the returned configuration
  Scalar initial_energy;
  std::vector<TraceRow> trace;
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
};

// Simulated annealing of H_n over configurations of n distinct cell centers
// of G_l on B_L. Cells where V is infinite are never proposed.
AnnealResult anneal_minimize(int n, const Potential& V, const KernelParams& params, int L, int l,
                             const AnnealSchedule& schedule);

// Minimum of H_n over all hard-core configurations on the same lattice,
// by dynamic programming over the ball tree.
Scalar lattice_optimum(int n, const Potential& V, const KernelParams& params, int L, int l);

// Largest |count - n mu0(cell)| over the depth-j cells of mu0's ball.
Scalar count_deviation(const std::vector<PadicPoint>& points, const CellDensity& mu0, int j);

struct GammaRow {
  int l;
  long n;
  Scalar achieved;   // H_n / n^2
  Scalar reference;  // I(mu0)
  Scalar gap;        // achieved - reference
  double wall_seconds;
  std::vector<Scalar> count_deviation;  // depths j = 0..l
};

// For each l: n = p^{ld} points annealed on the depth-(l+1) lattice of mu0's
// ball, compared with I(mu0).
std::vector<GammaRow> gamma_experiment(const Potential& V, const KernelParams& params,
                                       const CellDensity& mu0, const std::vector<int>& levels,
                                       const AnnealSchedule& schedule);

// Number of points on each sphere ||x|| = p^j (below-resolution points under
// the below-resolution key).
std::map<Norm, long> sphere_support_histogram(const std::vector<PadicPoint>& points);

}  // namespace padic
