#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "padic/measures.hpp"
#include "padic/padic_core.hpp"
#include "padic/radial_oracle.hpp"
#include "padic/scalar.hpp"

namespace padic {

inline constexpr std::uint64_t kCouplingTableCells = 4096;

// J on G_l x G_l: ||x - y||^{alpha-d} off the diagonal and
// p^{l(d-alpha)} (1-p^{-d}) / (1-p^{-alpha}) on it, so that p^{-2ld} J is the
// exact cell-pair integral of the kernel.
class CouplingMatrix {
 public:
  CouplingMatrix(const KernelParams& params, int L, int l, std::uint64_t cap = kDefaultCellCap);

  const KernelParams& params() const { return params_; }
  const CellGrid& grid() const { return grid_; }
  bool materialized() const { return !table_.empty(); }

  Scalar operator()(std::uint64_t a, std::uint64_t b) const;
  const Scalar& diagonal() const { return level_values_.back(); }
  // J for cells sharing exactly s leading digits (s = L + l is the diagonal).
  const Scalar& at_level(int s) const { return level_values_.at(static_cast<std::size_t>(s)); }
  int level(std::uint64_t a, std::uint64_t b) const;

 private:
  KernelParams params_;
  CellGrid grid_;
  std::vector<Scalar> level_values_;
  std::vector<std::uint8_t> table_;
};

Scalar coupling(const KernelParams& params, int L, int l, const LatticeCell& a, const LatticeCell& b);

struct SpinGlassInstance {
  int L = 0;
  int l = 0;
  std::vector<Scalar> rho;  // one value per cell of G_l
  std::vector<Scalar> v0;

  static SpinGlassInstance from_densities(const CellDensity& rho, const CellDensity& v0);
  CellGrid grid(const KernelParams& params) const;
  // Throws when sizes mismatch, rho is negative or a value is infinite.
  void validate(const KernelParams& params) const;
};

// I_L(rho_l dx) = sum p^{-2ld} J rho rho + sum p^{-ld} rho V_0, summed pair by pair.
Scalar discrete_energy(const SpinGlassInstance& inst, const KernelParams& params);
// H_{L,l} = -I_L.
Scalar spin_glass_hamiltonian(const SpinGlassInstance& inst, const KernelParams& params);

// f sampled at the cell centers of `grid`.
CellDensity approximate(const std::function<Scalar(const PadicPoint&)>& f, const CellGrid& grid);
CellDensity approximate(const CellDensity& f, int l);
CellDensity approximate(const Potential& f, const CellGrid& grid);

struct LimitRow {
  int l;
  Scalar energy;
  Scalar gap;  // energy - I_L(rho dx)
};

// rho and v0 are step functions on one lattice; rows for each requested depth.
std::vector<LimitRow> continuum_limit_study(const CellDensity& rho, const CellDensity& v0,
                                            const KernelParams& params, const std::vector<int>& depths);

// The reference I_L(rho dx) used by the study.
Scalar continuum_energy(const CellDensity& rho, const CellDensity& v0, const KernelParams& params);

}  // namespace padic
