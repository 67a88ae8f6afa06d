#include "padic/spinglass.hpp"

#include "padic/errors.hpp"
#include "padic/parallel.hpp"

namespace padic {

CouplingMatrix::CouplingMatrix(const KernelParams& params, int L, int l, std::uint64_t cap)
    : params_(params), grid_(params.p(), params.d(), L, l, cap) {
  const int D = grid_.levels();
  level_values_.reserve(static_cast<std::size_t>(D) + 1);
  for (int s = 0; s < D; ++s) level_values_.push_back(params_.kernel(L - s));
  const Scalar vol = ball_volume(params_, -l);
  level_values_.push_back(same_cell_interaction(params_, l) / (vol * vol));

  const std::uint64_t n = grid_.size();
  if (n <= kCouplingTableCells) {
    table_.resize(n * n);
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b)
        table_[a * n + b] = static_cast<std::uint8_t>(grid_.shared_levels(a, b));
  }
}

int CouplingMatrix::level(std::uint64_t a, std::uint64_t b) const {
  if (a >= grid_.size() || b >= grid_.size()) throw DomainError("cell index outside G_l");
  if (materialized()) return table_[a * grid_.size() + b];
  return grid_.shared_levels(a, b);
}

Scalar CouplingMatrix::operator()(std::uint64_t a, std::uint64_t b) const {
  return level_values_[static_cast<std::size_t>(level(a, b))];
}

Scalar coupling(const KernelParams& params, int L, int l, const LatticeCell& a,
                const LatticeCell& b) {
  if (a.L != L || b.L != L || a.l != l || b.l != l)
    throw ParameterError("cells do not belong to G_l with the given L and l");
  const CellGrid grid(params.p(), params.d(), L, l, ~std::uint64_t{0});
  const std::uint64_t ia = grid.index_of(a);
  const std::uint64_t ib = grid.index_of(b);
  if (ia == ib) {
    const Scalar vol = ball_volume(params, -l);
    return same_cell_interaction(params, l) / (vol * vol);
  }
  return params.kernel(grid.center_distance(ia, ib));
}

SpinGlassInstance SpinGlassInstance::from_densities(const CellDensity& rho, const CellDensity& v0) {
  if (!(rho.grid() == v0.grid())) throw ParameterError("rho and V_0 live on different lattices");
  return SpinGlassInstance{rho.grid().outer_scale(), rho.grid().depth(), rho.values(), v0.values()};
}

CellGrid SpinGlassInstance::grid(const KernelParams& params) const {
  return CellGrid(params.p(), params.d(), L, l);
}

void SpinGlassInstance::validate(const KernelParams& params) const {
  const CellGrid g = grid(params);
  if (rho.size() != g.size() || v0.size() != g.size())
    throw ParameterError("instance tables must have one value per cell of G_l");
  for (const auto& r : rho) {
    if (r.mode() != params.mode()) throw ModeError("rho mode differs from kernel mode");
    if (r.is_infinite() || r.sign() < 0) throw DomainError("rho must be finite and nonnegative");
  }
  for (const auto& v : v0) {
    if (v.mode() != params.mode()) throw ModeError("V_0 mode differs from kernel mode");
    if (v.is_infinite()) throw DomainError("V_0 must be finite on G_l");
  }
}

Scalar discrete_energy(const SpinGlassInstance& inst, const KernelParams& params) {
  inst.validate(params);
  const CouplingMatrix J(params, inst.L, inst.l);
  const std::uint64_t n = J.grid().size();
  const int D = J.grid().levels();
  const Scalar cell = ball_volume(params, -inst.l);
  const Mode mode = params.mode();

  // Per block: sum of rho_a rho_b grouped by the level of the pair, then one
  // multiplication by J per level.
  const Scalar quadratic = blocked_sum(n, mode, [&](std::size_t begin, std::size_t end) {
    std::vector<Scalar> by_level(static_cast<std::size_t>(D) + 1, Scalar::zero(mode));
    for (std::size_t a = begin; a < end; ++a) {
      if (inst.rho[a].is_zero()) continue;
      for (std::uint64_t b = 0; b < n; ++b) {
        if (inst.rho[b].is_zero()) continue;
        by_level[static_cast<std::size_t>(J.level(a, b))] += inst.rho[a] * inst.rho[b];
      }
    }
    Scalar s = Scalar::zero(mode);
    for (int k = 0; k <= D; ++k) s += J.at_level(k) * by_level[static_cast<std::size_t>(k)];
    return s;
  });

  Scalar linear = Scalar::zero(mode);
  for (std::uint64_t a = 0; a < n; ++a) linear += inst.rho[a] * inst.v0[a];
  return cell * cell * quadratic + cell * linear;
}

Scalar spin_glass_hamiltonian(const SpinGlassInstance& inst, const KernelParams& params) {
  return -discrete_energy(inst, params);
}

CellDensity approximate(const std::function<Scalar(const PadicPoint&)>& f, const CellGrid& grid) {
  std::vector<Scalar> v;
  v.reserve(grid.size());
  for (std::uint64_t c = 0; c < grid.size(); ++c) v.push_back(f(grid.center(c)));
  return CellDensity(grid, std::move(v));
}

CellDensity approximate(const CellDensity& f, int l) {
  if (l >= f.grid().depth()) return f.refined(l);
  // A coarse center has zero digits below depth l, so it lies in the first
  // fine cell of its ball.
  const CellGrid coarse = f.grid().at_depth(l);
  const std::uint64_t per = f.grid().cells_per_ball(l);
  std::vector<Scalar> v;
  v.reserve(coarse.size());
  for (std::uint64_t c = 0; c < coarse.size(); ++c) v.push_back(f.value(c * per));
  return CellDensity(coarse, std::move(v));
}

CellDensity approximate(const Potential& f, const CellGrid& grid) {
  return approximate(
      [&](const PadicPoint& x) {
        Scalar v = f.at(x);
        if (v.is_infinite()) throw DomainError("cannot tabulate an infinite potential value");
        return v;
      },
      grid);
}

Scalar continuum_energy(const CellDensity& rho, const CellDensity& v0, const KernelParams& params) {
  const Potential V = Potential::cell_table(v0, Scalar::zero(v0.mode()));
  return mean_field_I(rho, V, params);
}

std::vector<LimitRow> continuum_limit_study(const CellDensity& rho, const CellDensity& v0,
                                            const KernelParams& params, const std::vector<int>& depths) {
  const Scalar reference = continuum_energy(rho, v0, params);
  std::vector<LimitRow> rows;
  rows.reserve(depths.size());
  for (int l : depths) {
    const auto inst = SpinGlassInstance::from_densities(approximate(rho, l), approximate(v0, l));
    const Scalar e = discrete_energy(inst, params);
    rows.push_back(LimitRow{l, e, e - reference});
  }
  return rows;
}

}  // namespace padic
