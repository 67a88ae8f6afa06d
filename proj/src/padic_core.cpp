#include "padic/padic_core.hpp"

#include <string>

#include "padic/errors.hpp"

namespace padic {

namespace {

BigInt big_power(long p, long k) {
  BigInt r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

std::uint64_t checked_power(long p, long k, std::uint64_t cap, const char* what) {
  std::uint64_t r = 1;
  for (long i = 0; i < k; ++i) {
    if (r > cap / static_cast<std::uint64_t>(p))
      throw CapacityError(std::string(what) + ": p^" + std::to_string(k) + " exceeds cap " +
                          std::to_string(cap));
    r *= static_cast<std::uint64_t>(p);
  }
  return r;
}

// Valuation of a nonzero integer.
int valuation(const BigInt& m, long p) {
  if (p == 2) return static_cast<int>(mpz_scan1(m.get_mpz_t(), 0));
  BigInt rest;
  BigInt prime(p);
  return static_cast<int>(mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), prime.get_mpz_t()));
}

}  // namespace

bool is_prime(long p) {
  if (p < 2) return false;
  for (long f = 2; f * f <= p; ++f)
    if (p % f == 0) return false;
  return true;
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x70616469u};
  engine_.seed(seq);
}

std::uint64_t SeededRng::below(std::uint64_t n) {
  if (n == 0) throw DomainError("SeededRng::below(0)");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % n;
}

double SeededRng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

BigInt SeededRng::below(const BigInt& n) {
  if (n <= 0) throw DomainError("SeededRng::below(n <= 0)");
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  while (true) {
    BigInt r = 0;
    std::size_t filled = 0;
    while (filled < bits) {
      const std::size_t take = std::min<std::size_t>(64, bits - filled);
      std::uint64_t chunk = engine_();
      if (take < 64) chunk &= (std::uint64_t{1} << take) - 1;
      BigInt c;
      mpz_import(c.get_mpz_t(), 1, 1, sizeof(chunk), 0, 0, &chunk);
      r = (r << static_cast<mp_bitcnt_t>(take)) | c;
      filled += take;
    }
    if (r < n) return r;
  }
}

Scalar Norm::value(Mode mode) const {
  if (!exponent) throw PrecisionError("norm below resolution has no value");
  return pow_p(p, *exponent, mode);
}

PadicCoordinate::PadicCoordinate(long p, int K, int M, BigInt mantissa)
    : p_(p), K_(K), M_(M), m_(std::move(mantissa)) {
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (K < 0) throw ParameterError("scale K must be >= 0");
  if (M < -K) throw ParameterError("precision M must be >= -K");
  if (m_ < 0 || m_ >= big_power(p, K + M))
    throw ParameterError("mantissa outside [0, p^{K+M})");
}

Norm PadicCoordinate::norm() const {
  if (m_ == 0) return Norm{p_, std::nullopt};
  return Norm{p_, K_ - valuation(m_, p_)};
}

PadicPoint::PadicPoint(long p, int K, int M, std::vector<BigInt> mantissas)
    : p_(p), K_(K), M_(M), m_(std::move(mantissas)) {
  if (m_.empty()) throw ParameterError("dimension d must be >= 1");
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (K < 0) throw ParameterError("scale K must be >= 0");
  if (M < -K) throw ParameterError("precision M must be >= -K");
  const BigInt modulus = big_power(p, K + M);
  for (const auto& m : m_)
    if (m < 0 || m >= modulus) throw ParameterError("mantissa outside [0, p^{K+M})");
}

PadicPoint PadicPoint::from_rationals(long p, int K, int M, const std::vector<Rational>& values) {
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  const BigInt modulus = big_power(p, K + M);
  std::vector<BigInt> mantissas;
  mantissas.reserve(values.size());
  for (Rational q : values) {
    q.canonicalize();
    BigInt num = q.get_num();
    BigInt den = q.get_den();
    int den_val = 0;
    if (den != 0) {
      BigInt rest;
      BigInt prime(p);
      den_val = static_cast<int>(mpz_remove(rest.get_mpz_t(), den.get_mpz_t(), prime.get_mpz_t()));
      den = rest;
    }
    if (den_val > K)
      throw DomainError("value " + q.get_str() + " has norm above p^K");
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), modulus.get_mpz_t()) == 0 && modulus != 1)
      throw DomainError("denominator not invertible modulo p^{K+M}");
    BigInt m = num * big_power(p, K - den_val) * inv;
    mpz_mod(m.get_mpz_t(), m.get_mpz_t(), modulus.get_mpz_t());
    mantissas.push_back(m);
  }
  return PadicPoint(p, K, M, std::move(mantissas));
}

PadicPoint PadicPoint::zero(long p, int d, int K, int M) {
  return PadicPoint(p, K, M, std::vector<BigInt>(static_cast<std::size_t>(d), BigInt(0)));
}

Norm norm(const PadicPoint& x) {
  Norm best{x.p(), std::nullopt};
  for (int i = 0; i < x.dimension(); ++i) {
    const Norm n = x.coordinate(i).norm();
    if (n > best) best = n;
  }
  return best;
}

PadicPoint subtract(const PadicPoint& x, const PadicPoint& y) {
  if (!x.same_window(y))
    throw ParameterError("subtract: points differ in p, d, K or M");
  const BigInt modulus = big_power(x.p(), x.scale() + x.precision());
  std::vector<BigInt> diff(x.mantissas().size());
  for (std::size_t i = 0; i < diff.size(); ++i) {
    diff[i] = x.mantissas()[i] - y.mantissas()[i];
    if (diff[i] < 0) diff[i] += modulus;
  }
  return PadicPoint(x.p(), x.scale(), x.precision(), std::move(diff));
}

Norm distance(const PadicPoint& x, const PadicPoint& y) {
  if (!x.same_window(y))
    throw ParameterError("distance: points differ in p, d, K or M");
  // |m_x - m_y| < p^{K+M}, so its valuation equals that of the reduced difference.
  Norm best{x.p(), std::nullopt};
  BigInt diff;
  for (std::size_t i = 0; i < x.mantissas().size(); ++i) {
    mpz_sub(diff.get_mpz_t(), x.mantissas()[i].get_mpz_t(), y.mantissas()[i].get_mpz_t());
    if (diff == 0) continue;
    const Norm n{x.p(), x.scale() - valuation(diff, x.p())};
    if (n > best) best = n;
  }
  return best;
}

CellGrid::CellGrid(long p, int d, int L, int l, std::uint64_t cap)
    : p_(p), d_(d), L_(L), l_(l), cap_(cap) {
  if (!is_prime(p)) throw ParameterError("p = " + std::to_string(p) + " is not prime");
  if (d < 1) throw ParameterError("dimension d must be >= 1");
  if (L < 0) throw ParameterError("outer scale L must be >= 0");
  if (l < -L) throw ParameterError("cell depth l must be >= -L");
  q_ = checked_power(p, d, cap, "branching p^d");
  size_ = checked_power(p, static_cast<long>(L + l) * d, cap, "cell count p^{(L+l)d}");
  coord_modulus_ = checked_power(p, L + l, ~std::uint64_t{0}, "coordinate modulus");
}

std::vector<std::uint64_t> CellGrid::center_mantissas(std::uint64_t index) const {
  if (index >= size_) throw DomainError("cell index out of range");
  std::vector<std::uint64_t> m(static_cast<std::size_t>(d_), 0);
  // Least significant base-q digit is the finest digit (position D-1).
  std::uint64_t weight = 1;
  for (int k = 0; k < levels(); ++k) weight *= static_cast<std::uint64_t>(p_);
  for (int pos = levels() - 1; pos >= 0; --pos) {
    weight /= static_cast<std::uint64_t>(p_);  // p^{pos}
    std::uint64_t tuple = index % q_;
    index /= q_;
    for (int i = d_ - 1; i >= 0; --i) {
      m[static_cast<std::size_t>(i)] += (tuple % static_cast<std::uint64_t>(p_)) * weight;
      tuple /= static_cast<std::uint64_t>(p_);
    }
  }
  return m;
}

std::uint64_t CellGrid::index_from_mantissas(const std::vector<std::uint64_t>& mantissas) const {
  if (mantissas.size() != static_cast<std::size_t>(d_))
    throw ParameterError("mantissa vector has wrong dimension");
  std::vector<std::uint64_t> rest = mantissas;
  for (auto& r : rest) r %= coord_modulus_;
  std::uint64_t index = 0;
  for (int pos = 0; pos < levels(); ++pos) {
    std::uint64_t tuple = 0;
    for (int i = 0; i < d_; ++i) {
      tuple = tuple * static_cast<std::uint64_t>(p_) + rest[static_cast<std::size_t>(i)] % p_;
      rest[static_cast<std::size_t>(i)] /= static_cast<std::uint64_t>(p_);
    }
    index = index * q_ + tuple;
  }
  return index;
}

PadicPoint CellGrid::center(std::uint64_t index) const {
  const auto m = center_mantissas(index);
  std::vector<BigInt> big;
  big.reserve(m.size());
  for (auto v : m) {
    BigInt b;
    mpz_import(b.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    big.push_back(b);
  }
  return PadicPoint(p_, L_, l_, std::move(big));
}

LatticeCell CellGrid::cell(std::uint64_t index) const { return LatticeCell{L_, l_, center(index)}; }

std::uint64_t CellGrid::index_of(const LatticeCell& cell) const {
  if (cell.L != L_ || cell.l != l_ || cell.center.p() != p_ || cell.center.dimension() != d_)
    throw ParameterError("cell does not belong to this lattice");
  return locate(cell.center);
}

std::uint64_t CellGrid::locate(const PadicPoint& x) const {
  if (x.p() != p_ || x.dimension() != d_) throw ParameterError("point does not match lattice p, d");
  if (x.precision() < l_)
    throw DomainError("point precision M=" + std::to_string(x.precision()) +
                      " is coarser than cell depth l=" + std::to_string(l_));
  const Norm n = norm(x);
  if (n.exponent && *n.exponent > L_)
    throw DomainError("point lies outside the ball B_" + std::to_string(L_));
  BigInt modulus(static_cast<unsigned long>(coord_modulus_));
  std::vector<std::uint64_t> m(static_cast<std::size_t>(d_));
  for (int i = 0; i < d_; ++i) {
    BigInt c = x.mantissas()[static_cast<std::size_t>(i)];
    if (L_ >= x.scale())
      c *= big_power(p_, L_ - x.scale());
    else
      c /= big_power(p_, x.scale() - L_);
    mpz_mod(c.get_mpz_t(), c.get_mpz_t(), modulus.get_mpz_t());
    m[static_cast<std::size_t>(i)] = c.get_ui();
  }
  return index_from_mantissas(m);
}

int CellGrid::shared_levels(std::uint64_t a, std::uint64_t b) const {
  int s = levels();
  while (a != b) {
    a /= q_;
    b /= q_;
    --s;
  }
  return s;
}

Norm CellGrid::center_distance(std::uint64_t a, std::uint64_t b) const {
  if (a == b) return Norm{p_, std::nullopt};
  return Norm{p_, L_ - shared_levels(a, b)};
}

Norm CellGrid::center_norm(std::uint64_t a) const { return center_distance(a, 0); }

std::uint64_t CellGrid::cells_per_ball(int depth) const {
  if (depth < -L_ || depth > l_) throw DomainError("ball depth outside [-L, l]");
  std::uint64_t r = 1;
  for (int k = depth; k < l_; ++k) r *= q_;
  return r;
}

std::uint64_t CellGrid::ancestor(std::uint64_t index, int depth) const {
  return index / cells_per_ball(depth);
}

std::vector<LatticeCell> enumerate_cells(long p, int d, int L, int l, std::uint64_t cap) {
  const CellGrid grid(p, d, L, l, cap);
  std::vector<LatticeCell> cells;
  cells.reserve(grid.size());
  for (std::uint64_t i = 0; i < grid.size(); ++i) cells.push_back(grid.cell(i));
  return cells;
}

LatticeCell reduce_to_cell(const PadicPoint& x, int L, int l) {
  const CellGrid grid(x.p(), x.dimension(), L, l, ~std::uint64_t{0});
  return grid.cell(grid.locate(x));
}

PadicPoint sample_uniform(const LatticeCell& cell, int M, SeededRng& rng) {
  if (M <= cell.l) throw DomainError("sampling precision M must exceed the cell depth");
  const long p = cell.center.p();
  const BigInt shift = big_power(p, cell.L + cell.l);
  const BigInt sub_cells = big_power(p, M - cell.l);
  std::vector<BigInt> m;
  m.reserve(cell.center.mantissas().size());
  for (const auto& c : cell.center.mantissas()) m.push_back(c + shift * rng.below(sub_cells));
  return PadicPoint(p, cell.L, M, std::move(m));
}

}  // namespace padic
