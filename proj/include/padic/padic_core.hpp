#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "padic/scalar.hpp"

namespace padic {

bool is_prime(long p);

// Reproducible random stream identified by (seed, stream). Streams with
// different indices are statistically independent; nothing is shared between
// instances.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next() { return engine_(); }
  // Uniform on [0, n), n > 0, by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n);
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  // Uniform on [0, n) for arbitrary-size n.
  BigInt below(const BigInt& n);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

// ||x||_p = p^exponent, or "below resolution" when every known digit is 0.
struct Norm {
  long p = 2;
  std::optional<int> exponent;

  bool below_resolution() const { return !exponent.has_value(); }
  // Throws PrecisionError when below resolution.
  Scalar value(Mode mode) const;

  friend bool operator==(const Norm& a, const Norm& b) {
    return a.p == b.p && a.exponent == b.exponent;
  }
  // Below-resolution sorts under every finite norm.
  friend std::strong_ordering operator<=>(const Norm& a, const Norm& b) {
    return a.exponent <=> b.exponent;
  }
};

// The value p^{-K} m known modulo p^M, with 0 <= m < p^{K+M}.
class PadicCoordinate {
 public:
  PadicCoordinate(long p, int K, int M, BigInt mantissa);

  long p() const { return p_; }
  int scale() const { return K_; }
  int precision() const { return M_; }
  const BigInt& mantissa() const { return m_; }

  // p^{K - ord(m)}; below resolution when m = 0.
  Norm norm() const;

 private:
  long p_;
  int K_;
  int M_;
  BigInt m_;
};

// A point of Q_p^d at finite precision: d coordinates sharing (p, K, M).
class PadicPoint {
 public:
  PadicPoint(long p, int K, int M, std::vector<BigInt> mantissas);

  // Rationals whose denominators carry at most p^K; the p-free part of a
  // denominator is inverted modulo p^{K+M}.
  static PadicPoint from_rationals(long p, int K, int M, const std::vector<Rational>& values);
  static PadicPoint zero(long p, int d, int K, int M);

  long p() const { return p_; }
  int dimension() const { return static_cast<int>(m_.size()); }
  int scale() const { return K_; }
  int precision() const { return M_; }
  const std::vector<BigInt>& mantissas() const { return m_; }
  PadicCoordinate coordinate(int i) const { return {p_, K_, M_, m_.at(i)}; }

  bool same_window(const PadicPoint& other) const {
    return p_ == other.p_ && K_ == other.K_ && M_ == other.M_ && dimension() == other.dimension();
  }

  friend bool operator==(const PadicPoint& a, const PadicPoint& b) {
    return a.same_window(b) && a.m_ == b.m_;
  }

 private:
  long p_;
  int K_;
  int M_;
  std::vector<BigInt> m_;
};

Norm norm(const PadicPoint& x);
// Coordinate-wise difference modulo p^{K+M}; throws ParameterError on
// mismatched windows.
PadicPoint subtract(const PadicPoint& x, const PadicPoint& y);
Norm distance(const PadicPoint& x, const PadicPoint& y);

inline constexpr std::uint64_t kDefaultCellCap = std::uint64_t{1} << 24;

// One coset of p^l Z_p^d inside B_L^d. The center has K = L, M = l and digits
// only below position L + l.
struct LatticeCell {
  int L;
  int l;
  PadicPoint center;

  friend bool operator==(const LatticeCell& a, const LatticeCell& b) {
    return a.L == b.L && a.l == b.l && a.center == b.center;
  }
};

// The finite ultrametric space G_l = p^{-L}Z_p^d / p^l Z_p^d.
//
// Cells are indexed in lexicographic-by-digits order, coarsest digit first,
// so every ball of radius p^{-j} (j <= l) is a contiguous index block and two
// distinct cells sit at distance p^{L-s}, where s is the length of the
// common leading digit prefix of their indices in base p^d.
class CellGrid {
 public:
  CellGrid(long p, int d, int L, int l, std::uint64_t cap = kDefaultCellCap);

  long p() const { return p_; }
  int dimension() const { return d_; }
  int outer_scale() const { return L_; }
  int depth() const { return l_; }
  // L + l, the number of base-p^d digits of an index.
  int levels() const { return L_ + l_; }
  std::uint64_t branching() const { return q_; }
  std::uint64_t size() const { return size_; }

  LatticeCell cell(std::uint64_t index) const;
  PadicPoint center(std::uint64_t index) const;
  // Per-coordinate mantissas of the center (values below p^{L+l}).
  std::vector<std::uint64_t> center_mantissas(std::uint64_t index) const;
  std::uint64_t index_from_mantissas(const std::vector<std::uint64_t>& mantissas) const;
  std::uint64_t index_of(const LatticeCell& cell) const;

  // Index of the cell containing x. DomainError when ||x|| > p^L or when x
  // is known to fewer digits than the cell depth.
  std::uint64_t locate(const PadicPoint& x) const;

  int shared_levels(std::uint64_t a, std::uint64_t b) const;
  // ||c_a - c_b||; below resolution iff a == b.
  Norm center_distance(std::uint64_t a, std::uint64_t b) const;
  Norm center_norm(std::uint64_t a) const;

  // Index of the depth-`depth` ball containing cell `index` (depth in [-L, l]).
  std::uint64_t ancestor(std::uint64_t index, int depth) const;
  // Number of depth-l cells inside one ball of depth `depth`.
  std::uint64_t cells_per_ball(int depth) const;

  CellGrid at_depth(int l) const { return {p_, d_, L_, l, cap_}; }
  std::uint64_t cap() const { return cap_; }

  friend bool operator==(const CellGrid& a, const CellGrid& b) {
    return a.p_ == b.p_ && a.d_ == b.d_ && a.L_ == b.L_ && a.l_ == b.l_;
  }

 private:
  long p_;
  int d_;
  int L_;
  int l_;
  std::uint64_t cap_;
  std::uint64_t q_;
  std::uint64_t size_;
  std::uint64_t coord_modulus_;  // p^{L+l}
};

std::vector<LatticeCell> enumerate_cells(long p, int d, int L, int l,
                                         std::uint64_t cap = kDefaultCellCap);
LatticeCell reduce_to_cell(const PadicPoint& x, int L, int l);
// Uniform point of `cell` at precision M > l: each of the p^{(M-l)d}
// depth-M sub-cells is equally likely.
PadicPoint sample_uniform(const LatticeCell& cell, int M, SeededRng& rng);

}  // namespace padic
