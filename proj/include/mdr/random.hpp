#pragma once

// Reproducible random ensembles for fuzzing.
//
// Streams are std::mt19937_64 engines (fully specified by the C++ standard)
// seeded with splitmix64(seed ^ splitmix64(stream_id)). Uniform and normal
// variates are derived from the raw 64-bit output here rather than through
// <random> distributions, whose algorithms are implementation-defined.

#include <cmath>
#include <cstdint>
#include <random>

#include "mdr/core/linalg.hpp"
#include "mdr/core/operations.hpp"
#include "mdr/core/types.hpp"

namespace mdr::random {

inline std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

class SeededStream {
 public:
  SeededStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id), engine_(splitmix64(seed ^ splitmix64(stream_id))) {}

  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [lo, hi].
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    return lo + static_cast<std::uint64_t>(uniform() * static_cast<double>(span)) % span;
  }

  /// Standard normal by the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Standard complex normal, E|z|^2 = 1.
  Complex complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re * M_SQRT1_2, im * M_SQRT1_2};
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

inline Matrix ginibre(Eigen::Index rows, Eigen::Index cols, SeededStream& s) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = s.complex_normal();
  return g;
}

/// Haar isometry (rows >= cols): QR of a Ginibre matrix with the phases of
/// R's diagonal absorbed into Q.
inline Matrix haar_isometry(Eigen::Index rows, Eigen::Index cols, SeededStream& s) {
  if (rows < cols) throw Error("haar_isometry: rows < cols");
  const Matrix g = ginibre(rows, cols, s);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  const Matrix r = qr.matrixQR().topLeftCorner(cols, cols).triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < cols; ++k) {
    const Complex d = r(k, k);
    const double a = std::abs(d);
    if (a > 0.0) q.col(k) *= d / a;
  }
  return q;
}

inline Matrix haar_unitary(Eigen::Index d, SeededStream& s) { return haar_isometry(d, d, s); }

inline Vector haar_vector(Eigen::Index d, SeededStream& s) {
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = s.complex_normal();
  return v / v.norm();
}

inline DensityOperator haar_pure(const SystemLayout& layout, SeededStream& s) {
  return pure_state(layout, haar_vector(static_cast<Eigen::Index>(layout.total_dim()), s));
}

inline DensityOperator haar_pure(std::size_t d, SeededStream& s) { return haar_pure(SystemLayout("S", d), s); }

/// Induced measure: reduction of a Haar pure state on d x rank.
inline DensityOperator random_density(const SystemLayout& layout, std::size_t rank, SeededStream& s) {
  const auto d = layout.total_dim();
  if (rank < 1 || rank > d) throw Error("random_density: rank must lie in [1, d]");
  const Matrix g = ginibre(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rank), s);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return {layout, std::move(rho)};
}

inline DensityOperator random_density(std::size_t d, std::size_t rank, SeededStream& s) {
  return random_density(SystemLayout("S", d), rank, s);
}

/// Channel from a Haar isometry V: in -> out (x) env, K_e = (I (x) <e|) V.
inline QuantumChannel random_channel(const SystemLayout& in, const SystemLayout& out, std::size_t d_env,
                                     SeededStream& s) {
  const auto din = static_cast<Eigen::Index>(in.total_dim());
  const auto dout = static_cast<Eigen::Index>(out.total_dim());
  const auto de = static_cast<Eigen::Index>(d_env);
  if (d_env < 1 || dout * de < din) throw Error("random_channel: need d_out * d_env >= d_in");
  const Matrix v = haar_isometry(dout * de, din, s);
  std::vector<Matrix> kraus;
  for (Eigen::Index e = 0; e < de; ++e) {
    Matrix k(dout, din);
    for (Eigen::Index o = 0; o < dout; ++o) k.row(o) = v.row(o * de + e);
    kraus.push_back(std::move(k));
  }
  return {in, out, std::move(kraus)};
}

inline QuantumChannel random_channel(std::size_t d_in, std::size_t d_out, std::size_t d_env, SeededStream& s) {
  return random_channel(SystemLayout("S", d_in), SystemLayout("S", d_out), d_env, s);
}

/// Random POVM with `outcomes` elements V^dag (|k><k| (x) I) V for a Haar
/// isometry V: d -> outcomes (x) d.
inline Povm random_povm(const SystemLayout& layout, std::size_t outcomes, SeededStream& s) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  const auto n = static_cast<Eigen::Index>(outcomes);
  const Matrix v = haar_isometry(n * d, d, s);
  std::vector<Matrix> el;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Matrix block = v.middleRows(k * d, d);
    el.emplace_back(block.adjoint() * block);
  }
  return {layout, std::move(el)};
}

/// Discrete Fourier basis as columns.
inline Matrix fourier_basis(Eigen::Index d) {
  Matrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index k = 0; k < d; ++k) f(j, k) = std::polar(norm, 2.0 * M_PI * static_cast<double>(j * k) / static_cast<double>(d));
  return f;
}

struct PovmPair {
  Povm x;
  Povm z;
};

/// Mutually unbiased pair (U F, U) for a Haar unitary U and DFT matrix F.
inline PovmPair random_mub_pair(const SystemLayout& layout, SeededStream& s) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  const Matrix u = haar_unitary(d, s);
  return {Povm::from_basis(layout, u * fourier_basis(d)), Povm::from_basis(layout, u)};
}

}  // namespace mdr::random
