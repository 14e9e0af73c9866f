#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace gqlimit {

using cplx = std::complex<double>;

/// Electron ladder index k in [-K, K], photon number n in [0, N].
struct Truncation {
  int k_max = 40;
  int n_max = 40;

  static constexpr int kMaxSize = 128;

  void validate() const;
  std::size_t dimension() const;
  std::size_t index(int k, int n) const;
  bool contains(int k, int n) const;
};

class JointState {
 public:
  JointState(Truncation t, std::vector<cplx> amplitudes);
  /// |E0, 0>: k = 0, no photons.
  static JointState initial(Truncation t);

  const Truncation& truncation() const { return trunc_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  cplx amplitude(int k, int n) const;

  double norm() const;
  /// Probability within one index of the k = +-K or n = N edges. The n = 0
  /// edge is excluded since the initial state lives there.
  double leak() const;
  /// Probability on states violating n = -k.
  double off_shell_probability() const;

 private:
  Truncation trunc_;
  std::vector<cplx> amp_;
};

struct ScatterConfig {
  cplx g_q{0.0, 0.0};
  Truncation truncation{};
  double tolerance = 1e-9;

  static constexpr double kMaxCoupling = 2.0;

  void validate() const;
};

/// Square complex matrix in compressed sparse row form.
class SparseGenerator {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    cplx value;
  };

  SparseGenerator(std::size_t dimension, std::vector<Entry> entries);

  std::size_t dimension() const { return dim_; }
  std::size_t nonzeros() const { return values_.size(); }
  void apply(std::span<const cplx> in, std::span<cplx> out) const;
  /// Maximum absolute column sum.
  double one_norm() const;
  bool is_anti_hermitian(double tol = 1e-14) const;

 private:
  cplx lookup(std::size_t row, std::size_t col) const;

  std::size_t dim_;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<cplx> values_;
};

/// G = g b^dag a - g^* b a^dag on the truncated space, with b lowering k.
/// Photon emission takes |k, n> to |k-1, n+1>.
SparseGenerator scattering_generator(cplx g_q, const Truncation& t);

/// exp(G) v by scaling and truncated Taylor series. G must be anti-Hermitian.
std::vector<cplx> exponential_apply(const SparseGenerator& g, std::span<const cplx> v);

/// exp(G) |E0, 0>. Throws TruncationError when the leak exceeds the tolerance.
JointState evolve_spontaneous(const ScatterConfig& cfg);

/// P(n) = sum_k |c_{k,n}|^2, n = 0..N.
std::vector<double> photon_distribution(const JointState& state);
std::vector<double> poisson_distribution(double mean, std::size_t n_max);
/// (1/2) sum |p - q|, shorter list padded with zeros.
double total_variation_distance(std::span<const double> p, std::span<const double> q);
double distribution_mean(std::span<const double> p);
double distribution_variance(std::span<const double> p);

std::string photon_distribution_csv(std::span<const double> p);
nlohmann::json photon_distribution_sidecar(const ScatterConfig& cfg, const JointState& state);

}  // namespace gqlimit
