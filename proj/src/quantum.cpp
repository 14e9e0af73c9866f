#include "gqlimit/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gqlimit/errors.hpp"
#include "gqlimit/io.hpp"

namespace gqlimit {
namespace {

double l2_norm(std::span<const cplx> v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

constexpr int kMaxTaylorTerms = 60;
constexpr double kTaylorCutoff = 1e-18;

}  // namespace

void Truncation::validate() const {
  if (n_max < 1) throw InputError("truncation: photon cutoff N must be >= 1");
  if (k_max < n_max) throw InputError("truncation: electron cutoff K must be >= N");
  if (k_max > kMaxSize || n_max > kMaxSize) {
    throw InputError("truncation: K and N are limited to " + std::to_string(kMaxSize));
  }
}

std::size_t Truncation::dimension() const {
  return static_cast<std::size_t>(2 * k_max + 1) * static_cast<std::size_t>(n_max + 1);
}

bool Truncation::contains(int k, int n) const { return k >= -k_max && k <= k_max && n >= 0 && n <= n_max; }

std::size_t Truncation::index(int k, int n) const {
  if (!contains(k, n)) throw InputError("state index outside the truncated space");
  return static_cast<std::size_t>(k + k_max) * static_cast<std::size_t>(n_max + 1) + static_cast<std::size_t>(n);
}

JointState::JointState(Truncation t, std::vector<cplx> amplitudes) : trunc_(t), amp_(std::move(amplitudes)) {
  trunc_.validate();
  if (amp_.size() != trunc_.dimension()) throw InputError("joint state: amplitude count does not match truncation");
}

JointState JointState::initial(Truncation t) {
  t.validate();
  std::vector<cplx> amp(t.dimension());
  amp[t.index(0, 0)] = 1.0;
  return JointState(t, std::move(amp));
}

cplx JointState::amplitude(int k, int n) const { return amp_[trunc_.index(k, n)]; }

double JointState::norm() const { return l2_norm(amp_); }

double JointState::leak() const {
  double p = 0.0;
  for (int k = -trunc_.k_max; k <= trunc_.k_max; ++k) {
    for (int n = 0; n <= trunc_.n_max; ++n) {
      if (std::abs(k) >= trunc_.k_max - 1 || n >= trunc_.n_max - 1) p += std::norm(amplitude(k, n));
    }
  }
  return p;
}

double JointState::off_shell_probability() const {
  double p = 0.0;
  for (int k = -trunc_.k_max; k <= trunc_.k_max; ++k) {
    for (int n = 0; n <= trunc_.n_max; ++n) {
      if (n != -k) p += std::norm(amplitude(k, n));
    }
  }
  return p;
}

void ScatterConfig::validate() const {
  truncation.validate();
  if (!std::isfinite(g_q.real()) || !std::isfinite(g_q.imag())) throw InputError("g_q must be finite");
  if (std::abs(g_q) > kMaxCoupling) {
    throw DomainError("|g_q| above 2 is outside the supported range");
  }
  if (!(tolerance > 0.0)) throw InputError("truncation tolerance must be positive");
}

SparseGenerator::SparseGenerator(std::size_t dimension, std::vector<Entry> entries) : dim_(dimension) {
  for (const auto& e : entries) {
    if (e.row >= dim_ || e.col >= dim_) throw InputError("sparse generator: entry out of range");
  }
  std::sort(entries.begin(), entries.end(),
            [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  row_start_.assign(dim_ + 1, 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 && entries[i].row == entries[i - 1].row && entries[i].col == entries[i - 1].col) {
      values_.back() += entries[i].value;
      continue;
    }
    ++row_start_[entries[i].row + 1];
    cols_.push_back(entries[i].col);
    values_.push_back(entries[i].value);
  }
  std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());
}

void SparseGenerator::apply(std::span<const cplx> in, std::span<cplx> out) const {
  if (in.size() != dim_ || out.size() != dim_) throw InputError("sparse generator: vector size mismatch");
  for (std::size_t r = 0; r < dim_; ++r) {
    cplx acc = 0.0;
    for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i) acc += values_[i] * in[cols_[i]];
    out[r] = acc;
  }
}

double SparseGenerator::one_norm() const {
  std::vector<double> col_sum(dim_, 0.0);
  for (std::size_t i = 0; i < values_.size(); ++i) col_sum[cols_[i]] += std::abs(values_[i]);
  return col_sum.empty() ? 0.0 : *std::max_element(col_sum.begin(), col_sum.end());
}

cplx SparseGenerator::lookup(std::size_t row, std::size_t col) const {
  const auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[row]);
  const auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_start_[row + 1]);
  const auto it = std::lower_bound(first, last, col);
  if (it == last || *it != col) return 0.0;
  return values_[static_cast<std::size_t>(it - cols_.begin())];
}

bool SparseGenerator::is_anti_hermitian(double tol) const {
  const double scale = std::max(1.0, one_norm());
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i) {
      if (std::abs(values_[i] + std::conj(lookup(cols_[i], r))) > tol * scale) return false;
    }
  }
  return true;
}

SparseGenerator scattering_generator(cplx g_q, const Truncation& t) {
  t.validate();
  std::vector<SparseGenerator::Entry> entries;
  if (g_q == 0.0) return SparseGenerator(t.dimension(), std::move(entries));
  entries.reserve(2 * t.dimension());
  for (int k = -t.k_max; k <= t.k_max; ++k) {
    for (int n = 0; n <= t.n_max; ++n) {
      const auto from = t.index(k, n);
      // absorption: g sqrt(n) |k+1, n-1>
      if (t.contains(k + 1, n - 1)) {
        entries.push_back({t.index(k + 1, n - 1), from, g_q * std::sqrt(static_cast<double>(n))});
      }
      // emission: -g^* sqrt(n+1) |k-1, n+1>
      if (t.contains(k - 1, n + 1)) {
        entries.push_back({t.index(k - 1, n + 1), from, -std::conj(g_q) * std::sqrt(static_cast<double>(n + 1))});
      }
    }
  }
  return SparseGenerator(t.dimension(), std::move(entries));
}

std::vector<cplx> exponential_apply(const SparseGenerator& g, std::span<const cplx> v) {
  if (v.size() != g.dimension()) throw InputError("exponential_apply: vector size mismatch");
  if (!g.is_anti_hermitian()) throw InputError("exponential_apply: generator is not anti-Hermitian");

  std::vector<cplx> x(v.begin(), v.end());
  const double norm_a = g.one_norm();
  if (norm_a == 0.0) return x;

  // Each step applies exp(G/s) with ||G/s||_1 <= 1, so the Taylor terms fall
  // at least as fast as 1/j!.
  const auto steps = static_cast<std::size_t>(std::ceil(norm_a));
  const double inv_s = 1.0 / static_cast<double>(steps);
  std::vector<cplx> term(x.size()), next(x.size());
  for (std::size_t s = 0; s < steps; ++s) {
    const double ref = l2_norm(x);
    term = x;
    bool converged = false;
    for (int j = 1; j <= kMaxTaylorTerms; ++j) {
      g.apply(term, next);
      const double f = inv_s / j;
      for (std::size_t i = 0; i < x.size(); ++i) {
        term[i] = next[i] * f;
        x[i] += term[i];
      }
      if (l2_norm(term) <= kTaylorCutoff * ref) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NumericalError("exponential_apply: Taylor series did not converge");
  }
  return x;
}

JointState evolve_spontaneous(const ScatterConfig& cfg) {
  cfg.validate();
  const auto& t = cfg.truncation;
  const auto start = JointState::initial(t);
  auto amp = exponential_apply(scattering_generator(cfg.g_q, t), start.amplitudes());
  JointState out(t, std::move(amp));

  if (std::abs(out.norm() - 1.0) > 1e-10) throw NumericalError("scattering evolution lost normalization");
  const double leak = out.leak();
  if (leak > cfg.tolerance) {
    const int n = std::min(Truncation::kMaxSize, std::max(2 * t.n_max, t.n_max + 20));
    const int k = std::min(Truncation::kMaxSize, std::max(t.k_max, n));
    throw TruncationError("truncation leak " + format_g17(leak) + " exceeds tolerance " + format_g17(cfg.tolerance) +
                              "; try K = " + std::to_string(k) + ", N = " + std::to_string(n),
                          k, n);
  }
  return out;
}

std::vector<double> photon_distribution(const JointState& state) {
  const auto& t = state.truncation();
  std::vector<double> p(static_cast<std::size_t>(t.n_max + 1), 0.0);
  for (int k = -t.k_max; k <= t.k_max; ++k) {
    for (int n = 0; n <= t.n_max; ++n) p[static_cast<std::size_t>(n)] += std::norm(state.amplitude(k, n));
  }
  return p;
}

std::vector<double> poisson_distribution(double mean, std::size_t n_max) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw DomainError("poisson mean must be finite and non-negative");
  std::vector<double> p(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    const double dn = static_cast<double>(n);
    p[n] = mean == 0.0 ? (n == 0 ? 1.0 : 0.0) : std::exp(dn * std::log(mean) - mean - std::lgamma(dn + 1.0));
  }
  return p;
}

double total_variation_distance(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = i < p.size() ? p[i] : 0.0;
    const double b = i < q.size() ? q[i] : 0.0;
    s += std::abs(a - b);
  }
  return 0.5 * s;
}

double distribution_mean(std::span<const double> p) {
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

double distribution_variance(std::span<const double> p) {
  const double m = distribution_mean(p);
  double v = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) v += (static_cast<double>(n) - m) * (static_cast<double>(n) - m) * p[n];
  return v;
}

std::string photon_distribution_csv(std::span<const double> p) {
  std::string out = "n,probability\n";
  for (std::size_t n = 0; n < p.size(); ++n) out += std::to_string(n) + ',' + format_g17(p[n]) + '\n';
  return out;
}

nlohmann::json photon_distribution_sidecar(const ScatterConfig& cfg, const JointState& state) {
  return {{"schema_version", kSchemaVersion},
          {"code_version", code_version()},
          {"artifact", "photon_distribution"},
          {"columns", {"n", "probability"}},
          {"g_q", {{"re", cfg.g_q.real()}, {"im", cfg.g_q.imag()}}},
          {"truncation", {{"K", cfg.truncation.k_max}, {"N", cfg.truncation.n_max}}},
          {"tolerance", cfg.tolerance},
          {"leak", state.leak()},
          {"norm", state.norm()}};
}

}  // namespace gqlimit
