#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qembed/errors.hpp"

namespace qembed {

/// Flat real parameter vector in the canonical order
/// (c0, c_1, ..., c_ntot, d_{1,2}, d_{1,3}, ..., d_{ntot-1,ntot}).
using Chromosome = std::vector<double>;

/// Chromosome length for a register of `ntot` qubits.
inline int chromosome_length(int ntot) { return (ntot * ntot + ntot + 2) / 2; }

/// An assignment of binary variables x_i in {0,1} for a qubit register.
///
/// The spin view is sigma_i = 1 - 2*x_i.  When a configuration is identified
/// with a computational-basis index, qubit 1 is the most significant bit.
class BitConfig {
 public:
  BitConfig() = default;

  explicit BitConfig(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
      if (b > 1) throw std::invalid_argument("BitConfig: bits must be 0 or 1");
    }
  }

  static BitConfig from_index(std::uint64_t index, int size) {
    BitConfig c;
    c.bits_.resize(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) {
      c.bits_[static_cast<std::size_t>(i)] =
          static_cast<std::uint8_t>((index >> (size - 1 - i)) & 1u);
    }
    return c;
  }

  int size() const { return static_cast<int>(bits_.size()); }

  /// Bit value at 0-based register position.
  int bit(int pos) const { return bits_[static_cast<std::size_t>(pos)]; }

  /// Spin value sigma = 1 - 2x at 0-based register position.
  int spin(int pos) const { return 1 - 2 * bit(pos); }

  std::uint64_t index() const {
    std::uint64_t k = 0;
    for (auto b : bits_) k = (k << 1) | b;
    return k;
  }

  BitConfig flipped() const {
    BitConfig c(*this);
    for (auto& b : c.bits_) b ^= 1u;
    return c;
  }

  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (auto b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  friend bool operator==(const BitConfig&, const BitConfig&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// The ferromagnetic p-spin model: n qubits with a uniform p-body coupling.
struct PSpinModel {
  int n = 0;
  int p = 0;

  PSpinModel(int n_, int p_) : n(n_), p(p_) {
    if (n < 1 || p < 1 || p > n)
      throw std::invalid_argument("PSpinModel: require 1 <= p <= n");
  }
};

/// Classical p-spin energy -n * m^p with magnetization m = (1/n) sum(1-2x_i).
inline double pspin_energy(const BitConfig& config, const PSpinModel& model) {
  if (config.size() != model.n)
    throw DimensionError("pspin_energy: config length != n");
  int spin_sum = 0;
  for (int i = 0; i < model.n; ++i) spin_sum += config.spin(i);
  const double m = static_cast<double>(spin_sum) / model.n;
  double mp = 1.0;
  for (int k = 0; k < model.p; ++k) mp *= m;
  return -model.n * mp;
}

/// Packed index of the upper-triangular coupling (i, j), 1-based, j > i.
inline int coupling_index(int i, int j, int ntot) {
  return (i - 1) * ntot - i * (i - 1) / 2 + (j - i - 1);
}

/// Declares register position `ancilla` to hold parent_a AND parent_b.
/// All positions are 1-based; ancillae occupy positions 1..nanc.
struct AncillaDef {
  int ancilla = 0;
  int parent_a = 0;
  int parent_b = 0;

  friend bool operator==(const AncillaDef&, const AncillaDef&) = default;
};

/// Default parent assignment: ancilla k reads the k-th pair of logical
/// qubits, i.e. register positions (nanc + 2k - 1, nanc + 2k).
inline std::vector<AncillaDef> default_ancilla_pairing(int ntot, int nanc) {
  const int n = ntot - nanc;
  if (nanc < 0 || 2 * nanc > n)
    throw std::invalid_argument("default_ancilla_pairing: need 2*nanc <= n");
  std::vector<AncillaDef> defs;
  defs.reserve(static_cast<std::size_t>(nanc));
  for (int k = 1; k <= nanc; ++k)
    defs.push_back({k, nanc + 2 * k - 1, nanc + 2 * k});
  return defs;
}

/// Effective 2-body binary model
///   E(x) = c0 + sum_i c_i x_i + sum_{i<j} d_{i,j} x_i x_j
/// over ntot qubits, of which the first nanc register positions are ancillae.
class QuadraticModel {
 public:
  QuadraticModel(int ntot, int nanc, double c0, std::vector<double> c,
                 std::vector<double> d, std::vector<AncillaDef> ancilla_defs)
      : ntot_(ntot),
        nanc_(nanc),
        c0_(c0),
        c_(std::move(c)),
        d_(std::move(d)),
        ancilla_defs_(std::move(ancilla_defs)) {
    if (ntot_ < 1 || nanc_ < 0 || nanc_ > ntot_)
      throw std::invalid_argument("QuadraticModel: bad register sizes");
    if (static_cast<int>(c_.size()) != ntot_)
      throw DimensionError("QuadraticModel: c must have ntot entries");
    if (static_cast<int>(d_.size()) != ntot_ * (ntot_ - 1) / 2)
      throw DimensionError("QuadraticModel: d must have ntot*(ntot-1)/2 entries");
    if (static_cast<int>(ancilla_defs_.size()) != nanc_)
      throw std::invalid_argument("QuadraticModel: nanc != ancilla_defs.size()");
    for (const auto& a : ancilla_defs_) {
      const bool ok = a.ancilla >= 1 && a.ancilla <= nanc_ && a.parent_a >= 1 &&
                      a.parent_a <= ntot_ && a.parent_b >= 1 &&
                      a.parent_b <= ntot_ && a.parent_a != a.parent_b &&
                      a.parent_a != a.ancilla && a.parent_b != a.ancilla;
      if (!ok) throw std::invalid_argument("QuadraticModel: bad ancilla def");
    }
  }

  /// Rebuilds a model from its chromosome.  Passing no ancilla list selects
  /// default_ancilla_pairing.
  static QuadraticModel from_chromosome(const Chromosome& v, int ntot, int nanc,
                                        std::vector<AncillaDef> ancillae = {}) {
    if (static_cast<int>(v.size()) != chromosome_length(ntot))
      throw DimensionError("from_chromosome: wrong chromosome length");
    std::vector<double> c(v.begin() + 1, v.begin() + 1 + ntot);
    std::vector<double> d(v.begin() + 1 + ntot, v.end());
    if (ancillae.empty() && nanc > 0)
      ancillae = default_ancilla_pairing(ntot, nanc);
    return QuadraticModel(ntot, nanc, v[0], std::move(c), std::move(d),
                          std::move(ancillae));
  }

  /// Inverse of from_chromosome; the gene order is stable by construction.
  Chromosome to_chromosome() const {
    Chromosome v;
    v.reserve(static_cast<std::size_t>(chromosome_length(ntot_)));
    v.push_back(c0_);
    v.insert(v.end(), c_.begin(), c_.end());
    v.insert(v.end(), d_.begin(), d_.end());
    return v;
  }

  int ntot() const { return ntot_; }
  int nanc() const { return nanc_; }
  int nlogical() const { return ntot_ - nanc_; }
  double constant() const { return c0_; }
  double linear(int i) const { return c_[static_cast<std::size_t>(i - 1)]; }
  double coupling(int i, int j) const {
    return d_[static_cast<std::size_t>(coupling_index(i, j, ntot_))];
  }
  const std::vector<double>& linear_terms() const { return c_; }
  const std::vector<double>& couplings() const { return d_; }
  const std::vector<AncillaDef>& ancilla_defs() const { return ancilla_defs_; }

 private:
  int ntot_;
  int nanc_;
  double c0_;
  std::vector<double> c_;
  std::vector<double> d_;
  std::vector<AncillaDef> ancilla_defs_;
};

inline double quadratic_energy(const BitConfig& config,
                               const QuadraticModel& model) {
  if (config.size() != model.ntot())
    throw DimensionError("quadratic_energy: config length != ntot");
  const int ntot = model.ntot();
  double e = model.constant();
  for (int i = 1; i <= ntot; ++i) {
    if (!config.bit(i - 1)) continue;
    e += model.linear(i);
    for (int j = i + 1; j <= ntot; ++j)
      if (config.bit(j - 1)) e += model.coupling(i, j);
  }
  return e;
}

/// Spin (sigma = +-1) form of a QuadraticModel:
///   E(sigma) = K + sum_i h_i sigma_i + sum_{i<j} J_{i,j} sigma_i sigma_j.
class IsingModel {
 public:
  IsingModel(int ntot, double K, std::vector<double> h, std::vector<double> J)
      : ntot_(ntot), K_(K), h_(std::move(h)), J_(std::move(J)) {
    if (static_cast<int>(h_.size()) != ntot_)
      throw DimensionError("IsingModel: h must have ntot entries");
    if (static_cast<int>(J_.size()) != ntot_ * (ntot_ - 1) / 2)
      throw DimensionError("IsingModel: J must have ntot*(ntot-1)/2 entries");
  }

  int ntot() const { return ntot_; }
  double constant() const { return K_; }
  double field(int i) const { return h_[static_cast<std::size_t>(i - 1)]; }
  double coupling(int i, int j) const {
    return J_[static_cast<std::size_t>(coupling_index(i, j, ntot_))];
  }
  const std::vector<double>& fields() const { return h_; }
  const std::vector<double>& couplings() const { return J_; }

 private:
  int ntot_;
  double K_;
  std::vector<double> h_;
  std::vector<double> J_;
};

inline double ising_energy(const BitConfig& config, const IsingModel& model) {
  if (config.size() != model.ntot())
    throw DimensionError("ising_energy: config length != ntot");
  const int ntot = model.ntot();
  double e = model.constant();
  for (int i = 1; i <= ntot; ++i) {
    const int si = config.spin(i - 1);
    e += model.field(i) * si;
    for (int j = i + 1; j <= ntot; ++j)
      e += model.coupling(i, j) * si * config.spin(j - 1);
  }
  return e;
}

/// Exact change of variables x = (1 - sigma)/2:
///   K = c0 + (1/2) sum c_i + (1/4) sum_{i<j} d_{i,j}
///   h_i = -c_i/2 - (1/4) (sum_{j>i} d_{i,j} + sum_{j<i} d_{j,i})
///   J_{i,j} = d_{i,j}/4
/// The binary and spin energies agree on every configuration.
inline IsingModel quad_to_ising(const QuadraticModel& model) {
  const int ntot = model.ntot();
  double K = model.constant();
  std::vector<double> h(static_cast<std::size_t>(ntot), 0.0);
  std::vector<double> J(static_cast<std::size_t>(ntot * (ntot - 1) / 2), 0.0);
  for (int i = 1; i <= ntot; ++i) {
    const double ci = model.linear(i);
    K += 0.5 * ci;
    h[static_cast<std::size_t>(i - 1)] -= 0.5 * ci;
  }
  for (int i = 1; i <= ntot; ++i) {
    for (int j = i + 1; j <= ntot; ++j) {
      const double dij = model.coupling(i, j);
      K += 0.25 * dij;
      h[static_cast<std::size_t>(i - 1)] -= 0.25 * dij;
      h[static_cast<std::size_t>(j - 1)] -= 0.25 * dij;
      J[static_cast<std::size_t>(coupling_index(i, j, ntot))] = 0.25 * dij;
    }
  }
  return IsingModel(ntot, K, std::move(h), std::move(J));
}

/// AND-constraint penalty delta*(3x~ + x_i x_j - 2x~x_i - 2x~x_j).
/// Zero exactly when x_tilde = x_i AND x_j, at least delta otherwise.
inline double penalty_energy(int x_i, int x_j, int x_tilde, double delta) {
  if ((x_i | x_j | x_tilde) > 1 || x_i < 0 || x_j < 0 || x_tilde < 0)
    throw std::invalid_argument("penalty_energy: arguments must be bits");
  if (delta <= 0) throw std::invalid_argument("penalty_energy: delta must be > 0");
  return delta * (3.0 * x_tilde + x_i * x_j - 2.0 * x_tilde * x_i -
                  2.0 * x_tilde * x_j);
}

/// Rewrites the cubic term J*x_i*x_j*x_k as the 2-body fragment
///   J*x_i*x~ + delta*(3x~ + x_j x_k - 2x~x_j - 2x~x_k)
/// over an extended register with a fresh ancilla x~ = x_j AND x_k at
/// position 1.  The 8 lowest levels over the extended register reproduce the
/// 8 levels of the cubic term; invalid ancilla assignments are pushed up by
/// at least delta.
inline QuadraticModel and_embed_cubic(double coupling,
                                      const std::array<int, 3>& indices,
                                      double delta) {
  const auto [qi, qj, qk] = indices;
  if (qi == qj || qi == qk || qj == qk)
    throw std::invalid_argument("and_embed_cubic: indices must be distinct");
  if (qi < 1 || qj < 1 || qk < 1)
    throw std::invalid_argument("and_embed_cubic: indices are 1-based");
  if (delta <= 0) throw std::invalid_argument("and_embed_cubic: delta must be > 0");

  const int ntot = 1 + std::max({qi, qj, qk});  // ancilla + original qubits
  std::vector<double> c(static_cast<std::size_t>(ntot), 0.0);
  std::vector<double> d(static_cast<std::size_t>(ntot * (ntot - 1) / 2), 0.0);
  const int a = 1;          // ancilla register position
  const int ri = qi + 1;    // original qubit q sits at register position q+1
  const int rj = qj + 1;
  const int rk = qk + 1;
  auto dref = [&](int i, int j) -> double& {
    if (i > j) std::swap(i, j);
    return d[static_cast<std::size_t>(coupling_index(i, j, ntot))];
  };
  c[a - 1] += 3.0 * delta;
  dref(a, ri) += coupling;
  dref(rj, rk) += delta;
  dref(a, rj) -= 2.0 * delta;
  dref(a, rk) -= 2.0 * delta;
  return QuadraticModel(ntot, 1, 0.0, std::move(c), std::move(d),
                        {{a, rj, rk}});
}

/// Hand-derived exact embeddings of the p=3 ferromagnet for n = 3 (one
/// ancilla) and n = 4 (two ancillae), as chromosomes.  Penalty terms carry
/// the sign that places every invalid ancilla assignment at least delta
/// above the physical ground level, so the lowest 2^n levels reproduce the
/// p-spin spectrum exactly.
inline Chromosome analytic_solution(int n, double delta) {
  if (delta <= 0)
    throw std::invalid_argument("analytic_solution: delta must be > 0");
  if (n == 3) {
    // register (x~, x1, x2, x3), x~ = x1 AND x2
    return {-3.0,
            3.0 * delta,
            26.0 / 9.0,
            26.0 / 9.0,
            26.0 / 9.0,
            -2.0 * delta,
            -2.0 * delta,
            16.0 / 3.0,
            -8.0 / 3.0 + delta,
            -8.0 / 3.0,
            -8.0 / 3.0};
  }
  if (n == 4) {
    // register (a, b, x1, x2, x3, x4), a = x1 AND x2, b = x3 AND x4
    return {-4.0,
            3.0 * delta, 3.0 * delta,
            3.5, 3.5, 3.5, 3.5,
            // d(a,b), d(a,x1..x4)
            0.0, -2.0 * delta, -2.0 * delta, 3.0, 3.0,
            // d(b,x1..x4)
            3.0, 3.0, -2.0 * delta, -2.0 * delta,
            // d(x1,x2), d(x1,x3), d(x1,x4)
            -3.0 + delta, -3.0, -3.0,
            // d(x2,x3), d(x2,x4)
            -3.0, -3.0,
            // d(x3,x4)
            -3.0 + delta};
  }
  throw std::invalid_argument("analytic_solution: only n = 3 and n = 4");
}

}  // namespace qembed
