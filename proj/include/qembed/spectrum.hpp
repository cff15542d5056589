#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "qembed/errors.hpp"
#include "qembed/model.hpp"

namespace qembed {

/// Exhaustive enumeration is capped here; beyond this the 2^size sweep is a
/// resource bug, not a use case.
inline constexpr int kMaxEnumerationQubits = 24;

struct SpectrumEntry {
  double energy;
  std::uint32_t config;  // basis index, qubit 1 = MSB
};

/// All 2^size configurations with their energies, ascending in energy.
/// Ties are broken by configuration index, i.e. lexicographically in the
/// bit string (x_1, ..., x_size).
struct Spectrum {
  int size = 0;
  std::vector<SpectrumEntry> entries;

  BitConfig config_at(std::size_t rank) const {
    return BitConfig::from_index(entries[rank].config, size);
  }
  double energy_at(std::size_t rank) const { return entries[rank].energy; }
};

/// Evaluates `energy_fn(BitConfig) -> double` on every configuration of a
/// `size`-qubit register and sorts.  Deterministic: repeated calls give the
/// identical ordering.
template <class EnergyFn>
Spectrum enumerate_spectrum(EnergyFn&& energy_fn, int size) {
  if (size < 1 || size > kMaxEnumerationQubits)
    throw ResourceError("enumerate_spectrum: size outside [1, 24]");
  Spectrum spec;
  spec.size = size;
  const std::uint64_t count = std::uint64_t(1) << size;
  spec.entries.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    spec.entries.push_back(
        {energy_fn(BitConfig::from_index(k, size)), static_cast<std::uint32_t>(k)});
  }
  std::stable_sort(spec.entries.begin(), spec.entries.end(),
                   [](const SpectrumEntry& a, const SpectrumEntry& b) {
                     return a.energy < b.energy;
                   });
  return spec;
}

/// Maximal runs of (tolerance-)equal energy in a sorted spectrum, with the
/// set of configurations admissible at each run.
struct DegeneracyGroups {
  struct Group {
    std::size_t first = 0;  // rank range [first, last]
    std::size_t last = 0;
    double energy_min = 0.0;
    double energy_max = 0.0;
    std::vector<std::uint32_t> configs;  // sorted, for membership tests
  };

  std::vector<Group> groups;
  std::vector<std::size_t> rank_to_group;

  bool admits(std::size_t rank, std::uint32_t config) const {
    const auto& g = groups[rank_to_group[rank]];
    return std::binary_search(g.configs.begin(), g.configs.end(), config);
  }

  std::vector<std::size_t> sizes() const {
    std::vector<std::size_t> s;
    s.reserve(groups.size());
    for (const auto& g : groups) s.push_back(g.configs.size());
    return s;
  }
};

/// Chain-merges consecutive spectrum entries whose energies differ by at
/// most `tol`.
inline DegeneracyGroups degeneracy_groups(const Spectrum& spec, double tol) {
  DegeneracyGroups dg;
  dg.rank_to_group.resize(spec.entries.size());
  for (std::size_t r = 0; r < spec.entries.size(); ++r) {
    const auto& e = spec.entries[r];
    if (dg.groups.empty() ||
        std::abs(e.energy - dg.groups.back().energy_max) > tol) {
      dg.groups.push_back({r, r, e.energy, e.energy, {e.config}});
    } else {
      auto& g = dg.groups.back();
      g.last = r;
      g.energy_max = e.energy;
      g.configs.push_back(e.config);
    }
    dg.rank_to_group[r] = dg.groups.size() - 1;
  }
  for (auto& g : dg.groups) std::sort(g.configs.begin(), g.configs.end());
  return dg;
}

/// Outcome of one fitness evaluation: f = mse + l*delta.
struct FitnessReport {
  double f = 0.0;
  double mse = 0.0;
  int unsorted = 0;       // l: ranks whose logical configuration is misplaced
  double vec_penalty = 0.0;  // l * delta
};

/// Scores a chromosome against a p-spin target.
///
/// The mean-square error compares the L = 2^n lowest sorted energies of the
/// effective model with the full sorted target spectrum.  A rank counts as
/// unsorted when the logical part (ancillae stripped) of the effective
/// configuration at that rank is not admissible for the target's degeneracy
/// group at the same rank, so reorderings inside a degenerate subspace are
/// never penalized.
///
/// The evaluator precomputes the target spectrum and the per-configuration
/// feature rows once; operator() is pure and safe to call concurrently.
class FitnessEvaluator {
 public:
  FitnessEvaluator(const PSpinModel& target, int nanc, double delta,
                   double group_tol = 1e-9)
      : n_(target.n),
        ntot_(target.n + nanc),
        delta_(delta),
        dimension_(chromosome_length(ntot_)) {
    if (delta <= 0)
      throw std::invalid_argument("FitnessEvaluator: delta must be > 0");
    if (ntot_ > kMaxEnumerationQubits)
      throw ResourceError("FitnessEvaluator: register too large");
    auto original = enumerate_spectrum(
        [&](const BitConfig& c) { return pspin_energy(c, target); }, n_);
    groups_ = degeneracy_groups(original, group_tol);
    target_energies_.reserve(original.entries.size());
    for (const auto& e : original.entries) target_energies_.push_back(e.energy);

    // Feature row per configuration: (1, x_1.., x_i x_j ..) in gene order,
    // so that energy = chromosome . features.
    const std::size_t count = std::size_t(1) << ntot_;
    features_.resize(count * static_cast<std::size_t>(dimension_));
    for (std::size_t k = 0; k < count; ++k) {
      double* row = features_.data() + k * static_cast<std::size_t>(dimension_);
      int pos = 0;
      row[pos++] = 1.0;
      std::array<double, 32> x{};
      for (int i = 0; i < ntot_; ++i) {
        x[static_cast<std::size_t>(i)] =
            static_cast<double>((k >> (ntot_ - 1 - i)) & 1u);
        row[pos++] = x[static_cast<std::size_t>(i)];
      }
      for (int i = 0; i < ntot_; ++i)
        for (int j = i + 1; j < ntot_; ++j)
          row[pos++] =
              x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
  }

  int ntot() const { return ntot_; }
  int nlogical() const { return n_; }
  int chromosome_dimension() const { return dimension_; }
  double delta() const { return delta_; }
  const std::vector<double>& target_energies() const { return target_energies_; }

  FitnessReport operator()(const Chromosome& chrom) const {
    std::vector<SpectrumEntry> sorted;
    effective_spectrum(chrom, sorted);

    const std::size_t L = target_energies_.size();
    double mse = 0.0;
    int unsorted = 0;
    const std::uint32_t logical_mask = (std::uint32_t(1) << n_) - 1;
    for (std::size_t i = 0; i < L; ++i) {
      const double diff = target_energies_[i] - sorted[i].energy;
      mse += diff * diff;
      if (!groups_.admits(i, sorted[i].config & logical_mask)) ++unsorted;
    }
    mse /= static_cast<double>(L);

    FitnessReport rep;
    rep.mse = mse;
    rep.unsorted = unsorted;
    rep.vec_penalty = unsorted * delta_;
    rep.f = mse + rep.vec_penalty;
    return rep;
  }

  /// Separation E'_{L+1} - E'_L between the last compared level and the
  /// first level beyond it.  Diagnostic only; not part of the fitness.
  double gap_to_nonphysical(const Chromosome& chrom) const {
    std::vector<SpectrumEntry> sorted;
    effective_spectrum(chrom, sorted);
    const std::size_t L = target_energies_.size();
    return sorted[L].energy - sorted[L - 1].energy;
  }

 private:
  void effective_spectrum(const Chromosome& chrom,
                          std::vector<SpectrumEntry>& out) const {
    if (static_cast<int>(chrom.size()) != dimension_)
      throw DimensionError("fitness: chromosome length != (ntot^2+ntot+2)/2");
    const std::size_t count = std::size_t(1) << ntot_;
    out.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
      const double* row =
          features_.data() + k * static_cast<std::size_t>(dimension_);
      double e = 0.0;
      for (int g = 0; g < dimension_; ++g) e += chrom[static_cast<std::size_t>(g)] * row[g];
      out[k] = {e, static_cast<std::uint32_t>(k)};
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                       return a.energy < b.energy;
                     });
  }

  int n_;
  int ntot_;
  double delta_;
  int dimension_;
  std::vector<double> target_energies_;
  DegeneracyGroups groups_;
  std::vector<double> features_;
};

/// One-shot fitness evaluation (builds the evaluator each call).
inline FitnessReport fitness(const Chromosome& chrom, const PSpinModel& target,
                             int nanc, double delta, double group_tol = 1e-9) {
  return FitnessEvaluator(target, nanc, delta, group_tol)(chrom);
}

/// Gene-wise relative distance sqrt(mean(((v_a - v_g)/v_a)^2)).
struct RmsResult {
  double value = 0.0;
  int skipped = 0;  // genes with v_a = 0, excluded from the mean
};

inline RmsResult rms(const Chromosome& analytic, const Chromosome& genetic) {
  if (analytic.size() != genetic.size())
    throw DimensionError("rms: chromosome lengths differ");
  RmsResult r;
  double sum = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    if (analytic[i] == 0.0) {
      ++r.skipped;
      continue;
    }
    const double rel = (analytic[i] - genetic[i]) / analytic[i];
    sum += rel * rel;
    ++used;
  }
  if (used == 0) throw std::invalid_argument("rms: all reference genes are 0");
  r.value = std::sqrt(sum / used);
  return r;
}

}  // namespace qembed
