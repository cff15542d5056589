#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>
#include <utility>
#include <vector>

#include "qembed/model.hpp"
#include "qembed/rng.hpp"
#include "qembed/spectrum.hpp"

namespace qembed {

enum class CrossoverKind { kOnePoint, kTwoPoint };

inline const char* to_string(CrossoverKind k) {
  return k == CrossoverKind::kOnePoint ? "1P" : "2P";
}

/// Per-gene search ranges.
struct GeneBounds {
  std::vector<double> lo;
  std::vector<double> hi;

  int dimension() const { return static_cast<int>(lo.size()); }

  double clamp(int gene, double value) const {
    const auto g = static_cast<std::size_t>(gene);
    return std::min(std::max(value, lo[g]), hi[g]);
  }

  void validate() const {
    if (lo.size() != hi.size())
      throw DimensionError("GeneBounds: lo/hi length mismatch");
    for (std::size_t g = 0; g < lo.size(); ++g)
      if (!(lo[g] < hi[g]))
        throw std::invalid_argument("GeneBounds: require lo < hi per gene");
  }

  static GeneBounds uniform(int dimension, double lo_value, double hi_value) {
    GeneBounds b;
    b.lo.assign(static_cast<std::size_t>(dimension), lo_value);
    b.hi.assign(static_cast<std::size_t>(dimension), hi_value);
    b.validate();
    return b;
  }

  /// Default box [-10, 10] per gene, widened to [-3*delta-10, 3*delta+10] on
  /// the penalty-carrying genes: any linear or coupling term touching an
  /// ancilla, plus the coupling between each ancilla's two parents.  Those
  /// are exactly the positions where an AND penalty places O(delta) values.
  static GeneBounds for_embedding(int ntot, int nanc,
                                  const std::vector<AncillaDef>& ancillae,
                                  double delta) {
    const int dim = chromosome_length(ntot);
    GeneBounds b = uniform(dim, -10.0, 10.0);
    const double wide = 3.0 * delta + 10.0;
    std::vector<bool> is_ancilla(static_cast<std::size_t>(ntot + 1), false);
    for (const auto& a : ancillae)
      is_ancilla[static_cast<std::size_t>(a.ancilla)] = true;
    auto widen = [&](int gene) {
      b.lo[static_cast<std::size_t>(gene)] = -wide;
      b.hi[static_cast<std::size_t>(gene)] = wide;
    };
    for (int i = 1; i <= ntot; ++i)
      if (is_ancilla[static_cast<std::size_t>(i)]) widen(i);
    for (int i = 1; i <= ntot; ++i) {
      for (int j = i + 1; j <= ntot; ++j) {
        bool penalty = is_ancilla[static_cast<std::size_t>(i)] ||
                       is_ancilla[static_cast<std::size_t>(j)];
        for (const auto& a : ancillae) {
          const int pa = std::min(a.parent_a, a.parent_b);
          const int pb = std::max(a.parent_a, a.parent_b);
          if (pa == i && pb == j) penalty = true;
        }
        if (penalty) widen(1 + ntot + coupling_index(i, j, ntot));
      }
    }
    return b;
  }
};

/// Knobs of one genetic-algorithm run.
struct GaConfig {
  int npop = 20;
  int ngen = 25000;
  double p_cx = 0.4;
  double p_mut = 0.7;
  CrossoverKind crossover = CrossoverKind::kTwoPoint;
  double sigma = 0.2;
  int nt = 5;          // tournament size
  double indpb = -1.0; // per-gene mutation rate; negative selects 1/D
  std::uint64_t seed = 0;
  int elitism = 1;

  void validate() const {
    if (npop < 2) throw std::invalid_argument("GaConfig: npop must be >= 2");
    if (ngen < 0) throw std::invalid_argument("GaConfig: ngen must be >= 0");
    if (p_cx < 0 || p_cx > 1 || p_mut < 0 || p_mut > 1)
      throw std::invalid_argument("GaConfig: probabilities must be in [0,1]");
    if (sigma <= 0) throw std::invalid_argument("GaConfig: sigma must be > 0");
    if (nt < 1) throw std::invalid_argument("GaConfig: nt must be >= 1");
    if (indpb > 1) throw std::invalid_argument("GaConfig: indpb must be <= 1");
    if (elitism < 0 || elitism > npop)
      throw std::invalid_argument("GaConfig: elitism must be in [0, npop]");
  }
};

/// One row of the 30-combination operator grid: combinations 1-15 use
/// one-point crossover, 16-30 two-point; within each half sigma steps
/// through {0.2, 0.4, 0.6, 0.8, 1.0} and the tournament size through
/// {2, 3, 5}.
struct OperatorCombo {
  CrossoverKind crossover;
  double sigma;
  int nt;
};

inline OperatorCombo table_combo(int id) {
  if (id < 1 || id > 30)
    throw std::invalid_argument("table_combo: id must be in [1, 30]");
  static constexpr double kSigmas[5] = {0.2, 0.4, 0.6, 0.8, 1.0};
  static constexpr int kTournaments[3] = {2, 3, 5};
  const int k = (id - 1) % 15;
  return {id <= 15 ? CrossoverKind::kOnePoint : CrossoverKind::kTwoPoint,
          kSigmas[k / 3], kTournaments[k % 3]};
}

inline void apply_combo(GaConfig& cfg, int combo_id) {
  const OperatorCombo c = table_combo(combo_id);
  cfg.crossover = c.crossover;
  cfg.sigma = c.sigma;
  cfg.nt = c.nt;
}

/// The optimization target: embed an n-qubit p-spin model into
/// ntot = n + nanc qubits with penalty scale delta.
struct EmbeddingProblem {
  PSpinModel target;
  int nanc = 1;
  double delta = 50.0;
  double group_tol = 1e-9;
  std::vector<AncillaDef> ancillae;  // empty selects default_ancilla_pairing

  int ntot() const { return target.n + nanc; }
  int dimension() const { return chromosome_length(ntot()); }

  std::vector<AncillaDef> resolved_ancillae() const {
    return ancillae.empty() ? default_ancilla_pairing(ntot(), nanc) : ancillae;
  }

  GeneBounds bounds() const {
    return GeneBounds::for_embedding(ntot(), nanc, resolved_ancillae(), delta);
  }

  FitnessEvaluator evaluator() const {
    return FitnessEvaluator(target, nanc, delta, group_tol);
  }
};

using Population = std::vector<Chromosome>;

/// npop chromosomes with every gene uniform inside its bounds.
inline Population init_population(const GaConfig& cfg, const GeneBounds& bounds,
                                  Rng& rng) {
  cfg.validate();
  bounds.validate();
  Population pop(static_cast<std::size_t>(cfg.npop));
  for (auto& chrom : pop) {
    chrom.resize(bounds.lo.size());
    for (std::size_t g = 0; g < chrom.size(); ++g)
      chrom[g] = rng.uniform(bounds.lo[g], bounds.hi[g]);
  }
  return pop;
}

/// Splits both parents at a random point r in [1, D-1] and swaps the tails.
inline std::pair<Chromosome, Chromosome> one_point_crossover(
    const Chromosome& p1, const Chromosome& p2, Rng& rng) {
  if (p1.size() != p2.size())
    throw DimensionError("one_point_crossover: length mismatch");
  const auto dim = p1.size();
  if (dim < 2)
    throw std::invalid_argument("one_point_crossover: need length >= 2");
  const auto r = 1 + rng.below(dim - 1);
  Chromosome c1(p1), c2(p2);
  for (auto g = r; g < dim; ++g) std::swap(c1[g], c2[g]);
  return {std::move(c1), std::move(c2)};
}

/// Swaps the middle segment [r1, r2) for two distinct random points in
/// [1, D-1]; equal draws are rejected and redrawn.
inline std::pair<Chromosome, Chromosome> two_point_crossover(
    const Chromosome& p1, const Chromosome& p2, Rng& rng) {
  if (p1.size() != p2.size())
    throw DimensionError("two_point_crossover: length mismatch");
  const auto dim = p1.size();
  if (dim < 3)
    throw std::invalid_argument("two_point_crossover: need length >= 3");
  auto r1 = 1 + rng.below(dim - 1);
  auto r2 = 1 + rng.below(dim - 1);
  while (r2 == r1) r2 = 1 + rng.below(dim - 1);
  if (r1 > r2) std::swap(r1, r2);
  Chromosome c1(p1), c2(p2);
  for (auto g = r1; g < r2; ++g) std::swap(c1[g], c2[g]);
  return {std::move(c1), std::move(c2)};
}

/// Adds N(0, sigma^2) to each gene independently with probability indpb,
/// then clamps to the bounds.
inline Chromosome gaussian_mutation(const Chromosome& chrom, double sigma,
                                    double indpb, const GeneBounds& bounds,
                                    Rng& rng) {
  if (sigma <= 0) throw std::invalid_argument("gaussian_mutation: sigma <= 0");
  if (chrom.size() != bounds.lo.size())
    throw DimensionError("gaussian_mutation: bounds length mismatch");
  Chromosome out(chrom);
  for (std::size_t g = 0; g < out.size(); ++g) {
    if (rng.uniform() < indpb)
      out[g] = bounds.clamp(static_cast<int>(g), out[g] + rng.normal(0.0, sigma));
  }
  return out;
}

/// Draws nt population indices uniformly with replacement and returns the
/// one with the smallest fitness; ties keep the earliest drawn.
inline std::size_t tournament_select(const std::vector<double>& fitnesses,
                                     int nt, Rng& rng) {
  if (fitnesses.empty())
    throw std::invalid_argument("tournament_select: empty population");
  if (nt < 1) throw std::invalid_argument("tournament_select: nt must be >= 1");
  std::size_t winner = rng.below(fitnesses.size());
  for (int k = 1; k < nt; ++k) {
    const std::size_t challenger = rng.below(fitnesses.size());
    if (fitnesses[challenger] < fitnesses[winner]) winner = challenger;
  }
  return winner;
}

/// Outcome of one run: best individual ever seen plus the per-generation
/// best-of-population trace (non-increasing whenever elitism >= 1).
struct RunRecord {
  Chromosome best_chromosome;
  double best_fitness = 0.0;
  std::vector<double> fitness_history;
  std::uint64_t seed = 0;
  int combo_id = 0;  // 0 when the operators were set explicitly
};

/// Generational loop: tournament parent selection, crossover with
/// probability p_cx, per-individual mutation with probability p_mut, the
/// `elitism` fittest individuals carried over unchanged.  Fully
/// deterministic for a given seed.
inline RunRecord run_ga(const GaConfig& cfg, const EmbeddingProblem& problem) {
  cfg.validate();
  const GeneBounds bounds = problem.bounds();
  const FitnessEvaluator evaluate = problem.evaluator();
  const int dim = problem.dimension();
  const double indpb = cfg.indpb >= 0 ? cfg.indpb : 1.0 / dim;

  Rng rng(cfg.seed);
  Population pop = init_population(cfg, bounds, rng);
  std::vector<double> fits(pop.size());
  auto evaluate_all = [&] {
    for (std::size_t i = 0; i < pop.size(); ++i) fits[i] = evaluate(pop[i]).f;
  };
  evaluate_all();

  RunRecord rec;
  rec.seed = cfg.seed;
  rec.fitness_history.reserve(static_cast<std::size_t>(cfg.ngen) + 1);
  auto note_generation = [&] {
    const auto it = std::min_element(fits.begin(), fits.end());
    const double gen_best = *it;
    rec.fitness_history.push_back(gen_best);
    if (rec.best_chromosome.empty() || gen_best < rec.best_fitness) {
      rec.best_fitness = gen_best;
      rec.best_chromosome = pop[static_cast<std::size_t>(it - fits.begin())];
    }
  };
  note_generation();

  std::vector<std::size_t> order(pop.size());
  Population next;
  next.reserve(pop.size());
  for (int gen = 0; gen < cfg.ngen; ++gen) {
    next.clear();
    if (cfg.elitism > 0) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return fits[a] < fits[b];
      });
      for (int e = 0; e < cfg.elitism; ++e)
        next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    }
    while (next.size() < pop.size()) {
      const std::size_t i1 = tournament_select(fits, cfg.nt, rng);
      const std::size_t i2 = tournament_select(fits, cfg.nt, rng);
      Chromosome c1 = pop[i1];
      Chromosome c2 = pop[i2];
      if (rng.uniform() < cfg.p_cx) {
        auto [a, b] = cfg.crossover == CrossoverKind::kOnePoint
                          ? one_point_crossover(c1, c2, rng)
                          : two_point_crossover(c1, c2, rng);
        c1 = std::move(a);
        c2 = std::move(b);
      }
      if (rng.uniform() < cfg.p_mut)
        c1 = gaussian_mutation(c1, cfg.sigma, indpb, bounds, rng);
      if (rng.uniform() < cfg.p_mut)
        c2 = gaussian_mutation(c2, cfg.sigma, indpb, bounds, rng);
      next.push_back(std::move(c1));
      if (next.size() < pop.size()) next.push_back(std::move(c2));
    }
    pop.swap(next);
    evaluate_all();
    note_generation();
  }
  return rec;
}

namespace detail {

template <class Fn>
void parallel_for(int count, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> cursor{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    workers.emplace_back([&] {
      for (int i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// `runs` independent runs; run i is seeded with cfg.seed + i.  Results are
/// ordered by run index, so the output is identical for any jobs count.
inline std::vector<RunRecord> run_ga_repeated(const GaConfig& cfg,
                                              const EmbeddingProblem& problem,
                                              int runs, int jobs = 1) {
  if (runs < 1) throw std::invalid_argument("run_ga_repeated: runs must be >= 1");
  std::vector<RunRecord> records(static_cast<std::size_t>(runs));
  detail::parallel_for(runs, jobs, [&](int i) {
    GaConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(i);
    records[static_cast<std::size_t>(i)] = run_ga(run_cfg, problem);
  });
  return records;
}

/// Five-number summary plus outliers (outside 1.5 IQR whiskers) of the final
/// best fitnesses of one operator combination.
struct ComboSummary {
  int combo = 0;
  CrossoverKind crossover = CrossoverKind::kOnePoint;
  double sigma = 0.0;
  int nt = 0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<double> outliers;
};

struct DesignStudyTable {
  std::vector<ComboSummary> rows;

  /// Combo id with the smallest median; ties go to the lowest id.
  int best_combo() const {
    int best = 0;
    double best_median = 0.0;
    for (const auto& row : rows) {
      if (best == 0 || row.median < best_median) {
        best = row.combo;
        best_median = row.median;
      }
    }
    return best;
  }
};

/// Quantile with linear interpolation between closest ranks.
inline double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

inline ComboSummary summarize_combo(int combo_id, std::vector<double> finals) {
  const OperatorCombo combo = table_combo(combo_id);
  ComboSummary s;
  s.combo = combo_id;
  s.crossover = combo.crossover;
  s.sigma = combo.sigma;
  s.nt = combo.nt;
  std::sort(finals.begin(), finals.end());
  s.min = finals.front();
  s.max = finals.back();
  s.q1 = quantile(finals, 0.25);
  s.median = quantile(finals, 0.5);
  s.q3 = quantile(finals, 0.75);
  const double iqr = s.q3 - s.q1;
  const double lo_whisker = s.q1 - 1.5 * iqr;
  const double hi_whisker = s.q3 + 1.5 * iqr;
  for (double f : finals)
    if (f < lo_whisker || f > hi_whisker) s.outliers.push_back(f);
  return s;
}

/// Runs `runs_per_combo` seeded runs for each requested combination and
/// summarizes the final best fitnesses.  Run seeds are laid out globally:
/// seed(combo k at grid position c, run r) = base_seed + c*runs_per_combo + r.
inline DesignStudyTable design_study(const std::vector<int>& combos,
                                     int runs_per_combo, const GaConfig& base,
                                     const EmbeddingProblem& problem,
                                     int jobs = 1) {
  if (runs_per_combo < 1)
    throw std::invalid_argument("design_study: runs_per_combo must be >= 1");
  struct Task {
    int combo_index;
    int run_index;
  };
  std::vector<Task> tasks;
  tasks.reserve(combos.size() * static_cast<std::size_t>(runs_per_combo));
  for (std::size_t c = 0; c < combos.size(); ++c)
    for (int r = 0; r < runs_per_combo; ++r)
      tasks.push_back({static_cast<int>(c), r});

  std::vector<std::vector<double>> finals(
      combos.size(), std::vector<double>(static_cast<std::size_t>(runs_per_combo)));
  detail::parallel_for(static_cast<int>(tasks.size()), jobs, [&](int t) {
    const Task task = tasks[static_cast<std::size_t>(t)];
    GaConfig cfg = base;
    apply_combo(cfg, combos[static_cast<std::size_t>(task.combo_index)]);
    cfg.seed = base.seed +
               static_cast<std::uint64_t>(task.combo_index) *
                   static_cast<std::uint64_t>(runs_per_combo) +
               static_cast<std::uint64_t>(task.run_index);
    finals[static_cast<std::size_t>(task.combo_index)]
          [static_cast<std::size_t>(task.run_index)] =
              run_ga(cfg, problem).best_fitness;
  });

  DesignStudyTable table;
  table.rows.reserve(combos.size());
  for (std::size_t c = 0; c < combos.size(); ++c)
    table.rows.push_back(summarize_combo(combos[c], finals[c]));
  return table;
}

}  // namespace qembed
