// qembed command-line front end.
//
// Subcommands: embed, design-study, spectrum, anneal, compare.
// Configuration comes from an optional JSON file (--config) overridden by
// flags; every artifact embeds the resolved run manifest so that a run can
// be reproduced byte-identically.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 numeric
// failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qembed/qembed.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace qembed;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kChromosomeLayout =
    "c0,c_1..c_ntot,d_(i,j) row-major j>i";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

[[noreturn]] void config_error(const std::string& message) {
  throw std::invalid_argument(message);
}

// ---------------------------------------------------------------------------
// configuration

struct ProblemConfig {
  int n = 3;
  int p = 3;
  int nanc = -1;  // -1: pick the reference value for n
  double delta = 50.0;

  int resolved_nanc() const {
    if (nanc >= 0) return nanc;
    if (n == 3) return 1;
    if (n == 4) return 2;
    config_error("problem.nanc must be given explicitly for n outside {3, 4}");
  }

  EmbeddingProblem embedding() const {
    return EmbeddingProblem{PSpinModel(n, p), resolved_nanc(), delta};
  }
};

struct GaSection {
  GaConfig cfg;
  int combo = 0;  // 0: use explicit operator fields
  int runs = 1;

  GaConfig resolved() const {
    GaConfig out = cfg;
    if (combo != 0) apply_combo(out, combo);
    out.validate();
    return out;
  }
};

struct AnnealSection {
  double tf = 100.0;
  int grid_points = 201;
  double rtol = 1e-8;
  double atol = 1e-8;
  int levels = 11;
};

struct ToolConfig {
  ProblemConfig problem;
  GaSection ga;
  AnnealSection anneal;
  std::string out_dir = "out";
  int jobs = 1;
};

void merge_json(ToolConfig& cfg, const json& j) {
  if (j.contains("problem")) {
    const auto& p = j.at("problem");
    if (p.contains("n")) cfg.problem.n = p.at("n").get<int>();
    if (p.contains("p")) cfg.problem.p = p.at("p").get<int>();
    if (p.contains("nanc")) cfg.problem.nanc = p.at("nanc").get<int>();
    if (p.contains("delta")) cfg.problem.delta = p.at("delta").get<double>();
  }
  if (j.contains("ga")) {
    const auto& g = j.at("ga");
    if (g.contains("npop")) cfg.ga.cfg.npop = g.at("npop").get<int>();
    if (g.contains("generations")) cfg.ga.cfg.ngen = g.at("generations").get<int>();
    if (g.contains("p_cx")) cfg.ga.cfg.p_cx = g.at("p_cx").get<double>();
    if (g.contains("p_mut")) cfg.ga.cfg.p_mut = g.at("p_mut").get<double>();
    if (g.contains("sigma")) cfg.ga.cfg.sigma = g.at("sigma").get<double>();
    if (g.contains("nt")) cfg.ga.cfg.nt = g.at("nt").get<int>();
    if (g.contains("indpb")) cfg.ga.cfg.indpb = g.at("indpb").get<double>();
    if (g.contains("elitism")) cfg.ga.cfg.elitism = g.at("elitism").get<int>();
    if (g.contains("seed")) cfg.ga.cfg.seed = g.at("seed").get<std::uint64_t>();
    if (g.contains("crossover")) {
      const std::string kind = g.at("crossover").get<std::string>();
      if (kind == "1P")
        cfg.ga.cfg.crossover = CrossoverKind::kOnePoint;
      else if (kind == "2P")
        cfg.ga.cfg.crossover = CrossoverKind::kTwoPoint;
      else
        config_error("ga.crossover must be \"1P\" or \"2P\"");
    }
    if (g.contains("combo")) cfg.ga.combo = g.at("combo").get<int>();
    if (g.contains("runs")) cfg.ga.runs = g.at("runs").get<int>();
  }
  if (j.contains("anneal")) {
    const auto& a = j.at("anneal");
    if (a.contains("tf")) cfg.anneal.tf = a.at("tf").get<double>();
    if (a.contains("grid_points")) cfg.anneal.grid_points = a.at("grid_points").get<int>();
    if (a.contains("rtol")) cfg.anneal.rtol = a.at("rtol").get<double>();
    if (a.contains("atol")) cfg.anneal.atol = a.at("atol").get<double>();
    if (a.contains("levels")) cfg.anneal.levels = a.at("levels").get<int>();
  }
  if (j.contains("output")) {
    const auto& o = j.at("output");
    if (o.contains("dir")) cfg.out_dir = o.at("dir").get<std::string>();
  }
}

json manifest_json(const ToolConfig& cfg, const std::string& subcommand,
                   const std::vector<std::uint64_t>& seeds,
                   const std::vector<std::string>& artifacts) {
  json m;
  m["tool_version"] = kToolVersion;
  m["subcommand"] = subcommand;
  m["problem"] = {{"n", cfg.problem.n},
                  {"p", cfg.problem.p},
                  {"nanc", cfg.problem.resolved_nanc()},
                  {"delta", cfg.problem.delta}};
  const GaConfig ga = cfg.ga.resolved();
  m["ga"] = {{"npop", ga.npop},
             {"generations", ga.ngen},
             {"p_cx", ga.p_cx},
             {"p_mut", ga.p_mut},
             {"crossover", to_string(ga.crossover)},
             {"sigma", ga.sigma},
             {"nt", ga.nt},
             {"indpb", ga.indpb},
             {"elitism", ga.elitism},
             {"combo", cfg.ga.combo},
             {"runs", cfg.ga.runs},
             {"seed", ga.seed}};
  m["anneal"] = {{"tf", cfg.anneal.tf},
                 {"grid_points", cfg.anneal.grid_points},
                 {"rtol", cfg.anneal.rtol},
                 {"atol", cfg.anneal.atol},
                 {"levels", cfg.anneal.levels}};
  m["output"] = {{"dir", cfg.out_dir}};
  m["seeds"] = seeds;
  m["artifacts"] = artifacts;
  return m;
}

// ---------------------------------------------------------------------------
// artifact helpers

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const json& manifest) : out_(path) {
    if (!out_) throw IoError("cannot open " + path.string());
    out_ << "# manifest: " << manifest.dump() << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ",";
      out_ << cells[i];
    }
    out_ << "\n";
    if (!out_) throw IoError("write failure");
  }

 private:
  std::ofstream out_;
};

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string());
  out << j.dump(2) << "\n";
  if (!out) throw IoError("write failure on " + path.string());
}

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    config_error("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir);
}

// Chromosome file: JSON object with a header and the gene array.
json chromosome_json(const Chromosome& genes, int ntot, int nanc, double delta) {
  return json{{"ntot", ntot},
              {"nanc", nanc},
              {"delta", delta},
              {"layout", kChromosomeLayout},
              {"genes", genes}};
}

struct ChromosomeFile {
  Chromosome genes;
  int ntot = 0;
  int nanc = 0;
  double delta = 0.0;
};

ChromosomeFile load_chromosome(const fs::path& path) {
  const json j = load_json_file(path);
  ChromosomeFile f;
  try {
    f.ntot = j.at("ntot").get<int>();
    f.nanc = j.at("nanc").get<int>();
    f.delta = j.at("delta").get<double>();
    f.genes = j.at("genes").get<Chromosome>();
  } catch (const json::exception& e) {
    config_error("bad chromosome file " + path.string() + ": " + e.what());
  }
  if (static_cast<int>(f.genes.size()) != chromosome_length(f.ntot))
    config_error("chromosome file " + path.string() +
                 ": gene count does not match ntot");
  return f;
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_embed(const ToolConfig& cfg) {
  const EmbeddingProblem problem = cfg.problem.embedding();
  const GaConfig ga = cfg.ga.resolved();
  ensure_out_dir(cfg.out_dir);

  std::vector<std::uint64_t> seeds;
  for (int i = 0; i < cfg.ga.runs; ++i)
    seeds.push_back(ga.seed + static_cast<std::uint64_t>(i));
  const std::vector<std::string> artifacts = {"runs.json", "best_chromosome.json",
                                              "fitness_history.csv",
                                              "summary.json", "comparison.csv"};
  const json manifest = manifest_json(cfg, "embed", seeds, artifacts);

  const auto records = run_ga_repeated(ga, problem, cfg.ga.runs, cfg.jobs);

  std::size_t best_run = 0;
  for (std::size_t i = 1; i < records.size(); ++i)
    if (records[i].best_fitness < records[best_run].best_fitness) best_run = i;
  const RunRecord& best = records[best_run];

  const FitnessEvaluator evaluate = problem.evaluator();
  json runs = json::array();
  for (const auto& rec : records) {
    const FitnessReport rep = evaluate(rec.best_chromosome);
    runs.push_back({{"seed", rec.seed},
                    {"combo", cfg.ga.combo},
                    {"best_fitness", rec.best_fitness},
                    {"mse", rep.mse},
                    {"unsorted", rep.unsorted},
                    {"best_chromosome", rec.best_chromosome}});
  }
  write_json_file(fs::path(cfg.out_dir) / "runs.json",
                  json{{"manifest", manifest}, {"runs", runs}});

  json best_file = chromosome_json(best.best_chromosome, problem.ntot(),
                                   problem.nanc, problem.delta);
  best_file["manifest"] = manifest;
  write_json_file(fs::path(cfg.out_dir) / "best_chromosome.json", best_file);

  {
    CsvWriter csv(fs::path(cfg.out_dir) / "fitness_history.csv", manifest);
    csv.row({"generation", "best_fitness"});
    for (std::size_t g = 0; g < best.fitness_history.size(); ++g)
      csv.row({std::to_string(g), format_double(best.fitness_history[g])});
  }

  json summary{{"manifest", manifest},
               {"best_seed", best.seed},
               {"best_fitness", best.best_fitness},
               {"gap_to_nonphysical", evaluate.gap_to_nonphysical(best.best_chromosome)}};

  if (cfg.problem.n == 3 || cfg.problem.n == 4) {
    const Chromosome reference = analytic_solution(cfg.problem.n, problem.delta);
    const RmsResult r = rms(reference, best.best_chromosome);
    summary["rms"] = r.value;
    summary["rms_skipped_genes"] = r.skipped;
    CsvWriter csv(fs::path(cfg.out_dir) / "comparison.csv", manifest);
    csv.row({"gene", "analytic", "genetic", "rel_error"});
    for (std::size_t g = 0; g < reference.size(); ++g) {
      const double a = reference[g];
      const double b = best.best_chromosome[g];
      csv.row({std::to_string(g), format_double(a), format_double(b),
               a != 0.0 ? format_double((a - b) / a) : "nan"});
    }
  }
  write_json_file(fs::path(cfg.out_dir) / "summary.json", summary);

  std::cout << "embed: best fitness " << format_double(best.best_fitness)
            << " (seed " << best.seed << ")\n";
  return 0;
}

int cmd_design_study(const ToolConfig& cfg, std::vector<int> combos) {
  const EmbeddingProblem problem = cfg.problem.embedding();
  const GaConfig base = cfg.ga.resolved();
  if (combos.empty())
    for (int c = 1; c <= 30; ++c) combos.push_back(c);
  for (int c : combos)
    if (c < 1 || c > 30) config_error("combos must lie in 1..30");
  ensure_out_dir(cfg.out_dir);

  std::vector<std::uint64_t> seeds = {base.seed};
  const json manifest =
      manifest_json(cfg, "design-study", seeds, {"design_study.csv", "summary.json"});

  const DesignStudyTable table =
      design_study(combos, cfg.ga.runs, base, problem, cfg.jobs);

  {
    CsvWriter csv(fs::path(cfg.out_dir) / "design_study.csv", manifest);
    csv.row({"combo", "crossover", "sigma", "nt", "min", "q1", "median", "q3",
             "max", "outliers"});
    for (const auto& row : table.rows) {
      std::string outliers;
      for (std::size_t i = 0; i < row.outliers.size(); ++i) {
        if (i) outliers += ";";
        outliers += format_double(row.outliers[i]);
      }
      csv.row({std::to_string(row.combo), to_string(row.crossover),
               format_double(row.sigma), std::to_string(row.nt),
               format_double(row.min), format_double(row.q1),
               format_double(row.median), format_double(row.q3),
               format_double(row.max), outliers});
    }
  }

  json rows = json::array();
  for (const auto& row : table.rows)
    rows.push_back({{"combo", row.combo},
                    {"crossover", to_string(row.crossover)},
                    {"sigma", row.sigma},
                    {"nt", row.nt},
                    {"min", row.min},
                    {"q1", row.q1},
                    {"median", row.median},
                    {"q3", row.q3},
                    {"max", row.max},
                    {"outliers", row.outliers}});
  write_json_file(fs::path(cfg.out_dir) / "summary.json",
                  json{{"manifest", manifest},
                       {"best_combo", table.best_combo()},
                       {"rows", rows}});

  std::cout << "design-study: minimal-median combo " << table.best_combo()
            << "\n";
  return 0;
}

int cmd_spectrum(const ToolConfig& cfg, const std::string& source) {
  const ProblemConfig& pc = cfg.problem;
  Chromosome genes;
  int ntot = 0, nanc = 0;
  if (source == "analytic") {
    genes = analytic_solution(pc.n, pc.delta);
    nanc = pc.resolved_nanc();
    ntot = pc.n + nanc;
  } else {
    const ChromosomeFile f = load_chromosome(source);
    genes = f.genes;
    ntot = f.ntot;
    nanc = f.nanc;
  }
  const int n = ntot - nanc;
  ensure_out_dir(cfg.out_dir);
  const json manifest =
      manifest_json(cfg, "spectrum", {}, {"spectrum.csv", "spectrum.json"});

  const auto model = QuadraticModel::from_chromosome(genes, ntot, nanc);
  const auto spec = enumerate_spectrum(
      [&](const BitConfig& c) { return quadratic_energy(c, model); }, ntot);
  const std::size_t levels = std::size_t(1) << n;

  {
    CsvWriter csv(fs::path(cfg.out_dir) / "spectrum.csv", manifest);
    csv.row({"row", "free_parameter", "eigenvector", "logical", "eigenvalue"});
    const std::size_t rows = std::max(genes.size(), levels);
    for (std::size_t r = 0; r < rows; ++r) {
      std::vector<std::string> cells = {std::to_string(r), "", "", "", ""};
      if (r < genes.size()) cells[1] = format_double(genes[r]);
      if (r < levels) {
        const BitConfig c = spec.config_at(r);
        cells[2] = c.to_string();
        cells[3] = c.to_string().substr(static_cast<std::size_t>(nanc));
        cells[4] = format_double(spec.entries[r].energy);
      }
      csv.row(cells);
    }
  }

  json jlevels = json::array();
  for (std::size_t r = 0; r < levels; ++r) {
    const BitConfig c = spec.config_at(r);
    jlevels.push_back({{"rank", r},
                       {"eigenvector", c.to_string()},
                       {"logical", c.to_string().substr(static_cast<std::size_t>(nanc))},
                       {"eigenvalue", spec.entries[r].energy}});
  }
  write_json_file(fs::path(cfg.out_dir) / "spectrum.json",
                  json{{"manifest", manifest},
                       {"free_parameters", genes},
                       {"levels", jlevels}});

  std::cout << "spectrum: wrote " << levels << " levels\n";
  return 0;
}

int cmd_anneal(const ToolConfig& cfg, const std::string& model_spec) {
  ensure_out_dir(cfg.out_dir);
  const ProblemConfig& pc = cfg.problem;

  HamiltonianMatrix target;
  int register_size = 0;
  if (model_spec == "pspin") {
    target = build_pspin_hamiltonian(PSpinModel(pc.n, pc.p));
    register_size = pc.n;
  } else {
    Chromosome genes;
    int ntot = 0, nanc = 0;
    if (model_spec == "analytic") {
      genes = analytic_solution(pc.n, pc.delta);
      nanc = pc.resolved_nanc();
      ntot = pc.n + nanc;
    } else {
      const ChromosomeFile f = load_chromosome(model_spec);
      genes = f.genes;
      ntot = f.ntot;
      nanc = f.nanc;
    }
    target = build_quadratic_hamiltonian(
        quad_to_ising(QuadraticModel::from_chromosome(genes, ntot, nanc)));
    register_size = ntot;
  }
  const HamiltonianMatrix driver = build_transverse_field(register_size);

  AnnealConfig anneal_cfg;
  anneal_cfg.tf = cfg.anneal.tf;
  anneal_cfg.s_grid = uniform_grid(cfg.anneal.grid_points);
  anneal_cfg.rtol = cfg.anneal.rtol;
  anneal_cfg.atol = cfg.anneal.atol;
  anneal_cfg.levels = cfg.anneal.levels;

  const json manifest = manifest_json(
      cfg, "anneal", {}, {"pgs_trace.csv", "spectra.csv", "summary.json"});

  const AnnealResult result = evolve(driver, target, anneal_cfg);
  const AdiabaticBound bound =
      adiabatic_bound(driver, target, anneal_cfg.s_grid);

  {
    CsvWriter csv(fs::path(cfg.out_dir) / "pgs_trace.csv", manifest);
    csv.row({"s", "pgs"});
    for (std::size_t i = 0; i < result.s_grid.size(); ++i)
      csv.row({format_double(result.s_grid[i]), format_double(result.pgs_trace[i])});
  }
  {
    CsvWriter csv(fs::path(cfg.out_dir) / "spectra.csv", manifest);
    std::vector<std::string> header = {"s"};
    const std::size_t levels = result.spectra_traces.front().size();
    for (std::size_t k = 0; k < levels; ++k)
      header.push_back("E" + std::to_string(k));
    csv.row(header);
    for (std::size_t i = 0; i < result.s_grid.size(); ++i) {
      std::vector<std::string> cells = {format_double(result.s_grid[i])};
      for (double e : result.spectra_traces[i]) cells.push_back(format_double(e));
      csv.row(cells);
    }
  }
  write_json_file(fs::path(cfg.out_dir) / "summary.json",
                  json{{"manifest", manifest},
                       {"model", model_spec},
                       {"fidelity", result.fidelity},
                       {"min_gap", result.min_gap},
                       {"adiabatic_bound", bound.value},
                       {"gap_degenerate", bound.gap_degenerate},
                       {"norm_drift", result.norm_drift}});

  std::cout << "anneal: fidelity " << format_double(result.fidelity) << "\n";
  return 0;
}

int cmd_compare(const ToolConfig& cfg, const std::string& file_a,
                const std::string& file_b, bool write_artifacts) {
  const ChromosomeFile a = load_chromosome(file_a);
  const ChromosomeFile b = load_chromosome(file_b);
  if (a.genes.size() != b.genes.size())
    config_error("compare: chromosome lengths differ");
  const RmsResult r = rms(a.genes, b.genes);
  std::cout << "rms " << format_double(r.value) << " (skipped " << r.skipped
            << " zero reference genes)\n";
  if (write_artifacts) {
    ensure_out_dir(cfg.out_dir);
    const json manifest = manifest_json(cfg, "compare", {}, {"compare.csv"});
    CsvWriter csv(fs::path(cfg.out_dir) / "compare.csv", manifest);
    csv.row({"gene", "reference", "candidate", "rel_error"});
    for (std::size_t g = 0; g < a.genes.size(); ++g) {
      csv.row({std::to_string(g), format_double(a.genes[g]),
               format_double(b.genes[g]),
               a.genes[g] != 0.0
                   ? format_double((a.genes[g] - b.genes[g]) / a.genes[g])
                   : "nan"});
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2-body embedding toolkit for p-spin models"};
  app.require_subcommand(1);

  ToolConfig cfg;
  std::optional<std::string> config_path;
  std::optional<int> opt_n, opt_p, opt_nanc, opt_combo, opt_runs, opt_ngen,
      opt_grid, opt_levels, opt_jobs;
  std::optional<double> opt_delta, opt_tf;
  std::optional<std::uint64_t> opt_seed;
  std::optional<std::string> opt_out;
  bool viz = false;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--n", opt_n, "logical qubit count");
  app.add_option("--p", opt_p, "interaction order");
  app.add_option("--nanc", opt_nanc, "ancilla count");
  app.add_option("--delta", opt_delta, "penalty scale");
  app.add_option("--combo", opt_combo, "operator combination id (1..30)");
  app.add_option("--runs", opt_runs, "independent seeded runs");
  app.add_option("--generations", opt_ngen, "generation count");
  app.add_option("--tf", opt_tf, "annealing time");
  app.add_option("--seed", opt_seed, "base RNG seed");
  app.add_option("--out-dir", opt_out, "artifact directory");
  app.add_option("--jobs", opt_jobs, "parallel workers");
  app.add_option("--grid-points", opt_grid, "annealing output grid points");
  app.add_option("--levels", opt_levels, "recorded instantaneous levels");
  app.add_flag("--viz", viz, "visualization defaults (delta 11)");

  auto* embed = app.add_subcommand("embed", "optimize an embedding with the GA");
  auto* study = app.add_subcommand("design-study",
                                   "fitness distribution per operator combo");
  std::vector<int> combos;
  study->add_option("--combos", combos, "subset of combination ids");
  auto* spectrum_cmd =
      app.add_subcommand("spectrum", "levels/eigenvectors of a 2-body model");
  std::string source = "analytic";
  spectrum_cmd->add_option("--source", source,
                           "chromosome source: 'analytic' or a file path");
  auto* anneal_cmd = app.add_subcommand("anneal", "closed-system anneal");
  std::string model_spec = "pspin";
  anneal_cmd->add_option("--model", model_spec,
                         "'pspin', 'analytic' or a chromosome file path");
  auto* compare_cmd =
      app.add_subcommand("compare", "rms and gene diff of two chromosome files");
  std::string file_a, file_b;
  compare_cmd->add_option("reference", file_a, "reference chromosome file")
      ->required();
  compare_cmd->add_option("candidate", file_b, "candidate chromosome file")
      ->required();
  bool compare_write = false;
  compare_cmd->add_flag("--write", compare_write, "also write compare.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (config_path) merge_json(cfg, load_json_file(*config_path));
    if (opt_n) cfg.problem.n = *opt_n;
    if (opt_p) cfg.problem.p = *opt_p;
    if (opt_nanc) cfg.problem.nanc = *opt_nanc;
    if (opt_delta) cfg.problem.delta = *opt_delta;
    if (viz && !opt_delta) cfg.problem.delta = 11.0;
    if (opt_combo) cfg.ga.combo = *opt_combo;
    if (opt_runs) cfg.ga.runs = *opt_runs;
    if (opt_ngen) cfg.ga.cfg.ngen = *opt_ngen;
    if (opt_tf) cfg.anneal.tf = *opt_tf;
    if (opt_seed) cfg.ga.cfg.seed = *opt_seed;
    if (opt_out) cfg.out_dir = *opt_out;
    if (opt_jobs) cfg.jobs = *opt_jobs;
    if (opt_grid) cfg.anneal.grid_points = *opt_grid;
    if (opt_levels) cfg.anneal.levels = *opt_levels;
    if (cfg.ga.runs < 1) config_error("runs must be >= 1");
    if (cfg.jobs < 1) config_error("jobs must be >= 1");

    if (embed->parsed()) return cmd_embed(cfg);
    if (study->parsed()) return cmd_design_study(cfg, combos);
    if (spectrum_cmd->parsed()) return cmd_spectrum(cfg, source);
    if (anneal_cmd->parsed()) return cmd_anneal(cfg, model_spec);
    if (compare_cmd->parsed())
      return cmd_compare(cfg, file_a, file_b, compare_write);
    config_error("no subcommand given");
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 4;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
