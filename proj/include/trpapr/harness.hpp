#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trpapr/clipping.hpp"
#include "trpapr/ofdm.hpp"
#include "trpapr/prt_search.hpp"
#include "trpapr/prt_set.hpp"

namespace trpapr::harness {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Engine { Gd, AsTr, Aac, Constant };

std::string_view engine_name(Engine e);
Engine parse_engine(std::string_view name);

enum class ExperimentKind { Ccdf, PrtTable, Convergence, PowerMetrics, RhoSweep, GammaSweep };

std::string_view kind_name(ExperimentKind k);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Ccdf;
  std::size_t n_symbols = 100000;
  std::size_t n_tones = 512;
  std::size_t prt_size = 32;
  std::size_t oversample = 4;
  /// Empty means the bundled GA reference set.
  std::filesystem::path prt_file;

  std::vector<Engine> engines;
  double gamma_db = 5.0;
  std::size_t iterations = 10;
  double rho = 0.7;
  double const_beta = 1.0;
  std::size_t const_iterations = 40;
  /// Clipping ratio that sets the GD-TR target level.
  double gd_gamma_db = 4.0;

  /// Sweep values (dB for gamma sweeps, unitless for rho sweeps).
  std::vector<double> sweep_values;

  GaConfig ga;
  std::size_t random_trials = 100000;

  double threshold_lo_db = 4.0;
  double threshold_hi_db = 13.0;
  double threshold_step_db = 0.1;

  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool quick = false;
  /// No files are written when empty.
  std::filesystem::path out_dir;

  /// Probability at which headline PAPR values are read (1e-4, or 1e-3 in
  /// quick mode).
  double report_probability() const { return quick ? 1e-3 : 1e-4; }
  /// Applies the quick profile (10^4 symbols) unless n_symbols was set
  /// explicitly smaller.
  void apply_quick();
  void validate() const;
};

/// JSON echo of every result-affecting field.
std::string config_json(const ExperimentConfig& cfg);

struct NamedCurve {
  std::string name;
  CcdfCurve curve;
  double crossing_db = 0.0;  // PAPR at cfg.report_probability()
};

struct RunRecord {
  std::string experiment;
  std::string config;  // JSON
  std::string version;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::vector<std::filesystem::path> csv_files;
};

// ---------------------------------------------------------------------------
// Monte Carlo core

struct EngineSetup {
  Engine engine = Engine::Aac;
  ClipConfig clip;
  double gd_level_db = 4.0;
  std::string label;  // defaults to engine name
};

struct EngineOutcome {
  std::string label;
  Engine engine;
  std::vector<double> papr_db;
  /// mean|reduced|^2 and mean|original|^2 per symbol.
  std::vector<double> reduced_power;
  /// Row-major n_symbols x max_iterations; PAPR after iteration i, held at
  /// the final value after an early exit. Empty unless tracking was requested.
  std::vector<double> papr_by_iteration;
  std::size_t history_length = 0;
  double seconds = 0.0;
};

struct MonteCarloResult {
  std::vector<double> original_papr_db;
  std::vector<double> original_power;
  std::vector<EngineOutcome> engines;
};

struct SimulationSpec {
  std::size_t n_symbols = 0;
  PrtSet prt;
  std::size_t oversample = 4;
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::vector<EngineSetup> engines;
  bool track_iterations = false;
};

/// Draws n_symbols data blocks (symbol s uses Rng(seed).split(s)), runs every
/// engine on each, and records per-symbol metrics. Output does not depend on
/// the thread count.
MonteCarloResult simulate(const SimulationSpec& spec);

/// Ensemble API: 10·log10(Σ reduced power / Σ original power).
double ensemble_api_db(const std::vector<double>& original_power,
                       const std::vector<double>& reduced_power);

// ---------------------------------------------------------------------------
// Experiments

struct CcdfReport {
  std::vector<NamedCurve> curves;  // "original" first
  RunRecord record;
};

struct PrtTableRow {
  std::string method;
  std::string cost;  // search cost as printed, "-" for closed-form sets
  std::size_t evaluations = 0;
  double merit = 0.0;
  double difference = 0.0;  // merit minus the CE reference merit
  std::string prt;
};

struct PrtTableReport {
  std::vector<PrtTableRow> rows;
  double reference_merit = 0.0;
  RunRecord record;
};

struct ConvergenceCurve {
  std::string label;
  std::vector<double> mean_papr_db;  // index i -> after i+1 iterations
};

struct ConvergenceReport {
  double original_mean_papr_db = 0.0;
  std::vector<ConvergenceCurve> curves;
  RunRecord record;
};

struct PowerMetricsRow {
  std::string label;
  double api_db = 0.0;
  double ms_per_symbol = 0.0;
  double papr_db = 0.0;  // CCDF crossing at report_probability
  double mean_papr_db = 0.0;
};

struct PowerMetricsReport {
  std::vector<PowerMetricsRow> rows;
  double original_papr_db = 0.0;
  RunRecord record;
};

PrtSet resolve_prt(const ExperimentConfig& cfg);

CcdfReport run_ccdf(const ExperimentConfig& cfg);
PrtTableReport run_prt_table(const ExperimentConfig& cfg);
ConvergenceReport run_convergence(const ExperimentConfig& cfg);
PowerMetricsReport run_power_metrics(const ExperimentConfig& cfg);
/// One curve per (engine, γ) pair plus the original; shared seed.
CcdfReport run_gamma_sweep(const ExperimentConfig& cfg);
/// One AAC-TR curve per ρ value plus the original; shared seed.
CcdfReport run_rho_sweep(const ExperimentConfig& cfg);

/// CSV body with header "threshold_db,probability".
std::string ccdf_csv(const CcdfCurve& curve);

/// Fails with IoError if `dir` cannot be created or written.
void ensure_writable(const std::filesystem::path& dir);

}  // namespace trpapr::harness
