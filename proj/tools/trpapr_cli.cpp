// Command-line front end for the tone-reservation toolkit.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "trpapr/clipping.hpp"
#include "trpapr/complexity.hpp"
#include "trpapr/error.hpp"
#include "trpapr/harness.hpp"
#include "trpapr/kernel.hpp"
#include "trpapr/prt_search.hpp"

namespace fs = std::filesystem;
using namespace trpapr;
using harness::Engine;
using harness::ExperimentConfig;
using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  bool quick = false;
  std::string out;
};

std::vector<Engine> parse_engines(const std::vector<std::string>& names) {
  std::vector<Engine> out;
  for (const auto& n : names) out.push_back(harness::parse_engine(n));
  return out;
}

void apply_globals(ExperimentConfig& cfg, const Globals& g) {
  cfg.seed = g.seed;
  cfg.threads = g.threads;
  cfg.out_dir = g.out;
  if (g.quick) cfg.apply_quick();
}

void print_curves(const harness::CcdfReport& rep, double prob) {
  fmt::print("{:<16} {:>12}\n", "curve", fmt::format("PAPR@{:g}", prob));
  for (const auto& c : rep.curves) fmt::print("{:<16} {:>12.3f}\n", c.name, c.crossing_db);
}

void write_file(const fs::path& p, const std::string& body) {
  std::FILE* f = std::fopen(p.string().c_str(), "wb");
  if (!f) throw IoError("cannot write " + p.string());
  std::fwrite(body.data(), 1, body.size(), f);
  std::fclose(f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tone-reservation PAPR reduction toolkit"};
  app.set_config("--config", "", "Read option defaults from a key=value file");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "Root random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads for Monte Carlo loops")->capture_default_str();
  app.add_flag("--quick", g.quick, "10^4-symbol profile, PAPR read at 10^-3");
  app.add_option("--out", g.out, "Directory for CSV and metadata output");

  ExperimentConfig cfg;
  std::string prt_file;
  std::vector<std::string> engine_names;

  auto add_signal_opts = [&](CLI::App* sub) {
    sub->add_option("--symbols", cfg.n_symbols, "Number of OFDM symbols")->capture_default_str();
    sub->add_option("--n", cfg.n_tones, "Subcarriers N")->capture_default_str();
    sub->add_option("--m", cfg.prt_size, "Reserved tones M")->capture_default_str();
    sub->add_option("--l", cfg.oversample, "Oversampling factor L")->capture_default_str();
    sub->add_option("--prt-file", prt_file, "PRT set file (default: bundled GA set)");
    sub->add_option("--iters", cfg.iterations, "Engine iterations K")->capture_default_str();
    sub->add_option("--rho", cfg.rho, "AAC-TR level step")->capture_default_str();
    sub->add_option("--const-beta", cfg.const_beta, "Fixed step of the constant engine")
        ->capture_default_str();
    sub->add_option("--const-iters", cfg.const_iterations, "Iterations of the constant engine")
        ->capture_default_str();
    sub->add_option("--lo", cfg.threshold_lo_db, "CCDF grid start (dB)")->capture_default_str();
    sub->add_option("--hi", cfg.threshold_hi_db, "CCDF grid end (dB)")->capture_default_str();
    sub->add_option("--step", cfg.threshold_step_db, "CCDF grid step (dB)")->capture_default_str();
  };

  // prt-search
  auto* search = app.add_subcommand("prt-search", "Search for a PRT set");
  std::string method = "ga";
  std::size_t start = 0, offset = 0;
  std::string search_output;
  search->add_option("--method", method, "ga|random|consecutive|spaced|exhaustive")
      ->check(CLI::IsMember({"ga", "random", "consecutive", "spaced", "exhaustive"}))
      ->capture_default_str();
  search->add_option("--n", cfg.ga.n_tones, "Subcarriers N")->capture_default_str();
  search->add_option("--m", cfg.ga.prt_size, "Reserved tones M")->capture_default_str();
  search->add_option("--population", cfg.ga.population_size, "GA population S")->capture_default_str();
  search->add_option("--iters", cfg.ga.max_iterations, "GA generations K")->capture_default_str();
  search->add_option("--pc", cfg.ga.p_crossover, "Crossover probability")->capture_default_str();
  search->add_option("--pm", cfg.ga.p_mutation, "Mutation probability")->capture_default_str();
  search->add_option("--elites", cfg.ga.elites, "Elite count T")->capture_default_str();
  search->add_option("--threshold", cfg.ga.merit_threshold, "Stop once merit <= threshold");
  search->add_option("--trials", cfg.random_trials, "Random-search trials")->capture_default_str();
  search->add_option("--start", start, "First index of the consecutive set")->capture_default_str();
  search->add_option("--offset", offset, "Offset of the equally spaced set")->capture_default_str();
  search->add_option("--output", search_output, "PRT file to write");

  // merit
  auto* merit_cmd = app.add_subcommand("merit", "Normalized secondary peak of a PRT set");
  std::size_t merit_n = 512;
  std::string merit_list;
  merit_cmd->add_option("--n", merit_n, "Subcarriers N")->capture_default_str();
  auto* mf = merit_cmd->add_option("--prt-file", prt_file, "PRT set file");
  merit_cmd->add_option("--prt", merit_list, "Comma-separated indices")->excludes(mf);

  // ccdf
  auto* ccdf_cmd = app.add_subcommand("ccdf", "Monte Carlo PAPR CCDF");
  add_signal_opts(ccdf_cmd);
  ccdf_cmd->add_option("--engines", engine_names, "gd,astr,aac,const")->delimiter(',');
  ccdf_cmd->add_option("--gamma-db", cfg.gamma_db, "Clipping ratio (dB)")->capture_default_str();
  ccdf_cmd->add_option("--gd-gamma-db", cfg.gd_gamma_db, "GD-TR target ratio (dB)")
      ->capture_default_str();

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Run one engine on random symbols and report per symbol");
  std::string engine_name = "aac";
  add_signal_opts(reduce);
  reduce->add_option("--engine", engine_name, "gd|astr|aac|const")->capture_default_str();
  reduce->add_option("--gamma-db", cfg.gamma_db, "Clipping ratio (dB)")->capture_default_str();

  // convergence
  auto* conv = app.add_subcommand("convergence", "Mean PAPR per iteration");
  add_signal_opts(conv);
  conv->add_option("--engines", engine_names, "gd,astr,aac")->delimiter(',');
  conv->add_option("--gamma-db", cfg.gamma_db, "Clipping ratio (dB)")->capture_default_str();

  // power-metrics
  auto* power = app.add_subcommand("power-metrics", "Average power increase, time and PAPR");
  add_signal_opts(power);
  power->add_option("--engines", engine_names, "gd,astr,aac,const")->delimiter(',');
  power->add_option("--gamma-db", cfg.gamma_db, "Clipping ratio (dB)")->capture_default_str();

  // complexity
  auto* cx = app.add_subcommand("complexity", "Analytic AAC-TR operation counts");
  complexity::CostModelParams cp;
  bool cx_json = false;
  cx->add_option("--n", cp.n_tones, "Subcarriers N")->capture_default_str();
  cx->add_option("--l", cp.oversample, "Oversampling factor L")->capture_default_str();
  cx->add_option("--m", cp.prt_size, "Reserved tones M")->capture_default_str();
  cx->add_option("--gamma-db", cp.gamma_db, "Clipping ratio (dB)")->capture_default_str();
  cx->add_option("--iters", cp.iterations, "Iterations K")->capture_default_str();
  cx->add_flag("--json", cx_json, "Print JSON instead of a table");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "CCDF family over clipping ratio or rho");
  std::string param = "gamma";
  add_signal_opts(sweep);
  sweep->add_option("--param", param, "gamma|rho")->check(CLI::IsMember({"gamma", "rho"}))
      ->capture_default_str();
  sweep->add_option("--values", cfg.sweep_values, "Comma-separated sweep values")
      ->delimiter(',')->required();
  sweep->add_option("--engines", engine_names, "Engines for a gamma sweep")->delimiter(',');
  sweep->add_option("--gamma-db", cfg.gamma_db, "Clipping ratio for a rho sweep (dB)")
      ->capture_default_str();

  // prt-table
  auto* table = app.add_subcommand("prt-table", "Secondary peaks of the reference PRT sets");

  CLI11_PARSE(app, argc, argv);

  try {
    apply_globals(cfg, g);
    if (!prt_file.empty()) cfg.prt_file = prt_file;
    cfg.engines = parse_engines(engine_names);

    if (*search) {
      auto& ga = cfg.ga;
      ga.seed = g.seed;
      if (!g.out.empty()) harness::ensure_writable(g.out);
      Rng rng(g.seed);
      std::optional<SearchResult> res;
      if (method == "ga") {
        res = ga_search(ga);
      } else if (method == "random") {
        res = random_search(ga.n_tones, ga.prt_size, cfg.random_trials, rng);
      } else if (method == "exhaustive") {
        res = exhaustive_search(ga.n_tones, ga.prt_size);
      } else {
        auto prt = method == "consecutive" ? consecutive_prt(ga.n_tones, ga.prt_size, start)
                                           : equally_spaced_prt(ga.n_tones, ga.prt_size, offset);
        const double m = merit(prt);
        res = SearchResult{prt, m, {m}, 1};
      }
      fmt::print("method      {}\nmerit       {:.6f}\nevaluations {}\nprt         {}\n", method,
                 res->best_merit, res->evaluations, format_prt(res->best_prt));
      fs::path prt_out = search_output;
      if (prt_out.empty() && !g.out.empty())
        prt_out = fs::path(g.out) / fmt::format("prt-search-{}-{}.txt", method, g.seed);
      if (!prt_out.empty()) {
        save_prt_file(prt_out, res->best_prt);
        json meta{{"method", method},
                  {"seed", g.seed},
                  {"n_tones", ga.n_tones},
                  {"prt_size", ga.prt_size},
                  {"population", ga.population_size},
                  {"iters", ga.max_iterations},
                  {"pc", ga.p_crossover},
                  {"pm", ga.p_mutation},
                  {"elites", ga.elites},
                  {"trials", cfg.random_trials},
                  {"best_merit", res->best_merit},
                  {"evaluations", res->evaluations},
                  {"merit_history", res->merit_history},
                  {"prt", format_prt(res->best_prt)},
                  {"version", harness::kVersion}};
        auto meta_path = prt_out;
        meta_path.replace_extension(".json");
        write_file(meta_path, meta.dump(2) + "\n");
      }
    } else if (*merit_cmd) {
      PrtSet prt = !merit_list.empty()
                       ? parse_prt(merit_list, merit_n)
                       : load_prt_file(prt_file.empty() ? bundled_prt_dir() / "ga_prt.txt"
                                                        : fs::path(prt_file),
                                       merit_n);
      const auto k = time_kernel(prt);
      fmt::print("M              {}\nmain_peak      {:.6f}\nsecondary_peak {:.6f}\nmerit          {:.6f}\n",
                 prt.size(), k.main_peak, k.secondary_peak, k.secondary_peak / k.main_peak);
    } else if (*ccdf_cmd) {
      cfg.kind = harness::ExperimentKind::Ccdf;
      print_curves(harness::run_ccdf(cfg), cfg.report_probability());
    } else if (*reduce) {
      cfg.validate();
      if (cfg.n_symbols == 100000) cfg.n_symbols = 1;
      const auto prt = harness::resolve_prt(cfg);
      const Engine engine = harness::parse_engine(engine_name);
      ClipConfig clip;
      clip.clip_ratio_db = cfg.gamma_db;
      clip.max_iterations = engine == Engine::Constant ? cfg.const_iterations : cfg.iterations;
      clip.rho = cfg.rho;
      clip.oversample = cfg.oversample;
      if (engine == Engine::Constant) clip.fixed_beta = cfg.const_beta;
      if (!g.out.empty()) harness::ensure_writable(g.out);
      const Rng root(cfg.seed);
      std::string csv = "symbol,papr_before_db,papr_after_db,iterations,api_db\n";
      fmt::print("{:>6} {:>10} {:>10} {:>5} {:>8}\n", "symbol", "before", "after", "iter", "API");
      for (std::size_t s = 0; s < cfg.n_symbols; ++s) {
        Rng rng = root.split(s);
        const auto x = idft_oversampled(generate_data_symbol(rng, prt), cfg.oversample);
        ReductionReport rep =
            engine == Engine::Gd    ? gd_tr(x, prt, clip.max_iterations, clip_level(x.avg_power(), cfg.gamma_db))
            : engine == Engine::Aac ? aac_tr(x, prt, clip)
                                    : as_tr(x, prt, clip);
        const double api = avg_power_increase_db(x, rep.reduced);
        fmt::print("{:>6} {:>10.3f} {:>10.3f} {:>5} {:>8.4f}\n", s, rep.papr_before_db,
                   rep.papr_after_db, rep.iterations_run, api);
        csv += fmt::format("{},{:.6f},{:.6f},{},{:.6f}\n", s, rep.papr_before_db, rep.papr_after_db,
                           rep.iterations_run, api);
      }
      if (!g.out.empty())
        write_file(fs::path(g.out) / fmt::format("reduce-{}-{}.csv", engine_name, cfg.seed), csv);
    } else if (*conv) {
      cfg.kind = harness::ExperimentKind::Convergence;
      const auto rep = harness::run_convergence(cfg);
      fmt::print("{:>5} {:>10}", "iter", "original");
      for (const auto& c : rep.curves) fmt::print(" {:>10}", c.label);
      fmt::print("\n");
      for (std::size_t i = 0; i < cfg.iterations; ++i) {
        fmt::print("{:>5} {:>10.3f}", i + 1, rep.original_mean_papr_db);
        for (const auto& c : rep.curves) fmt::print(" {:>10.3f}", c.mean_papr_db[i]);
        fmt::print("\n");
      }
    } else if (*power) {
      cfg.kind = harness::ExperimentKind::PowerMetrics;
      const auto rep = harness::run_power_metrics(cfg);
      fmt::print("{:<8} {:>10} {:>14} {:>10}\n", "engine", "API(dB)", "ms/symbol",
                 fmt::format("PAPR@{:g}", cfg.report_probability()));
      fmt::print("{:<8} {:>10} {:>14} {:>10.3f}\n", "original", "-", "-", rep.original_papr_db);
      for (const auto& r : rep.rows)
        fmt::print("{:<8} {:>10.4f} {:>14.4f} {:>10.3f}\n", r.label, r.api_db, r.ms_per_symbol, r.papr_db);
    } else if (*cx) {
      const auto c = complexity::total_aac_cost(cp);
      if (cx_json) {
        json j{{"mean_clipped", c.mean_clipped},       {"mean_peaks", c.mean_peaks},
               {"dft_mults", c.dft_mults},             {"idft_mults", c.idft_mults},
               {"total_real_mults", c.total_real_mults}, {"total_real_divs", c.total_real_divs},
               {"beta_saving", c.beta_saving}};
        fmt::print("{}\n", j.dump(2));
      } else {
        fmt::print("{:<18} {:>14.4f}\n", "mean_clipped", c.mean_clipped);
        fmt::print("{:<18} {:>14.4f}\n", "mean_peaks", c.mean_peaks);
        fmt::print("{:<18} {:>14.4f}\n", "dft_mults", c.dft_mults);
        fmt::print("{:<18} {:>14.4f}\n", "idft_mults", c.idft_mults);
        fmt::print("{:<18} {:>14.4f}\n", "total_real_mults", c.total_real_mults);
        fmt::print("{:<18} {:>14.4f}\n", "total_real_divs", c.total_real_divs);
        fmt::print("{:<18} {:>14.4f}\n", "beta_saving", c.beta_saving);
      }
    } else if (*sweep) {
      cfg.kind = param == "gamma" ? harness::ExperimentKind::GammaSweep : harness::ExperimentKind::RhoSweep;
      const auto rep = param == "gamma" ? harness::run_gamma_sweep(cfg) : harness::run_rho_sweep(cfg);
      print_curves(rep, cfg.report_probability());
    } else if (*table) {
      cfg.kind = harness::ExperimentKind::PrtTable;
      const auto rep = harness::run_prt_table(cfg);
      fmt::print("{:<16} {:<18} {:>8} {:>12}\n", "method", "cost", "merit", "difference");
      for (const auto& r : rep.rows)
        fmt::print("{:<16} {:<18} {:>8.4f} {:>12.4f}\n", r.method, r.cost, r.merit, r.difference);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
