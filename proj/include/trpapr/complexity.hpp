#pragma once

#include <cstddef>

namespace trpapr::complexity {

struct CostModelParams {
  std::size_t n_tones = 512;   // N
  std::size_t oversample = 4;  // L
  std::size_t prt_size = 32;   // M
  double gamma_db = 5.0;
  std::size_t iterations = 10;  // K

  void validate() const;
};

struct CostBreakdown {
  double mean_clipped = 0.0;  // expected |S_1|
  double mean_peaks = 0.0;    // expected |S_p|
  double dft_mults = 0.0;
  double idft_mults = 0.0;
  double total_real_mults = 0.0;
  double total_real_divs = 0.0;
  /// Per-iteration multiplications saved by computing β over S_1 with
  /// magnitudes instead of over S_p with complex products: 5·N̄_Sp − 2·N̄_S1.
  double beta_saving = 0.0;
};

/// Expected number of samples above the clipping level for a Rayleigh
/// envelope: L·N·exp(-γ), with γ linear and 2σ^2 = E|x_n|^2.
double mean_clipped_count(std::size_t n_tones, std::size_t oversample, double gamma_db);

/// Expected number of local peaks above the level: N̄_S1·(A/σ)/(L·√(6/π)),
/// A/σ = √(2γ).
double mean_peak_count(std::size_t n_tones, std::size_t oversample, double gamma_db);

/// Real multiplications of a pruned transform of `full_size` points with
/// `nonzero_inputs` nonzero inputs:
///   M_k = M_{k/2} + 2 M_{k/4} + max(0, min(6·nnz, 3k/2 − 8))
///   M_base = 0, M_{2·base} = max(0, min(3·nnz, 3·base/2 − 4))
/// full_size must equal base·2^j.
double pruned_dft_mults(std::size_t full_size, double nonzero_inputs, std::size_t base);

CostBreakdown total_aac_cost(const CostModelParams& params);

}  // namespace trpapr::complexity
