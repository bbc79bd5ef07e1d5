#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "trpapr/ofdm.hpp"
#include "trpapr/prt_set.hpp"

namespace trpapr {

using IndexSet = std::vector<std::size_t>;

struct ClipConfig {
  double clip_ratio_db = 5.0;      // γ = A^2 / E|x_n|^2
  std::size_t max_iterations = 10; // K
  double rho = 0.7;                // level step of the adaptive engine
  std::size_t oversample = 4;      // L
  /// When set, as_tr uses this β every iteration instead of the
  /// peak-set least-squares value ("constant scaling").
  std::optional<double> fixed_beta;

  void validate() const;
};

struct ReductionReport {
  TimeSignal reduced;
  double papr_before_db = 0.0;
  double papr_after_db = 0.0;
  std::size_t iterations_run = 0;
  std::vector<double> level_history;  // A^(i) used at iteration i
  std::vector<double> beta_history;
  std::vector<double> papr_history_db;  // PAPR after each completed iteration
};

/// A = sqrt(10^(γ/10) · avg_power).
double clip_level(double avg_power, double clip_ratio_db);

/// Soft-limiter residue: f_n = x_n - A e^{jθ_n} where |x_n| > A, else 0.
CVec soft_clip(std::span<const cplx> x, double level);

/// S_1 = {n : |f_n| > 0}.
IndexSet clip_set(std::span<const cplx> f);

/// S_p: members n of S_1 with |x_n| > |x_{n-1}| and |x_n| >= |x_{n+1}|,
/// neighbours taken circularly.
IndexSet peak_set(std::span<const cplx> x, const IndexSet& clip_set);

/// Projection of a length-LN vector onto the reserved-tone images of the
/// LN-point spectrum.
class PrtFilter {
 public:
  PrtFilter(const PrtSet& prt, std::size_t oversample);
  /// Keeps only the listed bins. Used for degenerate test projections.
  PrtFilter(std::vector<std::size_t> bins, std::size_t length);

  CVec apply(std::span<const cplx> f) const;
  const std::vector<std::size_t>& bins() const { return bins_; }
  std::size_t length() const { return length_; }

 private:
  std::vector<std::size_t> bins_;
  std::size_t length_;
};

CVec filter_to_prt(std::span<const cplx> f, const PrtSet& prt, std::size_t oversample);

/// β = Re[Σ_{S_p} f·conj(f̂)] / Σ_{S_p} |f̂|^2. nullopt when S_p is empty or
/// the denominator vanishes (no clipping event).
std::optional<double> beta_astr(std::span<const cplx> f, std::span<const cplx> f_hat,
                                const IndexSet& peaks);

/// β = Σ_{S_1} |f||f̂| / Σ_{S_1} |f̂|^2, the least-squares minimizer of
/// Σ_{S_1} (|f_n| - β|f̂_n|)^2. nullopt when the denominator vanishes.
std::optional<double> beta_aac(std::span<const cplx> f, std::span<const cplx> f_hat,
                               const IndexSet& clipped);

/// Mean of |f_next| over Ω = S_1 ∪ {n : |f_next_n| > 0}; 0 when Ω is empty.
double grad_level(std::span<const cplx> f_next, const IndexSet& clipped);

/// Adaptive amplitude clipping: clip, project onto the reserved tones,
/// least-squares β on magnitudes, then raise the level by ρ∇_A.
ReductionReport aac_tr(const TimeSignal& x, const PrtSet& prt, const ClipConfig& cfg);

/// Adaptive-scaling clip-and-filter at a fixed level (or fixed β when
/// cfg.fixed_beta is set).
ReductionReport as_tr(const TimeSignal& x, const PrtSet& prt, const ClipConfig& cfg);

/// Gradient (kernel-subtraction) tone reservation: each iteration cancels
/// the current largest sample down to `level` with a shifted copy of the
/// oversampled kernel. Stops early once no sample exceeds `level`.
ReductionReport gd_tr(const TimeSignal& x, const PrtSet& prt, std::size_t iterations,
                      double level);
/// Same, with a precomputed oversampled kernel (length x.size()).
ReductionReport gd_tr(const TimeSignal& x, std::span<const cplx> kernel,
                      std::size_t iterations, double level);

}  // namespace trpapr
