#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "trpapr/prt_set.hpp"
#include "trpapr/rng.hpp"

namespace trpapr {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Subcarrier values of one OFDM block. N must be a power of two.
class FrequencySymbol {
 public:
  explicit FrequencySymbol(CVec values);

  std::size_t n_tones() const { return values_.size(); }
  const CVec& values() const { return values_; }
  cplx operator[](std::size_t k) const { return values_[k]; }

 private:
  CVec values_;
};

/// Oversampled time-domain block of L*N samples.
///
/// avg_power is the reference power used as the PAPR denominator. For a
/// signal produced by idft_oversampled it is the mean |x_n|^2 of that same
/// signal; a peak-reduced signal keeps the original's reference.
class TimeSignal {
 public:
  TimeSignal(CVec samples, std::size_t oversample, double avg_power);
  /// Reference power taken from the samples themselves.
  TimeSignal(CVec samples, std::size_t oversample);

  const CVec& samples() const { return samples_; }
  std::size_t oversample() const { return oversample_; }
  std::size_t n_tones() const { return samples_.size() / oversample_; }
  std::size_t size() const { return samples_.size(); }
  double avg_power() const { return avg_power_; }

  /// Same reference power, different samples.
  TimeSignal with_samples(CVec samples) const;

 private:
  CVec samples_;
  std::size_t oversample_;
  double avg_power_;
};

/// Empirical complementary CDF: probabilities[i] = #{papr > thresholds_db[i]} / n_samples.
struct CcdfCurve {
  std::vector<double> thresholds_db;
  std::vector<double> probabilities;
  std::vector<std::size_t> counts;
  std::size_t n_samples = 0;
};

struct QamConstellation {
  std::vector<cplx> points;
  double normalization;
};

bool is_power_of_two(std::size_t n);
double mean_power(std::span<const cplx> x);

/// Gray-labelled 16-QAM on the {±1,±3} grid scaled by 1/√10. Bits 3..2 of
/// the label select the in-phase level, bits 1..0 the quadrature level.
const QamConstellation& qam16();
CVec map_qam16(std::span<const int> indices);

/// Random data block: QAM on every non-reserved tone, exact zeros on `prt`.
FrequencySymbol generate_data_symbol(Rng& rng, const PrtSet& prt);

/// Position of tone k inside the L*N transform grid (lower half at the
/// bottom, upper half at the top, zeros in the middle).
std::size_t in_band_bin(std::size_t tone, std::size_t n_tones, std::size_t oversample);

/// x_n = 1/√N Σ_k X_k e^{j2π n b(k)/(LN)}, n = 0..LN-1, b(k) = in_band_bin(k).
TimeSignal idft_oversampled(const FrequencySymbol& symbol, std::size_t oversample);

/// Forward transform at length LN, scaled so that dft(idft_oversampled(X))
/// reproduces X on the in-band bins.
CVec dft(const TimeSignal& x);

/// Inverse of dft(): full LN-bin spectrum back to samples.
CVec idft_grid(std::span<const cplx> spectrum, std::size_t n_tones);

/// Reads the N in-band tones back out of an LN-bin spectrum.
FrequencySymbol extract_tones(std::span<const cplx> spectrum, std::size_t n_tones,
                              std::size_t oversample);

/// 10·log10(max|x_n|^2 / x.avg_power()).
double papr_db(const TimeSignal& x);

CcdfCurve ccdf(std::span<const double> papr_samples, std::span<const double> thresholds_db);

/// Threshold at which the empirical CCDF drops to `probability`: the value
/// exceeded by exactly floor(probability * n) of the samples.
double ccdf_crossing_db(std::span<const double> papr_samples, double probability);

/// 10·log10(mean|reduced|^2 / mean|original|^2).
double avg_power_increase_db(const TimeSignal& original, const TimeSignal& reduced);

/// Evenly spaced grid lo, lo+step, ..., hi (inclusive, rounded to the step).
std::vector<double> threshold_grid(double lo_db, double hi_db, double step_db);

}  // namespace trpapr
