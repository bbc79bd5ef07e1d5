#include "trpapr/ofdm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trpapr/error.hpp"
#include "trpapr/fft.hpp"

namespace trpapr {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

double mean_power(std::span<const cplx> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& v : x) acc += std::norm(v);
  return acc / static_cast<double>(x.size());
}

FrequencySymbol::FrequencySymbol(CVec values) : values_(std::move(values)) {
  if (!is_power_of_two(values_.size()))
    throw InputError("number of tones must be a power of two, got " +
                     std::to_string(values_.size()));
}

TimeSignal::TimeSignal(CVec samples, std::size_t oversample, double avg_power)
    : samples_(std::move(samples)), oversample_(oversample), avg_power_(avg_power) {
  if (oversample_ == 0) throw InputError("oversampling factor must be positive");
  if (samples_.empty() || samples_.size() % oversample_ != 0)
    throw InputError("sample count must be a positive multiple of the oversampling factor");
  if (!(avg_power_ >= 0.0)) throw InputError("average power must be nonnegative");
}

TimeSignal::TimeSignal(CVec samples, std::size_t oversample)
    : TimeSignal(samples, oversample, mean_power(samples)) {}

TimeSignal TimeSignal::with_samples(CVec samples) const {
  return TimeSignal(std::move(samples), oversample_, avg_power_);
}

const QamConstellation& qam16() {
  static const QamConstellation c = [] {
    // Gray order of the 2-bit level label.
    constexpr double kLevels[4] = {-3.0, -1.0, 3.0, 1.0};
    QamConstellation q;
    q.normalization = 1.0 / std::sqrt(10.0);
    q.points.resize(16);
    for (int i = 0; i < 16; ++i)
      q.points[i] = cplx(kLevels[(i >> 2) & 3], kLevels[i & 3]) * q.normalization;
    return q;
  }();
  return c;
}

CVec map_qam16(std::span<const int> indices) {
  const auto& points = qam16().points;
  CVec out;
  out.reserve(indices.size());
  for (int i : indices) {
    if (i < 0 || i >= 16) throw InputError("16-QAM index out of range: " + std::to_string(i));
    out.push_back(points[i]);
  }
  return out;
}

FrequencySymbol generate_data_symbol(Rng& rng, const PrtSet& prt) {
  const auto n = prt.n_tones();
  if (prt.size() >= n) throw InputError("PRT set must leave at least one data tone");
  const auto& points = qam16().points;
  const auto reserved = prt.mask();
  CVec values(n, cplx{});
  for (std::size_t k = 0; k < n; ++k)
    if (!reserved[k]) values[k] = points[rng.uniform_index(0, 15)];
  return FrequencySymbol(std::move(values));
}

std::size_t in_band_bin(std::size_t tone, std::size_t n_tones, std::size_t oversample) {
  return tone < n_tones / 2 ? tone : tone + (oversample - 1) * n_tones;
}

TimeSignal idft_oversampled(const FrequencySymbol& symbol, std::size_t oversample) {
  if (oversample == 0) throw InputError("oversampling factor must be positive");
  const auto n = symbol.n_tones();
  const auto len = n * oversample;
  CVec grid(len, cplx{});
  for (std::size_t k = 0; k < n; ++k) grid[in_band_bin(k, n, oversample)] = symbol[k];
  fft::inverse(grid);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (auto& v : grid) v *= scale;
  return TimeSignal(std::move(grid), oversample);
}

CVec dft(const TimeSignal& x) {
  CVec spec = x.samples();
  fft::forward(spec);
  const double scale = std::sqrt(static_cast<double>(x.n_tones())) / static_cast<double>(spec.size());
  for (auto& v : spec) v *= scale;
  return spec;
}

CVec idft_grid(std::span<const cplx> spectrum, std::size_t n_tones) {
  CVec out(spectrum.begin(), spectrum.end());
  fft::inverse(out);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_tones));
  for (auto& v : out) v *= scale;
  return out;
}

FrequencySymbol extract_tones(std::span<const cplx> spectrum, std::size_t n_tones,
                              std::size_t oversample) {
  if (spectrum.size() != n_tones * oversample)
    throw InputError("spectrum length does not match N*L");
  CVec values(n_tones);
  for (std::size_t k = 0; k < n_tones; ++k) values[k] = spectrum[in_band_bin(k, n_tones, oversample)];
  return FrequencySymbol(std::move(values));
}

double papr_db(const TimeSignal& x) {
  if (x.avg_power() <= 0.0) throw DomainError("PAPR undefined for zero reference power");
  double peak = 0.0;
  for (const auto& v : x.samples()) peak = std::max(peak, std::norm(v));
  return 10.0 * std::log10(peak / x.avg_power());
}

CcdfCurve ccdf(std::span<const double> papr_samples, std::span<const double> thresholds_db) {
  if (papr_samples.empty()) throw InputError("CCDF needs at least one sample");
  if (!std::is_sorted(thresholds_db.begin(), thresholds_db.end()))
    throw InputError("CCDF thresholds must be increasing");
  std::vector<double> sorted(papr_samples.begin(), papr_samples.end());
  std::sort(sorted.begin(), sorted.end());
  CcdfCurve c;
  c.n_samples = sorted.size();
  c.thresholds_db.assign(thresholds_db.begin(), thresholds_db.end());
  for (double t : thresholds_db) {
    auto above = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), t));
    c.counts.push_back(above);
    c.probabilities.push_back(static_cast<double>(above) / static_cast<double>(c.n_samples));
  }
  return c;
}

double ccdf_crossing_db(std::span<const double> papr_samples, double probability) {
  if (papr_samples.empty()) throw InputError("CCDF needs at least one sample");
  if (!(probability > 0.0 && probability < 1.0)) throw InputError("probability must be in (0, 1)");
  std::vector<double> sorted(papr_samples.begin(), papr_samples.end());
  const auto n = sorted.size();
  auto exceed = static_cast<std::size_t>(std::floor(probability * static_cast<double>(n)));
  exceed = std::min(exceed, n - 1);
  auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(n - 1 - exceed);
  std::nth_element(sorted.begin(), nth, sorted.end());
  return *nth;
}

double avg_power_increase_db(const TimeSignal& original, const TimeSignal& reduced) {
  if (original.size() != reduced.size()) throw InputError("signals differ in length");
  const double p0 = mean_power(original.samples());
  if (p0 <= 0.0) throw DomainError("average power increase undefined for a zero signal");
  return 10.0 * std::log10(mean_power(reduced.samples()) / p0);
}

std::vector<double> threshold_grid(double lo_db, double hi_db, double step_db) {
  if (!(step_db > 0.0) || hi_db < lo_db) throw InputError("invalid threshold grid");
  const auto steps = static_cast<std::size_t>(std::llround((hi_db - lo_db) / step_db));
  std::vector<double> g(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) g[i] = lo_db + step_db * static_cast<double>(i);
  return g;
}

}  // namespace trpapr
