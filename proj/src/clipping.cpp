#include "trpapr/clipping.hpp"

#include <algorithm>
#include <cmath>

#include "trpapr/error.hpp"
#include "trpapr/fft.hpp"
#include "trpapr/kernel.hpp"

namespace trpapr {

void ClipConfig::validate() const {
  if (max_iterations == 0) throw InputError("iteration count must be at least 1");
  if (!(rho >= 0.0 && rho <= 1.0)) throw InputError("rho must lie in [0, 1]");
  if (oversample == 0) throw InputError("oversampling factor must be positive");
  if (!std::isfinite(clip_ratio_db)) throw InputError("clipping ratio must be finite");
}

double clip_level(double avg_power, double clip_ratio_db) {
  return std::sqrt(std::pow(10.0, clip_ratio_db / 10.0) * avg_power);
}

CVec soft_clip(std::span<const cplx> x, double level) {
  if (!(level > 0.0)) throw InputError("clipping level must be positive");
  CVec f(x.size(), cplx{});
  for (std::size_t n = 0; n < x.size(); ++n) {
    const double mag = std::abs(x[n]);
    if (mag > level) f[n] = x[n] * (1.0 - level / mag);
  }
  return f;
}

IndexSet clip_set(std::span<const cplx> f) {
  IndexSet s;
  for (std::size_t n = 0; n < f.size(); ++n)
    if (f[n] != cplx{}) s.push_back(n);
  return s;
}

IndexSet peak_set(std::span<const cplx> x, const IndexSet& clipped) {
  IndexSet peaks;
  const auto len = x.size();
  for (auto n : clipped) {
    const double here = std::abs(x[n]);
    const double prev = std::abs(x[(n + len - 1) % len]);
    const double next = std::abs(x[(n + 1) % len]);
    if (here > prev && here >= next) peaks.push_back(n);
  }
  return peaks;
}

PrtFilter::PrtFilter(const PrtSet& prt, std::size_t oversample)
    : length_(prt.n_tones() * oversample) {
  for (auto k : prt.indices()) bins_.push_back(in_band_bin(k, prt.n_tones(), oversample));
  std::sort(bins_.begin(), bins_.end());
}

PrtFilter::PrtFilter(std::vector<std::size_t> bins, std::size_t length)
    : bins_(std::move(bins)), length_(length) {
  for (auto b : bins_)
    if (b >= length_) throw InputError("filter bin out of range");
}

CVec PrtFilter::apply(std::span<const cplx> f) const {
  if (f.size() != length_) throw InputError("filter input length mismatch");
  CVec spec(f.begin(), f.end());
  fft::forward(spec);
  CVec out(length_, cplx{});
  const double scale = 1.0 / static_cast<double>(length_);
  for (auto b : bins_) out[b] = spec[b] * scale;
  fft::inverse(out);
  return out;
}

CVec filter_to_prt(std::span<const cplx> f, const PrtSet& prt, std::size_t oversample) {
  return PrtFilter(prt, oversample).apply(f);
}

std::optional<double> beta_astr(std::span<const cplx> f, std::span<const cplx> f_hat,
                                const IndexSet& peaks) {
  double num = 0.0;
  double den = 0.0;
  for (auto n : peaks) {
    num += (f[n] * std::conj(f_hat[n])).real();
    den += std::norm(f_hat[n]);
  }
  if (peaks.empty() || !(den > 0.0)) return std::nullopt;
  return num / den;
}

std::optional<double> beta_aac(std::span<const cplx> f, std::span<const cplx> f_hat,
                               const IndexSet& clipped) {
  double num = 0.0;
  double den = 0.0;
  for (auto n : clipped) {
    const double a = std::abs(f_hat[n]);
    num += std::abs(f[n]) * a;
    den += a * a;
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

double grad_level(std::span<const cplx> f_next, const IndexSet& clipped) {
  // Ω = S_1 ∪ S_2; both index lists are sorted.
  auto residual = clip_set(f_next);
  IndexSet omega;
  std::set_union(clipped.begin(), clipped.end(), residual.begin(), residual.end(),
                 std::back_inserter(omega));
  if (omega.empty()) return 0.0;
  double sum = 0.0;
  for (auto n : omega) sum += std::abs(f_next[n]);
  return sum / static_cast<double>(omega.size());
}

namespace {

double papr_against(std::span<const cplx> y, double reference) {
  double peak = 0.0;
  for (const auto& v : y) peak = std::max(peak, std::norm(v));
  return 10.0 * std::log10(peak / reference);
}

void check_signal(const TimeSignal& x, const PrtSet& prt, std::size_t oversample) {
  if (x.oversample() != oversample || x.n_tones() != prt.n_tones())
    throw InputError("signal geometry does not match the PRT set and oversampling factor");
  if (!(x.avg_power() > 0.0)) throw DomainError("reference power of the input signal is zero");
}

ReductionReport start_report(const TimeSignal& x) {
  const double p = papr_db(x);
  return ReductionReport{x, p, p, 0, {}, {}, {}};
}

}  // namespace

ReductionReport aac_tr(const TimeSignal& x, const PrtSet& prt, const ClipConfig& cfg) {
  cfg.validate();
  check_signal(x, prt, cfg.oversample);
  const PrtFilter filter(prt, cfg.oversample);
  const double ref = x.avg_power();
  auto report = start_report(x);
  CVec y = x.samples();
  double level = clip_level(ref, cfg.clip_ratio_db);

  for (std::size_t i = 0; i < cfg.max_iterations; ++i) {
    const auto f = soft_clip(y, level);
    const auto s1 = clip_set(f);
    if (s1.empty()) break;
    const auto f_hat = filter.apply(f);
    const auto beta = beta_aac(f, f_hat, s1);
    if (!beta) break;
    for (std::size_t n = 0; n < y.size(); ++n) y[n] -= *beta * f_hat[n];
    const auto f_next = soft_clip(y, level);
    const double grad = grad_level(f_next, s1);

    report.level_history.push_back(level);
    report.beta_history.push_back(*beta);
    report.papr_history_db.push_back(papr_against(y, ref));
    ++report.iterations_run;
    level += cfg.rho * grad;
  }
  report.papr_after_db = papr_against(y, ref);
  report.reduced = x.with_samples(std::move(y));
  return report;
}

ReductionReport as_tr(const TimeSignal& x, const PrtSet& prt, const ClipConfig& cfg) {
  cfg.validate();
  check_signal(x, prt, cfg.oversample);
  const PrtFilter filter(prt, cfg.oversample);
  const double ref = x.avg_power();
  auto report = start_report(x);
  CVec y = x.samples();
  const double level = clip_level(ref, cfg.clip_ratio_db);

  for (std::size_t i = 0; i < cfg.max_iterations; ++i) {
    const auto f = soft_clip(y, level);
    const auto s1 = clip_set(f);
    if (s1.empty()) break;
    const auto f_hat = filter.apply(f);
    std::optional<double> beta = cfg.fixed_beta;
    if (!beta) beta = beta_astr(f, f_hat, peak_set(y, s1));
    if (!beta) break;
    for (std::size_t n = 0; n < y.size(); ++n) y[n] -= *beta * f_hat[n];

    report.level_history.push_back(level);
    report.beta_history.push_back(*beta);
    report.papr_history_db.push_back(papr_against(y, ref));
    ++report.iterations_run;
  }
  report.papr_after_db = papr_against(y, ref);
  report.reduced = x.with_samples(std::move(y));
  return report;
}

ReductionReport gd_tr(const TimeSignal& x, const PrtSet& prt, std::size_t iterations,
                      double level) {
  if (x.n_tones() != prt.n_tones()) throw InputError("signal and PRT set disagree on N");
  const auto kernel = oversampled_kernel(prt, x.oversample());
  return gd_tr(x, kernel, iterations, level);
}

ReductionReport gd_tr(const TimeSignal& x, std::span<const cplx> kernel, std::size_t iterations,
                      double level) {
  if (iterations == 0) throw InputError("iteration count must be at least 1");
  if (!(level > 0.0)) throw InputError("target level must be positive");
  if (kernel.size() != x.size()) throw InputError("kernel length must match the signal");
  const double ref = x.avg_power();
  if (!(ref > 0.0)) throw DomainError("reference power of the input signal is zero");
  const cplx p0 = kernel[0];
  if (std::abs(p0) == 0.0) throw InputError("kernel main peak is zero");

  auto report = start_report(x);
  CVec y = x.samples();
  const auto len = y.size();
  for (std::size_t i = 0; i < iterations; ++i) {
    std::size_t k = 0;
    double peak = -1.0;
    for (std::size_t n = 0; n < len; ++n) {
      const double mag = std::norm(y[n]);
      if (mag > peak) {
        peak = mag;
        k = n;
      }
    }
    const double mag = std::sqrt(peak);
    if (mag <= level) break;
    const cplx alpha = (mag - level) * (y[k] / mag) / p0;
    for (std::size_t n = k; n < len; ++n) y[n] -= alpha * kernel[n - k];
    for (std::size_t n = 0; n < k; ++n) y[n] -= alpha * kernel[n + len - k];

    report.level_history.push_back(level);
    report.beta_history.push_back(std::abs(alpha));
    report.papr_history_db.push_back(papr_against(y, ref));
    ++report.iterations_run;
  }
  report.papr_after_db = papr_against(y, ref);
  report.reduced = x.with_samples(std::move(y));
  return report;
}

}  // namespace trpapr
