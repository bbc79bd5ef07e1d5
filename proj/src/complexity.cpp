#include "trpapr/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "trpapr/error.hpp"
#include "trpapr/ofdm.hpp"

namespace trpapr::complexity {

void CostModelParams::validate() const {
  if (!is_power_of_two(n_tones) || !is_power_of_two(oversample))
    throw InputError("N and L must be powers of two");
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("cost model requires 0 < M < N");
  if (!std::isfinite(gamma_db)) throw InputError("clipping ratio must be finite");
}

double mean_clipped_count(std::size_t n_tones, std::size_t oversample, double gamma_db) {
  const double gamma = std::pow(10.0, gamma_db / 10.0);
  return static_cast<double>(oversample * n_tones) * std::exp(-gamma);
}

double mean_peak_count(std::size_t n_tones, std::size_t oversample, double gamma_db) {
  const double gamma = std::pow(10.0, gamma_db / 10.0);
  const double level_over_sigma = std::sqrt(2.0 * gamma);
  return mean_clipped_count(n_tones, oversample, gamma_db) * level_over_sigma /
         (static_cast<double>(oversample) * std::sqrt(6.0 / std::numbers::pi));
}

double pruned_dft_mults(std::size_t full_size, double nonzero_inputs, std::size_t base) {
  if (base == 0 || full_size < base || full_size % base != 0 || !is_power_of_two(full_size / base))
    throw InputError("transform size " + std::to_string(full_size) +
                     " is not reachable from base size " + std::to_string(base));
  std::map<std::size_t, double> memo;
  auto eval = [&](auto&& self, std::size_t k) -> double {
    if (k == base) return 0.0;
    if (k == 2 * base)
      return std::max(0.0, std::min(3.0 * nonzero_inputs, 1.5 * static_cast<double>(base) - 4.0));
    if (auto it = memo.find(k); it != memo.end()) return it->second;
    const double v = self(self, k / 2) + 2.0 * self(self, k / 4) +
                     std::max(0.0, std::min(6.0 * nonzero_inputs, 1.5 * static_cast<double>(k) - 8.0));
    memo.emplace(k, v);
    return v;
  };
  return eval(eval, full_size);
}

CostBreakdown total_aac_cost(const CostModelParams& p) {
  p.validate();
  CostBreakdown c;
  const auto ln = p.oversample * p.n_tones;
  const double k = static_cast<double>(p.iterations);
  c.mean_clipped = mean_clipped_count(p.n_tones, p.oversample, p.gamma_db);
  c.mean_peaks = mean_peak_count(p.n_tones, p.oversample, p.gamma_db);
  c.dft_mults = pruned_dft_mults(ln, c.mean_clipped, p.oversample);
  // Inverse: M nonzero inputs, LN outputs, base size 1.
  c.idft_mults = pruned_dft_mults(ln, static_cast<double>(p.prt_size), 1);
  c.total_real_mults =
      k * (4.0 * c.mean_clipped + c.dft_mults + c.idft_mults + 2.0 * static_cast<double>(ln) + 1.0);
  c.total_real_divs = k * (c.mean_clipped + 2.0);
  c.beta_saving = 5.0 * c.mean_peaks - 2.0 * c.mean_clipped;
  return c;
}

}  // namespace trpapr::complexity
