#include "trpapr/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "trpapr/error.hpp"

namespace trpapr {

FrequencySymbol freq_kernel(const PrtSet& prt) {
  CVec p(prt.n_tones(), cplx{});
  for (auto i : prt.indices()) p[i] = 1.0;
  return FrequencySymbol(std::move(p));
}

TimeKernel time_kernel(const PrtSet& prt) {
  TimeKernel k;
  k.samples = idft_oversampled(freq_kernel(prt), 1).samples();
  k.main_peak = std::abs(k.samples[0]);
  for (std::size_t n = 1; n < k.samples.size(); ++n)
    k.secondary_peak = std::max(k.secondary_peak, std::abs(k.samples[n]));
  return k;
}

double merit(const PrtSet& prt) {
  const auto k = time_kernel(prt);
  return k.secondary_peak / k.main_peak;
}

CVec oversampled_kernel(const PrtSet& prt, std::size_t oversample) {
  return idft_oversampled(freq_kernel(prt), oversample).samples();
}

CVec shifted_kernel(std::span<const cplx> kernel, std::size_t shift) {
  const auto len = kernel.size();
  if (shift > len) throw InputError("kernel shift out of range");
  shift %= len;
  CVec out(len);
  for (std::size_t n = 0; n < len; ++n) out[(n + shift) % len] = kernel[n];
  return out;
}

}  // namespace trpapr
