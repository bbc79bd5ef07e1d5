#pragma once

#include <cstddef>
#include <span>

#include "trpapr/ofdm.hpp"
#include "trpapr/prt_set.hpp"

namespace trpapr {

/// Time-domain cancellation kernel at Nyquist rate.
struct TimeKernel {
  CVec samples;
  double main_peak = 0.0;       // |samples[0]| = M/√N
  double secondary_peak = 0.0;  // max_{k != 0} |samples[k]|
};

/// 0/1 indicator of the reserved tones.
FrequencySymbol freq_kernel(const PrtSet& prt);

TimeKernel time_kernel(const PrtSet& prt);

/// Normalized secondary peak of the kernel: secondary_peak / main_peak.
/// This is the PRT-search objective (lower is better), in [0, 1].
double merit(const PrtSet& prt);

/// Kernel synthesized on the L*N grid with the same in-band placement as
/// data symbols. main peak stays M/√N.
CVec oversampled_kernel(const PrtSet& prt, std::size_t oversample);

/// Circular right shift: out[n] = kernel[(n - shift) mod len]. shift must
/// lie in [0, len]; a shift equal to len wraps to the identity.
CVec shifted_kernel(std::span<const cplx> kernel, std::size_t shift);

}  // namespace trpapr
