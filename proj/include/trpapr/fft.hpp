#pragma once

#include <complex>
#include <span>

namespace trpapr::fft {

using cplx = std::complex<double>;

enum class Direction { Forward, Inverse };

/// Unnormalized in-place transform of arbitrary length backed by FFTW.
/// Forward uses e^{-j2πnk/n}, Inverse uses e^{+j2πnk/n}; neither scales.
/// Plans are cached per (size, direction) and shared across threads.
void transform(std::span<cplx> data, Direction dir);

inline void forward(std::span<cplx> data) { transform(data, Direction::Forward); }
inline void inverse(std::span<cplx> data) { transform(data, Direction::Inverse); }

}  // namespace trpapr::fft
