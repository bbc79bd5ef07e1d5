#include "trpapr/rng.hpp"

namespace trpapr {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

Rng Rng::split(std::uint64_t stream) const {
  return Rng(mix64(seed_ ^ mix64(stream + 0x632be59bd9b4e019ULL)));
}

std::size_t Rng::uniform_index(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

double Rng::uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

bool Rng::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

}  // namespace trpapr
