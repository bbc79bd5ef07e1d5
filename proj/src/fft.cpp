#include "trpapr/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

namespace trpapr::fft {
namespace {

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

// Planning is not thread-safe in FFTW; execution of an existing plan on new
// arrays is. FFTW_UNALIGNED lets one plan serve any std::vector buffer.
fftw_plan_s* cached_plan(std::size_t n, Direction dir) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, Direction>, Plan> plans;

  std::lock_guard lock(mu);
  auto key = std::make_pair(n, dir);
  if (auto it = plans.find(key); it != plans.end()) return it->second.get();

  std::vector<cplx> scratch(n);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const int sign = dir == Direction::Forward ? FFTW_FORWARD : FFTW_BACKWARD;
  Plan plan(fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                             FFTW_ESTIMATE | FFTW_UNALIGNED));
  auto* raw = plan.get();
  plans.emplace(key, std::move(plan));
  return raw;
}

}  // namespace

void transform(std::span<cplx> data, Direction dir) {
  if (data.empty()) return;
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(cached_plan(data.size(), dir), buf, buf);
}

}  // namespace trpapr::fft
