#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "trpapr/clipping.hpp"
#include "trpapr/error.hpp"
#include "trpapr/kernel.hpp"
#include "trpapr/prt_search.hpp"

using namespace trpapr;

namespace {

const PrtSet& ga_prt() {
  static const PrtSet prt = load_prt_file(bundled_prt_dir() / "ga_prt.txt", 512);
  return prt;
}

TimeSignal random_signal(std::uint64_t seed, const PrtSet& prt, std::size_t L = 4) {
  Rng rng(seed);
  return idft_oversampled(generate_data_symbol(rng, prt), L);
}

double max_data_error(const TimeSignal& a, const TimeSignal& b, const PrtSet& prt) {
  const auto xa = extract_tones(dft(a), a.n_tones(), a.oversample());
  const auto xb = extract_tones(dft(b), b.n_tones(), b.oversample());
  double err = 0.0;
  for (std::size_t k = 0; k < a.n_tones(); ++k)
    if (!prt.contains(k)) err = std::max(err, std::abs(xa[k] - xb[k]));
  return err;
}

}  // namespace

TEST_CASE("clip level") {
  CHECK(clip_level(1.0, 0.0) == doctest::Approx(1.0));
  CHECK(clip_level(2.0, 10.0) == doctest::Approx(std::sqrt(20.0)));
}

TEST_CASE("soft clip") {
  const CVec x{cplx(3, 4), cplx(0.5, 0), cplx(0, -2), cplx(1, 0)};
  const auto f = soft_clip(x, 1.0);
  CHECK(std::abs(f[0] - cplx(3, 4) * 0.8) < 1e-15);
  CHECK(f[1] == cplx{});
  CHECK(std::abs(f[2] - cplx(0, -1)) < 1e-15);
  CHECK(f[3] == cplx{});
  CHECK(clip_set(f) == IndexSet{0, 2});
  CHECK_THROWS_AS(soft_clip(x, 0.0), InputError);

  // x - f is the ideal limiter output.
  const auto sig = random_signal(1, ga_prt());
  const double A = clip_level(sig.avg_power(), 3.0);
  const auto g = soft_clip(sig.samples(), A);
  for (std::size_t n = 0; n < g.size(); ++n) {
    const auto lim = sig.samples()[n] - g[n];
    CHECK(std::abs(lim) <= A + 1e-12);
    if (g[n] != cplx{}) CHECK(std::abs(std::arg(lim) - std::arg(sig.samples()[n])) < 1e-12);
  }
}

TEST_CASE("peak set picks local maxima of the clipped samples") {
  const CVec x{5.0, 1.0, 2.0, 3.0, 2.0, 4.0, 4.0, 1.0};
  const auto f = soft_clip(x, 1.5);
  const auto s1 = clip_set(f);
  CHECK(s1 == IndexSet{0, 2, 3, 4, 5, 6});
  // 0 wraps to 7; 5 and 6 tie, the earlier is kept.
  CHECK(peak_set(x, s1) == IndexSet{0, 3, 5});
}

TEST_CASE("PRT filter") {
  SUBCASE("all bins give the identity") {
    std::vector<std::size_t> bins(16);
    for (std::size_t i = 0; i < 16; ++i) bins[i] = i;
    const PrtFilter all(bins, 16);
    CVec x(16);
    for (std::size_t i = 0; i < 16; ++i) x[i] = cplx(double(i), -0.5 * double(i));
    const auto y = all.apply(x);
    for (std::size_t i = 0; i < 16; ++i) CHECK(std::abs(y[i] - x[i]) < 1e-12);
  }
  SUBCASE("no bins give zero") {
    const PrtFilter none({}, 8);
    for (const auto& v : none.apply(CVec(8, cplx(1, 1)))) CHECK(v == cplx{});
  }
  SUBCASE("output occupies only PRT bins and is idempotent") {
    const auto& prt = ga_prt();
    const auto sig = random_signal(2, ga_prt());
    const auto f = soft_clip(sig.samples(), clip_level(sig.avg_power(), 4.0));
    const auto fh = filter_to_prt(f, prt, 4);
    const auto tones = extract_tones(dft(TimeSignal(fh, 4, 1.0)), 512, 4);
    for (std::size_t k = 0; k < 512; ++k)
      if (!prt.contains(k)) CHECK(std::abs(tones[k]) < 1e-12);
    const auto twice = filter_to_prt(fh, prt, 4);
    for (std::size_t n = 0; n < fh.size(); ++n) CHECK(std::abs(twice[n] - fh[n]) < 1e-12);
    // Parseval: projection never increases energy.
    CHECK(mean_power(fh) <= mean_power(f) + 1e-15);
  }
  CHECK_THROWS_AS(PrtFilter({8}, 8), InputError);
  CHECK_THROWS_AS(PrtFilter({1}, 8).apply(CVec(4)), InputError);
}

TEST_CASE("scaling factors") {
  const CVec f{2.0, 0.0, cplx(0, 1)};
  const CVec fh{1.0, 5.0, cplx(0, 1)};
  CHECK(*beta_astr(f, fh, {0}) == doctest::Approx(2.0));
  CHECK(*beta_astr(f, fh, {0, 2}) == doctest::Approx(1.5));
  CHECK_FALSE(beta_astr(f, fh, {}).has_value());
  CHECK_FALSE(beta_astr(f, CVec(3), {0}).has_value());
  CHECK(*beta_aac(f, fh, {0, 2}) == doctest::Approx(1.5));
  CHECK_FALSE(beta_aac(f, CVec(3), {0, 2}).has_value());

  // β minimises Σ_{S1} (|f| - β|f̂|)^2.
  const auto& prt = ga_prt();
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto sig = random_signal(100 + s, prt);
    const auto f2 = soft_clip(sig.samples(), clip_level(sig.avg_power(), 5.0));
    const auto s1 = clip_set(f2);
    if (s1.empty()) continue;
    const auto fh2 = filter_to_prt(f2, prt, 4);
    const double b = *beta_aac(f2, fh2, s1);
    auto cost = [&](double beta) {
      double c = 0.0;
      for (auto n : s1) c += std::pow(std::abs(f2[n]) - beta * std::abs(fh2[n]), 2);
      return c;
    };
    CHECK(cost(b) <= cost(b + 1e-3));
    CHECK(cost(b) <= cost(b - 1e-3));
  }
}

TEST_CASE("gradient level averages over the union of clip sets") {
  const CVec f_next{0.0, 2.0, 0.0, 4.0};
  CHECK(grad_level(f_next, {0, 1}) == doctest::Approx(2.0));
  CHECK(grad_level(f_next, {}) == doctest::Approx(3.0));
  CHECK(grad_level(CVec(4), {}) == 0.0);
}

TEST_CASE("engines leave data tones untouched") {
  const auto& prt = ga_prt();
  ClipConfig cfg;
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto x = random_signal(500 + s, prt);
    const auto aac = aac_tr(x, prt, cfg);
    const auto as = as_tr(x, prt, cfg);
    const auto gd = gd_tr(x, prt, 10, clip_level(x.avg_power(), 5.0));
    CHECK(max_data_error(x, aac.reduced, prt) < 1e-8);
    CHECK(max_data_error(x, as.reduced, prt) < 1e-8);
    CHECK(max_data_error(x, gd.reduced, prt) < 1e-8);
    CHECK(aac.papr_after_db == doctest::Approx(papr_db(TimeSignal(aac.reduced.samples(), 4, x.avg_power()))));
    CHECK(aac.reduced.avg_power() == x.avg_power());
  }
}

TEST_CASE("engines stop when nothing is clipped") {
  const auto& prt = ga_prt();
  const auto x = random_signal(7, prt);
  ClipConfig cfg;
  cfg.clip_ratio_db = 30.0;
  const auto a = aac_tr(x, prt, cfg);
  CHECK(a.iterations_run == 0);
  CHECK(a.reduced.samples() == x.samples());
  CHECK(a.papr_after_db == a.papr_before_db);
  CHECK(as_tr(x, prt, cfg).iterations_run == 0);
  CHECK(gd_tr(x, prt, 10, clip_level(x.avg_power(), 30.0)).iterations_run == 0);
}

TEST_CASE("adaptive engine raises its level monotonically") {
  const auto& prt = ga_prt();
  ClipConfig cfg;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto r = aac_tr(random_signal(900 + s, prt), prt, cfg);
    CHECK(std::is_sorted(r.level_history.begin(), r.level_history.end()));
    CHECK(r.level_history.size() == r.iterations_run);
    CHECK(r.papr_history_db.size() == r.iterations_run);
  }
  cfg.rho = 0.0;
  const auto r = aac_tr(random_signal(3, prt), prt, cfg);
  for (double l : r.level_history) CHECK(l == r.level_history.front());
}

TEST_CASE("fixed scaling") {
  const auto& prt = ga_prt();
  ClipConfig cfg;
  cfg.fixed_beta = 1.0;
  const auto r = as_tr(random_signal(12, prt), prt, cfg);
  for (double b : r.beta_history) CHECK(b == 1.0);
}

TEST_CASE("gradient descent with an impulse kernel clips the peak exactly") {
  CVec x(8, cplx(0.1, 0));
  x[3] = cplx(0, 2.0);
  const TimeSignal sig(x, 1);
  CVec kernel(8, cplx{});
  kernel[0] = cplx(0.5, 0);
  const auto r = gd_tr(sig, kernel, 1, 1.0);
  CHECK(r.iterations_run == 1);
  CHECK(std::abs(r.reduced.samples()[3] - cplx(0, 1.0)) < 1e-15);
  for (std::size_t n = 0; n < 8; ++n)
    if (n != 3) CHECK(r.reduced.samples()[n] == cplx(0.1, 0));
  CHECK_THROWS_AS(gd_tr(sig, kernel, 0, 1.0), InputError);
  CHECK_THROWS_AS(gd_tr(sig, CVec(4), 1, 1.0), InputError);
  CHECK_THROWS_AS(gd_tr(sig, CVec(8), 1, 1.0), InputError);
}

TEST_CASE("geometry and parameter errors") {
  const auto& prt = ga_prt();
  const auto x = random_signal(1, prt, 2);
  CHECK_THROWS_AS(aac_tr(x, prt, ClipConfig{}), InputError);
  ClipConfig bad;
  bad.rho = 1.5;
  CHECK_THROWS_AS(bad.validate(), InputError);
  bad = ClipConfig{};
  bad.max_iterations = 0;
  CHECK_THROWS_AS(bad.validate(), InputError);
}
