#include "trpapr/prt_search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "trpapr/error.hpp"
#include "trpapr/kernel.hpp"

namespace trpapr {

Chromosome::Chromosome(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
  for (auto& b : bits_) b = b ? 1 : 0;
}

Chromosome Chromosome::from_prt(const PrtSet& prt) {
  std::vector<std::uint8_t> bits(prt.n_tones(), 0);
  for (auto i : prt.indices()) bits[i] = 1;
  return Chromosome(std::move(bits));
}

std::size_t Chromosome::ones() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

PrtSet Chromosome::to_prt() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < bits_.size(); ++i)
    if (bits_[i]) idx.push_back(i);
  return PrtSet(std::move(idx), bits_.size());
}

void GaConfig::validate() const {
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("GA requires 0 < M < N");
  if (population_size < 2) throw InputError("GA population must hold at least 2 chromosomes");
  if (elites >= population_size) throw InputError("GA requires T < S");
  if (!(p_crossover >= 0.0 && p_crossover <= 1.0)) throw InputError("p_c must lie in [0, 1]");
  if (!(p_mutation >= 0.0 && p_mutation <= 1.0)) throw InputError("p_m must lie in [0, 1]");
  if (!is_power_of_two(n_tones)) throw InputError("N must be a power of two");
}

PrtSet consecutive_prt(std::size_t n_tones, std::size_t prt_size, std::size_t start) {
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("consecutive set requires 0 < M < N");
  if (start >= n_tones) throw InputError("start must lie in [0, N)");
  std::vector<std::size_t> idx(prt_size);
  for (std::size_t k = 0; k < prt_size; ++k) idx[k] = (start + k) % n_tones;
  return PrtSet(std::move(idx), n_tones);
}

PrtSet equally_spaced_prt(std::size_t n_tones, std::size_t prt_size, std::size_t offset) {
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("spaced set requires 0 < M < N");
  if (n_tones % prt_size != 0) throw InputError("N must be divisible by M for an equally spaced set");
  const auto step = n_tones / prt_size;
  if (offset >= step) throw InputError("offset must be smaller than the spacing N/M");
  std::vector<std::size_t> idx(prt_size);
  for (std::size_t k = 0; k < prt_size; ++k) idx[k] = offset + k * step;
  return PrtSet(std::move(idx), n_tones);
}

namespace {

// First `count` entries of `pool` become a uniform random sample without
// replacement.
void partial_shuffle(std::vector<std::size_t>& pool, std::size_t count, Rng& rng) {
  for (std::size_t i = 0; i < count; ++i) {
    auto j = rng.uniform_index(i, pool.size() - 1);
    std::swap(pool[i], pool[j]);
  }
}

Chromosome random_chromosome(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  partial_shuffle(pool, m, rng);
  std::vector<std::uint8_t> bits(n, 0);
  for (std::size_t i = 0; i < m; ++i) bits[pool[i]] = 1;
  return Chromosome(std::move(bits));
}

struct Scored {
  double merit;
  std::size_t index;
};

}  // namespace

PrtSet random_prt(std::size_t n_tones, std::size_t prt_size, Rng& rng) {
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("random set requires 0 < M < N");
  return random_chromosome(n_tones, prt_size, rng).to_prt();
}

SearchResult random_search(std::size_t n_tones, std::size_t prt_size, std::size_t trials, Rng& rng) {
  if (trials == 0) throw InputError("random search needs at least one trial");
  auto best = random_prt(n_tones, prt_size, rng);
  double best_merit = merit(best);
  SearchResult r{best, best_merit, {best_merit}, 1};
  for (std::size_t t = 1; t < trials; ++t) {
    auto cand = random_prt(n_tones, prt_size, rng);
    const double m = merit(cand);
    ++r.evaluations;
    if (m < r.best_merit) {
      r.best_merit = m;
      r.best_prt = std::move(cand);
    }
  }
  r.merit_history = {r.best_merit};
  return r;
}

std::pair<Chromosome, Chromosome> one_point_swap(const Chromosome& a, const Chromosome& b,
                                                 std::size_t point) {
  if (a.size() != b.size()) throw InputError("parents differ in length");
  if (point == 0 || point >= a.size()) throw InputError("cut point must lie in (0, N)");
  auto x = a.bits();
  auto y = b.bits();
  std::swap_ranges(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(point), y.begin());
  return {Chromosome(std::move(x)), Chromosome(std::move(y))};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            std::size_t point, std::size_t ones, Rng& rng) {
  auto [x, y] = one_point_swap(a, b, point);
  auto rx = repair(x, ones, rng);
  auto ry = repair(y, ones, rng);
  return {std::move(rx), std::move(ry)};
}

std::size_t flip_bits(Chromosome& c, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("mutation probability must lie in [0, 1]");
  std::size_t flipped = 0;
  for (auto& b : c.bits()) {
    if (rng.bernoulli(p)) {
      b ^= 1;
      ++flipped;
    }
  }
  return flipped;
}

Chromosome mutate(const Chromosome& c, double p, std::size_t ones, Rng& rng) {
  Chromosome out = c;
  flip_bits(out, p, rng);
  return repair(out, ones, rng);
}

Chromosome repair(const Chromosome& c, std::size_t ones, Rng& rng) {
  if (ones > c.size()) throw InputError("target one-count exceeds chromosome length");
  const auto have = c.ones();
  if (have == ones) return c;
  // Positions holding the value we need to flip away from.
  const std::uint8_t from = have > ones ? 1 : 0;
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c.bits()[i] == from) pool.push_back(i);
  const auto count = have > ones ? have - ones : ones - have;
  partial_shuffle(pool, count, rng);
  auto bits = c.bits();
  for (std::size_t i = 0; i < count; ++i) bits[pool[i]] = from ^ 1;
  return Chromosome(std::move(bits));
}

SearchResult ga_search(const GaConfig& cfg, const GenerationObserver& observer) {
  cfg.validate();
  Rng rng(cfg.seed);
  const auto s = cfg.population_size;
  const auto n = cfg.n_tones;
  const auto m = cfg.prt_size;

  std::vector<Chromosome> pop;
  pop.reserve(s);
  for (std::size_t i = 0; i < s; ++i) pop.push_back(random_chromosome(n, m, rng));

  std::vector<double> merits(s);
  std::size_t evaluations = 0;
  auto evaluate = [&] {
    for (std::size_t i = 0; i < s; ++i) merits[i] = merit(pop[i].to_prt());
    evaluations += s;
  };
  // Strict weak order on (merit, bits); lower is better.
  auto better = [&](std::size_t i, std::size_t j) {
    if (merits[i] != merits[j]) return merits[i] < merits[j];
    return pop[i] < pop[j];
  };
  auto ranking = [&] {
    std::vector<std::size_t> order(s);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), better);
    return order;
  };

  evaluate();
  auto order = ranking();
  std::vector<Chromosome> elites;
  std::vector<double> elite_merits;
  auto keep_elites = [&] {
    elites.clear();
    elite_merits.clear();
    for (std::size_t t = 0; t < cfg.elites; ++t) {
      elites.push_back(pop[order[t]]);
      elite_merits.push_back(merits[order[t]]);
    }
  };
  keep_elites();

  Chromosome best = pop[order[0]];
  double best_merit = merits[order[0]];
  std::vector<double> history{best_merit};
  if (observer) observer(0, pop, merits);

  for (std::size_t gen = 1; gen <= cfg.max_iterations; ++gen) {
    if (cfg.merit_threshold && best_merit <= *cfg.merit_threshold) break;

    // Binary tournament selection into the mating pool.
    std::vector<Chromosome> pool;
    pool.reserve(s);
    for (std::size_t i = 0; i < s; ++i) {
      auto a = rng.uniform_index(0, s - 1);
      auto b = rng.uniform_index(0, s - 1);
      pool.push_back(pop[better(b, a) ? b : a]);
    }
    // Random pairing without replacement; an odd one out passes unchanged.
    std::vector<std::size_t> perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    partial_shuffle(perm, s, rng);
    std::vector<Chromosome> next(pool.size(), pool.front());
    for (std::size_t i = 0; i + 1 < s; i += 2) {
      auto& pa = pool[perm[i]];
      auto& pb = pool[perm[i + 1]];
      if (rng.bernoulli(cfg.p_crossover)) {
        auto cut = rng.uniform_index(1, n - 1);
        auto [ca, cb] = crossover(pa, pb, cut, m, rng);
        next[i] = std::move(ca);
        next[i + 1] = std::move(cb);
      } else {
        next[i] = pa;
        next[i + 1] = pb;
      }
    }
    if (s % 2 == 1) next[s - 1] = pool[perm[s - 1]];
    for (auto& c : next) c = mutate(c, cfg.p_mutation, m, rng);
    pop = std::move(next);
    evaluate();

    // Stored elites replace the worst offspring.
    order = ranking();
    for (std::size_t t = 0; t < cfg.elites; ++t) {
      const auto slot = order[s - 1 - t];
      pop[slot] = elites[t];
      merits[slot] = elite_merits[t];
    }
    order = ranking();
    keep_elites();
    if (merits[order[0]] < best_merit) {
      best_merit = merits[order[0]];
      best = pop[order[0]];
    }
    history.push_back(best_merit);
    if (observer) observer(gen, pop, merits);
  }

  return SearchResult{best.to_prt(), best_merit, std::move(history), evaluations};
}

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

SearchResult exhaustive_search(std::size_t n_tones, std::size_t prt_size, double budget) {
  if (prt_size == 0 || prt_size >= n_tones) throw InputError("exhaustive search requires 0 < M < N");
  const double total = binomial(n_tones, prt_size);
  if (total > budget)
    throw BudgetError("exhaustive search over C(" + std::to_string(n_tones) + "," +
                      std::to_string(prt_size) + ") = " + std::to_string(static_cast<long double>(total)) +
                      " subsets exceeds the budget");
  // Lexicographic enumeration. Merits within kTieTolerance of the incumbent
  // count as ties (transform round-off), so the smallest set is kept.
  constexpr double kTieTolerance = 1e-12;
  std::vector<std::size_t> idx(prt_size);
  std::iota(idx.begin(), idx.end(), 0);
  std::optional<PrtSet> best;
  double best_merit = 0.0;
  std::size_t evaluations = 0;
  while (true) {
    PrtSet cand(idx, n_tones);
    const double mv = merit(cand);
    ++evaluations;
    if (!best || mv < best_merit - kTieTolerance) {
      best = std::move(cand);
      best_merit = mv;
    }
    std::size_t i = prt_size;
    while (i > 0 && idx[i - 1] == n_tones - prt_size + (i - 1)) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < prt_size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return SearchResult{*best, best_merit, {best_merit}, evaluations};
}

}  // namespace trpapr
