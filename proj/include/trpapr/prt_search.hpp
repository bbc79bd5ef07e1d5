#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "trpapr/prt_set.hpp"
#include "trpapr/rng.hpp"

namespace trpapr {

/// Binary tone-occupancy vector; a feasible chromosome has exactly M ones.
class Chromosome {
 public:
  explicit Chromosome(std::vector<std::uint8_t> bits);
  static Chromosome from_prt(const PrtSet& prt);

  std::size_t size() const { return bits_.size(); }
  std::size_t ones() const;
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }
  std::vector<std::uint8_t>& bits() { return bits_; }

  PrtSet to_prt() const;

  friend bool operator==(const Chromosome&, const Chromosome&) = default;
  friend auto operator<=>(const Chromosome&, const Chromosome&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

struct GaConfig {
  std::size_t population_size = 30;  // S
  std::size_t prt_size = 32;         // M
  std::size_t n_tones = 512;         // N
  std::size_t elites = 2;            // T
  double p_crossover = 0.9;
  double p_mutation = 0.05;
  std::size_t max_iterations = 170;  // K
  std::uint64_t seed = 1;
  /// Stop once the best merit is at or below this value. Off by default.
  std::optional<double> merit_threshold;

  void validate() const;
};

struct SearchResult {
  PrtSet best_prt;
  double best_merit = 1.0;
  /// Best merit so far; entry 0 is the initial population, then one entry
  /// per generation.
  std::vector<double> merit_history;
  std::size_t evaluations = 0;
};

PrtSet consecutive_prt(std::size_t n_tones, std::size_t prt_size, std::size_t start);
PrtSet equally_spaced_prt(std::size_t n_tones, std::size_t prt_size, std::size_t offset);

/// Uniformly random M-subset of [0, N).
PrtSet random_prt(std::size_t n_tones, std::size_t prt_size, Rng& rng);

SearchResult random_search(std::size_t n_tones, std::size_t prt_size, std::size_t trials, Rng& rng);

/// Swaps the [0, point) prefixes of a and b. No repair.
std::pair<Chromosome, Chromosome> one_point_swap(const Chromosome& a, const Chromosome& b,
                                                 std::size_t point);

/// One-point crossover followed by repair of both offspring to `ones` ones.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            std::size_t point, std::size_t ones, Rng& rng);

/// Flips each bit independently with probability p. Returns the flip count.
std::size_t flip_bits(Chromosome& c, double p, Rng& rng);

/// flip_bits followed by repair.
Chromosome mutate(const Chromosome& c, double p, std::size_t ones, Rng& rng);

/// Clears surplus ones or sets missing ones at uniformly chosen positions
/// until exactly `ones` bits are set. Touches |c.ones() - ones| bits.
Chromosome repair(const Chromosome& c, std::size_t ones, Rng& rng);

/// Called after every generation with the post-replacement population.
using GenerationObserver =
    std::function<void(std::size_t generation, std::span<const Chromosome> population,
                       std::span<const double> merits)>;

SearchResult ga_search(const GaConfig& cfg, const GenerationObserver& observer = {});

inline constexpr double kDefaultExhaustiveBudget = 1e6;

/// Global optimum over all C(N, M) subsets; ties go to the
/// lexicographically smallest index set. Throws BudgetError if C(N, M)
/// exceeds the budget.
SearchResult exhaustive_search(std::size_t n_tones, std::size_t prt_size,
                               double budget = kDefaultExhaustiveBudget);

double binomial(std::size_t n, std::size_t k);

}  // namespace trpapr
