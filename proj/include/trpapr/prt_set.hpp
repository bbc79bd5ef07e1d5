#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trpapr {

/// Sorted set of reserved (peak-reduction) tone indices within [0, N).
class PrtSet {
 public:
  /// Validates distinctness and range; requires 0 < M < N. Indices are
  /// sorted on construction.
  PrtSet(std::vector<std::size_t> indices, std::size_t n_tones);

  /// All N tones reserved. Only meaningful as a degenerate reference case
  /// (its kernel is a single impulse); bypasses the M < N check.
  static PrtSet full_band(std::size_t n_tones);

  const std::vector<std::size_t>& indices() const { return indices_; }
  std::size_t n_tones() const { return n_tones_; }
  std::size_t size() const { return indices_.size(); }
  bool contains(std::size_t tone) const;

  /// Reserved-tone indicator of length N.
  std::vector<bool> mask() const;

  friend bool operator==(const PrtSet&, const PrtSet&) = default;

 private:
  PrtSet(std::vector<std::size_t> indices, std::size_t n_tones, bool allow_full);

  std::vector<std::size_t> indices_;
  std::size_t n_tones_;
};

/// Parses the single-line "i0,i1,...,iM-1" form.
PrtSet parse_prt(std::string_view text, std::size_t n_tones);
std::string format_prt(const PrtSet& prt);

PrtSet load_prt_file(const std::filesystem::path& path, std::size_t n_tones);
void save_prt_file(const std::filesystem::path& path, const PrtSet& prt);

/// Directory holding the bundled reference sets (ga/ce/cs/es/rs_prt.txt).
std::filesystem::path bundled_prt_dir();

}  // namespace trpapr
