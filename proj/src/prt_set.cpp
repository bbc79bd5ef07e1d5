#include "trpapr/prt_set.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "trpapr/error.hpp"

namespace trpapr {

PrtSet::PrtSet(std::vector<std::size_t> indices, std::size_t n_tones)
    : PrtSet(std::move(indices), n_tones, false) {}

PrtSet::PrtSet(std::vector<std::size_t> indices, std::size_t n_tones, bool allow_full)
    : indices_(std::move(indices)), n_tones_(n_tones) {
  std::sort(indices_.begin(), indices_.end());
  if (indices_.empty()) throw InputError("PRT set must not be empty");
  if (!allow_full && indices_.size() >= n_tones_)
    throw InputError("PRT set size M=" + std::to_string(indices_.size()) +
                     " must be smaller than N=" + std::to_string(n_tones_));
  if (indices_.back() >= n_tones_)
    throw InputError("PRT index " + std::to_string(indices_.back()) + " out of range [0, " +
                     std::to_string(n_tones_) + ")");
  if (std::adjacent_find(indices_.begin(), indices_.end()) != indices_.end())
    throw InputError("PRT indices must be distinct");
}

PrtSet PrtSet::full_band(std::size_t n_tones) {
  std::vector<std::size_t> all(n_tones);
  for (std::size_t i = 0; i < n_tones; ++i) all[i] = i;
  return PrtSet(std::move(all), n_tones, true);
}

bool PrtSet::contains(std::size_t tone) const {
  return std::binary_search(indices_.begin(), indices_.end(), tone);
}

std::vector<bool> PrtSet::mask() const {
  std::vector<bool> m(n_tones_, false);
  for (auto i : indices_) m[i] = true;
  return m;
}

PrtSet parse_prt(std::string_view text, std::size_t n_tones) {
  std::vector<std::size_t> idx;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto field = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front())))
      field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back())))
      field.remove_suffix(1);
    if (field.empty()) throw InputError("empty field in PRT list");
    std::size_t v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || end != field.data() + field.size())
      throw InputError("invalid PRT index '" + std::string(field) + "'");
    idx.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return PrtSet(std::move(idx), n_tones);
}

std::string format_prt(const PrtSet& prt) {
  std::string out;
  for (std::size_t i = 0; i < prt.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(prt.indices()[i]);
  }
  return out;
}

PrtSet load_prt_file(const std::filesystem::path& path, std::size_t n_tones) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open PRT file " + path.string());
  std::string line, content;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!content.empty()) throw InputError("PRT file must contain a single line: " + path.string());
    content = line;
  }
  if (content.empty()) throw InputError("PRT file is empty: " + path.string());
  return parse_prt(content, n_tones);
}

void save_prt_file(const std::filesystem::path& path, const PrtSet& prt) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write PRT file " + path.string());
  out << format_prt(prt) << '\n';
}

std::filesystem::path bundled_prt_dir() {
  return std::filesystem::path(TRPAPR_DATA_DIR) / "prt";
}

}  // namespace trpapr
