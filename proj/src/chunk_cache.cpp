#include "opcsim/chunk_cache.hpp"

namespace opcsim {

std::string CachedObjectState::ranks_repr() const {
  if (last_contiguous > 0) {
    if (last_contiguous == 1) return "1";
    return "1-" + std::to_string(last_contiguous);
  }
  if (ranks.empty()) return "-";
  std::string out;
  std::size_t i = 0;
  while (i < ranks.size()) {
    std::size_t j = i;
    while (j + 1 < ranks.size() && ranks[j + 1] == ranks[j] + 1) ++j;
    if (!out.empty()) out += ';';
    out += std::to_string(ranks[i]);
    if (j > i) {
      out += '-';
      out += std::to_string(ranks[j]);
    }
    i = j + 1;
  }
  return out;
}

}  // namespace opcsim
