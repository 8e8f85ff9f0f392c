#include "spandep/vocab.hpp"

#include <algorithm>
#include <stdexcept>

namespace spandep {

bool is_reserved_symbol(std::string_view s) {
  return s == kEosSym || s == kStartSym || s == kStopSym || s == kBoundarySym;
}

int Vocab::intern(std::string_view s) {
  auto it = index_.find(std::string(s));
  if (it != index_.end()) return it->second;
  int id = static_cast<int>(items_.size());
  items_.emplace_back(s);
  index_.emplace(items_.back(), id);
  return id;
}

int Vocab::find(std::string_view s) const {
  auto it = index_.find(std::string(s));
  return it == index_.end() ? -1 : it->second;
}

const std::string& Vocab::str(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("Vocab::str: bad id");
  return items_[id];
}

std::vector<int> Vocab::lex_rank() const {
  std::vector<int> order(items_.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return items_[a] < items_[b]; });
  std::vector<int> rank(items_.size());
  for (size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = static_cast<int>(pos);
  return rank;
}

}  // namespace spandep
