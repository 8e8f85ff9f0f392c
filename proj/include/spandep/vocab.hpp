#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace spandep {

// Reserved symbols. These never occur as real words or tags; the treebank
// loader rejects corpora that use them.
inline constexpr std::string_view kEosSym = "<EOS>";    // end-of-sentence mark (word and tag)
inline constexpr std::string_view kStartSym = "<START>";  // chain-start sibling context
inline constexpr std::string_view kStopSym = "<STOP>";   // chain-stop event
inline constexpr std::string_view kBoundarySym = "<BND>";  // tag context beyond the EOS mark

bool is_reserved_symbol(std::string_view s);

// Interning table mapping strings to dense ids. Insertion order is the id
// order, so identical input always yields identical ids.
class Vocab {
 public:
  int intern(std::string_view s);
  // Returns -1 when absent (e.g. out-of-vocabulary words at parse time).
  int find(std::string_view s) const;
  const std::string& str(int id) const;
  int size() const { return static_cast<int>(items_.size()); }

  // rank[id] = position of items_[id] in byte-lexicographic order; used for
  // deterministic tie-breaking that doesn't depend on interning order.
  std::vector<int> lex_rank() const;

 private:
  std::vector<std::string> items_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace spandep
