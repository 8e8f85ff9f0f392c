#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "spandep/corpus.hpp"

namespace spandep {

// Token-category tag sets, matched against gold tags so tagging errors never
// move tokens between rows. Noun / lexical-verb / punctuation sets must be
// pairwise disjoint.
struct CategoryConfig {
  std::set<std::string> punct;
  std::set<std::string> nouns;
  std::set<std::string> lexverbs;

  static CategoryConfig penn_defaults();
  void validate() const;  // throws CorpusError on overlap
};

inline constexpr int kNumCategories = 4;
inline constexpr const char* kCategoryNames[kNumCategories] = {"All tokens", "Non-punc", "Nouns",
                                                               "Lex verbs"};

struct CatCounts {
  uint64_t correct = 0;
  uint64_t total = 0;
  double pct() const { return total == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / total; }
};

struct EvalReport {
  std::string model;  // column label: A, B, C, Cprime, X, Baseline, ...
  std::array<CatCounts, kNumCategories> tag;
  std::array<CatCounts, kNumCategories> attach;
  bool has_attach = true;  // false for tagging-only predictions (model X)
};

// Token-level tagging and attachment accuracy of pred against gold, per
// category; the EOS row is excluded, links into EOS count. Throws
// CorpusError when the corpora are misaligned (sentence count, token count,
// or word mismatch).
EvalReport evaluate(const std::string& model, const Treebank& gold, const Treebank& pred,
                    const CategoryConfig& cats, bool score_attach = true);

// Most-frequent-tag baseline: per-word modal tag (lexicographically least on
// ties); unknown words get the corpus-wide modal tag.
struct MftTagger {
  std::map<std::string, std::string> word_tag;
  std::string fallback;
};

MftTagger fit_mft(const Treebank& train);

// Adjacent-attachment baseline: per tag, the majority head bucket among
// {previous word, following word, EOS} learned from gold links (heads that
// are the EOS mark count as EOS regardless of adjacency; only adjacent heads
// fill the positional buckets). Ties and vote-less tags resolve
// following > previous > EOS; edge tokens fall back to the feasible
// positional alternative, then EOS.
enum class AdjRule { Previous = 0, Following = 1, Eos = 2 };

struct AdjacentAttacher {
  std::map<std::string, AdjRule> rule;
  AdjRule fallback = AdjRule::Following;  // unseen tag at test time
};

AdjacentAttacher fit_adjacent(const Treebank& train);

// Applies both baselines to `input` (which must carry gold tags: the
// attachment rules key on the input's own tag column). Returns the
// prediction corpus; `unseen_words` counts tokens tagged by the MFT
// fallback.
Treebank apply_baseline(const MftTagger& mft, const AdjacentAttacher& adj, const Treebank& input,
                        uint64_t* unseen_words = nullptr);

// Tables in the fixed column order A, B, C, Cprime, X, Baseline (unknown
// labels after, in input order); the attachment table omits tagging-only
// reports. Output is deterministic byte-for-byte; `tsv` switches the text
// layout to tab-separated.
std::string render_report(const std::vector<EvalReport>& reports, bool tsv = false);

}  // namespace spandep
