#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spandep/model.hpp"

namespace spandep {

// Every projective parent array over n real words plus the EOS mark:
// single parent per word, exactly one EOS child, acyclic, no crossing
// links. Arrays use in-memory indices (EOS slot holds -1). Exhaustive and
// duplicate-free by construction; results are cached per n. Throws
// CorpusError when n exceeds `bound` (a truncated oracle is worse than
// none) or n < 1.
const std::vector<std::vector<int>>& enumerate_trees(int n, int bound = 7);

// Independent check on |enumerate_trees(n)|: interval split-point
// recurrence (forests of adjacent complete subtrees), a different algorithm
// family from the filtering enumerator above.
uint64_t projective_tree_count(int n);

// Cartesian product of the lexicon's candidate tag sets, EOS tag appended
// to every sequence. Throws CorpusError when the product exceeds `cap`.
std::vector<std::vector<std::string>> enumerate_taggings(const std::vector<std::string>& words,
                                                         const Lexicon& lex, int tag_cap,
                                                         uint64_t cap = 1000000);

struct OracleBest {
  Sentence sentence;       // words + EOS, best tags and parents
  double logscore = 0;
  uint64_t structures = 0;  // (tree, tagging) pairs scored
};

// Exact argmax of tree_logprob_direct over enumerate_trees ×
// enumerate_taggings. Ties within tie_eps break to the lexicographically
// least (parent array, tag string sequence) — the parser's rule — so the
// result is invariant under enumeration order.
OracleBest brute_force_best(const std::vector<std::string>& words, const ModelParams& p,
                            int tag_cap, double tie_eps = 1e-12, uint64_t cap = 1000000,
                            int tree_bound = 7);

// projective_tree_count(n) × Π |candidate tags|, the ground truth for the
// parser's derivation count. Throws std::overflow_error past uint64.
uint64_t count_structures(const std::vector<std::string>& words, const Lexicon& lex,
                          int tag_cap);

}  // namespace spandep
