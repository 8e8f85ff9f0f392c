#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spandep/scoring.hpp"

namespace spandep {

// Dynamic-programming equivalence class of a span. Two partial analyses with
// equal signatures score identically under every completion, so only the
// best (or, when counting, the sum) per signature is kept.
struct Sig {
  int16_t start = 0, end = 0;
  bool left_has_parent = false;
  bool right_has_parent = false;
  // Width one, or the top-level operation added the covering link. Only
  // minimal spans may serve as left operands (derivation uniqueness).
  bool minimal = false;
  int16_t tag_start = -1, tag_end = -1;
  // Order-3 chain models also track the tag one past each endword: actual
  // inside the span, hypothesized beyond it. -1 when unused.
  int16_t tag_start1 = -1, tag_end1 = -1;
  // Farthest-kid tags of the two endwords (the Markov state of their open
  // child chains); -1 = no kids yet.
  int16_t kid_of_left = -1, kid_of_right = -1;

  int width() const { return end - start; }
  bool operator==(const Sig&) const = default;
};

struct SigHash {
  size_t operator()(const Sig& s) const;
};

struct ChartStats {
  uint64_t combinations = 0;       // operand pairs examined (compatible pairs)
  uint64_t spans_built = 0;        // candidate spans offered for storage
  uint64_t cells_stored = 0;       // distinct signatures kept
  uint64_t max_cell_signatures = 0;  // peak signatures in one (start,end) cell
  std::map<int, uint64_t> width_max_signatures;  // width -> peak per cell
};

struct ParseOptions {
  int tag_cap = 8;
  double tie_eps = 1e-12;
  // Test instrumentation: added to every chart-side STOP factor, leaving the
  // direct scorer untouched (used to prove the optimality harness can catch
  // a corrupted incremental scorer).
  double debug_seal_bias = 0;
};

struct ParseResult {
  bool ok = false;
  std::string error;
  Sentence sentence;  // words + EOS, predicted tags and parents
  double logscore = 0;
  ChartStats stats;
};

// Joint tag+structure argmax over all projective analyses of the word
// sequence (no EOS mark in the input). Ties within tie_eps break to the
// lexicographically least (parent array, tag string sequence).
ParseResult parse_sentence(const std::vector<std::string>& words, const ModelParams& p,
                           const ParseOptions& opts = {});

// Number of distinct chart derivations of accepted parses, over all tag
// assignments the lexicon admits. Model-free. Throws std::overflow_error
// if the count exceeds uint64.
uint64_t count_derivations(const std::vector<std::string>& words, const Lexicon& lex,
                           int tag_cap, ChartStats* stats = nullptr);

// Runs the same model-free chart but only for its instrumentation
// (derivation totals saturate instead of overflowing), so arbitrarily long
// sentences can be surveyed for combination/space growth.
ChartStats survey_chart(const std::vector<std::string>& words, const Lexicon& lex, int tag_cap);

// Scores an already-specified structure by replaying its canonical
// derivation through the same incremental deltas the chart applies.
double replay_score(const ModelParams& p, const Sentence& s, double debug_seal_bias = 0);

}  // namespace spandep
