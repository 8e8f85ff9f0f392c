#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>

#include "spandep/eval.hpp"
#include "spandep/model.hpp"

namespace spandep {

// Behavioral settings shared by the CLI verbs. File paths stay on the
// command line; the config file carries only knobs that change results.
struct RunConfig {
  ModelKind kind = ModelKind::C;
  int markov_order = 2;      // tagging-chain order: 2 or 3
  uint64_t threshold = 10;   // back-off denominator threshold
  int tag_cap = 8;           // candidate tags per word
  int hapax_max = 1;         // open-class rule: carriers with count <= this are rare
  uint64_t seed = 1;
  int jobs = 1;              // sentence-level parallelism for parse
  int tree_bound = 7;        // oracle tree-enumeration word bound
  double tagging_cap = 1e6;  // oracle tagging-enumeration product cap
  CategoryConfig cats = CategoryConfig::penn_defaults();

  void validate() const;  // throws CorpusError on any out-of-range field
};

// Parses a "key = value" file ('#' comments and blank lines allowed).
// Unknown keys, duplicates, and lines without '=' raise CorpusError naming
// the offending line.
std::map<std::string, std::string> parse_config_file(const std::string& path);

// Applies parsed keys onto cfg, skipping keys named in `overridden`
// (command-line flags win over file values). Throws CorpusError on
// unparseable values. Does not validate ranges; call cfg.validate() after.
void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv,
                  const std::set<std::string>& overridden);

}  // namespace spandep
