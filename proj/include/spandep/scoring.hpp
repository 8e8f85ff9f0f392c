#pragma once

#include <vector>

#include "spandep/model.hpp"

namespace spandep {

// A fully specified hypothesis (tags + parents) mapped into a model's
// symbol ids. Out-of-vocabulary words map to -1 and simply never match
// observed table entries.
struct StructureIds {
  std::vector<int> tag;     // size N; tag[N-1] is the EOS tag
  std::vector<int> word;    // size N; word[N-1] is the EOS word
  std::vector<int> parent;  // size N; parent[N-1] = -1

  int size() const { return static_cast<int>(tag.size()); }
};

StructureIds map_structure(const ModelParams& p, const Sentence& s);

// One tagging-chain factor: Pr(tag(i) | following tags) * Pr(word(i)|tag(i)).
// Positions run over real words only. Kinds C and C' have no chain; calling
// this for them is a logic error.
double tag_chain_factor(const ModelParams& p, const StructureIds& st, int i);

struct LinkContext {
  int parent, child;  // positions
  int prevsib = -1;   // the parent's farthest kid strictly between, or -1
};

// Score of drawing this link, by kind: A = the L=1 affinity factor; B =
// parent spec plus the child-tag chain event; C/C' = the child tword chain
// event. Kind X scores no links.
double link_factor(const ModelParams& p, const StructureIds& st, const LinkContext& lc);

// STOP factor closing head's chain on side d, given the farthest kid
// position so far (-1 = none). Kinds B, C, C' only.
double seal_factor(const ModelParams& p, const StructureIds& st, int head, Dir d,
                   int farthest_kid);

// Model A non-link factor for a candidate pair. child_full: the child's tag
// participates (pair inside the span); otherwise only its word does.
double nonlink_factor(const ModelParams& p, const StructureIds& st, int parent, int child,
                      int prevsib, bool child_full);

// Log-score of a complete structure, computed from the tree alone (per-word
// child chains and canonical pair accounting) without any chart machinery.
double tree_logprob_direct(const ModelParams& p, const Sentence& s);

}  // namespace spandep
