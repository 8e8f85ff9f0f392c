#pragma once

#include <vector>

#include "spandep/corpus.hpp"

namespace spandep {

// The canonical span derivation of a parsed sentence: the unique sequence of
// seed / covered-concatenation steps the chart would use to assemble exactly
// this tree. Uniqueness comes from two facts: a link's endpoints confine it
// to spans containing both words, which forces the split point of every
// composite span to the farthest link target of its left endword (or to
// width one when the left endword links no further), and the left operand of
// every concatenation is minimal by that construction.
struct DerivEvent {
  enum class Type {
    Seed,    // width-1 span [k, k+1]
    Cover,   // link between the endwords of span [k, m]
    Concat,  // [k, j] + [j, m], internalizing j
    Accept,  // full-extent span accepted as a parse
  };
  Type type;
  int k = -1, j = -1, m = -1;
  bool parent_is_right = false;  // Cover only: parent is the right endword
};

std::vector<DerivEvent> canonical_derivation(const Sentence& s);

// Model A's per-pair link/non-link events in canonical order. Every
// unordered pair of real words is emitted exactly once — linked pairs at
// their cover, unlinked pairs when the first of the two words internalizes
// (the internalizing word is the parent candidate; the other side keeps its
// tag only while it is still inside the span). The head's link to the EOS
// mark is emitted at its cover; when word 1 is not the head, the single
// residual (EOS, word 1) non-link pair is emitted at acceptance.
struct PairEvent {
  int parent = -1, child = -1;
  bool linked = false;
  int prevsib = -1;        // parent's farthest kid strictly between, -1 = none
  bool child_full = true;  // child tag usable (in span at event time)
};

std::vector<PairEvent> model_a_pair_events(const Sentence& s);

}  // namespace spandep
