#include "spandep/scoring.hpp"

#include <stdexcept>

#include "spandep/derivation.hpp"

namespace spandep {

StructureIds map_structure(const ModelParams& p, const Sentence& s) {
  const int N = s.size();
  if (static_cast<int>(s.tags.size()) != N || static_cast<int>(s.parent.size()) != N)
    throw std::logic_error("map_structure: sentence lacks tags or parents");
  StructureIds st;
  st.tag.resize(N);
  st.word.resize(N);
  st.parent = s.parent;
  for (int i = 0; i < N - 1; ++i) {
    st.tag[i] = p.tags.find(s.tags[i]);
    st.word[i] = p.words.find(s.words[i]);
  }
  st.tag[N - 1] = p.tag_eos;
  st.word[N - 1] = p.word_eos;
  return st;
}

double tag_chain_factor(const ModelParams& p, const StructureIds& st, int i) {
  const int N = st.size();
  if (i < 0 || i >= N - 1) throw std::logic_error("tag_chain_factor: position out of range");
  int t1 = st.tag[i + 1];
  int t2 = i + 2 < N ? st.tag[i + 2] : p.tag_bnd;
  return p.chain_logp(st.tag[i], t1, t2, st.word[i]);
}

double link_factor(const ModelParams& p, const StructureIds& st, const LinkContext& lc) {
  Dir d = lc.child < lc.parent ? Dir::Left : Dir::Right;
  int prev = lc.prevsib < 0 ? p.tag_start : st.tag[lc.prevsib];
  int ptag = st.tag[lc.parent], pword = st.word[lc.parent];
  int ctag = st.tag[lc.child], cword = st.word[lc.child];
  switch (p.kind) {
    case ModelKind::A:
      return p.link_logp(d, prev, ptag, pword, ctag, cword, true);
    case ModelKind::B:
      return p.pspec_logp(ctag, cword, flip(d), ptag) +
             p.kid_tag_logp(d, prev, ptag, pword, ctag);
    case ModelKind::C:
    case ModelKind::Cprime:
      return p.kid_event_logp(d, prev, ptag, pword, ctag, cword);
    case ModelKind::X:
      throw std::logic_error("link_factor: kind X scores no links");
  }
  return 0;
}

double seal_factor(const ModelParams& p, const StructureIds& st, int head, Dir d,
                   int farthest_kid) {
  if (!has_kid_chains(p.kind))
    throw std::logic_error("seal_factor: kind " + kind_name(p.kind) + " has no child chains");
  int prev = farthest_kid < 0 ? p.tag_start : st.tag[farthest_kid];
  return p.kid_stop_logp(d, prev, st.tag[head], st.word[head]);
}

double nonlink_factor(const ModelParams& p, const StructureIds& st, int parent, int child,
                      int prevsib, bool child_full) {
  if (p.kind != ModelKind::A)
    throw std::logic_error("nonlink_factor: only kind A scores non-links");
  Dir d = child < parent ? Dir::Left : Dir::Right;
  int prev = prevsib < 0 ? p.tag_start : st.tag[prevsib];
  if (child_full)
    return p.link_logp(d, prev, st.tag[parent], st.word[parent], st.tag[child],
                       st.word[child], false);
  return p.linkword_logp(d, prev, st.tag[parent], st.word[parent], st.word[child], false);
}

namespace {

// Sum of chain-event and STOP factors for every head's left and right child
// sequences (kinds B, C, C').
double kid_chain_sum(const ModelParams& p, const StructureIds& st, const Sentence& s) {
  ChildLists kids = children_of(s);
  double sum = 0;
  for (int head = 0; head < st.size(); ++head) {
    for (Dir d : {Dir::Left, Dir::Right}) {
      const std::vector<int>& ks = d == Dir::Left ? kids.left[head] : kids.right[head];
      int prev = -1;
      for (int c : ks) {
        if (p.kind == ModelKind::B)
          sum += p.kid_tag_logp(d, prev < 0 ? p.tag_start : st.tag[prev], st.tag[head],
                                st.word[head], st.tag[c]);
        else
          sum += p.kid_event_logp(d, prev < 0 ? p.tag_start : st.tag[prev], st.tag[head],
                                  st.word[head], st.tag[c], st.word[c]);
        prev = c;
      }
      sum += seal_factor(p, st, head, d, prev);
    }
  }
  return sum;
}

}  // namespace

double tree_logprob_direct(const ModelParams& p, const Sentence& s) {
  StructureIds st = map_structure(p, s);
  const int N = st.size();
  double total = 0;

  if (is_chain_kind(p.kind))
    for (int i = 0; i < N - 1; ++i) total += tag_chain_factor(p, st, i);

  switch (p.kind) {
    case ModelKind::X:
      break;
    case ModelKind::A:
      for (const PairEvent& e : model_a_pair_events(s)) {
        if (e.linked)
          total += link_factor(p, st, {e.parent, e.child, e.prevsib});
        else
          total += nonlink_factor(p, st, e.parent, e.child, e.prevsib, e.child_full);
      }
      break;
    case ModelKind::B: {
      for (int c = 0; c < N - 1; ++c) {
        Dir pdir = st.parent[c] > c ? Dir::Right : Dir::Left;
        total += p.pspec_logp(st.tag[c], st.word[c], pdir, st.tag[st.parent[c]]);
      }
      total += kid_chain_sum(p, st, s);
      break;
    }
    case ModelKind::C:
    case ModelKind::Cprime:
      total += kid_chain_sum(p, st, s);
      break;
  }
  return total;
}

}  // namespace spandep
