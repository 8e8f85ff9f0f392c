#include "spandep/derivation.hpp"

#include <stdexcept>

namespace spandep {

namespace {

struct LinkMatrix {
  int N;
  std::vector<char> m;  // m[a*N+b]: a<b linked
  explicit LinkMatrix(const Sentence& s) : N(s.size()), m(N * N, 0) {
    for (int i = 0; i < N - 1; ++i) {
      int p = s.parent[i];
      m[std::min(i, p) * N + std::max(i, p)] = 1;
    }
  }
  bool linked(int a, int b) const { return m[std::min(a, b) * N + std::max(a, b)] != 0; }
};

void decompose(const LinkMatrix& lm, const Sentence& s, int k, int m,
               std::vector<DerivEvent>& out) {
  if (m == k + 1) {
    out.push_back({DerivEvent::Type::Seed, k, -1, -1, false});
    if (lm.linked(k, m))
      out.push_back({DerivEvent::Type::Cover, k, -1, m, s.parent[k] == m});
    return;
  }
  // Split at the left endword's farthest link target inside (k, m); links
  // can't poke out of an operand, so no other split yields this span.
  int j = -1;
  for (int q = m - 1; q > k; --q)
    if (lm.linked(k, q)) {
      j = q;
      break;
    }
  if (j < 0) j = k + 1;
  decompose(lm, s, k, j, out);
  decompose(lm, s, j, m, out);
  out.push_back({DerivEvent::Type::Concat, k, j, m, false});
  if (lm.linked(k, m)) out.push_back({DerivEvent::Type::Cover, k, -1, m, s.parent[k] == m});
}

}  // namespace

std::vector<DerivEvent> canonical_derivation(const Sentence& s) {
  const int N = s.size();
  if (N < 2) throw std::logic_error("canonical_derivation: need at least one word plus EOS");
  if (static_cast<int>(s.parent.size()) != N)
    throw std::logic_error("canonical_derivation: sentence has no parent array");
  LinkMatrix lm(s);
  std::vector<DerivEvent> out;
  decompose(lm, s, 0, N - 1, out);
  out.push_back({DerivEvent::Type::Accept, 0, -1, N - 1, false});
  return out;
}

std::vector<PairEvent> model_a_pair_events(const Sentence& s) {
  const int N = s.size();
  const int eos = N - 1;
  LinkMatrix lm(s);
  ChildLists kids = children_of(s);

  // Farthest kid of p strictly between p and c, -1 when there is none.
  auto prevsib = [&](int p, int c) -> int {
    int best = -1;
    if (c > p) {
      for (int kid : kids.right[p])
        if (kid < c) best = std::max(best, kid);
    } else {
      for (int kid : kids.left[p])
        if (kid > c && (best < 0 || kid < best)) best = kid;
    }
    return best;
  };

  std::vector<PairEvent> out;
  for (const DerivEvent& ev : canonical_derivation(s)) {
    switch (ev.type) {
      case DerivEvent::Type::Seed:
        break;
      case DerivEvent::Type::Cover: {
        int p = ev.parent_is_right ? ev.m : ev.k;
        int c = ev.parent_is_right ? ev.k : ev.m;
        out.push_back({p, c, true, prevsib(p, c), true});
        break;
      }
      case DerivEvent::Type::Concat: {
        int j = ev.j;
        if (!lm.linked(ev.k, j)) out.push_back({j, ev.k, false, prevsib(j, ev.k), true});
        if (!lm.linked(j, ev.m)) out.push_back({j, ev.m, false, prevsib(j, ev.m), true});
        // All of j's links live inside [k, m] now, so every remaining real
        // word is a non-linked out-of-span candidate scored by word alone.
        for (int c = 0; c < ev.k; ++c) out.push_back({j, c, false, prevsib(j, c), false});
        for (int c = ev.m + 1; c < eos; ++c) out.push_back({j, c, false, prevsib(j, c), false});
        break;
      }
      case DerivEvent::Type::Accept: {
        if (!lm.linked(0, eos) && eos > 1)
          out.push_back({eos, 0, false, prevsib(eos, 0), true});
        break;
      }
    }
  }
  return out;
}

}  // namespace spandep
