#include "spandep/oracle.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

#include "spandep/scoring.hpp"

namespace spandep {

namespace {

uint64_t mul_checked(uint64_t x, uint64_t y) {
  uint64_t r;
  if (__builtin_mul_overflow(x, y, &r))
    throw std::overflow_error("structure count exceeds 64-bit range");
  return r;
}

// Lexicographic (parent array, tag sequence) comparison; the same rule the
// parser's tie-break uses.
bool structure_less(const std::vector<int>& pa, const std::vector<std::string>& ta,
                    const std::vector<int>& pb, const std::vector<std::string>& tb) {
  if (pa != pb) return pa < pb;
  return ta < tb;
}

}  // namespace

const std::vector<std::vector<int>>& enumerate_trees(int n, int bound) {
  if (n < 1) throw CorpusError("enumerate_trees: need at least one word");
  if (n > bound)
    throw CorpusError("enumerate_trees: n=" + std::to_string(n) + " exceeds bound " +
                      std::to_string(bound));
  static std::mutex mu;
  static std::map<int, std::vector<std::vector<int>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto hit = cache.find(n);
  if (hit != cache.end()) return hit->second;

  const int N = n + 1;  // EOS at index n
  Sentence probe;
  probe.words.assign(N, "w");
  probe.tags.assign(N, "T");
  probe.words[n] = kEosSym;
  probe.tags[n] = kEosSym;
  probe.parent.assign(N, -1);

  // Mixed-radix sweep over every word's parent choice (any other position,
  // EOS included), filtered through the corpus validator.
  std::vector<std::vector<int>> out;
  std::vector<int> choice(n, 0);  // choice[i] in [0, N-1), skipping i itself
  for (;;) {
    for (int i = 0; i < n; ++i) {
      int p = choice[i];
      if (p >= i) ++p;  // skip self
      probe.parent[i] = p;
    }
    if (check_projective(probe).ok) out.push_back(probe.parent);
    int i = 0;
    while (i < n && ++choice[i] == N - 1) choice[i++] = 0;
    if (i == n) break;
  }
  return cache.emplace(n, std::move(out)).first->second;
}

uint64_t projective_tree_count(int n) {
  if (n < 1) return 0;
  // f[m]: forests over m adjacent words, each a sequence of complete
  // subtrees; t[w]: trees over w words, split by root position.
  std::vector<uint64_t> f(n + 1, 0), t(n + 1, 0);
  f[0] = 1;
  for (int w = 1; w <= n; ++w) {
    for (int r = 1; r <= w; ++r) t[w] += mul_checked(f[r - 1], f[w - r]);
    for (int s = 1; s <= w; ++s) f[w] += mul_checked(t[s], f[w - s]);
  }
  return t[n];
}

std::vector<std::vector<std::string>> enumerate_taggings(const std::vector<std::string>& words,
                                                         const Lexicon& lex, int tag_cap,
                                                         uint64_t cap) {
  std::vector<std::vector<std::string>> cands;
  uint64_t product = 1;
  for (const std::string& w : words) {
    cands.push_back(lex.candidates(w, tag_cap));
    product = mul_checked(product, cands.back().size());
    if (product > cap)
      throw CorpusError("enumerate_taggings: product exceeds cap " + std::to_string(cap));
  }
  const int n = static_cast<int>(words.size());
  std::vector<std::vector<std::string>> out;
  out.reserve(product);
  std::vector<int> pick(n, 0);
  for (;;) {
    std::vector<std::string> tags(n + 1);
    for (int i = 0; i < n; ++i) tags[i] = cands[i][pick[i]];
    tags[n] = kEosSym;
    out.push_back(std::move(tags));
    int i = 0;
    while (i < n && ++pick[i] == static_cast<int>(cands[i].size())) pick[i++] = 0;
    if (i == n) break;
  }
  return out;
}

OracleBest brute_force_best(const std::vector<std::string>& words, const ModelParams& p,
                            int tag_cap, double tie_eps, uint64_t cap, int tree_bound) {
  const int n = static_cast<int>(words.size());
  const std::vector<std::vector<int>>& trees = enumerate_trees(n, tree_bound);
  std::vector<std::vector<std::string>> taggings = enumerate_taggings(words, p.lexicon, tag_cap, cap);
  if (mul_checked(trees.size(), taggings.size()) > cap)
    throw CorpusError("brute_force_best: structure count exceeds cap " + std::to_string(cap));

  Sentence s;
  s.words = words;
  s.words.emplace_back(kEosSym);

  OracleBest best;
  bool have = false;
  for (const std::vector<std::string>& tags : taggings) {
    s.tags = tags;
    for (const std::vector<int>& parent : trees) {
      s.parent = parent;
      double score = tree_logprob_direct(p, s);
      ++best.structures;
      if (!have) {
        best.sentence = s;
        best.logscore = score;
        have = true;
        continue;
      }
      double d = score - best.logscore;
      if (d > tie_eps || (d >= -tie_eps && structure_less(parent, tags, best.sentence.parent,
                                                          best.sentence.tags))) {
        best.sentence = s;
        best.logscore = score;
      }
    }
  }
  if (!have) throw CorpusError("brute_force_best: empty structure set");
  return best;
}

uint64_t count_structures(const std::vector<std::string>& words, const Lexicon& lex,
                          int tag_cap) {
  uint64_t total = projective_tree_count(static_cast<int>(words.size()));
  for (const std::string& w : words)
    total = mul_checked(total, lex.candidates(w, tag_cap).size());
  return total;
}

}  // namespace spandep
