#include "spandep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>

namespace spandep {

namespace {

Sentence make_sentence(std::vector<std::string> words, std::vector<std::string> tags,
                       std::vector<int> parent) {
  Sentence s;
  s.words = std::move(words);
  s.words.emplace_back(kEosSym);
  s.tags = std::move(tags);
  s.tags.emplace_back(kEosSym);
  s.parent = std::move(parent);
  s.parent.push_back(-1);
  return s;
}

}  // namespace

Treebank synth_end_to_end(int sentences, uint64_t seed) {
  const std::vector<std::string> nouns = {"dog", "cat", "man", "sun", "car", "sea"};
  const std::vector<std::string> attach_verbs = {"eats", "grabs"};   // preposition joins the verb
  const std::vector<std::string> plain_verbs = {"sees", "finds"};    // preposition stays on the noun
  const std::vector<std::string> preps = {"with", "near"};
  const std::vector<std::string> advs = {"today", "fast"};

  std::mt19937_64 rng(seed);
  auto pick = [&rng](const std::vector<std::string>& pool) -> const std::string& {
    return pool[rng() % pool.size()];
  };

  // Shape mix 10/60/30: the verb-attached preposition must be the rare case,
  // so that the tag-level child tables prefer noun attachment and only the
  // lexicalized model recovers the verb-specific split.
  Treebank out;
  for (int k = 0; k < sentences; ++k) {
    int r = static_cast<int>(rng() % 10);
    int shape = r < 1 ? 0 : (r < 7 ? 1 : 2);
    const std::string& v = shape == 1 ? pick(plain_verbs) : pick(attach_verbs);
    if (shape == 2) {
      // N V N D, adverb under the verb (never adjacent to it)
      out.sentences.push_back(make_sentence({pick(nouns), v, pick(nouns), pick(advs)},
                                            {"N", "V", "N", "D"}, {1, 4, 1, 1}));
    } else {
      // N V N P N with the preposition under the verb (shape 0) or the
      // object noun (shape 1), resolved only by the verb's identity
      int phead = shape == 0 ? 1 : 2;
      out.sentences.push_back(make_sentence({pick(nouns), v, pick(nouns), pick(preps), pick(nouns)},
                                            {"N", "V", "N", "P", "N"}, {1, 5, 1, phead, 3}));
    }
  }
  return out;
}

Treebank mass_fixture_corpus() {
  // 10 copies each of a one-child and a two-child root chain. In the fitted
  // child tables every context is deterministic except (root, right,
  // previous=K): 10 continue events against 20 stops, i.e. kContinueProb.
  Treebank out;
  for (int i = 0; i < 10; ++i) {
    out.sentences.push_back(make_sentence({"R", "K"}, {"TR", "TK"}, {2, 0}));
    out.sentences.push_back(make_sentence({"R", "K", "K"}, {"TR", "TK", "TK"}, {3, 0, 0}));
  }
  return out;
}

namespace {

struct SynthNode {
  int tag = -1, word = -1;
  std::vector<SynthNode> left, right;  // closest-first, as generated
};

int node_words(const SynthNode& n) {
  int total = 1;
  for (const SynthNode& k : n.left) total += node_words(k);
  for (const SynthNode& k : n.right) total += node_words(k);
  return total;
}

// Observed (ktag, kword) events for one child-chain context, sorted.
std::vector<std::pair<int, int>> support_events(const CountTable& t, const TupleKey& ctx) {
  std::vector<std::pair<int, int>> out;
  for (const auto& [key, cnt] : t.cells()) {
    if (cnt <= 0 || key.n != 6) continue;
    bool match = true;
    for (int i = 0; i < 4; ++i)
      if (key.f[i] != ctx.f[i]) {
        match = false;
        break;
      }
    if (match) out.emplace_back(key.f[4], key.f[5]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Rollout {
  const ModelParams& p;

  // All complete subtrees rooted at (tag, word) of total size ≤ budget words.
  std::vector<SynthNode> expand(int tag, int word, int budget) const {
    std::vector<SynthNode> out;
    if (budget < 1) return out;
    for (const std::vector<SynthNode>& lseq : chains(Dir::Left, tag, word, budget - 1)) {
      int used_left = 0;
      for (const SynthNode& k : lseq) used_left += node_words(k);
      for (const std::vector<SynthNode>& rseq :
           chains(Dir::Right, tag, word, budget - 1 - used_left)) {
        SynthNode n;
        n.tag = tag;
        n.word = word;
        n.left = lseq;
        n.right = rseq;
        out.push_back(std::move(n));
      }
    }
    return out;
  }

  // All complete closest-first child sequences for one direction whose
  // subtrees total ≤ budget words.
  std::vector<std::vector<SynthNode>> chains(Dir d, int ptag, int pword, int budget) const {
    std::vector<std::vector<SynthNode>> out;
    std::vector<SynthNode> acc;
    std::function<void(int, int)> step = [&](int prev, int left_budget) {
      TupleKey ctx =
          make_key(static_cast<int>(d), prev < 0 ? p.tag_start : prev, ptag, pword);
      for (const auto& [ktag, kword] : support_events(p.kidjoint, ctx)) {
        if (ktag == p.tag_stop) {
          out.push_back(acc);
          continue;
        }
        if (left_budget < 1) continue;  // truncated by the rollout bound
        for (SynthNode& sub : expand(ktag, kword, left_budget)) {
          int w = node_words(sub);
          acc.push_back(std::move(sub));
          step(ktag, left_budget - w);
          acc.pop_back();
        }
      }
    };
    step(-1, budget);
    return out;
  }
};

// Projective linearization: left subtrees farthest-first, the node, right
// subtrees closest-first. Returns the node's emitted position.
int emit_node(const SynthNode& n, const ModelParams& p, std::vector<std::string>& words,
              std::vector<std::string>& tags, std::vector<int>& parent) {
  std::vector<int> kid_pos;
  for (auto it = n.left.rbegin(); it != n.left.rend(); ++it)
    kid_pos.push_back(emit_node(*it, p, words, tags, parent));
  int self = static_cast<int>(words.size());
  words.push_back(p.words.str(n.word));
  tags.push_back(p.tags.str(n.tag));
  parent.push_back(-1);
  for (const SynthNode& k : n.right) kid_pos.push_back(emit_node(k, p, words, tags, parent));
  for (int kp : kid_pos) parent[kp] = self;
  return self;
}

}  // namespace

std::vector<Sentence> rollout_support(const ModelParams& p, int max_words) {
  if (p.kind != ModelKind::C)
    throw std::logic_error("rollout_support: model kind " + kind_name(p.kind) +
                           " has no joint child-event table");
  Rollout r{p};
  std::vector<Sentence> out;
  // The EOS mark takes exactly one child (the sentence root); its right
  // chain never generates.
  for (const std::vector<SynthNode>& roots :
       r.chains(Dir::Left, p.tag_eos, p.word_eos, max_words)) {
    if (roots.size() != 1) continue;
    std::vector<std::string> words, tags;
    std::vector<int> parent;
    int root_pos = emit_node(roots[0], p, words, tags, parent);
    Sentence s = make_sentence(std::move(words), std::move(tags), std::move(parent));
    s.parent[root_pos] = s.eos();
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<std::string> bench_words(int length, uint64_t seed, int vocab) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> out;
  out.reserve(length);
  for (int i = 0; i < length; ++i) out.push_back("w" + std::to_string(rng() % vocab));
  return out;
}

Lexicon bench_lexicon(int tags_per_word, int vocab) {
  Lexicon lex;
  for (int w = 0; w < vocab; ++w)
    for (int t = 0; t < tags_per_word; ++t)
      lex.add("w" + std::to_string(w), "g" + std::to_string(t), 10 * (tags_per_word - t));
  lex.finalize();
  return lex;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::logic_error("loglog_slope: need >= 2 paired points");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw std::logic_error("loglog_slope: values must be > 0");
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace spandep
