#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spandep/model.hpp"

namespace spandep {

// Synthetic corpus with a lexically governed attachment ambiguity: verbs of
// one class take the preposition as their own child, verbs of the other
// leave it on the object noun, and an adverb always attaches non-adjacently
// to the verb. A delexicalized model sees identical tag strings for both
// prepositional structures, and an adjacency heuristic can never reach the
// adverb's head, so the expected attachment ordering is
// lexicalized > delexicalized > adjacency baseline.
Treebank synth_end_to_end(int sentences, uint64_t seed);

// Deterministic fixture for probability-mass accounting: a corpus whose
// fitted generative model has exactly one stochastic choice point — after
// the root's first child, the chain continues with probability kContinueProb
// and stops otherwise; everything else is deterministic. The total model
// probability of all structures with at most J root children is therefore
// 1 - kContinueProb^J in closed form.
inline constexpr double kContinueProb = 1.0 / 3.0;
Treebank mass_fixture_corpus();

// Every complete structure in the support of a fitted joint-generation
// model, up to max_words real words: child chains are expanded through the
// model's own observed child-event table, so the result is exactly the set
// of structures the model can generate without backing off. Deterministic
// order. Throws std::logic_error for model kinds without joint child
// events.
std::vector<Sentence> rollout_support(const ModelParams& p, int max_words);

// Benchmark inputs: `length` words drawn uniformly from a vocab of
// "w0".."w{vocab-1}", and a lexicon assigning every such word the same
// `tags_per_word` candidate tags with well-separated counts.
std::vector<std::string> bench_words(int length, uint64_t seed, int vocab = 50);
Lexicon bench_lexicon(int tags_per_word, int vocab = 50);

// Least-squares slope of log(y) against log(x): the growth exponent of a
// measured quantity. Requires >= 2 points, all positive.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace spandep
