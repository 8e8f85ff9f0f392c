#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "spandep/corpus.hpp"
#include "spandep/tables.hpp"
#include "spandep/vocab.hpp"

namespace spandep {

enum class ModelKind { A, B, C, Cprime, X };

ModelKind parse_model_kind(const std::string& name);  // throws CorpusError on junk
std::string kind_name(ModelKind k);
// Kinds whose score includes the right-to-left tagging chain.
inline bool is_chain_kind(ModelKind k) {
  return k == ModelKind::A || k == ModelKind::B || k == ModelKind::X;
}
// Kinds that generate child sequences (and therefore pay STOP/seal factors).
inline bool has_kid_chains(ModelKind k) {
  return k == ModelKind::B || k == ModelKind::C || k == ModelKind::Cprime;
}

enum class Dir : int32_t { Left = 0, Right = 1 };
inline Dir flip(Dir d) { return d == Dir::Left ? Dir::Right : Dir::Left; }

// Trained model: count tables over interned symbols plus the lexicon the
// parser draws tag candidates from. All probability queries return natural
// logs and are strictly finite (every ladder ends in a uniform floor).
struct ModelParams {
  ModelKind kind = ModelKind::C;
  int markov_order = 2;
  int64_t threshold = 10;
  int64_t hapax_max = 1;

  Vocab tags, words;
  Lexicon lexicon;

  // Fixed sentinel ids (interned at construction, stable across runs).
  int tag_start, tag_stop, tag_eos, tag_bnd;
  int word_eos, word_stop;

  // Tagging chain (A/B/X): Pr(tag | following one or two tags), Pr(word|tag).
  CountTable tag3{2, 1}, tag2{1, 1}, tag1{0, 1};
  CountTable wordtag{1, 1};
  // Child chains. kidjoint is model C's finest (lexical parent, joint
  // tag+word event); kidtagw is model B's finest (lexical parent, tag
  // event); kidtag/kidtag2 are the shared tag-only coarser levels.
  CountTable kidjoint{4, 2};
  CountTable kidtagw{4, 1};
  CountTable kidtag{3, 1}, kidtag2{2, 1};
  // Model B parent specification: (dir,parent-tag) drawn per child tword.
  CountTable pspec{2, 2}, pspec2{1, 2};
  // Model A link presence tables, full context and word-only child context.
  CountTable linkfull{6, 1}, linkfull2{4, 1}, linkfull3{3, 1};
  CountTable linkword{5, 1}, linkword2{4, 1}, linkword3{3, 1};

  ModelParams();

  // --- queries (natural log). prev is a tag id or tag_start. ---
  // Tagging chain factor for one position: t2 is ignored at markov_order 2.
  double chain_logp(int t0, int t1, int t2, int w0) const;
  double word_logp(int tag, int word) const;  // Pr(word|tag) ladder
  // Child-generation event for kinds C (joint finest) and Cprime (tag-only
  // levels plus the word factor).
  double kid_event_logp(Dir d, int prev, int ptag, int pword, int ktag, int kword) const;
  // STOP factor for kinds B, C, Cprime.
  double kid_stop_logp(Dir d, int prev, int ptag, int pword) const;
  // Model B chain event: next child tag (no word factor; B emits words
  // through the tagging chain).
  double kid_tag_logp(Dir d, int prev, int ptag, int pword, int ktag) const;
  // Model B parent spec: Pr(parent dir+tag | child tword).
  double pspec_logp(int ctag, int cword, Dir pdir, int ptag) const;
  // Model A: Pr(L = linked | contexts), full and word-only child variants.
  double link_logp(Dir d, int prev, int ptag, int pword, int ctag, int cword,
                   bool linked) const;
  double linkword_logp(Dir d, int prev, int ptag, int pword, int cword, bool linked) const;

  // Maps a surface word to an id, -1 when out of vocabulary.
  int word_id(const std::string& w) const { return words.find(w); }
};

struct FitConfig {
  int markov_order = 2;
  int64_t threshold = 10;
  int64_t hapax_max = 1;
};

// Estimates all tables the kind uses from an attached, validated treebank.
// Deterministic: identical input yields byte-identical saved params.
ModelParams fit(ModelKind kind, const Treebank& train, const Lexicon& lexicon,
                const FitConfig& cfg = {});

void save_params(std::ostream& out, const ModelParams& p);
void save_params_file(const std::string& path, const ModelParams& p);
ModelParams load_params(std::istream& in);       // throws CorpusError on malformed input
ModelParams load_params_file(const std::string& path);

// Name and stored-cell count of every non-empty table, in file order.
std::vector<std::pair<std::string, uint64_t>> table_sizes(const ModelParams& p);

}  // namespace spandep
