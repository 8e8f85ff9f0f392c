#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace spandep {

// A sentence in attached form: the EOS mark is the last element of every
// field. Positions are 0-based; the EOS mark sits at size()-1. parent[i] is
// the in-memory index of i's parent; the EOS mark itself has parent -1.
// tags/parent may be empty for untagged/unparsed input.
struct Sentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
  std::vector<int> parent;

  int size() const { return static_cast<int>(words.size()); }
  int word_count() const { return size() - 1; }
  int eos() const { return size() - 1; }

  bool operator==(const Sentence&) const = default;
};

// A sentence as it appears on disk: 1-based heads, head 0 marks the token
// whose parent is the EOS mark. No EOS row is stored.
struct RawSentence {
  std::vector<std::string> words;
  std::vector<std::string> tags;
  std::vector<int> heads;  // empty when the source had no usable head column

  bool operator==(const RawSentence&) const = default;
};

// Appends the EOS mark and remaps head 0 to it. Throws BadSentence unless
// exactly one token has head 0.
Sentence attach_eos(const RawSentence& raw);
// Inverse of attach_eos.
RawSentence strip_eos(const Sentence& s);

struct Violation {
  enum class Kind {
    SelfParent,
    NoEosChild,
    MultipleEosChildren,
    Cycle,
    Crossing,
  };
  Kind kind;
  // Positions involved (in-memory indices). Crossing uses both link pairs
  // (a,b) and (c,d); others use a (and b for the second EOS child).
  int a = -1, b = -1, c = -1, d = -1;
  std::string describe() const;
};

struct Projectivity {
  bool ok = true;
  std::vector<Violation> violations;
};

// Validates that parent[] encodes a projective tree rooted at the EOS mark
// with exactly one EOS child. Reports all violations found.
Projectivity check_projective(const Sentence& s);

// Left/right children of every position, each list ordered closest-first
// (the order a head generates its kids in).
struct ChildLists {
  std::vector<std::vector<int>> left, right;
};
ChildLists children_of(const Sentence& s);

struct ColumnFormat {
  int index = 0, word = 1, tag = 2, head = 3;
  // Parses "native" or a comma list of four 1-based column numbers
  // "index,word,tag,head". Throws CorpusError on anything else.
  static ColumnFormat parse(const std::string& spec);
  int min_columns() const;
};

struct Treebank {
  std::vector<Sentence> sentences;
  std::vector<std::string> log;  // one line per skipped sentence
};

struct LoadOptions {
  ColumnFormat columns;
  // When true (training/gold use), sentences failing structural validation
  // (multiple roots, cycles, crossing links) are skipped with a logged
  // reason. When false (prediction files), structure is taken as-is: every
  // head 0 maps to the EOS mark and no sentence is dropped.
  bool validate = true;
};

// Throws CorpusError for unreadable files and malformed records (bad counts,
// non-consecutive or duplicate indices, heads out of range, reserved
// symbols), naming the offending line.
Treebank load_treebank(const std::string& path, const LoadOptions& opts = {});

// Reads only index/word columns; tag and head columns (if present) are
// ignored. Used for parser input.
std::vector<RawSentence> load_sentences(const std::string& path,
                                        const ColumnFormat& columns = {});

struct WriteOptions {
  bool write_heads = true;             // false: head column is 0 for every token
  std::optional<double> logscore;      // emitted as a "# logscore=..." comment
};
void write_sentence(std::ostream& out, const Sentence& s, const WriteOptions& opts = {});

// Word -> tag -> count over training tokens, plus the open-class tag set
// derived from hapax words. Unknown words get open-class candidates.
class Lexicon {
 public:
  void add(const std::string& word, const std::string& tag, int64_t n = 1);
  // Recomputes open-class tags; call after the last add().
  void finalize(int64_t hapax_max = 1);

  bool known(const std::string& word) const;
  // Candidate tags, highest count first (ties: tag string), at most cap.
  // Unknown words receive the open-class set ordered by global tag
  // frequency. Never empty for a non-empty lexicon.
  std::vector<std::string> candidates(const std::string& word, int cap) const;

  const std::vector<std::string>& open_class() const { return open_class_; }
  const std::map<std::string, std::map<std::string, int64_t>>& entries() const {
    return word_tag_;
  }

  void dump(std::ostream& out) const;  // WORD\tTAG\tCOUNT, sorted
  static Lexicon parse_dump(std::istream& in, int64_t hapax_max = 1);
  uint64_t hash() const;  // FNV-1a 64 over the dump bytes

  bool operator==(const Lexicon&) const = default;

 private:
  std::map<std::string, std::map<std::string, int64_t>> word_tag_;
  std::map<std::string, int64_t> tag_total_;
  std::vector<std::string> open_class_;
};

Lexicon build_lexicon(const Treebank& tb, int64_t hapax_max = 1);

// Deterministic disjoint split; the test part has exactly test_size
// sentences. Original relative order is preserved within each part.
std::pair<Treebank, Treebank> split_corpus(const Treebank& tb, int test_size,
                                           uint64_t seed);

// Error taxonomy: CorpusError = unusable input (exit code 1 at the CLI);
// BadSentence = structural problem with one sentence (skippable).
struct CorpusError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadSentence : CorpusError {
  using CorpusError::CorpusError;
};

}  // namespace spandep
