#include "spandep/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "spandep/vocab.hpp"

namespace spandep {

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) out.push_back(f);
  return out;
}

[[noreturn]] void line_error(const std::string& path, int line, const std::string& what) {
  throw CorpusError(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Sentence attach_eos(const RawSentence& raw) {
  const int n = static_cast<int>(raw.words.size());
  if (static_cast<int>(raw.heads.size()) != n)
    throw BadSentence("attach_eos: missing head column");
  int roots = 0;
  for (int h : raw.heads) {
    if (h < 0 || h > n) throw BadSentence("attach_eos: head out of range");
    if (h == 0) ++roots;
  }
  if (roots == 0) throw BadSentence("attach_eos: no root token (head 0)");
  if (roots > 1) throw BadSentence("attach_eos: multiple root tokens (head 0)");

  Sentence s;
  s.words = raw.words;
  s.words.emplace_back(kEosSym);
  if (!raw.tags.empty()) {
    s.tags = raw.tags;
    s.tags.emplace_back(kEosSym);
  }
  s.parent.resize(n + 1);
  for (int i = 0; i < n; ++i) s.parent[i] = raw.heads[i] == 0 ? n : raw.heads[i] - 1;
  s.parent[n] = -1;
  return s;
}

RawSentence strip_eos(const Sentence& s) {
  const int n = s.word_count();
  RawSentence raw;
  raw.words.assign(s.words.begin(), s.words.begin() + n);
  if (!s.tags.empty()) raw.tags.assign(s.tags.begin(), s.tags.begin() + n);
  if (!s.parent.empty()) {
    raw.heads.resize(n);
    for (int i = 0; i < n; ++i) raw.heads[i] = s.parent[i] == n ? 0 : s.parent[i] + 1;
  }
  return raw;
}

std::string Violation::describe() const {
  char buf[128];
  switch (kind) {
    case Kind::SelfParent:
      std::snprintf(buf, sizeof buf, "token %d is its own parent", a + 1);
      break;
    case Kind::NoEosChild:
      std::snprintf(buf, sizeof buf, "no token attaches to the EOS mark");
      break;
    case Kind::MultipleEosChildren:
      std::snprintf(buf, sizeof buf, "tokens %d and %d both attach to the EOS mark", a + 1,
                    b + 1);
      break;
    case Kind::Cycle:
      std::snprintf(buf, sizeof buf, "token %d is part of a cycle", a + 1);
      break;
    case Kind::Crossing:
      std::snprintf(buf, sizeof buf, "links (%d,%d) and (%d,%d) cross", a + 1, b + 1, c + 1,
                    d + 1);
      break;
  }
  return buf;
}

Projectivity check_projective(const Sentence& s) {
  const int N = s.size();
  const int eos = s.eos();
  if (static_cast<int>(s.parent.size()) != N)
    throw CorpusError("check_projective: sentence has no parent array");
  for (int i = 0; i < eos; ++i)
    if (s.parent[i] < 0 || s.parent[i] >= N)
      throw CorpusError("check_projective: parent index out of range");

  Projectivity pj;
  auto flag = [&](Violation v) {
    pj.ok = false;
    pj.violations.push_back(v);
  };

  int first_root = -1;
  int root_count = 0;
  for (int i = 0; i < eos; ++i) {
    if (s.parent[i] == i) flag({Violation::Kind::SelfParent, i});
    if (s.parent[i] == eos) {
      ++root_count;
      if (first_root < 0)
        first_root = i;
      else if (root_count == 2)
        flag({Violation::Kind::MultipleEosChildren, first_root, i});
    }
  }
  if (root_count == 0) flag({Violation::Kind::NoEosChild});

  // Cycle detection: every word's parent chain must reach the EOS mark.
  std::vector<int> state(N, 0);  // 0 unseen, 1 on current path, 2 done
  state[eos] = 2;
  for (int i = 0; i < eos; ++i) {
    if (state[i]) continue;
    int v = i;
    std::vector<int> path;
    while (v != -1 && state[v] == 0) {
      state[v] = 1;
      path.push_back(v);
      v = s.parent[v];
      if (v == path.front() || (v >= 0 && state[v] == 1)) {
        flag({Violation::Kind::Cycle, v});
        break;
      }
    }
    for (int p : path) state[p] = 2;
  }

  // Crossing links: (a,b) and (c,d) with a<c<b<d.
  std::vector<std::pair<int, int>> links;
  for (int i = 0; i < eos; ++i)
    links.emplace_back(std::min(i, s.parent[i]), std::max(i, s.parent[i]));
  for (size_t x = 0; x < links.size(); ++x)
    for (size_t y = x + 1; y < links.size(); ++y) {
      auto [a, b] = links[x];
      auto [c, d] = links[y];
      if (c < a) {
        std::swap(a, c);
        std::swap(b, d);
      }
      if (a < c && c < b && b < d) flag({Violation::Kind::Crossing, a, b, c, d});
    }
  return pj;
}

ChildLists children_of(const Sentence& s) {
  const int N = s.size();
  ChildLists cl;
  cl.left.resize(N);
  cl.right.resize(N);
  for (int i = 0; i < N - 1; ++i) {
    int p = s.parent[i];
    if (p < 0) continue;
    (i < p ? cl.left[p] : cl.right[p]).push_back(i);
  }
  // closest-first: left kids descend from the head, right kids ascend.
  for (int p = 0; p < N; ++p)
    std::sort(cl.left[p].begin(), cl.left[p].end(), std::greater<int>());
  return cl;
}

ColumnFormat ColumnFormat::parse(const std::string& spec) {
  if (spec.empty() || spec == "native") return {};
  std::vector<int> cols;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      size_t pos = 0;
      int v = std::stoi(part, &pos);
      if (pos != part.size() || v < 1) throw std::invalid_argument("");
      cols.push_back(v - 1);
    } catch (const std::exception&) {
      throw CorpusError("bad column format '" + spec + "' (want \"native\" or four 1-based numbers \"index,word,tag,head\")");
    }
  }
  if (cols.size() != 4) throw CorpusError("bad column format '" + spec + "': need exactly four columns");
  for (size_t i = 0; i < 4; ++i)
    for (size_t j = i + 1; j < 4; ++j)
      if (cols[i] == cols[j]) throw CorpusError("bad column format '" + spec + "': duplicate column");
  return {cols[0], cols[1], cols[2], cols[3]};
}

int ColumnFormat::min_columns() const { return std::max({index, word, tag, head}) + 1; }

namespace {

struct PendingSentence {
  RawSentence raw;
  int first_line = 0, last_line = 0;
  std::vector<int> head_lines;
};

// Lenient attach used by the loader: all heads of 0 map to the EOS mark so
// that structural problems surface as validation results, not exceptions.
Sentence attach_lenient(const RawSentence& raw) {
  const int n = static_cast<int>(raw.words.size());
  Sentence s;
  s.words = raw.words;
  s.words.emplace_back(kEosSym);
  s.tags = raw.tags;
  s.tags.emplace_back(kEosSym);
  s.parent.resize(n + 1);
  for (int i = 0; i < n; ++i) s.parent[i] = raw.heads[i] == 0 ? n : raw.heads[i] - 1;
  s.parent[n] = -1;
  return s;
}

}  // namespace

Treebank load_treebank(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read treebank file: " + path);
  const ColumnFormat& fmt = opts.columns;

  Treebank tb;
  PendingSentence cur;
  int lineno = 0;

  auto flush = [&]() {
    if (cur.raw.words.empty()) return;
    const int n = static_cast<int>(cur.raw.words.size());
    for (int i = 0; i < n; ++i)
      if (cur.raw.heads[i] < 0 || cur.raw.heads[i] > n)
        line_error(path, cur.head_lines[i],
                   "head " + std::to_string(cur.raw.heads[i]) + " out of range for a " +
                       std::to_string(n) + "-token sentence");
    Sentence s = attach_lenient(cur.raw);
    if (opts.validate) {
      Projectivity pj = check_projective(s);
      if (!pj.ok) {
        tb.log.push_back("skipped sentence at lines " + std::to_string(cur.first_line) + "-" +
                         std::to_string(cur.last_line) + ": " + pj.violations.front().describe());
        cur = {};
        return;
      }
    }
    tb.sentences.push_back(std::move(s));
    cur = {};
  };

  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols = split_ws(line);
    if (static_cast<int>(cols.size()) < fmt.min_columns())
      line_error(path, lineno,
                 "expected at least " + std::to_string(fmt.min_columns()) + " columns, got " +
                     std::to_string(cols.size()));
    int index = 0;
    try {
      index = std::stoi(cols[fmt.index]);
    } catch (const std::exception&) {
      line_error(path, lineno, "bad token index '" + cols[fmt.index] + "'");
    }
    int expect = static_cast<int>(cur.raw.words.size()) + 1;
    if (index != expect)
      line_error(path, lineno, "token index " + std::to_string(index) + " out of order (expected " +
                                   std::to_string(expect) + ")");
    const std::string& w = cols[fmt.word];
    const std::string& t = cols[fmt.tag];
    if (is_reserved_symbol(w) || is_reserved_symbol(t))
      line_error(path, lineno, "reserved symbol '" + (is_reserved_symbol(w) ? w : t) + "' used in corpus");
    int head = 0;
    try {
      head = std::stoi(cols[fmt.head]);
    } catch (const std::exception&) {
      line_error(path, lineno, "bad head '" + cols[fmt.head] + "'");
    }
    if (cur.raw.words.empty()) cur.first_line = lineno;
    cur.last_line = lineno;
    cur.raw.words.push_back(w);
    cur.raw.tags.push_back(t);
    cur.raw.heads.push_back(head);
    cur.head_lines.push_back(lineno);
  }
  flush();
  return tb;
}

std::vector<RawSentence> load_sentences(const std::string& path, const ColumnFormat& columns) {
  std::ifstream in(path);
  if (!in) throw CorpusError("cannot read input file: " + path);
  std::vector<RawSentence> out;
  RawSentence cur;
  int lineno = 0;
  std::string line;
  auto flush = [&]() {
    if (!cur.words.empty()) out.push_back(std::move(cur));
    cur = {};
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') continue;
    std::vector<std::string> cols = split_ws(line);
    int need = std::max(columns.index, columns.word) + 1;
    if (static_cast<int>(cols.size()) < need)
      line_error(path, lineno, "expected at least " + std::to_string(need) + " columns");
    int index = 0;
    try {
      index = std::stoi(cols[columns.index]);
    } catch (const std::exception&) {
      line_error(path, lineno, "bad token index '" + cols[columns.index] + "'");
    }
    int expect = static_cast<int>(cur.words.size()) + 1;
    if (index != expect)
      line_error(path, lineno, "token index " + std::to_string(index) + " out of order (expected " +
                                   std::to_string(expect) + ")");
    if (is_reserved_symbol(cols[columns.word]))
      line_error(path, lineno, "reserved symbol '" + cols[columns.word] + "' used in corpus");
    cur.words.push_back(cols[columns.word]);
  }
  flush();
  return out;
}

void write_sentence(std::ostream& out, const Sentence& s, const WriteOptions& opts) {
  if (opts.logscore) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# logscore=%.6f", *opts.logscore);
    out << buf << "\n";
  }
  const int n = s.word_count();
  for (int i = 0; i < n; ++i) {
    int head = 0;
    if (opts.write_heads && !s.parent.empty()) head = s.parent[i] == s.eos() ? 0 : s.parent[i] + 1;
    const std::string& tag = s.tags.empty() ? std::string("_") : s.tags[i];
    out << i + 1 << '\t' << s.words[i] << '\t' << tag << '\t' << head << "\n";
  }
  out << "\n";
}

void Lexicon::add(const std::string& word, const std::string& tag, int64_t n) {
  word_tag_[word][tag] += n;
  tag_total_[tag] += n;
}

void Lexicon::finalize(int64_t hapax_max) {
  std::map<std::string, int64_t> open;
  for (const auto& [word, tags] : word_tag_) {
    int64_t total = 0;
    for (const auto& [tag, c] : tags) total += c;
    if (total <= hapax_max)
      for (const auto& [tag, c] : tags) open[tag] += c;
  }
  if (open.empty()) open.insert(tag_total_.begin(), tag_total_.end());
  open_class_.clear();
  for (const auto& [tag, c] : open) open_class_.push_back(tag);
  std::sort(open_class_.begin(), open_class_.end(), [&](const std::string& a, const std::string& b) {
    auto ta = tag_total_.at(a), tb = tag_total_.at(b);
    return ta != tb ? ta > tb : a < b;
  });
}

bool Lexicon::known(const std::string& word) const { return word_tag_.count(word) != 0; }

std::vector<std::string> Lexicon::candidates(const std::string& word, int cap) const {
  if (cap < 1) throw std::logic_error("Lexicon::candidates: cap must be >= 1");
  std::vector<std::string> out;
  auto it = word_tag_.find(word);
  if (it != word_tag_.end()) {
    std::vector<std::pair<std::string, int64_t>> v(it->second.begin(), it->second.end());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
      return a.second != b.second ? a.second > b.second : a.first < b.first;
    });
    for (const auto& [tag, c] : v) out.push_back(tag);
  } else {
    out = open_class_;
  }
  if (static_cast<int>(out.size()) > cap) out.resize(cap);
  return out;
}

void Lexicon::dump(std::ostream& out) const {
  for (const auto& [word, tags] : word_tag_)
    for (const auto& [tag, c] : tags) out << word << '\t' << tag << '\t' << c << "\n";
}

Lexicon Lexicon::parse_dump(std::istream& in, int64_t hapax_max) {
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) break;
    std::vector<std::string> cols = split_ws(line);
    if (cols.size() != 3) throw CorpusError("bad lexicon line: " + line);
    lex.add(cols[0], cols[1], std::stoll(cols[2]));
  }
  lex.finalize(hapax_max);
  return lex;
}

uint64_t Lexicon::hash() const {
  std::ostringstream ss;
  dump(ss);
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : ss.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Lexicon build_lexicon(const Treebank& tb, int64_t hapax_max) {
  Lexicon lex;
  for (const Sentence& s : tb.sentences)
    for (int i = 0; i < s.word_count(); ++i) lex.add(s.words[i], s.tags[i]);
  lex.finalize(hapax_max);
  return lex;
}

std::pair<Treebank, Treebank> split_corpus(const Treebank& tb, int test_size, uint64_t seed) {
  const int S = static_cast<int>(tb.sentences.size());
  if (test_size < 0 || test_size > S)
    throw CorpusError("split_corpus: test size " + std::to_string(test_size) +
                      " out of range for " + std::to_string(S) + " sentences");
  std::vector<int> idx(S);
  for (int i = 0; i < S; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (int i = S - 1; i > 0; --i) {
    int j = static_cast<int>(rng() % static_cast<uint64_t>(i + 1));
    std::swap(idx[i], idx[j]);
  }
  std::vector<bool> is_test(S, false);
  for (int i = 0; i < test_size; ++i) is_test[idx[i]] = true;
  std::pair<Treebank, Treebank> out;
  for (int i = 0; i < S; ++i)
    (is_test[i] ? out.second : out.first).sentences.push_back(tb.sentences[i]);
  return out;
}

}  // namespace spandep
