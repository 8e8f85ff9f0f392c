#include "spandep/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "spandep/derivation.hpp"

namespace spandep {

ModelKind parse_model_kind(const std::string& name) {
  if (name == "A") return ModelKind::A;
  if (name == "B") return ModelKind::B;
  if (name == "C") return ModelKind::C;
  if (name == "Cprime" || name == "C'") return ModelKind::Cprime;
  if (name == "X") return ModelKind::X;
  throw CorpusError("unknown model kind '" + name + "' (expected A, B, C, Cprime or X)");
}

std::string kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::A: return "A";
    case ModelKind::B: return "B";
    case ModelKind::C: return "C";
    case ModelKind::Cprime: return "Cprime";
    case ModelKind::X: return "X";
  }
  return "?";
}

ModelParams::ModelParams() {
  tag_start = tags.intern(kStartSym);
  tag_stop = tags.intern(kStopSym);
  tag_eos = tags.intern(kEosSym);
  tag_bnd = tags.intern(kBoundarySym);
  word_eos = words.intern(kEosSym);
  word_stop = words.intern(kStopSym);
}

double ModelParams::chain_logp(int t0, int t1, int t2, int w0) const {
  if (!is_chain_kind(kind))
    throw std::logic_error("chain_logp: kind " + kind_name(kind) + " has no tagging chain");
  BackoffLevel lv[3];
  size_t n = 0;
  if (markov_order >= 3) lv[n++] = {&tag3, make_key(t1, t2)};
  lv[n++] = {&tag2, make_key(t1)};
  lv[n++] = {&tag1, TupleKey{}};
  double pt = backoff_prob({lv, n}, make_key(t0), threshold);
  return std::log(pt) + word_logp(t0, w0);
}

double ModelParams::word_logp(int tag, int word) const {
  BackoffLevel lv[] = {{&wordtag, make_key(tag)}};
  return std::log(backoff_prob(lv, make_key(word), threshold));
}

double ModelParams::kid_event_logp(Dir d, int prev, int ptag, int pword, int ktag,
                                   int kword) const {
  int pv = prev < 0 ? tag_start : prev;
  if (kind == ModelKind::C) {
    TupleKey ctx = make_key(static_cast<int>(d), pv, ptag, pword);
    int64_t tot = kidjoint.total(ctx);
    if (tot >= threshold) {
      int64_t c = kidjoint.count(ctx, make_key(ktag, kword));
      if (c > 0) return std::log(static_cast<double>(c) / static_cast<double>(tot));
    }
  } else if (kind != ModelKind::Cprime) {
    throw std::logic_error("kid_event_logp: kind " + kind_name(kind) +
                           " does not generate child twords");
  }
  BackoffLevel lv[] = {{&kidtag, make_key(static_cast<int>(d), pv, ptag)},
                       {&kidtag2, make_key(static_cast<int>(d), pv)}};
  double pt = backoff_prob(lv, make_key(ktag), threshold);
  return std::log(pt) + word_logp(ktag, kword);
}

double ModelParams::kid_stop_logp(Dir d, int prev, int ptag, int pword) const {
  int pv = prev < 0 ? tag_start : prev;
  switch (kind) {
    case ModelKind::C: {
      TupleKey ctx = make_key(static_cast<int>(d), pv, ptag, pword);
      int64_t tot = kidjoint.total(ctx);
      if (tot >= threshold) {
        int64_t c = kidjoint.count(ctx, make_key(tag_stop, word_stop));
        if (c > 0) return std::log(static_cast<double>(c) / static_cast<double>(tot));
      }
      break;
    }
    case ModelKind::B: {
      BackoffLevel lv[] = {{&kidtagw, make_key(static_cast<int>(d), pv, ptag, pword)},
                           {&kidtag, make_key(static_cast<int>(d), pv, ptag)},
                           {&kidtag2, make_key(static_cast<int>(d), pv)}};
      return std::log(backoff_prob(lv, make_key(tag_stop), threshold));
    }
    case ModelKind::Cprime:
      break;
    default:
      throw std::logic_error("kid_stop_logp: kind " + kind_name(kind) +
                             " does not generate child chains");
  }
  BackoffLevel lv[] = {{&kidtag, make_key(static_cast<int>(d), pv, ptag)},
                       {&kidtag2, make_key(static_cast<int>(d), pv)}};
  return std::log(backoff_prob(lv, make_key(tag_stop), threshold));
}

double ModelParams::kid_tag_logp(Dir d, int prev, int ptag, int pword, int ktag) const {
  if (kind != ModelKind::B)
    throw std::logic_error("kid_tag_logp: tag-only chain events belong to kind B");
  int pv = prev < 0 ? tag_start : prev;
  BackoffLevel lv[] = {{&kidtagw, make_key(static_cast<int>(d), pv, ptag, pword)},
                       {&kidtag, make_key(static_cast<int>(d), pv, ptag)},
                       {&kidtag2, make_key(static_cast<int>(d), pv)}};
  return std::log(backoff_prob(lv, make_key(ktag), threshold));
}

double ModelParams::pspec_logp(int ctag, int cword, Dir pdir, int ptag) const {
  BackoffLevel lv[] = {{&pspec, make_key(ctag, cword)}, {&pspec2, make_key(ctag)}};
  return std::log(backoff_prob(lv, make_key(static_cast<int>(pdir), ptag), threshold));
}

double ModelParams::link_logp(Dir d, int prev, int ptag, int pword, int ctag, int cword,
                              bool linked) const {
  int pv = prev < 0 ? tag_start : prev;
  BackoffLevel lv[] = {
      {&linkfull, make_key(static_cast<int>(d), pv, ptag, pword, ctag, cword)},
      {&linkfull2, make_key(static_cast<int>(d), pv, ptag, ctag)},
      {&linkfull3, make_key(static_cast<int>(d), ptag, ctag)}};
  return std::log(backoff_prob(lv, make_key(linked ? 1 : 0), threshold, 2));
}

double ModelParams::linkword_logp(Dir d, int prev, int ptag, int pword, int cword,
                                  bool linked) const {
  int pv = prev < 0 ? tag_start : prev;
  BackoffLevel lv[] = {
      {&linkword, make_key(static_cast<int>(d), pv, ptag, pword, cword)},
      {&linkword2, make_key(static_cast<int>(d), pv, ptag, cword)},
      {&linkword3, make_key(static_cast<int>(d), ptag, cword)}};
  return std::log(backoff_prob(lv, make_key(linked ? 1 : 0), threshold, 2));
}

// ---------------------------------------------------------------------------
// Fitting

ModelParams fit(ModelKind kind, const Treebank& train, const Lexicon& lexicon,
                const FitConfig& cfg) {
  if (cfg.markov_order != 2 && cfg.markov_order != 3)
    throw CorpusError("markov_order must be 2 or 3");
  if (cfg.threshold < 1) throw CorpusError("count threshold must be at least 1");
  if (train.sentences.empty()) throw CorpusError("cannot fit a model on an empty treebank");

  ModelParams p;
  p.kind = kind;
  p.markov_order = cfg.markov_order;
  p.threshold = cfg.threshold;
  p.hapax_max = cfg.hapax_max;
  p.lexicon = lexicon;
  for (const auto& [word, tags] : lexicon.entries()) {
    p.words.intern(word);
    for (const auto& [tag, c] : tags) p.tags.intern(tag);
  }

  for (const Sentence& s : train.sentences) {
    const int n = s.word_count();
    const int N = s.size();
    if (static_cast<int>(s.parent.size()) != N || static_cast<int>(s.tags.size()) != N)
      throw std::logic_error("fit: training sentence lacks tags or parents");
    std::vector<int> tid(N), wid(N);
    for (int i = 0; i < n; ++i) {
      tid[i] = p.tags.intern(s.tags[i]);
      wid[i] = p.words.intern(s.words[i]);
    }
    tid[n] = p.tag_eos;
    wid[n] = p.word_eos;
    auto tag_at = [&](int i) { return i <= n ? tid[i] : p.tag_bnd; };

    if (is_chain_kind(kind)) {
      for (int i = 0; i < n; ++i) {
        if (p.markov_order >= 3) p.tag3.observe(make_key(tag_at(i + 1), tag_at(i + 2)), make_key(tid[i]));
        p.tag2.observe(make_key(tag_at(i + 1)), make_key(tid[i]));
        p.tag1.observe(TupleKey{}, make_key(tid[i]));
        p.wordtag.observe(make_key(tid[i]), make_key(wid[i]));
      }
    }

    if (has_kid_chains(kind)) {
      ChildLists kids = children_of(s);
      for (int head = 0; head < N; ++head) {
        for (Dir d : {Dir::Left, Dir::Right}) {
          const std::vector<int>& ks = d == Dir::Left ? kids.left[head] : kids.right[head];
          int prev = p.tag_start;
          TupleKey lexctx = make_key(static_cast<int>(d), prev, tid[head], wid[head]);
          for (int c : ks) {
            lexctx = make_key(static_cast<int>(d), prev, tid[head], wid[head]);
            switch (kind) {
              case ModelKind::C:
                p.kidjoint.observe(lexctx, make_key(tid[c], wid[c]));
                p.wordtag.observe(make_key(tid[c]), make_key(wid[c]));
                break;
              case ModelKind::Cprime:
                p.wordtag.observe(make_key(tid[c]), make_key(wid[c]));
                break;
              case ModelKind::B:
                p.kidtagw.observe(lexctx, make_key(tid[c]));
                break;
              default:
                break;
            }
            p.kidtag.observe(make_key(static_cast<int>(d), prev, tid[head]), make_key(tid[c]));
            p.kidtag2.observe(make_key(static_cast<int>(d), prev), make_key(tid[c]));
            prev = tid[c];
          }
          lexctx = make_key(static_cast<int>(d), prev, tid[head], wid[head]);
          switch (kind) {
            case ModelKind::C:
              p.kidjoint.observe(lexctx, make_key(p.tag_stop, p.word_stop));
              break;
            case ModelKind::B:
              p.kidtagw.observe(lexctx, make_key(p.tag_stop));
              break;
            default:
              break;
          }
          p.kidtag.observe(make_key(static_cast<int>(d), prev, tid[head]), make_key(p.tag_stop));
          p.kidtag2.observe(make_key(static_cast<int>(d), prev), make_key(p.tag_stop));
        }
      }
    }

    if (kind == ModelKind::B) {
      for (int c = 0; c < n; ++c) {
        int par = s.parent[c];
        Dir pdir = par > c ? Dir::Right : Dir::Left;
        TupleKey ev = make_key(static_cast<int>(pdir), tid[par]);
        p.pspec.observe(make_key(tid[c], wid[c]), ev);
        p.pspec2.observe(make_key(tid[c]), ev);
      }
    }

    if (kind == ModelKind::A) {
      for (const PairEvent& e : model_a_pair_events(s)) {
        Dir d = e.child < e.parent ? Dir::Left : Dir::Right;
        int prev = e.prevsib < 0 ? p.tag_start : tid[e.prevsib];
        TupleKey bit = make_key(e.linked ? 1 : 0);
        p.linkfull.observe(
            make_key(static_cast<int>(d), prev, tid[e.parent], wid[e.parent], tid[e.child], wid[e.child]),
            bit);
        p.linkfull2.observe(make_key(static_cast<int>(d), prev, tid[e.parent], tid[e.child]), bit);
        p.linkfull3.observe(make_key(static_cast<int>(d), tid[e.parent], tid[e.child]), bit);
        p.linkword.observe(
            make_key(static_cast<int>(d), prev, tid[e.parent], wid[e.parent], wid[e.child]), bit);
        p.linkword2.observe(make_key(static_cast<int>(d), prev, tid[e.parent], wid[e.child]), bit);
        p.linkword3.observe(make_key(static_cast<int>(d), tid[e.parent], wid[e.child]), bit);
      }
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

enum class FK { Dir, Tag, Word, Bit };

struct TableSchema {
  const char* name;
  CountTable ModelParams::*member;
  std::vector<FK> fields;  // context fields then event fields
  int ctx_arity;
};

const std::vector<TableSchema>& table_schemas() {
  static const std::vector<TableSchema> schemas = {
      {"tag3", &ModelParams::tag3, {FK::Tag, FK::Tag, FK::Tag}, 2},
      {"tag2", &ModelParams::tag2, {FK::Tag, FK::Tag}, 1},
      {"tag1", &ModelParams::tag1, {FK::Tag}, 0},
      {"wordtag", &ModelParams::wordtag, {FK::Tag, FK::Word}, 1},
      {"kidjoint", &ModelParams::kidjoint, {FK::Dir, FK::Tag, FK::Tag, FK::Word, FK::Tag, FK::Word}, 4},
      {"kidtagw", &ModelParams::kidtagw, {FK::Dir, FK::Tag, FK::Tag, FK::Word, FK::Tag}, 4},
      {"kidtag", &ModelParams::kidtag, {FK::Dir, FK::Tag, FK::Tag, FK::Tag}, 3},
      {"kidtag2", &ModelParams::kidtag2, {FK::Dir, FK::Tag, FK::Tag}, 2},
      {"pspec", &ModelParams::pspec, {FK::Tag, FK::Word, FK::Dir, FK::Tag}, 2},
      {"pspec2", &ModelParams::pspec2, {FK::Tag, FK::Dir, FK::Tag}, 1},
      {"linkfull", &ModelParams::linkfull, {FK::Dir, FK::Tag, FK::Tag, FK::Word, FK::Tag, FK::Word, FK::Bit}, 6},
      {"linkfull2", &ModelParams::linkfull2, {FK::Dir, FK::Tag, FK::Tag, FK::Tag, FK::Bit}, 4},
      {"linkfull3", &ModelParams::linkfull3, {FK::Dir, FK::Tag, FK::Tag, FK::Bit}, 3},
      {"linkword", &ModelParams::linkword, {FK::Dir, FK::Tag, FK::Tag, FK::Word, FK::Word, FK::Bit}, 5},
      {"linkword2", &ModelParams::linkword2, {FK::Dir, FK::Tag, FK::Tag, FK::Word, FK::Bit}, 4},
      {"linkword3", &ModelParams::linkword3, {FK::Dir, FK::Tag, FK::Word, FK::Bit}, 3},
  };
  return schemas;
}

std::string render_field(const ModelParams& p, FK k, int32_t v) {
  switch (k) {
    case FK::Dir: return v == 0 ? "L" : "R";
    case FK::Tag: return p.tags.str(v);
    case FK::Word: return p.words.str(v);
    case FK::Bit: return v == 0 ? "0" : "1";
  }
  return "?";
}

int32_t parse_field(ModelParams& p, FK k, const std::string& s) {
  switch (k) {
    case FK::Dir:
      if (s == "L") return 0;
      if (s == "R") return 1;
      throw CorpusError("params file: bad direction field '" + s + "'");
    case FK::Tag: return p.tags.intern(s);
    case FK::Word: return p.words.intern(s);
    case FK::Bit:
      if (s == "0") return 0;
      if (s == "1") return 1;
      throw CorpusError("params file: bad binary field '" + s + "'");
  }
  return -1;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

constexpr const char* kMagic = "spandep params v1";

}  // namespace

void save_params(std::ostream& out, const ModelParams& p) {
  char hex[32];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(p.lexicon.hash()));
  out << kMagic << "\n";
  out << "kind " << kind_name(p.kind) << "\n";
  out << "markov_order " << p.markov_order << "\n";
  out << "threshold " << p.threshold << "\n";
  out << "hapax_max " << p.hapax_max << "\n";
  out << "lexicon_hash " << hex << "\n\n";

  out << "[lexicon]\n";
  p.lexicon.dump(out);
  out << "\n";

  for (const TableSchema& sc : table_schemas()) {
    const CountTable& t = p.*(sc.member);
    if (t.empty()) continue;
    std::vector<std::string> rows;
    rows.reserve(t.cells().size());
    for (const auto& [key, count] : t.cells()) {
      std::string row;
      for (uint8_t i = 0; i < key.n; ++i) {
        row += render_field(p, sc.fields[i], key.f[i]);
        row += '\t';
      }
      row += std::to_string(count);
      rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    out << "[table " << sc.name << "]\n";
    for (const std::string& r : rows) out << r << "\n";
    out << "\n";
  }
  out << "[end]\n";
}

void save_params_file(const std::string& path, const ModelParams& p) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CorpusError("cannot write params file: " + path);
  save_params(out, p);
  if (!out) throw CorpusError("failed writing params file: " + path);
}

ModelParams load_params(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kMagic)
    throw CorpusError("unrecognized params file (missing '" + std::string(kMagic) + "' header)");

  ModelParams p;
  bool have_kind = false;
  std::string lexicon_hash;
  while (std::getline(in, line) && !line.empty()) {
    std::istringstream ss(line);
    std::string key, value;
    ss >> key >> value;
    if (key == "kind") {
      p.kind = parse_model_kind(value);
      have_kind = true;
    } else if (key == "markov_order") {
      p.markov_order = std::stoi(value);
      if (p.markov_order != 2 && p.markov_order != 3)
        throw CorpusError("params file: markov_order must be 2 or 3");
    } else if (key == "threshold") {
      p.threshold = std::stoll(value);
    } else if (key == "hapax_max") {
      p.hapax_max = std::stoll(value);
    } else if (key == "lexicon_hash") {
      lexicon_hash = value;
    } else {
      throw CorpusError("params file: unknown header field '" + key + "'");
    }
  }
  if (!have_kind) throw CorpusError("params file: missing kind");

  bool saw_end = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line == "[end]") {
      saw_end = true;
      break;
    }
    if (line == "[lexicon]") {
      std::string row;
      std::ostringstream block;
      while (std::getline(in, row) && !row.empty()) block << row << "\n";
      std::istringstream bs(block.str());
      p.lexicon = Lexicon::parse_dump(bs, p.hapax_max);
      for (const auto& [word, tags] : p.lexicon.entries()) {
        p.words.intern(word);
        for (const auto& [tag, c] : tags) p.tags.intern(tag);
      }
      continue;
    }
    if (line.rfind("[table ", 0) == 0 && line.back() == ']') {
      std::string name = line.substr(7, line.size() - 8);
      const TableSchema* schema = nullptr;
      for (const TableSchema& sc : table_schemas())
        if (name == sc.name) schema = &sc;
      if (!schema) throw CorpusError("params file: unknown table '" + name + "'");
      CountTable& t = p.*(schema->member);
      std::string row;
      while (std::getline(in, row) && !row.empty()) {
        std::vector<std::string> cols = split_tabs(row);
        if (cols.size() != schema->fields.size() + 1)
          throw CorpusError("params file: bad row in table " + name + ": " + row);
        TupleKey ctx, ev;
        for (size_t i = 0; i < schema->fields.size(); ++i) {
          int32_t v = parse_field(p, schema->fields[i], cols[i]);
          (static_cast<int>(i) < schema->ctx_arity ? ctx : ev).push(v);
        }
        int64_t count = std::stoll(cols.back());
        if (count <= 0) throw CorpusError("params file: non-positive count in table " + name);
        t.observe(ctx, ev, count);
      }
      continue;
    }
    throw CorpusError("params file: unexpected line '" + line + "'");
  }
  if (!saw_end) throw CorpusError("params file: truncated (missing [end])");

  if (!lexicon_hash.empty()) {
    char hex[32];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(p.lexicon.hash()));
    if (lexicon_hash != hex) throw CorpusError("params file: lexicon hash mismatch");
  }
  return p;
}

ModelParams load_params_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError("cannot read params file: " + path);
  return load_params(in);
}

std::vector<std::pair<std::string, uint64_t>> table_sizes(const ModelParams& p) {
  std::vector<std::pair<std::string, uint64_t>> out;
  for (const TableSchema& sc : table_schemas()) {
    const CountTable& t = p.*(sc.member);
    if (!t.empty()) out.emplace_back(sc.name, t.cells().size());
  }
  return out;
}

}  // namespace spandep
