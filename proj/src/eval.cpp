#include "spandep/eval.hpp"

#include <algorithm>
#include <cstdio>

#include "spandep/vocab.hpp"

namespace spandep {

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

void check_disjoint(const std::set<std::string>& a, const std::set<std::string>& b,
                    const char* an, const char* bn) {
  for (const std::string& t : a)
    if (b.count(t))
      throw CorpusError(std::string("category sets overlap: '") + t + "' is in both " + an +
                        " and " + bn);
}

}  // namespace

CategoryConfig CategoryConfig::penn_defaults() {
  CategoryConfig c;
  c.punct = {".", ",", ":", "``", "''", "-LRB-", "-RRB-"};
  c.nouns = {"NN", "NNS", "NNP", "NNPS"};
  c.lexverbs = {"VB", "VBD", "VBG", "VBN", "VBP", "VBZ"};
  return c;
}

void CategoryConfig::validate() const {
  check_disjoint(punct, nouns, "punct", "nouns");
  check_disjoint(punct, lexverbs, "punct", "lexverbs");
  check_disjoint(nouns, lexverbs, "nouns", "lexverbs");
}

EvalReport evaluate(const std::string& model, const Treebank& gold, const Treebank& pred,
                    const CategoryConfig& cats, bool score_attach) {
  cats.validate();
  if (gold.sentences.size() != pred.sentences.size())
    throw CorpusError("eval: corpora misaligned: " + std::to_string(gold.sentences.size()) +
                      " gold vs " + std::to_string(pred.sentences.size()) + " predicted sentences");
  EvalReport rep;
  rep.model = model;
  rep.has_attach = score_attach;
  for (size_t si = 0; si < gold.sentences.size(); ++si) {
    const Sentence& g = gold.sentences[si];
    const Sentence& q = pred.sentences[si];
    if (g.size() != q.size() || g.words != q.words)
      throw CorpusError("eval: corpora misaligned at sentence " + std::to_string(si + 1));
    for (int i = 0; i + 1 < g.size(); ++i) {  // EOS row excluded
      const std::string& gt = g.tags[i];
      bool in_cat[kNumCategories] = {true, cats.punct.count(gt) == 0, cats.nouns.count(gt) > 0,
                                     cats.lexverbs.count(gt) > 0};
      bool tag_ok = q.tags[i] == gt;
      bool att_ok = q.parent[i] == g.parent[i];
      for (int c = 0; c < kNumCategories; ++c) {
        if (!in_cat[c]) continue;
        ++rep.tag[c].total;
        rep.tag[c].correct += tag_ok ? 1 : 0;
        if (score_attach) {
          ++rep.attach[c].total;
          rep.attach[c].correct += att_ok ? 1 : 0;
        }
      }
    }
  }
  return rep;
}

MftTagger fit_mft(const Treebank& train) {
  std::map<std::string, std::map<std::string, uint64_t>> counts;
  std::map<std::string, uint64_t> global;
  for (const Sentence& s : train.sentences)
    for (int i = 0; i + 1 < s.size(); ++i) {
      ++counts[s.words[i]][s.tags[i]];
      ++global[s.tags[i]];
    }
  MftTagger mft;
  for (const auto& [word, hist] : counts) {
    const std::string* best = nullptr;
    uint64_t bc = 0;
    for (const auto& [tag, c] : hist)  // ascending tags: first max is the least
      if (c > bc) {
        best = &tag;
        bc = c;
      }
    mft.word_tag[word] = *best;
  }
  uint64_t bc = 0;
  for (const auto& [tag, c] : global)
    if (c > bc) {
      mft.fallback = tag;
      bc = c;
    }
  return mft;
}

AdjacentAttacher fit_adjacent(const Treebank& train) {
  // votes[tag] = {previous, following, EOS}
  std::map<std::string, std::array<uint64_t, 3>> votes;
  for (const Sentence& s : train.sentences) {
    const int eos = s.eos();
    for (int i = 0; i < eos; ++i) {
      std::array<uint64_t, 3>& v = votes[s.tags[i]];
      int p = s.parent[i];
      if (p == eos)  // the EOS mark is a head by identity, not adjacency
        ++v[static_cast<int>(AdjRule::Eos)];
      else if (p == i + 1)
        ++v[static_cast<int>(AdjRule::Following)];
      else if (p == i - 1)
        ++v[static_cast<int>(AdjRule::Previous)];
    }
  }
  AdjacentAttacher adj;
  for (const auto& [tag, v] : votes) {
    AdjRule best = AdjRule::Following;  // tie / vote-less priority: F > P > E
    for (AdjRule r : {AdjRule::Following, AdjRule::Previous, AdjRule::Eos})
      if (v[static_cast<int>(r)] > v[static_cast<int>(best)]) best = r;
    adj.rule[tag] = best;
  }
  return adj;
}

Treebank apply_baseline(const MftTagger& mft, const AdjacentAttacher& adj, const Treebank& input,
                        uint64_t* unseen_words) {
  Treebank out;
  uint64_t unseen = 0;
  for (const Sentence& in : input.sentences) {
    Sentence s;
    s.words = in.words;
    s.tags.resize(in.size());
    s.parent.assign(in.size(), -1);
    const int eos = in.eos();
    s.tags[eos] = std::string(kEosSym);
    for (int i = 0; i < eos; ++i) {
      auto t = mft.word_tag.find(in.words[i]);
      if (t == mft.word_tag.end()) {
        s.tags[i] = mft.fallback;
        ++unseen;
      } else {
        s.tags[i] = t->second;
      }
      auto r = adj.rule.find(in.tags[i]);  // rules key on the input's own tags
      AdjRule rule = r == adj.rule.end() ? adj.fallback : r->second;
      bool has_prev = i > 0;
      bool has_next = i + 1 < eos;
      int head;
      switch (rule) {
        case AdjRule::Following:
          head = has_next ? i + 1 : (has_prev ? i - 1 : eos);
          break;
        case AdjRule::Previous:
          head = has_prev ? i - 1 : (has_next ? i + 1 : eos);
          break;
        default:
          head = eos;
      }
      s.parent[i] = head;
    }
    out.sentences.push_back(std::move(s));
  }
  if (unseen_words) *unseen_words = unseen;
  return out;
}

namespace {

int column_rank(const std::string& model) {
  static const std::map<std::string, int> rank = {{"A", 0},      {"B", 1}, {"C", 2},
                                                  {"Cprime", 3}, {"X", 4}, {"Baseline", 5}};
  auto it = rank.find(model);
  return it == rank.end() ? 6 : it->second;
}

std::string render_table(const char* title, const char* tsv_tag,
                         const std::vector<const EvalReport*>& reps, bool attach, bool tsv) {
  std::string out;
  if (tsv) {
    out += tsv_tag;
    out += "\tcategory";
    for (const EvalReport* r : reps) {
      out += '\t';
      out += r->model;
    }
    out += '\n';
    for (int c = 0; c < kNumCategories; ++c) {
      out += tsv_tag;
      out += '\t';
      out += kCategoryNames[c];
      for (const EvalReport* r : reps) {
        out += '\t';
        out += fmt1((attach ? r->attach : r->tag)[c].pct());
      }
      out += '\n';
    }
    return out;
  }
  char buf[64];
  out += title;
  out += '\n';
  out += "          ";  // row label gutter, 10 chars
  for (const EvalReport* r : reps) {
    std::snprintf(buf, sizeof buf, "%9s", r->model.c_str());
    out += buf;
  }
  out += '\n';
  for (int c = 0; c < kNumCategories; ++c) {
    std::snprintf(buf, sizeof buf, "%-10s", kCategoryNames[c]);
    out += buf;
    for (const EvalReport* r : reps) {
      std::snprintf(buf, sizeof buf, "%9s", fmt1((attach ? r->attach : r->tag)[c].pct()).c_str());
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_report(const std::vector<EvalReport>& reports, bool tsv) {
  std::vector<const EvalReport*> order;
  order.reserve(reports.size());
  for (const EvalReport& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const EvalReport* a, const EvalReport* b) {
    return column_rank(a->model) < column_rank(b->model);
  });
  std::vector<const EvalReport*> with_attach;
  for (const EvalReport* r : order)
    if (r->has_attach) with_attach.push_back(r);

  std::string out = render_table("Tagging accuracy (%)", "tag", order, false, tsv);
  if (!with_attach.empty()) {
    if (!tsv) out += '\n';
    out += render_table("Attachment accuracy (%)", "attach", with_attach, true, tsv);
  }
  return out;
}

}  // namespace spandep
