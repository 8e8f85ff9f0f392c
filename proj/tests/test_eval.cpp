#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "spandep/eval.hpp"
#include "spandep/oracle.hpp"

using namespace spandep;
using namespace spandep::testing;

namespace {

CategoryConfig small_cats() {
  CategoryConfig c;
  c.punct = {","};
  c.nouns = {"N"};
  c.lexverbs = {"V"};
  return c;
}

Sentence raw_tree(const std::vector<std::string>& words, const std::vector<std::string>& tags,
                  const std::vector<int>& parent) {
  Sentence s;
  s.words = words;
  s.words.push_back("<EOS>");
  s.tags = tags;
  s.tags.push_back("<EOS>");
  s.parent = parent;
  return s;
}

}  // namespace

TEST_CASE("identical corpora score 100 percent everywhere") {
  Treebank tb = bank({sent({"dog", "runs", ","}, {"N", "V", ","}, {2, 0, 2})});
  EvalReport rep = evaluate("C", tb, tb, small_cats());
  CHECK(rep.model == "C");
  CHECK(rep.has_attach);
  CHECK(rep.tag[0].total == 3);
  CHECK(rep.tag[1].total == 2);  // the comma is punctuation
  CHECK(rep.tag[2].total == 1);
  CHECK(rep.tag[3].total == 1);
  for (int c = 0; c < kNumCategories; ++c) {
    CHECK(rep.tag[c].pct() == doctest::Approx(100.0));
    CHECK(rep.attach[c].pct() == doctest::Approx(100.0));
    CHECK(rep.attach[c].total == rep.tag[c].total);
  }
}

TEST_CASE("tagging accuracy is the plain token ratio, bucketed by gold tag") {
  Treebank gold = bank({sent({"a", "b", "c", "d"}, {"N", "N", "N", "N"}, {2, 3, 4, 0})});
  Treebank pred = bank({sent({"a", "b", "c", "d"}, {"N", "V", "N", "N"}, {2, 3, 4, 0})});
  EvalReport rep = evaluate("C", gold, pred, small_cats());
  CHECK(rep.tag[0].pct() == doctest::Approx(75.0));
  // the mistagged token still counts in the noun bucket: categories follow gold
  CHECK(rep.tag[2].total == 4);
  CHECK(rep.tag[2].pct() == doctest::Approx(75.0));
  CHECK(rep.tag[3].total == 0);
  CHECK(rep.attach[0].pct() == doctest::Approx(100.0));
}

TEST_CASE("attachment accuracy counts links to the right in-memory parent") {
  Treebank gold = bank({sent({"a", "b"}, {"N", "N"}, {2, 0})});
  // prediction structure is scored as-is (no validation): move a onto EOS
  Treebank pred = gold;
  pred.sentences[0].parent[0] = 2;
  EvalReport rep = evaluate("C", gold, pred, small_cats());
  CHECK(rep.tag[0].pct() == doctest::Approx(100.0));
  CHECK(rep.attach[0].total == 2);
  CHECK(rep.attach[0].correct == 1);  // b -> EOS still agrees, a moved
  CHECK(rep.attach[0].pct() == doctest::Approx(50.0));
}

TEST_CASE("the EOS row never enters the counts") {
  Treebank tb = bank({sent({"w"}, {"N"}, {0})});
  EvalReport rep = evaluate("C", tb, tb, small_cats());
  CHECK(rep.tag[0].total == 1);
  CHECK(rep.attach[0].total == 1);
}

TEST_CASE("misaligned corpora are rejected") {
  Treebank one = bank({sent({"w"}, {"N"}, {0})});
  Treebank two = bank({sent({"w"}, {"N"}, {0}), sent({"x"}, {"N"}, {0})});
  CHECK_THROWS_AS(evaluate("C", one, two, small_cats()), CorpusError);
  Treebank other = bank({sent({"y"}, {"N"}, {0})});
  CHECK_THROWS_AS(evaluate("C", one, other, small_cats()), CorpusError);
  Treebank longer = bank({sent({"w", "z"}, {"N", "N"}, {2, 0})});
  CHECK_THROWS_AS(evaluate("C", one, longer, small_cats()), CorpusError);
}

TEST_CASE("overlapping category sets are rejected") {
  CategoryConfig bad = small_cats();
  bad.lexverbs.insert("N");
  Treebank tb = bank({sent({"w"}, {"N"}, {0})});
  CHECK_THROWS_AS(evaluate("C", tb, tb, bad), CorpusError);
}

TEST_CASE("tagging-only reports skip attachment") {
  Treebank tb = bank({sent({"w"}, {"N"}, {0})});
  EvalReport rep = evaluate("X", tb, tb, small_cats(), /*score_attach=*/false);
  CHECK(!rep.has_attach);
  CHECK(rep.attach[0].total == 0);
}

TEST_CASE("counts match an independent tally on randomized corpora") {
  std::mt19937_64 rng(21);
  CategoryConfig cats = small_cats();
  const std::vector<std::string> tagset = {"N", "V", ",", "J"};
  for (int trial = 0; trial < 25; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    const auto& trees = enumerate_trees(n);
    std::vector<std::string> words, gt, qt;
    for (int i = 0; i < n; ++i) {
      words.push_back("w" + std::to_string(rng() % 3));
      gt.push_back(tagset[rng() % tagset.size()]);
      qt.push_back(rng() % 2 ? gt.back() : tagset[rng() % tagset.size()]);
    }
    Treebank gold = bank({raw_tree(words, gt, trees[rng() % trees.size()])});
    Treebank pred = bank({raw_tree(words, qt, trees[rng() % trees.size()])});
    EvalReport rep = evaluate("C", gold, pred, cats);

    CatCounts tag[kNumCategories], att[kNumCategories];
    const Sentence& g = gold.sentences[0];
    const Sentence& q = pred.sentences[0];
    for (int i = 0; i < n; ++i) {
      bool in[4] = {true, cats.punct.count(g.tags[i]) == 0, cats.nouns.count(g.tags[i]) > 0,
                    cats.lexverbs.count(g.tags[i]) > 0};
      for (int c = 0; c < 4; ++c) {
        if (!in[c]) continue;
        ++tag[c].total;
        ++att[c].total;
        tag[c].correct += q.tags[i] == g.tags[i] ? 1 : 0;
        att[c].correct += q.parent[i] == g.parent[i] ? 1 : 0;
      }
    }
    for (int c = 0; c < 4; ++c) {
      CHECK(rep.tag[c].total == tag[c].total);
      CHECK(rep.tag[c].correct == tag[c].correct);
      CHECK(rep.attach[c].total == att[c].total);
      CHECK(rep.attach[c].correct == att[c].correct);
    }
  }
}

TEST_CASE("most-frequent-tag fit: modal tag, lexicographic ties, global fallback") {
  Treebank tb = bank({sent({"can", "saw"}, {"N", "V"}, {2, 0}),
                      sent({"can", "saw"}, {"N", "V"}, {2, 0}),
                      sent({"can", "saw"}, {"N", "N"}, {2, 0}),
                      sent({"can", "saw"}, {"V", "N"}, {2, 0})});
  MftTagger mft = fit_mft(tb);
  CHECK(mft.word_tag.at("can") == "N");  // 3 N vs 1 V
  CHECK(mft.word_tag.at("saw") == "N");  // 2-2 tie, N < V
  CHECK(mft.fallback == "N");            // 5 N vs 3 V overall
}

TEST_CASE("adjacent-attachment fit: majority bucket with EOS counted by identity") {
  std::vector<Sentence> ss;
  for (int i = 0; i < 9; ++i) ss.push_back(sent({"the", "dog"}, {"D", "N"}, {2, 0}));
  ss.push_back(sent({"dog", "the"}, {"N", "D"}, {0, 1}));
  // q's head is two words away: no positional vote at all
  ss.push_back(sent({"a", "b", "q"}, {"N", "N", "Q"}, {0, 1, 1}));
  // tie between previous and following resolves to following
  ss.push_back(sent({"x", "y"}, {"T", "Z"}, {0, 1}));  // Z attaches to the previous word
  ss.push_back(sent({"y", "x"}, {"Z", "T"}, {2, 0}));  // Z attaches to the following word
  AdjacentAttacher adj = fit_adjacent(bank(ss));
  CHECK(adj.rule.at("D") == AdjRule::Following);  // 9 following vs 1 previous
  CHECK(adj.rule.at("N") == AdjRule::Eos);
  CHECK(adj.rule.at("Q") == AdjRule::Following);  // vote-less
  CHECK(adj.rule.at("Z") == AdjRule::Following);  // 1-1 tie
  CHECK(adj.fallback == AdjRule::Following);
}

TEST_CASE("baseline application respects rules, edges and unknown words") {
  Treebank train = bank({sent({"the", "dog"}, {"D", "N"}, {2, 0}),
                         sent({"the", "dog"}, {"D", "N"}, {2, 0}),
                         sent({"up", "it"}, {"P", "N"}, {2, 0})});
  MftTagger mft = fit_mft(train);
  AdjacentAttacher adj = fit_adjacent(train);
  REQUIRE(adj.rule.at("D") == AdjRule::Following);
  REQUIRE(adj.rule.at("N") == AdjRule::Eos);
  REQUIRE(adj.rule.at("P") == AdjRule::Following);

  Treebank input = bank({
      sent({"the", "dog"}, {"D", "N"}, {2, 0}),    // D mid-sentence: following
      sent({"dog", "the"}, {"N", "D"}, {0, 1}),    // D at the end: falls back to previous
      sent({"the"}, {"D"}, {0}),                   // single token: EOS
      sent({"novel", "dog"}, {"QQ", "N"}, {2, 0})  // unseen tag QQ: Following fallback
  });
  uint64_t unseen = 0;
  Treebank out = apply_baseline(mft, adj, input, &unseen);
  REQUIRE(out.sentences.size() == 4);
  CHECK(out.sentences[0].parent == std::vector<int>{1, 2, -1});
  CHECK(out.sentences[0].tags[0] == "D");
  CHECK(out.sentences[0].tags[1] == "N");
  CHECK(out.sentences[1].parent == std::vector<int>{2, 0, -1});  // N->EOS, D->previous
  CHECK(out.sentences[2].parent == std::vector<int>{1, -1});
  CHECK(out.sentences[3].parent == std::vector<int>{1, 2, -1});  // QQ -> following
  CHECK(out.sentences[3].tags[0] == mft.fallback);               // novel word
  CHECK(unseen == 1);
  CHECK(out.sentences[0].words == input.sentences[0].words);
}

TEST_CASE("a previous-rule token at the sentence start attaches to the following word") {
  Treebank train = bank({sent({"x", "p"}, {"Z", "P"}, {0, 1})});  // P votes previous
  AdjacentAttacher adj = fit_adjacent(train);
  REQUIRE(adj.rule.at("P") == AdjRule::Previous);
  Treebank input = bank({sent({"p", "x"}, {"P", "Z"}, {0, 1})});
  Treebank out = apply_baseline(fit_mft(train), adj, input);
  CHECK(out.sentences[0].parent[0] == 1);  // no previous word: feasible alternative
}

TEST_CASE("single-column report renders the fixed text layout") {
  EvalReport rx;
  rx.model = "X";
  rx.has_attach = false;
  for (int c = 0; c < kNumCategories; ++c) rx.tag[c] = {1, 1};
  std::string expected =
      "Tagging accuracy (%)\n"
      "                  X\n"
      "All tokens    100.0\n"
      "Non-punc      100.0\n"
      "Nouns         100.0\n"
      "Lex verbs     100.0\n";
  CHECK(render_report({rx}) == expected);

  std::string tsv =
      "tag\tcategory\tX\n"
      "tag\tAll tokens\t100.0\n"
      "tag\tNon-punc\t100.0\n"
      "tag\tNouns\t100.0\n"
      "tag\tLex verbs\t100.0\n";
  CHECK(render_report({rx}, true) == tsv);
}

TEST_CASE("columns sort into the fixed order with unknown labels last") {
  EvalReport base, c, zed;
  base.model = "Baseline";
  c.model = "C";
  zed.model = "Zed";
  for (EvalReport* r : {&base, &c, &zed})
    for (int k = 0; k < kNumCategories; ++k) {
      r->tag[k] = {1, 2};
      r->attach[k] = {1, 2};
    }
  std::string text = render_report({base, zed, c});
  size_t pc = text.find(" C");
  size_t pb = text.find("Baseline");
  size_t pz = text.find("Zed");
  REQUIRE(pc != std::string::npos);
  REQUIRE(pb != std::string::npos);
  REQUIRE(pz != std::string::npos);
  CHECK(pc < pb);
  CHECK(pb < pz);
  CHECK(text.find("Attachment accuracy (%)") != std::string::npos);
  CHECK(text.find("50.0") != std::string::npos);
}

TEST_CASE("the documentation fixture renders both tables byte-exactly") {
  const char* names[] = {"A", "B", "C", "Cprime", "X", "Baseline"};
  const uint64_t tag_counts[4][6] = {{902, 909, 908, 905, 910, 798},
                                     {889, 898, 896, 893, 898, 771},
                                     {901, 898, 902, 904, 900, 862},
                                     {746, 759, 733, 758, 733, 675}};
  const uint64_t att_counts[4][6] = {{759, 728, 781, 666, 0, 473},
                                     {750, 754, 792, 688, 0, 511},
                                     {757, 718, 772, 559, 0, 298},
                                     {665, 631, 710, 469, 0, 210}};
  std::vector<EvalReport> reports(6);
  for (int m = 0; m < 6; ++m) {
    reports[m].model = names[m];
    reports[m].has_attach = std::string(names[m]) != "X";
    for (int c = 0; c < 4; ++c) {
      reports[m].tag[c] = {tag_counts[c][m], 1000};
      reports[m].attach[c] = {att_counts[c][m], 1000};
    }
  }
  std::string expected =
      "Tagging accuracy (%)\n"
      "                  A        B        C   Cprime        X Baseline\n"
      "All tokens     90.2     90.9     90.8     90.5     91.0     79.8\n"
      "Non-punc       88.9     89.8     89.6     89.3     89.8     77.1\n"
      "Nouns          90.1     89.8     90.2     90.4     90.0     86.2\n"
      "Lex verbs      74.6     75.9     73.3     75.8     73.3     67.5\n"
      "\n"
      "Attachment accuracy (%)\n"
      "                  A        B        C   Cprime Baseline\n"
      "All tokens     75.9     72.8     78.1     66.6     47.3\n"
      "Non-punc       75.0     75.4     79.2     68.8     51.1\n"
      "Nouns          75.7     71.8     77.2     55.9     29.8\n"
      "Lex verbs      66.5     63.1     71.0     46.9     21.0\n";
  CHECK(render_report(reports) == expected);

  // the same reports in scrambled input order render identically
  std::vector<EvalReport> scrambled = {reports[5], reports[2], reports[0],
                                       reports[4], reports[1], reports[3]};
  CHECK(render_report(scrambled) == expected);
}
