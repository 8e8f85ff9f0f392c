#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "spandep/model.hpp"
#include "spandep/vocab.hpp"

using namespace spandep;
using namespace spandep::testing;

namespace {

ModelParams fit_on(ModelKind kind, const Treebank& tb, int64_t threshold = 10,
                   int markov_order = 2) {
  FitConfig fc;
  fc.threshold = threshold;
  fc.markov_order = markov_order;
  return fit(kind, tb, build_lexicon(tb), fc);
}

std::string saved(const ModelParams& p) {
  std::ostringstream os;
  save_params(os, p);
  return os.str();
}

// stock -> price -> fell -> EOS, a three-link left-leaning chain
Treebank spf_corpus(int copies) {
  std::vector<Sentence> ss;
  for (int i = 0; i < copies; ++i)
    ss.push_back(sent({"stock", "price", "fell"}, {"N", "N", "V"}, {2, 3, 0}));
  return bank(ss);
}

}  // namespace

TEST_CASE("model kind names round-trip and junk is rejected") {
  for (ModelKind k : {ModelKind::A, ModelKind::B, ModelKind::C, ModelKind::Cprime, ModelKind::X})
    CHECK(parse_model_kind(kind_name(k)) == k);
  CHECK(parse_model_kind("C'") == ModelKind::Cprime);
  CHECK_THROWS_AS(parse_model_kind("Q"), CorpusError);
  CHECK_THROWS_AS(parse_model_kind(""), CorpusError);
}

TEST_CASE("fit validates its configuration") {
  Treebank tb = bank({sent({"w"}, {"T"}, {0})});
  Lexicon lex = build_lexicon(tb);
  FitConfig fc;
  fc.markov_order = 4;
  CHECK_THROWS_AS(fit(ModelKind::X, tb, lex, fc), CorpusError);
  fc.markov_order = 2;
  fc.threshold = 0;
  CHECK_THROWS_AS(fit(ModelKind::X, tb, lex, fc), CorpusError);
  CHECK_THROWS_AS(fit(ModelKind::X, Treebank{}, lex, FitConfig{}), CorpusError);
}

TEST_CASE("tagging chain counts match a hand tally") {
  // a/D b/N  +  b/N : chain is scored right to left, conditioned on followers
  Treebank tb = bank({sent({"a", "b"}, {"D", "N"}, {2, 0}), sent({"b"}, {"N"}, {0})});
  ModelParams p = fit_on(ModelKind::X, tb);
  int D = p.tags.find("D"), N = p.tags.find("N");
  int wa = p.words.find("a"), wb = p.words.find("b");
  REQUIRE(D >= 0);
  REQUIRE(N >= 0);

  CHECK(p.tag2.count(make_key(p.tag_eos), make_key(N)) == 2);
  CHECK(p.tag2.count(make_key(N), make_key(D)) == 1);
  CHECK(p.tag2.total(make_key(p.tag_eos)) == 2);
  CHECK(p.tag1.count(TupleKey{}, make_key(N)) == 2);
  CHECK(p.tag1.count(TupleKey{}, make_key(D)) == 1);
  CHECK(p.tag1.total(TupleKey{}) == 3);
  CHECK(p.wordtag.count(make_key(D), make_key(wa)) == 1);
  CHECK(p.wordtag.count(make_key(N), make_key(wb)) == 2);
  CHECK(p.tag3.empty());  // order 2 never fills the trigram table

  ModelParams p3 = fit_on(ModelKind::X, tb, 10, 3);
  CHECK(p3.tag3.count(make_key(p3.tag_eos, p3.tag_bnd), make_key(N)) == 2);
  CHECK(p3.tag3.count(make_key(N, p3.tag_eos), make_key(D)) == 1);
}

TEST_CASE("chain_logp multiplies the tag and word factors") {
  Treebank tb = bank({sent({"a", "b"}, {"D", "N"}, {2, 0}), sent({"a2", "b"}, {"D", "N"}, {2, 0}),
                      sent({"c", "b"}, {"V", "N"}, {2, 0}), sent({"c", "b"}, {"V", "N"}, {2, 0})});
  ModelParams p = fit_on(ModelKind::X, tb, 1);
  int D = p.tags.find("D");
  // Pr(D | next=N) = 2/4, Pr(a | D) = 1/2
  CHECK(p.chain_logp(D, p.tags.find("N"), p.tag_bnd, p.words.find("a")) ==
        doctest::Approx(std::log(0.25)));
}

TEST_CASE("model C child chains observe joint events per head") {
  Treebank tb = bank({sent({"w"}, {"T"}, {0})});
  ModelParams p = fit_on(ModelKind::C, tb, 1);
  int T = p.tags.find("T");
  int ww = p.words.find("w");
  int L = static_cast<int>(Dir::Left), R = static_cast<int>(Dir::Right);

  // The EOS mark generates w as its sole left child, then stops; w's own
  // chains stop immediately.
  CHECK(p.kidjoint.count(make_key(L, p.tag_start, p.tag_eos, p.word_eos), make_key(T, ww)) == 1);
  CHECK(p.kidjoint.count(make_key(L, T, p.tag_eos, p.word_eos),
                         make_key(p.tag_stop, p.word_stop)) == 1);
  CHECK(p.kidjoint.count(make_key(R, p.tag_start, p.tag_eos, p.word_eos),
                         make_key(p.tag_stop, p.word_stop)) == 1);
  CHECK(p.kidjoint.count(make_key(L, p.tag_start, T, ww), make_key(p.tag_stop, p.word_stop)) == 1);
  CHECK(p.kidjoint.count(make_key(R, p.tag_start, T, ww), make_key(p.tag_stop, p.word_stop)) == 1);
  CHECK(p.kidtag.count(make_key(L, p.tag_start, p.tag_eos), make_key(T)) == 1);
  CHECK(p.kidtag2.count(make_key(L, p.tag_start), make_key(T)) == 1);
  CHECK(p.wordtag.count(make_key(T), make_key(ww)) == 1);

  CHECK(p.kid_event_logp(Dir::Left, -1, p.tag_eos, p.word_eos, T, ww) == doctest::Approx(0.0));
  CHECK(p.kid_stop_logp(Dir::Left, T, p.tag_eos, p.word_eos) == doctest::Approx(0.0));
}

TEST_CASE("model B observes parent specs and lexical child tags") {
  ModelParams p = fit_on(ModelKind::B, spf_corpus(1), 1);
  int N = p.tags.find("N"), V = p.tags.find("V");
  int stock = p.words.find("stock");
  int L = static_cast<int>(Dir::Left), R = static_cast<int>(Dir::Right);

  CHECK(p.pspec.count(make_key(N, stock), make_key(R, N)) == 1);
  CHECK(p.pspec.count(make_key(N, p.words.find("price")), make_key(R, V)) == 1);
  CHECK(p.pspec.count(make_key(V, p.words.find("fell")), make_key(R, p.tag_eos)) == 1);
  CHECK(p.pspec2.count(make_key(N), make_key(R, N)) == 1);
  CHECK(p.kidtagw.count(make_key(L, p.tag_start, p.tag_eos, p.word_eos), make_key(V)) == 1);
  CHECK(p.kidjoint.empty());   // joint events belong to kind C
  CHECK(p.linkfull.empty());   // link tables belong to kind A

  CHECK(p.pspec_logp(N, stock, Dir::Right, N) == doctest::Approx(0.0));
  CHECK(p.kid_tag_logp(Dir::Left, -1, p.tag_eos, p.word_eos, V) == doctest::Approx(0.0));
}

TEST_CASE("model A emits every unordered pair exactly once") {
  ModelParams p = fit_on(ModelKind::A, spf_corpus(1), 1);
  int N = p.tags.find("N"), V = p.tags.find("V");
  int stock = p.words.find("stock"), price = p.words.find("price"), fell = p.words.find("fell");
  int L = static_cast<int>(Dir::Left), R = static_cast<int>(Dir::Right);
  TupleKey yes = make_key(1), no = make_key(0);

  // three links, at their covers, prevsib START
  CHECK(p.linkfull.count(make_key(L, p.tag_start, N, price, N, stock), yes) == 1);
  CHECK(p.linkfull.count(make_key(L, p.tag_start, V, fell, N, price), yes) == 1);
  CHECK(p.linkfull.count(make_key(L, p.tag_start, p.tag_eos, p.word_eos, V, fell), yes) == 1);
  // (fell, stock) non-link with price as intervening kid
  CHECK(p.linkfull.count(make_key(L, N, V, fell, N, stock), no) == 1);
  // (price, EOS) non-link at the right-edge concatenation; price has no
  // right children, so the sibling context is START
  CHECK(p.linkfull.count(make_key(R, p.tag_start, N, price, p.tag_eos, p.word_eos), no) == 1);
  // residual (EOS, stock) non-link at acceptance
  CHECK(p.linkfull.count(make_key(L, V, p.tag_eos, p.word_eos, N, stock), no) == 1);

  int64_t cells = 0;
  for (const auto& [k, c] : p.linkfull.cells()) cells += c;
  CHECK(cells == 6);  // C(3,2) word pairs + 3 EOS pairs

  CHECK(p.linkword.count(make_key(L, p.tag_start, V, fell, price), yes) == 1);
  CHECK(p.kidjoint.empty());
  CHECK(p.pspec.empty());
}

TEST_CASE("link probability is sharpened by the sibling context") {
  ModelParams p = fit_on(ModelKind::A, spf_corpus(3), 1);
  int N = p.tags.find("N"), V = p.tags.find("V");
  int fell = p.words.find("fell"), price = p.words.find("price");

  // (fell, price) linked with no intervening kid: seen 3/3 times
  double first = p.link_logp(Dir::Left, -1, V, fell, N, price, true);
  CHECK(first == doctest::Approx(0.0));
  // with an intervening N kid the full context is unseen and the tag-level
  // table pools 3 links with 3 non-links
  double after = p.link_logp(Dir::Left, N, V, fell, N, price, true);
  CHECK(after == doctest::Approx(std::log(0.5)));
  CHECK(first > after);
}

TEST_CASE("queries stay finite on arbitrary and out-of-vocabulary symbols") {
  for (ModelKind k : {ModelKind::A, ModelKind::B, ModelKind::C, ModelKind::Cprime, ModelKind::X}) {
    ModelParams p = fit_on(k, spf_corpus(2));
    for (int tag : {p.tags.find("N"), p.tag_eos, -1})
      for (int word : {p.words.find("stock"), -1}) {
        if (is_chain_kind(k)) {
          double c = p.chain_logp(tag < 0 ? p.tags.find("V") : tag, tag, p.tag_bnd, word);
          CHECK(std::isfinite(c));
          CHECK(c < 0.0001);
        }
        if (k == ModelKind::A) {
          double l = p.link_logp(Dir::Right, -1, tag, word, p.tags.find("N"), word, true);
          CHECK(std::isfinite(l));
        }
        if (k == ModelKind::C || k == ModelKind::Cprime) {
          double e = p.kid_event_logp(Dir::Left, -1, tag, word, p.tags.find("N"), word);
          CHECK(std::isfinite(e));
          CHECK(std::isfinite(p.kid_stop_logp(Dir::Right, -1, tag, word)));
        }
        if (k == ModelKind::B) {
          CHECK(std::isfinite(p.pspec_logp(tag, word, Dir::Left, tag)));
          CHECK(std::isfinite(p.kid_tag_logp(Dir::Left, -1, tag, word, p.tags.find("N"))));
        }
      }
  }
}

TEST_CASE("kind-specific queries reject the wrong kind") {
  ModelParams p = fit_on(ModelKind::X, spf_corpus(1));
  CHECK_THROWS_AS(p.kid_event_logp(Dir::Left, -1, 0, 0, 0, 0), std::logic_error);
  CHECK_THROWS_AS(p.kid_stop_logp(Dir::Left, -1, 0, 0), std::logic_error);
  CHECK_THROWS_AS(p.kid_tag_logp(Dir::Left, -1, 0, 0, 0), std::logic_error);
  ModelParams pc = fit_on(ModelKind::C, spf_corpus(1));
  CHECK_THROWS_AS(pc.chain_logp(0, 0, 0, 0), std::logic_error);
}

TEST_CASE("fitting is deterministic and serialization round-trips") {
  Treebank tb = spf_corpus(2);
  for (ModelKind k : {ModelKind::A, ModelKind::B, ModelKind::C, ModelKind::Cprime, ModelKind::X}) {
    ModelParams p1 = fit_on(k, tb, 2, 3);
    ModelParams p2 = fit_on(k, tb, 2, 3);
    std::string bytes = saved(p1);
    CHECK(bytes == saved(p2));

    std::istringstream is(bytes);
    ModelParams back = load_params(is);
    CHECK(back.kind == k);
    CHECK(back.markov_order == 3);
    CHECK(back.threshold == 2);
    CHECK(back.hapax_max == 1);
    CHECK(saved(back) == bytes);

    int N = p1.tags.find("N");
    int stock = p1.words.find("stock");
    CHECK(back.tags.find("N") == N);
    CHECK(back.words.find("stock") == stock);
    if (k == ModelKind::A)
      CHECK(back.link_logp(Dir::Left, -1, p1.tags.find("V"), p1.words.find("fell"), N, stock,
                           true) ==
            doctest::Approx(
                p1.link_logp(Dir::Left, -1, p1.tags.find("V"), p1.words.find("fell"), N, stock,
                             true)));
    if (is_chain_kind(k))
      CHECK(back.chain_logp(N, p1.tag_eos, p1.tag_bnd, stock) ==
            doctest::Approx(p1.chain_logp(N, p1.tag_eos, p1.tag_bnd, stock)));
  }
}

TEST_CASE("params files reject tampering and junk") {
  std::string bytes = saved(fit_on(ModelKind::C, spf_corpus(2)));

  {
    std::istringstream is("not a params file\n");
    CHECK_THROWS_AS(load_params(is), CorpusError);
  }
  {
    std::string t = bytes;
    t.replace(t.find("kind"), 4, "kond");
    std::istringstream is(t);
    CHECK_THROWS_AS(load_params(is), CorpusError);
  }
  {
    std::string t = bytes;
    size_t pos = t.find("[table kidjoint]");
    REQUIRE(pos != std::string::npos);
    t.replace(pos, 16, "[table mystery1]");
    std::istringstream is(t);
    CHECK_THROWS_AS(load_params(is), CorpusError);
  }
  {
    std::string t = bytes.substr(0, bytes.find("[table"));  // truncated: no [end]
    std::istringstream is(t);
    CHECK_THROWS_AS(load_params(is), CorpusError);
  }
  {
    // bump one lexicon count: the stored hash no longer matches
    size_t pos = bytes.find("stock\tN\t2");
    REQUIRE(pos != std::string::npos);
    std::string t = bytes;
    t.replace(pos, 9, "stock\tN\t3");
    std::istringstream is(t);
    CHECK_THROWS_AS(load_params(is), CorpusError);
  }
}

TEST_CASE("table_sizes lists exactly the populated tables") {
  ModelParams px = fit_on(ModelKind::X, spf_corpus(1));
  std::set<std::string> names;
  for (const auto& [name, cells] : table_sizes(px)) {
    names.insert(name);
    CHECK(cells > 0);
  }
  CHECK(names == std::set<std::string>{"tag2", "tag1", "wordtag"});

  ModelParams pa = fit_on(ModelKind::A, spf_corpus(1));
  names.clear();
  for (const auto& [name, cells] : table_sizes(pa)) names.insert(name);
  CHECK(names == std::set<std::string>{"tag2", "tag1", "wordtag", "linkfull", "linkfull2",
                                       "linkfull3", "linkword", "linkword2", "linkword3"});
}
