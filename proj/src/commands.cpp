#include "spandep/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "spandep/chart.hpp"
#include "spandep/config.hpp"
#include "spandep/eval.hpp"
#include "spandep/oracle.hpp"
#include "spandep/synth.hpp"
#include "spandep/vocab.hpp"

namespace spandep {

namespace {

// Option storage shared by all verbs; each verb binds only the fields it
// registers.
struct CliArgs {
  std::string config_path;
  std::string model = "C";
  std::string columns = "native";
  std::string treebank, params, input, output, gold, train;
  std::vector<std::string> preds;
  std::string lengths = "10,20,40";
  int markov_order = 2, tag_cap = 8, hapax_max = 1, jobs = 1;
  int trials = 100, max_words = 4, tags = 3, tags_per_word = 2;
  uint64_t threshold = 10, seed = 1;
  bool scores = false;
  std::string report = "text";
  double debug_seal_bias = 0;
};

// Defaults, then config-file values, then explicitly passed flags.
RunConfig make_config(const CLI::App* cmd, const CliArgs& a) {
  auto passed = [cmd](const std::string& flag) {
    const CLI::Option* o = cmd->get_option_no_throw(flag);
    return o != nullptr && o->count() > 0;
  };
  static constexpr std::pair<const char*, const char*> kFlagKeys[] = {
      {"--model", "model"},         {"--markov-order", "markov_order"},
      {"--threshold", "threshold"}, {"--tag-cap", "tag_cap"},
      {"--hapax-max", "hapax_max"}, {"--seed", "seed"},
      {"--jobs", "jobs"},
  };
  RunConfig cfg;
  std::set<std::string> overridden;
  for (const auto& [flag, key] : kFlagKeys)
    if (passed(flag)) overridden.insert(key);
  if (!a.config_path.empty()) apply_config(cfg, parse_config_file(a.config_path), overridden);
  if (passed("--model")) cfg.kind = parse_model_kind(a.model);
  if (passed("--markov-order")) cfg.markov_order = a.markov_order;
  if (passed("--threshold")) cfg.threshold = a.threshold;
  if (passed("--tag-cap")) cfg.tag_cap = a.tag_cap;
  if (passed("--hapax-max")) cfg.hapax_max = a.hapax_max;
  if (passed("--seed")) cfg.seed = a.seed;
  if (passed("--jobs")) cfg.jobs = a.jobs;
  cfg.validate();
  return cfg;
}

// Output sink: --out path when given, otherwise the process stdout stream.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path, std::ios::binary);
      if (!file_) throw CorpusError("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void finish() {
    os_->flush();
    if (!path_.empty() && !file_) throw CorpusError("failed writing '" + path_ + "'");
  }

 private:
  std::string path_;
  std::ofstream file_;
  std::ostream* os_;
};

std::string fmt_score(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9f", v);
  return buf;
}

// ---------------------------------------------------------------------------
// train

int cmd_train(const CLI::App* cmd, const CliArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = make_config(cmd, a);
  LoadOptions lo;
  lo.columns = ColumnFormat::parse(a.columns);
  Treebank tb = load_treebank(a.treebank, lo);
  for (const std::string& line : tb.log) err << "skip: " << line << "\n";
  if (tb.sentences.empty())
    throw CorpusError("no usable sentences in '" + a.treebank + "'");

  uint64_t tokens = 0;
  for (const Sentence& s : tb.sentences) tokens += static_cast<uint64_t>(s.word_count());
  Lexicon lex = build_lexicon(tb, cfg.hapax_max);
  FitConfig fc{cfg.markov_order, static_cast<int64_t>(cfg.threshold),
               static_cast<int64_t>(cfg.hapax_max)};
  ModelParams p = fit(cfg.kind, tb, lex, fc);
  save_params_file(a.output, p);

  out << "model " << kind_name(cfg.kind) << ": " << tb.sentences.size() << " sentences ("
      << tb.log.size() << " skipped), " << tokens << " tokens\n";
  out << "lexicon: " << lex.entries().size() << " words, " << lex.open_class().size()
      << " open-class tags\n";
  for (const auto& [name, cells] : table_sizes(p))
    out << "table " << name << ": " << cells << " cells\n";
  out << "params written to " << a.output << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// parse

int cmd_parse(const CLI::App* cmd, const CliArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = make_config(cmd, a);
  ModelParams p = load_params_file(a.params);
  std::vector<RawSentence> raws = load_sentences(a.input, ColumnFormat::parse(a.columns));

  ParseOptions po;
  po.tag_cap = cfg.tag_cap;
  const bool write_heads = p.kind != ModelKind::X;

  std::vector<std::string> rendered(raws.size());
  std::vector<std::string> failures(raws.size());
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= raws.size()) break;
      try {
        ParseResult r = parse_sentence(raws[i].words, p, po);
        if (!r.ok) {
          failures[i] = r.error;
          continue;
        }
        WriteOptions wo;
        wo.write_heads = write_heads;
        if (a.scores) wo.logscore = r.logscore;
        std::ostringstream os;
        write_sentence(os, r.sentence, wo);
        rendered[i] = os.str();
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  int jobs = std::min<int>(cfg.jobs, std::max<size_t>(raws.size(), 1));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  for (size_t i = 0; i < raws.size(); ++i)
    if (!failures[i].empty())
      throw std::logic_error("sentence " + std::to_string(i + 1) + ": " + failures[i]);

  Sink sink(a.output, out);
  if (!write_heads && !raws.empty())
    sink.stream() << "# tags only: model X assigns no links; head column is 0 throughout\n";
  for (const std::string& block : rendered) sink.stream() << block;
  sink.finish();
  err << "parsed " << raws.size() << " sentences with model " << kind_name(p.kind) << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const CLI::App* cmd, const CliArgs& a, std::ostream& out, std::ostream&) {
  RunConfig cfg = make_config(cmd, a);
  LoadOptions lo;
  lo.columns = ColumnFormat::parse(a.columns);
  lo.validate = false;  // keep 1:1 alignment; structure is scored as-is
  Treebank gold = load_treebank(a.gold, lo);

  std::vector<EvalReport> reports;
  for (const std::string& spec : a.preds) {
    size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size())
      throw CorpusError("--pred expects NAME=PATH, got '" + spec + "'");
    std::string name = spec.substr(0, eq);
    Treebank pred = load_treebank(spec.substr(eq + 1), lo);
    reports.push_back(evaluate(name, gold, pred, cfg.cats, /*score_attach=*/name != "X"));
  }
  out << render_report(reports, a.report == "tsv");
  return 0;
}

// ---------------------------------------------------------------------------
// baseline

int cmd_baseline(const CLI::App* cmd, const CliArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig cfg = make_config(cmd, a);
  (void)cfg;
  LoadOptions lo;
  lo.columns = ColumnFormat::parse(a.columns);
  Treebank train = load_treebank(a.train, lo);
  for (const std::string& line : train.log) err << "skip: " << line << "\n";
  if (train.sentences.empty())
    throw CorpusError("no usable sentences in '" + a.train + "'");
  lo.validate = false;  // test input: gold tags are consumed, structure is not
  Treebank input = load_treebank(a.input, lo);

  MftTagger mft = fit_mft(train);
  AdjacentAttacher adj = fit_adjacent(train);
  uint64_t unseen = 0;
  Treebank pred = apply_baseline(mft, adj, input, &unseen);

  Sink sink(a.output, out);
  for (const Sentence& s : pred.sentences) write_sentence(sink.stream(), s);
  sink.finish();
  err << "baseline: " << input.sentences.size() << " sentences, " << unseen
      << " unknown tokens tagged '" << mft.fallback << "'\n";
  return 0;
}

// ---------------------------------------------------------------------------
// oracle-check

struct OracleCheckCfg {
  int tag_cap = 8;
  double seal_bias = 0;
  int tree_bound = 7;
  uint64_t tagging_cap = 1000000;
};

// One certification round on one sentence: exhaustive argmax agreement,
// shared tie rule, direct and incremental rescoring, derivation counting.
bool check_sentence(const std::vector<std::string>& words, const ModelParams& p,
                    const OracleCheckCfg& oc, std::string* why) {
  ParseOptions po;
  po.tag_cap = oc.tag_cap;
  po.debug_seal_bias = oc.seal_bias;
  ParseResult pr = parse_sentence(words, p, po);
  if (!pr.ok) {
    *why = "parser: " + pr.error;
    return false;
  }
  OracleBest ob = brute_force_best(words, p, oc.tag_cap, po.tie_eps, oc.tagging_cap,
                                   oc.tree_bound);
  if (std::abs(pr.logscore - ob.logscore) > 1e-9) {
    *why = "score mismatch: parser " + fmt_score(pr.logscore) + " vs exhaustive " +
           fmt_score(ob.logscore);
    return false;
  }
  if (pr.sentence.parent != ob.sentence.parent || pr.sentence.tags != ob.sentence.tags) {
    *why = "argmax structure differs from exhaustive search under the shared tie rule";
    return false;
  }
  double direct = tree_logprob_direct(p, pr.sentence);
  if (std::abs(direct - pr.logscore) > 1e-9) {
    *why = "direct rescoring " + fmt_score(direct) + " disagrees with chart " +
           fmt_score(pr.logscore);
    return false;
  }
  double replayed = replay_score(p, pr.sentence);
  if (std::abs(replayed - pr.logscore) > 1e-9) {
    *why = "incremental replay " + fmt_score(replayed) + " disagrees with chart " +
           fmt_score(pr.logscore);
    return false;
  }
  if (static_cast<int>(words.size()) <= 5) {
    uint64_t chart_count = count_derivations(words, p.lexicon, oc.tag_cap);
    uint64_t truth = count_structures(words, p.lexicon, oc.tag_cap);
    if (chart_count != truth) {
      *why = "derivation count " + std::to_string(chart_count) + " != structure count " +
             std::to_string(truth);
      return false;
    }
  }
  return true;
}

Treebank random_corpus(std::mt19937_64& rng, int max_words, int tag_pool, int tree_bound) {
  static const char* kWords[] = {"wa", "wb", "wc", "wd", "we", "wf"};
  Treebank tb;
  int sentences = 8 + static_cast<int>(rng() % 5);
  for (int s = 0; s < sentences; ++s) {
    int n = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_words));
    const auto& trees = enumerate_trees(n, tree_bound);
    Sentence sent;
    sent.parent = trees[rng() % trees.size()];
    for (int i = 0; i < n; ++i) {
      sent.words.push_back(kWords[rng() % 6]);
      sent.tags.push_back("T" + std::to_string(rng() % static_cast<uint64_t>(tag_pool)));
    }
    sent.words.emplace_back(kEosSym);
    sent.tags.emplace_back(kEosSym);
    tb.sentences.push_back(std::move(sent));
  }
  return tb;
}

std::vector<std::string> random_query(std::mt19937_64& rng, int max_words) {
  static const char* kWords[] = {"wa", "wb", "wc", "wd", "we", "wf"};
  int n = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_words));
  std::vector<std::string> words;
  words.reserve(n);
  for (int i = 0; i < n; ++i) words.push_back(kWords[rng() % 6]);
  if (rng() % 4 == 0) words[rng() % n] = "qz";  // out-of-lexicon token
  return words;
}

int cmd_oracle_check(const CLI::App* cmd, const CliArgs& a, std::ostream& out,
                     std::ostream& err) {
  RunConfig cfg = make_config(cmd, a);
  if (a.trials < 0) throw CorpusError("oracle-check: --trials must be >= 0");
  if (a.trials == 0) {
    out << "warning: 0 trials requested; vacuously passing\n";
    return 0;
  }
  if (a.max_words < 1 || a.max_words > cfg.tree_bound)
    throw CorpusError("oracle-check: --max-words must be in [1, " +
                      std::to_string(cfg.tree_bound) + "]");
  if (a.tags < 1 || a.tags > 8)
    throw CorpusError("oracle-check: --tags must be in [1, 8]");

  OracleCheckCfg oc;
  oc.tag_cap = cfg.tag_cap;
  oc.seal_bias = a.debug_seal_bias;
  oc.tree_bound = cfg.tree_bound;
  oc.tagging_cap = static_cast<uint64_t>(cfg.tagging_cap);

  static constexpr ModelKind kKinds[] = {ModelKind::A, ModelKind::B, ModelKind::C,
                                         ModelKind::Cprime, ModelKind::X};
  static constexpr int64_t kThresholds[] = {1, 2, 10};

  std::mt19937_64 rng(cfg.seed);
  for (int t = 0; t < a.trials; ++t) {
    Treebank tb = random_corpus(rng, a.max_words, a.tags, cfg.tree_bound);
    Lexicon lex = build_lexicon(tb, cfg.hapax_max);
    FitConfig fc;
    fc.markov_order = (t % 2) ? 3 : 2;
    fc.threshold = kThresholds[t % 3];
    fc.hapax_max = cfg.hapax_max;
    std::vector<std::string> words = random_query(rng, a.max_words);
    for (ModelKind kind : kKinds) {
      ModelParams p = fit(kind, tb, lex, fc);
      std::string why;
      if (check_sentence(words, p, oc, &why)) continue;
      // Shrink to the shortest failing prefix before reporting.
      for (int len = 1; len <= static_cast<int>(words.size()); ++len) {
        std::vector<std::string> prefix(words.begin(), words.begin() + len);
        std::string prefix_why;
        if (check_sentence(prefix, p, oc, &prefix_why)) continue;
        err << "oracle-check FAILED (model " << kind_name(kind) << ", trial " << t
            << ", markov_order " << fc.markov_order << ", threshold " << fc.threshold
            << ")\n  sentence:";
        for (const std::string& w : prefix) err << ' ' << w;
        err << "\n  " << prefix_why << "\n";
        return 2;
      }
      err << "oracle-check FAILED (model " << kind_name(kind) << ", trial " << t
          << "): " << why << " (no shorter prefix reproduces it)\n";
      return 2;
    }
    if ((t + 1) % 25 == 0) err << "oracle-check: " << (t + 1) << "/" << a.trials << " trials\n";
  }
  out << "oracle-check passed: " << a.trials << " trials x 5 model kinds (max_words "
      << a.max_words << ", tags " << a.tags << ", seed " << cfg.seed << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// bench

std::vector<int> parse_lengths(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != tok.size() || tok.empty() || v < 2)
      throw CorpusError("bench: bad length '" + tok + "' (need integers >= 2)");
    out.push_back(v);
  }
  if (out.empty()) throw CorpusError("bench: no lengths given");
  return out;
}

int cmd_bench(const CLI::App* cmd, const CliArgs& a, std::ostream& out, std::ostream&) {
  RunConfig cfg = make_config(cmd, a);
  if (a.tags_per_word < 1 || a.tags_per_word > 8)
    throw CorpusError("bench: --tags-per-word must be in [1, 8]");
  std::vector<int> lengths = parse_lengths(a.lengths);
  Lexicon lex = bench_lexicon(a.tags_per_word);

  out << "length\tcombinations\tspans\tcells\tmax_cell_sigs\tms\n";
  std::vector<double> ns, combos, cells;
  for (size_t i = 0; i < lengths.size(); ++i) {
    std::vector<std::string> words = bench_words(lengths[i], cfg.seed + i);
    auto t0 = std::chrono::steady_clock::now();
    ChartStats st = survey_chart(words, lex, cfg.tag_cap);
    auto t1 = std::chrono::steady_clock::now();
    double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    char row[200];
    std::snprintf(row, sizeof row, "%d\t%llu\t%llu\t%llu\t%llu\t%.1f\n", lengths[i],
                  static_cast<unsigned long long>(st.combinations),
                  static_cast<unsigned long long>(st.spans_built),
                  static_cast<unsigned long long>(st.cells_stored),
                  static_cast<unsigned long long>(st.max_cell_signatures), ms);
    out << row;
    ns.push_back(lengths[i]);
    combos.push_back(static_cast<double>(st.combinations));
    cells.push_back(static_cast<double>(st.cells_stored));
  }
  if (lengths.size() >= 2) {
    char line[120];
    std::snprintf(line, sizeof line, "combinations growth exponent: %.2f\n",
                  loglog_slope(ns, combos));
    out << line;
    std::snprintf(line, sizeof line, "cells growth exponent: %.2f\n", loglog_slope(ns, cells));
    out << line;
  }
  return 0;
}

}  // namespace

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Joint POS tagging and projective dependency parsing over a span chart"};
  app.require_subcommand(1);
  CliArgs a;
  int rc = 0;

  auto add_common = [&a](CLI::App* c) {
    c->add_option("--config", a.config_path, "key=value settings file (flags win)");
    c->add_option("--columns", a.columns,
                  "column layout: 'native' or 1-based 'index,word,tag,head'");
  };

  CLI::App* train = app.add_subcommand("train", "Estimate model tables from a treebank");
  train->add_option("--model,-m", a.model, "model kind: A, B, C, Cprime, X (default C)");
  train->add_option("--treebank", a.treebank, "training treebank file")->required();
  train->add_option("--out,-o", a.output, "params file to write")->required();
  train->add_option("--markov-order", a.markov_order, "tagging-chain order, 2 or 3");
  train->add_option("--threshold", a.threshold, "back-off denominator threshold");
  train->add_option("--hapax-max", a.hapax_max, "open-class rule: rare-word count cutoff");
  add_common(train);
  train->callback([&, train] { rc = cmd_train(train, a, out, err); });

  CLI::App* parse = app.add_subcommand("parse", "Tag and attach raw sentences with a model");
  parse->add_option("--params", a.params, "trained params file")->required();
  parse->add_option("--input", a.input, "sentences to parse (word column used)")->required();
  parse->add_option("--out,-o", a.output, "predictions file (default stdout)");
  parse->add_option("--tag-cap", a.tag_cap, "max candidate tags per word");
  parse->add_option("--jobs,-j", a.jobs, "worker threads (output order is input order)");
  parse->add_flag("--scores", a.scores, "emit per-sentence log-score comments");
  add_common(parse);
  parse->callback([&, parse] { rc = cmd_parse(parse, a, out, err); });

  CLI::App* eval = app.add_subcommand("eval", "Tagging and attachment accuracy tables");
  eval->add_option("--gold", a.gold, "gold treebank file")->required();
  eval->add_option("--pred", a.preds, "NAME=PATH prediction file (repeatable)")
      ->required()
      ->take_all();
  eval->add_option("--report", a.report, "output format: text or tsv")
      ->check(CLI::IsMember({"text", "tsv"}));
  add_common(eval);
  eval->callback([&, eval] { rc = cmd_eval(eval, a, out, err); });

  CLI::App* baseline =
      app.add_subcommand("baseline", "Most-frequent-tag + adjacent-attachment predictions");
  baseline->add_option("--train", a.train, "training treebank file")->required();
  baseline->add_option("--input", a.input, "test treebank (its tag column drives the rules)")
      ->required();
  baseline->add_option("--out,-o", a.output, "predictions file (default stdout)");
  add_common(baseline);
  baseline->callback([&, baseline] { rc = cmd_baseline(baseline, a, out, err); });

  CLI::App* oracle = app.add_subcommand(
      "oracle-check", "Certify the parser against exhaustive enumeration on random models");
  oracle->add_option("--trials", a.trials, "random trials (default 100)");
  oracle->add_option("--max-words", a.max_words, "longest test sentence (default 4)");
  oracle->add_option("--tags", a.tags, "tag alphabet size (default 3)");
  oracle->add_option("--seed", a.seed, "random seed");
  oracle->add_option("--tag-cap", a.tag_cap, "max candidate tags per word");
  oracle->add_option("--debug-seal-bias", a.debug_seal_bias,
                     "corrupt chart STOP factors by this amount (harness self-test)")
      ->group("");
  add_common(oracle);
  oracle->callback([&, oracle] { rc = cmd_oracle_check(oracle, a, out, err); });

  CLI::App* bench =
      app.add_subcommand("bench", "Chart growth statistics on synthetic sentences");
  bench->add_option("--lengths", a.lengths, "comma-separated sentence lengths");
  bench->add_option("--tags-per-word", a.tags_per_word, "candidate tags per word (default 2)");
  bench->add_option("--seed", a.seed, "random seed");
  bench->add_option("--tag-cap", a.tag_cap, "max candidate tags per word");
  add_common(bench);
  bench->callback([&, bench] { rc = cmd_bench(bench, a, out, err); });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      auto parsed = app.get_subcommands();
      out << (parsed.empty() ? app.help() : parsed.front()->help());
      return 0;
    }
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return 1;
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::overflow_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::logic_error& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return rc;
}

}  // namespace spandep
