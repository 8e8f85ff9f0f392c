#include "spandep/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace spandep {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

long long parse_int(const std::string& key, const std::string& val) {
  size_t pos = 0;
  long long out = 0;
  try {
    out = std::stoll(val, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != val.size() || val.empty())
    throw CorpusError("config: key '" + key + "' needs an integer, got '" + val + "'");
  return out;
}

uint64_t parse_uint(const std::string& key, const std::string& val) {
  long long v = parse_int(key, val);
  if (v < 0) throw CorpusError("config: key '" + key + "' must be >= 0, got '" + val + "'");
  return static_cast<uint64_t>(v);
}

double parse_real(const std::string& key, const std::string& val) {
  size_t pos = 0;
  double out = 0;
  try {
    out = std::stod(val, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != val.size() || val.empty())
    throw CorpusError("config: key '" + key + "' needs a number, got '" + val + "'");
  return out;
}

std::set<std::string> parse_tag_set(const std::string& val) {
  std::set<std::string> out;
  std::istringstream in(val);
  std::string tok;
  while (in >> tok) out.insert(tok);
  return out;
}

}  // namespace

void RunConfig::validate() const {
  if (markov_order != 2 && markov_order != 3)
    throw CorpusError("config: markov_order must be 2 or 3");
  if (threshold < 1) throw CorpusError("config: threshold must be >= 1");
  if (tag_cap < 1) throw CorpusError("config: tag_cap must be >= 1");
  if (hapax_max < 0) throw CorpusError("config: hapax_max must be >= 0");
  if (jobs < 1) throw CorpusError("config: jobs must be >= 1");
  if (tree_bound < 1 || tree_bound > 10)
    throw CorpusError("config: tree_bound must be in [1, 10]");
  if (!(tagging_cap >= 1)) throw CorpusError("config: tagging_cap must be >= 1");
  cats.validate();
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CorpusError("config: cannot open '" + path + "'");
  static const std::set<std::string> known = {
      "model",    "markov_order", "threshold",  "tag_cap",   "hapax_max", "seed",
      "jobs",     "tree_bound",   "tagging_cap", "punct_tags", "noun_tags", "verb_tags"};
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string body = line;
    size_t hash = body.find('#');
    if (hash != std::string::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    size_t eq = body.find('=');
    if (eq == std::string::npos)
      throw CorpusError("config: " + path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    std::string key = trim(body.substr(0, eq));
    std::string val = trim(body.substr(eq + 1));
    if (!known.count(key))
      throw CorpusError("config: " + path + ":" + std::to_string(lineno) + ": unknown key '" +
                        key + "'");
    if (kv.count(key))
      throw CorpusError("config: " + path + ":" + std::to_string(lineno) + ": duplicate key '" +
                        key + "'");
    kv[key] = val;
  }
  return kv;
}

void apply_config(RunConfig& cfg, const std::map<std::string, std::string>& kv,
                  const std::set<std::string>& overridden) {
  for (const auto& [key, val] : kv) {
    if (overridden.count(key)) continue;
    if (key == "model") {
      cfg.kind = parse_model_kind(val);
    } else if (key == "markov_order") {
      cfg.markov_order = static_cast<int>(parse_int(key, val));
    } else if (key == "threshold") {
      cfg.threshold = parse_uint(key, val);
    } else if (key == "tag_cap") {
      cfg.tag_cap = static_cast<int>(parse_int(key, val));
    } else if (key == "hapax_max") {
      cfg.hapax_max = static_cast<int>(parse_int(key, val));
    } else if (key == "seed") {
      cfg.seed = parse_uint(key, val);
    } else if (key == "jobs") {
      cfg.jobs = static_cast<int>(parse_int(key, val));
    } else if (key == "tree_bound") {
      cfg.tree_bound = static_cast<int>(parse_int(key, val));
    } else if (key == "tagging_cap") {
      cfg.tagging_cap = parse_real(key, val);
    } else if (key == "punct_tags") {
      cfg.cats.punct = parse_tag_set(val);
    } else if (key == "noun_tags") {
      cfg.cats.nouns = parse_tag_set(val);
    } else if (key == "verb_tags") {
      cfg.cats.lexverbs = parse_tag_set(val);
    } else {
      throw CorpusError("config: unknown key '" + key + "'");
    }
  }
}

}  // namespace spandep
