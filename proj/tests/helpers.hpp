#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spandep/corpus.hpp"

namespace spandep::testing {

// Builds an in-memory sentence from words, tags and 1-based head indices
// (0 = root, i.e. the EOS mark), the same convention treebank files use.
inline Sentence sent(std::vector<std::string> words, std::vector<std::string> tags,
                     std::vector<int> heads) {
  RawSentence raw;
  raw.words = std::move(words);
  raw.tags = std::move(tags);
  raw.heads = std::move(heads);
  return attach_eos(raw);
}

inline Treebank bank(std::vector<Sentence> ss) {
  Treebank tb;
  tb.sentences = std::move(ss);
  return tb;
}

// Fresh path under a per-process scratch directory; files persist only for
// the duration of the test run.
inline std::string tmp_path(const std::string& stem) {
  static const std::filesystem::path root = [] {
    std::filesystem::path p = std::filesystem::temp_directory_path() /
                              ("spandep-tests-" + std::to_string(::getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  static std::atomic<int> counter{0};
  return (root / (std::to_string(counter.fetch_add(1)) + "-" + stem)).string();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("test helper failed to write " + path);
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("test helper failed to read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string render(const Treebank& tb, const WriteOptions& wo = {}) {
  std::ostringstream os;
  for (const Sentence& s : tb.sentences) write_sentence(os, s, wo);
  return os.str();
}

}  // namespace spandep::testing
