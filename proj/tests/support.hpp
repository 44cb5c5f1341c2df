#pragma once

#include <array>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "spotlight/corpus.hpp"
#include "spotlight/textseg.hpp"

namespace testing_support {

inline std::string fixture(const std::string& name) { return std::string(SPOTLIGHT_FIXTURE_DIR) + "/" + name; }
inline std::string asset(const std::string& name) { return std::string(SPOTLIGHT_ASSET_DIR) + "/" + name; }

inline const spotlight::WordSet& familiar_words() {
  static const spotlight::WordSet words = spotlight::load_word_list(asset("familiar_words.txt"));
  return words;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Unique scratch path under /tmp.
inline std::string temp_path(const std::string& stem) {
  static std::mt19937_64 rng(std::random_device{}());
  return "/tmp/spotlight_test_" + stem + "_" + std::to_string(rng());
}

struct RunResult {
  int exit_code = -1;
  std::string output;
};

// Runs a shell command, capturing stdout.
inline RunResult run(const std::string& cmd) {
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), n);
  const int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

inline std::string cli() { return SPOTLIGHT_CLI; }

}  // namespace testing_support
