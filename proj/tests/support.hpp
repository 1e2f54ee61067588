#pragma once

// Helpers shared by the unit tests.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "hseval/alpha_opt.hpp"
#include "hseval/metrics.hpp"

namespace testing {

namespace fs = std::filesystem;

inline fs::path fixture(const std::string& name) {
  return fs::path(HSEVAL_FIXTURE_DIR) / name;
}

// The fifteen hotspots of the worked PPAI example, already in table order.
inline std::vector<hseval::HotspotUnit> worked_units() {
  const double area[] = {0.01, 0.01, 0.01, 0.01, 0.02, 0.02, 0.02, 0.03,
                         0.03, 0.03, 0.04, 0.04, 0.05, 0.05, 0.05};
  const double crime[] = {0.10, 0.09, 0.08, 0.07, 0.06, 0.06, 0.05, 0.05,
                          0.05, 0.04, 0.04, 0.04, 0.04, 0.03, 0.03};
  std::vector<hseval::HotspotUnit> out;
  for (int i = 0; i < 15; ++i) {
    out.emplace_back(std::to_string(i + 1), area[i], crime[i]);
  }
  return out;
}

inline std::vector<hseval::HotspotUnit> pick(
    const std::vector<hseval::HotspotUnit>& all, std::vector<int> ids) {
  std::vector<hseval::HotspotUnit> out;
  for (int id : ids) out.push_back(all.at(id - 1));
  return out;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("hseval-" + tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

inline void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs the CLI with stdout and stderr captured to files in `dir`.
inline RunResult run_cli(const std::string& args, const TempDir& dir) {
  const auto out = dir / "stdout.txt";
  const auto err = dir / "stderr.txt";
  const std::string cmd = std::string("\"") + HSEVAL_CLI + "\" " + args +
                          " >\"" + out.string() + "\" 2>\"" + err.string() +
                          "\"";
  const int raw = std::system(cmd.c_str());
  RunResult r;
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = read_file(out);
  r.err = read_file(err);
  return r;
}

}  // namespace testing
