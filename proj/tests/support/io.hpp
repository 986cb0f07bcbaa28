// SPDX-License-Identifier: Apache-2.0

#ifndef CHEMEVAL_TESTS_IO_HPP
#define CHEMEVAL_TESTS_IO_HPP

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace chemeval::tests {

/// Scratch directory under the test working directory, wiped on both ends.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string &name) {
    path = std::filesystem::current_path() / ("tmp-" + name);
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string file(const std::string &name) const {
    return (path / name).string();
  }
};

inline void write_file(const std::filesystem::path &p,
                       const std::string &content) {
  std::ofstream out(p, std::ios::binary);
  out << content;
}

inline std::string read_file(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace chemeval::tests

#endif
