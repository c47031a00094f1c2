#pragma once

// Shared helpers for the test suites: subprocess capture around the flash
// binary and a couple of deterministic generators.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

namespace testsupport {

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline std::string flash_binary() {
  const char* bin = std::getenv("FLASH_BIN");
  return bin ? bin : "flash";
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

inline std::filesystem::path temp_dir() {
  static int counter = 0;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("flash_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  return dir;
}

// Runs `flash <args>` capturing stdout and stderr separately.
inline CommandResult run_flash(const std::string& args) {
  const auto dir = temp_dir();
  const auto out_path = dir / "stdout";
  const auto err_path = dir / "stderr";
  const std::string command = flash_binary() + " " + args + " > " +
                              out_path.string() + " 2> " + err_path.string();
  const int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  std::filesystem::remove_all(dir);
  return result;
}

}  // namespace testsupport
