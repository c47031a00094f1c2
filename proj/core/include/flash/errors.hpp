#pragma once

#include <stdexcept>
#include <string>

namespace flash {

// Exit codes shared by the library error types and the CLI.
//   0 success, 1 usage, 2 infeasible, 3 bad data / bad model state.
enum class ExitCode : int {
  ok = 0,
  usage = 1,
  infeasible = 2,
  bad_data = 3,
};

// Malformed inputs, broken model files, unfitted models, refused requests.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Degenerate fits: rank-deficient design matrices, too few samples, etc.
class FitError : public DataError {
 public:
  explicit FitError(const std::string& what) : DataError(what) {}
};

// A search or sampling request whose feasible set is empty.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace flash
