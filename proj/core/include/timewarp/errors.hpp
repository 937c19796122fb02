#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace timewarp {

/// Malformed query text. Carries the byte offset of the offending token and
/// the set of tokens the parser would have accepted there.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::vector<std::string> expected,
             const std::string& found);

  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// A configurable resource limit (normal-form nodes, samples, solver
/// conflicts) was hit before the computation finished.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An internal consistency check failed. Seeing one of these means a bug in
/// the library, never bad user input.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace timewarp
