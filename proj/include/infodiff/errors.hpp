#ifndef INFODIFF_ERRORS_HPP
#define INFODIFF_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace infodiff {

/// Base for every error the library raises. `code()` is the short machine
/// tag the CLI prints as `error: <code>: <message>`.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

/// Bad caller-supplied data: out-of-range indices, empty seed sets, bad params.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error("input", what) {}
};

/// A documented precondition of an internal query was violated.
class ContractError : public Error {
 public:
  explicit ContractError(const std::string& what) : Error("contract", what) {}
};

/// Iterative method did not converge; keeps the last iterate for inspection.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, std::vector<double> last_iterate = {})
      : Error("numeric", what), last_(std::move(last_iterate)) {}
  const std::vector<double>& last_iterate() const noexcept { return last_; }

 private:
  std::vector<double> last_;
};

class GenerationError : public Error {
 public:
  explicit GenerationError(const std::string& what) : Error("generation", what) {}
};

/// Paired sample with no nonzero difference.
class DegenerateSampleError : public Error {
 public:
  explicit DegenerateSampleError(const std::string& what) : Error("degenerate", what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error("io", what) {}
};

}  // namespace infodiff

#endif  // INFODIFF_ERRORS_HPP
