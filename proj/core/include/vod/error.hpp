#pragma once

#include <stdexcept>
#include <string>

namespace vod {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kVerificationFailure = 2,
  kResourceCap = 3,
  kParseError = 4,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::kFailure)
      : std::runtime_error(what), code_(code) {}

  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

class SingularMatrix : public Error {
 public:
  explicit SingularMatrix(const std::string& what) : Error("singular matrix: " + what) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what) : Error("parse error: " + what, ExitCode::kParseError) {}
};

class VerificationFailure : public Error {
 public:
  explicit VerificationFailure(const std::string& what)
      : Error("verification failed: " + what, ExitCode::kVerificationFailure) {}
};

/// A configured cap was hit; the result would have been incomplete.
class ResourceLimit : public Error {
 public:
  explicit ResourceLimit(const std::string& what)
      : Error("resource limit: " + what, ExitCode::kResourceCap) {}
};

/// A declared symmetry does not map the vertex set onto itself.
class SymmetryError : public Error {
 public:
  explicit SymmetryError(const std::string& what) : Error("symmetry error: " + what) {}
};

/// The objective has no gradient at the current iterate.
class Nondifferentiable : public Error {
 public:
  explicit Nondifferentiable(const std::string& what) : Error("nondifferentiable objective: " + what) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what) : Error(what) {}
};

}  // namespace vod
