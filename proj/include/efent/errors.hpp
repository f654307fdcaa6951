#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace efent {

/// Base class for every error the library raises. `code()` is a stable
/// kebab-case identifier used by the CLI for machine-parseable reporting.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

struct NotPositiveDefinite : Error {
  explicit NotPositiveDefinite(const std::string& what)
      : Error("not-positive-definite", what) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& what)
      : Error("dimension-mismatch", what) {}
};

/// A parameter left (or was requested outside) the natural parameter space.
struct OutOfDomain : Error {
  explicit OutOfDomain(const std::string& what) : Error("out-of-domain", what) {}
};

/// Invalid entropy order, e.g. alpha <= 0.
struct InvalidOrder : Error {
  explicit InvalidOrder(const std::string& what) : Error("invalid-order", what) {}
};

struct FamilyMismatch : Error {
  explicit FamilyMismatch(const std::string& what)
      : Error("family-mismatch", what) {}
};

/// A data point outside the family's sample space.
struct InvalidSample : Error {
  explicit InvalidSample(const std::string& what) : Error("invalid-sample", what) {}
};

/// Raised by closed-form entropy paths when the family has a nonzero carrier
/// measure; callers must use the series/Monte-Carlo corrected path instead.
struct CarrierNotZero : Error {
  explicit CarrierNotZero(const std::string& what)
      : Error("carrier-not-zero", what) {}
};

/// Raised when a carrier-expectation estimate is requested for a family whose
/// carrier is identically zero (the factor is the constant 1).
struct CarrierIsZero : Error {
  explicit CarrierIsZero(const std::string& what)
      : Error("carrier-is-zero", what) {}
};

struct DegenerateSample : Error {
  explicit DegenerateSample(const std::string& what)
      : Error("degenerate-sample", what) {}
};

/// Malformed distribution spec / input file (CLI surface).
struct SpecError : Error {
  explicit SpecError(const std::string& what) : Error("spec", what) {}
};

}  // namespace efent
