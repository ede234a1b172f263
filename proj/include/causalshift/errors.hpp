#pragma once

#include <stdexcept>
#include <string>

namespace causalshift {

/// Base class for every failure raised by a computation in this library.
class ComputationError : public std::runtime_error {
 public:
  explicit ComputationError(const std::string& what) : std::runtime_error(what) {}
  virtual const char* kind() const noexcept { return "computation"; }
};

/// Input outside an operation's domain (branch points, bad intervals, ...).
class DomainError : public ComputationError {
 public:
  using ComputationError::ComputationError;
  const char* kind() const noexcept override { return "domain"; }
};

class SingularMatrixError : public ComputationError {
 public:
  SingularMatrixError(const std::string& what, double determinant)
      : ComputationError(what), determinant_(determinant) {}
  double determinant() const noexcept { return determinant_; }
  const char* kind() const noexcept override { return "singular_matrix"; }

 private:
  double determinant_;
};

/// Least-squares design matrix too ill-conditioned; names the most collinear
/// pair of basis columns.
class FitError : public ComputationError {
 public:
  FitError(const std::string& what, std::string first, std::string second)
      : ComputationError(what), first_(std::move(first)), second_(std::move(second)) {}
  const std::string& first_term() const noexcept { return first_; }
  const std::string& second_term() const noexcept { return second_; }
  const char* kind() const noexcept override { return "fit"; }

 private:
  std::string first_;
  std::string second_;
};

class NormDriftError : public ComputationError {
 public:
  NormDriftError(const std::string& what, double drift)
      : ComputationError(what), drift_(drift) {}
  double drift() const noexcept { return drift_; }
  const char* kind() const noexcept override { return "norm_drift"; }

 private:
  double drift_;
};

}  // namespace causalshift
