#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "qradial/hp.hpp"

namespace qradial {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument or a specification invariant was violated.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A mean-zero coefficient cycle was required.
class NonZeroMean : public InvalidArgument {
 public:
  NonZeroMean(const std::string& what, HPComplex mean)
      : InvalidArgument(what), mean_(std::move(mean)) {}
  [[nodiscard]] const HPComplex& mean() const { return mean_; }

 private:
  HPComplex mean_;
};

/// The requested truncation tolerance was not reached within the term budget.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(const std::string& what, HPReal achieved_bound, std::uint64_t terms)
      : Error(what), achieved_bound_(std::move(achieved_bound)), terms_(terms) {}
  [[nodiscard]] const HPReal& achieved_bound() const { return achieved_bound_; }
  [[nodiscard]] std::uint64_t terms() const { return terms_; }

 private:
  HPReal achieved_bound_;
  std::uint64_t terms_;
};

/// Least-squares design matrix is rank deficient or underdetermined.
class SingularFit : public Error {
 public:
  using Error::Error;
};

/// A series evaluation failed at a specific point, given as x = -log q.
class EvaluationFailure : public Error {
 public:
  EvaluationFailure(const std::string& what, HPReal log_q_neg)
      : Error(what), x_(std::move(log_q_neg)) {}
  [[nodiscard]] const HPReal& x() const { return x_; }

 private:
  HPReal x_;
};

}  // namespace qradial
