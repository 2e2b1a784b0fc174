#pragma once

#include <stdexcept>
#include <string>

namespace kvlab {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// |J| at or below the configured tolerance; the dynamics is singular there.
class VanishingMomentum : public Error {
 public:
  VanishingMomentum(double magnitude, double tol, const std::string& context = {});
  double magnitude() const { return magnitude_; }

 private:
  double magnitude_;
};

// A stated hypothesis of an inequality does not hold for the given input.
class HypothesisError : public Error {
 public:
  explicit HypothesisError(std::string condition);
  const std::string& condition() const { return condition_; }

 private:
  std::string condition_;
};

class CflViolation : public Error {
 public:
  using Error::Error;
};

// A proven statement failed numerically. Reported with exit code 2.
class TheoryViolation : public Error {
 public:
  using Error::Error;
};

class TrajectoryTooShort : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(int line, const std::string& message);
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace kvlab
