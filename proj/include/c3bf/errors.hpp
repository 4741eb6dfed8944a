#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace c3bf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// State outside the kinematic model's domain (V_T or pitch guard).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Relative distance at or below the collision radius.
class InsideCollisionRadius : public Error {
 public:
  InsideCollisionRadius(double separation, double radius);
  double separation() const { return separation_; }
  double radius() const { return radius_; }

 private:
  double separation_;
  double radius_;
};

/// Violated QP constraint with a zero input gradient.
class Infeasible : public Error {
 public:
  using Error::Error;
};

class OutOfHorizon : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

class ConfigMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace c3bf
