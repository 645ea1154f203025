#pragma once

#include <stdexcept>
#include <string>

namespace roughlab {

// Bad user-facing input: malformed files, out-of-range flags, inconsistent
// configuration. CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure: overflow, failed factorization, quadrature breakdown.
// CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// A solution left the admissible region. Carries the first grid time at
// which non-finite or oversized state was detected.
class ExplosionError : public NumericalError {
public:
  ExplosionError(const std::string& what, double blow_up_time)
      : NumericalError(what), blow_up_time_(blow_up_time) {}
  double blow_up_time() const { return blow_up_time_; }

private:
  double blow_up_time_;
};

// A mathematical hypothesis required by the requested computation does not
// hold (rank condition fails, exponent constraints violated). CLI maps this
// to exit code 4.
class HypothesisError : public std::runtime_error {
public:
  explicit HypothesisError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace roughlab
