#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nashflow {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments: dimension mismatches, non-finite payoffs, bad parameters.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

// A point outside the feasible action set.
class DomainError : public Error {
 public:
  using Error::Error;
};

// A size cap was exceeded (joint-action enumeration, path products, ...).
class ResourceError : public Error {
 public:
  using Error::Error;
};

// A learner asked for information its feedback structure does not expose.
class FeedbackStructureError : public Error {
 public:
  using Error::Error;
};

// Importance weight requested for an action sampled below the probability floor.
class VarianceGuardError : public Error {
 public:
  using Error::Error;
};

// Inner-loop step size too large for the problem curvature.
class StepSizeError : public Error {
 public:
  using Error::Error;
};

// NaN, divergence, or simplex drift beyond tolerance during integration.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double time)
      : Error(what + " (t=" + std::to_string(time) + ")"), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

// Wraps a learner error with the round in which it happened.
class RoundError : public Error {
 public:
  RoundError(const std::string& what, long long round)
      : Error("round " + std::to_string(round) + ": " + what), round_(round) {}
  long long round() const { return round_; }

 private:
  long long round_;
};

// Experiment configuration rejected. Carries every violation found, each
// prefixed with a JSON pointer into the offending document.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(Join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string Join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) {
      if (!out.empty()) out += "; ";
      out += s;
    }
    return out;
  }
  std::vector<std::string> violations_;
};

}  // namespace nashflow
