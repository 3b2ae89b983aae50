#pragma once

#include <cstdint>

namespace nashflow {

// Step-size sequence indexed by round k >= 1.
struct Schedule {
  enum class Kind { kConstant, kInverseK, kInversePow };

  Kind kind = Kind::kInverseK;
  double constant = 1.0;  // kConstant
  double power = 1.0;     // kInversePow, in (0.5, 1]

  static Schedule Constant(double c) { return {Kind::kConstant, c, 1.0}; }
  static Schedule InverseK() { return {Kind::kInverseK, 1.0, 1.0}; }
  static Schedule InversePow(double p) { return {Kind::kInversePow, 1.0, p}; }

  double value(std::int64_t k) const;

  // Polynomial decay exponent: value(k) ~ k^-exponent.
  double exponent() const;

  bool operator==(const Schedule&) const = default;
};

// Throws InvalidInputError for out-of-range parameters. Strategy rates must
// stay in [0, 1]; score rates only need to be nonnegative.
void ValidateSchedule(const Schedule& s, bool is_strategy_rate);

// Score rate mu (fast) and strategy rate lambda (slow) with lambda/mu -> 0.
class TwoTimescale {
 public:
  TwoTimescale(Schedule fast, Schedule slow);
  const Schedule& fast() const { return fast_; }
  const Schedule& slow() const { return slow_; }

 private:
  Schedule fast_;
  Schedule slow_;
};

}  // namespace nashflow
