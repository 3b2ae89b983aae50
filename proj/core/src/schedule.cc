#include "nashflow/schedule.h"

#include <cmath>

#include "nashflow/errors.h"

namespace nashflow {

double Schedule::value(std::int64_t k) const {
  if (k < 1) throw InvalidInputError("schedules are indexed from k = 1");
  switch (kind) {
    case Kind::kConstant:
      return constant;
    case Kind::kInverseK:
      return 1.0 / static_cast<double>(k);
    case Kind::kInversePow:
      return std::pow(static_cast<double>(k), -power);
  }
  return 0.0;
}

double Schedule::exponent() const {
  switch (kind) {
    case Kind::kConstant:
      return 0.0;
    case Kind::kInverseK:
      return 1.0;
    case Kind::kInversePow:
      return power;
  }
  return 0.0;
}

void ValidateSchedule(const Schedule& s, bool is_strategy_rate) {
  switch (s.kind) {
    case Schedule::Kind::kConstant:
      if (!std::isfinite(s.constant) || s.constant < 0.0) {
        throw InvalidInputError("constant rate must be finite and nonnegative");
      }
      if (is_strategy_rate && s.constant > 1.0) {
        throw InvalidInputError("strategy rate must not exceed 1");
      }
      return;
    case Schedule::Kind::kInverseK:
      return;
    case Schedule::Kind::kInversePow:
      if (!(s.power > 0.5 && s.power <= 1.0)) {
        throw InvalidInputError("inverse power exponent must lie in (0.5, 1]");
      }
      return;
  }
}

TwoTimescale::TwoTimescale(Schedule fast, Schedule slow)
    : fast_(fast), slow_(slow) {
  ValidateSchedule(fast_, false);
  ValidateSchedule(slow_, true);
  if (!(slow_.exponent() > fast_.exponent())) {
    throw InvalidInputError("strategy rate must decay strictly faster than score rate");
  }
}

}  // namespace nashflow
