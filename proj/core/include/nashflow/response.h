#pragma once

#include <span>
#include <vector>

#include "nashflow/continuous_game.h"
#include "nashflow/random.h"
#include "nashflow/simplex.h"

namespace nashflow {

// Entries within this distance of the maximum count as tied best responses.
inline constexpr double kBestResponseTolerance = 1e-12;

enum class TieRule { kLowestIndex, kUniformOverArgmax };

enum class RegularizerKind { kEntropy, kSquaredEuclidean };

// h(x) = sum x log x (entropy) or 0.5 ||x||^2, scaled by epsilon > 0.
struct Regularizer {
  RegularizerKind kind = RegularizerKind::kEntropy;
  double epsilon = 0.1;
};

void ValidateRegularizer(const Regularizer& reg);

// Indices whose payoff is within kBestResponseTolerance of the maximum, ascending.
std::vector<int> BestResponseSet(std::span<const double> u);

// A vertex of the best-response face. kUniformOverArgmax draws from `rng`,
// which must then be non-null.
Simplex BestResponse(std::span<const double> u, TieRule rule = TieRule::kLowestIndex,
                     Rng* rng = nullptr);

// argmax_{pi in simplex} <pi, u> - epsilon * h(pi).
Simplex QuantalResponse(std::span<const double> u, const Regularizer& reg);

// Euclidean projection onto the probability simplex (sorted-threshold method).
std::vector<double> ProjectOntoSimplex(std::span<const double> x);

// Nearest point of `set` in Euclidean norm.
std::vector<double> EuclideanProject(std::span<const double> x, const ActionSet& set);

// argmax_{a in set} <y, a> - epsilon * h(a). Entropy is only defined on
// simplex sets.
std::vector<double> MirrorMap(std::span<const double> y, const Regularizer& reg,
                              const ActionSet& set);

}  // namespace nashflow
