#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nashflow {

// Entries must sum to one within this absolute tolerance.
inline constexpr double kSimplexTolerance = 1e-9;

// Probability vector over a finite action set; the strategy type used by every
// finite-game learner, flow and equilibrium check.
//
// Construction validates the vector. Sums off by at most kSimplexTolerance
// are renormalized; sums within 1e-12 of one are stored bit-for-bit so that
// identity updates stay exact. Tiny negative entries (>= -kSimplexTolerance)
// are clamped to zero.
class Simplex {
 public:
  explicit Simplex(std::vector<double> probs);

  static Simplex Uniform(std::size_t n);
  static Simplex Vertex(std::size_t n, std::size_t action);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t a) const { return probs_[a]; }
  std::span<const double> probs() const { return probs_; }
  const std::vector<double>& values() const { return probs_; }

  auto begin() const { return probs_.begin(); }
  auto end() const { return probs_.end(); }

  bool operator==(const Simplex&) const = default;

 private:
  std::vector<double> probs_;
};

// One simplex per player.
using Profile = std::vector<Simplex>;

// (1 - weight) * from + weight * to.
Simplex Mix(const Simplex& from, const Simplex& to, double weight);

// Returns s unchanged when every entry is at least `floor`; otherwise mixes in
// uniform exploration: (1 - m * floor) * s + floor.
Simplex EnsureFloor(const Simplex& s, double floor);

double L1Distance(std::span<const double> a, std::span<const double> b);
double LinfDistance(std::span<const double> a, std::span<const double> b);

// Max-abs distance over the concatenation of all players' strategies.
double ProfileLinfDistance(const Profile& a, const Profile& b);

Profile UniformProfile(const std::vector<int>& action_counts);
Profile ToProfile(const std::vector<std::vector<double>>& strategies);
std::vector<std::vector<double>> ToVectors(const Profile& profile);

}  // namespace nashflow
