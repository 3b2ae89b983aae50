#include "nashflow/simplex.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "nashflow/errors.h"

namespace nashflow {

Simplex::Simplex(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw InvalidInputError("simplex must have at least one entry");
  }
  bool clamped = false;
  double sum = 0.0;
  for (double& p : probs_) {
    if (!std::isfinite(p)) throw InvalidInputError("simplex entry is not finite");
    if (p < 0.0) {
      if (p < -kSimplexTolerance) {
        throw InvalidInputError("simplex entry " + std::to_string(p) +
                                " is negative");
      }
      p = 0.0;
      clamped = true;
    }
    sum += p;
  }
  const double drift = std::abs(sum - 1.0);
  if (drift > kSimplexTolerance) {
    throw InvalidInputError("simplex entries sum to " + std::to_string(sum));
  }
  if (clamped || drift > 1e-12) {
    for (double& p : probs_) p /= sum;
  }
}

Simplex Simplex::Uniform(std::size_t n) {
  if (n == 0) throw InvalidInputError("simplex must have at least one entry");
  return Simplex(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Simplex Simplex::Vertex(std::size_t n, std::size_t action) {
  if (action >= n) throw InvalidInputError("vertex index out of range");
  std::vector<double> v(n, 0.0);
  v[action] = 1.0;
  return Simplex(std::move(v));
}

Simplex Mix(const Simplex& from, const Simplex& to, double weight) {
  if (from.size() != to.size()) {
    throw InvalidInputError("cannot mix simplices of different size");
  }
  std::vector<double> out(from.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = (1.0 - weight) * from[a] + weight * to[a];
  }
  return Simplex(std::move(out));
}

Simplex EnsureFloor(const Simplex& s, double floor) {
  const double lowest = *std::min_element(s.begin(), s.end());
  if (lowest >= floor) return s;
  const double m = static_cast<double>(s.size());
  std::vector<double> out(s.size());
  for (std::size_t a = 0; a < out.size(); ++a) {
    out[a] = (1.0 - m * floor) * s[a] + floor;
  }
  return Simplex(std::move(out));
}

double L1Distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInputError("dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d += std::abs(a[i] - b[i]);
  return d;
}

double LinfDistance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InvalidInputError("dimension mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double ProfileLinfDistance(const Profile& a, const Profile& b) {
  if (a.size() != b.size()) throw InvalidInputError("profile size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, LinfDistance(a[i].probs(), b[i].probs()));
  }
  return d;
}

Profile UniformProfile(const std::vector<int>& action_counts) {
  Profile p;
  p.reserve(action_counts.size());
  for (int m : action_counts) p.push_back(Simplex::Uniform(static_cast<std::size_t>(m)));
  return p;
}

Profile ToProfile(const std::vector<std::vector<double>>& strategies) {
  Profile p;
  p.reserve(strategies.size());
  for (const auto& s : strategies) p.emplace_back(s);
  return p;
}

std::vector<std::vector<double>> ToVectors(const Profile& profile) {
  std::vector<std::vector<double>> out;
  out.reserve(profile.size());
  for (const auto& s : profile) out.push_back(s.values());
  return out;
}

}  // namespace nashflow
