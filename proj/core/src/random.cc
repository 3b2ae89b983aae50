#include "nashflow/random.h"

namespace nashflow {
namespace {

// splitmix64 finalizer.
std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::Stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
  std::uint64_t h = Mix(seed + 0x9e3779b97f4a7c15ULL);
  for (std::uint64_t k : keys) {
    h = Mix(h ^ Mix(k + 0x632be59bd9b4e019ULL));
  }
  return Rng(h);
}

Rng::result_type Rng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return Mix(state_);
}

double Rng::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

int Rng::Categorical(const std::vector<double>& probs) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double target = Uniform() * total;
  double acc = 0.0;
  int last_positive = 0;
  for (int a = 0; a < static_cast<int>(probs.size()); ++a) {
    if (probs[a] <= 0.0) continue;
    last_positive = a;
    acc += probs[a];
    if (target < acc) return a;
  }
  return last_positive;
}

}  // namespace nashflow
