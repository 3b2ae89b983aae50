#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nashflow/continuous_game.h"

namespace nashflow::netapps {

// DC microgrid with slack bus removed. Every bus is a player choosing its
// renewable injection p_i^g in [0, cap_i].
struct GridInstance {
  std::vector<std::vector<double>> s;  // symmetric sensitivity matrix
  std::vector<double> load;            // p^l
  std::vector<double> cap;             // upper injection bound
  std::vector<double> unit_cost;       // c_i
  double price = 1.0;                  // market price c
  std::vector<double> weight;          // r_i

  int num_buses() const { return static_cast<int>(load.size()); }
};

// Throws InvalidInputError for malformed data and ConfigError for instances
// without a finite best response (r_i = 0 or s_ii <= 0).
void ValidateGridInstance(const GridInstance& inst);

enum class GridTopology { kChain, kRing };

// Sensitivity from a synthetic line network: s = (B + ground * I)^-1 where B is
// the weighted Laplacian of the chain or ring. Loads, caps and costs are drawn
// from `seed`.
GridInstance SyntheticGrid(int buses, GridTopology topology, std::uint64_t seed,
                           double ground = 4.0);

// theta_i = sum_j s_ij (p_j^g - p_j^l).
std::vector<double> PhaseAngles(const GridInstance& inst, const std::vector<double>& injection);

double GridUtility(const GridInstance& inst, const std::vector<double>& injection, int bus);
// d u_i / d p_i^g = -c_i + c - r_i^2 theta_i s_ii.
double GridGradient(const GridInstance& inst, const std::vector<double>& injection, int bus);

ContinuousGame BuildGridGame(const GridInstance& inst);

// Physical layer seen by the update schemes. Reading another bus's injection
// is logged so tests can confirm which schemes need it.
class GridSimulator {
 public:
  GridSimulator(const GridInstance& inst, std::vector<double> injection);

  // Measured phase angle at `bus` (what a PMU reports).
  double MeasureTheta(int bus) const;
  // Injection of `bus` as read by `reader`.
  double ReadInjection(int bus, int reader) const;
  // A bus sets its own injection.
  void SetInjection(int bus, double value);

  const std::vector<double>& injection() const { return injection_; }
  std::int64_t foreign_reads() const { return foreign_reads_; }

 private:
  const GridInstance& inst_;
  std::vector<double> injection_;
  mutable std::int64_t foreign_reads_ = 0;
};

// Clipped best response given the off-diagonal part of theta_i.
double GridBestResponse(const GridInstance& inst, int bus, double rest);

// Best response using only the local measurement theta_i and own injection.
double GridBestResponseFromTheta(const GridInstance& inst, int bus, double theta,
                                 double own_injection);

enum class GridAlgorithm { kPua, kRua, kPda };

struct GridRun {
  std::vector<std::vector<double>> iterates;  // iterates[0] is the start
  bool converged = false;
  int iterations = 0;
  double ne_residual = 0.0;
  std::int64_t foreign_reads = 0;
};

// Iterates until every bus is within `tol` of its best response or `iters` is
// reached. RUA updates each bus with probability 1 - hold_prob per iteration.
GridRun RunGrid(const GridInstance& inst, GridAlgorithm algo, int iters, std::uint64_t seed,
                double hold_prob = 0.0, double tol = 1e-10,
                std::vector<double> start = {});

std::string GridAlgorithmName(GridAlgorithm a);

}  // namespace nashflow::netapps
