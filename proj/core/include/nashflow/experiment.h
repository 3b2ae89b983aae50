#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nashflow/finite_game.h"
#include "nashflow/learners.h"
#include "nashflow/netapps/dml.h"
#include "nashflow/netapps/grid.h"
#include "nashflow/netapps/routing.h"
#include "nashflow/repeated_game.h"

namespace nashflow {

inline constexpr const char* kCsvSchema = "nashflow.trajectory/1";

// Game section of an experiment: either an inline tensor or a named generator.
struct GameSpec {
  std::string generator;  // "inline" for explicit tensors
  // Effective game section as JSON text (defaults filled in).
  std::string json;
};

struct ExperimentConfig {
  std::string run_id = "run";
  std::uint64_t seed = 0;
  std::int64_t rounds = 1000;
  GameSpec game;
  std::vector<LearnerConfig> learners;  // one per player
  FeedbackConfig feedback;
};

// Parses and validates an experiment document. Collects every violation,
// each prefixed with its JSON pointer, and throws ConfigError if any exist.
ExperimentConfig ParseConfig(const std::string& json_text);

// Canonical JSON of the config with every default spelled out. Reparsing it
// yields the same config.
std::string EffectiveConfigJson(const ExperimentConfig& config);

// 16 hex digits of FNV-1a over the effective config.
std::string ConfigHash(const ExperimentConfig& config);

FiniteGame BuildGame(const GameSpec& spec);

// Trajectory rows as CSV: run_id, round, player, action, payoff_raw,
// payoff_noisy, p0..p{M-1}; M is the largest action count and shorter
// strategies leave trailing fields empty. The initial row has empty
// action and payoff fields.
std::string TrajectoryCsv(const Trajectory& t, const std::string& run_id);

struct CsvTrajectory {
  std::string run_id;
  std::vector<int> action_counts;
  std::vector<Profile> profiles;  // one per round, starting with the initial row
  Trajectory trajectory;
};
CsvTrajectory ParseTrajectoryCsv(const std::string& text);
CsvTrajectory ReadTrajectoryCsv(const std::filesystem::path& path);

// Summary document: final and time-averaged strategies, their residuals,
// dynamics labels, config hash, and a separate timing block.
std::string SummaryJson(const ExperimentConfig& config, const Trajectory& t,
                        double wall_seconds);

struct RunOutputs {
  std::filesystem::path csv;
  std::filesystem::path summary;
  Trajectory trajectory;
};

// Runs the configured repeated game and writes trajectory.csv and
// summary.json into `outdir`.
RunOutputs RunExperiment(const ExperimentConfig& config, const std::filesystem::path& outdir);

// Number formatting used in every output file: 17 significant digits.
std::string FormatDouble(double v);

// Instance documents for the network applications.
netapps::RoutingInstance ParseRoutingInstance(const std::string& json_text);
netapps::GridInstance ParseGridInstance(const std::string& json_text);
netapps::DmlInstance ParseDmlInstance(const std::string& json_text);

// Parses a strategy profile given as a JSON array of arrays.
Profile ParseProfile(const std::string& json_text);

}  // namespace nashflow
