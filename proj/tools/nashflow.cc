// nashflow command line front end.
//
// Exit codes: 0 success, 1 configuration or input error, 2 runtime failure,
// 3 numeric divergence.

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "nashflow/apt.h"
#include "nashflow/equilibrium.h"
#include "nashflow/errors.h"
#include "nashflow/experiment.h"
#include "nashflow/flows.h"
#include "nashflow/netapps/dml.h"
#include "nashflow/netapps/grid.h"
#include "nashflow/netapps/routing.h"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitDivergence = 3;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nashflow::InvalidInputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw nashflow::Error("failed to write " + path.string());
}

// Writes to `path`, or stdout when path is empty or "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

void ConfigureLogging() {
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("NASHFLOW_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

std::vector<std::uint64_t> ReadSeeds(const std::string& path) {
  std::istringstream in(ReadFile(path));
  std::vector<std::uint64_t> seeds;
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') {
      std::getline(in, tok);
      continue;
    }
    try {
      std::size_t used = 0;
      seeds.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw nashflow::ConfigError({path + ": bad seed '" + tok + "'"});
    }
  }
  if (seeds.empty()) throw nashflow::ConfigError({path + ": no seeds"});
  return seeds;
}

// ---------------------------------------------------------------------- run

struct RunArgs {
  std::string config;
  std::string outdir = "out";
  std::string sweep;
  int jobs = 1;
};

int CmdRun(const RunArgs& a) {
  const auto config = nashflow::ParseConfig(ReadFile(a.config));
  const fs::path out(a.outdir);
  fs::create_directories(out);
  WriteFile(out / "effective_config.json", nashflow::EffectiveConfigJson(config) + "\n");
  if (a.sweep.empty()) {
    spdlog::info("run {} seed {} rounds {}", config.run_id, config.seed, config.rounds);
    const auto r = nashflow::RunExperiment(config, out);
    spdlog::info("wrote {} and {}", r.csv.string(), r.summary.string());
    return 0;
  }

  const auto seeds = ReadSeeds(a.sweep);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::vector<std::string> failures;
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      auto c = config;
      c.seed = seeds[i];
      c.run_id = config.run_id + "-s" + std::to_string(seeds[i]);
      try {
        nashflow::RunExperiment(c, out / ("seed-" + std::to_string(seeds[i])));
        spdlog::info("seed {} done", seeds[i]);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(err_mu);
        failures.push_back("seed " + std::to_string(seeds[i]) + ": " + e.what());
      }
    }
  };
  const int jobs = std::max(1, a.jobs);
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& f : failures) std::cerr << "error: " << f << "\n";
  return failures.empty() ? 0 : kExitRuntime;
}

// ----------------------------------------------------------------- check-ne

struct CheckArgs {
  std::string config;
  std::string profile;
  std::string profile_file;
  std::string run_dir;
  bool time_averaged = false;
  long long mvi_samples = 0;
  double vs_radius = -1.0;
  long long vs_samples = 10000;
  std::uint64_t seed = 0;
  double tol = nashflow::kNashTolerance;
};

int CmdCheckNe(const CheckArgs& a) {
  const auto config = nashflow::ParseConfig(ReadFile(a.config));
  const auto game = nashflow::BuildGame(config.game);
  nashflow::Profile profile;
  if (!a.profile.empty()) {
    profile = nashflow::ParseProfile(a.profile);
  } else if (!a.profile_file.empty()) {
    profile = nashflow::ParseProfile(ReadFile(a.profile_file));
  } else if (!a.run_dir.empty()) {
    const auto t = nashflow::ReadTrajectoryCsv(fs::path(a.run_dir) / "trajectory.csv");
    profile = a.time_averaged ? nashflow::TimeAveragedStrategies(t.trajectory)
                              : nashflow::FinalProfile(t.trajectory);
  } else {
    profile = nashflow::UniformProfile(game.action_counts());
  }
  try {
    nashflow::ValidateProfile(game, profile);
  } catch (const nashflow::Error& e) {
    throw nashflow::ConfigError({std::string("profile: ") + e.what()});
  }

  const auto svi = nashflow::SviResidual(game, profile, a.tol);
  ordered_json out;
  out["profile"] = nashflow::ToVectors(profile);
  out["svi_residual"] = svi.residual;
  out["verdict"] = svi.is_epsilon_ne ? "NE" : "not NE";
  out["tolerance"] = a.tol;
  if (svi.witness) {
    out["witness"] = {{"player", svi.witness->player}, {"action", svi.witness->action}};
  }
  nashflow::Rng rng = nashflow::Rng::Stream(a.seed, {static_cast<std::uint64_t>(nashflow::StreamPurpose::kSampling)});
  if (a.mvi_samples > 0) {
    const auto m = nashflow::MviCheck(game, profile, a.mvi_samples, rng, a.tol);
    out["mvi"] = {{"samples", m.samples},
                  {"worst_value", m.worst_value},
                  {"consistent", m.is_epsilon_ne}};
  }
  if (a.vs_radius >= 0.0) {
    const auto v = nashflow::VsProbe(game, profile, a.vs_radius, a.vs_samples, rng, a.tol);
    out["vs_probe"] = {{"radius", a.vs_radius},
                       {"samples", v.samples},
                       {"worst_value", v.worst_value},
                       {"pass", v.is_epsilon_ne}};
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int CmdEnumerateNe(const std::string& config_path) {
  const auto config = nashflow::ParseConfig(ReadFile(config_path));
  const auto game = nashflow::BuildGame(config.game);
  const auto eqs = nashflow::EnumeratePureNash(game);
  std::cout << eqs.size() << " pure equilibri" << (eqs.size() == 1 ? "um" : "a") << "\n";
  for (const auto& e : eqs) {
    std::cout << "(";
    for (std::size_t i = 0; i < e.actions.size(); ++i) {
      std::cout << (i ? "," : "") << e.actions[i];
    }
    std::cout << ") " << (e.strict ? "strict" : "weak") << "\n";
  }
  return 0;
}

// --------------------------------------------------------------------- flow

struct FlowArgs {
  std::string config;
  std::string flow = "replicator";
  std::string start;
  std::string out;
  double t_end = 10.0;
  double dt = 1e-3;
  long long stride = 100;
  bool euler = false;
};

nashflow::Regularizer RegularizerOf(const nashflow::ExperimentConfig& c) {
  return c.learners.empty() ? nashflow::Regularizer{} : c.learners.front().regularizer;
}

int CmdFlow(const FlowArgs& a) {
  const auto config = nashflow::ParseConfig(ReadFile(a.config));
  const auto game = nashflow::BuildGame(config.game);
  const auto flow = nashflow::MakeFlow(a.flow, game, RegularizerOf(config));
  nashflow::Profile start;
  if (!a.start.empty()) {
    start = nashflow::ParseProfile(a.start);
  } else {
    for (int i = 0; i < game.num_players(); ++i) {
      const auto& init = config.learners[i].initial_strategy;
      start.push_back(init ? nashflow::Simplex(*init)
                           : nashflow::Simplex::Uniform(game.num_actions(i)));
    }
  }
  nashflow::ValidateProfile(game, start);
  if (a.stride < 1) throw nashflow::ConfigError({"--stride: must be positive"});
  const auto traj =
      nashflow::Integrate(*flow, flow->Lift(start), a.t_end, a.dt,
                          a.euler ? nashflow::IntegrationMethod::kEuler
                                  : nashflow::IntegrationMethod::kRk4,
                          a.stride);
  std::string csv = "t,player,component,value\n";
  for (std::size_t s = 0; s < traj.times.size(); ++s) {
    const auto pi = flow->Strategy(traj.states[s]);
    const std::string t = nashflow::FormatDouble(traj.times[s]);
    for (std::size_t i = 0; i < pi.size(); ++i) {
      for (std::size_t c = 0; c < pi[i].size(); ++c) {
        csv += t + ',' + std::to_string(i) + ',' + std::to_string(c) + ',' +
               nashflow::FormatDouble(pi[i][c]) + '\n';
      }
    }
  }
  Emit(a.out, csv);
  spdlog::info("flow {} {}, max simplex drift {}", flow->name(), traj.metadata,
               traj.max_simplex_drift);
  return 0;
}

// ---------------------------------------------------------------------- apt

struct AptArgs {
  std::string config;
  std::string csv;
  std::string flow = "da_flow";
  std::string out;
  double window = 1.0;
  int anchors = 20;
  double dt = 1e-3;
};

// The step size that moves the strategy of the first player's learner.
nashflow::Schedule StrategyRate(const nashflow::LearnerConfig& l) {
  switch (l.type) {
    case nashflow::LearnerType::kBr:
    case nashflow::LearnerType::kSbr:
      return l.lambda;
    case nashflow::LearnerType::kFp:
      return nashflow::Schedule::InverseK();
    default:
      return l.mu;
  }
}

int CmdApt(const AptArgs& a) {
  const auto config = nashflow::ParseConfig(ReadFile(a.config));
  const auto game = nashflow::BuildGame(config.game);
  const auto run = nashflow::ReadTrajectoryCsv(a.csv);
  if (run.action_counts != game.action_counts()) {
    throw nashflow::ConfigError({"trajectory CSV does not match the game in the config"});
  }
  const auto flow = nashflow::MakeFlow(a.flow, game, RegularizerOf(config));
  const auto rate = StrategyRate(config.learners.front());
  const nashflow::InterpolatedPath path(run.profiles, rate);
  const double last = path.end_time() - a.window;
  if (last <= 0.0 || a.anchors < 1) {
    throw nashflow::ConfigError({"trajectory too short for the requested window"});
  }
  std::vector<double> anchors;
  for (int j = 0; j < a.anchors; ++j) {
    anchors.push_back(a.anchors == 1 ? 0.0 : last * j / (a.anchors - 1));
  }
  const auto report = nashflow::AptDistance(run.profiles, rate, *flow, a.window, anchors, a.dt);
  std::string csv = "t,distance\n";
  for (const auto& p : report.points) {
    csv += nashflow::FormatDouble(p.t) + ',' + nashflow::FormatDouble(p.distance) + '\n';
  }
  csv += std::string("# tracking: ") + (report.tracking ? "true" : "false") + "\n";
  Emit(a.out, csv);
  return 0;
}

// --------------------------------------------------------------------- demo

struct DemoArgs {
  std::string app;
  std::string instance;
  std::string out;
  std::uint64_t seed = 0;
  long long rounds = 10000;
  double epsilon = 0.1;
  std::string learner = "sbr";
  int iters = 1000;
  double hold_prob = 0.5;
  int outer = 200;
  int inner = 200;
};

ordered_json RoutingDemo(const DemoArgs& a) {
  const auto inst = a.instance.empty() ? nashflow::netapps::DemoRoutingInstance()
                                       : nashflow::ParseRoutingInstance(ReadFile(a.instance));
  nashflow::LearnerConfig learner;
  const auto type = nashflow::ParseLearnerType(a.learner);
  if (!type || nashflow::IsContinuousLearner(*type)) {
    throw nashflow::ConfigError({"--learner: unknown finite-game learner '" + a.learner + "'"});
  }
  learner.type = *type;
  learner.regularizer.epsilon = a.epsilon;
  const auto run = nashflow::netapps::RunSecureRouting(inst, learner, a.rounds, a.seed);
  if (!a.out.empty()) {
    WriteFile(fs::path(a.out) / "trajectory.csv",
              nashflow::TrajectoryCsv(run.trajectory, "routing"));
  }
  ordered_json j;
  j["app"] = "routing";
  j["rounds"] = a.rounds;
  j["seed"] = a.seed;
  j["paths"] = run.routing.paths;
  j["jam_actions"] = run.routing.jam_actions;
  j["final_path_distribution"] = run.final_path_distribution;
  j["empirical_path_frequency"] = run.empirical_path_frequency;
  j["final_jammer_distribution"] = nashflow::FinalProfile(run.trajectory)[1].values();
  j["mass_avoiding_jammers"] = run.mass_avoiding_jammers;
  j["mass_off_shortest_path"] = 1.0 - run.final_path_distribution.front();
  return j;
}

ordered_json GridDemo(const DemoArgs& a) {
  const auto inst = a.instance.empty()
                        ? nashflow::netapps::SyntheticGrid(6, nashflow::netapps::GridTopology::kChain,
                                                           a.seed)
                        : nashflow::ParseGridInstance(ReadFile(a.instance));
  ordered_json j;
  j["app"] = "grid";
  j["buses"] = inst.num_buses();
  ordered_json runs = ordered_json::object();
  for (auto algo : {nashflow::netapps::GridAlgorithm::kPua, nashflow::netapps::GridAlgorithm::kRua,
                    nashflow::netapps::GridAlgorithm::kPda}) {
    const auto r = nashflow::netapps::RunGrid(inst, algo, a.iters, a.seed, a.hold_prob);
    runs[nashflow::netapps::GridAlgorithmName(algo)] = {
        {"converged", r.converged},
        {"iterations", r.iterations},
        {"ne_residual", r.ne_residual},
        {"foreign_reads", r.foreign_reads},
        {"injection", r.iterates.back()}};
  }
  j["runs"] = runs;
  return j;
}

ordered_json DmlDemo(const DemoArgs& a) {
  const auto inst = a.instance.empty() ? nashflow::netapps::SyntheticDml(6, 3, 20, a.seed)
                                       : nashflow::ParseDmlInstance(ReadFile(a.instance));
  const auto r = nashflow::netapps::RunDml(inst, a.inner, a.outer, a.seed);
  ordered_json j;
  j["app"] = "dml";
  j["nodes"] = inst.nodes.size();
  j["theta"] = r.theta;
  j["link_weights"] = r.e;
  j["initial_total_utility"] = r.total_utility.front();
  j["final_total_utility"] = r.total_utility.back();
  j["utility_decreases"] = r.utility_decreases;
  return j;
}

int CmdDemo(const DemoArgs& a) {
  ordered_json j;
  if (a.app == "routing") {
    j = RoutingDemo(a);
  } else if (a.app == "grid") {
    j = GridDemo(a);
  } else {
    j = DmlDemo(a);
  }
  if (!a.out.empty()) {
    WriteFile(fs::path(a.out) / "summary.json", j.dump(2) + "\n");
  } else {
    std::cout << j.dump(2) << "\n";
  }
  return 0;
}

template <typename F>
int Guarded(F&& f) {
  try {
    return f();
  } catch (const nashflow::ConfigError& e) {
    std::cerr << "config error:\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v << "\n";
    return kExitConfig;
  } catch (const nashflow::InvalidInputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nashflow::IntegrationError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const nashflow::StepSizeError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace

int main(int argc, char** argv) {
  ConfigureLogging();
  CLI::App app{"learning dynamics in noncooperative games"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "play a repeated game and write trajectory.csv and summary.json");
  run_cmd->add_option("-c,--config", run.config, "experiment JSON")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("-o,--out", run.outdir, "output directory");
  run_cmd->add_option("--sweep", run.sweep, "file of seeds, one run per seed")->check(CLI::ExistingFile);
  run_cmd->add_option("-j,--jobs", run.jobs, "worker threads for --sweep");

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check-ne", "residual of a strategy profile");
  check_cmd->add_option("-c,--config", check.config, "experiment JSON")->required()->check(CLI::ExistingFile);
  auto* g = check_cmd->add_option_group("profile source");
  g->add_option("-p,--profile", check.profile, "profile as JSON, e.g. [[0.5,0.5],[0.5,0.5]]");
  g->add_option("--profile-file", check.profile_file, "file holding the profile JSON");
  g->add_option("--run", check.run_dir, "directory of a previous run");
  g->require_option(0, 1);
  check_cmd->add_flag("--time-averaged", check.time_averaged, "with --run, check the time average");
  check_cmd->add_option("--mvi", check.mvi_samples, "also sample the Minty inequality");
  check_cmd->add_option("--vs-radius", check.vs_radius, "also probe variational stability");
  check_cmd->add_option("--vs-samples", check.vs_samples, "samples for the stability probe");
  check_cmd->add_option("--seed", check.seed, "seed for sampled checks");
  check_cmd->add_option("--tol", check.tol, "equilibrium tolerance");

  std::string enum_config;
  auto* enum_cmd = app.add_subcommand("enumerate-ne", "list pure Nash equilibria");
  enum_cmd->add_option("-c,--config", enum_config, "experiment JSON")->required()->check(CLI::ExistingFile);

  FlowArgs flow;
  auto* flow_cmd = app.add_subcommand("flow", "integrate a mean-field flow; CSV of t,player,component,value");
  flow_cmd->add_option("-c,--config", flow.config, "experiment JSON")->required()->check(CLI::ExistingFile);
  flow_cmd->add_option("-f,--flow", flow.flow, "replicator, da_flow, sbr_flow, sbr_flow_single, br_flow");
  flow_cmd->add_option("--start", flow.start, "initial profile JSON");
  flow_cmd->add_option("-t,--t-end", flow.t_end, "final time");
  flow_cmd->add_option("--dt", flow.dt, "step size");
  flow_cmd->add_option("--stride", flow.stride, "keep every n-th step");
  flow_cmd->add_flag("--euler", flow.euler, "explicit Euler instead of RK4");
  flow_cmd->add_option("-o,--out", flow.out, "output CSV (default stdout)");

  AptArgs apt;
  auto* apt_cmd = app.add_subcommand("apt", "distance between a run and the flow started along it");
  apt_cmd->add_option("-c,--config", apt.config, "experiment JSON of the run")->required()->check(CLI::ExistingFile);
  apt_cmd->add_option("--csv", apt.csv, "trajectory.csv of the run")->required()->check(CLI::ExistingFile);
  apt_cmd->add_option("-f,--flow", apt.flow, "flow name");
  apt_cmd->add_option("-w,--window", apt.window, "comparison window in flow time");
  apt_cmd->add_option("-n,--anchors", apt.anchors, "number of anchor times");
  apt_cmd->add_option("--dt", apt.dt, "integration step");
  apt_cmd->add_option("-o,--out", apt.out, "output CSV (default stdout)");

  DemoArgs demo;
  auto* demo_cmd = app.add_subcommand("demo", "network application games");
  demo_cmd->add_option("app", demo.app, "routing, grid or dml")
      ->required()
      ->check(CLI::IsMember({"routing", "grid", "dml"}));
  demo_cmd->add_option("-i,--instance", demo.instance, "instance JSON (default: built-in)")
      ->check(CLI::ExistingFile);
  demo_cmd->add_option("-o,--out", demo.out, "output directory (default: summary to stdout)");
  demo_cmd->add_option("--seed", demo.seed, "seed");
  demo_cmd->add_option("--rounds", demo.rounds, "routing: rounds");
  demo_cmd->add_option("--epsilon", demo.epsilon, "routing: regularizer weight");
  demo_cmd->add_option("--learner", demo.learner, "routing: learner type");
  demo_cmd->add_option("--iters", demo.iters, "grid: iteration cap");
  demo_cmd->add_option("--hold-prob", demo.hold_prob, "grid: RUA hold probability");
  demo_cmd->add_option("--outer", demo.outer, "dml: outer iterations");
  demo_cmd->add_option("--inner", demo.inner, "dml: inner iterations");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  if (*run_cmd) return Guarded([&] { return CmdRun(run); });
  if (*check_cmd) return Guarded([&] { return CmdCheckNe(check); });
  if (*enum_cmd) return Guarded([&] { return CmdEnumerateNe(enum_config); });
  if (*flow_cmd) return Guarded([&] { return CmdFlow(flow); });
  if (*apt_cmd) return Guarded([&] { return CmdApt(apt); });
  return Guarded([&] { return CmdDemo(demo); });
}
