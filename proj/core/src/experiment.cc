#include "nashflow/experiment.h"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nashflow/equilibrium.h"
#include "nashflow/errors.h"

namespace nashflow {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

// Accumulates schema violations as "<pointer>: <message>".
class Violations {
 public:
  void Add(const std::string& path, const std::string& msg) {
    list_.push_back((path.empty() ? "/" : path) + ": " + msg);
  }
  bool empty() const { return list_.empty(); }
  std::size_t size() const { return list_.size(); }
  void ThrowIfAny() const {
    if (!list_.empty()) throw ConfigError(list_);
  }

 private:
  std::vector<std::string> list_;
};

void CheckKeys(const json& obj, const std::string& path,
               std::initializer_list<const char*> allowed, Violations& v) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) v.Add(path + "/" + it.key(), "unknown field");
  }
}

std::optional<double> Number(const json& obj, const std::string& key, const std::string& path,
                             Violations& v) {
  if (!obj.contains(key)) return std::nullopt;
  const auto& x = obj[key];
  if (!x.is_number()) {
    v.Add(path + "/" + key, "expected a number");
    return std::nullopt;
  }
  const double d = x.get<double>();
  if (!std::isfinite(d)) {
    v.Add(path + "/" + key, "must be finite");
    return std::nullopt;
  }
  return d;
}

double NumberOr(const json& obj, const std::string& key, const std::string& path, double dflt,
                Violations& v) {
  return Number(obj, key, path, v).value_or(dflt);
}

std::optional<long long> Integer(const json& obj, const std::string& key,
                                 const std::string& path, Violations& v) {
  if (!obj.contains(key)) return std::nullopt;
  const auto& x = obj[key];
  if (!x.is_number_integer()) {
    v.Add(path + "/" + key, "expected an integer");
    return std::nullopt;
  }
  return x.get<long long>();
}

std::optional<std::string> String(const json& obj, const std::string& key,
                                  const std::string& path, Violations& v) {
  if (!obj.contains(key)) return std::nullopt;
  if (!obj[key].is_string()) {
    v.Add(path + "/" + key, "expected a string");
    return std::nullopt;
  }
  return obj[key].get<std::string>();
}

std::optional<std::vector<int>> IntArray(const json& obj, const std::string& key,
                                         const std::string& path, Violations& v) {
  if (!obj.contains(key)) return std::nullopt;
  const auto& x = obj[key];
  if (!x.is_array()) {
    v.Add(path + "/" + key, "expected an array of integers");
    return std::nullopt;
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_number_integer()) {
      v.Add(path + "/" + key + "/" + std::to_string(i), "expected an integer");
      return std::nullopt;
    }
    out.push_back(x[i].get<int>());
  }
  return out;
}

std::optional<std::vector<double>> NumberArray(const json& x, const std::string& path,
                                               Violations& v) {
  if (!x.is_array()) {
    v.Add(path, "expected an array of numbers");
    return std::nullopt;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i].is_number()) {
      v.Add(path + "/" + std::to_string(i), "expected a number");
      return std::nullopt;
    }
    out.push_back(x[i].get<double>());
  }
  return out;
}

// ------------------------------------------------------------------ schedule

ordered_json ScheduleJson(const Schedule& s) {
  switch (s.kind) {
    case Schedule::Kind::kConstant:
      return {{"kind", "constant"}, {"value", s.constant}};
    case Schedule::Kind::kInverseK:
      return {{"kind", "inverse_k"}};
    case Schedule::Kind::kInversePow:
      return {{"kind", "inverse_pow"}, {"p", s.power}};
  }
  return {};
}

std::optional<Schedule> ParseSchedule(const json& x, const std::string& path, bool strategy_rate,
                                      Violations& v) {
  if (!x.is_object()) {
    v.Add(path, "expected a schedule object");
    return std::nullopt;
  }
  CheckKeys(x, path, {"kind", "value", "p"}, v);
  const auto kind = String(x, "kind", path, v);
  if (!kind) {
    v.Add(path + "/kind", "missing schedule kind");
    return std::nullopt;
  }
  Schedule s;
  if (*kind == "constant") {
    const auto c = Number(x, "value", path, v);
    if (!c) {
      v.Add(path + "/value", "constant schedule needs a value");
      return std::nullopt;
    }
    s = Schedule::Constant(*c);
  } else if (*kind == "inverse_k") {
    s = Schedule::InverseK();
  } else if (*kind == "inverse_pow") {
    s = Schedule::InversePow(NumberOr(x, "p", path, 0.6, v));
  } else {
    v.Add(path + "/kind", "unknown schedule kind '" + *kind + "'");
    return std::nullopt;
  }
  try {
    ValidateSchedule(s, strategy_rate);
  } catch (const Error& e) {
    v.Add(path, e.what());
    return std::nullopt;
  }
  return s;
}

// ------------------------------------------------------------------ learner

std::string TieRuleName(TieRule r) {
  return r == TieRule::kLowestIndex ? "lowest_index" : "uniform_over_argmax";
}

std::string RegularizerName(RegularizerKind k) {
  return k == RegularizerKind::kEntropy ? "entropy" : "euclidean";
}

ordered_json LearnerJson(const LearnerConfig& c) {
  ordered_json j;
  j["type"] = LearnerTypeName(c.type);
  j["regularizer"] = {{"kind", RegularizerName(c.regularizer.kind)},
                      {"epsilon", c.regularizer.epsilon}};
  j["mu"] = ScheduleJson(c.mu);
  j["lambda"] = ScheduleJson(c.lambda);
  j["tie_rule"] = TieRuleName(c.tie_rule);
  j["estimator"] = EstimatorName(c.estimator);
  j["p_floor"] = c.p_floor;
  if (c.initial_strategy) j["initial_strategy"] = *c.initial_strategy;
  return j;
}

std::optional<LearnerConfig> ParseLearner(const json& x, const std::string& path,
                                          int num_actions, Violations& v) {
  if (!x.is_object()) {
    v.Add(path, "expected a learner object");
    return std::nullopt;
  }
  const std::size_t before = v.size();
  CheckKeys(x, path,
            {"type", "regularizer", "mu", "lambda", "tie_rule", "estimator", "p_floor",
             "initial_strategy"},
            v);
  LearnerConfig c;
  const auto type = String(x, "type", path, v);
  if (!type) {
    v.Add(path + "/type", "missing learner type");
  } else if (auto t = ParseLearnerType(*type)) {
    c.type = *t;
    if (IsContinuousLearner(c.type)) {
      v.Add(path + "/type", "'" + *type + "' is a continuous-game learner");
    }
  } else {
    v.Add(path + "/type", "unknown learner type '" + *type + "'");
  }
  if (x.contains("regularizer")) {
    const auto& r = x["regularizer"];
    const std::string rp = path + "/regularizer";
    if (!r.is_object()) {
      v.Add(rp, "expected an object");
    } else {
      CheckKeys(r, rp, {"kind", "epsilon"}, v);
      const auto kind = String(r, "kind", rp, v).value_or("entropy");
      if (kind == "entropy") {
        c.regularizer.kind = RegularizerKind::kEntropy;
      } else if (kind == "euclidean") {
        c.regularizer.kind = RegularizerKind::kSquaredEuclidean;
      } else {
        v.Add(rp + "/kind", "unknown regularizer '" + kind + "'");
      }
      c.regularizer.epsilon = NumberOr(r, "epsilon", rp, 0.1, v);
      if (!(c.regularizer.epsilon > 0.0)) v.Add(rp + "/epsilon", "must be positive");
    }
  }
  if (x.contains("mu")) {
    if (auto s = ParseSchedule(x["mu"], path + "/mu", false, v)) c.mu = *s;
  }
  if (x.contains("lambda")) {
    if (auto s = ParseSchedule(x["lambda"], path + "/lambda", true, v)) c.lambda = *s;
  }
  if (auto tr = String(x, "tie_rule", path, v)) {
    if (*tr == "lowest_index") {
      c.tie_rule = TieRule::kLowestIndex;
    } else if (*tr == "uniform_over_argmax") {
      c.tie_rule = TieRule::kUniformOverArgmax;
    } else {
      v.Add(path + "/tie_rule", "unknown tie rule '" + *tr + "'");
    }
  }
  if (auto es = String(x, "estimator", path, v)) {
    if (auto e = ParseEstimator(*es)) {
      c.estimator = *e;
    } else {
      v.Add(path + "/estimator", "unknown estimator '" + *es + "'");
    }
  }
  c.p_floor = NumberOr(x, "p_floor", path, kDefaultProbabilityFloor, v);
  if (!(c.p_floor > 0.0) || (num_actions > 0 && c.p_floor * num_actions >= 1.0)) {
    v.Add(path + "/p_floor", "must lie in (0, 1/m)");
  }
  if (x.contains("initial_strategy")) {
    const std::string ip = path + "/initial_strategy";
    if (auto s = NumberArray(x["initial_strategy"], ip, v)) {
      if (num_actions > 0 && static_cast<int>(s->size()) != num_actions) {
        v.Add(ip, "expected " + std::to_string(num_actions) + " entries, got " +
                      std::to_string(s->size()));
      } else {
        try {
          Simplex check(*s);
          c.initial_strategy = *s;
        } catch (const Error& e) {
          v.Add(ip, e.what());
        }
      }
    }
  }
  if ((c.type == LearnerType::kBr || c.type == LearnerType::kSbr) && v.size() == before) {
    try {
      TwoTimescale check(c.mu, c.lambda);
    } catch (const Error& e) {
      v.Add(path, e.what());
    }
  }
  if (v.size() != before) return std::nullopt;
  return c;
}

// ----------------------------------------------------------------- feedback

ordered_json FeedbackJson(const FeedbackConfig& f) {
  ordered_json j;
  switch (f.kind.scope) {
    case FeedbackScope::kGlobal:
      j["kind"] = "global";
      break;
    case FeedbackScope::kIndividual:
      j["kind"] = "individual";
      break;
    case FeedbackScope::kLocal: {
      j["kind"] = "local";
      ordered_json edges = ordered_json::array();
      for (auto [a, b] : f.kind.graph->Edges()) edges.push_back({a, b});
      j["graph"] = {{"edges", edges}};
      break;
    }
  }
  switch (f.noise.kind) {
    case NoiseKind::kNone:
      j["noise"] = {{"type", "none"}};
      break;
    case NoiseKind::kUniform:
      j["noise"] = {{"type", "uniform"}, {"half_width", f.noise.half_width}};
      break;
    case NoiseKind::kGaussianTruncated:
      j["noise"] = {{"type", "gaussian_truncated"},
                    {"sigma", f.noise.sigma},
                    {"clip", f.noise.clip}};
      break;
  }
  const auto& t = f.temporal;
  if (t.is_perfect()) {
    j["temporal"] = {{"type", "perfect"}};
  } else if (t.delay == 0) {
    j["temporal"] = {{"type", "windowed"}, {"m", t.window}};
  } else if (t.window == 0) {
    j["temporal"] = {{"type", "delayed"}, {"m", t.delay}};
  } else {
    j["temporal"] = {{"type", "delayed_windowed"}, {"delay", t.delay}, {"window", t.window}};
  }
  return j;
}

FeedbackConfig ParseFeedback(const json& x, const std::string& path, int n, Violations& v) {
  FeedbackConfig f;
  if (!x.is_object()) {
    v.Add(path, "expected a feedback object");
    return f;
  }
  CheckKeys(x, path, {"kind", "graph", "noise", "temporal"}, v);
  const auto kind = String(x, "kind", path, v).value_or("individual");
  if (kind == "global") {
    f.kind = FeedbackKind::Global();
  } else if (kind == "individual") {
    f.kind = FeedbackKind::Individual();
  } else if (kind == "local") {
    const std::string gp = path + "/graph";
    if (!x.contains("graph")) {
      v.Add(gp, "local feedback requires a graph");
    } else {
      const auto& g = x["graph"];
      try {
        if (g.is_string()) {
          const auto name = g.get<std::string>();
          if (name == "path") {
            f.kind = FeedbackKind::Local(PlayerGraph::Path(n));
          } else if (name == "complete") {
            f.kind = FeedbackKind::Local(PlayerGraph::Complete(n));
          } else if (name == "empty") {
            f.kind = FeedbackKind::Local(PlayerGraph::Empty(n));
          } else {
            v.Add(gp, "unknown graph '" + name + "'");
          }
        } else if (g.is_object() && g.contains("edges") && g["edges"].is_array()) {
          std::vector<std::pair<int, int>> edges;
          for (std::size_t e = 0; e < g["edges"].size(); ++e) {
            const auto& pair = g["edges"][e];
            if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() ||
                !pair[1].is_number_integer()) {
              v.Add(gp + "/edges/" + std::to_string(e), "expected [a, b]");
              continue;
            }
            edges.emplace_back(pair[0].get<int>(), pair[1].get<int>());
          }
          f.kind = FeedbackKind::Local(PlayerGraph(n, edges));
        } else {
          v.Add(gp, "expected a graph name or {\"edges\": [...]}");
        }
      } catch (const Error& e) {
        v.Add(gp, e.what());
      }
    }
  } else {
    v.Add(path + "/kind", "unknown feedback kind '" + kind + "'");
  }
  if (x.contains("noise")) {
    const auto& nz = x["noise"];
    const std::string np = path + "/noise";
    if (!nz.is_object()) {
      v.Add(np, "expected an object");
    } else {
      CheckKeys(nz, np, {"type", "half_width", "sigma", "clip"}, v);
      const auto type = String(nz, "type", np, v).value_or("none");
      if (type == "none") {
        f.noise = NoiseModel::None();
      } else if (type == "uniform") {
        f.noise = NoiseModel::Uniform(NumberOr(nz, "half_width", np, 0.5, v));
      } else if (type == "gaussian_truncated") {
        f.noise = NoiseModel::GaussianTruncated(NumberOr(nz, "sigma", np, 1.0, v),
                                                NumberOr(nz, "clip", np, 4.0, v));
      } else {
        v.Add(np + "/type", "unknown noise type '" + type + "'");
      }
      try {
        ValidateNoiseModel(f.noise);
      } catch (const Error& e) {
        v.Add(np, e.what());
      }
    }
  }
  if (x.contains("temporal")) {
    const auto& t = x["temporal"];
    const std::string tp = path + "/temporal";
    if (!t.is_object()) {
      v.Add(tp, "expected an object");
    } else {
      CheckKeys(t, tp, {"type", "m", "delay", "window"}, v);
      const auto type = String(t, "type", tp, v).value_or("perfect");
      auto positive = [&](const char* key) {
        const auto m = Integer(t, key, tp, v);
        if (!m || *m < 1) {
          v.Add(tp + "/" + key, "must be a positive integer");
          return 1;
        }
        return static_cast<int>(*m);
      };
      if (type == "perfect") {
        f.temporal = TemporalFilter::Perfect();
      } else if (type == "windowed") {
        f.temporal = TemporalFilter::Windowed(positive("m"));
      } else if (type == "delayed") {
        f.temporal = TemporalFilter::Delayed(positive("m"));
      } else if (type == "delayed_windowed") {
        f.temporal = TemporalFilter{positive("window"), positive("delay")};
      } else {
        v.Add(tp + "/type", "unknown temporal filter '" + type + "'");
      }
    }
  }
  return f;
}

// --------------------------------------------------------------------- game

ordered_json RoutingInstanceJson(const netapps::RoutingInstance& r) {
  ordered_json edges = ordered_json::array();
  for (const auto& e : r.edges) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"q", e.success}, {"tau", e.delay}});
  }
  return {{"nodes", r.num_nodes},   {"edges", edges},
          {"source", r.source},     {"destination", r.destination},
          {"max_paths", r.max_paths}, {"jammers", r.jammer_nodes},
          {"lambda", r.tradeoff},   {"degradation", r.degradation}};
}

netapps::RoutingInstance RoutingFromJson(const json& x, const std::string& path, Violations& v) {
  netapps::RoutingInstance r;
  if (!x.is_object()) {
    v.Add(path, "expected a routing instance object");
    return r;
  }
  CheckKeys(x, path,
            {"nodes", "edges", "source", "destination", "max_paths", "jammers", "lambda",
             "degradation"},
            v);
  r.num_nodes = static_cast<int>(Integer(x, "nodes", path, v).value_or(0));
  r.source = static_cast<int>(Integer(x, "source", path, v).value_or(0));
  r.destination = static_cast<int>(Integer(x, "destination", path, v).value_or(r.num_nodes - 1));
  r.max_paths = static_cast<int>(Integer(x, "max_paths", path, v).value_or(8));
  r.tradeoff = NumberOr(x, "lambda", path, 0.0, v);
  r.degradation = NumberOr(x, "degradation", path, 0.1, v);
  if (!x.contains("edges") || !x["edges"].is_array()) {
    v.Add(path + "/edges", "expected an array of edges");
  } else {
    for (std::size_t e = 0; e < x["edges"].size(); ++e) {
      const auto& ed = x["edges"][e];
      const std::string ep = path + "/edges/" + std::to_string(e);
      if (!ed.is_object()) {
        v.Add(ep, "expected an edge object");
        continue;
      }
      CheckKeys(ed, ep, {"from", "to", "q", "tau"}, v);
      netapps::RoutingEdge edge;
      edge.from = static_cast<int>(Integer(ed, "from", ep, v).value_or(-1));
      edge.to = static_cast<int>(Integer(ed, "to", ep, v).value_or(-1));
      edge.success = NumberOr(ed, "q", ep, 1.0, v);
      edge.delay = NumberOr(ed, "tau", ep, 0.0, v);
      r.edges.push_back(edge);
    }
  }
  if (x.contains("jammers")) {
    const auto& j = x["jammers"];
    if (!j.is_array()) {
      v.Add(path + "/jammers", "expected an array of node lists");
    } else {
      for (std::size_t k = 0; k < j.size(); ++k) {
        std::vector<int> nodes;
        if (!j[k].is_array()) {
          v.Add(path + "/jammers/" + std::to_string(k), "expected an array of nodes");
          continue;
        }
        for (const auto& node : j[k]) {
          if (node.is_number_integer()) nodes.push_back(node.get<int>());
        }
        r.jammer_nodes.push_back(nodes);
      }
    }
  }
  try {
    netapps::ValidateRoutingInstance(r);
  } catch (const Error& e) {
    v.Add(path, e.what());
  }
  return r;
}

// Fills generator defaults into `params` and returns the built game.
std::optional<FiniteGame> GameFromGenerator(const std::string& name, ordered_json& params,
                                            const std::string& path, Violations& v) {
  const json p = json::parse(params.dump());
  try {
    if (name == "matching_pennies") {
      CheckKeys(p, path, {}, v);
      params = ordered_json::object();
      return MatchingPennies();
    }
    if (name == "rock_paper_scissors") {
      CheckKeys(p, path, {}, v);
      params = ordered_json::object();
      return RockPaperScissors();
    }
    if (name == "prisoners_dilemma") {
      CheckKeys(p, path, {"R", "S", "T", "P"}, v);
      const double r = NumberOr(p, "R", path, 3, v), s = NumberOr(p, "S", path, 0, v),
                   t = NumberOr(p, "T", path, 5, v), pu = NumberOr(p, "P", path, 1, v);
      params = {{"R", r}, {"S", s}, {"T", t}, {"P", pu}};
      return PrisonersDilemma(r, s, t, pu);
    }
    if (name == "coordination") {
      CheckKeys(p, path, {"actions"}, v);
      const int m = static_cast<int>(Integer(p, "actions", path, v).value_or(2));
      params = {{"actions", m}};
      return CoordinationGame(m);
    }
    if (name == "random" || name == "random_potential") {
      CheckKeys(p, path, {"actions", "seed", "lo", "hi", "range"}, v);
      const auto actions = IntArray(p, "actions", path, v).value_or(std::vector<int>{2, 2});
      std::uint64_t seed = 0;
      if (p.contains("seed")) {
        if (p["seed"].is_number_unsigned() ||
            (p["seed"].is_number_integer() && p["seed"].get<long long>() >= 0)) {
          seed = p["seed"].get<std::uint64_t>();
        } else {
          v.Add(path + "/seed", "expected a nonnegative integer");
        }
      }
      Rng rng = Rng::Stream(seed, {static_cast<std::uint64_t>(StreamPurpose::kInstance)});
      if (name == "random") {
        const double lo = NumberOr(p, "lo", path, -1.0, v);
        const double hi = NumberOr(p, "hi", path, 1.0, v);
        params = {{"actions", actions}, {"seed", seed}, {"lo", lo}, {"hi", hi}};
        return RandomGame(actions, rng, lo, hi);
      }
      const int range = static_cast<int>(Integer(p, "range", path, v).value_or(3));
      params = {{"actions", actions}, {"seed", seed}, {"range", range}};
      return RandomPotentialGame(actions, rng, range);
    }
    if (name == "routing") {
      CheckKeys(p, path, {"instance"}, v);
      if (!p.contains("instance")) {
        v.Add(path + "/instance", "routing generator needs an instance");
        return std::nullopt;
      }
      const auto inst = RoutingFromJson(p["instance"], path + "/instance", v);
      if (!v.empty()) return std::nullopt;
      params = {{"instance", RoutingInstanceJson(inst)}};
      return netapps::BuildRoutingGame(inst).game;
    }
  } catch (const Error& e) {
    v.Add(path, e.what());
    return std::nullopt;
  }
  v.Add(path.substr(0, path.rfind('/')) + "/generator", "unknown game generator '" + name + "'");
  return std::nullopt;
}

std::optional<FiniteGame> ParseGame(const json& x, const std::string& path, GameSpec& spec,
                                    Violations& v) {
  if (!x.is_object()) {
    v.Add(path, "expected a game object");
    return std::nullopt;
  }
  if (x.contains("generator")) {
    CheckKeys(x, path, {"generator", "params"}, v);
    const auto name = String(x, "generator", path, v);
    if (!name) return std::nullopt;
    ordered_json params = ordered_json::object();
    if (x.contains("params")) {
      if (!x["params"].is_object()) {
        v.Add(path + "/params", "expected an object");
        return std::nullopt;
      }
      params = ordered_json::parse(x["params"].dump());
    }
    auto game = GameFromGenerator(*name, params, path + "/params", v);
    spec.generator = *name;
    spec.json = ordered_json{{"generator", *name}, {"params", params}}.dump();
    return game;
  }
  CheckKeys(x, path, {"players", "actions", "payoffs"}, v);
  const auto players = Integer(x, "players", path, v);
  const auto actions = IntArray(x, "actions", path, v);
  if (!players) v.Add(path + "/players", "missing player count");
  if (!actions) v.Add(path + "/actions", "missing action counts");
  if (!players || !actions) return std::nullopt;
  if (*players < 1 || static_cast<long long>(actions->size()) != *players) {
    v.Add(path + "/actions", "expected " + std::to_string(*players) + " action counts, got " +
                                 std::to_string(actions->size()));
    return std::nullopt;
  }
  long long joint = 1;
  for (std::size_t i = 0; i < actions->size(); ++i) {
    if ((*actions)[i] < 1) {
      v.Add(path + "/actions/" + std::to_string(i), "action count must be positive");
      return std::nullopt;
    }
    joint *= (*actions)[i];
    if (joint > kMaxJointActions) {
      v.Add(path + "/actions", "joint action count exceeds " + std::to_string(kMaxJointActions));
      return std::nullopt;
    }
  }
  if (!x.contains("payoffs") || !x["payoffs"].is_array()) {
    v.Add(path + "/payoffs", "expected one payoff array per player");
    return std::nullopt;
  }
  const auto& pay = x["payoffs"];
  if (static_cast<long long>(pay.size()) != *players) {
    v.Add(path + "/payoffs", "expected " + std::to_string(*players) + " payoff tensors, got " +
                                 std::to_string(pay.size()));
    return std::nullopt;
  }
  std::vector<std::vector<double>> tensors;
  bool ok = true;
  for (std::size_t i = 0; i < pay.size(); ++i) {
    const std::string pp = path + "/payoffs/" + std::to_string(i);
    auto t = NumberArray(pay[i], pp, v);
    if (!t) {
      ok = false;
      continue;
    }
    if (static_cast<long long>(t->size()) != joint) {
      v.Add(pp, "payoff tensor has length " + std::to_string(t->size()) + ", expected " +
                    std::to_string(joint) + " (product of action counts)");
      ok = false;
      continue;
    }
    tensors.push_back(std::move(*t));
  }
  if (!ok) return std::nullopt;
  try {
    FiniteGame g(*actions, tensors);
    spec.generator = "inline";
    spec.json = ordered_json{{"players", *players}, {"actions", *actions}, {"payoffs", tensors}}
                    .dump();
    return g;
  } catch (const Error& e) {
    v.Add(path + "/payoffs", e.what());
    return std::nullopt;
  }
}

void CheckFeedbackCompatibility(const ExperimentConfig& c, int n, Violations& v) {
  for (int i = 0; i < static_cast<int>(c.learners.size()); ++i) {
    const auto& l = c.learners[i];
    const bool needs_actions =
        l.type == LearnerType::kFp || l.estimator == Estimator::kCounterfactual;
    const bool needs_strategies = l.estimator == Estimator::kExpected;
    if (!needs_actions && !needs_strategies) continue;
    if (needs_strategies && c.feedback.kind.scope != FeedbackScope::kGlobal) {
      v.Add("/learners/" + std::to_string(i),
            "expected-utility estimates need global feedback, which alone reports strategies");
      continue;
    }
    if (c.feedback.kind.scope == FeedbackScope::kLocal && !c.feedback.kind.graph) continue;
    const auto visible = VisiblePlayers(c.feedback.kind, i, n);
    if (static_cast<int>(visible.size()) != n) {
      v.Add("/learners/" + std::to_string(i),
            "this learner needs every opponent's action; feedback hides some");
    }
  }
}

std::string Hex64(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k) {
    s[k] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

double ParseDouble(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw InvalidInputError("malformed number '" + s + "' in trajectory CSV");
  }
  return v;
}

json ParseJsonOrThrow(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("/: malformed JSON: ") + e.what()});
  }
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

ExperimentConfig ParseConfig(const std::string& json_text) {
  const json root = ParseJsonOrThrow(json_text);
  Violations v;
  if (!root.is_object()) {
    v.Add("", "expected a JSON object");
    v.ThrowIfAny();
  }
  CheckKeys(root, "", {"run_id", "seed", "rounds", "game", "learners", "feedback"}, v);
  ExperimentConfig c;
  c.run_id = String(root, "run_id", "", v).value_or("run");
  if (c.run_id.find_first_of(",\n\r") != std::string::npos) {
    v.Add("/run_id", "must not contain commas or line breaks");
  }
  if (root.contains("seed")) {
    const auto& s = root["seed"];
    if (s.is_number_unsigned() || (s.is_number_integer() && s.get<long long>() >= 0)) {
      c.seed = s.get<std::uint64_t>();
    } else {
      v.Add("/seed", "expected an unsigned 64-bit integer");
    }
  }
  if (auto r = Integer(root, "rounds", "", v)) {
    if (*r < 0) v.Add("/rounds", "must be nonnegative");
    c.rounds = *r;
  }
  std::optional<FiniteGame> game;
  if (!root.contains("game")) {
    v.Add("/game", "missing game section");
  } else {
    game = ParseGame(root["game"], "/game", c.game, v);
  }
  const int n = game ? game->num_players() : 0;
  if (game && root.contains("feedback")) {
    c.feedback = ParseFeedback(root["feedback"], "/feedback", n, v);
  }
  if (!root.contains("learners")) {
    v.Add("/learners", "missing learners section");
  } else if (!game) {
    // Still report learner problems; dimension checks need the game.
    const auto& l = root["learners"];
    if (l.is_object()) {
      ParseLearner(l, "/learners", -1, v);
    } else if (l.is_array()) {
      for (std::size_t i = 0; i < l.size(); ++i) {
        ParseLearner(l[i], "/learners/" + std::to_string(i), -1, v);
      }
    }
  } else {
    const auto& l = root["learners"];
    if (l.is_object()) {
      for (int i = 0; i < n; ++i) {
        if (auto lc = ParseLearner(l, "/learners", game->num_actions(i), v)) {
          c.learners.push_back(*lc);
        }
      }
    } else if (l.is_array()) {
      if (static_cast<int>(l.size()) != n) {
        v.Add("/learners", "expected " + std::to_string(n) + " learner configs, got " +
                               std::to_string(l.size()));
      } else {
        for (int i = 0; i < n; ++i) {
          if (auto lc = ParseLearner(l[i], "/learners/" + std::to_string(i),
                                     game->num_actions(i), v)) {
            c.learners.push_back(*lc);
          }
        }
      }
    } else {
      v.Add("/learners", "expected a learner object or an array of them");
    }
  }
  if (game && static_cast<int>(c.learners.size()) == n) CheckFeedbackCompatibility(c, n, v);
  v.ThrowIfAny();
  return c;
}

std::string EffectiveConfigJson(const ExperimentConfig& config) {
  ordered_json j;
  j["run_id"] = config.run_id;
  j["seed"] = config.seed;
  j["rounds"] = config.rounds;
  j["game"] = ordered_json::parse(config.game.json);
  ordered_json learners = ordered_json::array();
  for (const auto& l : config.learners) learners.push_back(LearnerJson(l));
  j["learners"] = learners;
  j["feedback"] = FeedbackJson(config.feedback);
  return j.dump(2);
}

std::string ConfigHash(const ExperimentConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : EffectiveConfigJson(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return Hex64(h);
}

FiniteGame BuildGame(const GameSpec& spec) {
  Violations v;
  GameSpec copy;
  auto g = ParseGame(json::parse(spec.json), "/game", copy, v);
  v.ThrowIfAny();
  return *g;
}

std::string TrajectoryCsv(const Trajectory& t, const std::string& run_id) {
  int width = 0;
  for (int m : t.action_counts) width = std::max(width, m);
  std::string out = "run_id,round,player,action,payoff_raw,payoff_noisy";
  for (int a = 0; a < width; ++a) out += ",p" + std::to_string(a);
  out += '\n';
  for (std::size_t k = 0; k < t.rows.size(); ++k) {
    for (int i = 0; i < t.num_players(); ++i) {
      const auto& r = t.rows[k][i];
      out += run_id;
      out += ',' + std::to_string(k) + ',' + std::to_string(i) + ',';
      if (k > 0) {
        out += std::to_string(r.action) + ',' + FormatDouble(r.payoff_raw) + ',' +
               FormatDouble(r.payoff_noisy);
      } else {
        out += ",,";
      }
      for (int a = 0; a < width; ++a) {
        out += ',';
        if (a < static_cast<int>(r.strategy.size())) out += FormatDouble(r.strategy[a]);
      }
      out += '\n';
    }
  }
  return out;
}

CsvTrajectory ParseTrajectoryCsv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InvalidInputError("trajectory CSV is empty");
  const auto header = SplitCsvLine(line);
  if (header.size() < 7 || header[0] != "run_id" || header[1] != "round" ||
      header[2] != "player" || header[3] != "action") {
    throw InvalidInputError("trajectory CSV header not recognized");
  }
  const int width = static_cast<int>(header.size()) - 6;
  CsvTrajectory out;
  std::vector<std::vector<PlayerRound>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = SplitCsvLine(line);
    if (static_cast<int>(f.size()) != width + 6) {
      throw InvalidInputError("trajectory CSV row has wrong field count");
    }
    out.run_id = f[0];
    const auto k = static_cast<std::size_t>(std::stoll(f[1]));
    const int player = std::stoi(f[2]);
    if (k == rows.size()) rows.emplace_back();
    if (k + 1 != rows.size() || player != static_cast<int>(rows.back().size())) {
      throw InvalidInputError("trajectory CSV rows out of order");
    }
    PlayerRound pr;
    if (!f[3].empty()) {
      pr.action = std::stoi(f[3]);
      pr.payoff_raw = ParseDouble(f[4]);
      pr.payoff_noisy = ParseDouble(f[5]);
    }
    for (int a = 0; a < width && !f[6 + a].empty(); ++a) pr.strategy.push_back(ParseDouble(f[6 + a]));
    rows.back().push_back(std::move(pr));
  }
  if (rows.empty()) throw InvalidInputError("trajectory CSV has no rows");
  for (const auto& pr : rows.front()) out.action_counts.push_back(static_cast<int>(pr.strategy.size()));
  out.trajectory.action_counts = out.action_counts;
  out.trajectory.rows = rows;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != out.action_counts.size()) {
      throw InvalidInputError("trajectory CSV round has missing players");
    }
    out.profiles.push_back(out.trajectory.ProfileAt(static_cast<std::int64_t>(k)));
  }
  return out;
}

CsvTrajectory ReadTrajectoryCsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseTrajectoryCsv(ss.str());
}

std::string SummaryJson(const ExperimentConfig& config, const Trajectory& t,
                        double wall_seconds) {
  const FiniteGame game = BuildGame(config.game);
  const Profile final = FinalProfile(t);
  const Profile avg = TimeAveragedStrategies(t);
  std::vector<std::int64_t> floor_rounds(t.num_players(), 0);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    for (int i = 0; i < t.num_players(); ++i) floor_rounds[i] += t.rows[k][i].floor_applied;
  }
  ordered_json j;
  j["run_id"] = config.run_id;
  j["seed"] = config.seed;
  j["rounds"] = t.rounds();
  j["config_hash"] = ConfigHash(config);
  j["csv_schema"] = kCsvSchema;
  j["players"] = t.num_players();
  j["dynamics"] = t.dynamics;
  j["tie_selection"] = t.tie_selection;
  j["final_strategies"] = ToVectors(final);
  j["final_svi_residual"] = t.svi_residuals.back();
  j["time_averaged_strategies"] = ToVectors(avg);
  j["time_averaged_svi_residual"] = SviResidual(game, avg).residual;
  j["floor_mixing_rounds"] = floor_rounds;
  j["timing"] = {{"wall_seconds", wall_seconds}};
  return j.dump(2) + "\n";
}

RunOutputs RunExperiment(const ExperimentConfig& config, const std::filesystem::path& outdir) {
  const auto start = std::chrono::steady_clock::now();
  const FiniteGame game = BuildGame(config.game);
  RunOutputs out;
  out.trajectory = RunRepeatedGame(game, config.learners, config.feedback, config.rounds,
                                   config.seed);
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::filesystem::create_directories(outdir);
  out.csv = outdir / "trajectory.csv";
  out.summary = outdir / "summary.json";
  {
    std::ofstream f(out.csv, std::ios::binary);
    f << TrajectoryCsv(out.trajectory, config.run_id);
    if (!f) throw Error("failed to write " + out.csv.string());
  }
  {
    std::ofstream f(out.summary, std::ios::binary);
    f << SummaryJson(config, out.trajectory, wall);
    if (!f) throw Error("failed to write " + out.summary.string());
  }
  return out;
}

netapps::RoutingInstance ParseRoutingInstance(const std::string& json_text) {
  const json root = ParseJsonOrThrow(json_text);
  Violations v;
  auto inst = RoutingFromJson(root, "", v);
  v.ThrowIfAny();
  return inst;
}

netapps::GridInstance ParseGridInstance(const std::string& json_text) {
  const json root = ParseJsonOrThrow(json_text);
  Violations v;
  netapps::GridInstance g;
  if (!root.is_object()) {
    v.Add("", "expected a grid instance object");
    v.ThrowIfAny();
  }
  CheckKeys(root, "", {"s", "load", "cap", "unit_cost", "price", "weight"}, v);
  auto vec = [&](const char* key) {
    if (!root.contains(key)) {
      v.Add(std::string("/") + key, "missing");
      return std::vector<double>{};
    }
    return NumberArray(root[key], std::string("/") + key, v).value_or(std::vector<double>{});
  };
  g.load = vec("load");
  g.cap = vec("cap");
  g.unit_cost = vec("unit_cost");
  g.weight = vec("weight");
  g.price = NumberOr(root, "price", "", 1.0, v);
  if (!root.contains("s") || !root["s"].is_array()) {
    v.Add("/s", "expected a matrix");
  } else {
    for (std::size_t i = 0; i < root["s"].size(); ++i) {
      g.s.push_back(NumberArray(root["s"][i], "/s/" + std::to_string(i), v)
                        .value_or(std::vector<double>{}));
    }
  }
  v.ThrowIfAny();
  try {
    netapps::ValidateGridInstance(g);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError({std::string("/: ") + e.what()});
  }
  return g;
}

netapps::DmlInstance ParseDmlInstance(const std::string& json_text) {
  const json root = ParseJsonOrThrow(json_text);
  Violations v;
  netapps::DmlInstance d;
  if (!root.is_object()) {
    v.Add("", "expected a dml instance object");
    v.ThrowIfAny();
  }
  CheckKeys(root, "",
            {"nodes", "dim", "alpha", "beta", "inner_step", "outer_step", "initial_weight",
             "inner_tol"},
            v);
  d.dim = static_cast<int>(Integer(root, "dim", "", v).value_or(1));
  d.alpha = NumberOr(root, "alpha", "", d.alpha, v);
  d.beta = NumberOr(root, "beta", "", d.beta, v);
  d.inner_step = NumberOr(root, "inner_step", "", d.inner_step, v);
  d.outer_step = NumberOr(root, "outer_step", "", d.outer_step, v);
  d.initial_weight = NumberOr(root, "initial_weight", "", d.initial_weight, v);
  d.inner_tol = NumberOr(root, "inner_tol", "", d.inner_tol, v);
  if (!root.contains("nodes") || !root["nodes"].is_array()) {
    v.Add("/nodes", "expected an array of node data");
  } else {
    for (std::size_t i = 0; i < root["nodes"].size(); ++i) {
      const auto& nd = root["nodes"][i];
      const std::string np = "/nodes/" + std::to_string(i);
      netapps::DmlNode node;
      if (!nd.is_object() || !nd.contains("features") || !nd.contains("targets") ||
          !nd["features"].is_array()) {
        v.Add(np, "expected {\"features\": [[...]], \"targets\": [...]}");
        continue;
      }
      for (std::size_t r = 0; r < nd["features"].size(); ++r) {
        node.features.push_back(
            NumberArray(nd["features"][r], np + "/features/" + std::to_string(r), v)
                .value_or(std::vector<double>{}));
      }
      node.targets = NumberArray(nd["targets"], np + "/targets", v).value_or(std::vector<double>{});
      d.nodes.push_back(std::move(node));
    }
  }
  v.ThrowIfAny();
  try {
    netapps::ValidateDmlInstance(d);
  } catch (const Error& e) {
    throw ConfigError({std::string("/: ") + e.what()});
  }
  return d;
}

Profile ParseProfile(const std::string& json_text) {
  const json root = ParseJsonOrThrow(json_text);
  Violations v;
  if (!root.is_array()) {
    v.Add("", "expected an array of strategies");
    v.ThrowIfAny();
  }
  Profile p;
  for (std::size_t i = 0; i < root.size(); ++i) {
    auto s = NumberArray(root[i], "/" + std::to_string(i), v);
    if (!s) continue;
    try {
      p.emplace_back(*s);
    } catch (const Error& e) {
      v.Add("/" + std::to_string(i), e.what());
    }
  }
  v.ThrowIfAny();
  return p;
}

}  // namespace nashflow
