#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "cdsim/primitives.hpp"

namespace cdsim::experiment {

enum class GameKind : std::uint8_t {
  PkeCd,
  ReusableSkeCd,
  CcPkeCd,
  CutAndChoose,
  AmplifiedHardcore,
};

std::string game_name(GameKind kind);
GameKind parse_game(const std::string& name);

struct ExperimentConfig {
  GameKind scheme = GameKind::PkeCd;
  int n = 4;               // instance-count parameter for cc / games
  int preimage_bits = 4;   // w
  std::size_t message_bits = 4;
  int lambda_bits = 128;
  primitives::PkeSchemeId base = primitives::PkeSchemeId::TestStub;
  std::uint64_t trials = 1000;
  std::uint64_t seed = 1;
  std::string strategy = "honest-deleter";

  void validate() const;
};

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double p) const { return low <= p && p <= high; }
};

// 95% Wilson score interval.
WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials);

using Report = nlohmann::ordered_json;

// Deterministic given the config: per-trial seeds are derived from
// (seed, trial index); trials run in parallel and the report is assembled in
// trial order.
Report run_experiment(const ExperimentConfig& config);

std::string render_report(const Report& report);

std::vector<std::string> strategies_for(GameKind kind);

}  // namespace cdsim::experiment
