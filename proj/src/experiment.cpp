#include "cdsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "cdsim/cc_pke_cd.hpp"
#include "cdsim/ntcf.hpp"
#include "cdsim/pke_cd.hpp"
#include "cdsim/strategies.hpp"

namespace cdsim::experiment {

namespace {

struct CdOutcome {
  Bit challenge = 0;
  Bit guess = 0;
  bool cert_accepted = false;
};

struct GameOutcome {
  bool first_check = false;  // step-4 / chk-stage flag where applicable
  bool won = false;
};

template <typename Outcome, typename Fn>
std::vector<Outcome> parallel_trials(std::uint64_t trials, std::uint64_t seed, const Fn& fn) {
  std::vector<Outcome> outcomes(trials);
  const unsigned workers =
      std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                      static_cast<unsigned>(std::min<std::uint64_t>(trials, 16))));
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::uint64_t t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        Rng rng(derive_seed(seed, t));
        outcomes[t] = fn(t, rng);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return outcomes;
}

double three_sigma_rate_bound(double reference, std::uint64_t trials) {
  return 3.0 * std::sqrt(reference * (1.0 - reference) / static_cast<double>(trials));
}

std::string flags_string(const std::vector<CdOutcome>& outcomes,
                         bool (*pick)(const CdOutcome&)) {
  std::string s;
  s.reserve(outcomes.size());
  for (const auto& o : outcomes) s.push_back(pick(o) ? '1' : '0');
  return s;
}

Report interval_json(const WilsonInterval& interval) {
  return Report{{"low", interval.low}, {"high", interval.high}};
}

}  // namespace

std::string game_name(GameKind kind) {
  switch (kind) {
    case GameKind::PkeCd: return "pke-cd";
    case GameKind::ReusableSkeCd: return "reusable-ske-cd";
    case GameKind::CcPkeCd: return "cc-pke-cd";
    case GameKind::CutAndChoose: return "cut-and-choose";
    case GameKind::AmplifiedHardcore: return "amplified-hardcore";
  }
  throw std::logic_error("unreachable");
}

GameKind parse_game(const std::string& name) {
  for (GameKind kind : {GameKind::PkeCd, GameKind::ReusableSkeCd, GameKind::CcPkeCd,
                        GameKind::CutAndChoose, GameKind::AmplifiedHardcore})
    if (game_name(kind) == name) return kind;
  throw std::invalid_argument("unknown scheme: " + name);
}

std::vector<std::string> strategies_for(GameKind kind) {
  switch (kind) {
    case GameKind::PkeCd:
    case GameKind::ReusableSkeCd:
      return {"honest-deleter", "keep-and-decrypt"};
    case GameKind::CcPkeCd:
      return {"honest-deleter", "decrypt-without-deleting"};
    case GameKind::CutAndChoose:
      return {"delete-everything", "keep-preimages", "table-reading"};
    case GameKind::AmplifiedHardcore:
      return {"measure-preimage", "hadamard-all", "table-reading"};
  }
  throw std::logic_error("unreachable");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const auto known = strategies_for(scheme);
  if (std::find(known.begin(), known.end(), strategy) == known.end())
    throw std::invalid_argument("unknown strategy '" + strategy + "' for " + game_name(scheme));
  switch (scheme) {
    case GameKind::PkeCd:
    case GameKind::ReusableSkeCd:
      if (message_bits < 1 || message_bits > 8)
        throw std::invalid_argument("message bits out of range [1, 8]");
      break;
    case GameKind::CcPkeCd: {
      cccd::Params params;
      params.n = n;
      params.preimage_bits = preimage_bits;
      params.lambda_bits = lambda_bits;
      params.message_bits = message_bits;
      params.base = base;
      params.validate();
      break;
    }
    case GameKind::CutAndChoose:
    case GameKind::AmplifiedHardcore:
      if (n < 1 || 4 * n > 64) throw std::invalid_argument("n out of range");
      if (preimage_bits < ntcf::kMinPreimageBits || preimage_bits > ntcf::kMaxPreimageBits)
        throw std::invalid_argument("preimage bits out of range");
      break;
  }
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double z = 1.959963984540054;  // 97.5th percentile of the normal
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  WilsonInterval interval{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) interval.low = 0.0;
  if (successes == trials) interval.high = 1.0;
  return interval;
}

namespace {

Report config_echo(const ExperimentConfig& config) {
  return Report{{"scheme", game_name(config.scheme)},
                {"strategy", config.strategy},
                {"n", config.n},
                {"preimage_bits", config.preimage_bits},
                {"message_bits", config.message_bits},
                {"lambda_bits", config.lambda_bits},
                {"base", config.base == primitives::PkeSchemeId::RegevRef ? "regev-ref"
                                                                          : "test-stub"},
                {"trials", config.trials},
                {"seed", config.seed}};
}

std::unique_ptr<pkecd::PkeCdStrategy> make_pkecd_strategy(const std::string& name,
                                                          const pkecd::Params& params) {
  if (name == "honest-deleter") return std::make_unique<strategies::HonestDeleterPke>();
  if (name == "keep-and-decrypt") return std::make_unique<strategies::KeepAndDecryptPke>(params);
  throw std::invalid_argument("unknown strategy: " + name);
}

std::unique_ptr<pkecd::SkecdStrategy> make_skecd_strategy(const std::string& name) {
  if (name == "honest-deleter") return std::make_unique<strategies::HonestDeleterSkecd>();
  if (name == "keep-and-decrypt") return std::make_unique<strategies::KeepAndDecryptSkecd>();
  throw std::invalid_argument("unknown strategy: " + name);
}

std::unique_ptr<cccd::CcStrategy> make_cc_strategy(const std::string& name) {
  if (name == "honest-deleter") return std::make_unique<strategies::HonestDeleterCc>();
  if (name == "decrypt-without-deleting")
    return std::make_unique<strategies::DecryptWithoutDeletingCc>();
  throw std::invalid_argument("unknown strategy: " + name);
}

std::unique_ptr<cccd::CutChooseStrategy> make_cut_choose_strategy(const std::string& name) {
  if (name == "delete-everything") return std::make_unique<strategies::DeleteEverything>();
  if (name == "keep-preimages") return std::make_unique<strategies::KeepPreimages>();
  if (name == "table-reading") return std::make_unique<strategies::TableReadingCheater>();
  throw std::invalid_argument("unknown strategy: " + name);
}

ntcf::HardcoreStrategy make_hardcore_strategy(const std::string& name) {
  if (name == "measure-preimage") return strategies::measure_preimage_strategy();
  if (name == "hadamard-all") return strategies::hadamard_all_strategy();
  if (name == "table-reading") return strategies::table_reading_hardcore_strategy();
  throw std::invalid_argument("unknown strategy: " + name);
}

Report summarize_cd_game(const ExperimentConfig& config, const std::vector<CdOutcome>& outcomes,
                         double acceptance_reference) {
  const std::uint64_t trials = outcomes.size();
  std::uint64_t n0 = 0, n1 = 0, ones_given_0 = 0, ones_given_1 = 0, accepted = 0, correct = 0,
                accepted_and_correct = 0;
  for (const auto& o : outcomes) {
    if (o.challenge == 0) {
      ++n0;
      ones_given_0 += o.guess;
    } else {
      ++n1;
      ones_given_1 += o.guess;
    }
    accepted += o.cert_accepted ? 1 : 0;
    const bool right = o.guess == o.challenge;
    correct += right ? 1 : 0;
    accepted_and_correct += (o.cert_accepted && right) ? 1 : 0;
  }
  const double p0 = n0 ? static_cast<double>(ones_given_0) / static_cast<double>(n0) : 0.0;
  const double p1 = n1 ? static_cast<double>(ones_given_1) / static_cast<double>(n1) : 0.0;
  const double advantage = std::abs(p1 - p0);
  const double advantage_sigma =
      0.5 * std::sqrt((n0 ? 1.0 / static_cast<double>(n0) : 0.0) +
                      (n1 ? 1.0 / static_cast<double>(n1) : 0.0));
  const double acceptance_rate = static_cast<double>(accepted) / static_cast<double>(trials);

  Report aggregate{
      {"trials", trials},
      {"trials_b0", n0},
      {"trials_b1", n1},
      {"guess_one_rate_b0", p0},
      {"guess_one_rate_b1", p1},
      {"advantage", advantage},
      {"advantage_3sigma", 3.0 * advantage_sigma},
      {"cert_accepted", accepted},
      {"cert_acceptance_rate", acceptance_rate},
      {"cert_acceptance_wilson", interval_json(wilson_interval(accepted, trials))},
      {"correct_guesses", correct},
  };

  Report analytic{
      {"cert_acceptance_reference", acceptance_reference},
      {"honest_advantage_reference", 0.0},
  };

  Report verdicts = Report::object();
  bool all = true;
  if (config.strategy == "honest-deleter") {
    const bool adv_ok = advantage <= 3.0 * advantage_sigma;
    verdicts["advantage_within_3sigma_of_0"] = adv_ok;
    all = all && adv_ok;
    const bool accept_ok =
        wilson_interval(accepted, trials).contains(acceptance_reference) ||
        std::abs(acceptance_rate - acceptance_reference) <=
            three_sigma_rate_bound(acceptance_reference, trials);
    verdicts["acceptance_matches_reference"] = accept_ok;
    all = all && accept_ok;
  } else {
    const bool accept_ok = std::abs(acceptance_rate - acceptance_reference) <=
                           three_sigma_rate_bound(acceptance_reference, trials) +
                               1.0 / static_cast<double>(trials);
    verdicts["acceptance_within_3sigma_of_reference"] = accept_ok;
    all = all && accept_ok;
    const bool conditional_ok = accepted == 0 || accepted_and_correct == accepted;
    verdicts["wins_whenever_accepted"] = conditional_ok;
    all = all && conditional_ok;
  }

  Report report;
  report["format"] = "cdsim-experiment-report/1";
  report["config"] = config_echo(config);
  report["per_trial"] =
      Report{{"challenge_bits", flags_string(outcomes, [](const CdOutcome& o) {
                return o.challenge != 0;
              })},
             {"guesses", flags_string(outcomes, [](const CdOutcome& o) { return o.guess != 0; })},
             {"cert_accepted",
              flags_string(outcomes, [](const CdOutcome& o) { return o.cert_accepted; })}};
  report["aggregate"] = std::move(aggregate);
  report["analytic"] = std::move(analytic);
  report["verdicts"] = std::move(verdicts);
  report["all_passed"] = all;
  return report;
}

Report summarize_flag_game(const ExperimentConfig& config,
                           const std::vector<GameOutcome>& outcomes, double first_reference,
                           double win_reference, const char* first_name, bool wins_track_first) {
  const std::uint64_t trials = outcomes.size();
  std::uint64_t first = 0, wins = 0, wins_with_first = 0;
  std::string first_flags, win_flags;
  first_flags.reserve(trials);
  win_flags.reserve(trials);
  for (const auto& o : outcomes) {
    first += o.first_check ? 1 : 0;
    wins += o.won ? 1 : 0;
    wins_with_first += (o.won && o.first_check) ? 1 : 0;
    first_flags.push_back(o.first_check ? '1' : '0');
    win_flags.push_back(o.won ? '1' : '0');
  }
  const double first_rate = static_cast<double>(first) / static_cast<double>(trials);
  const double win_rate = static_cast<double>(wins) / static_cast<double>(trials);

  Report report;
  report["format"] = "cdsim-experiment-report/1";
  report["config"] = config_echo(config);
  report["per_trial"] = Report{{first_name, first_flags}, {"wins", win_flags}};
  report["aggregate"] = Report{
      {"trials", trials},
      {std::string(first_name) + "_count", first},
      {std::string(first_name) + "_rate", first_rate},
      {std::string(first_name) + "_wilson", interval_json(wilson_interval(first, trials))},
      {"wins", wins},
      {"win_rate", win_rate},
      {"win_wilson", interval_json(wilson_interval(wins, trials))},
  };
  report["analytic"] = Report{{std::string(first_name) + "_reference", first_reference},
                              {"win_reference", win_reference}};

  Report verdicts = Report::object();
  bool all = true;
  const bool first_ok = std::abs(first_rate - first_reference) <=
                        three_sigma_rate_bound(first_reference, trials) +
                            (first_reference == 0.0 || first_reference == 1.0
                                 ? 0.0
                                 : 1.0 / static_cast<double>(trials));
  verdicts[std::string(first_name) + "_within_3sigma_of_reference"] = first_ok;
  all = all && first_ok;
  const double win_bound = static_cast<double>(trials) * win_reference +
                           3.0 * std::sqrt(static_cast<double>(trials) * win_reference *
                                           (1.0 - win_reference));
  const bool win_ok = win_reference >= 1.0 ? wins == trials
                                           : static_cast<double>(wins) <= std::max(win_bound, 0.0) +
                                                 (win_reference > 0.0 ? 1.0 : 0.0);
  verdicts["wins_consistent_with_reference"] = win_ok;
  all = all && win_ok;
  if (wins_track_first) {
    const bool track_ok = wins == wins_with_first;
    verdicts["wins_only_with_" + std::string(first_name)] = track_ok;
    all = all && track_ok;
  }
  report["verdicts"] = std::move(verdicts);
  report["all_passed"] = all;
  return report;
}

}  // namespace

Report run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.scheme) {
    case GameKind::PkeCd: {
      pkecd::Params params;
      params.message_bits = config.message_bits;
      params.base = config.base;
      auto outcomes = parallel_trials<CdOutcome>(
          config.trials, config.seed, [&](std::uint64_t t, Rng& rng) {
            auto strategy = make_pkecd_strategy(config.strategy, params);
            const Bit b = static_cast<Bit>(t & 1);
            const auto result = pkecd::run_pkecd_experiment(params, *strategy, b, rng);
            return CdOutcome{b, result.bit_guess, result.cert_accepted};
          });
      const double accept_ref =
          config.strategy == "honest-deleter"
              ? 1.0
              : std::exp2(-static_cast<double>(params.kappa() - params.message_bits));
      return summarize_cd_game(config, outcomes, accept_ref);
    }
    case GameKind::ReusableSkeCd: {
      pkecd::SkecdParams params;
      params.message_bits = config.message_bits;
      auto outcomes = parallel_trials<CdOutcome>(
          config.trials, config.seed, [&](std::uint64_t t, Rng& rng) {
            auto strategy = make_skecd_strategy(config.strategy);
            const Bit b = static_cast<Bit>(t & 1);
            const auto result = pkecd::run_skecd_experiment(params, *strategy, b, rng);
            return CdOutcome{b, result.bit_guess, result.cert_accepted};
          });
      const double accept_ref =
          config.strategy == "honest-deleter"
              ? 1.0
              : std::exp2(-static_cast<double>(params.kappa() - params.message_bits));
      return summarize_cd_game(config, outcomes, accept_ref);
    }
    case GameKind::CcPkeCd: {
      cccd::Params params;
      params.n = config.n;
      params.preimage_bits = config.preimage_bits;
      params.lambda_bits = config.lambda_bits;
      params.message_bits = config.message_bits;
      params.base = config.base;
      auto outcomes = parallel_trials<CdOutcome>(
          config.trials, config.seed, [&](std::uint64_t t, Rng& rng) {
            auto strategy = make_cc_strategy(config.strategy);
            const Bit b = static_cast<Bit>(t & 1);
            const auto result = cccd::run_cc_experiment(params, *strategy, b, rng);
            return CdOutcome{b, result.bit_guess, result.cert_accepted};
          });
      const double per_instance_accept = 1.0 - std::exp2(-config.preimage_bits);
      const double accept_ref =
          config.strategy == "honest-deleter"
              ? std::pow(per_instance_accept, 2.0 * config.n)
              : std::exp2(-2.0 * config.n);
      return summarize_cd_game(config, outcomes, accept_ref);
    }
    case GameKind::CutAndChoose: {
      auto outcomes = parallel_trials<GameOutcome>(
          config.trials, config.seed, [&](std::uint64_t, Rng& rng) {
            auto strategy = make_cut_choose_strategy(config.strategy);
            const auto trace =
                cccd::run_cut_and_choose_experiment(config.n, config.preimage_bits, *strategy, rng);
            return GameOutcome{trace.certificate_check_passed, trace.won};
          });
      double step4_ref = 1.0, win_ref = 1.0;
      bool wins_track = false;
      if (config.strategy == "delete-everything") {
        step4_ref = std::pow(1.0 - std::exp2(-config.preimage_bits), 2.0 * config.n);
        // Guessing 2n preimages of (1 + w) bits each.
        win_ref = step4_ref * std::exp2(-(config.preimage_bits + 1.0) * 2.0 * config.n);
      } else if (config.strategy == "keep-preimages") {
        step4_ref = std::exp2(-2.0 * config.n);
        win_ref = step4_ref;
        wins_track = true;
      }
      return summarize_flag_game(config, outcomes, step4_ref, win_ref, "certificate_check",
                                 wins_track);
    }
    case GameKind::AmplifiedHardcore: {
      auto outcomes = parallel_trials<GameOutcome>(
          config.trials, config.seed, [&](std::uint64_t, Rng& rng) {
            const auto strategy = make_hardcore_strategy(config.strategy);
            const auto trace =
                ntcf::run_amplified_hardcore_game(config.n, config.preimage_bits, strategy, rng);
            bool chk_all = true;
            for (const auto& grade : trace.grades) chk_all = chk_all && grade.chk_passed;
            return GameOutcome{chk_all, trace.won};
          });
      double win_ref = 1.0;
      if (config.strategy == "measure-preimage") win_ref = std::exp2(-config.n);
      if (config.strategy == "hadamard-all")
        win_ref = std::exp2(-static_cast<double>(config.preimage_bits) * config.n);
      const double chk_ref = config.strategy == "hadamard-all"
                                 ? std::exp2(-static_cast<double>(config.preimage_bits) * config.n)
                                 : 1.0;
      return summarize_flag_game(config, outcomes, chk_ref, win_ref, "preimage_check", false);
    }
  }
  throw std::logic_error("unreachable");
}

std::string render_report(const Report& report) { return report.dump(2) + "\n"; }

}  // namespace cdsim::experiment
