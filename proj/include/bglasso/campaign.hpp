#pragma once

// Simulation campaigns and real-data fits: the orchestration behind the
// `simulate`, `audit` and `fit` commands, including every file they write.

#include "bglasso/designs.hpp"
#include "bglasso/metrics.hpp"
#include "bglasso/sampler.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bglasso {

/// Invalid user configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScenarioConfig {
  DesignKind design = DesignKind::ar1;
  Index p = 30;
  Index n = 50;
  SamplerKind sampler = SamplerKind::hrs;
  int burn_in = 5000;
  int draws = 10000;
  int replications = 50;
  double r = 1e-2;
  double s = 1e-6;
  double threshold = kEdgeThreshold;
  bool use_absolute_value = true;
  MccFormula mcc = MccFormula::standard;
  std::uint64_t seed = 20201001;
  int thin = 1;
  Clamps clamps;
  std::string out_dir;

  /// Throws ConfigError. Also rejects a (design, p) pair build_design refuses.
  void validate() const;
  ChainConfig chain() const;
  nlohmann::json to_json() const;
};

/// Stream ids are derived from the replication index only (data) or from the
/// replication and sampler (chain), so BGS and HRS campaigns with the same
/// seed see identical data sets.
std::uint64_t data_stream_id(int replication);
std::uint64_t chain_stream_id(int replication, SamplerKind sampler);

struct ReplicationResult {
  int replication = 0;
  bool ok = false;
  std::string error;
  double stein = 0.0;
  double frobenius = 0.0;
  StructureScores scores;
  ViolationAudit audit;
  std::optional<SymMatrix> omega_hat;
  double seconds = 0.0;
};

enum class Execution { serial, parallel };

/// Builds the design, simulates data, runs the chain and scores the
/// posterior mean. Errors are captured in the result, never thrown.
ReplicationResult run_replication(const ScenarioConfig& config, const TrueModel& model, int replication);

/// All replications in index order. Execution::parallel spreads them over
/// an OpenMP worker pool; results are identical to Execution::serial.
std::vector<ReplicationResult> run_replications(const ScenarioConfig& config,
                                                Execution execution = Execution::parallel);

double median(std::vector<double> values);
/// Standard deviation of the median over `resamples` bootstrap resamples.
double bootstrap_median_se(std::span<const double> values, int resamples, RngStream& rng);

inline constexpr int kBootstrapResamples = 1000;

struct CampaignAggregate {
  int replications_ok = 0;
  double median_stein = 0.0;
  double se_stein = 0.0;
  double median_frobenius = 0.0;
  double se_frobenius = 0.0;
  StructureScores pooled;
  ViolationAudit audit;
};

/// Medians over successful replications with bootstrap standard errors, and
/// confusion counts summed across replications before computing criteria.
CampaignAggregate aggregate(const ScenarioConfig& config, std::span<const ReplicationResult> results);

inline constexpr const char* kReplicationsCsvHeader =
    "design,p,n,sampler,replication,stein,frobenius,tp,tn,fp,fn,specificity,sensitivity,mcc";
inline constexpr const char* kAuditCsvHeader =
    "design,p,n,sampler,replication,updates_total,violations,after_beta,after_gamma,violation_ratio";

/// `simulate`: per-replication CSV rows, posterior means, aggregate JSON,
/// the violation audit and a manifest. Returns 0 if every replication
/// succeeded and 1 otherwise.
int cmd_simulate(const ScenarioConfig& config, const std::vector<std::string>& argv = {});

/// `audit`: violation counting only.
int cmd_audit(const ScenarioConfig& config, const std::vector<std::string>& argv = {});

struct FitConfig {
  std::string data_path;
  bool standardize = false;
  SamplerKind sampler = SamplerKind::hrs;
  int burn_in = 5000;
  int draws = 10000;
  int thin = 1;
  double r = 1e-2;
  double s = 1e-6;
  std::uint64_t seed = 20201001;
  Clamps clamps;
  bool save_draws = false;
  std::string out_dir;

  void validate() const;
  nlohmann::json to_json() const;
};

/// `fit`: posterior mean of Ω for a user-supplied data set, its unit-diagonal
/// rescaling, audit counters and a manifest. Returns 0, or throws ParseError
/// / ConfigError / SamplerError.
int cmd_fit(const FitConfig& config, const std::vector<std::string>& argv = {});

}  // namespace bglasso
