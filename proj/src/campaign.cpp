#include "bglasso/campaign.hpp"

#include "bglasso/dataset.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace bglasso {

namespace fs = std::filesystem;

namespace {

std::string_view to_string(MccFormula f) { return f == MccFormula::standard ? "standard" : "as_printed"; }

nlohmann::json clamps_json(const Clamps& c) {
  return {{"lambda_min", c.lambda_min}, {"lambda_max", c.lambda_max}, {"tau_min", c.tau_min},
          {"tau_max", c.tau_max},       {"omega_floor", c.omega_floor}};
}

nlohmann::json audit_json(const ViolationAudit& a) {
  nlohmann::json stages = nlohmann::json::object();
  for (const auto& [stage, count] : a.by_column_stage) stages[stage] = count;
  return {{"updates_total", a.updates_total},
          {"violations", a.violations},
          {"violation_ratio_percent", 100.0 * a.ratio()},
          {"by_column_stage", stages}};
}

nlohmann::json scores_json(const StructureScores& s) {
  return {{"tp", s.tp},
          {"tn", s.tn},
          {"fp", s.fp},
          {"fn", s.fn},
          {"specificity", s.specificity},
          {"sensitivity", s.sensitivity},
          {"mcc", s.mcc}};
}

void ensure_dir(const std::string& dir) {
  if (dir.empty()) throw ConfigError("an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir + "': " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void write_json(const fs::path& path, const nlohmann::json& j) { open_out(path) << j.dump(2) << '\n'; }

nlohmann::json manifest(std::string_view command, nlohmann::json config, const std::vector<std::string>& argv,
                        double seconds) {
  return {{"tool", "bglasso"},
          {"version", BGLASSO_VERSION},
          {"command", command},
          {"argv", argv},
          {"config", std::move(config)},
          {"timing", {{"wall_seconds", seconds}}}};
}

std::string scenario_prefix(const ScenarioConfig& c) {
  std::ostringstream s;
  s << to_string(c.design) << ',' << c.p << ',' << c.n << ',' << to_string(c.sampler);
  return s.str();
}

double elapsed_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

void ScenarioConfig::validate() const {
  if (n < 1) throw ConfigError("n must be positive");
  if (replications < 1) throw ConfigError("replications must be positive");
  if (!(threshold > 0.0)) throw ConfigError("threshold must be positive");
  try {
    chain().validate();
    build_design(GraphDesign{design, p});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const NotPositiveDefinite& e) {
    throw ConfigError(e.what());
  }
}

ChainConfig ScenarioConfig::chain() const {
  ChainConfig c;
  c.kind = sampler;
  c.burn_in = burn_in;
  c.draws = draws;
  c.thin = thin;
  c.r = r;
  c.s = s;
  c.clamps = clamps;
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"design", to_string(design)},
          {"p", p},
          {"n", n},
          {"sampler", to_string(sampler)},
          {"burnin", burn_in},
          {"draws", draws},
          {"replications", replications},
          {"r", r},
          {"s", s},
          {"threshold", threshold},
          {"absolute_value", use_absolute_value},
          {"mcc", to_string(mcc)},
          {"seed", seed},
          {"thin", thin},
          {"clamps", clamps_json(clamps)},
          {"out", out_dir}};
}

std::uint64_t data_stream_id(int replication) { return static_cast<std::uint64_t>(replication) << 4; }

std::uint64_t chain_stream_id(int replication, SamplerKind sampler) {
  return data_stream_id(replication) | (sampler == SamplerKind::bgs ? 1u : 2u);
}

ReplicationResult run_replication(const ScenarioConfig& config, const TrueModel& model, int replication) {
  ReplicationResult result;
  result.replication = replication;
  try {
    RngStream data_rng(config.seed, data_stream_id(replication));
    const Matrix y = simulate_data(model, config.n, data_rng);
    RngStream chain_rng(config.seed, chain_stream_id(replication, config.sampler));
    ChainOutput chain = run_chain(scatter_matrix(y), static_cast<int>(config.n), config.chain(), chain_rng);
    result.audit = chain.audit;
    result.seconds = chain.seconds;
    result.stein = stein_loss(chain.posterior_mean, model.omega_true);
    result.frobenius = frobenius_loss(chain.posterior_mean, model.omega_true);
    result.scores = structure_scores(
        adjacency_from_estimate(chain.posterior_mean, config.threshold, config.use_absolute_value),
        model.adjacency_true, config.mcc);
    result.omega_hat = std::move(chain.posterior_mean);
    result.ok = true;
  } catch (const std::exception& e) {
    result.ok = false;
    result.error = e.what();
  }
  return result;
}

std::vector<ReplicationResult> run_replications(const ScenarioConfig& config, Execution execution) {
  const TrueModel model = build_design(GraphDesign{config.design, config.p});
  const int reps = config.replications;
  std::vector<ReplicationResult> results(static_cast<std::size_t>(reps));
  if (execution == Execution::serial) {
    for (int rep = 0; rep < reps; ++rep) results[rep] = run_replication(config, model, rep);
    return results;
  }
#pragma omp parallel for schedule(dynamic)
  for (int rep = 0; rep < reps; ++rep) results[rep] = run_replication(config, model, rep);
  return results;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

double bootstrap_median_se(std::span<const double> values, int resamples, RngStream& rng) {
  if (values.empty()) throw std::invalid_argument("bootstrap of an empty set");
  if (resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");
  const std::size_t m = values.size();
  std::vector<double> medians(static_cast<std::size_t>(resamples));
  std::vector<double> draw(m);
  for (auto& med : medians) {
    for (auto& x : draw) {
      const auto idx = std::min(m - 1, static_cast<std::size_t>(rng.uniform() * static_cast<double>(m)));
      x = values[idx];
    }
    med = median(draw);
  }
  double mean = 0.0;
  for (double v : medians) mean += v;
  mean /= static_cast<double>(resamples);
  double ss = 0.0;
  for (double v : medians) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(resamples - 1));
}

CampaignAggregate aggregate(const ScenarioConfig& config, std::span<const ReplicationResult> results) {
  CampaignAggregate agg;
  std::vector<double> stein;
  std::vector<double> frob;
  std::uint64_t tp = 0, tn = 0, fp = 0, fn = 0;
  for (const auto& r : results) {
    if (!r.ok) continue;
    ++agg.replications_ok;
    stein.push_back(r.stein);
    frob.push_back(r.frobenius);
    tp += r.scores.tp;
    tn += r.scores.tn;
    fp += r.scores.fp;
    fn += r.scores.fn;
    agg.audit.merge(r.audit);
  }
  agg.pooled = StructureScores::from_counts(tp, tn, fp, fn, config.mcc);
  if (agg.replications_ok > 0) {
    // Dedicated stream so the standard errors do not depend on chain draws.
    RngStream boot(config.seed, 0xB0075ull << 40);
    agg.median_stein = median(stein);
    agg.median_frobenius = median(frob);
    if (agg.replications_ok > 1) {
      agg.se_stein = bootstrap_median_se(stein, kBootstrapResamples, boot);
      agg.se_frobenius = bootstrap_median_se(frob, kBootstrapResamples, boot);
    }
  }
  return agg;
}

namespace {

void write_audit_csv(const fs::path& path, const ScenarioConfig& config,
                     std::span<const ReplicationResult> results) {
  auto out = open_out(path);
  out << kAuditCsvHeader << '\n';
  for (const auto& r : results) {
    if (!r.ok) continue;
    out << scenario_prefix(config) << ',' << r.replication << ',' << r.audit.updates_total << ','
        << r.audit.violations << ',' << r.audit.by_column_stage.at(std::string(kStageAfterBeta)) << ','
        << r.audit.by_column_stage.at(std::string(kStageAfterGamma)) << ',' << r.audit.ratio() << '\n';
  }
}

nlohmann::json failures_json(const ScenarioConfig& config, std::span<const ReplicationResult> results) {
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& r : results) {
    if (r.ok) continue;
    failures.push_back({{"replication", r.replication},
                        {"seed", config.seed},
                        {"data_stream", data_stream_id(r.replication)},
                        {"chain_stream", chain_stream_id(r.replication, config.sampler)},
                        {"error", r.error}});
  }
  return failures;
}

bool all_ok(std::span<const ReplicationResult> results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.ok; });
}

}  // namespace

int cmd_simulate(const ScenarioConfig& config, const std::vector<std::string>& argv) {
  config.validate();
  ensure_dir(config.out_dir);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ReplicationResult> results = run_replications(config, Execution::parallel);
  const fs::path dir(config.out_dir);

  {
    auto out = open_out(dir / "replications.csv");
    out << kReplicationsCsvHeader << '\n';
    for (const auto& r : results) {
      if (!r.ok) continue;
      out << scenario_prefix(config) << ',' << r.replication << ',' << r.stein << ',' << r.frobenius << ','
          << r.scores.tp << ',' << r.scores.tn << ',' << r.scores.fp << ',' << r.scores.fn << ','
          << r.scores.specificity << ',' << r.scores.sensitivity << ',' << r.scores.mcc << '\n';
    }
  }
  write_audit_csv(dir / "audit.csv", config, results);

  fs::create_directories(dir / "omega_hat");
  for (const auto& r : results) {
    if (!r.ok) continue;
    std::ostringstream name;
    name << "rep_" << std::setw(3) << std::setfill('0') << r.replication << ".csv";
    write_matrix_csv((dir / "omega_hat" / name.str()).string(), r.omega_hat->matrix());
  }

  const CampaignAggregate agg = aggregate(config, results);
  write_json(dir / "aggregate.json",
             {{"design", to_string(config.design)},
              {"p", config.p},
              {"n", config.n},
              {"sampler", to_string(config.sampler)},
              {"replications", config.replications},
              {"replications_ok", agg.replications_ok},
              {"stein", {{"median", agg.median_stein}, {"se", agg.se_stein}}},
              {"frobenius", {{"median", agg.median_frobenius}, {"se", agg.se_frobenius}}},
              {"structure", scores_json(agg.pooled)},
              {"audit", audit_json(agg.audit)},
              {"failures", failures_json(config, results)}});

  nlohmann::json per_rep = nlohmann::json::array();
  for (const auto& r : results) per_rep.push_back(r.seconds);
  auto m = manifest("simulate", config.to_json(), argv, elapsed_since(start));
  m["timing"]["replication_seconds"] = per_rep;
  write_json(dir / "manifest.json", m);
  return all_ok(results) ? 0 : 1;
}

int cmd_audit(const ScenarioConfig& config, const std::vector<std::string>& argv) {
  config.validate();
  ensure_dir(config.out_dir);
  const auto start = std::chrono::steady_clock::now();
  const std::vector<ReplicationResult> results = run_replications(config, Execution::parallel);
  const fs::path dir(config.out_dir);
  write_audit_csv(dir / "audit.csv", config, results);

  ViolationAudit total;
  for (const auto& r : results) {
    if (r.ok) total.merge(r.audit);
  }
  write_json(dir / "audit.json", {{"design", to_string(config.design)},
                                  {"p", config.p},
                                  {"n", config.n},
                                  {"sampler", to_string(config.sampler)},
                                  {"sweeps_per_replication", config.burn_in + config.draws},
                                  {"audit", audit_json(total)},
                                  {"failures", failures_json(config, results)}});
  write_json(dir / "manifest.json", manifest("audit", config.to_json(), argv, elapsed_since(start)));
  return all_ok(results) ? 0 : 1;
}

void FitConfig::validate() const {
  if (data_path.empty()) throw ConfigError("a data file is required (--data)");
  try {
    ChainConfig c;
    c.burn_in = burn_in;
    c.draws = draws;
    c.thin = thin;
    c.r = r;
    c.s = s;
    c.clamps = clamps;
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

nlohmann::json FitConfig::to_json() const {
  return {{"data", data_path},   {"standardize", standardize}, {"sampler", to_string(sampler)},
          {"burnin", burn_in},   {"draws", draws},             {"thin", thin},
          {"r", r},              {"s", s},                     {"seed", seed},
          {"clamps", clamps_json(clamps)}, {"save_draws", save_draws}, {"out", out_dir}};
}

int cmd_fit(const FitConfig& config, const std::vector<std::string>& argv) {
  config.validate();
  const Dataset data = ingest_csv(config.data_path, config.standardize);
  if (data.rows() < 2) throw ParseError("at least two observations are required, found " + std::to_string(data.rows()));
  if (data.cols() < 2) throw ParseError("at least two variables are required, found " + std::to_string(data.cols()));
  ensure_dir(config.out_dir);
  const auto start = std::chrono::steady_clock::now();

  ChainConfig chain;
  chain.kind = config.sampler;
  chain.burn_in = config.burn_in;
  chain.draws = config.draws;
  chain.thin = config.thin;
  chain.r = config.r;
  chain.s = config.s;
  chain.clamps = config.clamps;
  chain.store_draws = config.save_draws;

  RngStream rng(config.seed, chain_stream_id(0, config.sampler));
  const ChainOutput out = run_chain(scatter_matrix(data.values), static_cast<int>(data.rows()), chain, rng);
  const fs::path dir(config.out_dir);

  write_matrix_csv((dir / "omega_hat.csv").string(), out.posterior_mean.matrix());
  write_matrix_csv((dir / "omega_hat_unit_diag.csv").string(), unit_diag_scale(out.posterior_mean).matrix());
  if (config.save_draws) {
    // One retained draw per line: the upper triangle, row by row.
    auto f = open_out(dir / "draws.csv");
    for (const auto& d : out.draws) {
      bool first = true;
      for (Index i = 0; i < d.dim(); ++i) {
        for (Index j = i; j < d.dim(); ++j) {
          if (!first) f << ',';
          f << d(i, j);
          first = false;
        }
      }
      f << '\n';
    }
  }
  write_json(dir / "audit.json", {{"sampler", to_string(config.sampler)},
                                  {"n", data.rows()},
                                  {"p", data.cols()},
                                  {"draws_used", out.draws_used},
                                  {"audit", audit_json(out.audit)}});

  auto m = manifest("fit", config.to_json(), argv, elapsed_since(start));
  m["data"] = {{"rows", data.rows()}, {"cols", data.cols()}, {"column_labels", data.column_labels}};
  write_json(dir / "manifest.json", m);
  return 0;
}

}  // namespace bglasso
