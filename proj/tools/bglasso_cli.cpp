#include "bglasso/campaign.hpp"
#include "bglasso/dataset.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace bglasso;

namespace {

struct Options {
  std::string design = "ar1";
  std::string sampler = "hrs";
  ScenarioConfig scenario;
  FitConfig fit;
  bool mcc_as_printed = false;
};

void add_chain_flags(CLI::App* cmd, Options& o, int& burn_in, int& draws, int& thin, double& r, double& s,
                     std::uint64_t& seed) {
  cmd->add_option("--sampler", o.sampler, "bgs or hrs")->capture_default_str();
  cmd->add_option("--burnin", burn_in, "burn-in sweeps")->capture_default_str();
  cmd->add_option("--draws", draws, "post-burn-in sweeps")->capture_default_str();
  cmd->add_option("--thin", thin, "keep every k-th post-burn-in sweep")->capture_default_str();
  cmd->add_option("--r", r, "gamma hyperprior shape on lambda")->capture_default_str();
  cmd->add_option("--s", s, "gamma hyperprior rate on lambda")->capture_default_str();
  cmd->add_option("--seed", seed, "master seed")->capture_default_str();
}

void add_scenario_flags(CLI::App* cmd, Options& o) {
  auto& c = o.scenario;
  cmd->add_option("--design", o.design, "ar1, ar2, block, star, circle or full")->capture_default_str();
  cmd->add_option("--p", c.p, "dimension")->capture_default_str();
  cmd->add_option("--n", c.n, "sample size")->capture_default_str();
  cmd->add_option("--reps", c.replications, "replications")->capture_default_str();
  cmd->add_option("--threshold", c.threshold, "edge threshold on |omega_ij|")->capture_default_str();
  cmd->add_flag("--mcc-as-printed", o.mcc_as_printed, "use the alternative MCC denominator");
  cmd->add_option("--out", c.out_dir, "output directory")->required();
  add_chain_flags(cmd, o, c.burn_in, c.draws, c.thin, c.r, c.s, c.seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian adaptive graphical lasso samplers (BGS and HRS)"};
  app.set_version_flag("--version", BGLASSO_VERSION);
  app.require_subcommand(1);

  Options o;
  auto* simulate = app.add_subcommand("simulate", "replicated simulation study for one design and sampler");
  add_scenario_flags(simulate, o);
  auto* audit = app.add_subcommand("audit", "positive-definiteness violation counts only");
  add_scenario_flags(audit, o);

  auto* fit = app.add_subcommand("fit", "posterior mean of the precision matrix for a CSV data set");
  fit->add_option("--data", o.fit.data_path, "CSV file, one observation per row")->required();
  fit->add_flag("--standardize", o.fit.standardize, "centre and scale each column");
  fit->add_flag("--save-draws", o.fit.save_draws, "write every retained draw");
  fit->add_option("--out", o.fit.out_dir, "output directory")->required();
  add_chain_flags(fit, o, o.fit.burn_in, o.fit.draws, o.fit.thin, o.fit.r, o.fit.s, o.fit.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const std::vector<std::string> args(argv, argv + argc);
  try {
    if (fit->parsed()) {
      o.fit.sampler = parse_sampler_kind(o.sampler);
      return cmd_fit(o.fit, args);
    }
    o.scenario.design = parse_design_kind(o.design);
    o.scenario.sampler = parse_sampler_kind(o.sampler);
    o.scenario.mcc = o.mcc_as_printed ? MccFormula::as_printed : MccFormula::standard;
    return simulate->parsed() ? cmd_simulate(o.scenario, args) : cmd_audit(o.scenario, args);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
