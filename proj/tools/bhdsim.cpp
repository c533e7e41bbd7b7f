#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "bhd/errors.hpp"
#include "bhd/runner.hpp"
#include "bhd/scenario.hpp"

namespace {

struct Common {
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string format = "csv";
  unsigned workers = 0;
  std::vector<std::string> overrides;
  bool lenient = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("scenario", c.scenario, "scenario file (.scn)")->required()->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "directory for one CSV per trace plus report.txt");
  sub->add_option("--seed", c.seed, "master seed, overrides analysis.seed");
  sub->add_option("--format", c.format, "output format")->check(CLI::IsMember({"csv"}));
  sub->add_option("--workers", c.workers, "worker threads, 0 = all cores");
  sub->add_option("--set", c.overrides, "override section.key=value (repeatable)");
  sub->add_flag("--lenient", c.lenient, "warn about unknown keys instead of failing");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bhdsim: balanced homodyne detection noise simulator"};
  app.require_subcommand(1);

  Common c;
  std::vector<double> cycles;
  auto* budget = app.add_subcommand("budget", "analytic noise budget (stationary sources)");
  auto* simulate = app.add_subcommand("simulate", "time-domain Monte-Carlo run");
  auto* cmrr = app.add_subcommand("cmrr", "balance setting and common-mode rejection");
  auto* dither = app.add_subcommand("dither-scan", "residual scatter noise versus dither amplitude");
  auto* squeeze = app.add_subcommand("squeeze-predict", "predicted squeezing and anti-squeezing");
  auto* dust = app.add_subcommand("dust-monitor", "DC monitor record with dust transients");
  for (auto* s : {budget, simulate, cmrr, dither, squeeze, dust}) add_common(s, c);
  dither->add_option("--cycles", cycles, "dither amplitudes in fringe cycles")->required()->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    bhd::ParseOptions po;
    po.strict = !c.lenient;
    po.overrides = c.overrides;
    const bhd::ScenarioConfig cfg = bhd::parse_scenario(c.scenario, po);
    for (const auto& w : cfg.warnings) std::cerr << "warning: " << w << "\n";

    bhd::RunOptions ro;
    ro.workers = c.workers;
    ro.seed = c.seed;
    bhd::RunReport report;
    if (budget->parsed()) {
      report = bhd::run_budget(cfg, ro);
    } else if (simulate->parsed()) {
      report = bhd::run_monte_carlo(cfg, ro);
    } else if (cmrr->parsed()) {
      report = bhd::run_cmrr(cfg);
    } else if (dither->parsed()) {
      report = bhd::run_dither_scan(cfg, cycles, ro);
    } else if (squeeze->parsed()) {
      report = bhd::run_squeeze_predict(cfg);
    } else {
      report = bhd::run_dust_monitor(cfg, ro);
    }
    if (!c.out.empty()) report.write(c.out);
    std::cout << report.summary();
    return 0;
  } catch (const bhd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const bhd::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const bhd::InfeasibleError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const bhd::InsufficientDataError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
